use std::fmt;

use crate::error::{Error, Result};

/// A relation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered, non-empty vocabulary of relation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        if symbols.is_empty() {
            return Err(Error::contract("signature has no symbols"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.arity == 0 {
                return Err(Error::contract(format!("symbol {} has arity 0", s.name)));
            }
            if !is_identifier(&s.name) {
                return Err(Error::contract(format!("bad symbol name {:?}", s.name)));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::contract(format!("duplicate symbol {}", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    /// The vocabulary of directed graphs: one binary symbol `E`.
    pub fn digraph() -> Self {
        Signature::new([("E", 2)]).expect("valid")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Parses the `E/2 U/1` form used on the `signature` line.
    pub fn parse_decl(decl: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        for item in decl.split_whitespace() {
            let (name, arity) = item
                .split_once('/')
                .ok_or_else(|| Error::contract(format!("expected NAME/ARITY, got {item:?}")))?;
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::contract(format!("bad arity in {item:?}")))?;
            symbols.push((name.to_string(), arity));
        }
        Signature::new(symbols)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
