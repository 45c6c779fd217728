//! Line-oriented text format for structures.
//!
//! ```text
//! signature E/2 U/1
//! universe 4
//! labels a b c d        # optional
//! rel E
//! 0 1
//! 1 2
//! end
//! rel U
//! end
//! ```
//!
//! `#` starts a comment and blank lines are ignored. Every declared symbol
//! needs exactly one `rel … end` block. Serialization lists tuples in
//! lexicographic order, so `to_text(parse(t))` is the canonical form of `t`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{Signature, Structure, TupleSet};
use crate::error::{Error, Result};

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, sig_line) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input, expected `signature`"))?;
    let decl = keyword(sig_line, "signature")
        .ok_or_else(|| Error::parse(line, "expected `signature NAME/ARITY ...`"))?;
    let signature = Signature::parse_decl(decl).map_err(|e| Error::parse(line, strip(e)))?;

    let (line, uni_line) = lines
        .next()
        .ok_or_else(|| Error::parse(line, "missing `universe` line"))?;
    let size: usize = keyword(uni_line, "universe")
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| Error::parse(line, "expected `universe N`"))?;
    if size == 0 {
        return Err(Error::parse(line, "universe must be non-empty"));
    }

    let mut labels = None;
    let mut tuples: Vec<Option<Vec<usize>>> = vec![None; signature.len()];
    let mut current: Option<(usize, usize)> = None; // (symbol, line of `rel`)

    for (line, text) in lines {
        if let Some((sym, _)) = current {
            if text == "end" {
                current = None;
                continue;
            }
            let arity = signature.arity(sym);
            let mut entries = Vec::with_capacity(arity);
            for tok in text.split_whitespace() {
                let x: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad element {tok:?}")))?;
                if x >= size {
                    return Err(Error::parse(
                        line,
                        format!("element {x} outside universe of size {size}"),
                    ));
                }
                entries.push(x);
            }
            if entries.len() != arity {
                return Err(Error::parse(
                    line,
                    format!(
                        "tuple has {} entries, {} has arity {arity}",
                        entries.len(),
                        signature.symbols()[sym].name
                    ),
                ));
            }
            tuples[sym].as_mut().expect("opened").extend(entries);
        } else if let Some(rest) = keyword(text, "labels") {
            if labels.is_some() {
                return Err(Error::parse(line, "duplicate `labels` line"));
            }
            if tuples.iter().any(Option::is_some) {
                return Err(Error::parse(line, "`labels` must precede relation blocks"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.len() != size {
                return Err(Error::parse(
                    line,
                    format!("{} labels for a universe of size {size}", names.len()),
                ));
            }
            labels = Some(names);
        } else if let Some(name) = keyword(text, "rel") {
            let name = name.trim();
            let sym = signature
                .index_of(name)
                .ok_or_else(|| Error::parse(line, format!("undeclared symbol {name:?}")))?;
            if tuples[sym].is_some() {
                return Err(Error::parse(line, format!("duplicate block for symbol {name}")));
            }
            tuples[sym] = Some(Vec::new());
            current = Some((sym, line));
        } else {
            return Err(Error::parse(line, format!("unexpected line {text:?}")));
        }
    }

    if let Some((sym, line)) = current {
        return Err(Error::parse(
            line,
            format!("block for {} is missing `end`", signature.symbols()[sym].name),
        ));
    }
    let mut relations = Vec::with_capacity(signature.len());
    for (sym, flat) in tuples.into_iter().enumerate() {
        let flat = flat.ok_or_else(|| {
            Error::parse(
                0,
                format!("no `rel` block for symbol {}", signature.symbols()[sym].name),
            )
        })?;
        relations.push(TupleSet::from_flat(signature.arity(sym), flat));
    }
    let structure = Structure::new(signature, size, relations).map_err(|e| Error::parse(0, strip(e)))?;
    match labels {
        Some(l) => structure.with_labels(l),
        None => Ok(structure),
    }
}

/// Canonical text form.
pub fn to_text(s: &Structure) -> String {
    let mut out = String::new();
    write_structure(&mut out, s).expect("writing to a String");
    out
}

fn write_structure(out: &mut impl fmt::Write, s: &Structure) -> fmt::Result {
    writeln!(out, "signature {}", s.signature())?;
    writeln!(out, "universe {}", s.size())?;
    if let Some(labels) = s.labels() {
        writeln!(out, "labels {}", labels.join(" "))?;
    }
    for (sym, rel) in s.signature().symbols().iter().zip(s.relations()) {
        writeln!(out, "rel {}", sym.name)?;
        for t in rel.iter() {
            let mut line = String::new();
            for (i, x) in t.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                write!(line, "{x}")?;
            }
            writeln!(out, "{line}")?;
        }
        writeln!(out, "end")?;
    }
    Ok(())
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_structure(f, self)
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_structure(s)
    }
}

fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(kw)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest)
    } else {
        None
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Contract(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T3: &str = "signature E/2\nuniverse 3\nrel E\n0 1\n0 2\n1 2\nend\n";

    #[test]
    fn parses_t3() {
        let s = parse_structure(T3).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.tuple_count(), 3);
        assert_eq!(to_text(&s), T3);
    }

    #[test]
    fn comments_labels_and_canonical_order() {
        let text = "# a path\nsignature E/2 U/1\n\nuniverse 4\nlabels a b c d # names\nrel E\n2 3\n0 1\n1 2\n0 1\nend\nrel U\n0\nend\n";
        let s = parse_structure(text).unwrap();
        assert_eq!(s.label(3), "d");
        assert_eq!(
            to_text(&s),
            "signature E/2 U/1\nuniverse 4\nlabels a b c d\nrel E\n0 1\n1 2\n2 3\nend\nrel U\n0\nend\n"
        );
    }

    fn line_of(text: &str) -> usize {
        match parse_structure(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of("signature E/2\nuniverse 3\nrel E\n0 5\nend\n"), 4);
        assert_eq!(line_of("signature E/2\nuniverse 3\nrel E\n0 1 2\nend\n"), 4);
        assert_eq!(line_of("signature E/2 E/1\nuniverse 3\n"), 1);
        assert_eq!(line_of("signature E/2\nuniverse 0\n"), 2);
        assert_eq!(line_of("signature E/2\nuniverse 2\nrel E\nend\nrel E\nend\n"), 5);
        assert_eq!(line_of("signature E/2\nuniverse 2\nrel F\nend\n"), 3);
        assert_eq!(line_of("signature E/2\nuniverse 2\nrel E\n0 1\n"), 3);
        assert_eq!(line_of("signature E/2\nuniverse 2\nbogus\n"), 3);
        assert_eq!(line_of("signature E/2\nuniverse 2\nrel E\nx y\nend\n"), 4);
        assert!(parse_structure("signature E/2 U/1\nuniverse 2\nrel E\nend\n").is_err());
    }
}
