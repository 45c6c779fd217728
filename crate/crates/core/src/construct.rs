//! Derived structures.
//!
//! Element encodings are fixed so that decoding is arithmetic:
//!
//! * product `A × B`: `(a, b)` at `a·|B| + b`;
//! * power `A^n`: the coordinate tuple read as a base-`|A|` numeral, first
//!   coordinate most significant (the same as iterated products);
//! * exponential `B^A`: the map `f` read as the base-`|B|` numeral
//!   `f(0) f(1) … f(|A|-1)`, `f(0)` most significant;
//! * subset structure `U(A)`: the non-empty subset with bitmask `m` at `m − 1`;
//! * quotients: blocks numbered by their smallest element, in increasing order.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::generate::link_structure;
use crate::limits::{checked_pow, Limits};
use crate::model::{Mapping, Signature, Structure, TupleSet};
use crate::solve::HomSearch;

pub fn product(a: &Structure, b: &Structure) -> Result<Structure> {
    a.require_same_signature(b)?;
    let nb = b.size();
    let size = a
        .size()
        .checked_mul(nb)
        .ok_or_else(|| Error::limit("product size overflows"))?;
    let relations = a
        .relations()
        .iter()
        .zip(b.relations())
        .map(|(ra, rb)| {
            let mut flat = Vec::with_capacity(ra.len() * rb.len() * ra.arity());
            for s in ra.iter() {
                for t in rb.iter() {
                    flat.extend(s.iter().zip(t).map(|(&x, &y)| x * nb + y));
                }
            }
            TupleSet::from_flat(ra.arity(), flat)
        })
        .collect();
    Structure::new(a.signature().clone(), size, relations)
}

/// Projections of `A × B` onto its two factors.
pub fn projections(a_size: usize, b_size: usize) -> (Mapping, Mapping) {
    let n = a_size * b_size;
    (
        Mapping::new_unchecked((0..n).map(|p| p / b_size).collect(), a_size),
        Mapping::new_unchecked((0..n).map(|p| p % b_size).collect(), b_size),
    )
}

pub fn power(a: &Structure, n: usize, limits: &Limits) -> Result<Structure> {
    if n == 0 {
        return Err(Error::contract("power exponent must be positive"));
    }
    limits.check_universe("power", checked_pow(a.size(), n))?;
    let mut acc = a.clone().without_labels();
    for _ in 1..n {
        acc = product(&acc, a)?;
    }
    Ok(acc)
}

/// Coordinates of element `x` of `A^n` where `|A| = base`.
pub fn decode_power(x: usize, base: usize, n: usize) -> Vec<usize> {
    let mut coords = vec![0; n];
    let mut rest = x;
    for c in coords.iter_mut().rev() {
        *c = rest % base;
        rest /= base;
    }
    coords
}

pub fn encode_power(coords: &[usize], base: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + c)
}

/// The diagonal `{(a, …, a)}` of `A^n`.
pub fn diagonal(base: usize, n: usize) -> Vec<usize> {
    (0..base).map(|a| encode_power(&vec![a; n], base)).collect()
}

/// An equivalence relation on `0..n`, stored as dense block ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Canonicalises arbitrary labels: blocks are renumbered in order of their
    /// smallest element.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let block = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition {
            block,
            blocks: ids.len(),
        }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            block: (0..n).collect(),
            blocks: n,
        }
    }

    /// Identifies exactly `x` and `y`.
    pub fn identify(n: usize, x: usize, y: usize) -> Self {
        let labels: Vec<usize> = (0..n).map(|z| if z == y { x } else { z }).collect();
        Partition::from_labels(&labels)
    }

    /// The kernel of `f`: `x ~ y` iff `f(x) = f(y)`.
    pub fn kernel(f: &Mapping) -> Self {
        Partition::from_labels(f.values())
    }

    /// Parses `0 1 | 2 | 3 4`; unlisted elements become singletons.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut labels: Vec<Option<usize>> = vec![None; n];
        for (k, part) in text.split('|').enumerate() {
            for tok in part.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let x: usize = tok
                    .parse()
                    .map_err(|_| Error::contract(format!("bad element {tok:?} in partition")))?;
                if x >= n {
                    return Err(Error::contract(format!("element {x} outside universe")));
                }
                if labels[x].replace(k).is_some() {
                    return Err(Error::contract(format!("element {x} listed twice")));
                }
            }
        }
        let labels: Vec<(bool, usize)> = labels
            .into_iter()
            .enumerate()
            .map(|(x, l)| l.map_or((false, x), |k| (true, k)))
            .collect();
        Ok(Partition::from_labels(&labels))
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn members(&self, block: usize) -> Vec<usize> {
        (0..self.block.len()).filter(|&x| self.block[x] == block).collect()
    }

    pub fn quotient_map(&self) -> Mapping {
        Mapping::new_unchecked(self.block.clone(), self.blocks)
    }
}

pub fn quotient(a: &Structure, p: &Partition) -> Result<Structure> {
    if p.len() != a.size() {
        return Err(Error::contract("partition does not cover the universe"));
    }
    a.image_under(&p.quotient_map())
}

/// `¹A^n`: the power `A^n` plus every tuple respected by at least `n − 1`
/// coordinate projections.
pub fn one_tolerant_power(a: &Structure, n: usize, limits: &Limits) -> Result<Structure> {
    if n < 2 {
        return Err(Error::contract("one-tolerant power needs n ≥ 2"));
    }
    let size = limits.check_universe("one-tolerant power", checked_pow(a.size(), n))?;
    let base = a.size();
    let mut relations = Vec::with_capacity(a.relations().len());
    for rel in a.relations() {
        let r = rel.arity();
        let all_rows = checked_pow(base, r).ok_or_else(|| Error::limit("arity too large"))?;
        let any_row: Vec<Vec<usize>> = (0..all_rows).map(|c| decode_power(c, base, r)).collect();
        let good_rows: Vec<Vec<usize>> = rel.iter().map(<[usize]>::to_vec).collect();
        let mut flat = Vec::new();
        if good_rows.is_empty() {
            relations.push(TupleSet::empty(r));
            continue;
        }
        // Coordinate `free` may be any r-tuple; all others are tuples of R.
        for free in 0..n {
            let mut choice = vec![0usize; n];
            'outer: loop {
                let rows: Vec<&Vec<usize>> = (0..n)
                    .map(|k| if k == free { &any_row[choice[k]] } else { &good_rows[choice[k]] })
                    .collect();
                for pos in 0..r {
                    flat.push(rows.iter().fold(0, |acc, row| acc * base + row[pos]));
                }
                for k in (0..n).rev() {
                    let limit = if k == free { any_row.len() } else { good_rows.len() };
                    choice[k] += 1;
                    if choice[k] < limit {
                        continue 'outer;
                    }
                    choice[k] = 0;
                }
                break;
            }
        }
        relations.push(TupleSet::from_flat(r, flat));
    }
    Structure::new(a.signature().clone(), size, relations)
}

/// The exponential structure `B^A` and a decoder from its elements to maps.
pub struct Exponential {
    pub structure: Structure,
    pub base: usize,
    pub exponent: usize,
}

impl Exponential {
    /// The map `A → B` encoded by element `x`.
    pub fn decode(&self, x: usize) -> Mapping {
        Mapping::new_unchecked(decode_power(x, self.base, self.exponent), self.base)
    }

    pub fn encode(&self, f: &Mapping) -> usize {
        encode_power(f.values(), self.base)
    }
}

/// `B^A`: all maps `A → B`; `(f_1, …, f_r) ∈ R` iff for every
/// `(x_1, …, x_r) ∈ R(A)`, `(f_1(x_1), …, f_r(x_r)) ∈ R(B)`.
pub fn exponential(b: &Structure, a: &Structure, limits: &Limits) -> Result<Exponential> {
    a.require_same_signature(b)?;
    let size = limits.check_universe("exponential", checked_pow(b.size(), a.size()))?;
    let na = a.size();
    let mut relations = Vec::with_capacity(a.relations().len());
    for (sym, (ra, rb)) in a.relations().iter().zip(b.relations()).enumerate() {
        // Tuples of maps are exactly the homomorphisms from r disjoint copies
        // of A's universe, linked by the tuples of R(A), into R(B).
        let r = ra.arity();
        let sig = Signature::new([(a.signature().symbols()[sym].name.clone(), r)])?;
        let copies = Structure::new(
            sig.clone(),
            r * na,
            vec![TupleSet::from_flat(
                r,
                ra.iter().flat_map(|t| t.iter().enumerate().map(|(k, &x)| k * na + x)).collect(),
            )],
        )?;
        let target = Structure::new(sig, b.size(), vec![rb.clone()])?;
        let mut flat = Vec::new();
        HomSearch::new(&copies, &target, limits)?.for_each(|values| {
            for k in 0..r {
                flat.push(encode_power(&values[k * na..(k + 1) * na], b.size()));
            }
            std::ops::ControlFlow::Continue(())
        })?;
        relations.push(TupleSet::from_flat(r, flat));
    }
    Ok(Exponential {
        structure: Structure::new(a.signature().clone(), size, relations)?,
        base: b.size(),
        exponent: na,
    })
}

/// Subset encoding used by [`set_structure`].
pub fn subset_index(mask: u64) -> usize {
    debug_assert!(mask != 0);
    mask as usize - 1
}

pub fn subset_members(index: usize) -> Vec<usize> {
    let mask = index as u64 + 1;
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `U(A)`: non-empty subsets of `A`; `(X_1, …, X_r)` is a tuple iff every
/// `x_j ∈ X_j` extends to a tuple of `R(A)` inside `X_1 × … × X_r`.
///
/// These tuples are exactly the coordinatewise unions of non-empty sets of
/// tuples of `R(A)`, which is how they are generated.
pub fn set_structure(a: &Structure, limits: &Limits) -> Result<Structure> {
    if a.size() >= 63 {
        return Err(Error::limit("subset structure of more than 62 elements"));
    }
    let size = limits.check_universe("subset structure", Some((1usize << a.size()) - 1))?;
    let mut relations = Vec::with_capacity(a.relations().len());
    for rel in a.relations() {
        let r = rel.arity();
        let generators: Vec<Vec<u64>> = rel.iter().map(|t| t.iter().map(|&x| 1u64 << x).collect()).collect();
        let mut seen: HashSet<Vec<u64>> = generators.iter().cloned().collect();
        let mut frontier: Vec<Vec<u64>> = seen.iter().cloned().collect();
        while let Some(cur) = frontier.pop() {
            for g in &generators {
                let next: Vec<u64> = cur.iter().zip(g).map(|(x, y)| x | y).collect();
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    frontier.push(next);
                }
            }
        }
        let flat = seen.into_iter().flat_map(|t| t.into_iter().map(subset_index)).collect();
        relations.push(TupleSet::from_flat(r, flat));
    }
    Structure::new(a.signature().clone(), size, relations)
}

/// The embedding `a ↦ {a}` of `A` into `U(A)`.
pub fn singleton_embedding(size: usize) -> Mapping {
    Mapping::new_unchecked((0..size).map(|a| subset_index(1u64 << a)).collect(), (1usize << size) - 1)
}

/// `L_n × A²` modulo the relation identifying `(0, a, b) ~ (0, a, b')` and
/// `(n, a, b) ~ (n, a', b)`.
pub struct LinkProduct {
    pub structure: Structure,
    /// Quotient map from `L_n × A²`, where `(k, a, b)` sits at `k·|A|² + a·|A| + b`.
    pub quotient: Mapping,
    pub n: usize,
    pub template_size: usize,
}

impl LinkProduct {
    /// A representative `(k, a, b)` of each class.
    pub fn representative(&self, class: usize) -> (usize, usize, usize) {
        let m = self.template_size;
        let p = self
            .quotient
            .values()
            .iter()
            .position(|&c| c == class)
            .expect("every class is hit");
        (p / (m * m), p / m % m, p % m)
    }

    /// Classes whose fiber index is `k`.
    pub fn fiber(&self, k: usize) -> Vec<usize> {
        let m2 = self.template_size * self.template_size;
        let mut out: Vec<usize> = (k * m2..(k + 1) * m2).map(|p| self.quotient.apply(p)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn link_product(a: &Structure, n: usize, limits: &Limits) -> Result<LinkProduct> {
    if n == 0 {
        return Err(Error::contract("link product needs n ≥ 1"));
    }
    let m = a.size();
    let size = (n + 1)
        .checked_mul(m * m)
        .ok_or_else(|| Error::limit("link product size overflows"))?;
    limits.check_universe("link product", Some(size))?;
    let square = power(a, 2, limits)?;
    let full = product(&link_structure(a.signature(), n), &square)?;
    let labels: Vec<(usize, usize, usize)> = (0..size)
        .map(|p| {
            let (k, x, y) = (p / (m * m), p / m % m, p % m);
            match k {
                0 => (0, x, usize::MAX),
                k if k == n => (n, usize::MAX, y),
                _ => (k, x, y),
            }
        })
        .collect();
    let partition = Partition::from_labels(&labels);
    Ok(LinkProduct {
        structure: quotient(&full, &partition)?,
        quotient: partition.quotient_map(),
        n,
        template_size: m,
    })
}

/// A `k`-ary relation on `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub universe: usize,
    pub tuples: TupleSet,
}

impl Relation {
    pub fn new(universe: usize, tuples: TupleSet) -> Result<Self> {
        if tuples.max_entry().is_some_and(|m| m >= universe) {
            return Err(Error::contract("relation entry outside universe"));
        }
        Ok(Relation { universe, tuples })
    }

    pub fn arity(&self) -> usize {
        self.tuples.arity()
    }

    /// The structure on `0..universe` with this relation under symbol `name`.
    pub fn to_structure(&self, name: &str) -> Result<Structure> {
        let sig = Signature::new([(name, self.arity())])?;
        Structure::new(sig, self.universe, vec![self.tuples.clone()])
    }
}

/// `{(f(x_1), …, f(x_k)) : f: X → A a homomorphism}` for the marked elements
/// `x_1, …, x_k` of `X`.
pub fn pp_define(x: &Structure, marked: &[usize], a: &Structure, limits: &Limits) -> Result<Relation> {
    x.require_same_signature(a)?;
    if marked.is_empty() {
        return Err(Error::contract("at least one marked element is required"));
    }
    if let Some(&m) = marked.iter().find(|&&m| m >= x.size()) {
        return Err(Error::contract(format!("marked element {m} outside universe")));
    }
    let mut distinct = marked.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let combos = checked_pow(a.size(), distinct.len())
        .filter(|&c| c as u64 <= limits.node_budget)
        .ok_or_else(|| Error::limit("too many marked-tuple candidates"))?;
    let mut flat = Vec::new();
    for code in 0..combos {
        let values = decode_power(code, a.size(), distinct.len());
        let mut search = HomSearch::new(x, a, limits)?;
        for (&el, &v) in distinct.iter().zip(&values) {
            search = search.restrict(el, &[v]);
        }
        if search.first()?.is_some() {
            for m in marked {
                let i = distinct.binary_search(m).expect("present");
                flat.push(values[i]);
            }
        }
    }
    Relation::new(a.size(), TupleSet::from_flat(marked.len(), flat))
}
