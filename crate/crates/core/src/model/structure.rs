use std::cmp::Ordering;

use super::{Mapping, Signature};
use crate::error::{Error, Result};

/// A duplicate-free set of equal-length tuples, stored flat and sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleSet {
    arity: usize,
    data: Vec<usize>,
}

impl TupleSet {
    pub fn empty(arity: usize) -> Self {
        assert!(arity > 0, "tuple arity must be positive");
        TupleSet {
            arity,
            data: Vec::new(),
        }
    }

    /// Builds a set from a flat buffer of `arity`-sized chunks, in any order and
    /// possibly with repeats.
    pub fn from_flat(arity: usize, flat: Vec<usize>) -> Self {
        assert!(arity > 0, "tuple arity must be positive");
        assert_eq!(flat.len() % arity, 0, "flat buffer is not a multiple of arity");
        let mut chunks: Vec<&[usize]> = flat.chunks_exact(arity).collect();
        chunks.sort_unstable();
        chunks.dedup();
        let data = chunks.concat();
        TupleSet { arity, data }
    }

    pub fn from_tuples<I, T>(arity: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut flat = Vec::new();
        for t in tuples {
            let t = t.as_ref();
            assert_eq!(t.len(), arity, "tuple length differs from arity");
            flat.extend_from_slice(t);
        }
        TupleSet::from_flat(arity, flat)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, usize> {
        self.data.chunks_exact(self.arity)
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.arity {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(tuple) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.position(tuple).is_some()
    }

    pub fn max_entry(&self) -> Option<usize> {
        self.data.iter().copied().max()
    }
}

/// A finite relational structure over the universe `0..size`.
///
/// Labels are presentation only: two structures are equal when their
/// signatures, sizes and tuple sets coincide.
#[derive(Debug, Clone)]
pub struct Structure {
    signature: Signature,
    size: usize,
    labels: Option<Vec<String>>,
    relations: Vec<TupleSet>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.size == other.size
            && self.relations == other.relations
    }
}

impl Eq for Structure {}

impl Structure {
    pub fn new(signature: Signature, size: usize, relations: Vec<TupleSet>) -> Result<Self> {
        if size == 0 {
            return Err(Error::contract("universe must be non-empty"));
        }
        if relations.len() != signature.len() {
            return Err(Error::contract(format!(
                "expected {} relations, got {}",
                signature.len(),
                relations.len()
            )));
        }
        for (sym, rel) in signature.symbols().iter().zip(&relations) {
            if rel.arity() != sym.arity {
                return Err(Error::contract(format!(
                    "relation {} has arity {}, expected {}",
                    sym.name,
                    rel.arity(),
                    sym.arity
                )));
            }
            if let Some(m) = rel.max_entry() {
                if m >= size {
                    return Err(Error::contract(format!(
                        "relation {} mentions element {m} outside universe of size {size}",
                        sym.name
                    )));
                }
            }
        }
        Ok(Structure {
            signature,
            size,
            labels: None,
            relations,
        })
    }

    /// Convenience constructor: one list of tuples per symbol.
    pub fn from_tuples(signature: Signature, size: usize, tuples: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if tuples.len() != signature.len() {
            return Err(Error::contract("one tuple list per symbol is required"));
        }
        let mut relations = Vec::with_capacity(tuples.len());
        for (sym, ts) in signature.symbols().iter().zip(tuples) {
            if let Some(t) = ts.iter().find(|t| t.len() != sym.arity) {
                return Err(Error::contract(format!(
                    "tuple {t:?} does not have arity {} of {}",
                    sym.arity, sym.name
                )));
            }
            relations.push(TupleSet::from_tuples(sym.arity, ts));
        }
        Structure::new(signature, size, relations)
    }

    /// A digraph on `0..size` with the given arcs.
    pub fn digraph(size: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let tuples = arcs.iter().map(|&(u, v)| vec![u, v]).collect();
        Structure::from_tuples(Signature::digraph(), size, vec![tuples])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::contract(format!(
                "{} labels for a universe of size {}",
                labels.len(),
                self.size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element: its label if present, else its index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn relation(&self, symbol: usize) -> &TupleSet {
        &self.relations[symbol]
    }

    pub fn relations(&self) -> &[TupleSet] {
        &self.relations
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(TupleSet::len).sum()
    }

    /// Iterates over all hyperedges as `(symbol, tuple)`.
    pub fn hyperedges(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(s, rel)| rel.iter().map(move |t| (s, t)))
    }

    pub(crate) fn require_same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::contract(format!(
                "signature mismatch: [{}] vs [{}]",
                self.signature, other.signature
            )));
        }
        Ok(())
    }

    /// `x` is a loop when `(x, …, x)` belongs to every relation.
    pub fn is_loop(&self, x: usize) -> bool {
        self.relations.iter().all(|rel| {
            let t = vec![x; rel.arity()];
            rel.contains(&t)
        })
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.is_loop(x)).collect()
    }

    /// Substructure induced by `keep`, re-indexed densely in increasing order.
    ///
    /// Returns the structure and the old-to-new index map.
    pub fn induced(&self, keep: &[usize]) -> Result<(Structure, Vec<Option<usize>>)> {
        let mut index = vec![None; self.size];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::contract("induced substructure of an empty set"));
        }
        if let Some(&x) = sorted.iter().find(|&&x| x >= self.size) {
            return Err(Error::contract(format!("element {x} outside universe")));
        }
        for (new, &old) in sorted.iter().enumerate() {
            index[old] = Some(new);
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let mut flat = Vec::new();
                for t in rel.iter() {
                    if t.iter().all(|&x| index[x].is_some()) {
                        flat.extend(t.iter().map(|&x| index[x].unwrap()));
                    }
                }
                TupleSet::from_flat(rel.arity(), flat)
            })
            .collect();
        let mut out = Structure::new(self.signature.clone(), sorted.len(), relations)?;
        if let Some(labels) = &self.labels {
            out.labels = Some(sorted.iter().map(|&x| labels[x].clone()).collect());
        }
        Ok((out, index))
    }

    /// Image of the structure under `f`: same universe as `f`'s target, one
    /// tuple per mapped tuple.
    pub fn image_under(&self, f: &Mapping) -> Result<Structure> {
        if f.source_size() != self.size {
            return Err(Error::contract("mapping source does not match structure"));
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let flat = rel.iter().flat_map(|t| t.iter().map(|&x| f.apply(x))).collect();
                TupleSet::from_flat(rel.arity(), flat)
            })
            .collect();
        Structure::new(self.signature.clone(), f.target_size(), relations)
    }

    /// The disjoint union of `self` with `extra` isolated elements.
    pub fn with_isolated(&self, extra: usize) -> Structure {
        let mut out = self.clone().without_labels();
        out.size += extra;
        out
    }

    /// Adds a tuple to relation `symbol`, returning the new structure.
    pub fn with_tuple(&self, symbol: usize, tuple: &[usize]) -> Result<Structure> {
        let rel = &self.relations[symbol];
        if tuple.len() != rel.arity() || tuple.iter().any(|&x| x >= self.size) {
            return Err(Error::contract(format!("bad tuple {tuple:?}")));
        }
        let mut relations = self.relations.clone();
        let mut flat = rel.data.clone();
        flat.extend_from_slice(tuple);
        relations[symbol] = TupleSet::from_flat(rel.arity(), flat);
        let mut out = Structure::new(self.signature.clone(), self.size, relations)?;
        out.labels = self.labels.clone();
        Ok(out)
    }
}

/// Whether `f` maps every tuple of `src` into the matching relation of `dst`.
pub fn is_homomorphism(f: &Mapping, src: &Structure, dst: &Structure) -> Result<bool> {
    src.require_same_signature(dst)?;
    if f.source_size() != src.size() || f.target_size() != dst.size() {
        return Err(Error::contract(format!(
            "mapping {}→{} does not fit structures of sizes {} and {}",
            f.source_size(),
            f.target_size(),
            src.size(),
            dst.size()
        )));
    }
    let mut image = Vec::new();
    for (s, rel) in src.relations().iter().enumerate() {
        let target = dst.relation(s);
        for t in rel.iter() {
            image.clear();
            image.extend(t.iter().map(|&x| f.apply(x)));
            if !target.contains(&image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
