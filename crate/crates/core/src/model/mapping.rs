use std::fmt;

use crate::error::{Error, Result};

/// A total function between two finite universes `0..source_size` and
/// `0..target_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    target_size: usize,
    values: Vec<usize>,
}

impl Mapping {
    pub fn new(values: Vec<usize>, target_size: usize) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= target_size) {
            return Err(Error::contract(format!(
                "mapping value {v} out of range 0..{target_size}"
            )));
        }
        Ok(Mapping {
            target_size,
            values,
        })
    }

    pub(crate) fn new_unchecked(values: Vec<usize>, target_size: usize) -> Self {
        debug_assert!(values.iter().all(|&v| v < target_size));
        Mapping {
            target_size,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Mapping::new_unchecked((0..n).collect(), n)
    }

    pub fn constant(source_size: usize, value: usize, target_size: usize) -> Result<Self> {
        Mapping::new(vec![value; source_size], target_size)
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &Mapping) -> Result<Mapping> {
        if other.source_size() != self.target_size {
            return Err(Error::contract("composition of incompatible mappings"));
        }
        Ok(Mapping::new_unchecked(
            self.values.iter().map(|&v| other.values[v]).collect(),
            other.target_size,
        ))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        self.values.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    /// Sorted, duplicate-free image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.values.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

impl fmt::Display for Mapping {
    /// One `x -> f(x)` line per source element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, v) in self.values.iter().enumerate() {
            writeln!(f, "{x} -> {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checked() {
        assert!(Mapping::new(vec![0, 3], 3).is_err());
        let m = Mapping::new(vec![0, 2, 2], 3).unwrap();
        assert!(!m.is_surjective());
        assert!(!m.is_injective());
        assert_eq!(m.image(), vec![0, 2]);
    }

    #[test]
    fn composition_order() {
        let f = Mapping::new(vec![1, 0], 2).unwrap();
        let g = Mapping::new(vec![2, 5], 6).unwrap();
        assert_eq!(f.then(&g).unwrap().values(), &[5, 2]);
        assert!(g.then(&f).is_err());
    }
}
