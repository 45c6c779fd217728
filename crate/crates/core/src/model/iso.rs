use super::{Mapping, Structure};
use crate::error::{Error, Result};

/// Brute-force isomorphism search, intended for small structures.
pub fn find_isomorphism(a: &Structure, b: &Structure, budget: u64) -> Result<Option<Mapping>> {
    find_isomorphism_colored(a, b, &vec![0; a.size()], &vec![0; b.size()], budget)
}

/// Isomorphism search where element `x` of `a` may only map to elements of
/// `b` with the same colour.
pub fn find_isomorphism_colored(
    a: &Structure,
    b: &Structure,
    colors_a: &[usize],
    colors_b: &[usize],
    budget: u64,
) -> Result<Option<Mapping>> {
    a.require_same_signature(b)?;
    if colors_a.len() != a.size() || colors_b.len() != b.size() {
        return Err(Error::contract("one colour per element is required"));
    }
    if a.size() != b.size()
        || a.relations().iter().zip(b.relations()).any(|(r, s)| r.len() != s.len())
    {
        return Ok(None);
    }
    let mut ca = colors_a.to_vec();
    let mut cb = colors_b.to_vec();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return Ok(None);
    }

    // Tuples are checked as soon as their largest element is assigned.
    let n = a.size();
    let mut checks: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
    for (sym, t) in a.hyperedges() {
        checks[*t.iter().max().unwrap()].push((sym, t));
    }
    let mut search = IsoSearch {
        a,
        b,
        colors_a,
        colors_b,
        checks,
        assignment: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        budget,
        image: Vec::new(),
    };
    if search.extend(0)? {
        Ok(Some(Mapping::new_unchecked(search.assignment, n)))
    } else {
        Ok(None)
    }
}

struct IsoSearch<'a> {
    a: &'a Structure,
    b: &'a Structure,
    colors_a: &'a [usize],
    colors_b: &'a [usize],
    checks: Vec<Vec<(usize, &'a [usize])>>,
    assignment: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    image: Vec<usize>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, v: usize) -> Result<bool> {
        if v == self.a.size() {
            return Ok(true);
        }
        for w in 0..self.b.size() {
            if self.used[w] || self.colors_a[v] != self.colors_b[w] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::limit("isomorphism search budget exhausted"));
            }
            self.assignment[v] = w;
            if self.consistent(v) {
                self.used[w] = true;
                if self.extend(v + 1)? {
                    return Ok(true);
                }
                self.used[w] = false;
            }
        }
        self.assignment[v] = usize::MAX;
        Ok(false)
    }

    fn consistent(&mut self, v: usize) -> bool {
        for &(sym, t) in &self.checks[v] {
            self.image.clear();
            self.image.extend(t.iter().map(|&x| self.assignment[x]));
            if !self.b.relation(sym).contains(&self.image) {
                return false;
            }
        }
        true
    }
}
