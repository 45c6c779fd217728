//! Complete backtracking search for homomorphisms.
//!
//! Variables are the source elements in increasing order; values are tried
//! in increasing order among the current candidates. With pruning enabled the
//! candidate lists are filtered by the hyperedge consistency check before the
//! search and after every assignment. Pruning never discards a value used by
//! some homomorphism, so the first solution found is the same either way.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::decide::consistency::Propagator;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{Mapping, Structure};

pub struct HomSearch<'a> {
    src: &'a Structure,
    dst: &'a Structure,
    limits: &'a Limits,
    prune: bool,
    domains: Vec<FixedBitSet>,
}

impl<'a> HomSearch<'a> {
    pub fn new(src: &'a Structure, dst: &'a Structure, limits: &'a Limits) -> Result<Self> {
        src.require_same_signature(dst)?;
        let mut full = FixedBitSet::with_capacity(dst.size());
        full.insert_range(..);
        Ok(HomSearch {
            src,
            dst,
            limits,
            prune: true,
            domains: vec![full; src.size()],
        })
    }

    pub fn prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    /// Restricts the images of `x` to `allowed`.
    pub fn restrict(mut self, x: usize, allowed: &[usize]) -> Self {
        let mut d = FixedBitSet::with_capacity(self.dst.size());
        for &v in allowed {
            if v < self.dst.size() {
                d.insert(v);
            }
        }
        self.domains[x].intersect_with(&d);
        self
    }

    /// Forbids `value` as an image of every element.
    pub fn avoid(mut self, value: usize) -> Self {
        for d in &mut self.domains {
            d.set(value, false);
        }
        self
    }

    /// The lexicographically first homomorphism, if any.
    pub fn first(self) -> Result<Option<Mapping>> {
        let target = self.dst.size();
        let mut found = None;
        self.for_each(|values| {
            found = Some(Mapping::new_unchecked(values.to_vec(), target));
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub fn count(self) -> Result<u64> {
        let mut n = 0u64;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }

    pub fn collect(self) -> Result<Vec<Mapping>> {
        let target = self.dst.size();
        let mut all = Vec::new();
        self.for_each(|values| {
            all.push(Mapping::new_unchecked(values.to_vec(), target));
            ControlFlow::Continue(())
        })?;
        Ok(all)
    }

    /// Visits homomorphisms in lexicographic order until `visit` breaks.
    pub fn for_each(self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) -> Result<()> {
        let n = self.src.size();
        let mut checks: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
        for (sym, t) in self.src.hyperedges() {
            checks[*t.iter().max().unwrap()].push((sym, t));
        }
        let propagator = if self.prune {
            Some(Propagator::new(self.src, self.dst)?)
        } else {
            None
        };
        let mut domains = self.domains;
        if let Some(p) = &propagator {
            if !p.propagate(&mut domains, p.all_constraints(), &mut |_| 0, &mut |_| {}) {
                return Ok(());
            }
        }
        if domains.iter().any(FixedBitSet::is_clear) {
            return Ok(());
        }
        let mut run = Run {
            dst: self.dst,
            limits: self.limits,
            checks,
            propagator,
            assignment: vec![0; n],
            nodes: 0,
            image: Vec::new(),
            visit: &mut visit,
        };
        let _ = run.extend(0, &domains)?;
        Ok(())
    }
}

struct Run<'a, 'v> {
    dst: &'a Structure,
    limits: &'a Limits,
    checks: Vec<Vec<(usize, &'a [usize])>>,
    propagator: Option<Propagator<'a>>,
    assignment: Vec<usize>,
    nodes: u64,
    image: Vec<usize>,
    visit: &'v mut dyn FnMut(&[usize]) -> ControlFlow<()>,
}

impl Run<'_, '_> {
    fn extend(&mut self, v: usize, domains: &[FixedBitSet]) -> Result<ControlFlow<()>> {
        if v == self.assignment.len() {
            return Ok((self.visit)(&self.assignment));
        }
        for value in domains[v].ones() {
            self.nodes += 1;
            if self.nodes > self.limits.node_budget {
                return Err(Error::limit(format!(
                    "search visited more than {} nodes",
                    self.limits.node_budget
                )));
            }
            if self.nodes.is_multiple_of(1024) && self.limits.cancel.is_cancelled() {
                return Err(Error::Cancelled);
            }
            self.assignment[v] = value;
            if !self.tuples_hold(v) {
                continue;
            }
            let flow = match &self.propagator {
                Some(p) => {
                    let mut next = domains.to_vec();
                    next[v].clear();
                    next[v].insert(value);
                    let queue = p.constraints_through(v).to_vec();
                    if !p.propagate(&mut next, queue, &mut |_| 0, &mut |_| {}) {
                        continue;
                    }
                    self.extend(v + 1, &next)?
                }
                None => self.extend(v + 1, domains)?,
            };
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn tuples_hold(&mut self, v: usize) -> bool {
        for &(sym, t) in &self.checks[v] {
            self.image.clear();
            self.image.extend(t.iter().map(|&x| self.assignment[x]));
            if !self.dst.relation(sym).contains(&self.image) {
                return false;
            }
        }
        true
    }
}

/// Complete backtracking search for a homomorphism `b → a`.
pub fn brute_force_hom(b: &Structure, a: &Structure, prune: bool, limits: &Limits) -> Result<Option<Mapping>> {
    HomSearch::new(b, a, limits)?.prune(prune).first()
}

/// Exact number of homomorphisms `b → a` by exhaustive enumeration.
pub fn count_homs(b: &Structure, a: &Structure, limits: &Limits) -> Result<u64> {
    HomSearch::new(b, a, limits)?.prune(false).count()
}
