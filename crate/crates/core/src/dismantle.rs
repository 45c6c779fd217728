//! Domination and dismantling.
//!
//! `y` dominates `x` when every hyperedge through `x` stays a hyperedge after
//! replacing `x` by `y` at that one position. Removing a dominated element is
//! a retraction, so a dismantling sequence composes into a retraction onto
//! what remains.

use std::collections::{BTreeSet, HashMap};

use crate::construct::product;
use crate::error::{Error, Result};
use crate::model::{Mapping, Structure};

/// One removal: `removed` was dominated by `witness` among the elements still
/// present at that point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub removed: usize,
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DismantlingTrace {
    pub steps: Vec<Step>,
    /// Remaining elements, increasing.
    pub kept: Vec<usize>,
}

impl DismantlingTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-checks every step against `structure` from scratch.
    pub fn replay(&self, structure: &Structure) -> bool {
        let n = structure.size();
        let mut alive = vec![true; n];
        for step in &self.steps {
            if step.removed >= n || step.witness >= n || step.removed == step.witness {
                return false;
            }
            if !alive[step.removed] || !alive[step.witness] {
                return false;
            }
            if !dominates_among(structure, &alive, step.witness, step.removed) {
                return false;
            }
            alive[step.removed] = false;
        }
        let kept: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();
        kept == self.kept
    }

    /// The composed retraction as an endomorphism of the original structure:
    /// each removed element follows its witnesses until it reaches a kept one.
    pub fn retraction(&self, size: usize) -> Mapping {
        let mut image: Vec<usize> = (0..size).collect();
        for step in self.steps.iter().rev() {
            image[step.removed] = image[step.witness];
        }
        Mapping::new_unchecked(image, size)
    }

    /// `remove <e> by <w>` lines, in order.
    pub fn to_lines(&self, label: impl Fn(usize) -> String) -> String {
        self.steps
            .iter()
            .map(|s| format!("remove {} by {}\n", label(s.removed), label(s.witness)))
            .collect()
    }
}

/// Whether `y` dominates `x` in `structure`.
pub fn dominates(structure: &Structure, y: usize, x: usize) -> bool {
    let alive = vec![true; structure.size()];
    x != y && dominates_among(structure, &alive, y, x)
}

fn dominates_among(structure: &Structure, alive: &[bool], y: usize, x: usize) -> bool {
    let mut probe = Vec::new();
    for rel in structure.relations() {
        for t in rel.iter() {
            if !t.iter().all(|&z| alive[z]) {
                continue;
            }
            for (j, &z) in t.iter().enumerate() {
                if z == x {
                    probe.clear();
                    probe.extend_from_slice(t);
                    probe[j] = y;
                    if !rel.contains(&probe) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Incremental dismantling engine over a fixed structure.
///
/// Frozen elements are never removed. When classes are given, a witness must
/// share the class of the element it removes.
pub struct Dismantler<'a> {
    structure: &'a Structure,
    alive: Vec<bool>,
    frozen: Vec<bool>,
    classes: Option<Vec<usize>>,
    /// `occurrences[x]`: `(symbol, tuple index, position)` for each slot holding `x`.
    occurrences: Vec<Vec<(usize, usize, usize)>>,
    /// Elements that can fill the hole of `(symbol, position, tuple with a hole)`.
    fillers: HashMap<(usize, usize, Vec<usize>), Vec<usize>>,
    steps: Vec<Step>,
}

const HOLE: usize = usize::MAX;

impl<'a> Dismantler<'a> {
    pub fn new(structure: &'a Structure) -> Self {
        let n = structure.size();
        let mut occurrences = vec![Vec::new(); n];
        let mut fillers: HashMap<(usize, usize, Vec<usize>), Vec<usize>> = HashMap::new();
        for (s, rel) in structure.relations().iter().enumerate() {
            for (i, t) in rel.iter().enumerate() {
                for (j, &x) in t.iter().enumerate() {
                    occurrences[x].push((s, i, j));
                    let mut key = t.to_vec();
                    key[j] = HOLE;
                    fillers.entry((s, j, key)).or_default().push(x);
                }
            }
        }
        for list in fillers.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Dismantler {
            structure,
            alive: vec![true; n],
            frozen: vec![false; n],
            classes: None,
            occurrences,
            fillers,
            steps: Vec::new(),
        }
    }

    pub fn with_frozen(mut self, frozen: &[usize]) -> Self {
        for &x in frozen {
            self.frozen[x] = true;
        }
        self
    }

    pub fn with_classes(mut self, classes: Vec<usize>) -> Self {
        assert_eq!(classes.len(), self.structure.size());
        self.classes = Some(classes);
        self
    }

    pub fn is_alive(&self, x: usize) -> bool {
        self.alive[x]
    }

    pub fn is_frozen(&self, x: usize) -> bool {
        self.frozen[x]
    }

    fn live_tuple(&self, s: usize, i: usize) -> &[usize] {
        let t = self.structure.relation(s).get(i);
        t
    }

    fn tuple_alive(&self, t: &[usize]) -> bool {
        t.iter().all(|&z| self.alive[z])
    }

    fn same_class(&self, x: usize, y: usize) -> bool {
        self.classes.as_ref().is_none_or(|c| c[x] == c[y])
    }

    /// Elements currently dominating `x`, increasing.
    pub fn dominators(&self, x: usize) -> Vec<usize> {
        let mut candidates: Option<Vec<usize>> = None;
        let mut key = Vec::new();
        for &(s, i, j) in &self.occurrences[x] {
            let t = self.live_tuple(s, i);
            if !self.tuple_alive(t) {
                continue;
            }
            key.clear();
            key.extend_from_slice(t);
            key[j] = HOLE;
            let fill = &self.fillers[&(s, j, key.clone())];
            candidates = Some(match candidates {
                None => fill
                    .iter()
                    .copied()
                    .filter(|&y| y != x && self.alive[y] && self.same_class(x, y))
                    .collect(),
                Some(c) => c.into_iter().filter(|y| fill.binary_search(y).is_ok()).collect(),
            });
            if candidates.as_ref().is_some_and(Vec::is_empty) {
                return Vec::new();
            }
        }
        candidates.unwrap_or_else(|| {
            (0..self.structure.size())
                .filter(|&y| y != x && self.alive[y] && self.same_class(x, y))
                .collect()
        })
    }

    pub fn first_dominator(&self, x: usize) -> Option<usize> {
        self.dominators(x).first().copied()
    }

    /// Alive, non-frozen elements that are currently dominated.
    pub fn removable(&self) -> Vec<usize> {
        (0..self.structure.size())
            .filter(|&x| self.alive[x] && !self.frozen[x] && self.first_dominator(x).is_some())
            .collect()
    }

    /// Removes `x`, recording `witness`. Fails if the step is not valid now.
    pub fn remove(&mut self, x: usize, witness: usize) -> Result<()> {
        if !self.alive[x] || self.frozen[x] || !self.dominators(x).contains(&witness) {
            return Err(Error::contract(format!("{witness} does not dominate {x} here")));
        }
        self.alive[x] = false;
        self.steps.push(Step { removed: x, witness });
        Ok(())
    }

    /// Alive elements sharing a live hyperedge with `x`.
    fn neighbours(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(s, i, _) in &self.occurrences[x] {
            let t = self.live_tuple(s, i);
            if t.iter().all(|&z| z == x || self.alive[z]) {
                out.extend(t.iter().copied().filter(|&z| z != x));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Removes dominated elements until none is left, always taking the
    /// lowest-index removable element and its lowest-index witness.
    pub fn run_greedy(&mut self) {
        let mut pending: BTreeSet<usize> = (0..self.structure.size())
            .filter(|&x| self.alive[x] && !self.frozen[x])
            .collect();
        while let Some(x) = pending.pop_first() {
            let Some(w) = self.first_dominator(x) else {
                continue;
            };
            // Only elements that shared a hyperedge with `x` can become dominated.
            let neighbours = self.neighbours(x);
            self.alive[x] = false;
            self.steps.push(Step { removed: x, witness: w });
            pending.extend(neighbours.into_iter().filter(|&z| self.alive[z] && !self.frozen[z]));
        }
    }

    pub fn kept(&self) -> Vec<usize> {
        (0..self.structure.size()).filter(|&x| self.alive[x]).collect()
    }

    pub fn trace(&self) -> DismantlingTrace {
        DismantlingTrace {
            steps: self.steps.clone(),
            kept: self.kept(),
        }
    }
}

/// Greedily dismantles `structure`, never removing `frozen` elements.
pub fn dismantle_to_stable(structure: &Structure, frozen: &[usize]) -> DismantlingTrace {
    let mut d = Dismantler::new(structure).with_frozen(frozen);
    d.run_greedy();
    d.trace()
}

/// A dismantling of `structure` onto exactly `keep`, if one exists.
///
/// Greedy removal with `keep` frozen is complete: if any dismantling onto
/// `keep` exists, every maximal greedy run ends there.
pub fn dismantles_to(structure: &Structure, keep: &[usize]) -> Option<DismantlingTrace> {
    let mut target = keep.to_vec();
    target.sort_unstable();
    target.dedup();
    let trace = dismantle_to_stable(structure, &target);
    (trace.kept == target).then_some(trace)
}

/// Result of dismantling `B × A` in the second coordinate.
#[derive(Debug, Clone)]
pub struct FiberDismantling {
    /// The product `B × A`, element `(b, a)` at index `b·|A| + a`.
    pub product: Structure,
    pub trace: DismantlingTrace,
    pub template_size: usize,
}

impl FiberDismantling {
    /// Remaining pairs `(b, a)`.
    pub fn kept_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.template_size;
        self.trace.kept.iter().map(|&p| (p / m, p % m)).collect()
    }

    /// Remaining second coordinates per first coordinate.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.product.size() / self.template_size];
        for (b, a) in self.kept_pairs() {
            fibers[b].push(a);
        }
        fibers
    }

    /// The function `b ↦ a` when every fiber kept exactly one element.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        self.fibers()
            .into_iter()
            .map(|f| (f.len() == 1).then(|| f[0]))
            .collect()
    }

    /// The stable substructure of the product.
    pub fn stable(&self) -> Structure {
        self.product.induced(&self.trace.kept).expect("fibers are never emptied").0
    }
}

/// Builds `b × a` and removes elements dominated by another element of the
/// same `{b} × A` fiber until none is left.
pub fn dismantle_second_coordinate(b: &Structure, a: &Structure) -> Result<FiberDismantling> {
    let prod = product(b, a)?;
    let m = a.size();
    let classes = (0..prod.size()).map(|p| p / m).collect();
    let trace = {
        let mut d = Dismantler::new(&prod).with_classes(classes);
        d.run_greedy();
        d.trace()
    };
    Ok(FiberDismantling {
        product: prod,
        trace,
        template_size: m,
    })
}
