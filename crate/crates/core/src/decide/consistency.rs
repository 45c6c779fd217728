//! The hyperedge consistency check: per-element candidate lists pruned to the
//! greatest fixpoint of local support.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{Mapping, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyStatus {
    Stable,
    Failed,
}

/// Candidate images for every element of the source structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyTable {
    lists: Vec<FixedBitSet>,
    status: ConsistencyStatus,
}

impl ConsistencyTable {
    pub fn status(&self) -> ConsistencyStatus {
        self.status
    }

    pub fn is_stable(&self) -> bool {
        self.status == ConsistencyStatus::Stable
    }

    pub fn list(&self, b: usize) -> Vec<usize> {
        self.lists[b].ones().collect()
    }

    pub fn lists(&self) -> Vec<Vec<usize>> {
        (0..self.lists.len()).map(|b| self.list(b)).collect()
    }

    /// The final table read as a map into the subset structure: each element
    /// goes to the index of its list (bitmask minus one). `None` if failed or if
    /// the template is too large for a 64-bit mask.
    pub fn as_set_mapping(&self, template_size: usize) -> Option<Mapping> {
        if !self.is_stable() || template_size >= 64 {
            return None;
        }
        let values = self
            .lists
            .iter()
            .map(|l| l.ones().fold(0u64, |m, a| m | 1 << a) as usize - 1)
            .collect();
        Some(Mapping::new_unchecked(values, (1usize << template_size) - 1))
    }
}

/// A removal performed by the check: `value` left the list of `element`
/// because hyperedge `tuple` of `symbol` had no support at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Removal {
    pub element: usize,
    pub value: usize,
    pub symbol: usize,
    pub tuple: usize,
    pub position: usize,
}

/// Propagation engine shared by the standalone check and by search.
pub(crate) struct Propagator<'a> {
    src: &'a Structure,
    dst: &'a Structure,
    /// `support[sym][pos][value]`: indices of `dst` tuples with `value` at `pos`.
    support: Vec<Vec<Vec<Vec<usize>>>>,
    /// `occurrences[b]`: `(sym, tuple index)` of every `src` hyperedge through `b`.
    occurrences: Vec<Vec<(usize, usize)>>,
    constraint_ids: Vec<usize>,
}

impl<'a> Propagator<'a> {
    pub fn new(src: &'a Structure, dst: &'a Structure) -> Result<Self> {
        src.require_same_signature(dst)?;
        let support = dst
            .relations()
            .iter()
            .map(|rel| {
                let mut by_pos = vec![vec![Vec::new(); dst.size()]; rel.arity()];
                for (i, t) in rel.iter().enumerate() {
                    for (p, &v) in t.iter().enumerate() {
                        by_pos[p][v].push(i);
                    }
                }
                by_pos
            })
            .collect();
        let mut occurrences = vec![Vec::new(); src.size()];
        let mut constraint_ids = Vec::with_capacity(src.relations().len() + 1);
        let mut next = 0;
        for (s, rel) in src.relations().iter().enumerate() {
            constraint_ids.push(next);
            next += rel.len();
            for (i, t) in rel.iter().enumerate() {
                for &b in t {
                    if occurrences[b].last() != Some(&(s, i)) {
                        occurrences[b].push((s, i));
                    }
                }
            }
        }
        constraint_ids.push(next);
        Ok(Propagator {
            src,
            dst,
            support,
            occurrences,
            constraint_ids,
        })
    }

    pub fn full_lists(&self) -> Vec<FixedBitSet> {
        let mut full = FixedBitSet::with_capacity(self.dst.size());
        full.insert_range(..);
        vec![full; self.src.size()]
    }

    fn constraint_count(&self) -> usize {
        *self.constraint_ids.last().unwrap()
    }

    fn constraint_id(&self, sym: usize, tuple: usize) -> usize {
        self.constraint_ids[sym] + tuple
    }

    pub fn all_constraints(&self) -> Vec<(usize, usize)> {
        self.src
            .relations()
            .iter()
            .enumerate()
            .flat_map(|(s, rel)| (0..rel.len()).map(move |i| (s, i)))
            .collect()
    }

    pub fn constraints_through(&self, b: usize) -> &[(usize, usize)] {
        &self.occurrences[b]
    }

    /// Runs the check to its fixpoint starting from `queue`. `pick` chooses
    /// which queued hyperedge to inspect next (given the queue length).
    /// Returns `false` as soon as a list becomes empty.
    pub fn propagate(
        &self,
        lists: &mut [FixedBitSet],
        mut queue: Vec<(usize, usize)>,
        pick: &mut dyn FnMut(usize) -> usize,
        on_remove: &mut dyn FnMut(Removal),
    ) -> bool {
        let mut queued = FixedBitSet::with_capacity(self.constraint_count());
        queue.retain(|&(s, i)| !queued.put(self.constraint_id(s, i)));
        let mut changed = Vec::new();
        while !queue.is_empty() {
            let k = pick(queue.len());
            let (sym, ti) = queue.swap_remove(k);
            queued.set(self.constraint_id(sym, ti), false);
            changed.clear();
            if !self.revise(lists, sym, ti, &mut changed, on_remove) {
                return false;
            }
            for &b in &changed {
                for &(s, i) in &self.occurrences[b] {
                    if !queued.put(self.constraint_id(s, i)) {
                        queue.push((s, i));
                    }
                }
            }
        }
        true
    }

    /// Removes unsupported values from the lists of the entries of one
    /// hyperedge. Returns `false` if a list was emptied.
    fn revise(
        &self,
        lists: &mut [FixedBitSet],
        sym: usize,
        ti: usize,
        changed: &mut Vec<usize>,
        on_remove: &mut dyn FnMut(Removal),
    ) -> bool {
        let tuple = self.src.relation(sym).get(ti);
        let target = self.dst.relation(sym);
        for (j, &b) in tuple.iter().enumerate() {
            let candidates: Vec<usize> = lists[b].ones().collect();
            for a in candidates {
                let supported = self.support[sym][j][a].iter().any(|&si| {
                    let s = target.get(si);
                    tuple
                        .iter()
                        .zip(s)
                        .enumerate()
                        .all(|(i, (&bi, &ai))| i == j || lists[bi].contains(ai))
                });
                if !supported {
                    lists[b].set(a, false);
                    on_remove(Removal {
                        element: b,
                        value: a,
                        symbol: sym,
                        tuple: ti,
                        position: j,
                    });
                    if !changed.contains(&b) {
                        changed.push(b);
                    }
                    if lists[b].is_clear() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Runs the hyperedge consistency check of `b` against template `a`.
pub fn consistency_check(b: &Structure, a: &Structure) -> Result<ConsistencyTable> {
    consistency_check_scheduled(b, a, &mut |_| 0)
}

/// Same as [`consistency_check`] with a caller-chosen inspection order:
/// `pick(len)` returns the index of the next queued hyperedge to inspect.
pub fn consistency_check_scheduled(
    b: &Structure,
    a: &Structure,
    pick: &mut dyn FnMut(usize) -> usize,
) -> Result<ConsistencyTable> {
    let prop = Propagator::new(b, a)?;
    let mut lists = prop.full_lists();
    let ok = prop.propagate(&mut lists, prop.all_constraints(), &mut |n| pick(n).min(n - 1), &mut |_| {});
    Ok(ConsistencyTable {
        lists,
        status: if ok {
            ConsistencyStatus::Stable
        } else {
            ConsistencyStatus::Failed
        },
    })
}

/// When the check fails, builds a tree that maps to `b` but not to `a`,
/// together with that homomorphism into `b`. Returns `Ok(None)` when the
/// check succeeds. Trees can be exponentially large; exceeding
/// `max_elements` is a resource error.
pub fn failure_tree(b: &Structure, a: &Structure, max_elements: usize) -> Result<Option<(Structure, Mapping)>> {
    let prop = Propagator::new(b, a)?;
    let mut lists = prop.full_lists();
    let mut log = Vec::new();
    let ok = prop.propagate(&mut lists, prop.all_constraints(), &mut |_| 0, &mut |r| log.push(r));
    if ok {
        return Ok(None);
    }
    let failed = log.last().expect("a failure removes something").element;

    // removal time of (element, value)
    let mut removed_at = vec![vec![usize::MAX; a.size()]; b.size()];
    for (t, r) in log.iter().enumerate() {
        removed_at[r.element][r.value] = t;
    }

    let mut builder = TreeBuilder {
        b,
        a,
        log: &log,
        removed_at: &removed_at,
        tuples: vec![Vec::new(); b.signature().len()],
        image: Vec::new(),
        max_elements,
    };
    let root = builder.fresh(failed)?;
    for &t in &removed_at[failed][..a.size()] {
        builder.grow(t, root)?;
    }
    let size = builder.image.len();
    let tree = Structure::from_tuples(b.signature().clone(), size, builder.tuples)?;
    let hom = Mapping::new_unchecked(builder.image, b.size());
    Ok(Some((tree, hom)))
}

struct TreeBuilder<'a> {
    b: &'a Structure,
    a: &'a Structure,
    log: &'a [Removal],
    removed_at: &'a [Vec<usize>],
    tuples: Vec<Vec<Vec<usize>>>,
    image: Vec<usize>,
    max_elements: usize,
}

impl TreeBuilder<'_> {
    fn fresh(&mut self, image: usize) -> Result<usize> {
        if self.image.len() >= self.max_elements {
            return Err(Error::limit(format!(
                "failure tree exceeds {} elements",
                self.max_elements
            )));
        }
        self.image.push(image);
        Ok(self.image.len() - 1)
    }

    /// Attaches, at `root`, a copy of the tree explaining removal number `t`.
    fn grow(&mut self, t: usize, root: usize) -> Result<()> {
        let r = self.log[t];
        let tuple = self.b.relation(r.symbol).get(r.tuple).to_vec();
        let mut nodes = Vec::with_capacity(tuple.len());
        for (i, &bi) in tuple.iter().enumerate() {
            nodes.push(if i == r.position { root } else { self.fresh(bi)? });
        }
        self.tuples[r.symbol].push(nodes.clone());

        // Every template tuple with `value` at `position` lost support through
        // some other entry that had already been removed.
        let mut attached: Vec<(usize, usize)> = Vec::new();
        for s in self.a.relation(r.symbol).iter() {
            if s[r.position] != r.value {
                continue;
            }
            let (i, when) = tuple
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != r.position)
                .map(|(i, &bi)| (i, self.removed_at[bi][s[i]]))
                .find(|&(_, when)| when < t)
                .expect("unsupported tuple has an earlier removal");
            if !attached.contains(&(i, when)) {
                attached.push((i, when));
                self.grow(when, nodes[i])?;
            }
        }
        Ok(())
    }
}
