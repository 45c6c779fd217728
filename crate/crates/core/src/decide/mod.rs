//! Decision procedures.

pub mod consistency;

use std::collections::VecDeque;
use std::ops::ControlFlow;

pub use consistency::{consistency_check, consistency_check_scheduled, failure_tree, ConsistencyStatus, ConsistencyTable};

use crate::construct::{diagonal, one_tolerant_power, power, quotient, set_structure, Partition, Relation};
use crate::dismantle::{dismantles_to, DismantlingTrace};
use crate::error::{Error, Result};
use crate::generate::link_structure;
use crate::limits::{checked_pow, Limits};
use crate::model::{is_homomorphism, Mapping, Structure};
use crate::solve::{HomSearch, SolveOutcome, Solver};

/// A homomorphism `U(A) → A`, if one exists. Its existence is equivalent to
/// `A` having tree duality.
pub fn tree_duality_hom(a: &Structure, limits: &Limits) -> Result<Option<Mapping>> {
    let u = set_structure(a, limits)?;
    HomSearch::new(&u, a, limits)?.first()
}

pub fn tree_duality_check(a: &Structure, limits: &Limits) -> Result<bool> {
    Ok(tree_duality_hom(a, limits)?.is_some())
}

/// A dismantling of `A²` onto its diagonal, if one exists.
pub fn square_dismantles_to_diagonal(a: &Structure, limits: &Limits) -> Result<Option<DismantlingTrace>> {
    let square = power(a, 2, limits)?;
    Ok(dismantles_to(&square, &diagonal(a.size(), 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoCoreVerdict {
    /// `A` is a core and its CSP is first-order definable.
    CoreWithFoCsp,
    /// `A²` does not dismantle to its diagonal.
    SquareNotDismantlable,
    /// Identifying `a` and `b` still maps to `A` via `witness`.
    NotCore { a: usize, b: usize, witness: Mapping },
}

/// Polynomial-time test for "A is a core with first-order definable CSP".
pub fn fo_core_check(a: &Structure, limits: &Limits) -> Result<FoCoreVerdict> {
    let solver = match Solver::new(a, limits) {
        Ok(s) => s,
        Err(Error::Contract(_)) => return Ok(FoCoreVerdict::SquareNotDismantlable),
        Err(e) => return Err(e),
    };
    for x in 0..a.size() {
        for y in x + 1..a.size() {
            let partition = Partition::identify(a.size(), x, y);
            let q = quotient(a, &partition)?;
            if consistency_check(&q, a)?.is_stable() {
                let witness = match solver.solve(&q)? {
                    SolveOutcome::Hom(h) => partition.quotient_map().then(&h)?,
                    _ => return Err(Error::contract("consistency check and solver disagree")),
                };
                return Ok(FoCoreVerdict::NotCore { a: x, b: y, witness });
            }
        }
    }
    Ok(FoCoreVerdict::CoreWithFoCsp)
}

/// First-order definability of the CSP of an arbitrary structure: its core
/// must have a square dismantling to the diagonal.
pub fn fo_check_general(a: &Structure, limits: &Limits) -> Result<bool> {
    let core = core_of(a, limits)?;
    Ok(square_dismantles_to_diagonal(&core.structure, limits)?.is_some())
}

/// A core of `A` given as an induced substructure.
#[derive(Debug, Clone)]
pub struct Core {
    pub structure: Structure,
    /// Homomorphism `A → core`, identity on the embedded copy.
    pub retraction: Mapping,
    /// Core element `i` is element `embedding[i]` of `A`.
    pub embedding: Mapping,
}

pub fn core_of(a: &Structure, limits: &Limits) -> Result<Core> {
    limits.check_size("core", a.size(), limits.max_size)?;
    let mut current = a.clone();
    let mut retraction = Mapping::identity(a.size());
    let mut original: Vec<usize> = (0..a.size()).collect();
    'shrink: loop {
        for v in 0..current.size() {
            let Some(f) = HomSearch::new(&current, &current, limits)?.avoid(v).first()? else {
                continue;
            };
            let g = idempotent_power(&f);
            let image = g.image();
            let (sub, index) = current.induced(&image)?;
            let onto = Mapping::new_unchecked(
                g.values().iter().map(|&y| index[y].expect("image is kept")).collect(),
                image.len(),
            );
            retraction = retraction.then(&onto)?;
            original = image.iter().map(|&y| original[y]).collect();
            current = sub;
            continue 'shrink;
        }
        break;
    }
    Ok(Core {
        embedding: Mapping::new_unchecked(original, a.size()),
        retraction,
        structure: current,
    })
}

fn idempotent_power(f: &Mapping) -> Mapping {
    let mut g = f.clone();
    while g.then(&g).expect("endomorphism") != g {
        g = g.then(f).expect("endomorphism");
    }
    g
}

/// Whether the identity is the only endomorphism.
pub fn is_rigid(a: &Structure, limits: &Limits) -> Result<bool> {
    limits.check_size("rigidity", a.size(), limits.max_size)?;
    let mut seen = 0;
    HomSearch::new(a, a, limits)?.for_each(|_| {
        seen += 1;
        if seen > 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(seen == 1)
}

/// A homomorphism from the one-tolerant power `¹Aⁿ` to `A`, if one exists.
pub fn one_tolerant_hom(a: &Structure, n: usize, limits: &Limits) -> Result<Option<Mapping>> {
    let tol = one_tolerant_power(a, n, limits)?;
    if let Ok(solver) = Solver::new(a, limits) {
        return Ok(match solver.solve(&tol)? {
            SolveOutcome::Hom(h) => Some(h),
            _ => None,
        });
    }
    if tree_duality_check(a, limits)? && !consistency_check(&tol, a)?.is_stable() {
        return Ok(None);
    }
    HomSearch::new(&tol, a, limits)?.first()
}

/// Whether `f: Aⁿ → A` satisfies the near-unanimity identities and is a
/// homomorphism.
pub fn is_near_unanimity(f: &Mapping, a: &Structure, n: usize, limits: &Limits) -> Result<bool> {
    if n < 3 {
        return Err(Error::contract("near-unanimity needs arity at least 3"));
    }
    let m = a.size();
    if checked_pow(m, n) != Some(f.source_size()) || f.target_size() != m {
        return Err(Error::contract("map is not an n-ary operation on A"));
    }
    for x in 0..m {
        for y in 0..m {
            for slot in 0..n {
                let code = (0..n).fold(0, |acc, k| acc * m + if k == slot { y } else { x });
                if f.apply(code) != x {
                    return Ok(false);
                }
            }
        }
    }
    is_homomorphism(f, &power(a, n, limits)?, a)
}

/// A path of homomorphisms `A² → A` from the first to the second projection,
/// consecutive maps forming a link.
pub fn projection_link_exists(a: &Structure, limits: &Limits) -> Result<Option<Vec<Mapping>>> {
    limits.check_size("projection link", a.size(), limits.link_max_size)?;
    let m = a.size();
    let square = power(a, 2, limits)?;
    let homs = HomSearch::new(&square, a, limits)?.collect()?;
    let pi1: Vec<usize> = (0..m * m).map(|p| p / m).collect();
    let pi2: Vec<usize> = (0..m * m).map(|p| p % m).collect();
    let find = |v: &[usize]| homs.iter().position(|h| h.values() == v).expect("projections are homomorphisms");
    let (start, goal) = (find(&pi1), find(&pi2));

    let l1 = link_structure(a.signature(), 1);
    let linked = |f: &Mapping, g: &Mapping| {
        square.relations().iter().zip(l1.relations()).zip(a.relations()).all(|((rs, patterns), ra)| {
            rs.iter().all(|x| {
                patterns.iter().all(|pat| {
                    let image: Vec<usize> =
                        x.iter().zip(pat).map(|(&p, &which)| if which == 0 { f.apply(p) } else { g.apply(p) }).collect();
                    ra.contains(&image)
                })
            })
        })
    };

    let mut parent = vec![usize::MAX; homs.len()];
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        if i == goal {
            break;
        }
        for j in 0..homs.len() {
            if parent[j] == usize::MAX && linked(&homs[i], &homs[j]) {
                parent[j] = i;
                queue.push_back(j);
            }
        }
    }
    if parent[goal] == usize::MAX {
        return Ok(None);
    }
    let mut path = vec![goal];
    while *path.last().unwrap() != start {
        path.push(parent[*path.last().unwrap()]);
    }
    Ok(Some(path.into_iter().rev().map(|i| homs[i].clone()).collect()))
}

/// Some two coordinates are forced equal and take at least two values.
pub fn is_biredundant(theta: &Relation) -> Result<bool> {
    let r = theta.arity();
    if r < 2 {
        return Err(Error::contract("biredundancy needs arity at least 2"));
    }
    for i in 0..r {
        let mut values: Vec<usize> = theta.tuples.iter().map(|t| t[i]).collect();
        values.sort_unstable();
        values.dedup();
        if values.len() < 2 {
            continue;
        }
        if (i + 1..r).any(|j| theta.tuples.iter().all(|t| t[i] == t[j])) {
            return Ok(true);
        }
    }
    Ok(false)
}
