//! Homomorphism construction: the dismantling solver plus a backtracking
//! oracle.

mod search;

pub use search::{brute_force_hom, count_homs, HomSearch};

use crate::decide::square_dismantles_to_diagonal;
use crate::dismantle::{dismantle_second_coordinate, FiberDismantling};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{is_homomorphism, Mapping, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Some fiber kept more than one element.
    NoHomNotGraph,
    /// Every fiber kept one element but the resulting map is not a homomorphism.
    NoHomBadGraph(Mapping),
    Hom(Mapping),
}

impl SolveOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            SolveOutcome::NoHomNotGraph => "not-a-graph",
            SolveOutcome::NoHomBadGraph(_) => "bad-graph",
            SolveOutcome::Hom(_) => "hom",
        }
    }

    pub fn mapping(&self) -> Option<&Mapping> {
        match self {
            SolveOutcome::Hom(h) => Some(h),
            _ => None,
        }
    }
}

/// Solver for a fixed template whose square dismantles to its diagonal.
#[derive(Debug, Clone)]
pub struct Solver {
    template: Structure,
}

impl Solver {
    /// Fails with a contract error unless `A²` dismantles to its diagonal.
    pub fn new(a: &Structure, limits: &Limits) -> Result<Self> {
        if square_dismantles_to_diagonal(a, limits)?.is_none() {
            return Err(Error::contract("template square does not dismantle to its diagonal"));
        }
        Ok(Solver { template: a.clone() })
    }

    pub fn template(&self) -> &Structure {
        &self.template
    }

    pub fn solve(&self, b: &Structure) -> Result<SolveOutcome> {
        Ok(self.solve_traced(b)?.0)
    }

    /// Also returns the second-coordinate dismantling of `B × A`.
    pub fn solve_traced(&self, b: &Structure) -> Result<(SolveOutcome, FiberDismantling)> {
        let fd = dismantle_second_coordinate(b, &self.template)?;
        let outcome = match fd.as_function() {
            None => SolveOutcome::NoHomNotGraph,
            Some(values) => {
                let f = Mapping::new_unchecked(values, self.template.size());
                if is_homomorphism(&f, b, &self.template)? {
                    SolveOutcome::Hom(f)
                } else {
                    SolveOutcome::NoHomBadGraph(f)
                }
            }
        };
        Ok((outcome, fd))
    }
}

pub fn solve(b: &Structure, a: &Structure, limits: &Limits) -> Result<SolveOutcome> {
    Solver::new(a, limits)?.solve(b)
}
