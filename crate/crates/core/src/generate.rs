//! Instance generators.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Signature, Structure, TupleSet};

/// SplitMix64, the counter-based generator behind every seeded routine here.
///
/// The state advances by the golden-ratio increment `0x9E3779B97F4A7C15` and
/// each output is the standard 64-bit finaliser of the new state. Seed 0
/// yields `0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n` by multiply-shift; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Arcs `(i, j)` for all `i < j < n`.
pub fn transitive_tournament(n: usize) -> Structure {
    assert!(n >= 1, "transitive tournament needs at least one vertex");
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Structure::digraph(n, &arcs).expect("valid arcs")
}

/// The directed path with `k` arcs on `k + 1` vertices.
pub fn directed_path(k: usize) -> Structure {
    assert!(k >= 1, "directed path needs at least one arc");
    let arcs: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
    Structure::digraph(k + 1, &arcs).expect("valid arcs")
}

/// The `n`-link: universe `0..=n`, each relation the union of
/// `{j-1, j}^arity` over `j = 1..=n`.
pub fn link_structure(signature: &Signature, n: usize) -> Structure {
    let relations = signature
        .symbols()
        .iter()
        .map(|sym| {
            let mut flat = Vec::new();
            if n == 0 {
                flat.extend(std::iter::repeat_n(0, sym.arity));
            }
            for j in 1..=n {
                for bits in 0..(1usize << sym.arity) {
                    flat.extend((0..sym.arity).map(|p| j - 1 + ((bits >> p) & 1)));
                }
            }
            TupleSet::from_flat(sym.arity, flat)
        })
        .collect();
    Structure::new(signature.clone(), n + 1, relations).expect("valid link")
}

/// A literal over variables `1..=num_vars`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(v: i64) -> Option<Literal> {
        (v != 0).then(|| Literal {
            var: v.unsigned_abs() as usize,
            positive: v > 0,
        })
    }

    pub fn negation(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "-{}", self.var)
        }
    }
}

/// A 3-CNF formula whose clauses have three pairwise distinct literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::contract("a formula needs at least one clause"));
        }
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(Error::contract(format!("clause {i}: variable {} out of range", l.var)));
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::contract(format!("clause {i} repeats a literal")));
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Exhaustive satisfiability check over all `2^num_vars` assignments.
    pub fn brute_force_satisfiable(&self) -> bool {
        assert!(self.num_vars < 30, "too many variables for enumeration");
        (0u64..1 << self.num_vars).any(|bits| {
            let assignment: Vec<bool> = (0..self.num_vars).map(|v| bits >> v & 1 == 1).collect();
            self.eval(&assignment)
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// Parses `p cnf VARS CLAUSES` followed by clause lines of three non-zero
/// integers ending in `0`. Lines starting with `c` are comments.
pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| Error::parse(line_no, "bad variable count"))?;
                    let c = c.parse().map_err(|_| Error::parse(line_no, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(Error::parse(line_no, "expected `p cnf VARS CLAUSES`")),
            }
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(line_no, "clause before `p cnf` header"));
        }
        let nums: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(line_no, "bad integer in clause"))?;
        if nums.len() != 4 || nums[3] != 0 || nums[..3].contains(&0) {
            return Err(Error::parse(
                line_no,
                "a clause is three non-zero literals followed by 0",
            ));
        }
        let lits = [0, 1, 2].map(|k| Literal::from_dimacs(nums[k]).expect("non-zero"));
        clauses.push((line_no, lits));
    }
    let (num_vars, count) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    if clauses.len() != count {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    for (line_no, c) in &clauses {
        if let Some(l) = c.iter().find(|l| l.var > num_vars) {
            return Err(Error::parse(*line_no, format!("variable {} exceeds {num_vars}", l.var)));
        }
        if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
            return Err(Error::parse(*line_no, "clause repeats a literal"));
        }
    }
    Cnf3::new(num_vars, clauses.into_iter().map(|(_, c)| c).collect())
}

/// The digraph on `{0..n-1} × {1,2,3}` (vertex `3i + j - 1`) with an arc from
/// `(i, j)` to `(i', j')` iff `i < i'` and the two literals are not
/// complementary.
pub fn sat_reduction(formula: &Cnf3) -> Structure {
    let clauses = formula.clauses();
    let n = clauses.len();
    let mut arcs = Vec::new();
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..3 {
                for j2 in 0..3 {
                    if clauses[i][j] != clauses[i2][j2].negation() {
                        arcs.push((3 * i + j, 3 * i2 + j2));
                    }
                }
            }
        }
    }
    Structure::digraph(3 * n, &arcs).expect("valid arcs")
}

/// Each potential tuple of each symbol, in symbol order then lexicographic
/// tuple order, is kept iff the next [`SplitMix64::next_f64`] draw is below
/// that symbol's density.
pub fn random_structure(signature: &Signature, size: usize, density: &[f64], seed: u64) -> Result<Structure> {
    if size == 0 {
        return Err(Error::contract("universe must be non-empty"));
    }
    if density.len() != signature.len() {
        return Err(Error::contract("one density per symbol is required"));
    }
    if let Some(d) = density.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(Error::contract(format!("density {d} outside [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut relations = Vec::with_capacity(signature.len());
    for (sym, &p) in signature.symbols().iter().zip(density) {
        let total = crate::limits::checked_pow(size, sym.arity)
            .ok_or_else(|| Error::limit("too many candidate tuples"))?;
        let mut flat = Vec::new();
        let mut tuple = vec![0usize; sym.arity];
        for code in 0..total {
            let mut c = code;
            for slot in tuple.iter_mut().rev() {
                *slot = c % size;
                c /= size;
            }
            if rng.next_f64() < p {
                flat.extend_from_slice(&tuple);
            }
        }
        relations.push(TupleSet::from_flat(sym.arity, flat));
    }
    Structure::new(signature.clone(), size, relations)
}

/// A random 3-CNF with distinct literals in every clause.
pub fn random_cnf3(num_vars: usize, num_clauses: usize, seed: u64) -> Cnf3 {
    assert!(num_vars >= 2, "need two variables for three distinct literals");
    let mut rng = SplitMix64::new(seed);
    let mut clauses = Vec::with_capacity(num_clauses);
    while clauses.len() < num_clauses {
        let lits = [0, 1, 2].map(|_| Literal {
            var: rng.below(num_vars) + 1,
            positive: rng.below(2) == 1,
        });
        if lits[0] != lits[1] && lits[0] != lits[2] && lits[1] != lits[2] {
            clauses.push(lits);
        }
    }
    Cnf3::new(num_vars, clauses).expect("valid by construction")
}
