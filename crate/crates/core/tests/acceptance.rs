//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fo_csp::construct::{diagonal, power, pp_define, set_structure};
use fo_csp::decide::{
    consistency_check, core_of, fo_check_general, fo_core_check, is_biredundant, is_near_unanimity, is_rigid,
    one_tolerant_hom, projection_link_exists, square_dismantles_to_diagonal, tree_duality_check, FoCoreVerdict,
};
use fo_csp::dismantle::{dismantle_to_stable, Dismantler};
use fo_csp::generate::{
    directed_path, random_cnf3, random_structure, sat_reduction, transitive_tournament, SplitMix64,
};
use fo_csp::model::find_isomorphism;
use fo_csp::solve::{brute_force_hom, SolveOutcome, Solver};
use fo_csp::{is_homomorphism, Limits, Signature, Structure, TupleSet};

struct Report {
    failures: usize,
    /// Structures on which `fo_core_check` answered CoreWithFoCsp.
    fo_cores: Vec<Structure>,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String, elapsed: Duration) {
        if !ok {
            self.failures += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id:>2} {name}: {detail} ({:.2?})", elapsed);
    }

    fn note_fo_core(&mut self, a: &Structure, limits: &Limits) -> FoCoreVerdict {
        let v = fo_core_check(a, limits).expect("fo_core_check");
        if v == FoCoreVerdict::CoreWithFoCsp {
            self.fo_cores.push(a.clone());
        }
        v
    }
}

fn lim() -> Limits {
    Limits::default()
}

fn single_loop() -> Structure {
    Structure::digraph(1, &[(0, 0)]).unwrap()
}

fn k2() -> Structure {
    Structure::digraph(2, &[(0, 1), (1, 0)]).unwrap()
}

fn mixed_signature() -> Signature {
    Signature::new([("E", 2), ("U", 1)]).unwrap()
}

fn ternary_signature() -> Signature {
    Signature::new([("R", 3)]).unwrap()
}

fn random_template(rng: &mut SplitMix64, max_size: usize) -> Structure {
    let size = 1 + rng.below(max_size);
    let seed = rng.next_u64();
    match rng.below(3) {
        0 => random_structure(&Signature::digraph(), size, &[0.15 + 0.4 * rng.next_f64()], seed),
        1 => random_structure(&mixed_signature(), size, &[0.15 + 0.4 * rng.next_f64(), 0.5], seed),
        _ => random_structure(&ternary_signature(), size, &[0.05 + 0.15 * rng.next_f64()], seed),
    }
    .unwrap()
}

fn random_instance(rng: &mut SplitMix64, template: &Structure, max_size: usize) -> Structure {
    let size = 1 + rng.below(max_size);
    let density: Vec<f64> = template
        .signature()
        .symbols()
        .iter()
        .map(|s| match s.arity {
            1 => 0.5,
            2 => 0.05 + 0.35 * rng.next_f64(),
            _ => 0.02 + 0.1 * rng.next_f64(),
        })
        .collect();
    random_structure(template.signature(), size, &density, rng.next_u64()).unwrap()
}

fn random_order_dismantling(a: &Structure, rng: &mut SplitMix64) -> Vec<usize> {
    let mut d = Dismantler::new(a);
    loop {
        let removable = d.removable();
        if removable.is_empty() {
            break;
        }
        let x = removable[rng.below(removable.len())];
        let dominators = d.dominators(x);
        let w = dominators[rng.below(dominators.len())];
        d.remove(x, w).unwrap();
    }
    d.kept()
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let t3 = transitive_tournament(3);
    let p3 = directed_path(3);
    let t3_verdict = r.note_fo_core(&t3, &lim());
    let p3_verdict = r.note_fo_core(&p3, &lim());
    let square = power(&p3, 2, &lim()).unwrap();
    let trace = dismantle_to_stable(&square, &diagonal(4, 2));
    let removed: BTreeSet<usize> = (0..16).filter(|x| !trace.kept.contains(x)).collect();
    // (a, d) and (d, a) with a = 0, d = 3
    let expected: BTreeSet<usize> = [3, 12].into();
    let elapsed = start.elapsed();
    let ok = t3_verdict == FoCoreVerdict::CoreWithFoCsp
        && p3_verdict == FoCoreVerdict::SquareNotDismantlable
        && trace.kept.len() == 14
        && removed == expected
        && elapsed < Duration::from_secs(1);
    r.line(
        1,
        "dismantling of T3 and P3 squares",
        ok,
        format!("T3 {t3_verdict:?}, P3 {p3_verdict:?}, kept {}, removed {removed:?}", trace.kept.len()),
        elapsed,
    );
}

fn criterion_2(r: &mut Report) {
    let start = Instant::now();
    let mut rng = SplitMix64::new(2);
    let mut agree = 0;
    for _ in 0..100 {
        let a = random_template(&mut rng, 6);
        let k1 = random_order_dismantling(&a, &mut rng);
        let k2 = random_order_dismantling(&a, &mut rng);
        let s1 = a.induced(&k1).unwrap().0;
        let s2 = a.induced(&k2).unwrap().0;
        if find_isomorphism(&s1, &s2, 10_000_000).unwrap().is_some() {
            agree += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = agree == 100 && elapsed < Duration::from_secs(30);
    r.line(2, "confluence of dismantling", ok, format!("{agree}/100"), elapsed);
}

fn criterion_3(r: &mut Report) {
    let start = Instant::now();
    let mut rng = SplitMix64::new(3);
    let (mut agree, mut stable) = (0, 0);
    for _ in 0..200 {
        let a = random_template(&mut rng, 3);
        let b = random_instance(&mut rng, &a, 6);
        let u = set_structure(&a, &lim()).unwrap();
        let check = consistency_check(&b, &a).unwrap().is_stable();
        let oracle = brute_force_hom(&b, &u, false, &lim()).unwrap().is_some();
        stable += usize::from(check);
        agree += usize::from(check == oracle);
    }
    r.line(
        3,
        "consistency check vs homomorphism into U(A)",
        agree == 200,
        format!("{agree}/200 ({stable} stable)"),
        start.elapsed(),
    );
}

fn criterion_4(r: &mut Report) {
    let start = Instant::now();
    let t3 = tree_duality_check(&transitive_tournament(3), &lim()).unwrap();
    let lp = tree_duality_check(&single_loop(), &lim()).unwrap();
    let k = tree_duality_check(&k2(), &lim()).unwrap();
    let u = set_structure(&k2(), &lim()).unwrap();
    let witness = u.loops();
    let ok = t3 && lp && !k && !witness.is_empty() && k2().loops().is_empty();
    r.line(
        4,
        "tree duality meta-check",
        ok,
        format!("T3 {t3}, loop {lp}, K2 {k}, U(K2) loops {witness:?}"),
        start.elapsed(),
    );
}

fn criterion_5(r: &mut Report) {
    let start = Instant::now();
    let t3 = transitive_tournament(3);
    let mut rng = SplitMix64::new(5);
    let (mut agree, mut present) = (0, 0);
    for _ in 0..300 {
        let b = random_instance(&mut rng, &t3, 7);
        let check = consistency_check(&b, &t3).unwrap().is_stable();
        let oracle = brute_force_hom(&b, &t3, false, &lim()).unwrap().is_some();
        present += usize::from(oracle);
        agree += usize::from(check == oracle);
    }
    r.line(
        5,
        "consistency check decides T3",
        agree == 300,
        format!("{agree}/300 ({present} with homomorphism)"),
        start.elapsed(),
    );
}

fn criterion_6(r: &mut Report) {
    let start = Instant::now();
    let templates = [transitive_tournament(3), transitive_tournament(4)];
    let solvers: Vec<Solver> = templates.iter().map(|a| Solver::new(a, &lim()).unwrap()).collect();
    let mut rng = SplitMix64::new(6);
    let (mut agree, mut homs) = (0, 0);
    for i in 0..500 {
        let a = &templates[i % 2];
        let b = random_instance(&mut rng, a, 7);
        let outcome = solvers[i % 2].solve(&b).unwrap();
        let oracle = brute_force_hom(&b, a, true, &lim()).unwrap().is_some();
        let verified = match &outcome {
            SolveOutcome::Hom(f) => is_homomorphism(f, &b, a).unwrap(),
            _ => true,
        };
        homs += usize::from(oracle);
        agree += usize::from(verified && outcome.mapping().is_some() == oracle);
    }
    let big = random_structure(&Signature::digraph(), 200, &[0.01], 600).unwrap();
    let timer = Instant::now();
    let big_outcome = solvers[0].solve(&big).unwrap();
    let big_time = timer.elapsed();
    let big_ok = big_outcome.mapping().is_some() == brute_force_hom(&big, &templates[0], true, &lim()).unwrap().is_some();
    // Arcs only go up between residue classes mod 3, so B maps to T3.
    let mut arc_rng = SplitMix64::new(601);
    let arcs: Vec<(usize, usize)> = (0..200)
        .flat_map(|u| (0..200).map(move |v| (u, v)))
        .filter(|&(u, v)| u % 3 < v % 3)
        .filter(|_| arc_rng.next_f64() < 0.02)
        .collect();
    let layered = Structure::digraph(200, &arcs).unwrap();
    let timer = Instant::now();
    let layered_outcome = solvers[0].solve(&layered).unwrap();
    let layered_time = timer.elapsed();
    let layered_ok = layered_outcome
        .mapping()
        .is_some_and(|f| is_homomorphism(f, &layered, &templates[0]).unwrap());
    let ok = agree == 500
        && big_ok
        && layered_ok
        && big_time < Duration::from_secs(5)
        && layered_time < Duration::from_secs(5);
    r.line(
        6,
        "dismantling solver",
        ok,
        format!(
            "{agree}/500 ({homs} with homomorphism), |B| = 200: random {} in {big_time:.2?}, layered {} in {layered_time:.2?}",
            big_outcome.tag(),
            layered_outcome.tag()
        ),
        start.elapsed(),
    );
}

fn criterion_7(r: &mut Report) {
    let start = Instant::now();
    let t3 = transitive_tournament(3);
    let three = one_tolerant_hom(&t3, 3, &lim()).unwrap();
    let four = one_tolerant_hom(&t3, 4, &lim()).unwrap();
    let nu = four.as_ref().is_some_and(|f| is_near_unanimity(f, &t3, 4, &lim()).unwrap());
    let elapsed = start.elapsed();
    let ok = three.is_none() && nu && elapsed < Duration::from_secs(60);
    r.line(
        7,
        "one-tolerant powers of T3",
        ok,
        format!("n=3 {}, n=4 {}, near-unanimity {nu}", three.is_some(), four.is_some()),
        elapsed,
    );
}

fn criterion_8(r: &mut Report) {
    let start = Instant::now();
    let wide = Limits { link_max_size: 4, ..lim() };
    let t3 = projection_link_exists(&transitive_tournament(3), &lim()).unwrap().is_some();
    let p3 = projection_link_exists(&directed_path(3), &wide).unwrap().is_some();
    let mut rng = SplitMix64::new(8);
    let (mut cores, mut agree, mut linked) = (0, 0, 0);
    while cores < 50 {
        let a = random_template(&mut rng, 3);
        if core_of(&a, &lim()).unwrap().structure.size() != a.size() {
            continue;
        }
        cores += 1;
        let link = projection_link_exists(&a, &lim()).unwrap().is_some();
        let square = square_dismantles_to_diagonal(&a, &lim()).unwrap().is_some();
        r.note_fo_core(&a, &lim());
        linked += usize::from(link);
        agree += usize::from(link == square);
    }
    r.line(
        8,
        "projection links",
        t3 && !p3 && agree == 50,
        format!("T3 {t3}, P3 {p3}, {agree}/50 cores agree ({linked} linked)"),
        start.elapsed(),
    );
}

fn criterion_9(r: &mut Report) {
    let start = Instant::now();
    let limits = Limits { max_size: 16, ..lim() };
    let mut rng = SplitMix64::new(9);
    let (mut agree, mut sat) = (0, 0);
    for _ in 0..50 {
        let vars = 2 + rng.below(4);
        let clauses = 1 + rng.below(5);
        let formula = random_cnf3(vars, clauses, rng.next_u64());
        let h = sat_reduction(&formula);
        let fo = fo_check_general(&h, &limits).unwrap();
        let oracle = formula.brute_force_satisfiable();
        sat += usize::from(oracle);
        agree += usize::from(fo == oracle);
    }
    r.line(
        9,
        "SAT reduction",
        agree == 50,
        format!("{agree}/50 ({sat} satisfiable)"),
        start.elapsed(),
    );
}

fn criterion_10(r: &mut Report) {
    let start = Instant::now();
    let t3 = transitive_tournament(3);
    let arc = directed_path(1);
    let loop_pair = pp_define(&arc, &[0, 0], &t3, &lim()).unwrap();
    let expected = TupleSet::from_tuples(2, [[0, 0], [1, 1]]);
    let redundant = loop_pair.to_structure("E").unwrap();
    let flagged = is_biredundant(&loop_pair).unwrap();
    let square = square_dismantles_to_diagonal(&redundant, &lim()).unwrap().is_some();

    let edge = pp_define(&arc, &[0, 1], &t3, &lim()).unwrap();
    let source = pp_define(&arc, &[0], &t3, &lim()).unwrap();
    let far = pp_define(&directed_path(2), &[0, 2], &t3, &lim()).unwrap();
    let irredundant = !is_biredundant(&edge).unwrap() && !is_biredundant(&far).unwrap();
    let sig = Signature::new([("E", 2), ("U", 1), ("F", 2)]).unwrap();
    // One extra element without tuples, removed by core reduction.
    let rich = Structure::new(sig, 4, vec![edge.tuples, source.tuples, far.tuples]).unwrap();
    let core = core_of(&rich, &lim()).unwrap();
    let verdict = r.note_fo_core(&core.structure, &lim());
    let ok = loop_pair.tuples == expected
        && flagged
        && !square
        && irredundant
        && core.structure.size() == 3
        && verdict == FoCoreVerdict::CoreWithFoCsp;
    r.line(
        10,
        "biredundancy",
        ok,
        format!(
            "loop pair biredundant {flagged}, square dismantles {square}; irredundant core of size {} gives {verdict:?}",
            core.structure.size()
        ),
        start.elapsed(),
    );
}

fn criterion_11(r: &mut Report) {
    let start = Instant::now();
    let mut rng = SplitMix64::new(11);
    for _ in 0..40 {
        let a = random_template(&mut rng, 4);
        r.note_fo_core(&a, &lim());
    }
    r.note_fo_core(&single_loop(), &lim());
    r.note_fo_core(&transitive_tournament(4), &lim());
    let total = r.fo_cores.len();
    let rigid = r.fo_cores.iter().filter(|a| is_rigid(a, &lim()).unwrap()).count();
    r.line(
        11,
        "FO cores are rigid",
        rigid == total && total > 0,
        format!("{rigid}/{total}"),
        start.elapsed(),
    );
}

fn main() {
    let mut report = Report {
        failures: 0,
        fo_cores: Vec::new(),
    };
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criterion_8(&mut report);
    criterion_9(&mut report);
    criterion_10(&mut report);
    criterion_11(&mut report);
    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
