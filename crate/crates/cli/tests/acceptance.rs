//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail; the run fails if
//! any other criterion fails, or if a known-red one starts passing.

use std::process::ExitCode;
use std::time::Instant;

use convexqe::fuzz::{fuzz, FuzzConfig};
use convexqe_core::classify::{
    arrange_violation, check_pluslike, classify, f_valuational, normalize_monotone, stabilizer, CutKind, FValuational,
    Pluslike,
};
use convexqe_core::convex::{check_resistance, skolemize, Resistance};
use convexqe_core::fixtures;
use convexqe_core::gen::{random_formula, random_matrix, random_pl_unary, random_pluslike, FormulaShape};
use convexqe_core::lab::{choice_violation, obstruction_find, verify_skolem, ChoiceCandidate};
use convexqe_core::model::{oracle_truth, Assignment, Entry, Irrational, ModelDescriptor, ModelError, Point, UInterp};
use convexqe_core::pl::{Piece, PlUnary};
use convexqe_core::rational::{int, ratio, Rational};
use convexqe_core::syntax::{parse_formula, rename_bound_apart, Formula, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Expected to fail; see the project notes for why.
const KNOWN_RED: &[usize] = &[3];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fixture(name: &str) -> ModelDescriptor {
    fixtures::all().into_iter().find(|(n, _)| n == name).expect("fixture").1
}

fn is_valuational(m: &ModelDescriptor) -> bool {
    classify(m).cut_kind == CutKind::IrrationalValuational
}

fn differential_soundness() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for name in ["lex2_sub1", "lex3_sub2", "lex2_1inf", "lex3_half0inf"] {
        let config = FuzzConfig { seed: 7, ..FuzzConfig::default() };
        let report = fuzz(&fixture(name), &config).expect("complete elimination");
        passed &= report.discrepancies.is_empty() && report.checked > 0;
        details.push(format!(
            "{name}: {} checked, {} skipped, {} discrepancies",
            report.checked,
            report.oracle_skipped,
            report.discrepancies.len()
        ));
    }
    outcome(passed, details.join("; "))
}

fn fixtures_classify() -> Outcome {
    let mut exact = 0;
    let pi = classify(&fixtures::q1_pi());
    exact += usize::from(pi.cut_kind == CutKind::IrrationalNonvaluational && pi.falsifier.is_some());
    let q3 = classify(&fixtures::q3_11pi());
    exact += usize::from(q3.cut_kind == CutKind::IrrationalNonvaluational && q3.stabilizer_level == 3);
    let lex = classify(&fixtures::lex2_1inf());
    let eps = Point(vec![int(0), int(1)]);
    exact += usize::from(lex.cut_kind == CutKind::IrrationalValuational && lex.epsilon_witness == Some(eps));
    exact += usize::from(classify(&fixtures::lex2_11()).cut_kind == CutKind::RationalCut);
    outcome(exact == 4, format!("{exact}/4 exact"))
}

fn pluslike_equivalence() -> Outcome {
    let mut agree = 0;
    let mut total = 0;
    let mut disagreements = Vec::new();
    for (i, (name, m)) in fixtures::all().into_iter().enumerate() {
        let mut r = rng(300 + i as u64);
        let expected = is_valuational(&m);
        for _ in 0..20 {
            let f = random_pluslike(&mut r);
            assert_eq!(check_pluslike(&f), Pluslike::Pluslike);
            let yes = matches!(f_valuational(&m, &f).expect("pluslike"), FValuational::Yes { .. });
            total += 1;
            if yes == expected {
                agree += 1;
            } else if disagreements.len() < 3 {
                disagreements.push(format!("{name}: {f}"));
            }
        }
    }
    let mut detail = format!("{agree}/{total} agree");
    if !disagreements.is_empty() {
        detail += &format!(", e.g. {}", disagreements.join(", "));
    }
    outcome(agree == total, detail)
}

fn random_entry(r: &mut ChaCha8Rng) -> Entry {
    match r.gen_range(0..6) {
        0 => Entry::Irrational(Irrational::Pi),
        1 => Entry::Irrational(Irrational::Sqrt(int(2))),
        2 => Entry::PlusInf,
        3 => Entry::MinusInf,
        _ => Entry::Rational(ratio(r.gen_range(-6..=6), r.gen_range(1..=3))),
    }
}

/// A random well-formed cut or subgroup; only the shape of `U` matters here.
fn random_model(r: &mut ChaCha8Rng) -> ModelDescriptor {
    loop {
        let dim = r.gen_range(1..=4);
        let u = match r.gen_range(0..5) {
            0 if dim > 1 => UInterp::Subgroup { level: r.gen_range(1..dim) },
            1 => UInterp::Symmetric { threshold: (0..dim).map(|_| random_entry(r)).collect(), strict: r.gen() },
            _ => UInterp::DownwardCut { threshold: (0..dim).map(|_| random_entry(r)).collect(), strict: r.gen() },
        };
        let (e_in, e_out) = (Point::unit(dim, dim - 1), Point::unit(dim, 0));
        match ModelDescriptor::new(dim, u.clone(), e_in.clone(), e_out.clone()) {
            Ok(m) => return m,
            Err(ModelError::Constant { .. }) => return ModelDescriptor::new_unchecked(dim, u, e_in, e_out),
            Err(_) => continue,
        }
    }
}

fn stabilizer_cross_check() -> Outcome {
    let mut models: Vec<ModelDescriptor> = fixtures::all().into_iter().map(|(_, m)| m).collect();
    let mut r = rng(4);
    models.extend((0..50).map(|_| random_model(&mut r)));
    let agree = models.iter().filter(|m| (stabilizer(m) < m.dim()) == is_valuational(m)).count();
    outcome(agree == models.len(), format!("{agree}/{} agree", models.len()))
}

fn skolem_synthesis() -> Outcome {
    let shape = FormulaShape { allow_i: true, ..FormulaShape::default() };
    let params = vec!["x".to_string(), "z".to_string()];
    let mut details = Vec::new();
    let mut passed = true;
    for (i, name) in ["lex2_sub1", "lex3_sub2", "lex2_1inf", "lex3_half0inf", "lex2_m1inf"].into_iter().enumerate() {
        let m = fixture(name);
        let mut r = rng(500 + i as u64);
        let mut ok = 0;
        let mut tried = 0;
        while tried < 100 {
            let phi = random_matrix(&mut r, &shape, &params, "y");
            let closed = params.iter().chain(["y".to_string()].iter()).fold(phi.clone(), |f, v| Formula::exists(v, f));
            match oracle_truth(&m, &closed, &Assignment::new()) {
                Ok(true) => {}
                _ => continue,
            }
            tried += 1;
            let good = skolemize(&phi, "y", &m)
                .ok()
                .and_then(|sk| verify_skolem(&m, &phi, &sk, 500, tried as u64).ok())
                .is_some_and(|report| report.passed);
            if good {
                ok += 1;
            } else if passed {
                details.push(format!("{name} fails on {phi}"));
                passed = false;
            }
        }
        details.push(format!("{name}: {ok}/100"));
    }
    outcome(passed, details.join("; "))
}

fn slopes() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), int(3), int(-3), ratio(1, 2), ratio(-1, 2)]
}

fn obstruction() -> Outcome {
    let m = fixtures::q1_pi();
    let mut r = rng(6);
    let mut slopes = slopes();
    slopes.push(int(0));
    let mut ok = 0;
    for _ in 0..50 {
        let f = random_pl_unary(&mut r, 4, &slopes);
        if obstruction_find(&m, &f).is_ok_and(|w| w.verify(&m, &f).unwrap_or(false)) {
            ok += 1;
        }
    }
    outcome(ok == 50, format!("{ok}/50 verified witnesses"))
}

fn choice_failure() -> Outcome {
    let phi = parse_formula("I(x - y)").expect("fiber formula");
    let mut slopes = slopes();
    slopes.push(int(0));
    let mut ok = 0;
    let mut total = 0;
    let mut r = rng(7);
    let valuational: Vec<(String, ModelDescriptor)> =
        fixtures::all().into_iter().filter(|(_, m)| is_valuational(m)).collect();
    for (name, m) in &valuational {
        let sk = match skolemize(&phi, "y", m) {
            Ok(sk) => sk,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        let mut candidates = vec![ChoiceCandidate::Skolem { definition: &sk, param: "x" }];
        let pls: Vec<PlUnary> = (0..24).map(|_| random_pl_unary(&mut r, 3, &slopes)).collect();
        candidates.extend(pls.iter().map(ChoiceCandidate::Pl));
        for f in &candidates {
            total += 1;
            if choice_violation(m, f).is_ok_and(|v| v.verify(m, f).unwrap_or(false)) {
                ok += 1;
            }
        }
    }
    outcome(ok == total, format!("{ok}/{total} re-verified over {} fixtures", valuational.len()))
}

fn unary(breakpoints: &[i64], pieces: &[(i64, i64)]) -> PlUnary {
    PlUnary::new(
        breakpoints.iter().map(|&b| int(b)).collect(),
        pieces.iter().map(|&(s, c)| Piece::new(int(s), Term::constant(int(c)))).collect(),
    )
    .expect("continuous")
}

fn normalization() -> Outcome {
    let sym = UInterp::Symmetric { threshold: vec![Entry::Irrational(Irrational::Pi)], strict: true };
    let m = ModelDescriptor::new(1, sym, Point(vec![int(1)]), Point(vec![int(4)])).expect("model");
    let mut r = rng(8);
    let slopes = slopes();
    let (mut functions, mut ok, mut violations, mut preserved) = (0, 0, 0, 0);
    while functions < 50 {
        let g = random_pl_unary(&mut r, 5, &slopes);
        if g.pieces().last().is_some_and(|p| p.slope <= int(0)) {
            continue;
        }
        functions += 1;
        let Ok(h) = normalize_monotone(&g) else { continue };
        let positive = h.pieces().iter().all(|p| p.slope > int(0));
        let continuous = PlUnary::new(h.breakpoints().to_vec(), h.pieces().to_vec()).is_ok();
        let mut keeps = true;
        if let Some(arranged) = arrange_violation(&m, &g).expect("eval") {
            violations += 1;
            keeps = normalize_monotone(&arranged)
                .is_ok_and(|n| matches!(check_resistance(&m, &n), Ok(Resistance::Violation { .. })));
            preserved += usize::from(keeps);
        }
        ok += usize::from(positive && continuous && keeps);
    }
    let abs = normalize_monotone(&unary(&[0], &[(-1, 0), (1, 0)])) == Ok(PlUnary::identity());
    let zigzag = normalize_monotone(&unary(&[1, 2], &[(1, 0), (-1, 2), (1, -2)])) == Ok(unary(&[], &[(1, -2)]));
    outcome(
        ok == 50 && abs && zigzag,
        format!(
            "{ok}/50 increasing and continuous, {preserved}/{violations} violations preserved, |x| {}, zigzag {}",
            if abs { "ok" } else { "wrong" },
            if zigzag { "ok" } else { "wrong" }
        ),
    )
}

fn round_trip_and_determinism() -> Outcome {
    let mut r = rng(9);
    let mut shapes = [
        FormulaShape { allow_i: true, max_connective_depth: 3, ..FormulaShape::default() },
        FormulaShape { sugar: false, ..FormulaShape::default() },
    ];
    let mut survived = 0;
    for _ in 0..1000 {
        let shape = shapes.choose_mut(&mut r).expect("nonempty");
        let f = rename_bound_apart(&random_formula(&mut r, shape));
        if parse_formula(&f.to_string()).is_ok_and(|g| g == f) {
            survived += 1;
        }
    }
    let config = FuzzConfig { formulas: 60, samples: 200, seed: 11, ..FuzzConfig::default() };
    let m = fixtures::lex2_sub1();
    let render = |c: &FuzzConfig| serde_json::to_string(&fuzz(&m, c).expect("fuzz").to_json()).expect("json");
    let identical = render(&config) == render(&config);
    let injected = FuzzConfig { inject_bug: true, ..config };
    let identical_injected = render(&injected) == render(&injected);
    outcome(
        survived == 1000 && identical && identical_injected,
        format!("{survived}/1000 round-trips, reports identical: {}", identical && identical_injected),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("QE differential soundness", differential_soundness),
        ("fixture classification", fixtures_classify),
        ("pluslike equivalence", pluslike_equivalence),
        ("stabilizer cross-check", stabilizer_cross_check),
        ("Skolem synthesis", skolem_synthesis),
        ("obstruction", obstruction),
        ("choice failure", choice_failure),
        ("normalization", normalization),
        ("round-trip and determinism", round_trip_and_determinism),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let o = run();
        let known_red = KNOWN_RED.contains(&n);
        let tag = match (o.passed, known_red) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (expected FAIL)",
            (false, false) => "FAIL",
        };
        println!("criterion {n} {tag}: {name}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if o.passed == known_red {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
