//! End-to-end acceptance criteria. Each criterion prints one line; the test
//! fails if any of them fails. Inputs come from a fixed-seed generator so
//! every run sees the same instances.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use shiftlab::commands::{analyze_input, ShiftOpts};
use shiftlab::formats::{EpSeqDto, ShiftInput, WeightsFile};
use shiftlab::report::{Body, Report};
use shiftlab::verify::verify_report;
use shiftlab_core::diagop::ShiftPair;
use shiftlab_core::funcsg::{brute_force_oracle, nonsimple_si_two_gen, simplicity_check, FiniteFn, SimplicityVerdict, TwoGenVerdict};
use shiftlab_core::matrixlab::{classify_idempotent, max_window_error, truncate, truncate_word, IdempotentClass, MatrixQ};
use shiftlab_core::scalar::{ComplexQ, MultScalar, Rational};
use shiftlab_core::shiftcheck::is_essentially_normal_shift;
use shiftlab_core::wordsolver::{self, SearchOutcome};
use shiftlab_core::{word_eval, EpSeq, Letter, ShiftSpec, Word};

const ZERO_GAP_SPECS: usize = 200;
const ZERO_GAP_LIMIT: Duration = Duration::from_secs(2);
const REFERENCE_LIMIT: Duration = Duration::from_secs(1);
const PERIODIC_SPECS: usize = 100;
const PERIODIC_LIMIT: Duration = Duration::from_secs(30);
const NO_WITNESS_DEGREE: usize = 10;
const ORACLE_WORDS: usize = 500;
const SECTION: usize = 64;
const WINDOW: usize = 58;
const FLOAT_TOL: f64 = 1e-9;
const DEGREE_MEAN_SPECS: usize = 100;
const FUNCSG_MIN_INSTANCES: usize = 200;
const FUNCSG_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_IDEMPOTENTS: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy generates").current()
}

const MAG2: &[(i64, i64)] = &[(1, 4), (1, 2), (1, 1), (2, 1), (4, 1), (1, 3), (3, 1), (9, 4), (2, 3)];
const PHASE: &[(i64, i64)] = &[(0, 1), (1, 2), (1, 3), (1, 4), (3, 4), (5, 6)];

fn nonzero_scalar() -> impl Strategy<Value = MultScalar> + Clone {
    (0..MAG2.len(), 0..PHASE.len()).prop_map(|(m, p)| MultScalar::q(MAG2[m].0, MAG2[m].1, PHASE[p].0, PHASE[p].1))
}

fn unimodular() -> impl Strategy<Value = MultScalar> + Clone {
    (0..PHASE.len()).prop_map(|p| MultScalar::q(1, 1, PHASE[p].0, PHASE[p].1))
}

fn partial_unit() -> impl Strategy<Value = MultScalar> + Clone {
    prop_oneof![3 => unimodular(), 1 => Just(MultScalar::zero())]
}

fn any_scalar() -> impl Strategy<Value = MultScalar> + Clone {
    prop_oneof![4 => nonzero_scalar(), 1 => Just(MultScalar::zero())]
}

/// A prefix ending in `a_i != 0, a_{i+1} = 0`, then an arbitrary tail.
fn zero_gap_spec(s: impl Strategy<Value = MultScalar> + Clone, nz: impl Strategy<Value = MultScalar> + Clone) -> impl Strategy<Value = EpSeq> {
    (prop::collection::vec(s.clone(), 0..4), nz, prop::collection::vec(s, 1..4)).prop_map(|(mut p, a, c)| {
        p.push(a);
        p.push(MultScalar::zero());
        EpSeq::new(p, c).unwrap()
    })
}

fn unit_mean_cycle() -> impl Strategy<Value = Vec<MultScalar>> {
    (prop::collection::vec(nonzero_scalar(), 0..3), unimodular()).prop_map(|(mut c, last)| {
        let prod = c.iter().fold(Rational::one(), |acc, s| acc * s.mag2());
        c.push(MultScalar::new(prod.recip(), last.phase().clone()).unwrap());
        c
    })
}

fn periodic_spec() -> impl Strategy<Value = EpSeq> {
    prop_oneof![unit_mean_cycle(), prop::collection::vec(nonzero_scalar(), 1..4)].prop_map(|c| EpSeq::periodic(c).unwrap())
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 1..=max)
        .prop_map(|b| Word::new(b.into_iter().map(|g| if g { Letter::Gen } else { Letter::Adj }).collect()).unwrap())
}

fn input_of(w: &EpSeq) -> ShiftInput {
    ShiftInput::Weights(WeightsFile { weights: EpSeqDto::from_core(w) })
}

fn mags_in_01(w: &EpSeq) -> bool {
    (1..=w.span() + w.period()).all(|j| w.term(j).mag2().is_zero() || w.term(j).mag2().is_one())
}

fn m(n: i64, d: i64) -> MultScalar {
    MultScalar::q(n, d, 0, 1)
}

struct Ctx {
    runner: TestRunner,
    /// Reports emitted by criteria 1 to 3, replayed by criterion 9.
    reports: Vec<Report>,
    /// Specs with nonzero weights judged SI, for criterion 7.
    si_nonzero: Vec<ShiftSpec>,
}

impl Ctx {
    fn analyze(&mut self, w: &EpSeq) -> Report {
        let r = analyze_input(&input_of(w), &ShiftOpts::default()).expect("valid spec");
        self.reports.push(r.clone());
        if let Body::ShiftAnalyze { analysis, .. } = &r.body {
            if analysis.si == "yes" && !w.has_zero_term() {
                self.si_nonzero.push(ShiftSpec::new(w.clone()).unwrap());
            }
        }
        r
    }
}

fn analysis(r: &Report) -> (&str, &str, &str) {
    match &r.body {
        Body::ShiftAnalyze { analysis, .. } => (&analysis.si, &analysis.simple, &analysis.citation),
        _ => unreachable!("shift reports only"),
    }
}

fn zero_gap_characterization(cx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mixed = zero_gap_spec(any_scalar(), nonzero_scalar());
    let partial = zero_gap_spec(partial_unit(), unimodular());
    let (mut bad, mut yes) = (0, 0);
    for k in 0..ZERO_GAP_SPECS {
        let w = if k % 2 == 0 { sample(&mut cx.runner, &mixed) } else { sample(&mut cx.runner, &partial) };
        let r = cx.analyze(&w);
        let (si, simple, cite) = analysis(&r);
        let expect_si = if mags_in_01(&w) { "yes" } else { "no" };
        yes += usize::from(si == "yes");
        if si != expect_si || simple != "no" || cite != "thm:zero-gap" {
            bad += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        bad == 0 && t < ZERO_GAP_LIMIT && yes > 0 && yes < ZERO_GAP_SPECS,
        format!("{ZERO_GAP_SPECS} specs, {yes} SI, {bad} mismatches, {t:.2?} (limit {ZERO_GAP_LIMIT:?})"),
    )
}

fn reference_instances(cx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let p_example = EpSeq::periodic(vec![m(4, 1), m(1, 2)]).unwrap();
    let alpha1 = EpSeq::new(vec![m(4, 1)], vec![m(1, 1)]).unwrap();
    let gap = EpSeq::new(vec![m(1, 1), m(0, 1)], vec![m(1, 1)]).unwrap();
    let mut fails = Vec::new();
    for (name, w, si, simple) in [("p-example", &p_example, "no", "no"), ("(2,1,1,...)", &alpha1, "yes", "yes"), ("(1,0,1,1,...)", &gap, "yes", "no")] {
        let r = cx.analyze(w);
        let (got_si, got_simple, _) = analysis(&r);
        if (got_si, got_simple) != (si, simple) {
            fails.push(name);
        }
    }
    // |1 - 1/(n+1)|^2 < 1 for every n >= 1, so the band holds from index 2.
    let below = (2..=10_000i64).all(|n| Rational::new(n.into(), (n + 1).into()).pow(2) < Rational::one());
    let band: ShiftInput = serde_json::from_str(r#"{"limit_cycle":[{"mag2":"1","phase":"0"}],"band":{"all_below_one":2}}"#).unwrap();
    let r = analyze_input(&band, &ShiftOpts::default()).unwrap();
    if !below || analysis(&r).0 != "no" || analysis(&r).2 != "thm:reciprocal" {
        fails.push("band 1-1/(n+1)");
    }
    cx.reports.push(r);
    let t = start.elapsed();
    outcome(fails.is_empty() && t < REFERENCE_LIMIT, format!("4 instances, failures {fails:?}, {t:.2?} (limit {REFERENCE_LIMIT:?})"))
}

fn periodic_tri_equivalence(cx: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let (mut bad, mut yes) = (0, 0);
    for _ in 0..PERIODIC_SPECS {
        let w = sample(&mut cx.runner, &periodic_spec());
        let r = cx.analyze(&w);
        let (si, simple, _) = analysis(&r);
        let p = w.mag2_seq().period();
        let one = (1..=p).fold(Rational::one(), |acc, j| acc * w.term(j).mag2()).is_one();
        let expect = if one { "yes" } else { "no" };
        if si != expect || simple != expect {
            bad += 1;
            continue;
        }
        if one {
            yes += 1;
            let found = match wordsolver::solve(&w, &Word::gen(), 2 * p + 2).unwrap() {
                SearchOutcome::Found(wp) => wp.checked && wp.total_degree() < 2 * p + 2 && wordsolver::is_adjoint_witness(&w, &wp),
                SearchOutcome::NotFoundUpTo(_) => false,
            };
            bad += usize::from(!found);
        } else {
            let none = wordsolver::solve(&w, &Word::gen(), NO_WITNESS_DEGREE).unwrap().witness().is_none();
            bad += usize::from(!none);
        }
    }
    let t = start.elapsed();
    outcome(
        bad == 0 && t < PERIODIC_LIMIT && yes > 0 && yes < PERIODIC_SPECS,
        format!("{PERIODIC_SPECS} specs, {yes} SI with witnesses, {bad} violations, {t:.2?} (limit {PERIODIC_LIMIT:?})"),
    )
}

fn truncation_oracle(cx: &mut Ctx) -> Outcome {
    let weights = (prop::collection::vec(any_scalar(), 0..4), prop::collection::vec(any_scalar(), 1..4))
        .prop_map(|(p, c)| EpSeq::new(p, c).unwrap())
        .prop_filter("nonzero", |e| !e.is_all_zero());
    let mut worst = 0.0f64;
    for _ in 0..ORACLE_WORDS {
        let (alpha, w) = sample(&mut cx.runner, &(weights.clone(), word(6)));
        let pair = ShiftPair::new(&alpha).unwrap();
        let e = max_window_error(&truncate(&pair.eval(&w), SECTION), &truncate_word(&pair, &w, SECTION), WINDOW);
        worst = worst.max(e);
    }
    outcome(worst <= FLOAT_TOL, format!("{ORACLE_WORDS} words, N = {SECTION}, window {WINDOW}, max error {worst:.2e} (tol {FLOAT_TOL:e})"))
}

fn degree_mean_law(cx: &mut Ctx) -> Outcome {
    let mut bad = 0;
    for _ in 0..DEGREE_MEAN_SPECS {
        let (alpha, w) = sample(&mut cx.runner, &(periodic_spec(), word(6)));
        let gamma = word_eval(&w, &alpha).unwrap();
        let g = gamma.weights();
        let p = alpha.period();
        let from = g.preperiod() + 1;
        let scanned = (from..from + p).fold(Rational::one(), |acc, j| acc * g.term(j).mag2());
        let expected = alpha.cycle_product_mag2().pow(w.degree() as i32);
        bad += usize::from(scanned != expected || g.window_product_mag2(p) != expected);
    }
    outcome(bad == 0, format!("{DEGREE_MEAN_SPECS} specs with words of degree <= 6, {bad} violations"))
}

/// Values `0` and the roots of unity of order at most 4, as twelfths of a turn.
const TWELFTHS: [Option<u32>; 7] = [None, Some(0), Some(3), Some(4), Some(6), Some(8), Some(9)];

fn conj12(v: &[Option<u32>]) -> Vec<Option<u32>> {
    v.iter().map(|x| x.map(|k| (12 - k) % 12)).collect()
}

/// Canonical representative under point permutations, generator order and
/// conjugating a generator, none of which changes the generated semigroup.
fn canonical(gens: &[Vec<Option<u32>>]) -> Vec<Vec<Option<u32>>> {
    let n = gens[0].len();
    let perms: Vec<Vec<usize>> = match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]],
    };
    let mut best: Option<Vec<Vec<Option<u32>>>> = None;
    for p in &perms {
        let permuted: Vec<Vec<Vec<Option<u32>>>> = gens
            .iter()
            .map(|g| {
                let v: Vec<Option<u32>> = p.iter().map(|&i| g[i]).collect();
                let c = conj12(&v);
                vec![v, c]
            })
            .collect();
        let mut choices: Vec<Vec<Vec<Option<u32>>>> = vec![vec![]];
        for opts in &permuted {
            choices = choices.into_iter().flat_map(|pre| opts.iter().map(move |o| [pre.clone(), vec![o.clone()]].concat())).collect();
        }
        for mut c in choices {
            c.sort();
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap()
}

fn to_fn(v: &[Option<u32>]) -> FiniteFn {
    FiniteFn::new(v.iter().map(|x| x.map_or(MultScalar::zero(), |k| MultScalar::q(1, 1, k as i64, 12))).collect())
}

fn all_functions(n: usize) -> Vec<Vec<Option<u32>>> {
    let mut out: Vec<Vec<Option<u32>>> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|pre| TWELFTHS.iter().map(move |&v| [pre.clone(), vec![v]].concat())).collect();
    }
    out.retain(|f| f.iter().any(Option::is_some));
    out
}

fn funcsg_agreement(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut instances: BTreeSet<Vec<Vec<Option<u32>>>> = BTreeSet::new();
    for n in 1..=3 {
        let fs = all_functions(n);
        for (i, f) in fs.iter().enumerate() {
            instances.insert(canonical(std::slice::from_ref(f)));
            for g in &fs[i..] {
                instances.insert(canonical(&[f.clone(), g.clone()]));
            }
        }
    }
    let mut disagreements = Vec::new();
    for inst in &instances {
        let gens: Vec<FiniteFn> = inst.iter().map(|v| to_fn(v)).collect();
        let oracle = brute_force_oracle(&gens).unwrap();
        let simple = match simplicity_check(&gens, 4).unwrap() {
            SimplicityVerdict::Simple(_) => Some(true),
            SimplicityVerdict::NotSimple(_) => Some(false),
            SimplicityVerdict::Unknown(_) => None,
        };
        let mut ok = simple == Some(oracle.simple);
        // A single generator is checked as the pair (f, f): same semigroup.
        let (f, g) = (&gens[0], gens.get(1).unwrap_or(&gens[0]));
        let (s2, si) = match nonsimple_si_two_gen(f, g, 4).unwrap() {
            TwoGenVerdict::Simple(_) => (Some(true), Some(true)),
            TwoGenVerdict::SiNonsimple { .. } => (Some(false), Some(true)),
            TwoGenVerdict::NotSi => (Some(false), Some(false)),
            TwoGenVerdict::Unknown(_) => (None, None),
        };
        ok &= s2 == Some(oracle.simple) && si == Some(oracle.si);
        if !ok {
            disagreements.push(inst.clone());
        }
    }
    let t = start.elapsed();
    outcome(
        disagreements.is_empty() && instances.len() >= FUNCSG_MIN_INSTANCES && t < FUNCSG_LIMIT,
        format!(
            "{} instances up to symmetry, {} disagreements{}, {t:.2?} (limit {FUNCSG_LIMIT:?})",
            instances.len(),
            disagreements.len(),
            disagreements.first().map_or(String::new(), |d| format!(" e.g. {d:?}"))
        ),
    )
}

fn fullspec_consistency(cx: &mut Ctx) -> Outcome {
    let mut violations = 0;
    for s in &cx.si_nonzero {
        let mags = s.weights().mag2_seq();
        if is_essentially_normal_shift(s) && !mags.cycle_product_mag2().is_one() {
            violations += 1;
        }
        if let Some(limit) = mags.limit() {
            violations += usize::from(!limit.mag2().is_one());
        }
    }
    outcome(
        violations == 0 && !cx.si_nonzero.is_empty(),
        format!("{} SI specs with nonzero weights, {violations} violations", cx.si_nonzero.len()),
    )
}

fn cq(re: i64, im: i64) -> ComplexQ {
    ComplexQ::from_ints(re, im)
}

fn cmul(a: &ComplexQ, b: &ComplexQ) -> ComplexQ {
    ComplexQ::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
}

fn cinv(a: &ComplexQ) -> ComplexQ {
    let n = a.norm_sq();
    ComplexQ::new(&a.re / &n, -&a.im / &n)
}

/// `u v^T / (v^T u)`, optionally complemented to `I - u v^T / (v^T u)`.
fn random_idempotent(runner: &mut TestRunner) -> Option<MatrixQ> {
    let n = sample(runner, &(2usize..=3));
    let gauss = (-3i64..=3, -2i64..=2).prop_map(|(a, b)| cq(a, b));
    let (u, v, flip) = sample(runner, &(prop::collection::vec(gauss.clone(), n), prop::collection::vec(gauss, n), prop::bool::ANY));
    let dot = u.iter().zip(&v).fold(cq(0, 0), |acc, (a, b)| &acc + &cmul(a, b));
    if dot.is_zero() {
        return None;
    }
    let s = cinv(&dot);
    let rows = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let e = cmul(&cmul(&u[r], &v[c]), &s);
                    if flip {
                        &(if r == c { cq(1, 0) } else { cq(0, 0) }) - &e
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    Some(MatrixQ::from_rows(rows).unwrap())
}

fn matrixlab(cx: &mut Ctx) -> Outcome {
    let mq = |rows: &[&[i64]]| MatrixQ::from_ints(rows).unwrap();
    let cited = classify_idempotent(&mq(&[&[1, 1], &[0, 0]]))
        == IdempotentClass::NonNormalIdempotent { si: false, simple: false, partial_isometry: false }
        && classify_idempotent(&mq(&[&[1, 0], &[0, 0]])) == IdempotentClass::NormalIdempotent
        && classify_idempotent(&mq(&[&[0, 1], &[0, 0]])) == IdempotentClass::NotIdempotent;
    let (mut seen, mut partial_isometries, mut not_idempotent) = (0, 0, 0);
    while seen < RANDOM_IDEMPOTENTS {
        let Some(a) = random_idempotent(&mut cx.runner) else { continue };
        match classify_idempotent(&a) {
            IdempotentClass::NonNormalIdempotent { partial_isometry, .. } => {
                seen += 1;
                partial_isometries += usize::from(partial_isometry);
            }
            IdempotentClass::NormalIdempotent => {}
            IdempotentClass::NotIdempotent => not_idempotent += 1,
        }
    }
    outcome(
        cited && partial_isometries == 0 && not_idempotent == 0,
        format!("cited matrices {}, {RANDOM_IDEMPOTENTS} random non-normal idempotents, {partial_isometries} partial isometries (empirical probe)", if cited { "ok" } else { "WRONG" }),
    )
}

fn certificate_replay(cx: &mut Ctx) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = Path::new(env!("CARGO_BIN_EXE_shiftlab"));
    let mut failed = 0;
    for (i, r) in cx.reports.iter().enumerate() {
        failed += usize::from(verify_report(r).is_err());
        let path = dir.path().join(format!("report{i}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(r).unwrap()).unwrap();
        let status = Command::new(bin).arg("--verify-certificate").arg(&path).output().unwrap().status;
        failed += usize::from(!status.success());
    }
    outcome(failed == 0, format!("{} reports replayed through the binary, {failed} failures", cx.reports.len()))
}

#[test]
fn acceptance() {
    let mut cx = Ctx { runner: TestRunner::deterministic(), reports: Vec::new(), si_nonzero: Vec::new() };
    type Criterion = (&'static str, fn(&mut Ctx) -> Outcome);
    let criteria: [Criterion; 9] = [
        ("zero-gap characterization", zero_gap_characterization),
        ("reference instances", reference_instances),
        ("periodic tri-equivalence", periodic_tri_equivalence),
        ("diagonal-algebra truncation oracle", truncation_oracle),
        ("degree-mean law", degree_mean_law),
        ("funcsg oracle agreement", funcsg_agreement),
        ("fullspec consistency", fullspec_consistency),
        ("matrixlab idempotents", matrixlab),
        ("certificate replay", certificate_replay),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run(&mut cx);
        println!("criterion {}: {} [{}] {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
        if !o.pass {
            failures.push(i + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
