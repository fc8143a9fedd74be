//! The self-test suites: one per acceptance property, each driven by a
//! seed and reported as plain data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::text::parse_system;
use crate::algebra::{Gf2k, Integers, Matrix, MultiPoly, PolyRing, Ring, Vars};
use crate::chern::{deg_r, degree_class, divisibility_check, examples, GradedClass};
use crate::discriminant::{
    fermat, fermat_point, free_indices, hypersurface_chart, random_cubic_through, rsm_test, run_trial,
    DiscriminantData, TrialOptions, TrialRecord, MAX_RESAMPLES,
};
use crate::error::Result;
use crate::gamma::{gamma_ideal, gamma_pullback, lift_to, singular_locus_check};
use crate::groebner::{contains_all, buchberger, MonomialOrder, OrderKind};
use crate::pfaffian::{alt_normal_form, alt_rank, pfaffian, AlternatingMatrix};
use crate::singularity::sample::{admissible_jet, scrambled, Family};
use crate::singularity::{classify, oracle_verdict, SingularJet, ORACLE_ORDER};

/// The generators of Gamma as they follow from the substitution rules.
pub const GAMMA_EXPECTED: &str = "vars: w,v2,v1,y,u2,u1
u1*y^2 + v1^2
u2*y^2 + v2^2
w*v1 + u1*v2*y
w*v2 + u2*v1*y
v1*v2 + w*y
w^2 + u1*u2*y^2
";

/// A deliberate defect for exercising the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// Perturb the first computed generator of Gamma.
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialCounts {
    pub gamma_samples: usize,
    pub pfaffian: usize,
    pub normal_form: usize,
    pub classify: usize,
    pub pipeline: usize,
    pub fermat: usize,
}

impl Default for TrialCounts {
    fn default() -> Self {
        TrialCounts {
            gamma_samples: 20,
            pfaffian: 100,
            normal_form: 100,
            classify: 200,
            pipeline: 50,
            fermat: 20,
        }
    }
}

impl TrialCounts {
    /// Every randomized count replaced by `n`. The Jacobian sampling keeps
    /// its floor of 20 points on and off the plane.
    pub fn uniform(n: usize) -> Self {
        TrialCounts {
            gamma_samples: n.max(20),
            pfaffian: n,
            normal_form: n,
            classify: n,
            pipeline: n,
            fermat: n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub violations: Vec<String>,
    pub details: Value,
}

impl SuiteOutcome {
    fn new(id: u32, name: &str, checked: usize, violations: Vec<String>, details: Value) -> Self {
        SuiteOutcome {
            id,
            name: name.to_string(),
            passed: violations.is_empty(),
            checked,
            violations,
            details,
        }
    }
}

pub const SUITE_NAMES: [&str; 12] = [
    "gamma",
    "pfaffian",
    "normal-form",
    "classify",
    "section",
    "cusp",
    "fiber-length",
    "subring",
    "gamma-factor",
    "fermat",
    "chern",
    "vacuous",
];

/// An independent generator for trial `idx` of suite `suite`.
pub fn trial_rng(seed: u64, suite: u32, idx: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((suite as u64) << 32) | idx as u64);
    r
}

pub fn gamma_suite(seed: u64, samples: usize, fault: Option<Fault>) -> Result<SuiteOutcome> {
    let (vars, mut gens) = gamma_ideal(0)?;
    if fault == Some(Fault::Gamma) {
        let y = MultiPoly::var_named(gens[0].ring(), &vars, "y")?;
        gens[0] = gens[0].add(&y);
    }
    let k2 = Gf2k::prime();
    let (evars, expected) = parse_system(GAMMA_EXPECTED, &k2)?;
    let expected: Vec<_> = expected.iter().map(|p| p.embed(&vars)).collect::<Result<_>>()?;
    debug_assert_eq!(evars.len(), vars.len());
    let ord = MonomialOrder::natural(OrderKind::Grevlex, vars.len());
    let mut v = Vec::new();
    let gb_computed = buchberger(&gens, &ord)?;
    let gb_expected = buchberger(&expected, &ord)?;
    if !contains_all(&gb_computed, &expected, &ord) {
        v.push("expected generators are not in the computed ideal".to_string());
    }
    if !contains_all(&gb_expected, &gens, &ord) {
        v.push("computed generators are not in the expected ideal".to_string());
    }
    for g in &gens {
        if !gamma_pullback(g)?.is_zero() {
            v.push(format!("gamma^* does not kill {g}"));
        }
    }
    let field = Gf2k::default();
    let lifted: Vec<_> = gens.iter().map(|g| lift_to(&field, g)).collect();
    let mut rng = trial_rng(seed, 1, 0);
    let sl = singular_locus_check(&lifted, samples, &mut rng);
    if !sl.holds || samples < 20 {
        v.push(format!("Jacobian sampling: {sl:?}"));
    }
    let details = json!({
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "singular_locus": sl,
    });
    Ok(SuiteOutcome::new(1, SUITE_NAMES[0], gens.len(), v, details))
}

fn symbolic(n: usize) -> AlternatingMatrix<PolyRing<Integers>> {
    let names: Vec<String> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| format!("a{}_{}", i + 1, j + 1)))
        .collect();
    let pr = PolyRing::new(Integers, Vars::new(names));
    let mut k = 0;
    AlternatingMatrix::from_fn(&pr, n, |_, _| {
        k += 1;
        pr.var(k - 1)
    })
}

pub fn pfaffian_suite(seed: u64, trials: usize) -> Result<SuiteOutcome> {
    let mut v = Vec::new();
    let mut terms = Vec::new();
    for n in [2, 4, 6, 8] {
        let a = symbolic(n);
        let pf = pfaffian(&a)?;
        let det = a.to_matrix().det_expansion()?;
        if det != a.ring().mul(&pf, &pf) {
            v.push(format!("det != pf^2 symbolically for size {n}"));
        }
        terms.push(pf.num_terms());
    }
    let field = Gf2k::default();
    let bad: Vec<String> = (0..trials)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(seed, 2, i);
            let n = 2 * (1 + i % 5);
            let a = AlternatingMatrix::from_fn(&field, n, |_, _| field.random(&mut rng));
            let pf = pfaffian(&a).expect("even size");
            let det = a.to_matrix().det().expect("square");
            (det != field.mul(&pf, &pf)).then(|| format!("trial {i}: det != pf^2 over GF(2^16), size {n}"))
        })
        .collect();
    v.extend(bad);
    let details = json!({ "symbolic_sizes": [2, 4, 6, 8], "pfaffian_terms": terms, "numeric_trials": trials });
    Ok(SuiteOutcome::new(2, SUITE_NAMES[1], 4 + trials, v, details))
}

/// A random alternating matrix of size `n` whose rank is drawn too.
fn random_alternating(field: &Gf2k, n: usize, rng: &mut ChaCha8Rng) -> AlternatingMatrix<Gf2k> {
    use rand::Rng;
    let r = rng.random_range(0..=n / 2);
    let j = AlternatingMatrix::j_form(field, r, n);
    let b = Matrix::from_fn(field, n, n, |_, _| field.random(rng));
    j.congruence(&b).expect("square")
}

pub fn normal_form_suite(seed: u64, trials: usize) -> Result<SuiteOutcome> {
    let field = Gf2k::default();
    let out: Vec<(usize, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 3, i);
            let n = 1 + i % 10;
            let a = random_alternating(&field, n, &mut rng);
            let (t, r) = alt_normal_form(&a);
            let rank = alt_rank(&a);
            let nf = a.congruence(&t).expect("square");
            let err = if nf != AlternatingMatrix::j_form(&field, r, n) {
                Some(format!("trial {i}: T^t A T is not J_(2r,n), size {n}"))
            } else if rank % 2 == 1 || rank != 2 * r {
                Some(format!("trial {i}: rank {rank} with r = {r}"))
            } else {
                None
            };
            (rank, err)
        })
        .collect();
    let mut hist = [0usize; 11];
    for (r, _) in &out {
        hist[*r] += 1;
    }
    let v: Vec<String> = out.into_iter().filter_map(|(_, e)| e).collect();
    Ok(SuiteOutcome::new(3, SUITE_NAMES[2], trials, v, json!({ "rank_histogram": hist })))
}

fn hand_built() -> Result<Vec<(&'static str, SingularJet, bool, bool)>> {
    let f = Gf2k::default();
    let parse = |src: &str| -> Result<SingularJet> {
        let (_, ps) = parse_system(&format!("vars: x1,x2,xi1,xi2\n{src}\n"), &f)?;
        SingularJet::from_poly(ps[0].clone(), 4)
    };
    Ok(vec![
        ("C and R", parse("x1*x2 + xi1^3 + xi2^3")?, true, true),
        ("R but not C", parse("x1*x2 + xi1^3 + xi1*xi2^3")?, false, true),
        ("neither", parse("x1*x2 + xi1^3")?, false, false),
    ])
}

pub fn classify_suite(seed: u64, trials: usize) -> Result<SuiteOutcome> {
    let f = Gf2k::default();
    let families = [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA];
    let mut v = Vec::new();
    for (name, j, c, r) in hand_built()? {
        let rep = classify(&j, &[])?;
        let o = oracle_verdict(&j, ORACLE_ORDER)?;
        if (rep.type_c, rep.type_r) != (c, r) || (o.type_c, o.type_r) != (c, r) {
            v.push(format!(
                "{name}: flags ({}, {}), oracle ({}, {})",
                rep.type_c, rep.type_r, o.type_c, o.type_r
            ));
        }
    }
    let out: Vec<Result<(bool, bool, Option<String>)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 4, i);
            let j = scrambled(&admissible_jet(&f, 4, families[i % 4], &mut rng), &mut rng);
            let rep = classify(&j, &[])?;
            let o = oracle_verdict(&j, ORACLE_ORDER)?;
            let err = (rep.hessian_rank != 2 || (rep.type_c, rep.type_r) != (o.type_c, o.type_r)).then(|| {
                format!(
                    "trial {i}: rank {}, flags ({}, {}), oracle ({}, {}) with dims {} / {}",
                    rep.hessian_rank, rep.type_c, rep.type_r, o.type_c, o.type_r, o.dim_c, o.dim_r
                )
            });
            Ok((rep.type_c, rep.type_r, err))
        })
        .collect();
    let mut counts = [0usize; 4];
    for r in out {
        let (c, rr, e) = r?;
        counts[(c as usize) * 2 + rr as usize] += 1;
        v.extend(e);
    }
    let details = json!({
        "neither": counts[0], "r_only": counts[1], "c_only": counts[2], "c_and_r": counts[3],
    });
    Ok(SuiteOutcome::new(4, SUITE_NAMES[3], trials + 3, v, details))
}

/// The shared `n = 4, m = 7` pipeline trials behind suites 5 to 9.
pub fn pipeline_trials(seed: u64, trials: usize) -> Result<Vec<TrialRecord>> {
    let f = Gf2k::default();
    let families = [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA];
    let opts = TrialOptions::default();
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 5, i);
            let data = DiscriminantData::random(&f, 4, 7, families[i % 4], &mut rng);
            run_trial(i, &data, &mut rng, &opts)
        })
        .collect()
}

fn with_prefix<'a>(recs: &'a [TrialRecord], keys: &'a [&str]) -> impl Iterator<Item = String> + 'a {
    recs.iter().flat_map(move |r| {
        r.violations
            .iter()
            .filter(|v| keys.iter().any(|k| v.contains(k)))
            .map(move |v| format!("trial {}: {v}", r.index))
    })
}

pub fn pipeline_suites(recs: &[TrialRecord]) -> Vec<SuiteOutcome> {
    let n = recs.len();
    let mut out = Vec::new();

    let mut v: Vec<String> = with_prefix(recs, &["closed forms", "degenerate"]).collect();
    v.extend(
        recs.iter()
            .filter(|r| !r.rsm || r.closed_forms != Some(true))
            .map(|r| format!("trial {}: rsm {} closed forms {:?}", r.index, r.rsm, r.closed_forms)),
    );
    v.dedup();
    let coeffs: Vec<Value> = recs.iter().map(|r| json!({ "U2": r.u2, "V2": r.v2, "W2": r.w2, "Q": r.q })).collect();
    out.push(SuiteOutcome::new(5, SUITE_NAMES[4], n, v, json!({ "coefficients": coeffs })));

    let mut v: Vec<String> = with_prefix(recs, &["ordinary cusp", "multiplicity two", "smoothness"]).collect();
    v.extend(
        recs.iter()
            .filter(|r| r.cusp.is_none() || r.resamples > MAX_RESAMPLES)
            .map(|r| format!("trial {}: cusp {:?}, {} resamples", r.index, r.cusp, r.resamples)),
    );
    let resamples: Vec<usize> = recs.iter().map(|r| r.resamples).collect();
    let cusps = recs.iter().filter(|r| r.cusp == Some(true)).count();
    out.push(SuiteOutcome::new(
        6,
        SUITE_NAMES[5],
        n,
        v,
        json!({ "cusps": cusps, "type_r": recs.iter().filter(|r| r.type_r).count(), "resamples": resamples }),
    ));

    let v: Vec<String> = with_prefix(recs, &["fiber"]).collect();
    let points = recs.iter().filter(|r| r.type_c || r.type_r).count();
    out.push(SuiteOutcome::new(7, SUITE_NAMES[6], points, v, json!({
        "type_c_points": recs.iter().filter(|r| r.type_c).count(),
        "type_r_points": recs.iter().filter(|r| r.type_r).count(),
    })));

    let mut v: Vec<String> = with_prefix(recs, &["branch", "subring"]).collect();
    v.extend(
        recs.iter()
            .filter(|r| r.cusp == Some(true) && (r.subring_t != Some(true) || r.branch_residual_zero != Some(true)))
            .map(|r| format!("trial {}: subring {:?} residual {:?}", r.index, r.subring_t, r.branch_residual_zero)),
    );
    v.dedup();
    out.push(SuiteOutcome::new(8, SUITE_NAMES[7], cusps, v, json!({ "cusp_trials": cusps })));

    let mut v: Vec<String> = with_prefix(recs, &["factorization"]).collect();
    v.extend(
        recs.iter()
            .filter(|r| r.rsm && r.gamma_factor.is_none())
            .map(|r| format!("trial {}: factorization not checked", r.index)),
    );
    let rsm = recs.iter().filter(|r| r.rsm).count();
    out.push(SuiteOutcome::new(9, SUITE_NAMES[8], rsm, v, json!({ "rsm_points": rsm })));
    out
}

pub fn fermat_suite(seed: u64, samples: usize) -> Result<SuiteOutcome> {
    let k = Gf2k::default();
    let big_f = fermat(&k, 4, 1);
    let mut rng = trial_rng(seed, 10, 0);
    let mut ranks = Vec::new();
    let mut draws = 0;
    while ranks.len() < samples && draws < 100 * samples.max(1) {
        draws += 1;
        let Some(p) = fermat_point(&k, 4, &mut rng) else { continue };
        let j = hypersurface_chart(&big_f, &p, 4)?;
        ranks.push(alt_rank(&crate::singularity::hessian(&j)));
    }
    let mut v: Vec<String> = ranks
        .iter()
        .enumerate()
        .filter(|(_, &r)| r != 0)
        .map(|(i, r)| format!("sample {i}: Hessian rank {r}"))
        .collect();
    if ranks.len() < samples {
        v.push(format!("only {} Fermat points found", ranks.len()));
    }
    let mut control = Vec::new();
    for _ in 0..5 {
        let p: Vec<_> = (0..4).map(|i| if i == 0 { k.one() } else { k.random(&mut rng) }).collect();
        let g = random_cubic_through(&k, &p, &mut rng);
        control.push(alt_rank(&crate::singularity::hessian(&hypersurface_chart(&g, &p, 4)?)));
    }
    if !control.contains(&2) {
        v.push(format!("generic cubic never reached rank 2: {control:?}"));
    }
    let details = json!({ "fermat_ranks": ranks, "control_ranks": control });
    Ok(SuiteOutcome::new(10, SUITE_NAMES[9], samples + control.len(), v, details))
}

pub fn chern_suite() -> Result<SuiteOutcome> {
    let mut v = Vec::new();
    let g = degree_class(2)?;
    let want = GradedClass::parse(2, "6*lambda^2 - 6*c1*lambda + c1^2 + c2")?;
    if g != want {
        v.push(format!("h^2 coefficient for n = 2 is {g}"));
    }
    let expected = [12, 12, 24, 0, 60];
    let mut div = Vec::new();
    for ((name, t), w) in examples::all().into_iter().zip(expected) {
        let n = if name == "P4" { 4 } else { 2 };
        let r = divisibility_check(n, &t)?;
        if r.value != w.into() || !r.divisible_by_4 {
            v.push(format!("{name}: divisibility value {} (expected {w})", r.value));
        }
        for d in [4, 5, 6] {
            let deg = deg_r(n, &t, Some(d))?;
            if !deg.divisible_by_4 {
                v.push(format!("{name}: deg R = {} at lambda = {d}", deg.degree));
            }
        }
        div.push(json!({ "variety": name, "value": r.value.to_string() }));
    }
    let p2 = examples::p2();
    let mut degs = Vec::new();
    for (d, w) in [(3, 12), (4, 36), (5, 72)] {
        let r = deg_r(2, &p2, Some(d))?;
        if r.degree != w.into() || !r.divisible_by_4 {
            v.push(format!("P2: deg R = {} at lambda = {d}", r.degree));
        }
        degs.push(r.degree.to_string());
    }
    let details = json!({ "h2_coefficient": g.to_string(), "divisibility": div, "p2_degrees": degs });
    Ok(SuiteOutcome::new(11, SUITE_NAMES[10], 9, v, details))
}

pub fn vacuous_suite(seed: u64) -> Result<SuiteOutcome> {
    let f = Gf2k::default();
    let mut v = Vec::new();
    if !free_indices(2, 3).is_empty() {
        v.push("free index list for (2, 3) is not empty".to_string());
    }
    let mut checked = 0;
    for (i, fam) in [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA].into_iter().enumerate() {
        let mut rng = trial_rng(seed, 12, i);
        let data = DiscriminantData::random(&f, 2, 3, fam, &mut rng);
        let rep = rsm_test(&data)?;
        if rep.rsm || !rep.d.is_empty() || !rep.e.is_empty() {
            v.push(format!("{fam:?}: rsm {} with d {:?}, e {:?}", rep.rsm, rep.d, rep.e));
        }
        checked += 1;
    }
    Ok(SuiteOutcome::new(12, SUITE_NAMES[11], checked, v, json!({ "n": 2, "m": 3 })))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub counts: TrialCounts,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

/// Run every suite.
pub fn run_all(seed: u64, counts: &TrialCounts, fault: Option<Fault>) -> Result<SelfTestReport> {
    let mut suites = vec![
        gamma_suite(seed, counts.gamma_samples, fault)?,
        pfaffian_suite(seed, counts.pfaffian)?,
        normal_form_suite(seed, counts.normal_form)?,
        classify_suite(seed, counts.classify)?,
    ];
    suites.extend(pipeline_suites(&pipeline_trials(seed, counts.pipeline)?));
    suites.push(fermat_suite(seed, counts.fermat)?);
    suites.push(chern_suite()?);
    suites.push(vacuous_suite(seed)?);
    Ok(SelfTestReport {
        schema: 1,
        command: "selftest".into(),
        seed,
        counts: counts.clone(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
