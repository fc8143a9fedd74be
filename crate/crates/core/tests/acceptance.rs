//! One line per acceptance criterion. Arithmetic is exact, so every check is
//! an equality; the only numeric bounds are wall-clock limits and the
//! resample cap.

use std::time::{Duration, Instant};

use char2::discriminant::MAX_RESAMPLES;
use char2::suite::{self, SuiteOutcome, TrialCounts};

const SEED: u64 = 2024;
const GAMMA_LIMIT: Duration = Duration::from_secs(10);
const SECTION_LIMIT: Duration = Duration::from_secs(60);
const RESAMPLE_LIMIT: usize = 3;

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    note: String,
}

fn from_suite(title: &'static str, s: &SuiteOutcome, extra: Option<(bool, String)>) -> Line {
    let (ok, more) = extra.unwrap_or((true, String::new()));
    let mut note = format!("{} checked", s.checked);
    if !more.is_empty() {
        note.push_str(", ");
        note.push_str(&more);
    }
    if let Some(v) = s.violations.first() {
        note.push_str(&format!(", first violation: {v}"));
    }
    Line {
        id: s.id,
        title,
        pass: s.passed && ok,
        note,
    }
}

fn main() {
    let counts = TrialCounts::default();
    let mut lines = Vec::new();

    let t = Instant::now();
    let g = suite::gamma_suite(SEED, counts.gamma_samples, None).unwrap();
    let dt = t.elapsed();
    lines.push(from_suite(
        "Gamma generators, pullbacks and singular locus",
        &g,
        Some((dt < GAMMA_LIMIT, format!("{dt:.2?} (limit {GAMMA_LIMIT:?})"))),
    ));

    let s = suite::pfaffian_suite(SEED, counts.pfaffian).unwrap();
    lines.push(from_suite("det = pf^2 over Z and GF(2^16)", &s, None));

    let s = suite::normal_form_suite(SEED, counts.normal_form).unwrap();
    lines.push(from_suite("alternating normal form", &s, None));

    let s = suite::classify_suite(SEED, counts.classify).unwrap();
    lines.push(from_suite("rank conditions agree with the colength oracle", &s, None));

    let t = Instant::now();
    let recs = suite::pipeline_trials(SEED, counts.pipeline).unwrap();
    let dt = t.elapsed();
    let pipe = suite::pipeline_suites(&recs);
    let max_resamples = recs.iter().map(|r| r.resamples).max().unwrap_or(0);
    assert!(MAX_RESAMPLES <= RESAMPLE_LIMIT);
    let titles = [
        "section expansions match the closed forms",
        "ordinary cusp iff type (R)",
        "fiber length 4 with ideal (s^2, t^2)",
        "branch stays in the subring T",
        "pullbacks factor through Gamma",
    ];
    for (s, title) in pipe.iter().zip(titles) {
        let extra = match s.id {
            5 => Some((dt < SECTION_LIMIT, format!("{dt:.2?} for all trials (limit {SECTION_LIMIT:?})"))),
            6 => Some((
                max_resamples <= RESAMPLE_LIMIT,
                format!(
                    "resamples per trial {:?}",
                    recs.iter().map(|r| r.resamples).collect::<Vec<_>>()
                ),
            )),
            _ => None,
        };
        lines.push(from_suite(title, s, extra));
    }

    let s = suite::fermat_suite(SEED, counts.fermat).unwrap();
    lines.push(from_suite("Fermat tangent sections have Hessian rank 0", &s, None));

    let s = suite::chern_suite().unwrap();
    lines.push(from_suite("Chern degree and divisibility", &s, None));

    let s = suite::vacuous_suite(SEED).unwrap();
    lines.push(from_suite("no smooth points of R for (n, m) = (2, 3)", &s, None));

    println!();
    for l in &lines {
        println!(
            "criterion {:2} {}: {} ({})",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.title,
            l.note
        );
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
