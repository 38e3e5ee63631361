//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines always print; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperconvex::cantor::{build_cantor_scene, discontinuity_report};
use hyperconvex::problems::fixed_problems;
use hyperconvex::suite::{run_suite, SuiteConfig, SuiteReport};

const TOL: f64 = 1e-9;
const PROJECTION_TOL: f64 = 1e-6;
const NEGATIVE_CONTROL_MIN: f64 = 1e-3;
const CANTOR_BUDGET: Duration = Duration::from_secs(5);
const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn suite(name: &str, cases: usize) -> Result<SuiteReport, String> {
    run_suite(name, &SuiteConfig::new(SEED, cases)).map_err(|e| e.to_string())
}

fn defect(r: &SuiteReport, key: &str) -> f64 {
    r.max_defects.get(key).copied().unwrap_or(f64::NAN)
}

/// Every listed check stayed within `tol`. Callers decide whether unrelated
/// failures in the same report also count.
fn bounded(r: &SuiteReport, keys: &[&str], tol: f64) -> Verdict {
    let mut worst = Vec::new();
    let mut pass = true;
    for k in keys {
        let v = defect(r, k);
        pass &= v <= tol;
        worst.push(format!("{k}={v:.2e}"));
    }
    Verdict {
        pass,
        detail: worst.join(" "),
    }
}

fn criterion_1() -> Result<Verdict, String> {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 1..=6 {
        let r = discontinuity_report(&build_cantor_scene(k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let all_one = r.rows.len() == (1 << k) - 1 && r.rows.iter().all(|row| row.d_h == 1.0);
        let mut nearest = vec![1i8; k];
        nearest[k - 1] = -1;
        let ratio_ok = r.max_ratio == (1u64 << k) as f64 && r.argmax == nearest;
        pass &= all_one && ratio_ok;
        notes.push(format!("k{k}:ratio={}", r.max_ratio));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < CANTOR_BUDGET;
    Ok(Verdict {
        pass,
        detail: format!("{} runtime={elapsed:.2?}", notes.join(" ")),
    })
}

fn criterion_6() -> Result<Verdict, String> {
    let r = suite("metric", 1000)?;
    let exact = bounded(
        &r,
        &[
            "metric.identity",
            "metric.symmetry",
            "metric.triangle",
            "metric.separation",
            "metric.translation_invariance",
            "metric.support_additivity",
            "metric.planar_support_realization",
        ],
        TOL,
    );
    let proj = bounded(&r, &["metric.projection_oracle"], PROJECTION_TOL);
    Ok(Verdict {
        pass: exact.pass && proj.pass && r.passed,
        detail: format!("{} {} failures={}", exact.detail, proj.detail, r.failures.len()),
    })
}

fn criterion_5() -> Result<Verdict, String> {
    let problems = fixed_problems().map_err(|e| e.to_string())?;
    let sized = problems.len() >= 10
        && problems.iter().all(|np| {
            let p = &np.problem;
            p.space().len() <= 64 && p.space().group().order() <= 24 && p.dim() <= 3
        });
    let kinds: std::collections::BTreeSet<_> =
        problems.iter().map(|np| format!("{:?}", np.problem.space().group().kind())).collect();
    let r = suite("extension", 0)?;
    let v = bounded(&r, &["extension.restriction", "extension.equivariance"], TOL);
    let control = r.min_signals.get("extension.negative_control").copied().unwrap_or(f64::NAN);
    Ok(Verdict {
        pass: sized && kinds.len() >= 2 && v.pass && control > NEGATIVE_CONTROL_MIN && r.passed,
        detail: format!(
            "problems={} kinds={kinds:?} {} min_negative_control={control:.2e}",
            problems.len(),
            v.detail
        ),
    })
}

fn criterion_8() -> Result<Verdict, String> {
    let dir = std::env::temp_dir().join(format!("hyperconvex-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    let mut codes = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("all-{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_hyperconvex"))
            .args(["verify", "--suite", "all", "--seed", "7", "--cases", "200", "--report"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        codes.push(status.code());
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(Verdict {
        pass: bytes[0] == bytes[1] && codes.iter().all(|c| *c == Some(0)),
        detail: format!("report bytes={} identical={} exit={codes:?}", bytes[0].len(), bytes[0] == bytes[1]),
    })
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Box<dyn Fn() -> Result<Verdict, String>>);
    let criteria: Vec<Criterion> = vec![
        ("1 cantor discontinuity", Box::new(criterion_1)),
        (
            "2 continuity bound",
            Box::new(|| Ok(bounded(&suite("group", 1000)?, &["group.continuity"], TOL))),
        ),
        (
            "3 isometric invariance",
            Box::new(|| Ok(bounded(&suite("group", 1000)?, &["group.isometry_invariance"], TOL))),
        ),
        (
            "4 formal differences",
            Box::new(|| {
                let r = suite("radstrom", 500)?;
                let mut v = bounded(
                    &r,
                    &[
                        "radstrom.j_isometry",
                        "radstrom.homogeneity",
                        "radstrom.additivity",
                        "radstrom.act_isometry",
                        "radstrom.act_equivariance",
                        "radstrom.cancellation",
                        "radstrom.cancellation_distance",
                    ],
                    TOL,
                );
                v.pass &= r.passed;
                Ok(v)
            }),
        ),
        ("5 equivariant extension", Box::new(criterion_5)),
        ("6 metric and algebra oracles", Box::new(criterion_6)),
        (
            "7 linearization",
            Box::new(|| {
                let r = suite("lift", 200)?;
                let mut v = bounded(
                    &r,
                    &[
                        "lift.point_equivariance",
                        "lift.body_equivariance",
                        "lift.continuity",
                        "lift.isometry_invariance",
                    ],
                    TOL,
                );
                let exact = bounded(&r, &["lift.norm_invariance", "lift.lifted_orthogonal"], 0.0);
                v.pass &= exact.pass && r.passed;
                v.detail = format!("{} {}", v.detail, exact.detail);
                Ok(v)
            }),
        ),
        ("8 determinism", Box::new(criterion_8)),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {name}: {} ({detail}) [{:.1?}]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
