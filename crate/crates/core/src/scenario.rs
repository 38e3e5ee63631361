//! Scenario files and the runner behind every CLI command.
//!
//! A scenario names one command with its inputs; running it yields a JSON
//! report echoing the inputs, every computed value, and a pass/fail line per
//! check. Nothing in a report depends on timing or thread scheduling, so the
//! same scenario always produces the same bytes.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::body::{directed_hausdorff, hausdorff, minkowski_sum, ConvexBody};
use crate::cantor::{build_cantor_scene, discontinuity_report};
use crate::catalog::{random_unit, CaseRng};
use crate::error::Result;
#[cfg(test)]
use crate::error::Error;
use crate::extension::{extend, verify_extension_tol};
use crate::io::{read_body, read_group, read_json, read_problem, to_json, write_body, BodyFile};
use crate::linearize::{lift_body, lift_report, LiftedSpace};
use crate::radstrom::{
    class_distance, embed_j, fd_add, fd_norm, fd_scale, fd_sub, planar_critical_directions, support_realization,
    FormalDifference,
};
use crate::suite::{run_suite, SuiteConfig, SuiteReport, DEFAULT_TOL};
use crate::vector::Point;

pub const DEFAULT_DIRS: usize = 64;
const SUPPORT_SAMPLES: usize = 1000;

fn default_dirs() -> usize {
    DEFAULT_DIRS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Command {
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
    },
    Minkowski {
        a: PathBuf,
        b: PathBuf,
        #[serde(default)]
        out: Option<PathBuf>,
    },
    Embed {
        a: PathBuf,
        b: PathBuf,
        #[serde(default = "default_dirs")]
        dirs: usize,
    },
    Extend {
        problem: PathBuf,
    },
    Cantor {
        k: usize,
    },
    Lift {
        group: PathBuf,
        body: PathBuf,
        /// Second body for the isometry check.
        #[serde(default)]
        other: Option<PathBuf>,
    },
    Verify {
        suite: String,
        cases: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hausdorff { .. } => "hausdorff",
            Command::Minkowski { .. } => "minkowski",
            Command::Embed { .. } => "embed",
            Command::Extend { .. } => "extend",
            Command::Cantor { .. } => "cantor",
            Command::Lift { .. } => "lift",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Where to write the report; standard output when absent.
    #[serde(default)]
    pub report: Option<PathBuf>,
}

impl Scenario {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            seed: 0,
            tol: None,
            report: None,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    /// Reads a scenario file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut s: Scenario = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut s.command {
            Command::Hausdorff { a, b } | Command::Embed { a, b, .. } => {
                fix(a);
                fix(b);
            }
            Command::Minkowski { a, b, out } => {
                fix(a);
                fix(b);
                if let Some(o) = out {
                    fix(o);
                }
            }
            Command::Extend { problem } => fix(problem),
            Command::Lift { group, body, other } => {
                fix(group);
                fix(body);
                if let Some(o) = other {
                    fix(o);
                }
            }
            Command::Cantor { .. } | Command::Verify { .. } => {}
        }
        if let Some(r) = &mut s.report {
            fix(r);
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Scenario(ScenarioReport),
    Suite(SuiteReport),
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Scenario(r) => r.passed,
            Report::Suite(r) => r.passed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

struct Checks {
    tol: f64,
    lines: Vec<CheckLine>,
}

impl Checks {
    fn at_most(&mut self, name: &str, value: f64) {
        let tol = self.tol;
        self.at_most_tol(name, value, tol);
    }

    fn at_most_tol(&mut self, name: &str, value: f64, tol: f64) {
        self.lines.push(CheckLine {
            name: name.to_string(),
            value,
            tol,
            pass: value <= tol,
        });
    }

    fn finish(self, command: &'static str, inputs: Value, results: Value) -> Report {
        let passed = self.lines.iter().all(|c| c.pass);
        Report::Scenario(ScenarioReport {
            command,
            inputs,
            results,
            checks: self.lines,
            passed,
        })
    }
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn body_json(a: &ConvexBody) -> Value {
    serde_json::to_value(BodyFile::from(a)).expect("bodies serialize")
}

/// Sampled `max_u |h_A(u) - h_B(u)|`, a lower bound on `d_H(A, B)`.
fn sampled_support_gap(a: &ConvexBody, b: &ConvexBody, seed: u64) -> Result<f64> {
    let mut rng = CaseRng::seed_from_u64(seed);
    let mut gap = 0.0f64;
    for _ in 0..SUPPORT_SAMPLES {
        let u = random_unit(&mut rng, a.dim());
        gap = gap.max((a.support(&u)?.value - b.support(&u)?.value).abs());
    }
    Ok(gap)
}

/// `n` directions: both signs in R^1, evenly spaced angles in the plane,
/// seeded random units otherwise.
pub fn direction_set(dim: usize, n: usize, seed: u64) -> Vec<Point> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let mut rng = CaseRng::seed_from_u64(seed);
            (0..n).map(|_| random_unit(&mut rng, dim)).collect()
        }
    }
}

pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let tol = s.tol();
    let mut checks = Checks { tol, lines: Vec::new() };
    let name = s.command.name();
    match &s.command {
        Command::Hausdorff { a, b } => {
            let (ba, bb) = (read_body(a)?, read_body(b)?);
            let ab = directed_hausdorff(&ba, &bb)?;
            let ba_dir = directed_hausdorff(&bb, &ba)?;
            let d = ab.max(ba_dir);
            checks.at_most("symmetry", (hausdorff(&bb, &ba)? - d).abs());
            let gap = sampled_support_gap(&ba, &bb, s.seed)?;
            checks.at_most("support_lower_bound", (gap - d).max(0.0));
            Ok(checks.finish(
                name,
                json!({"a": show(a), "b": show(b), "seed": s.seed, "tol": tol}),
                json!({"hausdorff": d, "directed_ab": ab, "directed_ba": ba_dir, "support_gap": gap}),
            ))
        }
        Command::Minkowski { a, b, out } => {
            let (ba, bb) = (read_body(a)?, read_body(b)?);
            let sum = minkowski_sum(&ba, &bb)?;
            let mut rng = CaseRng::seed_from_u64(s.seed);
            let mut additivity = 0.0f64;
            for _ in 0..SUPPORT_SAMPLES {
                let u = random_unit(&mut rng, sum.dim());
                let gap = sum.support(&u)?.value - ba.support(&u)?.value - bb.support(&u)?.value;
                additivity = additivity.max(gap.abs());
            }
            checks.at_most("support_additivity", additivity);
            if let Some(o) = out {
                write_body(o, &sum)?;
            }
            Ok(checks.finish(
                name,
                json!({"a": show(a), "b": show(b), "out": out.as_deref().map(show), "seed": s.seed, "tol": tol}),
                json!({"sum": body_json(&sum), "vertices": sum.len()}),
            ))
        }
        Command::Embed { a, b, dirs } => {
            let (ba, bb) = (read_body(a)?, read_body(b)?);
            let (ja, jb) = (embed_j(&ba), embed_j(&bb));
            let d_h = hausdorff(&ba, &bb)?;
            let diff_norm = fd_norm(&fd_sub(&ja, &jb)?)?;
            checks.at_most("j_isometry", (diff_norm - d_h).abs());
            let additivity = class_distance(&embed_j(&minkowski_sum(&ba, &bb)?), &fd_add(&ja, &jb)?)?;
            checks.at_most("additivity", additivity);
            let homogeneity = class_distance(&embed_j(&ba.scaled(2.0)), &fd_scale(2.0, &ja))?;
            checks.at_most("homogeneity", homogeneity);
            let x = FormalDifference::new(ba.clone(), bb.clone())?;
            let zero = FormalDifference::zero(ba.dim());
            checks.at_most("inverse", class_distance(&fd_add(&x, &fd_scale(-1.0, &x))?, &zero)?);
            let sample = support_realization(&x, &direction_set(ba.dim(), *dirs, s.seed))?;
            checks.at_most("support_lower_bound", (sample.max_abs() - diff_norm).max(0.0));
            let planar = if ba.dim() == 2 {
                let exact = support_realization(&x, &planar_critical_directions(&ba, &bb)?)?.max_abs();
                checks.at_most("planar_support_realization", (exact - diff_norm).abs());
                Some(exact)
            } else {
                None
            };
            Ok(checks.finish(
                name,
                json!({"a": show(a), "b": show(b), "dirs": dirs, "seed": s.seed, "tol": tol}),
                json!({
                    "norm_j_a": fd_norm(&ja)?,
                    "norm_j_b": fd_norm(&jb)?,
                    "norm_difference": diff_norm,
                    "hausdorff": d_h,
                    "support_sample": {"directions": sample.directions, "values": sample.values},
                    "support_sample_max": sample.max_abs(),
                    "planar_support_max": planar,
                }),
            ))
        }
        Command::Extend { problem } => {
            let p = read_problem(problem)?;
            let f = extend(&p)?;
            let report = verify_extension_tol(&p, &f, tol)?;
            checks.at_most("restriction", report.restriction_error);
            checks.at_most("equivariance", report.equivariance_defect);
            let values: Vec<Value> = p
                .space()
                .points()
                .iter()
                .zip(&f)
                .map(|(z, b)| json!({"point": z, "body": body_json(b)}))
                .collect();
            Ok(checks.finish(
                name,
                json!({"problem": show(problem), "points": p.space().len(), "order": p.space().group().order(), "tol": tol}),
                json!({"extension": values, "report": report}),
            ))
        }
        Command::Cantor { k } => {
            let report = discontinuity_report(&build_cantor_scene(*k)?)?;
            checks.at_most_tol("lower_bound", (1.0 - report.min_d_h).max(0.0), 0.0);
            checks.at_most_tol("max_ratio", (report.max_ratio - (1u64 << k) as f64).abs(), 0.0);
            Ok(checks.finish(name, json!({"k": k}), serde_json::to_value(&report).expect("report serializes")))
        }
        Command::Lift { group, body, other } => {
            let g = read_group(group)?;
            let a = read_body(body)?;
            let b = other.as_deref().map(read_body).transpose()?;
            let sp = LiftedSpace::new(g)?;
            let elements: Vec<usize> = (0..sp.blocks()).collect();
            let report = lift_report(&sp, &a, b.as_ref(), &elements)?;
            checks.at_most("point_equivariance", report.point_defect);
            checks.at_most("body_equivariance", report.body_defect);
            checks.at_most("continuity", report.continuity_slack.max(0.0));
            if let Some(d) = report.isometry_defect {
                checks.at_most("isometry_invariance", d);
            }
            Ok(checks.finish(
                name,
                json!({"group": show(group), "body": show(body), "other": other.as_deref().map(show), "tol": tol}),
                json!({"lifted_body": body_json(&lift_body(&a, &sp)?), "report": report}),
            ))
        }
        Command::Verify { suite, cases } => {
            let cfg = SuiteConfig {
                seed: s.seed,
                cases: *cases,
                tol,
            };
            Ok(Report::Suite(run_suite(suite, &cfg)?))
        }
    }
}

/// Runs `s` and writes the report where it asks, returning the report.
pub fn execute(s: &Scenario) -> Result<Report> {
    let report = run_scenario(s)?;
    if let Some(path) = &s.report {
        crate::io::write_json(path, &report)?;
    }
    Ok(report)
}
