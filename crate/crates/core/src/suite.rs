//! Deterministic property suites over random and catalog instances.
//!
//! Case `i` of suite `s` draws everything from `case_rng(seed, s, i)`, so its
//! inputs do not depend on how many cases run or in which order. Cases run in
//! parallel and are reassembled by index, which makes the report identical to
//! a serial run.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{
    family_mix, hausdorff, hull, minkowski_sum, project_point, ConvexBody, FamilyTag,
};
use crate::cantor::{box_hausdorff, build_cantor_scene, discontinuity_report, IntervalBox};
use crate::catalog::{case_rng, random_affine_group, random_body, random_body_with, random_catalog_group, random_point, random_unit, CaseRng};
use crate::error::{Error, Result};
use crate::extension::{dugundji_weights, extend, verify_extension_tol, ExtensionProblem};
use crate::group::{act_body, continuity_check_tol, GroupAction};
use crate::linearize::{lift_report, LiftedSpace};
use crate::nearest::CERTIFICATE_TOL;
use crate::problems::{fixed_problems, negative_control, orbit_problem, Orbit};
use crate::radstrom::{
    class_distance, embed_j, fd_act, fd_add, fd_norm, fd_scale, fd_sub, planar_critical_directions,
    support_realization, FormalDifference,
};
use crate::vector::{dist, norm, Point};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Agreement required between the projector and the enumeration oracle.
pub const PROJECTION_TOL: f64 = 1e-6;
/// A perturbed extension must report at least this equivariance defect.
pub const NEGATIVE_CONTROL_MIN: f64 = 1e-3;
pub const WEIGHT_TOL: f64 = 1e-12;

const SUPPORT_SAMPLES: usize = 1000;
const PROJECTION_SAMPLES: usize = 2000;
const CANCELLATION_CASES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Group,
    Radstrom,
    Extension,
    Cantor,
    Lift,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Metric,
        Suite::Group,
        Suite::Radstrom,
        Suite::Extension,
        Suite::Cantor,
        Suite::Lift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Group => "group",
            Suite::Radstrom => "radstrom",
            Suite::Extension => "extension",
            Suite::Cantor => "cantor",
            Suite::Lift => "lift",
        }
    }
}

/// `all` or a single suite name.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::ALL
        .into_iter()
        .find(|s| s.name() == name)
        .map(|s| vec![s])
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    /// Tolerance of every check whose default is `1e-9`.
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: usize) -> Self {
        Self {
            seed,
            cases,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Bound {
    /// Passes when `value <= tol`.
    AtMost,
    /// Passes when `value > tol`.
    Above,
    /// Reported only.
    Observed,
}

#[derive(Debug, Clone)]
struct Check {
    name: String,
    value: f64,
    tol: f64,
    bound: Bound,
}

impl Check {
    fn pass(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.tol,
            Bound::Above => self.value > self.tol,
            Bound::Observed => true,
        }
    }
}

struct Case {
    index: usize,
    rng: CaseRng,
    tol: f64,
    context: String,
    checks: Vec<Check>,
}

impl Case {
    fn push(&mut self, name: impl Into<String>, value: f64, tol: f64, bound: Bound) {
        self.checks.push(Check {
            name: name.into(),
            value,
            tol,
            bound,
        });
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64) {
        let tol = self.tol;
        self.push(name, value, tol, Bound::AtMost);
    }

    fn at_most_tol(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.push(name, value, tol, Bound::AtMost);
    }

    fn above(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.push(name, value, tol, Bound::Above);
    }

    fn observe(&mut self, name: impl Into<String>, value: f64) {
        self.push(name, value, 0.0, Bound::Observed);
    }
}

struct Outcome {
    label: String,
    context: String,
    checks: Vec<Check>,
    error: Option<Error>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub suite: &'static str,
    pub case: String,
    pub check: String,
    /// `null` when the case raised an error.
    pub value: f64,
    pub tol: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub tol: f64,
    pub failures: Vec<Failure>,
    /// Largest value of each upper-bounded check, keyed `suite.check`.
    pub max_defects: BTreeMap<String, f64>,
    /// Smallest value of each lower-bounded check (negative controls).
    pub min_signals: BTreeMap<String, f64>,
    /// Largest value of each reported-only quantity.
    pub observed: BTreeMap<String, f64>,
    pub passed: bool,
}

impl SuiteReport {
    fn empty(suite: &str, cfg: &SuiteConfig) -> Self {
        Self {
            suite: suite.to_string(),
            seed: cfg.seed,
            cases: cfg.cases,
            tol: cfg.tol,
            failures: Vec::new(),
            max_defects: BTreeMap::new(),
            min_signals: BTreeMap::new(),
            observed: BTreeMap::new(),
            passed: true,
        }
    }

    fn absorb(&mut self, suite: Suite, outcomes: Vec<Outcome>) {
        for o in outcomes {
            if let Some(e) = o.error {
                self.failures.push(Failure {
                    suite: suite.name(),
                    case: o.label.clone(),
                    check: "error".into(),
                    value: f64::NAN,
                    tol: 0.0,
                    detail: format!("{e}; {}", o.context),
                });
            }
            for c in o.checks {
                let key = format!("{}.{}", suite.name(), c.name);
                match c.bound {
                    Bound::AtMost => merge(&mut self.max_defects, key, c.value, f64::max),
                    Bound::Above => merge(&mut self.min_signals, key, c.value, f64::min),
                    Bound::Observed => merge(&mut self.observed, key, c.value, f64::max),
                }
                if !c.pass() {
                    self.failures.push(Failure {
                        suite: suite.name(),
                        case: o.label.clone(),
                        check: c.name,
                        value: c.value,
                        tol: c.tol,
                        detail: o.context.clone(),
                    });
                }
            }
        }
        self.passed = self.failures.is_empty();
    }
}

fn merge(map: &mut BTreeMap<String, f64>, key: String, value: f64, pick: fn(f64, f64) -> f64) {
    map.entry(key).and_modify(|v| *v = pick(*v, value)).or_insert(value);
}

/// Runs `name` (`all` or one suite) and assembles the aggregate report.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let suites = parse_suites(name)?;
    let mut report = SuiteReport::empty(name, cfg);
    for s in suites {
        report.absorb(s, run_one(s, cfg));
    }
    Ok(report)
}

fn run_one(suite: Suite, cfg: &SuiteConfig) -> Vec<Outcome> {
    match suite {
        Suite::Metric => run_random(suite, cfg, metric_case),
        Suite::Group => run_random(suite, cfg, group_case),
        Suite::Radstrom => run_random(suite, cfg, radstrom_case),
        Suite::Extension => {
            let mut out = extension_catalog(cfg);
            out.extend(run_random(suite, cfg, extension_case));
            out
        }
        Suite::Cantor => {
            let mut out = cantor_table(cfg);
            out.extend(run_random(suite, cfg, cantor_case));
            out
        }
        Suite::Lift => run_random(suite, cfg, lift_case),
    }
}

fn run_random(suite: Suite, cfg: &SuiteConfig, f: fn(&mut Case) -> Result<()>) -> Vec<Outcome> {
    (0..cfg.cases)
        .into_par_iter()
        .map(|index| {
            let mut cx = Case {
                index,
                rng: case_rng(cfg.seed, suite.name(), index as u64),
                tol: cfg.tol,
                context: String::new(),
                checks: Vec::new(),
            };
            let error = f(&mut cx).err();
            Outcome {
                label: index.to_string(),
                context: cx.context,
                checks: cx.checks,
                error,
            }
        })
        .collect()
}

fn labelled(label: String, tol: f64, f: impl FnOnce(&mut Case) -> Result<()>) -> Outcome {
    let mut cx = Case {
        index: 0,
        rng: case_rng(0, &label, 0),
        tol,
        context: String::new(),
        checks: Vec::new(),
    };
    let error = f(&mut cx).err();
    Outcome {
        label,
        context: cx.context,
        checks: cx.checks,
        error,
    }
}

// ---------------------------------------------------------------- metric

fn metric_case(cx: &mut Case) -> Result<()> {
    let d = 1 + cx.index % 4;
    let a = random_body(&mut cx.rng, d);
    let b = random_body(&mut cx.rng, d);
    let c = random_body(&mut cx.rng, d);
    cx.context = format!("d={d} |A|={} |B|={} |C|={}", a.len(), b.len(), c.len());

    let ab = hausdorff(&a, &b)?;
    let ba = hausdorff(&b, &a)?;
    let ac = hausdorff(&a, &c)?;
    let bc = hausdorff(&b, &c)?;
    cx.at_most("symmetry", (ab - ba).abs());
    cx.at_most("triangle", (ac - ab - bc).max(0.0));

    // The same set from a redundant description is at distance zero.
    let mut pts = a.vertices().to_vec();
    pts.extend(a.vertices().iter().rev().cloned());
    pts.push(a.centroid());
    cx.at_most("identity", hausdorff(&a, &hull(pts)?)?);
    let same = mutually_contained(&a, &b, cx.tol)?;
    cx.at_most_tol("separation", if (ab <= cx.tol) == same { 0.0 } else { 1.0 }, 0.0);

    let apc = minkowski_sum(&a, &c)?;
    let bpc = minkowski_sum(&b, &c)?;
    cx.at_most("translation_invariance", (hausdorff(&apc, &bpc)? - ab).abs());

    let mut additivity = 0.0f64;
    let mut lower = 0.0f64;
    for k in 0..SUPPORT_SAMPLES {
        let u = random_unit(&mut cx.rng, d);
        let (ha, hb) = (a.support(&u)?.value, b.support(&u)?.value);
        lower = lower.max((ha - hb).abs());
        if k < 16 {
            additivity = additivity.max((apc.support(&u)?.value - ha - c.support(&u)?.value).abs());
        }
    }
    cx.at_most("support_additivity", additivity);
    cx.at_most("support_lower_bound", (lower - ab).max(0.0));

    let t = cx.rng.gen_range(0.0..3.0);
    cx.at_most("scaling", (hausdorff(&a.scaled(t), &b.scaled(t))? - t * ab).abs());

    let pa = random_body(&mut cx.rng, 2);
    let pb = random_body(&mut cx.rng, 2);
    let x = FormalDifference::new(pa.clone(), pb.clone())?;
    let sample = support_realization(&x, &planar_critical_directions(&pa, &pb)?)?;
    cx.at_most("planar_support_realization", (sample.max_abs() - fd_norm(&x)?).abs());

    family_checks(cx, &a, &b, &c)?;

    // Closedness surrogate: a vertex pushed out of M by eps along a normal
    // of M stays eps away from every body inside M.
    let inner = shrink(&c, 0.5)?;
    let u = random_unit(&mut cx.rng, d);
    let top = c.vertices()[c.support(&u)?.witness].clone();
    let eps = cx.rng.gen_range(0.01..1.0);
    let mut pts = inner.vertices().to_vec();
    pts.push(top.iter().zip(&u).map(|(x, y)| x + eps * y).collect());
    cx.at_most("closedness", (eps - hausdorff(&hull(pts)?, &inner)?).max(0.0));

    if d <= 3 {
        let p = random_point(&mut cx.rng, d, 8.0);
        let np = project_point(&p, &a)?;
        cx.at_most_tol("projection_certificate", np.gap.max(0.0), CERTIFICATE_TOL);
        cx.at_most_tol("projection_oracle", (np.distance - enumerated_distance(&p, a.vertices())).abs(), PROJECTION_TOL);
        let sampled = sampled_distance(&mut cx.rng, &p, a.vertices());
        cx.at_most("projection_sampling_bound", (np.distance - sampled).max(0.0));
    }
    Ok(())
}

fn mutually_contained(a: &ConvexBody, b: &ConvexBody, tol: f64) -> Result<bool> {
    for v in a.vertices() {
        if !b.contains(v, tol)? {
            return Ok(false);
        }
    }
    for v in b.vertices() {
        if !a.contains(v, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `t A + (1 - t) c` with `c` the vertex centroid; lies inside `A`.
fn shrink(a: &ConvexBody, t: f64) -> Result<ConvexBody> {
    let c = a.centroid();
    let shift: Vec<f64> = c.iter().map(|x| (1.0 - t) * x).collect();
    a.scaled(t).translate(&shift)
}

fn family_checks(cx: &mut Case, a: &ConvexBody, b: &ConvexBody, m: &ConvexBody) -> Result<()> {
    let symmetric = |x: &ConvexBody| {
        let mut pts = x.vertices().to_vec();
        pts.extend(x.vertices().iter().map(|v| v.iter().map(|c| -c).collect()));
        hull(pts)
    };
    let pairs = [
        (FamilyTag::All, a.clone(), b.clone()),
        (FamilyTag::FullDimensional, a.clone(), b.clone()),
        (FamilyTag::CentrallySymmetric, symmetric(a)?, symmetric(b)?),
        (FamilyTag::WithinBody(m.clone()), shrink(m, 0.5)?, shrink(m, 0.2)?),
    ];
    let t = cx.rng.gen_range(0.0..=1.0);
    let mut broken = 0.0;
    for (tag, x, y) in pairs {
        if tag.contains(&x)? && tag.contains(&y)? && !tag.contains(&family_mix(&x, &y, t)?)? {
            broken = 1.0;
        }
    }
    cx.at_most_tol("family_closure", broken, 0.0);
    Ok(())
}

/// Exact distance from `p` to `conv(vertices)` by enumerating simplices of at
/// most `d + 1` vertices: the nearest point lies in the relative interior of
/// one of them, where it is the projection onto their affine hull.
pub fn enumerated_distance(p: &[f64], vertices: &[Point]) -> f64 {
    let d = p.len();
    let mut best = f64::INFINITY;
    let mut subset = Vec::new();
    enumerate(vertices.len(), d + 1, 0, &mut subset, &mut |s| {
        if let Some(q) = affine_projection(p, vertices, s) {
            best = best.min(dist(p, &q));
        }
    });
    best
}

fn enumerate(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    for i in start..n {
        cur.push(i);
        f(cur);
        if cur.len() < max {
            enumerate(n, max, i + 1, cur, f);
        }
        cur.pop();
    }
}

/// Projection of `p` onto the affine hull of `vertices[s]`, if it lies in
/// their convex hull.
fn affine_projection(p: &[f64], vertices: &[Point], s: &[usize]) -> Option<Point> {
    let base = &vertices[s[0]];
    if s.len() == 1 {
        return Some(base.clone());
    }
    let d = p.len();
    let m = DMatrix::from_fn(d, s.len() - 1, |r, c| vertices[s[c + 1]][r] - base[r]);
    let rhs = DVector::from_iterator(d, p.iter().zip(base).map(|(x, b)| x - b));
    let mu = m.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
    let first = 1.0 - mu.sum();
    if first < -1e-9 || mu.iter().any(|&x| x < -1e-9) {
        return None;
    }
    let q = &m * &mu;
    Some(base.iter().zip(q.iter()).map(|(b, x)| b + x).collect())
}

/// Smallest distance from `p` to random convex combinations of the vertices:
/// an upper bound on the true distance.
fn sampled_distance(rng: &mut CaseRng, p: &[f64], vertices: &[Point]) -> f64 {
    let mut best = vertices.iter().map(|v| dist(p, v)).fold(f64::INFINITY, f64::min);
    for _ in 0..PROJECTION_SAMPLES {
        let w: Vec<f64> = vertices.iter().map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let total: f64 = w.iter().sum();
        let q: Point = (0..p.len())
            .map(|r| vertices.iter().zip(&w).map(|(v, x)| v[r] * x).sum::<f64>() / total)
            .collect();
        best = best.min(dist(p, &q));
    }
    best
}

// ----------------------------------------------------------------- group

fn random_element(rng: &mut CaseRng, g: &GroupAction) -> usize {
    rng.gen_range(0..g.order())
}

fn group_case(cx: &mut Case) -> Result<()> {
    let d = 1 + cx.index % 3;
    let cat = random_catalog_group(&mut cx.rng, d, 48);
    let g = cat.build()?;
    let h = random_element(&mut cx.rng, &g);
    let k = random_element(&mut cx.rng, &g);
    let a = random_body(&mut cx.rng, d);
    let b = random_body(&mut cx.rng, d);
    cx.context = format!("d={d} group={:?} |G|={} h={h} k={k}", cat.family, g.order());

    let cont = continuity_check_tol(&a, g.element(h), cx.tol)?;
    cx.at_most("continuity", (cont.lhs - cont.rhs).max(0.0));

    let (ha, hb) = (g.act_body(h, &a)?, g.act_body(h, &b)?);
    cx.at_most("isometry_invariance", (hausdorff(&ha, &hb)? - hausdorff(&a, &b)?).abs());

    let composed = g.act_body(g.product(h, k), &a)?;
    let stepwise = g.act_body(h, &g.act_body(k, &a)?)?;
    cx.at_most("action_composition", hausdorff(&composed, &stepwise)?);
    cx.at_most("action_identity", hausdorff(&g.act_body(g.identity(), &a)?, &a)?);
    cx.at_most(
        "inverse",
        hausdorff(&g.act_body(g.inverse(h), &ha)?, &a)?,
    );

    let u = random_unit(&mut cx.rng, d);
    let lt_u: Vec<f64> = (g.element(h).linear.transpose() * DVector::from_column_slice(&u)).iter().cloned().collect();
    cx.at_most("support_equivariance", (ha.support(&u)?.value - a.support_unchecked(&lt_u).value).abs());
    Ok(())
}

// -------------------------------------------------------------- radstrom

fn radstrom_case(cx: &mut Case) -> Result<()> {
    let d = 1 + cx.index % 3;
    let a = random_body(&mut cx.rng, d);
    let b = random_body(&mut cx.rng, d);
    let c = random_body(&mut cx.rng, d);
    let cat = random_catalog_group(&mut cx.rng, d, 48);
    let g = cat.build()?;
    let h = random_element(&mut cx.rng, &g);
    let t = cx.rng.gen_range(0.0..3.0);
    cx.context = format!("d={d} group={:?} h={h} t={t}", cat.family);

    let (ja, jb) = (embed_j(&a), embed_j(&b));
    let ab = hausdorff(&a, &b)?;
    cx.at_most("j_isometry", (fd_norm(&fd_sub(&ja, &jb)?)? - ab).abs());
    cx.at_most("homogeneity", class_distance(&embed_j(&a.scaled(t)), &fd_scale(t, &ja))?);
    cx.at_most("additivity", class_distance(&embed_j(&minkowski_sum(&a, &b)?), &fd_add(&ja, &jb)?)?);

    let x = FormalDifference::new(a.clone(), b.clone())?;
    let zero = FormalDifference::zero(d);
    cx.at_most("inverse", class_distance(&fd_add(&x, &fd_scale(-1.0, &x))?, &zero)?);
    let y = embed_j(&c);
    let sum_norm = fd_norm(&fd_add(&x, &y)?)?;
    cx.at_most("norm_triangle", (sum_norm - fd_norm(&x)? - fd_norm(&y)?).max(0.0));

    let el = g.element(h);
    cx.at_most("act_isometry", (fd_norm(&fd_act(el, &x)?)? - fd_norm(&x)?).abs());
    cx.at_most("act_equivariance", class_distance(&embed_j(&act_body(el, &a)?), &fd_act(el, &ja)?)?);
    let lhs = fd_act(el, &fd_add(&x, &y)?)?;
    let rhs = fd_add(&fd_act(el, &x)?, &fd_act(el, &y)?)?;
    cx.at_most("act_additivity", class_distance(&lhs, &rhs)?);

    if cx.index < CANCELLATION_CASES {
        let apc = minkowski_sum(&a, &c)?;
        let bpc = minkowski_sum(&b, &c)?;
        let common = FormalDifference::new(apc.clone(), c.clone())?;
        cx.at_most("cancellation", class_distance(&common, &ja)?);
        cx.at_most("cancellation_distance", (class_distance(&embed_j(&apc), &embed_j(&bpc))? - ab).abs());
    }
    Ok(())
}

// ------------------------------------------------------------- extension

fn extension_checks(cx: &mut Case, p: &ExtensionProblem) -> Result<()> {
    let space = p.space();
    let mut partition = 0.0f64;
    for z in 0..space.len() {
        let w = dugundji_weights(space, p.subset(), z)?;
        partition = partition.max((w.iter().map(|x| x.1).sum::<f64>() - 1.0).abs());
        if p.value(z).is_some() {
            let own: f64 = w.iter().filter(|x| x.0 == z).map(|x| x.1).sum();
            partition = partition.max((own - 1.0).abs());
        }
    }
    cx.at_most_tol("weight_partition", partition, WEIGHT_TOL);

    let f = extend(p)?;
    let report = verify_extension_tol(p, &f, cx.tol)?;
    cx.at_most("restriction", report.restriction_error);
    cx.at_most("equivariance", report.equivariance_defect);
    cx.observe("modulus_ratio", report.max_modulus_ratio);
    Ok(())
}

fn extension_catalog(cfg: &SuiteConfig) -> Vec<Outcome> {
    let problems = match fixed_problems() {
        Ok(p) => p,
        Err(e) => {
            return vec![Outcome {
                label: "catalog".into(),
                context: String::new(),
                checks: Vec::new(),
                error: Some(e),
            }]
        }
    };
    problems
        .par_iter()
        .map(|np| {
            labelled(np.name.to_string(), cfg.tol, |cx| {
                let p = &np.problem;
                cx.context = format!("|Z|={} |G|={} d={}", p.space().len(), p.space().group().order(), p.dim());
                extension_checks(cx, p)?;
                let offset = &[0.5, 0.3, 0.1][..p.dim()];
                let control = negative_control(p, offset, cx.tol)?;
                cx.above("negative_control", control.equivariance_defect, NEGATIVE_CONTROL_MIN);
                Ok(())
            })
        })
        .collect()
}

fn extension_case(cx: &mut Case) -> Result<()> {
    let d = 1 + cx.index % 2;
    let mut cat = random_catalog_group(&mut cx.rng, d, 8);
    let center = if cx.index % 4 >= 2 {
        let c = random_point(&mut cx.rng, d, 1.0);
        cat = cat.translated(c.clone());
        c
    } else {
        vec![0.0; d]
    };
    let g = cat.build()?;
    let rep = random_point(&mut cx.rng, d, 3.0);
    let body = random_body_with(&mut cx.rng, d, 3, 6, 0.4).translate(&rep)?;
    let outside = random_point(&mut cx.rng, d, 3.0);
    cx.context = format!("d={d} group={:?} |G|={}", cat.family, g.order());
    let orbits = [Orbit::inside(rep, body), Orbit::outside(outside)];
    let p = orbit_problem(&g, &DMatrix::identity(d, d), &orbits, &[center])?;
    extension_checks(cx, &p)
}

// ---------------------------------------------------------------- cantor

fn cantor_table(cfg: &SuiteConfig) -> Vec<Outcome> {
    (1..=6)
        .map(|k| {
            labelled(format!("k={k}"), cfg.tol, |cx| {
                let report = discontinuity_report(&build_cantor_scene(k)?)?;
                let off_one = report.rows.iter().map(|r| (r.d_h - 1.0).abs()).fold(0.0, f64::max);
                cx.at_most_tol("hausdorff_is_one", off_one, 0.0);
                cx.at_most_tol("max_ratio", (report.max_ratio - (1u64 << k) as f64).abs(), 0.0);
                cx.observe(format!("max_ratio_k{k}"), report.max_ratio);
                Ok(())
            })
        })
        .collect()
}

fn random_box(rng: &mut CaseRng, n: usize) -> Result<IntervalBox> {
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        lo.push(x.min(y));
        hi.push(x.max(y));
    }
    IntervalBox::new(lo, hi)
}

fn cantor_case(cx: &mut Case) -> Result<()> {
    let k = 1 + cx.index % 8;
    let scene = build_cantor_scene(k)?;
    let g = cx.rng.gen_range(0..scene.order());
    let y = cx.rng.gen_range(1..scene.order());
    cx.context = format!("k={k} g={g} y={y}");
    let p = random_box(&mut cx.rng, scene.dim())?;
    let q = random_box(&mut cx.rng, scene.dim())?;
    let moved = box_hausdorff(&scene.act_box(g, &p)?, &scene.act_box(g, &q)?)?;
    cx.at_most_tol("box_isometry", (moved - box_hausdorff(&p, &q)?).abs(), 0.0);

    let ya = scene.act_box(y, scene.base_box())?;
    let pinned: Vec<usize> = (0..scene.dim()).filter(|&i| ya.hi()[i] == 0.0).collect();
    cx.at_most_tol("pinned_coordinate", if pinned == [y] { 0.0 } else { 1.0 }, 0.0);
    cx.at_most_tol("hausdorff_is_one", (box_hausdorff(scene.base_box(), &ya)? - 1.0).abs(), 0.0);
    Ok(())
}

// ------------------------------------------------------------------ lift

fn lift_case(cx: &mut Case) -> Result<()> {
    let d = 1 + cx.index % 3;
    let cat = if cx.index % 2 == 0 {
        random_affine_group(&mut cx.rng, d, 12)
    } else {
        random_catalog_group(&mut cx.rng, d, 12).sheared(0.5)
    };
    let sp = LiftedSpace::new(cat.build()?)?;
    let order = sp.blocks();
    let h = if order > 1 { cx.rng.gen_range(1..order) } else { 0 };
    let a = random_body_with(&mut cx.rng, d, 4, 8, 5.0);
    let b = random_body_with(&mut cx.rng, d, 4, 8, 5.0);
    cx.context = format!("d={d} group={:?} conjugation={:?} |G|={order} h={h}", cat.family, cat.conjugation);

    let report = lift_report(&sp, &a, Some(&b), &[h])?;
    cx.at_most("point_equivariance", report.point_defect);
    cx.at_most("body_equivariance", report.body_defect);
    cx.at_most("continuity", report.continuity_slack.max(0.0));
    cx.at_most("isometry_invariance", report.isometry_defect.unwrap_or(f64::NAN));
    if let Some(r) = report.distortion {
        cx.observe("distortion", r);
    }

    let bn = sp.norm();
    let x = random_point(&mut cx.rng, sp.lifted_dim(), 5.0);
    let moved = sp.act_lifted_point(h, &x)?;
    cx.at_most_tol("norm_invariance", (bn.norm(&moved) - bn.norm(&x)).abs(), 0.0);

    let lifted = sp.lifted_group().element(h);
    let n = sp.lifted_dim();
    let gram = lifted.linear.transpose() * &lifted.linear - DMatrix::<f64>::identity(n, n);
    let offset = norm(&lifted.offset);
    cx.at_most_tol("lifted_orthogonal", gram.amax().max(offset), 0.0);
    Ok(())
}
