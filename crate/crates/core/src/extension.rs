//! Equivariant extension of body-valued maps on finite metric G-spaces.
//!
//! Given an invariant subset `A` of a finite metric G-space `Z` and an
//! equivariant `f: A -> bodies`, [`dugundji_extend`] produces an extension by
//! Minkowski convex combinations with Dugundji weights, and
//! [`equivariant_average`] makes it equivariant by averaging over the group:
//! `F_G(z) = (1/|G|) Σ_g g⁻¹ F(gz)`. Averaging leaves values on `A` unchanged
//! because each term `g⁻¹ f(ga)` already equals `f(a)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::body::{hausdorff, minkowski_combination, ConvexBody};
use crate::error::{check_dim, Error, Result};
use crate::group::GroupAction;

/// Tolerance for metric axioms and metric invariance.
pub const METRIC_TOL: f64 = 1e-9;
/// Tolerance for equivariance of the input map.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

/// A finite metric space with an isometric permutation action.
#[derive(Debug, Clone)]
pub struct FiniteGSpace {
    points: Vec<String>,
    metric: Vec<Vec<f64>>,
    /// `permutations[g][z]` is the index of `g·z`.
    permutations: Vec<Vec<usize>>,
    group: GroupAction,
}

impl FiniteGSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn metric(&self, z: usize, w: usize) -> f64 {
        self.metric[z][w]
    }

    pub fn act(&self, g: usize, z: usize) -> usize {
        self.permutations[g][z]
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }
}

/// Validates and assembles a [`FiniteGSpace`].
pub fn build_gspace(
    points: Vec<String>,
    metric: Vec<Vec<f64>>,
    permutations: Vec<Vec<usize>>,
    group: GroupAction,
) -> Result<FiniteGSpace> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if metric.len() != n || metric.iter().any(|r| r.len() != n) {
        return Err(Error::MetricViolation(format!("metric must be {n}x{n}")));
    }
    for i in 0..n {
        if metric[i][i].abs() > METRIC_TOL {
            return Err(Error::MetricViolation(format!("nonzero diagonal at {i}")));
        }
        for j in 0..n {
            let d = metric[i][j];
            if !d.is_finite() || d < 0.0 {
                return Err(Error::MetricViolation(format!("invalid distance at ({i}, {j})")));
            }
            if i != j && d <= 0.0 {
                return Err(Error::MetricViolation(format!("distinct points {i}, {j} at distance 0")));
            }
            if (d - metric[j][i]).abs() > METRIC_TOL {
                return Err(Error::MetricViolation(format!("asymmetric at ({i}, {j})")));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if metric[i][k] > metric[i][j] + metric[j][k] + METRIC_TOL {
                    return Err(Error::MetricViolation(format!(
                        "triangle inequality fails for ({i}, {j}, {k})"
                    )));
                }
            }
        }
    }

    let order = group.order();
    if permutations.len() != order {
        return Err(Error::NotAnAction(format!(
            "expected {order} permutations, found {}",
            permutations.len()
        )));
    }
    for (g, p) in permutations.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&z| z >= n || std::mem::replace(&mut seen[z], true)) {
            return Err(Error::NotAnAction(format!("entry {g} is not a permutation of {n} points")));
        }
    }
    if permutations[group.identity()].iter().enumerate().any(|(z, &w)| z != w) {
        return Err(Error::NotAnAction("identity does not act trivially".into()));
    }
    for g in 0..order {
        for h in 0..order {
            let gh = group.product(g, h);
            for z in 0..n {
                if permutations[gh][z] != permutations[g][permutations[h][z]] {
                    return Err(Error::NotAnAction(format!("(g{g} g{h}) z{z} != g{g} (g{h} z{z})")));
                }
            }
        }
    }
    for (g, p) in permutations.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if (metric[p[i]][p[j]] - metric[i][j]).abs() > METRIC_TOL {
                    return Err(Error::NotInvariantMetric(format!(
                        "d(g{g} z{i}, g{g} z{j}) = {} but d(z{i}, z{j}) = {}",
                        metric[p[i]][p[j]],
                        metric[i][j]
                    )));
                }
            }
        }
    }
    Ok(FiniteGSpace {
        points,
        metric,
        permutations,
        group,
    })
}

/// An equivariant body-valued map on an invariant subset.
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    space: FiniteGSpace,
    /// Sorted indices of the subset.
    subset: Vec<usize>,
    /// `values[z]` is `Some(f(z))` exactly for `z` in the subset.
    values: Vec<Option<ConvexBody>>,
}

impl ExtensionProblem {
    pub fn new(space: FiniteGSpace, values: Vec<(usize, ConvexBody)>) -> Result<Self> {
        let n = space.len();
        let dim = space.group().dim();
        let mut slots: Vec<Option<ConvexBody>> = vec![None; n];
        for (z, body) in values {
            if z >= n {
                return Err(Error::InvalidProblem(format!("point index {z} out of range")));
            }
            check_dim(dim, body.dim())?;
            if slots[z].replace(body).is_some() {
                return Err(Error::InvalidProblem(format!("f defined twice at {}", space.points[z])));
            }
        }
        let subset: Vec<usize> = (0..n).filter(|&z| slots[z].is_some()).collect();
        let group = space.group();
        for &a in &subset {
            for g in 0..group.order() {
                let ga = space.act(g, a);
                let Some(fga) = &slots[ga] else {
                    return Err(Error::InvalidProblem(format!(
                        "subset is not invariant: g{g} maps {} outside",
                        space.points[a]
                    )));
                };
                let image = group.act_body(g, slots[a].as_ref().expect("in subset"))?;
                let defect = hausdorff(fga, &image)?;
                if defect > EQUIVARIANCE_TOL {
                    return Err(Error::InvalidProblem(format!(
                        "f is not equivariant at ({}, g{g}): defect {defect:e}",
                        space.points[a]
                    )));
                }
            }
        }
        Ok(Self {
            space,
            subset,
            values: slots,
        })
    }

    pub fn space(&self) -> &FiniteGSpace {
        &self.space
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn value(&self, z: usize) -> Option<&ConvexBody> {
        self.values[z].as_ref()
    }

    pub fn dim(&self) -> usize {
        self.space.group().dim()
    }
}

/// Normalized weights `ŵ_a(z)` from `w_a(z) = max(0, 2 d(z, A) - d(z, a))`;
/// the indicator of `z` when `z` is in the subset.
pub fn dugundji_weights(space: &FiniteGSpace, subset: &[usize], z: usize) -> Result<Vec<(usize, f64)>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if subset.contains(&z) {
        return Ok(vec![(z, 1.0)]);
    }
    let dist_to_subset = subset
        .iter()
        .map(|&a| space.metric(z, a))
        .fold(f64::INFINITY, f64::min);
    let raw: Vec<(usize, f64)> = subset
        .iter()
        .map(|&a| (a, (2.0 * dist_to_subset - space.metric(z, a)).max(0.0)))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let total: f64 = raw.iter().map(|&(_, w)| w).sum();
    Ok(raw.into_iter().map(|(a, w)| (a, w / total)).collect())
}

/// Extension of `f` to all of `Z`, not yet equivariant.
pub fn dugundji_extend(p: &ExtensionProblem) -> Result<Vec<ConvexBody>> {
    if p.subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    (0..p.space.len())
        .into_par_iter()
        .map(|z| {
            if let Some(fz) = p.value(z) {
                return Ok(fz.clone());
            }
            let weights = dugundji_weights(&p.space, &p.subset, z)?;
            let terms: Vec<(f64, &ConvexBody)> = weights
                .iter()
                .map(|&(a, w)| (w, p.value(a).expect("weights live on the subset")))
                .collect();
            minkowski_combination(&terms)
        })
        .collect()
}

/// `F_G(z) = (1/|G|) Σ_g g⁻¹ F(gz)` as a Minkowski combination.
pub fn equivariant_average(p: &ExtensionProblem, f: &[ConvexBody]) -> Result<Vec<ConvexBody>> {
    let space = &p.space;
    if f.len() != space.len() {
        return Err(Error::InvalidProblem(format!(
            "map has {} values for {} points",
            f.len(),
            space.len()
        )));
    }
    let group = space.group();
    let weight = 1.0 / group.order() as f64;
    (0..space.len())
        .into_par_iter()
        .map(|z| {
            let images = (0..group.order())
                .map(|g| group.act_body(group.inverse(g), &f[space.act(g, z)]))
                .collect::<Result<Vec<_>>>()?;
            let terms: Vec<(f64, &ConvexBody)> = images.iter().map(|b| (weight, b)).collect();
            minkowski_combination(&terms)
        })
        .collect()
}

/// Dugundji extension followed by group averaging.
pub fn extend(p: &ExtensionProblem) -> Result<Vec<ConvexBody>> {
    let f = dugundji_extend(p)?;
    equivariant_average(p, &f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusEntry {
    pub z: String,
    pub w: String,
    pub metric: f64,
    pub hausdorff: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    /// `max_{a in A} d_H(F(a), f(a))`.
    pub restriction_error: f64,
    /// `max_{h, z} d_H(F(hz), h F(z))`.
    pub equivariance_defect: f64,
    pub worst_element: usize,
    pub worst_point: String,
    pub max_modulus_ratio: f64,
    pub modulus: Vec<ModulusEntry>,
    pub restriction_ok: bool,
    pub equivariance_ok: bool,
}

/// Restriction and equivariance defects of `extension`, plus the table of
/// `d_H(F(z), F(w))` against `d(z, w)`.
pub fn verify_extension(p: &ExtensionProblem, extension: &[ConvexBody]) -> Result<ExtensionReport> {
    verify_extension_tol(p, extension, 1e-9)
}

pub fn verify_extension_tol(p: &ExtensionProblem, extension: &[ConvexBody], tol: f64) -> Result<ExtensionReport> {
    let space = &p.space;
    let group = space.group();
    let n = space.len();
    if extension.len() != n {
        return Err(Error::InvalidProblem(format!("map has {} values for {n} points", extension.len())));
    }
    let mut restriction_error = 0.0f64;
    for &a in &p.subset {
        restriction_error = restriction_error.max(hausdorff(&extension[a], p.value(a).expect("subset"))?);
    }

    let defects: Vec<(f64, usize, usize)> = (0..group.order() * n)
        .into_par_iter()
        .map(|k| {
            let (h, z) = (k / n, k % n);
            let moved = group.act_body(h, &extension[z])?;
            Ok((hausdorff(&extension[space.act(h, z)], &moved)?, h, z))
        })
        .collect::<Result<_>>()?;
    let (equivariance_defect, worst_element, worst_z) = defects
        .into_iter()
        .fold((0.0, group.identity(), 0), |best, cur| if cur.0 > best.0 { cur } else { best });

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|z| (z + 1..n).map(move |w| (z, w))).collect();
    let modulus: Vec<ModulusEntry> = pairs
        .par_iter()
        .map(|&(z, w)| {
            let dh = hausdorff(&extension[z], &extension[w])?;
            let m = space.metric(z, w);
            Ok(ModulusEntry {
                z: space.points[z].clone(),
                w: space.points[w].clone(),
                metric: m,
                hausdorff: dh,
                ratio: dh / m,
            })
        })
        .collect::<Result<_>>()?;
    let max_modulus_ratio = modulus.iter().map(|e| e.ratio).fold(0.0, f64::max);

    Ok(ExtensionReport {
        restriction_error,
        equivariance_defect,
        worst_element,
        worst_point: space.points[worst_z].clone(),
        max_modulus_ratio,
        modulus,
        restriction_ok: restriction_error <= tol,
        equivariance_ok: equivariance_defect <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::hull;
    use crate::catalog::{CatalogGroup, GroupFamily};
    use crate::group::GroupAction;

    fn z2_line() -> GroupAction {
        CatalogGroup::new(1, GroupFamily::SignFlips).build().unwrap()
    }

    fn three_points(metric: Vec<Vec<f64>>, group: GroupAction) -> Result<FiniteGSpace> {
        let perms = if group.order() == 1 {
            vec![vec![0, 1, 2]]
        } else {
            vec![vec![0, 1, 2], vec![2, 1, 0]]
        };
        build_gspace(vec!["-1".into(), "0".into(), "1".into()], metric, perms, group)
    }

    fn line_metric() -> Vec<Vec<f64>> {
        vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]
    }

    #[test]
    fn collinear_points_with_reflection_are_valid() {
        assert!(three_points(line_metric(), z2_line()).is_ok());
    }

    #[test]
    fn broken_metric_symmetry_is_rejected() {
        let m = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 2.0], vec![2.0, 2.0, 0.0]];
        assert!(matches!(three_points(m, z2_line()), Err(Error::NotInvariantMetric(_))));
    }

    #[test]
    fn metric_axioms_checked() {
        let asym = vec![vec![0.0, 1.0, 2.0], vec![1.5, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        assert!(matches!(three_points(asym, z2_line()), Err(Error::MetricViolation(_))));
        let triangle = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(three_points(triangle, z2_line()), Err(Error::MetricViolation(_))));
    }

    #[test]
    fn non_action_rejected() {
        let r = build_gspace(
            vec!["a".into(), "b".into(), "c".into()],
            line_metric(),
            vec![vec![0, 1, 2], vec![1, 2, 0]],
            z2_line(),
        );
        assert!(matches!(r, Err(Error::NotAnAction(_))));
    }

    #[test]
    fn midpoint_of_singletons() {
        let trivial = CatalogGroup::new(1, GroupFamily::Trivial).build().unwrap();
        let space = three_points(line_metric(), trivial).unwrap();
        let p = ExtensionProblem::new(
            space,
            vec![
                (0, ConvexBody::singleton(vec![-1.0])),
                (2, ConvexBody::singleton(vec![1.0])),
            ],
        )
        .unwrap();
        let w = dugundji_weights(p.space(), p.subset(), 1).unwrap();
        assert_eq!(w, vec![(0, 0.5), (2, 0.5)]);
        let f = dugundji_extend(&p).unwrap();
        assert_eq!(f[1], ConvexBody::singleton(vec![0.0]));
        assert_eq!(equivariant_average(&p, &f).unwrap(), f);
    }

    #[test]
    fn averaging_symmetrizes_interval() {
        let space = three_points(line_metric(), z2_line()).unwrap();
        let p = ExtensionProblem::new(
            space,
            vec![
                (0, ConvexBody::singleton(vec![-1.0])),
                (2, ConvexBody::singleton(vec![1.0])),
            ],
        )
        .unwrap();
        let f = vec![
            ConvexBody::singleton(vec![-1.0]),
            hull(vec![vec![0.0], vec![1.0]]).unwrap(),
            ConvexBody::singleton(vec![1.0]),
        ];
        let fg = equivariant_average(&p, &f).unwrap();
        assert_eq!(fg[1], hull(vec![vec![-0.5], vec![0.5]]).unwrap());
        let report = verify_extension(&p, &fg).unwrap();
        assert!(report.restriction_ok && report.equivariance_ok);
        assert_eq!(report.modulus.len(), 3);
    }

    #[test]
    fn problem_validation() {
        let space = three_points(line_metric(), z2_line()).unwrap();
        let not_invariant = ExtensionProblem::new(space.clone(), vec![(0, ConvexBody::singleton(vec![-1.0]))]);
        assert!(matches!(not_invariant, Err(Error::InvalidProblem(_))));
        let not_equivariant = ExtensionProblem::new(
            space.clone(),
            vec![
                (0, ConvexBody::singleton(vec![-1.0])),
                (2, ConvexBody::singleton(vec![2.0])),
            ],
        );
        assert!(matches!(not_equivariant, Err(Error::InvalidProblem(_))));
        let empty = ExtensionProblem::new(space, vec![]).unwrap();
        assert_eq!(dugundji_extend(&empty).unwrap_err(), Error::EmptySubset);
    }

    #[test]
    fn full_subset_has_zero_defects() {
        let space = three_points(line_metric(), z2_line()).unwrap();
        let p = ExtensionProblem::new(
            space,
            vec![
                (0, ConvexBody::singleton(vec![-1.0])),
                (1, hull(vec![vec![-0.25], vec![0.25]]).unwrap()),
                (2, ConvexBody::singleton(vec![1.0])),
            ],
        )
        .unwrap();
        let fg = extend(&p).unwrap();
        let r = verify_extension(&p, &fg).unwrap();
        assert_eq!((r.restriction_error, r.equivariance_defect), (0.0, 0.0));
    }
}
