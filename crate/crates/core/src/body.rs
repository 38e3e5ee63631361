//! Compact convex polytopes in R^d stored by their extreme points.
//!
//! A [`ConvexBody`] always holds a duplicate-free, irredundant vertex list
//! sorted lexicographically. Every operation that can create redundant
//! points (sums, singular maps) goes back through [`hull`].

use nalgebra::DMatrix;
use std::cmp::Ordering;

use crate::error::{check_dim, Error, Result};
use crate::nearest::{nearest_point, NearestPoint};
use crate::vector::{add, dist, dot, lex_cmp, norm, sub, Point};

/// Absolute tolerance for duplicate and redundant vertices.
pub const DEDUP_TOL: f64 = 1e-9;
/// Accepted deviation of a direction's norm from one.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Point>,
}

/// Value of the support function together with the vertex attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub value: f64,
    pub witness: usize,
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn singleton(p: Point) -> Self {
        Self {
            dim: p.len(),
            vertices: vec![p],
        }
    }

    /// The body `{0}` in R^dim.
    pub fn origin(dim: usize) -> Self {
        Self::singleton(vec![0.0; dim])
    }

    /// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let d = lo.len();
        let pts = (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                    .collect()
            })
            .collect();
        hull(pts)
    }

    /// Cube `[-r, r]^d`.
    pub fn cube(dim: usize, r: f64) -> Self {
        Self::axis_box(&vec![-r; dim], &vec![r; dim]).expect("consistent dims")
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }

    /// `max_v ||v||`, the Hausdorff distance to `{0}`.
    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi / n;
            }
        }
        c
    }

    /// Dimension of the affine hull.
    pub fn affine_rank(&self) -> usize {
        if self.vertices.len() < 2 {
            return 0;
        }
        let base = &self.vertices[0];
        let rows = self.vertices.len() - 1;
        let m = DMatrix::from_fn(rows, self.dim, |i, j| self.vertices[i + 1][j] - base[j]);
        m.singular_values().iter().filter(|&&s| s > DEDUP_TOL).count()
    }

    pub fn support(&self, u: &[f64]) -> Result<Support> {
        check_dim(self.dim, u.len())?;
        let n = norm(u);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitDirection { norm: n });
        }
        Ok(self.support_unchecked(u))
    }

    /// Support function for an arbitrary (not necessarily unit) direction.
    pub fn support_unchecked(&self, u: &[f64]) -> Support {
        let mut best = Support {
            value: f64::NEG_INFINITY,
            witness: 0,
        };
        for (i, v) in self.vertices.iter().enumerate() {
            let s = dot(v, u);
            if s > best.value {
                best = Support {
                    value: s,
                    witness: i,
                };
            }
        }
        best
    }

    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        check_dim(self.dim, shift.len())?;
        Ok(Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add(v, shift)).collect(),
        })
    }

    /// `t * A` for a scalar `t`.
    pub fn scaled(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::origin(self.dim);
        }
        let mut vertices: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| t * x).collect())
            .collect();
        vertices.sort_by(|a, b| lex_cmp(a, b));
        Self {
            dim: self.dim,
            vertices,
        }
    }

    /// Whether `p` lies in the body up to `tol`.
    pub fn contains(&self, p: &[f64], tol: f64) -> Result<bool> {
        Ok(project_point(p, self)?.distance <= tol)
    }
}

/// Extreme points of the convex hull of `points`, deduplicated at [`DEDUP_TOL`].
pub fn hull(points: Vec<Point>) -> Result<ConvexBody> {
    let dim = points.first().ok_or(Error::EmptyInput)?.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for p in &points {
        check_dim(dim, p.len())?;
    }
    let pts = dedup_sorted(points);
    let vertices = match dim {
        _ if pts.len() <= 2 => pts,
        1 => vec![pts[0].clone(), pts[pts.len() - 1].clone()],
        2 => planar_hull(&pts),
        _ => extreme_points(&pts)?,
    };
    Ok(ConvexBody { dim, vertices })
}

/// Builds a body from points already known to be in convex position.
pub(crate) fn from_extreme_points(dim: usize, mut vertices: Vec<Point>) -> ConvexBody {
    vertices.sort_by(|a, b| lex_cmp(a, b));
    ConvexBody { dim, vertices }
}

fn dedup_sorted(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| lex_cmp(a, b));
    let mut kept: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        let duplicate = kept
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= DEDUP_TOL)
            .any(|q| dist(&p, q) <= DEDUP_TOL);
        if !duplicate {
            kept.push(p);
        }
    }
    kept
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone chain on lexicographically sorted, deduplicated points.
fn planar_hull(pts: &[Point]) -> Vec<Point> {
    let mut lower: Vec<&Point> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut ring: Vec<Point> = lower.into_iter().chain(upper).cloned().collect();

    // Drop vertices lying within tolerance of the segment joining their neighbours.
    let mut changed = true;
    while changed && ring.len() > 2 {
        changed = false;
        for i in 0..ring.len() {
            let n = ring.len();
            let prev = &ring[(i + n - 1) % n];
            let next = &ring[(i + 1) % n];
            if segment_distance(&ring[i], prev, next) <= DEDUP_TOL {
                ring.remove(i);
                changed = true;
                break;
            }
        }
    }
    ring.sort_by(|a, b| lex_cmp(a, b));
    ring
}

fn segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    let t = if len2 > 0.0 {
        (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q: Point = a.iter().zip(&ab).map(|(x, y)| x + t * y).collect();
    dist(p, &q)
}

/// Output-sensitive extreme-point filter (Clarkson) for any dimension.
///
/// Each undecided point is projected onto the hull of the extreme points
/// found so far; if it is not covered, the farthest point in the separating
/// direction is a new extreme point.
pub(crate) fn extreme_points(pts: &[Point]) -> Result<Vec<Point>> {
    let n = pts.len();
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let mut is_extreme = vec![false; n];
    let mut ext: Vec<Point> = Vec::new();
    // Points admitted only because projection and direction search disagree
    // at rounding level; they may be redundant.
    let mut doubtful: Vec<bool> = Vec::new();
    // Lexicographic extremes are always vertices.
    for i in [0, n - 1] {
        if !is_extreme[i] {
            is_extreme[i] = true;
            ext.push(pts[i].clone());
            doubtful.push(false);
        }
    }
    for i in 0..n {
        if is_extreme[i] {
            continue;
        }
        loop {
            let proj = nearest_point(&pts[i], &ext)?;
            if proj.distance <= DEDUP_TOL {
                break;
            }
            let u = sub(&pts[i], &proj.point);
            let m = farthest_in_direction(pts, &u, scale);
            if is_extreme[m] {
                is_extreme[i] = true;
                ext.push(pts[i].clone());
                doubtful.push(true);
                break;
            }
            is_extreme[m] = true;
            ext.push(pts[m].clone());
            doubtful.push(false);
            if m == i {
                break;
            }
        }
    }
    let mut k = 0;
    while k < ext.len() && ext.len() > 2 {
        if !doubtful[k] {
            k += 1;
            continue;
        }
        let others: Vec<Point> = ext
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p.clone())
            .collect();
        if nearest_point(&ext[k], &others)?.distance <= DEDUP_TOL {
            ext.remove(k);
            doubtful.remove(k);
        } else {
            k += 1;
        }
    }
    ext.sort_by(|a, b| lex_cmp(a, b));
    Ok(ext)
}

/// Lexicographically largest point among the (near-)maximizers of `<., u>`;
/// such a point is a vertex of the maximizing face.
fn farthest_in_direction(pts: &[Point], u: &[f64], scale: f64) -> usize {
    let vals: Vec<f64> = pts.iter().map(|p| dot(p, u)).collect();
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let window = 1e-12 * norm(u) * (1.0 + scale);
    let mut best: Option<usize> = None;
    for (i, &v) in vals.iter().enumerate() {
        if v >= max - window {
            best = match best {
                Some(b) if lex_cmp(&pts[b], &pts[i]) != Ordering::Less => Some(b),
                _ => Some(i),
            };
        }
    }
    best.expect("nonempty point set")
}

pub fn minkowski_sum(a: &ConvexBody, b: &ConvexBody) -> Result<ConvexBody> {
    check_dim(a.dim, b.dim)?;
    if a.is_singleton() {
        return b.translate(&a.vertices[0]);
    }
    if b.is_singleton() {
        return a.translate(&b.vertices[0]);
    }
    if a.dim == 2 {
        return hull(planar_sum(&[(1.0, a), (1.0, b)]));
    }
    if homothetic(a, b) {
        // Corresponding vertices of positively homothetic bodies add up to
        // the vertices of the sum.
        let vertices = a.vertices.iter().zip(&b.vertices).map(|(u, v)| add(u, v)).collect();
        return Ok(from_extreme_points(a.dim, vertices));
    }
    let sums = a
        .vertices
        .iter()
        .flat_map(|u| b.vertices.iter().map(move |v| add(u, v)))
        .collect();
    hull(sums)
}

/// Whether `b = s a + t` for some `s > 0`, vertex by vertex in sorted order.
fn homothetic(a: &ConvexBody, b: &ConvexBody) -> bool {
    let n = a.vertices.len();
    if n != b.vertices.len() || n < 2 {
        return false;
    }
    let da = sub(&a.vertices[n - 1], &a.vertices[0]);
    let db = sub(&b.vertices[n - 1], &b.vertices[0]);
    let s = norm(&db) / norm(&da);
    if !(s > 0.0 && s.is_finite()) {
        return false;
    }
    let tol = 1e-12 * (1.0 + a.max_vertex_norm() * s + b.max_vertex_norm());
    (1..n).all(|k| {
        let ea = sub(&a.vertices[k], &a.vertices[0]);
        let eb = sub(&b.vertices[k], &b.vertices[0]);
        ea.iter().zip(&eb).all(|(x, y)| (y - s * x).abs() <= tol)
    })
}

/// Counter-clockwise ring of a planar body starting at its lexicographic minimum.
fn planar_ring(a: &ConvexBody) -> Vec<&Point> {
    let vs = &a.vertices;
    if vs.len() < 3 {
        return vs.iter().collect();
    }
    let (first, last) = (&vs[0], &vs[vs.len() - 1]);
    let mut lower = vec![first];
    let mut upper = Vec::new();
    for p in &vs[1..vs.len() - 1] {
        if cross(first, last, p) > 0.0 {
            upper.push(p);
        } else {
            lower.push(p);
        }
    }
    lower.push(last);
    lower.extend(upper.into_iter().rev());
    lower
}

/// Candidate vertices of `sum_k w_k A_k` for planar bodies by merging edge
/// sequences in angular order.
///
/// The merged walk fixes the shape; the position comes from the support
/// point in a generic direction, which is additive over the terms.
fn planar_sum(terms: &[(f64, &ConvexBody)]) -> Vec<Point> {
    const PROBE: [f64; 2] = [0.291_729_472_101_6, -0.956_499_876_325_3];
    let mut anchor = [0.0; 2];
    let mut edges: Vec<(f64, [f64; 2])> = Vec::new();
    for &(w, a) in terms {
        let top = &a.vertices[a.support_unchecked(&PROBE).witness];
        anchor[0] += w * top[0];
        anchor[1] += w * top[1];
        if a.vertices.len() < 2 {
            continue;
        }
        let ring = planar_ring(a);
        for k in 0..ring.len() {
            let (p, q) = (ring[k], ring[(k + 1) % ring.len()]);
            let e = [w * (q[0] - p[0]), w * (q[1] - p[1])];
            edges.push((e[1].atan2(e[0]).rem_euclid(2.0 * std::f64::consts::PI), e));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut walk = Vec::with_capacity(edges.len() + 1);
    let mut cur = [0.0, 0.0];
    walk.push(cur);
    for (_, e) in &edges[..edges.len().saturating_sub(1)] {
        cur = [cur[0] + e[0], cur[1] + e[1]];
        walk.push(cur);
    }
    let top = walk
        .iter()
        .max_by(|x, y| (x[0] * PROBE[0] + x[1] * PROBE[1]).total_cmp(&(y[0] * PROBE[0] + y[1] * PROBE[1])))
        .expect("nonempty walk");
    let shift = [anchor[0] - top[0], anchor[1] - top[1]];
    walk.iter().map(|p| vec![p[0] + shift[0], p[1] + shift[1]]).collect()
}

/// `sum_i w_i A_i` for nonnegative weights; zero-weight terms are skipped.
pub fn minkowski_combination(terms: &[(f64, &ConvexBody)]) -> Result<ConvexBody> {
    let dim = terms.first().ok_or(Error::EmptyInput)?.1.dim;
    for &(w, body) in terms {
        check_dim(dim, body.dim)?;
        if w < 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "weight",
                value: w,
            });
        }
    }
    let live: Vec<(f64, &ConvexBody)> = terms.iter().copied().filter(|&(w, _)| w > 0.0).collect();
    if live.is_empty() {
        return Ok(ConvexBody::origin(dim));
    }
    if dim == 2 {
        return hull(planar_sum(&live));
    }
    // Balanced pairing keeps intermediate hulls small.
    let mut level: Vec<ConvexBody> = live.iter().map(|&(w, b)| b.scaled(w)).collect();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            next.push(match pair {
                [x, y] => minkowski_sum(x, y)?,
                [x] => x.clone(),
                _ => unreachable!("chunks of two"),
            });
        }
        level = next;
    }
    Ok(level.pop().expect("nonempty"))
}

/// `t * (T A + b)`.
pub fn affine_image(a: &ConvexBody, linear: &DMatrix<f64>, offset: &[f64], t: f64) -> Result<ConvexBody> {
    check_dim(a.dim, linear.ncols())?;
    check_dim(a.dim, linear.nrows())?;
    check_dim(a.dim, offset.len())?;
    if t == 0.0 {
        return Ok(ConvexBody::origin(a.dim));
    }
    let mapped: Vec<Point> = a
        .vertices
        .iter()
        .map(|v| {
            (0..a.dim)
                .map(|i| {
                    let row: f64 = (0..a.dim).map(|j| linear[(i, j)] * v[j]).sum();
                    t * (row + offset[i])
                })
                .collect()
        })
        .collect();
    if is_well_conditioned(linear) {
        // Affine bijections map extreme points onto extreme points.
        Ok(from_extreme_points(a.dim, mapped))
    } else {
        hull(mapped)
    }
}

fn is_well_conditioned(m: &DMatrix<f64>) -> bool {
    if is_signed_permutation(m) {
        return true;
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max > 0.0 && min > 1e-6 * max.max(1.0)
}

fn is_signed_permutation(m: &DMatrix<f64>) -> bool {
    if m.iter().any(|&x| x != 0.0 && x.abs() != 1.0) {
        return false;
    }
    let ones = |it: &mut dyn Iterator<Item = f64>| it.filter(|&x| x != 0.0).count() == 1;
    (0..m.nrows()).all(|i| ones(&mut m.row(i).iter().cloned()))
        && (0..m.ncols()).all(|j| ones(&mut m.column(j).iter().cloned()))
}

pub fn project_point(p: &[f64], a: &ConvexBody) -> Result<NearestPoint> {
    check_dim(a.dim, p.len())?;
    if a.is_singleton() {
        let q = a.vertices[0].clone();
        return Ok(NearestPoint {
            distance: dist(p, &q),
            point: q,
            gap: 0.0,
            iterations: 0,
        });
    }
    nearest_point(p, &a.vertices)
}

/// `sup_{a in A} d(a, B)`, attained at a vertex of `A`.
pub fn directed_hausdorff(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    check_dim(a.dim, b.dim)?;
    if a.dim == 2 {
        return Ok(planar_directed_hausdorff(a, b));
    }
    let mut worst = 0.0f64;
    for v in &a.vertices {
        worst = worst.max(project_point(v, b)?.distance);
    }
    Ok(worst)
}

/// Exact planar case: a point outside a counterclockwise polygon is nearest
/// to one of its edges.
fn planar_directed_hausdorff(a: &ConvexBody, b: &ConvexBody) -> f64 {
    let ring = planar_ring(b);
    let m = ring.len();
    let mut worst = 0.0f64;
    for v in &a.vertices {
        if m >= 3 && (0..m).all(|k| cross(ring[k], ring[(k + 1) % m], v) >= 0.0) {
            continue;
        }
        let d = (0..m)
            .map(|k| segment_distance(v, ring[k], ring[(k + 1) % m]))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    worst
}

/// Hausdorff distance under the Euclidean ground metric.
///
/// `x -> d(x, B)` is convex, so its maximum over `A` sits at an extreme
/// point; checking vertices in both directions is exact.
pub fn hausdorff(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Whether the two bodies coincide up to `tol` in Hausdorff distance.
pub fn approx_eq(a: &ConvexBody, b: &ConvexBody, tol: f64) -> Result<bool> {
    Ok(hausdorff(a, b)? <= tol)
}

/// `t A + (1 - t) B`.
pub fn family_mix(a: &ConvexBody, b: &ConvexBody, t: f64) -> Result<ConvexBody> {
    check_dim(a.dim, b.dim)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    minkowski_sum(&a.scaled(t), &b.scaled(1.0 - t))
}

/// Convex families of bodies closed under [`family_mix`].
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyTag {
    All,
    FullDimensional,
    CentrallySymmetric,
    WithinBody(ConvexBody),
}

impl FamilyTag {
    pub fn contains(&self, a: &ConvexBody) -> Result<bool> {
        match self {
            FamilyTag::All => Ok(true),
            FamilyTag::FullDimensional => Ok(a.affine_rank() == a.dim),
            FamilyTag::CentrallySymmetric => Ok(is_centrally_symmetric(a)),
            FamilyTag::WithinBody(m) => {
                check_dim(m.dim, a.dim)?;
                for v in &a.vertices {
                    if project_point(v, m)?.distance > DEDUP_TOL {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Symmetric about the vertex centroid: the reflection of every vertex is a vertex.
fn is_centrally_symmetric(a: &ConvexBody) -> bool {
    let c = a.centroid();
    a.vertices.iter().all(|v| {
        let mirrored: Point = c.iter().zip(v).map(|(ci, vi)| 2.0 * ci - vi).collect();
        a.vertices.iter().any(|w| dist(w, &mirrored) <= DEDUP_TOL)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(points: &[&[f64]]) -> ConvexBody {
        hull(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn planar_hausdorff_matches_projection() {
        let mut rng = crate::catalog::case_rng(7, "planar-hausdorff", 0);
        for n in 0..300 {
            let a = crate::catalog::random_body_with(&mut rng, 2, 1 + n % 5, 12, 3.0);
            let b = crate::catalog::random_body_with(&mut rng, 2, 1 + n % 4, 12, 3.0);
            let slow = a
                .vertices()
                .iter()
                .map(|v| project_point(v, &b).unwrap().distance)
                .fold(0.0, f64::max);
            assert!((directed_hausdorff(&a, &b).unwrap() - slow).abs() < 1e-9, "case {n}");
        }
    }

    #[test]
    fn hull_drops_interior_point() {
        let b = body(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[0.25, 0.25]]);
        assert_eq!(b.vertices(), &[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn hull_of_singleton() {
        let b = body(&[&[0.0, 0.0]]);
        assert!(b.is_singleton());
    }

    #[test]
    fn hull_errors() {
        assert_eq!(hull(vec![]).unwrap_err(), Error::EmptyInput);
        assert!(matches!(
            hull(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hull_collapses_collinear_and_duplicate_points() {
        let b = body(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0], &[2.0, 2.0 + 1e-12]]);
        assert_eq!(b.len(), 2);
        let c = body(&[&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], &[0.5, 0.5, 0.5]]);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn hull_in_three_dimensions_keeps_cube_corners() {
        let mut pts: Vec<Point> = ConvexBody::cube(3, 1.0).vertices().to_vec();
        pts.push(vec![0.0, 0.0, 0.0]);
        pts.push(vec![1.0, 0.0, 0.0]);
        pts.push(vec![0.5, 1.0, -1.0]);
        assert_eq!(hull(pts).unwrap().len(), 8);
    }

    #[test]
    fn support_of_square() {
        let sq = ConvexBody::cube(2, 1.0);
        let s = sq.support(&[1.0, 0.0]).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(sq.vertices()[s.witness], vec![1.0, -1.0]);
        assert!(matches!(sq.support(&[1.0, 1.0]), Err(Error::NonUnitDirection { .. })));
    }

    #[test]
    fn support_of_singleton() {
        let p = ConvexBody::singleton(vec![2.0, -3.0]);
        let u = [0.6, 0.8];
        assert!((p.support(&u).unwrap().value - (1.2 - 2.4)).abs() < 1e-15);
    }

    #[test]
    fn minkowski_of_orthogonal_segments_is_square() {
        let a = body(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = body(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.vertices(), body(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]).vertices());
        assert_eq!(minkowski_sum(&a, &ConvexBody::origin(2)).unwrap(), a);
    }

    #[test]
    fn affine_image_cases() {
        let sq = ConvexBody::cube(2, 1.0);
        let id = DMatrix::identity(2, 2);
        assert_eq!(affine_image(&sq, &id, &[0.0, 0.0], 1.0).unwrap(), sq);
        assert_eq!(affine_image(&sq, &id, &[0.0, 0.0], 0.0).unwrap(), ConvexBody::origin(2));
        let twice = affine_image(&sq, &id, &[0.0, 0.0], 2.0).unwrap();
        assert_eq!(twice, ConvexBody::cube(2, 2.0));
        // Corner-to-corner gap between the nested squares.
        assert!((hausdorff(&twice, &sq).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(affine_image(&sq, &singular, &[0.0, 0.0], 1.0).unwrap().len(), 2);
    }

    #[test]
    fn projection_examples() {
        let seg = body(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let r = project_point(&[2.0, 1.0], &seg).unwrap();
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-14);
        let sq = ConvexBody::cube(2, 1.0);
        assert!(project_point(&[0.5, 0.5], &sq).unwrap().distance < 1e-15);
    }

    #[test]
    fn hausdorff_examples() {
        let a = ConvexBody::cube(2, 1.0);
        let b = ConvexBody::cube(2, 2.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert!((hausdorff(&a, &b).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((hausdorff(&ConvexBody::origin(2), &b).unwrap() - b.max_vertex_norm()).abs() < 1e-15);
    }

    #[test]
    fn family_mix_endpoints_and_range() {
        let a = ConvexBody::cube(2, 1.0);
        let b = body(&[&[3.0, 0.0], &[4.0, 1.0], &[3.0, 2.0]]);
        assert!(approx_eq(&family_mix(&a, &b, 1.0).unwrap(), &a, 1e-12).unwrap());
        assert!(approx_eq(&family_mix(&a, &b, 0.0).unwrap(), &b, 1e-12).unwrap());
        assert!(matches!(family_mix(&a, &b, 1.5), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn family_predicates() {
        let sq = ConvexBody::cube(2, 1.0);
        let tri = body(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let seg = body(&[&[0.0, 0.0], &[1.0, 1.0]]);
        assert!(FamilyTag::CentrallySymmetric.contains(&sq).unwrap());
        assert!(!FamilyTag::CentrallySymmetric.contains(&tri).unwrap());
        assert!(FamilyTag::FullDimensional.contains(&tri).unwrap());
        assert!(!FamilyTag::FullDimensional.contains(&seg).unwrap());
        assert!(FamilyTag::WithinBody(ConvexBody::cube(2, 1.0)).contains(&seg).unwrap());
        assert!(!FamilyTag::WithinBody(ConvexBody::cube(2, 0.5)).contains(&seg).unwrap());
        let sym_a = body(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 2.0], &[0.0, -2.0]]);
        let mixed = family_mix(&sym_a, &sq, 0.3).unwrap();
        assert!(FamilyTag::CentrallySymmetric.contains(&mixed).unwrap());
    }
}
