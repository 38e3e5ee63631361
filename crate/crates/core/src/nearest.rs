//! Euclidean nearest point of a polytope given by its vertices.
//!
//! Wolfe's minimum-norm-point method: an active set ("corral") of vertices
//! whose affine hull contains the current iterate, grown by the vertex that
//! most violates optimality and shrunk whenever the affine minimizer leaves
//! the simplex. The only accepted stopping rule is the variational
//! inequality `<p - q, v - q> <= CERTIFICATE_TOL` over all vertices.

use crate::error::{Error, Result};
use crate::vector::{dot, norm, sub, Point};

/// Absolute tolerance of the optimality certificate.
pub const CERTIFICATE_TOL: f64 = 1e-8;

const WEIGHT_EPS: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct NearestPoint {
    pub point: Point,
    pub distance: f64,
    /// `max_v <p - q, v - q>`; nonpositive up to rounding at the optimum.
    pub gap: f64,
    pub iterations: usize,
}

pub fn default_iteration_cap(n_vertices: usize) -> usize {
    10 * n_vertices * n_vertices + 1000
}

pub fn nearest_point(p: &[f64], vertices: &[Point]) -> Result<NearestPoint> {
    nearest_point_with_cap(p, vertices, default_iteration_cap(vertices.len()))
}

pub fn nearest_point_with_cap(p: &[f64], vertices: &[Point], cap: usize) -> Result<NearestPoint> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let shifted: Vec<Point> = vertices.iter().map(|v| sub(v, p)).collect();
    let sq: Vec<f64> = shifted.iter().map(|v| dot(v, v)).collect();
    let scale2 = sq.iter().cloned().fold(0.0, f64::max);
    let inner_tol = 1e-15 * scale2.max(f64::MIN_POSITIVE);

    let start = argmin(sq.iter().cloned());
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = shifted[start].clone();
    let mut iterations = 0;

    'major: while iterations < cap {
        iterations += 1;
        let xx = dot(&x, &x);
        let j = argmin(shifted.iter().map(|v| dot(&x, v)));
        if xx - dot(&x, &shifted[j]) <= inner_tol || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            let Some(alpha) = affine_min_norm(&shifted, &corral) else {
                // New vertex is affinely dependent on the corral: no progress possible.
                corral.pop();
                weights.pop();
                break 'major;
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                break;
            }
            let mut theta = 1.0;
            let mut leaving = None;
            for (i, (&a, &w)) in alpha.iter().zip(&weights).enumerate() {
                if a <= WEIGHT_EPS {
                    let ratio = if w - a > 0.0 { w / (w - a) } else { 0.0 };
                    if leaving.is_none() || ratio < theta {
                        theta = ratio;
                        leaving = Some(i);
                    }
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            if let Some(k) = leaving {
                weights[k] = 0.0;
            }
            let keep: Vec<bool> = weights.iter().map(|&w| w > WEIGHT_EPS).collect();
            corral = corral.iter().zip(&keep).filter(|(_, &k)| k).map(|(&c, _)| c).collect();
            weights = weights.iter().zip(&keep).filter(|(_, &k)| k).map(|(&w, _)| w).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            iterations += 1;
            if iterations >= cap {
                x = combine(&shifted, &corral, &weights);
                break 'major;
            }
        }
        x = combine(&shifted, &corral, &weights);
    }

    let xx = dot(&x, &x);
    let gap = shifted
        .iter()
        .map(|v| xx - dot(&x, v))
        .fold(f64::NEG_INFINITY, f64::max);
    if gap > CERTIFICATE_TOL {
        return Err(Error::NoConvergence { iterations });
    }
    let point = x.iter().zip(p).map(|(a, b)| a + b).collect();
    Ok(NearestPoint {
        point,
        distance: norm(&x),
        gap,
        iterations,
    })
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (i, v) in values.enumerate() {
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    best
}

fn combine(points: &[Point], idx: &[usize], weights: &[f64]) -> Point {
    let mut out = vec![0.0; points[0].len()];
    for (&i, &w) in idx.iter().zip(weights) {
        for (o, c) in out.iter_mut().zip(&points[i]) {
            *o += w * c;
        }
    }
    out
}

/// Barycentric coordinates of the minimum-norm point of the affine hull of
/// `points[idx]`, or `None` when those points are (numerically) affinely dependent.
fn affine_min_norm(points: &[Point], idx: &[usize]) -> Option<Vec<f64>> {
    let m = idx.len();
    if m == 1 {
        return Some(vec![1.0]);
    }
    let base = &points[idx[0]];
    let cols: Vec<Point> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let k = m - 1;
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        for j in 0..=i {
            let g = dot(&cols[i], &cols[j]);
            gram[i * k + j] = g;
            gram[j * k + i] = g;
        }
        rhs[i] = -dot(&cols[i], base);
    }
    let beta = cholesky_solve(&mut gram, &rhs, k)?;
    let mut alpha = Vec::with_capacity(m);
    alpha.push(1.0 - beta.iter().sum::<f64>());
    alpha.extend(beta);
    alpha.iter().all(|a| a.is_finite()).then_some(alpha)
}

/// In-place Cholesky factorization and solve; rejects pivots that collapse
/// relative to the original diagonal.
fn cholesky_solve(a: &mut [f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    for j in 0..n {
        let mut s = a[j * n + j];
        for p in 0..j {
            s -= a[j * n + p] * a[j * n + p];
        }
        if !(s > 1e-20 * diag[j]) || s <= 0.0 {
            return None;
        }
        let l = s.sqrt();
        a[j * n + j] = l;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for p in 0..j {
                s -= a[i * n + p] * a[j * n + p];
            }
            a[i * n + j] = s / l;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for p in 0..i {
            s -= a[i * n + p] * y[p];
        }
        y[i] = s / a[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= a[p * n + i] * x[p];
        }
        x[i] = s / a[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_inside_square_projects_to_itself() {
        let sq = vec![
            vec![-1.0, -1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
        ];
        let r = nearest_point(&[0.3, -0.2], &sq).unwrap();
        assert!(r.distance < 1e-12);
        assert!((r.point[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn segment_endpoint() {
        let seg = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let r = nearest_point(&[2.0, 1.0], &seg).unwrap();
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-14);
        assert!((r.point[0] - 1.0).abs() < 1e-14 && r.point[1].abs() < 1e-14);
    }

    #[test]
    fn projection_onto_edge_interior() {
        let tri = vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 4.0]];
        let r = nearest_point(&[3.0, 3.0], &tri).unwrap();
        assert!((r.point[0] - 2.0).abs() < 1e-12 && (r.point[1] - 2.0).abs() < 1e-12);
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cap_too_small_reports_no_convergence() {
        let tri = vec![vec![0.0, 0.0, 5.0], vec![4.0, 0.0, 5.0], vec![0.0, 4.0, 5.0]];
        // p projects into the interior of the triangle; zero iterations cannot certify that.
        let err = nearest_point_with_cap(&[1.0, 1.0, 0.0], &tri, 0).unwrap_err();
        assert_eq!(err, Error::NoConvergence { iterations: 0 });
    }

    #[test]
    fn thin_simplex_is_not_treated_as_degenerate() {
        let tet = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.4958, 0.2004, 1e-8],
        ];
        let r = nearest_point(&[0.5188, 0.1129, -0.5354], &tet).unwrap();
        assert!((r.distance - 0.5354).abs() < 1e-12);
    }

    #[test]
    fn empty_vertex_list() {
        assert_eq!(nearest_point(&[0.0], &[]).unwrap_err(), Error::EmptyInput);
    }
}
