//! Formal differences of convex bodies.
//!
//! Pairs `(A, B)` modulo `(A, B) ~ (C, D) <=> A + D = B + C` form a real
//! normed space with `||<A, B>|| = d_H(A, B)`. Bodies embed through
//! `j(A) = <A, {0}>`, isometrically and compatibly with Minkowski addition
//! and nonnegative scaling. Classes are never canonicalized; equality is the
//! metric predicate [`fd_equal`].
//!
//! A class `<A, B>` is realized concretely by the function `h_A - h_B` on the
//! unit sphere ([`support_realization`]).

use std::f64::consts::PI;

use crate::body::{hausdorff, minkowski_sum, ConvexBody};
use crate::error::{check_dim, Error, Result};
use crate::group::{act_body, GroupElement};
use crate::vector::{norm, sub, Point};

/// Default tolerance for class equality.
pub const CLASS_TOL: f64 = 1e-9;

/// Representative `<pos, neg>` of a class.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalDifference {
    pub pos: ConvexBody,
    pub neg: ConvexBody,
}

impl FormalDifference {
    pub fn new(pos: ConvexBody, neg: ConvexBody) -> Result<Self> {
        check_dim(pos.dim(), neg.dim())?;
        Ok(Self { pos, neg })
    }

    /// `<{0}, {0}>`.
    pub fn zero(dim: usize) -> Self {
        Self {
            pos: ConvexBody::origin(dim),
            neg: ConvexBody::origin(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.pos.dim()
    }
}

/// `||x - y||`, the Hausdorff distance between `x.pos + y.neg` and `x.neg + y.pos`.
pub fn class_distance(x: &FormalDifference, y: &FormalDifference) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    hausdorff(&minkowski_sum(&x.pos, &y.neg)?, &minkowski_sum(&x.neg, &y.pos)?)
}

pub fn fd_equal(x: &FormalDifference, y: &FormalDifference, tol: f64) -> Result<bool> {
    Ok(class_distance(x, y)? <= tol)
}

pub fn fd_add(x: &FormalDifference, y: &FormalDifference) -> Result<FormalDifference> {
    check_dim(x.dim(), y.dim())?;
    Ok(FormalDifference {
        pos: minkowski_sum(&x.pos, &y.pos)?,
        neg: minkowski_sum(&x.neg, &y.neg)?,
    })
}

/// `t<A, B> = <tA, tB>` for `t >= 0` and `<-tB, -tA>` for `t < 0`.
pub fn fd_scale(t: f64, x: &FormalDifference) -> FormalDifference {
    if t >= 0.0 {
        FormalDifference {
            pos: x.pos.scaled(t),
            neg: x.neg.scaled(t),
        }
    } else {
        FormalDifference {
            pos: x.neg.scaled(-t),
            neg: x.pos.scaled(-t),
        }
    }
}

pub fn fd_sub(x: &FormalDifference, y: &FormalDifference) -> Result<FormalDifference> {
    fd_add(x, &fd_scale(-1.0, y))
}

pub fn fd_norm(x: &FormalDifference) -> Result<f64> {
    hausdorff(&x.pos, &x.neg)
}

pub fn embed_j(a: &ConvexBody) -> FormalDifference {
    FormalDifference {
        pos: a.clone(),
        neg: ConvexBody::origin(a.dim()),
    }
}

/// `g<A, B> = <gA, gB>`; only defined for linear elements.
pub fn fd_act(g: &GroupElement, x: &FormalDifference) -> Result<FormalDifference> {
    if g.has_offset() {
        return Err(Error::AffineElement(g.index));
    }
    Ok(FormalDifference {
        pos: act_body(g, &x.pos)?,
        neg: act_body(g, &x.neg)?,
    })
}

/// Samples of `h_pos - h_neg` along unit directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub directions: Vec<Point>,
    pub values: Vec<f64>,
}

impl SupportSample {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn support_realization(x: &FormalDifference, dirs: &[Point]) -> Result<SupportSample> {
    let mut values = Vec::with_capacity(dirs.len());
    for u in dirs {
        values.push(x.pos.support(u)?.value - x.neg.support(u)?.value);
    }
    Ok(SupportSample {
        directions: dirs.to_vec(),
        values,
    })
}

/// Planar directions on which `sup_u |h_A(u) - h_B(u)|` is attained.
///
/// Between consecutive normals of vertex pairs (a refinement of both normal
/// fans) the maximizing vertices `a`, `b` are fixed and `h_A - h_B = <a - b, u>`,
/// whose extremes over the arc sit at its endpoints or at `±(a - b)/|a - b|`.
pub fn planar_critical_directions(a: &ConvexBody, b: &ConvexBody) -> Result<Vec<Point>> {
    check_dim(a.dim(), b.dim())?;
    check_dim(2, a.dim())?;
    let mut angles: Vec<f64> = Vec::new();
    for body in [a, b] {
        let vs = body.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let e = sub(&vs[j], &vs[i]);
                let t = e[1].atan2(e[0]) + PI / 2.0;
                angles.push(wrap(t));
                angles.push(wrap(t + PI));
            }
        }
    }
    if angles.is_empty() {
        angles.push(0.0);
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();

    let dir = |t: f64| vec![t.cos(), t.sin()];
    let mut out: Vec<Point> = angles.iter().map(|&t| dir(t)).collect();
    for (k, &start) in angles.iter().enumerate() {
        let end = if k + 1 < angles.len() {
            angles[k + 1]
        } else {
            angles[0] + 2.0 * PI
        };
        let mid = dir(0.5 * (start + end));
        let va = &a.vertices()[a.support_unchecked(&mid).witness];
        let vb = &b.vertices()[b.support_unchecked(&mid).witness];
        let w = sub(va, vb);
        if norm(&w) == 0.0 {
            continue;
        }
        let base = w[1].atan2(w[0]);
        for cand in [base, base + PI] {
            let mut c = wrap(cand);
            if c < start {
                c += 2.0 * PI;
            }
            if c <= end {
                out.push(dir(c));
            }
        }
    }
    Ok(out)
}

fn wrap(t: f64) -> f64 {
    t.rem_euclid(2.0 * PI)
}
