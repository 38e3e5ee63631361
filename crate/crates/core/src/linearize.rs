//! Linearizing an affine action.
//!
//! `Φ(x)(g) = g x` sends `R^d` into `R^(d|G|)`, one block of size `d` per group
//! element in index order. There `h` acts linearly by moving blocks: block `g`
//! of `σ_h(y)` is block `g h` of `y`, so `Φ(h x) = σ_h Φ(x)`. Block
//! permutations preserve the sup-block norm `max_g |y_g|`, so lifted bodies are
//! compared with the Hausdorff metric of that norm.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::body::{from_extreme_points, ConvexBody};
use crate::error::{check_dim, Error, Result};
use crate::group::{GroupAction, GroupElement};
use crate::vector::{norm, Point};

#[derive(Debug, Clone)]
pub struct LiftedSpace {
    group: GroupAction,
    lifted: GroupAction,
}

impl LiftedSpace {
    pub fn new(group: GroupAction) -> Result<Self> {
        let lifted = lifted_action(&group)?;
        Ok(Self { group, lifted })
    }

    pub fn base_dim(&self) -> usize {
        self.group.dim()
    }

    pub fn blocks(&self) -> usize {
        self.group.order()
    }

    pub fn lifted_dim(&self) -> usize {
        self.base_dim() * self.blocks()
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    /// The block-permutation action on `R^(d|G|)`; element `h` here
    /// corresponds to element `h` of the base group.
    pub fn lifted_group(&self) -> &GroupAction {
        &self.lifted
    }

    pub fn norm(&self) -> BlockNorm {
        BlockNorm::new(self.base_dim())
    }

    /// `σ_h y`, computed by moving blocks.
    pub fn act_lifted_point(&self, h: usize, y: &[f64]) -> Result<Point> {
        check_dim(self.lifted_dim(), y.len())?;
        let d = self.base_dim();
        let mut out = Vec::with_capacity(y.len());
        for g in 0..self.blocks() {
            let src = self.group.product(g, h);
            out.extend_from_slice(&y[src * d..(src + 1) * d]);
        }
        Ok(out)
    }

    pub fn act_lifted_body(&self, h: usize, a: &ConvexBody) -> Result<ConvexBody> {
        check_dim(self.lifted_dim(), a.dim())?;
        let vertices = a
            .vertices()
            .iter()
            .map(|v| self.act_lifted_point(h, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(from_extreme_points(a.dim(), vertices))
    }
}

/// Block `g` of the result is `g x`.
pub fn lift_point(x: &[f64], sp: &LiftedSpace) -> Result<Point> {
    check_dim(sp.base_dim(), x.len())?;
    let mut out = Vec::with_capacity(sp.lifted_dim());
    for g in sp.group.elements() {
        out.extend(g.apply(x));
    }
    Ok(out)
}

/// `Φ` is affine and injective (the identity block copies `x`), so the
/// images of the extreme points of `A` are exactly the extreme points of `Φ(A)`.
pub fn lift_body(a: &ConvexBody, sp: &LiftedSpace) -> Result<ConvexBody> {
    check_dim(sp.base_dim(), a.dim())?;
    let vertices = a
        .vertices()
        .iter()
        .map(|v| lift_point(v, sp))
        .collect::<Result<Vec<_>>>()?;
    Ok(from_extreme_points(sp.lifted_dim(), vertices))
}

fn lifted_action(group: &GroupAction) -> Result<GroupAction> {
    let d = group.dim();
    let k = group.order();
    let n = d * k;
    let elements = (0..k)
        .map(|h| {
            let mut m = DMatrix::zeros(n, n);
            for g in 0..k {
                let src = group.product(g, h);
                for i in 0..d {
                    m[(g * d + i, src * d + i)] = 1.0;
                }
            }
            GroupElement::new(h, m, vec![0.0; n])
        })
        .collect();
    // σ_g σ_h takes block x to block ((x h) g)... written out: block x of
    // σ_g(σ_h y) is block (x g) of σ_h y, which is block (x g) h = x (g h) of y.
    GroupAction::from_table(n, elements, group.cayley().to_vec())
}

/// The norm `max_g |y_g|` over consecutive blocks of size `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockNorm {
    block: usize,
}

/// Barrier iterations stop once the certified gap is below this, relative
/// to `max(1, distance)`.
const GAP_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 2000;

impl BlockNorm {
    pub fn new(block: usize) -> Self {
        assert!(block > 0, "block size must be positive");
        Self { block }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn norm(&self, y: &[f64]) -> f64 {
        y.chunks(self.block).map(norm).fold(0.0, f64::max)
    }

    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        self.norm(&crate::vector::sub(x, y))
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim % self.block != 0 {
            return Err(Error::DimensionMismatch {
                expected: self.block * (dim / self.block + 1),
                found: dim,
            });
        }
        Ok(())
    }

    /// `min_{q in A} max_g |p_g - q_g|` by a log-barrier method over convex
    /// weights on the vertices of `A`.
    pub fn distance_to_body(&self, p: &[f64], a: &ConvexBody) -> Result<f64> {
        check_dim(a.dim(), p.len())?;
        self.check(p.len())?;
        let vs = a.vertices();
        if vs.len() == 1 {
            return Ok(self.dist(p, &vs[0]));
        }
        BarrierProblem::new(self.block, p, vs).solve()
    }

    pub fn directed_hausdorff(&self, a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
        check_dim(a.dim(), b.dim())?;
        let mut worst = 0.0f64;
        for v in a.vertices() {
            worst = worst.max(self.distance_to_body(v, b)?);
        }
        Ok(worst)
    }

    /// Distance from a point to a polytope is convex, so both directed
    /// distances are attained at vertices.
    pub fn hausdorff(&self, a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
        Ok(self.directed_hausdorff(a, b)?.max(self.directed_hausdorff(b, a)?))
    }

    pub fn max_vertex_norm(&self, a: &ConvexBody) -> f64 {
        a.vertices().iter().map(|v| self.norm(v)).fold(0.0, f64::max)
    }
}

/// minimize `t` over `λ` in the simplex with `|V_k λ - p_k| <= t` per block.
///
/// Vertices are stored shifted by `p`, so residuals are `V_k λ` and are
/// computed directly rather than through expanded squares.
struct BarrierProblem {
    n: usize,
    /// Block rows of the shifted vertex matrix.
    v: Vec<DMatrix<f64>>,
    /// `V_kᵀ V_k`.
    gram: Vec<DMatrix<f64>>,
}

/// Newton steps allowed per centering.
const MAX_CENTERING: usize = 60;

impl BarrierProblem {
    fn new(block: usize, p: &[f64], vs: &[Point]) -> Self {
        let n = vs.len();
        let blocks = p.len() / block;
        let mut v = Vec::with_capacity(blocks);
        let mut gram = Vec::with_capacity(blocks);
        for k in 0..blocks {
            let off = k * block;
            let vk = DMatrix::from_fn(block, n, |r, c| vs[c][off + r] - p[off + r]);
            gram.push(vk.transpose() * &vk);
            v.push(vk);
        }
        Self { n, v, gram }
    }

    fn residuals(&self, lambda: &DVector<f64>) -> Vec<DVector<f64>> {
        self.v.iter().map(|vk| vk * lambda).collect()
    }

    fn max_residual(&self, lambda: &DVector<f64>) -> f64 {
        self.residuals(lambda).iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Barrier objective `τ t - Σ log λ_i - Σ_k log(t² - |r_k|²)`, or `None`
    /// outside the domain.
    fn objective(&self, tau: f64, lambda: &DVector<f64>, t: f64) -> Option<f64> {
        if lambda.iter().any(|&l| l <= 0.0) || t <= 0.0 {
            return None;
        }
        let mut f = tau * t - lambda.iter().map(|l| l.ln()).sum::<f64>();
        for r in self.residuals(lambda) {
            let rn = r.norm();
            if rn >= t {
                return None;
            }
            f -= ((t - rn) * (t + rn)).ln();
        }
        Some(f)
    }

    fn solve(&self) -> Result<f64> {
        let n = self.n;
        let mut lambda = DVector::from_element(n, 1.0 / n as f64);
        let mut t = 2.0 * self.max_residual(&lambda) + 1.0;
        let theta = (n + 2 * self.v.len()) as f64;
        let mut tau = theta / t;
        let mut iterations = 0;
        loop {
            for _ in 0..MAX_CENTERING {
                iterations += 1;
                let (grad, hess) = self.derivatives(tau, &lambda, t);
                let Some(mut step) = newton_step(&grad, &hess, n) else { break };
                // Keep Σ λ = 1 against solver rounding.
                let drift = step.rows(0, n).sum() / n as f64;
                step.rows_mut(0, n).add_scalar_mut(-drift);
                let decrement = -grad.dot(&step);
                if !(decrement > 1e-14) {
                    break;
                }
                let f0 = self.objective(tau, &lambda, t).expect("iterate stays interior");
                let mut alpha = 1.0;
                let mut moved = false;
                while alpha > 1e-12 {
                    let cand_l = &lambda + step.rows(0, n) * alpha;
                    let cand_t = t + step[n] * alpha;
                    if let Some(f) = self.objective(tau, &cand_l, cand_t) {
                        // Near the center rounding swamps the predicted decrease.
                        if decrement < 1e-6 || f <= f0 - 0.25 * alpha * decrement {
                            lambda = cand_l;
                            t = cand_t;
                            moved = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                if !moved || decrement < 1e-8 {
                    break;
                }
            }
            lambda /= lambda.sum();
            let value = self.max_residual(&lambda);
            t = t.max(value * (1.0 + 1e-12) + f64::MIN_POSITIVE);
            let slack = GAP_TOL * value.max(1.0);
            if value - self.lower_bound(&lambda, t) <= slack || theta / tau <= slack {
                return Ok(value);
            }
            if iterations > MAX_NEWTON {
                return Err(Error::NoConvergence { iterations });
            }
            tau *= 50.0;
        }
    }

    /// Dual bound: for `Σ |y_k| = 1`, `max_k |r_k| >= Σ_k <y_k, r_k> >= min_i (Σ_k V_kᵀ y_k)_i`.
    /// The barrier multipliers `y_k ∝ r_k / (t² - |r_k|²)` become optimal on the central path.
    fn lower_bound(&self, lambda: &DVector<f64>, t: f64) -> f64 {
        let mut w = DVector::zeros(self.n);
        let mut total = 0.0;
        for (vk, r) in self.v.iter().zip(self.residuals(lambda)) {
            let rn = r.norm();
            let y = r / ((t - rn) * (t + rn));
            total += y.norm();
            w += vk.transpose() * y;
        }
        if total == 0.0 {
            return 0.0;
        }
        (w.min() / total).max(0.0)
    }

    /// Gradient and Hessian in `(λ, t)`.
    fn derivatives(&self, tau: f64, lambda: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let mut grad = DVector::zeros(n + 1);
        let mut hess = DMatrix::zeros(n + 1, n + 1);
        grad[n] = tau;
        for i in 0..n {
            grad[i] = -1.0 / lambda[i];
            hess[(i, i)] = 1.0 / (lambda[i] * lambda[i]);
        }
        let mut ds = DVector::zeros(n + 1);
        for (k, r) in self.residuals(lambda).into_iter().enumerate() {
            let rn = r.norm();
            let s = (t - rn) * (t + rn);
            // ∇s = (-2 V_kᵀ r_k, 2t).
            ds.rows_mut(0, n).copy_from(&(self.v[k].transpose() * r * -2.0));
            ds[n] = 2.0 * t;
            grad -= &ds / s;
            hess.ger(1.0 / (s * s), &ds, &ds, 1.0);
            let mut block = hess.view_mut((0, 0), (n, n));
            block += &self.gram[k] * (2.0 / s);
            hess[(n, n)] -= 2.0 / s;
        }
        (grad, hess)
    }
}

/// Newton direction for the barrier with `Σ λ = 1` held fixed.
fn newton_step(grad: &DVector<f64>, hess: &DMatrix<f64>, n: usize) -> Option<DVector<f64>> {
    let m = n + 1;
    // Symmetric diagonal scaling tames the 1/s² and 1/λ² growth near the optimum.
    let scale: Vec<f64> = (0..m).map(|i| 1.0 / hess[(i, i)].abs().max(f64::MIN_POSITIVE).sqrt()).collect();
    let mut kkt = DMatrix::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            kkt[(i, j)] = hess[(i, j)] * scale[i] * scale[j];
        }
    }
    let row_norm = (0..n).map(|i| scale[i] * scale[i]).sum::<f64>().sqrt();
    for i in 0..n {
        kkt[(i, m)] = scale[i] / row_norm;
        kkt[(m, i)] = scale[i] / row_norm;
    }
    let mut rhs = DVector::zeros(m + 1);
    for i in 0..m {
        rhs[i] = -grad[i] * scale[i];
    }
    let sol = kkt.full_piv_lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(DVector::from_fn(m, |i, _| sol[i] * scale[i]))
}

/// `|I - σ_h|` in the sup-block operator norm: a block permutation moves
/// some block iff it is not the identity, and then the block `u` sent to
/// `-u` realizes 2.
pub fn sup_block_operator_deviation(sp: &LiftedSpace, h: usize) -> f64 {
    if h == sp.group.identity() {
        0.0
    } else {
        2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftReport {
    pub base_dim: usize,
    pub lifted_dim: usize,
    pub order: usize,
    /// Elements the sup-block checks ran over.
    pub elements: Vec<usize>,
    /// `max_{h, v} |Φ(h v) - σ_h Φ(v)|_∞` over vertices `v` of `A`, all `h`.
    pub point_defect: f64,
    /// `max_h d_H(Φ(hA), σ_h Φ(A))`, Euclidean in the lifted space, all `h`.
    pub body_defect: f64,
    /// `max_h [d_H(Φ(A), σ_h Φ(A)) - |I - σ_h| max |Φ(a)|]` under the
    /// sup-block norm; nonpositive when the continuity bound holds.
    pub continuity_slack: f64,
    /// `max_h |d_H(σ_h Φ(A), σ_h Φ(B)) - d_H(Φ(A), Φ(B))|` under the sup-block norm.
    pub isometry_defect: Option<f64>,
    /// `d_H^sb(Φ(A), Φ(B)) / d_H(A, B)`, when `A != B`.
    pub distortion: Option<f64>,
}

/// Equivariance of the lift on `a` over the whole group, and continuity and
/// isometry of the lifted action under the sup-block norm for the listed
/// elements (isometry needs a second body).
pub fn lift_report(sp: &LiftedSpace, a: &ConvexBody, b: Option<&ConvexBody>, elements: &[usize]) -> Result<LiftReport> {
    let la = lift_body(a, sp)?;
    let mut point_defect = 0.0f64;
    let mut body_defect = 0.0f64;
    for h in 0..sp.blocks() {
        for v in a.vertices() {
            let direct = lift_point(&sp.group.act_point(h, v), sp)?;
            let moved = sp.act_lifted_point(h, &lift_point(v, sp)?)?;
            let gap = direct.iter().zip(&moved).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            point_defect = point_defect.max(gap);
        }
        let direct = lift_body(&sp.group.act_body(h, a)?, sp)?;
        body_defect = body_defect.max(crate::body::hausdorff(&direct, &sp.act_lifted_body(h, &la)?)?);
    }

    let bn = sp.norm();
    let radius = bn.max_vertex_norm(&la);
    let mut continuity_slack = f64::NEG_INFINITY;
    for &h in elements {
        if h >= sp.blocks() {
            return Err(Error::ParameterOutOfRange {
                name: "element",
                value: h as f64,
            });
        }
        let lhs = bn.hausdorff(&la, &sp.act_lifted_body(h, &la)?)?;
        continuity_slack = continuity_slack.max(lhs - sup_block_operator_deviation(sp, h) * radius);
    }

    let (isometry_defect, distortion) = match b {
        Some(b) => {
            let lb = lift_body(b, sp)?;
            let base = bn.hausdorff(&la, &lb)?;
            let mut defect = 0.0f64;
            for &h in elements {
                let moved = bn.hausdorff(&sp.act_lifted_body(h, &la)?, &sp.act_lifted_body(h, &lb)?)?;
                defect = defect.max((moved - base).abs());
            }
            let euclid = crate::body::hausdorff(a, b)?;
            (Some(defect), (euclid > 0.0).then(|| base / euclid))
        }
        None => (None, None),
    };
    Ok(LiftReport {
        base_dim: sp.base_dim(),
        lifted_dim: sp.lifted_dim(),
        order: sp.blocks(),
        elements: elements.to_vec(),
        point_defect,
        body_defect,
        continuity_slack,
        isometry_defect,
        distortion,
    })
}
