//! Truncated Cantor groups `Z_2^k` acting on `R^(2^k)` with the sup norm.
//!
//! Group elements are sign vectors `x ∈ {±1}^k` stored as bitmasks (bit `i - 1`
//! set means `x_i = -1`), so the componentwise product is XOR and the
//! identity is `0`. A function `f: Z_2^k -> R` is a vector indexed by masks,
//! and `(g f)(x) = f(x g)` permutes coordinates by `x -> x ^ g`.
//!
//! The set `A` of functions with values in `[0, 1]` vanishing at the identity
//! is an axis box, and so is every translate `yA`, which makes the Hausdorff
//! distances exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};

/// Largest supported `k`; the ambient dimension is `2^k`.
pub const MAX_K: usize = 12;

/// Closed axis-parallel box `Π [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl IntervalBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if let Some(i) = (0..lo.len()).find(|&i| !(lo[i] <= hi[i])) {
            return Err(Error::ParameterOutOfRange {
                name: "interval",
                value: lo[i] - hi[i],
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        p.len() == self.dim() && (0..self.dim()).all(|i| p[i] >= self.lo[i] - tol && p[i] <= self.hi[i] + tol)
    }

    /// Coordinatewise clamp, a nearest point in the sup norm.
    pub fn clamp(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&x, (&lo, &hi))| x.clamp(lo, hi))
            .collect()
    }

    /// `(σ P)[x] = P[perm[x]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_dim(self.dim(), perm.len())?;
        Ok(Self {
            lo: perm.iter().map(|&j| self.lo[j]).collect(),
            hi: perm.iter().map(|&j| self.hi[j]).collect(),
        })
    }
}

/// Hausdorff distance between boxes under the sup norm.
///
/// The distance from a point to a box is attained coordinatewise, so the
/// directed distance is a max of per-coordinate interval excesses and the
/// symmetric distance reduces to endpoint differences.
pub fn box_hausdorff(p: &IntervalBox, q: &IntervalBox) -> Result<f64> {
    check_dim(p.dim(), q.dim())?;
    Ok((0..p.dim())
        .map(|i| (p.lo[i] - q.lo[i]).abs().max((p.hi[i] - q.hi[i]).abs()))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone)]
pub struct CantorScene {
    k: usize,
    /// `permutations[g][x] = x ^ g`.
    permutations: Vec<Vec<usize>>,
    a: IntervalBox,
}

impl CantorScene {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        1 << self.k
    }

    /// Ambient dimension `2^k`.
    pub fn dim(&self) -> usize {
        self.order()
    }

    pub fn product(&self, g: usize, h: usize) -> usize {
        g ^ h
    }

    /// `d(x, y) = Σ_i 2^-i [x_i != y_i]`.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        let diff = x ^ y;
        (0..self.k)
            .filter(|i| diff >> i & 1 == 1)
            .map(|i| 0.5f64.powi(i as i32 + 1))
            .sum()
    }

    pub fn sign_vector(&self, g: usize) -> Vec<i8> {
        (0..self.k).map(|i| if g >> i & 1 == 1 { -1 } else { 1 }).collect()
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.permutations[g]
    }

    /// The box `A`: `[0, 0]` at the identity coordinate, `[0, 1]` elsewhere.
    pub fn base_box(&self) -> &IntervalBox {
        &self.a
    }

    pub fn act_box(&self, g: usize, p: &IntervalBox) -> Result<IntervalBox> {
        p.permuted(&self.permutations[g])
    }

    pub fn act_point(&self, g: usize, f: &[f64]) -> Vec<f64> {
        self.permutations[g].iter().map(|&j| f[j]).collect()
    }
}

pub fn build_cantor_scene(k: usize) -> Result<CantorScene> {
    if k == 0 || k > MAX_K {
        return Err(Error::KTooLarge(k));
    }
    let n = 1usize << k;
    let permutations: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|x| x ^ g).collect()).collect();
    let mut hi = vec![1.0; n];
    hi[0] = 0.0;
    let a = IntervalBox { lo: vec![0.0; n], hi };
    let scene = CantorScene { k, permutations, a };
    if k <= 6 {
        check_action(&scene)?;
    }
    Ok(scene)
}

/// Exhaustive check of `σ_{gh} = σ_h ∘ σ_g` and `σ_e = id`.
pub fn check_action(scene: &CantorScene) -> Result<()> {
    let n = scene.order();
    if scene.permutations[0].iter().enumerate().any(|(x, &y)| x != y) {
        return Err(Error::NotAnAction("identity does not act trivially".into()));
    }
    let bad = (0..n * n).into_par_iter().find_any(|&idx| {
        let (g, h) = (idx / n, idx % n);
        let gh = &scene.permutations[scene.product(g, h)];
        (0..n).any(|x| gh[x] != scene.permutations[g][scene.permutations[h][x]])
    });
    match bad {
        Some(idx) => Err(Error::NotAnAction(format!(
            "composition fails for g{} h{}",
            idx / n,
            idx % n
        ))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityRow {
    pub y: Vec<i8>,
    #[serde(rename = "dH")]
    pub d_h: f64,
    pub dist: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityReport {
    pub k: usize,
    pub rows: Vec<DiscontinuityRow>,
    pub min_d_h: f64,
    pub max_ratio: f64,
    /// Sign vector of the element attaining `max_ratio`.
    pub argmax: Vec<i8>,
}

/// `d_H(A, yA)`, `d(e, y)` and their ratio for every `y != e`.
pub fn discontinuity_report(scene: &CantorScene) -> Result<DiscontinuityReport> {
    let rows: Vec<DiscontinuityRow> = (1..scene.order())
        .into_par_iter()
        .map(|y| {
            let ya = scene.act_box(y, &scene.a)?;
            let d_h = box_hausdorff(&scene.a, &ya)?;
            let dist = scene.distance(0, y);
            Ok(DiscontinuityRow {
                y: scene.sign_vector(y),
                d_h,
                dist,
                ratio: d_h / dist,
            })
        })
        .collect::<Result<_>>()?;
    let min_d_h = rows.iter().map(|r| r.d_h).fold(f64::INFINITY, f64::min);
    let best = rows
        .iter()
        .fold(&rows[0], |best, r| if r.ratio > best.ratio { r } else { best });
    Ok(DiscontinuityReport {
        k: scene.k,
        max_ratio: best.ratio,
        argmax: best.y.clone(),
        min_d_h,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scenes() {
        let s = build_cantor_scene(1).unwrap();
        assert_eq!((s.order(), s.dim()), (2, 2));
        assert_eq!(s.base_box().hi(), &[0.0, 1.0]);
        assert_eq!(build_cantor_scene(2).unwrap().dim(), 4);
        assert_eq!(build_cantor_scene(13).unwrap_err(), Error::KTooLarge(13));
        assert_eq!(build_cantor_scene(0).unwrap_err(), Error::KTooLarge(0));
    }

    #[test]
    fn pinned_coordinate_moves_to_y() {
        let s = build_cantor_scene(3).unwrap();
        for y in 1..8 {
            let ya = s.act_box(y, s.base_box()).unwrap();
            let pinned: Vec<usize> = (0..8).filter(|&i| ya.hi()[i] == 0.0).collect();
            assert_eq!(pinned, vec![y]);
        }
    }

    #[test]
    fn box_distance_examples() {
        let p = IntervalBox::new(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        let q = IntervalBox::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(box_hausdorff(&p, &p).unwrap(), 0.0);
        assert_eq!(box_hausdorff(&p, &q).unwrap(), 1.0);
        let r = IntervalBox::new(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(box_hausdorff(&p, &r), Err(Error::DimensionMismatch { .. })));
        assert!(IntervalBox::new(vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn report_for_k3() {
        let r = discontinuity_report(&build_cantor_scene(3).unwrap()).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert!(r.rows.iter().all(|row| row.d_h == 1.0));
        assert_eq!(r.max_ratio, 8.0);
        assert_eq!(r.argmax, vec![1, 1, -1]);
    }

    #[test]
    fn distance_is_invariant_metric() {
        let s = build_cantor_scene(4).unwrap();
        for x in 0..16 {
            for y in 0..16 {
                for g in 0..16 {
                    assert_eq!(s.distance(x ^ g, y ^ g), s.distance(x, y));
                }
            }
        }
        assert_eq!(s.distance(0, 0b1111), 0.9375);
    }
}
