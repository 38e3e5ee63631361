//! Seeded generators for bodies, directions and a fixed catalog of finite groups.
//!
//! Random bodies are hulls of `N in [4, 20]` points uniform in `[-5, 5]^d`.
//! Groups come from the families below, optionally conjugated by a
//! translation (affine isometric action) or by a fixed linear map
//! (non-orthogonal action).

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::body::{hull, ConvexBody};
use crate::error::{Error, Result};
use crate::group::{build_group, plane_rotation, Generator, GroupAction, DEFAULT_CAP};
use crate::vector::{norm, Point};

pub type CaseRng = ChaCha8Rng;

/// Independent stream for case `index` of the stream named `label`.
pub fn case_rng(seed: u64, label: &str, index: u64) -> CaseRng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    CaseRng::seed_from_u64(splitmix(seed ^ splitmix(h ^ splitmix(index))))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn random_point(rng: &mut impl Rng, dim: usize, half_width: f64) -> Point {
    (0..dim).map(|_| rng.gen_range(-half_width..=half_width)).collect()
}

/// Hull of `N in [4, 20]` points uniform in `[-5, 5]^dim`.
pub fn random_body(rng: &mut impl Rng, dim: usize) -> ConvexBody {
    random_body_with(rng, dim, 4, 20, 5.0)
}

pub fn random_body_with(rng: &mut impl Rng, dim: usize, min_pts: usize, max_pts: usize, half_width: f64) -> ConvexBody {
    let n = rng.gen_range(min_pts..=max_pts);
    let pts = (0..n).map(|_| random_point(rng, dim, half_width)).collect();
    hull(pts).expect("nonempty, consistent dimension")
}

pub fn random_unit(rng: &mut impl Rng, dim: usize) -> Point {
    loop {
        let p = random_point(rng, dim, 1.0);
        let n = norm(&p);
        if n > 0.05 && n <= 1.0 {
            return p.into_iter().map(|x| x / n).collect();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupFamily {
    Trivial,
    /// Rotations by multiples of `2π/n` in the plane of the first two coordinates.
    Cyclic { n: usize },
    /// The cyclic rotations plus the reflection `x_1 -> -x_1`.
    Dihedral { n: usize },
    /// All signed permutation matrices.
    Hyperoctahedral,
    /// Diagonal sign changes.
    SignFlips,
    /// Coordinate permutations.
    CoordinatePermutations,
    /// Rotation group of the cube in R^3 (order 24).
    OctahedralRotations,
    /// Rotation group of the tetrahedron in R^3 (order 12).
    TetrahedralRotations,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Conjugation {
    None,
    /// `x -> L(x - c) + c`: same linear parts, affine offsets.
    Translation { center: Vec<f64> },
    /// `M L M^-1` with a fixed upper-triangular shear `M`.
    Shear { amount: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogGroup {
    pub dim: usize,
    #[serde(flatten)]
    pub family: GroupFamily,
    pub conjugation: Conjugation,
}

impl CatalogGroup {
    pub fn new(dim: usize, family: GroupFamily) -> Self {
        Self {
            dim,
            family,
            conjugation: Conjugation::None,
        }
    }

    pub fn translated(mut self, center: Vec<f64>) -> Self {
        self.conjugation = Conjugation::Translation { center };
        self
    }

    pub fn sheared(mut self, amount: f64) -> Self {
        self.conjugation = Conjugation::Shear { amount };
        self
    }

    /// Order of the group, without building it.
    pub fn order(&self) -> usize {
        let d = self.dim;
        let fact = |k: usize| (1..=k).product::<usize>();
        match self.family {
            GroupFamily::Trivial => 1,
            GroupFamily::Cyclic { n } => n,
            GroupFamily::Dihedral { n } => 2 * n,
            GroupFamily::Hyperoctahedral => (1 << d) * fact(d),
            GroupFamily::SignFlips => 1 << d,
            GroupFamily::CoordinatePermutations => fact(d),
            GroupFamily::OctahedralRotations => 24,
            GroupFamily::TetrahedralRotations => 12,
        }
    }

    pub fn generators(&self) -> Result<Vec<Generator>> {
        let d = self.dim;
        let linear: Vec<DMatrix<f64>> = match self.family {
            GroupFamily::Trivial => vec![DMatrix::identity(d, d)],
            GroupFamily::Cyclic { n } if d == 1 && n <= 2 => vec![DMatrix::from_element(1, 1, if n == 2 { -1.0 } else { 1.0 })],
            GroupFamily::Cyclic { n } => {
                require_dim(d, 2)?;
                vec![plane_rotation(d, 2.0 * PI / n as f64)]
            }
            GroupFamily::Dihedral { n } => {
                require_dim(d, 2)?;
                let mut s = DMatrix::identity(d, d);
                s[(1, 1)] = -1.0;
                vec![plane_rotation(d, 2.0 * PI / n as f64), s]
            }
            GroupFamily::Hyperoctahedral => {
                let mut gens = vec![sign_flip(d, 0)];
                gens.extend((0..d.saturating_sub(1)).map(|i| transposition(d, i, i + 1)));
                gens
            }
            GroupFamily::SignFlips => (0..d).map(|i| sign_flip(d, i)).collect(),
            GroupFamily::CoordinatePermutations => {
                if d == 1 {
                    vec![DMatrix::identity(1, 1)]
                } else {
                    (0..d - 1).map(|i| transposition(d, i, i + 1)).collect()
                }
            }
            GroupFamily::OctahedralRotations => {
                require_exact_dim(d, 3)?;
                vec![
                    DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
                    DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]),
                ]
            }
            GroupFamily::TetrahedralRotations => {
                require_exact_dim(d, 3)?;
                vec![
                    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
                    DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0]),
                ]
            }
        };
        Ok(match &self.conjugation {
            Conjugation::None => linear.into_iter().map(|l| (l, vec![0.0; d])).collect(),
            Conjugation::Translation { center } => linear
                .into_iter()
                .map(|l| {
                    let lc = &l * nalgebra::DVector::from_column_slice(center);
                    let offset = center.iter().zip(lc.iter()).map(|(c, x)| c - x).collect();
                    (l, offset)
                })
                .collect(),
            Conjugation::Shear { amount } => {
                let m = shear(d, *amount);
                let m_inv = m.clone().try_inverse().expect("unit upper-triangular");
                linear.into_iter().map(|l| (&m * l * &m_inv, vec![0.0; d])).collect()
            }
        })
    }

    /// A linear map `T` with `|T(x - y)|` invariant under the action.
    pub fn straightening(&self) -> DMatrix<f64> {
        match &self.conjugation {
            Conjugation::Shear { amount } => shear(self.dim, *amount).try_inverse().expect("unit upper-triangular"),
            _ => DMatrix::identity(self.dim, self.dim),
        }
    }

    pub fn build(&self) -> Result<GroupAction> {
        build_group(&self.generators()?, DEFAULT_CAP)
    }
}

fn require_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        Err(Error::DimensionMismatch { expected: min, found: d })
    } else {
        Ok(())
    }
}

fn require_exact_dim(d: usize, want: usize) -> Result<()> {
    if d != want {
        Err(Error::DimensionMismatch { expected: want, found: d })
    } else {
        Ok(())
    }
}

fn sign_flip(d: usize, i: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(d, d);
    m[(i, i)] = -1.0;
    m
}

fn transposition(d: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(d, d);
    m[(i, i)] = 0.0;
    m[(j, j)] = 0.0;
    m[(i, j)] = 1.0;
    m[(j, i)] = 1.0;
    m
}

fn shear(d: usize, amount: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(d, d);
    for i in 0..d.saturating_sub(1) {
        m[(i, i + 1)] = amount;
    }
    m
}

/// Linear catalog entries available in dimension `dim` with order `<= max_order`.
pub fn catalog_families(dim: usize, max_order: usize) -> Vec<CatalogGroup> {
    let mut out = vec![CatalogGroup::new(dim, GroupFamily::SignFlips)];
    if dim == 1 {
        out.push(CatalogGroup::new(1, GroupFamily::Trivial));
    } else {
        for n in 2..=12 {
            out.push(CatalogGroup::new(dim, GroupFamily::Cyclic { n }));
            out.push(CatalogGroup::new(dim, GroupFamily::Dihedral { n }));
        }
        out.push(CatalogGroup::new(dim, GroupFamily::CoordinatePermutations));
        if dim <= 3 {
            out.push(CatalogGroup::new(dim, GroupFamily::Hyperoctahedral));
        }
        if dim == 3 {
            out.push(CatalogGroup::new(3, GroupFamily::OctahedralRotations));
            out.push(CatalogGroup::new(3, GroupFamily::TetrahedralRotations));
        }
    }
    out.retain(|g| g.order() <= max_order);
    out
}

/// Uniform draw from [`catalog_families`].
pub fn random_catalog_group(rng: &mut impl Rng, dim: usize, max_order: usize) -> CatalogGroup {
    let fams = catalog_families(dim, max_order);
    fams[rng.gen_range(0..fams.len())].clone()
}

/// A catalog group conjugated by a random translation, giving an affine
/// action with orthogonal linear parts.
pub fn random_affine_group(rng: &mut impl Rng, dim: usize, max_order: usize) -> CatalogGroup {
    let mut g = random_catalog_group(rng, dim, max_order);
    while g.family == GroupFamily::Trivial {
        g = random_catalog_group(rng, dim, max_order);
    }
    g.translated(random_point(rng, dim, 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ActionKind;

    #[test]
    fn catalog_orders_match_closures() {
        for d in 1..=3 {
            for g in catalog_families(d, 256) {
                let built = g.build().unwrap();
                assert_eq!(built.order(), g.order(), "{g:?}");
                assert_eq!(built.kind(), ActionKind::LinearIsometric);
            }
        }
    }

    #[test]
    fn conjugations_change_kind_not_order() {
        let base = CatalogGroup::new(2, GroupFamily::Dihedral { n: 4 });
        let t = base.clone().translated(vec![1.0, -0.5]).build().unwrap();
        assert_eq!(t.order(), 8);
        assert_eq!(t.kind(), ActionKind::Affine);
        let s = base.sheared(0.7).build().unwrap();
        assert_eq!(s.order(), 8);
        assert_eq!(s.kind(), ActionKind::Affine);
        assert!(s.elements().iter().all(|g| !g.has_offset()));
    }

    #[test]
    fn case_streams_are_reproducible_and_distinct() {
        let a: f64 = case_rng(7, "metric", 3).gen();
        let b: f64 = case_rng(7, "metric", 3).gen();
        let c: f64 = case_rng(7, "metric", 4).gen();
        let e: f64 = case_rng(7, "group", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, e);
    }
}
