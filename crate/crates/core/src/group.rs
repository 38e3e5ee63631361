//! Finite groups acting on R^d by affine maps `x -> Lx + b`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::body::{affine_image, hausdorff, ConvexBody};
use crate::error::{check_dim, Error, Result};
use crate::vector::{norm, Point};

/// Entry-wise tolerance used to identify group elements during closure.
pub const MATCH_TOL: f64 = 1e-9;
pub const DEFAULT_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    /// Orthogonal linear parts, zero offsets.
    #[serde(rename = "linear")]
    LinearIsometric,
    Affine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub index: usize,
    pub linear: DMatrix<f64>,
    pub offset: Vec<f64>,
}

impl GroupElement {
    pub fn new(index: usize, linear: DMatrix<f64>, offset: Vec<f64>) -> Self {
        Self {
            index,
            linear,
            offset,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(0, DMatrix::identity(dim, dim), vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &[f64]) -> Point {
        (0..self.dim())
            .map(|i| {
                let row: f64 = (0..self.dim()).map(|j| self.linear[(i, j)] * x[j]).sum();
                row + self.offset[i]
            })
            .collect()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupElement) -> (DMatrix<f64>, Vec<f64>) {
        let linear = &self.linear * &other.linear;
        let offset = self
            .apply(&other.offset)
            .into_iter()
            .collect::<Vec<f64>>();
        (linear, offset)
    }

    pub fn has_offset(&self) -> bool {
        norm(&self.offset) > 1e-12
    }

    pub fn is_orthogonal(&self) -> bool {
        let d = self.dim();
        let gram = self.linear.transpose() * &self.linear;
        (gram - DMatrix::<f64>::identity(d, d)).amax() <= MATCH_TOL
    }

    fn matches(&self, linear: &DMatrix<f64>, offset: &[f64]) -> bool {
        (&self.linear - linear).amax() < MATCH_TOL
            && self
                .offset
                .iter()
                .zip(offset)
                .all(|(a, b)| (a - b).abs() < MATCH_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupAction {
    dim: usize,
    elements: Vec<GroupElement>,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    kind: ActionKind,
}

/// A generator `x -> matrix * x + offset`.
pub type Generator = (DMatrix<f64>, Vec<f64>);

impl GroupAction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    /// Index of `g_i ∘ g_j`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.cayley[i][j]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    /// Assembles a group from elements and a multiplication table, checking
    /// that the table is a group and that composing the maps reproduces it.
    pub fn from_parts(dim: usize, maps: Vec<Generator>, cayley: Vec<Vec<usize>>) -> Result<Self> {
        let elements: Vec<GroupElement> = maps
            .into_iter()
            .enumerate()
            .map(|(i, (l, b))| GroupElement::new(i, l, b))
            .collect();
        for e in &elements {
            check_dim(dim, e.dim())?;
            check_dim(dim, e.linear.nrows())?;
            check_dim(dim, e.linear.ncols())?;
        }
        for (i, gi) in elements.iter().enumerate() {
            for (j, gj) in elements.iter().enumerate() {
                let (l, b) = gi.compose(gj);
                let k = *cayley
                    .get(i)
                    .and_then(|row| row.get(j))
                    .ok_or_else(|| Error::NotAGroup("cayley table has the wrong shape".into()))?;
                if k >= elements.len() || !elements[k].matches(&l, &b) {
                    return Err(Error::NotAGroup(format!(
                        "g{i} ∘ g{j} does not match table entry {k}"
                    )));
                }
            }
        }
        Self::from_table(dim, elements, cayley)
    }

    /// Trusts that `cayley` describes composition of `elements`; validates the
    /// table's group axioms only.
    pub(crate) fn from_table(dim: usize, elements: Vec<GroupElement>, cayley: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if cayley.len() != n || cayley.iter().any(|r| r.len() != n || r.iter().any(|&k| k >= n)) {
            return Err(Error::NotAGroup("cayley table has the wrong shape".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| cayley[e][i] == i && cayley[i][e] == i))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for i in 0..n {
            let inv = (0..n)
                .find(|&j| cayley[i][j] == identity && cayley[j][i] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {i} has no inverse")))?;
            inverse.push(inv);
        }
        let kind = if elements.iter().all(|g| !g.has_offset() && g.is_orthogonal()) {
            ActionKind::LinearIsometric
        } else {
            ActionKind::Affine
        };
        let group = Self {
            dim,
            elements,
            cayley,
            identity,
            inverse,
            kind,
        };
        group.check_associativity()?;
        Ok(group)
    }

    /// Exhaustive for `|G| <= 64`, sampled along a fixed stride above that.
    fn check_associativity(&self) -> Result<()> {
        let n = self.order();
        let stride = if n <= 64 { 1 } else { n / 31 + 1 };
        for a in (0..n).step_by(stride) {
            for b in 0..n {
                for c in (0..n).step_by(stride) {
                    let left = self.cayley[self.cayley[a][b]][c];
                    let right = self.cayley[a][self.cayley[b][c]];
                    if left != right {
                        return Err(Error::NotAGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn act_point(&self, g: usize, x: &[f64]) -> Point {
        self.elements[g].apply(x)
    }

    pub fn act_body(&self, g: usize, a: &ConvexBody) -> Result<ConvexBody> {
        act_body(&self.elements[g], a)
    }
}

/// Closes `generators` under composition (breadth first from the identity;
/// element 0 is always the identity).
pub fn build_group(generators: &[Generator], cap: usize) -> Result<GroupAction> {
    let dim = match generators.first() {
        Some((m, _)) => m.nrows(),
        None => return Err(Error::EmptyInput),
    };
    let gens: Vec<GroupElement> = generators
        .iter()
        .enumerate()
        .map(|(i, (l, b))| GroupElement::new(i, l.clone(), b.clone()))
        .collect();
    for g in &gens {
        check_dim(dim, g.linear.nrows())?;
        check_dim(dim, g.linear.ncols())?;
        check_dim(dim, g.offset.len())?;
    }

    let mut elements = vec![GroupElement::identity(dim)];
    let mut frontier = 0;
    while frontier < elements.len() {
        for s in &gens {
            let (l, b) = s.compose(&elements[frontier]);
            if !elements.iter().any(|e| e.matches(&l, &b)) {
                if elements.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                let index = elements.len();
                elements.push(GroupElement::new(index, l, b));
            }
        }
        frontier += 1;
    }

    let n = elements.len();
    let mut cayley = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (l, b) = elements[i].compose(&elements[j]);
            cayley[i][j] = elements
                .iter()
                .position(|e| e.matches(&l, &b))
                .ok_or_else(|| Error::NotAGroup(format!("g{i} ∘ g{j} escaped the closure")))?;
        }
    }
    GroupAction::from_table(dim, elements, cayley)
}

/// `gA = {ga : a in A}`.
pub fn act_body(g: &GroupElement, a: &ConvexBody) -> Result<ConvexBody> {
    affine_image(a, &g.linear, &g.offset, 1.0)
}

/// `||1 - g||_*`: the largest singular value of `I - L`.
pub fn operator_deviation(g: &GroupElement) -> Result<f64> {
    if g.has_offset() {
        return Err(Error::AffineElement(g.index));
    }
    let d = g.dim();
    let m = DMatrix::<f64>::identity(d, d) - &g.linear;
    Ok(m.singular_values().iter().cloned().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityCheck {
    /// `d_H(A, gA)`.
    pub lhs: f64,
    /// `||1 - g||_* * max_a ||a||`.
    pub rhs: f64,
    pub ok: bool,
}

pub fn continuity_check(a: &ConvexBody, g: &GroupElement) -> Result<ContinuityCheck> {
    continuity_check_tol(a, g, 1e-9)
}

pub fn continuity_check_tol(a: &ConvexBody, g: &GroupElement, tol: f64) -> Result<ContinuityCheck> {
    let rhs = operator_deviation(g)? * a.max_vertex_norm();
    let lhs = hausdorff(a, &act_body(g, a)?)?;
    Ok(ContinuityCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + tol,
    })
}

pub fn rotation2(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Rotation by `theta` in the plane of the first two coordinates of R^dim.
pub fn plane_rotation(dim: usize, theta: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim, dim);
    let (s, c) = theta.sin_cos();
    m[(0, 0)] = c;
    m[(0, 1)] = -s;
    m[(1, 0)] = s;
    m[(1, 1)] = c;
    m
}
