//! Extension problems built from group orbits, and the fixed catalog used by
//! the extension suite.
//!
//! `Z` is a union of orbits of representative points (plus optional fixed
//! points) with the metric `|T(z - w)|` for a map `T` making the action
//! isometric. An orbit whose representative carries a body `B` belongs to the
//! subset, with `f(g r) = g B`.

use nalgebra::{DMatrix, DVector};

use crate::body::{hull, ConvexBody};
use crate::catalog::{CatalogGroup, GroupFamily};
use crate::error::{Error, Result};
use crate::extension::{build_gspace, extend, verify_extension_tol, ExtensionProblem, ExtensionReport};
use crate::group::GroupAction;
use crate::vector::{dist, Point};

const POINT_MATCH_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct Orbit {
    pub rep: Point,
    pub value: Option<ConvexBody>,
}

impl Orbit {
    pub fn inside(rep: Point, value: ConvexBody) -> Self {
        Self { rep, value: Some(value) }
    }

    pub fn outside(rep: Point) -> Self {
        Self { rep, value: None }
    }
}

pub fn orbit_problem(
    group: &GroupAction,
    straighten: &DMatrix<f64>,
    orbits: &[Orbit],
    fixed: &[Point],
) -> Result<ExtensionProblem> {
    let mut ids = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    let mut values = Vec::new();
    for (o, orbit) in orbits.iter().enumerate() {
        let start = points.len();
        for g in 0..group.order() {
            let p = group.act_point(g, &orbit.rep);
            if points[start..].iter().any(|q| dist(q, &p) < POINT_MATCH_TOL) {
                continue;
            }
            if let Some(b) = &orbit.value {
                values.push((points.len(), group.act_body(g, b)?));
            }
            ids.push(format!("o{o}.{}", points.len() - start));
            points.push(p);
        }
    }
    for (i, c) in fixed.iter().enumerate() {
        ids.push(if fixed.len() == 1 { "c".to_string() } else { format!("c{i}") });
        points.push(c.clone());
    }

    let index_of = |p: &Point| points.iter().position(|q| dist(q, p) < POINT_MATCH_TOL);
    let mut permutations = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let perm = points
            .iter()
            .map(|z| {
                index_of(&group.act_point(g, z))
                    .ok_or_else(|| Error::NotAnAction(format!("g{g} moves a point outside Z")))
            })
            .collect::<Result<Vec<_>>>()?;
        permutations.push(perm);
    }
    let metric = points
        .iter()
        .map(|z| {
            points
                .iter()
                .map(|w| (straighten * DVector::from_iterator(z.len(), z.iter().zip(w).map(|(a, b)| a - b))).norm())
                .collect()
        })
        .collect();
    let space = build_gspace(ids, metric, permutations, group.clone())?;
    ExtensionProblem::new(space, values)
}

#[derive(Debug, Clone)]
pub struct NamedProblem {
    pub name: &'static str,
    pub problem: ExtensionProblem,
}

fn poly(points: &[&[f64]]) -> ConvexBody {
    hull(points.iter().map(|p| p.to_vec()).collect()).expect("catalog bodies are valid")
}

fn shifted(a: &ConvexBody, by: &[f64]) -> ConvexBody {
    a.translate(by).expect("matching dimension")
}

fn problem(name: &'static str, group: CatalogGroup, orbits: Vec<Orbit>, fixed: Vec<Point>) -> Result<NamedProblem> {
    let built = group.build()?;
    Ok(NamedProblem {
        name,
        problem: orbit_problem(&built, &group.straightening(), &orbits, &fixed)?,
    })
}

/// Twelve problems with `|Z| <= 64`, `|G| <= 24`, `d <= 3`, linear, affine and
/// non-orthogonal actions.
pub fn fixed_problems() -> Result<Vec<NamedProblem>> {
    let tri = poly(&[&[0.0, 0.0], &[0.6, 0.1], &[0.2, 0.5]]);
    let quad = poly(&[&[-0.3, -0.1], &[0.4, -0.2], &[0.5, 0.3], &[-0.1, 0.45]]);
    let pent = poly(&[&[0.0, -0.5], &[0.45, -0.1], &[0.3, 0.4], &[-0.25, 0.35], &[-0.4, -0.2]]);
    let square = ConvexBody::cube(2, 0.25);
    let body3 = poly(&[
        &[0.0, 0.0, 0.0],
        &[0.5, 0.1, -0.1],
        &[0.1, 0.4, 0.2],
        &[-0.2, 0.1, 0.5],
        &[0.2, -0.3, 0.3],
    ]);

    let tetra = CatalogGroup::new(3, GroupFamily::TetrahedralRotations);
    let tetra_body = {
        let g = tetra.build()?;
        let pts = (0..g.order()).map(|h| g.act_point(h, &[0.3, 0.3, 0.3])).collect();
        hull(pts)?
    };
    let octa_center = vec![0.5, -0.5, 1.0];

    Ok(vec![
        problem(
            "z2-line-three-points",
            CatalogGroup::new(1, GroupFamily::SignFlips),
            vec![Orbit::inside(vec![1.0], ConvexBody::singleton(vec![1.0]))],
            vec![vec![0.0]],
        )?,
        problem(
            "d4-square-vertices-and-center",
            CatalogGroup::new(2, GroupFamily::Dihedral { n: 4 }),
            vec![Orbit::inside(vec![1.0, 1.0], shifted(&square, &[1.0, 1.0]))],
            vec![vec![0.0, 0.0]],
        )?,
        problem(
            "c6-polygons",
            CatalogGroup::new(2, GroupFamily::Cyclic { n: 6 }),
            vec![
                Orbit::inside(vec![2.0, 0.5], shifted(&tri, &[2.0, 0.5])),
                Orbit::outside(vec![1.0, 2.5]),
            ],
            vec![vec![0.0, 0.0]],
        )?,
        problem(
            "d3-affine",
            CatalogGroup::new(2, GroupFamily::Dihedral { n: 3 }).translated(vec![1.0, -1.0]),
            vec![
                Orbit::inside(vec![3.0, 0.3], shifted(&quad, &[3.0, 0.3])),
                Orbit::outside(vec![0.2, 2.0]),
            ],
            vec![vec![1.0, -1.0]],
        )?,
        problem(
            "d5-affine-two-subset-orbits",
            CatalogGroup::new(2, GroupFamily::Dihedral { n: 5 }).translated(vec![-0.5, 2.0]),
            vec![
                Orbit::inside(vec![1.0, 0.2], shifted(&tri, &[1.0, 0.2])),
                Orbit::inside(vec![2.5, 1.1], shifted(&pent, &[2.5, 1.1])),
                Orbit::outside(vec![0.4, 3.0]),
            ],
            vec![],
        )?,
        problem(
            "c12-rotations",
            CatalogGroup::new(2, GroupFamily::Cyclic { n: 12 }),
            vec![
                Orbit::inside(vec![3.0, 0.7], shifted(&pent, &[3.0, 0.7])),
                Orbit::outside(vec![1.0, 1.9]),
            ],
            vec![vec![0.0, 0.0]],
        )?,
        problem(
            "d12-order-24",
            CatalogGroup::new(2, GroupFamily::Dihedral { n: 12 }),
            vec![
                Orbit::inside(vec![2.2, 0.3], shifted(&tri, &[2.2, 0.3])),
                Orbit::outside(vec![0.9, 1.7]),
            ],
            vec![vec![0.0, 0.0]],
        )?,
        problem(
            "c4-sheared",
            CatalogGroup::new(2, GroupFamily::Cyclic { n: 4 }).sheared(0.5),
            vec![
                Orbit::inside(vec![1.5, 0.4], shifted(&quad, &[1.5, 0.4])),
                Orbit::outside(vec![0.3, 1.2]),
            ],
            vec![vec![0.0, 0.0]],
        )?,
        problem(
            "tetrahedral-invariant-body",
            tetra,
            vec![
                Orbit::inside(vec![1.2, 0.4, -0.3], shifted(&tetra_body, &[1.2, 0.4, -0.3])),
                Orbit::outside(vec![0.2, 1.5, 0.9]),
            ],
            vec![vec![0.0, 0.0, 0.0]],
        )?,
        problem(
            "octahedral-affine-invariant-body",
            CatalogGroup::new(3, GroupFamily::OctahedralRotations).translated(octa_center.clone()),
            vec![
                Orbit::inside(vec![2.0, 0.5, 0.1], shifted(&ConvexBody::cube(3, 0.2), &[2.0, 0.5, 0.1])),
                Orbit::outside(vec![0.4, 1.8, -1.0]),
            ],
            vec![octa_center],
        )?,
        problem(
            "sign-flips-3d",
            CatalogGroup::new(3, GroupFamily::SignFlips),
            vec![
                Orbit::inside(vec![1.1, 0.6, 0.3], shifted(&body3, &[1.1, 0.6, 0.3])),
                Orbit::outside(vec![0.4, 1.3, 0.8]),
            ],
            vec![vec![0.0, 0.0, 0.0]],
        )?,
        problem(
            "z2-affine-intervals",
            CatalogGroup::new(1, GroupFamily::SignFlips).translated(vec![0.5]),
            vec![
                Orbit::inside(vec![2.0], hull(vec![vec![1.8], vec![2.6]])?),
                Orbit::outside(vec![3.1]),
                Orbit::outside(vec![1.2]),
            ],
            vec![vec![0.5]],
        )?,
    ])
}

/// Extension of `p` moved by `offset` at its first point outside the subset;
/// equivariance then fails by `max_h |offset - L_h offset|` or more.
pub fn negative_control(p: &ExtensionProblem, offset: &[f64], tol: f64) -> Result<ExtensionReport> {
    let mut f = extend(p)?;
    let space = p.space();
    let z = (0..space.len())
        .find(|&z| p.value(z).is_none())
        .ok_or_else(|| Error::InvalidProblem("the subset is all of Z".into()))?;
    f[z] = f[z].translate(offset)?;
    verify_extension_tol(p, &f, tol)
}
