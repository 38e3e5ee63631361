use hyperconvex::body::{affine_image, hausdorff, hull, minkowski_sum, project_point, ConvexBody};
use hyperconvex::catalog::{case_rng, catalog_families, random_body, random_point, random_unit};
use hyperconvex::group::{continuity_check, operator_deviation, rotation2, GroupElement};
use hyperconvex::suite::enumerated_distance;
use hyperconvex::vector::{dot, Point};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

/// Whether `p` lies in the simplex spanned by `s` (`d + 1` points).
fn in_simplex(p: &[f64], s: &[&Point]) -> bool {
    let d = p.len();
    let m = DMatrix::from_fn(d, d, |r, c| s[c + 1][r] - s[0][r]);
    let rhs = DVector::from_iterator(d, (0..d).map(|r| p[r] - s[0][r]));
    match m.lu().solve(&rhs) {
        Some(mu) => mu.iter().all(|&x| x >= -1e-12) && mu.sum() <= 1.0 + 1e-12,
        None => false,
    }
}

/// By Caratheodory, a point is not extreme iff some simplex of `d + 1` other
/// points contains it.
fn brute_extreme_count(pts: &[Point]) -> usize {
    let d = pts[0].len();
    let n = pts.len();
    (0..n)
        .filter(|&i| {
            let others: Vec<&Point> = (0..n).filter(|&j| j != i).map(|j| &pts[j]).collect();
            let mut idx: Vec<usize> = (0..=d).collect();
            loop {
                let simplex: Vec<&Point> = idx.iter().map(|&k| others[k]).collect();
                if in_simplex(&pts[i], &simplex) {
                    return false;
                }
                // Next combination of d + 1 indices out of n - 1.
                let mut k = d;
                loop {
                    if idx[k] < others.len() - 1 - (d - k) {
                        idx[k] += 1;
                        for j in k + 1..=d {
                            idx[j] = idx[j - 1] + 1;
                        }
                        break;
                    }
                    if k == 0 {
                        return true;
                    }
                    k -= 1;
                }
            }
        })
        .count()
}

#[test]
fn hull_matches_brute_force_extreme_points() {
    for (dim, n, cases) in [(2, 50, 10), (3, 20, 5), (4, 12, 5)] {
        for i in 0..cases {
            let mut rng = case_rng(11, "hull-oracle", (dim * 1000 + i) as u64);
            let pts: Vec<Point> = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
            let h = hull(pts.clone()).unwrap();
            assert_eq!(h.len(), brute_extreme_count(&pts), "dim {dim} case {i}");
        }
    }
}

#[test]
fn support_is_max_over_vertices() {
    let mut rng = case_rng(12, "support-oracle", 0);
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let a = random_body(&mut rng, d);
        let u = random_unit(&mut rng, d);
        let s = a.support(&u).unwrap();
        let brute = a.vertices().iter().map(|v| dot(v, &u)).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s.value, brute);
        let first = a.vertices().iter().position(|v| dot(v, &u) == brute).unwrap();
        assert_eq!(s.witness, first);
    }
}

#[test]
fn minkowski_support_additivity_in_three_dimensions() {
    let mut rng = case_rng(13, "additivity", 0);
    for _ in 0..20 {
        let a = random_body(&mut rng, 3);
        let b = random_body(&mut rng, 3);
        let s = minkowski_sum(&a, &b).unwrap();
        for _ in 0..1000 {
            let u = random_unit(&mut rng, 3);
            let gap = s.support(&u).unwrap().value - a.support(&u).unwrap().value - b.support(&u).unwrap().value;
            assert!(gap.abs() < 1e-9);
        }
    }
}

#[test]
fn projection_agrees_with_enumeration_in_three_dimensions() {
    let mut rng = case_rng(14, "projection", 0);
    for _ in 0..300 {
        let a = random_body(&mut rng, 3);
        let p = random_point(&mut rng, 3, 8.0);
        let np = project_point(&p, &a).unwrap();
        assert!((np.distance - enumerated_distance(&p, a.vertices())).abs() < 1e-6);
        let q = &np.point;
        for v in a.vertices() {
            let vi: f64 = p.iter().zip(q).zip(v).map(|((p, q), v)| (p - q) * (v - q)).sum();
            assert!(vi <= 1e-8);
        }
    }
}

#[test]
fn square_corner_distance() {
    let a = ConvexBody::cube(2, 1.0);
    let b = ConvexBody::cube(2, 2.0);
    assert!((hausdorff(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let doubled = affine_image(&a, &DMatrix::identity(2, 2), &[0.0, 0.0], 2.0).unwrap();
    assert_eq!(doubled, b);
}

fn power_iteration_norm(m: &DMatrix<f64>) -> f64 {
    let mtm = m.transpose() * m;
    let mut x = DVector::from_element(m.ncols(), 1.0).normalize();
    let mut lambda = 0.0;
    for _ in 0..500 {
        let y = &mtm * &x;
        lambda = y.norm();
        if lambda == 0.0 {
            return 0.0;
        }
        x = y / lambda;
    }
    lambda.sqrt()
}

#[test]
fn rotation_deviation_closed_form_and_power_iteration() {
    for k in 0..24 {
        let theta = 0.3 + k as f64 * 0.25;
        let g = GroupElement::new(1, rotation2(theta), vec![0.0, 0.0]);
        let dev = operator_deviation(&g).unwrap();
        assert!((dev - 2.0 * (theta / 2.0).sin().abs()).abs() < 1e-9);
        let oracle = power_iteration_norm(&(DMatrix::identity(2, 2) - rotation2(theta)));
        assert!((dev - oracle).abs() < 1e-9);
    }
}

#[test]
fn continuity_bound_for_polygonal_disk() {
    let disk = hull((0..64).map(|k| {
        let t = k as f64 * std::f64::consts::TAU / 64.0;
        vec![t.cos(), t.sin()]
    }).collect())
    .unwrap();
    let g = GroupElement::new(1, rotation2(0.01), vec![0.0, 0.0]);
    let c = continuity_check(&disk, &g).unwrap();
    assert!(c.ok);
    assert!(c.lhs <= 0.01 * disk.max_vertex_norm() + 1e-9);
}

#[test]
fn action_axioms_across_catalog() {
    let mut rng = case_rng(15, "action-axioms", 0);
    for d in 1..=3 {
        for cat in catalog_families(d, 48) {
            let g = cat.build().unwrap();
            let a = random_body(&mut rng, d);
            let b = random_body(&mut rng, d);
            let base = hausdorff(&a, &b).unwrap();
            for _ in 0..4 {
                let (h, k) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
                let lhs = g.act_body(g.product(h, k), &a).unwrap();
                let rhs = g.act_body(h, &g.act_body(k, &a).unwrap()).unwrap();
                assert!(hausdorff(&lhs, &rhs).unwrap() < 1e-9, "{cat:?}");
                let moved = hausdorff(&g.act_body(h, &a).unwrap(), &g.act_body(h, &b).unwrap()).unwrap();
                assert!((moved - base).abs() < 1e-9, "{cat:?}");
            }
        }
    }
}

fn small_body(dim: usize) -> impl Strategy<Value = ConvexBody> {
    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim), 1..10).prop_map(|pts| hull(pts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(a in small_body(3)) {
        prop_assert_eq!(hull(a.vertices().to_vec()).unwrap(), a);
    }

    #[test]
    fn hausdorff_symmetric_and_translation_invariant(
        a in small_body(2),
        b in small_body(2),
        shift in prop::collection::vec(-5.0f64..5.0, 2),
    ) {
        let d = hausdorff(&a, &b).unwrap();
        prop_assert!((d - hausdorff(&b, &a).unwrap()).abs() < 1e-9);
        let moved = hausdorff(&a.translate(&shift).unwrap(), &b.translate(&shift).unwrap()).unwrap();
        prop_assert!((moved - d).abs() < 1e-9);
    }

    #[test]
    fn minkowski_commutes(a in small_body(3), b in small_body(3)) {
        let ab = minkowski_sum(&a, &b).unwrap();
        let ba = minkowski_sum(&b, &a).unwrap();
        prop_assert!(hausdorff(&ab, &ba).unwrap() < 1e-9);
    }

    #[test]
    fn planar_sum_matches_pairwise_hull(a in small_body(2), b in small_body(2)) {
        let sum = minkowski_sum(&a, &b).unwrap();
        let pairwise: Vec<Point> = a
            .vertices()
            .iter()
            .flat_map(|x| b.vertices().iter().map(move |y| vec![x[0] + y[0], x[1] + y[1]]))
            .collect();
        prop_assert!(hausdorff(&sum, &hull(pairwise).unwrap()).unwrap() < 1e-9);
    }
}
