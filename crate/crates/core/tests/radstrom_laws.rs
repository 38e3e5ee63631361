use hyperconvex::body::{hausdorff, minkowski_sum, ConvexBody};
use hyperconvex::catalog::{case_rng, random_body_with, random_catalog_group, random_unit, CaseRng};
use hyperconvex::radstrom::{
    class_distance, embed_j, fd_act, fd_add, fd_equal, fd_norm, fd_scale, support_realization, FormalDifference,
    CLASS_TOL,
};
use rand::Rng;

fn body(rng: &mut CaseRng, d: usize) -> ConvexBody {
    random_body_with(rng, d, 3, 8, 3.0)
}

fn pair(rng: &mut CaseRng, d: usize) -> FormalDifference {
    FormalDifference::new(body(rng, d), body(rng, d)).unwrap()
}

fn same(x: &FormalDifference, y: &FormalDifference) -> bool {
    fd_equal(x, y, CLASS_TOL).unwrap()
}

#[test]
fn vector_space_laws_up_to_equivalence() {
    for i in 0..60 {
        let mut rng = case_rng(21, "radstrom-laws", i);
        let d = 1 + (i as usize) % 3;
        let (x, y, z) = (pair(&mut rng, d), pair(&mut rng, d), pair(&mut rng, d));
        let zero = FormalDifference::zero(d);
        assert!(same(&fd_add(&x, &y).unwrap(), &fd_add(&y, &x).unwrap()));
        let left = fd_add(&fd_add(&x, &y).unwrap(), &z).unwrap();
        let right = fd_add(&x, &fd_add(&y, &z).unwrap()).unwrap();
        assert!(same(&left, &right));
        assert!(same(&fd_add(&x, &zero).unwrap(), &x));
        assert!(same(&fd_add(&x, &fd_scale(-1.0, &x)).unwrap(), &zero));

        let (s, t) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let lhs = fd_scale(t, &fd_add(&x, &y).unwrap());
        let rhs = fd_add(&fd_scale(t, &x), &fd_scale(t, &y)).unwrap();
        assert!(same(&lhs, &rhs));
        assert!(same(&fd_scale(s + t, &x), &fd_add(&fd_scale(s, &x), &fd_scale(t, &x)).unwrap()));

        // Composition of scalings across both sign branches.
        let (s, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        assert!(same(&fd_scale(s, &fd_scale(t, &x)), &fd_scale(s * t, &x)));
    }
}

#[test]
fn operations_respect_classes() {
    for i in 0..40 {
        let mut rng = case_rng(22, "radstrom-classes", i);
        let d = 1 + (i as usize) % 3;
        let x = pair(&mut rng, d);
        let y = pair(&mut rng, d);
        let c = body(&mut rng, d);
        // Same class, different representative.
        let x2 = FormalDifference::new(minkowski_sum(&x.pos, &c).unwrap(), minkowski_sum(&x.neg, &c).unwrap()).unwrap();
        assert!(same(&x, &x2));
        assert!(same(&fd_add(&x, &y).unwrap(), &fd_add(&x2, &y).unwrap()));
        assert!((fd_norm(&x).unwrap() - fd_norm(&x2).unwrap()).abs() < 1e-9);

        let dirs: Vec<_> = (0..32).map(|_| random_unit(&mut rng, d)).collect();
        let s1 = support_realization(&x, &dirs).unwrap();
        let s2 = support_realization(&x2, &dirs).unwrap();
        for (a, b) in s1.values.iter().zip(&s2.values) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(s1.max_abs() <= fd_norm(&x).unwrap() + 1e-9);

        let g = random_catalog_group(&mut rng, d, 24).build().unwrap();
        let h = rng.gen_range(0..g.order());
        let el = g.element(h);
        assert!(same(&fd_act(el, &x).unwrap(), &fd_act(el, &x2).unwrap()));
        let t = rng.gen_range(-2.0..2.0);
        assert!(same(&fd_act(el, &fd_scale(t, &x)).unwrap(), &fd_scale(t, &fd_act(el, &x).unwrap())));
    }
}

#[test]
fn embedding_is_isometric_and_cancels() {
    for i in 0..60 {
        let mut rng = case_rng(23, "radstrom-embedding", i);
        let d = 1 + (i as usize) % 3;
        let (a, b, c) = (body(&mut rng, d), body(&mut rng, d), body(&mut rng, d));
        let diff = fd_add(&embed_j(&a), &fd_scale(-1.0, &embed_j(&b))).unwrap();
        assert!((fd_norm(&diff).unwrap() - hausdorff(&a, &b).unwrap()).abs() < 1e-9);
        let lhs = embed_j(&minkowski_sum(&a, &c).unwrap());
        let rhs = embed_j(&minkowski_sum(&b, &c).unwrap());
        assert!((class_distance(&lhs, &rhs).unwrap() - hausdorff(&a, &b).unwrap()).abs() < 1e-9);
        let again = embed_j(&minkowski_sum(&a, &c).unwrap());
        assert!(same(&lhs, &again));
    }
}

#[test]
fn intervals_by_hand() {
    let unit = hyperconvex::hull(vec![vec![0.0], vec![1.0]]).unwrap();
    let long = hyperconvex::hull(vec![vec![0.0], vec![2.0]]).unwrap();
    let x = embed_j(&unit);
    let y = embed_j(&long);
    assert_eq!(class_distance(&x, &y).unwrap(), 1.0);
    assert!(!same(&x, &y));
}
