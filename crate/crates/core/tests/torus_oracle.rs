mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::{c, max_abs, M};
use ncgeom::{AlgebraElement, Error, NCTorus};
use num_complex::Complex64 as Complex;

const POINTS: [(usize, usize); 7] = [(3, 1), (4, 1), (5, 1), (5, 2), (7, 2), (8, 3), (12, 5)];

#[test]
fn parameters_at_a_quarter_turn() {
    let t = NCTorus::new(4, 1).unwrap();
    assert_relative_eq!(t.theta(), PI / 4.0, epsilon = 1e-15);
    assert!((t.q() - c(0.0, 1.0)).norm() < 1e-15);
    assert_relative_eq!(t.hbar(), 1.0, epsilon = 1e-15);
    assert!(t.relation_residuals().max_residual() < 1e-12);
}

#[test]
fn hbar_at_a_fifth_turn() {
    assert_relative_eq!(NCTorus::new(5, 1).unwrap().hbar(), 0.7265425, epsilon = 1e-7);
}

#[test]
fn excluded_parameters_are_reported() {
    assert!(matches!(NCTorus::new(4, 2), Err(Error::UnsupportedTorus { .. })));
    assert!(matches!(NCTorus::new(6, 0), Err(Error::UnsupportedTorus { .. })));
    assert!(matches!(NCTorus::new(6, 4), Err(Error::UnsupportedTorus { .. })));
    assert!(matches!(NCTorus::new(2, 1), Err(Error::InvalidDimension { .. })));
}

#[test]
fn generators_match_the_reference_construction() {
    for (n, k) in POINTS {
        let t = NCTorus::new(n, k).unwrap();
        let (x, d, h, u, v) = common::torus(n, k);
        assert_relative_eq!(t.hbar(), h, epsilon = 1e-15);
        assert!(max_abs(&(t.clock().matrix() - &u)) < 1e-15);
        assert!(max_abs(&(t.shift().matrix() - &v)) < 1e-15);
        for (i, xi) in x.iter().enumerate() {
            assert!(max_abs(&(t.geometry().generator(i).matrix() - xi)) < 1e-15);
        }
        for (b, block) in d.iter().enumerate() {
            assert!(max_abs(&(t.tangent_projector().block(b / 4, b % 4).matrix() - block)) < 1e-15);
        }
    }
}

#[test]
fn defining_relations_from_raw_matrices() {
    for (n, k) in POINTS.into_iter().chain([(50, 1)]) {
        let (x, _, h, u, v) = common::torus(n, k);
        let q = Complex::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let id = M::identity(n, n);
        assert!(max_abs(&(&v * &u - &u * &v * q)) < 1e-12);
        assert!(max_abs(&(&u * u.adjoint() - &id)) < 1e-12);
        let ih = c(0.0, h);
        let anti = |a: &M, b: &M| a * b + b * a;
        assert!(max_abs(&common::comm(&x[0], &x[1])) < 1e-12);
        assert!(max_abs(&common::comm(&x[2], &x[3])) < 1e-12);
        assert!(max_abs(&(common::comm(&x[0], &x[2]) - anti(&x[1], &x[3]) * ih)) < 1e-11);
        assert!(max_abs(&(common::comm(&x[1], &x[3]) - anti(&x[0], &x[2]) * ih)) < 1e-11);
        assert!(max_abs(&(common::comm(&x[0], &x[3]) + anti(&x[1], &x[2]) * ih)) < 1e-11);
        assert!(max_abs(&(common::comm(&x[1], &x[2]) + anti(&x[0], &x[3]) * ih)) < 1e-11);
        let half = &id * c(0.5, 0.0);
        assert!(max_abs(&(&x[0] * &x[0] + &x[1] * &x[1] - &half)) < 1e-12);
        assert!(max_abs(&(&x[2] * &x[2] + &x[3] * &x[3] - &half)) < 1e-12);
        let t = NCTorus::new(n, k).unwrap();
        assert!(t.relation_residuals().max_residual() < 1e-11 * h.max(1.0));
        assert!(t.exchange_relations().max_residual() < 1e-12 * h.max(1.0) * 10.0);
        assert!(t.structural_zeros() < 1e-12);
    }
}

#[test]
fn bracket_operator_has_commuting_pairs() {
    let t = NCTorus::new(7, 2).unwrap();
    let p = t.geometry().poisson_operator();
    assert!(p.block(0, 1).max_abs_entry() < 1e-12);
    assert!(p.block(2, 3).max_abs_entry() < 1e-12);
    assert!(p.block(0, 2).max_abs_entry() > 0.1);
}

#[test]
fn projectors_and_ranks() {
    for (n, k) in POINTS {
        let t = NCTorus::new(n, k).unwrap();
        let g = t.geometry();
        assert!(
            g.projector_checks(t.normal_projector(), Some(t.tangent_projector()))
                .max_residual()
                < 1e-12
        );
        let two = AlgebraElement::scalar(n, c(2.0, 0.0));
        assert!(g.module_rank(t.tangent_projector()).unwrap().distance(&two) < 1e-12);
        assert!(g.module_rank(t.normal_projector()).unwrap().distance(&two) < 1e-12);
    }
}

#[test]
fn reference_curvature_vanishes() {
    for (n, k) in POINTS {
        let (x, d, h, _, _) = common::torus(n, k);
        let r = common::curvature(&x, &d, h);
        let worst = r.iter().map(max_abs).fold(0.0, f64::max);
        assert!(worst < 1e-10, "({n},{k}): {worst}");
        assert!(max_abs(&common::scalar(&x, h, &r)) < 1e-10);
        let flat = NCTorus::new(n, k).unwrap().flatness();
        assert!(flat.max_component < 1e-10);
        assert_eq!(flat.classes.len(), 7);
        assert!(flat.classes.iter().all(|(_, r)| *r < 1e-10));
        assert!(flat.scalar < 1e-10);
    }
}

#[test]
fn projector_commutes_into_closed_traces() {
    for (n, k) in POINTS {
        let t = NCTorus::new(n, k).unwrap();
        let (sum, mixed) = t.closed_trace_commutators();
        assert!(sum < 1e-12);
        assert_eq!(mixed, 0.0);
        let g = t.geometry();
        let mut rng = common::seeded(n as u64);
        for _ in 0..20 {
            let u = g.random_vector(&mut rng);
            // Holds for any vector, not only tangent ones.
            let pi = t.normal_projector();
            for kk in 0..4 {
                let mut acc = AlgebraElement::zeros(n);
                for i in 0..4 {
                    acc = &acc + &(&g.generator(i).commutator(pi.block(i, kk)).unwrap() * u.component(kk));
                }
                assert!(acc.max_abs_entry() < 1e-12);
            }
        }
    }
}

#[test]
fn bases_span_and_are_orthogonal() {
    for (n, k) in POINTS {
        let t = NCTorus::new(n, k).unwrap();
        let tb = t.tangent_basis_checks(100, 5);
        assert!(tb.max_residual() < 1e-10, "({n},{k}) {tb:?}");
        let nb = t.normal_basis_checks(100, 6);
        assert!(nb.max_residual() < 1e-10, "({n},{k}) {nb:?}");
        let zero = t.tangent_basis_checks(0, 5);
        assert_eq!(zero.spanning, 0.0);
        assert_eq!(zero.independence, 0.0);
    }
}

#[test]
fn bases_in_closed_form() {
    let t = NCTorus::new(5, 2).unwrap();
    let g = t.geometry();
    let (e1, e2) = t.tangent_basis();
    let (np, nm) = t.normal_basis();
    let x = |i: usize| g.generator(i).clone();
    let z = AlgebraElement::zeros(5);
    let check = |v: &ncgeom::ModuleVector, expected: [AlgebraElement; 4]| {
        for (i, e) in expected.iter().enumerate() {
            assert!(v.component(i).distance(e) < 1e-15);
        }
    };
    check(&e1, [x(1).scale_real(-1.0), x(0), z.clone(), z.clone()]);
    check(&e2, [z.clone(), z.clone(), x(3).scale_real(-1.0), x(2)]);
    check(&np, [x(0), x(1), x(2), x(3)]);
    check(&nm, [x(0), x(1), x(2).scale_real(-1.0), x(3).scale_real(-1.0)]);
    for v in [&e1, &e2] {
        assert!(g.tangency_defect(v).unwrap() < 1e-12);
    }
    for (a, b) in [(&e1, &e2), (&e1, &np), (&e1, &nm), (&e2, &np), (&e2, &nm), (&np, &nm)] {
        assert!(g.metric(a, b).unwrap().max_abs_entry() < 1e-12);
    }
}
