use std::f64::consts::PI;

use approx::assert_relative_eq;
use hyperwigner::geometry::{cross_ratio_arg, measure_weight, mobius_apply, pseudo_dot};
use hyperwigner::quadrature::{integrate_disc, QuadSpec};
use hyperwigner::{DiscPoint, GroupElement, HyperPoint};
use num_complex::Complex64;

fn element(a: Complex64, b: Complex64) -> GroupElement {
    let n = (a.norm_sqr() - b.norm_sqr()).sqrt();
    GroupElement::new(a / n, b / n).unwrap()
}

#[test]
fn coordinates() {
    let h = DiscPoint::origin().to_hyper();
    assert_eq!((h.tau(), h.phi()), (0.0, 0.0));
    let h = DiscPoint::from_re_im(0.5, 0.0).unwrap().to_hyper();
    assert_relative_eq!(h.tau(), 2.0 * 0.5f64.atanh(), epsilon = 1e-14);
    assert_relative_eq!(h.tau(), 1.098612, epsilon = 1e-6);
    let p = HyperPoint::new(1.0, PI / 3.0).unwrap();
    let q = p.to_disc().to_hyper();
    assert_relative_eq!(q.tau(), 1.0, epsilon = 1e-14);
    assert_relative_eq!(q.phi(), PI / 3.0, epsilon = 1e-14);
}

#[test]
fn bloch_vectors() {
    let b = HyperPoint::new(1.0, 0.0).unwrap().bloch();
    assert_relative_eq!(b.minkowski_norm(), 1.0, epsilon = 1e-12);
    let a = HyperPoint::origin().bloch();
    let z = DiscPoint::from_re_im(0.5, 0.0).unwrap().to_hyper().bloch();
    assert_relative_eq!(pseudo_dot(&a, &z).unwrap(), 5.0 / 3.0, epsilon = 1e-12);
    assert_relative_eq!(pseudo_dot(&z, &z).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn cross_ratio() {
    let p = DiscPoint::from_re_im(0.5, 0.0).unwrap().to_hyper();
    let zero = Complex64::new(0.0, 0.0);
    assert!((cross_ratio_arg(&p, zero, zero) - 5.0 / 3.0).norm() < 1e-12);
    let q = HyperPoint::new(0.7, 2.0).unwrap();
    let (a, b) = (Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.4));
    assert!((cross_ratio_arg(&q, a, b) - cross_ratio_arg(&q, b, a).conj()).norm() < 1e-12);
    let z = q.to_disc().zeta();
    assert!((cross_ratio_arg(&q, z, z) - 1.0).norm() < 1e-12);
}

#[test]
fn group_actions() {
    let r: f64 = 0.8;
    let z = mobius_apply(&GroupElement::boost(r), &DiscPoint::origin()).unwrap();
    assert!((z.zeta() - (0.5 * r).tanh()).norm() < 1e-15);
    let a = GroupElement::boost(0.3).compose(&GroupElement::boost(0.9));
    let b = GroupElement::boost(1.2);
    assert!((a.alpha() - b.alpha()).norm() < 1e-12 && (a.beta() - b.beta()).norm() < 1e-12);
    let g = element(Complex64::new(1.3, 0.4), Complex64::new(0.6, -0.5));
    let p = DiscPoint::from_re_im(-0.2, 0.55).unwrap();
    let back = mobius_apply(&g, &mobius_apply(&g.inverse(), &p).unwrap()).unwrap();
    assert!((back.zeta() - p.zeta()).norm() < 1e-12);
}

#[test]
fn distance_is_invariant() {
    let g = element(Complex64::new(1.3, 0.4), Complex64::new(0.6, -0.5));
    let a = DiscPoint::from_re_im(0.1, 0.3).unwrap();
    let b = DiscPoint::from_re_im(-0.6, 0.2).unwrap();
    let d0 = a.to_hyper().cosh_distance(&b.to_hyper());
    let d1 = mobius_apply(&g, &a)
        .unwrap()
        .to_hyper()
        .cosh_distance(&mobius_apply(&g, &b).unwrap().to_hyper());
    assert_relative_eq!(d0, d1, max_relative = 1e-12);
}

#[test]
fn measure_is_invariant() {
    // dμ = dx dy / (1 − |ζ|²)²; the Jacobian of a Möbius map compensates the density
    assert_eq!(measure_weight(&HyperPoint::<f64>::origin()), 0.0);
    assert_relative_eq!(
        measure_weight(&HyperPoint::new(1.0, 0.3).unwrap()),
        1f64.sinh() / 4.0,
        epsilon = 1e-15
    );
    let g = element(Complex64::new(1.1, -0.3), Complex64::new(0.2, 0.45));
    let density = |z: Complex64| 1.0 / (1.0 - z.norm_sqr()).powi(2);
    let map = |x: f64, y: f64| mobius_apply(&g, &DiscPoint::from_re_im(x, y).unwrap()).unwrap().zeta();
    let h = 1e-5;
    for (x, y) in [(0.1, 0.2), (-0.5, 0.3), (0.0, -0.7)] {
        let dx = (map(x + h, y) - map(x - h, y)) / (2.0 * h);
        let dy = (map(x, y + h) - map(x, y - h)) / (2.0 * h);
        let jac = dx.re * dy.im - dx.im * dy.re;
        assert_relative_eq!(
            jac * density(map(x, y)),
            density(Complex64::new(x, y)),
            max_relative = 1e-8
        );
    }
}

#[test]
fn disc_quadrature() {
    let tau_max = 2.5;
    let spec = QuadSpec {
        tau_max,
        ..QuadSpec::with_tol(1e-10)
    };
    let area = integrate_disc(|_p: HyperPoint| 1.0, &spec).unwrap();
    assert_relative_eq!(area.value, PI / 2.0 * (tau_max.cosh() - 1.0), max_relative = 1e-10);
    let odd = integrate_disc(
        |p: HyperPoint| p.phi().sin() * (-2.0 * p.tau()).exp(),
        &QuadSpec::disc(),
    )
    .unwrap();
    assert!(odd.value.abs() < 1e-12);
}
