use std::f64::consts::PI;

use approx::assert_relative_eq;
use hyperwigner::kernels::{g_plus, g_s, laplacian_fd, smooth_radial, zonal_sum, KernelTable};
use hyperwigner::quadrature::{gauss_legendre, QuadSpec};
use hyperwigner::specfun::{assoc_conical_u, conical_p, phi_k, ConicalQuad};
use hyperwigner::states::wigner_ground;
use hyperwigner::{HyperPoint, IrrepIndex, KernelOrder};
use num_complex::Complex64;

fn k(twice: u32) -> IrrepIndex {
    IrrepIndex::new(twice).unwrap()
}

fn q_closed(k: IrrepIndex, x: f64) -> f64 {
    0.5 * k.dim_factor() * ((1.0 + x) / 2.0).powf(-2.0 * k.value())
}

#[test]
fn q_kernel_closed_form() {
    let spec = QuadSpec::with_tol(1e-10);
    for kk in [k(2), k(3), k(4), k(7)] {
        for x in [1.0, 1.3, 5.0 / 3.0, 3.0, 12.0] {
            assert_relative_eq!(
                g_s(kk, KernelOrder::Q, x, &spec).unwrap(),
                q_closed(kk, x),
                epsilon = 1e-8
            );
        }
    }
}

#[test]
fn wigner_kernel_by_plain_quadrature() {
    // brute force: Gauss–Legendre panels of width 1/4 on [0, 40] of λ tanh(πλ) Φ^{1/2} P
    let rule = gauss_legendre(16);
    for (kk, x) in [(k(2), 1.0), (k(2), 2.0), (k(5), 1.5)] {
        let mut want = 0.0;
        for i in 0..160 {
            let a = 0.25 * i as f64;
            want += rule.integrate(a, a + 0.25, |l| {
                l * (PI * l).tanh() * phi_k(kk, l).sqrt() * conical_p(l, x).unwrap()
            });
        }
        assert_relative_eq!(g_plus(kk, x, &QuadSpec::with_tol(1e-10)).unwrap(), want, epsilon = 1e-9);
    }
}

#[test]
fn wigner_kernel_properties() {
    let spec = QuadSpec::with_tol(1e-10);
    let kk = k(2);
    assert_relative_eq!(
        g_s(kk, KernelOrder::WIGNER, 1.7, &spec).unwrap(),
        g_plus(kk, 1.7, &spec).unwrap(),
        epsilon = 1e-12
    );
    assert!(g_plus(kk, 100.0, &spec).unwrap().abs() < g_plus(kk, 10.0, &spec).unwrap().abs());
    assert!(g_plus(kk, 1.0, &spec).unwrap() > 0.0);
    for tau in [0.0f64, 0.4, 1.9] {
        assert_relative_eq!(
            2.0 / kk.dim_factor() * g_plus(kk, tau.cosh(), &spec).unwrap(),
            wigner_ground(kk, tau, &spec).unwrap(),
            max_relative = 1e-8
        );
    }
}

#[test]
fn table_agrees_with_direct_evaluation() {
    let spec = QuadSpec::with_tol(1e-11);
    for s in [KernelOrder::WIGNER, KernelOrder::Q, KernelOrder::new(-0.4).unwrap()] {
        let table = KernelTable::shared(k(3), s, 1e-10).unwrap();
        for x in [1.0, 1.05, 2.5, 40.0] {
            assert_relative_eq!(table.eval(x).unwrap(), g_s(k(3), s, x, &spec).unwrap(), epsilon = 1e-9);
        }
    }
}

#[test]
fn spectral_sum_matches_pointwise_sum() {
    let x = 2.2;
    let quad = ConicalQuad::real(x, 12.0, 0, 1e-14).unwrap();
    let dl = 0.05;
    let weights: Vec<f64> = (0..=240).map(|j| (-(0.3 * j as f64 * dl)).exp()).collect();
    let direct: f64 = weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * conical_p(j as f64 * dl, x).unwrap())
        .sum();
    assert_relative_eq!(quad.spectral_sum(dl, &weights).re, direct, max_relative = 1e-11);
}

#[test]
fn delta_kernel_on_test_functions() {
    let spec = QuadSpec::with_tol(1e-6);
    let f = |x: f64| (-(x - 1.0)).exp();
    let at_origin = smooth_radial(k(2), KernelOrder::P, f, &spec).unwrap();
    assert_relative_eq!(at_origin, f(1.0), epsilon = 1e-3);
    // the Q kernel through the same transform, against its closed form on the radial integral
    let kk = k(2);
    let rule = gauss_legendre(20);
    let mut want = 0.0;
    for i in 0..120 {
        let a = 0.25 * i as f64;
        want += rule.integrate(a, a + 0.25, |t| q_closed(kk, t.cosh()) * f(t.cosh()) * t.sinh());
    }
    assert_relative_eq!(
        smooth_radial(kk, KernelOrder::Q, f, &spec).unwrap(),
        want,
        epsilon = 1e-5
    );
}

#[test]
fn zonal_sums() {
    let a = HyperPoint::new(0.5, 0.0).unwrap();
    let b = HyperPoint::new(1.0, 1.0).unwrap();
    let s = zonal_sum(1.0, &a, &b, 25).unwrap();
    assert_relative_eq!(s.re, conical_p(1.0, a.cosh_distance(&b)).unwrap(), epsilon = 1e-6);
    assert!(s.im.abs() < 1e-12);
    let c = HyperPoint::new(0.5, 2.0).unwrap();
    let base = zonal_sum(0.7, &a, &c, 0).unwrap();
    let u = |p: &HyperPoint| assoc_conical_u(0, 0.7, p.tau(), p.phi()).unwrap();
    assert!((base - u(&a) * u(&c).conj()).norm() < 1e-14);
    assert_relative_eq!(zonal_sum(2.0, &b, &b, 30).unwrap().re, 1.0, epsilon = 1e-9);
}

#[test]
fn finite_difference_laplacian() {
    let p = HyperPoint::new(0.9, 0.4).unwrap();
    let constant = laplacian_fd(|_q: &HyperPoint| Complex64::new(3.0, 0.0), &p, 1e-3).unwrap();
    assert!(constant.norm() < 1e-8);
    let cosh = laplacian_fd(|q: &HyperPoint| Complex64::new(q.tau().cosh(), 0.0), &p, 1e-3).unwrap();
    assert_relative_eq!(cosh.re, 2.0 * 0.9f64.cosh(), epsilon = 1e-6);
}
