use std::f64::consts::PI;

use approx::assert_relative_eq;
use hyperwigner::fock::{coherent_fock, overlap};
use hyperwigner::geometry::mobius_apply;
use hyperwigner::quadrature::integrate_disc;
use hyperwigner::states::{
    cat_norm, coherent_overlap, q_symbol, wigner_cat, wigner_coherent, wigner_from_fock, wigner_ground,
    wigner_matrix_element, wigner_number_first, wigner_offdiag, SymbolEvaluator,
};
use hyperwigner::{
    DensityMatrix, DiscPoint, GroupElement, HyperPoint, IrrepIndex, KernelOrder, Parity, QuadSpec, StateSpec,
};
use num_complex::Complex64;

fn k(twice: u32) -> IrrepIndex {
    IrrepIndex::new(twice).unwrap()
}

fn spec() -> QuadSpec {
    QuadSpec::default()
}

fn point(re: f64, im: f64) -> DiscPoint {
    DiscPoint::from_re_im(re, im).unwrap()
}

#[test]
fn ground_profile() {
    let kk = k(2);
    let w0 = wigner_ground(kk, 0.0, &spec()).unwrap();
    assert!(wigner_ground(kk, 10.0, &spec()).unwrap().abs() < 1e-3 * w0);
    let profile: Vec<f64> = (0..30)
        .map(|i| wigner_ground(kk, 0.1 * i as f64, &spec()).unwrap())
        .collect();
    assert!(profile.windows(2).all(|w| w[1] < w[0]));
    assert_relative_eq!(
        wigner_coherent(kk, &DiscPoint::origin(), &HyperPoint::new(0.7, 1.0).unwrap(), &spec()).unwrap(),
        wigner_ground(kk, 0.7, &spec()).unwrap(),
        epsilon = 1e-12
    );
}

#[test]
fn coherent_symbol_is_zonal() {
    // equal distance to ζ0 gives equal values
    let kk = k(3);
    let z0 = point(0.3, -0.2);
    let g = GroupElement::displacement(&z0);
    let spec = spec();
    for (tau, a, b) in [(0.5, 0.3, 2.0), (1.4, 1.0, 4.5)] {
        let pa = mobius_apply(&g, &HyperPoint::new(tau, a).unwrap().to_disc())
            .unwrap()
            .to_hyper();
        let pb = mobius_apply(&g, &HyperPoint::new(tau, b).unwrap().to_disc())
            .unwrap()
            .to_hyper();
        assert_relative_eq!(
            wigner_coherent(kk, &z0, &pa, &spec).unwrap(),
            wigner_coherent(kk, &z0, &pb, &spec).unwrap(),
            max_relative = 1e-9
        );
        assert_relative_eq!(
            wigner_coherent(kk, &z0, &pa, &spec).unwrap(),
            wigner_ground(kk, tau, &spec).unwrap(),
            max_relative = 1e-9
        );
    }
}

#[test]
fn offdiag_trace_is_overlap() {
    let kk = k(2);
    let (z0, z1) = (point(0.3, 0.1), point(-0.2, 0.25));
    let spec = spec();
    let est = integrate_disc(
        |p: HyperPoint| wigner_offdiag(kk, &z0, &z1, &p, &spec).unwrap(),
        &QuadSpec::disc(),
    )
    .unwrap();
    let trace = est.value * kk.dim_factor() / PI;
    let m = 200;
    let want = overlap(&coherent_fock(kk, &z1, m).unwrap(), &coherent_fock(kk, &z0, m).unwrap()).unwrap();
    assert!((trace - want).norm() < 1e-4, "{trace} vs {want}");
    let p = HyperPoint::new(0.6, 1.1).unwrap();
    let a = wigner_offdiag(kk, &z0, &z1, &p, &spec).unwrap();
    let b = wigner_offdiag(kk, &z1, &z0, &p, &spec).unwrap();
    assert!((a - b.conj()).norm() < 1e-10);
    let d = wigner_offdiag(kk, &z0, &z0, &p, &spec).unwrap();
    assert!(d.im.abs() < 1e-12);
    assert_relative_eq!(d.re, wigner_coherent(kk, &z0, &p, &spec).unwrap(), epsilon = 1e-10);
}

#[test]
fn cat_symmetry_and_parts() {
    let kk = k(10);
    let spec = spec();
    let tau0 = 1.0;
    for parity in [Parity::Even, Parity::Odd] {
        for (tau, phi) in [(0.3, 0.2), (1.1, 2.0)] {
            let a = wigner_cat(kk, tau0, parity, &HyperPoint::new(tau, phi).unwrap(), &spec).unwrap();
            let b = wigner_cat(kk, tau0, parity, &HyperPoint::new(tau, phi + PI).unwrap(), &spec).unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }
    // (|ζ0⟩ ± |−ζ0⟩)/√2 written out from coherent and off-diagonal symbols
    let z0 = HyperPoint::new(tau0, 0.0).unwrap().to_disc();
    let z1 = DiscPoint::new(-z0.zeta()).unwrap();
    let p = HyperPoint::new(0.8, 0.7).unwrap();
    let w00 = wigner_coherent(kk, &z0, &p, &spec).unwrap();
    let w11 = wigner_coherent(kk, &z1, &p, &spec).unwrap();
    let w01 = wigner_offdiag(kk, &z0, &z1, &p, &spec).unwrap();
    for (parity, sign) in [(Parity::Even, 1.0), (Parity::Odd, -1.0)] {
        let n = cat_norm(kk, tau0, parity);
        let want = n * n * (0.5 * (w00 + w11) + sign * w01.re);
        assert_relative_eq!(wigner_cat(kk, tau0, parity, &p, &spec).unwrap(), want, epsilon = 1e-8);
    }
}

#[test]
fn cat_norms() {
    let kk = k(10);
    let z0 = HyperPoint::new(1.0, 0.0).unwrap().to_disc();
    let z1 = DiscPoint::new(-z0.zeta()).unwrap();
    let ov = coherent_overlap(kk, &z0, &z1).re;
    assert_relative_eq!(
        cat_norm(kk, 1.0, Parity::Even),
        (1.0 + ov).sqrt().recip(),
        epsilon = 1e-14
    );
    assert_relative_eq!(
        cat_norm(kk, 1.0, Parity::Odd),
        (1.0 - ov).sqrt().recip(),
        epsilon = 1e-14
    );
}

#[test]
fn matrix_element_table() {
    let kk = k(2);
    let spec = spec();
    for (tau, phi) in [(0.0, 0.0), (0.5, 1.2), (1.7, 4.0)] {
        let p = HyperPoint::new(tau, phi).unwrap();
        let w00 = wigner_matrix_element(kk, 0, 0, &p, &spec).unwrap();
        assert_relative_eq!(w00.re, wigner_ground(kk, tau, &spec).unwrap(), epsilon = 1e-8);
        let w11 = wigner_matrix_element(kk, 1, 1, &p, &spec).unwrap();
        assert_relative_eq!(w11.re, wigner_number_first(kk, tau, &spec).unwrap(), epsilon = 1e-5);
        for (m, n) in [(0, 1), (1, 3), (2, 4)] {
            let a = wigner_matrix_element(kk, m, n, &p, &spec).unwrap();
            let b = wigner_matrix_element(kk, n, m, &p, &spec).unwrap();
            assert!((a - b.conj()).norm() < 1e-8);
        }
    }
}

#[test]
fn number_state_traces() {
    let kk = k(2);
    let spec = spec();
    for (m, n) in [(1, 1), (2, 2), (0, 1), (1, 2)] {
        let est = integrate_disc(
            |p: HyperPoint| wigner_matrix_element(kk, m, n, &p, &spec).unwrap(),
            &QuadSpec::disc(),
        )
        .unwrap();
        let want = if m == n { 1.0 } else { 0.0 };
        assert!(
            (est.value * kk.dim_factor() / PI - want).norm() < 1e-4,
            "({m}, {n}): {}",
            est.value
        );
    }
}

#[test]
fn number_state_overlap_with_coherent() {
    // (2k−1)/π ∫ W_1 W_ζ0 dμ = |⟨ζ0|1⟩|²
    let kk = k(2);
    let z0 = point(0.4, 0.2);
    let spec = spec();
    let w1 = SymbolEvaluator::new(kk, KernelOrder::WIGNER, &StateSpec::Number { m: 1 }, &spec).unwrap();
    let wz = SymbolEvaluator::new(kk, KernelOrder::WIGNER, &StateSpec::Coherent { zeta0: z0 }, &spec).unwrap();
    let est = integrate_disc(
        |p: HyperPoint| w1.eval(&p).unwrap() * wz.eval(&p).unwrap(),
        &QuadSpec::disc(),
    )
    .unwrap();
    let c1 = coherent_fock(kk, &z0, 4).unwrap().amplitudes()[1];
    assert_relative_eq!(est.value * kk.dim_factor() / PI, c1.norm_sqr(), epsilon = 1e-4);
}

#[test]
fn density_matrices() {
    let kk = k(2);
    let spec = spec();
    let p = HyperPoint::new(0.9, 0.3).unwrap();
    let ground = DensityMatrix::diagonal(&[1.0]).unwrap();
    assert_relative_eq!(
        wigner_from_fock(kk, &ground, &p, &spec).unwrap(),
        wigner_ground(kk, 0.9, &spec).unwrap(),
        epsilon = 1e-10
    );
    let mixed = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
    let want = 0.5 * (wigner_ground(kk, 0.9, &spec).unwrap() + wigner_number_first(kk, 0.9, &spec).unwrap());
    assert_relative_eq!(wigner_from_fock(kk, &mixed, &p, &spec).unwrap(), want, epsilon = 1e-6);
}

#[test]
fn truncated_coherent_state_converges() {
    let kk = k(2);
    let spec = spec();
    let p = HyperPoint::new(0.4, 0.5).unwrap();
    let gap = |r: f64| {
        let z0 = point(r, 0.0);
        let rho = DensityMatrix::pure(&coherent_fock(kk, &z0, 4).unwrap()).unwrap();
        (wigner_from_fock(kk, &rho, &p, &spec).unwrap() - wigner_coherent(kk, &z0, &p, &spec).unwrap()).abs()
    };
    assert!(gap(0.05) < 1e-5);
    assert!(gap(0.1) < 1e-3);
    assert!(gap(0.05) < gap(0.1));
}

#[test]
fn q_symbols() {
    let kk = k(2);
    let z0 = point(0.2, -0.4);
    let coherent = StateSpec::Coherent { zeta0: z0 };
    for (tau, phi) in [(0.3, 1.0), (1.2, 5.0)] {
        let p = HyperPoint::new(tau, phi).unwrap();
        let x = p.cosh_distance(&z0.to_hyper());
        assert_relative_eq!(
            q_symbol(kk, &coherent, &p, None, 1e-10).unwrap(),
            ((1.0 + x) / 2.0).powf(-2.0 * kk.value()),
            epsilon = 1e-8
        );
        // number states: |⟨ζ|m⟩|²
        for m in 0..3 {
            let c = coherent_fock(kk, &p.to_disc(), 4).unwrap().amplitudes()[m];
            assert_relative_eq!(
                q_symbol(kk, &StateSpec::Number { m }, &p, None, 1e-10).unwrap(),
                c.norm_sqr(),
                epsilon = 1e-10
            );
        }
    }
    assert_relative_eq!(
        q_symbol(kk, &coherent, &z0.to_hyper(), None, 1e-10).unwrap(),
        1.0,
        epsilon = 1e-8
    );
    let p = point(0.5, 0.0).to_hyper();
    assert_relative_eq!(
        q_symbol(kk, &StateSpec::Ground, &p, None, 1e-10).unwrap(),
        0.5625,
        epsilon = 1e-10
    );
}

#[test]
fn superposition_matches_cat() {
    let kk = k(4);
    let tau0 = 0.8;
    let z0 = HyperPoint::new(tau0, 0.0).unwrap().to_disc();
    let z1 = DiscPoint::new(-z0.zeta()).unwrap();
    let n = cat_norm(kk, tau0, Parity::Odd) / 2f64.sqrt();
    let state = StateSpec::Superposition {
        alpha: Complex64::new(n, 0.0),
        beta: Complex64::new(-n, 0.0),
        zeta0: z0,
        zeta1: z1,
    };
    let spec = spec();
    let eval = SymbolEvaluator::new(kk, KernelOrder::WIGNER, &state, &spec).unwrap();
    for (tau, phi) in [(0.2, 0.0), (0.9, 1.3), (2.0, 3.0)] {
        let p = HyperPoint::new(tau, phi).unwrap();
        assert_relative_eq!(
            eval.eval(&p).unwrap(),
            wigner_cat(kk, tau0, Parity::Odd, &p, &spec).unwrap(),
            epsilon = 1e-6
        );
    }
}
