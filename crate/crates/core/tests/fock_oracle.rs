use approx::assert_relative_eq;
use hyperwigner::fock::{
    coherent_fock, expectation, identity_resolution_check, k_from_delta_n, ladder, overlap, required_truncation,
    Generator,
};
use hyperwigner::states::coherent_overlap;
use hyperwigner::{DiscPoint, FockVector, IrrepIndex, QuadSpec};
use num_complex::Complex64;

fn k(twice: u32) -> IrrepIndex {
    IrrepIndex::new(twice).unwrap()
}

#[test]
fn amplitudes_at_the_origin_and_on_the_axis() {
    let v = coherent_fock(k(3), &DiscPoint::origin(), 5).unwrap();
    assert_eq!(v.amplitudes()[0], Complex64::new(1.0, 0.0));
    assert!(v.amplitudes()[1..].iter().all(|c| c.norm() == 0.0));
    let v = coherent_fock(k(2), &DiscPoint::from_re_im(0.5, 0.0).unwrap(), 10).unwrap();
    assert_relative_eq!(v.amplitudes()[0].re, 0.75, epsilon = 1e-15);
    assert_relative_eq!(v.amplitudes()[1].norm(), 0.75 * 2f64.sqrt() * 0.5, epsilon = 1e-15);
    assert_relative_eq!(v.amplitudes()[1].norm(), 0.5303, epsilon = 1e-4);
}

#[test]
fn truncated_norm() {
    let z = DiscPoint::from_re_im(0.3, -0.4).unwrap();
    let v = coherent_fock(k(2), &z, 60).unwrap();
    assert_relative_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
    assert!(v.tail() < 1e-12);
    let m = required_truncation(k(2), &z, 1e-10).unwrap();
    assert!(coherent_fock(k(2), &z, m).unwrap().tail() <= 1e-10);
    assert!(m == 0 || coherent_fock(k(2), &z, m - 1).unwrap().tail() > 1e-10);
}

#[test]
fn overlaps_match_closed_form() {
    let kk = k(3);
    let (a, b) = (
        DiscPoint::from_re_im(0.2, 0.3).unwrap(),
        DiscPoint::from_re_im(-0.4, 0.1).unwrap(),
    );
    let got = overlap(
        &coherent_fock(kk, &a, 120).unwrap(),
        &coherent_fock(kk, &b, 120).unwrap(),
    )
    .unwrap();
    assert!((got - coherent_overlap(kk, &a, &b)).norm() < 1e-12);
    let n = FockVector::number(kk, 2, 4).unwrap();
    assert_eq!(overlap(&n, &n).unwrap(), Complex64::new(1.0, 0.0));
    let m = FockVector::number(kk, 2, 5).unwrap();
    assert!(overlap(&n, &m).is_err());
}

#[test]
fn generators() {
    let kk = k(3);
    let ops = ladder(kk, 8).unwrap();
    for m in 0..=8 {
        assert_eq!(ops.entry(Generator::K0, m, m), 1.5 + m as f64);
    }
    assert!(ops.commutator_defect() < 1e-12);
    assert!(ladder(kk, 0).is_err());
    assert_eq!(k_from_delta_n(0).twice_k(), 1);
    assert_eq!(k_from_delta_n(-3).twice_k(), 4);
}

#[test]
fn coherent_expectations() {
    // ⟨K0⟩ = k (1 + |ζ|²)/(1 − |ζ|²), ⟨K−⟩ = 2k ζ/(1 − |ζ|²)
    let kk = k(2);
    let z = Complex64::new(0.3, 0.2);
    let v = coherent_fock(kk, &DiscPoint::new(z).unwrap(), 80).unwrap();
    let ops = ladder(kk, 80).unwrap();
    let r2 = z.norm_sqr();
    let k0 = expectation(&ops, Generator::K0, &v).unwrap();
    assert_relative_eq!(k0.re, kk.value() * (1.0 + r2) / (1.0 - r2), epsilon = 1e-10);
    assert!(k0.im.abs() < 1e-14);
    let km = expectation(&ops, Generator::KMinus, &v).unwrap();
    assert!((km - z * (2.0 * kk.value() / (1.0 - r2))).norm() < 1e-10);
    let kp = expectation(&ops, Generator::KPlus, &v).unwrap();
    assert!((kp - km.conj()).norm() < 1e-12);
}

#[test]
fn resolution_of_identity() {
    let worst = identity_resolution_check(k(2), 3, &QuadSpec::disc()).unwrap();
    assert!(worst < 1e-6, "{worst}");
}
