use std::f64::consts::{PI, TAU};

use hyperwigner::geometry::mobius_apply;
use hyperwigner::specfun::{conical_p, phi_k, phi_k_product};
use hyperwigner::states::{coherent_overlap, q_symbol, wigner_coherent};
use hyperwigner::{
    evolve_point, DiscPoint, GroupElement, HamiltonianSpec, HyperPoint, IrrepIndex, QuadSpec, StateSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = DiscPoint> {
    (0.0..0.9f64, 0.0..TAU).prop_map(|(r, a)| DiscPoint::new(Complex64::from_polar(r, a)).unwrap())
}

fn hyper_point() -> impl Strategy<Value = HyperPoint> {
    (0.0..4.0f64, 0.0..TAU).prop_map(|(t, p)| HyperPoint::new(t, p).unwrap())
}

fn element() -> impl Strategy<Value = GroupElement> {
    (0.0..TAU, 0.0..2.0f64, 0.0..TAU).prop_map(|(a, r, b)| {
        GroupElement::rotation(a)
            .compose(&GroupElement::boost(r))
            .compose(&GroupElement::rotation(b))
    })
}

fn irrep() -> impl Strategy<Value = IrrepIndex> {
    (2u32..12).prop_map(|t| IrrepIndex::new(t).unwrap())
}

proptest! {
    #[test]
    fn disc_coordinates_round_trip(z in disc_point()) {
        let back = z.to_hyper().to_disc();
        prop_assert!((back.zeta() - z.zeta()).norm() < 1e-13);
    }

    #[test]
    fn hyper_coordinates_round_trip(p in hyper_point()) {
        let back = p.to_disc().to_hyper();
        prop_assert!((back.tau() - p.tau()).abs() < 1e-11 * p.tau().max(1.0));
        if p.tau() > 1e-3 {
            let d = (back.phi() - p.phi()).rem_euclid(TAU);
            prop_assert!(d.min(TAU - d) < 1e-10);
        }
    }

    #[test]
    fn group_law(g in element(), h in element(), z in disc_point()) {
        let a = mobius_apply(&g.compose(&h), &z).unwrap();
        let b = mobius_apply(&g, &mobius_apply(&h, &z).unwrap()).unwrap();
        prop_assert!((a.zeta() - b.zeta()).norm() < 1e-10);
        let back = mobius_apply(&g.inverse(), &mobius_apply(&g, &z).unwrap()).unwrap();
        prop_assert!((back.zeta() - z.zeta()).norm() < 1e-10);
    }

    #[test]
    fn distance_invariance(g in element(), a in disc_point(), b in disc_point()) {
        let d0 = a.to_hyper().cosh_distance(&b.to_hyper());
        let ga = mobius_apply(&g, &a).unwrap().to_hyper();
        let gb = mobius_apply(&g, &b).unwrap().to_hyper();
        let d1 = ga.cosh_distance(&gb);
        prop_assert!(d0 >= 1.0 - 1e-12);
        prop_assert!((d1 - d0).abs() < 1e-8 * d0);
    }

    #[test]
    fn conical_bounded(lambda in 0.0..20.0f64, tau in 0.0..6.0f64) {
        let p = conical_p(lambda, tau.cosh()).unwrap();
        prop_assert!(p.abs() <= 1.0 + 1e-10);
        prop_assert!((conical_p(lambda, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_weight_forms_agree(k in irrep(), lambda in 0.0..15.0f64) {
        let a = phi_k(k, lambda);
        let b = phi_k_product(k, lambda);
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() < 1e-10 * a.max(1e-300));
    }

    #[test]
    fn coherent_overlaps(k in irrep(), a in disc_point(), b in disc_point()) {
        let o = coherent_overlap(k, &a, &b);
        prop_assert!(o.norm() <= 1.0 + 1e-12);
        prop_assert!((coherent_overlap(k, &b, &a) - o.conj()).norm() < 1e-12);
        prop_assert!((coherent_overlap(k, &a, &a) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn husimi_is_a_probability(k in irrep(), z0 in disc_point(), p in hyper_point()) {
        let q = q_symbol(k, &StateSpec::Coherent { zeta0: z0 }, &p, None, 1e-10).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&q));
    }

    #[test]
    fn evolution_is_invertible(chi in -2.0..2.0f64, t in -3.0..3.0f64, z in disc_point(), compact in any::<bool>()) {
        let h = if compact { HamiltonianSpec::Compact { chi } } else { HamiltonianSpec::Noncompact { chi } };
        prop_assume!(compact || (chi * t).abs() < 2.0);
        let there = evolve_point(&h, t, &z).unwrap();
        let back = evolve_point(&h, -t, &there).unwrap();
        prop_assert!((back.zeta() - z.zeta()).norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wigner_covariance(g in element(), z0 in disc_point(), p in hyper_point()) {
        // W_{gζ0}(g·p) = W_{ζ0}(p)
        let k = IrrepIndex::new(2).unwrap();
        let spec = QuadSpec::default();
        let gz0 = mobius_apply(&g, &z0).unwrap();
        let gp = mobius_apply(&g, &p.to_disc());
        prop_assume!(gp.as_ref().is_ok_and(|q| q.zeta().norm() < 0.995));
        let gp = gp.unwrap().to_hyper();
        let a = wigner_coherent(k, &z0, &p, &spec).unwrap();
        let b = wigner_coherent(k, &gz0, &gp, &spec).unwrap();
        prop_assert!((a - b).abs() < 1e-7 * a.abs().max(1e-3), "{} vs {}", a, b);
    }

    #[test]
    fn wigner_is_real_and_bounded_at_its_label(z0 in disc_point()) {
        let k = IrrepIndex::new(3).unwrap();
        let w = wigner_coherent(k, &z0, &z0.to_hyper(), &QuadSpec::default()).unwrap();
        let w0 = wigner_coherent(k, &DiscPoint::origin(), &HyperPoint::origin(), &QuadSpec::default()).unwrap();
        prop_assert!((w - w0).abs() < 1e-8 * w0.abs());
        prop_assert!(w.is_finite() && w > 0.0 && w < 4.0 * PI);
    }
}
