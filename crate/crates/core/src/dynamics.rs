//! Evolution of phase-space fields under Hamiltonians linear in the su(1,1) generators.
//!
//! The group acts by pulling the field argument back: W_t(ζ) = W_0(M_t(ζ)), where
//! M_t = [`evolve_point`] is ζ ↦ e^{iχt} ζ for χK0 and the boost of rapidity χt along the
//! real axis for χK2. A coherent state therefore moves its label to M_t⁻¹(ζ0).

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiscPoint, GroupElement, HyperPoint};
use crate::kernels::KernelOrder;
use crate::quadrature::QuadSpec;
use crate::specfun::IrrepIndex;
use crate::states::{Grid, PhaseSpaceField, StateSpec, SymbolEvaluator};

/// A one-parameter flow t ↦ g(t) in SU(1,1).
pub type Flow = Arc<dyn Fn(f64) -> GroupElement + Send + Sync>;

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianSpec {
    /// H = χ K0.
    Compact { chi: f64 },
    /// H = χ K2.
    Noncompact { chi: f64 },
    /// Any flow; not serializable.
    #[serde(skip)]
    General(Flow),
}

impl fmt::Debug for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianSpec::Compact { chi } => write!(f, "Compact {{ chi: {chi} }}"),
            HamiltonianSpec::Noncompact { chi } => write!(f, "Noncompact {{ chi: {chi} }}"),
            HamiltonianSpec::General(_) => write!(f, "General(..)"),
        }
    }
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianSpec::Compact { chi } => write!(f, "{chi}*K0"),
            HamiltonianSpec::Noncompact { chi } => write!(f, "{chi}*K2"),
            HamiltonianSpec::General(_) => write!(f, "general"),
        }
    }
}

impl HamiltonianSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            HamiltonianSpec::Compact { chi } | HamiltonianSpec::Noncompact { chi } if !chi.is_finite() => {
                Err(Error::domain("HamiltonianSpec", format!("χ must be finite, got {chi}")))
            }
            _ => Ok(()),
        }
    }

    /// The group element M_t.
    pub fn group(&self, t: f64) -> GroupElement {
        match self {
            HamiltonianSpec::Compact { chi } => GroupElement::rotation(chi * t),
            HamiltonianSpec::Noncompact { chi } => GroupElement::boost(chi * t),
            HamiltonianSpec::General(flow) => flow(t),
        }
    }

    /// M_t in (τ, φ) coordinates. Rotations shift φ directly and whole turns return every
    /// point bit for bit.
    pub fn apply_hyper(&self, t: f64, p: &HyperPoint) -> HyperPoint {
        match self {
            HamiltonianSpec::Compact { chi } => {
                let theta = (chi * t).rem_euclid(TAU);
                if theta == 0.0 {
                    return *p;
                }
                HyperPoint::new_unchecked(p.tau(), (p.phi() - theta).rem_euclid(TAU))
            }
            _ => self.group(t).apply_hyper(p),
        }
    }
}

/// M_t(ζ).
pub fn evolve_point(h: &HamiltonianSpec, t: f64, p: &DiscPoint) -> Result<DiscPoint> {
    if !t.is_finite() {
        return Err(Error::domain("evolve_point", format!("t must be finite, got {t}")));
    }
    h.validate()?;
    let z = p.zeta();
    let w = match h {
        HamiltonianSpec::Compact { chi } => Complex64::from_polar(1.0, chi * t) * z,
        HamiltonianSpec::Noncompact { chi } => {
            let (c, s) = ((0.5 * chi * t).cosh(), (0.5 * chi * t).sinh());
            (z * c + s) / (z * s + c)
        }
        HamiltonianSpec::General(flow) => return flow(t).apply(p),
    };
    if !(w.norm_sqr() < 1.0) {
        return Err(Error::invariant("evolve_point", format!("image {w} left the disc")));
    }
    DiscPoint::new(w)
}

/// The frame W_t = W_0 ∘ M_t of `state` on `grid`.
pub fn evolve_field(
    k: IrrepIndex,
    s: KernelOrder,
    state: &StateSpec,
    h: &HamiltonianSpec,
    t: f64,
    grid: &Grid,
    spec: &QuadSpec,
) -> Result<PhaseSpaceField> {
    let eval = SymbolEvaluator::new(k, s, state, spec)?;
    frame(&eval, h, t, grid, spec)
}

fn frame(eval: &SymbolEvaluator, h: &HamiltonianSpec, t: f64, grid: &Grid, spec: &QuadSpec) -> Result<PhaseSpaceField> {
    if !t.is_finite() {
        return Err(Error::domain("evolve_field", format!("t must be finite, got {t}")));
    }
    h.validate()?;
    let (coords, values) = crate::states::field::sample(grid, |p| eval.eval(&h.apply_hyper(t, p)))?;
    let field = PhaseSpaceField {
        k: eval.k(),
        s: eval.order(),
        grid: grid.clone(),
        coords,
        values,
        im_values: None,
        meta: crate::states::FieldMeta {
            state: eval.state().clone(),
            tol: spec.tol,
            time: Some(t),
            hamiltonian: Some(h.to_string()),
        },
    };
    field.check_finite()?;
    Ok(field)
}

/// Frames at each time, in order.
pub fn trajectory(
    k: IrrepIndex,
    s: KernelOrder,
    state: &StateSpec,
    h: &HamiltonianSpec,
    times: &[f64],
    grid: &Grid,
    spec: &QuadSpec,
) -> Result<Vec<PhaseSpaceField>> {
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::domain("trajectory", format!("times must be finite, got {t}")));
    }
    let eval = SymbolEvaluator::new(k, s, state, spec)?;
    times.iter().map(|&t| frame(&eval, h, t, grid, spec)).collect()
}

/// (2k − 1)/π ∫ W_t dμ for one frame, with its quadrature error estimate.
pub fn frame_normalization(
    k: IrrepIndex,
    state: &StateSpec,
    h: &HamiltonianSpec,
    t: f64,
    spec: &QuadSpec,
) -> Result<(f64, f64)> {
    let eval = SymbolEvaluator::new(k, KernelOrder::WIGNER, state, spec)?;
    let est = crate::quadrature::integrate_disc(
        |p: HyperPoint| eval.eval(&h.apply_hyper(t, &p)).unwrap_or(f64::NAN),
        spec,
    )?;
    let scale = k.dim_factor() / std::f64::consts::PI;
    let value = est.value * scale;
    if !value.is_finite() {
        return Err(Error::invariant(
            "frame_normalization",
            "symbol evaluation failed on the disc",
        ));
    }
    Ok((value, est.error * scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero_time() {
        let p = DiscPoint::from_re_im(0.3, -0.4).unwrap();
        for h in [
            HamiltonianSpec::Compact { chi: 1.3 },
            HamiltonianSpec::Noncompact { chi: 0.7 },
        ] {
            let q = evolve_point(&h, 0.0, &p).unwrap();
            assert!((q.zeta() - p.zeta()).norm() < 1e-15);
        }
    }

    #[test]
    fn boost_moves_origin() {
        let h = HamiltonianSpec::Noncompact { chi: 2.0 };
        let q = evolve_point(&h, 0.4, &DiscPoint::origin()).unwrap();
        assert!((q.zeta() - Complex64::new(0.4f64.tanh(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn boost_shifts_tau_on_axis() {
        let h = HamiltonianSpec::Noncompact { chi: 1.5 };
        let t = 0.6;
        let p = HyperPoint::new(0.8, 0.0).unwrap();
        let q = evolve_point(&h, t, &p.to_disc()).unwrap().to_hyper();
        assert!((q.tau() - (0.8 + 1.5 * t)).abs() < 1e-10);
        let r = h.apply_hyper(t, &p);
        assert!((r.tau() - (0.8 + 1.5 * t)).abs() < 1e-12);
    }

    #[test]
    fn point_and_field_actions_agree() {
        let h = HamiltonianSpec::Compact { chi: 0.9 };
        let p = HyperPoint::new(1.1, 2.0).unwrap();
        let a = evolve_point(&h, 1.7, &p.to_disc()).unwrap().to_hyper();
        let b = h.apply_hyper(1.7, &p);
        assert!((a.tau() - b.tau()).abs() < 1e-12);
        assert!((a.phi() - b.phi()).abs() < 1e-12);
    }

    #[test]
    fn general_flow() {
        let h = HamiltonianSpec::General(Arc::new(|t| GroupElement::boost(2.0 * t)));
        let q = evolve_point(&h, 0.25, &DiscPoint::origin()).unwrap();
        assert!((q.zeta().re - 0.25f64.tanh()).abs() < 1e-15);
        assert!(HamiltonianSpec::Compact { chi: f64::NAN }.validate().is_err());
    }
}
