//! The spectral weight Φ_k(λ) in its gamma, product and inversion-integral forms.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::conical::{ConicalQuad, DEFAULT_EPS};
use super::gamma::{ln_abs_gamma_sq, ln_gamma_real};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Bargmann index k of a positive discrete-series irrep, stored exactly as 2k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct IrrepIndex {
    twice_k: u32,
}

impl IrrepIndex {
    /// k = twice_k / 2.
    pub fn new(twice_k: u32) -> Result<Self> {
        if twice_k == 0 {
            return Err(Error::domain("IrrepIndex", "k must be at least 1/2"));
        }
        Ok(Self { twice_k })
    }

    pub fn from_f64(k: f64) -> Result<Self> {
        let twice = 2.0 * k;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.round() < 1.0 {
            return Err(Error::domain(
                "IrrepIndex",
                format!("k must be a half-integer ≥ 1/2, got {k}"),
            ));
        }
        Self::new(twice.round() as u32)
    }

    pub fn twice_k(self) -> u32 {
        self.twice_k
    }

    pub fn value(self) -> f64 {
        0.5 * self.twice_k as f64
    }

    /// The limiting irrep k = 1/2, where the (2k − 1) prefactors vanish.
    pub fn is_limit(self) -> bool {
        self.twice_k == 1
    }

    /// 2k − 1.
    pub fn dim_factor(self) -> f64 {
        self.twice_k as f64 - 1.0
    }
}

impl TryFrom<f64> for IrrepIndex {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Self::from_f64(k)
    }
}

impl From<IrrepIndex> for f64 {
    fn from(k: IrrepIndex) -> f64 {
        k.value()
    }
}

impl fmt::Display for IrrepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_k.is_multiple_of(2) {
            write!(f, "{}", self.twice_k / 2)
        } else {
            write!(f, "{}/2", self.twice_k)
        }
    }
}

/// A principal-series label −1/2 + iλ with λ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SpectralPoint {
    lambda: f64,
}

impl SpectralPoint {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::domain(
                "SpectralPoint",
                format!("λ must be finite and non-negative, got {lambda}"),
            ));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(self) -> f64 {
        self.lambda
    }

    /// Casimir eigenvalue −(λ² + 1/4) of the hyperboloid Laplacian.
    pub fn casimir(self) -> f64 {
        -(self.lambda * self.lambda + 0.25)
    }
}

/// Φ_k(λ) = (2k − 1) |Γ(2k − 1/2 + iλ)|² / Γ(2k)².
///
/// At k = 1/2 the prefactor vanishes; the limit is defined by continuity of the product form.
pub fn phi_k(k: IrrepIndex, lambda: f64) -> f64 {
    if k.is_limit() {
        return phi_k_product(k, lambda);
    }
    let kk = k.value();
    let ln = k.dim_factor().ln() + ln_abs_gamma_sq(2.0 * kk - 0.5, lambda) - 2.0 * ln_gamma_real(2.0 * kk);
    ln.exp()
}

/// ln Φ_k(λ), finite for every λ.
pub fn ln_phi_k(k: IrrepIndex, lambda: f64) -> f64 {
    if k.is_limit() {
        return ln_phi_product(k, lambda);
    }
    let kk = k.value();
    k.dim_factor().ln() + ln_abs_gamma_sq(2.0 * kk - 0.5, lambda) - 2.0 * ln_gamma_real(2.0 * kk)
}

/// π(λ² + 1/4)/cosh(πλ) · ∏_{m=1}^{2k−2} [1 + (λ² + 1/4)/(m(m + 1))].
pub fn phi_k_product(k: IrrepIndex, lambda: f64) -> f64 {
    ln_phi_product(k, lambda).exp()
}

fn ln_phi_product(k: IrrepIndex, lambda: f64) -> f64 {
    let c = lambda * lambda + 0.25;
    let a = PI * lambda.abs();
    // ln cosh a without overflow
    let ln_cosh = a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2;
    let mut ln = (PI * c).ln() - ln_cosh;
    for m in 1..k.twice_k().saturating_sub(1) {
        let m = m as f64;
        ln += (c / (m * (m + 1.0))).ln_1p();
    }
    ln
}

/// Φ_k(λ) from (2k − 1)/2 ∫₁^∞ ((1 + x)/2)^{−2k} P_{−1/2+iλ}(x) dx.
///
/// The integral runs in x = cosh t on panels of width 1/2; it stops once the bound
/// |P_{−1/2+iλ}(cosh t)| ≤ (1 + t) e^{−t/2} puts the tail below `tol`.
pub fn phi_k_inversion(k: IrrepIndex, lambda: f64, tol: f64) -> Result<f64> {
    if k.is_limit() {
        return Err(Error::Accuracy {
            op: "phi_k_inversion",
            estimate: f64::INFINITY,
            tol,
        });
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(
            "phi_k_inversion",
            format!("tol must lie in (0, 1), got {tol}"),
        ));
    }
    let kk = k.value();
    let pref = 0.5 * k.dim_factor();
    let decay = 2.0 * kk - 0.5;
    // |integrand| ≤ pref · 2^{4k} e^{−2kt} (1 + t) e^{−t/2} · e^{t}/2
    let tail =
        |t: f64| pref * 2f64.powf(4.0 * kk - 1.0) * (-decay * t).exp() * ((1.0 + t) / decay + 1.0 / (decay * decay));
    let width = 0.5f64.min(4.0 / (1.0 + lambda.abs()));
    let mut t_max = 2.0;
    while tail(t_max) > 0.5 * tol {
        t_max += width;
        if t_max > 400.0 {
            return Err(Error::Accuracy {
                op: "phi_k_inversion",
                estimate: tail(t_max),
                tol,
            });
        }
    }
    let rule = gauss_legendre(16);
    let panels = (t_max / width).ceil() as usize;
    let mut sum = 0.0;
    for i in 0..panels {
        let a = i as f64 * width;
        let b = a + width;
        for (t, w) in rule.mapped(a, b) {
            let quad = ConicalQuad::from_tau(t, lambda, 0, DEFAULT_EPS)?;
            let p = quad.eval_real(lambda);
            // ((1 + cosh t)/2)^{−2k} = cosh(t/2)^{−4k}
            let ln_c = 0.5 * t + (-t).exp().ln_1p() - std::f64::consts::LN_2;
            sum += w * p * (-4.0 * kk * ln_c).exp() * t.sinh();
        }
    }
    Ok(pref * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(twice: u32) -> IrrepIndex {
        IrrepIndex::new(twice).unwrap()
    }

    #[test]
    fn index_parsing() {
        assert_eq!(IrrepIndex::from_f64(2.5).unwrap().twice_k(), 5);
        assert!(IrrepIndex::from_f64(0.25).is_err());
        assert!(IrrepIndex::from_f64(0.0).is_err());
        assert!(IrrepIndex::new(0).is_err());
        assert_eq!(k(3).to_string(), "3/2");
        assert_eq!(k(4).to_string(), "2");
    }

    #[test]
    fn gamma_form_closed_values() {
        assert_relative_eq!(phi_k(k(2), 0.0), PI / 4.0, max_relative = 1e-13);
        assert_relative_eq!(phi_k(k(2), 1.0), PI * 1.25 / PI.cosh(), max_relative = 1e-13);
    }

    #[test]
    fn product_form_closed_values() {
        assert_relative_eq!(phi_k_product(k(3), 0.0), 9.0 * PI / 32.0, max_relative = 1e-14);
        assert_relative_eq!(phi_k_product(k(2), 1.0), 0.338768689249272934858, max_relative = 1e-13);
    }

    #[test]
    fn forms_agree() {
        for twice in [1, 2, 3, 4, 5, 10] {
            for &lambda in &[0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0] {
                let a = phi_k(k(twice), lambda);
                let b = phi_k_product(k(twice), lambda);
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn no_overflow_at_large_lambda() {
        let v = phi_k(k(10), 200.0);
        assert!(v > 0.0 && v.is_finite());
        assert!(ln_phi_k(k(10), 2000.0).is_finite());
    }

    #[test]
    fn inversion_matches() {
        let v = phi_k_inversion(k(2), 0.0, 1e-8).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn limit_irrep_inversion_refused() {
        assert!(phi_k_inversion(k(1), 0.0, 1e-6).unwrap_err().is_accuracy());
    }
}
