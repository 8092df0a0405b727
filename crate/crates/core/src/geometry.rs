//! Coordinates on the Poincaré disc and the upper hyperboloid sheet, the invariant
//! distance and measure, and the SU(1,1) Möbius action.
//!
//! (τ, φ) is the canonical representation; the disc coordinate ζ = tanh(τ/2) e^{−iφ}
//! is derived from it, since 1 − |ζ|² underflows long before τ gets large.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real scalar type the geometry is generic over.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static> Scalar for T {}

fn c<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

fn two_pi<T: Scalar>() -> T {
    T::TAU()
}

fn normalize_angle<T: Scalar>(phi: T) -> T {
    let tau = two_pi::<T>();
    let mut r = phi % tau;
    if r < T::zero() {
        r = r + tau;
    }
    if r >= tau {
        r = r - tau;
    }
    r
}

/// A point ζ in the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint<T = f64> {
    zeta: Complex<T>,
}

impl<T: Scalar> DiscPoint<T> {
    pub fn new(zeta: Complex<T>) -> Result<Self> {
        if !(zeta.re.is_finite() && zeta.im.is_finite()) || zeta.norm_sqr() >= T::one() {
            return Err(Error::domain("DiscPoint", format!("|ζ| must be < 1, got {:?}", zeta)));
        }
        Ok(Self { zeta })
    }

    pub fn from_re_im(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im))
    }

    pub fn origin() -> Self {
        Self {
            zeta: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn zeta(&self) -> Complex<T> {
        self.zeta
    }

    pub fn to_hyper(&self) -> HyperPoint<T> {
        disc_to_hyper(*self)
    }
}

/// Geodesic polar coordinates (τ, φ) with τ ≥ 0 and φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperPoint<T = f64> {
    tau: T,
    phi: T,
}

impl<T: Scalar> HyperPoint<T> {
    /// Normalizes φ into [0, 2π).
    pub fn new(tau: T, phi: T) -> Result<Self> {
        if !(tau.is_finite() && phi.is_finite()) || tau < T::zero() {
            return Err(Error::domain(
                "HyperPoint",
                format!("need finite τ ≥ 0 and finite φ, got ({tau:?}, {phi:?})"),
            ));
        }
        Ok(Self {
            tau,
            phi: normalize_angle(phi),
        })
    }

    /// No validation or normalization; for callers that already hold valid coordinates.
    pub fn new_unchecked(tau: T, phi: T) -> Self {
        Self { tau, phi }
    }

    pub fn origin() -> Self {
        Self {
            tau: T::zero(),
            phi: T::zero(),
        }
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn to_disc(&self) -> DiscPoint<T> {
        hyper_to_disc(*self)
    }

    pub fn bloch(&self) -> BlochVector<T> {
        bloch(*self)
    }

    /// cosh ξ to the other point, computed without cancellation.
    pub fn cosh_distance(&self, other: &Self) -> T {
        let half = c::<T>(0.5);
        let s = ((self.phi - other.phi) * half).sin();
        (self.tau - other.tau).cosh() + c::<T>(2.0) * s * s * self.tau.sinh() * other.tau.sinh()
    }

    /// (sinh(τ/2) e^{−iφ}, cosh(τ/2)), so that ζ = s / c and 1 − |ζ|² = 1 / c².
    pub(crate) fn half_coords(&self) -> (Complex<T>, T) {
        let half = self.tau * c::<T>(0.5);
        (Complex::from_polar(half.sinh(), -self.phi), half.cosh())
    }
}

/// A point (n0, n1, n2) on the upper sheet n0² − n1² − n2² = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector<T = f64> {
    pub n0: T,
    pub n1: T,
    pub n2: T,
}

impl<T: Scalar> BlochVector<T> {
    /// Checks the hyperboloid constraint to a relative 1e−12.
    pub fn new(n0: T, n1: T, n2: T) -> Result<Self> {
        let v = Self { n0, n1, n2 };
        let defect = (v.minkowski_norm() - T::one()).abs();
        if !(n0 >= T::one()) || defect > c::<T>(1e-12) * n0 * n0 {
            return Err(Error::invariant(
                "BlochVector",
                format!("not on the upper sheet: n0 = {n0:?}, defect {defect:?}"),
            ));
        }
        Ok(v)
    }

    pub fn minkowski_norm(&self) -> T {
        self.n0 * self.n0 - self.n1 * self.n1 - self.n2 * self.n2
    }

    pub fn to_hyper(&self) -> HyperPoint<T> {
        let rho = self.n1.hypot(self.n2);
        let tau = rho.asinh();
        let phi = if rho > T::zero() {
            normalize_angle(self.n2.atan2(self.n1))
        } else {
            T::zero()
        };
        HyperPoint::new_unchecked(tau, phi)
    }
}

/// ζ ↦ (τ, φ) with ζ = tanh(τ/2) e^{−iφ}.
pub fn disc_to_hyper<T: Scalar>(p: DiscPoint<T>) -> HyperPoint<T> {
    let r = p.zeta.norm();
    if r == T::zero() {
        return HyperPoint::origin();
    }
    let tau = c::<T>(2.0) * r.atanh();
    let phi = normalize_angle(-p.zeta.arg());
    HyperPoint::new_unchecked(tau, phi)
}

/// (τ, φ) ↦ ζ = tanh(τ/2) e^{−iφ}.
pub fn hyper_to_disc<T: Scalar>(h: HyperPoint<T>) -> DiscPoint<T> {
    let r = (h.tau * c::<T>(0.5)).tanh();
    DiscPoint {
        zeta: Complex::from_polar(r, -h.phi),
    }
}

/// n = (cosh τ, sinh τ cos φ, sinh τ sin φ).
pub fn bloch<T: Scalar>(h: HyperPoint<T>) -> BlochVector<T> {
    let s = h.tau.sinh();
    BlochVector {
        n0: h.tau.cosh(),
        n1: s * h.phi.cos(),
        n2: s * h.phi.sin(),
    }
}

/// cosh ξ = a·b = a0 b0 − a1 b1 − a2 b2.
pub fn pseudo_dot<T: Scalar>(a: &BlochVector<T>, b: &BlochVector<T>) -> Result<T> {
    let v = a.n0 * b.n0 - a.n1 * b.n1 - a.n2 * b.n2;
    if !(v >= T::one() - c::<T>(1e-9) * a.n0 * b.n0) {
        return Err(Error::invariant(
            "pseudo_dot",
            format!("pseudo-scalar product {v:?} below 1"),
        ));
    }
    Ok(v.max(T::one()))
}

/// Invariant distance ξ, from sinh²(ξ/2) = sinh²(Δτ/2) + sin²(Δφ/2) sinh τ sinh τ′.
pub fn separation<T: Scalar>(a: &HyperPoint<T>, b: &HyperPoint<T>) -> T {
    let half = c::<T>(0.5);
    let st = ((a.tau - b.tau) * half).sinh();
    let sp = ((a.phi - b.phi) * half).sin();
    let s2 = st * st + sp * sp * a.tau.sinh() * b.tau.sinh();
    c::<T>(2.0) * s2.sqrt().asinh()
}

/// Density of dμ in dτ dφ: sinh τ / 4.
pub fn measure_weight<T: Scalar>(h: &HyperPoint<T>) -> T {
    h.tau.sinh() * c::<T>(0.25)
}

/// 2(1 − ζ̄ζ0)(1 − ζ̄1ζ) / ((1 − |ζ|²)(1 − ζ0ζ̄1)) − 1, the argument of the off-diagonal kernel.
pub fn cross_ratio_arg<T: Scalar>(p: &HyperPoint<T>, zeta0: Complex<T>, zeta1: Complex<T>) -> Complex<T> {
    // multiplied through by cosh²(τ/2)
    let (s, ch) = p.half_coords();
    let one = Complex::new(T::one(), T::zero());
    let a = Complex::new(ch, T::zero()) - s.conj() * zeta0;
    let b = Complex::new(ch, T::zero()) - zeta1.conj() * s;
    (a * b * c::<T>(2.0)) / (one - zeta0 * zeta1.conj()) - one
}

/// An SU(1,1) element [[α, β], [β̄, ᾱ]], acting by ζ ↦ (αζ + β)/(β̄ζ + ᾱ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement<T = f64> {
    alpha: Complex<T>,
    beta: Complex<T>,
}

impl<T: Scalar> GroupElement<T> {
    /// Requires |α|² − |β|² = 1 to within 1e−12 relative.
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let det = alpha.norm_sqr() - beta.norm_sqr();
        let scale = alpha.norm_sqr() + beta.norm_sqr();
        if !det.is_finite() || (det - T::one()).abs() > c::<T>(1e-12) * scale {
            return Err(Error::invariant(
                "GroupElement",
                format!("|α|² − |β|² = {det:?}, expected 1"),
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex::new(T::one(), T::zero()),
            beta: Complex::new(T::zero(), T::zero()),
        }
    }

    /// ζ ↦ e^{iθ} ζ.
    pub fn rotation(theta: T) -> Self {
        Self {
            alpha: Complex::from_polar(T::one(), theta * c::<T>(0.5)),
            beta: Complex::new(T::zero(), T::zero()),
        }
    }

    /// Boost of rapidity r along the real axis: 0 ↦ tanh(r/2).
    pub fn boost(r: T) -> Self {
        let h = r * c::<T>(0.5);
        Self {
            alpha: Complex::new(h.cosh(), T::zero()),
            beta: Complex::new(h.sinh(), T::zero()),
        }
    }

    /// The element taking the origin to ζ0 with no extra rotation.
    pub fn displacement(zeta0: &DiscPoint<T>) -> Self {
        let h = zeta0.to_hyper();
        let (s, ch) = h.half_coords();
        Self {
            alpha: Complex::new(ch, T::zero()),
            beta: s,
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }

    pub fn det(&self) -> T {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }

    /// Matrix product self · other.
    pub fn compose(&self, other: &Self) -> Self {
        let alpha = self.alpha * other.alpha + self.beta * other.beta.conj();
        let beta = self.alpha * other.beta + self.beta * other.alpha.conj();
        Self { alpha, beta }.renormalized("group_compose")
    }

    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: -self.beta,
        }
        .renormalized("group_inverse")
    }

    fn renormalized(self, op: &str) -> Self {
        let det = self.det();
        if (det - T::one()).abs() > c::<T>(1e-9) {
            log::warn!("{op}: determinant drifted to {det:?}; renormalizing");
            let s = det.sqrt();
            return Self {
                alpha: self.alpha / s,
                beta: self.beta / s,
            };
        }
        self
    }

    /// ζ ↦ (αζ + β)/(β̄ζ + ᾱ).
    pub fn apply(&self, p: &DiscPoint<T>) -> Result<DiscPoint<T>> {
        let z = p.zeta;
        let w = (self.alpha * z + self.beta) / (self.beta.conj() * z + self.alpha.conj());
        if !(w.norm_sqr() < T::one()) {
            return Err(Error::invariant("mobius_apply", format!("image {w:?} left the disc")));
        }
        Ok(DiscPoint { zeta: w })
    }

    /// The same action in (τ, φ) coordinates, accurate for large τ.
    pub fn apply_hyper(&self, p: &HyperPoint<T>) -> HyperPoint<T> {
        let (s, ch) = p.half_coords();
        let num = self.alpha * s + self.beta * ch;
        let den = self.beta.conj() * s + self.alpha.conj() * ch;
        let r = num.norm();
        let tau = c::<T>(2.0) * r.asinh();
        let phi = if r > T::zero() {
            normalize_angle(den.arg() - num.arg())
        } else {
            T::zero()
        };
        HyperPoint::new_unchecked(tau, phi)
    }

    /// The inverse action ζ ↦ (ᾱζ − β)/(−β̄ζ + α).
    pub fn apply_inverse(&self, p: &DiscPoint<T>) -> Result<DiscPoint<T>> {
        self.inverse().apply(p)
    }
}

/// Forward action of `g` on `p`.
pub fn mobius_apply<T: Scalar>(g: &GroupElement<T>, p: &DiscPoint<T>) -> Result<DiscPoint<T>> {
    g.apply(p)
}

pub fn group_compose<T: Scalar>(g1: &GroupElement<T>, g2: &GroupElement<T>) -> GroupElement<T> {
    g1.compose(g2)
}

pub fn group_inverse<T: Scalar>(g: &GroupElement<T>) -> GroupElement<T> {
    g.inverse()
}
