//! Gauss–Legendre rules, the spectral λ-integral and the invariant disc integral.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::{Float, FromPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HyperPoint;
use crate::specfun::IrrepIndex;

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Float + FromPrimitive> GaussLegendre<T> {
    /// Builds the rule by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let c = |x: f64| T::from_f64(x).unwrap();
        let one = T::one();
        let two = c(2.0);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = c((PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos());
            let mut dp = one;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * c(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = two / ((one - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / (T::one() + T::one());
        let mid = a + half;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }
}

fn legendre_with_derivative<T: Float + FromPrimitive>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for j in 2..=n {
        let jf = T::from_usize(j).unwrap();
        let p2 = ((jf + jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Shared f64 rule of a given size; rules are built once per process.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre<f64>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(GaussLegendre::new(n));
    cache.write().unwrap().entry(n).or_insert(rule).clone()
}

/// Accuracy controls shared by the λ- and disc integrals. Zero means "choose automatically".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub tol: f64,
    pub lambda_max: f64,
    pub tau_max: f64,
    /// Gauss–Legendre nodes per radial annulus.
    pub n_tau: usize,
    /// Trapezoid nodes on each circle.
    pub n_phi: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self::with_tol(1e-6)
    }
}

impl QuadSpec {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            lambda_max: 0.0,
            tau_max: 0.0,
            n_tau: 0,
            n_phi: 0,
        }
    }

    /// Default for disc integrals of oscillatory Wigner fields.
    pub fn disc() -> Self {
        Self::with_tol(1e-4)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::domain(
                "QuadSpec",
                format!("tol must lie in (0, 1), got {}", self.tol),
            ));
        }
        if !(self.lambda_max >= 0.0 && self.tau_max >= 0.0) {
            return Err(Error::domain("QuadSpec", "cutoffs must be non-negative"));
        }
        Ok(())
    }

    pub(crate) fn n_tau_resolved(&self) -> usize {
        if self.n_tau == 0 {
            DEFAULT_N_TAU
        } else {
            self.n_tau.max(2)
        }
    }

    pub(crate) fn n_phi_resolved(&self) -> usize {
        if self.n_phi == 0 {
            DEFAULT_N_PHI
        } else {
            self.n_phi.max(2)
        }
    }
}

const DEFAULT_N_TAU: usize = 12;
const DEFAULT_N_PHI: usize = 96;
/// Radial width of one annulus of the disc rule.
pub const ANNULUS_WIDTH: f64 = 0.5;
const TAU_LIMIT: f64 = 40.0;

/// A quadrature result together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
}

/// Values a quadrature can accumulate.
pub trait QuadValue:
    Copy + Send + Sync + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Spectral cutoff Λ for an integrand decaying like λ^power · e^{-rate·λ}.
///
/// Three fixed-point sweeps of Λ = (ln(1/tol) + power·ln Λ) / rate, floored at 30.
pub fn lambda_cutoff(power: f64, rate: f64, tol: f64) -> f64 {
    let mut cut = 30.0f64;
    for _ in 0..3 {
        cut = ((1.0 / tol).ln() + power * cut.ln()) / rate;
        cut = cut.max(30.0);
    }
    cut
}

/// Truncation of a spectral integral ∫ λ tanh(πλ) Φ_k^e(λ) λ^extra e^{growth·λ} (…) dλ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub cutoff: f64,
    /// Bound on the discarded part, for integrands bounded by one in modulus.
    pub tail: f64,
}

/// Chooses Λ so that the tail beyond it is below `tol / 4`.
///
/// Starts from the fixed-point rule and then walks Λ up in unit steps using the exact
/// value of Φ_k at the cutoff, with the tail bounded by the integrand at Λ divided by
/// its logarithmic decay rate.
pub fn spectral_window(
    k: IrrepIndex,
    exponent: f64,
    growth: f64,
    extra_power: f64,
    tol: f64,
) -> Result<SpectralWindow> {
    let rate = PI * exponent - growth;
    if !(exponent > 0.0) || rate <= 0.0 {
        return Err(Error::domain(
            "spectral_window",
            format!("Φ^{exponent} does not decay against growth e^{{{growth}λ}}"),
        ));
    }
    let power = 1.0 + extra_power + exponent * (4.0 * k.value() - 2.0).max(2.0);
    let tail_at = |cut: f64| {
        let ln_integrand = cut.ln() * (1.0 + extra_power) + exponent * crate::specfun::ln_phi_k(k, cut) + growth * cut;
        let slope = rate - power / cut;
        if slope <= 0.0 {
            f64::INFINITY
        } else {
            ln_integrand.exp() / slope
        }
    };
    let mut cutoff = lambda_cutoff(power, rate, tol);
    while tail_at(cutoff) > 0.25 * tol {
        cutoff += 1.0;
        if cutoff > 1e5 {
            return Err(Error::Accuracy {
                op: "spectral_window",
                estimate: tail_at(cutoff),
                tol,
            });
        }
    }
    Ok(SpectralWindow {
        cutoff,
        tail: tail_at(cutoff),
    })
}

/// Width of the λ-panels for an integrand oscillating at frequency `xi` (= arccosh of the
/// largest argument in play).
///
/// Widths are 1, 1/2, 1/3, …
pub fn lambda_panel_width(xi: f64) -> f64 {
    1.0 / (xi.max(1.0) / 16.0).ceil()
}

/// Nodes per λ-panel.
pub const LAMBDA_NODES: usize = 16;

fn panel_sum<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64, rule: &GaussLegendre<f64>) -> V {
    rule.mapped(a, b).fold(V::zero(), |acc, (x, w)| acc + f(x) * w)
}

/// ∫₀^Λ λ tanh(πλ) f(λ) dλ on composite Gauss–Legendre panels.
///
/// Λ comes from `spec.lambda_max` or from the decay of Φ_k^{1/2}; `xi` sets the panel width.
/// The error estimate is the change under halving the panel width plus the analytic tail bound.
pub fn integrate_lambda<V, F>(f: F, k: IrrepIndex, spec: &QuadSpec, xi: f64) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    spec.validate()?;
    let window = if spec.lambda_max > 0.0 {
        SpectralWindow {
            cutoff: spec.lambda_max,
            tail: 0.0,
        }
    } else {
        spectral_window(k, 0.5, 0.0, 0.0, spec.tol)?
    };
    integrate_lambda_window(f, window, xi, spec.tol)
}

/// As [`integrate_lambda`] with an explicit truncation.
pub fn integrate_lambda_window<V, F>(f: F, window: SpectralWindow, xi: f64, tol: f64) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let g = |lambda: f64| f(lambda) * (lambda * (PI * lambda).tanh());
    let rule = gauss_legendre(LAMBDA_NODES);
    let width = lambda_panel_width(xi);
    let panels = (window.cutoff / width).ceil() as usize;
    let width = window.cutoff / panels as f64;
    let mut coarse = V::zero();
    let mut fine = V::zero();
    for i in 0..panels {
        let a = i as f64 * width;
        let b = a + width;
        let mid = a + 0.5 * width;
        coarse = coarse + panel_sum(&g, a, b, &rule);
        fine = fine + panel_sum(&g, a, mid, &rule) + panel_sum(&g, mid, b, &rule);
    }
    let error = (fine - coarse).magnitude() + window.tail;
    if error > tol {
        return Err(Error::Accuracy {
            op: "integrate_lambda",
            estimate: error,
            tol,
        });
    }
    Ok(Estimate { value: fine, error })
}

/// Radial and angular nodes of the disc rule for one annulus.
fn annulus_nodes(tau_lo: f64, tau_hi: f64, rule: &GaussLegendre<f64>) -> Vec<(f64, f64)> {
    // u = cosh τ; dμ = (1/4) du dφ.
    rule.mapped(tau_lo.cosh(), tau_hi.cosh())
        .map(|(u, w)| (u.acosh(), 0.25 * w))
        .collect()
}

/// Result of a disc integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscEstimate<V = f64> {
    pub value: V,
    pub error: f64,
    pub tau_max: f64,
}

/// ∫ f dμ over the Poincaré disc with dμ = (1/4) sinh τ dτ dφ.
///
/// Radially: Gauss–Legendre in u = cosh τ on annuli of width 0.5, with a half-order rule
/// on the same annulus for the error estimate. Angularly: the periodic trapezoid rule, with
/// the every-other-node subrule for the error estimate. With `tau_max = 0` annuli are added
/// until the geometric tail extrapolated from the last two annuli falls below `tol`; the
/// extrapolated tail is added to the value.
pub fn integrate_disc<V, F>(f: F, spec: &QuadSpec) -> Result<DiscEstimate<V>>
where
    V: QuadValue,
    F: Fn(HyperPoint) -> V + Sync,
{
    spec.validate()?;
    let n_tau = spec.n_tau_resolved();
    let n_phi = spec.n_phi_resolved();
    let n_phi = n_phi + (n_phi % 2);
    let rule = gauss_legendre(n_tau);
    let coarse_rule = gauss_legendre((n_tau / 2).max(1));
    let dphi = 2.0 * PI / n_phi as f64;

    // Returns (fine, coarse-in-τ, coarse-in-φ, ∫|f|) for one annulus.
    let annulus = |lo: f64, hi: f64| -> (V, V, V, f64) {
        let ring = |tau: f64| -> (V, V, f64) {
            let values: Vec<V> = (0..n_phi)
                .into_par_iter()
                .map(|j| f(HyperPoint::new_unchecked(tau, j as f64 * dphi)))
                .collect();
            let full = values.iter().fold(V::zero(), |acc, &v| acc + v) * dphi;
            let half = values.iter().step_by(2).fold(V::zero(), |acc, &v| acc + v) * (2.0 * dphi);
            let mass = values.iter().map(|v| v.magnitude()).sum::<f64>() * dphi;
            (full, half, mass)
        };
        let mut fine = V::zero();
        let mut phi_coarse = V::zero();
        let mut mass = 0.0;
        for (tau, w) in annulus_nodes(lo, hi, &rule) {
            let (full, half, m) = ring(tau);
            fine = fine + full * w;
            phi_coarse = phi_coarse + half * w;
            mass += m * w;
        }
        let mut tau_coarse = V::zero();
        for (tau, w) in annulus_nodes(lo, hi, &coarse_rule) {
            tau_coarse = tau_coarse + ring(tau).0 * w;
        }
        (fine, tau_coarse, phi_coarse, mass)
    };

    let mut total = V::zero();
    let mut disc_err = 0.0;
    let mut lo = 0.0;
    if spec.tau_max > 0.0 {
        let count = (spec.tau_max / ANNULUS_WIDTH).ceil().max(1.0) as usize;
        let width = spec.tau_max / count as f64;
        for i in 0..count {
            let hi = if i + 1 == count {
                spec.tau_max
            } else {
                (i + 1) as f64 * width
            };
            let (fine, tc, pc, _) = annulus(lo, hi);
            total = total + fine;
            disc_err += (fine - tc).magnitude() + (fine - pc).magnitude();
            lo = hi;
        }
        return Ok(DiscEstimate {
            value: total,
            error: disc_err,
            tau_max: spec.tau_max,
        });
    }

    let mut previous: Option<f64> = None;
    let min_annuli = 4;
    let mut count = 0;
    let mut mass_total = 0.0;
    loop {
        let hi = lo + ANNULUS_WIDTH;
        let (fine, tc, pc, mass) = annulus(lo, hi);
        total = total + fine;
        mass_total += mass;
        disc_err += (fine - tc).magnitude() + (fine - pc).magnitude();
        lo = hi;
        count += 1;
        let scale = total.magnitude().max(mass_total).max(f64::MIN_POSITIVE);
        if count >= min_annuli {
            if let Some(prev) = previous {
                let ratio = if prev != 0.0 { mass / prev } else { 0.0 };
                if ratio < 0.95 {
                    let tail = mass * ratio / (1.0 - ratio);
                    if tail <= spec.tol * scale {
                        // geometric extrapolation of the remaining annuli
                        return Ok(DiscEstimate {
                            value: total + fine * (ratio / (1.0 - ratio)),
                            error: disc_err + 0.5 * tail,
                            tau_max: lo,
                        });
                    }
                }
            }
        }
        previous = Some(mass);
        if lo >= TAU_LIMIT {
            return Err(Error::Accuracy {
                op: "integrate_disc",
                estimate: fine.magnitude() * 20.0,
                tol: spec.tol,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::<f64>::new(8);
        for p in 0..16 {
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(p));
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((got - exact).abs() < 1e-14, "degree {p}: {got} vs {exact}");
        }
        let s: f64 = rule.weights().iter().sum();
        assert_relative_eq!(s, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn single_precision_rule() {
        let rule = GaussLegendre::<f32>::new(6);
        let got = rule.integrate(0.0, 1.0, |x| x * x);
        assert!((got - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn cutoff_floor_and_growth() {
        assert_eq!(lambda_cutoff(0.0, 10.0, 1e-6), 30.0);
        let big = lambda_cutoff(10.25, 0.5 * PI, 1e-15);
        assert!(big > 40.0);
        let k = IrrepIndex::new(10).unwrap();
        let w = spectral_window(k, 0.5, 0.0, 0.0, 1e-12).unwrap();
        assert!(w.tail <= 0.25e-12 && w.cutoff >= 30.0);
        assert!(spectral_window(k, 0.5, 2.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn zero_integrand() {
        let k = IrrepIndex::new(2).unwrap();
        let est = integrate_lambda(|_| 0.0, k, &QuadSpec::default(), 1.0).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn truncated_area() {
        let spec = QuadSpec {
            tau_max: 3.0,
            ..QuadSpec::with_tol(1e-8)
        };
        let est = integrate_disc(|_| 1.0, &spec).unwrap();
        let exact = 0.5 * PI * (3.0f64.cosh() - 1.0);
        assert_relative_eq!(est.value, exact, max_relative = 1e-10);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let spec = QuadSpec {
            tau_max: 2.0,
            ..QuadSpec::with_tol(1e-8)
        };
        let est = integrate_disc(|p| p.phi().sin() * (-p.tau()).exp(), &spec).unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn auto_tail_growth() {
        // ∫ cosh⁻³τ dμ = (π/2) ∫₁^∞ u⁻³ du = π/4
        let est = integrate_disc(|p| p.tau().cosh().powi(-3), &QuadSpec::with_tol(1e-9)).unwrap();
        assert_relative_eq!(est.value, PI / 4.0, max_relative = 1e-8);
        assert!(est.error < 1e-7);
    }

    #[test]
    fn non_decaying_tail_is_reported() {
        let err = integrate_disc(|_| 1.0, &QuadSpec::with_tol(1e-6)).unwrap_err();
        assert!(err.is_accuracy());
    }
}
