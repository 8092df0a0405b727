//! Radial kernels g_s(cosh ξ) = ∫₀^∞ λ tanh(πλ) Φ_k^{(1−s)/2}(λ) P_{−1/2+iλ}(cosh ξ) dλ.
//!
//! They map P-symbols to s-ordered symbols: s = 0 gives the Wigner kernel g_plus,
//! s = −1 the squared coherent-state overlap, and s = 1 the δ-kernel, which only exists
//! as a distribution and is applied through [`smooth_radial`]. The inverse direction,
//! with Φ_k^{−1/2}, is singular and deliberately not offered.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HyperPoint;
use crate::quadrature::{gauss_legendre, spectral_window, Estimate, QuadSpec, QuadValue, SpectralWindow, LAMBDA_NODES};
use crate::specfun::conical::{arccosh_c, ConicalQuad};
use crate::specfun::{assoc_conical_u_all, ln_phi_k, IrrepIndex};

/// The ordering parameter s ∈ [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct KernelOrder {
    s: f64,
}

impl KernelOrder {
    pub const WIGNER: KernelOrder = KernelOrder { s: 0.0 };
    pub const Q: KernelOrder = KernelOrder { s: -1.0 };
    pub const P: KernelOrder = KernelOrder { s: 1.0 };

    pub fn new(s: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::domain("KernelOrder", format!("s must lie in [-1, 1], got {s}")));
        }
        Ok(Self { s })
    }

    pub fn s(self) -> f64 {
        self.s
    }

    /// Power (1 − s)/2 of Φ_k in the kernel.
    pub fn exponent(self) -> f64 {
        0.5 * (1.0 - self.s)
    }
}

impl TryFrom<f64> for KernelOrder {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<KernelOrder> for f64 {
    fn from(s: KernelOrder) -> f64 {
        s.s
    }
}

/// Uniform trapezoid in λ on [0, Λ], λ_j = j·dl, with λ tanh(πλ) Φ_k^e(λ) dl folded into
/// the weights. The integrand is even and analytic for |Im λ| < 1/2, so the rule converges
/// geometrically in 1/dl.
#[derive(Debug, Clone)]
pub(crate) struct SpectralRule {
    pub dl: f64,
    pub weights: Vec<f64>,
}

impl SpectralRule {
    pub fn new(k: IrrepIndex, exponent: f64, cutoff: f64, dl: f64) -> Self {
        let n = (cutoff / dl * (1.0 + 1e-12)).floor() as usize + 1;
        let weights = (0..n)
            .map(|j| {
                let lambda = j as f64 * dl;
                if j == 0 {
                    0.0
                } else {
                    dl * lambda * (PI * lambda).tanh() * (exponent * ln_phi_k(k, lambda)).exp()
                }
            })
            .collect();
        Self { dl, weights }
    }

    /// Spacing for relative accuracy `eps` at arguments with Re η ≤ `re_eta`, quantized to
    /// reciprocals of integers.
    pub fn step(re_eta: f64, eps: f64) -> f64 {
        let d = 0.4;
        let raw = 2.0 * PI * d / (3.5 + d * re_eta + (1.0 / eps).ln());
        1.0 / (1.0 / raw).ceil()
    }

    pub fn sum_real(&self, quad: &ConicalQuad) -> f64 {
        quad.spectral_sum(self.dl, &self.weights).re
    }

    pub fn sum_complex(&self, quad: &ConicalQuad) -> Complex64 {
        quad.spectral_sum(self.dl, &self.weights)
    }
}

/// Relative accuracy asked of each conical-function value inside a λ-integral.
pub(crate) fn conical_eps(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-16, 1e-6)
}

fn check_cosh(op: &'static str, cosh_xi: f64) -> Result<f64> {
    if !cosh_xi.is_finite() || cosh_xi < 1.0 - 1e-12 {
        return Err(Error::domain(op, format!("cosh ξ must be ≥ 1, got {cosh_xi}")));
    }
    Ok(cosh_xi.max(1.0).acosh())
}

fn kernel_direct(k: IrrepIndex, s: KernelOrder, xi: f64, spec: &QuadSpec) -> Result<Estimate<f64>> {
    spec.validate()?;
    if s.exponent() == 0.0 {
        return Err(Error::Unsupported(
            "the s = 1 kernel is a δ-distribution; apply it to a test function with smooth_radial".into(),
        ));
    }
    let window = if spec.lambda_max > 0.0 {
        SpectralWindow {
            cutoff: spec.lambda_max,
            tail: 0.0,
        }
    } else {
        spectral_window(k, s.exponent(), 0.0, 0.0, spec.tol)?
    };
    let quad = ConicalQuad::from_tau(xi, window.cutoff, 0, conical_eps(spec.tol))?;
    let dl = SpectralRule::step(xi, spec.tol);
    let coarse = SpectralRule::new(k, s.exponent(), window.cutoff, dl).sum_real(&quad);
    let fine = SpectralRule::new(k, s.exponent(), window.cutoff, 0.5 * dl).sum_real(&quad);
    let error = (fine - coarse).abs() + window.tail;
    if !(error <= spec.tol) {
        return Err(Error::Accuracy {
            op: "g_s",
            estimate: error,
            tol: spec.tol,
        });
    }
    Ok(Estimate { value: fine, error })
}

/// g_k^{(+)}(cosh ξ) = ∫₀^∞ λ tanh(πλ) Φ_k^{1/2}(λ) P_{−1/2+iλ}(cosh ξ) dλ.
pub fn g_plus(k: IrrepIndex, cosh_xi: f64, spec: &QuadSpec) -> Result<f64> {
    let xi = check_cosh("g_plus", cosh_xi)?;
    Ok(kernel_direct(k, KernelOrder::WIGNER, xi, spec)?.value)
}

/// The s-ordered kernel, with Φ_k^{(1−s)/2} in place of Φ_k^{1/2}.
pub fn g_s(k: IrrepIndex, s: KernelOrder, cosh_xi: f64, spec: &QuadSpec) -> Result<f64> {
    let xi = check_cosh("g_s", cosh_xi)?;
    Ok(kernel_direct(k, s, xi, spec)?.value)
}

/// g_s together with its quadrature error estimate, with the argument given as ξ.
pub fn g_s_estimate(k: IrrepIndex, s: KernelOrder, xi: f64, spec: &QuadSpec) -> Result<Estimate<f64>> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::domain("g_s", format!("ξ must be ≥ 0, got {xi}")));
    }
    kernel_direct(k, s, xi, spec)
}

/// The kernel at a complex argument z with Re z > 0 (off-diagonal symbols).
pub fn g_s_complex(k: IrrepIndex, s: KernelOrder, z: Complex64, spec: &QuadSpec) -> Result<Complex64> {
    ComplexKernel::new(k, s, spec.tol)?.eval(z)
}

pub(crate) const CHEB_NODES: usize = 16;
pub(crate) const TABLE_PANEL: f64 = 0.5;
/// Arguments beyond this ξ bypass the tables.
pub const TABLE_XI_MAX: f64 = 40.0;

/// Piecewise Chebyshev interpolant on [0, x_max], built one panel at a time on demand.
pub(crate) struct ChebTable<V> {
    width: f64,
    panels: Vec<OnceLock<[V; CHEB_NODES]>>,
}

impl<V: QuadValue> ChebTable<V> {
    pub fn new(x_max: f64, width: f64) -> Self {
        let count = (x_max / width).ceil() as usize;
        Self {
            width,
            panels: (0..count).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn x_max(&self) -> f64 {
        self.width * self.panels.len() as f64
    }

    /// Interpolated value at x, or None beyond the table. `build` returns the function at
    /// the nodes it is handed.
    pub fn eval_with<F>(&self, x: f64, build: F) -> Result<Option<V>>
    where
        F: Fn(&[f64]) -> Result<Vec<V>>,
    {
        if !(x >= 0.0) || x >= self.x_max() {
            return Ok(None);
        }
        let i = ((x / self.width) as usize).min(self.panels.len() - 1);
        let a = i as f64 * self.width;
        let slot = &self.panels[i];
        let coeffs = match slot.get() {
            Some(c) => c,
            None => {
                let nodes: Vec<f64> = (0..CHEB_NODES)
                    .map(|j| a + 0.5 * self.width * (1.0 + cheb_node(j)))
                    .collect();
                let values = build(&nodes)?;
                let coeffs = cheb_coefficients(&values);
                let _ = slot.set(coeffs);
                slot.get().expect("panel was just filled")
            }
        };
        let t = 2.0 * (x - a) / self.width - 1.0;
        Ok(Some(clenshaw(coeffs, t)))
    }
}

fn cheb_node(j: usize) -> f64 {
    (PI * (j as f64 + 0.5) / CHEB_NODES as f64).cos()
}

fn cheb_coefficients<V: QuadValue>(values: &[V]) -> [V; CHEB_NODES] {
    let n = CHEB_NODES as f64;
    let mut out = [V::zero(); CHEB_NODES];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut acc = V::zero();
        for (j, &v) in values.iter().enumerate() {
            acc = acc + v * (PI * m as f64 * (j as f64 + 0.5) / n).cos();
        }
        *slot = acc * (if m == 0 { 1.0 / n } else { 2.0 / n });
    }
    out
}

fn clenshaw<V: QuadValue>(c: &[V; CHEB_NODES], t: f64) -> V {
    let mut b1 = V::zero();
    let mut b2 = V::zero();
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + b1 * (2.0 * t) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * t - b2
}

/// Lazily filled λ-rules keyed by spacing, shared by the panels of a table.
pub(crate) struct RuleCache {
    k: IrrepIndex,
    exponent: f64,
    cutoff: f64,
    rules: Mutex<HashMap<u64, Arc<SpectralRule>>>,
}

impl RuleCache {
    pub fn new(k: IrrepIndex, exponent: f64, cutoff: f64) -> Self {
        Self {
            k,
            exponent,
            cutoff,
            rules: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, xi: f64, eps: f64) -> Arc<SpectralRule> {
        let dl = SpectralRule::step(xi, eps);
        let key = dl.to_bits();
        let mut map = self.rules.lock().unwrap();
        map.entry(key)
            .or_insert_with(|| Arc::new(SpectralRule::new(self.k, self.exponent, self.cutoff, dl)))
            .clone()
    }
}

/// Tabulated g_s(cosh ξ) for bulk evaluation on grids.
///
/// Panels of width 1/2 in ξ carry 16-node Chebyshev interpolants of the direct λ-integral
/// and are filled the first time an argument lands in them. Reads and fills are safe from
/// any number of threads.
pub struct KernelTable {
    k: IrrepIndex,
    s: KernelOrder,
    tol: f64,
    cutoff: f64,
    rules: RuleCache,
    table: ChebTable<f64>,
}

impl std::fmt::Debug for KernelTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelTable")
            .field("k", &self.k)
            .field("s", &self.s)
            .field("tol", &self.tol)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl KernelTable {
    pub fn new(k: IrrepIndex, s: KernelOrder, tol: f64) -> Result<Self> {
        if s.exponent() == 0.0 {
            return Err(Error::Unsupported("no table for the s = 1 δ-kernel".into()));
        }
        let window = spectral_window(k, s.exponent(), 0.0, 0.0, tol)?;
        Ok(Self {
            k,
            s,
            tol,
            cutoff: window.cutoff,
            rules: RuleCache::new(k, s.exponent(), window.cutoff),
            table: ChebTable::new(TABLE_XI_MAX, TABLE_PANEL),
        })
    }

    /// Process-wide table for (k, s, tol).
    pub fn shared(k: IrrepIndex, s: KernelOrder, tol: f64) -> Result<Arc<Self>> {
        type Key = (u32, u64, u64);
        static TABLES: OnceLock<RwLock<HashMap<Key, Arc<KernelTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        let key = (k.twice_k(), s.s().to_bits(), tol.to_bits());
        if let Some(t) = tables.read().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(Self::new(k, s, tol)?);
        Ok(tables.write().unwrap().entry(key).or_insert(table).clone())
    }

    pub fn k(&self) -> IrrepIndex {
        self.k
    }

    pub fn order(&self) -> KernelOrder {
        self.s
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Direct evaluation with the table's λ-rule, bypassing interpolation.
    pub fn direct_xi(&self, xi: f64) -> Result<f64> {
        let eps = conical_eps(self.tol);
        let quad = ConicalQuad::from_tau(xi, self.cutoff, 0, eps)?;
        Ok(self.rules.get(xi, eps).sum_real(&quad))
    }

    pub fn eval_xi(&self, xi: f64) -> Result<f64> {
        if !xi.is_finite() || xi < 0.0 {
            return Err(Error::domain("KernelTable", format!("ξ must be ≥ 0, got {xi}")));
        }
        let hit = self
            .table
            .eval_with(xi, |nodes| nodes.par_iter().map(|&x| self.direct_xi(x)).collect())?;
        match hit {
            Some(v) => Ok(v),
            None => self.direct_xi(xi),
        }
    }

    pub fn eval(&self, cosh_xi: f64) -> Result<f64> {
        let xi = check_cosh("KernelTable", cosh_xi)?;
        self.eval_xi(xi)
    }
}

/// Evaluator of g_s at complex arguments; λ-rules are cached per growth rate.
pub struct ComplexKernel {
    k: IrrepIndex,
    s: KernelOrder,
    tol: f64,
    rules: Mutex<HashMap<(u32, u64), Arc<(SpectralRule, f64)>>>,
}

impl ComplexKernel {
    pub fn new(k: IrrepIndex, s: KernelOrder, tol: f64) -> Result<Self> {
        if s.exponent() == 0.0 {
            return Err(Error::Unsupported("the s = 1 δ-kernel has no pointwise values".into()));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::domain(
                "ComplexKernel",
                format!("tol must lie in (0, 1), got {tol}"),
            ));
        }
        Ok(Self {
            k,
            s,
            tol,
            rules: Mutex::new(HashMap::new()),
        })
    }

    /// Process-wide evaluator for (k, s, tol).
    pub fn shared(k: IrrepIndex, s: KernelOrder, tol: f64) -> Result<Arc<Self>> {
        type Key = (u32, u64, u64);
        static KERNELS: OnceLock<RwLock<HashMap<Key, Arc<ComplexKernel>>>> = OnceLock::new();
        let kernels = KERNELS.get_or_init(Default::default);
        let key = (k.twice_k(), s.s().to_bits(), tol.to_bits());
        if let Some(c) = kernels.read().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let kernel = Arc::new(Self::new(k, s, tol)?);
        Ok(kernels.write().unwrap().entry(key).or_insert(kernel).clone())
    }

    pub fn k(&self) -> IrrepIndex {
        self.k
    }

    fn rule(&self, eta: Complex64) -> Result<Arc<(SpectralRule, f64)>> {
        // |P(cosh η)| grows at most like e^{λ |Im η|}; bucket the rate upward.
        let bucket = (eta.im.abs() * 20.0).ceil() as u32;
        let growth = bucket as f64 / 20.0;
        let dl = SpectralRule::step(eta.re.max(eta.norm()), conical_eps(self.tol));
        let key = (bucket, dl.to_bits());
        if let Some(r) = self.rules.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let window = spectral_window(self.k, self.s.exponent(), growth, 0.0, self.tol)?;
        let rule = Arc::new((
            SpectralRule::new(self.k, self.s.exponent(), window.cutoff, dl),
            window.cutoff,
        ));
        Ok(self.rules.lock().unwrap().entry(key).or_insert(rule).clone())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re > 0.0) || !z.im.is_finite() {
            return Err(Error::domain("g_s_complex", format!("need Re z > 0, got {z}")));
        }
        if z.im == 0.0 && z.re >= 1.0 {
            let rule = self.rule(Complex64::new(z.re.acosh(), 0.0))?;
            let quad = ConicalQuad::real(z.re, rule.1, 0, conical_eps(self.tol))?;
            return Ok(Complex64::new(rule.0.sum_real(&quad), 0.0));
        }
        let eta = arccosh_c(z);
        let rule = self.rule(eta)?;
        let quad = ConicalQuad::complex(z, rule.1, conical_eps(self.tol))?;
        Ok(rule.0.sum_complex(&quad))
    }
}

/// (2/π) ∫ dμ′ g_s(ζ′⁻¹ζ) f(ζ′) for a test function radial about ζ, f given as f(cosh ξ).
///
/// Runs through the transform f̃(λ) = ∫₁^∞ f(x) P_{−1/2+iλ}(x) dx, so the result is
/// ∫ λ tanh(πλ) Φ_k^{(1−s)/2} f̃(λ) dλ. This is how the δ-kernel s = 1 acts: it returns f(1).
/// The λ-range grows until a unit panel adds less than `tol`; `spec.tau_max`, when set,
/// truncates the radial integral of f.
pub fn smooth_radial<F>(k: IrrepIndex, s: KernelOrder, f: F, spec: &QuadSpec) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    let tol = spec.tol;
    let rule = gauss_legendre(LAMBDA_NODES);
    // Radial nodes in t = ξ, with f(cosh t) sinh t as weight.
    let t_max = if spec.tau_max > 0.0 {
        spec.tau_max
    } else {
        let weight = |t: f64| (f(t.cosh()) * t.sinh()).abs();
        let mut t: f64 = 2.0;
        while weight(t) > tol * 1e-3 || weight(t - 0.5) > tol * 1e-3 {
            t += 0.5;
            if t > 40.0 {
                return Err(Error::Accuracy {
                    op: "smooth_radial",
                    estimate: weight(t),
                    tol,
                });
            }
        }
        t
    };
    let lambda_cap = 200.0;
    let t_width = 0.25;
    let t_panels = (t_max / t_width).ceil() as usize;
    let t_width = t_max / t_panels as f64;
    let radial: Vec<(f64, f64)> = (0..t_panels)
        .flat_map(|i| {
            let a = i as f64 * t_width;
            rule.mapped(a, a + t_width).collect::<Vec<_>>()
        })
        .map(|(t, w)| (t, w * f(t.cosh()) * t.sinh()))
        .collect();
    let quads: Vec<ConicalQuad> = radial
        .par_iter()
        .map(|&(t, _)| ConicalQuad::from_tau(t, lambda_cap, 0, conical_eps(tol)))
        .collect::<Result<_>>()?;
    let transform = |lambda: f64| -> f64 {
        radial
            .iter()
            .zip(&quads)
            .map(|(&(_, w), q)| w * q.eval_real(lambda))
            .sum()
    };
    let e = s.exponent();
    let mut total = 0.0;
    let mut quiet = 0;
    let mut a = 0.0;
    while a < lambda_cap {
        let panel: f64 = rule
            .mapped(a, a + 1.0)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(lambda, w)| {
                let weight = lambda * (PI * lambda).tanh() * (e * ln_phi_k(k, lambda)).exp();
                w * weight * transform(lambda)
            })
            .sum();
        total += panel;
        a += 1.0;
        if panel.abs() < 1e-2 * tol {
            quiet += 1;
            if quiet >= 3 && a >= 8.0 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Accuracy {
        op: "smooth_radial",
        estimate: f64::NAN,
        tol,
    })
}

/// Σ_{n=−N}^{N} u_n^λ(a) u_n^λ(b)*, which converges to P_{−1/2+iλ}(a·b).
pub fn zonal_sum(lambda: f64, a: &HyperPoint, b: &HyperPoint, n: usize) -> Result<Complex64> {
    let ua = assoc_conical_u_all(n, lambda, a.tau(), a.phi())?;
    let ub = assoc_conical_u_all(n, lambda, b.tau(), b.phi())?;
    Ok(ua.iter().zip(&ub).map(|(x, y)| x * y.conj()).sum())
}

/// Second-order central differences for ∂²_τ + coth τ ∂_τ + sinh⁻²τ ∂²_φ.
pub fn laplacian_fd<F>(f: F, p: &HyperPoint, h: f64) -> Result<Complex64>
where
    F: Fn(&HyperPoint) -> Complex64,
{
    let (tau, phi) = (p.tau(), p.phi());
    if !(h > 0.0) || tau <= 2.0 * h {
        return Err(Error::domain(
            "laplacian_fd",
            format!("need τ > 2h, got τ = {tau}, h = {h}"),
        ));
    }
    let at = |t: f64, ph: f64| f(&HyperPoint::new_unchecked(t, ph));
    let f0 = at(tau, phi);
    let fp = at(tau + h, phi);
    let fm = at(tau - h, phi);
    let gp = at(tau, phi + h);
    let gm = at(tau, phi - h);
    let d2t = (fp - 2.0 * f0 + fm) / (h * h);
    let d1t = (fp - fm) / (2.0 * h);
    let d2p = (gp - 2.0 * f0 + gm) / (h * h);
    let sh = tau.sinh();
    Ok(d2t + d1t / tau.tanh() + d2p / (sh * sh))
}
