//! Conical (Mehler) functions P_{-1/2+iλ} and the associated harmonics u_n^λ.
//!
//! Everything here goes through the angular integral
//!
//!   P_ν(z) = (1/π) ∫₀^π (z + √(z²−1) cos θ)^ν dθ,
//!
//! rewritten with cos θ = tanh v. With z = cosh η the base becomes
//! cosh(η − v)/cosh v, the measure becomes sech v dv, and the integrand is
//! analytic in a strip around the real v-axis, so the trapezoid rule converges
//! geometrically. Its step follows from the strip width and the growth of
//! e^{iλ L(v)} inside the strip.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

// Fraction of the distance to the nearest singularity used as strip half-width.
const STRIP_FRACTION: f64 = 0.92;
// Slack in the exponent covering the size of the integrand near the strip edge.
const STRIP_SLACK: f64 = 4.0;
/// Largest trapezoid grid built before giving up with an accuracy error.
pub const MAX_NODES: usize = 1 << 22;
/// Default relative accuracy target of the pointwise evaluators.
pub const DEFAULT_EPS: f64 = 1e-15;

fn lncosh(w: f64) -> f64 {
    let a = w.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn lncosh_c(w: Complex64) -> Complex64 {
    let s = if w.re >= 0.0 { w } else { -w };
    s + (1.0 + (-2.0 * s).exp()).ln() - LN_2
}

fn wrap_phase(mut x: f64) -> f64 {
    while x > PI {
        x -= 2.0 * PI;
    }
    while x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// η = arccosh z on the principal branch, Re η ≥ 0.
pub fn arccosh_c(z: Complex64) -> Complex64 {
    let root = (z - 1.0).sqrt() * (z + 1.0).sqrt();
    let mut eta = (z + root).ln();
    if eta.re < 0.0 {
        eta = -eta;
    }
    eta
}

#[derive(Debug, Clone)]
enum Nodes {
    Real {
        phase: Vec<f64>,
        weight: Vec<f64>,
    },
    Complex {
        phase: Vec<Complex64>,
        weight: Vec<Complex64>,
    },
}

/// Trapezoid grid for P_{-1/2+iλ}(cosh η) at a fixed argument, shared by every λ up to
/// `lambda_max` and every order up to `order_max`.
///
/// Smaller λ reuse the grid with an integer stride, so a sweep over many λ costs one
/// set of logarithms.
#[derive(Debug, Clone)]
pub struct ConicalQuad {
    eta: Complex64,
    h: f64,
    strip: f64,
    log_eps: f64,
    lambda_max: f64,
    order_max: usize,
    tanh_v: Vec<f64>,
    nodes: Nodes,
}

impl ConicalQuad {
    /// Grid for a real argument x ≥ 1.
    pub fn real(x: f64, lambda_max: f64, order_max: usize, eps: f64) -> Result<Self> {
        if !x.is_finite() || x < 1.0 {
            return Err(Error::domain(
                "conical_p",
                format!("argument must satisfy x ≥ 1, got {x}"),
            ));
        }
        Self::build(Complex64::new(x.acosh(), 0.0), lambda_max, order_max, eps, true)
    }

    /// Grid for a complex argument with Re z > 0.
    pub fn complex(z: Complex64, lambda_max: f64, eps: f64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.re <= 0.0 {
            return Err(Error::domain(
                "conical_p_complex",
                format!("argument must satisfy Re z > 0, got {z}"),
            ));
        }
        Self::build(arccosh_c(z), lambda_max, 0, eps, false)
    }

    /// Grid for the real argument cosh τ given through τ itself, which stays exact for large τ.
    pub fn from_tau(tau: f64, lambda_max: f64, order_max: usize, eps: f64) -> Result<Self> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::domain(
                "conical_p",
                format!("τ must be finite and ≥ 0, got {tau}"),
            ));
        }
        Self::build(Complex64::new(tau, 0.0), lambda_max, order_max, eps, true)
    }

    fn build(eta: Complex64, lambda_max: f64, order_max: usize, eps: f64, real: bool) -> Result<Self> {
        let lambda_max = lambda_max.abs();
        if !lambda_max.is_finite() {
            return Err(Error::domain("conical_p", "λ must be finite"));
        }
        let eps = eps.clamp(1e-17, 1e-3);
        let log_eps = (1.0 / eps).ln();
        let strip = STRIP_FRACTION * (FRAC_PI_2 - eta.im.abs());
        if strip <= 0.0 {
            return Err(Error::domain("conical_p_complex", "argument on the branch cut"));
        }
        let h = step(strip, log_eps, lambda_max, order_max);
        let reach = log_eps + STRIP_SLACK;
        let lo = -reach;
        let hi = eta.re + reach;
        let span = (hi - lo) / h;
        if span > MAX_NODES as f64 {
            // The trapezoid error at the largest affordable step.
            let h_max = (hi - lo) / MAX_NODES as f64;
            let estimate = (2.0 * lambda_max * strip - 2.0 * PI * strip / h_max + STRIP_SLACK).exp();
            return Err(Error::Accuracy {
                op: "conical_p",
                estimate,
                tol: eps,
            });
        }
        let n = span.ceil() as usize + 1;
        let mut tanh_v = Vec::with_capacity(if real { n } else { 0 });
        let nodes = if real {
            let eta = eta.re;
            let mut phase = Vec::with_capacity(n);
            let mut weight = Vec::with_capacity(n);
            for j in 0..n {
                let v = lo + j as f64 * h;
                let lc = lncosh(v);
                let l = lncosh(eta - v) - lc;
                phase.push(l);
                // e^{-L/2} sech v, with sech v = e^{-lncosh v}
                weight.push((-0.5 * l - lc).exp() * h / PI);
                tanh_v.push(v.tanh());
            }
            Nodes::Real { phase, weight }
        } else {
            let mut phase = Vec::with_capacity(n);
            let mut weight = Vec::with_capacity(n);
            for j in 0..n {
                let v = lo + j as f64 * h;
                let lc = lncosh(v);
                let mut l = lncosh_c(eta - v) - lc;
                l.im = wrap_phase(l.im);
                phase.push(l);
                weight.push((-0.5 * l - lc).exp() * (h / PI));
            }
            Nodes::Complex { phase, weight }
        };
        Ok(Self {
            eta,
            h,
            strip,
            log_eps,
            lambda_max,
            order_max,
            tanh_v,
            nodes,
        })
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn len(&self) -> usize {
        match &self.nodes {
            Nodes::Real { phase, .. } => phase.len(),
            Nodes::Complex { phase, .. } => phase.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stride(&self, lambda: f64, order: usize) -> usize {
        let want = step(self.strip, self.log_eps, lambda.abs(), order);
        ((want / self.h).floor() as usize).max(1)
    }

    fn check_range(&self, lambda: f64) {
        debug_assert!(
            lambda.abs() <= self.lambda_max * (1.0 + 1e-12) + 1e-12,
            "λ = {lambda} beyond the grid limit {}",
            self.lambda_max
        );
    }

    /// P_{-1/2+iλ} at the grid's argument (real part for a real grid).
    pub fn eval(&self, lambda: f64) -> Complex64 {
        self.check_range(lambda);
        let stride = self.stride(lambda, 0);
        let scale = stride as f64;
        match &self.nodes {
            Nodes::Real { phase, weight } => {
                let mut acc = 0.0;
                for (l, w) in phase.iter().zip(weight).step_by(stride) {
                    acc += w * (lambda * l).cos();
                }
                Complex64::new(acc * scale, 0.0)
            }
            Nodes::Complex { phase, weight } => {
                let mut acc = Complex64::new(0.0, 0.0);
                let i_lambda = Complex64::new(0.0, lambda);
                for (l, w) in phase.iter().zip(weight).step_by(stride) {
                    acc += w * (i_lambda * l).exp();
                }
                acc * scale
            }
        }
    }

    /// Real-argument shortcut; the imaginary part of a real grid vanishes identically.
    pub fn eval_real(&self, lambda: f64) -> f64 {
        self.eval(lambda).re
    }

    /// Power-of-two strides log2 s_j for λ_j = j·dl (non-increasing in j), and for every
    /// t the first j whose stride divides 2^t.
    fn stride_plan(&self, dl: f64, n_l: usize, order: usize) -> (Vec<u32>, Vec<usize>) {
        debug_assert!((n_l - 1) as f64 * dl <= self.lambda_max * (1.0 + 1e-12) + 1e-12);
        let mut log_stride: Vec<u32> = Vec::with_capacity(n_l);
        let mut prev = u32::MAX;
        for j in 0..n_l {
            let s = self.stride(j as f64 * dl, order);
            let m = (usize::BITS - 1 - s.leading_zeros()).min(prev);
            log_stride.push(m);
            prev = m;
        }
        let top = log_stride[0] as usize;
        let j_start = (0..=top)
            .map(|t| log_stride.iter().position(|&m| m as usize <= t).unwrap_or(n_l))
            .collect();
        (log_stride, j_start)
    }

    /// Node indices grouped by the first λ_j they serve; nodes that serve nothing are dropped.
    fn node_groups(&self, j_start: &[usize], n_l: usize) -> Vec<(usize, Vec<usize>)> {
        let top = j_start.len() - 1;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for i in 0..self.len() {
            let t = if i == 0 {
                top
            } else {
                (i.trailing_zeros() as usize).min(top)
            };
            if j_start[t] < n_l {
                groups[t].push(i);
            }
        }
        groups
            .into_iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty())
            .map(|(t, g)| (j_start[t], g))
            .collect()
    }

    /// Moments Σ_j w_j λ_j^p R_d^{λ_j}(τ) on the uniform grid λ_j = j·dl, for p = 0..=pmax
    /// and d = 0..=dmax, returned flat at index d·(pmax + 1) + p. Real grids only.
    pub fn radial_moments(&self, dl: f64, weights: &[f64], pmax: usize, dmax: usize) -> Result<Vec<Complex64>> {
        let (phase, weight) = match &self.nodes {
            Nodes::Real { phase, weight } => (phase, weight),
            Nodes::Complex { .. } => return Err(Error::Unsupported("radial moments at complex argument".into())),
        };
        if dmax > self.order_max {
            return Err(Error::domain(
                "radial_moments",
                format!("order {dmax} exceeds the grid's order limit {}", self.order_max),
            ));
        }
        let np = pmax + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); np * (dmax + 1)];
        let n_l = weights.len();
        if n_l == 0 {
            return Ok(out);
        }
        let (log_stride, j_start) = self.stride_plan(dl, n_l, dmax);
        let coeff: Vec<Vec<f64>> = (0..np)
            .map(|p| {
                (0..n_l)
                    .map(|j| {
                        let lambda = j as f64 * dl;
                        weights[j] * lambda.powi(p as i32) * (1u64 << log_stride[j]) as f64
                    })
                    .collect()
            })
            .collect();
        for (j0, nodes) in self.node_groups(&j_start, n_l) {
            let q: Vec<Complex64> = nodes
                .iter()
                .map(|&i| Complex64::from_polar(1.0, dl * phase[i]))
                .collect();
            let mut moments = vec![vec![Complex64::new(0.0, 0.0); nodes.len()]; np];
            for (m, c) in moments.iter_mut().zip(&coeff) {
                horner_many(&c[j0..], &q, m);
            }
            for (slot, &i) in nodes.iter().enumerate() {
                let shift = Complex64::from_polar(weight[i], j0 as f64 * dl * phase[i]);
                let t = self.tanh_v[i];
                let (mut t_prev, mut t_cur) = (1.0, t);
                for d in 0..=dmax {
                    let cheb = match d {
                        0 => 1.0,
                        1 => t,
                        _ => {
                            let next = 2.0 * t * t_cur - t_prev;
                            t_prev = t_cur;
                            t_cur = next;
                            next
                        }
                    };
                    let row = &mut out[d * np..(d + 1) * np];
                    for (o, m) in row.iter_mut().zip(&moments) {
                        *o += shift * m[slot] * cheb;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Σ_j w_j P_{−1/2+iλ_j} over the uniform λ-grid λ_j = j·dl, j = 0..weights.len().
    ///
    /// Each λ_j uses the coarsest power-of-two stride of the shared v-grid that resolves it,
    /// so a node with 2^t dividing its index serves a contiguous top range of λ_j. On that
    /// range the sum over j is a polynomial in q = e^{i dl L}, evaluated by Horner's rule.
    pub fn spectral_sum(&self, dl: f64, weights: &[f64]) -> Complex64 {
        let n_l = weights.len();
        if n_l == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let (log_stride, j_start) = self.stride_plan(dl, n_l, 0);
        let coeff: Vec<f64> = weights
            .iter()
            .zip(&log_stride)
            .map(|(w, &m)| w * (1u64 << m) as f64)
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (j0, nodes) in self.node_groups(&j_start, n_l) {
            let (q, shift): (Vec<Complex64>, Vec<Complex64>) = match &self.nodes {
                Nodes::Real { phase, weight } => nodes
                    .iter()
                    .map(|&i| {
                        let l = phase[i];
                        (
                            Complex64::from_polar(1.0, dl * l),
                            Complex64::from_polar(weight[i], j0 as f64 * dl * l),
                        )
                    })
                    .unzip(),
                Nodes::Complex { phase, weight } => {
                    let i_dl = Complex64::new(0.0, dl);
                    nodes
                        .iter()
                        .map(|&i| {
                            let l = phase[i];
                            ((i_dl * l).exp(), weight[i] * (i_dl * l * j0 as f64).exp())
                        })
                        .unzip()
                }
            };
            let mut acc = vec![Complex64::new(0.0, 0.0); nodes.len()];
            horner_many(&coeff[j0..], &q, &mut acc);
            total += shift.iter().zip(&acc).map(|(s, a)| s * a).sum::<Complex64>();
        }
        total
    }

    /// Radial parts R_n^λ(τ) = (1/π)∫₀^π (cosh τ − sinh τ cos θ)^ν cos nθ dθ for n = 0..=nmax.
    pub fn radial(&self, lambda: f64, nmax: usize) -> Result<Vec<Complex64>> {
        self.check_range(lambda);
        let (phase, weight) = match &self.nodes {
            Nodes::Real { phase, weight } => (phase, weight),
            Nodes::Complex { .. } => return Err(Error::Unsupported("associated harmonics at complex argument".into())),
        };
        if nmax > self.order_max {
            return Err(Error::domain(
                "assoc_conical_u",
                format!("order {nmax} exceeds the grid's order limit {}", self.order_max),
            ));
        }
        let stride = self.stride(lambda, nmax);
        let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
        for ((l, w), &t) in phase.iter().zip(weight).zip(&self.tanh_v).step_by(stride) {
            let base = Complex64::from_polar(*w, lambda * l);
            // Chebyshev recurrence T_{n+1} = 2t T_n − T_{n−1}
            let mut t_prev = 1.0;
            let mut t_cur = t;
            out[0] += base;
            for (n, slot) in out.iter_mut().enumerate().skip(1) {
                if n > 1 {
                    let next = 2.0 * t * t_cur - t_prev;
                    t_prev = t_cur;
                    t_cur = next;
                }
                *slot += base * t_cur;
            }
        }
        let scale = stride as f64;
        for v in &mut out {
            *v *= scale;
        }
        Ok(out)
    }
}

const LANES: usize = 8;

/// out[i] = Σ_j c_j q_i^j, with independent chains interleaved so the loop vectorizes.
fn horner_many(c: &[f64], q: &[Complex64], out: &mut [Complex64]) {
    for (qs, os) in q.chunks(LANES).zip(out.chunks_mut(LANES)) {
        let (mut qr, mut qi) = ([0.0; LANES], [0.0; LANES]);
        for (l, z) in qs.iter().enumerate() {
            qr[l] = z.re;
            qi[l] = z.im;
        }
        let (mut ar, mut ai) = ([0.0; LANES], [0.0; LANES]);
        for &cj in c.iter().rev() {
            for l in 0..LANES {
                let r = ar[l] * qr[l] - ai[l] * qi[l] + cj;
                ai[l] = ar[l] * qi[l] + ai[l] * qr[l];
                ar[l] = r;
            }
        }
        for (l, o) in os.iter_mut().enumerate() {
            *o = Complex64::new(ar[l], ai[l]);
        }
    }
}

fn step(strip: f64, log_eps: f64, lambda: f64, order: usize) -> f64 {
    2.0 * PI * strip / ((2.0 * lambda + order as f64) * strip + log_eps + STRIP_SLACK)
}

/// P_{-1/2+iλ}(x) for real x ≥ 1.
pub fn conical_p(lambda: f64, x: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::domain("conical_p", "λ must be finite"));
    }
    Ok(ConicalQuad::real(x, lambda, 0, DEFAULT_EPS)?.eval_real(lambda))
}

/// P_{-1/2+iλ}(z) for complex z with Re z > 0, on the principal branch.
pub fn conical_p_complex(lambda: f64, z: Complex64) -> Result<Complex64> {
    if !lambda.is_finite() {
        return Err(Error::domain("conical_p_complex", "λ must be finite"));
    }
    Ok(ConicalQuad::complex(z, lambda, DEFAULT_EPS)?.eval(lambda))
}

/// u_n^λ(τ, φ) = e^{inφ} (1/π)∫₀^π (cosh τ − sinh τ cos θ)^{−1/2+iλ} cos nθ dθ.
pub fn assoc_conical_u(n: i64, lambda: f64, tau: f64, phi: f64) -> Result<Complex64> {
    if !(lambda.is_finite() && phi.is_finite()) {
        return Err(Error::domain("assoc_conical_u", "arguments must be finite"));
    }
    let order = n.unsigned_abs() as usize;
    let quad = ConicalQuad::from_tau(tau, lambda, order, DEFAULT_EPS)?;
    let r = quad.radial(lambda, order)?[order];
    Ok(r * Complex64::from_polar(1.0, n as f64 * phi))
}

/// u_n^λ(τ, φ) for every n in −nmax..=nmax, indexed by n + nmax.
pub fn assoc_conical_u_all(nmax: usize, lambda: f64, tau: f64, phi: f64) -> Result<Vec<Complex64>> {
    if !(lambda.is_finite() && phi.is_finite()) {
        return Err(Error::domain("assoc_conical_u", "arguments must be finite"));
    }
    let quad = ConicalQuad::from_tau(tau, lambda, nmax, DEFAULT_EPS)?;
    let radial = quad.radial(lambda, nmax)?;
    let nmax_i = nmax as i64;
    Ok((-nmax_i..=nmax_i)
        .map(|n| radial[n.unsigned_abs() as usize] * Complex64::from_polar(1.0, n as f64 * phi))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values computed with 30-digit arithmetic.
    const REFERENCE: [(f64, f64, f64); 5] = [
        (0.0, 1.0, 0.94086215924934981862),
        (2.0, f64::NAN, 0.112634194156569314564),
        (1.0, 5.0, -0.0546580562210752552886),
        (3.7, 12.0, 0.00133839451163072027677),
        (30.0, 3.0, 0.0146950712549393449800),
    ];

    #[test]
    fn reference_values() {
        for &(lambda, tau, want) in &REFERENCE {
            let x = if tau.is_nan() { 5.0 / 3.0 } else { tau.cosh() };
            let got = conical_p(lambda, x).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn complex_reference_values() {
        let got = conical_p_complex(1.0, Complex64::new(1.0, 0.5)).unwrap();
        let want = Complex64::new(0.939053695833891344595, -0.300253285905299445689);
        assert!((got - want).norm() < 1e-12, "{got}");
        let got = conical_p_complex(4.0, Complex64::new(2.0, -1.5)).unwrap();
        let want = Complex64::new(1.85244585546767499149, -0.641819160434398980338);
        assert!((got - want).norm() < 1e-11 * want.norm(), "{got}");
    }

    #[test]
    fn unit_argument() {
        for i in 0..=50 {
            let lambda = i as f64;
            assert!((conical_p(lambda, 1.0).unwrap() - 1.0).abs() < 1e-13);
        }
        let z = conical_p_complex(3.0, Complex64::new(1.0, 0.0)).unwrap();
        assert!((z - 1.0).norm() < 1e-13);
    }

    #[test]
    fn even_in_lambda() {
        for &x in &[1.2, 4.0, 70.0] {
            let a = conical_p(2.3, x).unwrap();
            let b = conical_p(-2.3, x).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(conical_p(1.0, 0.5).is_err());
        assert!(conical_p(f64::NAN, 2.0).is_err());
        assert!(conical_p_complex(1.0, Complex64::new(-0.1, 1.0)).is_err());
        assert!(conical_p_complex(1.0, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn node_budget_exceeded() {
        let err = conical_p(1e9, 3.0).unwrap_err();
        assert!(err.is_accuracy());
    }

    #[test]
    fn zonal_order_matches() {
        let p = conical_p(1.5, 2.0f64.cosh()).unwrap();
        let u = assoc_conical_u(0, 1.5, 2.0, 0.7).unwrap();
        assert!((u.re - p).abs() < 1e-13 && u.im.abs() < 1e-13);
    }

    #[test]
    fn origin_kills_higher_orders() {
        for n in [-3, -1, 1, 2, 5] {
            let u = assoc_conical_u(n, 2.0, 0.0, 0.4).unwrap();
            assert!(u.norm() < 1e-14, "n = {n}: {u}");
        }
    }

    #[test]
    fn batched_orders_agree() {
        let all = assoc_conical_u_all(4, 0.8, 1.3, 0.25).unwrap();
        for n in -4i64..=4 {
            let single = assoc_conical_u(n, 0.8, 1.3, 0.25).unwrap();
            assert!((all[(n + 4) as usize] - single).norm() < 1e-13);
        }
    }

    #[test]
    fn shared_grid_matches_fresh_grid() {
        let quad = ConicalQuad::real(9.0, 40.0, 0, DEFAULT_EPS).unwrap();
        for &lambda in &[0.0, 0.7, 5.5, 39.0] {
            let fresh = conical_p(lambda, 9.0).unwrap();
            assert!((quad.eval_real(lambda) - fresh).abs() < 1e-13);
        }
    }
}
