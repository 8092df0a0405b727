//! Tables of radial spectral integrals ∫ λ tanh(πλ) Φ_k^e(λ) p(iλ) R_d^λ(τ) dλ, where R_d is
//! the radial part of the associated harmonic of order d and p a real polynomial.
//! Number-state and matrix-element symbols are finite sums of these.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{conical_eps, ChebTable, KernelOrder, RuleCache, TABLE_PANEL, TABLE_XI_MAX};
use crate::quadrature::{spectral_window, QuadValue};
use crate::specfun::conical::ConicalQuad;
use crate::specfun::IrrepIndex;

/// Largest number of targets one table carries.
pub(crate) const MAX_TARGETS: usize = 16;

/// Fixed-size vector of target values; a table row interpolates as one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Radials(pub [f64; MAX_TARGETS]);

impl Zero for Radials {
    fn zero() -> Self {
        Radials([0.0; MAX_TARGETS])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }
}

impl Add for Radials {
    type Output = Self;

    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

impl Sub for Radials {
    type Output = Self;

    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a -= b;
        }
        self
    }
}

impl Mul<f64> for Radials {
    type Output = Self;

    fn mul(mut self, x: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= x;
        }
        self
    }
}

impl QuadValue for Radials {
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// scale · Re ∫ λ tanh(πλ) Φ_k^e(λ) Σ_p poly[p] (iλ)^p R_d^λ(τ) dλ.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RadialTarget {
    pub d: usize,
    pub poly: Vec<f64>,
    pub scale: f64,
}

pub(crate) struct RadialTable {
    targets: Vec<RadialTarget>,
    tol: f64,
    cutoff: f64,
    pmax: usize,
    dmax: usize,
    rules: RuleCache,
    table: ChebTable<Radials>,
}

impl RadialTable {
    pub fn new(k: IrrepIndex, s: KernelOrder, tol: f64, targets: Vec<RadialTarget>) -> Result<Self> {
        if s.exponent() == 0.0 {
            return Err(Error::Unsupported("the s = 1 δ-kernel has no pointwise values".into()));
        }
        if targets.is_empty() || targets.len() > MAX_TARGETS {
            return Err(Error::Shape(format!(
                "1..={MAX_TARGETS} radial targets, got {}",
                targets.len()
            )));
        }
        let pmax = targets
            .iter()
            .map(|t| t.poly.len().saturating_sub(1))
            .max()
            .unwrap_or(0);
        let dmax = targets.iter().map(|t| t.d).max().unwrap_or(0);
        let window = spectral_window(k, s.exponent(), 0.0, pmax as f64, tol)?;
        Ok(Self {
            targets,
            tol,
            cutoff: window.cutoff,
            pmax,
            dmax,
            rules: RuleCache::new(k, s.exponent(), window.cutoff),
            table: ChebTable::new(TABLE_XI_MAX, TABLE_PANEL),
        })
    }

    pub fn direct(&self, tau: f64) -> Result<Radials> {
        let eps = conical_eps(self.tol);
        let quad = ConicalQuad::from_tau(tau, self.cutoff, self.dmax, eps)?;
        let rule = self.rules.get(tau, eps);
        let moments = quad.radial_moments(rule.dl, &rule.weights, self.pmax, self.dmax)?;
        let np = self.pmax + 1;
        let mut out = Radials::zero();
        for (slot, t) in out.0.iter_mut().zip(&self.targets) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, &c) in t.poly.iter().enumerate() {
                let ip = match p % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                acc += ip * c * moments[t.d * np + p];
            }
            *slot = t.scale * acc.re;
        }
        Ok(out)
    }

    pub fn eval(&self, tau: f64) -> Result<Radials> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::domain("RadialTable", format!("τ must be ≥ 0, got {tau}")));
        }
        let hit = self
            .table
            .eval_with(tau, |nodes| nodes.par_iter().map(|&t| self.direct(t)).collect())?;
        match hit {
            Some(v) => Ok(v),
            None => self.direct(tau),
        }
    }
}

/// Polynomial product on coefficient vectors.
fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// (a + bν)(a + 1 + bν)⋯(a + j − 1 + bν) as a polynomial in ν.
fn pochhammer_poly(a: f64, b: f64, j: usize) -> Vec<f64> {
    (0..j).fold(vec![1.0], |acc, i| poly_mul(&acc, &[a + i as f64, b]))
}

/// p(ν) rewritten in μ = ν + 1/2.
fn shift_half(p: &[f64]) -> Vec<f64> {
    // ν = μ − 1/2, expand each power binomially
    let mut out = vec![0.0; p.len()];
    for (q, &c) in p.iter().enumerate() {
        let mut binom = 1.0;
        for r in 0..=q {
            // C(q, r) μ^r (−1/2)^{q−r}
            out[r] += c * binom * (-0.5f64).powi((q - r) as i32);
            binom = binom * (q - r) as f64 / (r + 1) as f64;
        }
    }
    out
}

/// Σ_j (2k − ν − 1)_j (ν + 1)_{m−j} (ν + 1)_{n−j} / (j! (m − j)! (n − j)!), in powers of ν.
pub(crate) fn s_poly(k: IrrepIndex, m: usize, n: usize) -> Vec<f64> {
    let two_k = k.twice_k() as f64;
    let fact = |x: usize| (1..=x).fold(1.0, |a, i| a * i as f64);
    let mut total = vec![0.0; m + n + 1];
    for j in 0..=m.min(n) {
        let t = poly_mul(
            &poly_mul(
                &pochhammer_poly(two_k - 1.0, -1.0, j),
                &pochhammer_poly(1.0, 1.0, m - j),
            ),
            &pochhammer_poly(1.0, 1.0, n - j),
        );
        let w = 1.0 / (fact(j) * fact(m - j) * fact(n - j));
        for (slot, c) in total.iter_mut().zip(t) {
            *slot += w * c;
        }
    }
    total
}

/// √(Γ(m + 2k)/(m! Γ(2k))).
pub(crate) fn fock_norm(k: IrrepIndex, m: usize) -> f64 {
    let two_k = k.twice_k() as f64;
    (0..m).fold(1.0, |a, i| a * ((i as f64 + two_k) / (i as f64 + 1.0)).sqrt())
}

/// Index of the pair (m, n), m ≥ n, in the matrix-element table.
pub(crate) fn pair_index(m: usize, n: usize) -> usize {
    m * (m + 1) / 2 + n
}

fn matrix_targets(k: IrrepIndex, mmax: usize) -> Vec<RadialTarget> {
    let mut out = Vec::new();
    for m in 0..=mmax {
        for n in 0..=m {
            out.push(RadialTarget {
                d: m - n,
                poly: shift_half(&s_poly(k, m, n)),
                scale: 2.0 / (k.dim_factor() * fock_norm(k, m) * fock_norm(k, n)),
            });
        }
    }
    out
}

fn number_first_target(k: IrrepIndex) -> RadialTarget {
    let kk = k.value();
    RadialTarget {
        d: 0,
        // 2k − 1/4 − λ² = 2k − 1/4 + (iλ)²
        poly: vec![2.0 * kk - 0.25, 0.0, 1.0],
        scale: 1.0 / (k.dim_factor() * kk),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum TableKind {
    Matrix(usize),
    NumberFirst,
}

/// Process-wide radial tables keyed by (k, s, tol, kind).
pub(crate) fn shared_table(k: IrrepIndex, s: KernelOrder, tol: f64, kind: TableKind) -> Result<Arc<RadialTable>> {
    type Key = (u32, u64, u64, TableKind);
    static TABLES: OnceLock<RwLock<HashMap<Key, Arc<RadialTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let key = (k.twice_k(), s.s().to_bits(), tol.to_bits(), kind);
    if let Some(t) = tables.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let targets = match kind {
        TableKind::Matrix(mmax) => matrix_targets(k, mmax),
        TableKind::NumberFirst => vec![number_first_target(k)],
    };
    let table = Arc::new(RadialTable::new(k, s, tol, targets)?);
    Ok(tables.write().unwrap().entry(key).or_insert(table).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(twice: u32) -> IrrepIndex {
        IrrepIndex::new(twice).unwrap()
    }

    #[test]
    fn s_poly_low_orders() {
        // S_00 = 1, S_10 = ν + 1, S_11 = ν² + ν + 2k
        assert_eq!(s_poly(k(3), 0, 0), vec![1.0]);
        assert_eq!(s_poly(k(3), 1, 0), vec![1.0, 1.0]);
        let s11 = s_poly(k(3), 1, 1);
        assert!((s11[0] - 3.0).abs() < 1e-15 && (s11[1] - 1.0).abs() < 1e-15 && (s11[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_shift() {
        // ν² + ν + 2k = μ² + 2k − 1/4
        let p = shift_half(&s_poly(k(2), 1, 1));
        assert!((p[0] - 1.75).abs() < 1e-15 && p[1].abs() < 1e-15 && (p[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norms_and_indices() {
        assert!((fock_norm(k(2), 1) - 2f64.sqrt()).abs() < 1e-15);
        assert!((fock_norm(k(4), 2) - 10f64.sqrt()).abs() < 1e-14);
        assert_eq!(pair_index(0, 0), 0);
        assert_eq!(pair_index(4, 4), 14);
    }

    #[test]
    fn moments_match_pointwise_harmonics() {
        let table = RadialTable::new(
            k(2),
            KernelOrder::WIGNER,
            1e-11,
            vec![RadialTarget {
                d: 2,
                poly: vec![0.3, 0.0, 1.0],
                scale: 1.0,
            }],
        )
        .unwrap();
        let tau = 0.8;
        let got = table.direct(tau).unwrap().0[0];
        // plain Gauss–Legendre over λ with pointwise harmonics
        let rule = crate::quadrature::gauss_legendre(16);
        let mut want = 0.0;
        for i in 0..60 {
            let a = i as f64 * 0.5;
            for (lambda, w) in rule.mapped(a, a + 0.5) {
                let r = crate::specfun::assoc_conical_u(2, lambda, tau, 0.0).unwrap();
                let weight = lambda
                    * (std::f64::consts::PI * lambda).tanh()
                    * (0.5 * crate::specfun::ln_phi_k(k(2), lambda)).exp();
                want += w * weight * (0.3 - lambda * lambda) * r.re;
            }
        }
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}
