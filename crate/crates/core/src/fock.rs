//! Truncated number-basis linear algebra in the irrep k: coherent-state amplitudes,
//! ladder operators, density matrices and the identity-resolution check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiscPoint, HyperPoint};
use crate::quadrature::{integrate_disc, QuadSpec};
use crate::specfun::IrrepIndex;

/// Tail bound above which a truncation is reported as too short.
pub const TAIL_WARN: f64 = 1e-10;
/// Largest truncation the adaptive routines will choose.
pub const MAX_TRUNCATION: usize = 200_000;

/// Amplitudes c_m = ⟨k, k+m|ψ⟩ for m = 0..=M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector {
    k: IrrepIndex,
    amps: Vec<Complex64>,
    /// Bound on Σ_{m>M} |c_m|² of the untruncated state.
    tail: f64,
}

impl FockVector {
    pub fn new(k: IrrepIndex, amps: Vec<Complex64>, tail: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Shape("a Fock vector needs at least one amplitude".into()));
        }
        if amps.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) || !(tail >= 0.0) {
            return Err(Error::domain("FockVector", "amplitudes and tail must be finite"));
        }
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if norm > 1.0 + 1e-12 {
            return Err(Error::invariant("FockVector", format!("Σ|c_m|² = {norm} exceeds 1")));
        }
        Ok(Self { k, amps, tail })
    }

    /// The number state |k, k+m⟩ in a basis truncated at M ≥ m.
    pub fn number(k: IrrepIndex, m: usize, truncation: usize) -> Result<Self> {
        if m > truncation {
            return Err(Error::Shape(format!("level {m} beyond truncation {truncation}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); truncation + 1];
        amps[m] = Complex64::new(1.0, 0.0);
        Self::new(k, amps, 0.0)
    }

    pub fn k(&self) -> IrrepIndex {
        self.k
    }

    pub fn truncation(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Zero-padded copy with truncation M ≥ the current one.
    pub fn padded(&self, truncation: usize) -> Result<Self> {
        if truncation < self.truncation() {
            return Err(Error::Shape(format!(
                "cannot pad truncation {} down to {truncation}",
                self.truncation()
            )));
        }
        let mut amps = self.amps.clone();
        amps.resize(truncation + 1, Complex64::new(0.0, 0.0));
        Ok(Self { amps, ..self.clone() })
    }

    /// a·self + b·other, with the tails combined by the triangle inequality.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        check_pair(self, other)?;
        let amps: Vec<Complex64> = self.amps.iter().zip(&other.amps).map(|(x, y)| a * x + b * y).collect();
        let tail = (a.norm() * self.tail.sqrt() + b.norm() * other.tail.sqrt()).powi(2);
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if norm > 1.0 + 1e-9 {
            return Err(Error::invariant(
                "FockVector::combine",
                format!("Σ|c_m|² = {norm} exceeds 1"),
            ));
        }
        Ok(Self { k: self.k, amps, tail })
    }
}

fn check_pair(v: &FockVector, w: &FockVector) -> Result<()> {
    if v.k != w.k || v.amps.len() != w.amps.len() {
        return Err(Error::Shape(format!(
            "mismatched Fock vectors: (k = {}, M = {}) vs (k = {}, M = {})",
            v.k,
            v.truncation(),
            w.k,
            w.truncation()
        )));
    }
    Ok(())
}

/// |c_{m+1}|² / |c_m|² for the coherent amplitudes, which decreases in m when 2k ≥ 1.
fn coherent_ratio(k: IrrepIndex, r2: f64, m: usize) -> f64 {
    r2 * (m as f64 + k.twice_k() as f64) / (m as f64 + 1.0)
}

fn coherent_amplitudes(k: IrrepIndex, zeta: Complex64, truncation: usize) -> (Vec<Complex64>, f64) {
    let r2 = zeta.norm_sqr();
    let two_k = k.twice_k() as f64;
    let mut amps = Vec::with_capacity(truncation + 1);
    let mut c = Complex64::new((1.0 - r2).powf(0.5 * two_k), 0.0);
    amps.push(c);
    for m in 0..truncation {
        c = c * zeta * ((m as f64 + two_k) / (m as f64 + 1.0)).sqrt();
        amps.push(c);
    }
    let next = c * zeta * ((truncation as f64 + two_k) / (truncation as f64 + 1.0)).sqrt();
    let ratio = coherent_ratio(k, r2, truncation + 1);
    let tail = if r2 == 0.0 {
        0.0
    } else if ratio < 1.0 {
        next.norm_sqr() / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    (amps, tail)
}

/// c_m = (1 − |ζ|²)^k √(Γ(m + 2k)/(m! Γ(2k))) ζ^m for m = 0..=M.
///
/// A tail bound above [`TAIL_WARN`] is logged with the truncation that would meet it.
pub fn coherent_fock(k: IrrepIndex, zeta: &DiscPoint, truncation: usize) -> Result<FockVector> {
    let (amps, tail) = coherent_amplitudes(k, zeta.zeta(), truncation);
    if tail > TAIL_WARN {
        let need = required_truncation(k, zeta, TAIL_WARN);
        log::warn!(
            "coherent state truncated at M = {truncation} leaves tail {tail:.3e}; M = {} meets {TAIL_WARN:e}",
            need.map_or("none".to_string(), |m| m.to_string())
        );
    }
    FockVector::new(k, amps, tail)
}

/// Smallest M whose coherent-state tail bound is at most `tail`.
pub fn required_truncation(k: IrrepIndex, zeta: &DiscPoint, tail: f64) -> Option<usize> {
    let z = zeta.zeta();
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return Some(0);
    }
    let two_k = k.twice_k() as f64;
    // walk |c_m|² in the log domain
    let mut ln_c2 = two_k * (1.0 - r2).ln();
    for m in 0..MAX_TRUNCATION {
        ln_c2 += r2.ln() + ((m as f64 + two_k) / (m as f64 + 1.0)).ln();
        let ratio = coherent_ratio(k, r2, m + 1);
        if ratio < 1.0 && ln_c2 - (1.0 - ratio).ln() <= tail.ln() {
            return Some(m);
        }
    }
    None
}

/// Coherent amplitudes truncated just far enough for the tail to stay below `tail`.
pub fn coherent_fock_adaptive(k: IrrepIndex, zeta: &DiscPoint, tail: f64) -> Result<FockVector> {
    let m = required_truncation(k, zeta, tail).ok_or(Error::Accuracy {
        op: "coherent_fock",
        estimate: f64::INFINITY,
        tol: tail,
    })?;
    let (amps, t) = coherent_amplitudes(k, zeta.zeta(), m);
    FockVector::new(k, amps, t)
}

/// ⟨v|w⟩.
pub fn overlap(v: &FockVector, w: &FockVector) -> Result<Complex64> {
    check_pair(v, w)?;
    Ok(v.amps.iter().zip(&w.amps).map(|(a, b)| a.conj() * b).sum())
}

/// One of the truncated generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    K0,
    KPlus,
    KMinus,
}

/// K0, K+ and K− on span{|k, k+m⟩ : m ≤ M}, as dense row-major matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderOps {
    k: IrrepIndex,
    dim: usize,
    pub k0: Vec<f64>,
    pub kplus: Vec<f64>,
    pub kminus: Vec<f64>,
}

/// K+|m⟩ = √((m + 1)(m + 2k)) |m + 1⟩, K0|m⟩ = (k + m)|m⟩, K− = K+ᵀ.
pub fn ladder(k: IrrepIndex, truncation: usize) -> Result<LadderOps> {
    if truncation < 1 {
        return Err(Error::Shape("ladder operators need M ≥ 1".into()));
    }
    let dim = truncation + 1;
    let mut k0 = vec![0.0; dim * dim];
    let mut kplus = vec![0.0; dim * dim];
    let mut kminus = vec![0.0; dim * dim];
    for m in 0..dim {
        k0[m * dim + m] = k.value() + m as f64;
        if m + 1 < dim {
            let e = ((m as f64 + 1.0) * (m as f64 + k.twice_k() as f64)).sqrt();
            kplus[(m + 1) * dim + m] = e;
            kminus[m * dim + m + 1] = e;
        }
    }
    Ok(LadderOps {
        k,
        dim,
        k0,
        kplus,
        kminus,
    })
}

impl LadderOps {
    pub fn k(&self) -> IrrepIndex {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: Generator) -> &[f64] {
        match g {
            Generator::K0 => &self.k0,
            Generator::KPlus => &self.kplus,
            Generator::KMinus => &self.kminus,
        }
    }

    pub fn entry(&self, g: Generator, row: usize, col: usize) -> f64 {
        self.matrix(g)[row * self.dim + col]
    }

    /// (AB)_{ij} for two generators.
    pub fn product(&self, a: Generator, b: Generator) -> Vec<f64> {
        let (a, b, n) = (self.matrix(a), self.matrix(b), self.dim);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                let x = a[i * n + l];
                if x != 0.0 {
                    for j in 0..n {
                        out[i * n + j] += x * b[l * n + j];
                    }
                }
            }
        }
        out
    }

    /// Largest |[K+, K−] + 2K0| entry over rows and columns 1..M−1.
    pub fn commutator_defect(&self) -> f64 {
        let n = self.dim;
        let pm = self.product(Generator::KPlus, Generator::KMinus);
        let mp = self.product(Generator::KMinus, Generator::KPlus);
        let mut worst: f64 = 0.0;
        for i in 1..n.saturating_sub(1) {
            for j in 1..n.saturating_sub(1) {
                let c = pm[i * n + j] - mp[i * n + j] + 2.0 * self.k0[i * n + j];
                worst = worst.max(c.abs());
            }
        }
        worst
    }
}

/// ⟨v|G|v⟩ for a generator of the truncated basis.
pub fn expectation(ops: &LadderOps, g: Generator, v: &FockVector) -> Result<Complex64> {
    if ops.k != v.k || ops.dim != v.amps.len() {
        return Err(Error::Shape(format!(
            "operator (k = {}, M = {}) does not match vector (k = {}, M = {})",
            ops.k,
            ops.dim - 1,
            v.k,
            v.truncation()
        )));
    }
    let a = ops.matrix(g);
    let n = ops.dim;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let x = a[i * n + j];
            if x != 0.0 {
                row += v.amps[j] * x;
            }
        }
        acc += v.amps[i].conj() * row;
    }
    Ok(acc)
}

/// A density matrix ρ_mn = ⟨k, k+m|ρ|k, k+n⟩ on the truncated basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    rho: Vec<Vec<Complex64>>,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(r: DensityRepr) -> Result<Self> {
        Self::from_rows(&r.rho)
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(d: DensityMatrix) -> Self {
        DensityRepr { rho: d.rows() }
    }
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity, each to 1e−10.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "density matrix needs {dim}×{dim} entries, got {}",
                entries.len()
            )));
        }
        let at = |i: usize, j: usize| entries[i * dim + j];
        for i in 0..dim {
            for j in 0..dim {
                if (at(i, j) - at(j, i).conj()).norm() > 1e-10 {
                    return Err(Error::invariant(
                        "DensityMatrix",
                        format!("not hermitian at ({i}, {j})"),
                    ));
                }
            }
        }
        let trace: f64 = (0..dim).map(|i| at(i, i).re).sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::invariant("DensityMatrix", format!("trace {trace} ≠ 1")));
        }
        if !positive_semidefinite(dim, &entries, 1e-10) {
            return Err(Error::invariant("DensityMatrix", "not positive semidefinite"));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("density matrix rows must form a square".into()));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(v: &FockVector) -> Result<Self> {
        let n = v.amps.len();
        let norm = v.norm_sqr();
        let entries = (0..n * n)
            .map(|idx| v.amps[idx / n] * v.amps[idx % n].conj() / norm)
            .collect();
        Self::new(n, entries)
    }

    /// Σ p_i |i⟩⟨i|.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        let n = probabilities.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &p) in probabilities.iter().enumerate() {
            entries[i * n + i] = Complex64::new(p, 0.0);
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest level M = dim − 1.
    pub fn truncation(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.dim + n]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// ⟨ψ|ρ|ψ⟩ over the common levels.
    pub fn quadratic_form(&self, amps: &[Complex64]) -> Complex64 {
        let n = self.dim.min(amps.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..n {
            for l in 0..n {
                acc += amps[m].conj() * self.get(m, l) * amps[l];
            }
        }
        acc
    }
}

/// Cholesky of ρ + δ·I with pivots allowed down to −δ.
fn positive_semidefinite(dim: usize, a: &[Complex64], tol: f64) -> bool {
    let shift = tol * dim as f64;
    let mut l = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let mut d = a[j * dim + j].re + shift;
        for p in 0..j {
            d -= l[j * dim + p].norm_sqr();
        }
        if d < 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * dim + j] = Complex64::new(d, 0.0);
        for i in j + 1..dim {
            let mut s = a[i * dim + j];
            for p in 0..j {
                s -= l[i * dim + p] * l[j * dim + p].conj();
            }
            l[i * dim + j] = if d > 0.0 { s / d } else { Complex64::new(0.0, 0.0) };
        }
    }
    true
}

/// max_{m,n ≤ M} |(2k − 1)/π ∫ dμ ⟨m|ζ⟩⟨ζ|n⟩ − δ_mn| over the disc quadrature.
pub fn identity_resolution_check(k: IrrepIndex, truncation: usize, spec: &QuadSpec) -> Result<f64> {
    if k.is_limit() {
        return Err(Error::domain("identity_resolution_check", "needs k > 1/2"));
    }
    let dim = truncation + 1;
    let pref = k.dim_factor() / std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    let mut worst_at = (0, 0);
    for m in 0..dim {
        for n in m..dim {
            let integrand = |p: HyperPoint| -> Complex64 {
                let (amps, _) = coherent_amplitudes(k, p.to_disc().zeta(), truncation);
                amps[m] * amps[n].conj()
            };
            let est = integrate_disc(integrand, spec)?;
            let want = if m == n { 1.0 } else { 0.0 };
            let dev = (est.value * pref - want).norm();
            if dev > worst {
                worst = dev;
                worst_at = (m, n);
            }
        }
    }
    if worst > 1e-3 {
        log::error!("identity resolution: worst deviation {worst:.3e} at (m, n) = {worst_at:?}");
        return Err(Error::Accuracy {
            op: "identity_resolution_check",
            estimate: worst,
            tol: 1e-3,
        });
    }
    Ok(worst)
}

/// k = (1 + |Δn|)/2 for the two-mode realization with excitation difference Δn.
pub fn k_from_delta_n(delta_n: i64) -> IrrepIndex {
    IrrepIndex::new(1 + delta_n.unsigned_abs() as u32).expect("2k ≥ 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(twice: u32) -> IrrepIndex {
        IrrepIndex::new(twice).unwrap()
    }

    #[test]
    fn origin_is_ground() {
        let v = coherent_fock(k(2), &DiscPoint::origin(), 5).unwrap();
        assert_eq!(v.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(v.amplitudes()[1..].iter().all(|c| c.norm() == 0.0));
        assert_eq!(v.tail(), 0.0);
    }

    #[test]
    fn first_amplitudes() {
        let z = DiscPoint::from_re_im(0.5, 0.0).unwrap();
        let v = coherent_fock(k(2), &z, 3).unwrap();
        assert!((v.amplitudes()[0].re - 0.75).abs() < 1e-15);
        assert!((v.amplitudes()[1].norm() - 0.75 * 2f64.sqrt() * 0.5).abs() < 1e-15);
    }

    #[test]
    fn adaptive_tail() {
        let z = DiscPoint::from_re_im(0.0, 0.9).unwrap();
        let v = coherent_fock_adaptive(k(3), &z, 1e-14).unwrap();
        assert!(v.tail() <= 1e-14);
        assert!((v.norm_sqr() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn ladder_entries() {
        let ops = ladder(k(2), 4).unwrap();
        assert!((ops.entry(Generator::KPlus, 1, 0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ops.entry(Generator::K0, 3, 3), 4.0);
        assert!(ops.commutator_defect() < 1e-12);
        assert!(ladder(k(2), 0).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = coherent_fock(k(2), &DiscPoint::origin(), 3).unwrap();
        let b = coherent_fock(k(2), &DiscPoint::origin(), 4).unwrap();
        let c = coherent_fock(k(4), &DiscPoint::origin(), 3).unwrap();
        assert!(matches!(overlap(&a, &b), Err(Error::Shape(_))));
        assert!(matches!(overlap(&a, &c), Err(Error::Shape(_))));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.5]).is_ok());
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.5, -0.5]).is_err());
        let off = Complex64::new(0.0, 0.1);
        let rows = vec![vec![Complex64::new(0.5, 0.0), off], vec![off, Complex64::new(0.5, 0.0)]];
        assert!(DensityMatrix::from_rows(&rows).is_err());
        let json = serde_json_roundtrip(&DensityMatrix::diagonal(&[0.25, 0.75]).unwrap());
        assert_eq!(json.get(1, 1).re, 0.75);
    }

    fn serde_json_roundtrip(d: &DensityMatrix) -> DensityMatrix {
        let repr: DensityRepr = d.clone().into();
        DensityMatrix::try_from(repr).unwrap()
    }

    #[test]
    fn two_mode_index() {
        assert_eq!(k_from_delta_n(0).twice_k(), 1);
        assert_eq!(k_from_delta_n(-3).value(), 2.0);
    }
}
