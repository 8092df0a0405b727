//! Wigner (and general s-ordered) symbols of coherent, cat, number and mixed states.
//!
//! All symbols are normalized so that (2k − 1)/π ∫ W dμ = 1. They are singular in the
//! limit k = 1/2, where every evaluator returns a domain error.

pub(crate) mod field;
pub(crate) mod radial;

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_fock, coherent_fock_adaptive, required_truncation, DensityMatrix, FockVector};
use crate::geometry::{cross_ratio_arg, DiscPoint, HyperPoint};
use crate::kernels::{ComplexKernel, KernelOrder, KernelTable};
use crate::quadrature::QuadSpec;
use crate::specfun::IrrepIndex;

pub use field::{evaluate_field, half_max_radius, FieldMeta, Grid, GridPoint, PhaseSpaceField};
use radial::{pair_index, shared_table, TableKind};

/// Largest Fock level with tabulated matrix elements.
pub const M_MAX: usize = 4;

/// Accuracy of the kernel tables behind every symbol, whatever the disc tolerance.
pub(crate) fn kernel_tol(spec: &QuadSpec) -> f64 {
    if spec.tol >= 1e-11 {
        1e-11
    } else {
        spec.tol.max(1e-14)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+" => Ok(Parity::Even),
            "odd" | "-" => Ok(Parity::Odd),
            _ => Err(Error::domain("Parity", format!("expected even or odd, got {s:?}"))),
        }
    }
}

/// The states with closed-form symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum StateSpec {
    Coherent {
        zeta0: DiscPoint,
    },
    Ground,
    /// (|ζ0⟩ ± |−ζ0⟩) normalized, with ζ0 = tanh(τ0/2) on the positive real axis.
    Cat {
        tau0: f64,
        parity: Parity,
    },
    Number {
        m: usize,
    },
    /// α|ζ0⟩ + β|ζ1⟩.
    Superposition {
        alpha: Complex64,
        beta: Complex64,
        zeta0: DiscPoint,
        zeta1: DiscPoint,
    },
    FockDensity {
        rho: DensityMatrix,
    },
}

impl StateSpec {
    pub fn name(&self) -> &'static str {
        match self {
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::Ground => "ground",
            StateSpec::Cat { .. } => "cat",
            StateSpec::Number { .. } => "number",
            StateSpec::Superposition { .. } => "superposition",
            StateSpec::FockDensity { .. } => "fock_density",
        }
    }

    pub fn validate(&self, k: IrrepIndex) -> Result<()> {
        match self {
            StateSpec::Cat { tau0, .. } => {
                if !(tau0.is_finite() && *tau0 > 0.0) {
                    return Err(Error::domain("StateSpec::Cat", format!("τ0 must be > 0, got {tau0}")));
                }
            }
            StateSpec::Number { m } if *m > M_MAX => {
                return Err(Error::Unsupported(format!(
                    "number state m = {m} exceeds the tabulated level {M_MAX}"
                )))
            }
            StateSpec::Superposition {
                alpha,
                beta,
                zeta0,
                zeta1,
            } => {
                let ov = coherent_overlap(k, zeta1, zeta0);
                let norm = alpha.norm_sqr() + beta.norm_sqr() + 2.0 * (alpha * beta.conj() * ov).re;
                if (norm - 1.0).abs() > 1e-8 {
                    return Err(Error::invariant(
                        "StateSpec::Superposition",
                        format!("⟨Ψ|Ψ⟩ = {norm}, expected 1"),
                    ));
                }
            }
            StateSpec::FockDensity { rho } if rho.truncation() > M_MAX => {
                return Err(Error::Unsupported(format!(
                    "density matrix truncated at {} exceeds the tabulated level {M_MAX}",
                    rho.truncation()
                )))
            }
            _ => {}
        }
        Ok(())
    }

    /// The normalized superposition of ζ0 and −ζ0 this cat stands for.
    pub fn cat_as_superposition(k: IrrepIndex, tau0: f64, parity: Parity) -> Result<StateSpec> {
        let zeta0 = HyperPoint::new(tau0, 0.0)?.to_disc();
        let zeta1 = DiscPoint::new(-zeta0.zeta())?;
        let c = cat_norm(k, tau0, parity) * FRAC_1_SQRT_2;
        Ok(StateSpec::Superposition {
            alpha: Complex64::new(c, 0.0),
            beta: Complex64::new(parity.sign() * c, 0.0),
            zeta0,
            zeta1,
        })
    }
}

/// ⟨ζ0|ζ1⟩ = (1 − |ζ0|²)^k (1 − |ζ1|²)^k / (1 − ζ̄0 ζ1)^{2k}.
pub fn coherent_overlap(k: IrrepIndex, zeta0: &DiscPoint, zeta1: &DiscPoint) -> Complex64 {
    let (a, b) = (zeta0.zeta(), zeta1.zeta());
    let kk = k.value();
    let num = ((1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr())).powf(kk);
    let den = (Complex64::new(1.0, 0.0) - a.conj() * b).powi(k.twice_k() as i32);
    num / den
}

/// N with N² = 1/(1 ± cosh^{−2k} τ0), normalizing (|ζ0⟩ ± |−ζ0⟩)/√2.
pub fn cat_norm(k: IrrepIndex, tau0: f64, parity: Parity) -> f64 {
    let overlap = tau0.cosh().powf(-(k.twice_k() as f64));
    (1.0 + parity.sign() * overlap).powf(-0.5)
}

fn check_k(op: &'static str, k: IrrepIndex) -> Result<()> {
    if k.is_limit() {
        return Err(Error::domain(
            op,
            "symbols carry a 1/(2k − 1) factor and diverge at k = 1/2",
        ));
    }
    Ok(())
}

fn real_table(k: IrrepIndex, s: KernelOrder, spec: &QuadSpec) -> Result<Arc<KernelTable>> {
    KernelTable::shared(k, s, kernel_tol(spec))
}

/// g_s at a complex argument, through the real table whenever the argument is real.
fn kernel_at(table: &KernelTable, complex: &ComplexKernel, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= 1.0 {
        return Ok(Complex64::new(table.eval(z.re)?, 0.0));
    }
    complex.eval(z)
}

/// W = (2/(2k − 1)) g_plus(n(ζ0)·n(ζ)).
pub fn wigner_coherent(k: IrrepIndex, zeta0: &DiscPoint, p: &HyperPoint, spec: &QuadSpec) -> Result<f64> {
    symbol(k, KernelOrder::WIGNER, &StateSpec::Coherent { zeta0: *zeta0 }, p, spec)
}

/// The lowest-weight state |k, k⟩, a function of τ alone.
pub fn wigner_ground(k: IrrepIndex, tau: f64, spec: &QuadSpec) -> Result<f64> {
    let p = HyperPoint::new(tau, 0.0)?;
    symbol(k, KernelOrder::WIGNER, &StateSpec::Ground, &p, spec)
}

/// Symbol of |ζ0⟩⟨ζ1|.
pub fn wigner_offdiag(
    k: IrrepIndex,
    zeta0: &DiscPoint,
    zeta1: &DiscPoint,
    p: &HyperPoint,
    spec: &QuadSpec,
) -> Result<Complex64> {
    offdiag_symbol(k, KernelOrder::WIGNER, zeta0, zeta1, p, spec)
}

/// s-ordered symbol of |ζ0⟩⟨ζ1|.
pub fn offdiag_symbol(
    k: IrrepIndex,
    s: KernelOrder,
    zeta0: &DiscPoint,
    zeta1: &DiscPoint,
    p: &HyperPoint,
    spec: &QuadSpec,
) -> Result<Complex64> {
    check_k("wigner_offdiag", k)?;
    let table = real_table(k, s, spec)?;
    let complex = ComplexKernel::shared(k, s, kernel_tol(spec))?;
    offdiag_with(k, &table, &complex, zeta0.zeta(), zeta1.zeta(), p)
}

fn offdiag_prefactor(k: IrrepIndex, a: Complex64, b: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let num = 2.0 * ((1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr())).powf(k.value());
    num / (k.dim_factor() * (one - a * b.conj()).powi(k.twice_k() as i32))
}

fn offdiag_with(
    k: IrrepIndex,
    table: &KernelTable,
    complex: &ComplexKernel,
    a: Complex64,
    b: Complex64,
    p: &HyperPoint,
) -> Result<Complex64> {
    let x = if a == b {
        Complex64::new(p.cosh_distance(&DiscPoint::new(a)?.to_hyper()), 0.0)
    } else {
        cross_ratio_arg(p, a, b)
    };
    Ok(offdiag_prefactor(k, a, b) * kernel_at(table, complex, x)?)
}

/// The two brackets of the cat symbol: W = N² (incoherent ± interference).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatParts {
    /// (1/(2k − 1)) [g(cosh ξ+) + g(cosh ξ−)].
    pub incoherent: f64,
    /// (2/((2k − 1) cosh^{2k} τ0)) Re g(z).
    pub interference: f64,
}

impl CatParts {
    pub fn combine(&self, k: IrrepIndex, tau0: f64, parity: Parity) -> f64 {
        let n = cat_norm(k, tau0, parity);
        n * n * (self.incoherent + parity.sign() * self.interference)
    }
}

/// Evaluates the cat brackets; the interference term depends on (τ, |sinh τ sin φ|) only
/// and is memoized on that key.
struct CatEval {
    k: IrrepIndex,
    tau0: f64,
    table: Arc<KernelTable>,
    complex: Arc<ComplexKernel>,
    cache: Mutex<HashMap<(u64, u64), f64>>,
}

const CAT_CACHE_LIMIT: usize = 1 << 20;

impl CatEval {
    /// Process-wide evaluator per (k, s, τ0, tolerance); both parities share it.
    fn shared(k: IrrepIndex, s: KernelOrder, tau0: f64, spec: &QuadSpec) -> Result<Arc<Self>> {
        type Key = (u32, u64, u64, u64);
        static CATS: OnceLock<Mutex<HashMap<Key, Arc<CatEval>>>> = OnceLock::new();
        let key = (k.twice_k(), s.s().to_bits(), tau0.to_bits(), kernel_tol(spec).to_bits());
        let cats = CATS.get_or_init(Default::default);
        if let Some(c) = cats.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let cat = Arc::new(Self::new(k, s, tau0, spec)?);
        Ok(cats.lock().unwrap().entry(key).or_insert(cat).clone())
    }

    fn new(k: IrrepIndex, s: KernelOrder, tau0: f64, spec: &QuadSpec) -> Result<Self> {
        check_k("wigner_cat", k)?;
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::domain("wigner_cat", format!("τ0 must be > 0, got {tau0}")));
        }
        Ok(Self {
            k,
            tau0,
            table: real_table(k, s, spec)?,
            complex: ComplexKernel::shared(k, s, kernel_tol(spec))?,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn parts(&self, p: &HyperPoint) -> Result<CatParts> {
        let (tau, phi) = (p.tau(), p.phi());
        let plus = HyperPoint::new_unchecked(self.tau0, 0.0);
        let minus = HyperPoint::new_unchecked(self.tau0, PI);
        let gp = self.table.eval(p.cosh_distance(&plus))?;
        let gm = self.table.eval(p.cosh_distance(&minus))?;
        let y = (tau.sinh() * phi.sin()).abs();
        // low mantissa bits of y dropped; mirror points share a key
        let key = (tau.to_bits(), y.to_bits() >> 6);
        let cached = self.cache.lock().unwrap().get(&key).copied();
        let re_g = match cached {
            Some(v) => v,
            None => {
                let ch0 = self.tau0.cosh();
                let z = Complex64::new(tau.cosh() / ch0, -self.tau0.sinh() * y / ch0);
                let v = kernel_at(&self.table, &self.complex, z)?.re;
                let mut cache = self.cache.lock().unwrap();
                if cache.len() >= CAT_CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, v);
                v
            }
        };
        let d = self.k.dim_factor();
        Ok(CatParts {
            incoherent: (gp + gm) / d,
            interference: 2.0 * re_g / (d * self.tau0.cosh().powi(self.k.twice_k() as i32)),
        })
    }
}

/// Cat-state Wigner function.
pub fn wigner_cat(k: IrrepIndex, tau0: f64, parity: Parity, p: &HyperPoint, spec: &QuadSpec) -> Result<f64> {
    Ok(cat_parts(k, tau0, p, spec)?.combine(k, tau0, parity))
}

pub fn cat_parts(k: IrrepIndex, tau0: f64, p: &HyperPoint, spec: &QuadSpec) -> Result<CatParts> {
    CatEval::shared(k, KernelOrder::WIGNER, tau0, spec)?.parts(p)
}

/// Wigner function of |k, k+1⟩ from its spectral integral.
pub fn wigner_number_first(k: IrrepIndex, tau: f64, spec: &QuadSpec) -> Result<f64> {
    check_k("wigner_number_first", k)?;
    let table = shared_table(k, KernelOrder::WIGNER, kernel_tol(spec), TableKind::NumberFirst)?;
    Ok(table.eval(tau)?.0[0])
}

/// Symbol of |k, k+m⟩⟨k, k+n⟩ for m, n ≤ [`M_MAX`].
pub fn wigner_matrix_element(k: IrrepIndex, m: usize, n: usize, p: &HyperPoint, spec: &QuadSpec) -> Result<Complex64> {
    matrix_element_symbol(k, KernelOrder::WIGNER, m, n, p, spec)
}

pub fn matrix_element_symbol(
    k: IrrepIndex,
    s: KernelOrder,
    m: usize,
    n: usize,
    p: &HyperPoint,
    spec: &QuadSpec,
) -> Result<Complex64> {
    check_k("wigner_matrix_element", k)?;
    if m > M_MAX || n > M_MAX {
        return Err(Error::Unsupported(format!(
            "matrix element ({m}, {n}) beyond the tabulated level {M_MAX}"
        )));
    }
    let table = shared_table(k, s, kernel_tol(spec), TableKind::Matrix(M_MAX))?;
    let radial = table.eval(p.tau())?;
    let (hi, lo) = (m.max(n), m.min(n));
    let r = radial.0[pair_index(hi, lo)];
    Ok(Complex64::from_polar(r, (m as f64 - n as f64) * p.phi()))
}

/// Σ_mn ρ_mn W_mn, the symbol of ρ = Σ ρ_mn |m⟩⟨n|.
pub fn wigner_from_fock(k: IrrepIndex, rho: &DensityMatrix, p: &HyperPoint, spec: &QuadSpec) -> Result<f64> {
    symbol(
        k,
        KernelOrder::WIGNER,
        &StateSpec::FockDensity { rho: rho.clone() },
        p,
        spec,
    )
}

/// Q(ζ) = ⟨ζ|ρ|ζ⟩ from number-basis amplitudes.
///
/// With `truncation = None` the basis is cut where the coherent-state tails fall below
/// `tol`; a fixed truncation whose tail bound exceeds `tol` is an accuracy error.
pub fn q_symbol(k: IrrepIndex, state: &StateSpec, p: &HyperPoint, truncation: Option<usize>, tol: f64) -> Result<f64> {
    state.validate(k)?;
    let zeta = p.to_disc();
    // amplitude error ≤ √tail per vector; Q error ≤ 2(√t1 + √t2)
    let tail_goal = (tol / 4.0).powi(2);
    let labels: Vec<DiscPoint> = match state {
        StateSpec::Coherent { zeta0 } => vec![*zeta0],
        StateSpec::Cat { tau0, .. } => {
            let z0 = HyperPoint::new(*tau0, 0.0)?.to_disc();
            vec![z0, DiscPoint::new(-z0.zeta())?]
        }
        StateSpec::Superposition { zeta0, zeta1, .. } => vec![*zeta0, *zeta1],
        _ => vec![],
    };
    let m = match truncation {
        Some(m) => m,
        None => {
            let mut m = match state {
                StateSpec::Number { m } => *m,
                StateSpec::FockDensity { rho } => rho.truncation(),
                _ => 0,
            };
            for z in labels.iter().chain(std::iter::once(&zeta)) {
                let need = required_truncation(k, z, tail_goal).ok_or(Error::Accuracy {
                    op: "q_symbol",
                    estimate: f64::INFINITY,
                    tol,
                })?;
                m = m.max(need);
            }
            m
        }
    };
    let probe = coherent_fock(k, &zeta, m)?;
    let mut bound = 2.0 * probe.tail().sqrt();
    let psi: Option<FockVector> = match state {
        StateSpec::Coherent { zeta0 } => Some(coherent_fock(k, zeta0, m)?),
        StateSpec::Ground => Some(FockVector::number(k, 0, m)?),
        StateSpec::Number { m: level } => Some(FockVector::number(k, *level, m)?),
        StateSpec::Cat { tau0, parity } => {
            let z0 = labels[0];
            let a = coherent_fock(k, &z0, m)?;
            let b = coherent_fock(k, &labels[1], m)?;
            let c = cat_norm(k, *tau0, *parity) * FRAC_1_SQRT_2;
            Some(a.combine(Complex64::new(c, 0.0), &b, Complex64::new(parity.sign() * c, 0.0))?)
        }
        StateSpec::Superposition {
            alpha,
            beta,
            zeta0,
            zeta1,
        } => {
            let a = coherent_fock(k, zeta0, m)?;
            let b = coherent_fock(k, zeta1, m)?;
            Some(a.combine(*alpha, &b, *beta)?)
        }
        StateSpec::FockDensity { .. } => None,
    };
    let q = match (&psi, state) {
        (Some(v), _) => {
            bound += 2.0 * v.tail().sqrt();
            let amp: Complex64 = probe
                .amplitudes()
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            amp.norm_sqr()
        }
        (None, StateSpec::FockDensity { rho }) => {
            if rho.truncation() > m {
                return Err(Error::Shape(format!(
                    "density matrix level {} beyond truncation {m}",
                    rho.truncation()
                )));
            }
            rho.quadratic_form(probe.amplitudes()).re
        }
        _ => unreachable!("every pure state has amplitudes"),
    };
    if bound > tol {
        return Err(Error::Accuracy {
            op: "q_symbol",
            estimate: bound,
            tol,
        });
    }
    Ok(q)
}

/// Number-basis amplitudes of a pure state, truncated for the given tail.
pub fn state_fock_vector(k: IrrepIndex, state: &StateSpec, tail: f64) -> Result<Option<FockVector>> {
    state.validate(k)?;
    let v = match state {
        StateSpec::Coherent { zeta0 } => coherent_fock_adaptive(k, zeta0, tail)?,
        StateSpec::Ground => FockVector::number(k, 0, 0)?,
        StateSpec::Number { m } => FockVector::number(k, *m, *m)?,
        StateSpec::Cat { tau0, parity } => {
            let s = StateSpec::cat_as_superposition(k, *tau0, *parity)?;
            return state_fock_vector(k, &s, tail);
        }
        StateSpec::Superposition {
            alpha,
            beta,
            zeta0,
            zeta1,
        } => {
            let m = required_truncation(k, zeta0, tail)
                .zip(required_truncation(k, zeta1, tail))
                .map(|(a, b)| a.max(b))
                .ok_or(Error::Accuracy {
                    op: "state_fock_vector",
                    estimate: f64::INFINITY,
                    tol: tail,
                })?;
            let a = coherent_fock(k, zeta0, m)?;
            let b = coherent_fock(k, zeta1, m)?;
            a.combine(*alpha, &b, *beta)?
        }
        StateSpec::FockDensity { .. } => return Ok(None),
    };
    Ok(Some(v))
}

/// Prepared evaluator of one state's s-ordered symbol; shares kernel tables process-wide.
pub struct SymbolEvaluator {
    k: IrrepIndex,
    s: KernelOrder,
    state: StateSpec,
    inner: Inner,
}

enum Inner {
    Coherent {
        table: Arc<KernelTable>,
        center: HyperPoint,
    },
    Ground {
        table: Arc<KernelTable>,
    },
    Cat {
        eval: Arc<CatEval>,
        tau0: f64,
        parity: Parity,
    },
    Matrix {
        table: Arc<radial::RadialTable>,
        // (m, n, ρ_mn) with m ≥ n
        terms: Vec<(usize, usize, Complex64)>,
    },
    Superposition {
        table: Arc<KernelTable>,
        complex: Arc<ComplexKernel>,
        alpha: Complex64,
        beta: Complex64,
        zeta0: Complex64,
        zeta1: Complex64,
    },
}

impl SymbolEvaluator {
    pub fn new(k: IrrepIndex, s: KernelOrder, state: &StateSpec, spec: &QuadSpec) -> Result<Self> {
        check_k("symbol", k)?;
        spec.validate()?;
        state.validate(k)?;
        if s.exponent() == 0.0 {
            return Err(Error::Unsupported(
                "P-symbols (s = 1) are δ-distributions for these states".into(),
            ));
        }
        let inner = match state {
            StateSpec::Coherent { zeta0 } => Inner::Coherent {
                table: real_table(k, s, spec)?,
                center: zeta0.to_hyper(),
            },
            StateSpec::Ground => Inner::Ground {
                table: real_table(k, s, spec)?,
            },
            StateSpec::Cat { tau0, parity } => Inner::Cat {
                eval: CatEval::shared(k, s, *tau0, spec)?,
                tau0: *tau0,
                parity: *parity,
            },
            StateSpec::Number { m } => Inner::Matrix {
                table: shared_table(k, s, kernel_tol(spec), TableKind::Matrix(M_MAX))?,
                terms: vec![(*m, *m, Complex64::new(1.0, 0.0))],
            },
            StateSpec::FockDensity { rho } => {
                let mut terms = Vec::new();
                for m in 0..rho.dim() {
                    for n in 0..=m {
                        let r = rho.get(m, n);
                        if r != Complex64::new(0.0, 0.0) {
                            terms.push((m, n, r));
                        }
                    }
                }
                Inner::Matrix {
                    table: shared_table(k, s, kernel_tol(spec), TableKind::Matrix(M_MAX))?,
                    terms,
                }
            }
            StateSpec::Superposition {
                alpha,
                beta,
                zeta0,
                zeta1,
            } => Inner::Superposition {
                table: real_table(k, s, spec)?,
                complex: ComplexKernel::shared(k, s, kernel_tol(spec))?,
                alpha: *alpha,
                beta: *beta,
                zeta0: zeta0.zeta(),
                zeta1: zeta1.zeta(),
            },
        };
        Ok(Self {
            k,
            s,
            state: state.clone(),
            inner,
        })
    }

    pub fn k(&self) -> IrrepIndex {
        self.k
    }

    pub fn order(&self) -> KernelOrder {
        self.s
    }

    pub fn state(&self) -> &StateSpec {
        &self.state
    }

    pub fn eval(&self, p: &HyperPoint) -> Result<f64> {
        let d = self.k.dim_factor();
        match &self.inner {
            Inner::Coherent { table, center } => Ok(2.0 / d * table.eval(p.cosh_distance(center))?),
            Inner::Ground { table } => Ok(2.0 / d * table.eval(p.tau().cosh())?),
            Inner::Cat { eval, tau0, parity } => Ok(eval.parts(p)?.combine(self.k, *tau0, *parity)),
            Inner::Matrix { table, terms } => {
                let radial = table.eval(p.tau())?;
                let mut acc = 0.0;
                for &(m, n, r) in terms {
                    let w = radial.0[pair_index(m, n)];
                    if m == n {
                        acc += r.re * w;
                    } else {
                        // ρ_mn W_mn + ρ_nm W_nm = 2 Re(ρ_mn e^{i(m−n)φ}) W
                        let phase = Complex64::from_polar(1.0, (m as f64 - n as f64) * p.phi());
                        acc += 2.0 * (r * phase).re * w;
                    }
                }
                Ok(acc)
            }
            Inner::Superposition {
                table,
                complex,
                alpha,
                beta,
                zeta0,
                zeta1,
            } => {
                let w0 = offdiag_with(self.k, table, complex, *zeta0, *zeta0, p)?.re;
                let w1 = offdiag_with(self.k, table, complex, *zeta1, *zeta1, p)?.re;
                let w01 = offdiag_with(self.k, table, complex, *zeta0, *zeta1, p)?;
                Ok(alpha.norm_sqr() * w0 + beta.norm_sqr() * w1 + 2.0 * (alpha * beta.conj() * w01).re)
            }
        }
    }
}

/// s-ordered symbol of a state at one point.
pub fn symbol(k: IrrepIndex, s: KernelOrder, state: &StateSpec, p: &HyperPoint, spec: &QuadSpec) -> Result<f64> {
    SymbolEvaluator::new(k, s, state, spec)?.eval(p)
}
