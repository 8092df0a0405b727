//! Command-line flags, the JSON config file, and their resolution into a run.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperwigner::{DiscPoint, Grid, HamiltonianSpec, IrrepIndex, KernelOrder, Parity, QuadSpec, StateSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hyperwigner",
    version,
    about = "Phase-space symbols of SU(1,1) states on the Poincaré disc"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a symbol on a polar (τ, φ) grid.
    Grid(Flags),
    /// Reproduce one of the disc figures.
    Figure {
        name: FigureName,
        #[command(flatten)]
        flags: Flags,
    },
    /// Evaluate a state along a Hamiltonian flow, one file per time.
    Evolve(Flags),
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Report path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every check, not only failures.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Ppm,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Ppm => "ppm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Polar,
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    Compact,
    Noncompact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigureName::Fig1a => "fig1a",
            FigureName::Fig1b => "fig1b",
            FigureName::Fig2a => "fig2a",
            FigureName::Fig2b => "fig2b",
            FigureName::Fig3a => "fig3a",
            FigureName::Fig3b => "fig3b",
        };
        f.write_str(s)
    }
}

/// A complex number written as `RE,IM`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(ComplexArg(Complex64::new(parse(re)?, parse(im)?)))
    }
}

/// Flags shared by the field-producing commands. Unset flags fall back to the config file,
/// then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Bargmann index k (half-integer ≥ 1).
    #[arg(long)]
    pub k: Option<f64>,
    /// ground, coherent, cat or number.
    #[arg(long)]
    pub state: Option<String>,
    /// Ordering parameter s ∈ [−1, 1]; 0 is the Wigner symbol, −1 the Q symbol.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Number-state index m.
    #[arg(long)]
    pub m: Option<usize>,
    /// Coherent-state label ζ0 as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta0: Option<ComplexArg>,
    /// Cat-state separation τ0.
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long, value_parser = ["even", "odd"])]
    pub parity: Option<String>,
    #[arg(long, value_enum)]
    pub hamiltonian: Option<HamiltonianKind>,
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<f64>,
    /// Comma-separated evolution times.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Polar grids: number of radii. Disc grids: pixels per side.
    #[arg(long)]
    pub n_tau: Option<usize>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    /// Polar grids: largest radius. Disc grids: radius tanh(τ_max/2) of the disc window.
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long, value_enum)]
    pub grid: Option<GridKind>,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Plain-text P2 images instead of binary P5.
    #[arg(long)]
    pub plain: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A state in the config file: a name, or a full state object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateEntry {
    Name(String),
    Spec(StateSpec),
}

/// Contents of `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<f64>,
    pub state: Option<StateEntry>,
    pub s: Option<f64>,
    pub m: Option<usize>,
    pub zeta0: Option<[f64; 2]>,
    pub tau0: Option<f64>,
    pub parity: Option<Parity>,
    pub hamiltonian: Option<HamiltonianKind>,
    pub chi: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub n_tau: Option<usize>,
    pub n_phi: Option<usize>,
    pub tau_max: Option<f64>,
    pub grid: Option<GridKind>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub plain: Option<bool>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

pub const DEFAULT_N_TAU: usize = 64;
pub const DEFAULT_N_PHI: usize = 64;
pub const DEFAULT_TAU_MAX: f64 = 3.0;
pub const DEFAULT_PIXELS: usize = 128;
pub const DEFAULT_TOL: f64 = 1e-6;

/// A fully resolved run of a field command.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub k: IrrepIndex,
    pub s: KernelOrder,
    pub state: StateSpec,
    pub grid: Grid,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    pub format: Format,
    pub plain: bool,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn quad(&self) -> QuadSpec {
        QuadSpec::with_tol(self.tol)
    }
}

/// Parameters after merging flags over the config file.
struct Merged {
    flags: Flags,
    state_object: Option<StateSpec>,
    parity: Option<Parity>,
}

fn merge(flags: &Flags) -> Result<Merged, CliError> {
    let file = match &flags.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let (state_name, state_object) = match file.state {
        Some(StateEntry::Name(n)) => (Some(n), None),
        Some(StateEntry::Spec(s)) => (Some(s.name().to_string()), Some(s)),
        None => (None, None),
    };
    let parity = match &flags.parity {
        Some(p) => Some(parse_parity(p)?),
        None => file.parity,
    };
    let f = flags.clone();
    let merged = Flags {
        k: f.k.or(file.k),
        state: f.state.clone().or(state_name),
        s: f.s.or(file.s),
        m: f.m.or(file.m),
        zeta0: f
            .zeta0
            .or(file.zeta0.map(|[re, im]| ComplexArg(Complex64::new(re, im)))),
        tau0: f.tau0.or(file.tau0),
        parity: None,
        hamiltonian: f.hamiltonian.or(file.hamiltonian),
        chi: f.chi.or(file.chi),
        times: f.times.or(file.times),
        n_tau: f.n_tau.or(file.n_tau),
        n_phi: f.n_phi.or(file.n_phi),
        tau_max: f.tau_max.or(file.tau_max),
        grid: f.grid.or(file.grid),
        tol: f.tol.or(file.tol),
        format: f.format.or(file.format),
        plain: f.plain || file.plain.unwrap_or(false),
        out: f.out.or(file.out),
        config: f.config,
    };
    // a state object only seeds parameters when the flags keep its variant
    let state_object = state_object.filter(|s| flags.state.as_deref().is_none_or(|n| n == s.name()));
    Ok(Merged {
        flags: merged,
        state_object,
        parity,
    })
}

fn parse_parity(p: &str) -> Result<Parity, CliError> {
    match p {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(CliError::Usage(format!("parity must be even or odd, got {p:?}"))),
    }
}

fn disc_point(z: Complex64) -> Result<DiscPoint, CliError> {
    DiscPoint::new(z).map_err(CliError::from)
}

fn build_state(m: &Merged, default: &str) -> Result<StateSpec, CliError> {
    let f = &m.flags;
    let name = f.state.as_deref().unwrap_or(default);
    let base = m.state_object.as_ref();
    let state = match name {
        "ground" => StateSpec::Ground,
        "coherent" => {
            let zeta0 = match (f.zeta0, base) {
                (Some(z), _) => disc_point(z.0)?,
                (None, Some(StateSpec::Coherent { zeta0 })) => *zeta0,
                _ => disc_point(Complex64::new(0.5, 0.0))?,
            };
            StateSpec::Coherent { zeta0 }
        }
        "cat" => {
            let (t, p) = match base {
                Some(StateSpec::Cat { tau0, parity }) => (Some(*tau0), Some(*parity)),
                _ => (None, None),
            };
            StateSpec::Cat {
                tau0: f.tau0.or(t).unwrap_or(1.0),
                parity: m.parity.or(p).unwrap_or(Parity::Even),
            }
        }
        "number" => {
            let b = match base {
                Some(StateSpec::Number { m }) => Some(*m),
                _ => None,
            };
            StateSpec::Number {
                m: f.m.or(b).unwrap_or(1),
            }
        }
        other => match base {
            Some(s) if s.name() == other => s.clone(),
            _ => return Err(CliError::Usage(format!(
                "unknown state {other:?}; expected ground, coherent, cat or number (other states need a config object)"
            ))),
        },
    };
    Ok(state)
}

fn irrep(k: f64) -> Result<IrrepIndex, CliError> {
    IrrepIndex::from_f64(k).map_err(CliError::from)
}

fn order(s: f64) -> Result<KernelOrder, CliError> {
    KernelOrder::new(s).map_err(CliError::from)
}

fn tolerance(tol: Option<f64>) -> Result<f64, CliError> {
    let tol = tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

fn polar_grid(f: &Flags) -> Result<Grid, CliError> {
    let n_tau = f.n_tau.unwrap_or(DEFAULT_N_TAU);
    let tau_max = f.tau_max.unwrap_or(DEFAULT_TAU_MAX);
    // a single ring at τ = 0 is one point
    let n_phi = if n_tau == 1 && tau_max == 0.0 {
        1
    } else {
        f.n_phi.unwrap_or(DEFAULT_N_PHI)
    };
    Grid::polar(n_tau, n_phi, tau_max).map_err(CliError::from)
}

fn disc_grid(f: &Flags) -> Result<Grid, CliError> {
    let n = f.n_tau.unwrap_or(DEFAULT_PIXELS);
    let radius = match f.tau_max {
        Some(t) => (0.5 * t).tanh(),
        None => 0.95,
    };
    Grid::disc(n, radius).map_err(CliError::from)
}

fn grid_of(f: &Flags, default: GridKind) -> Result<Grid, CliError> {
    match f.grid.unwrap_or(default) {
        GridKind::Polar => polar_grid(f),
        GridKind::Disc => disc_grid(f),
    }
}

fn out_path(f: &Flags, stem: &str, format: Format) -> PathBuf {
    f.out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{stem}.{}", format.extension())))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    command: &str,
    m: &Merged,
    state: StateSpec,
    k: f64,
    grid: Grid,
    hamiltonian: Option<HamiltonianSpec>,
    times: Vec<f64>,
    stem: &str,
) -> Result<RunConfig, CliError> {
    let f = &m.flags;
    let k = irrep(k)?;
    state.validate(k)?;
    let format = f.format.unwrap_or(Format::Csv);
    Ok(RunConfig {
        command: command.to_string(),
        k,
        s: order(f.s.unwrap_or(0.0))?,
        state,
        grid,
        tol: tolerance(f.tol)?,
        hamiltonian,
        times,
        format,
        plain: f.plain,
        out: out_path(f, stem, format),
    })
}

pub fn grid_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let m = merge(flags)?;
    let state = build_state(&m, "ground")?;
    let grid = grid_of(&m.flags, GridKind::Polar)?;
    finish(
        "grid",
        &m,
        state,
        m.flags.k.unwrap_or(1.0),
        grid,
        None,
        Vec::new(),
        "grid",
    )
}

/// The parameters of each figure; --k, --m, --tau0, --s and grid flags override them.
pub fn figure_config(name: FigureName, flags: &Flags) -> Result<RunConfig, CliError> {
    let mut m = merge(flags)?;
    if flags.state.is_some() {
        return Err(CliError::Usage(
            "figures fix their state; --state is not accepted".into(),
        ));
    }
    m.state_object = None;
    let (state, k_default) = match name {
        FigureName::Fig1a => ("ground", 1.0),
        FigureName::Fig1b => ("ground", 5.0),
        FigureName::Fig2a | FigureName::Fig2b => {
            m.parity = Some(if name == FigureName::Fig2a {
                Parity::Even
            } else {
                Parity::Odd
            });
            ("cat", 5.0)
        }
        FigureName::Fig3a | FigureName::Fig3b => {
            if m.flags.m.is_none() {
                m.flags.m = Some(if name == FigureName::Fig3a { 1 } else { 2 });
            }
            ("number", 1.0)
        }
    };
    m.flags.state = Some(state.to_string());
    let state = build_state(&m, state)?;
    let grid = disc_grid(&m.flags)?;
    let stem = name.to_string();
    finish(
        "figure",
        &m,
        state,
        m.flags.k.unwrap_or(k_default),
        grid,
        None,
        Vec::new(),
        &stem,
    )
}

pub fn evolve_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let m = merge(flags)?;
    let state = build_state(&m, "coherent")?;
    let grid = grid_of(&m.flags, GridKind::Polar)?;
    let chi = m.flags.chi.unwrap_or(1.0);
    let h = match m.flags.hamiltonian.unwrap_or(HamiltonianKind::Compact) {
        HamiltonianKind::Compact => HamiltonianSpec::Compact { chi },
        HamiltonianKind::Noncompact => HamiltonianSpec::Noncompact { chi },
    };
    h.validate()?;
    let times = m.flags.times.clone().unwrap_or_else(|| vec![0.0]);
    if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Usage("--times must be a list of finite numbers".into()));
    }
    finish(
        "evolve",
        &m,
        state,
        m.flags.k.unwrap_or(1.0),
        grid,
        Some(h),
        times,
        "evolve",
    )
}
