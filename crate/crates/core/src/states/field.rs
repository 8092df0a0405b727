//! Sampling grids and evaluated phase-space fields.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{StateSpec, SymbolEvaluator};
use crate::error::{Error, Result};
use crate::geometry::{DiscPoint, HyperPoint};
use crate::kernels::KernelOrder;
use crate::quadrature::QuadSpec;
use crate::specfun::IrrepIndex;

/// Where a field is sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    /// Tensor grid in (τ, φ), τ-major.
    Polar { taus: Vec<f64>, phis: Vec<f64> },
    /// n × n pixels of the square [−r, r]² in (Re ζ, Im ζ), keeping those with |ζ| < r.
    Disc { n: usize, radius: f64 },
}

/// One sample location with the coordinates it is reported under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    /// (τ, φ) for polar grids, (x, y) = (Re ζ, Im ζ) for disc grids.
    pub coords: (f64, f64),
    /// (row, column) of the pixel on disc grids, row 0 at the top (y = r).
    pub pixel: Option<(usize, usize)>,
    pub point: HyperPoint,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|x| x.is_finite())
}

impl Grid {
    /// n_tau radii evenly spaced on [0, τ_max] and n_phi angles j·2π/n_phi.
    pub fn polar(n_tau: usize, n_phi: usize, tau_max: f64) -> Result<Self> {
        if n_tau == 0 || n_phi == 0 {
            return Err(Error::domain("Grid", "n_tau and n_phi must be positive"));
        }
        if !(tau_max >= 0.0 && tau_max.is_finite()) || (n_tau > 1 && tau_max == 0.0) {
            return Err(Error::domain(
                "Grid",
                format!("τ_max = {tau_max} cannot hold {n_tau} distinct radii"),
            ));
        }
        let taus = if n_tau == 1 {
            vec![tau_max]
        } else {
            (0..n_tau).map(|i| tau_max * i as f64 / (n_tau - 1) as f64).collect()
        };
        let phis = (0..n_phi).map(|j| TAU * j as f64 / n_phi as f64).collect();
        Self::polar_axes(taus, phis)
    }

    pub fn polar_axes(taus: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if taus.is_empty() || phis.is_empty() {
            return Err(Error::domain("Grid", "empty axis"));
        }
        if !strictly_increasing(&taus) || taus[0] < 0.0 {
            return Err(Error::domain(
                "Grid",
                "τ nodes must be finite, ≥ 0 and strictly increasing",
            ));
        }
        if !strictly_increasing(&phis) {
            return Err(Error::domain("Grid", "φ nodes must be finite and strictly increasing"));
        }
        Ok(Grid::Polar { taus, phis })
    }

    pub fn disc(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0 && radius < 1.0) {
            return Err(Error::domain(
                "Grid",
                format!("need n > 0 and 0 < r < 1, got n = {n}, r = {radius}"),
            ));
        }
        Ok(Grid::Disc { n, radius })
    }

    /// Coordinate names as written in tables.
    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            Grid::Polar { .. } => ("tau", "phi"),
            Grid::Disc { .. } => ("x", "y"),
        }
    }

    /// Pixel size of disc grids.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Grid::Polar { taus, phis } => (taus.len(), phis.len()),
            Grid::Disc { n, .. } => (*n, *n),
        }
    }

    fn disc_coord(n: usize, radius: f64, i: usize) -> f64 {
        if n == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * i as f64 / (n - 1) as f64
        }
    }

    pub fn points(&self) -> Result<Vec<GridPoint>> {
        match self {
            Grid::Polar { taus, phis } => {
                let mut out = Vec::with_capacity(taus.len() * phis.len());
                for &t in taus {
                    for &f in phis {
                        out.push(GridPoint {
                            coords: (t, f),
                            pixel: None,
                            point: HyperPoint::new(t, f)?,
                        });
                    }
                }
                Ok(out)
            }
            Grid::Disc { n, radius } => {
                let mut out = Vec::new();
                for row in 0..*n {
                    let y = 0.0 - Self::disc_coord(*n, *radius, row);
                    for col in 0..*n {
                        let x = Self::disc_coord(*n, *radius, col);
                        if x * x + y * y < radius * radius || *n == 1 {
                            out.push(GridPoint {
                                coords: (x, y),
                                pixel: Some((row, col)),
                                point: DiscPoint::from_re_im(x, y)?.to_hyper(),
                            });
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Provenance carried with a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub state: StateSpec,
    pub tol: f64,
    /// Evolution time, when the field is a frame of a trajectory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
}

/// Symbol values sampled on a grid, in the order of [`Grid::points`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceField {
    pub k: IrrepIndex,
    pub s: KernelOrder,
    pub grid: Grid,
    pub coords: Vec<(f64, f64)>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_values: Option<Vec<f64>>,
    pub meta: FieldMeta,
}

impl PhaseSpaceField {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Sample with the largest value.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })
    }

    pub fn check_finite(&self) -> Result<()> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invariant(
                "PhaseSpaceField",
                format!("non-finite value at sample {i} {:?}", self.coords[i]),
            ));
        }
        Ok(())
    }
}

/// Evaluates `f` at every grid point in parallel; the result does not depend on scheduling.
pub(crate) fn sample<F>(grid: &Grid, f: F) -> Result<(Vec<(f64, f64)>, Vec<f64>)>
where
    F: Fn(&HyperPoint) -> Result<f64> + Sync,
{
    let points = grid.points()?;
    let values = points.par_iter().map(|g| f(&g.point)).collect::<Result<Vec<f64>>>()?;
    Ok((points.iter().map(|g| g.coords).collect(), values))
}

/// The s-ordered symbol of `state` on `grid`.
pub fn evaluate_field(
    k: IrrepIndex,
    s: KernelOrder,
    state: &StateSpec,
    grid: &Grid,
    spec: &QuadSpec,
) -> Result<PhaseSpaceField> {
    let eval = SymbolEvaluator::new(k, s, state, spec)?;
    let (coords, values) = sample(grid, |p| eval.eval(p))?;
    let field = PhaseSpaceField {
        k,
        s,
        grid: grid.clone(),
        coords,
        values,
        im_values: None,
        meta: FieldMeta {
            state: state.clone(),
            tol: spec.tol,
            time: None,
            hamiltonian: None,
        },
    };
    field.check_finite()?;
    Ok(field)
}

/// Smallest τ at which the φ-averaged profile of a polar field falls to half its value at
/// the first radius, by linear interpolation between radii.
pub fn half_max_radius(field: &PhaseSpaceField) -> Result<f64> {
    let Grid::Polar { taus, phis } = &field.grid else {
        return Err(Error::Unsupported("half-maximum radius needs a polar grid".into()));
    };
    let np = phis.len();
    let profile: Vec<f64> = field
        .values
        .chunks(np)
        .map(|ring| ring.iter().sum::<f64>() / np as f64)
        .collect();
    let half = 0.5 * profile[0];
    for i in 1..profile.len() {
        if profile[i] <= half {
            let (a, b) = (profile[i - 1], profile[i]);
            let t = if a != b { (a - half) / (a - b) } else { 0.0 };
            return Ok(taus[i - 1] + t * (taus[i] - taus[i - 1]));
        }
    }
    Err(Error::domain(
        "half_max_radius",
        "profile never falls to half its central value",
    ))
}
