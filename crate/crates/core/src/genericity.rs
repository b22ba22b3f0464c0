//! Finite-stage constructions behind the genericity results.
//!
//! * [`avoid_fixed_points_on_grid`]: an arbitrarily small translation
//!   `τ_a ∘ h` with no fixed point on a given finite grid.
//! * [`nowhere_dense_escape`]: a map arbitrarily close to `h` whose support
//!   leaves a closed 2-cell containing `supp(h)`.
//! * [`lemma3_experiment`], [`lemma4_experiment`]: convergence tables for
//!   images of compacts and for composition.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::compact::{hausdorff, image, CompactError, CompactSet};
use crate::fixed_points::{min_displacement, FixedPointError};
use crate::homeo::{Cell2, Homeo, HomeoError};
use crate::metric::{dist, MetricConfig, MetricError};
use crate::point;

const MAX_HALVINGS: u32 = 60;
/// Directions tried for the perturbation, starting on the ray `e^{iπ/7}`.
const DIRECTIONS: usize = 64;
/// Pointwise tolerance for "h is the identity here".
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenericityError {
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("metric did not shrink below epsilon after {0} halvings")]
    MetricDidNotShrink(u32),
    #[error("map moves {0}, which lies outside the cell")]
    SupportOutsideCell(Complex64),
    #[error("no escape witness: {0}")]
    NoWitness(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Homeo(#[from] HomeoError),
    #[error(transparent)]
    Compact(#[from] CompactError),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub original: Homeo,
    pub perturbed: Homeo,
    #[serde(with = "point")]
    pub translation: Complex64,
    pub dist_achieved: f64,
    pub grid_min_displacement: f64,
    #[serde(serialize_with = "grid_summary")]
    pub grid: CompactSet,
}

#[derive(Serialize)]
struct GridSummary {
    points: usize,
    net_resolution: Option<f64>,
}

fn grid_summary<S: Serializer>(grid: &CompactSet, s: S) -> Result<S::Ok, S::Error> {
    GridSummary { points: grid.len(), net_resolution: grid.net_resolution() }.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeReport {
    pub cell: Cell2,
    pub delta: f64,
    pub composite: Homeo,
    pub dist_to_original: f64,
    #[serde(with = "point")]
    pub escape_witness: Complex64,
    /// `|composite(witness) − witness|`.
    pub witness_displacement: f64,
}

/// The translation candidates `t·e^{i(π/7 + 2πk/64)}`.
fn candidate(t: f64, k: usize) -> Complex64 {
    Complex64::from_polar(t, PI / 7.0 + 2.0 * PI * k as f64 / DIRECTIONS as f64)
}

/// Find `a ≠ 0` with `dist(τ_a ∘ h, h) < ε` such that `τ_a ∘ h` fixes no
/// point of `grid`.
///
/// `τ_a ∘ h` fixes `c` exactly when `a = c − h(c)`, so `a` is kept at
/// distance at least `|a|/2` from that finite bad set; `|a|` is halved
/// until the metric condition holds.
pub fn avoid_fixed_points_on_grid(
    h: &Homeo,
    grid: &CompactSet,
    eps: f64,
    cfg: &MetricConfig,
) -> Result<PerturbationReport, GenericityError> {
    if !(eps > 0.0) {
        return Err(GenericityError::InvalidEpsilon(eps));
    }
    let bad: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|c| h.eval(*c).map(|hc| c - hc))
        .collect::<Result<_, _>>()?;
    let mut t = eps;
    for _ in 0..MAX_HALVINGS {
        let clear = (0..DIRECTIONS)
            .map(|k| candidate(t, k))
            .find(|a| bad.iter().all(|b| (a - b).norm() >= 0.5 * t));
        if let Some(a) = clear {
            let perturbed = Homeo::compose(Homeo::translation(a), h.clone());
            let d = dist(&perturbed, h, cfg)?;
            if d < eps {
                let (m, _) = min_displacement(&perturbed, grid)?;
                if m > 0.0 {
                    return Ok(PerturbationReport {
                        original: h.clone(),
                        perturbed,
                        translation: a,
                        dist_achieved: d,
                        grid_min_displacement: m,
                        grid: grid.clone(),
                    });
                }
            }
        }
        t *= 0.5;
    }
    Err(GenericityError::MetricDidNotShrink(MAX_HALVINGS))
}

/// Spot-check that `h` is the identity on chart samples of `k[D(0;1)] \ F`.
fn check_support_in_cell(h: &Homeo, cell: &Cell2) -> Result<(), GenericityError> {
    let outer = 1.0 - cell.center().norm();
    let rho = cell.rho();
    for i in 1..=8 {
        let r = rho + (outer - rho) * i as f64 / 9.0;
        for j in 0..32 {
            let p = cell.chart_point(r, 2.0 * PI * j as f64 / 32.0)?;
            if (h.eval(p)? - p).norm() > IDENTITY_TOL * p.norm().max(1.0) {
                return Err(GenericityError::SupportOutsideCell(p));
            }
        }
    }
    Ok(())
}

/// Halve `δ` from `η` until `dist(h_δ ∘ h, h) < ε`, then exhibit a point of
/// `k[D̄(α;ρ+δ)] \ F` that `h_δ ∘ h` moves. `supp(h) ⊆ F` is the caller's
/// claim; it is spot-checked on chart samples.
pub fn nowhere_dense_escape(
    h: &Homeo,
    cell: &Cell2,
    eps: f64,
    cfg: &MetricConfig,
) -> Result<EscapeReport, GenericityError> {
    if !(eps > 0.0) {
        return Err(GenericityError::InvalidEpsilon(eps));
    }
    check_support_in_cell(h, cell)?;
    let mut delta = cell.eta();
    for _ in 0..MAX_HALVINGS {
        let composite = Homeo::compose(cell.bump(delta)?, h.clone());
        let d = dist(&composite, h, cfg)?;
        if d < eps {
            let witness = cell.chart_point(cell.rho() + 0.5 * delta, PI / 7.0)?;
            if cell.contains(witness)? {
                return Err(GenericityError::NoWitness(format!("{witness} lies in the cell")));
            }
            let moved = (composite.eval(witness)? - witness).norm();
            if !(moved > 0.0) {
                return Err(GenericityError::NoWitness(format!("{witness} is not moved")));
            }
            return Ok(EscapeReport {
                cell: cell.clone(),
                delta,
                composite,
                dist_to_original: d,
                escape_witness: witness,
                witness_displacement: moved,
            });
        }
        delta *= 0.5;
    }
    Err(GenericityError::MetricDidNotShrink(MAX_HALVINGS))
}

/// A sequence `h_1, h_2, ...` converging to a declared limit by construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Constant(Homeo),
    /// `h_n = τ_{offset/n} ∘ base`.
    Translated { base: Homeo, offset: Complex64 },
    /// `h_n = rotate(angle/n) ∘ base`.
    Rotated { base: Homeo, angle: f64 },
}

impl Family {
    pub fn member(&self, n: u32) -> Homeo {
        let n = n as f64;
        match self {
            Family::Constant(h) => h.clone(),
            Family::Translated { base, offset } => {
                Homeo::compose(Homeo::translation(offset / n), base.clone())
            }
            Family::Rotated { base, angle } => Homeo::compose(Homeo::rotation(angle / n), base.clone()),
        }
    }

    /// The limit, written as the `n → ∞` member (zero translation/rotation).
    pub fn limit(&self) -> Homeo {
        match self {
            Family::Constant(h) => h.clone(),
            Family::Translated { base, .. } => Homeo::compose(Homeo::translation(Complex64::new(0.0, 0.0)), base.clone()),
            Family::Rotated { base, .. } => Homeo::compose(Homeo::rotation(0.0), base.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma3Row {
    pub n: u32,
    pub dist: f64,
    pub hausdorff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma4Row {
    pub n: u32,
    pub dist_g: f64,
    pub dist_h: f64,
    pub dist_composite: f64,
}

/// Rows `(n, d(h_n, h), H(h_n[K], h[K]))` for `n = 1..=n_max`.
pub fn lemma3_experiment(
    family: &Family,
    k: &CompactSet,
    n_max: u32,
    cfg: &MetricConfig,
) -> Result<Vec<Lemma3Row>, GenericityError> {
    let limit = family.limit();
    let limit_image = image(&limit, k)?;
    (1..=n_max)
        .map(|n| {
            let hn = family.member(n);
            Ok(Lemma3Row {
                n,
                dist: dist(&hn, &limit, cfg)?,
                hausdorff: hausdorff(&image(&hn, k)?, &limit_image),
            })
        })
        .collect()
}

/// Rows `(n, d(g_n, g), d(h_n, h), d(g_n ∘ h_n, g ∘ h))`.
pub fn lemma4_experiment(
    g: &Family,
    h: &Family,
    n_max: u32,
    cfg: &MetricConfig,
) -> Result<Vec<Lemma4Row>, GenericityError> {
    let (g_lim, h_lim) = (g.limit(), h.limit());
    let gh = Homeo::compose(g_lim.clone(), h_lim.clone());
    (1..=n_max)
        .map(|n| {
            let (gn, hn) = (g.member(n), h.member(n));
            Ok(Lemma4Row {
                n,
                dist_g: dist(&gn, &g_lim, cfg)?,
                dist_h: dist(&hn, &h_lim, cfg)?,
                dist_composite: dist(&Homeo::compose(gn, hn), &gh, cfg)?,
            })
        })
        .collect()
}

/// `values[i+1] ≤ values[i] + slack` for every `i`.
pub fn is_nonincreasing(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + slack)
}
