use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{Homeo, HomeoError, RadialBump};
use crate::point;

/// A closed 2-cell `F = k[D̄(α;ρ)]`: the image of a closed disk inside
/// `D(0;1)` under a chart `k` defined on the open unit disk.
///
/// The chart is any plane homeomorphism; only its restriction to `D(0;1)`
/// matters. `η` is the collar width available to deformations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell2 {
    chart: Homeo,
    #[serde(with = "point")]
    center: Complex64,
    rho: f64,
    eta: f64,
}

const ROUND_TRIP_TOL: f64 = 1e-9;

impl Cell2 {
    pub fn new(chart: Homeo, center: Complex64, rho: f64, eta: f64) -> Result<Self, HomeoError> {
        // Validates |α| + ρ + 2η < 1 and positivity.
        RadialBump::new(center, rho, 0.0, eta)?;
        let cell = Cell2 { chart, center, rho, eta };
        for z in cell.collar_samples(cell.rho + 2.0 * cell.eta, 8, 16) {
            let back = cell.chart.eval_inverse(cell.chart.eval(z)?)?;
            if (back - z).norm() > ROUND_TRIP_TOL * z.norm().max(1.0) {
                return Err(HomeoError::Domain(format!(
                    "chart does not round-trip at {z}: got {back}"
                )));
            }
        }
        Ok(cell)
    }

    /// The cell with the identity chart.
    pub fn standard(center: Complex64, rho: f64, eta: f64) -> Result<Self, HomeoError> {
        Cell2::new(Homeo::identity(), center, rho, eta)
    }

    pub fn chart(&self) -> &Homeo {
        &self.chart
    }
    pub fn center(&self) -> Complex64 {
        self.center
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Polar samples `α + r e^{iθ}`, `0 ≤ r ≤ outer`, in chart coordinates.
    fn collar_samples(&self, outer: f64, radii: usize, angles: usize) -> Vec<Complex64> {
        let mut out = vec![self.center];
        for i in 1..=radii {
            let r = outer * i as f64 / radii as f64;
            for j in 0..angles {
                out.push(self.center + Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64));
            }
        }
        out
    }

    /// Chart-coordinate distance of `p` from `α`, i.e. `|k⁻¹(p) − α|`.
    pub fn chart_radius(&self, p: Complex64) -> Result<f64, HomeoError> {
        Ok((self.chart.eval_inverse(p)? - self.center).norm())
    }

    /// Whether `p ∈ F = k[D̄(α;ρ)]`.
    pub fn contains(&self, p: Complex64) -> Result<bool, HomeoError> {
        Ok(self.chart_radius(p)? <= self.rho)
    }

    /// The chart point `k(α + r e^{iθ})`.
    pub fn chart_point(&self, r: f64, theta: f64) -> Result<Complex64, HomeoError> {
        self.chart.eval(self.center + Complex64::from_polar(r, theta))
    }

    pub fn bump(&self, delta: f64) -> Result<Homeo, HomeoError> {
        cell_bump(self, delta)
    }
}

/// The deformation `h_δ`: `k ∘ ψ_δ ∘ k⁻¹` on `k[D̄(α;ρ+2δ)]`, the identity
/// elsewhere. Requires `0 ≤ δ ≤ η`.
pub fn cell_bump(cell: &Cell2, delta: f64) -> Result<Homeo, HomeoError> {
    let bump = RadialBump::new(cell.center, cell.rho, delta, cell.eta)?;
    Ok(Homeo::ChartBump { chart: Arc::new(cell.chart.clone()), bump })
}
