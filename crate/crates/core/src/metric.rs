//! The metric of uniform convergence on compacts and the group metric.
//!
//! ```text
//!   d_u(f, g) = Σ_{n≥1} 2^{-n} s_n / (1 + s_n),   s_n = sup_{|z|≤n} |f(z) − g(z)|
//!   d(f, g)   = d_u(f, g) + d_u(f⁻¹, g⁻¹)
//! ```
//!
//! The series is cut at `n = N` (tail ≤ `2^{-N}`) and each supremum is
//! estimated on a polar grid. In rigorous mode a Lipschitz slack is added
//! so the estimate is an upper bound; otherwise the grid maximum is a lower
//! bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homeo::{Disk, Homeo, HomeoError};
use crate::par;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("invalid metric configuration: {0}")]
    Config(String),
    #[error("sup index n must be at least 1")]
    ZeroIndex,
    #[error("non-finite displacement at {0}")]
    NonFinite(Complex64),
    #[error(transparent)]
    Homeo(#[from] HomeoError),
}

/// Controls how `d_u` is approximated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Series truncation `N`.
    pub truncation: u32,
    pub radial_samples: usize,
    pub angular_samples: usize,
    pub rigorous: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { truncation: 40, radial_samples: 256, angular_samples: 256, rigorous: false }
    }
}

impl MetricConfig {
    pub fn new(truncation: u32, radial_samples: usize, angular_samples: usize, rigorous: bool) -> Result<Self, MetricError> {
        let cfg = MetricConfig { truncation, radial_samples, angular_samples, rigorous };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Same truncation, `samples × samples` grid.
    pub fn with_grid(self, samples: usize) -> Self {
        MetricConfig { radial_samples: samples, angular_samples: samples, ..self }
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        if self.truncation < 1 {
            return Err(MetricError::Config("truncation N must be at least 1".into()));
        }
        if self.radial_samples < 8 || self.angular_samples < 8 {
            return Err(MetricError::Config(format!(
                "need at least 8 radial and angular samples, got {} x {}",
                self.radial_samples, self.angular_samples
            )));
        }
        Ok(())
    }
}

/// Polar grid on `D̄(0; radius)`: radii `radius·i/(R−1)`, `i = 0..R`, and
/// angles `2πj/A`. The centre appears once.
pub fn polar_grid(radius: f64, cfg: &MetricConfig) -> Vec<Complex64> {
    let r_count = cfg.radial_samples;
    let a_count = cfg.angular_samples;
    let mut pts = Vec::with_capacity(1 + (r_count - 1) * a_count);
    pts.push(Complex64::new(0.0, 0.0));
    let units: Vec<Complex64> = (0..a_count)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / a_count as f64))
        .collect();
    for i in 1..r_count {
        let r = radius * i as f64 / (r_count - 1) as f64;
        pts.extend(units.iter().map(|u| u * r));
    }
    pts
}

/// Covering radius of [`polar_grid`]: every point of the disk is within
/// this distance of a grid point. Move radially to the nearest grid circle
/// (≤ Δr/2), then along it to the nearest spoke (≤ radius·Δθ/2).
pub fn polar_mesh(radius: f64, cfg: &MetricConfig) -> f64 {
    let dr = radius / (cfg.radial_samples - 1) as f64;
    let dtheta = 2.0 * std::f64::consts::PI / cfg.angular_samples as f64;
    0.5 * dr + 0.5 * radius * dtheta
}

/// Estimate of `sup_{|z|≤n} |f(z) − g(z)|`.
///
/// Grid maximum (a lower bound), or in rigorous mode the grid maximum plus
/// `(L_f + L_g)·mesh` (an upper bound).
pub fn sup_on_disk(f: &Homeo, g: &Homeo, n: u32, cfg: &MetricConfig) -> Result<f64, MetricError> {
    cfg.validate()?;
    if n == 0 {
        return Err(MetricError::ZeroIndex);
    }
    if f == g {
        return Ok(0.0);
    }
    let radius = n as f64;
    let grid = polar_grid(radius, cfg);
    let grid_max = par::max_over(&grid, |z| {
        let d = (f.eval(*z)? - g.eval(*z)?).norm();
        if d.is_nan() {
            return Err(MetricError::NonFinite(*z));
        }
        Ok(d)
    })?;
    if !cfg.rigorous {
        return Ok(grid_max);
    }
    let disk = Disk::closed(Complex64::new(0.0, 0.0), radius)?;
    let lf = f.lipschitz_bound(disk)?;
    let lg = g.lipschitz_bound(disk)?;
    Ok(grid_max + (lf + lg) * polar_mesh(radius, cfg))
}

const OVERFLOW_GUARD: f64 = 1e15;

/// `2^{-n} s / (1 + s)`, with `s` above `1e15` (or infinite) treated as `+∞`.
pub fn series_term(n: u32, s: f64) -> f64 {
    let w = 0.5f64.powi(n as i32);
    if s > OVERFLOW_GUARD {
        w
    } else {
        w * s / (1.0 + s)
    }
}

/// Sum the truncated series for already-computed suprema `s_1, s_2, ...`.
pub fn series_from_sups(sups: &[f64]) -> f64 {
    sups.iter().enumerate().map(|(i, s)| series_term(i as u32 + 1, *s)).sum()
}

/// The suprema `s_1..s_N` for `f` against `g`.
pub fn sups(f: &Homeo, g: &Homeo, cfg: &MetricConfig) -> Result<Vec<f64>, MetricError> {
    (1..=cfg.truncation).map(|n| sup_on_disk(f, g, n, cfg)).collect()
}

/// Truncated `d_u(f, g)`, within [`truncation_error_bound`] of the full
/// series built from the same suprema.
pub fn du(f: &Homeo, g: &Homeo, cfg: &MetricConfig) -> Result<f64, MetricError> {
    cfg.validate()?;
    if f == g {
        return Ok(0.0);
    }
    Ok(series_from_sups(&sups(f, g, cfg)?))
}

/// `d(f, g) = d_u(f, g) + d_u(f⁻¹, g⁻¹)`.
pub fn dist(f: &Homeo, g: &Homeo, cfg: &MetricConfig) -> Result<f64, MetricError> {
    let forward = du(f, g, cfg)?;
    let backward = du(&f.clone().inverse(), &g.clone().inverse(), cfg)?;
    Ok(forward + backward)
}

/// `2^{-N}`: every dropped term is below `2^{-n}`.
pub fn truncation_error_bound(cfg: &MetricConfig) -> f64 {
    0.5f64.powi(cfg.truncation as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small() -> MetricConfig {
        MetricConfig::default().with_grid(32)
    }

    #[test]
    fn config_validation() {
        assert!(MetricConfig::new(0, 16, 16, false).is_err());
        assert!(MetricConfig::new(10, 7, 16, false).is_err());
        assert!(MetricConfig::new(10, 8, 8, true).is_ok());
    }

    #[test]
    fn truncation_bounds() {
        let cfg = MetricConfig { truncation: 1, ..Default::default() };
        assert_eq!(truncation_error_bound(&cfg), 0.5);
        let cfg = MetricConfig { truncation: 40, ..Default::default() };
        assert_eq!(truncation_error_bound(&cfg), 2f64.powi(-40));
    }

    #[test]
    fn infinite_suprema_tail_is_exactly_the_bound() {
        // Σ_{n=N+1}^{M} 2^{-n} → 2^{-N}; compare the N-term and 200-term sums.
        for n_cut in [1u32, 5, 20] {
            let head = series_from_sups(&vec![f64::INFINITY; n_cut as usize]);
            let long = series_from_sups(&vec![f64::INFINITY; 200]);
            let cfg = MetricConfig { truncation: n_cut, ..MetricConfig::default() };
            assert!((long - head - truncation_error_bound(&cfg)).abs() < 1e-15);
        }
    }

    #[test]
    fn sup_of_constant_displacement() {
        let a = c(0.3, -0.4);
        for n in [1, 3, 17] {
            let s = sup_on_disk(&Homeo::identity(), &Homeo::translation(a), n, &small()).unwrap();
            assert!((s - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn sup_of_doubling_is_radius() {
        let s = sup_on_disk(&Homeo::identity(), &Homeo::scaling(2.0).unwrap(), 3, &small()).unwrap();
        assert_eq!(s, 3.0);
    }

    #[test]
    fn rigorous_sup_dominates_grid_sup() {
        let f = Homeo::rotation(0.3);
        let g = Homeo::scaling(1.5).unwrap();
        let lo = sup_on_disk(&f, &g, 2, &small()).unwrap();
        let hi = sup_on_disk(&f, &g, 2, &MetricConfig { rigorous: true, ..small() }).unwrap();
        assert!(hi > lo);
        // True value: sup |e^{0.3i} z − 1.5 z| = 2 |e^{0.3i} − 1.5|.
        let truth = 2.0 * (Complex64::from_polar(1.0, 0.3) - 1.5).norm();
        assert!(lo <= truth + 1e-12 && truth <= hi);
    }

    #[test]
    fn mesh_covers_the_disk() {
        let cfg = MetricConfig::default().with_grid(12);
        let grid = polar_grid(5.0, &cfg);
        let mesh = polar_mesh(5.0, &cfg);
        for k in 0..2000 {
            let t = k as f64 * 0.618_033_988_749;
            let z = Complex64::from_polar(5.0 * (t.fract()).sqrt(), 37.0 * t);
            let nearest = grid.iter().map(|q| (q - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= mesh + 1e-12);
        }
    }

    #[test]
    fn distance_to_unit_translation() {
        let d = dist(&Homeo::identity(), &Homeo::translation(c(1.0, 0.0)), &small()).unwrap();
        assert!((d - 1.0).abs() <= 2f64.powi(-39));
    }

    #[test]
    fn du_bounded_by_offset() {
        for a in [0.1, 0.01] {
            let d = du(&Homeo::identity(), &Homeo::translation(c(0.0, a)), &small()).unwrap();
            assert!(d <= a);
        }
    }

    #[test]
    fn sup_index_must_be_positive() {
        assert_eq!(
            sup_on_disk(&Homeo::identity(), &Homeo::conjugation(), 0, &small()),
            Err(MetricError::ZeroIndex)
        );
    }
}
