//! Finite point clouds standing in for compact subsets of the plane.
//!
//! A [`CompactSet`] carries a declared net resolution: the cloud is meant
//! to be an ε-net of the underlying compact. Distances are exact on the
//! clouds themselves.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homeo::{Disk, Homeo, HomeoError};
use crate::par;
use crate::point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompactError {
    #[error("compact set must be nonempty")]
    Empty,
    #[error("point {index} is not finite")]
    NonFinite { index: usize },
    #[error("cloud line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Homeo(#[from] HomeoError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSet {
    #[serde(with = "point::vec")]
    points: Vec<Complex64>,
    /// `None` when no modulus of continuity was available to carry it.
    net_resolution: Option<f64>,
}

impl CompactSet {
    pub fn new(points: Vec<Complex64>, net_resolution: Option<f64>) -> Result<Self, CompactError> {
        if points.is_empty() {
            return Err(CompactError::Empty);
        }
        if let Some(index) = points.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CompactError::NonFinite { index });
        }
        Ok(CompactSet { points, net_resolution })
    }

    pub fn singleton(z: Complex64) -> Self {
        CompactSet { points: vec![z], net_resolution: Some(0.0) }
    }

    /// `count` equally spaced points on the circle `|z − center| = radius`.
    pub fn circle(center: Complex64, radius: f64, count: usize) -> Result<Self, CompactError> {
        let step = 2.0 * std::f64::consts::PI / count.max(1) as f64;
        let points = (0..count)
            .map(|k| center + Complex64::from_polar(radius, step * k as f64))
            .collect();
        CompactSet::new(points, Some(radius * (0.5 * step).sin()))
    }

    /// `per_side × per_side` grid over the square `[lo, hi]²`, both ends included.
    pub fn square(lo: f64, hi: f64, per_side: usize) -> Result<Self, CompactError> {
        let n = per_side.max(1);
        let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        let coord = |k: usize| if n > 1 { lo + step * k as f64 } else { 0.5 * (lo + hi) };
        let mut points = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                points.push(Complex64::new(coord(i), coord(j)));
            }
        }
        CompactSet::new(points, Some(step / std::f64::consts::SQRT_2))
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn net_resolution(&self) -> Option<f64> {
        self.net_resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A closed disk containing every point (centred at the bounding-box centre).
    pub fn enclosing_disk(&self) -> Disk {
        let (mut lo, mut hi) = (self.points[0], self.points[0]);
        for z in &self.points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let center = (lo + hi) * 0.5;
        let radius = self.points.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        Disk { center, radius: radius.max(f64::MIN_POSITIVE), closed: true }
    }

    /// `inf_{q ∈ self} |z − q|`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.points.iter().map(|q| (z - q).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// `sup_{p∈from} inf_{q∈to} |p − q|`.
pub fn directed_hausdorff(from: &CompactSet, to: &CompactSet) -> f64 {
    par::max_over(&from.points, |p| Ok::<_, ()>(to.distance_to(*p))).unwrap_or(f64::NAN)
}

pub fn hausdorff(k: &CompactSet, l: &CompactSet) -> f64 {
    directed_hausdorff(k, l).max(directed_hausdorff(l, k))
}

/// `h[K]`. The net resolution is scaled by a Lipschitz bound of `h` on a
/// disk enclosing `K`, or dropped if none is available.
pub fn image(h: &Homeo, k: &CompactSet) -> Result<CompactSet, CompactError> {
    let points = k.points.iter().map(|z| h.eval(*z)).collect::<Result<Vec<_>, _>>()?;
    let net_resolution = match k.net_resolution {
        Some(res) => h.lipschitz_bound(k.enclosing_disk()).ok().map(|l| l * res),
        None => None,
    };
    CompactSet::new(points, net_resolution)
}

/// Every point of `k` lies within (strictly less than) `eps` of `l`,
/// i.e. `K ⊆ B(L; ε)` at cloud level.
pub fn in_neighborhood(k: &CompactSet, l: &CompactSet, eps: f64) -> bool {
    k.points.iter().all(|p| l.distance_to(*p) < eps)
}

/// Finite-sequence surrogate for topological lower/upper limits.
///
/// A check "holds for all large n" when it holds from some index through
/// the end of the supplied sequence; `*_from` records the first such index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub distances: Vec<f64>,
    /// First index from which every point of `K` is within `tol` of `K_n`.
    pub liminf_from: Option<usize>,
    /// First index from which every point of `K_n` is within `tol` of `K`.
    pub limsup_from: Option<usize>,
    pub tol: f64,
}

impl LimitReport {
    pub fn liminf_holds(&self) -> bool {
        self.liminf_from.is_some()
    }

    pub fn limsup_holds(&self) -> bool {
        self.limsup_from.is_some()
    }

    /// Final Hausdorff distance within `tol`.
    pub fn converged(&self) -> bool {
        self.distances.last().is_some_and(|d| *d <= self.tol)
    }
}

fn tail_start(ok: &[bool]) -> Option<usize> {
    let fails = ok.iter().rposition(|b| !b);
    match fails {
        None if ok.is_empty() => None,
        None => Some(0),
        Some(i) if i + 1 < ok.len() => Some(i + 1),
        Some(_) => None,
    }
}

pub fn limit_test(seq: &[CompactSet], limit: &CompactSet, tol: f64) -> LimitReport {
    let lower: Vec<bool> = seq.iter().map(|kn| directed_hausdorff(limit, kn) <= tol).collect();
    let upper: Vec<bool> = seq.iter().map(|kn| directed_hausdorff(kn, limit) <= tol).collect();
    LimitReport {
        distances: seq.iter().map(|kn| hausdorff(kn, limit)).collect(),
        liminf_from: tail_start(&lower),
        limsup_from: tail_start(&upper),
        tol,
    }
}

/// Parse the cloud text format: one point per line, `re im`. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_cloud(text: &str) -> Result<Vec<Complex64>, CompactError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| CompactError::Parse { line: i + 1, message };
        if fields.len() != 2 {
            return Err(err(format!("expected 2 fields, found {}", fields.len())));
        }
        let re: f64 = fields[0].parse().map_err(|e| err(format!("{e}: {:?}", fields[0])))?;
        let im: f64 = fields[1].parse().map_err(|e| err(format!("{e}: {:?}", fields[1])))?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

pub fn format_cloud(points: &[Complex64]) -> String {
    let mut s = String::with_capacity(points.len() * 24);
    for z in points {
        let _ = writeln!(s, "{} {}", z.re, z.im);
    }
    s
}
