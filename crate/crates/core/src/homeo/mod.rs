//! Plane homeomorphisms as expression trees with exact inverses.
//!
//! Every node knows its forward and inverse map in closed form, so
//! `eval_inverse` never solves an equation numerically. Composition is
//! right-to-left: `Compose(g, h)` evaluates `g(h(z))`.

mod cell;
mod disk;
mod primitive;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compact::CompactSet;
use crate::point;

pub use cell::{cell_bump, Cell2};
pub use disk::{disk_to_plane, plane_to_disk, DiskHomeo, RadialBump};
pub use primitive::Primitive;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomeoError {
    #[error("intermediate disk point left the open unit disk (modulus {modulus})")]
    LeftDisk { modulus: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no Lipschitz bound available: {0}")]
    NoLipschitzBound(String),
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// A disk `D(center; radius)`, open or closed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(with = "point")]
    pub center: Complex64,
    pub radius: f64,
    pub closed: bool,
}

impl Disk {
    fn checked(center: Complex64, radius: f64, closed: bool) -> Result<Self, HomeoError> {
        if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
            return Err(HomeoError::Domain(format!("invalid disk: center {center}, radius {radius}")));
        }
        Ok(Disk { center, radius, closed })
    }

    pub fn open(center: Complex64, radius: f64) -> Result<Self, HomeoError> {
        Disk::checked(center, radius, false)
    }

    pub fn closed(center: Complex64, radius: f64) -> Result<Self, HomeoError> {
        Disk::checked(center, radius, true)
    }

    pub(crate) fn closed_unchecked(center: Complex64, radius: f64) -> Self {
        Disk { center, radius, closed: true }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        }
    }

    /// Closures intersect.
    pub fn meets(&self, other: &Disk) -> bool {
        (self.center - other.center).norm() <= self.radius + other.radius
    }

    /// Largest modulus of a point in the closure.
    pub fn max_modulus(&self) -> f64 {
        self.center.norm() + self.radius
    }

    /// Smallest closed disk containing both closures.
    pub(crate) fn hull(&self, other: &Disk) -> Disk {
        let d = (other.center - self.center).norm();
        if d + other.radius <= self.radius {
            return Disk::closed_unchecked(self.center, self.radius);
        }
        if d + self.radius <= other.radius {
            return Disk::closed_unchecked(other.center, other.radius);
        }
        let radius = 0.5 * (d + self.radius + other.radius);
        let center = self.center + (other.center - self.center) * ((radius - self.radius) / d);
        Disk::closed_unchecked(center, radius)
    }

    pub(crate) fn tighter(self, other: Disk) -> Disk {
        if other.max_modulus() < self.max_modulus() {
            other
        } else {
            self
        }
    }
}

/// A homeomorphism of the plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Homeo {
    Primitive(Primitive),
    /// `Compose(g, h)` is `g ∘ h`.
    Compose(Arc<Homeo>, Arc<Homeo>),
    Inverse(Arc<Homeo>),
    /// `u ∘ ψ ∘ u⁻¹` for a disk homeomorphism `ψ`.
    DiskConjugate(Arc<DiskHomeo>),
    /// `k ∘ ψ_δ ∘ k⁻¹` on `k[D̄(α;ρ+2δ)]`, the identity elsewhere.
    ChartBump { chart: Arc<Homeo>, bump: RadialBump },
}

impl From<Primitive> for Homeo {
    fn from(p: Primitive) -> Self {
        Homeo::Primitive(p)
    }
}

impl Homeo {
    pub fn identity() -> Self {
        Homeo::Primitive(Primitive::Identity)
    }

    pub fn translation(a: Complex64) -> Self {
        Homeo::Primitive(Primitive::Translation(a))
    }

    pub fn rotation(theta: f64) -> Self {
        Homeo::Primitive(Primitive::Rotation(theta))
    }

    pub fn scaling(s: f64) -> Result<Self, HomeoError> {
        Primitive::scaling(s).map(Homeo::Primitive)
    }

    pub fn conjugation() -> Self {
        Homeo::Primitive(Primitive::Conjugation)
    }

    /// `g ∘ h`.
    pub fn compose(g: Homeo, h: Homeo) -> Self {
        Homeo::Compose(Arc::new(g), Arc::new(h))
    }

    /// `self ∘ inner`.
    pub fn after(self, inner: Homeo) -> Self {
        Homeo::compose(self, inner)
    }

    pub fn inverse(self) -> Self {
        Homeo::Inverse(Arc::new(self))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, HomeoError> {
        self.eval_dir(z, false)
    }

    pub fn eval_inverse(&self, w: Complex64) -> Result<Complex64, HomeoError> {
        self.eval_dir(w, true)
    }

    fn eval_dir(&self, z: Complex64, inverted: bool) -> Result<Complex64, HomeoError> {
        match self {
            Homeo::Primitive(p) => {
                p.check().map_err(|e| HomeoError::Malformed(e.to_string()))?;
                Ok(if inverted { p.apply_inverse(z) } else { p.apply(z) })
            }
            Homeo::Compose(g, h) => {
                if inverted {
                    h.eval_dir(g.eval_dir(z, true)?, true)
                } else {
                    g.eval_dir(h.eval_dir(z, false)?, false)
                }
            }
            Homeo::Inverse(child) => child.eval_dir(z, !inverted),
            Homeo::DiskConjugate(psi) => psi.eval_conjugated(z, inverted),
            Homeo::ChartBump { chart, bump } => {
                let w = chart.eval_dir(z, true)?;
                if !bump.moves(w) {
                    return Ok(z);
                }
                let moved = if inverted { bump.apply_inverse(w) } else { bump.apply(w) };
                if moved == w {
                    return Ok(z);
                }
                chart.eval_dir(moved, false)
            }
        }
    }

    /// Lipschitz constant on `d` together with a disk enclosing the image.
    fn enclose(&self, inverted: bool, d: Disk) -> Result<(f64, Disk), HomeoError> {
        match self {
            Homeo::Primitive(p) => {
                let q = if inverted { p.inverse() } else { *p };
                let lip = q.lipschitz();
                Ok((lip, Disk::closed_unchecked(q.apply(d.center), d.radius * lip)))
            }
            Homeo::Compose(g, h) => {
                let (first, second) = if inverted { (g, h) } else { (h, g) };
                let (l1, d1) = first.enclose(inverted, d)?;
                let (l2, d2) = second.enclose(inverted, d1)?;
                Ok((l1 * l2, d2))
            }
            Homeo::Inverse(child) => child.enclose(!inverted, d),
            Homeo::DiskConjugate(psi) => {
                let (l1, d1) = enclose_plane_to_disk(d);
                let (l2, d2) = psi.enclose(inverted, d1);
                let (l3, d3) = enclose_disk_to_plane(d2)?;
                Ok((l1 * l2 * l3, d3))
            }
            Homeo::ChartBump { chart, bump } => {
                let (l1, d1) = chart.enclose(true, d)?;
                let (l2, d2) = bump.enclose(inverted, d1);
                let (l3, d3) = chart.enclose(false, d2)?;
                Ok((l1 * l2 * l3, d3))
            }
        }
    }

    /// A closed disk containing the image of `disk`.
    pub fn image_enclosure(&self, disk: Disk) -> Result<Disk, HomeoError> {
        self.enclose(false, disk).map(|(_, d)| d)
    }

    pub fn lipschitz_bound(&self, disk: Disk) -> Result<f64, HomeoError> {
        lipschitz_bound(self, disk)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Homeo::Primitive(_) | Homeo::DiskConjugate(_) => 1,
            Homeo::Compose(g, h) => 1 + g.size() + h.size(),
            Homeo::Inverse(c) => 1 + c.size(),
            Homeo::ChartBump { chart, .. } => 1 + chart.size(),
        }
    }
}

// u⁻¹ has Jacobian norm 1/(1+|w|) ≤ 1 and maps into D(0;1).
fn enclose_plane_to_disk(d: Disk) -> (f64, Disk) {
    let m = d.max_modulus();
    let by_lipschitz = Disk::closed_unchecked(d.center / (1.0 + d.center.norm()), d.radius);
    let by_modulus = Disk::closed_unchecked(Complex64::new(0.0, 0.0), m / (1.0 + m));
    (1.0, by_lipschitz.tighter(by_modulus))
}

// u has Jacobian norm 1/(1-|z|)² on |z| ≤ m.
fn enclose_disk_to_plane(d: Disk) -> Result<(f64, Disk), HomeoError> {
    let m = d.max_modulus();
    if !(m < 1.0) {
        return Err(HomeoError::NoLipschitzBound(format!(
            "disk enclosure reaches the unit circle (max modulus {m})"
        )));
    }
    let lip = 1.0 / ((1.0 - m) * (1.0 - m));
    let by_lipschitz = Disk::closed_unchecked(d.center / (1.0 - d.center.norm()), d.radius * lip);
    let by_modulus = Disk::closed_unchecked(Complex64::new(0.0, 0.0), m / (1.0 - m));
    Ok((lip, by_lipschitz.tighter(by_modulus)))
}

/// `g ∘ h`.
pub fn compose(g: Homeo, h: Homeo) -> Homeo {
    Homeo::compose(g, h)
}

pub fn inverse(h: Homeo) -> Homeo {
    h.inverse()
}

/// Transport a disk homeomorphism to the plane: `u ∘ ψ ∘ u⁻¹`.
pub fn plane_from_disk(psi: DiskHomeo) -> Homeo {
    Homeo::DiskConjugate(Arc::new(psi))
}

/// A Lipschitz constant for `h` on `disk`, propagated node by node through
/// disk enclosures of the intermediate images.
pub fn lipschitz_bound(h: &Homeo, disk: Disk) -> Result<f64, HomeoError> {
    let (lip, _) = h.enclose(false, disk)?;
    if lip.is_finite() {
        Ok(lip)
    } else {
        Err(HomeoError::NoLipschitzBound(format!("bound overflowed on {disk:?}")))
    }
}

/// Outcome of [`support_sample`].
#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    /// No grid point moved by more than the tolerance.
    Empty,
    Sampled(CompactSet),
}

impl Support {
    pub fn is_empty(&self) -> bool {
        matches!(self, Support::Empty)
    }
}

/// Square lattice of step `step` anchored at the disk centre, restricted to
/// the disk. Rows run bottom to top, left to right.
pub fn square_grid(region: Disk, step: f64) -> Vec<Complex64> {
    let k = (region.radius / step).ceil() as i64;
    let mut out = Vec::new();
    for j in -k..=k {
        for i in -k..=k {
            let z = region.center + Complex64::new(i as f64 * step, j as f64 * step);
            if region.contains(z) {
                out.push(z);
            }
        }
    }
    out
}

/// Grid points of `region` (lattice step `resolution`) that `h` moves by
/// more than `tol`: a sampled picture of `supp(h) ∩ region`.
pub fn support_sample(h: &Homeo, region: Disk, tol: f64, resolution: f64) -> Result<Support, HomeoError> {
    if !(tol > 0.0) || !(resolution > 0.0) {
        return Err(HomeoError::Domain(format!(
            "support_sample needs tol > 0 and resolution > 0, got {tol}, {resolution}"
        )));
    }
    let mut moved = Vec::new();
    for z in square_grid(region, resolution) {
        if (h.eval(z)? - z).norm() > tol {
            moved.push(z);
        }
    }
    if moved.is_empty() {
        return Ok(Support::Empty);
    }
    let set = CompactSet::new(moved, Some(resolution / std::f64::consts::SQRT_2))
        .map_err(|e| HomeoError::Domain(e.to_string()))?;
    Ok(Support::Sampled(set))
}
