//! Homeomorphisms of the open unit disk and their transport to the plane.
//!
//! The plane and the open unit disk are identified by
//! `u(z) = z / (1 - |z|)` with inverse `u⁻¹(w) = w / (1 + |w|)`; a disk map
//! `ψ` becomes the plane map `u ∘ ψ ∘ u⁻¹`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Disk, HomeoError};
use crate::point;

/// `u(z) = z / (1 - |z|)`, defined for `|z| < 1`.
pub fn disk_to_plane(z: Complex64) -> Result<Complex64, HomeoError> {
    let m = z.norm();
    if !(m < 1.0) {
        return Err(HomeoError::LeftDisk { modulus: m });
    }
    Ok(z / (1.0 - m))
}

/// `u⁻¹(w) = w / (1 + |w|)`.
pub fn plane_to_disk(w: Complex64) -> Result<Complex64, HomeoError> {
    let z = w / (1.0 + w.norm());
    let m = z.norm();
    if !(m < 1.0) {
        return Err(HomeoError::LeftDisk { modulus: m });
    }
    Ok(z)
}

/// The radial deformation `ψ_δ` centred at `α`.
///
/// In polar coordinates `α + r e^{iθ}` the radius is mapped by the
/// piecewise-linear profile
///
/// ```text
///   r ↦ r (ρ + δ) / ρ          for 0 ≤ r ≤ ρ
///   r ↦ (r - ρ) / 2 + ρ + δ    for ρ ≤ r ≤ ρ + 2δ
///   r ↦ r                      otherwise
/// ```
///
/// so `D̄(α;ρ)` is blown up onto `D̄(α;ρ+δ)` and the collar out to `ρ + 2δ`
/// is squeezed to make room. The angle is untouched.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialBump {
    #[serde(with = "point")]
    center: Complex64,
    rho: f64,
    delta: f64,
    eta: f64,
}

impl RadialBump {
    /// Requires `ρ > 0`, `η > 0`, `0 ≤ δ ≤ η` and `|α| + ρ + 2η < 1`.
    pub fn new(center: Complex64, rho: f64, delta: f64, eta: f64) -> Result<Self, HomeoError> {
        let finite = center.re.is_finite() && center.im.is_finite();
        if !finite || !rho.is_finite() || !eta.is_finite() || !delta.is_finite() {
            return Err(HomeoError::Domain("bump parameters must be finite".into()));
        }
        if rho <= 0.0 {
            return Err(HomeoError::Domain(format!("bump radius rho must be positive, got {rho}")));
        }
        if eta <= 0.0 {
            return Err(HomeoError::Domain(format!("bump margin eta must be positive, got {eta}")));
        }
        if !(0.0..=eta).contains(&delta) {
            return Err(HomeoError::Domain(format!("delta {delta} outside [0, eta = {eta}]")));
        }
        if center.norm() + rho + 2.0 * eta >= 1.0 {
            return Err(HomeoError::Domain(format!(
                "bump does not fit in the unit disk: |center| + rho + 2 eta = {} >= 1",
                center.norm() + rho + 2.0 * eta
            )));
        }
        Ok(RadialBump { center, rho, delta, eta })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Same bump with a different `δ`.
    pub fn with_delta(&self, delta: f64) -> Result<Self, HomeoError> {
        RadialBump::new(self.center, self.rho, delta, self.eta)
    }

    /// Outer radius of the moved region, `ρ + 2δ`.
    pub fn reach(&self) -> f64 {
        self.rho + 2.0 * self.delta
    }

    pub fn radial_profile(&self, r: f64) -> f64 {
        let (rho, delta) = (self.rho, self.delta);
        if r < rho {
            r * (rho + delta) / rho
        } else if r < rho + 2.0 * delta {
            0.5 * (r - rho) + rho + delta
        } else {
            r
        }
    }

    /// Inverse of [`radial_profile`](Self::radial_profile).
    pub fn inverse_radial_profile(&self, s: f64) -> f64 {
        let (rho, delta) = (self.rho, self.delta);
        if s < rho + delta {
            s * rho / (rho + delta)
        } else if s < rho + 2.0 * delta {
            2.0 * (s - rho - delta) + rho
        } else {
            s
        }
    }

    fn radial(&self, z: Complex64, profile: impl Fn(f64) -> f64) -> Complex64 {
        let v = z - self.center;
        let r = v.norm();
        if r == 0.0 || r >= self.reach() || self.delta == 0.0 {
            return z;
        }
        self.center + v * (profile(r) / r)
    }

    /// Evaluate `ψ_δ`. Points outside `D̄(α;ρ+2δ)` are returned unchanged.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.radial(z, |r| self.radial_profile(r))
    }

    pub fn apply_inverse(&self, w: Complex64) -> Complex64 {
        self.radial(w, |s| self.inverse_radial_profile(s))
    }

    /// Whether `z` lies in the open disk where `ψ_δ` can differ from the identity.
    pub fn moves(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.reach()
    }

    /// Lipschitz constants `(forward, inverse)` on a convex set meeting `D̄(α;ρ+2δ)`.
    ///
    /// A radial map with profile `f` has Jacobian norm `max(|f'(r)|, f(r)/r)`.
    /// Forward: slopes `(ρ+δ)/ρ, 1/2, 1` and `f(r)/r ≤ (ρ+δ)/ρ`.
    /// Inverse: slopes `ρ/(ρ+δ), 2, 1` and `g(s)/s ≤ 1`.
    pub fn lipschitz_pair(&self) -> (f64, f64) {
        if self.delta == 0.0 {
            (1.0, 1.0)
        } else {
            ((self.rho + self.delta) / self.rho, 2.0)
        }
    }

    pub(crate) fn enclose(&self, inverted: bool, d: Disk) -> (f64, Disk) {
        let support = Disk::closed_unchecked(self.center, self.reach());
        if self.delta == 0.0 || !d.meets(&support) {
            return (1.0, d);
        }
        let (fwd, inv) = self.lipschitz_pair();
        let lip = if inverted { inv } else { fwd };
        let image_center = if inverted { self.apply_inverse(d.center) } else { self.apply(d.center) };
        let by_lipschitz = Disk::closed_unchecked(image_center, lip * d.radius);
        // ψ maps the support onto itself and fixes everything else.
        let hull = d.hull(&support);
        (lip, by_lipschitz.tighter(hull))
    }
}

/// A homeomorphism of `D(0;1)` onto itself, as an expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum DiskHomeo {
    Identity,
    Bump(RadialBump),
    Compose(Arc<DiskHomeo>, Arc<DiskHomeo>),
    Inverse(Arc<DiskHomeo>),
}

impl DiskHomeo {
    pub fn bump(bump: RadialBump) -> Self {
        DiskHomeo::Bump(bump)
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: DiskHomeo, inner: DiskHomeo) -> Self {
        DiskHomeo::Compose(Arc::new(outer), Arc::new(inner))
    }

    pub fn inverse(self) -> Self {
        DiskHomeo::Inverse(Arc::new(self))
    }

    fn eval_dir(&self, z: Complex64, inverted: bool) -> Complex64 {
        match self {
            DiskHomeo::Identity => z,
            DiskHomeo::Bump(b) => {
                if inverted {
                    b.apply_inverse(z)
                } else {
                    b.apply(z)
                }
            }
            DiskHomeo::Compose(outer, inner) => {
                if inverted {
                    inner.eval_dir(outer.eval_dir(z, true), true)
                } else {
                    outer.eval_dir(inner.eval_dir(z, false), false)
                }
            }
            DiskHomeo::Inverse(child) => child.eval_dir(z, !inverted),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, HomeoError> {
        check_in_disk(self.eval_dir(check_in_disk(z)?, false))
    }

    pub fn eval_inverse(&self, w: Complex64) -> Result<Complex64, HomeoError> {
        check_in_disk(self.eval_dir(check_in_disk(w)?, true))
    }

    /// Evaluate `u ∘ ψ ∘ u⁻¹` (or its inverse). Points that `ψ` leaves
    /// bitwise unchanged come back unchanged, without the `u(u⁻¹(w))` round-off.
    pub(crate) fn eval_conjugated(&self, w: Complex64, inverted: bool) -> Result<Complex64, HomeoError> {
        let z = plane_to_disk(w)?;
        let y = self.eval_dir(z, inverted);
        if y == z {
            return Ok(w);
        }
        disk_to_plane(y)
    }

    pub(crate) fn enclose(&self, inverted: bool, d: Disk) -> (f64, Disk) {
        match self {
            DiskHomeo::Identity => (1.0, d),
            DiskHomeo::Bump(b) => b.enclose(inverted, d),
            DiskHomeo::Compose(outer, inner) => {
                let (first, second) = if inverted { (outer, inner) } else { (inner, outer) };
                let (l1, d1) = first.enclose(inverted, d);
                let (l2, d2) = second.enclose(inverted, d1);
                (l1 * l2, d2)
            }
            DiskHomeo::Inverse(child) => child.enclose(!inverted, d),
        }
    }
}

fn check_in_disk(z: Complex64) -> Result<Complex64, HomeoError> {
    let m = z.norm();
    if m < 1.0 {
        Ok(z)
    } else {
        Err(HomeoError::LeftDisk { modulus: m })
    }
}
