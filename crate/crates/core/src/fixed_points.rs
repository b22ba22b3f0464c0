//! Certificates about fixed points of plane homeomorphisms.
//!
//! * existence: a nonzero winding number of `z ↦ h(z) − z` around a circle
//!   forces a zero of the displacement inside the disk;
//! * absence on a region: if the grid minimum `m` of `|h(z) − z|` exceeds
//!   `(L + 1)·s`, where `s` is the grid covering radius and `L` a Lipschitz
//!   bound of `h`, then every `z` in the region has
//!   `|h(z) − z| ≥ m − L·s − s > 0`;
//! * separation disks: a radius `ε` with `h[D(c;ε)] ∩ D(c;ε) = ∅`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compact::CompactSet;
use crate::homeo::{square_grid, Disk, Homeo, HomeoError};
use crate::par;
use crate::point;

/// Boundary displacement below which a winding computation gives up.
pub const WINDING_ZERO_TOL: f64 = 1e-9;
/// Largest number of boundary samples a winding computation may use.
pub const MAX_WINDING_STEPS: usize = 1 << 20;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0} is a fixed point within tolerance")]
    FixedPoint(Complex64),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Homeo(#[from] HomeoError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    FixedPointExists { winding: i64, boundary: Disk },
    FixedPointFree { region: Disk, margin: f64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Grid point of least displacement, when one was computed.
    #[serde(with = "point::option")]
    pub witness: Option<Complex64>,
}

impl Certificate {
    fn inconclusive(reason: impl Into<String>, witness: Option<Complex64>) -> Self {
        Certificate { verdict: Verdict::Inconclusive { reason: reason.into() }, witness }
    }

    pub fn is_fixed_point_free(&self) -> bool {
        matches!(self.verdict, Verdict::FixedPointFree { .. })
    }

    pub fn proves_fixed_point(&self) -> bool {
        matches!(self.verdict, Verdict::FixedPointExists { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.verdict, Verdict::Inconclusive { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub index: i64,
    pub min_boundary_displacement: f64,
    /// Number of step doublings needed.
    pub refinements: u32,
    /// Final number of boundary samples.
    pub steps: usize,
}

/// `min_{p∈K} |h(p) − p|` and the first point attaining it.
pub fn min_displacement(h: &Homeo, k: &CompactSet) -> Result<(f64, Complex64), FixedPointError> {
    let pts = k.points();
    let best = par::argmin_over(pts, |p| Ok::<_, HomeoError>((h.eval(*p)? - p).norm()))?;
    let (value, i) = best.expect("compact sets are nonempty");
    Ok((value, pts[i]))
}

/// Winding number of `z ↦ h(z) − z` along the boundary circle of `disk`,
/// counter-clockwise. Doubles the sample count until every argument
/// increment is below `π/2` in magnitude.
pub fn winding_certificate(h: &Homeo, disk: Disk, steps: usize) -> Result<WindingResult, FixedPointError> {
    if steps < 16 {
        return Err(FixedPointError::Argument(format!("need at least 16 steps, got {steps}")));
    }
    let mut steps = steps;
    let mut refinements = 0;
    loop {
        let mut disp = Vec::with_capacity(steps);
        let mut min_disp = f64::INFINITY;
        for j in 0..steps {
            let z = disk.center + Complex64::from_polar(disk.radius, 2.0 * PI * j as f64 / steps as f64);
            let d = h.eval(z)? - z;
            let m = d.norm();
            if !(m >= WINDING_ZERO_TOL) {
                return Err(FixedPointError::Inconclusive(format!(
                    "displacement {m:e} at boundary point {z} is below {WINDING_ZERO_TOL:e}"
                )));
            }
            min_disp = min_disp.min(m);
            disp.push(d);
        }
        let mut total = 0.0;
        let mut coarse = false;
        for j in 0..steps {
            let inc = (disp[(j + 1) % steps] / disp[j]).arg();
            if inc.abs() >= FRAC_PI_2 {
                coarse = true;
                break;
            }
            total += inc;
        }
        if !coarse {
            let index = (total / (2.0 * PI)).round() as i64;
            if (total - 2.0 * PI * index as f64).abs() > 1e-6 {
                return Err(FixedPointError::Inconclusive(format!(
                    "argument change {total} is not a multiple of 2π"
                )));
            }
            return Ok(WindingResult { index, min_boundary_displacement: min_disp, refinements, steps });
        }
        if steps >= MAX_WINDING_STEPS {
            return Err(FixedPointError::Inconclusive(format!(
                "winding did not resolve with {steps} boundary samples"
            )));
        }
        steps *= 2;
        refinements += 1;
    }
}

/// Existence certificate from the boundary winding number.
pub fn certify_fixed_point_exists(h: &Homeo, disk: Disk, steps: usize) -> Result<Certificate, FixedPointError> {
    match winding_certificate(h, disk, steps) {
        Ok(w) if w.index != 0 => Ok(Certificate {
            verdict: Verdict::FixedPointExists { winding: w.index, boundary: disk },
            witness: None,
        }),
        Ok(_) => Ok(Certificate::inconclusive("winding number is zero", None)),
        Err(FixedPointError::Inconclusive(reason)) => Ok(Certificate::inconclusive(reason, None)),
        Err(e) => Err(e),
    }
}

/// Grid used by [`certify_fixed_point_free`]: square lattice with covering
/// radius at most `spacing`, over the region enlarged by `spacing`.
pub fn covering_grid(region: Disk, spacing: f64) -> (Vec<Complex64>, Disk) {
    let lattice = CoveringLattice::new(region, spacing);
    (square_grid(lattice.grown, lattice.step), lattice.grown)
}

struct CoveringLattice {
    grown: Disk,
    step: f64,
    k: i64,
}

impl CoveringLattice {
    fn new(region: Disk, spacing: f64) -> Self {
        // Lattice step t has covering radius t/√2; shave a hair off so the
        // covering radius stays ≤ spacing after rounding.
        let step = spacing * SQRT_2 * (1.0 - 1e-12);
        let grown = Disk { center: region.center, radius: region.radius + spacing, closed: true };
        let k = (grown.radius / step).ceil() as i64;
        CoveringLattice { grown, step, k }
    }

    fn point(&self, i: i64, j: i64) -> Complex64 {
        self.grown.center + Complex64::new(i as f64 * self.step, j as f64 * self.step)
    }

    /// Position in the row-major order of [`square_grid`].
    fn rank(&self, i: i64, j: i64) -> i64 {
        (j + self.k) * (2 * self.k + 1) + (i + self.k)
    }
}

/// Index rectangle `[i0, i1] × [j0, j1]` of lattice points.
#[derive(Clone, Copy)]
struct Block {
    i0: i64,
    i1: i64,
    j0: i64,
    j1: i64,
}

const LEAF_SIDE: i64 = 4;

/// Exact grid minimum of `|h(z) − z|` over the covering lattice, with the
/// first minimizer in lattice order. Blocks whose Lipschitz lower bound
/// exceeds the best value so far are skipped.
fn lattice_min(h: &Homeo, lat: &CoveringLattice, lip: f64) -> Result<(f64, Complex64), HomeoError> {
    let mut best = (f64::INFINITY, i64::MAX, lat.grown.center);
    let mut stack = vec![Block { i0: -lat.k, i1: lat.k, j0: -lat.k, j1: lat.k }];
    while let Some(b) = stack.pop() {
        let (ci, cj) = ((b.i0 + b.i1) as f64 / 2.0, (b.j0 + b.j1) as f64 / 2.0);
        let c = lat.grown.center + Complex64::new(ci * lat.step, cj * lat.step);
        let half = lat.step * (((b.i1 - b.i0) as f64 / 2.0).hypot((b.j1 - b.j0) as f64 / 2.0));
        let from_center = (c - lat.grown.center).norm();
        if from_center - half > lat.grown.radius {
            continue;
        }
        if b.i1 - b.i0 < LEAF_SIDE && b.j1 - b.j0 < LEAF_SIDE {
            for j in b.j0..=b.j1 {
                for i in b.i0..=b.i1 {
                    let z = lat.point(i, j);
                    if !lat.grown.contains(z) {
                        continue;
                    }
                    let v = (h.eval(z)? - z).norm();
                    if v.is_nan() {
                        return Err(HomeoError::Domain(format!("displacement at {z} is not a number")));
                    }
                    let r = lat.rank(i, j);
                    if v < best.0 || (v == best.0 && r < best.1) {
                        best = (v, r, z);
                    }
                }
            }
            continue;
        }
        // Every lattice point of the block lies within `half` of c; when c is
        // in the grown disk the segment stays where `lip` is valid.
        if lat.grown.contains(c) {
            let dc = (h.eval(c)? - c).norm();
            let reach = (lip + 1.0) * half;
            if dc - reach - 1e-12 * (dc + reach) > best.0 {
                continue;
            }
        }
        let (a, z) = if b.i1 - b.i0 >= b.j1 - b.j0 {
            let m = b.i0 + (b.i1 - b.i0) / 2;
            (Block { i1: m, ..b }, Block { i0: m + 1, ..b })
        } else {
            let m = b.j0 + (b.j1 - b.j0) / 2;
            (Block { j1: m, ..b }, Block { j0: m + 1, ..b })
        };
        stack.push(z);
        stack.push(a);
    }
    Ok((best.0, best.2))
}

/// Regional absence-of-fixed-points certificate via grid minimum and
/// Lipschitz slack.
pub fn certify_fixed_point_free(h: &Homeo, region: Disk, spacing: f64) -> Result<Certificate, FixedPointError> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(FixedPointError::Argument(format!("spacing must be positive, got {spacing}")));
    }
    let lattice = CoveringLattice::new(region, spacing);
    let lip = match h.lipschitz_bound(lattice.grown) {
        Ok(l) => l,
        Err(_) => return Ok(Certificate::inconclusive("no modulus of continuity", None)),
    };
    let (m, w) = lattice_min(h, &lattice, lip)?;
    let witness = Some(w);
    let slack = (lip + 1.0) * spacing;
    if m > slack {
        Ok(Certificate { verdict: Verdict::FixedPointFree { region, margin: m - slack }, witness })
    } else {
        Ok(Certificate::inconclusive(
            format!("grid minimum displacement {m:e} does not exceed (L+1)s = {slack:e}"),
            witness,
        ))
    }
}

/// Radius `ε ≤ max_eps` with `h[D(c;ε)] ∩ D(c;ε) = ∅`, certified by
/// `|h(c) − c| > ε (L + 1)` where `L` bounds the Lipschitz constant of `h`
/// on `D̄(c;ε)`. Starts at `min(max_eps, |h(c) − c|/3)` and halves.
pub fn separation_radius(h: &Homeo, c: Complex64, max_eps: f64) -> Result<f64, FixedPointError> {
    if !(max_eps > 0.0) {
        return Err(FixedPointError::Argument(format!("max_eps must be positive, got {max_eps}")));
    }
    let gap = (h.eval(c)? - c).norm();
    if gap <= WINDING_ZERO_TOL {
        return Err(FixedPointError::FixedPoint(c));
    }
    let mut eps = max_eps.min(gap / 3.0);
    for _ in 0..MAX_HALVINGS {
        let lip = h.lipschitz_bound(Disk { center: c, radius: eps, closed: true })?;
        if gap > eps * (lip + 1.0) {
            return Ok(eps);
        }
        eps *= 0.5;
    }
    Err(FixedPointError::Inconclusive(format!("no separating radius found at {c}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> Disk {
        Disk::open(c(0.0, 0.0), 1.0).unwrap()
    }

    #[test]
    fn winding_examples() {
        let t = winding_certificate(&Homeo::translation(c(1.0, 0.0)), Disk::open(c(0.0, 0.0), 5.0).unwrap(), 16);
        assert_eq!(t.unwrap().index, 0);
        assert_eq!(winding_certificate(&Homeo::scaling(2.0).unwrap(), unit(), 16).unwrap().index, 1);
        assert_eq!(winding_certificate(&Homeo::rotation(PI), unit(), 16).unwrap().index, 1);
        // z̄ − z = −2i Im z vanishes on the real axis.
        assert!(matches!(
            winding_certificate(&Homeo::conjugation(), unit(), 16),
            Err(FixedPointError::Inconclusive(_))
        ));
    }

    #[test]
    fn winding_refines_near_boundary_zero() {
        // h(z) − z = z − 0.95: the zero sits close to the boundary circle.
        let h = Homeo::compose(Homeo::translation(c(-0.95, 0.0)), Homeo::scaling(2.0).unwrap());
        let w = winding_certificate(&h, unit(), 16).unwrap();
        assert_eq!(w.index, 1);
        assert!(w.refinements > 0);
        assert_eq!(w.steps, 16 << w.refinements);
        assert!(winding_certificate(&h, unit(), 8).is_err());
        let outside = Homeo::compose(Homeo::translation(c(-1.05, 0.0)), Homeo::scaling(2.0).unwrap());
        assert_eq!(winding_certificate(&outside, unit(), 16).unwrap().index, 0);
    }

    #[test]
    fn fixed_point_free_translation() {
        let cert = certify_fixed_point_free(&Homeo::translation(c(1.0, 0.0)), Disk::closed(c(0.0, 0.0), 10.0).unwrap(), 0.1).unwrap();
        match cert.verdict {
            Verdict::FixedPointFree { margin, .. } => assert!(margin >= 0.8 - 1e-12),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn identity_is_inconclusive() {
        let cert = certify_fixed_point_free(&Homeo::identity(), unit(), 0.1).unwrap();
        assert!(cert.is_inconclusive());
        let w = cert.witness.unwrap();
        assert_eq!((Homeo::identity().eval(w).unwrap() - w).norm(), 0.0);
    }

    #[test]
    fn shifted_conjugation_is_free_on_fine_grids() {
        let h = Homeo::compose(Homeo::translation(c(0.001, 0.0)), Homeo::conjugation());
        let region = Disk::closed(c(0.0, 0.0), 5.0).unwrap();
        assert!(certify_fixed_point_free(&h, region, 0.01).unwrap().is_inconclusive());
        assert!(certify_fixed_point_free(&h, region, 0.0004).unwrap().is_fixed_point_free());
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let maps = [
            Homeo::translation(c(0.3, -0.1)),
            Homeo::compose(Homeo::translation(c(0.05, 0.02)), Homeo::conjugation()),
            Homeo::rotation(0.5),
            Homeo::compose(Homeo::scaling(1.5).unwrap(), Homeo::translation(c(0.7, 0.7))),
            Homeo::identity(),
        ];
        let region = Disk::closed(c(0.2, -0.3), 2.0).unwrap();
        for h in &maps {
            let lattice = CoveringLattice::new(region, 0.07);
            let lip = h.lipschitz_bound(lattice.grown).unwrap();
            let pruned = lattice_min(h, &lattice, lip).unwrap();
            let (grid, _) = covering_grid(region, 0.07);
            let brute = min_displacement(h, &CompactSet::new(grid, None).unwrap()).unwrap();
            assert_eq!(pruned, brute, "{h}");
        }
    }

    #[test]
    fn min_displacement_examples() {
        let k = CompactSet::square(-1.0, 1.0, 21).unwrap();
        assert_eq!(min_displacement(&Homeo::identity(), &k).unwrap().0, 0.0);
        let a = c(0.3, 0.4);
        let (m, _) = min_displacement(&Homeo::translation(a), &k).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn separation_examples() {
        let e = separation_radius(&Homeo::translation(c(1.0, 0.0)), c(0.0, 0.0), 1.0).unwrap();
        assert!(e < 0.5 && 1.0 > 2.0 * e);
        assert!(matches!(
            separation_radius(&Homeo::identity(), c(0.0, 0.0), 1.0),
            Err(FixedPointError::FixedPoint(_))
        ));
        let e = separation_radius(&Homeo::scaling(2.0).unwrap(), c(1.0, 0.0), 1.0).unwrap();
        assert!(1.0 > 3.0 * e);
    }

    #[test]
    fn certificate_json_shape() {
        let cert = Certificate {
            verdict: Verdict::FixedPointFree { region: unit(), margin: 0.5 },
            witness: Some(c(1.0, -2.0)),
        };
        let v: serde_json::Value = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["verdict"], "fixed_point_free");
        assert_eq!(v["witness"]["im"], -2.0);
        assert_eq!(v["region"]["center"]["re"], 0.0);
    }
}
