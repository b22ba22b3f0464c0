mod common;

use std::f64::consts::PI;

use common::{c, random_homeo, random_point, rng, standard_cell};
use plane_homeo::fixed_points::{certify_fixed_point_exists, FixedPointError};
use plane_homeo::homeo::square_grid;
use plane_homeo::{
    certify_fixed_point_free, separation_radius, winding_certificate, Disk, Homeo, Verdict,
};
use rand::Rng;

fn affine<R: Rng>(r: &mut R) -> Homeo {
    let lin = Homeo::compose(Homeo::rotation(r.gen_range(-PI..PI)), Homeo::scaling(r.gen_range(0.3..3.0)).unwrap());
    let lin = if r.gen_bool(0.3) { Homeo::compose(Homeo::conjugation(), lin) } else { lin };
    Homeo::compose(Homeo::translation(random_point(r, 3.0)), lin)
}

#[test]
fn nonzero_winding_implies_near_fixed_point() {
    let mut r = rng(21);
    let disk = Disk::closed(c(0.0, 0.0), 2.0).unwrap();
    let spacing = 0.01;
    let mut nonzero = 0;
    let mut tried = 0;
    while tried < 20 {
        let h = affine(&mut r);
        let w = match winding_certificate(&h, disk, 64) {
            Ok(w) => w,
            Err(FixedPointError::Inconclusive(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        tried += 1;
        if w.index == 0 {
            continue;
        }
        nonzero += 1;
        let best = square_grid(disk, spacing)
            .into_iter()
            .map(|z| (h.eval(z).unwrap() - z).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 10.0 * spacing, "{h}: index {} but min displacement {best}", w.index);
    }
    assert!(nonzero >= 5, "only {nonzero} maps had a fixed point in the disk");
}

#[test]
fn orientation_reversing_fixed_point_has_index_minus_one() {
    // z ↦ 2 z̄: displacement 2z̄ − z winds −1 times round the unit circle.
    let h = Homeo::compose(Homeo::scaling(2.0).unwrap(), Homeo::conjugation());
    let w = winding_certificate(&h, Disk::open(c(0.0, 0.0), 1.0).unwrap(), 16).unwrap();
    assert_eq!(w.index, -1);
}

#[test]
fn certificates_never_contradict() {
    let fixtures = [
        Homeo::scaling(2.0).unwrap(),
        Homeo::rotation(PI),
        Homeo::translation(c(1.0, 0.0)),
        Homeo::compose(Homeo::translation(c(0.001, 0.0)), Homeo::conjugation()),
        Homeo::identity(),
        Homeo::compose(Homeo::translation(c(0.0, 0.3)), standard_cell().bump(0.1).unwrap()),
        Homeo::compose(Homeo::translation(c(-0.5, 0.5)), Homeo::scaling(0.5).unwrap()),
    ];
    let disks = [
        Disk::closed(c(0.0, 0.0), 1.0).unwrap(),
        Disk::closed(c(0.7, -0.4), 0.5).unwrap(),
        Disk::closed(c(-3.0, 2.0), 2.0).unwrap(),
    ];
    for h in &fixtures {
        for d in disks {
            let exists = certify_fixed_point_exists(h, d, 64).unwrap();
            let free = certify_fixed_point_free(h, d, 0.02).unwrap();
            assert!(!(exists.proves_fixed_point() && free.is_fixed_point_free()), "{h} on {d:?}");
        }
    }
}

#[test]
fn free_margin_shrinks_as_region_grows() {
    for a in [c(1.0, 0.0), c(0.3, 0.4), c(0.0, -2.0)] {
        let h = Homeo::translation(a);
        let mut prev = f64::INFINITY;
        for radius in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let cert = certify_fixed_point_free(&h, Disk::closed(c(0.0, 0.0), radius).unwrap(), 0.05).unwrap();
            let margin = match cert.verdict {
                Verdict::FixedPointFree { margin, .. } => margin,
                v => panic!("{v:?}"),
            };
            assert!(margin <= prev + 1e-12);
            prev = margin;
        }
    }
}

#[test]
fn separation_disks_are_disjoint_from_their_images() {
    let mut r = rng(8);
    let mut checked = 0;
    while checked < 40 {
        let h = random_homeo(&mut r, 2);
        let center = random_point(&mut r, 4.0);
        let eps = match separation_radius(&h, center, 1.0) {
            Ok(e) => e,
            Err(FixedPointError::FixedPoint(_)) => continue,
            Err(e) => panic!("{h} at {center}: {e}"),
        };
        checked += 1;
        for _ in 0..1000 {
            let z = center + random_point(&mut r, eps);
            let hz = h.eval(z).unwrap();
            assert!((hz - center).norm() >= eps, "{h}: image of {z} re-enters D({center}; {eps})");
        }
    }
}

#[test]
fn bump_fixed_points_are_detected_inside_the_cell() {
    // h_δ fixes the centre of the cell; the displacement winds once round
    // the circle |z| = 0.3 where h_δ pushes outward.
    let h = standard_cell().bump(0.08).unwrap();
    let w = winding_certificate(&h, Disk::open(c(0.0, 0.0), 0.3).unwrap(), 16).unwrap();
    assert_eq!(w.index, 1);
}
