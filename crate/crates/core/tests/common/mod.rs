#![allow(dead_code)]

use std::f64::consts::PI;

use plane_homeo::homeo::{cell_bump, plane_from_disk, Cell2, DiskHomeo, RadialBump};
use plane_homeo::{Complex64, Homeo};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    // Uniform in the disk.
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
}

pub fn random_bump<R: Rng>(rng: &mut R) -> RadialBump {
    let center = random_point(rng, 0.3);
    let room = 1.0 - center.norm();
    let rho = rng.gen_range(0.1..0.5) * room;
    let eta = rng.gen_range(0.05..0.24) * room;
    let delta = rng.gen_range(0.0..=eta);
    RadialBump::new(center, rho, delta, eta).expect("parameters fit in the disk")
}

pub fn random_leaf<R: Rng>(rng: &mut R) -> Homeo {
    match rng.gen_range(0..7) {
        0 => Homeo::identity(),
        1 => Homeo::translation(random_point(rng, 3.0)),
        2 => Homeo::rotation(rng.gen_range(-PI..PI)),
        3 => Homeo::scaling(rng.gen_range(0.5..2.0)).unwrap(),
        4 => Homeo::conjugation(),
        5 => {
            let b = random_bump(rng);
            let cell = Cell2::standard(b.center(), b.rho(), b.eta()).unwrap();
            cell_bump(&cell, b.delta()).unwrap()
        }
        _ => plane_from_disk(DiskHomeo::bump(random_bump(rng))),
    }
}

/// Random expression tree of bounded depth.
pub fn random_homeo<R: Rng>(rng: &mut R, depth: u32) -> Homeo {
    if depth == 0 {
        return random_leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => random_leaf(rng),
        1 => random_homeo(rng, depth - 1).inverse(),
        _ => Homeo::compose(random_homeo(rng, depth - 1), random_homeo(rng, depth - 1)),
    }
}

/// The standard cell used in fixtures: identity chart, α = 0, ρ = 0.25, η = 0.1.
pub fn standard_cell() -> Cell2 {
    Cell2::standard(c(0.0, 0.0), 0.25, 0.1).unwrap()
}
