//! Serde adapter writing a complex number as `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Point {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    Point { re: z.re, im: z.im }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let p = Point::deserialize(d)?;
    Ok(Complex64::new(p.re, p.im))
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| Point { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<Point>::deserialize(d)?.map(|p| Complex64::new(p.re, p.im)))
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| Point { re: z.re, im: z.im }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<Point>::deserialize(d)?
            .into_iter()
            .map(|p| Complex64::new(p.re, p.im))
            .collect())
    }
}
