use num_complex::Complex64;
use super::HomeoError;

/// Plane maps with closed-form inverses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Identity,
    /// `z ↦ z + a`
    Translation(Complex64),
    /// `z ↦ e^{iθ} z`
    Rotation(f64),
    /// `z ↦ s z`, `s > 0`
    Scaling(f64),
    /// `z ↦ z̄`
    Conjugation,
}

impl Primitive {
    pub fn translation(a: Complex64) -> Result<Self, HomeoError> {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(HomeoError::Domain(format!("translation offset {a} is not finite")));
        }
        Ok(Primitive::Translation(a))
    }

    pub fn rotation(theta: f64) -> Result<Self, HomeoError> {
        if !theta.is_finite() {
            return Err(HomeoError::Domain(format!("rotation angle {theta} is not finite")));
        }
        Ok(Primitive::Rotation(theta))
    }

    pub fn scaling(s: f64) -> Result<Self, HomeoError> {
        if !(s.is_finite() && s > 0.0) {
            return Err(HomeoError::Domain(format!("scale factor must be positive, got {s}")));
        }
        Ok(Primitive::Scaling(s))
    }

    pub(crate) fn check(&self) -> Result<(), HomeoError> {
        match *self {
            Primitive::Translation(a) => Primitive::translation(a).map(|_| ()),
            Primitive::Rotation(t) => Primitive::rotation(t).map(|_| ()),
            Primitive::Scaling(s) => Primitive::scaling(s).map(|_| ()),
            Primitive::Identity | Primitive::Conjugation => Ok(()),
        }
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            Primitive::Identity => z,
            Primitive::Translation(a) => z + a,
            Primitive::Rotation(t) => Complex64::from_polar(1.0, t) * z,
            Primitive::Scaling(s) => z * s,
            Primitive::Conjugation => z.conj(),
        }
    }

    #[inline]
    pub fn apply_inverse(&self, w: Complex64) -> Complex64 {
        match *self {
            Primitive::Identity => w,
            Primitive::Translation(a) => w - a,
            Primitive::Rotation(t) => Complex64::from_polar(1.0, -t) * w,
            Primitive::Scaling(s) => w / s,
            Primitive::Conjugation => w.conj(),
        }
    }

    pub fn inverse(&self) -> Primitive {
        match *self {
            Primitive::Identity => Primitive::Identity,
            Primitive::Translation(a) => Primitive::Translation(-a),
            Primitive::Rotation(t) => Primitive::Rotation(-t),
            Primitive::Scaling(s) => Primitive::Scaling(1.0 / s),
            Primitive::Conjugation => Primitive::Conjugation,
        }
    }

    /// Global Lipschitz constant of the forward map.
    pub fn lipschitz(&self) -> f64 {
        match *self {
            Primitive::Scaling(s) => s,
            _ => 1.0,
        }
    }
}
