//! Text syntax for homeomorphisms.
//!
//! ```text
//! expr    := atom { "." atom }
//! atom    := base [ "^-1" ]
//! base    := "id" | "conj"
//!          | "translate(" complex ")" | "rotate(" real ")" | "scale(" real ")"
//!          | "bump(center=" complex ",rho=" real ",delta=" real ",eta=" real ")"
//!          | "planebump(center=" complex ",rho=" real ",delta=" real ",eta=" real ")"
//!          | "(" expr ")"
//! complex := real [ ("+" | "-") real "i" ]
//! ```
//!
//! `f . g` is `f ∘ g` (so `g` acts first) and chains associate to the left.
//! `bump` is the radial deformation with the identity chart; `planebump`
//! is the same disk map conjugated to the plane by `z ↦ z/(1−|z|)`.
//! Whitespace between tokens is ignored.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::homeo::{plane_from_disk, DiskHomeo, Homeo, Primitive, RadialBump};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<&'static str>, found: String },
    #[error("domain error at byte {offset}: {message}")]
    Domain { offset: usize, message: String },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::Domain { offset, .. } => *offset,
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Homeo, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let h = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected(vec!["'.'", "end of input"]));
    }
    Ok(h)
}

/// Parse a lone `complex` production, e.g. `0.5-2i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let z = p.complex()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected(vec!["end of input"]));
    }
    Ok(z)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn found(&self) -> String {
        match self.src.get(self.pos..) {
            Some(rest) if !rest.is_empty() => {
                let tail = String::from_utf8_lossy(&rest[..rest.len().min(12)]);
                format!("{tail:?}")
            }
            _ => "end of input".to_string(),
        }
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ExprError {
        ExprError::Syntax { offset: self.pos, expected, found: self.found() }
    }

    fn eat(&mut self, tok: &'static str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &'static str, label: &'static str) -> Result<(), ExprError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(vec![label]))
        }
    }

    fn expr(&mut self) -> Result<Homeo, ExprError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'.') {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = Homeo::compose(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Homeo, ExprError> {
        let base = self.base()?;
        if self.eat("^-1") {
            Ok(base.inverse())
        } else {
            Ok(base)
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn base(&mut self) -> Result<Homeo, ExprError> {
        const BASES: [&str; 8] =
            ["'id'", "'conj'", "'translate('", "'rotate('", "'scale('", "'bump('", "'planebump('", "'('"];
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(")", "')'")?;
            return Ok(inner);
        }
        let start = self.pos;
        let name = self.ident();
        let with_paren = |p: &mut Self| p.expect("(", "'('");
        match name {
            "id" => Ok(Homeo::identity()),
            "conj" => Ok(Homeo::conjugation()),
            "translate" => {
                with_paren(self)?;
                let at = self.pos;
                let a = self.complex()?;
                self.expect(")", "')'")?;
                Primitive::translation(a).map(Homeo::from).map_err(|e| domain(at, e))
            }
            "rotate" => {
                with_paren(self)?;
                let t = self.real()?;
                self.expect(")", "')'")?;
                Ok(Homeo::rotation(t))
            }
            "scale" => {
                with_paren(self)?;
                let at = self.pos;
                let s = self.real()?;
                self.expect(")", "')'")?;
                Homeo::scaling(s).map_err(|e| domain(at, e))
            }
            "bump" | "planebump" => {
                with_paren(self)?;
                let at = self.pos;
                self.keyword("center")?;
                let center = self.complex()?;
                self.expect(",", "','")?;
                self.keyword("rho")?;
                let rho = self.real()?;
                self.expect(",", "','")?;
                self.keyword("delta")?;
                let delta = self.real()?;
                self.expect(",", "','")?;
                self.keyword("eta")?;
                let eta = self.real()?;
                self.expect(")", "')'")?;
                let bump = RadialBump::new(center, rho, delta, eta).map_err(|e| domain(at, e))?;
                Ok(if name == "bump" {
                    Homeo::ChartBump { chart: Arc::new(Homeo::identity()), bump }
                } else {
                    plane_from_disk(DiskHomeo::bump(bump))
                })
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.unexpected(BASES.to_vec()))
            }
        }
    }

    fn keyword(&mut self, key: &'static str) -> Result<(), ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.ident() != key {
            self.pos = start;
            return Err(self.unexpected(vec![match key {
                "center" => "'center='",
                "rho" => "'rho='",
                "delta" => "'delta='",
                _ => "'eta='",
            }]));
        }
        self.expect("=", "'='")
    }

    fn real(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let digits_from = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let mut mantissa = i - digits_from;
        if i < s.len() && s[i] == b'.' {
            i += 1;
            let frac_from = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            mantissa += i - frac_from;
        }
        if mantissa == 0 {
            return Err(self.unexpected(vec!["number"]));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            let exp_from = j;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_from {
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| self.unexpected(vec!["number"]))?;
        if !v.is_finite() {
            return Err(ExprError::Domain { offset: start, message: format!("{text} is not finite") });
        }
        self.pos = i;
        Ok(v)
    }

    fn complex(&mut self) -> Result<Complex64, ExprError> {
        let re = self.real()?;
        match self.peek() {
            Some(sign @ (b'+' | b'-')) => {
                self.pos += 1;
                let mag = self.real()?;
                self.expect("i", "'i'")?;
                Ok(Complex64::new(re, if sign == b'-' { -mag } else { mag }))
            }
            _ => Ok(Complex64::new(re, 0.0)),
        }
    }
}

fn domain(offset: usize, e: impl fmt::Display) -> ExprError {
    ExprError::Domain { offset, message: e.to_string() }
}

/// Render a complex number in the `complex` production.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn bump_args(b: &RadialBump) -> String {
    format!(
        "center={},rho={},delta={},eta={}",
        format_complex(b.center()),
        b.rho(),
        b.delta(),
        b.eta()
    )
}

fn is_base(h: &Homeo) -> bool {
    match h {
        Homeo::Primitive(_) => true,
        Homeo::ChartBump { chart, .. } => **chart == Homeo::identity(),
        Homeo::DiskConjugate(psi) => matches!(**psi, DiskHomeo::Bump(_) | DiskHomeo::Identity),
        _ => false,
    }
}

fn write_disk(f: &mut fmt::Formatter<'_>, psi: &DiskHomeo) -> fmt::Result {
    match psi {
        DiskHomeo::Identity => write!(f, "id"),
        DiskHomeo::Bump(b) => write!(f, "planebump({})", bump_args(b)),
        DiskHomeo::Compose(outer, inner) => {
            write_disk(f, outer)?;
            write!(f, " . ")?;
            if matches!(**inner, DiskHomeo::Compose(..)) {
                write!(f, "(")?;
                write_disk(f, inner)?;
                write!(f, ")")
            } else {
                write_disk(f, inner)
            }
        }
        DiskHomeo::Inverse(child) => {
            if matches!(**child, DiskHomeo::Bump(_) | DiskHomeo::Identity) {
                write_disk(f, child)?;
            } else {
                write!(f, "(")?;
                write_disk(f, child)?;
                write!(f, ")")?;
            }
            write!(f, "^-1")
        }
    }
}

impl fmt::Display for Homeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homeo::Primitive(p) => match p {
                Primitive::Identity => write!(f, "id"),
                Primitive::Conjugation => write!(f, "conj"),
                Primitive::Translation(a) => write!(f, "translate({})", format_complex(*a)),
                Primitive::Rotation(t) => write!(f, "rotate({t})"),
                Primitive::Scaling(s) => write!(f, "scale({s})"),
            },
            Homeo::Compose(g, h) => {
                write!(f, "{g} . ")?;
                if matches!(**h, Homeo::Compose(..)) {
                    write!(f, "({h})")
                } else {
                    write!(f, "{h}")
                }
            }
            Homeo::Inverse(child) => {
                if is_base(child) {
                    write!(f, "{child}^-1")
                } else {
                    write!(f, "({child})^-1")
                }
            }
            Homeo::DiskConjugate(psi) => write_disk(f, psi),
            Homeo::ChartBump { chart, bump } => {
                if **chart == Homeo::identity() {
                    write!(f, "bump({})", bump_args(bump))
                } else {
                    write!(f, "({chart} . bump({}) . ({chart})^-1)", bump_args(bump))
                }
            }
        }
    }
}

impl Serialize for Homeo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Homeo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_expr(&text).map_err(serde::de::Error::custom)
    }
}
