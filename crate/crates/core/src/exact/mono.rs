//! Monomial constants `ζ^phase · q^exp`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::FieldElement;
use super::rational::{fmt_rational, frac_part, int, to_f64, Rational};

/// A nonzero constant of the form `exp(2πi·phase) · q^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonoConst {
    /// Root-of-unity exponent, reduced to `[0, 1)`.
    #[serde(with = "super::rational::serde_str")]
    pub phase: Rational,
    /// Power of `q`.
    #[serde(with = "super::rational::serde_str")]
    pub exp: Rational,
}

impl MonoConst {
    pub fn new(phase: Rational, exp: Rational) -> Self {
        MonoConst { phase: frac_part(&phase), exp }
    }

    pub fn one() -> Self {
        MonoConst { phase: Rational::zero(), exp: Rational::zero() }
    }

    /// `q^e`.
    pub fn q_pow(e: Rational) -> Self {
        MonoConst { phase: Rational::zero(), exp: e }
    }

    /// `exp(2πi·p)`.
    pub fn root(p: Rational) -> Self {
        Self::new(p, Rational::zero())
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero() && self.exp.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.phase + &o.phase, &self.exp + &o.exp)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(&self.phase - &o.phase, &self.exp - &o.exp)
    }

    pub fn inv(&self) -> Self {
        Self::new(-&self.phase, -&self.exp)
    }

    pub fn pow(&self, k: i64) -> Self {
        let k = int(k);
        Self::new(&self.phase * &k, &self.exp * &k)
    }

    /// Product `Π base_i^{e_i}`.
    pub fn product<'a>(items: impl IntoIterator<Item = (&'a MonoConst, i64)>) -> Self {
        items.into_iter().fold(Self::one(), |acc, (b, e)| if e == 0 { acc } else { acc.mul(&b.pow(e)) })
    }

    /// Exact value in the coefficient field.
    pub fn to_field(&self) -> FieldElement {
        FieldElement::from_mono(self)
    }

    pub fn to_complex(&self, q: f64) -> Complex64 {
        let r = q.powf(to_f64(&self.exp));
        Complex64::from_polar(r, 2.0 * std::f64::consts::PI * to_f64(&self.phase))
    }
}

impl fmt::Display for MonoConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.phase.is_zero() {
            parts.push(format!("zeta({})^{}", self.phase.denom(), self.phase.numer()));
        }
        if !self.exp.is_zero() {
            if self.exp.is_one() {
                parts.push("q".to_string());
            } else if self.exp.denom().is_one() && self.exp.is_positive() {
                parts.push(format!("q^{}", self.exp.numer()));
            } else {
                parts.push(format!("q^({})", fmt_rational(&self.exp)));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}
