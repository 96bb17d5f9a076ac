//! Elements of `Q(ζ_N)(u)` with `u = q^{1/D}`, times a power of `log q`.
//!
//! The denominator is kept factored as a product of monic polynomials with
//! nonzero constant term. Sums use the product of the maximal powers of each
//! key as a common denominator, and every operation cancels keys that divide
//! the numerator exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::cyclo::CycloNumber;
use super::mono::MonoConst;
use super::poly::{fmt_terms, LPoly, MonicKey};
use super::rational::{fmt_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FieldElement {
    n: u32,
    d: u32,
    num: LPoly,
    den: BTreeMap<MonicKey, u32>,
    logq: i32,
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { n: 1, d: 1, num: LPoly::zero(1), den: BTreeMap::new(), logq: 0 }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_cyclo(CycloNumber::from_rational(1, r))
    }

    pub fn from_i64(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(k.into()))
    }

    pub fn from_cyclo(c: CycloNumber) -> Self {
        let n = c.order();
        FieldElement { n, d: 1, num: LPoly::constant(c), den: BTreeMap::new(), logq: 0 }
    }

    /// `ζ^phase q^exp`.
    pub fn from_mono(m: &MonoConst) -> Self {
        let d: u32 = m.exp.denom().try_into().expect("exponent denominator fits in u32");
        let e: i64 = m.exp.numer().try_into().expect("exponent numerator fits in i64");
        let z = CycloNumber::root_of_unity(&m.phase);
        let n = z.order();
        FieldElement { n, d, num: LPoly::monomial(z, e), den: BTreeMap::new(), logq: 0 }
    }

    /// `q^e`.
    pub fn q_pow(e: Rational) -> Self {
        Self::from_mono(&MonoConst::q_pow(e))
    }

    /// `(log q)^k`.
    pub fn logq_pow(k: i32) -> Self {
        let mut x = Self::one();
        x.logq = k;
        x
    }

    pub fn cyclo_order(&self) -> u32 {
        self.n
    }

    pub fn root_order(&self) -> u32 {
        self.d
    }

    pub fn logq_power(&self) -> i32 {
        self.logq
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Re-expresses the element over `Q(ζ_n)(q^{1/d})`.
    pub fn promote(&self, n: u32, d: u32) -> Self {
        assert!(n.is_multiple_of(self.n) && d.is_multiple_of(self.d), "promotion must refine the context");
        if n == self.n && d == self.d {
            return self.clone();
        }
        let k = d / self.d;
        FieldElement {
            n,
            d,
            num: self.num.embed(n).subst_pow(k),
            den: self.den.iter().map(|(key, e)| (key.embed(n).subst_pow(k), *e)).collect(),
            logq: self.logq,
        }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.n.lcm(&b.n);
        let d = a.d.lcm(&b.d);
        (a.promote(n, d), b.promote(n, d))
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            return FieldElement { n: self.n, d: self.d, num: self.num, den: BTreeMap::new(), logq: 0 };
        }
        let keys: Vec<MonicKey> = self.den.keys().cloned().collect();
        for key in keys {
            let e = self.den.get_mut(&key).unwrap();
            while *e > 0 {
                match self.num.div_exact_monic(&key) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
            if *e == 0 {
                self.den.remove(&key);
            }
        }
        self
    }

    pub fn try_mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let (a, b) = Self::align(self, o);
        let mut den = a.den.clone();
        for (k, e) in &b.den {
            *den.entry(k.clone()).or_insert(0) += e;
        }
        FieldElement { n: a.n, d: a.d, num: a.num.mul(&b.num), den, logq: a.logq + b.logq }.cancel()
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.logq != o.logq {
            return Err(Error::LogqMismatch { left: self.logq, right: o.logq });
        }
        let (a, b) = Self::align(self, o);
        if a.den == b.den {
            let r = FieldElement { n: a.n, d: a.d, num: a.num.add(&b.num), den: a.den, logq: a.logq };
            return Ok(r.cancel());
        }
        let mut den = a.den.clone();
        for (k, e) in &b.den {
            let x = den.entry(k.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let lift = |x: &FieldElement| {
            let mut p = x.num.clone();
            for (k, e) in &den {
                let have = x.den.get(k).copied().unwrap_or(0);
                for _ in have..*e {
                    p = p.mul(&k.as_poly());
                }
            }
            p
        };
        let num = lift(&a).add(&lift(&b));
        Ok(FieldElement { n: a.n, d: a.d, num, den, logq: a.logq }.cancel())
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        FieldElement { n: self.n, d: self.d, num: self.num.neg(), den: self.den.clone(), logq: self.logq }
    }

    pub fn inv(&self) -> Result<Self> {
        let (lead, low, key) = self.num.split_monic().ok_or(Error::DivisionByZero)?;
        let mut num = LPoly::monomial(lead.inv()?.embed(self.n), -low);
        for (k, e) in &self.den {
            for _ in 0..*e {
                num = num.mul(&k.as_poly());
            }
        }
        let mut den = BTreeMap::new();
        if let Some(k) = key {
            den.insert(k, 1);
        }
        Ok(FieldElement { n: self.n, d: self.d, num, den, logq: -self.logq }.cancel())
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.try_mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        FieldElement { n: self.n, d: self.d, num: self.num.scale_rational(r), den: self.den.clone(), logq: self.logq }
    }

    /// Exact value when the element is a rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.logq != 0 || !self.den.is_empty() {
            return if self.is_zero() { Some(Rational::zero()) } else { None };
        }
        self.num.as_constant().and_then(|c| c.as_rational())
    }

    /// Numeric value with `q` substituted and `ζ_N ↦ exp(2πi/N)`.
    pub fn to_complex(&self, q: f64) -> Complex64 {
        let u = Complex64::new(q.powf(1.0 / self.d as f64), 0.0);
        let mut v = self.num.eval_complex(u);
        for (k, e) in &self.den {
            v /= k.eval_complex(u).powi(*e as i32);
        }
        if self.logq != 0 {
            v *= q.ln().powi(self.logq);
        }
        v
    }

    fn fmt_var(&self) -> impl Fn(i64) -> String + '_ {
        move |e: i64| {
            if e == 0 {
                return String::new();
            }
            let r = Rational::new(e.into(), (self.d as i64).into());
            if r.is_one() {
                "q".to_string()
            } else if r.denom().is_one() && e > 0 {
                format!("q^{}", r.numer())
            } else {
                format!("q^({})", fmt_rational(&r))
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.fmt_var();
        let mut s = if self.num.num_terms() == 1 && self.den.is_empty() {
            // A single term prints as `coeff*zeta..*q^..`.
            let e = self.num.low();
            let c = self.num.coeff(e);
            let v = var(e);
            match (c.as_rational(), v.is_empty()) {
                (Some(r), true) => fmt_rational(&r),
                (Some(r), false) if r.is_one() => v,
                (Some(r), false) if (-r.clone()).is_one() => format!("-{v}"),
                (Some(r), false) => format!("{}*{v}", fmt_rational(&r)),
                (None, true) if c.num_terms_is_one() => c.to_string(),
                (None, true) => format!("({c})"),
                (None, false) if c.num_terms_is_one() => format!("{c}*{v}"),
                (None, false) => format!("({c})*{v}"),
            }
        } else {
            let body = fmt_terms(&self.num, &var);
            if self.den.is_empty() {
                body
            } else {
                let dens: Vec<String> = self
                    .den
                    .iter()
                    .map(|(k, e)| {
                        let p = fmt_terms(&k.as_poly(), &var);
                        if *e == 1 {
                            format!("({p})")
                        } else {
                            format!("({p})^{e}")
                        }
                    })
                    .collect();
                format!("({body})/({})", dens.join("*"))
            }
        };
        if self.logq != 0 && !self.is_zero() {
            s = format!("{s}*log(q)^({})", self.logq);
        }
        write!(f, "{s}")
    }
}

impl CycloNumber {
    fn num_terms_is_one(&self) -> bool {
        !self.is_compound()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.logq == other.logq && self.try_sub(other).map(|x| x.is_zero()).unwrap_or(false)
    }
}

impl Eq for FieldElement {}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<&MonoConst> for FieldElement {
    fn from(m: &MonoConst) -> Self {
        Self::from_mono(m)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                let f: fn(&FieldElement, &FieldElement) -> FieldElement = $body;
                f(self, o)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b).expect("log q powers must match in a sum"));
binop!(Sub, sub, |a, b| a.try_sub(b).expect("log q powers must match in a difference"));
binop!(Mul, mul, |a, b| a.try_mul(b));
binop!(Div, div, |a, b| a.try_div(b).expect("division by zero"));

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn q(e: Rational) -> FieldElement {
        FieldElement::q_pow(e)
    }

    #[test]
    fn spec_style_identities() {
        let h = q(rat(1, 2));
        assert_eq!(&h * &h, q(int(1)));
        let one = FieldElement::one();
        assert_eq!(&(&one - &q(int(1))) + &q(int(1)), one);
        let z = FieldElement::from_mono(&MonoConst::root(rat(1, 3)));
        assert_eq!(&(&z * &z) * &z, one);
    }

    #[test]
    fn rational_functions_cancel() {
        let one = FieldElement::one();
        let a = &one - &q(int(1)); // 1 - q
        let b = &one - &q(int(2)); // 1 - q^2 = (1-q)(1+q)
        let r = &b / &a;
        assert_eq!(r, &one + &q(int(1)));
        assert_eq!(r.to_string(), "1 + q");
        let s = &(&one / &a) - &(&one / &b);
        // 1/(1-q) - 1/(1-q^2) = q/(1-q^2)
        assert_eq!(s, &q(int(1)) / &b);
        assert!((s.to_complex(2.0).re - (2.0 / -3.0)).abs() < 1e-12);
    }

    #[test]
    fn context_promotion() {
        let a = q(rat(1, 3));
        let b = q(rat(1, 2));
        let c = &a * &b;
        assert_eq!(c.root_order(), 6);
        assert_eq!(c, q(rat(5, 6)));
        assert_eq!(c.to_string(), "q^(5/6)");
        let z = FieldElement::from_mono(&MonoConst::new(rat(1, 3), rat(1, 2)));
        assert_eq!(z.to_string(), "zeta(3)^1*q^(1/2)");
    }

    #[test]
    fn errors() {
        assert!(FieldElement::one().try_div(&FieldElement::zero()).is_err());
        let l = FieldElement::logq_pow(1);
        assert!(matches!(FieldElement::one().try_add(&l), Err(Error::LogqMismatch { .. })));
        assert_eq!((&l * &FieldElement::logq_pow(-1)).logq_power(), 0);
    }
}
