//! Laurent polynomials in one variable over a cyclotomic field.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::cyclo::CycloNumber;
use super::rational::Rational;

/// `Σ c_i u^{low+i}` with coefficients in `Q(ζ_n)`; trimmed at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    n: u32,
    low: i64,
    coeffs: Vec<CycloNumber>,
}

/// A monic ordinary polynomial of positive degree with nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonicKey(Vec<CycloNumber>);

impl MonicKey {
    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn order(&self) -> u32 {
        self.0[0].order()
    }

    pub fn as_poly(&self) -> LPoly {
        LPoly::from_coeffs(self.order(), 0, self.0.clone())
    }

    pub fn embed(&self, m: u32) -> Self {
        MonicKey(self.0.iter().map(|c| c.embed(m)).collect())
    }

    /// `u ↦ u^k`.
    pub fn subst_pow(&self, k: u32) -> Self {
        if k == 1 {
            return self.clone();
        }
        let n = self.order();
        let mut v = vec![CycloNumber::zero(n); self.degree() * k as usize + 1];
        for (i, c) in self.0.iter().enumerate() {
            v[i * k as usize] = c.clone();
        }
        MonicKey(v)
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.to_complex())
    }
}

impl LPoly {
    pub fn zero(n: u32) -> Self {
        LPoly { n, low: 0, coeffs: Vec::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::constant(CycloNumber::one(n))
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · u^e`.
    pub fn monomial(c: CycloNumber, e: i64) -> Self {
        let n = c.order();
        Self::from_coeffs(n, e, vec![c])
    }

    pub fn from_coeffs(n: u32, low: i64, coeffs: Vec<CycloNumber>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c.embed(n)).collect();
        let mut p = LPoly { n, low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloNumber::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent present.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn lead(&self) -> Option<&CycloNumber> {
        self.coeffs.last()
    }

    pub fn coeff(&self, e: i64) -> CycloNumber {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            CycloNumber::zero(self.n)
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn embed(&self, m: u32) -> Self {
        if m == self.n {
            return self.clone();
        }
        LPoly { n: m, low: self.low, coeffs: self.coeffs.iter().map(|c| c.embed(m)).collect() }
    }

    /// `u ↦ u^k`.
    pub fn subst_pow(&self, k: u32) -> Self {
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut v = vec![CycloNumber::zero(self.n); (self.coeffs.len() - 1) * k as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k as usize] = c.clone();
        }
        LPoly { n: self.n, low: self.low * k as i64, coeffs: v }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let coeffs = (low..=high).map(|e| self.coeff(e).add(&o.coeff(e))).collect();
        let mut p = LPoly { n: self.n, low, coeffs };
        p.trim();
        p
    }

    pub fn neg(&self) -> Self {
        LPoly { n: self.n, low: self.low, coeffs: self.coeffs.iter().map(CycloNumber::neg).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.n);
        }
        let mut v = vec![CycloNumber::zero(self.n); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        let mut p = LPoly { n: self.n, low: self.low + o.low, coeffs: v };
        p.trim();
        p
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let c = c.embed(self.n);
        let mut p = LPoly { n: self.n, low: self.low, coeffs: self.coeffs.iter().map(|x| x.mul(&c)).collect() };
        p.trim();
        p
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.n);
        }
        LPoly { n: self.n, low: self.low, coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect() }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LPoly { n: self.n, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Splits a nonzero polynomial as `lead · u^low · K` with `K` monic of
    /// nonzero constant term; `K` is `None` when the polynomial is a monomial.
    pub fn split_monic(&self) -> Option<(CycloNumber, i64, Option<MonicKey>)> {
        let lead = self.lead()?.clone();
        if self.coeffs.len() == 1 {
            return Some((lead, self.low, None));
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        let key = MonicKey(self.coeffs.iter().map(|c| c.mul(&inv)).collect());
        Some((lead, self.low, Some(key)))
    }

    /// Exact quotient by a monic key, or `None` if the key does not divide.
    pub fn div_exact_monic(&self, key: &MonicKey) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let dk = key.degree();
        if self.coeffs.len() <= dk {
            return None;
        }
        let key = key.embed(self.n);
        let mut r = self.coeffs.clone();
        let mut out = vec![CycloNumber::zero(self.n); r.len() - dk];
        for i in (0..out.len()).rev() {
            let c = r[i + dk].clone();
            if c.is_zero() {
                continue;
            }
            for (j, kj) in key.0.iter().enumerate().take(dk) {
                if !kj.is_zero() {
                    r[i + j] = r[i + j].sub(&c.mul(kj));
                }
            }
            r[i + dk] = CycloNumber::zero(self.n);
            out[i] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut p = LPoly { n: self.n, low: self.low, coeffs: out };
        p.trim();
        Some(p)
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        let s = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.to_complex());
        s * u.powi(self.low as i32)
    }

    /// The constant value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<CycloNumber> {
        if self.is_zero() {
            Some(CycloNumber::zero(self.n))
        } else if self.low == 0 && self.coeffs.len() == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

/// Formats `Σ c_e u^e` with `u^e` rendered by `var`.
pub(crate) fn fmt_terms(p: &LPoly, var: &dyn Fn(i64) -> String) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = p.low + i as i64;
        let v = var(e);
        let (neg, body) = match c.as_rational() {
            Some(r) if v.is_empty() => (r < Rational::zero(), super::rational::fmt_rational(&num_traits::Signed::abs(&r))),
            Some(r) if r.is_one() => (false, v.clone()),
            Some(r) if (-r.clone()).is_one() => (true, v.clone()),
            Some(r) => (r < Rational::zero(), format!("{}*{}", super::rational::fmt_rational(&num_traits::Signed::abs(&r)), v)),
            None if v.is_empty() => (false, format!("({c})")),
            None => (false, format!("({c})*{v}")),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = fmt_terms(self, &|e| match e {
            0 => String::new(),
            1 => "u".into(),
            e => format!("u^{e}"),
        });
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn c(n: i64) -> CycloNumber {
        CycloNumber::from_rational(1, int(n))
    }

    #[test]
    fn exact_division_by_monic() {
        // (u - 1)(u + 2) = u^2 + u - 2
        let p = LPoly::from_coeffs(1, 3, vec![c(-2), c(1), c(1)]);
        let (_, low, key) = LPoly::from_coeffs(1, 0, vec![c(-1), c(1)]).split_monic().unwrap();
        assert_eq!(low, 0);
        let q = p.div_exact_monic(&key.unwrap()).unwrap();
        assert_eq!(q, LPoly::from_coeffs(1, 3, vec![c(2), c(1)]));
        let (_, _, key3) = LPoly::from_coeffs(1, 0, vec![c(-3), c(1)]).split_monic().unwrap();
        assert!(p.div_exact_monic(&key3.unwrap()).is_none());
    }

    #[test]
    fn substitution_and_shift() {
        let p = LPoly::from_coeffs(1, -1, vec![c(1), c(0), c(2)]);
        let q = p.subst_pow(2);
        assert_eq!(q.low(), -2);
        assert_eq!(q.high(), 2);
        assert_eq!(q.coeff(2), c(2));
        assert_eq!(p.shift(1).low(), 0);
        assert_eq!(p.to_string(), "u^-1 + 2*u");
    }
}
