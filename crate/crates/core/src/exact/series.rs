//! Univariate rational functions over the coefficient field and their
//! truncated Laurent expansions around a point.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::field::FieldElement;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Laurent polynomial `Σ c_k t^k` with field coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UPoly {
    terms: BTreeMap<i64, FieldElement>,
}

impl UPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FieldElement, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        UPoly { terms }
    }

    /// `1 − c·t^k`.
    pub fn one_minus(c: FieldElement, k: i64) -> Self {
        Self::constant(FieldElement::one()).sub(&Self::monomial(c, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &FieldElement)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            let v = match terms.remove(k) {
                Some(x) => &x + c,
                None => c.clone(),
            };
            if !v.is_zero() {
                terms.insert(*k, v);
            }
        }
        UPoly { terms }
    }

    pub fn neg(&self) -> Self {
        UPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = UPoly::zero();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                acc = acc.add(&UPoly::monomial(a * b, i + j));
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(FieldElement::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, t: &FieldElement) -> Result<FieldElement> {
        let mut s = FieldElement::zero();
        for (k, c) in &self.terms {
            s = s.try_add(&c.try_mul(&t.pow(*k)?))?;
        }
        Ok(s)
    }

    /// Expansion in `h = t − s₀` through `h^order` (non-negative powers only;
    /// negative powers of `t` are expanded as geometric series).
    fn expand(&self, s0: &FieldElement, order: i64) -> Result<Vec<FieldElement>> {
        let len = (order + 1).max(0) as usize;
        let mut out = vec![FieldElement::zero(); len];
        for (k, c) in &self.terms {
            // t^k = s0^k (1 + h/s0)^k = Σ_j binom(k, j) s0^{k-j} h^j
            let mut binom = Rational::one();
            for (j, slot) in out.iter_mut().enumerate() {
                if binom.is_zero() {
                    break;
                }
                let term = c.try_mul(&s0.pow(k - j as i64)?).scale(&binom);
                *slot = slot.try_add(&term)?;
                binom = binom * Rational::from_integer((k - j as i64).into()) / Rational::from_integer((j as i64 + 1).into());
            }
        }
        Ok(out)
    }
}

/// A ratio of Laurent polynomials in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniRational {
    pub num: UPoly,
    pub den: UPoly,
}

impl UniRational {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        UniRational { num, den }
    }

    pub fn from_poly(p: UPoly) -> Self {
        UniRational { num: p, den: UPoly::constant(FieldElement::one()) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        UniRational { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        UniRational { num: self.num.mul(&UPoly::constant(c.clone())), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        UniRational { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }
}

/// `Σ_{k=valuation}^{truncation} c_k (t − s₀)^k`, exact through `truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub center: FieldElement,
    pub valuation: i64,
    pub coeffs: Vec<FieldElement>,
    pub truncation: i64,
}

impl LaurentSeries {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// Coefficient of `(t − s₀)^k`.
    pub fn coeff(&self, k: i64) -> Result<FieldElement> {
        if k > self.truncation {
            return Err(Error::InsufficientTruncation { needed: k, have: self.truncation });
        }
        if k < self.valuation {
            return Ok(FieldElement::zero());
        }
        Ok(self.coeffs.get((k - self.valuation) as usize).cloned().unwrap_or_else(FieldElement::zero))
    }

    /// Cauchy product through the smaller available truncation.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let valuation = self.valuation + o.valuation;
        let truncation = (self.truncation + o.valuation).min(o.truncation + self.valuation);
        let len = (truncation - valuation + 1).max(0) as usize;
        let mut coeffs = vec![FieldElement::zero(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            for j in 0..=i {
                let a = self.coeffs.get(j);
                let b = o.coeffs.get(i - j);
                if let (Some(a), Some(b)) = (a, b) {
                    *c = c.try_add(&a.try_mul(b))?;
                }
            }
        }
        Ok(LaurentSeries { center: self.center.clone(), valuation, coeffs, truncation })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let valuation = self.valuation.min(o.valuation);
        let truncation = self.truncation.min(o.truncation);
        let mut coeffs = Vec::new();
        for k in valuation..=truncation {
            coeffs.push(self.coeff(k)?.try_add(&o.coeff(k)?)?);
        }
        let mut s = LaurentSeries { center: self.center.clone(), valuation, coeffs, truncation };
        s.normalize();
        Ok(s)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut s = LaurentSeries {
            center: self.center.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x.try_mul(c)).collect(),
            truncation: self.truncation,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.valuation = self.truncation + 1;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
    }
}

/// Laurent expansion of `f` around `t = s₀` through `(t − s₀)^order`.
pub fn series_expand(f: &UniRational, s0: &FieldElement, order: i64) -> Result<LaurentSeries> {
    if f.num.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if f.den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if s0.is_zero() {
        return Err(Error::InvalidInput("expansion center must be a nonzero torus coordinate".into()));
    }
    let mut extra = 4;
    loop {
        let span = order + extra;
        let num = f.num.expand(s0, span)?;
        let den = f.den.expand(s0, span)?;
        let vn = num.iter().position(|c| !c.is_zero());
        let vd = den.iter().position(|c| !c.is_zero());
        let (Some(vn), Some(vd)) = (vn, vd) else {
            extra *= 2;
            if extra > 1 << 12 {
                return Err(Error::ZeroFunction);
            }
            continue;
        };
        let valuation = vn as i64 - vd as i64;
        if valuation > order {
            return Ok(LaurentSeries { center: s0.clone(), valuation: order + 1, coeffs: vec![], truncation: order });
        }
        let len = (order - valuation + 1) as usize;
        let a = &num[vn..];
        let b = &den[vd..];
        if a.len() < len || b.len() < len {
            extra *= 2;
            continue;
        }
        // Series division c = a / b with b[0] ≠ 0.
        let b0inv = b[0].inv()?;
        let mut c: Vec<FieldElement> = Vec::with_capacity(len);
        for i in 0..len {
            let mut s = a[i].clone();
            for j in 1..=i {
                s = s.try_sub(&b[j].try_mul(&c[i - j]))?;
            }
            c.push(s.try_mul(&b0inv));
        }
        return Ok(LaurentSeries { center: s0.clone(), valuation, coeffs: c, truncation: order });
    }
}

/// The coefficient of `(t − s₀)^{-1}`.
pub fn residue_coefficient(s: &LaurentSeries) -> Result<FieldElement> {
    s.coeff(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn fe(r: Rational) -> FieldElement {
        FieldElement::from_rational(r)
    }

    #[test]
    fn simple_pole_coefficient() {
        // 1/(1 − t/2) at t = 2
        let f = UniRational::new(UPoly::constant(FieldElement::one()), UPoly::one_minus(fe(rat(1, 2)), 1));
        let s = series_expand(&f, &fe(int(2)), 2).unwrap();
        assert_eq!(s.valuation, -1);
        assert_eq!(s.coeff(-1).unwrap(), fe(int(-2)));
        assert_eq!(residue_coefficient(&s).unwrap(), fe(int(-2)));
    }

    #[test]
    fn zero_order_two() {
        let f = UniRational::from_poly(UPoly::one_minus(FieldElement::one(), 1).pow(2));
        let s = series_expand(&f, &FieldElement::one(), 3).unwrap();
        assert_eq!(s.valuation, 2);
        assert_eq!(s.coeff(2).unwrap(), FieldElement::one());
        assert!(residue_coefficient(&s).unwrap().is_zero());
    }

    #[test]
    fn pole_with_q_center() {
        // 1/(t(1 − t/q)) at t = q has residue −1.
        let q = FieldElement::q_pow(int(1));
        let den = UPoly::monomial(FieldElement::one(), 1).mul(&UPoly::one_minus(q.inv().unwrap(), 1));
        let f = UniRational::new(UPoly::constant(FieldElement::one()), den);
        let s = series_expand(&f, &q, 0).unwrap();
        assert_eq!(residue_coefficient(&s).unwrap(), fe(int(-1)));
        let short = series_expand(&f, &q, -2).unwrap();
        assert!(matches!(residue_coefficient(&short), Err(Error::InsufficientTruncation { .. })));
    }
}
