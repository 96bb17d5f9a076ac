//! Elements of cyclotomic fields `Q(ζ_N)`, stored as coefficient vectors
//! reduced modulo the cyclotomic polynomial `Φ_N`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, frac_part, int, to_f64, Rational};
use crate::error::{Error, Result};

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_polynomial(d);
            p = div_monic_int(&p, &q);
        }
    }
    let p = Arc::new(p);
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn div_monic_int(p: &[i64], q: &[i64]) -> Vec<i64> {
    let dq = q.len() - 1;
    let mut r = p.to_vec();
    let mut out = vec![0i64; p.len() - dq];
    for i in (0..out.len()).rev() {
        let c = r[i + dq];
        out[i] = c;
        for (j, qj) in q.iter().enumerate() {
            r[i + j] -= c * qj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    out
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// An element of `Q(ζ_N)`, `ζ_N = exp(2πi/N)`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

fn reduce_mod_phi(mut v: Vec<Rational>, order: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for i in (deg..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = v[i].clone();
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if *pj != 0 {
                    v[i - deg + j] -= &c * int(*pj);
                }
            }
            v[i] = Rational::zero();
        }
    }
    v.resize(deg, Rational::zero());
    v
}

impl CycloNumber {
    /// Zero in `Q(ζ_order)`.
    pub fn zero(order: u32) -> Self {
        CycloNumber { order, coeffs: vec![Rational::zero(); euler_phi(order)] }
    }

    /// One in `Q(ζ_order)`.
    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// The rational `r` embedded in `Q(ζ_order)`.
    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = r;
        c
    }

    /// `ζ_order^k`.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        CycloNumber { order, coeffs: reduce_mod_phi(v, order) }
    }

    /// Builds from raw coefficients of powers of `ζ_order` (any length).
    pub fn from_coeffs(order: u32, v: Vec<Rational>) -> Self {
        CycloNumber { order, coeffs: reduce_mod_phi(v, order) }
    }

    /// The root of unity `exp(2πi·phase)`, with `N` the denominator of the phase.
    pub fn root_of_unity(phase: &Rational) -> Self {
        let p = frac_part(phase);
        let n: u32 = p.denom().try_into().expect("phase denominator fits in u32");
        let k: i64 = p.numer().try_into().expect("phase numerator fits in i64");
        Self::zeta_pow(n, k)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(ζ_m)`; `order` must divide `m`.
    pub fn embed(&self, m: u32) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert!(m.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{m})", self.order);
        let step = (m / self.order) as usize;
        let mut v = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * step] = c.clone();
            }
        }
        CycloNumber { order: m, coeffs: reduce_mod_phi(v, m) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = a.order.lcm(&b.order);
        (a.embed(m), b.embed(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == other.order {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect();
            return CycloNumber { order: self.order, coeffs };
        }
        let (a, b) = Self::common(self, other);
        a.add(&b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNumber { order: self.order, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = Self::common(self, other);
            return a.mul(&b);
        }
        if self.coeffs.len() == 1 {
            return CycloNumber { order: self.order, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let n = self.coeffs.len();
        let mut v = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycloNumber { order: self.order, coeffs: reduce_mod_phi(v, self.order) }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber { order: self.order, coeffs: self.coeffs.iter().map(|x| x * r).collect() }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        // Solve (multiplication by self) · x = 1 by Gauss-Jordan elimination.
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(self.mul(&Self::zeta_pow(self.order, j as i64)).coeffs);
        }
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(c, p);
            let pv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &pv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=n {
                        let t = &a[c][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
        }
        Ok(CycloNumber { order: self.order, coeffs: a.into_iter().map(|row| row[n].clone()).collect() })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Value under the principal embedding `ζ_N ↦ exp(2πi/N)`.
    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let t = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
                z += Complex64::from_polar(to_f64(c), t);
            }
        }
        z
    }

    /// Total order comparison; only meaningful between elements of one field.
    pub fn cmp_same_field(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Whether the display needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 || self.coeffs.iter().any(|c| c.is_negative())
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            self.sub(other).is_zero()
        }
    }
}

impl Eq for CycloNumber {}

impl PartialOrd for CycloNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_same_field(other)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                parts.push(fmt_rational(c));
            } else if c.is_one() {
                parts.push(format!("zeta({})^{}", self.order, k));
            } else if (-c).is_one() {
                parts.push(format!("-zeta({})^{}", self.order, k));
            } else {
                parts.push(format!("{}*zeta({})^{}", fmt_rational(c), self.order, k));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{s}")
    }
}

/// Builds the root of unity `ζ` of a reduced phase in `[0, 1)`.
pub fn make_root_of_unity(phase: &Rational) -> CycloNumber {
    CycloNumber::root_of_unity(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn cyclotomic_polynomials_small_orders() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(30), 8);
    }

    #[test]
    fn roots_of_unity_from_phases() {
        assert!(make_root_of_unity(&rat(0, 1)).is_one());
        assert_eq!(make_root_of_unity(&rat(1, 2)).as_rational(), Some(rat(-1, 1)));
        let z = make_root_of_unity(&rat(1, 3));
        // ζ² + ζ + 1 = 0
        let s = z.mul(&z).add(&z).add(&CycloNumber::one(3));
        assert!(s.is_zero());
        assert!(z.pow(3).unwrap().is_one());
    }

    #[test]
    fn embedding_preserves_values() {
        let z3 = CycloNumber::zeta_pow(3, 1);
        let z6 = z3.embed(6);
        assert_eq!(z6, CycloNumber::zeta_pow(6, 2));
        assert!((z3.to_complex() - z6.to_complex()).norm() < 1e-12);
        let i = CycloNumber::zeta_pow(4, 1);
        assert_eq!(i.mul(&z3).pow(12).unwrap(), CycloNumber::one(12));
    }

    #[test]
    fn inverse_round_trip() {
        let a = CycloNumber::one(5).sub(&CycloNumber::zeta_pow(5, 2));
        let b = a.inv().unwrap();
        assert!(a.mul(&b).is_one());
        assert!(CycloNumber::zero(5).inv().is_err());
    }
}
