//! Factored rational functions on the torus and the μ-function.
//!
//! A [`FactorizedFunction`] is `Σ_t s_t · x^{a_t} · Π_g (1 − c_g x^{m_g})^{n_{t,g}}`
//! with a factor table shared by all terms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rational, serde_str};
use crate::exact::{int, FieldElement, MonoConst, Rational};
use crate::linalg::{dot_i, IMat};
use crate::roots::{RootLength, RootSystem};
use crate::torus::{Arrangement, Coset, HypersurfaceComponent, TorusPoint};

/// The factor `1 − c·x^mono`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub mono: Vec<i64>,
    pub c: MonoConst,
}

impl Factor {
    pub fn is_constant(&self) -> bool {
        self.mono.iter().all(|x| *x == 0)
    }

    /// Value of `c·x^mono` at `p`.
    pub fn inner_value(&self, p: &TorusPoint) -> MonoConst {
        self.c.mul(&p.monomial(&self.mono))
    }

    /// Components of the zero set `{x^mono = c^{-1}}`.
    pub fn components(&self) -> Vec<HypersurfaceComponent> {
        if self.is_constant() {
            return vec![];
        }
        HypersurfaceComponent::split(&self.mono, &self.c.inv())
    }

    /// Whether the factor vanishes identically on the hypersurface.
    pub fn vanishes_on(&self, h: &HypersurfaceComponent) -> bool {
        // mono must be k·form with c·value^k = 1
        let Some(k) = multiple_of(&self.mono, &h.form) else { return false };
        self.c.mul(&h.value.pow(k)).is_one()
    }
}

/// `k` with `v = k·m`, if it exists and `v ≠ 0`.
fn multiple_of(v: &[i64], m: &[i64]) -> Option<i64> {
    let i = m.iter().position(|x| *x != 0)?;
    if v[i] % m[i] != 0 {
        return None;
    }
    let k = v[i] / m[i];
    if k != 0 && v.iter().zip(m).all(|(a, b)| *a == k * b) {
        Some(k)
    } else {
        None
    }
}

/// One summand: `scalar · x^mono · Π_g factor_g^{mult_g}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub scalar: FieldElement,
    pub mono: Vec<i64>,
    pub mult: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedFunction {
    pub dim: usize,
    pub factors: Vec<Factor>,
    pub terms: Vec<Term>,
}

impl FactorizedFunction {
    pub fn zero(dim: usize) -> Self {
        FactorizedFunction { dim, factors: vec![], terms: vec![] }
    }

    pub fn constant(dim: usize, c: FieldElement) -> Self {
        let mut f = FactorizedFunction { dim, factors: vec![], terms: vec![] };
        if !c.is_zero() {
            f.terms.push(Term { scalar: c, mono: vec![0; dim], mult: vec![] });
        }
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, FieldElement::one())
    }

    /// `c · x^m`.
    pub fn monomial(c: FieldElement, m: Vec<i64>) -> Self {
        let dim = m.len();
        let mut f = Self::zero(dim);
        if !c.is_zero() {
            f.terms.push(Term { scalar: c, mono: m, mult: vec![] });
        }
        f
    }

    /// A single product `scalar · Π (1 − c x^m)^n`, factors kept as given.
    pub fn product(dim: usize, scalar: FieldElement, factors: Vec<(Factor, i32)>) -> Self {
        let (fs, ns): (Vec<Factor>, Vec<i32>) = factors.into_iter().unzip();
        FactorizedFunction { dim, factors: fs, terms: vec![Term { scalar, mono: vec![0; dim], mult: ns }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn mult_of(t: &Term, g: usize) -> i32 {
        t.mult.get(g).copied().unwrap_or(0)
    }

    /// Factor/multiplicity pairs of a term with nonzero multiplicity.
    pub fn term_factors<'a>(&'a self, t: &'a Term) -> impl Iterator<Item = (&'a Factor, i32)> + 'a {
        self.factors.iter().enumerate().map(move |(g, f)| (f, Self::mult_of(t, g))).filter(|(_, n)| *n != 0)
    }

    /// Canonical form: factors oriented with first nonzero monomial entry
    /// positive, identical factors merged, unused factors dropped, like
    /// terms combined and zero terms removed.
    pub fn normalize(&self) -> Self {
        let mut table: Vec<Factor> = Vec::new();
        let mut index: HashMap<Factor, usize> = HashMap::new();
        let mut acc: BTreeMap<TermKey, FieldElement> = BTreeMap::new();
        let mut order: Vec<TermKey> = Vec::new();
        for t in &self.terms {
            let mut scalar = t.scalar.clone();
            let mut mono = t.mono.clone();
            let mut mults: BTreeMap<usize, i32> = BTreeMap::new();
            let mut zero = false;
            for (f, n) in self.term_factors(t) {
                let (canon, flipped) = canonical_factor(f);
                if flipped {
                    // (1 − c x^m) = −c x^m (1 − c^{-1} x^{-m})
                    let unit = FieldElement::from_mono(&f.c).neg_ref();
                    scalar = scalar.try_mul(&unit.pow(n as i64).expect("nonzero unit"));
                    for (a, b) in mono.iter_mut().zip(&f.mono) {
                        *a += n as i64 * b;
                    }
                }
                if canon.is_constant() && canon.c.is_one() {
                    if n > 0 {
                        zero = true;
                        break;
                    }
                    panic!("constant factor (1 - 1) with negative multiplicity");
                }
                let id = *index.entry(canon.clone()).or_insert_with(|| {
                    table.push(canon);
                    table.len() - 1
                });
                *mults.entry(id).or_insert(0) += n;
            }
            if zero || scalar.is_zero() {
                continue;
            }
            let key: Vec<(usize, i32)> = mults.into_iter().filter(|(_, n)| *n != 0).collect();
            let k = (mono, key);
            match acc.get_mut(&k) {
                Some(s) => *s = s.try_add(&scalar).expect("consistent log q powers"),
                None => {
                    order.push(k.clone());
                    acc.insert(k, scalar);
                }
            }
        }
        // renumber the used factors in a canonical order
        let mut used: Vec<usize> = order.iter().flat_map(|(_, m)| m.iter().map(|(g, _)| *g)).collect();
        used.sort_by(|a, b| table[*a].cmp(&table[*b]));
        used.dedup();
        let renum: HashMap<usize, usize> = used.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let factors: Vec<Factor> = used.iter().map(|g| table[*g].clone()).collect();
        let mut terms = Vec::new();
        for k in order {
            let s = acc.remove(&k).unwrap();
            if s.is_zero() {
                continue;
            }
            let mut mult = vec![0; factors.len()];
            for (g, n) in &k.1 {
                mult[renum[g]] = *n;
            }
            terms.push(Term { scalar: s, mono: k.0, mult });
        }
        FactorizedFunction { dim: self.dim, factors, terms }
    }

    /// Sum of two functions of the same dimension.
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut out = self.clone();
        let offset = out.factors.len();
        out.factors.extend(o.factors.iter().cloned());
        for t in out.terms.iter_mut() {
            t.mult.resize(offset + o.factors.len(), 0);
        }
        for t in &o.terms {
            let mut mult = vec![0; offset];
            mult.extend(t.mult.iter().copied());
            mult.resize(offset + o.factors.len(), 0);
            out.terms.push(Term { scalar: t.scalar.clone(), mono: t.mono.clone(), mult });
        }
        out.normalize()
    }

    /// Product of two functions.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let offset = self.factors.len();
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                let mut mult: Vec<i32> = (0..offset).map(|g| Self::mult_of(a, g)).collect();
                mult.extend((0..o.factors.len()).map(|g| Self::mult_of(b, g)));
                let mono = a.mono.iter().zip(&b.mono).map(|(x, y)| x + y).collect();
                terms.push(Term { scalar: a.scalar.try_mul(&b.scalar), mono, mult });
            }
        }
        FactorizedFunction { dim: self.dim, factors, terms }.normalize()
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.scalar = t.scalar.try_mul(c);
        }
        out.terms.retain(|t| !t.scalar.is_zero());
        out
    }

    /// Multiplicative inverse of a single-term function.
    pub fn inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::MultiTerm);
        }
        let t = &self.terms[0];
        Ok(FactorizedFunction {
            dim: self.dim,
            factors: self.factors.clone(),
            terms: vec![Term {
                scalar: t.scalar.inv()?,
                mono: t.mono.iter().map(|x| -x).collect(),
                mult: t.mult.iter().map(|n| -n).collect(),
            }],
        })
    }

    /// Substitutes `x = shift · y^B` (`B` is `dim × k`, given as rows).
    pub fn pullback(&self, shift: &TorusPoint, b: &IMat, k: usize) -> Self {
        let mapm = |m: &[i64]| -> Vec<i64> { (0..k).map(|j| (0..self.dim).map(|i| m[i] * b[i][j]).sum()).collect() };
        let factors = self.factors.iter().map(|f| Factor { mono: mapm(&f.mono), c: f.c.mul(&shift.monomial(&f.mono)) }).collect();
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                scalar: t.scalar.try_mul(&FieldElement::from_mono(&shift.monomial(&t.mono))),
                mono: mapm(&t.mono),
                mult: t.mult.clone(),
            })
            .collect();
        FactorizedFunction { dim: k, factors, terms }
    }

    /// Restriction to a coset in its local coordinates.
    pub fn restrict(&self, a: &Coset) -> Self {
        self.pullback(&a.base, &a.directions, a.dim())
    }

    /// `t ↦ f(base · t^v)`.
    pub fn restrict_to_line(&self, base: &TorusPoint, direction: &[i64]) -> Self {
        let b: IMat = direction.iter().map(|x| vec![*x]).collect();
        self.pullback(base, &b, 1)
    }

    /// Pole order along a hypersurface: `Σ −n_g` over the factors vanishing
    /// identically on `h` (negative values are zeros).
    pub fn order_along(&self, h: &HypersurfaceComponent) -> Result<i64> {
        if self.terms.len() != 1 {
            return Err(Error::MultiTerm);
        }
        let t = &self.terms[0];
        Ok(self.term_factors(t).filter(|(f, _)| f.vanishes_on(h)).map(|(_, n)| -(n as i64)).sum())
    }

    /// Pole order at a point: the sum of [`order_along`](Self::order_along)
    /// over arrangement components through `p`.
    pub fn order_at_point(&self, p: &TorusPoint, arr: &Arrangement) -> Result<i64> {
        if self.terms.len() != 1 {
            return Err(Error::MultiTerm);
        }
        let t = &self.terms[0];
        for (f, _) in self.term_factors(t) {
            for h in f.components() {
                if h.contains(p) && !arr.contains(&h) {
                    return Err(Error::ArrangementIncomplete(h.to_string()));
                }
            }
        }
        let mut total = 0;
        for h in &arr.components {
            if h.contains(p) {
                total += self.order_along(h)?;
            }
        }
        Ok(total)
    }

    /// All hypersurface components where some factor vanishes.
    pub fn singular_components(&self) -> Vec<HypersurfaceComponent> {
        let mut v: Vec<HypersurfaceComponent> = self.factors.iter().flat_map(Factor::components).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Exact value at `p`.
    pub fn evaluate(&self, p: &TorusPoint) -> Result<FieldElement> {
        let mut total = FieldElement::zero();
        let mut cache: HashMap<MonoConst, FieldElement> = HashMap::new();
        let inner: Vec<MonoConst> = self.factors.iter().map(|f| f.inner_value(p)).collect();
        for t in &self.terms {
            let mut vanishing_pos = false;
            let mut value = t.scalar.try_mul(&FieldElement::from_mono(&p.monomial(&t.mono)));
            let mut grouped: BTreeMap<MonoConst, i64> = BTreeMap::new();
            let mut poles = 0;
            for (g, f) in self.factors.iter().enumerate() {
                let n = Self::mult_of(t, g);
                if n == 0 {
                    continue;
                }
                if inner[g].is_one() {
                    if n < 0 {
                        poles += 1;
                    } else {
                        vanishing_pos = true;
                    }
                    let _ = f;
                    continue;
                }
                *grouped.entry(inner[g].clone()).or_insert(0) += n as i64;
            }
            if poles > 0 {
                return Err(Error::Pole(format!("at {p}")));
            }
            if vanishing_pos {
                continue;
            }
            for (v, n) in grouped {
                if n == 0 {
                    continue;
                }
                let base = cache
                    .entry(v.clone())
                    .or_insert_with(|| FieldElement::one().try_sub(&FieldElement::from_mono(&v)).expect("same log q"))
                    .clone();
                value = value.try_mul(&base.pow(n)?);
            }
            total = total.try_add(&value)?;
        }
        Ok(total)
    }

    /// Compiles the function for fast complex evaluation at a given `q`.
    pub fn numeric(&self, q: f64) -> NumericFunction {
        NumericFunction {
            dim: self.dim,
            factors: self.factors.iter().map(|f| (f.mono.clone(), f.c.to_complex(q))).collect(),
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mult: Vec<(usize, i32)> = t.mult.iter().enumerate().filter(|(_, n)| **n != 0).map(|(g, n)| (g, *n)).collect();
                    (t.scalar.to_complex(q), t.mono.clone(), mult)
                })
                .collect(),
        }
    }

    /// JSON-friendly description of the factors and terms.
    pub fn describe(&self) -> FunctionDump {
        FunctionDump {
            dim: self.dim,
            factors: self.factors.iter().map(|f| FactorRecord { monomial: f.mono.clone(), constant: f.c.to_string() }).collect(),
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord { scalar: t.scalar.to_string(), monomial: t.mono.clone(), multiplicities: t.mult.clone() })
                .collect(),
        }
    }
}

fn canonical_factor(f: &Factor) -> (Factor, bool) {
    match f.mono.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => (Factor { mono: f.mono.iter().map(|v| -v).collect(), c: f.c.inv() }, true),
        _ => (f.clone(), false),
    }
}

impl fmt::Display for FactorizedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = format!("[{}]", t.scalar);
                if t.mono.iter().any(|x| *x != 0) {
                    s.push_str(&format!("*x^{:?}", t.mono));
                }
                for (g, n) in t.mult.iter().enumerate() {
                    if *n != 0 {
                        let fa = &self.factors[g];
                        s.push_str(&format!("*(1 - {}*x^{:?})^{}", fa.c, fa.mono, n));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorRecord {
    pub monomial: Vec<i64>,
    pub constant: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub scalar: String,
    pub monomial: Vec<i64>,
    pub multiplicities: Vec<i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionDump {
    pub dim: usize,
    pub factors: Vec<FactorRecord>,
    pub terms: Vec<TermRecord>,
}

/// Nonzero factor multiplicities of a term, by factor index.
type SparseMult = Vec<(usize, i32)>;

/// Monomial and sparse multiplicities identifying a term up to its scalar.
type TermKey = (Vec<i64>, SparseMult);

/// A factored function with complex constants, for quadrature.
#[derive(Clone, Debug)]
pub struct NumericFunction {
    pub dim: usize,
    factors: Vec<(Vec<i64>, Complex64)>,
    terms: Vec<(Complex64, Vec<i64>, SparseMult)>,
}

impl NumericFunction {
    /// Value at the point with complex coordinates `x`.
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mono = |m: &[i64]| -> Complex64 {
            m.iter().zip(x).fold(Complex64::new(1.0, 0.0), |acc, (e, xi)| if *e == 0 { acc } else { acc * xi.powi(*e as i32) })
        };
        let vals: Vec<Complex64> = self.factors.iter().map(|(m, c)| Complex64::new(1.0, 0.0) - c * mono(m)).collect();
        let mut s = Complex64::new(0.0, 0.0);
        for (c, m, mult) in &self.terms {
            let mut v = c * mono(m);
            for (g, n) in mult {
                v *= vals[*g].powi(*n);
            }
            s += v;
        }
        s
    }

    /// Value at `x_i = exp(2πi θ_i) q^{z_i}`.
    pub fn eval_point(&self, theta: &[f64], z: &[f64], q: f64) -> Complex64 {
        let x: Vec<Complex64> =
            theta.iter().zip(z).map(|(t, e)| Complex64::from_polar(q.powf(*e), 2.0 * std::f64::consts::PI * t)).collect();
        self.eval(&x)
    }
}

/// Parameters of one Weyl orbit of roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    #[serde(with = "serde_str")]
    pub k: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub l: Option<Rational>,
    /// Integer scaling of the coroot in every factor.
    #[serde(default = "one_i64")]
    pub m: i64,
    /// Positive constant multiplying each root's contribution.
    #[serde(default = "one_rational", with = "serde_str")]
    pub c: Rational,
}

fn one_i64() -> i64 {
    1
}

fn one_rational() -> Rational {
    Rational::one()
}

mod opt_rational {
    use super::*;
    use crate::exact::rational::parse_rational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

impl OrbitParams {
    pub fn k(k: Rational) -> Self {
        OrbitParams { k, l: None, m: 1, c: Rational::one() }
    }
}

/// μ parameters keyed by root length class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuParameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short: Option<OrbitParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub long: Option<OrbitParams>,
}

impl MuParameters {
    /// The same `k` on every orbit.
    pub fn uniform(k: Rational) -> Self {
        MuParameters { short: Some(OrbitParams::k(k.clone())), long: Some(OrbitParams::k(k)) }
    }

    pub fn short_long(ks: Rational, kl: Rational) -> Self {
        MuParameters { short: Some(OrbitParams::k(ks)), long: Some(OrbitParams::k(kl)) }
    }

    pub fn get(&self, l: RootLength) -> Option<&OrbitParams> {
        match l {
            RootLength::Short => self.short.as_ref(),
            RootLength::Long => self.long.as_ref(),
        }
    }

    pub fn validate(&self, r: &RootSystem) -> Result<()> {
        for len in &r.lengths {
            let p = self.get(*len).ok_or_else(|| Error::InvalidInput(format!("missing parameters for {} roots", len.label())))?;
            if p.k.is_negative() {
                return Err(Error::InvalidInput(format!("k must be non-negative, got {}", fmt_rational(&p.k))));
            }
            if p.l.as_ref().is_some_and(|l| !l.is_positive()) {
                return Err(Error::InvalidInput("l must be positive".into()));
            }
            if p.m <= 0 {
                return Err(Error::InvalidInput("m must be a positive integer".into()));
            }
            if !p.c.is_positive() {
                return Err(Error::InvalidInput("c must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Builds μ as the raw product over positive roots, factors in root order.
pub fn build_mu(r: &RootSystem, params: &MuParameters) -> Result<FactorizedFunction> {
    params.validate(r)?;
    let n = r.rank;
    let mut factors = Vec::new();
    let mut scalar = Rational::one();
    for (i, cor) in r.coroots.iter().enumerate() {
        let p = params.get(r.lengths[i]).expect("validated");
        let h: Vec<i64> = cor.iter().map(|x| x * p.m).collect();
        let neg: Vec<i64> = h.iter().map(|x| -x).collect();
        let qk = MonoConst::q_pow(p.k.clone());
        factors.push((Factor { mono: h.clone(), c: MonoConst::one() }, 1));
        factors.push((Factor { mono: neg.clone(), c: MonoConst::one() }, 1));
        factors.push((Factor { mono: neg.clone(), c: qk.clone() }, -1));
        factors.push((Factor { mono: h.clone(), c: qk }, -1));
        if let Some(l) = &p.l {
            let half = MonoConst::root(Rational::new(1.into(), 2.into()));
            let ql = half.mul(&MonoConst::q_pow(l.clone()));
            factors.push((Factor { mono: h.clone(), c: half.clone() }, 1));
            factors.push((Factor { mono: neg.clone(), c: half }, 1));
            factors.push((Factor { mono: neg, c: ql.clone() }, -1));
            factors.push((Factor { mono: h, c: ql }, -1));
        }
        scalar *= &p.c;
    }
    Ok(FactorizedFunction::product(n, FieldElement::from_rational(scalar), factors))
}

/// The arrangement of all singular components of `f` and `1/f`, closed under
/// taking imaginary parts.
pub fn arrangement_of(f: &FactorizedFunction) -> Arrangement {
    Arrangement::new(f.dim, f.singular_components()).close_imaginary()
}

/// Keeps only the factors whose monomial lies in the span of the given forms.
pub fn sub_levi_part(f: &FactorizedFunction, span_forms: &IMat) -> FactorizedFunction {
    let q = crate::linalg::to_q(span_forms);
    let r = crate::linalg::q_rank(&q);
    let keep: Vec<bool> = f
        .factors
        .iter()
        .map(|fa| {
            let mut m = q.clone();
            m.push(fa.mono.iter().map(|x| int(*x)).collect());
            !fa.is_constant() && crate::linalg::q_rank(&m) == r
        })
        .collect();
    let mut out = f.clone();
    for t in out.terms.iter_mut() {
        for (g, n) in t.mult.iter_mut().enumerate() {
            if !keep[g] {
                *n = 0;
            }
        }
        t.mono = vec![0; f.dim];
        t.scalar = FieldElement::one();
    }
    out.normalize()
}

/// `Σ_i m_i x^{e_i}` as a function.
pub fn laurent_polynomial(dim: usize, terms: &[(Rational, Vec<i64>)]) -> FactorizedFunction {
    let mut f = FactorizedFunction::zero(dim);
    for (c, e) in terms {
        if !c.is_zero() {
            f.terms.push(Term { scalar: FieldElement::from_rational(c.clone()), mono: e.clone(), mult: vec![] });
        }
    }
    f.normalize()
}

/// Helper used in tests and reports: whether the monomial pairs to zero with `d`.
pub fn pairs_trivially(m: &[i64], d: &[i64]) -> bool {
    dot_i(m, d) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::roots::RootType;

    fn a1_mu(k: i64) -> FactorizedFunction {
        let r = RootSystem::build(RootType::A, 1).unwrap();
        build_mu(&r, &MuParameters::uniform(int(k))).unwrap()
    }

    #[test]
    fn g2_mu_has_24_factors() {
        let r = RootSystem::build(RootType::G2, 2).unwrap();
        let mu = build_mu(&r, &MuParameters::uniform(int(1))).unwrap();
        assert_eq!(mu.factors.len(), 24);
        assert_eq!(mu.terms.len(), 1);
        let with_l = build_mu(
            &r,
            &MuParameters { short: Some(OrbitParams { l: Some(int(1)), ..OrbitParams::k(int(1)) }), long: Some(OrbitParams::k(int(1))) },
        )
        .unwrap();
        assert_eq!(with_l.factors.len(), 36);
    }

    #[test]
    fn a1_orders() {
        let mu = a1_mu(1);
        let at = |e: i64| HypersurfaceComponent { form: vec![1], value: MonoConst::q_pow(int(e)) };
        assert_eq!(mu.order_along(&at(1)).unwrap(), 1);
        assert_eq!(mu.order_along(&at(0)).unwrap(), -2);
        assert_eq!(mu.order_along(&at(5)).unwrap(), 0);
        assert_eq!(mu.inverse().unwrap().order_along(&at(1)).unwrap(), -1);
        let arr = arrangement_of(&mu);
        assert_eq!(mu.order_at_point(&TorusPoint::real(vec![int(1)]), &arr).unwrap(), 1);
    }

    #[test]
    fn a1_value_at_minus_one() {
        let mu = a1_mu(1);
        let p = TorusPoint::new(vec![rat(1, 2)], vec![int(0)]);
        let v = mu.evaluate(&p).unwrap();
        // 4 / (1 + q)^2
        let expect = FieldElement::from_i64(4) / (FieldElement::one() + FieldElement::q_pow(int(1))).pow(2).unwrap();
        assert_eq!(v, expect);
        assert!((v.to_complex(2.0).re - 4.0 / 9.0).abs() < 1e-12);
        assert!(matches!(mu.evaluate(&TorusPoint::real(vec![int(1)])), Err(Error::Pole(_))));
    }

    #[test]
    fn normalization_merges_opposite_orientations() {
        // (1 − x)(1 − x^{-1}) / (1 − x)^2 = −x^{-1}
        let f = FactorizedFunction::product(
            1,
            FieldElement::one(),
            vec![
                (Factor { mono: vec![1], c: MonoConst::one() }, 1),
                (Factor { mono: vec![-1], c: MonoConst::one() }, 1),
                (Factor { mono: vec![1], c: MonoConst::one() }, -2),
            ],
        );
        let g = f.normalize();
        assert_eq!(g.factors.len(), 0);
        assert_eq!(g.terms[0].mono, vec![-1]);
        assert_eq!(g.terms[0].scalar, FieldElement::from_i64(-1));
        assert_eq!(g.evaluate(&TorusPoint::real(vec![int(0)])).unwrap(), FieldElement::from_i64(-1));
    }
}
