//! Points and connected affine subtori of the character torus.
//!
//! A point has coordinates `x_i = exp(2πi·θ_i) q^{z_i}`; `θ` are the phases
//! and `z` the real part. A coset is a translate of a connected subtorus,
//! described by a saturated set of integer forms `F` and the values `x^{F_i}`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{frac_part, serde_vec};
use crate::exact::{int, MonoConst, Rational};
use crate::linalg::{self, dot_i, dot_iq, hnf_rows, int_kernel, q_inverse, qmat_mul, saturate_rows, snf, to_q, transpose, IMat, QMat};
use crate::roots::WeylElement;

/// A point of the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusPoint {
    #[serde(with = "serde_vec")]
    pub phases: Vec<Rational>,
    #[serde(with = "serde_vec")]
    pub exponents: Vec<Rational>,
}

impl TorusPoint {
    pub fn new(phases: Vec<Rational>, exponents: Vec<Rational>) -> Self {
        assert_eq!(phases.len(), exponents.len());
        TorusPoint { phases: phases.iter().map(frac_part).collect(), exponents }
    }

    /// The point with all phases zero and the given real part.
    pub fn real(exponents: Vec<Rational>) -> Self {
        let n = exponents.len();
        Self::new(vec![Rational::zero(); n], exponents)
    }

    pub fn identity(n: usize) -> Self {
        Self::real(vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// `x^m`.
    pub fn monomial(&self, m: &[i64]) -> MonoConst {
        MonoConst::new(dot_iq(m, &self.phases), dot_iq(m, &self.exponents))
    }

    /// Coordinate `i` as a constant.
    pub fn coord(&self, i: usize) -> MonoConst {
        MonoConst::new(self.phases[i].clone(), self.exponents[i].clone())
    }

    /// Image under a linear map of the log-coordinates.
    pub fn map(&self, m: &IMat) -> Self {
        TorusPoint::new(m.iter().map(|r| dot_iq(r, &self.phases)).collect(), m.iter().map(|r| dot_iq(r, &self.exponents)).collect())
    }

    /// Coordinatewise product.
    pub fn mul(&self, o: &Self) -> Self {
        TorusPoint::new(
            self.phases.iter().zip(&o.phases).map(|(a, b)| a + b).collect(),
            self.exponents.iter().zip(&o.exponents).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn inv(&self) -> Self {
        TorusPoint::new(self.phases.iter().map(|a| -a).collect(), self.exponents.iter().map(|a| -a).collect())
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        self.map(&w.matrix)
    }

    /// Same phases, real part shifted by `delta`.
    pub fn shifted(&self, delta: &[Rational]) -> Self {
        TorusPoint::new(self.phases.clone(), self.exponents.iter().zip(delta).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim()).map(|i| self.coord(i).to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The hypersurface `{x : x^form = value}`; the positive side is where the
/// real part of `x^form` exceeds that of `value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HypersurfaceComponent {
    pub form: Vec<i64>,
    pub value: MonoConst,
}

impl HypersurfaceComponent {
    /// Splits `{x^m = c}` into connected components with primitive forms
    /// whose first nonzero entry is positive.
    pub fn split(m: &[i64], c: &MonoConst) -> Vec<HypersurfaceComponent> {
        let g = linalg::gcd_vec(m);
        assert!(g != 0, "zero form");
        let mut prim: Vec<i64> = m.iter().map(|x| x / g).collect();
        let sign = linalg::orient(&mut prim);
        let c = if sign < 0 { c.inv() } else { c.clone() };
        // x^{g·prim} = c  ⇔  x^prim = c^{1/g} ζ_g^k
        (0..g)
            .map(|k| {
                let v = MonoConst::new((&c.phase + int(k)) / int(g), &c.exp / int(g));
                HypersurfaceComponent { form: prim.clone(), value: v }
            })
            .collect()
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        p.monomial(&self.form) == self.value
    }

    /// The central component with the same form and the same phase.
    pub fn imaginary_part(&self) -> Self {
        HypersurfaceComponent { form: self.form.clone(), value: MonoConst::root(self.value.phase.clone()) }
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        let mut f = w.act_form(&self.form);
        let s = linalg::orient(&mut f);
        let v = if s < 0 { self.value.inv() } else { self.value.clone() };
        HypersurfaceComponent { form: f, value: v }
    }
}

impl fmt::Display for HypersurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?} = {}", self.form, self.value)
    }
}

/// Canonical identity of a coset: Hermite-normal saturated forms and values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub forms: IMat,
    pub values: Vec<MonoConst>,
}

/// A connected affine subtorus `{x : x^{F_i} = v_i}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Coset {
    pub ambient: usize,
    pub forms: IMat,
    pub values: Vec<MonoConst>,
    /// Base point; its real part is the origin `r(A)`.
    pub base: TorusPoint,
    /// Direction basis (`ambient × dim` integer matrix, as rows).
    pub directions: IMat,
    /// Left inverse of `directions` (`dim × ambient`).
    #[serde(skip)]
    pub left_inverse: IMat,
    /// Metric `Bᵀ G B` on local directions.
    #[serde(skip)]
    pub local_gram: QMat,
}

impl PartialEq for Coset {
    fn eq(&self, o: &Self) -> bool {
        self.forms == o.forms && self.values == o.values
    }
}

impl Eq for Coset {}

impl Coset {
    /// The whole torus.
    pub fn full(n: usize, gram: &QMat) -> Self {
        Self::from_key(CosetKey { forms: vec![], values: vec![] }, n, gram)
    }

    /// The single point `p`.
    pub fn point(p: &TorusPoint, gram: &QMat) -> Self {
        let n = p.dim();
        let forms = linalg::identity(n);
        let values = (0..n).map(|i| p.coord(i)).collect();
        Self::from_key(CosetKey { forms, values }, n, gram)
    }

    pub fn key(&self) -> CosetKey {
        CosetKey { forms: self.forms.clone(), values: self.values.clone() }
    }

    /// Builds the coset of a canonical key; the base point is chosen
    /// deterministically from the key.
    pub fn from_key(key: CosetKey, n: usize, gram: &QMat) -> Self {
        let r = key.forms.len();
        let (phases, directions, left_inverse) = if r == 0 {
            (vec![Rational::zero(); n], linalg::identity(n), linalg::identity(n))
        } else {
            let s = snf(&key.forms, n);
            debug_assert!(s.diag.iter().all(|d| *d == 1), "saturated forms");
            // y_t = Π v_i^{U_ti} for t < r, free coordinates zero
            let y: Vec<Rational> = (0..n)
                .map(|t| {
                    if t < r {
                        let m = MonoConst::product(key.values.iter().zip(s.u[t].iter().copied()));
                        m.phase
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let phases = s.v.iter().map(|row| dot_iq(row, &y)).collect();
            let dirs: IMat = s.v.iter().map(|row| row[r..].to_vec()).collect();
            let li: IMat = s.v_inv[r..].to_vec();
            (phases, dirs, li)
        };
        let exps: Vec<Rational> = key.values.iter().map(|v| v.exp.clone()).collect();
        let exponents = origin_of(&key.forms, &exps, gram, n);
        let dim = n - r;
        let bq = to_q(&directions);
        let local_gram = qmat_mul(&qmat_mul(&transpose(&bq, dim), gram), &bq);
        Coset {
            ambient: n,
            forms: key.forms,
            values: key.values,
            base: TorusPoint::new(phases, exponents),
            directions,
            left_inverse,
            local_gram,
        }
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.forms.len()
    }

    pub fn codim(&self) -> usize {
        self.forms.len()
    }

    pub fn is_point(&self) -> bool {
        self.forms.len() == self.ambient
    }

    /// Origin `r(A)`: the real part of the base point.
    pub fn origin(&self) -> &[Rational] {
        &self.base.exponents
    }

    pub fn contains_point(&self, p: &TorusPoint) -> bool {
        self.forms.iter().zip(&self.values).all(|(f, v)| p.monomial(f) == *v)
    }

    /// Whether `other ⊆ self`.
    pub fn contains_coset(&self, other: &Coset) -> bool {
        if other.dim() > self.dim() || !self.contains_point(&other.base) {
            return false;
        }
        // every direction of `other` must be annihilated by our forms
        let od = transpose(&other.directions, other.dim());
        od.iter().all(|d| self.forms.iter().all(|f| dot_i(f, d) == 0))
    }

    /// Whether `self` lies inside the hypersurface.
    pub fn inside(&self, h: &HypersurfaceComponent) -> bool {
        h.contains(&self.base) && transpose(&self.directions, self.dim()).iter().all(|d| dot_i(&h.form, d) == 0)
    }

    /// Local coordinates `η` of a point of the coset: `x = base · y^B`.
    pub fn local_coords(&self, p: &TorusPoint) -> TorusPoint {
        p.mul(&self.base.inv()).map(&self.left_inverse)
    }

    /// The point `base · y^B`.
    pub fn from_local(&self, y: &TorusPoint) -> TorusPoint {
        self.base.mul(&y.map(&self.directions))
    }

    /// `x^m` restricted to the coset: `base^m · y^{Bᵀ m}`.
    pub fn restrict_monomial(&self, m: &[i64]) -> (MonoConst, Vec<i64>) {
        let local = (0..self.dim()).map(|j| (0..self.ambient).map(|i| m[i] * self.directions[i][j]).sum()).collect();
        (self.base.monomial(m), local)
    }

    /// Local real coordinates of a global real part.
    pub fn local_real(&self, z: &[Rational]) -> Vec<Rational> {
        let d: Vec<Rational> = z.iter().zip(self.origin()).map(|(a, b)| a - b).collect();
        self.left_inverse.iter().map(|r| dot_iq(r, &d)).collect()
    }

    /// Global real part of local real coordinates.
    pub fn global_real(&self, rho: &[Rational]) -> Vec<Rational> {
        (0..self.ambient)
            .map(|i| &self.origin()[i] + self.directions[i].iter().zip(rho).fold(Rational::zero(), |s, (b, r)| s + r * int(*b)))
            .collect()
    }

    /// Global direction of a local direction vector.
    pub fn global_direction(&self, v: &[Rational]) -> Vec<Rational> {
        self.directions.iter().map(|r| dot_iq(r, v)).collect()
    }

    /// Image under a Weyl element.
    pub fn act(&self, w: &WeylElement, gram: &QMat) -> Coset {
        let n = self.ambient;
        let fw: IMat = self.forms.iter().map(|f| w.act_form(f)).collect();
        let forms = hnf_rows(&fw, n);
        let b = self.base.act(w);
        let values = forms.iter().map(|f| b.monomial(f)).collect();
        Coset::from_key(CosetKey { forms, values }, n, gram)
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "point {}", self.base);
        }
        if self.forms.is_empty() {
            return write!(f, "torus");
        }
        let eqs: Vec<String> = self.forms.iter().zip(&self.values).map(|(m, v)| format!("x^{m:?} = {v}")).collect();
        write!(f, "{{{}}}", eqs.join(", "))
    }
}

/// Point of the affine space `{F z = e}` nearest to the origin in the
/// metric `gram`.
pub fn origin_of(forms: &IMat, e: &[Rational], gram: &QMat, n: usize) -> Vec<Rational> {
    if forms.is_empty() {
        return vec![Rational::zero(); n];
    }
    let ginv = q_inverse(gram).expect("positive definite");
    let f = to_q(forms);
    let ft = transpose(&f, n);
    let gf = qmat_mul(&ginv, &ft);
    let m = qmat_mul(&f, &gf);
    let minv = q_inverse(&m).expect("independent forms");
    let coef = linalg::qmat_vec(&minv, e);
    linalg::qmat_vec(&gf, &coef)
}

/// Connected components of `{x : x^{m_j} = c_j for all j}`.
pub fn component_split(equations: &[(Vec<i64>, MonoConst)], n: usize, gram: &QMat) -> Vec<Coset> {
    if equations.is_empty() {
        return vec![Coset::full(n, gram)];
    }
    let m: IMat = equations.iter().map(|(f, _)| f.clone()).collect();
    let s = snf(&m, n);
    let r = s.diag.len();
    let uc: Vec<MonoConst> = s.u.iter().map(|row| MonoConst::product(equations.iter().map(|(_, c)| c).zip(row.iter().copied()))).collect();
    if uc[r..].iter().any(|c| !c.is_one()) {
        return vec![];
    }
    let forms = saturate_rows(&m, n);
    let mut out: Vec<Coset> = Vec::new();
    let total: i64 = s.diag.iter().product();
    for idx in 0..total {
        // mixed-radix choice of the d_t-th roots
        let mut rem = idx;
        let mut y_phase = vec![Rational::zero(); n];
        let mut y_exp = vec![Rational::zero(); n];
        for t in 0..r {
            let d = s.diag[t];
            let k = rem % d;
            rem /= d;
            y_phase[t] = (&uc[t].phase + int(k)) / int(d);
            y_exp[t] = &uc[t].exp / int(d);
        }
        let p = TorusPoint::new(s.v.iter().map(|row| dot_iq(row, &y_phase)).collect(), s.v.iter().map(|row| dot_iq(row, &y_exp)).collect());
        let values = forms.iter().map(|f| p.monomial(f)).collect();
        let c = Coset::from_key(CosetKey { forms: forms.clone(), values }, n, gram);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort_by_key(Coset::key);
    out
}

/// A finite set of hypersurface components.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrangement {
    pub rank: usize,
    pub components: Vec<HypersurfaceComponent>,
    /// Set once every component's real-part companion is present.
    pub closed: bool,
}

impl Arrangement {
    pub fn new(rank: usize, mut components: Vec<HypersurfaceComponent>) -> Self {
        components.sort();
        components.dedup();
        Arrangement { rank, components, closed: false }
    }

    /// Adds `{x^m = ζ}` for every component `{x^m = ζ q^e}`.
    pub fn close_imaginary(mut self) -> Self {
        let extra: Vec<HypersurfaceComponent> = self.components.iter().map(HypersurfaceComponent::imaginary_part).collect();
        self.components.extend(extra);
        self.components.sort();
        self.components.dedup();
        self.closed = true;
        self
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(|c| self.components.contains(&c.imaginary_part()))
    }

    pub fn contains(&self, h: &HypersurfaceComponent) -> bool {
        self.components.binary_search(h).is_ok()
    }

    /// Whether `p` avoids every component that does not contain all of `a`.
    pub fn regular_test(&self, p: &TorusPoint, a: &Coset) -> Result<bool> {
        if !a.contains_point(p) {
            return Err(Error::NotOnCoset);
        }
        Ok(self.components.iter().all(|h| a.inside(h) || !h.contains(p)))
    }

    /// Whether the real contour `Re = z` meets a component.
    pub fn contour_is_regular(&self, z: &[Rational]) -> bool {
        self.components.iter().all(|h| dot_iq(&h.form, z) != h.value.exp)
    }
}

/// Local description of a codimension-one subcoset `S` of a coset `A`.
#[derive(Clone, Debug)]
pub struct Facet {
    /// Primitive local form `m` with `S = {y : y^m = value}` in `A`'s coordinates.
    pub form: Vec<i64>,
    pub value: MonoConst,
    /// `S` parametrized in `A`'s coordinates as `y = shift · v^C`.
    pub shift: TorusPoint,
    /// `C`, a `dim A × dim S` integer matrix (rows).
    pub param: IMat,
    /// Local normal `α̃` with `⟨m, α̃⟩ = 1`, orthogonal to `S`.
    pub normal: Vec<Rational>,
    /// `α̃` as a global direction.
    pub global_normal: Vec<Rational>,
}

impl Facet {
    /// Computes the facet data of `s ⊂ a`.
    pub fn new(a: &Coset, s: &Coset) -> Self {
        let da = a.dim();
        let ds = s.dim();
        let shift = a.local_coords(&s.base);
        let param: IMat =
            (0..da).map(|i| (0..ds).map(|j| (0..a.ambient).map(|k| a.left_inverse[i][k] * s.directions[k][j]).sum()).collect()).collect();
        let ct = transpose(&param, ds);
        let ker = int_kernel(&ct, da);
        assert_eq!(ker.len(), 1, "facet must have codimension one");
        let mut form = ker[0].clone();
        let g = linalg::gcd_vec(&form);
        for x in form.iter_mut() {
            *x /= g;
        }
        linalg::orient(&mut form);
        let value = shift.monomial(&form);
        let ginv = q_inverse(&a.local_gram).expect("positive definite");
        let mq: Vec<Rational> = form.iter().map(|x| int(*x)).collect();
        let gm = linalg::qmat_vec(&ginv, &mq);
        let norm = linalg::dot_q(&mq, &gm);
        let normal: Vec<Rational> = gm.iter().map(|x| x / &norm).collect();
        let global_normal = a.global_direction(&normal);
        Facet { form, value, shift, param, normal, global_normal }
    }

    /// Real part of the hyperplane constant: `⟨m, ρ⟩ = offset` in local real coordinates.
    pub fn offset(&self) -> &Rational {
        &self.value.exp
    }

    pub fn is_central(&self) -> bool {
        self.value.exp.is_zero()
    }

    /// Signed side of a local real point: positive, zero or negative.
    pub fn side(&self, rho: &[Rational]) -> std::cmp::Ordering {
        dot_iq(&self.form, rho).cmp(self.offset())
    }
}

/// A chamber of the central hyperplanes through the origin of a coset.
#[derive(Clone, Debug)]
pub struct Chamber {
    /// Sign (+1/−1) on each distinct central local form.
    pub signs: Vec<i8>,
    /// Witness `ε_Q` in local real coordinates.
    pub witness: Vec<Rational>,
}

/// Chambers of a coset given its facets; the witness is scaled by powers of
/// two until the segment from the origin to it meets no non-central facet.
pub fn chambers(a: &Coset, facets: &[&Facet]) -> Vec<Chamber> {
    let dim = a.dim();
    if dim == 0 {
        return vec![Chamber { signs: vec![], witness: vec![] }];
    }
    let mut central: Vec<Vec<i64>> = facets.iter().filter(|f| f.is_central()).map(|f| f.form.clone()).collect();
    central.sort();
    central.dedup();
    let forms: Vec<Vec<Rational>> = central.iter().map(|f| f.iter().map(|x| int(*x)).collect()).collect();
    let mut out = Vec::new();
    for (signs, w) in crate::roots::enumerate_sign_vectors(&forms, dim) {
        let m = w.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
        let w: Vec<Rational> = if m.is_zero() {
            // no central hyperplanes: any direction lies in the single chamber
            let mut v = vec![Rational::zero(); dim];
            v[0] = int(1);
            v
        } else {
            w.iter().map(|x| x / &m).collect()
        };
        let mut t = int(1);
        for f in facets.iter().filter(|f| !f.is_central()) {
            let slope = dot_iq(&f.form, &w).abs();
            let dist = f.offset().abs();
            while &t * &slope * int(2) > dist {
                t /= int(2);
            }
        }
        out.push(Chamber { signs: signs.iter().map(|s| if *s { 1 } else { -1 }).collect(), witness: w.iter().map(|x| x * &t).collect() });
    }
    out
}
