//! Floating-point verification: trapezoid quadrature on compact tori with
//! mass-one measures, the contour-crossing identity and the full
//! decomposition identity, plus a small-circle Cauchy residue.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rational, to_f64};
use crate::exact::{FieldElement, Rational};
use crate::exec::{pairwise_sum, Execution};
use crate::lattice::Lattice;
use crate::linalg::dot_iq;
use crate::mu::FactorizedFunction;
use crate::residue::residue_u;
use crate::torus::TorusPoint;
use crate::walk::Decomposition;

/// Quadrature and comparison settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub q: f64,
    /// Points per circle; a power of two.
    pub grid: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { q: 2.0, grid: 256, tolerance: 1e-6, seed: 0 }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0 && self.q.is_finite()) {
            return Err(Error::InvalidInput(format!("q must be a real number > 1, got {}", self.q)));
        }
        if !self.grid.is_power_of_two() {
            return Err(Error::InvalidInput(format!("grid size must be a power of two, got {}", self.grid)));
        }
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// Mean of `f` over the compact torus at real part `real_part`, by the
/// product trapezoid rule on the `N^dim` grid.
pub fn quadrature_integral(f: &FactorizedFunction, real_part: &[Rational], cfg: &NumericConfig, exec: Execution) -> Result<Complex64> {
    cfg.validate()?;
    let d = f.dim;
    if real_part.len() != d {
        return Err(Error::InvalidInput(format!("real part has {} coordinates, expected {d}", real_part.len())));
    }
    for h in f.singular_components() {
        if dot_iq(&h.form, real_part) == h.value.exp {
            return Err(Error::Singular(h.to_string()));
        }
    }
    let nf = f.numeric(cfg.q);
    let z: Vec<f64> = real_part.iter().map(to_f64).collect();
    if d == 0 {
        return Ok(nf.eval(&[]));
    }
    let n = cfg.grid;
    let rest = n.pow((d - 1) as u32);
    let radii: Vec<f64> = z.iter().map(|e| cfg.q.powf(*e)).collect();
    let rows = exec.map_range(n, |i0| {
        let mut vals = Vec::with_capacity(rest);
        let mut x = vec![Complex64::zero(); d];
        for k in 0..rest {
            let mut idx = k;
            x[0] = Complex64::from_polar(radii[0], 2.0 * PI * i0 as f64 / n as f64);
            for j in 1..d {
                let t = idx % n;
                idx /= n;
                x[j] = Complex64::from_polar(radii[j], 2.0 * PI * t as f64 / n as f64);
            }
            vals.push(nf.eval(&x));
        }
        pairwise_sum(&vals)
    });
    Ok(pairwise_sum(&rows) / (n.pow(d as u32) as f64))
}

/// `Res_{u=0} f(p·q^{u·dir})` from the mean of `u·f` over the circle
/// `|u| = radius`.
pub fn cauchy_residue(f: &FactorizedFunction, p: &TorusPoint, dir: &[Rational], radius: f64, cfg: &NumericConfig) -> Result<Complex64> {
    cfg.validate()?;
    if p.dim() != f.dim || dir.len() != f.dim {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let nf = f.numeric(cfg.q);
    let lq = cfg.q.ln();
    let base: Vec<Complex64> = (0..p.dim()).map(|i| p.coord(i).to_complex(cfg.q)).collect();
    let d: Vec<f64> = dir.iter().map(to_f64).collect();
    let vals: Vec<Complex64> = (0..cfg.grid)
        .map(|k| {
            let u = Complex64::from_polar(radius, 2.0 * PI * k as f64 / cfg.grid as f64);
            let x: Vec<Complex64> = base.iter().zip(&d).map(|(b, di)| b * (u * di * lq).exp()).collect();
            nf.eval(&x) * u
        })
        .collect();
    Ok(pairwise_sum(&vals) / cfg.grid as f64)
}

/// A complex number as a pair for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex {
    fn from(c: Complex64) -> Self {
        Complex { re: c.re, im: c.im }
    }
}

/// Outcome of [`check_crossing_identity`].
#[derive(Clone, Debug, Serialize)]
pub struct CrossingReport {
    pub form: Option<Vec<i64>>,
    pub offset: Option<String>,
    /// `I(r1) − I(r2)`.
    pub jump: Complex,
    /// Signed sum of the residue integrals at the crossing point.
    pub predicted: Complex,
    pub abs_error: f64,
    pub pass: bool,
}

/// Compares the jump of the contour integral of `f` between two real parts
/// with the residues on the single real hyperplane separating them.
pub fn check_crossing_identity(
    f: &FactorizedFunction,
    lat: &Lattice,
    r1: &[Rational],
    r2: &[Rational],
    cfg: &NumericConfig,
    exec: Execution,
) -> Result<CrossingReport> {
    let mut planes: Vec<(Vec<i64>, Rational, Vec<usize>)> = Vec::new();
    for e in &lat.facets[0] {
        let key = (e.facet.form.clone(), e.facet.offset().clone());
        match planes.iter_mut().find(|p| p.0 == key.0 && p.1 == key.1) {
            Some(p) => p.2.push(e.sub),
            None => planes.push((key.0, key.1, vec![e.sub])),
        }
    }
    let mut separating = Vec::new();
    for (form, offset, members) in &planes {
        let s1 = dot_iq(form, r1) - offset;
        let s2 = dot_iq(form, r2) - offset;
        if s1.is_zero() || s2.is_zero() {
            return Err(Error::Singular(format!("endpoint on the hyperplane {form:?} = {}", fmt_rational(offset))));
        }
        if s1.is_positive() != s2.is_positive() {
            separating.push((form, offset, members, s1, s2));
        }
    }
    if separating.len() > 1 {
        return Err(Error::NonAdjacent);
    }
    let i1 = quadrature_integral(f, r1, cfg, exec)?;
    let i2 = quadrature_integral(f, r2, cfg, exec)?;
    let jump = i1 - i2;
    let mut predicted = Complex64::zero();
    let mut form_out = None;
    let mut offset_out = None;
    if let Some((form, offset, members, s1, s2)) = separating.pop() {
        let t = &s1 / (&s1 - &s2);
        let point: Vec<Rational> = r1.iter().zip(r2).map(|(a, b)| a + (b - a) * &t).collect();
        let sign = if s1.is_positive() { 1.0 } else { -1.0 };
        for &s in members {
            let facet = lat.facet(0, s).expect("facet of the torus");
            let g = residue_u(f, facet);
            if g.is_zero() {
                continue;
            }
            let local = lat.coset(s).local_real(&point);
            predicted += quadrature_integral(&g, &local, cfg, exec)? * sign;
        }
        form_out = Some(form.clone());
        offset_out = Some(fmt_rational(offset));
    }
    let abs_error = (jump - predicted).norm();
    let scale = i1.norm().max(i2.norm()).max(predicted.norm()).max(f64::MIN_POSITIVE);
    Ok(CrossingReport {
        form: form_out,
        offset: offset_out,
        jump: jump.into(),
        predicted: predicted.into(),
        abs_error,
        pass: abs_error <= cfg.tolerance * scale,
    })
}

/// Numeric contribution of one decomposition term.
#[derive(Clone, Debug, Serialize)]
pub struct TermContribution {
    pub coset: usize,
    pub label: String,
    pub dim: usize,
    pub weight: String,
    pub value: Complex,
}

/// Outcome of [`check_full_decomposition`].
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    /// Integral of `p·f` over the start contour.
    pub start_integral: Complex,
    pub terms: Vec<TermContribution>,
    pub total: Complex,
    pub abs_error: f64,
    /// `abs_error` relative to the largest of the start integral and the
    /// individual contributions.
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The multiplier `Σ c x^m` as a function.
pub fn multiplier_function(dim: usize, p: &[(FieldElement, Vec<i64>)]) -> FactorizedFunction {
    p.iter().fold(FactorizedFunction::zero(dim), |acc, (c, m)| acc.add(&FactorizedFunction::monomial(c.clone(), m.clone())))
}

/// Numeric value of one term: `weight · Σ_Q ∫_{r(A)+ε_Q} D(p·f)`.
pub fn term_value(
    d: &Decomposition,
    index: usize,
    lat: &Lattice,
    p: &[(FieldElement, Vec<i64>)],
    cfg: &NumericConfig,
    exec: Execution,
) -> Result<Complex64> {
    let t = &d.terms[index];
    let a = lat.coset(t.coset);
    let g = t.templates.with_multiplier(p, a).into_iter().fold(FactorizedFunction::zero(a.dim()), |acc, (pb, tb)| acc.add(&pb.mul(&tb)));
    if g.is_zero() {
        return Ok(Complex64::zero());
    }
    let mut s = Complex64::zero();
    for q in &t.chambers {
        s += quadrature_integral(&g, &q.witness, cfg, exec)?;
    }
    Ok(s * to_f64(&t.weight))
}

/// Checks `∫_{start} p·f = Σ_terms weight Σ_Q ∫_{r(A)+ε_Q} D_A(p·f)`.
pub fn check_full_decomposition(
    d: &Decomposition,
    lat: &Lattice,
    p: &[(FieldElement, Vec<i64>)],
    cfg: &NumericConfig,
    exec: Execution,
) -> Result<DecompositionReport> {
    let f = multiplier_function(lat.rank, p).mul(&d.function);
    let lhs = quadrature_integral(&f, &d.start, cfg, exec)?;
    let mut terms = Vec::new();
    let mut total = Complex64::zero();
    let mut scale = lhs.norm();
    for (i, t) in d.terms.iter().enumerate() {
        let v = term_value(d, i, lat, p, cfg, exec)?;
        total += v;
        scale = scale.max(v.norm());
        terms.push(TermContribution {
            coset: t.coset,
            label: lat.coset(t.coset).to_string(),
            dim: lat.coset(t.coset).dim(),
            weight: fmt_rational(&t.weight),
            value: v.into(),
        });
    }
    let abs_error = (lhs - total).norm();
    let rel_error = abs_error / scale.max(f64::MIN_POSITIVE);
    Ok(DecompositionReport {
        start_integral: lhs.into(),
        terms,
        total: total.into(),
        abs_error,
        rel_error,
        tolerance: cfg.tolerance,
        pass: rel_error <= cfg.tolerance,
    })
}

/// Seeded random Laurent polynomials with `terms` monomials, rational
/// coefficients `a/b` with `|a| ≤ 9`, `1 ≤ b ≤ 5`, and exponents in `[-2, 2]`.
pub fn random_multipliers(seed: u64, rank: usize, count: usize, terms: usize) -> Vec<Vec<(FieldElement, Vec<i64>)>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..terms)
                .map(|_| {
                    let mut a: i64 = rng.gen_range(-9..=9);
                    if a == 0 {
                        a = 1;
                    }
                    let b: i64 = rng.gen_range(1..=5);
                    let m = (0..rank).map(|_| rng.gen_range(-2i64..=2)).collect();
                    (FieldElement::from_rational(Rational::new(a.into(), b.into())), m)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, MonoConst};
    use crate::mu::Factor;

    fn geometric() -> FactorizedFunction {
        // 1 / (1 − t/q)
        let fac = Factor { mono: vec![1], c: MonoConst::q_pow(int(-1)) };
        FactorizedFunction::product(1, FieldElement::one(), vec![(fac, -1)])
    }

    #[test]
    fn constant_has_unit_mass() {
        let f = FactorizedFunction::one(2);
        let cfg = NumericConfig { grid: 16, ..Default::default() };
        let v = quadrature_integral(&f, &[int(0), int(0)], &cfg, Execution::Sequential).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn geometric_means() {
        let cfg = NumericConfig::default();
        let inside = quadrature_integral(&geometric(), &[rat(1, 2)], &cfg, Execution::Parallel).unwrap();
        let outside = quadrature_integral(&geometric(), &[rat(3, 2)], &cfg, Execution::Parallel).unwrap();
        assert!((inside - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(outside.norm() < 1e-10);
        assert!(quadrature_integral(&geometric(), &[int(1)], &cfg, Execution::Parallel).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(NumericConfig { grid: 100, ..Default::default() }.validate().is_err());
        assert!(NumericConfig { q: 1.0, ..Default::default() }.validate().is_err());
        assert!(NumericConfig::default().validate().is_ok());
    }
}
