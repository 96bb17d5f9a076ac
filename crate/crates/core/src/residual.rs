//! Residual cosets: the pole-order criterion, an independent brute-force
//! search through iterated residues, and the nonvanishing sums at residual
//! points.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::equivariance::orbit_partition;
use crate::error::{Error, Result};
use crate::exact::FieldElement;
use crate::exec::Execution;
use crate::lattice::Lattice;
use crate::mu::{sub_levi_part, FactorizedFunction};
use crate::roots::RootSystem;
use crate::torus::{Arrangement, Coset, TorusPoint};
use crate::walk::{ChainCache, Decomposition};

/// Largest rank accepted by [`brute_force_residual_search`].
pub const BRUTE_FORCE_RANK_CAP: usize = 2;

/// Exponent bound of the monomial test set of the brute-force search.
pub const BRUTE_FORCE_DEGREE: i64 = 2;

/// A coset of the lattice with its Weyl orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualCoset {
    pub id: usize,
    pub label: String,
    pub dim: usize,
    pub codim: usize,
    pub orbit: usize,
    pub representative: bool,
}

/// All cosets of the lattice with orbit ids; orbits are numbered by
/// dimension and representative.
pub fn enumerate_cosets(lat: &Lattice, r: &RootSystem) -> Result<Vec<ResidualCoset>> {
    let ids: Vec<usize> = (0..lat.len()).collect();
    let (orbits, index) = orbit_partition(lat, r, &ids)?;
    Ok(ids
        .iter()
        .map(|&id| {
            let c = lat.coset(id);
            let orbit = index[&id];
            ResidualCoset {
                id,
                label: c.to_string(),
                dim: c.dim(),
                codim: c.codim(),
                orbit,
                representative: orbits[orbit].representative == id,
            }
        })
        .collect())
}

/// Pole order (positive for poles) of a product-form function at the generic
/// point of a coset: the sum of the orders along the components containing it.
pub fn pole_order_on(f: &FactorizedFunction, a: &Coset, arr: &Arrangement) -> Result<i64> {
    let mut total = 0;
    for h in &arr.components {
        if a.inside(h) {
            total += f.order_along(h)?;
        }
    }
    Ok(total)
}

/// Classification of one coset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub coset: usize,
    pub label: String,
    pub dim: usize,
    pub codim: usize,
    /// Pole order of the Levi part of `f` on the coset.
    pub pole_order: i64,
    pub residual: bool,
    pub orbit: usize,
    pub representative: bool,
    /// Nonvanishing sum at full-rank residual points, when computed.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_field")]
    pub opdam_sum: Option<FieldElement>,
}

fn ser_field<S: serde::Serializer>(v: &Option<FieldElement>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Pole order of the Levi part of `f` on every coset, compared with the
/// codimension.
pub fn classify_residual(f: &FactorizedFunction, lat: &Lattice, r: &RootSystem, exec: Execution) -> Result<Vec<ResidualReport>> {
    let cosets = enumerate_cosets(lat, r)?;
    let arr = &lat.arrangement;
    let orders: Vec<Result<i64>> = exec.map(&cosets, |c| {
        let a = lat.coset(c.id);
        pole_order_on(&sub_levi_part(f, &a.forms), a, arr)
    });
    cosets
        .into_iter()
        .zip(orders)
        .map(|(c, o)| {
            let pole_order = o?;
            Ok(ResidualReport {
                coset: c.id,
                label: c.label,
                dim: c.dim,
                codim: c.codim,
                pole_order,
                residual: pole_order == c.codim as i64,
                orbit: c.orbit,
                representative: c.representative,
                opdam_sum: None,
            })
        })
        .collect()
}

/// Reports whose pole order exceeds the codimension.
pub fn maximal_order_violations(reports: &[ResidualReport]) -> Vec<&ResidualReport> {
    reports.iter().filter(|r| r.pole_order > r.codim as i64).collect()
}

/// Ids of the full-rank residual points of a classification.
pub fn residual_points(reports: &[ResidualReport]) -> BTreeSet<usize> {
    reports.iter().filter(|r| r.dim == 0 && r.residual).map(|r| r.coset).collect()
}

/// `Σ_{w ∈ W} (Res_{wA} f)(wσ)` at a point coset, with the data of a walk;
/// images without data contribute zero.
pub fn opdam_sum(a: &Coset, d: &Decomposition, lat: &Lattice, r: &RootSystem) -> Result<FieldElement> {
    if !a.is_point() {
        return Err(Error::NotAPoint);
    }
    let one = [(FieldElement::one(), vec![0; lat.rank])];
    let origin = TorusPoint::identity(0);
    let mut total = FieldElement::zero();
    for w in r.weyl_group()? {
        let img = a.act(w, &lat.gram);
        let Some(id) = lat.id_of(&img) else { continue };
        let Some(t) = d.term(id) else { continue };
        total = total.try_add(&t.templates.apply(&one, &img, &origin)?)?;
    }
    Ok(total)
}

/// Fills in the nonvanishing sums of the full-rank residual reports.
pub fn attach_opdam_sums(reports: &mut [ResidualReport], d: &Decomposition, lat: &Lattice, r: &RootSystem) -> Result<()> {
    for rep in reports.iter_mut().filter(|x| x.dim == 0 && x.residual) {
        rep.opdam_sum = Some(opdam_sum(lat.coset(rep.coset), d, lat, r)?);
    }
    Ok(())
}

/// Maximal flags `0 = A_0 ⊃ A_1 ⊃ … ⊃ A_n = p` ending at a point.
fn flags_to(lat: &Lattice, p: usize) -> Vec<Vec<usize>> {
    let target = lat.coset(p);
    let mut out = Vec::new();
    let mut stack = vec![vec![0usize]];
    while let Some(ch) = stack.pop() {
        let last = *ch.last().unwrap();
        if last == p {
            out.push(ch);
            continue;
        }
        for e in &lat.facets[last] {
            if lat.coset(e.sub).contains_coset(target) {
                let mut next = ch.clone();
                next.push(e.sub);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

/// Points at which some maximal flag of the lattice gives a nonzero iterated
/// residue of `x^m f` for a test monomial `m ∈ {−2,…,2}^rank`.
pub fn brute_force_residual_search(f: &FactorizedFunction, lat: &Lattice) -> Result<BTreeSet<usize>> {
    let n = lat.rank;
    if n > BRUTE_FORCE_RANK_CAP {
        return Err(Error::SizeCap(format!("brute-force search is limited to rank {BRUTE_FORCE_RANK_CAP}")));
    }
    let d = BRUTE_FORCE_DEGREE;
    let side = (2 * d + 1) as usize;
    let monomials: Vec<Vec<i64>> = (0..side.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let e = (k % side) as i64 - d;
                    k /= side;
                    e
                })
                .collect()
        })
        .collect();
    let origin = TorusPoint::identity(0);
    let mut cache = ChainCache::new(lat, f);
    let mut found = BTreeSet::new();
    'points: for p in lat.of_dim(0) {
        let a = lat.coset(p);
        for flag in flags_to(lat, p) {
            let t = cache.get(&flag).clone();
            for m in &monomials {
                if !t.apply(&[(FieldElement::one(), m.clone())], a, &origin)?.is_zero() {
                    found.insert(p);
                    continue 'points;
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::lattice::COSET_CAP;
    use crate::mu::{arrangement_of, build_mu, MuParameters};
    use crate::roots::RootType;

    #[test]
    fn a1_single_residual_orbit() {
        let r = RootSystem::build(RootType::A, 1).unwrap();
        let mu = build_mu(&r, &MuParameters::uniform(int(1))).unwrap();
        let lat = Lattice::build(&arrangement_of(&mu), &r.gram, COSET_CAP, Execution::Sequential).unwrap();
        let reps = classify_residual(&mu, &lat, &r, Execution::Sequential).unwrap();
        let pts = residual_points(&reps);
        assert_eq!(pts.len(), 2);
        let orbits: BTreeSet<usize> = reps.iter().filter(|x| pts.contains(&x.coset)).map(|x| x.orbit).collect();
        assert_eq!(orbits.len(), 1);
        assert_eq!(brute_force_residual_search(&mu, &lat).unwrap(), pts);
        assert!(maximal_order_violations(&reps).is_empty());
        let torus = &reps[0];
        assert_eq!((torus.codim, torus.pole_order, torus.residual), (0, 0, true));
    }
}
