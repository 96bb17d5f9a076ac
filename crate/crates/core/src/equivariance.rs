//! Weyl-group structure of residue data: orbits of cosets, transport of data
//! along Weyl elements and regrouping of a decomposition by orbits.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{FieldElement, Rational};
use crate::lattice::Lattice;
use crate::residue::ResidueDatum;
use crate::roots::{RootSystem, WeylElement};
use crate::torus::Coset;
use crate::walk::{ChainCache, Decomposition};

/// A Weyl orbit of lattice cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: usize,
    /// Members with the index (into the Weyl group) of a minimal-length
    /// element carrying the representative onto them.
    pub members: Vec<(usize, usize)>,
    /// Order of the stabilizer of the representative.
    pub stabilizer: usize,
}

/// Ordering key of the orbit representative: dominant origins first, then the
/// origin, then the phases of the base point.
fn rep_key(c: &Coset) -> (bool, Vec<Rational>, Vec<Rational>) {
    let dominant = c.origin().iter().all(|x| !x.is_negative());
    (!dominant, c.origin().to_vec(), c.base.phases.clone())
}

/// Index of `w⁻¹` in the Weyl group.
pub fn inverse_index(r: &RootSystem, w: &WeylElement) -> Result<usize> {
    r.weyl_group()?
        .iter()
        .position(|v| v.matrix == w.inverse)
        .ok_or_else(|| Error::OrbitInconsistency("inverse not in the Weyl group".into()))
}

/// The orbit of a coset.
pub fn orbit(lat: &Lattice, r: &RootSystem, id: usize) -> Result<Orbit> {
    let group = r.weyl_group()?;
    let mut images: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, w) in group.iter().enumerate() {
        let img = lat.act(w, id)?;
        let e = images.entry(img).or_insert(i);
        if group[i].length() < group[*e].length() {
            *e = i;
        }
    }
    let representative = *images.keys().min_by_key(|&&c| (rep_key(lat.coset(c)), c)).expect("nonempty orbit");
    let stabilizer = group.len() / images.len();
    // re-express the members relative to the representative
    let mut members = BTreeMap::new();
    for (i, w) in group.iter().enumerate() {
        let img = lat.act(w, representative)?;
        let e = members.entry(img).or_insert(i);
        if group[i].length() < group[*e].length() {
            *e = i;
        }
    }
    Ok(Orbit { representative, members: members.into_iter().collect(), stabilizer })
}

/// Partition of the given cosets into orbits, ordered by representative key;
/// returns the orbits and, for every coset, its orbit index.
pub fn orbit_partition(lat: &Lattice, r: &RootSystem, ids: &[usize]) -> Result<(Vec<Orbit>, BTreeMap<usize, usize>)> {
    let mut reps: BTreeMap<usize, Orbit> = BTreeMap::new();
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for &id in ids {
        if seen.contains_key(&id) {
            continue;
        }
        let o = orbit(lat, r, id)?;
        for (m, _) in &o.members {
            seen.insert(*m, o.representative);
        }
        reps.insert(o.representative, o);
    }
    let mut orbits: Vec<Orbit> = reps.into_values().collect();
    orbits.sort_by_key(|o| (lat.coset(o.representative).dim(), rep_key(lat.coset(o.representative)), o.representative));
    let pos: BTreeMap<usize, usize> = orbits.iter().enumerate().map(|(i, o)| (o.representative, i)).collect();
    let index = ids.iter().map(|id| (*id, pos[&seen[id]])).collect();
    Ok((orbits, index))
}

/// The datum at `wA` with `(D' ψ)(wσ) = (D (ψ∘w))(σ)`.
///
/// Chains are mapped coset by coset; each step changes sign when `w` reverses
/// the orientation of the step's normal.
pub fn equivariance_transport(datum: &ResidueDatum, w: &WeylElement, lat: &Lattice) -> Result<ResidueDatum> {
    let target = lat.act(w, datum.coset)?;
    let mut out = ResidueDatum::zero(target);
    for (chain, c) in &datum.chains {
        let mapped = chain.iter().map(|&a| lat.act(w, a)).collect::<Result<Vec<usize>>>()?;
        let mut sign = 1i64;
        for i in 1..chain.len() {
            let d = &lat.facet(chain[i - 1], chain[i]).expect("chain of facets").global_normal;
            let d2 = &lat
                .facet(mapped[i - 1], mapped[i])
                .ok_or_else(|| Error::OrbitInconsistency("image of a facet is not a facet".into()))?
                .global_normal;
            let wd = w.act(d);
            if &wd == d2 {
                continue;
            }
            if wd.iter().zip(d2).all(|(a, b)| *a == -b.clone()) {
                sign = -sign;
            } else {
                return Err(Error::OrbitInconsistency("Weyl image of a normal is not a normal".into()));
            }
        }
        let mut single = ResidueDatum::zero(target);
        single.chains.insert(mapped, c * Rational::from_integer(sign.into()));
        out.add_scaled(&single, &Rational::from_integer(1.into()));
    }
    Ok(out)
}

/// The multiplier `p∘w`: `x^m ∘ w = x^{wᵀ m}`.
pub fn compose_multiplier(p: &[(FieldElement, Vec<i64>)], w: &WeylElement) -> Vec<(FieldElement, Vec<i64>)> {
    p.iter()
        .map(|(c, m)| {
            let n = m.len();
            let img = (0..n).map(|j| (0..n).map(|i| m[i] * w.matrix[i][j]).sum()).collect();
            (c.clone(), img)
        })
        .collect()
}

/// One decomposition term seen from its orbit representative.
#[derive(Clone, Debug, Serialize)]
pub struct GroupMember {
    pub coset: usize,
    /// Weyl element `w` (reduced word) with `w·[A] = coset`.
    pub word: String,
    pub weyl_index: usize,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub weight: Rational,
    /// The member's datum pulled back to the representative.
    #[serde(skip)]
    pub pulled_back: ResidueDatum,
    /// Number of residue chains of the member's datum.
    pub chains: usize,
}

/// The decomposition terms of one Weyl orbit.
#[derive(Clone, Debug, Serialize)]
pub struct TermGroup {
    pub representative: usize,
    pub label: String,
    pub dim: usize,
    pub orbit_size: usize,
    pub stabilizer: usize,
    /// `|Stab_W([A])|⁻¹ |P(A)|⁻¹`, the weight of every `w ∈ W` in the
    /// orbit sum.
    #[serde(with = "crate::exact::rational::serde_str")]
    pub group_weight: Rational,
    pub members: Vec<GroupMember>,
}

/// A decomposition regrouped by Weyl orbits.
#[derive(Clone, Debug, Serialize)]
pub struct GroupedDecomposition {
    pub groups: Vec<TermGroup>,
    pub raw_terms: usize,
}

impl GroupedDecomposition {
    /// Number of groups of cosets of dimension `d`.
    pub fn count_dim(&self, d: usize) -> usize {
        self.groups.iter().filter(|g| g.dim == d).count()
    }
}

/// Regroups the terms of a decomposition by Weyl orbits.
pub fn group_decomposition(d: &Decomposition, lat: &Lattice, r: &RootSystem) -> Result<GroupedDecomposition> {
    let ids: Vec<usize> = d.terms.iter().map(|t| t.coset).collect();
    let (orbits, index) = orbit_partition(lat, r, &ids)?;
    let group = r.weyl_group()?;
    let mut groups: Vec<TermGroup> = orbits
        .iter()
        .map(|o| {
            let rep = lat.coset(o.representative);
            let chambers = lat.chambers[o.representative].len();
            TermGroup {
                representative: o.representative,
                label: rep.to_string(),
                dim: rep.dim(),
                orbit_size: o.members.len(),
                stabilizer: o.stabilizer,
                group_weight: Rational::new(1.into(), ((o.stabilizer * chambers) as i64).into()),
                members: vec![],
            }
        })
        .collect();
    for t in &d.terms {
        let gi = index[&t.coset];
        let o = &orbits[gi];
        let (_, wi) =
            *o.members.iter().find(|(m, _)| *m == t.coset).ok_or_else(|| Error::OrbitInconsistency("term outside its orbit".into()))?;
        let w = &group[wi];
        let inv = &group[inverse_index(r, w)?];
        let pulled_back = equivariance_transport(&t.datum, inv, lat)?;
        if pulled_back.coset != o.representative {
            return Err(Error::OrbitInconsistency("pull-back does not land on the representative".into()));
        }
        groups[gi].members.push(GroupMember {
            coset: t.coset,
            word: w.word_string(),
            weyl_index: wi,
            weight: t.weight.clone(),
            chains: t.datum.chains.len(),
            pulled_back,
        });
    }
    Ok(GroupedDecomposition { groups, raw_terms: d.raw_term_count() })
}

/// Exact value of a point group, computed two ways: directly as
/// `Σ_B weight_B (D_B(pf))(σ_B)` and through the representative as
/// `Σ_B weight_B (D'_B((p∘w_B) f))(σ_A)` with the pulled-back data.
pub fn point_group_values(
    group: &TermGroup,
    d: &Decomposition,
    lat: &Lattice,
    r: &RootSystem,
    multiplier: &[(FieldElement, Vec<i64>)],
    cache: &mut ChainCache,
) -> Result<(FieldElement, FieldElement)> {
    if group.dim != 0 {
        return Err(Error::NotAPoint);
    }
    let weyl = r.weyl_group()?;
    let origin = crate::torus::TorusPoint::identity(0);
    let rep = lat.coset(group.representative);
    let mut direct = FieldElement::zero();
    let mut pulled = FieldElement::zero();
    for m in &group.members {
        let term = d.term(m.coset).expect("member of the decomposition");
        let w = FieldElement::from_rational(m.weight.clone());
        let v = term.templates.apply(multiplier, lat.coset(m.coset), &origin)?;
        direct = direct.try_add(&v.try_mul(&w))?;
        let t = cache.datum(&m.pulled_back);
        let pw = compose_multiplier(multiplier, &weyl[m.weyl_index]);
        let v2 = t.apply(&pw, rep, &origin)?;
        pulled = pulled.try_add(&v2.try_mul(&w))?;
    }
    Ok((direct, pulled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::exec::Execution;
    use crate::lattice::COSET_CAP;
    use crate::mu::{arrangement_of, build_mu, MuParameters};
    use crate::roots::RootType;
    use crate::walk::{compute_residue_data, WalkConfig};

    #[test]
    fn a1_orbit_and_transport() {
        let r = RootSystem::build(RootType::A, 1).unwrap();
        let mu = build_mu(&r, &MuParameters::uniform(int(1))).unwrap();
        let lat = Lattice::build(&arrangement_of(&mu), &r.gram, COSET_CAP, Execution::Sequential).unwrap();
        let d = compute_residue_data(&mu, &lat, &WalkConfig::dominant(&r, &MuParameters::uniform(int(1)))).unwrap();
        let point = d.terms.iter().find(|t| lat.coset(t.coset).is_point()).unwrap();
        let o = orbit(&lat, &r, point.coset).unwrap();
        assert_eq!(o.members.len(), 2);
        assert_eq!(o.stabilizer, 1);
        let s = &r.weyl_group().unwrap()[1];
        let moved = equivariance_transport(&point.datum, s, &lat).unwrap();
        assert_ne!(moved.coset, point.coset);
        // the reflection reverses the orientation of the only step
        let c = moved.chains.values().next().unwrap();
        assert_eq!(c, &-point.datum.chains.values().next().unwrap().clone());
        let e = &r.weyl_group().unwrap()[0];
        assert_eq!(equivariance_transport(&point.datum, e, &lat).unwrap(), point.datum);
        let g = group_decomposition(&d, &lat, &r).unwrap();
        assert_eq!((g.count_dim(1), g.count_dim(0)), (1, 1));
    }
}
