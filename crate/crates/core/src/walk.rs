//! The contour walk: shifts the integration contour from a start point to the
//! chamber points `r(A) + ε_Q` of every coset, collecting residue data at the
//! crossed hypersurfaces.
//!
//! Sign convention: moving the contour of a coset `A` across a facet `S` from
//! the positive side (`⟨m_S, ρ⟩` above the offset) to the negative side adds
//! `+Res_S`; the opposite direction adds `−Res_S`. With mass-one measures on
//! every compact torus and residues taken in the `u` variable, no further
//! constant appears.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::lattice::Lattice;
use crate::linalg::dot_iq;
use crate::mu::{FactorizedFunction, MuParameters};
use crate::residue::{ResidueDatum, Templates};
use crate::roots::RootSystem;
use crate::torus::Chamber;

/// Parameters of a walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Start point (global real coordinates).
    #[serde(with = "crate::exact::rational::serde_vec")]
    pub start: Vec<Rational>,
    /// Seed of the random waypoints and perturbations.
    pub seed: u64,
    /// Random waypoints inserted on every segment.
    pub waypoints: usize,
    /// Perturbation retries allowed per segment.
    pub retry_budget: usize,
}

impl WalkConfig {
    /// The start `c_i = (K + 1)·7^i` with `K` the largest parameter; it lies
    /// beyond every pole in the dominant chamber.
    pub fn dominant(r: &RootSystem, params: &MuParameters) -> Self {
        let mut kmax = Rational::zero();
        for p in [&params.short, &params.long].into_iter().flatten() {
            kmax = kmax.max(p.k.clone());
            if let Some(l) = &p.l {
                kmax = kmax.max(l.clone());
            }
        }
        let c = (kmax + int(1)).ceil();
        let start = (0..r.rank).map(|i| &c * int(7i64.pow(i as u32))).collect();
        WalkConfig { start, seed: 0, waypoints: 0, retry_budget: 64 }
    }

    pub fn with_seed(mut self, seed: u64, waypoints: usize) -> Self {
        self.seed = seed;
        self.waypoints = waypoints;
        self
    }
}

/// A contour shift across a hyperplane of the full torus.
#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    /// Index of the chamber whose walk produced the crossing.
    pub chamber: usize,
    /// Primitive form and real offset of the crossed real hyperplane.
    pub form: Vec<i64>,
    pub offset: Rational,
    /// Crossed components with a nonzero residue.
    pub subs: Vec<usize>,
    /// Global real coordinates of the crossing point.
    pub point: Vec<Rational>,
    /// +1 from the positive to the negative side, −1 otherwise.
    pub sign: i8,
}

/// One coset's contribution: `weight · Σ_Q ∫_{r(A)+ε_Q} Res_A ψ`.
#[derive(Clone, Debug)]
pub struct DecompositionTerm {
    pub coset: usize,
    /// `1/|P(A)|`, the chamber average.
    pub weight: Rational,
    pub chambers: Vec<Chamber>,
    pub datum: ResidueDatum,
    /// The datum applied to multiples of the walked function.
    pub templates: Templates,
}

/// Output of [`compute_residue_data`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub start: Vec<Rational>,
    pub function: FactorizedFunction,
    pub terms: Vec<DecompositionTerm>,
    pub crossings: Vec<Crossing>,
    /// Number of segment walks performed.
    pub walks: usize,
}

impl Decomposition {
    pub fn term(&self, coset: usize) -> Option<&DecompositionTerm> {
        self.terms.iter().find(|t| t.coset == coset)
    }

    /// Number of raw terms: one per (coset, residue chain) pair. Several
    /// chains can end on the same coset when distinct lines meet there.
    pub fn raw_term_count(&self) -> usize {
        self.terms.iter().map(|t| t.datum.chains.len()).sum()
    }

    /// Data by coset id.
    pub fn data(&self) -> BTreeMap<usize, ResidueDatum> {
        self.terms.iter().map(|t| (t.coset, t.datum.clone())).collect()
    }
}

/// Templates of chains, computed incrementally and cached.
pub struct ChainCache<'a> {
    lat: &'a Lattice,
    cache: HashMap<Vec<usize>, Templates>,
}

impl<'a> ChainCache<'a> {
    pub fn new(lat: &'a Lattice, f: &FactorizedFunction) -> Self {
        let mut cache = HashMap::new();
        cache.insert(vec![0], Templates::identity(f.clone()));
        ChainCache { lat, cache }
    }

    pub fn get(&mut self, chain: &[usize]) -> &Templates {
        if !self.cache.contains_key(chain) {
            let parent = chain[..chain.len() - 1].to_vec();
            self.get(&parent);
            let a = parent[parent.len() - 1];
            let s = chain[chain.len() - 1];
            let facet = self.lat.facet(a, s).expect("chain of facets");
            let t = self.cache[&parent].residue(facet);
            self.cache.insert(chain.to_vec(), t);
        }
        &self.cache[chain]
    }

    /// Templates of a datum.
    pub fn datum(&mut self, d: &ResidueDatum) -> Templates {
        let c = self.lat.coset(d.coset);
        let mut out = Templates::zero(c.ambient, c.dim());
        for (ch, x) in &d.chains {
            let t = self.get(ch).clone();
            out.add_scaled(&t, x);
        }
        out
    }
}

/// Real hyperplanes of a coset with their facet components.
struct Hyper {
    form: Vec<i64>,
    offset: Rational,
    members: Vec<usize>,
}

fn hyperplanes(lat: &Lattice, a: usize) -> Vec<Hyper> {
    let mut map: BTreeMap<(Vec<i64>, Rational), Vec<usize>> = BTreeMap::new();
    for e in &lat.facets[a] {
        map.entry((e.facet.form.clone(), e.facet.offset().clone())).or_default().push(e.sub);
    }
    map.into_iter().map(|((form, offset), members)| Hyper { form, offset, members }).collect()
}

fn on_some(hs: &[Hyper], x: &[Rational]) -> bool {
    hs.iter().any(|h| dot_iq(&h.form, x) == h.offset)
}

/// Crossings of the segment `p → q`, ordered along it, or `None` if two
/// distinct hyperplanes are met at the same parameter.
fn segment_crossings(hs: &[Hyper], p: &[Rational], q: &[Rational]) -> Option<Vec<(Rational, usize, i8)>> {
    let mut out = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let sp = dot_iq(&h.form, p) - &h.offset;
        let sq = dot_iq(&h.form, q) - &h.offset;
        if sp.is_zero() || sq.is_zero() {
            return None;
        }
        if sp.is_positive() != sq.is_positive() {
            let t = &sp / (&sp - &sq);
            out.push((t, i, if sp.is_positive() { 1 } else { -1 }));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if out.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    Some(out)
}

fn random_offset(rng: &mut ChaCha8Rng, scale: &Rational, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| Rational::new(rng.gen_range(-997i64..=997).into(), 3989.into()) * scale).collect()
}

/// A polygonal path from `p` to `q` whose segments cross hyperplanes one at
/// a time.
fn plan_path(hs: &[Hyper], p: &[Rational], q: &[Rational], cfg: &WalkConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Rational>>> {
    let dim = p.len();
    let span = p.iter().zip(q).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero).max(int(1));
    let mut pts = vec![p.to_vec()];
    for k in 1..=cfg.waypoints {
        let frac = Rational::new((k as i64).into(), ((cfg.waypoints + 1) as i64).into());
        loop {
            let off = random_offset(rng, &span, dim);
            let w: Vec<Rational> = (0..dim).map(|i| &p[i] + (&q[i] - &p[i]) * &frac + &off[i]).collect();
            if !on_some(hs, &w) {
                pts.push(w);
                break;
            }
        }
    }
    pts.push(q.to_vec());
    let mut out = vec![pts[0].clone()];
    for seg in pts.windows(2) {
        let mut stack = vec![seg[1].clone()];
        let mut budget = cfg.retry_budget;
        while let Some(next) = stack.last().cloned() {
            let cur = out.last().unwrap().clone();
            if segment_crossings(hs, &cur, &next).is_some() {
                out.push(next);
                stack.pop();
                continue;
            }
            if budget == 0 {
                return Err(Error::PathDegenerate(cfg.retry_budget));
            }
            budget -= 1;
            let len = cur.iter().zip(&next).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero);
            let scale = if len.is_zero() { Rational::new(1.into(), 64.into()) } else { len / int(4) };
            let w = loop {
                let off = random_offset(rng, &scale, dim);
                let w: Vec<Rational> = (0..dim).map(|i| (&cur[i] + &next[i]) / int(2) + &off[i]).collect();
                if !on_some(hs, &w) {
                    break w;
                }
            };
            stack.push(w);
        }
    }
    Ok(out)
}

/// Runs the walk for `f` on the lattice of its arrangement.
pub fn compute_residue_data(f: &FactorizedFunction, lat: &Lattice, cfg: &WalkConfig) -> Result<Decomposition> {
    let n = lat.rank;
    if cfg.start.len() != n {
        return Err(Error::InvalidInput(format!("start point has {} coordinates, expected {n}", cfg.start.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache = ChainCache::new(lat, f);
    let mut totals: BTreeMap<usize, ResidueDatum> = BTreeMap::new();
    let mut crossings = Vec::new();
    let mut walks = 0;
    let root_hs = hyperplanes(lat, 0);
    if on_some(&root_hs, &cfg.start) {
        return Err(Error::InvalidInput("start point lies on a singular hyperplane".into()));
    }
    // pending arrivals per codimension, keyed by (coset, local start point)
    let mut pending: Vec<BTreeMap<(usize, Vec<Rational>), ResidueDatum>> = vec![BTreeMap::new(); n + 1];
    pending[0].insert((0, cfg.start.clone()), ResidueDatum::identity());
    for codim in 0..=n {
        let level = std::mem::take(&mut pending[codim]);
        for ((a, x0), datum) in level {
            totals.entry(a).or_insert_with(|| ResidueDatum::zero(a)).add_scaled(&datum, &Rational::one());
            let coset = lat.coset(a);
            if coset.dim() == 0 {
                continue;
            }
            let hs = hyperplanes(lat, a);
            let chambers = &lat.chambers[a];
            let inv = Rational::new(1.into(), (chambers.len() as i64).into());
            for (qi, ch) in chambers.iter().enumerate() {
                let path = plan_path(&hs, &x0, &ch.witness, cfg, &mut rng)?;
                walks += 1;
                for seg in path.windows(2) {
                    for (t, hi, sign) in segment_crossings(&hs, &seg[0], &seg[1]).expect("planned path") {
                        let local: Vec<Rational> = (0..seg[0].len()).map(|i| &seg[0][i] + (&seg[1][i] - &seg[0][i]) * &t).collect();
                        let global = coset.global_real(&local);
                        let coef = &inv * int(sign as i64);
                        let mut hit = Vec::new();
                        for &s in &hs[hi].members {
                            let d = datum.extend(s, &coef);
                            if cache.datum(&d).is_zero() {
                                continue;
                            }
                            hit.push(s);
                            let start = lat.coset(s).local_real(&global);
                            pending[codim + 1].entry((s, start)).and_modify(|e| e.add_scaled(&d, &Rational::one())).or_insert(d);
                        }
                        if codim == 0 && !hit.is_empty() {
                            crossings.push(Crossing {
                                chamber: qi,
                                form: hs[hi].form.clone(),
                                offset: hs[hi].offset.clone(),
                                subs: hit,
                                point: global,
                                sign,
                            });
                        }
                    }
                }
            }
        }
    }
    let mut terms = Vec::new();
    for (a, datum) in totals {
        if datum.is_empty() {
            continue;
        }
        let templates = cache.datum(&datum);
        if templates.is_zero() {
            continue;
        }
        let chambers = lat.chambers[a].clone();
        let weight = Rational::new(1.into(), (chambers.len() as i64).into());
        terms.push(DecompositionTerm { coset: a, weight, chambers, datum, templates });
    }
    Ok(Decomposition { start: cfg.start.clone(), function: f.clone(), terms, crossings, walks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::lattice::COSET_CAP;
    use crate::mu::{arrangement_of, build_mu};
    use crate::roots::RootType;

    fn setup(t: RootType, rank: usize, k: i64) -> (RootSystem, FactorizedFunction, Lattice) {
        let r = RootSystem::build(t, rank).unwrap();
        let mu = build_mu(&r, &MuParameters::uniform(int(k))).unwrap();
        let lat = Lattice::build(&arrangement_of(&mu), &r.gram, COSET_CAP, Execution::Parallel).unwrap();
        (r, mu, lat)
    }

    #[test]
    fn a1_two_terms() {
        let (r, mu, lat) = setup(RootType::A, 1, 1);
        let cfg = WalkConfig::dominant(&r, &MuParameters::uniform(int(1)));
        let d = compute_residue_data(&mu, &lat, &cfg).unwrap();
        assert_eq!(d.terms.len(), 2);
        let pt = d.terms.iter().find(|t| lat.coset(t.coset).is_point()).unwrap();
        assert_eq!(lat.coset(pt.coset).origin(), &[int(1)]);
    }

    #[test]
    fn g2_sixteen_terms() {
        let (r, mu, lat) = setup(RootType::G2, 2, 1);
        let cfg = WalkConfig::dominant(&r, &MuParameters::uniform(int(1)));
        let d = compute_residue_data(&mu, &lat, &cfg).unwrap();
        let dims: Vec<usize> = d.terms.iter().map(|t| lat.coset(t.coset).dim()).collect();
        let count = |k| dims.iter().filter(|d| **d == k).count();
        // Two point chains, through S_α and S_{3α+β}, end on (q, 1).
        assert_eq!((count(2), count(1), count(0)), (1, 6, 8), "{dims:?}");
        assert_eq!(d.raw_term_count(), 16);
    }
}
