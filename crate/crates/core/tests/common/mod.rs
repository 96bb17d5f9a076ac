//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use torus_residue::exact::{int, FieldElement, Rational};
use torus_residue::exec::Execution;
use torus_residue::lattice::{Lattice, COSET_CAP};
use torus_residue::mu::{arrangement_of, build_mu, FactorizedFunction, MuParameters};
use torus_residue::roots::{RootSystem, RootType};
use torus_residue::torus::TorusPoint;
use torus_residue::walk::{compute_residue_data, Decomposition, WalkConfig};

pub struct Setup {
    pub label: String,
    pub r: RootSystem,
    pub params: MuParameters,
    pub mu: FactorizedFunction,
    pub lat: Lattice,
}

impl Setup {
    pub fn new(t: RootType, rank: usize, params: MuParameters) -> Self {
        let r = RootSystem::build(t, rank).unwrap();
        let mu = build_mu(&r, &params).unwrap();
        let lat = Lattice::build(&arrangement_of(&mu), &r.gram, COSET_CAP, Execution::Parallel).unwrap();
        let label = format!("{}{} {}", t, rank, params_label(&params));
        Setup { label, r, params, mu, lat }
    }

    pub fn uniform(t: RootType, rank: usize, k: i64) -> Self {
        Self::new(t, rank, MuParameters::uniform(int(k)))
    }

    pub fn walk(&self) -> Decomposition {
        self.walk_with(WalkConfig::dominant(&self.r, &self.params))
    }

    pub fn walk_with(&self, cfg: WalkConfig) -> Decomposition {
        compute_residue_data(&self.mu, &self.lat, &cfg).unwrap()
    }
}

fn params_label(p: &MuParameters) -> String {
    let ks = p.short.as_ref().map(|o| o.k.to_string()).unwrap_or_default();
    let kl = p.long.as_ref().map(|o| o.k.to_string()).unwrap_or_default();
    if ks == kl {
        format!("k={ks}")
    } else {
        format!("k_short={ks} k_long={kl}")
    }
}

/// The rank ≤ 2 systems crossed with `k = 1`, `k = 2` and, for systems with
/// two root lengths, `k_short = 1, k_long = 2`.
pub fn test_matrix() -> Vec<Setup> {
    let mut out = Vec::new();
    for (t, n) in [(RootType::A, 1), (RootType::A, 2), (RootType::B, 2), (RootType::G2, 2)] {
        out.push(Setup::uniform(t, n, 1));
        out.push(Setup::uniform(t, n, 2));
        if matches!(t, RootType::B | RootType::G2) {
            out.push(Setup::new(t, n, MuParameters::short_long(int(1), int(2))));
        }
    }
    out
}

/// A random Laurent polynomial with small rational coefficients and
/// exponents in `[-2, 2]`.
pub fn random_multiplier(rng: &mut ChaCha8Rng, rank: usize, terms: usize) -> Vec<(FieldElement, Vec<i64>)> {
    (0..terms)
        .map(|_| {
            let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into());
            let c = if num_traits::Zero::is_zero(&c) { int(1) } else { c };
            let m = (0..rank).map(|_| rng.gen_range(-2i64..=2)).collect();
            (FieldElement::from_rational(c), m)
        })
        .collect()
}

/// A random point of a coset avoiding every component that does not contain
/// the whole coset.
pub fn random_regular_point(rng: &mut ChaCha8Rng, lat: &Lattice, id: usize) -> TorusPoint {
    let a = lat.coset(id);
    loop {
        let phases = (0..a.dim()).map(|_| Rational::new(rng.gen_range(0i64..12).into(), 12.into())).collect();
        let exps = (0..a.dim()).map(|_| Rational::new(rng.gen_range(-40i64..=40).into(), 17.into())).collect();
        let p = a.from_local(&TorusPoint::new(phases, exps));
        if lat.arrangement.regular_test(&p, a).unwrap() {
            return p;
        }
    }
}
