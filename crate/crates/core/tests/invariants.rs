//! Algebraic and analytic invariants of the engine, each checked against an
//! independent computation.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_multiplier, random_regular_point, Setup};
use torus_residue::equivariance::{compose_multiplier, equivariance_transport, group_decomposition, point_group_values};
use torus_residue::exact::cyclo::euler_phi;
use torus_residue::exact::{int, rat, CycloNumber, FieldElement, MonoConst};
use torus_residue::exec::Execution;
use torus_residue::lattice::{Lattice, COSET_CAP};
use torus_residue::mu::{arrangement_of, sub_levi_part, Factor, FactorizedFunction, MuParameters};
use torus_residue::numeric::{cauchy_residue, check_crossing_identity, multiplier_function, quadrature_integral, NumericConfig};
use torus_residue::residue::{apply_datum, residue_u};
use torus_residue::roots::RootType;
use torus_residue::torus::TorusPoint;
use torus_residue::walk::{ChainCache, WalkConfig};

const Q: f64 = 2.0;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

fn cyclo(order: u32, coeffs: &[i64]) -> CycloNumber {
    let n = euler_phi(order);
    CycloNumber::from_coeffs(order, coeffs.iter().take(n).map(|c| int(*c)).collect())
}

fn cyclo_strategy() -> impl Strategy<Value = (u32, Vec<i64>, Vec<i64>, Vec<i64>)> {
    prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]).prop_flat_map(|n| {
        let v = || prop::collection::vec(-4i64..=4, 8);
        (Just(n), v(), v(), v())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_field_axioms((n, a, b, c) in cyclo_strategy()) {
        let (a, b, c) = (cyclo(n, &a), cyclo(n, &b), cyclo(n, &c));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        // the complex embedding is a ring homomorphism
        let z = a.mul(&b).to_complex();
        prop_assert!(close(z, a.to_complex() * b.to_complex(), 1e-9));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn roots_of_unity_multiply_by_adding_phases(p1 in 0i64..24, p2 in 0i64..24) {
        let z1 = CycloNumber::root_of_unity(&rat(p1, 24));
        let z2 = CycloNumber::root_of_unity(&rat(p2, 24));
        let z3 = CycloNumber::root_of_unity(&(rat(p1, 24) + rat(p2, 24)));
        prop_assert_eq!(z1.embed(24).mul(&z2.embed(24)), z3.embed(24));
    }

    #[test]
    fn q_powers_evaluate_consistently(a in -12i64..12, b in -12i64..12, d in 1i64..7) {
        let x = FieldElement::q_pow(rat(a, d));
        let y = FieldElement::q_pow(rat(b, d));
        let z = x.try_mul(&y).to_complex(Q);
        prop_assert!(close(z, Complex64::new(Q.powf((a + b) as f64 / d as f64), 0.0), 1e-12));
        let s = x.try_add(&y).unwrap().to_complex(Q);
        prop_assert!(close(s, x.to_complex(Q) + y.to_complex(Q), 1e-12));
    }

    #[test]
    fn mu_is_weyl_invariant(seed in any::<u64>(), sys in 0usize..4) {
        let s = match sys {
            0 => Setup::uniform(RootType::A, 2, 1),
            1 => Setup::new(RootType::B, 2, MuParameters::short_long(int(1), int(2))),
            2 => Setup::new(RootType::C, 2, MuParameters::short_long(int(2), int(1))),
            _ => Setup::uniform(RootType::G2, 2, 1),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = s.lat.of_dim(s.r.rank)[0];
        let p = random_regular_point(&mut rng, &s.lat, full);
        let v = s.mu.evaluate(&p).unwrap().to_complex(Q);
        for w in s.r.weyl_group().unwrap() {
            let wv = s.mu.evaluate(&p.act(w)).unwrap().to_complex(Q);
            prop_assert!(close(v, wv, 1e-9), "{} at w = {}", s.label, w.word_string());
        }
    }
}

/// The factor `1 - c·x^m`.
fn factor(mono: Vec<i64>, c: MonoConst) -> Factor {
    Factor { mono, c }
}

fn rank_one_lattice(f: &FactorizedFunction) -> Lattice {
    Lattice::build(&arrangement_of(f), &vec![vec![int(1)]], COSET_CAP, Execution::Sequential).unwrap()
}

/// Compares the exact residue at every point of a rank-one function with a
/// numeric contour integral around it. The exact residue is taken in `u` with
/// `x = σ·exp(u·α̃)` and the contour in `u` with `x = σ·q^{u·α̃}`, so they
/// differ by the factor `log q`.
fn residues_match_contour(f: &FactorizedFunction) {
    let lat = rank_one_lattice(f);
    let cfg = NumericConfig { grid: 512, ..Default::default() };
    let mut checked = 0;
    for id in lat.of_dim(0) {
        let facet = lat.facet(0, id).unwrap();
        let exact = residue_u(f, facet).evaluate(&TorusPoint::identity(0)).unwrap().to_complex(Q);
        let point = &lat.coset(id).base;
        let numeric = cauchy_residue(f, point, &facet.global_normal, 0.05, &cfg).unwrap() * Q.ln();
        assert!(close(exact, numeric, 1e-8), "{}: exact {exact} vs contour {numeric}", lat.coset(id));
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn simple_pole_residues_match_contour_integrals() {
    let a1 = Setup::uniform(RootType::A, 1, 1);
    residues_match_contour(&a1.mu);
    let a1 = Setup::uniform(RootType::A, 1, 2);
    residues_match_contour(&a1.mu);
}

#[test]
fn double_pole_residues_match_contour_integrals() {
    // x² (1 - x)(1 + x/q²) / (1 - x/q)²
    let f = FactorizedFunction::product(
        1,
        FieldElement::one(),
        vec![
            (factor(vec![1], MonoConst::q_pow(int(-1))), -2),
            (factor(vec![1], MonoConst::one()), 1),
            (factor(vec![1], MonoConst::new(rat(1, 2), int(-2))), 1),
        ],
    )
    .mul(&FactorizedFunction::monomial(FieldElement::one(), vec![2]));
    residues_match_contour(&f);
    // a double pole at a primitive cube root of unity times q^(1/2)
    let g = FactorizedFunction::product(1, FieldElement::one(), vec![(factor(vec![1], MonoConst::new(rat(1, 3), rat(-1, 2))), -2)])
        .mul(&FactorizedFunction::monomial(FieldElement::one(), vec![-1]));
    residues_match_contour(&g);
}

#[test]
fn quadrature_converges_near_a_pole() {
    // 1/(1 - x) on |x| = q^(-0.08): the exact mean is 1 and the trapezoid
    // error decays like r^N with r close to one
    let f = FactorizedFunction::product(1, FieldElement::one(), vec![(factor(vec![1], MonoConst::one()), -1)]);
    let errors: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&n| {
            let cfg = NumericConfig { grid: n, ..Default::default() };
            (quadrature_integral(&f, &[rat(-2, 25)], &cfg, Execution::Sequential).unwrap() - 1.0).norm()
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-5, "{errors:?}");
}

#[test]
fn quadrature_rejects_a_singular_contour() {
    let a1 = Setup::uniform(RootType::A, 1, 1);
    assert!(quadrature_integral(&a1.mu, &[int(1)], &NumericConfig::default(), Execution::Sequential).is_err());
}

#[test]
fn g2_crossing_identity_across_a_long_root_family() {
    let g2 = Setup::uniform(RootType::G2, 2, 1);
    let cfg = NumericConfig { grid: 256, ..Default::default() };
    // crosses z_β = 1 at z = (2/5, 1) and nothing else
    let rep =
        check_crossing_identity(&g2.mu, &g2.lat, &[rat(2, 5), rat(5, 4)], &[rat(2, 5), rat(3, 4)], &cfg, Execution::Parallel).unwrap();
    assert_eq!(rep.form, Some(vec![0, 1]));
    assert!(rep.pass, "{rep:?}");
    assert!(rep.predicted.re.abs() > 1e-6);
}

#[test]
fn sequential_and_parallel_agree() {
    let g2 = Setup::uniform(RootType::G2, 2, 1);
    let cfg = NumericConfig { grid: 64, ..Default::default() };
    let z = [rat(1, 16), rat(1, 16)];
    let a = quadrature_integral(&g2.mu, &z, &cfg, Execution::Sequential).unwrap();
    let b = quadrature_integral(&g2.mu, &z, &cfg, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    let l1 = Lattice::build(&arrangement_of(&g2.mu), &g2.r.gram, COSET_CAP, Execution::Sequential).unwrap();
    assert_eq!(l1.len(), g2.lat.len());
    for id in 0..l1.len() {
        assert_eq!(l1.coset(id), g2.lat.coset(id));
    }
}

#[test]
fn transported_data_satisfy_the_equivariance_identity() {
    let s = Setup::uniform(RootType::B, 2, 1);
    let d = s.walk();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for t in &d.terms {
        for w in s.r.weyl_group().unwrap() {
            let moved = equivariance_transport(&t.datum, w, &s.lat).unwrap();
            let image = s.lat.act(w, t.coset).unwrap();
            assert_eq!(moved.coset, image);
            let y = random_regular_point(&mut rng, &s.lat, t.coset);
            let m = random_multiplier(&mut rng, 2, 2);
            let psi = multiplier_function(2, &m);
            let psi_w = multiplier_function(2, &compose_multiplier(&m, w));
            // D_{wA}(f·ψ)(w·y) = D_A(f·(ψ∘w))(y) for W-invariant f
            let lhs = apply_datum(&moved, &s.mu.mul(&psi), &y.act(w), &s.lat).unwrap();
            let rhs = apply_datum(&t.datum, &s.mu.mul(&psi_w), &y, &s.lat).unwrap();
            assert!(lhs.try_sub(&rhs).unwrap().is_zero(), "{} w = {}", s.lat.coset(t.coset), w.word_string());
        }
    }
}

#[test]
fn grouped_point_values_match_direct_values() {
    let s = Setup::uniform(RootType::G2, 2, 1);
    let d = s.walk();
    let grouped = group_decomposition(&d, &s.lat, &s.r).unwrap();
    let mut cache = ChainCache::new(&s.lat, &s.mu);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random_multiplier(&mut rng, 2, 3);
    let mut raw = 0;
    for g in grouped.groups.iter().filter(|g| g.dim == 0) {
        let (direct, pulled) = point_group_values(g, &d, &s.lat, &s.r, &m, &mut cache).unwrap();
        assert!(close(direct.to_complex(Q), pulled.to_complex(Q), 1e-10), "{}", g.label);
        raw += g.members.iter().map(|m| m.chains).sum::<usize>();
    }
    assert_eq!(raw, 9);
}

/// Along a codimension-one coset `S`, only the factors of the Levi subsystem
/// attached to `S` are singular, so the residue of `f` is the residue of that
/// part times the rest of `f` restricted to `S`.
#[test]
fn residues_factor_through_the_levi_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for s in [Setup::uniform(RootType::G2, 2, 1), Setup::new(RootType::B, 2, MuParameters::short_long(int(1), int(2)))] {
        for id in s.lat.of_dim(1) {
            let sub = s.lat.coset(id);
            let facet = s.lat.facet(0, id).unwrap();
            let levi = sub_levi_part(&s.mu, &sub.forms);
            let rest = s.mu.mul(&levi.inverse().unwrap()).restrict(sub);
            let full = residue_u(&s.mu, facet);
            let split = residue_u(&levi, facet).mul(&rest);
            for _ in 0..4 {
                let y = sub.local_coords(&random_regular_point(&mut rng, &s.lat, id));
                let a = full.evaluate(&y).unwrap();
                let b = split.evaluate(&y).unwrap();
                assert!(a.try_sub(&b).unwrap().is_zero(), "{} on {sub}", s.label);
            }
        }
    }
}

/// Start points in the dominant chamber beyond every pole give the same
/// decomposition.
#[test]
fn decomposition_is_stable_within_the_start_chamber() {
    let s = Setup::uniform(RootType::G2, 2, 1);
    let base = s.walk();
    for start in [[int(3), int(5)], [rat(25, 2), int(4)], [int(40), rat(81, 7)]] {
        let mut cfg = WalkConfig::dominant(&s.r, &s.params);
        cfg.start = start.to_vec();
        let d = s.walk_with(cfg);
        assert_eq!(d.terms.len(), base.terms.len());
        for t in &d.terms {
            assert!(t.templates.equals(&base.term(t.coset).unwrap().templates), "{}", s.lat.coset(t.coset));
        }
    }
}

#[test]
fn line_restriction_agrees_with_substitution() {
    let g2 = Setup::uniform(RootType::G2, 2, 1);
    let base = TorusPoint::real(vec![rat(1, 2), int(0)]);
    let line = g2.mu.restrict_to_line(&base, &[0, 1]);
    assert_eq!(line.dim, 1);
    // factors in x^{α∨} alone are constant along ω_β
    let varying = line.factors.iter().filter(|f| !f.is_constant()).count();
    assert_eq!(varying, 20);
    for (phase, exp) in [(rat(1, 5), rat(1, 7)), (int(0), rat(-3, 5)), (rat(1, 3), rat(9, 5))] {
        let t = TorusPoint::new(vec![phase.clone()], vec![exp.clone()]);
        let p = TorusPoint::new(vec![int(0), phase], vec![rat(1, 2), exp]);
        assert_eq!(line.evaluate(&t).unwrap(), g2.mu.evaluate(&p).unwrap());
    }
}
