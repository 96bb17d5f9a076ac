//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_multiplier, random_regular_point, test_matrix, Setup};
use torus_residue::equivariance::{compose_multiplier, equivariance_transport, group_decomposition, orbit_partition};
use torus_residue::exact::{int, rat, FieldElement, Rational};
use torus_residue::exec::Execution;
use torus_residue::linalg::orient;
use torus_residue::numeric::{check_crossing_identity, check_full_decomposition, quadrature_integral, NumericConfig};
use torus_residue::residual::{brute_force_residual_search, classify_residual, maximal_order_violations, opdam_sum, residual_points};
use torus_residue::roots::RootType;
use torus_residue::torus::TorusPoint;
use torus_residue::walk::{ChainCache, Decomposition, WalkConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Real part and phases of a point coset.
fn point_parts(s: &Setup, id: usize) -> (Vec<Rational>, Vec<Rational>) {
    let c = s.lat.coset(id);
    (c.origin().to_vec(), c.base.phases.clone())
}

fn criterion_1(g2: &Setup) -> Outcome {
    let t0 = Instant::now();
    let reports = classify_residual(&g2.mu, &g2.lat, &g2.r, Execution::Parallel).unwrap();
    let pts: Vec<usize> = residual_points(&reports).into_iter().collect();
    let (orbits, _) = orbit_partition(&g2.lat, &g2.r, &pts).unwrap();
    let reps: BTreeSet<(Vec<Rational>, Vec<Rational>)> = orbits.iter().map(|o| point_parts(g2, o.representative)).collect();
    let expected: BTreeSet<(Vec<Rational>, Vec<Rational>)> = [
        (vec![int(1), int(1)], vec![int(0), int(0)]),
        (vec![int(1), int(0)], vec![int(0), int(0)]),
        (vec![int(1), int(0)], vec![int(0), rat(1, 2)]),
        (vec![int(1), int(0)], vec![int(0), rat(1, 3)]),
    ]
    .into_iter()
    .collect();
    // the 1/3 and 2/3 phases share an orbit
    let paired = {
        let third = g2.lat.coset(pts.iter().copied().find(|&p| point_parts(g2, p).1 == vec![int(0), rat(1, 3)]).unwrap_or(0));
        let two_thirds = pts.iter().copied().find(|&p| point_parts(g2, p).1 == vec![int(0), rat(2, 3)]);
        two_thirds.is_some_and(|p| g2.r.weyl_group().unwrap().iter().any(|w| third.act(w, &g2.lat.gram) == *g2.lat.coset(p)))
    };
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        orbits.len() == 4 && reps == expected && paired && secs < 60.0,
        format!(
            "{} residual point orbits, representatives as expected: {}, phases 1/3~2/3 paired: {paired}, {secs:.1}s",
            orbits.len(),
            reps == expected
        ),
    )
}

fn criterion_2(g2: &Setup, d: &Decomposition) -> Outcome {
    let mut families: BTreeSet<Vec<i64>> = BTreeSet::new();
    for cor in &g2.r.coroots {
        let mut f = cor.clone();
        orient(&mut f);
        families.insert(f);
    }
    let crossed: BTreeSet<Vec<i64>> = d.crossings.iter().map(|c| c.form.clone()).collect();
    // On the walk into the dominant chamber, the β-family crossing point
    // β/2 + t·ω_α has 3/2 < t < 5/2, i.e. 0 < z_α < 1.
    let dominant = g2.lat.chambers[0].iter().position(|q| q.witness.iter().all(|x| x.is_positive())).unwrap();
    let beta: Vec<&Vec<Rational>> =
        d.crossings.iter().filter(|c| c.chamber == dominant && c.form == vec![0, 1]).map(|c| &c.point).collect();
    let beta_ok = !beta.is_empty() && beta.iter().all(|p| p[0].is_positive() && p[0] < int(1));
    let dims: Vec<usize> = d.terms.iter().map(|t| g2.lat.coset(t.coset).dim()).collect();
    let count = |k: usize| dims.iter().filter(|x| **x == k).count();
    let grouped = group_decomposition(d, &g2.lat, &g2.r).unwrap();
    let mut point_groups: Vec<usize> =
        grouped.groups.iter().filter(|g| g.dim == 0).map(|g| g.members.iter().map(|m| m.chains).sum()).collect();
    point_groups.sort_unstable();
    let pass =
        crossed == families && beta_ok && d.raw_term_count() == 16 && count(2) == 1 && count(1) == 6 && point_groups == vec![1, 2, 3, 3];
    outcome(
        pass,
        format!(
            "{} families crossed (expected {}), beta window ok: {beta_ok}, raw terms {}, unitary {}, lines {}, point orbits with raw terms {point_groups:?}",
            crossed.len(),
            families.len(),
            d.raw_term_count(),
            count(2),
            count(1)
        ),
    )
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let cfg = NumericConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (t, n) in [(RootType::A, 1), (RootType::A, 2), (RootType::B, 2), (RootType::G2, 2)] {
        let s = Setup::uniform(t, n, 1);
        let d = s.walk();
        for _ in 0..5 {
            let p = random_multiplier(&mut rng, n, 3);
            let rep = check_full_decomposition(&d, &s.lat, &p, &cfg, Execution::Parallel).unwrap();
            worst = worst.max(rep.rel_error);
            if !rep.pass {
                failures.push(format!("{} rel {:.2e}", s.label, rep.rel_error));
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    outcome(failures.is_empty() && secs < 900.0, format!("worst relative error {worst:.2e}, failures {failures:?}, {secs:.1}s"))
}

fn criterion_4() -> Outcome {
    let a1 = Setup::uniform(RootType::A, 1, 1);
    let cfg = NumericConfig { tolerance: 1e-8, ..Default::default() };
    let rep = check_crossing_identity(&a1.mu, &a1.lat, &[rat(3, 2)], &[rat(1, 2)], &cfg, Execution::Parallel).unwrap();
    // the walk's datum at x = q agrees with the residue used by the check
    let d = a1.walk();
    let point = d.terms.iter().find(|t| a1.lat.coset(t.coset).is_point()).unwrap();
    let engine = point.templates.apply(&[(FieldElement::one(), vec![0])], a1.lat.coset(point.coset), &TorusPoint::identity(0)).unwrap();
    let engine = engine.to_complex(cfg.q);
    let engine_ok = (engine.re - rep.predicted.re).abs() + (engine.im - rep.predicted.im).abs() < 1e-12;
    let geo = torus_residue::mu::FactorizedFunction::product(
        1,
        FieldElement::one(),
        vec![(torus_residue::mu::Factor { mono: vec![1], c: torus_residue::exact::MonoConst::q_pow(int(-1)) }, -1)],
    );
    let inside = quadrature_integral(&geo, &[rat(1, 2)], &NumericConfig::default(), Execution::Parallel).unwrap();
    let outside = quadrature_integral(&geo, &[rat(3, 2)], &NumericConfig::default(), Execution::Parallel).unwrap();
    let geo_ok = (inside.re - 1.0).abs() < 1e-10 && inside.im.abs() < 1e-10 && outside.norm() < 1e-10;
    outcome(
        rep.pass && engine_ok && geo_ok,
        format!(
            "jump {:.12} vs residue {:.12} (error {:.1e}), walk datum matches: {engine_ok}, geometric means {:.3e}/{:.3e}",
            rep.jump.re,
            rep.predicted.re,
            rep.abs_error,
            inside.re,
            outside.norm()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (t, n) in [(RootType::A, 1), (RootType::A, 2), (RootType::B, 2), (RootType::G2, 2)] {
        let s = Setup::uniform(t, n, 1);
        let base = WalkConfig::dominant(&s.r, &s.params);
        let d1 = s.walk_with(base.clone().with_seed(11, 2));
        let d2 = s.walk_with(base.with_seed(29, 3));
        let k1: BTreeSet<usize> = d1.terms.iter().map(|t| t.coset).collect();
        let k2: BTreeSet<usize> = d2.terms.iter().map(|t| t.coset).collect();
        if k1 != k2 {
            mismatches.push(format!("{}: coset sets differ", s.label));
            continue;
        }
        for t in &d1.terms {
            compared += 1;
            if !t.templates.equals(&d2.term(t.coset).unwrap().templates) {
                mismatches.push(format!("{}: {}", s.label, s.lat.coset(t.coset)));
            }
        }
    }
    outcome(mismatches.is_empty(), format!("{compared} cosets compared, mismatches {mismatches:?}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    let mut failures = Vec::new();
    for (t, n) in [(RootType::A, 2), (RootType::G2, 2)] {
        let s = Setup::uniform(t, n, 1);
        let d = s.walk();
        let mut cache = ChainCache::new(&s.lat, &s.mu);
        for w in s.r.weyl_group().unwrap() {
            for _ in 0..20 {
                let p = random_multiplier(&mut rng, n, 3);
                let pw = compose_multiplier(&p, w);
                for term in &d.terms {
                    let moved = equivariance_transport(&term.datum, w, &s.lat).unwrap();
                    let sigma = random_regular_point(&mut rng, &s.lat, term.coset);
                    let a = s.lat.coset(term.coset);
                    let b = s.lat.coset(moved.coset);
                    let lhs = cache.datum(&moved).apply(&p, b, &b.local_coords(&sigma.act(w))).unwrap();
                    let rhs = term.templates.apply(&pw, a, &a.local_coords(&sigma)).unwrap();
                    checks += 1;
                    if lhs.try_sub(&rhs).unwrap().is_zero() {
                        continue;
                    }
                    failures.push(format!("{} w={} {}", s.label, w.word_string(), a));
                }
            }
        }
    }
    failures.truncate(5);
    outcome(failures.is_empty(), format!("{checks} exact identities checked, failures {failures:?}"))
}

struct MatrixRun {
    setup: Setup,
    decomposition: Decomposition,
}

fn matrix_runs() -> Vec<MatrixRun> {
    test_matrix()
        .into_iter()
        .map(|setup| {
            let decomposition = setup.walk();
            MatrixRun { setup, decomposition }
        })
        .collect()
}

fn criterion_7(runs: &[MatrixRun]) -> Outcome {
    let mut bad = Vec::new();
    let mut sizes = Vec::new();
    for run in runs {
        let s = &run.setup;
        let reports = classify_residual(&s.mu, &s.lat, &s.r, Execution::Parallel).unwrap();
        let crit = residual_points(&reports);
        let brute = brute_force_residual_search(&s.mu, &s.lat).unwrap();
        sizes.push(format!("{}:{}", s.label, crit.len()));
        if crit != brute {
            bad.push(format!("{}: criterion {} vs oracle {}", s.label, crit.len(), brute.len()));
        }
    }
    outcome(bad.is_empty(), format!("residual points per run [{}], disagreements {bad:?}", sizes.join(", ")))
}

fn criterion_8(runs: &[MatrixRun]) -> Outcome {
    let mut bad = Vec::new();
    let mut orbits_checked = 0;
    let mut forced = 0;
    for run in runs {
        let s = &run.setup;
        let reports = classify_residual(&s.mu, &s.lat, &s.r, Execution::Parallel).unwrap();
        for rep in reports.iter().filter(|x| x.dim == 0) {
            let v = opdam_sum(s.lat.coset(rep.coset), &run.decomposition, &s.lat, &s.r).unwrap();
            if rep.residual {
                if rep.representative {
                    orbits_checked += 1;
                }
                if v.is_zero() {
                    bad.push(format!("{}: zero at residual {}", s.label, rep.label));
                }
            } else {
                forced += 1;
                if !v.is_zero() {
                    bad.push(format!("{}: nonzero at non-residual {}", s.label, rep.label));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && orbits_checked > 0,
        format!("{orbits_checked} residual orbits nonzero, {forced} non-residual points zero, failures {bad:?}"),
    )
}

fn criterion_9(g2: &Setup, d: &Decomposition) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let reports = classify_residual(&g2.mu, &g2.lat, &g2.r, Execution::Parallel).unwrap();
    let residual: BTreeSet<usize> = reports.iter().filter(|x| x.residual).map(|x| x.coset).collect();
    let one = [(FieldElement::one(), vec![0, 0])];
    let mut checks = 0;
    let mut bad = Vec::new();
    let mut cosets = 0;
    for t in d.terms.iter().filter(|t| residual.contains(&t.coset)) {
        cosets += 1;
        let a = g2.lat.coset(t.coset);
        for _ in 0..50 {
            let p = random_multiplier(&mut rng, 2, 4);
            let sigma = random_regular_point(&mut rng, &g2.lat, t.coset);
            let y = a.local_coords(&sigma);
            let lhs = t.templates.apply(&p, a, &y).unwrap();
            let mut psi = FieldElement::zero();
            for (c, m) in &p {
                psi = psi.try_add(&c.try_mul(&FieldElement::from_mono(&sigma.monomial(m)))).unwrap();
            }
            let rhs = psi.try_mul(&t.templates.apply(&one, a, &y).unwrap());
            checks += 1;
            if !lhs.try_sub(&rhs).unwrap().is_zero() {
                bad.push(a.to_string());
            }
        }
    }
    bad.dedup();
    outcome(bad.is_empty() && cosets > 0, format!("{checks} identities on {cosets} residual cosets, failures {bad:?}"))
}

fn criterion_10(runs: &[MatrixRun]) -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    for run in runs {
        let s = &run.setup;
        let reports = classify_residual(&s.mu, &s.lat, &s.r, Execution::Parallel).unwrap();
        total += reports.len();
        for v in maximal_order_violations(&reports) {
            bad.push(format!("{}: {} order {} codim {}", s.label, v.label, v.pole_order, v.codim));
        }
    }
    outcome(bad.is_empty(), format!("{total} cosets over {} runs, violations {bad:?}", runs.len()))
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let t0 = Instant::now();
    let o = f();
    (o, t0.elapsed().as_secs_f64())
}

fn main() {
    let g2 = Setup::uniform(RootType::G2, 2, 1);
    let g2_walk = g2.walk();
    let (runs, setup_secs) = {
        let t0 = Instant::now();
        (matrix_runs(), t0.elapsed().as_secs_f64())
    };
    println!("test-matrix walks: {} runs in {setup_secs:.1}s", runs.len());
    let results: Vec<(u32, &str, (Outcome, f64))> = vec![
        (1, "G2 golden residual classification", timed(|| criterion_1(&g2))),
        (2, "G2 crossing walk structure", timed(|| criterion_2(&g2, &g2_walk))),
        (3, "numeric decomposition identity", timed(criterion_3)),
        (4, "rank-one crossing identity", timed(criterion_4)),
        (5, "path independence", timed(criterion_5)),
        (6, "equivariance of residue data", timed(criterion_6)),
        (7, "residual criterion vs brute-force oracle", timed(|| criterion_7(&runs))),
        (8, "nonvanishing sums", timed(|| criterion_8(&runs))),
        (9, "multiplier identity at residual cosets", timed(|| criterion_9(&g2, &g2_walk))),
        (10, "maximal pole order", timed(|| criterion_10(&runs))),
    ];
    let mut failed = 0;
    for (i, name, (o, secs)) in &results {
        println!("criterion {i:>2} {}: {name} ({}) [{secs:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
