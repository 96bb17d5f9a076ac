//! The subcommands: each builds a serializable report, prints a table and
//! optionally writes the report as JSON.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use torus_residue::equivariance::{group_decomposition, GroupedDecomposition};
use torus_residue::exact::rational::fmt_rational;
use torus_residue::exact::FieldElement;
use torus_residue::exec::Execution;
use torus_residue::lattice::{Lattice, COSET_CAP};
use torus_residue::mu::{arrangement_of, build_mu, FactorizedFunction, FunctionDump};
use torus_residue::numeric::{check_full_decomposition, random_multipliers, Complex, DecompositionReport};
use torus_residue::residual::{attach_opdam_sums, classify_residual, ResidualReport};
use torus_residue::roots::RootSystem;
use torus_residue::torus::TorusPoint;
use torus_residue::walk::{compute_residue_data, Decomposition};

use crate::config::{ConfigSummary, RunConfig};
use crate::table::Table;
use crate::CliError;

fn exec(cfg: &RunConfig) -> Execution {
    if cfg.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// Prints the table unless the JSON goes to standard output, then writes the
/// JSON report if requested.
fn emit<T: Serialize>(cfg: &RunConfig, table: &str, report: &T) -> Result<(), CliError> {
    let json_stdout = cfg.json_out.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !json_stdout {
        println!("{table}");
    }
    if let Some(path) = &cfg.json_out {
        let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        if json_stdout {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        } else {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

struct Prepared {
    r: RootSystem,
    mu: FactorizedFunction,
    lat: Lattice,
}

fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let r = cfg.root_system()?;
    let mu = build_mu(&r, &cfg.params)?;
    let lat = Lattice::build(&arrangement_of(&mu), &r.gram, COSET_CAP, exec(cfg))?;
    Ok(Prepared { r, mu, lat })
}

fn walk(cfg: &RunConfig, p: &Prepared) -> Result<Decomposition, CliError> {
    Ok(compute_residue_data(&p.mu, &p.lat, &cfg.walk(&p.r))?)
}

#[derive(Serialize)]
struct RootRecord {
    root: Vec<i64>,
    coroot: Vec<i64>,
    length: &'static str,
}

#[derive(Serialize)]
struct RootsysReport {
    root_system: String,
    rank: usize,
    weyl_order: usize,
    num_positive_roots: usize,
    positive_roots: Vec<RootRecord>,
    cartan: Vec<Vec<i64>>,
    inner_product: Vec<Vec<String>>,
}

pub fn rootsys(cfg: &RunConfig) -> Result<(), CliError> {
    let r = cfg.root_system()?;
    let weyl_order = r.weyl_group()?.len();
    let report = RootsysReport {
        root_system: r.label(),
        rank: r.rank,
        weyl_order,
        num_positive_roots: r.num_positive(),
        positive_roots: (0..r.num_positive())
            .map(|i| RootRecord { root: r.positive_roots[i].clone(), coroot: r.coroots[i].clone(), length: r.lengths[i].label() })
            .collect(),
        cartan: r.cartan.clone(),
        inner_product: r.gram.iter().map(|row| row.iter().map(fmt_rational).collect()).collect(),
    };
    let mut t = Table::new(&["root", "coroot", "length"]);
    for rec in &report.positive_roots {
        t.row(vec![format!("{:?}", rec.root), format!("{:?}", rec.coroot), rec.length.into()]);
    }
    let text = format!(
        "{}: rank {}, |W| = {}, {} positive roots\n{}",
        report.root_system,
        report.rank,
        weyl_order,
        report.num_positive_roots,
        t.render()
    );
    emit(cfg, &text, &report)
}

#[derive(Serialize)]
struct MuReport {
    config: ConfigSummary,
    function: String,
    factors: FunctionDump,
    arrangement: Vec<String>,
    lattice_cosets: usize,
}

pub fn mu(cfg: &RunConfig) -> Result<(), CliError> {
    let p = prepare(cfg)?;
    let report = MuReport {
        config: cfg.summary(&p.r),
        function: p.mu.to_string(),
        factors: p.mu.describe(),
        arrangement: p.lat.arrangement.components.iter().map(|h| h.to_string()).collect(),
        lattice_cosets: p.lat.len(),
    };
    let mut t = Table::new(&["component"]);
    for h in &report.arrangement {
        t.row(vec![h.clone()]);
    }
    let text = format!(
        "mu = {}\n{} singular components, {} cosets in the intersection lattice\n{}",
        report.function,
        report.arrangement.len(),
        report.lattice_cosets,
        t.render()
    );
    emit(cfg, &text, &report)
}

#[derive(Serialize)]
struct ResidualOutput {
    config: ConfigSummary,
    full_rank_residual_orbits: usize,
    residual_orbits: usize,
    reports: Vec<ResidualReport>,
}

pub fn residual(cfg: &RunConfig) -> Result<(), CliError> {
    let p = prepare(cfg)?;
    let mut reports = classify_residual(&p.mu, &p.lat, &p.r, exec(cfg))?;
    let d = walk(cfg, &p)?;
    attach_opdam_sums(&mut reports, &d, &p.lat, &p.r)?;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for rep in &reports {
        *sizes.entry(rep.orbit).or_default() += 1;
    }
    let reps: Vec<&ResidualReport> = reports.iter().filter(|x| x.representative).collect();
    let mut t = Table::new(&["orbit", "representative", "dim", "codim", "order", "residual", "size", "sum", "sum at q"]);
    for rep in &reps {
        let (exact, numeric) = match &rep.opdam_sum {
            Some(v) => (v.to_string(), format!("{:.10}", v.to_complex(cfg.numeric.q).re)),
            None => (String::new(), String::new()),
        };
        t.row(vec![
            rep.orbit.to_string(),
            rep.label.clone(),
            rep.dim.to_string(),
            rep.codim.to_string(),
            rep.pole_order.to_string(),
            if rep.residual { "yes" } else { "no" }.into(),
            sizes[&rep.orbit].to_string(),
            exact,
            numeric,
        ]);
    }
    let full = reps.iter().filter(|x| x.dim == 0 && x.residual).count();
    let output = ResidualOutput {
        config: cfg.summary(&p.r),
        full_rank_residual_orbits: full,
        residual_orbits: reps.iter().filter(|x| x.residual).count(),
        reports,
    };
    let text = format!("{}\n{full} full-rank residual orbits", t.render());
    emit(cfg, &text, &output)
}

#[derive(Serialize)]
struct ChainRecord {
    chain: Vec<usize>,
    coefficient: String,
}

#[derive(Serialize)]
struct TermRecord {
    coset: usize,
    label: String,
    dim: usize,
    weight: String,
    chambers: usize,
    chains: Vec<ChainRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric_value: Option<Complex>,
}

#[derive(Serialize)]
struct DecomposeOutput {
    config: ConfigSummary,
    raw_terms: usize,
    crossings: usize,
    terms: Vec<TermRecord>,
    grouped: GroupedDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<DecompositionReport>,
}

fn point_value(d: &Decomposition, lat: &Lattice, coset: usize) -> Result<Option<FieldElement>, CliError> {
    let a = lat.coset(coset);
    if !a.is_point() {
        return Ok(None);
    }
    let t = d.term(coset).expect("term of the decomposition");
    Ok(Some(t.templates.apply(&[(FieldElement::one(), vec![0; lat.rank])], a, &TorusPoint::identity(0))?))
}

pub fn decompose(cfg: &RunConfig) -> Result<(), CliError> {
    let p = prepare(cfg)?;
    let d = walk(cfg, &p)?;
    let grouped = group_decomposition(&d, &p.lat, &p.r)?;
    let mut terms = Vec::new();
    for t in &d.terms {
        let a = p.lat.coset(t.coset);
        let value = point_value(&d, &p.lat, t.coset)?;
        terms.push(TermRecord {
            coset: t.coset,
            label: a.to_string(),
            dim: a.dim(),
            weight: fmt_rational(&t.weight),
            chambers: t.chambers.len(),
            chains: t.datum.chains.iter().map(|(c, x)| ChainRecord { chain: c.clone(), coefficient: fmt_rational(x) }).collect(),
            numeric_value: value.as_ref().map(|v| v.to_complex(cfg.numeric.q).into()),
            exact_value: value.map(|v| v.to_string()),
        });
    }
    let verification = if cfg.verify {
        Some(check_full_decomposition(&d, &p.lat, &[(FieldElement::one(), vec![0; p.r.rank])], &cfg.numeric, exec(cfg))?)
    } else {
        None
    };
    let mut raw = Table::new(&["coset", "dim", "weight", "chains", "value"]);
    for t in &terms {
        raw.row(vec![
            t.label.clone(),
            t.dim.to_string(),
            t.weight.clone(),
            t.chains.len().to_string(),
            t.exact_value.clone().unwrap_or_default(),
        ]);
    }
    let mut groups = Table::new(&["representative", "dim", "orbit size", "members", "raw terms"]);
    for g in &grouped.groups {
        groups.row(vec![
            g.label.clone(),
            g.dim.to_string(),
            g.orbit_size.to_string(),
            g.members.len().to_string(),
            g.members.iter().map(|m| m.chains).sum::<usize>().to_string(),
        ]);
    }
    let mut text = format!(
        "{} raw terms on {} cosets\n{}\n\n{} orbit groups\n{}",
        d.raw_term_count(),
        d.terms.len(),
        raw.render(),
        grouped.groups.len(),
        groups.render()
    );
    if let Some(v) = &verification {
        text.push_str(&format!(
            "\n\nverification: start integral {:.12}, sum of terms {:.12}, relative error {:.2e}: {}",
            v.start_integral.re,
            v.total.re,
            v.rel_error,
            if v.pass { "PASS" } else { "FAIL" }
        ));
    }
    let pass = verification.as_ref().is_none_or(|v| v.pass);
    let output = DecomposeOutput {
        config: cfg.summary(&p.r),
        raw_terms: d.raw_term_count(),
        crossings: d.crossings.len(),
        terms,
        grouped,
        verification,
    };
    emit(cfg, &text, &output)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

#[derive(Serialize)]
struct VerifyCase {
    multiplier: Vec<(String, Vec<i64>)>,
    report: DecompositionReport,
}

#[derive(Serialize)]
struct VerifyOutput {
    config: ConfigSummary,
    grid: usize,
    tolerance: f64,
    cases: Vec<VerifyCase>,
    pass: bool,
}

pub fn verify(cfg: &RunConfig, multipliers: usize) -> Result<(), CliError> {
    let p = prepare(cfg)?;
    let d = walk(cfg, &p)?;
    let mut list = vec![vec![(FieldElement::one(), vec![0; p.r.rank])]];
    list.extend(random_multipliers(cfg.numeric.seed, p.r.rank, multipliers, 3));
    let mut cases = Vec::new();
    let mut t = Table::new(&["multiplier", "start integral", "sum of terms", "rel. error", "result"]);
    for m in list {
        let report = check_full_decomposition(&d, &p.lat, &m, &cfg.numeric, exec(cfg))?;
        let label: Vec<String> = m.iter().map(|(c, e)| format!("{c}*x^{e:?}")).collect();
        t.row(vec![
            label.join(" + "),
            format!("{:.12}", report.start_integral.re),
            format!("{:.12}", report.total.re),
            format!("{:.2e}", report.rel_error),
            if report.pass { "PASS" } else { "FAIL" }.into(),
        ]);
        cases.push(VerifyCase { multiplier: m.iter().map(|(c, e)| (c.to_string(), e.clone())).collect(), report });
    }
    let pass = cases.iter().all(|c| c.report.pass);
    let output = VerifyOutput { config: cfg.summary(&p.r), grid: cfg.numeric.grid, tolerance: cfg.numeric.tolerance, cases, pass };
    emit(cfg, &t.render(), &output)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
