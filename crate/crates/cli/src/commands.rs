use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::config::{ConfigError, Format, Layer, Nmax, RunConfig};
use crate::output::{emit, render, write_file, UNITS_NOTE};
use fuzzy_coulomb::fock::LengthScale;
use fuzzy_coulomb::ncwave::NCWaveFunction;
use fuzzy_coulomb::spectrum::{
    bound_energies, build_eigenstate, classify_symmetry, onshell_residuals, required_nmax, scattering_params, smatrix,
    spectrum_rows, tail_estimate, Branch, NmaxPolicy, Symmetry,
};
use fuzzy_coulomb::superops::{numeric_catalogue, run_numeric_suite, Fault, NumericSuiteConfig};
use fuzzy_coulomb::symbolic::{parse_identity_file, run_symbolic_suite, symbolic_catalogue, Identity};

pub enum Failure {
    Config(ConfigError),
    Other(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(ConfigError(msg.into()))
}

fn lambda_of(cfg: &RunConfig) -> LengthScale {
    LengthScale::new(cfg.lambda).expect("validated in resolve")
}

/// The numeric suite runs at `nmax = 16`, `λ = 1` unless told otherwise.
pub fn verify_defaults() -> Layer {
    Layer {
        lambda: Some(1.0),
        nmax: Some(Nmax::Fixed(16)),
        ..Layer::default()
    }
}

/// Eigenstate checks need a deep profile cut; the tail bound is squared
/// relative to the spectrum default.
pub fn casimir_defaults() -> Layer {
    Layer {
        nmax: Some(Nmax::Auto),
        n: Some(1),
        tolerances: BTreeMap::from([("tail".to_string(), 1e-36)]),
        ..Layer::default()
    }
}

#[derive(Serialize)]
struct VerifyReport<'a, S: Serialize, N: Serialize> {
    units: &'static str,
    nmax: usize,
    lambda: f64,
    energies: &'a [f64],
    symbolic: &'a [S],
    numeric: &'a [N],
}

pub fn verify(
    cfg: &RunConfig,
    only: &[String],
    identities: Option<&Path>,
    inject_fault: bool,
) -> Result<bool, Failure> {
    let symbolic: Vec<Identity> = match identities {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| config_err(format!("cannot read {}: {e}", p.display())))?;
            parse_identity_file(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?
        }
        None => symbolic_catalogue(),
    };
    let numeric_names: Vec<&str> = numeric_catalogue().iter().map(|i| i.name).collect();
    for name in only {
        if !numeric_names.contains(&name.as_str()) && !symbolic.iter().any(|i| &i.name == name) {
            return Err(config_err(format!("unknown identity '{name}'")));
        }
    }
    let keep = |name: &str| only.is_empty() || only.iter().any(|o| o == name);
    let symbolic: Vec<Identity> = symbolic.into_iter().filter(|i| keep(&i.name)).collect();
    // a custom identity file also limits the numeric suite to its names
    let numeric_only: Vec<String> = numeric_names
        .iter()
        .filter(|n| keep(n) && (identities.is_none() || symbolic.iter().any(|i| i.name == **n)))
        .map(|n| n.to_string())
        .collect();

    let nmax = match cfg.nmax {
        Nmax::Fixed(n) => n,
        Nmax::Auto => return Err(config_err("verify needs a fixed --nmax")),
    };
    let l = cfg.lambda;
    let suite = NumericSuiteConfig {
        nmax,
        lambda: l,
        energies: vec![-1.0, 0.5, 3.0 / (l * l)],
        q: cfg.q,
        tolerance: cfg.tolerance("numeric"),
        fault: inject_fault.then_some(Fault::SignFlip),
        ..NumericSuiteConfig::default()
    };

    let sym = run_symbolic_suite(&symbolic);
    let num = run_numeric_suite(&suite, Some(&numeric_only));

    for r in &sym {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("{status} symbolic {:<40} {}", r.identity_name, r.difference);
    }
    for r in &num {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} numeric  {:<40} residual {:.3e} guard {}",
            r.identity_name, r.residual, r.guard_level
        );
    }
    let failed: Vec<&str> = sym
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.identity_name.as_str())
        .chain(num.iter().filter(|r| !r.pass).map(|r| r.identity_name.as_str()))
        .collect();
    println!(
        "# units: {UNITS_NOTE}; {} symbolic, {} numeric, {} failed",
        sym.len(),
        num.len(),
        failed.len()
    );
    if !failed.is_empty() {
        eprintln!("failing identities: {}", failed.join(", "));
    }

    let energies = suite.energies.clone();
    let report = VerifyReport {
        units: UNITS_NOTE,
        nmax,
        lambda: l,
        energies: &energies,
        symbolic: &sym,
        numeric: &num,
    };
    if let Some(dir) = &cfg.out {
        write_file(
            dir,
            "symbolic_report.json",
            &(serde_json::to_string_pretty(&sym).map_err(anyhow::Error::from)? + "\n"),
        )?;
        write_file(
            dir,
            "numeric_report.json",
            &(serde_json::to_string_pretty(&num).map_err(anyhow::Error::from)? + "\n"),
        )?;
    } else if cfg.format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?
        );
    }
    Ok(failed.is_empty())
}

fn check_branch(cfg: &RunConfig) -> Result<(), Failure> {
    match (cfg.branch, cfg.q) {
        (Branch::I, q) if q < 0.0 => Err(config_err(
            "branch I needs q >= 0 (attractive); use --branch II for q < 0",
        )),
        (Branch::II, q) if q > 0.0 => Err(config_err(
            "branch II needs q <= 0 (repulsive); use --branch I for q > 0",
        )),
        _ => Ok(()),
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<bool, Failure> {
    check_branch(cfg)?;
    let policy = match cfg.nmax {
        Nmax::Fixed(n) => NmaxPolicy::Fixed(n),
        Nmax::Auto => NmaxPolicy::Auto {
            tolerance: cfg.tolerance("tail"),
        },
    };
    let rows = spectrum_rows(lambda_of(cfg), cfg.q, cfg.n, cfg.jmax, cfg.branch, policy)
        .map_err(|e| config_err(e.to_string()))?;
    emit(cfg, "spectrum", &render(cfg, "spectrum", &rows)?)?;
    Ok(true)
}

#[derive(Serialize)]
struct ScatterRow {
    j: u32,
    #[serde(rename = "E")]
    energy: f64,
    re_s: f64,
    im_s: f64,
    modulus_minus_1: f64,
    tau: f64,
    symmetry: Symmetry,
}

pub fn scatter(cfg: &RunConfig, energies: &[f64], points: usize) -> Result<bool, Failure> {
    let lambda = lambda_of(cfg);
    let edge = 2.0 / (cfg.lambda * cfg.lambda);
    let energies: Vec<f64> = if energies.is_empty() {
        if points == 0 {
            return Err(config_err("--points must be positive"));
        }
        (1..=points).map(|k| edge * k as f64 / (points + 1) as f64).collect()
    } else {
        energies.to_vec()
    };
    for &e in &energies {
        scattering_params(lambda, cfg.q, e).map_err(|err| config_err(err.to_string()))?;
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for j in 0..=cfg.jmax {
        for &e in &energies {
            let s = smatrix(lambda, cfg.q, j, e).map_err(|err| config_err(err.to_string()))?;
            let p = scattering_params(lambda, cfg.q, e).map_err(|err| config_err(err.to_string()))?;
            let dev = s.value.norm() - 1.0;
            ok &= dev.abs() <= cfg.tolerance("scatter");
            rows.push(ScatterRow {
                j,
                energy: e,
                re_s: s.value.re,
                im_s: s.value.im,
                modulus_minus_1: dev,
                tau: p.tau,
                symmetry: classify_symmetry(lambda, e),
            });
        }
    }
    emit(cfg, "scatter", &render(cfg, "scatter", &rows)?)?;
    Ok(ok)
}

#[derive(Serialize)]
struct CasimirRow {
    state: String,
    n: u32,
    j: u32,
    m: i32,
    #[serde(rename = "E")]
    energy: f64,
    profile_nmax: usize,
    tail: f64,
    hamiltonian: f64,
    lrl_conservation: f64,
    casimir1: f64,
    casimir2: f64,
    so4: f64,
    pass: bool,
}

pub fn casimir(cfg: &RunConfig, control: bool) -> Result<bool, Failure> {
    check_branch(cfg)?;
    if cfg.q == 0.0 {
        return Err(config_err("casimir needs q != 0 (no bound states at q = 0)"));
    }
    let lambda = lambda_of(cfg);
    let tol = cfg.tolerance("residual");
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=cfg.n {
        let sr = bound_energies(lambda, cfg.q, n).map_err(|e| config_err(e.to_string()))?;
        for j in 0..=(n - 1).min(cfg.jmax) {
            let cut = match cfg.nmax {
                Nmax::Fixed(v) => v,
                Nmax::Auto => required_nmax(sr.omega_n, j as usize, cfg.tolerance("tail")),
            };
            let st = build_eigenstate(cfg.branch, lambda, cfg.q, n - j - 1, j, 0, cut, 2, 1.0)
                .map_err(|e| config_err(e.to_string()))?;
            let r = st.onshell_residuals(cfg.q).map_err(anyhow::Error::from)?;
            let pass = r.casimir1 <= tol && r.casimir2 <= tol;
            ok &= pass;
            rows.push(CasimirRow {
                state: "eigenstate".into(),
                n,
                j,
                m: 0,
                energy: r.energy,
                profile_nmax: cut,
                tail: tail_estimate(sr.omega_n, j as usize, cut),
                hamiltonian: r.hamiltonian,
                lrl_conservation: r.lrl_conservation,
                casimir1: r.casimir1,
                casimir2: r.casimir2,
                so4: r.so4,
                pass,
            });
        }
    }
    if control {
        // the identity wave function at the ground energy; expected to fail
        let ground = bound_energies(lambda, cfg.q, 1).map_err(|e| config_err(e.to_string()))?;
        let energy = match cfg.branch {
            Branch::I => ground.e_i,
            Branch::II => ground.e_ii,
        };
        let nmax = match cfg.nmax {
            Nmax::Fixed(v) => v,
            Nmax::Auto => 16,
        };
        let basis = std::sync::Arc::new(fuzzy_coulomb::fock::build_basis(nmax));
        let psi = NCWaveFunction::identity(basis, lambda);
        let r = onshell_residuals(&psi, cfg.q, energy).map_err(anyhow::Error::from)?;
        rows.push(CasimirRow {
            state: "control".into(),
            n: 1,
            j: 0,
            m: 0,
            energy,
            profile_nmax: nmax,
            tail: f64::NAN,
            hamiltonian: r.hamiltonian,
            lrl_conservation: r.lrl_conservation,
            casimir1: r.casimir1,
            casimir2: r.casimir2,
            so4: r.so4,
            pass: r.casimir1 <= tol && r.casimir2 <= tol,
        });
    }
    emit(cfg, "casimir", &render(cfg, "casimir", &rows)?)?;
    Ok(ok)
}
