use std::io::Write;
use std::path::{Path, PathBuf};

use holevo_core::interactions::check_conditions;
use holevo_core::sweeps::{commutation_search, holevo_bound_sweep, BoundSweep, CommutationSearch};
use holevo_core::{accessible_information_search, certify_bound, evolve, shannon_entropy};
use log::{debug, info, warn};
use serde::Serialize;

use crate::error::CliError;
use crate::report::{Provenance, Report};
use crate::scenario::Scenario;

/// Run the measurement pipeline on a parsed scenario.
pub fn simulate_scenario(scenario: &Scenario) -> Result<Report, CliError> {
    let opts = &scenario.options;
    let model = scenario.build()?;
    let outcome = evolve(&model.system, &model.apparatus, &model.interaction)
        .map_err(|e| CliError::core("evolve", e))?;
    let ensemble = outcome.ensemble();
    let conditions = check_conditions(&model.interaction, &model.apparatus)
        .map_err(|e| CliError::core("conditions", e))?;
    let source_entropy_bits =
        shannon_entropy(&outcome.prior).map_err(|e| CliError::core("system", e))?;

    let search = accessible_information_search(&ensemble, opts.restarts, opts.seed);
    debug!(
        "search: {:.12} bits from candidate {}",
        search.bits, search.candidate
    );
    let measured = model.povm.as_ref().unwrap_or(&search.povm);
    let cert = certify_bound(&ensemble, measured, opts.saturation_tolerance)
        .map_err(|e| CliError::core("certify", e))?;
    info!(
        "chi {:.9} bits, measured {:.9} bits, slack {:.3e}",
        cert.chi_bits, cert.mutual_information_bits, cert.slack_bits
    );

    Ok(Report {
        chi_bits: cert.chi_bits,
        source_entropy_bits,
        accessible_info_bits: search.bits,
        povm_info_bits: model.povm.as_ref().map(|_| cert.mutual_information_bits),
        max_commutator: outcome.max_pairwise_commutator(),
        von_neumann_defect: conditions.von_neumann_defect,
        bound_satisfied: cert.mutual_information_bits <= cert.chi_bits + opts.tolerance,
        saturated: cert.saturated,
        provenance: Provenance::new(
            opts.seed,
            opts.restarts,
            opts.tolerance,
            opts.saturation_tolerance,
        ),
    })
}

pub struct SimulateArgs {
    pub scenario: PathBuf,
    pub out: Option<PathBuf>,
    pub csv: bool,
    pub tol: Option<f64>,
}

/// `simulate`: report as JSON (or CSV) to `--out`, or to `stdout`.
pub fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<Report, CliError> {
    let mut scenario = Scenario::load(&args.scenario)?;
    if let Some(tol) = args.tol {
        scenario.options.tolerance = tol;
    }
    let report = simulate_scenario(&scenario)?;
    let text = if args.csv {
        report.to_csv()?
    } else {
        report.to_json() + "\n"
    };
    emit(&text, args.out.as_deref(), stdout)?;
    Ok(report)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("summary serializes") + "\n"
}

/// `verify-bound`: summary on `stdout`; exit 4 when any trial violates the
/// bound.
pub fn verify_bound(
    dim: usize,
    trials: usize,
    seed: u64,
    stdout: &mut dyn Write,
) -> Result<BoundSweep, CliError> {
    let sweep =
        holevo_bound_sweep(dim, trials, seed).map_err(|e| CliError::core("verify-bound", e))?;
    emit(&to_json(&sweep), None, stdout)?;
    if sweep.failures > 0 {
        return Err(CliError::Violation(format!(
            "{} of {trials} trials exceed the bound; seeds {:?}",
            sweep.failures, sweep.failing_seeds
        )));
    }
    Ok(sweep)
}

#[derive(Debug, Serialize)]
pub struct SearchSummary {
    #[serde(flatten)]
    pub search: CommutationSearch,
    pub dumped: Vec<PathBuf>,
}

/// `search-counterexample`: summary on `stdout`, one JSON file per finding in
/// `dump_dir`.
pub fn search_counterexample(
    dim: usize,
    trials: usize,
    seed: u64,
    dump_dir: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<SearchSummary, CliError> {
    let search = commutation_search(dim, trials, seed)
        .map_err(|e| CliError::core("search-counterexample", e))?;
    if search.non_converged > 0 {
        info!(
            "{} of {trials} projection searches did not converge",
            search.non_converged
        );
    }
    if dim == 3 && search.finding_count > 0 {
        warn!(
            "{} qutrit Von Neumann families with non-commuting conditional states",
            search.finding_count
        );
    }
    let mut dumped = Vec::new();
    if let Some(dir) = dump_dir {
        if !search.findings.is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        for f in &search.findings {
            let path = dir.join(format!("finding_d{}_seed{}.json", f.dim, f.seed));
            std::fs::write(&path, to_json(f)).map_err(|e| CliError::io(&path, e))?;
            dumped.push(path);
        }
    }
    let summary = SearchSummary { search, dumped };
    emit(&to_json(&summary), None, stdout)?;
    Ok(summary)
}
