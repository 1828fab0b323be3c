use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use ptmoments::ensemble::{
    convexity_counterexample, index_rng, locc_counterexample, negativity_noise_study, sample_state,
    witness_noise_study, NoiseSpec,
};
use ptmoments::invariants::{derived_invariants, makhlin_invariants};
use ptmoments::io::{parse_state, StateFile};
use ptmoments::measures::{bounds_from_witness, concurrence, negativity_from_moments, negativity_spectral, uwe};
use ptmoments::qmat::{bloch_decompose, moments};
use ptmoments::xstates::{sweep, verify_case, xstate};
use ptmoments::{
    DensityMatrix, DerivedInvariants, EnsembleError, InvariantSet, MeasureError, MomentSet, NegativityMethod,
    StateFileError, XStateError,
};

use crate::args::{Cli, Command, Counterexample, NoiseArgs, Quantity, XstateArgs};
use crate::output::{fmt_f64, sink, write_csv, write_json};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    State { path: PathBuf, source: StateFileError },
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
    #[error(transparent)]
    XState(#[from] XStateError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Measure { input } => measure(&input),
        Command::Invariants { input } => invariants(&input),
        Command::Xstate(args) => xstate_cmd(args),
        Command::NoiseStudy(args) => noise_study(args),
        Command::Counterexample { which } => counterexample(which),
        Command::Random { seed, measure, out } => {
            let rho = sample_state(measure.into(), &mut index_rng(seed, 0));
            write_json(sink(out.as_deref())?, &StateFile::from_state(&rho))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text).map_err(|source| CliError::State {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct MeasureReport {
    #[serde(rename = "N_spectral")]
    n_spectral: f64,
    #[serde(rename = "N_from_moments")]
    n_from_moments: f64,
    method: NegativityMethod,
    #[serde(rename = "C")]
    concurrence: f64,
    #[serde(rename = "W")]
    det_pt: f64,
    w: f64,
    lower_bound: f64,
    upper_bound: f64,
    moments: MomentSet,
}

fn measure(input: &Path) -> Result<ExitCode, CliError> {
    let rho = load(input)?;
    let m = moments(&rho);
    let from_moments = negativity_from_moments(&m)?;
    let witness = uwe(&m);
    let bounds = bounds_from_witness(witness.w.min(1.0))?;
    let report = MeasureReport {
        n_spectral: negativity_spectral(&rho),
        n_from_moments: from_moments.value,
        method: from_moments.method,
        concurrence: concurrence(&rho),
        det_pt: witness.det_pt,
        w: witness.w,
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
        moments: m,
    };
    write_json(sink(None)?, &report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct InvariantReport {
    invariants: InvariantSet,
    derived: DerivedInvariants,
}

fn invariants(input: &Path) -> Result<ExitCode, CliError> {
    let inv = makhlin_invariants(&bloch_decompose(&load(input)?));
    let report = InvariantReport {
        invariants: inv,
        derived: derived_invariants(&inv),
    };
    write_json(sink(None)?, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn xstate_cmd(args: XstateArgs) -> Result<ExitCode, CliError> {
    if let Some(case_id) = args.sweep {
        let rows: Vec<Vec<String>> = sweep(case_id, args.n)?
            .into_iter()
            .map(|row| {
                let param = |k: usize| row.params.get(k).map_or(String::new(), |&x| fmt_f64(x));
                vec![
                    row.case_id.to_string(),
                    param(0),
                    param(1),
                    fmt_f64(row.negativity),
                    fmt_f64(row.concurrence),
                    fmt_f64(row.w),
                    fmt_f64(row.lower_bound),
                    fmt_f64(row.upper_bound),
                ]
            })
            .collect();
        write_csv(
            sink(args.out.as_deref())?,
            &format!("x-state case {case_id}, {} points", args.n),
            &["case", "param1", "param2", "N", "C", "w", "lower_bound", "upper_bound"],
            &rows,
        )?;
        return Ok(ExitCode::SUCCESS);
    }

    let case_id = args.case.expect("clap enforces --case or --sweep");
    let report = verify_case(case_id, &args.params)?;
    let state = StateFile::from_state(&xstate(&report.params)?);
    let doc = json!({
        "state": state,
        "prediction": report.predicted,
        "report": {
            "params": report.params,
            "numeric": report.numeric,
            "deviations": report.deviations,
            "canonical": report.canonical,
            "max_deviation": report.max_deviation(),
        },
    });
    write_json(sink(args.out.as_deref())?, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn noise_study(args: NoiseArgs) -> Result<ExitCode, CliError> {
    let spec = NoiseSpec::new(args.rel_noise, args.seed, args.measure.into())?;
    let (records, label) = match args.quantity {
        Quantity::Negativity => (negativity_noise_study(args.n, &spec)?, "negativity"),
        Quantity::Witness => (witness_noise_study(args.n, &spec)?, "witness"),
    };
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            [r.n_theory, r.n_experiment, r.w_theory, r.w_experiment]
                .into_iter()
                .map(fmt_f64)
                .collect()
        })
        .collect();
    let comment = format!(
        "quantity={label} noise=uniform relative_bound={} seed={} ensemble={} n={}",
        args.rel_noise, args.seed, spec.ensemble, args.n
    );
    write_csv(
        sink(args.out.as_deref())?,
        &comment,
        &["n_theory", "n_experiment", "w_theory", "w_experiment"],
        &rows,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn counterexample(which: Counterexample) -> Result<ExitCode, CliError> {
    let (passed, line, doc) = match which {
        Counterexample::Locc => {
            let rep = locc_counterexample();
            let ok = rep.violated && (rep.w_before - 0.11719).abs() <= 1e-4 && (rep.w_after - 0.16294).abs() <= 1e-4;
            let line = format!("w_before = {:.5} < w_after = {:.5}", rep.w_before, rep.w_after);
            (ok, line, serde_json::to_value(rep).expect("report serializes"))
        }
        Counterexample::Convexity => {
            let rep = convexity_counterexample();
            let ok = rep.violated
                && (rep.w_rho1 - 1.0 / 64.0).abs() <= 1e-12
                && (rep.w_rho2 - 1.0 / 64.0).abs() <= 1e-12
                && (rep.w_mixture - 1.0 / 32.0).abs() <= 1e-12;
            let line = format!(
                "w(rho1) = {}/64, w(rho2) = {}/64, w(rho) = {}/32",
                64.0 * rep.w_rho1,
                64.0 * rep.w_rho2,
                32.0 * rep.w_mixture
            );
            (ok, line, serde_json::to_value(rep).expect("report serializes"))
        }
    };
    let mut out = sink(None)?;
    write_json(&mut out, &doc)?;
    writeln!(out, "{} {line}", if passed { "PASS" } else { "FAIL" })?;
    out.flush()?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
