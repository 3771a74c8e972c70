//! One handler per subcommand; all file I/O and report assembly lives
//! here, numerics stay in the library.

use std::path::Path;
use std::process::ExitCode;

use serde::de::DeserializeOwned;

use qdiscrim_core::discrimination::{
    brute_force_min_error_search, brute_force_unambiguous_search, helstrom, restrict_to_span,
    unambiguous, PriorPair,
};
use qdiscrim_core::json::{
    MatrixJson, MinErrorJson, MinErrorOracleJson, PhaseTwinJson, PovmJson, ProtocolJson,
    SchemeJson, SchemeOutcomeJson, SchemeReportJson, SignalSummaryJson, StateJson, StatePairJson,
    TomographyJson, UnambiguousJson, UnambiguousOracleJson, ValidationJson, VectorJson,
};
use qdiscrim_core::mc::binomial_stderr;
use qdiscrim_core::quantum::{
    born_probability, is_informationally_complete, spin_component, trace_distance, validate_povm,
    PureState, SpinDirection, State,
};
use qdiscrim_core::scheme::{detect_trivial_effects, induced_observable, outcome_probabilities};
use qdiscrim_core::signaling::{
    inference_success, simulate_signaling, simulate_signaling_traced, SignalingProtocol,
};
use qdiscrim_core::tomography::{
    phase_twin, predict_frequencies, reconstruct_state, sample_frequencies, tetrahedron_povm,
    PhaseFunction,
};

use crate::output::{emit, emit_text, sig9};
use crate::{CliError, Command, Format, RunConfig};

pub fn run(config: &RunConfig, command: &Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Validate { povm_file } => cmd_validate(config, povm_file),
        Command::Helstrom { pair_file, priors } => cmd_helstrom(config, pair_file, *priors),
        Command::Unambiguous { pair_file } => cmd_unambiguous(config, pair_file),
        Command::Signal { protocol_file } => cmd_signal(config, protocol_file.as_deref()),
        Command::Scheme {
            scheme_file,
            state_file,
        } => cmd_scheme(config, scheme_file, state_file),
        Command::Tomography {
            state_file,
            samples,
        } => cmd_tomography(config, state_file, *samples),
        Command::PhaseTwin { state_file, phases } => {
            cmd_phase_twin(config, state_file.as_deref(), phases.as_deref())
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn cmd_validate(config: &RunConfig, povm_file: &Path) -> Result<ExitCode, CliError> {
    let file: PovmJson = read_json(povm_file)?;
    let candidates = file.to_candidates()?;
    let report = validate_povm(&candidates, config.tolerance)?;
    let ic = if report.is_valid {
        Some(is_informationally_complete(&file.to_povm()?))
    } else {
        None
    };
    let out = ValidationJson::from_report(&report, ic);
    let code = if out.is_valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    };
    emit(config, &out)?;
    Ok(code)
}

fn cmd_helstrom(config: &RunConfig, pair_file: &Path, prior_phi: f64) -> Result<ExitCode, CliError> {
    let pair: StatePairJson = read_json(pair_file)?;
    let (phi, psi) = pair.to_states()?;
    let priors = PriorPair::new(prior_phi)?;
    let result = helstrom(&phi, &psi, priors)?;
    let oracle = if config.oracle {
        let resolution = config.resolution.unwrap_or(100);
        let search = brute_force_min_error_search(&phi, &psi, priors, resolution)?;
        let mut o = MinErrorOracleJson::new(result.p_success, &search, resolution);
        o.p_success = sig9(o.p_success);
        o.residual = sig9(o.residual);
        Some(o)
    } else {
        None
    };
    let mut report = MinErrorJson::new(&result, prior_phi, oracle);
    report.p_success = sig9(report.p_success);
    report.overlap = sig9(report.overlap);
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_unambiguous(config: &RunConfig, pair_file: &Path) -> Result<ExitCode, CliError> {
    let pair: StatePairJson = read_json(pair_file)?;
    let (mut phi, mut psi) = pair.to_states()?;
    let restricted = phi.dim() > 2;
    if restricted {
        // rotate into the pair's two-dimensional span; overlap is preserved
        let (p, q) = restrict_to_span(&phi, &psi)?;
        phi = p;
        psi = q;
    }
    let result = unambiguous(&phi, &psi)?;
    let oracle = if config.oracle {
        let resolution = config.resolution.unwrap_or(200);
        let search = brute_force_unambiguous_search(&phi, &psi, resolution)?;
        let mut o = UnambiguousOracleJson::new(result.p_success, &search, resolution);
        o.p_success = sig9(o.p_success);
        o.residual = sig9(o.residual);
        Some(o)
    } else {
        None
    };
    let mut report = UnambiguousJson::new(&result, oracle);
    report.p_success = sig9(report.p_success);
    report.overlap = sig9(report.overlap);
    report.w = sig9(report.w);
    report.e1 = sig9(report.e1);
    report.e2 = sig9(report.e2);
    report.restricted_to_span = restricted.then_some(true);
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn default_protocol() -> SignalingProtocol {
    let decide_x = spin_component(&SpinDirection::x()).projections()[0].clone();
    SignalingProtocol::two_letter(SpinDirection::x(), SpinDirection::y(), decide_x)
        .expect("stock protocol is valid")
}

fn cmd_signal(config: &RunConfig, protocol_file: Option<&Path>) -> Result<ExitCode, CliError> {
    let protocol = match protocol_file {
        Some(path) => read_json::<ProtocolJson>(path)?.to_protocol()?,
        None => default_protocol(),
    };
    if config.format == Format::Csv {
        // CSV asks for the full per-trial dump rather than the summary
        let (_, _, records) = simulate_signaling_traced(&protocol, config.trials, config.seed)?;
        let mut text = String::from("trial,letter,bob_outcome,decision\n");
        for r in records {
            text.push_str(&format!(
                "{},{},{},{}\n",
                r.trial, r.letter, r.bob_outcome, r.decision
            ));
        }
        emit_text(config, &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    let (log, summary) = simulate_signaling(&protocol, config.trials, config.seed)?;
    let analytic = if protocol.letters().len() == 2 {
        Some(sig9(inference_success(&protocol)?))
    } else {
        None
    };
    let report = SignalSummaryJson {
        analytic_success: analytic,
        n: summary.n_trials,
        seed: config.seed,
        success_rate: sig9(summary.success_rate),
        stderr: sig9(summary.standard_error),
        mutual_information_bits: sig9(summary.mutual_information_bits),
        counts: log.counts,
    };
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn require_pure(state: State, context: &str) -> Result<PureState, CliError> {
    match state {
        State::Pure(p) => Ok(p),
        State::Mixed(_) => Err(CliError::domain(format!(
            "{context} requires a pure state file (use the \"pure\" form)"
        ))),
    }
}

fn cmd_scheme(
    config: &RunConfig,
    scheme_file: &Path,
    state_file: &Path,
) -> Result<ExitCode, CliError> {
    let scheme = read_json::<SchemeJson>(scheme_file)?.to_scheme()?;
    let state = require_pure(
        read_json::<StateJson>(state_file)?.to_state()?,
        "scheme analysis",
    )?;
    let induced = induced_observable(&scheme)?;
    let pointer_side = outcome_probabilities(&scheme, &state)?;
    let object_side = induced.probabilities(&State::Pure(state))?;
    let trivial = detect_trivial_effects(&scheme, config.tolerance)?;
    let outcomes = pointer_side
        .iter()
        .zip(&object_side)
        .zip(&trivial)
        .map(|(((label, p), q), (_, weight))| SchemeOutcomeJson {
            label: label.clone(),
            pointer_probability: sig9(*p),
            induced_probability: sig9(*q),
            trivial: weight.is_some(),
            mixing_weight: weight.map(sig9),
        })
        .collect();
    let report = SchemeReportJson {
        object_dim: scheme.object_dim(),
        probe_dim: scheme.probe_dim(),
        induced: PovmJson::from_povm(&induced),
        outcomes,
    };
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tomography(
    config: &RunConfig,
    state_file: &Path,
    samples: u64,
) -> Result<ExitCode, CliError> {
    let state = read_json::<StateJson>(state_file)?.to_state()?;
    let rho = match &state {
        State::Pure(p) => p.to_density(),
        State::Mixed(m) => m.clone(),
    };
    let povm = tetrahedron_povm();
    if rho.dim() != povm.dim() {
        return Err(CliError::domain(format!(
            "tomography uses the qubit tetrahedron POVM; got a state of dimension {}",
            rho.dim()
        )));
    }
    let (freq, stderr, seed) = if samples == 0 {
        (predict_frequencies(&povm, &rho)?, None, None)
    } else {
        let f = sample_frequencies(&povm, &state, samples, config.seed)?;
        let se = f
            .frequencies()
            .iter()
            .map(|&x| sig9(binomial_stderr(x, samples)))
            .collect();
        (f, Some(se), Some(config.seed))
    };
    let reconstructed = reconstruct_state(&povm, &freq)?;
    let report = TomographyJson {
        n: samples,
        seed,
        frequencies: freq.frequencies().iter().map(|&x| sig9(x)).collect(),
        stderr,
        true_state: MatrixJson::from_density(&rho),
        reconstructed: MatrixJson::from_density(&reconstructed),
        trace_distance: sig9(trace_distance(&reconstructed, &rho)?),
    };
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_phase_twin(
    config: &RunConfig,
    state_file: Option<&Path>,
    phases: Option<&str>,
) -> Result<ExitCode, CliError> {
    let psi = match state_file {
        Some(path) => require_pure(read_json::<StateJson>(path)?.to_state()?, "phase twinning")?,
        None => {
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            PureState::new(
                qdiscrim_core::hilbert::StateVector::from_real(&[inv, inv]).expect("unit"),
            )
            .expect("|+,x> is normalized")
        }
    };
    let observable = spin_component(&SpinDirection::z());
    let phase_values: Vec<f64> = match phases {
        Some(raw) => raw
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t == "pi" {
                    return Ok(std::f64::consts::PI);
                }
                t.parse::<f64>()
                    .map_err(|_| CliError::domain(format!("bad phase value {t:?}")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![0.0, std::f64::consts::PI],
    };
    let f = PhaseFunction::new(phase_values.clone())?;
    let twin = phase_twin(&psi, &observable, &f)?;

    let stats = |s: &PureState| -> Result<Vec<f64>, CliError> {
        observable
            .projections()
            .iter()
            .map(|p| Ok(born_probability(p, &State::Pure(s.clone()))?))
            .collect()
    };
    let sharp_psi = stats(&psi)?;
    let sharp_twin = stats(&twin)?;
    let tetra = tetrahedron_povm();
    let tetra_psi = predict_frequencies(&tetra, &psi.to_density())?;
    let tetra_twin = predict_frequencies(&tetra, &twin.to_density())?;
    let max_gap = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max)
    };
    let report = PhaseTwinJson {
        state: VectorJson::from_pure_state(&psi),
        twin: VectorJson::from_pure_state(&twin),
        phases: phase_values,
        observable_eigenvalues: observable.eigenvalues().to_vec(),
        sharp_max_gap: sig9(max_gap(&sharp_psi, &sharp_twin)),
        sharp_stats_state: sharp_psi.into_iter().map(sig9).collect(),
        sharp_stats_twin: sharp_twin.into_iter().map(sig9).collect(),
        tetrahedron_max_gap: sig9(max_gap(
            tetra_psi.frequencies(),
            tetra_twin.frequencies(),
        )),
        tetrahedron_stats_state: tetra_psi.frequencies().iter().map(|&x| sig9(x)).collect(),
        tetrahedron_stats_twin: tetra_twin.frequencies().iter().map(|&x| sig9(x)).collect(),
        states_coincide: twin.coincides_with(&psi, 1e-9)?,
    };
    emit(config, &report)?;
    Ok(ExitCode::SUCCESS)
}
