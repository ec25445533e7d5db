//! One function per experiment kind, each turning validated parameters into
//! CSV artifacts plus a JSON summary for the manifest.

use std::io::Write;

use einselect::bitmodel::{self, BitModelConfig, ATOM, SPIN};
use einselect::envselect::{
    self, predicted_mean_abs_sq, recurrence_time, z_of_t, z_stats, ztrace, EnvironmentSpec,
};
use einselect::infotheory::{self, ensemble_density, info_conservation_check, info_report, InfoReport, Preparation};
use einselect::qcore::{evolve_exact, Partition, PureState, Reducible, C64, ORACLE_TOL, STRUCTURAL_TOL};
use einselect::redundancy::{reliability_at_rate, reliability_curve, Reliability};
use einselect::{seed, states};
use serde_json::{json, Value};

use crate::config::{
    CollapseParams, EnsembleParams, Experiment, ExperimentConfig, FlipsCfg, InfoParams, RecurrenceParams,
    RedundancyParams, ZStatsParams, ZTraceParams,
};
use crate::error::{CliError, CliResult};

/// Largest environment accepted by the exact-diagonalization cross-check.
pub const ORACLE_MAX_ATOMS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: Value,
}

fn csv(file_name: &str, fill: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> CliResult<Artifact> {
    let mut bytes = Vec::new();
    fill(&mut bytes)?;
    Ok(Artifact {
        file_name: file_name.to_string(),
        bytes,
    })
}

fn environment_csv(spec: &EnvironmentSpec) -> CliResult<Artifact> {
    csv("environment.csv", |out| {
        writeln!(out, "k,g,re_alpha,im_alpha,re_beta,im_beta,gamma")?;
        for (k, atom) in spec.atoms().iter().enumerate() {
            let (a, b) = (atom.alpha(), atom.beta());
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                k + 1,
                atom.coupling(),
                a.re,
                a.im,
                b.re,
                b.im,
                atom.polarization()
            )?;
        }
        Ok(())
    })
}

fn spin_amplitudes(a: C64, b: C64) -> CliResult<()> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(CliError::config("params.a/params.b", format!("|a|² + |b|² = {norm}, expected 1")));
    }
    Ok(())
}

fn key_err(key: &'static str) -> impl Fn(einselect::Error) -> CliError {
    move |e| CliError::from_model(key, e)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
    match &cfg.experiment {
        Experiment::Ztrace(p) => run_ztrace(p, cfg.seed),
        Experiment::Zstats(p) => run_zstats(p, cfg.seed),
        Experiment::Collapse(p) => run_collapse(p, cfg.seed),
        Experiment::InfoTimeseries(p) => run_info(p),
        Experiment::Redundancy(p) => run_redundancy(p, cfg.seed),
        Experiment::Recurrence(p) => run_recurrence(p, cfg.seed),
        Experiment::EnsembleDemo(p) => run_ensemble(p),
    }
}

fn draw_environment(cfg: &crate::config::EnvironmentCfg, root: u64, index: u64) -> CliResult<EnvironmentSpec> {
    let mut rng = seed::substream(root, "environment", index);
    cfg.build("params.environment", &mut rng)
}

fn run_ztrace(p: &ZTraceParams, root: u64) -> CliResult<ExperimentOutput> {
    let spec = draw_environment(&p.environment, root, 0)?;
    let grid = p.grid.points("params.grid")?;
    let trace = ztrace(&spec, &grid).map_err(key_err("params.grid"))?;
    let s = &trace.summary;
    let summary = json!({
        "n_atoms": spec.len(),
        "samples": grid.len(),
        "mean_abs_sq": s.mean_abs_sq,
        "predicted_mean_abs_sq": predicted_mean_abs_sq(&spec),
        "burn_in": s.burn_in,
        "max_abs_after_burn_in": s.max_abs_after_burn_in,
    });
    Ok(ExperimentOutput {
        artifacts: vec![csv("ztrace.csv", |out| trace.write_csv(out))?, environment_csv(&spec)?],
        summary,
    })
}

fn run_zstats(p: &ZStatsParams, root: u64) -> CliResult<ExperimentOutput> {
    if p.repeats == 0 {
        return Err(CliError::config("params.repeats", "must be at least 1"));
    }
    let mut rows = Vec::with_capacity(p.repeats);
    for r in 0..p.repeats {
        let spec = draw_environment(&p.environment, root, r as u64)?;
        let stats = z_stats(&spec, p.horizon, p.samples).map_err(key_err("params.horizon/params.samples"))?;
        rows.push((spec.len(), stats, predicted_mean_abs_sq(&spec)));
    }
    let artifact = csv("zstats.csv", |out| {
        writeln!(
            out,
            "repeat,n_atoms,horizon,samples,re_mean_z,im_mean_z,std_error,mean_abs_sq,predicted_mean_abs_sq"
        )?;
        for (r, (n, st, predicted)) in rows.iter().enumerate() {
            writeln!(
                out,
                "{},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r, n, p.horizon, st.samples, st.mean_z.re, st.mean_z.im, st.std_error, st.mean_abs_sq, predicted
            )?;
        }
        Ok(())
    })?;
    let worst_z_in_sigma = rows
        .iter()
        .map(|(_, st, _)| st.mean_z.norm() / st.std_error.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(ExperimentOutput {
        artifacts: vec![artifact],
        summary: json!({ "repeats": p.repeats, "max_abs_mean_z_over_std_error": worst_z_in_sigma }),
    })
}

fn run_collapse(p: &CollapseParams, root: u64) -> CliResult<ExperimentOutput> {
    let (a, b) = (p.a.value(), p.b.value());
    spin_amplitudes(a, b)?;
    let spec = draw_environment(&p.environment, root, 0)?;
    if p.oracle_check && spec.len() > ORACLE_MAX_ATOMS {
        return Err(CliError::config(
            "params.oracle_check",
            format!("exact cross-check needs N ≤ {ORACLE_MAX_ATOMS}, got N = {}", spec.len()),
        ));
    }
    let grid = p.grid.points("params.grid")?;
    let rhos = grid
        .iter()
        .map(|&t| envselect::rho_as_analytic(&spec, a, b, t))
        .collect::<einselect::Result<Vec<_>>>()
        .map_err(key_err("params"))?;

    let mut oracle_error = None;
    if p.oracle_check {
        let h = envselect::h_env_total(&spec).map_err(key_err("params.environment"))?;
        let psi0 = envselect::evolve_env(&spec, a, b, 0.0).map_err(key_err("params"))?;
        let mut worst: f64 = 0.0;
        for (&t, rho) in grid.iter().zip(&rhos) {
            let traced = evolve_exact(&h, t, &psi0)
                .and_then(|psi| psi.partial_trace(&[SPIN, ATOM]))
                .and_then(|exact| rho.max_abs_diff(&exact))
                .map_err(key_err("params"))?;
            worst = worst.max(traced);
        }
        if worst > ORACLE_TOL {
            return Err(CliError::Numerical(format!(
                "closed-form ρ_AS differs from exact evolution by {worst:e} > {ORACLE_TOL:e}"
            )));
        }
        oracle_error = Some(worst);
    }

    let artifact = csv("collapse.csv", |out| {
        writeln!(out, "t,re_z,im_z,abs_z,re_rho_03,im_rho_03,abs_rho_03,purity,entropy")?;
        for (&t, rho) in grid.iter().zip(&rhos) {
            let z = z_of_t(&spec, t);
            let c = rho.get(0, 3);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t,
                z.re,
                z.im,
                z.norm(),
                c.re,
                c.im,
                c.norm(),
                rho.purity(),
                infotheory::entropy(rho)
            )?;
        }
        Ok(())
    })?;
    Ok(ExperimentOutput {
        artifacts: vec![artifact, environment_csv(&spec)?],
        summary: json!({ "n_atoms": spec.len(), "samples": grid.len(), "oracle_max_abs_error": oracle_error }),
    })
}

fn run_info(p: &InfoParams) -> CliResult<ExperimentOutput> {
    let (a, b) = (p.a.value(), p.b.value());
    spin_amplitudes(a, b)?;
    let cfg = BitModelConfig::new(a, b, p.g).map_err(key_err("params.g"))?;
    let grid = p.grid.points("params.grid")?;
    let partition = Partition::cut(&[SPIN], &[ATOM]).map_err(key_err("params"))?;
    let h = bitmodel::h_as(cfg.g()).map_err(key_err("params.g"))?;
    let psi0 = bitmodel::initial_state(&cfg);

    let mut reports = Vec::with_capacity(grid.len());
    let mut oracle_error: f64 = 0.0;
    for &t in &grid {
        let psi = bitmodel::evolve_bitbit(&cfg, t);
        let exact = evolve_exact(&h, t, &psi0).map_err(key_err("params"))?;
        let d = psi
            .phase_gauged()
            .max_abs_diff(&exact.phase_gauged())
            .map_err(key_err("params"))?;
        oracle_error = oracle_error.max(d);
        reports.push(info_report(&psi, &partition).map_err(key_err("params"))?);
    }
    let drift = info_conservation_check(&h, &psi0, &grid).map_err(key_err("params"))?;
    if oracle_error > ORACLE_TOL {
        return Err(CliError::Numerical(format!(
            "closed-form state differs from exact evolution by {oracle_error:e}"
        )));
    }
    if drift > ORACLE_TOL {
        return Err(CliError::Numerical(format!("total information drifted by {drift:e}")));
    }

    let artifact = csv("info.csv", |out| {
        writeln!(out, "{}", InfoReport::csv_header(partition.len()))?;
        for (&t, r) in grid.iter().zip(&reports) {
            r.write_csv_row(t, &mut *out)?;
        }
        Ok(())
    })?;
    let last = reports.last().expect("grid is non-empty");
    Ok(ExperimentOutput {
        artifacts: vec![artifact],
        summary: json!({
            "blocks": partition.blocks(),
            "final_total": last.total,
            "final_correlation": last.correlation,
            "oracle_max_abs_error": oracle_error,
            "information_drift": drift,
        }),
    })
}

fn run_redundancy(p: &RedundancyParams, root: u64) -> CliResult<ExperimentOutput> {
    if p.n_atoms.is_empty() {
        return Err(CliError::config("params.n_atoms", "list is empty"));
    }
    if let Some(&n) = p.n_atoms.iter().find(|&&n| n == 0 || n > 20) {
        return Err(CliError::config("params.n_atoms", format!("N = {n} outside 1..=20")));
    }
    if p.trials == 0 {
        return Err(CliError::config("params.trials", "must be at least 1"));
    }
    let artifact = match &p.flips {
        FlipsCfg::Counts(counts) => {
            let mut rows = Vec::new();
            for &n in &p.n_atoms {
                for &k in counts.iter().filter(|&&k| k <= n) {
                    rows.push(reliability_curve(n, k, p.trials, root).map_err(key_err("params"))?);
                }
            }
            if rows.is_empty() {
                return Err(CliError::config("params.flips.counts", "no count fits any N"));
            }
            csv("redundancy.csv", |out| {
                writeln!(out, "{}", Reliability::CSV_HEADER)?;
                rows.iter().try_for_each(|r| r.write_csv_row(&mut *out))
            })?
        }
        FlipsCfg::Rate(rate) => {
            let mut rows = Vec::new();
            for &n in &p.n_atoms {
                rows.push((n, reliability_at_rate(n, *rate, p.trials, root).map_err(key_err("params.flips.rate"))?));
            }
            csv("redundancy_rate.csv", |out| {
                writeln!(out, "n_atoms,flip_rate,majority_success,parity_success,trials,seed")?;
                for (n, (m, q)) in &rows {
                    writeln!(out, "{n},{rate:.16e},{m:.16e},{q:.16e},{},{root}", p.trials)?;
                }
                Ok(())
            })?
        }
    };
    Ok(ExperimentOutput {
        artifacts: vec![artifact],
        summary: json!({ "trials": p.trials }),
    })
}

fn run_recurrence(p: &RecurrenceParams, root: u64) -> CliResult<ExperimentOutput> {
    let spec = draw_environment(&p.environment, root, 0)?;
    let period = recurrence_time(&spec);
    let miss = period.map(|t| (z_of_t(&spec, t) - C64::new(1.0, 0.0)).norm());
    let artifact = csv("recurrence.csv", |out| {
        writeln!(out, "n_atoms,found,recurrence_time,abs_z_minus_one")?;
        match (period, miss) {
            (Some(t), Some(m)) => writeln!(out, "{},true,{:.16e},{:.16e}", spec.len(), t, m),
            _ => writeln!(out, "{},false,,", spec.len()),
        }
    })?;
    Ok(ExperimentOutput {
        artifacts: vec![artifact, environment_csv(&spec)?],
        summary: json!({ "recurrence_time": period, "abs_z_minus_one": miss }),
    })
}

fn run_ensemble(p: &EnsembleParams) -> CliResult<ExperimentOutput> {
    if !(0.5..=1.0).contains(&p.p_up) {
        return Err(CliError::config("params.p_up", format!("{} outside [1/2, 1]", p.p_up)));
    }
    let q = |v| PureState::qubit(SPIN, v).map_err(key_err("params"));
    let (pu, rest) = (p.p_up, 1.0 - p.p_up);
    // p|↑⟩⟨↑| + (1−p)|↓⟩⟨↓| and (2p−1)|↑⟩⟨↑| + (1−p)(|⊙⟩⟨⊙| + |⊗⟩⟨⊗|)
    let first = Preparation::new(vec![(pu, q(states::UP)?), (rest, q(states::DOWN)?)]).map_err(key_err("params.p_up"))?;
    let second = Preparation::new(vec![
        (2.0 * pu - 1.0, q(states::UP)?),
        (rest, q(states::ODOT)?),
        (rest, q(states::OTIMES)?),
    ])
    .map_err(key_err("params.p_up"))?;
    let (r1, r2) = (ensemble_density(&first), ensemble_density(&second));
    let diff = r1.max_abs_diff(&r2).map_err(key_err("params"))?;
    if diff > STRUCTURAL_TOL {
        return Err(CliError::Numerical(format!("preparations differ by {diff:e}")));
    }
    let artifact = csv("ensemble.csv", |out| {
        writeln!(out, "row,col,re_first,im_first,re_second,im_second")?;
        for i in 0..2 {
            for j in 0..2 {
                let (x, y) = (r1.get(i, j), r2.get(i, j));
                writeln!(out, "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}", x.re, x.im, y.re, y.im)?;
            }
        }
        Ok(())
    })?;
    Ok(ExperimentOutput {
        artifacts: vec![artifact],
        summary: json!({ "max_abs_difference": diff, "entropy": infotheory::entropy(&r1) }),
    })
}
