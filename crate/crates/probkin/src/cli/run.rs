//! Executes a validated [`RunConfig`]: drives the library, writes the
//! trajectory file and a metadata sidecar, and maps library errors onto the
//! documented exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::{InitialState, Mode, OutputFormat, RunConfig};
use crate::channels::{apply_channel_probs, channel_superoperator, pseudostochastic_matrix, KrausSet};
use crate::dynamics::{
    evolve_density, gksl_kinetic_generator, kinetic_generator, Hamiltonian, KineticGenerator,
    LindbladSet,
};
use crate::error::{Error, Result};
use crate::numerics::{trace, CMatrix};
use crate::qubit_map::{
    is_admissible, probs_to_rho, quantumness_defect, rho_to_probs, to_six_vector, ProbTriple,
    QubitDensityMatrix,
};
use crate::qudit_osc::{qudit_positivity, qudit_rho_to_probs, FockDensityMatrix};

/// Exit codes: 0 ok, 2 schema, 3 non-admissible state, 4 invalid Kraus set,
/// 5 numerical failure (everything else, I/O included).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Schema { .. } => 2,
        Error::NonAdmissibleState { .. } => 3,
        Error::EmptySet | Error::InvalidKrausSet { .. } | Error::WeightsNotNormalized { .. } => 4,
        _ => 5,
    }
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub trajectory_path: PathBuf,
    pub metadata_path: PathBuf,
    pub rows: usize,
}

/// One output row of a qubit-mode run.
struct QubitRow {
    t: f64,
    p: [f64; 3],
    defect: f64,
    trace_residual: f64,
}

/// One output row of a qudit/oscillator run: the flattened probability
/// family plus diagnostics.
struct FamilyRow {
    t: f64,
    probs: Vec<f64>,
    min_eigenvalue: f64,
    trace_residual: f64,
}

fn fmt_float(x: f64) -> String {
    // 17 significant digits: enough to reproduce the f64 bit pattern, so
    // repeated runs are byte-identical.
    format!("{x:.16e}")
}

fn metadata_path_for(output_path: &Path) -> PathBuf {
    let mut name = output_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "probkin_out".to_string());
    name.push_str(".meta.json");
    output_path.with_file_name(name)
}

fn complex_matrix_json(m: &CMatrix) -> serde_json::Value {
    json!((0..m.nrows())
        .map(|i| (0..m.ncols())
            .map(|j| vec![clean_zero(m[(i, j)].re), clean_zero(m[(i, j)].im)])
            .collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// Negated zero entries would serialize as `-0.0`; fold them to plain zero.
fn clean_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn real_rows_json(rows: &[[f64; 6]; 6]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| r.iter().copied().map(clean_zero).collect())
        .collect()
}

fn real_vec_json(v: &[f64; 6]) -> Vec<f64> {
    v.iter().copied().map(clean_zero).collect()
}

/// Runs a configuration to completion, writing the trajectory and its
/// metadata sidecar next to it.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    match config.mode {
        Mode::Map => run_map(config),
        Mode::Evolve | Mode::Gksl => run_kinetic(config),
        Mode::Channel => run_channel(config),
        Mode::Qudit => run_qudit(config),
        Mode::Oscillator => run_oscillator(config),
    }
}

fn initial_triple(config: &RunConfig) -> Result<ProbTriple> {
    match &config.initial {
        InitialState::Probs([p1, p2, p3]) => ProbTriple::new(*p1, *p2, *p3),
        InitialState::Rho(m) => rho_to_probs(&QubitDensityMatrix::new(m.clone())?),
    }
}

fn qubit_row(t: f64, p: &ProbTriple, six_sum: f64) -> QubitRow {
    QubitRow {
        t,
        p: p.components(),
        defect: quantumness_defect(p),
        trace_residual: (six_sum - 1.0).abs(),
    }
}

fn run_map(config: &RunConfig) -> Result<RunSummary> {
    let p = initial_triple(config)?;
    if !is_admissible(&p) {
        return Err(Error::NonAdmissibleState {
            defect: quantumness_defect(&p),
        });
    }
    let rho = probs_to_rho(&p);
    let six = to_six_vector(&p);
    let rows = vec![qubit_row(0.0, &p, six.sum())];
    let metadata = json!({
        "mode": "map",
        "density_matrix": complex_matrix_json(rho.matrix()),
        "six_vector": six.components().to_vec(),
        "quantumness_defect": quantumness_defect(&p),
        "min_eigenvalue": rho.min_eigenvalue_closed_form(),
        "purity": rho.purity(),
    });
    write_qubit_outputs(config, &rows, &metadata)
}

fn kinetic_generator_for(config: &RunConfig) -> Result<KineticGenerator> {
    let h = Hamiltonian::new(
        config
            .hamiltonian
            .clone()
            .expect("schema guarantees a Hamiltonian in evolve/gksl mode"),
    )?;
    match config.mode {
        Mode::Evolve => kinetic_generator(&h),
        _ => gksl_kinetic_generator(&h, &LindbladSet::new(config.lindblad.clone())?),
    }
}

fn run_kinetic(config: &RunConfig) -> Result<RunSummary> {
    let p0 = initial_triple(config)?;
    if !is_admissible(&p0) {
        return Err(Error::NonAdmissibleState {
            defect: quantumness_defect(&p0),
        });
    }
    let generator = kinetic_generator_for(config)?;
    let traj = generator.propagate(&p0, config.t_final, config.step)?;

    let mut rows = Vec::new();
    let last = traj.len() - 1;
    for (i, (t, p6)) in traj.iter().enumerate() {
        if i % config.sample_every != 0 && i != last {
            continue;
        }
        let p = ProbTriple::new(3.0 * p6[0], 3.0 * p6[2], 3.0 * p6[4])?;
        let sum: f64 = p6.iter().sum();
        rows.push(qubit_row(t, &p, sum));
    }

    let metadata = json!({
        "mode": config.mode.as_str(),
        "generator": real_rows_json(generator.matrix()),
        "affine": real_vec_json(generator.affine()),
        "step": config.step,
        "t_final": config.t_final,
    });
    write_qubit_outputs(config, &rows, &metadata)
}

fn run_channel(config: &RunConfig) -> Result<RunSummary> {
    let p0 = initial_triple(config)?;
    let ks = KrausSet::new(config.kraus.clone())?;
    let p1 = apply_channel_probs(&ks, &p0)?;
    let rows = vec![
        qubit_row(0.0, &p0, to_six_vector(&p0).sum()),
        qubit_row(1.0, &p1, to_six_vector(&p1).sum()),
    ];
    let v = channel_superoperator(&ks);
    let (m, c) = pseudostochastic_matrix(&ks)?;
    let metadata = json!({
        "mode": "channel",
        "superoperator": complex_matrix_json(&v),
        "pseudostochastic_matrix": real_rows_json(&m),
        "pseudostochastic_affine": real_vec_json(&c),
    });
    write_qubit_outputs(config, &rows, &metadata)
}

/// Column labels of a flattened family at dimension `n`: the diagonal
/// probabilities then the interleaved off-diagonal pairs, matching
/// `QuditProbFamily::flattened`.
fn family_labels(n: usize) -> Vec<String> {
    let mut labels = Vec::new();
    for j in 0..(n - 1) {
        labels.push(format!("p3_{j}{j}"));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            labels.push(format!("p1_{j}{k}"));
            labels.push(format!("p2_{j}{k}"));
        }
    }
    labels
}

fn family_row(t: f64, rho: &CMatrix) -> Result<FamilyRow> {
    let readout = qudit_rho_to_probs(rho)?;
    Ok(FamilyRow {
        t,
        probs: readout.family.flattened(),
        min_eigenvalue: qudit_positivity(rho)?,
        trace_residual: (trace(rho).re - 1.0).abs(),
    })
}

fn run_qudit(config: &RunConfig) -> Result<RunSummary> {
    let rho0 = match &config.initial {
        InitialState::Rho(m) => m.clone(),
        InitialState::Probs(_) => unreachable!("schema rejects initial_probs in qudit mode"),
    };
    let h = Hamiltonian::new(
        config
            .hamiltonian
            .clone()
            .expect("schema guarantees a Hamiltonian in qudit mode"),
    )?;
    let ls = LindbladSet::new(config.lindblad.clone())?;
    // Validate the initial state before spending time integrating.
    let initial_row = family_row(0.0, &rho0)?;
    let n = rho0.nrows();

    let traj = evolve_density(&h, &ls, &rho0, config.t_final, config.step)?;
    let mut rows = vec![initial_row];
    let last = traj.len() - 1;
    for (i, (t, rho)) in traj.iter().enumerate() {
        if i == 0 || (i % config.sample_every != 0 && i != last) {
            continue;
        }
        rows.push(family_row(t, rho)?);
    }

    let metadata = json!({
        "mode": "qudit",
        "dim": n,
        "min_eigenvalue_initial": rows.first().map(|r| r.min_eigenvalue),
        "min_eigenvalue_final": rows.last().map(|r| r.min_eigenvalue),
        "step": config.step,
        "t_final": config.t_final,
    });
    write_family_outputs(config, n, &rows, &metadata)
}

fn run_oscillator(config: &RunConfig) -> Result<RunSummary> {
    let rho0 = match &config.initial {
        InitialState::Rho(m) => FockDensityMatrix::new(m.clone())?,
        InitialState::Probs(_) => {
            unreachable!("schema rejects initial_probs in oscillator mode")
        }
    };
    let n = rho0.n_max() + 1;

    // The free evolution is exact, so sample directly at the output times.
    let stride = config.step * config.sample_every as f64;
    let mut times = Vec::new();
    let mut t = 0.0;
    while t < config.t_final - 1e-12 {
        times.push(t);
        t += stride;
    }
    times.push(config.t_final);

    let mut rows = Vec::new();
    for &t in &times {
        let rho_t = rho0.evolve(t);
        rows.push(family_row(t, rho_t.matrix())?);
    }

    let metadata = json!({
        "mode": "oscillator",
        "n_max": rho0.n_max(),
        "normalization_residual_initial": rho0.normalization_residual(),
        "normalization_residual_final": rho0.evolve(config.t_final).normalization_residual(),
        "t_final": config.t_final,
    });
    write_family_outputs(config, n, &rows, &metadata)
}

fn write_qubit_outputs(
    config: &RunConfig,
    rows: &[QubitRow],
    metadata: &serde_json::Value,
) -> Result<RunSummary> {
    let body = match config.output_format {
        OutputFormat::Csv => {
            let mut out =
                String::from("# probkin trajectory v1: t,p1,p2,p3,quantumness_defect,trace_residual\n");
            for row in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt_float(row.t),
                    fmt_float(row.p[0]),
                    fmt_float(row.p[1]),
                    fmt_float(row.p[2]),
                    fmt_float(row.defect),
                    fmt_float(row.trace_residual),
                );
            }
            out
        }
        OutputFormat::Json => {
            let records: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "t": row.t,
                        "p1": row.p[0],
                        "p2": row.p[1],
                        "p3": row.p[2],
                        "quantumness_defect": row.defect,
                        "trace_residual": row.trace_residual,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&records).expect("rows serialize") + "\n"
        }
    };
    write_outputs(config, body, rows.len(), metadata)
}

fn write_family_outputs(
    config: &RunConfig,
    dim: usize,
    rows: &[FamilyRow],
    metadata: &serde_json::Value,
) -> Result<RunSummary> {
    let labels = family_labels(dim);
    let body = match config.output_format {
        OutputFormat::Csv => {
            let mut out = format!(
                "# probkin trajectory v1: t,{},min_eigenvalue,trace_residual\n",
                labels.join(",")
            );
            for row in rows {
                let mut line = fmt_float(row.t);
                for p in &row.probs {
                    line.push(',');
                    line.push_str(&fmt_float(*p));
                }
                let _ = writeln!(
                    out,
                    "{line},{},{}",
                    fmt_float(row.min_eigenvalue),
                    fmt_float(row.trace_residual)
                );
            }
            out
        }
        OutputFormat::Json => {
            let records: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "t": row.t,
                        "probs": row.probs,
                        "labels": labels,
                        "min_eigenvalue": row.min_eigenvalue,
                        "trace_residual": row.trace_residual,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&records).expect("rows serialize") + "\n"
        }
    };
    write_outputs(config, body, rows.len(), metadata)
}

fn write_outputs(
    config: &RunConfig,
    body: String,
    rows: usize,
    metadata: &serde_json::Value,
) -> Result<RunSummary> {
    let trajectory_path = PathBuf::from(&config.output_path);
    let metadata_path = metadata_path_for(&trajectory_path);
    std::fs::write(&trajectory_path, body)?;
    let meta_body = serde_json::to_string_pretty(metadata).expect("metadata serializes") + "\n";
    std::fs::write(&metadata_path, meta_body)?;
    Ok(RunSummary {
        trajectory_path,
        metadata_path,
        rows,
    })
}

/// Parses `field=start:stop:count` into a list of configs with the swept
/// field substituted and indexed output paths.
pub fn expand_sweep(config: &RunConfig, sweep: &str) -> Result<Vec<RunConfig>> {
    let schema_err = |msg: String| Error::Schema {
        violations: vec![msg],
    };
    let (field, range) = sweep
        .split_once('=')
        .ok_or_else(|| schema_err(format!("sweep: expected field=start:stop:count, got '{sweep}'")))?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(schema_err(format!(
            "sweep: expected start:stop:count, got '{range}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| schema_err(format!("sweep: bad start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| schema_err(format!("sweep: bad stop '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| schema_err(format!("sweep: bad count '{}'", parts[2])))?;
    if count == 0 {
        return Err(schema_err("sweep: count must be positive".to_string()));
    }

    let path = Path::new(&config.output_path);
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "probkin_out".into());
    let ext = path
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| config.output_format.as_str().into());

    let mut configs = Vec::with_capacity(count);
    for i in 0..count {
        let value = if count == 1 {
            start
        } else {
            start + (stop - start) * i as f64 / (count - 1) as f64
        };
        let mut cfg = config.clone();
        match field {
            "t_final" => cfg.t_final = value,
            "step" => cfg.step = value,
            other => {
                return Err(schema_err(format!(
                    "sweep: field '{other}' is not sweepable (use t_final or step)"
                )))
            }
        }
        cfg.output_path = path
            .with_file_name(format!("{stem}_{i:03}.{ext}"))
            .to_string_lossy()
            .into_owned();
        configs.push(cfg);
    }
    Ok(configs)
}
