//! Run-configuration schema: a JSON object with complex numbers as
//! `[re, im]` pairs and matrices as row-major nested arrays. Parsing
//! collects every schema violation with its field path instead of stopping
//! at the first.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// What the run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Report the density matrix and 6-vector of one probability triple.
    Map,
    /// Unitary kinetic evolution of a qubit triple.
    Evolve,
    /// Dissipative (GKSL) kinetic evolution of a qubit triple.
    Gksl,
    /// One application of a Kraus channel.
    Channel,
    /// Matrix-side evolution of an N-level state, read out as probabilities.
    Qudit,
    /// Free evolution of a truncated-oscillator state.
    Oscillator,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Map => "map",
            Mode::Evolve => "evolve",
            Mode::Gksl => "gksl",
            Mode::Channel => "channel",
            Mode::Qudit => "qudit",
            Mode::Oscillator => "oscillator",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "map" => Ok(Mode::Map),
            "evolve" => Ok(Mode::Evolve),
            "gksl" => Ok(Mode::Gksl),
            "channel" => Ok(Mode::Channel),
            "qudit" => Ok(Mode::Qudit),
            "oscillator" => Ok(Mode::Oscillator),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format '{other}'")),
        }
    }
}

/// Exactly one initial state is present in a valid config.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Probs([f64; 3]),
    Rho(CMatrix),
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub hamiltonian: Option<CMatrix>,
    pub lindblad: Vec<CMatrix>,
    pub kraus: Vec<CMatrix>,
    pub initial: InitialState,
    pub t_final: f64,
    pub step: f64,
    pub sample_every: usize,
    pub output_path: String,
    pub output_format: OutputFormat,
}

/// Defaults applied when the document omits a field.
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_SAMPLE_EVERY: usize = 10;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hamiltonian: Option<RawMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lindblad: Option<Vec<RawMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kraus: Option<Vec<RawMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_probs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_rho: Option<RawMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample_every: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_format: Option<String>,
}

fn matrix_to_raw(m: &CMatrix) -> RawMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn raw_to_matrix(raw: &RawMatrix, field: &str, violations: &mut Vec<String>) -> Option<CMatrix> {
    if raw.is_empty() {
        violations.push(format!("{field}: matrix must be nonempty"));
        return None;
    }
    let rows = raw.len();
    let cols = raw[0].len();
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            violations.push(format!(
                "{field}[{i}]: expected {cols} entries, got {}",
                row.len()
            ));
            return None;
        }
    }
    if rows != cols {
        violations.push(format!("{field}: expected a square matrix, got {rows}x{cols}"));
        return None;
    }
    let mut m: CMatrix = Array2::zeros((rows, cols));
    for (i, row) in raw.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                violations.push(format!("{field}[{i}][{j}]: non-finite entry"));
                return None;
            }
            m[(i, j)] = C64::new(re, im);
        }
    }
    Some(m)
}

/// Parses and validates a JSON run configuration.
///
/// Returns [`Error::Schema`] carrying every violation found, each prefixed
/// with the offending field path.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Schema {
        violations: vec![format!("document: {e}")],
    })?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<RunConfig> {
    let mut violations = Vec::new();

    let mode = match raw.mode.as_deref() {
        None => {
            violations.push("mode: required field is missing".to_string());
            None
        }
        Some(s) => match s.parse::<Mode>() {
            Ok(m) => Some(m),
            Err(_) => {
                violations.push(format!(
                    "mode: unknown value '{s}' (expected map|evolve|gksl|channel|qudit|oscillator)"
                ));
                None
            }
        },
    };

    // Exactly one initial state.
    let initial = match (&raw.initial_probs, &raw.initial_rho) {
        (Some(_), Some(_)) => {
            violations.push(
                "initial_probs, initial_rho: exactly one must be present, both given".to_string(),
            );
            None
        }
        (None, None) => {
            violations
                .push("initial_probs, initial_rho: exactly one must be present".to_string());
            None
        }
        (Some(p), None) => {
            if p.len() != 3 {
                violations.push(format!("initial_probs: expected 3 entries, got {}", p.len()));
                None
            } else if p.iter().any(|x| !x.is_finite() || !(0.0..=1.0).contains(x)) {
                violations.push(format!("initial_probs: entries must lie in [0, 1], got {p:?}"));
                None
            } else {
                Some(InitialState::Probs([p[0], p[1], p[2]]))
            }
        }
        (None, Some(r)) => raw_to_matrix(r, "initial_rho", &mut violations).map(InitialState::Rho),
    };

    let hamiltonian = raw
        .hamiltonian
        .as_ref()
        .and_then(|h| raw_to_matrix(h, "hamiltonian", &mut violations));
    let lindblad: Vec<CMatrix> = raw
        .lindblad
        .as_ref()
        .map(|list| {
            list.iter()
                .enumerate()
                .filter_map(|(i, m)| raw_to_matrix(m, &format!("lindblad[{i}]"), &mut violations))
                .collect()
        })
        .unwrap_or_default();
    let kraus: Vec<CMatrix> = raw
        .kraus
        .as_ref()
        .map(|list| {
            list.iter()
                .enumerate()
                .filter_map(|(i, m)| raw_to_matrix(m, &format!("kraus[{i}]"), &mut violations))
                .collect()
        })
        .unwrap_or_default();

    // Mode-specific presence and dimension checks.
    if let Some(mode) = mode {
        let require_2x2 = |m: &CMatrix, field: &str, violations: &mut Vec<String>| {
            if m.nrows() != 2 {
                violations.push(format!(
                    "{field}: expected a 2x2 matrix in mode {}, got {}x{}",
                    mode.as_str(),
                    m.nrows(),
                    m.ncols()
                ));
            }
        };
        let reject = |present: bool, field: &str, violations: &mut Vec<String>| {
            if present {
                violations.push(format!("{field}: not used in mode {}", mode.as_str()));
            }
        };
        match mode {
            Mode::Map => {
                reject(raw.hamiltonian.is_some(), "hamiltonian", &mut violations);
                reject(raw.lindblad.is_some(), "lindblad", &mut violations);
                reject(raw.kraus.is_some(), "kraus", &mut violations);
                if let Some(InitialState::Rho(rho)) = &initial {
                    require_2x2(rho, "initial_rho", &mut violations);
                }
            }
            Mode::Evolve | Mode::Gksl => {
                match &hamiltonian {
                    None => violations.push(format!(
                        "hamiltonian: required in mode {}",
                        mode.as_str()
                    )),
                    Some(h) => require_2x2(h, "hamiltonian", &mut violations),
                }
                if mode == Mode::Evolve {
                    reject(raw.lindblad.is_some(), "lindblad", &mut violations);
                } else {
                    for (i, l) in lindblad.iter().enumerate() {
                        require_2x2(l, &format!("lindblad[{i}]"), &mut violations);
                    }
                }
                reject(raw.kraus.is_some(), "kraus", &mut violations);
                if let Some(InitialState::Rho(rho)) = &initial {
                    require_2x2(rho, "initial_rho", &mut violations);
                }
            }
            Mode::Channel => {
                reject(raw.hamiltonian.is_some(), "hamiltonian", &mut violations);
                reject(raw.lindblad.is_some(), "lindblad", &mut violations);
                if raw.kraus.is_none() {
                    violations.push("kraus: required in mode channel".to_string());
                }
                for (i, k) in kraus.iter().enumerate() {
                    require_2x2(k, &format!("kraus[{i}]"), &mut violations);
                }
                if let Some(InitialState::Rho(rho)) = &initial {
                    require_2x2(rho, "initial_rho", &mut violations);
                }
            }
            Mode::Qudit => {
                reject(raw.kraus.is_some(), "kraus", &mut violations);
                if raw.initial_probs.is_some() {
                    violations
                        .push("initial_probs: mode qudit requires initial_rho".to_string());
                }
                let dim = if let Some(InitialState::Rho(rho)) = &initial {
                    Some(rho.nrows())
                } else {
                    None
                };
                match (&hamiltonian, dim) {
                    (None, _) => {
                        violations.push("hamiltonian: required in mode qudit".to_string())
                    }
                    (Some(h), Some(n)) if h.nrows() != n => violations.push(format!(
                        "hamiltonian: {}x{} does not match initial_rho {n}x{n}",
                        h.nrows(),
                        h.ncols()
                    )),
                    _ => {}
                }
                if let Some(n) = dim {
                    for (i, l) in lindblad.iter().enumerate() {
                        if l.nrows() != n {
                            violations.push(format!(
                                "lindblad[{i}]: {}x{} does not match initial_rho {n}x{n}",
                                l.nrows(),
                                l.ncols()
                            ));
                        }
                    }
                }
            }
            Mode::Oscillator => {
                reject(raw.hamiltonian.is_some(), "hamiltonian", &mut violations);
                reject(raw.lindblad.is_some(), "lindblad", &mut violations);
                reject(raw.kraus.is_some(), "kraus", &mut violations);
                if raw.initial_probs.is_some() {
                    violations.push(
                        "initial_probs: mode oscillator requires initial_rho".to_string(),
                    );
                }
            }
        }
    }

    let t_final = raw.t_final.unwrap_or(0.0);
    if !t_final.is_finite() || t_final < 0.0 {
        violations.push(format!("t_final: must be a finite real >= 0, got {t_final}"));
    }
    let step = raw.step.unwrap_or(DEFAULT_STEP);
    if !step.is_finite() || step <= 0.0 {
        violations.push(format!("step: must be a finite real > 0, got {step}"));
    }
    let sample_every = raw.sample_every.unwrap_or(DEFAULT_SAMPLE_EVERY as u64);
    if sample_every == 0 {
        violations.push("sample_every: must be a positive integer".to_string());
    }

    let output_format = match raw.output_format.as_deref() {
        None => OutputFormat::Csv,
        Some(s) => match s.parse::<OutputFormat>() {
            Ok(f) => f,
            Err(_) => {
                violations.push(format!(
                    "output_format: unknown value '{s}' (expected csv|json)"
                ));
                OutputFormat::Csv
            }
        },
    };
    let output_path = raw.output_path.clone().unwrap_or_else(|| {
        format!(
            "probkin_out.{}",
            output_format.as_str()
        )
    });

    if !violations.is_empty() {
        return Err(Error::Schema { violations });
    }
    Ok(RunConfig {
        mode: mode.expect("mode validated"),
        hamiltonian,
        lindblad,
        kraus,
        initial: initial.expect("initial state validated"),
        t_final,
        step,
        sample_every: sample_every as usize,
        output_path,
        output_format,
    })
}

impl RunConfig {
    /// Serializes back to the document schema; re-parsing the result yields
    /// an equal config.
    pub fn echo_json(&self) -> String {
        let raw = RawConfig {
            mode: Some(self.mode.as_str().to_string()),
            hamiltonian: self.hamiltonian.as_ref().map(matrix_to_raw),
            lindblad: if self.lindblad.is_empty() {
                None
            } else {
                Some(self.lindblad.iter().map(matrix_to_raw).collect())
            },
            kraus: if self.kraus.is_empty() {
                None
            } else {
                Some(self.kraus.iter().map(matrix_to_raw).collect())
            },
            initial_probs: match &self.initial {
                InitialState::Probs(p) => Some(p.to_vec()),
                InitialState::Rho(_) => None,
            },
            initial_rho: match &self.initial {
                InitialState::Probs(_) => None,
                InitialState::Rho(r) => Some(matrix_to_raw(r)),
            },
            t_final: Some(self.t_final),
            step: Some(self.step),
            sample_every: Some(self.sample_every as u64),
            output_path: Some(self.output_path.clone()),
            output_format: Some(self.output_format.as_str().to_string()),
        };
        serde_json::to_string_pretty(&raw).expect("schema types serialize")
    }
}
