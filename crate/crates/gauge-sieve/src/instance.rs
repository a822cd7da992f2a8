//! JSON instance and report formats shared by the CLI and FFI surfaces.
//!
//! Rationals travel as "p/q" strings so files round-trip exactly; floats
//! appear only in report fields that are decimal summaries of exact values.
//! A body's stored radii are informational: loading recomputes certified
//! values from the rows, so a hand-edited file cannot smuggle in an unsound
//! sandwich.

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::cvp::CvpReport;
use crate::error::{Error, Result};
use crate::geometry::CenteredPolytope;
use crate::ip::{IpResult, IpStatus, OptResult, OptStatus};
use crate::lattice::{LatticeBasis, Subspace};
use crate::rational::{self, format_rat, parse_rat, QMat, QVec, Rat};
use crate::sieve::SapReport;

/// Version tag carried by every instance file and report.
pub const SCHEMA: &str = "gauge-sieve/1";

/// H-polytope rows with an interior point. `r` and `R` echo the certified
/// sandwich radii at save time; loaders ignore them and recompute.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    pub a0: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<String>,
}

/// Lattice basis matrix; generators are the columns of `B`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisJson {
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

/// Rational subspace spanned by the listed vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub span: Vec<Vec<String>>,
}

/// Linear objective with its additive accuracy target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObjectiveJson {
    pub v: Vec<String>,
    pub delta: String,
}

/// Per-instance solver parameters. Absent fields fall back to CLI flags and
/// then to solver defaults, in that order.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_multiplier: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_t: Option<f64>,
}

/// On-disk problem instance. Optional sections are present only when the
/// problem kind needs them: `target` for CVP, `subspace` for SAP,
/// `objective` for optimization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub body: BodyJson,
    pub lattice: BasisJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveJson>,
    #[serde(default)]
    pub params: ParamsJson,
}

/// Decoded instance with certified geometry.
#[derive(Debug, Clone)]
pub struct Instance {
    pub body: CenteredPolytope,
    pub basis: LatticeBasis,
    pub target: Option<QVec>,
    pub subspace: Option<Subspace>,
    pub objective: Option<(QVec, Rat)>,
    pub params: ParamsJson,
}

fn vec_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn mat_strings(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| vec_strings(m.row(i))).collect()
}

fn parse_vec(v: &[String], what: &str) -> Result<QVec> {
    v.iter()
        .map(|s| {
            parse_rat(s).map_err(|e| Error::Input(format!("{what}: {e} (entry {s:?})")))
        })
        .collect()
}

fn parse_mat(rows: &[Vec<String>], what: &str) -> Result<QMat> {
    let parsed: Vec<QVec> = rows
        .iter()
        .map(|row| parse_vec(row, what))
        .collect::<Result<_>>()?;
    QMat::from_rows(parsed).map_err(|e| Error::Input(format!("{what}: {e}")))
}

/// Serializes a body with its certified radii attached.
pub fn encode_body(c: &CenteredPolytope) -> BodyJson {
    BodyJson {
        a: mat_strings(c.normals()),
        b: vec_strings(c.offsets()),
        a0: vec_strings(c.center()),
        r: Some(format_rat(c.inner_radius())),
        big_r: Some(format_rat(c.outer_radius())),
    }
}

/// Rebuilds a body from rows and interior point, recomputing the certified
/// radii and ignoring any stored ones.
pub fn decode_body(j: &BodyJson) -> Result<CenteredPolytope> {
    let a = parse_mat(&j.a, "body matrix A")?;
    let b = parse_vec(&j.b, "body offsets b")?;
    let a0 = parse_vec(&j.a0, "body interior point a0")?;
    CenteredPolytope::with_interior_point(a, b, a0)
}

pub fn encode_basis(basis: &LatticeBasis) -> BasisJson {
    BasisJson {
        b: mat_strings(basis.matrix()),
    }
}

pub fn decode_basis(j: &BasisJson) -> Result<LatticeBasis> {
    LatticeBasis::new(parse_mat(&j.b, "basis matrix B")?)
}

pub fn encode_subspace(m: &Subspace) -> SubspaceJson {
    SubspaceJson {
        span: m.spanning_vectors().iter().map(|v| vec_strings(v)).collect(),
    }
}

pub fn decode_subspace(j: &SubspaceJson, ambient: usize) -> Result<Subspace> {
    let span: Vec<QVec> = j
        .span
        .iter()
        .map(|v| parse_vec(v, "subspace span"))
        .collect::<Result<_>>()?;
    Subspace::new(span, ambient)
}

impl InstanceFile {
    /// Parses JSON text, reporting the line and column on syntax errors.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Input(format!(
                "instance JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Pretty-prints the file with a trailing newline. Output is a pure
    /// function of the contents, so identical instances give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serialization");
        s.push('\n');
        s
    }

    /// Validates the schema tag, rebuilds certified geometry, and checks
    /// that every section agrees on the ambient dimension.
    pub fn decode(&self) -> Result<Instance> {
        if self.schema != SCHEMA {
            return Err(Error::Input(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            )));
        }
        let body = decode_body(&self.body)?;
        let basis = decode_basis(&self.lattice)?;
        let n = body.dim();
        if basis.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: basis.dim(),
                what: "lattice basis",
            });
        }
        let target = match &self.target {
            Some(t) => {
                let t = parse_vec(t, "target")?;
                if t.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        got: t.len(),
                        what: "target vector",
                    });
                }
                Some(t)
            }
            None => None,
        };
        let subspace = match &self.subspace {
            Some(s) => Some(decode_subspace(s, n)?),
            None => None,
        };
        let objective = match &self.objective {
            Some(o) => {
                let v = parse_vec(&o.v, "objective vector")?;
                if v.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        got: v.len(),
                        what: "objective vector",
                    });
                }
                let delta = parse_rat(&o.delta)
                    .map_err(|e| Error::Input(format!("objective delta: {e}")))?;
                Some((v, delta))
            }
            None => None,
        };
        Ok(Instance {
            body,
            basis,
            target,
            subspace,
            objective,
            params: self.params.clone(),
        })
    }
}

impl Instance {
    /// Re-encodes the instance for emission. Radii in the output are the
    /// freshly certified ones.
    pub fn encode(&self) -> InstanceFile {
        InstanceFile {
            schema: SCHEMA.to_string(),
            body: encode_body(&self.body),
            lattice: encode_basis(&self.basis),
            target: self.target.as_ref().map(|t| vec_strings(t)),
            subspace: self.subspace.as_ref().map(encode_subspace),
            objective: self.objective.as_ref().map(|(v, d)| ObjectiveJson {
                v: vec_strings(v),
                delta: format_rat(d),
            }),
            params: self.params.clone(),
        }
    }
}

/// Echo of the effective solver parameters inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_used: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_clamped: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_t: Option<f64>,
    pub config: SolverConfig,
}

/// Budget counters summarizing how much of the randomized machinery ran.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BudgetJson {
    /// Radius guesses in the outer geometric grid.
    pub guesses: usize,
    /// Guesses that hit the pair or stage budget without a survivor.
    pub exhausted_guesses: usize,
    /// Guesses whose sample count was clipped by the pair cap.
    pub capped_guesses: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_guesses: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip_calls: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// Estimated or overridden symmetry measure used for budgets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// Oracle cross-check embedded under --verify.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleJson {
    /// Exact optimum as a rational string.
    pub value: String,
    pub value_f64: f64,
    /// Solver value divided by the oracle value, when both are positive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Whether the solver answer satisfies its contract against the oracle.
    pub ok: bool,
    pub checked: String,
}

/// Machine-readable run summary printed by every CLI subcommand. Reports
/// with the same inputs, parameters, and seed are byte-identical; timing is
/// attached only on request because it breaks that guarantee.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    pub kind: String,
    pub status: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(String, String)>,
    pub params: ParamsEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

fn echo(cfg: &SolverConfig) -> ParamsEcho {
    ParamsEcho {
        eps: None,
        eps_used: None,
        eps_clamped: None,
        delta: None,
        exact_t: None,
        config: cfg.clone(),
    }
}

impl SolveReport {
    /// Wraps a SAP or SVP answer; `kind` names the subcommand.
    pub fn from_sap(kind: &str, report: &SapReport, cfg: &SolverConfig) -> Self {
        let exhausted = report.guesses.iter().filter(|g| g.budget_exhausted).count();
        let capped = report.guesses.iter().filter(|g| g.capped).count();
        SolveReport {
            schema: SCHEMA.to_string(),
            kind: kind.to_string(),
            status: "ok".to_string(),
            seed: report.seed,
            witness: Some(vec_strings(&report.witness.point)),
            value: Some(report.witness.gauge_f64),
            value_exact: Some(format_rat(&report.witness.gauge)),
            bracket: None,
            params: ParamsEcho {
                eps: Some(report.eps),
                ..echo(cfg)
            },
            budget: Some(BudgetJson {
                guesses: report.guesses.len(),
                exhausted_guesses: exhausted,
                capped_guesses: capped,
                gamma: Some(report.gamma),
                ..BudgetJson::default()
            }),
            oracle: None,
            timing_ms: None,
        }
    }

    pub fn from_cvp(report: &CvpReport, cfg: &SolverConfig) -> Self {
        let exhausted = report
            .guesses
            .iter()
            .filter(|g| g.budget_exhausted)
            .count();
        let inner = report.guesses.iter().map(|g| g.inner_guesses).sum();
        SolveReport {
            schema: SCHEMA.to_string(),
            kind: "cvp".to_string(),
            status: "ok".to_string(),
            seed: report.seed,
            witness: Some(vec_strings(&report.witness.point)),
            value: Some(report.witness.distance_f64),
            value_exact: Some(format_rat(&report.witness.distance)),
            bracket: None,
            params: ParamsEcho {
                eps: Some(report.eps_requested),
                eps_used: Some(report.eps_used),
                eps_clamped: Some(report.eps_clamped),
                exact_t: report.exact_t,
                ..echo(cfg)
            },
            budget: Some(BudgetJson {
                guesses: report.guesses.len(),
                exhausted_guesses: exhausted,
                capped_guesses: 0,
                inner_guesses: Some(inner),
                gamma: Some(report.gamma),
                ..BudgetJson::default()
            }),
            oracle: None,
            timing_ms: None,
        }
    }

    pub fn from_ip(result: &IpResult, eps: f64, cfg: &SolverConfig) -> Self {
        let status = match result.status {
            IpStatus::FoundInK => "found_in_k",
            IpStatus::FoundInBlowup => "found_in_blowup",
            IpStatus::Empty => "empty",
        };
        SolveReport {
            schema: SCHEMA.to_string(),
            kind: "ip-feasible".to_string(),
            status: status.to_string(),
            seed: result.seed,
            witness: result.point.as_ref().map(|p| vec_strings(p)),
            value: Some(result.blowup_gauge),
            value_exact: None,
            bracket: None,
            params: ParamsEcho {
                eps: Some(eps),
                ..echo(cfg)
            },
            budget: Some(BudgetJson {
                guesses: result.cvp.guesses.len(),
                exhausted_guesses: result
                    .cvp
                    .guesses
                    .iter()
                    .filter(|g| g.budget_exhausted)
                    .count(),
                capped_guesses: 0,
                inner_guesses: Some(result.cvp.guesses.iter().map(|g| g.inner_guesses).sum()),
                gamma: Some(result.cvp.gamma),
                ..BudgetJson::default()
            }),
            oracle: None,
            timing_ms: None,
        }
    }

    pub fn from_opt(result: &OptResult, eps: f64, delta: &Rat, cfg: &SolverConfig) -> Self {
        let status = match result.status {
            OptStatus::Solved => "solved",
            OptStatus::Empty => "empty",
        };
        SolveReport {
            schema: SCHEMA.to_string(),
            kind: "ip-optimize".to_string(),
            status: status.to_string(),
            seed: result.seed,
            witness: result.point.as_ref().map(|p| vec_strings(p)),
            value: result.value_f64,
            value_exact: result.value.as_ref().map(format_rat),
            bracket: result
                .bracket
                .as_ref()
                .map(|(l, u)| (format_rat(l), format_rat(u))),
            params: ParamsEcho {
                eps: Some(eps),
                delta: Some(format_rat(delta)),
                ..echo(cfg)
            },
            budget: Some(BudgetJson {
                guesses: 0,
                exhausted_guesses: 0,
                capped_guesses: 0,
                ip_calls: Some(result.ip_calls),
                iterations: Some(result.iterations),
                ..BudgetJson::default()
            }),
            oracle: None,
            timing_ms: None,
        }
    }

    /// Wraps a scalar estimate such as gamma; `witness` carries the point
    /// for barycenter runs.
    pub fn scalar(kind: &str, value: f64, seed: u64, cfg: &SolverConfig) -> Self {
        SolveReport {
            schema: SCHEMA.to_string(),
            kind: kind.to_string(),
            status: "ok".to_string(),
            seed,
            witness: None,
            value: Some(value),
            value_exact: None,
            bracket: None,
            params: echo(cfg),
            budget: None,
            oracle: None,
            timing_ms: None,
        }
    }

    /// Pretty-prints the report with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Attaches an oracle block comparing a solver value against the exact one.
/// `bound` is the allowed multiplicative excess (1 + eps); `ok` is exact
/// when both values are rational.
pub fn oracle_block(
    solver_value: &Rat,
    oracle_value: &Rat,
    bound: &Rat,
    checked: &str,
) -> OracleJson {
    let ok = solver_value >= oracle_value && solver_value <= &(oracle_value * bound);
    let ratio = if oracle_value.numer() != &num_bigint::BigInt::from(0) {
        Some(rational::rat_to_f64(&(solver_value / oracle_value)))
    } else {
        None
    };
    OracleJson {
        value: format_rat(oracle_value),
        value_f64: rational::rat_to_f64(oracle_value),
        ratio,
        ok,
        checked: checked.to_string(),
    }
}
