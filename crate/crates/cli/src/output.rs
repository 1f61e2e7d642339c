use qchan::discriminate::{DiscriminationResult, VerificationReport};
use qchan::json::{matrix_to_json, vector_to_json, JsonComplex, JsonMatrix, SCHEMA_VERSION};
use qchan::metrics::DiamondNorm;
use qchan::rankred::ReductionTrace;
use serde::Serialize;

#[derive(Serialize)]
pub struct DnormDoc {
    pub schema_version: u32,
    pub dnorm: f64,
    pub success_probability: f64,
    pub choi_rank: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<SolverTrace>,
}

#[derive(Serialize)]
pub struct SolverTrace {
    pub iterations: usize,
    pub gap: f64,
    pub upper_bound: Option<f64>,
    pub rho_a: JsonMatrix,
    pub rho_b: JsonMatrix,
}

impl DnormDoc {
    pub fn new(d: &DiamondNorm, verbose: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dnorm: d.value,
            success_probability: 0.5 + d.value / 4.0,
            choi_rank: d.choi_rank,
            converged: d.converged(),
            trace: d.fmax.as_ref().filter(|_| verbose).map(|f| SolverTrace {
                iterations: f.iterations,
                gap: f.gap,
                upper_bound: f.upper_bound,
                rho_a: matrix_to_json(f.rho_a.as_matrix()),
                rho_b: matrix_to_json(f.rho_b.as_matrix()),
            }),
        }
    }
}

#[derive(Serialize)]
pub struct MeasurementDoc {
    pub projector: JsonMatrix,
    pub success_probability: f64,
    pub trace_distance: f64,
}

#[derive(Serialize)]
pub struct VerificationDoc {
    pub passed: bool,
    pub trace_distance: f64,
    pub success_probability: f64,
    pub value_residual: f64,
    pub success_residual: f64,
}

#[derive(Serialize)]
pub struct DiscriminationDoc {
    pub schema_version: u32,
    pub input_vector: Vec<JsonComplex>,
    pub ancilla_dim: usize,
    pub achieved_value: f64,
    pub dnorm_value: f64,
    pub choi_rank_k: usize,
    pub fidelity_route_value: f64,
    pub fmax_converged: bool,
    pub measurement: MeasurementDoc,
    pub verification: VerificationDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<[ReductionTrace; 2]>,
}

impl DiscriminationDoc {
    pub fn new(r: &DiscriminationResult, v: &VerificationReport, verbose: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            input_vector: vector_to_json(r.input_vector.as_vector()),
            ancilla_dim: r.ancilla_dim,
            achieved_value: r.achieved_value,
            dnorm_value: r.dnorm_value,
            choi_rank_k: r.choi_rank_k,
            fidelity_route_value: r.diagnostics.fidelity_route_value,
            fmax_converged: r.diagnostics.fmax_converged,
            measurement: MeasurementDoc {
                projector: matrix_to_json(r.measurement.projector.as_matrix()),
                success_probability: r.measurement.success_probability,
                trace_distance: r.measurement.trace_distance,
            },
            verification: VerificationDoc {
                passed: v.passed,
                trace_distance: v.trace_distance,
                success_probability: v.success_probability,
                value_residual: v.value_residual,
                success_residual: v.success_residual,
            },
            reduction: r
                .diagnostics
                .reduction
                .clone()
                .filter(|_| verbose)
                .map(|(a, b)| [a, b]),
        }
    }
}

#[derive(Serialize)]
pub struct ExampleRow<'a> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: &'a qchan::examples::ExampleReport,
}

#[derive(Serialize)]
pub struct RankReduceDoc {
    pub schema_version: u32,
    pub rho_reduced: JsonMatrix,
    pub rank_before: usize,
    pub rank_after: usize,
    pub output_rank: usize,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<qchan::rankred::ReductionStep>>,
}

#[derive(Serialize)]
pub struct OracleDoc {
    pub schema_version: u32,
    pub brute_dnorm: f64,
    pub restarts: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_reference: Option<f64>,
}
