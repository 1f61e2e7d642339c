use crate::args::{Cli, Command, Common, FamilyArg, Repr};
use crate::output::{DiscriminationDoc, DnormDoc, ExampleRow, OracleDoc, RankReduceDoc};
use qchan::channel::Representation;
use qchan::examples::Family;
use qchan::json::{self, ChannelDoc, SCHEMA_VERSION};
use qchan::metrics::SolverOptions;
use qchan::{DensityMatrix, Error, SuperOp};
use serde::Deserialize;
use serde_json::value::RawValue;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 1 }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 2 }
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::NonFinite => Self::numerical(e.to_string()),
            _ => Self::usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn options(c: &Common, default_restarts: usize) -> Result<SolverOptions> {
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(CliError::usage("--tol must be a positive number"));
    }
    if c.threads == 0 {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    Ok(SolverOptions {
        tol: c.tol,
        max_iters: c.max_iters,
        restarts: c.restarts.unwrap_or(default_restarts),
        seed: c.seed,
        threads: c.threads,
        ..SolverOptions::default()
    })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::usage(format!("stdin: {e}")))?;
    Ok(s)
}

fn with_context<T>(what: &str, r: qchan::Result<T>) -> Result<T> {
    r.map_err(|e| {
        let code = CliError::from(e);
        CliError { message: format!("{what}: {}", code.message), code: code.code }
    })
}

fn channel_from_path(path: &Path) -> Result<SuperOp> {
    with_context(&path.display().to_string(), json::parse_channel(&read_file(path)?))
}

fn required<'a>(p: &'a Option<PathBuf>, name: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| CliError::usage(format!("missing <{name}> argument (or use --stdin)")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput<'a> {
    #[serde(borrow)]
    phi0: &'a RawValue,
    #[serde(borrow)]
    phi1: &'a RawValue,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduceInput<'a> {
    #[serde(borrow)]
    channel: &'a RawValue,
    #[serde(borrow)]
    rho: &'a RawValue,
}

fn channel_pair(c: &Common, phi0: &Option<PathBuf>, phi1: &Option<PathBuf>) -> Result<(SuperOp, SuperOp)> {
    if c.stdin {
        let text = read_stdin()?;
        let doc: PairInput = with_context("stdin", json::from_str_with_path(&text))?;
        return Ok((
            with_context("phi0", json::parse_channel(doc.phi0.get()))?,
            with_context("phi1", json::parse_channel(doc.phi1.get()))?,
        ));
    }
    Ok((
        channel_from_path(required(phi0, "PHI0")?)?,
        channel_from_path(required(phi1, "PHI1")?)?,
    ))
}

fn emit(c: &Common, lines: &[String]) -> Result<()> {
    let mut text = String::new();
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    match &c.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::usage(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(json::to_string(value)?)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Convert { input, to, common } => {
            let op = if common.stdin {
                with_context("stdin", json::parse_channel(&read_stdin()?))?
            } else {
                channel_from_path(required(input, "INPUT")?)?
            };
            let repr = match to {
                Repr::Kraus => Representation::Kraus,
                Repr::Choi => Representation::Choi,
                Repr::Stinespring => Representation::Stinespring,
            };
            emit(common, &[to_json(&ChannelDoc::from_superop(&op, repr))?])
        }
        Command::Dnorm { phi0, phi1, common } => {
            let opts = options(common, 16)?;
            let (p0, p1) = channel_pair(common, phi0, phi1)?;
            check_admissible("phi0", &p0)?;
            check_admissible("phi1", &p1)?;
            let delta = p0.difference_with_tol(&p1, opts.rank_tol)?;
            let d = qchan::metrics::dnorm_detailed(&delta, &opts)?;
            if !d.converged() {
                return Err(CliError::numerical(format!(
                    "fidelity solver did not converge (best value {})",
                    d.value
                )));
            }
            emit(common, &[to_json(&DnormDoc::new(&d, common.verbose))?])
        }
        Command::Discriminate { phi0, phi1, common } => {
            let opts = options(common, 16)?;
            let (p0, p1) = channel_pair(common, phi0, phi1)?;
            let r = qchan::discriminate::optimal_input(&p0, &p1, &opts)?;
            let v = qchan::discriminate::verify(&r, &p0, &p1)?;
            if !r.diagnostics.fmax_converged {
                return Err(CliError::numerical("fidelity solver did not converge"));
            }
            if r.diagnostics.route_mismatch {
                return Err(CliError::numerical(format!(
                    "fidelity value {} and recomputed trace norm {} disagree",
                    r.dnorm_value, r.diagnostics.fidelity_route_value
                )));
            }
            if !v.passed {
                return Err(CliError::numerical("recomputation of the result failed verification"));
            }
            emit(common, &[to_json(&DiscriminationDoc::new(&r, &v, common.verbose))?])
        }
        Command::Example { family, n, k_list, common } => {
            let opts = options(common, 16)?;
            let family = match family {
                FamilyArg::Werner => Family::Werner,
                FamilyArg::Pauli => Family::Pauli,
            };
            let ks: Vec<usize> = if k_list.is_empty() { (1..=*n).collect() } else { k_list.clone() };
            let rows = qchan::examples::run_example_sweep(family, *n, &ks, &opts)?;
            let lines = rows
                .iter()
                .map(|r| to_json(&ExampleRow { schema_version: SCHEMA_VERSION, report: r }))
                .collect::<Result<Vec<_>>>()?;
            emit(common, &lines)
        }
        Command::RankReduce { channel, rho, common } => {
            let (op, state) = if common.stdin {
                let text = read_stdin()?;
                let doc: ReduceInput = with_context("stdin", json::from_str_with_path(&text))?;
                (
                    with_context("channel", json::parse_channel(doc.channel.get()))?,
                    with_context("rho", json::parse_density(doc.rho.get()))?,
                )
            } else {
                let rho_path = required(rho, "RHO")?;
                (
                    channel_from_path(required(channel, "CHANNEL")?)?,
                    with_context(&rho_path.display().to_string(), json::parse_density(&read_file(rho_path)?))?,
                )
            };
            let (reduced, trace) = qchan::rankred::reduce_preimage(&op, &state)?;
            emit(common, &[to_json(&reduce_doc(&reduced, trace, common.verbose))?])
        }
        Command::Oracle { phi0, phi1, common } => {
            let opts = options(common, qchan::oracle::DEFAULT_RESTARTS)?;
            let (p0, p1) = channel_pair(common, phi0, phi1)?;
            let delta = p0.difference_with_tol(&p1, opts.rank_tol)?;
            let value = qchan::oracle::brute_dnorm(&delta, opts.restarts, opts.seed)?;
            let unitary_reference = match (single_unitary(&p0), single_unitary(&p1)) {
                (Some(u), Some(v)) => Some(qchan::oracle::unitary_pair_reference(&u, &v)?),
                _ => None,
            };
            emit(
                common,
                &[to_json(&OracleDoc {
                    schema_version: SCHEMA_VERSION,
                    brute_dnorm: value,
                    restarts: opts.restarts,
                    seed: opts.seed,
                    unitary_reference,
                })?],
            )
        }
    }
}

fn check_admissible(name: &str, op: &SuperOp) -> Result<()> {
    if op.is_admissible() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{name} is not a channel (completely positive and trace preserving)")))
    }
}

fn reduce_doc(rho: &DensityMatrix, trace: qchan::rankred::ReductionTrace, verbose: bool) -> RankReduceDoc {
    RankReduceDoc {
        schema_version: SCHEMA_VERSION,
        rho_reduced: json::matrix_to_json(rho.as_matrix()),
        rank_before: trace.rank_before,
        rank_after: trace.rank_after,
        output_rank: trace.output_rank,
        residual: trace.residual,
        steps: verbose.then_some(trace.steps),
    }
}

/// The unitary of a channel given by one unitary Kraus operator.
fn single_unitary(op: &SuperOp) -> Option<qchan::ComplexMatrix> {
    let k = op.kraus();
    if k.len() != 1 || !k.cp_symmetric() || op.dim_in() != op.dim_out() {
        return None;
    }
    let u = &k.pairs()[0].0;
    let n = op.dim_in();
    let defect = u.adjoint() * u - qchan::ComplexMatrix::identity(n, n);
    (qchan::numerics::max_abs(&defect) <= 1e-9).then(|| u.clone())
}
