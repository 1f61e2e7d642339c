use qchan::channel::random::random_unitary_channel;
use qchan::channel::{Representation, SuperOp};
use qchan::examples::{pauli_pair, werner_holevo_pair};
use qchan::json::{self, ChannelDoc};
use qchan::ComplexMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn qchan() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qchan"))
}

fn run(args: &[&str]) -> Output {
    qchan().args(args).output().expect("spawn qchan")
}

fn write_channel(dir: &Path, name: &str, op: &SuperOp, repr: Representation) -> PathBuf {
    let path = dir.join(name);
    let text = json::to_string(&ChannelDoc::from_superop(op, repr)).unwrap();
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing numeric field {key} in {v}"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn pauli_files(dir: &Path) -> (PathBuf, PathBuf) {
    let (p0, p1) = pauli_pair();
    (
        write_channel(dir, "pauli0.json", &p0, Representation::Kraus),
        write_channel(dir, "pauli1.json", &p1, Representation::Kraus),
    )
}

#[test]
fn convert_identity_to_choi_has_rank_one() {
    let dir = TempDir::new().unwrap();
    let id = write_channel(dir.path(), "id.json", &SuperOp::identity(2), Representation::Kraus);
    let v = stdout_json(&run(&["convert", s(&id), "--to", "choi"]));
    assert_eq!(v["repr"], "choi");
    let op = json::parse_channel(&v.to_string()).unwrap();
    assert_eq!(op.choi_rank(1e-10), 1);
}

#[test]
fn convert_werner_choi_to_single_kraus_operator() {
    let dir = TempDir::new().unwrap();
    let (_, w1) = werner_holevo_pair(2).unwrap();
    let path = write_channel(dir.path(), "w1.json", &w1, Representation::Choi);
    let v = stdout_json(&run(&["convert", s(&path), "--to", "kraus"]));
    assert_eq!(v["repr"], "kraus");
    assert_eq!(v["data"].as_array().unwrap().len(), 1);
}

#[test]
fn convert_roundtrips_through_stinespring() {
    let dir = TempDir::new().unwrap();
    let (p0, _) = pauli_pair();
    let path = write_channel(dir.path(), "p.json", &p0, Representation::Kraus);
    let v = stdout_json(&run(&["convert", s(&path), "--to", "stinespring"]));
    let back = json::parse_channel(&v.to_string()).unwrap();
    let diff = back.choi().matrix() - p0.choi().matrix();
    assert!(qchan::numerics::max_abs(&diff) < 1e-12);
}

#[test]
fn convert_malformed_row_names_the_index() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"repr":"choi","dim_in":1,"dim_out":2,"data":[[[1,0],[0,0]],[[0,0]]]}"#,
    )
    .unwrap();
    let out = run(&["convert", s(&path), "--to", "kraus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1"), "{err}");
    assert!(err.contains("data"), "{err}");
}

#[test]
fn dnorm_pauli_pair() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pauli_files(dir.path());
    let v = stdout_json(&run(&["dnorm", s(&a), s(&b)]));
    assert!((num(&v, "dnorm") - 2.0).abs() <= 1e-4, "{v}");
    assert!((num(&v, "success_probability") - 1.0).abs() <= 1e-4, "{v}");
    assert_eq!(v["choi_rank"], 4);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn dnorm_identical_channels_is_zero() {
    let dir = TempDir::new().unwrap();
    let (a, _) = pauli_files(dir.path());
    let v = stdout_json(&run(&["dnorm", s(&a), s(&a)]));
    assert!(num(&v, "dnorm").abs() <= 1e-9, "{v}");
    assert!((num(&v, "success_probability") - 0.5).abs() <= 1e-9, "{v}");
}

#[test]
fn dnorm_werner_holevo_three() {
    let dir = TempDir::new().unwrap();
    let (w0, w1) = werner_holevo_pair(3).unwrap();
    let a = write_channel(dir.path(), "w0.json", &w0, Representation::Choi);
    let b = write_channel(dir.path(), "w1.json", &w1, Representation::Choi);
    let v = stdout_json(&run(&["dnorm", s(&a), s(&b)]));
    assert!((num(&v, "dnorm") - 2.0).abs() <= 1e-4, "{v}");
}

#[test]
fn dnorm_reads_pair_from_stdin() {
    use std::io::Write;
    let (p0, p1) = pauli_pair();
    let doc = format!(
        r#"{{"phi0":{},"phi1":{}}}"#,
        json::to_string(&ChannelDoc::from_superop(&p0, Representation::Kraus)).unwrap(),
        json::to_string(&ChannelDoc::from_superop(&p1, Representation::Choi)).unwrap()
    );
    let mut child = qchan()
        .args(["dnorm", "--stdin"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(doc.as_bytes()).unwrap();
    let v = stdout_json(&child.wait_with_output().unwrap());
    assert!((num(&v, "dnorm") - 2.0).abs() <= 1e-4);
}

#[test]
fn dnorm_rejects_non_channel() {
    let dir = TempDir::new().unwrap();
    let (a, _) = pauli_files(dir.path());
    let half = SuperOp::identity(2).scaled(0.5);
    let b = write_channel(dir.path(), "half.json", &half, Representation::Kraus);
    let out = run(&["dnorm", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn discriminate_pauli_writes_result_file() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pauli_files(dir.path());
    let out_path = dir.path().join("result.json");
    let out = run(&["discriminate", s(&a), s(&b), "--out", s(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["ancilla_dim"], 8);
    assert!((num(&v, "achieved_value") - 2.0).abs() <= 1e-3, "{v}");
    assert_eq!(v["verification"]["passed"], true);
    assert_eq!(v["input_vector"].as_array().unwrap().len(), 16);
}

#[test]
fn discriminate_zero_difference() {
    let dir = TempDir::new().unwrap();
    let (a, _) = pauli_files(dir.path());
    let v = stdout_json(&run(&["discriminate", s(&a), s(&a)]));
    assert!(num(&v, "achieved_value").abs() <= 1e-9, "{v}");
}

#[test]
fn discriminate_unitary_pair_matches_reference() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (_, u) = random_unitary_channel(3, &mut rng);
    let (_, v) = random_unitary_channel(3, &mut rng);
    let a = write_channel(dir.path(), "u.json", &u, Representation::Kraus);
    let b = write_channel(dir.path(), "v.json", &v, Representation::Kraus);
    let d = stdout_json(&run(&["discriminate", s(&a), s(&b)]));
    let o = stdout_json(&run(&["oracle", s(&a), s(&b)]));
    let reference = num(&o, "unitary_reference");
    assert!((num(&d, "achieved_value") - reference).abs() <= 2e-3, "{d} {o}");
    assert!((num(&o, "brute_dnorm") - reference).abs() <= 2e-3, "{o}");
}

#[test]
fn example_werner_rows_carry_bound() {
    let out = run(&["example", "--family", "werner", "--n", "3", "--k-list", "1,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for (row, k) in rows.iter().zip(1..) {
        assert_eq!(row["k"], k);
        let bound = qchan::examples::wh_upper_bound(3, k).unwrap();
        assert!((num(row, "upper_bound") - bound).abs() <= 1e-12);
        assert!(num(row, "ancilla_value_computed") <= bound + 1e-4, "{row}");
    }
}

#[test]
fn example_pauli_rows() {
    let out = run(&["example", "--family", "pauli"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((num(&rows[0], "ancilla_value_computed") - 4.0 / 3.0).abs() <= 1e-3);
    assert!((num(&rows[1], "ancilla_value_computed") - 2.0).abs() <= 1e-3);
}

#[test]
fn example_werner_n1_is_usage_error() {
    let out = run(&["example", "--family", "werner", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

fn write_density(dir: &Path, name: &str, rho: &ComplexMatrix) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json::to_string(&json::matrix_to_json(rho)).unwrap()).unwrap();
    path
}

fn mixed_state(n: usize) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(n, n);
    let total: f64 = (1..=n).map(|i| i as f64).sum();
    for i in 0..n {
        rho[(i, i)] = ((i + 1) as f64 / total).into();
    }
    rho
}

#[test]
fn rank_reduce_complementary_of_unitary() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (_, u) = random_unitary_channel(3, &mut rng);
    let (_, comp) = qchan::channel::complementary_pair(u.stinespring());
    let c = write_channel(dir.path(), "c.json", &comp, Representation::Kraus);
    let r = write_density(dir.path(), "rho.json", &mixed_state(3));
    let v = stdout_json(&run(&["rank-reduce", s(&c), s(&r)]));
    assert_eq!(v["rank_before"], 3);
    assert_eq!(v["rank_after"], 1);
    assert!(num(&v, "residual") <= 1e-7);
}

#[test]
fn rank_reduce_identity_leaves_state_unchanged() {
    let dir = TempDir::new().unwrap();
    let c = write_channel(dir.path(), "id.json", &SuperOp::identity(3), Representation::Kraus);
    let rho = mixed_state(3);
    let r = write_density(dir.path(), "rho.json", &rho);
    let v = stdout_json(&run(&["rank-reduce", s(&c), s(&r)]));
    assert_eq!(v["rank_after"], 3);
    let back = json::parse_density(&v["rho_reduced"].to_string()).unwrap();
    assert!(qchan::numerics::max_abs(&(back.as_matrix() - &rho)) <= 1e-12);
}

#[test]
fn rank_reduce_planted_low_rank_output() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (_, u) = random_unitary_channel(4, &mut rng);
    let proj = {
        let mut p = ComplexMatrix::zeros(4, 4);
        p[(0, 0)] = 1.0.into();
        p[(1, 1)] = 1.0.into();
        p
    };
    let keep = &proj * u.kraus().pairs()[0].0.clone();
    let rest = (ComplexMatrix::identity(4, 4) - &proj) * u.kraus().pairs()[0].0.clone();
    let op = SuperOp::from_cp_kraus(4, 4, vec![keep, rest]).unwrap();
    let c = write_channel(dir.path(), "c.json", &op, Representation::Kraus);
    let r = write_density(dir.path(), "rho.json", &mixed_state(4));
    let v = stdout_json(&run(&["rank-reduce", s(&c), s(&r)]));
    assert!(v["rank_after"].as_u64().unwrap() <= v["output_rank"].as_u64().unwrap(), "{v}");
    assert!(num(&v, "residual") <= 1e-7, "{v}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pauli_files(dir.path());
    for cmd in ["dnorm", "discriminate", "oracle"] {
        let first = run(&[cmd, s(&a), s(&b), "--seed", "7", "--restarts", "4"]);
        let second = run(&[cmd, s(&a), s(&b), "--seed", "7", "--restarts", "4", "--threads", "3"]);
        assert!(first.status.success(), "{cmd}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "{cmd}");
    }
}

#[test]
fn verbose_adds_trace() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pauli_files(dir.path());
    let plain = stdout_json(&run(&["dnorm", s(&a), s(&b)]));
    let verbose = stdout_json(&run(&["dnorm", s(&a), s(&b), "--verbose"]));
    assert!(plain.get("trace").is_none());
    assert!(verbose.get("trace").is_some(), "{verbose}");
}

#[test]
fn help_and_bad_flags() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["dnorm", "--help"]).status.code(), Some(0));
    assert_eq!(run(&["dnorm", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["dnorm", "/nonexistent/a.json", "/nonexistent/b.json"]).status.code(), Some(1));
}
