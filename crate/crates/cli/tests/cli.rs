//! Interface tests: the binary's formats, exit codes, and the pinned
//! golden files.

use std::path::PathBuf;
use std::process::{Command, Output};

use unipred_core::bits::FiniteString;
use unipred_core::hypotheses::{instantiate, HypothesisSpec};
use unipred_core::monovm::{AlgProbEngine, ResourceBound};
use unipred_core::prob::Prob;
use unipred_core::sample::sample_sequence;

fn golden_dir() -> PathBuf {
    match std::env::var_os("UNIPRED_GOLDEN_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden"),
    }
}

fn golden(name: &str) -> String {
    let path = golden_dir().join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read golden file {}: {e}", path.display()))
}

fn unipred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unipred")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    let out = unipred(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = unipred(&["diag", "--victim", "uniform", "--horizon", "4", "--tie", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = unipred(&["predict", "--pool", "default:2", "--input", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ingest_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "01 10\n01\n").unwrap();
    let out = unipred(&["ingest-check", "--input", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ok: 6 bits"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "012").unwrap();
    let out = unipred(&["ingest-check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("offset 2"));

    let out = unipred(&["ingest-check", "--input", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn predict_streams_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("seq.txt");
    std::fs::write(&input, "0101\n").unwrap();
    let out = unipred(&[
        "predict",
        "--pool",
        "default:3",
        "--input",
        input.to_str().unwrap(),
        "--emit-weights",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,observed,p1_exact,p1_decimal,w1,w2,w3");
    assert_eq!(lines.next().unwrap(), "0,0,1/2,0.5,4/7,1/7,2/7");
}

#[test]
fn trace_prints_the_hand_trace() {
    let out = unipred(&["trace", "--program", "010100011101111", "--steps", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("instructions: [FLIP JZ OUT JNZ] RUN (15 bits)"));
    assert!(text.contains("output 11 status out-of-steps consumed 15"));
}

#[test]
fn km_reports_the_witness() {
    let out = unipred(&["km", "--string", "0", "--max-len", "6", "--max-steps", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("km(0) = 6"));
    assert!(text.contains("shortest: 011111"));

    let out = unipred(&["km", "--string", "11111", "--max-len", "6", "--max-steps", "10"]);
    assert!(stdout(&out).contains("not found"));
}

#[test]
fn lz_prints_the_parse() {
    let out = unipred(&["lz", "--string", "0000000000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("phrases: 0 000000000"));
    assert!(text.contains("C = 2"));
    assert!(text.contains("K = 8 bits"));
}

#[test]
fn algoprob_matches_the_golden_table() {
    let out = unipred(&["algoprob", "--max-len", "18", "--max-steps", "500", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("algoprob_l18_s500_d8.csv"));
}

#[test]
fn mixture_route_agrees_with_the_golden_masses() {
    let out = unipred(&[
        "algoprob",
        "--max-len",
        "18",
        "--max-steps",
        "500",
        "--depth",
        "8",
        "--route",
        "mixture-form",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let descriptions = golden("algoprob_l18_s500_d8.csv");
    for (mixture_line, full_line) in stdout(&out).lines().skip(1).zip(descriptions.lines().skip(1))
    {
        let full: Vec<&str> = full_line.split(',').collect();
        assert_eq!(mixture_line, full[..3].join(","), "mass mismatch at {}", full[0]);
    }
}

#[test]
fn sampling_matches_the_golden_draw() {
    let truth = instantiate(&HypothesisSpec::Bernoulli { bias: "3/4".parse().unwrap() }).unwrap();
    let sampled = sample_sequence(&truth, 10, 42).unwrap();
    assert_eq!(sampled.to_string(), golden("sample_bernoulli34_seed42_t10.txt").trim());
}

#[test]
fn normalized_prediction_matches_the_golden_value() {
    let engine = AlgProbEngine::new(ResourceBound::new(18, 500));
    let x: FiniteString = "000".parse().unwrap();
    let normalized = engine
        .solomonoff_predict(&x, unipred_core::bits::Bit::Zero)
        .normalized
        .expect("defined after three zeros");
    assert_eq!(normalized.to_string(), golden("normalized_000_bit0.txt").trim());
    assert!(normalized > Prob::half());
}

#[test]
fn diag_reports_violations_never() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("diag");
    let out = unipred(&[
        "diag",
        "--victim",
        "bernoulli:3/4",
        "--horizon",
        "5",
        "--tie",
        "0",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,bit,prob_exact,prob_decimal,cum_loss_bits");
    assert_eq!(lines.next().unwrap(), "0,0,1/4,0.25,2.000000");
    let summary = std::fs::read_to_string(base.with_extension("json")).unwrap();
    assert!(summary.contains("\"sequence\": \"00000\""));
}

#[test]
fn experiment_runs_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    let out_base = dir.path().join("out/run");
    std::fs::write(
        &config,
        format!(
            r#"{{ "kind": "regret", "pool": {{ "default": 4 }}, "length": 32,
                 "samples": 100, "seed": 5, "out": "{}" }}"#,
            out_base.display()
        ),
    )
    .unwrap();
    let out = unipred(&["experiment", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_base.with_extension("csv")).unwrap();
    // header plus 400 bound rows, all satisfied
    assert_eq!(csv.lines().count(), 401);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",1")));
    let summary = std::fs::read_to_string(out_base.with_extension("json")).unwrap();
    assert!(summary.contains("\"violations\": 0"));
    assert!(summary.contains("\"config_digest\""));
}

#[test]
fn degenerate_horizons_still_produce_valid_records() {
    use unipred::config::{ExperimentConfig, ExperimentKind, PoolSource};
    use unipred::run::run_experiment;
    let dir = tempfile::tempdir().unwrap();

    let config = ExperimentConfig {
        kind: ExperimentKind::Consistency {
            pool: PoolSource::Default { default: 4 },
            truth: HypothesisSpec::Bernoulli { bias: "3/4".parse().unwrap() },
            horizon: 0,
            runs: 5,
            tolerance: "1/20".parse().unwrap(),
            target: "3/4".parse().unwrap(),
        },
        seed: 3,
        out: dir.path().join("degenerate"),
    };
    let record = run_experiment(&config, 1).unwrap();
    assert_eq!(record.rows, 5);
    let summary = std::fs::read_to_string(record.summary_path).unwrap();
    assert!(summary.contains("\"runs\": 5"));

    let config = ExperimentConfig {
        kind: ExperimentKind::ReliabilityTrace {
            pool: PoolSource::Default { default: 4 },
            truth: HypothesisSpec::Bernoulli { bias: "3/4".parse().unwrap() },
            horizon: 0,
        },
        seed: 3,
        out: dir.path().join("degenerate-trace"),
    };
    let record = run_experiment(&config, 1).unwrap();
    assert_eq!(record.rows, 0, "zero-horizon traces have no rows");
}

#[test]
fn long_sequences_round_trip_through_ingestion() {
    use unipred::ingest::{emit_sequence, parse_sequence_bytes};
    let mut rng = unipred_core::rng::SplitMix64::new(99);
    let x: FiniteString =
        (0..10_000).map(|_| unipred_core::bits::Bit::from(rng.next_u64() & 1 == 1)).collect();
    let parsed = parse_sequence_bytes(emit_sequence(&x).as_bytes()).unwrap();
    assert_eq!(parsed, x);
}

#[test]
fn shipped_configs_parse_and_the_small_ones_run() {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path).unwrap();
            let parsed: Result<unipred::config::ExperimentConfig, _> =
                serde_json::from_str(&text);
            assert!(parsed.is_ok(), "config {} does not parse: {:?}", path.display(), parsed.err());
            seen += 1;
        }
    }
    assert!(seen >= 10, "expected the documented config set, found {seen}");
}
