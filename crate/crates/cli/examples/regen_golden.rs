//! Regenerates the golden files under `crates/cli/golden/`.
//!
//! Usage: `cargo run --release -p unipred --example regen_golden [dir]`
//!
//! Golden files pin first-run outputs that later runs must reproduce
//! byte for byte. Regenerate only when an intentional change invalidates
//! them, and review the diff.

use std::path::PathBuf;

use unipred::config::AlgProbRoute;
use unipred::run::{run_algoprob, BodyFormat};
use unipred_core::bits::{Bit, FiniteString};
use unipred_core::hypotheses::{instantiate, HypothesisSpec};
use unipred_core::monovm::{AlgProbEngine, ResourceBound, DEFAULT_TABLE_DEPTH};
use unipred_core::sample::sample_sequence;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden"));
    std::fs::create_dir_all(&dir).expect("golden dir");

    // full algorithmic-probability table at the desk-scale default bound
    let bound = ResourceBound::desk_default();
    let table = run_algoprob(bound, DEFAULT_TABLE_DEPTH, BodyFormat::Csv, AlgProbRoute::default())
        .expect("table");
    std::fs::write(dir.join("algoprob_l18_s500_d8.csv"), table.body).expect("write table");

    // normalized next-bit prediction after three zeros, exact
    let engine = AlgProbEngine::new(bound);
    let x: FiniteString = "000".parse().unwrap();
    let prediction = engine.solomonoff_predict(&x, Bit::Zero);
    let normalized = prediction.normalized.expect("defined at 000");
    std::fs::write(dir.join("normalized_000_bit0.txt"), format!("{normalized}\n"))
        .expect("write normalized");

    // the documented generator's draw from Bernoulli(3/4), seed 42
    let truth = instantiate(&HypothesisSpec::Bernoulli { bias: "3/4".parse().unwrap() }).unwrap();
    let sampled = sample_sequence(&truth, 10, 42).unwrap();
    std::fs::write(dir.join("sample_bernoulli34_seed42_t10.txt"), format!("{sampled}\n"))
        .expect("write sample");

    println!("golden files written to {}", dir.display());
}
