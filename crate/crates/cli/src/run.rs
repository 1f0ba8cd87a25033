//! Experiment runners and report generation.
//!
//! Every runner produces a [`RunOutput`]: a CSV body whose bytes are a
//! pure function of the configuration and seed (thread count must not
//! matter), a JSON summary, and a count of invariant violations
//! detected. Violations are findings, not errors: the run completes and
//! the process exit code reports them.

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use unipred_core::bits::{Bit, FiniteString};
use unipred_core::diagonal::anti_limit_sequence;
use unipred_core::hypotheses::{instantiate, HypothesisPool, HypothesisSpec};
use unipred_core::lzprior::{lz76_parse, lz_complexity};
use unipred_core::mixture::{AggregatorState, MixtureMeasure};
use unipred_core::monovm::{mixture_form_table, AlgProbEngine, ResourceBound};
use unipred_core::predictor::ExactApproximation;
use unipred_core::prob::{log2_f64, Prob};
use unipred_core::rng::{stream_seeds, SplitMix64};
use unipred_core::sample::{reliability_trace, sample_sequence, ReliabilityStatus};
use unipred_core::scoring::verify_optimality_bound;

use crate::config::{AlgProbRoute, ExperimentConfig, ExperimentKind, RunRecord, ARTIFACT_VERSION};
use crate::fmt::{bits_cell, prob_cell};
use crate::victims::parse_victim;

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// The report body: CSV unless a JSON body was requested.
    pub body: String,
    pub summary: Value,
    pub violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyFormat {
    Csv,
    Json,
}

fn count_rows(body: &str) -> usize {
    body.lines().count().saturating_sub(1)
}

/// Sequential Bayes prediction along an observed sequence.
pub fn run_predict(
    pool: &HypothesisPool,
    input: &FiniteString,
    emit_weights: bool,
) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let mut state = AggregatorState::new(mix)?;
    let mut body = String::from("t,observed,p1_exact,p1_decimal");
    if emit_weights {
        for i in 1..=pool.len() {
            body.push_str(&format!(",w{i}"));
        }
    }
    body.push('\n');
    for (t, observed) in input.iter().enumerate() {
        let p_one = state.predict(Bit::One).context("aggregator prediction failed")?;
        state = state.update(observed).context("aggregator update failed")?;
        body.push_str(&format!("{t},{observed},{}", prob_cell(&p_one)));
        if emit_weights {
            for w in state.posterior() {
                body.push_str(&format!(",{w}"));
            }
        }
        body.push('\n');
    }
    let final_p1 = state.predict(Bit::One).context("aggregator prediction failed")?;
    let summary = json!({
        "steps": input.len(),
        "final_p1": final_p1.to_string(),
        "final_p1_decimal": final_p1.decimal(crate::fmt::DECIMAL_DIGITS),
        "posterior": state.posterior().iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    Ok(RunOutput { body, summary, violations: 0 })
}

fn uniform_string(seed: u64, length: usize) -> FiniteString {
    let mut rng = SplitMix64::new(seed);
    (0..length).map(|_| Bit::from(rng.next_u64() & 1 == 1)).collect()
}

/// Regret-bound rows for every member on seeded uniform strings.
pub fn run_regret(
    pool: &HypothesisPool,
    length: usize,
    samples: usize,
    seed: u64,
) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let seeds = stream_seeds(seed, samples);
    let sample_rows: Vec<(String, usize)> = seeds
        .par_iter()
        .enumerate()
        .map(|(sample, &sample_seed)| {
            let x = uniform_string(sample_seed, length);
            let mut rows = String::new();
            let mut violations = 0usize;
            for i in 0..mix.len() {
                let verdict = verify_optimality_bound(&mix, i, &x);
                let satisfied = verdict.holds();
                if !satisfied {
                    violations += 1;
                }
                let weight = &mix.weights()[i];
                let member_mass = mix.member_mass(i, &x);
                let regret_bits = if member_mass.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    // L_mix - L_i = log2(m_i(x) / xi(x))
                    log2_f64(&(member_mass.ratio() / verdict.check.mixture_mass.ratio()))
                };
                rows.push_str(&format!(
                    "{sample},{},{},{},{}\n",
                    i + 1,
                    bits_cell(weight.neg_log2()),
                    bits_cell(regret_bits),
                    u8::from(satisfied),
                ));
            }
            (rows, violations)
        })
        .collect();
    let mut body = String::from("sample,member,neg_log2_weight,regret_bits,bound_satisfied\n");
    let mut violations = 0;
    for (rows, v) in sample_rows {
        body.push_str(&rows);
        violations += v;
    }
    let summary = json!({
        "samples": samples,
        "length": length,
        "members": mix.len(),
        "bound_rows": samples * mix.len(),
    });
    Ok(RunOutput { body, summary, violations })
}

/// A diagonal-adversary trace against a victim.
pub fn run_diag(victim_token: &str, horizon: usize, tie: Bit) -> Result<RunOutput> {
    let victim = parse_victim(victim_token)?;
    let trace = unipred_core::diagonal::putnam_sequence(&*victim.predictor, horizon, tie);
    let mut body = String::from("t,bit,prob_exact,prob_decimal,cum_loss_bits\n");
    let mut cumulative = Prob::one();
    let half = Prob::half();
    let mut violations = 0usize;
    for (t, (bit, prob)) in trace.sequence.iter().zip(trace.probs.iter()).enumerate() {
        if prob > &half {
            violations += 1;
        }
        cumulative = &cumulative * prob;
        body.push_str(&format!(
            "{t},{bit},{},{}\n",
            prob_cell(prob),
            bits_cell(cumulative.neg_log2()),
        ));
    }
    let summary = json!({
        "victim": victim.name,
        "status": format!("{:?}", trace.status),
        "sequence": trace.sequence.to_string(),
        "steps": trace.probs.len(),
        "total_loss_bits": bits_cell(trace.victim_loss().bits_f64()),
    });
    Ok(RunOutput { body, summary, violations })
}

/// The algorithmic-probability table at a bound, with its semi-measure
/// inequalities re-checked row by row. The mixture-form route carries no
/// description data, so its rows are just string and mass.
pub fn run_algoprob(
    bound: ResourceBound,
    depth: usize,
    format: BodyFormat,
    route: AlgProbRoute,
) -> Result<RunOutput> {
    // (string, mass, km, descriptions) in shortlex order
    let (rows, machines) = match route {
        AlgProbRoute::Descriptions => {
            let engine = AlgProbEngine::new(bound);
            let n = engine.machines().len();
            let rows: Vec<(FiniteString, Prob, Option<usize>, Option<usize>)> = engine
                .table(depth)
                .rows()
                .iter()
                .map(|r| (r.string.clone(), r.mass.clone(), r.km, Some(r.descriptions)))
                .collect();
            (rows, n)
        }
        AlgProbRoute::MixtureForm => {
            let rows = mixture_form_table(bound, depth)
                .into_iter()
                .map(|(string, mass)| (string, mass, None, None))
                .collect();
            (rows, 0)
        }
    };

    let index_of = |y: &FiniteString| (1usize << y.len()) - 1 + y.to_index() as usize;
    let mut violations = 0usize;
    for (string, mass, _, _) in &rows {
        if string.len() < depth {
            let zero = &rows[index_of(&string.extended(Bit::Zero))].1;
            let one = &rows[index_of(&string.extended(Bit::One))].1;
            if zero.ratio() + one.ratio() > *mass.ratio() {
                violations += 1;
            }
        }
    }

    let km_cell = |km: &Option<usize>| km.map_or_else(|| "-".to_string(), |k| k.to_string());
    let with_descriptions = route == AlgProbRoute::Descriptions;
    let body = match format {
        BodyFormat::Csv => {
            let mut body = String::from("y,algprob_exact,algprob_decimal");
            if with_descriptions {
                body.push_str(",km,descriptions");
            }
            body.push('\n');
            for (string, mass, km, descriptions) in &rows {
                body.push_str(&format!("{string},{}", prob_cell(mass)));
                if with_descriptions {
                    body.push_str(&format!(",{},{}", km_cell(km), descriptions.unwrap_or(0)));
                }
                body.push('\n');
            }
            body
        }
        BodyFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(string, mass, km, descriptions)| {
                    let mut row = json!({
                        "y": string.to_string(),
                        "algprob": mass.to_string(),
                        "algprob_decimal": mass.decimal(crate::fmt::DECIMAL_DIGITS),
                    });
                    if with_descriptions {
                        row["km"] = json!(km);
                        row["descriptions"] = json!(descriptions);
                    }
                    row
                })
                .collect();
            let doc = json!({
                "max_len": bound.max_program_len,
                "max_steps": bound.max_steps,
                "depth": depth,
                "rows": rows,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
            text.push('\n');
            text
        }
    };
    let summary = json!({
        "max_len": bound.max_program_len,
        "max_steps": bound.max_steps,
        "depth": depth,
        "route": match route {
            AlgProbRoute::Descriptions => "descriptions",
            AlgProbRoute::MixtureForm => "mixture-form",
        },
        "machines": machines,
        "semimeasure_violations": violations,
    });
    Ok(RunOutput { body, summary, violations })
}

/// The regret bound on every string up to `max_len`, exhaustively.
pub fn run_bound_exhaustive(pool: &HypothesisPool, max_len: usize) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let mut body = String::from("string,member,mixture_exact,floor_exact,satisfied\n");
    let mut violations = 0usize;
    for x in unipred_core::bits::strings_up_to(max_len) {
        let masses: Vec<Prob> = (0..mix.len()).map(|i| mix.member_mass(i, &x)).collect();
        let mixture: Prob =
            masses.iter().zip(mix.weights()).map(|(m, w)| w * m).sum();
        for (i, mass) in masses.iter().enumerate() {
            let floor = &mix.weights()[i] * mass;
            let satisfied = mixture >= floor;
            if !satisfied {
                violations += 1;
            }
            body.push_str(&format!(
                "{x},{},{mixture},{floor},{}\n",
                i + 1,
                u8::from(satisfied),
            ));
        }
    }
    let summary = json!({
        "max_len": max_len,
        "members": mix.len(),
        "strings": (1usize << (max_len + 1)) - 1,
    });
    Ok(RunOutput { body, summary, violations })
}

/// Aggregator-vs-mixture prediction identity along seeded strings.
pub fn run_identity(
    pool: &HypothesisPool,
    length: usize,
    samples: usize,
    seed: u64,
) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let seeds = stream_seeds(seed, samples);
    let results: Vec<Result<(String, usize)>> = seeds
        .par_iter()
        .enumerate()
        .map(|(sample, &sample_seed)| {
            let x = uniform_string(sample_seed, length);
            let mut state = AggregatorState::new(mix.clone())?;
            let mut rows = String::new();
            let mut mismatches = 0usize;
            for (t, observed) in x.iter().enumerate() {
                let mut equal = true;
                let mut shown = None;
                for b in Bit::BOTH {
                    let aggregate = state.predict(b)?;
                    let mixture = mix
                        .predict(state.history(), b)
                        .expect("pool mixture is positive along sampled strings");
                    equal &= aggregate == mixture;
                    if b == Bit::One {
                        shown = Some((aggregate, mixture));
                    }
                }
                if !equal {
                    mismatches += 1;
                }
                let (aggregate, mixture) = shown.expect("both bits evaluated");
                rows.push_str(&format!(
                    "{sample},{t},{aggregate},{mixture},{}\n",
                    u8::from(equal)
                ));
                state = state.update(observed)?;
            }
            Ok((rows, mismatches))
        })
        .collect();
    let mut body = String::from("sample,t,aggregate_p1_exact,mixture_p1_exact,equal\n");
    let mut violations = 0usize;
    for result in results {
        let (rows, mismatches) = result?;
        body.push_str(&rows);
        violations += mismatches;
    }
    let summary = json!({
        "samples": samples,
        "length": length,
        "mismatches": violations,
    });
    Ok(RunOutput { body, summary, violations })
}

/// The block adversary against the exact approximant of a victim.
pub fn run_anti_limit(
    victim_token: &str,
    block_budget: u64,
    max_blocks: usize,
) -> Result<RunOutput> {
    let victim = parse_victim(victim_token)?;
    let approximant = ExactApproximation(&*victim.predictor);
    let trace = anti_limit_sequence(&approximant, block_budget, max_blocks);

    let mut body = String::from("block,run_of_ones,witness_exact,witness_decimal,sequence_len\n");
    let half = Prob::half();
    let mut violations = 0usize;
    let mut previous_end = 0usize;
    for (block, (&end, witness)) in trace.blocks.iter().zip(trace.probs.iter()).enumerate() {
        // the block is 1^t 0, so the run length is everything but the 0
        let run = end - previous_end - 1;
        if witness <= &half {
            violations += 1;
        }
        body.push_str(&format!("{block},{run},{},{end}\n", prob_cell(witness)));
        previous_end = end;
    }
    let summary = json!({
        "victim": victim.name,
        "status": format!("{:?}", trace.status),
        "sequence": trace.sequence.to_string(),
        "blocks": trace.blocks.len(),
    });
    Ok(RunOutput { body, summary, violations })
}

/// LZ complexity next to algorithmic probability for a fixed string set.
pub fn run_lz_compare(
    strings: &[FiniteString],
    bound: ResourceBound,
) -> Result<RunOutput> {
    let engine = AlgProbEngine::new(bound);
    let entries: Vec<(FiniteString, usize, usize, Prob)> = strings
        .iter()
        .map(|x| {
            let parse = lz76_parse(x);
            (x.clone(), parse.phrase_count(), lz_complexity(x), engine.algprob(x))
        })
        .collect();

    // rank 1 = simplest under the LZ prior / most probable under algprob
    let mut lz_order: Vec<usize> = (0..entries.len()).collect();
    lz_order.sort_by(|&a, &b| entries[a].2.cmp(&entries[b].2).then(a.cmp(&b)));
    let mut alg_order: Vec<usize> = (0..entries.len()).collect();
    alg_order.sort_by(|&a, &b| entries[b].3.cmp(&entries[a].3).then(a.cmp(&b)));
    let mut lz_rank = vec![0usize; entries.len()];
    let mut alg_rank = vec![0usize; entries.len()];
    for (rank, &i) in lz_order.iter().enumerate() {
        lz_rank[i] = rank + 1;
    }
    for (rank, &i) in alg_order.iter().enumerate() {
        alg_rank[i] = rank + 1;
    }

    let mut body =
        String::from("string,lz_phrases,lz_bits,lz_rank,algprob_exact,algprob_decimal,algprob_rank\n");
    for (i, (x, phrases, bits, mass)) in entries.iter().enumerate() {
        body.push_str(&format!(
            "{x},{phrases},{bits},{},{},{}\n",
            lz_rank[i],
            prob_cell(mass),
            alg_rank[i],
        ));
    }
    let summary = json!({
        "strings": entries.len(),
        "max_len": bound.max_program_len,
        "max_steps": bound.max_steps,
    });
    Ok(RunOutput { body, summary, violations: 0 })
}

/// Seeded posterior-concentration runs.
#[allow(clippy::too_many_arguments)]
pub fn run_consistency(
    pool: &HypothesisPool,
    truth: &HypothesisSpec,
    horizon: usize,
    runs: usize,
    tolerance: &Prob,
    target: &Prob,
    seed: u64,
) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let truth = instantiate(truth)?;
    let seeds = stream_seeds(seed, runs);
    let results: Vec<Result<(String, bool)>> = seeds
        .par_iter()
        .enumerate()
        .map(|(run, &run_seed)| {
            let x = sample_sequence(&truth, horizon, run_seed)?;
            let state = AggregatorState::new(mix.clone())?.observe_all(&x)?;
            let final_p1 = state.predict(Bit::One)?;
            let err = final_p1.abs_diff(target);
            let within = &err <= tolerance;
            let row = format!(
                "{run},{run_seed},{},{err},{}\n",
                prob_cell(&final_p1),
                u8::from(within),
            );
            Ok((row, within))
        })
        .collect();

    let mut body = String::from("run,seed,final_p1_exact,final_p1_decimal,abs_err_exact,within\n");
    let mut hits = 0usize;
    for result in results {
        let (row, within) = result?;
        body.push_str(&row);
        if within {
            hits += 1;
        }
    }
    let summary = json!({
        "runs": runs,
        "horizon": horizon,
        "target": target.to_string(),
        "tolerance": tolerance.to_string(),
        "hits": hits,
    });
    Ok(RunOutput { body, summary, violations: 0 })
}

/// Per-step error of the pool predictor against a sampled truth.
pub fn run_reliability(
    pool: &HypothesisPool,
    truth: &HypothesisSpec,
    horizon: usize,
    seed: u64,
) -> Result<RunOutput> {
    let mix = MixtureMeasure::new(pool)?;
    let truth = instantiate(truth)?;
    let trace = reliability_trace(&mix.predictor(), &truth, horizon, seed)?;
    let mut body =
        String::from("t,observed,predicted_p1_exact,true_p1_exact,abs_err_exact,abs_err_decimal\n");
    for row in &trace.rows {
        body.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.t,
            row.observed,
            row.predicted_one,
            row.true_one,
            row.abs_err,
            row.abs_err.decimal(crate::fmt::DECIMAL_DIGITS),
        ));
    }
    let status = match trace.status {
        ReliabilityStatus::Completed => "completed".to_string(),
        ReliabilityStatus::PredictorUndefined { step } => format!("predictor-undefined at {step}"),
    };
    let summary = json!({
        "horizon": horizon,
        "status": status,
        "final_abs_err": trace.final_error().map(ToString::to_string),
    });
    Ok(RunOutput { body, summary, violations: 0 })
}

fn dispatch(config: &ExperimentConfig) -> Result<RunOutput> {
    match &config.kind {
        ExperimentKind::Consistency { pool, truth, horizon, runs, tolerance, target } => {
            run_consistency(&pool.load()?, truth, *horizon, *runs, tolerance, target, config.seed)
        }
        ExperimentKind::Regret { pool, length, samples } => {
            run_regret(&pool.load()?, *length, *samples, config.seed)
        }
        ExperimentKind::BoundExhaustive { pool, max_len } => {
            run_bound_exhaustive(&pool.load()?, *max_len)
        }
        ExperimentKind::Identity { pool, length, samples } => {
            run_identity(&pool.load()?, *length, *samples, config.seed)
        }
        ExperimentKind::Diagonal { victim, horizon, tie } => {
            let tie = if *tie == 0 { Bit::Zero } else { Bit::One };
            run_diag(victim, *horizon, tie)
        }
        ExperimentKind::AntiLimit { victim, block_budget, max_blocks } => {
            run_anti_limit(victim, *block_budget, *max_blocks)
        }
        ExperimentKind::Algoprob { max_len, max_steps, depth, route } => {
            run_algoprob(ResourceBound::new(*max_len, *max_steps), *depth, BodyFormat::Csv, *route)
        }
        ExperimentKind::LzCompare { strings, max_len, max_steps } => {
            run_lz_compare(strings, ResourceBound::new(*max_len, *max_steps))
        }
        ExperimentKind::ReliabilityTrace { pool, truth, horizon } => {
            run_reliability(&pool.load()?, truth, *horizon, config.seed)
        }
    }
}

/// Runs one experiment inside a thread pool of the given size (0 uses
/// the library default) and writes `<out>.csv` and `<out>.json`.
pub fn run_experiment(config: &ExperimentConfig, threads: usize) -> Result<RunRecord> {
    let started = std::time::Instant::now();
    let output = if threads == 0 {
        dispatch(config)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("cannot build thread pool")?;
        pool.install(|| dispatch(config))?
    };

    let digest = config.digest();
    let csv_path = config.out.with_extension("csv");
    let summary_path = config.out.with_extension("json");
    if let Some(parent) = csv_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    std::fs::write(&csv_path, &output.body)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;

    let summary = json!({
        "artifact_version": ARTIFACT_VERSION,
        "kind": config.kind.name(),
        "config_digest": digest,
        "seed": config.seed,
        "violations": output.violations,
        "report": output.summary,
        "wall_clock_ms": started.elapsed().as_millis() as u64,
    });
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_text.push('\n');
    std::fs::write(&summary_path, summary_text)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;

    Ok(RunRecord {
        config_digest: digest,
        rows: count_rows(&output.body),
        csv_path,
        summary_path,
        violations: output.violations,
    })
}
