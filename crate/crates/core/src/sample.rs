//! Seeded sampling from measures, and predictor-vs-truth error traces.
//!
//! Bits are drawn by exact threshold comparison: a 64-bit draw `k` is read
//! as the rational `k / 2^64` and compared against the conditional
//! probability of a one, so sampling never rounds.

use num::BigInt;
use thiserror::Error;

use crate::bits::{Bit, FiniteString};
use crate::measure::{conditional, Measure};
use crate::predictor::SemiPredictor;
use crate::prob::Prob;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("conditional undefined at step {step} while sampling (prefix {prefix})")]
    UndefinedConditional { step: usize, prefix: FiniteString },
}

fn draw_bit(rng: &mut SplitMix64, p_one: &Prob) -> Bit {
    let k = rng.next_u64();
    // bit = 1 iff k / 2^64 < p, i.e. k * den < num * 2^64
    let lhs = BigInt::from(k) * p_one.ratio().denom();
    let rhs: BigInt = p_one.ratio().numer() << 64;
    Bit::from(lhs < rhs)
}

/// Draws a length-`len` sequence from a full measure.
pub fn sample_sequence<M: Measure + ?Sized>(
    m: &M,
    len: usize,
    seed: u64,
) -> Result<FiniteString, SampleError> {
    let mut rng = SplitMix64::new(seed);
    let mut x = FiniteString::empty();
    for step in 0..len {
        let p_one = conditional(m, &x, Bit::One)
            .ok_or_else(|| SampleError::UndefinedConditional { step, prefix: x.clone() })?;
        x.push(draw_bit(&mut rng, &p_one));
    }
    Ok(x)
}

/// One step of a reliability trace: how far the predictor's probability
/// of a one sits from the truth's, as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityRow {
    pub t: usize,
    pub observed: Bit,
    pub predicted_one: Prob,
    pub true_one: Prob,
    pub abs_err: Prob,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReliabilityStatus {
    Completed,
    /// The predictor went into a coma; the trace stops there.
    PredictorUndefined { step: usize },
}

#[derive(Debug, Clone)]
pub struct ReliabilityTrace {
    pub rows: Vec<ReliabilityRow>,
    pub status: ReliabilityStatus,
}

impl ReliabilityTrace {
    pub fn final_error(&self) -> Option<&Prob> {
        self.rows.last().map(|r| &r.abs_err)
    }
}

/// Samples a path from `truth` and records `|p(x,1) - truth(1|x)|` at
/// every step. The sampled path equals `sample_sequence(truth, len, seed)`.
pub fn reliability_trace<P, M>(
    predictor: &P,
    truth: &M,
    len: usize,
    seed: u64,
) -> Result<ReliabilityTrace, SampleError>
where
    P: SemiPredictor + ?Sized,
    M: Measure + ?Sized,
{
    let mut rng = SplitMix64::new(seed);
    let mut x = FiniteString::empty();
    let mut rows = Vec::with_capacity(len);
    for t in 0..len {
        let true_one = conditional(truth, &x, Bit::One)
            .ok_or_else(|| SampleError::UndefinedConditional { step: t, prefix: x.clone() })?;
        let Some(predicted_one) = predictor.predict(&x, Bit::One) else {
            return Ok(ReliabilityTrace {
                rows,
                status: ReliabilityStatus::PredictorUndefined { step: t },
            });
        };
        let observed = draw_bit(&mut rng, &true_one);
        rows.push(ReliabilityRow {
            t,
            observed,
            abs_err: predicted_one.abs_diff(&true_one),
            predicted_one,
            true_one,
        });
        x.push(observed);
    }
    Ok(ReliabilityTrace { rows, status: ReliabilityStatus::Completed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{instantiate, HypothesisPool, HypothesisSpec, WeightVector};
    use crate::mixture::MixtureMeasure;
    use crate::predictor::predictor_from;

    fn s(t: &str) -> FiniteString {
        t.parse().unwrap()
    }

    fn p(t: &str) -> Prob {
        t.parse().unwrap()
    }

    #[test]
    fn deterministic_measures_sample_their_sequence() {
        let ones = instantiate(&HypothesisSpec::Point {
            prefix: FiniteString::empty(),
            cycle: s("1"),
        })
        .unwrap();
        for seed in [0, 7, u64::MAX] {
            assert_eq!(sample_sequence(&ones, 5, seed).unwrap(), s("11111"));
        }
        let sure = instantiate(&HypothesisSpec::Bernoulli { bias: Prob::one() }).unwrap();
        assert_eq!(sample_sequence(&sure, 6, 3).unwrap(), s("111111"));
        let never = instantiate(&HypothesisSpec::Bernoulli { bias: Prob::zero() }).unwrap();
        assert_eq!(sample_sequence(&never, 6, 3).unwrap(), s("000000"));
    }

    #[test]
    fn sampling_is_reproducible_and_plausible() {
        let b34 = instantiate(&HypothesisSpec::Bernoulli { bias: p("3/4") }).unwrap();
        let a = sample_sequence(&b34, 1000, 42).unwrap();
        let b = sample_sequence(&b34, 1000, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_sequence(&b34, 1000, 43).unwrap());
        let ones = a.count_ones();
        assert!((680..=820).contains(&ones), "got {ones} ones");
    }

    #[test]
    fn self_prediction_has_zero_error() {
        let truth = instantiate(&HypothesisSpec::Bernoulli { bias: p("3/4") }).unwrap();
        let trace = reliability_trace(&predictor_from(&truth), &truth, 50, 11).unwrap();
        assert_eq!(trace.status, ReliabilityStatus::Completed);
        assert!(trace.rows.iter().all(|r| r.abs_err.is_zero()));
    }

    #[test]
    fn two_point_mixture_identifies_all_ones_immediately() {
        let pool = HypothesisPool::new(
            vec![
                HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: s("0") },
                HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: s("1") },
            ],
            WeightVector::new(vec![p("1/2"), p("1/2")]).unwrap(),
        )
        .unwrap();
        let mix = MixtureMeasure::new(&pool).unwrap();
        let truth = instantiate(&pool.specs()[1]).unwrap();
        let trace = reliability_trace(&mix.predictor(), &truth, 10, 5).unwrap();
        assert_eq!(trace.rows[0].abs_err, p("1/2"));
        assert!(trace.rows[1..].iter().all(|r| r.abs_err.is_zero()));
    }
}
