//! Executable diagonal adversaries.
//!
//! Two constructions that defeat would-be universal predictors:
//!
//! * [`putnam_sequence`] plays against any total predictor, choosing at
//!   each step a next bit the victim rates at probability at most 1/2.
//!   The victim's cumulative log loss on the constructed sequence grows
//!   at least linearly, while the point predictor on that sequence incurs
//!   none, so the victim's regret is unbounded.
//! * [`anti_limit_sequence`] plays against a predictor given only through
//!   stage-monotone lower approximations, searching block by block (in
//!   dovetailing order over positions and stages) for a run of ones the
//!   approximant rates above 1/2, then breaking it with a zero. The
//!   victim's predictions can never settle on the constructed sequence.
//!
//! Both adversaries are total: a predictor coma or an exhausted search
//! budget ends the trace with an explicit status instead of looping.

use std::cmp::Ordering;

use crate::bits::{Bit, FiniteString};
use crate::predictor::{LowerApproximation, SemiPredictor};
use crate::prob::Prob;
use crate::scoring::Loss;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStatus {
    Completed,
    /// The victim went into a coma at this step; the sequence built so
    /// far is kept.
    PredictorUndefined { step: usize },
    /// No witness was found for this block within the dovetailing budget.
    BudgetExhausted { block: usize },
}

/// The constructed sequence together with the victim's probability for
/// each chosen bit (for block adversaries: the witness value per block).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryTrace {
    pub sequence: FiniteString,
    pub probs: Vec<Prob>,
    pub status: TraceStatus,
    /// For block traces, the sequence length after each completed block.
    pub blocks: Vec<usize>,
}

impl AdversaryTrace {
    pub fn is_completed(&self) -> bool {
        self.status == TraceStatus::Completed
    }

    /// The victim's cumulative log loss on the trace, in exact form (the
    /// product of the recorded probabilities).
    pub fn victim_loss(&self) -> Loss {
        Loss::from_prob(self.probs.iter().fold(Prob::one(), |acc, p| &acc * p))
    }
}

/// Builds a sequence of length up to `horizon` on which `victim` never
/// assigns the chosen next bit more than probability 1/2.
///
/// At each step the bit with the strictly smaller predicted probability
/// is chosen; an exact tie goes to `tie_break`. For a proper predictor
/// the two probabilities sum to 1, so the chosen one is at most 1/2 and
/// the victim loses at least one bit per step.
pub fn putnam_sequence<P: SemiPredictor + ?Sized>(
    victim: &P,
    horizon: usize,
    tie_break: Bit,
) -> AdversaryTrace {
    let mut sequence = FiniteString::empty();
    let mut probs = Vec::with_capacity(horizon);
    for step in 0..horizon {
        let zero = victim.predict(&sequence, Bit::Zero);
        let one = victim.predict(&sequence, Bit::One);
        let (Some(zero), Some(one)) = (zero, one) else {
            return AdversaryTrace {
                sequence,
                probs,
                status: TraceStatus::PredictorUndefined { step },
                blocks: Vec::new(),
            };
        };
        let chosen = match zero.cmp(&one) {
            Ordering::Less => Bit::Zero,
            Ordering::Greater => Bit::One,
            Ordering::Equal => tie_break,
        };
        probs.push(if chosen == Bit::Zero { zero } else { one });
        sequence.push(chosen);
    }
    AdversaryTrace { sequence, probs, status: TraceStatus::Completed, blocks: Vec::new() }
}

/// Builds `1^t0 0 1^t1 0 ...` against a stage-monotone approximant of a
/// predictor's probability of a one.
///
/// Block `k` searches pairs `(t, s)` with `t + s <= block_budget`, in
/// order of increasing `t + s` with ties by increasing `t`, for the first
/// position where `f(prefix 1^t, s) > 1/2`; it then appends `1^t 0`. The
/// recorded probability per block is the witnessing approximant value.
pub fn anti_limit_sequence<F: LowerApproximation + ?Sized>(
    f: &F,
    block_budget: u64,
    max_blocks: usize,
) -> AdversaryTrace {
    let half = Prob::half();
    let mut sequence = FiniteString::empty();
    let mut probs = Vec::with_capacity(max_blocks);
    let mut blocks = Vec::with_capacity(max_blocks);
    for block in 0..max_blocks {
        let mut witness = None;
        'search: for total in 0..=block_budget {
            for t in 0..=total {
                let stage = total - t;
                let probe = sequence.concat(&FiniteString::repeated(Bit::One, t as usize));
                let value = f.approx(&probe, stage);
                if value > half {
                    witness = Some((t as usize, value));
                    break 'search;
                }
            }
        }
        match witness {
            Some((t, value)) => {
                sequence = sequence.concat(&FiniteString::repeated(Bit::One, t));
                sequence.push(Bit::Zero);
                probs.push(value);
                blocks.push(sequence.len());
            }
            None => {
                return AdversaryTrace {
                    sequence,
                    probs,
                    status: TraceStatus::BudgetExhausted { block },
                    blocks,
                };
            }
        }
    }
    AdversaryTrace { sequence, probs, status: TraceStatus::Completed, blocks }
}
