//! Log loss, cumulative loss, regret, and the exact optimality bound.
//!
//! A loss of `-log2 p` bits is irrational for most `p`, so losses are
//! carried in their exact form: the probability itself. Comparisons and
//! bound checks happen on the exact forms (larger probability, smaller
//! loss); decimal bit counts are rendered only for display. The
//! aggregator-regret bound against pool member `i`,
//!
//! ```text
//! R <= -log2 w(i),
//! ```
//!
//! is checked in the equivalent ratio form `xi(x) >= w(i) m_i(x)`, which
//! needs no logarithms at all.

use std::fmt;

use num::rational::BigRational;
use thiserror::Error;

use crate::bits::{Bit, FiniteString};
use crate::mixture::{DominationCheck, MixtureMeasure};
use crate::predictor::SemiPredictor;
use crate::prob::{log2_f64, Prob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("predictor undefined at step {step} (history {history})")]
    Undefined { step: usize, history: FiniteString },
}

/// A log loss in exact form: the predicted probability of what happened.
/// Loss in bits is `-log2` of it, `+inf` when the probability is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loss {
    prob: Prob,
}

impl Loss {
    pub fn from_prob(prob: Prob) -> Loss {
        Loss { prob }
    }

    pub fn zero() -> Loss {
        Loss { prob: Prob::one() }
    }

    /// The exact form. Authoritative for every comparison.
    pub fn prob(&self) -> &Prob {
        &self.prob
    }

    pub fn is_infinite(&self) -> bool {
        self.prob.is_zero()
    }

    /// Exactly `n` bits or more of loss?
    pub fn at_least_bits(&self, n: usize) -> bool {
        self.prob <= Prob::pow2_neg(n)
    }

    /// Display-only decimal bit count.
    pub fn bits_f64(&self) -> f64 {
        self.prob.neg_log2()
    }

    /// Combines sequential losses by multiplying exact forms.
    pub fn plus(&self, other: &Loss) -> Loss {
        Loss { prob: &self.prob * &other.prob }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf bits")
        } else {
            write!(f, "{} bits (exact form {})", self.bits_f64(), self.prob)
        }
    }
}

/// Signed regret in exact ratio form: `m1(x) / m2(x)` for the two
/// predictors' path probabilities. Regret in bits is `-log2` of the
/// ratio; a ratio above 1 means the first predictor did better.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regret {
    Finite { ratio: BigRational },
    /// First predictor hit probability zero, second did not.
    PlusInfinite,
    /// Second predictor hit probability zero, first did not.
    MinusInfinite,
    /// Both path probabilities are zero.
    Indeterminate,
}

impl Regret {
    pub fn from_losses(first: &Loss, second: &Loss) -> Regret {
        match (first.is_infinite(), second.is_infinite()) {
            (true, true) => Regret::Indeterminate,
            (true, false) => Regret::PlusInfinite,
            (false, true) => Regret::MinusInfinite,
            (false, false) => {
                Regret::Finite { ratio: first.prob().ratio() / second.prob().ratio() }
            }
        }
    }

    pub fn ratio(&self) -> Option<&BigRational> {
        match self {
            Regret::Finite { ratio } => Some(ratio),
            _ => None,
        }
    }

    /// Display-only decimal bits.
    pub fn bits_f64(&self) -> f64 {
        match self {
            Regret::Finite { ratio } => -log2_f64(ratio),
            Regret::PlusInfinite => f64::INFINITY,
            Regret::MinusInfinite => f64::NEG_INFINITY,
            Regret::Indeterminate => f64::NAN,
        }
    }

    /// `R >= n` bits, decided exactly.
    pub fn at_least_bits(&self, n: usize) -> bool {
        match self {
            Regret::Finite { ratio } => {
                *ratio <= BigRational::new(1.into(), num::BigInt::from(1) << n)
            }
            Regret::PlusInfinite => true,
            _ => false,
        }
    }
}

/// Instantaneous loss `-log p(x, b)` in exact form.
pub fn log_loss<P: SemiPredictor + ?Sized>(
    p: &P,
    x: &FiniteString,
    b: Bit,
) -> Result<Loss, ScoreError> {
    match p.predict(x, b) {
        Some(prob) => Ok(Loss { prob }),
        None => Err(ScoreError::Undefined { step: x.len(), history: x.clone() }),
    }
}

/// Cumulative loss along a whole sequence; the exact form is the product
/// of the per-step probabilities, i.e. the path probability the predictor
/// assigned to `x`.
pub fn cumulative_loss<P: SemiPredictor + ?Sized>(
    p: &P,
    x: &FiniteString,
) -> Result<Loss, ScoreError> {
    let mut product = Prob::one();
    for t in 0..x.len() {
        let prefix = x.prefix(t);
        let b = x.get(t).unwrap();
        match p.predict(&prefix, b) {
            Some(prob) => product = &product * &prob,
            None => return Err(ScoreError::Undefined { step: t, history: prefix }),
        }
    }
    Ok(Loss { prob: product })
}

/// Cumulative regret of `p1` relative to `p2` on `x`, in exact ratio form.
pub fn regret<P1, P2>(p1: &P1, p2: &P2, x: &FiniteString) -> Result<Regret, ScoreError>
where
    P1: SemiPredictor + ?Sized,
    P2: SemiPredictor + ?Sized,
{
    let l1 = cumulative_loss(p1, x)?;
    let l2 = cumulative_loss(p2, x)?;
    Ok(Regret::from_losses(&l1, &l2))
}

/// Verdict on the regret bound for one pool member, carrying both exact
/// sides of `xi(x) >= w(i) m_i(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub member: usize,
    pub at: FiniteString,
    pub check: DominationCheck,
}

impl BoundVerdict {
    pub fn holds(&self) -> bool {
        self.check.holds
    }

    /// Bound met with equality: the regret is exactly `-log2 w(i)`.
    pub fn is_tight(&self) -> bool {
        self.check.is_tight()
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "member {} at {}: xi = {}, w*mu = {}: bound {}",
            self.member,
            self.at,
            self.check.mixture_mass,
            self.check.floor,
            if self.holds() { if self.is_tight() { "tight" } else { "holds" } } else { "VIOLATED" }
        )
    }
}

/// Checks the aggregator's regret bound against member `i` on `x` in
/// exact ratio form.
pub fn verify_optimality_bound(mix: &MixtureMeasure, i: usize, x: &FiniteString) -> BoundVerdict {
    BoundVerdict { member: i, at: x.clone(), check: mix.dominates(i, x) }
}

/// Per-step losses for a set of predictors on one sequence, with exact
/// cumulative forms and pairwise regrets.
#[derive(Debug, Clone)]
pub struct RegretLedger {
    sequence: FiniteString,
    names: Vec<String>,
    /// `per_step[t][k]` = probability predictor `k` gave the observed bit.
    per_step: Vec<Vec<Prob>>,
    cumulative: Vec<Loss>,
}

impl RegretLedger {
    pub fn evaluate<P: SemiPredictor + ?Sized>(
        predictors: &[(&str, &P)],
        sequence: &FiniteString,
    ) -> Result<RegretLedger, ScoreError> {
        let mut per_step = Vec::with_capacity(sequence.len());
        for t in 0..sequence.len() {
            let prefix = sequence.prefix(t);
            let b = sequence.get(t).unwrap();
            let row = predictors
                .iter()
                .map(|(_, p)| log_loss(*p, &prefix, b).map(|l| l.prob))
                .collect::<Result<Vec<_>, _>>()?;
            per_step.push(row);
        }
        let cumulative = (0..predictors.len())
            .map(|k| {
                Loss::from_prob(per_step.iter().fold(Prob::one(), |acc, row| &acc * &row[k]))
            })
            .collect();
        Ok(RegretLedger {
            sequence: sequence.clone(),
            names: predictors.iter().map(|(n, _)| n.to_string()).collect(),
            per_step,
            cumulative,
        })
    }

    pub fn sequence(&self) -> &FiniteString {
        &self.sequence
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn step_probs(&self, t: usize) -> &[Prob] {
        &self.per_step[t]
    }

    pub fn cumulative(&self, k: usize) -> &Loss {
        &self.cumulative[k]
    }

    pub fn pairwise_regret(&self, first: usize, second: usize) -> Regret {
        Regret::from_losses(&self.cumulative[first], &self.cumulative[second])
    }
}
