//! Bayesian mixtures over hypothesis pools and the equivalent sequential
//! aggregator.
//!
//! The mixture measure is `xi(x) = sum_i w(i) m_i(x)`. The same predictor
//! can be run in two algebraically equal ways: conditioning the mixture
//! measure, or aggregating member predictions under posterior weights
//! updated by Bayes' rule,
//!
//! ```text
//! w'(i) = w(i) p_i(x, b) / Z,      Z = sum_i w(i) p_i(x, b).
//! ```
//!
//! [`AggregatorState`] keeps an exactly normalized posterior, so
//! `AggregatorState::predict` must agree with `MixtureMeasure::predict`
//! as exact rationals at every reachable history; tests enforce this
//! identity. Domination `xi(x) >= w(i) m_i(x)` is what caps the
//! aggregator's regret against any member.

use std::sync::{Arc, OnceLock};

use num::rational::BigRational;
use num::Zero;
use thiserror::Error;

use crate::bits::{Bit, FiniteString};
use crate::hypotheses::{HypothesisError, HypothesisPool};
use crate::measure::{conditional, Measure, SemiMeasure};
use crate::predictor::{Predictor, SemiPredictor};
use crate::prob::Prob;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregateError {
    #[error("aggregation over an empty pool")]
    EmptyPool,
    #[error("member {index} is undefined (coma) at history {history} but carries weight")]
    MemberComa { index: usize, history: FiniteString },
    #[error("every member assigns zero to the observation after history {history}")]
    AllMembersZero { history: FiniteString },
    #[error("posterior has {got} entries for {expected} members")]
    PosteriorLength { expected: usize, got: usize },
    #[error("posterior weights sum to {sum}, not 1")]
    PosteriorSum { sum: BigRational },
}

/// `xi(x) >= w(i) m_i(x)`, reported with both exact sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationCheck {
    pub mixture_mass: Prob,
    pub floor: Prob,
    pub holds: bool,
}

impl DominationCheck {
    pub fn is_tight(&self) -> bool {
        self.holds && self.mixture_mass == self.floor
    }
}

/// The weighted sum of a pool's instantiated members.
///
/// Two-bit additivity holds exactly because each member is a measure; the
/// root mass is the weight total, which may sit below 1.
#[derive(Clone)]
pub struct MixtureMeasure {
    weights: Arc<[Prob]>,
    members: Arc<[Arc<dyn Measure>]>,
}

impl MixtureMeasure {
    pub fn new(pool: &HypothesisPool) -> Result<MixtureMeasure, HypothesisError> {
        Ok(MixtureMeasure {
            weights: pool.weights().entries().to_vec().into(),
            members: pool.instantiate_all()?.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> &[Prob] {
        &self.weights
    }

    pub fn member(&self, i: usize) -> &Arc<dyn Measure> {
        &self.members[i]
    }

    pub fn member_mass(&self, i: usize, x: &FiniteString) -> Prob {
        self.members[i].mass(x)
    }

    /// `xi(x)`, the exact weighted sum.
    pub fn value(&self, x: &FiniteString) -> Prob {
        let mut sum = BigRational::zero();
        for (w, m) in self.weights.iter().zip(self.members.iter()) {
            let mass = m.mass(x);
            if !mass.is_zero() {
                sum += w.ratio() * mass.ratio();
            }
        }
        Prob::from_ratio(sum).expect("mixture mass within [0,1]")
    }

    /// `xi(b | x)`; `None` exactly when `xi(x) = 0`.
    pub fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        conditional(self, x, b)
    }

    /// Whether `xi(x) >= w(i) m_i(x)`, computed exactly.
    pub fn dominates(&self, i: usize, x: &FiniteString) -> DominationCheck {
        let mixture_mass = self.value(x);
        let floor = &self.weights[i] * &self.member_mass(i, x);
        let holds = mixture_mass >= floor;
        DominationCheck { mixture_mass, floor, holds }
    }

    pub fn predictor(&self) -> MixturePredictor {
        MixturePredictor(self.clone())
    }
}

impl SemiMeasure for MixtureMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        self.value(x)
    }
}

impl std::fmt::Debug for MixtureMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixtureMeasure").field("members", &self.len()).finish()
    }
}

/// The mixture's conditional as a predictor. Defined wherever the mixture
/// mass is positive, and a proper predictor there by exact additivity.
#[derive(Debug, Clone)]
pub struct MixturePredictor(MixtureMeasure);

impl SemiPredictor for MixturePredictor {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        self.0.predict(x, b)
    }
}
impl Predictor for MixturePredictor {}

/// Aggregator over a pool: an immutable snapshot of posterior weights
/// after some history. Updates return a fresh state.
///
/// Weights are held in joint form `w(i) m_i(x)`, not all zero; the
/// normalized posterior is materialized lazily since Bayes' rule only
/// ever needs the ratios. Everything observable is still exact.
#[derive(Debug, Clone)]
pub struct AggregatorState {
    mixture: MixtureMeasure,
    joints: Vec<Prob>,
    posterior: OnceLock<Vec<Prob>>,
    history: FiniteString,
}

impl AggregatorState {
    /// Fresh state at the empty history. The prior is normalized to sum
    /// exactly 1: supplied weights may total below 1, the conditional
    /// predictor self-normalizes, and Bayes' rule needs a distribution.
    pub fn new(mixture: MixtureMeasure) -> Result<AggregatorState, AggregateError> {
        AggregatorState::at_history(mixture, FiniteString::empty())
    }

    /// State whose posterior is conditioned on an arbitrary history.
    pub fn at_history(
        mixture: MixtureMeasure,
        history: FiniteString,
    ) -> Result<AggregatorState, AggregateError> {
        if mixture.is_empty() {
            return Err(AggregateError::EmptyPool);
        }
        let joints: Vec<Prob> = mixture
            .weights
            .iter()
            .zip(mixture.members.iter())
            .map(|(w, m)| w * &m.mass(&history))
            .collect();
        if joints.iter().all(Prob::is_zero) {
            return Err(AggregateError::AllMembersZero { history });
        }
        Ok(AggregatorState { mixture, joints, posterior: OnceLock::new(), history })
    }

    /// Resumes from an explicit posterior, which must sum to exactly 1.
    pub fn with_posterior(
        mixture: MixtureMeasure,
        posterior: Vec<Prob>,
        history: FiniteString,
    ) -> Result<AggregatorState, AggregateError> {
        if posterior.len() != mixture.len() {
            return Err(AggregateError::PosteriorLength {
                expected: mixture.len(),
                got: posterior.len(),
            });
        }
        let sum: BigRational =
            posterior.iter().map(Prob::ratio).fold(BigRational::zero(), |a, b| a + b);
        if !num::One::is_one(&sum) {
            return Err(AggregateError::PosteriorSum { sum });
        }
        Ok(AggregatorState { mixture, joints: posterior, posterior: OnceLock::new(), history })
    }

    pub fn t(&self) -> usize {
        self.history.len()
    }

    pub fn history(&self) -> &FiniteString {
        &self.history
    }

    fn joint_total(&self) -> BigRational {
        self.joints.iter().map(Prob::ratio).fold(BigRational::zero(), |a, b| a + b)
    }

    /// The normalized posterior `w_t`; sums to exactly 1.
    pub fn posterior(&self) -> &[Prob] {
        self.posterior.get_or_init(|| {
            let total = self.joint_total();
            self.joints
                .iter()
                .map(|j| {
                    Prob::from_ratio(j.ratio() / &total).expect("posterior entry within [0,1]")
                })
                .collect()
        })
    }

    pub fn mixture(&self) -> &MixtureMeasure {
        &self.mixture
    }

    /// Member predictions of `b` at the current history, weighted by the
    /// posterior. Members whose posterior is zero have dropped out and are
    /// skipped; a coma on a member still carrying weight is an error.
    pub fn predict(&self, b: Bit) -> Result<Prob, AggregateError> {
        let mut sum = BigRational::zero();
        for (i, (w, m)) in self.joints.iter().zip(self.mixture.members.iter()).enumerate() {
            if w.is_zero() {
                continue;
            }
            match conditional(m, &self.history, b) {
                Some(p) => sum += w.ratio() * p.ratio(),
                None => {
                    return Err(AggregateError::MemberComa {
                        index: i,
                        history: self.history.clone(),
                    })
                }
            }
        }
        let prediction = sum / self.joint_total();
        Ok(Prob::from_ratio(prediction).expect("aggregate prediction within [0,1]"))
    }

    /// One Bayes step on an observed bit.
    pub fn update(&self, observed: Bit) -> Result<AggregatorState, AggregateError> {
        let mut joints = Vec::with_capacity(self.joints.len());
        for (i, (w, m)) in self.joints.iter().zip(self.mixture.members.iter()).enumerate() {
            if w.is_zero() {
                joints.push(Prob::zero());
                continue;
            }
            let p = conditional(m, &self.history, observed).ok_or_else(|| {
                AggregateError::MemberComa { index: i, history: self.history.clone() }
            })?;
            joints.push(w * &p);
        }
        if joints.iter().all(Prob::is_zero) {
            return Err(AggregateError::AllMembersZero { history: self.history.clone() });
        }
        Ok(AggregatorState {
            mixture: self.mixture.clone(),
            joints,
            posterior: OnceLock::new(),
            history: self.history.extended(observed),
        })
    }

    /// Folds a whole sequence of observations through [`Self::update`].
    pub fn observe_all(&self, x: &FiniteString) -> Result<AggregatorState, AggregateError> {
        let mut state = self.clone();
        for b in x.iter() {
            state = state.update(b)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{default_pool, HypothesisSpec, WeightVector};
    use crate::measure::check_additivity;
    use crate::prob::Prob;
    use crate::rng::SplitMix64;

    fn s(t: &str) -> FiniteString {
        t.parse().unwrap()
    }

    fn p(t: &str) -> Prob {
        t.parse().unwrap()
    }

    fn two_point_pool() -> HypothesisPool {
        let zeros =
            HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: s("0") };
        let ones = HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: s("1") };
        HypothesisPool::new(
            vec![zeros, ones],
            WeightVector::new(vec![p("1/2"), p("1/2")]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_point_mixture_values() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        assert_eq!(mix.value(&FiniteString::empty()), Prob::one());
        assert_eq!(mix.value(&s("1")), p("1/2"));
        assert_eq!(mix.value(&s("1111")), p("1/2"));
        assert_eq!(mix.value(&s("01")), Prob::zero());
    }

    #[test]
    fn singleton_bernoulli_mixture_is_uniform_scaled() {
        let pool = HypothesisPool::new(
            vec![HypothesisSpec::Bernoulli { bias: p("1/2") }],
            WeightVector::new(vec![Prob::one()]).unwrap(),
        )
        .unwrap();
        let mix = MixtureMeasure::new(&pool).unwrap();
        assert_eq!(mix.value(&s("010011")), Prob::pow2_neg(6));
    }

    #[test]
    fn two_point_mixture_predictions() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        assert_eq!(mix.predict(&FiniteString::empty(), Bit::Zero), Some(p("1/2")));
        assert_eq!(mix.predict(&FiniteString::empty(), Bit::One), Some(p("1/2")));
        assert_eq!(mix.predict(&s("1"), Bit::One), Some(Prob::one()));
        assert_eq!(mix.predict(&s("01"), Bit::Zero), None);
    }

    #[test]
    fn mixture_additivity_is_exact() {
        let mix = MixtureMeasure::new(&default_pool(6)).unwrap();
        assert!(check_additivity(&mix, 6).is_clean());
    }

    #[test]
    fn root_mass_is_the_weight_total() {
        let mix = MixtureMeasure::new(&default_pool(3)).unwrap();
        assert_eq!(mix.value(&FiniteString::empty()), p("7/8"));
    }

    #[test]
    fn fresh_singleton_pool_predicts_a_half() {
        let mix = MixtureMeasure::new(&default_pool(1)).unwrap();
        let state = AggregatorState::new(mix).unwrap();
        assert_eq!(state.predict(Bit::One).unwrap(), p("1/2"));
    }

    #[test]
    fn update_eliminates_contradicted_members() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        let state = AggregatorState::new(mix).unwrap();
        let next = state.update(Bit::One).unwrap();
        assert_eq!(next.posterior(), &[Prob::zero(), Prob::one()]);
        assert_eq!(next.predict(Bit::One).unwrap(), Prob::one());
    }

    #[test]
    fn update_keeps_weights_under_symmetric_predictions() {
        let pool = HypothesisPool::new(
            vec![HypothesisSpec::Uniform, HypothesisSpec::Bernoulli { bias: p("1/2") }],
            WeightVector::new(vec![p("1/2"), p("1/4")]).unwrap(),
        )
        .unwrap();
        let state = AggregatorState::new(MixtureMeasure::new(&pool).unwrap()).unwrap();
        // normalized prior
        assert_eq!(state.posterior(), &[p("2/3"), p("1/3")]);
        let next = state.update(Bit::One).unwrap();
        assert_eq!(next.posterior(), &[p("2/3"), p("1/3")]);
    }

    #[test]
    fn update_hand_example() {
        // w = (1/4, 3/4), member predictions (1/2, 1/4) on the observed bit
        let pool = HypothesisPool::new(
            vec![
                HypothesisSpec::Bernoulli { bias: p("1/2") },
                HypothesisSpec::Bernoulli { bias: p("1/4") },
            ],
            WeightVector::new(vec![p("1/4"), p("3/4")]).unwrap(),
        )
        .unwrap();
        let state = AggregatorState::new(MixtureMeasure::new(&pool).unwrap()).unwrap();
        let next = state.update(Bit::One).unwrap();
        // Z = 1/4*1/2 + 3/4*1/4 = 5/16
        assert_eq!(next.posterior(), &[p("2/5"), p("3/5")]);
    }

    #[test]
    fn posterior_always_sums_to_one() {
        let mix = MixtureMeasure::new(&default_pool(8)).unwrap();
        let mut state = AggregatorState::new(mix).unwrap();
        let mut rng = SplitMix64::new(9);
        for _ in 0..40 {
            let b = Bit::from(rng.next_u64() & 1 == 1);
            state = state.update(b).unwrap();
            let sum: BigRational =
                state.posterior().iter().map(Prob::ratio).fold(BigRational::zero(), |a, b| a + b);
            assert!(num::One::is_one(&sum));
        }
    }

    #[test]
    fn aggregator_equals_mixture_conditional() {
        let mix = MixtureMeasure::new(&default_pool(8)).unwrap();
        let mut state = AggregatorState::new(mix.clone()).unwrap();
        let mut rng = SplitMix64::new(4242);
        for _ in 0..48 {
            for b in Bit::BOTH {
                assert_eq!(
                    state.predict(b).unwrap(),
                    mix.predict(state.history(), b).unwrap(),
                    "identity at history {}",
                    state.history()
                );
            }
            let b = Bit::from(rng.next_u64() & 1 == 1);
            state = state.update(b).unwrap();
        }
    }

    #[test]
    fn all_zero_update_is_an_error() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        let state = AggregatorState::new(mix).unwrap().update(Bit::Zero).unwrap();
        match state.update(Bit::One) {
            Err(AggregateError::AllMembersZero { history }) => assert_eq!(history, s("0")),
            other => panic!("expected all-zero error, got {other:?}"),
        }
    }

    #[test]
    fn coma_with_positive_weight_is_an_error() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        // force weight onto the all-ones member after an incompatible history
        let state = AggregatorState::with_posterior(
            mix,
            vec![p("1/2"), p("1/2")],
            s("0"),
        )
        .unwrap();
        match state.predict(Bit::Zero) {
            Err(AggregateError::MemberComa { index: 1, .. }) => {}
            other => panic!("expected coma error, got {other:?}"),
        }
    }

    #[test]
    fn domination_examples() {
        let mix = MixtureMeasure::new(&two_point_pool()).unwrap();
        let check = mix.dominates(1, &s("1111"));
        assert!(check.holds);
        assert!(check.is_tight());
        assert_eq!(check.mixture_mass, p("1/2"));
        let check = mix.dominates(0, &FiniteString::empty());
        assert!(check.holds);
        assert!(!check.is_tight());
    }
}
