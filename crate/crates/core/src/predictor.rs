//! Predictors: next-bit probability assignments.
//!
//! A predictor maps an observed prefix to a distribution over the next
//! bit. The correspondence with measures is conditionalization:
//! `p(x, b) = m(b | x)`, undefined exactly where `m` vanishes.

use std::sync::Arc;

use crate::bits::{Bit, FiniteString};
use crate::measure::{conditional, Measure, SemiMeasure};
use crate::prob::Prob;

/// Next-bit probabilities with `p(x,0) + p(x,1) <= 1` wherever defined.
///
/// `None` is the undefined ("coma") outcome after a prefix the underlying
/// law rules out; it is a value, not an error.
pub trait SemiPredictor: Send + Sync {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob>;
}

/// Marker for predictors whose defined two-bit sums equal 1 exactly.
pub trait Predictor: SemiPredictor {}

impl<T: SemiPredictor + ?Sized> SemiPredictor for &T {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).predict(x, b)
    }
}
impl<T: SemiPredictor + ?Sized> SemiPredictor for Arc<T> {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).predict(x, b)
    }
}
impl<T: SemiPredictor + ?Sized> SemiPredictor for Box<T> {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).predict(x, b)
    }
}
impl<T: Predictor + ?Sized> Predictor for &T {}
impl<T: Predictor + ?Sized> Predictor for Arc<T> {}
impl<T: Predictor + ?Sized> Predictor for Box<T> {}

/// The predictor obtained from a measure by conditionalization.
#[derive(Debug, Clone)]
pub struct ConditionalPredictor<M> {
    measure: M,
}

impl<M: Measure> ConditionalPredictor<M> {
    pub fn measure(&self) -> &M {
        &self.measure
    }
}

impl<M: Measure> SemiPredictor for ConditionalPredictor<M> {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        conditional(&self.measure, x, b)
    }
}
impl<M: Measure> Predictor for ConditionalPredictor<M> {}

/// The semi-predictor obtained from a semi-measure by conditionalization.
#[derive(Debug, Clone)]
pub struct ConditionalSemiPredictor<M> {
    measure: M,
}

impl<M: SemiMeasure> SemiPredictor for ConditionalSemiPredictor<M> {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        conditional(&self.measure, x, b)
    }
}

pub fn predictor_from<M: Measure>(measure: M) -> ConditionalPredictor<M> {
    ConditionalPredictor { measure }
}

pub fn semipredictor_from<M: SemiMeasure>(measure: M) -> ConditionalSemiPredictor<M> {
    ConditionalSemiPredictor { measure }
}

/// Totalizes a predictor by answering `1/2` for either bit wherever the
/// inner predictor is undefined. A resource-bounded predictor extended
/// this way is a total computable object, which is what a diagonal
/// adversary expects to run against.
#[derive(Debug, Clone)]
pub struct UniformFallback<P>(pub P);

impl<P: SemiPredictor> SemiPredictor for UniformFallback<P> {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        Some(self.0.predict(x, b).unwrap_or_else(Prob::half))
    }
}
impl<P: Predictor> Predictor for UniformFallback<P> {}

/// Stage-indexed lower bounds on a predictor's probability of a one.
///
/// `approx(x, s)` must be nondecreasing in `s` for every fixed `x` and
/// converge (in the idealized limit) to the approximated probability.
pub trait LowerApproximation: Send + Sync {
    fn approx(&self, x: &FiniteString, stage: u64) -> Prob;
}

/// Wraps an exactly-computable predictor as the constant-in-stage
/// approximation of its probability of a one. Undefined points are
/// reported as 0, which is a sound lower bound.
#[derive(Debug, Clone)]
pub struct ExactApproximation<P>(pub P);

impl<P: SemiPredictor> LowerApproximation for ExactApproximation<P> {
    fn approx(&self, x: &FiniteString, _stage: u64) -> Prob {
        self.0.predict(x, Bit::One).unwrap_or_else(Prob::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{instantiate, HypothesisSpec};
    use crate::measure::check_measure;

    fn s(t: &str) -> FiniteString {
        t.parse().unwrap()
    }

    #[test]
    fn uniform_predictor_is_a_half_everywhere() {
        let p = predictor_from(instantiate(&HypothesisSpec::Uniform).unwrap());
        for x in ["^", "0", "1", "0101"] {
            for b in Bit::BOTH {
                assert_eq!(p.predict(&s(x), b), Some(Prob::half()));
            }
        }
    }

    #[test]
    fn point_predictor_goes_into_a_coma_off_its_sequence() {
        let ones = instantiate(&HypothesisSpec::Point {
            prefix: FiniteString::empty(),
            cycle: s("1"),
        })
        .unwrap();
        let p = predictor_from(ones);
        assert_eq!(p.predict(&s("111"), Bit::One), Some(Prob::one()));
        // any prefix containing a 0 has measure zero
        assert_eq!(p.predict(&s("10"), Bit::One), None);
        assert_eq!(p.predict(&s("0"), Bit::Zero), None);
    }

    #[test]
    fn uniform_fallback_fills_comas_with_a_half() {
        let ones = instantiate(&HypothesisSpec::Point {
            prefix: FiniteString::empty(),
            cycle: s("1"),
        })
        .unwrap();
        let p = UniformFallback(predictor_from(ones));
        assert_eq!(p.predict(&s("10"), Bit::One), Some(Prob::half()));
        assert_eq!(p.predict(&s("1"), Bit::One), Some(Prob::one()));
    }

    #[test]
    fn measure_reconstruction_from_conditionals() {
        // m(x) equals the product of conditionals along the path
        let m = instantiate(&HypothesisSpec::Bernoulli { bias: "3/4".parse().unwrap() }).unwrap();
        assert!(check_measure(&m, 6).is_clean());
        let p = predictor_from(&m);
        let x = s("110100");
        let mut product = Prob::one();
        for t in 0..x.len() {
            let step = p.predict(&x.prefix(t), x.get(t).unwrap()).unwrap();
            product = &product * &step;
        }
        assert_eq!(product, m.mass(&x));
    }
}
