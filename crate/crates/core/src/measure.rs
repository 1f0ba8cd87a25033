//! Measures and semi-measures over binary sequences.
//!
//! A probability law over infinite binary sequences is handled entirely
//! through its prefix function: a [`Measure`] assigns mass 1 to the empty
//! string and splits mass exactly between the two one-bit extensions,
//!
//! ```text
//! m(^) = 1,    m(x0) + m(x1) = m(x).
//! ```
//!
//! A [`SemiMeasure`] satisfies the same conditions with `<=` in place of
//! `=`; the deficit is mass lost to computations that never extend their
//! output. Both are checked exhaustively up to a length by
//! [`check_measure`] and [`check_semimeasure`], which report violations as
//! data rather than failing.

use std::fmt;
use std::sync::Arc;

use num::rational::BigRational;

use crate::bits::{strings_up_to, Bit, FiniteString};
use crate::prob::Prob;

/// Prefix masses obeying the semi-measure inequalities.
///
/// Implementations must be pure: the same string always gets the same
/// mass, from any thread. Violating the inequalities breaks downstream
/// arithmetic (conditionals may panic), so anything user-supplied should
/// be vetted with [`check_semimeasure`] first.
pub trait SemiMeasure: Send + Sync {
    /// The mass `m(x)` of the cylinder of sequences extending `x`.
    fn mass(&self, x: &FiniteString) -> Prob;

    /// The conditional `m(b | x) = m(xb) / m(x)`.
    ///
    /// `None` means undefined: the conditioning prefix has mass zero. A
    /// predictor asked to continue past such a prefix has no answer at
    /// all ("coma"), which callers must distinguish from a zero
    /// probability. Implementations may shortcut the mass ratio, but any
    /// override must agree with it exactly.
    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        let base = self.mass(x);
        if base.is_zero() {
            return None;
        }
        self.mass(&x.extended(b)).checked_div(&base)
    }
}

/// Marker for semi-measures that satisfy the full equalities.
pub trait Measure: SemiMeasure {}

impl<T: SemiMeasure + ?Sized> SemiMeasure for &T {
    fn mass(&self, x: &FiniteString) -> Prob {
        (**self).mass(x)
    }
    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).conditional(x, b)
    }
}
impl<T: SemiMeasure + ?Sized> SemiMeasure for Arc<T> {
    fn mass(&self, x: &FiniteString) -> Prob {
        (**self).mass(x)
    }
    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).conditional(x, b)
    }
}
impl<T: SemiMeasure + ?Sized> SemiMeasure for Box<T> {
    fn mass(&self, x: &FiniteString) -> Prob {
        (**self).mass(x)
    }
    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        (**self).conditional(x, b)
    }
}
impl<T: Measure + ?Sized> Measure for &T {}
impl<T: Measure + ?Sized> Measure for Arc<T> {}
impl<T: Measure + ?Sized> Measure for Box<T> {}

/// Free-function form of [`SemiMeasure::conditional`].
pub fn conditional<M: SemiMeasure + ?Sized>(m: &M, x: &FiniteString, b: Bit) -> Option<Prob> {
    m.conditional(x, b)
}

/// Mass at the empty string differs from what the contract requires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootViolation {
    pub mass: Prob,
}

/// `m(x0) + m(x1)` differs from (or exceeds) `m(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityViolation {
    pub at: FiniteString,
    pub parent: Prob,
    /// The two-child sum, kept as a raw rational since a broken map can
    /// push it past 1.
    pub children_sum: BigRational,
}

/// Outcome of an exhaustive prefix check. Violations carry the exact
/// rational values involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub max_len: usize,
    pub root: Option<RootViolation>,
    pub additivity: Vec<AdditivityViolation>,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.root.is_none() && self.additivity.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.additivity.len() + usize::from(self.root.is_some())
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "clean up to length {}", self.max_len);
        }
        if let Some(root) = &self.root {
            writeln!(f, "root mass violation: m(^) = {}", root.mass)?;
        }
        for v in &self.additivity {
            writeln!(
                f,
                "additivity violation at {}: m(x) = {}, m(x0)+m(x1) = {}",
                v.at, v.parent, v.children_sum
            )?;
        }
        Ok(())
    }
}

fn check_prefixes<M: SemiMeasure + ?Sized>(m: &M, max_len: usize, exact: bool) -> CheckReport {
    let root_mass = m.mass(&FiniteString::empty());
    let root_ok = if exact { root_mass.is_one() } else { true };
    let root = if root_ok { None } else { Some(RootViolation { mass: root_mass }) };

    let mut additivity = Vec::new();
    for x in strings_up_to(max_len.saturating_sub(1)) {
        let parent = m.mass(&x);
        let sum = m.mass(&x.extended(Bit::Zero)).into_ratio()
            + m.mass(&x.extended(Bit::One)).into_ratio();
        let ok = if exact { sum == *parent.ratio() } else { sum <= *parent.ratio() };
        if !ok {
            additivity.push(AdditivityViolation { at: x, parent, children_sum: sum });
        }
    }
    CheckReport { max_len, root, additivity }
}

/// Verifies `m(^) = 1` and two-bit additivity on every string of length
/// below `max_len`.
pub fn check_measure<M: SemiMeasure + ?Sized>(m: &M, max_len: usize) -> CheckReport {
    check_prefixes(m, max_len, true)
}

/// Verifies `m(^) <= 1` and the two-bit sub-additivity inequalities on
/// every string of length below `max_len`. (`m(^) <= 1` holds for any
/// [`Prob`] by construction, so only the inequalities can fail.)
pub fn check_semimeasure<M: SemiMeasure + ?Sized>(m: &M, max_len: usize) -> CheckReport {
    check_prefixes(m, max_len, false)
}

/// Checks that two-bit additivity holds with equality even if the root
/// mass is below 1, as for a mixture whose weights sum below 1.
pub fn check_additivity<M: SemiMeasure + ?Sized>(m: &M, max_len: usize) -> CheckReport {
    let mut report = check_prefixes(m, max_len, true);
    report.root = None;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypotheses::{instantiate, HypothesisSpec};

    /// Closure-backed semi-measure for constructing counterexamples.
    pub(crate) struct FnSemiMeasure<F>(pub F);

    impl<F: Fn(&FiniteString) -> Prob + Send + Sync> SemiMeasure for FnSemiMeasure<F> {
        fn mass(&self, x: &FiniteString) -> Prob {
            (self.0)(x)
        }
    }

    fn s(t: &str) -> FiniteString {
        t.parse().unwrap()
    }

    fn p(t: &str) -> Prob {
        t.parse().unwrap()
    }

    #[test]
    fn conditional_of_uniform() {
        let uniform = instantiate(&HypothesisSpec::Uniform).unwrap();
        assert_eq!(conditional(&uniform, &FiniteString::empty(), Bit::One), Some(p("1/2")));
        assert_eq!(conditional(&uniform, &s("0110"), Bit::Zero), Some(p("1/2")));
    }

    #[test]
    fn conditional_of_point_mass() {
        let zeros = instantiate(&HypothesisSpec::Point {
            prefix: FiniteString::empty(),
            cycle: s("0"),
        })
        .unwrap();
        assert_eq!(conditional(&zeros, &s("00"), Bit::Zero), Some(Prob::one()));
        assert_eq!(conditional(&zeros, &s("00"), Bit::One), Some(Prob::zero()));
        // measure-zero prefix: undefined, not zero
        assert_eq!(conditional(&zeros, &s("01"), Bit::Zero), None);
    }

    #[test]
    fn conditional_of_deficient_semimeasure() {
        // v(^) = 1, v(0) = v(1) = 1/4, everything deeper 0
        let v = FnSemiMeasure(|x: &FiniteString| match x.len() {
            0 => Prob::one(),
            1 => p("1/4"),
            _ => Prob::zero(),
        });
        assert_eq!(conditional(&v, &FiniteString::empty(), Bit::Zero), Some(p("1/4")));
        assert_eq!(conditional(&v, &FiniteString::empty(), Bit::One), Some(p("1/4")));
        assert!(check_semimeasure(&v, 6).is_clean());
        // but it is not a full measure: mass leaks at the root
        assert_eq!(check_measure(&v, 1).violation_count(), 1);
        assert_eq!(check_measure(&v, 2).violation_count(), 3);
    }

    #[test]
    fn uniform_is_a_clean_measure_to_depth_8() {
        let uniform = instantiate(&HypothesisSpec::Uniform).unwrap();
        assert!(check_measure(&uniform, 8).is_clean());
    }

    #[test]
    fn broken_map_is_reported_at_the_empty_string() {
        // v(0) + v(1) = 5/4 * v(^)
        let broken = FnSemiMeasure(|x: &FiniteString| match x.len() {
            0 => Prob::one(),
            1 => p("5/8"),
            n => Prob::pow2_neg(n + 2),
        });
        let report = check_semimeasure(&broken, 4);
        assert_eq!(report.additivity.len(), 1);
        assert_eq!(report.additivity[0].at, FiniteString::empty());
        assert_eq!(report.additivity[0].children_sum, BigRational::new(5.into(), 4.into()));
    }
}
