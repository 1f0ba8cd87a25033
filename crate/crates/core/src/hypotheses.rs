//! A catalog of concrete computable measures for populating pools.
//!
//! The idealized theory mixes over an enumeration of all computable
//! measures, which is not effectively enumerable; here a pool is an
//! explicit finite family, and every universality statement downstream is
//! relative to the pool. Pool description files are JSON with rationals
//! written `num/den`:
//!
//! ```json
//! { "members": [
//!     { "kind": "uniform", "weight": "1/2" },
//!     { "kind": "bernoulli", "bias": "3/4", "weight": "1/4" },
//!     { "kind": "markov", "order": 1, "table": [["3/4","1/4"],["1/4","3/4"]], "weight": "1/16" },
//!     { "kind": "point", "prefix": "^", "cycle": "01", "weight": "1/16" },
//!     { "kind": "lz", "horizon": 8, "weight": "1/8" }
//! ] }
//! ```

use std::sync::Arc;

use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{Bit, FiniteString};
use crate::lzprior::{LzError, LzPrior};
use crate::measure::{Measure, SemiMeasure};
use crate::predictor::SemiPredictor;
use crate::prob::Prob;

/// Largest supported Markov order (table size is `2^order`).
pub const MAX_MARKOV_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("markov table has {got} rows, order {order} needs {expected}")]
    MarkovRowCount { order: usize, expected: usize, got: usize },
    #[error("markov row {row} (context {context}) sums to {sum}, not 1")]
    MarkovRowSum { row: usize, context: FiniteString, sum: BigRational },
    #[error("markov order {0} out of range 0..={MAX_MARKOV_ORDER}")]
    MarkovOrder(usize),
    #[error("point hypothesis needs a nonempty cycle")]
    EmptyCycle,
    #[error(transparent)]
    Lz(#[from] LzError),
    #[error("weight {index} is zero; weights must be strictly positive")]
    WeightNotPositive { index: usize },
    #[error("weights sum to {sum}, which exceeds 1")]
    WeightSum { sum: BigRational },
    #[error("{members} members but {weights} weights")]
    LengthMismatch { members: usize, weights: usize },
}

/// Description of one computable measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HypothesisSpec {
    Uniform,
    Bernoulli {
        bias: Prob,
    },
    /// Order-`k` Markov chain. `table[c]` is `[p(0|c), p(1|c)]` with the
    /// contexts `c` in binary order; rows must sum to 1 exactly. The
    /// first `k` positions condition on a zero-padded context.
    Markov {
        order: usize,
        table: Vec<[Prob; 2]>,
    },
    /// Point mass on the eventually periodic sequence `prefix cycle^inf`.
    Point {
        prefix: FiniteString,
        cycle: FiniteString,
    },
    /// The LZ76 simplicity prior at the given horizon.
    Lz {
        horizon: usize,
    },
}

/// Strictly positive prior weights with total at most 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<Prob>,
}

impl WeightVector {
    pub fn new(entries: Vec<Prob>) -> Result<WeightVector, HypothesisError> {
        let mut sum = BigRational::zero();
        for (index, w) in entries.iter().enumerate() {
            if w.is_zero() {
                return Err(HypothesisError::WeightNotPositive { index });
            }
            sum += w.ratio();
        }
        if sum > BigRational::one() {
            return Err(HypothesisError::WeightSum { sum });
        }
        Ok(WeightVector { entries })
    }

    /// `w(i) = 2^-i` for `i = 1..=n`.
    pub fn geometric(n: usize) -> WeightVector {
        WeightVector { entries: (1..=n).map(Prob::pow2_neg).collect() }
    }

    pub fn entries(&self) -> &[Prob] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.entries.iter().map(Prob::ratio).fold(BigRational::zero(), |a, b| a + b)
    }
}

/// An indexed finite family of hypotheses with prior weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PoolFile", into = "PoolFile")]
pub struct HypothesisPool {
    specs: Vec<HypothesisSpec>,
    weights: WeightVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PoolFile {
    members: Vec<PoolEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PoolEntry {
    #[serde(flatten)]
    spec: HypothesisSpec,
    weight: Prob,
}

impl TryFrom<PoolFile> for HypothesisPool {
    type Error = HypothesisError;

    fn try_from(file: PoolFile) -> Result<HypothesisPool, HypothesisError> {
        let (specs, weights) = file.members.into_iter().map(|e| (e.spec, e.weight)).unzip();
        HypothesisPool::new(specs, WeightVector::new(weights)?)
    }
}

impl From<HypothesisPool> for PoolFile {
    fn from(pool: HypothesisPool) -> PoolFile {
        let members = pool
            .specs
            .into_iter()
            .zip(pool.weights.entries)
            .map(|(spec, weight)| PoolEntry { spec, weight })
            .collect();
        PoolFile { members }
    }
}

impl HypothesisPool {
    pub fn new(
        specs: Vec<HypothesisSpec>,
        weights: WeightVector,
    ) -> Result<HypothesisPool, HypothesisError> {
        if specs.len() != weights.len() {
            return Err(HypothesisError::LengthMismatch {
                members: specs.len(),
                weights: weights.len(),
            });
        }
        Ok(HypothesisPool { specs, weights })
    }

    pub fn specs(&self) -> &[HypothesisSpec] {
        &self.specs
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn instantiate_all(&self) -> Result<Vec<Arc<dyn Measure>>, HypothesisError> {
        self.specs.iter().map(instantiate).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pool serializes")
    }

    pub fn from_json(text: &str) -> Result<HypothesisPool, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Builds the measure a spec describes, validating its parameters.
pub fn instantiate(spec: &HypothesisSpec) -> Result<Arc<dyn Measure>, HypothesisError> {
    match spec {
        HypothesisSpec::Uniform => Ok(Arc::new(UniformMeasure)),
        HypothesisSpec::Bernoulli { bias } => Ok(Arc::new(BernoulliMeasure::new(bias.clone()))),
        HypothesisSpec::Markov { order, table } => {
            Ok(Arc::new(MarkovMeasure::new(*order, table.clone())?))
        }
        HypothesisSpec::Point { prefix, cycle } => {
            Ok(Arc::new(PointMeasure::new(prefix.clone(), cycle.clone())?))
        }
        HypothesisSpec::Lz { horizon } => Ok(Arc::new(LzMeasure::new(*horizon)?)),
    }
}

/// A deterministic pool of `n` hypotheses mixing all kinds, with weights
/// `2^-i`. The uniform measure sits at index 1, so the pool mixture is
/// positive on every finite string.
pub fn default_pool(n: usize) -> HypothesisPool {
    assert!(n >= 1, "default_pool needs at least one member");
    let specs: Vec<HypothesisSpec> = (1..=n).map(default_member).collect();
    HypothesisPool::new(specs, WeightVector::geometric(n)).expect("catalog weights are valid")
}

fn default_member(i: usize) -> HypothesisSpec {
    let prob = |s: &str| s.parse::<Prob>().unwrap();
    let string = |s: &str| s.parse::<FiniteString>().unwrap();
    match i {
        1 => HypothesisSpec::Uniform,
        2 => HypothesisSpec::Bernoulli { bias: prob("3/4") },
        3 => HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: string("01") },
        4 => sticky_markov(),
        5 => HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: string("0") },
        6 => HypothesisSpec::Point { prefix: FiniteString::empty(), cycle: string("1") },
        7 => HypothesisSpec::Bernoulli { bias: prob("1/4") },
        8 => HypothesisSpec::Lz { horizon: 8 },
        i => HypothesisSpec::Bernoulli { bias: Prob::new(1, 2 * i as i64).unwrap() },
    }
}

/// The order-1 chain that tends to repeat the previous bit.
pub fn sticky_markov() -> HypothesisSpec {
    let p = |s: &str| s.parse::<Prob>().unwrap();
    HypothesisSpec::Markov {
        order: 1,
        table: vec![[p("3/4"), p("1/4")], [p("1/4"), p("3/4")]],
    }
}

/// The measure with `m(x) = 2^-|x|`.
#[derive(Debug, Clone, Copy)]
pub struct UniformMeasure;

impl SemiMeasure for UniformMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        Prob::pow2_neg(x.len())
    }

    fn conditional(&self, _x: &FiniteString, _b: Bit) -> Option<Prob> {
        Some(Prob::half())
    }
}
impl Measure for UniformMeasure {}

/// Independent bits with a fixed rational bias toward 1.
#[derive(Debug, Clone)]
pub struct BernoulliMeasure {
    p_one: Prob,
    p_zero: Prob,
}

impl BernoulliMeasure {
    pub fn new(bias: Prob) -> BernoulliMeasure {
        BernoulliMeasure { p_zero: bias.complement(), p_one: bias }
    }
}

impl SemiMeasure for BernoulliMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        &self.p_one.pow(x.count_ones()) * &self.p_zero.pow(x.count_zeros())
    }

    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        let dead = (self.p_one.is_zero() && x.count_ones() > 0)
            || (self.p_zero.is_zero() && x.count_zeros() > 0);
        if dead {
            return None;
        }
        Some(match b {
            Bit::Zero => self.p_zero.clone(),
            Bit::One => self.p_one.clone(),
        })
    }
}
impl Measure for BernoulliMeasure {}

/// A finite-order Markov chain over bits with zero-padded startup context.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    order: usize,
    // p[c] = [p(0|c), p(1|c)] with contexts indexed in binary
    table: Vec<[Prob; 2]>,
    all_positive: bool,
}

impl MarkovMeasure {
    pub fn new(order: usize, table: Vec<[Prob; 2]>) -> Result<MarkovMeasure, HypothesisError> {
        if order > MAX_MARKOV_ORDER {
            return Err(HypothesisError::MarkovOrder(order));
        }
        let expected = 1usize << order;
        if table.len() != expected {
            return Err(HypothesisError::MarkovRowCount { order, expected, got: table.len() });
        }
        for (row, probs) in table.iter().enumerate() {
            let sum = probs[0].ratio() + probs[1].ratio();
            if !sum.is_one() {
                return Err(HypothesisError::MarkovRowSum {
                    row,
                    context: FiniteString::from_index(order, row as u64),
                    sum,
                });
            }
        }
        let all_positive = table.iter().all(|row| !row[0].is_zero() && !row[1].is_zero());
        Ok(MarkovMeasure { order, table, all_positive })
    }

    fn context_at(&self, x: &FiniteString, i: usize) -> usize {
        let start = i.saturating_sub(self.order);
        // missing leading bits are zeros, which is just a shorter index
        x.bits()[start..i].iter().fold(0usize, |acc, b| acc << 1 | b.as_usize())
    }
}

impl SemiMeasure for MarkovMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        let mut product = Prob::one();
        for (i, b) in x.iter().enumerate() {
            let row = &self.table[self.context_at(x, i)];
            product = &product * &row[b.as_usize()];
        }
        product
    }

    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        let row = &self.table[self.context_at(x, x.len())];
        if self.all_positive {
            return Some(row[b.as_usize()].clone());
        }
        if self.mass(x).is_zero() {
            return None;
        }
        Some(row[b.as_usize()].clone())
    }
}
impl Measure for MarkovMeasure {}

/// All mass on one eventually periodic sequence.
#[derive(Debug, Clone)]
pub struct PointMeasure {
    prefix: FiniteString,
    cycle: FiniteString,
}

impl PointMeasure {
    pub fn new(prefix: FiniteString, cycle: FiniteString) -> Result<PointMeasure, HypothesisError> {
        if cycle.is_empty() {
            return Err(HypothesisError::EmptyCycle);
        }
        Ok(PointMeasure { prefix, cycle })
    }

    /// The `i`-th bit (0-based) of the supported sequence.
    pub fn bit_at(&self, i: usize) -> Bit {
        if i < self.prefix.len() {
            self.prefix.get(i).unwrap()
        } else {
            self.cycle.get((i - self.prefix.len()) % self.cycle.len()).unwrap()
        }
    }

    pub fn supported_prefix(&self, len: usize) -> FiniteString {
        (0..len).map(|i| self.bit_at(i)).collect()
    }
}

impl SemiMeasure for PointMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        let on_path = x.iter().enumerate().all(|(i, b)| b == self.bit_at(i));
        if on_path {
            Prob::one()
        } else {
            Prob::zero()
        }
    }

    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        if self.mass(x).is_zero() {
            return None;
        }
        Some(if b == self.bit_at(x.len()) { Prob::one() } else { Prob::zero() })
    }
}
impl Measure for PointMeasure {}

/// The measure induced by the LZ prior predictor via chain products.
#[derive(Debug)]
pub struct LzMeasure {
    prior: Arc<LzPrior>,
}

impl LzMeasure {
    pub fn new(horizon: usize) -> Result<LzMeasure, LzError> {
        Ok(LzMeasure { prior: Arc::new(LzPrior::new(horizon)?) })
    }

    pub fn prior(&self) -> &Arc<LzPrior> {
        &self.prior
    }
}

impl SemiMeasure for LzMeasure {
    fn mass(&self, x: &FiniteString) -> Prob {
        let mut product = Prob::one();
        for t in 0..x.len() {
            let step = self
                .prior
                .predict(&x.prefix(t), x.get(t).unwrap())
                .expect("LZ prior is total");
            if step.is_zero() {
                return Prob::zero();
            }
            product = &product * &step;
        }
        product
    }

    fn conditional(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        // chain products cancel; the prior is positive everywhere
        self.prior.predict(x, b)
    }
}
impl Measure for LzMeasure {}
