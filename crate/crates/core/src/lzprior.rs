//! Lempel-Ziv (LZ76) complexity and the induced simplicity prior.
//!
//! The parse follows the exhaustive-history production rule: scanning left
//! to right, the next phrase is the shortest prefix `w` of the remaining
//! suffix that does not occur as a substring of everything parsed so far
//! concatenated with `w` minus its last symbol. Matches may overlap into
//! the phrase itself. When the input runs out first, the final phrase is
//! the remainder, which may be a repeat.
//!
//! The complexity in bits is `K(x) = C(x) * ceil(log2(|x| + 1))` with
//! `C` the phrase count, and `2^-K` acts as an unnormalized prior mass: a
//! cheap, computable stand-in for incompressibility. [`LzPrior`] turns it
//! into an exact predictor by conditioning the normalized mass over a
//! length class on the observed prefix.

use std::sync::OnceLock;

use num::rational::BigRational;
use num::Zero;
use thiserror::Error;

use crate::bits::{Bit, FiniteString};
use crate::predictor::{Predictor, SemiPredictor};
use crate::prob::Prob;

/// Largest supported prior horizon; table construction is `O(2^horizon)`.
pub const MAX_HORIZON: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LzError {
    #[error("horizon {0} out of range 1..={MAX_HORIZON}")]
    HorizonOutOfRange(usize),
}

/// An exhaustive-history parse of a finite string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LzParse {
    pub input: FiniteString,
    pub phrases: Vec<FiniteString>,
}

impl LzParse {
    pub fn phrase_count(&self) -> usize {
        self.phrases.len()
    }
}

fn window_eq(bits: &[Bit], q: usize, i: usize, k: usize) -> bool {
    bits[q..q + k] == bits[i..i + k]
}

/// Deterministic exhaustive-history parse; `C(^) = 0`.
pub fn lz76_parse(x: &FiniteString) -> LzParse {
    let bits = x.bits();
    let n = bits.len();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        let mut k = 1;
        loop {
            // does x[i..i+k] occur in x[0..i+k-1]? start positions q < i
            let occurs = (0..i).any(|q| window_eq(bits, q, i, k));
            if !occurs || i + k == n {
                break;
            }
            k += 1;
        }
        phrases.push(FiniteString::from_bits(bits[i..i + k].to_vec()));
        i += k;
    }
    LzParse { input: x.clone(), phrases }
}

fn ceil_log2(m: usize) -> usize {
    debug_assert!(m >= 1);
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// Complexity in bits: phrase count scaled by the per-phrase pointer cost
/// for the length class. Zero for the empty string.
pub fn lz_complexity(x: &FiniteString) -> usize {
    if x.is_empty() {
        return 0;
    }
    lz76_parse(x).phrase_count() * ceil_log2(x.len() + 1)
}

/// Unnormalized prior mass `2^-K(x)`.
pub fn lz_prior_mass(x: &FiniteString) -> Prob {
    Prob::pow2_neg(lz_complexity(x))
}

/// Total mass `sum 2^-K(y)` over the length-`n` class. Not a probability
/// in general; it is the normalizer of the class prior.
pub fn lz_class_normalizer(n: usize) -> BigRational {
    assert!(n <= MAX_HORIZON);
    crate::bits::strings_of_length(n)
        .map(|y| lz_prior_mass(&y).into_ratio())
        .fold(BigRational::zero(), |acc, m| acc + m)
}

/// The LZ simplicity prior as a sequential predictor.
///
/// Over the length-`h` class, each string gets normalized mass
/// proportional to `2^-K`. For a prefix shorter than `h` the prediction
/// is the conditional of that class prior marginalized to prefixes:
///
/// ```text
/// p(x, b) = S(xb) / S(x),    S(z) = sum over |y| = h, y extending z, of 2^-K(y)
/// ```
///
/// Longer prefixes slide a window: the conditional is taken on the last
/// `h - 1` observed bits, keeping the predictor total at every length.
/// All masses are positive, so the predictor never goes into a coma.
#[derive(Debug)]
pub struct LzPrior {
    horizon: usize,
    // table[l][i] = S(z) for the length-l string with index i
    table: OnceLock<Vec<Vec<BigRational>>>,
}

impl LzPrior {
    pub fn new(horizon: usize) -> Result<LzPrior, LzError> {
        if horizon == 0 || horizon > MAX_HORIZON {
            return Err(LzError::HorizonOutOfRange(horizon));
        }
        Ok(LzPrior { horizon, table: OnceLock::new() })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn table(&self) -> &Vec<Vec<BigRational>> {
        self.table.get_or_init(|| {
            let h = self.horizon;
            let mut table: Vec<Vec<BigRational>> = Vec::with_capacity(h + 1);
            table.resize_with(h + 1, Vec::new);
            table[h] = crate::bits::strings_of_length(h)
                .map(|y| lz_prior_mass(&y).into_ratio())
                .collect();
            for l in (0..h).rev() {
                let child = std::mem::take(&mut table[l + 1]);
                table[l] = (0..1usize << l)
                    .map(|i| &child[2 * i] + &child[2 * i + 1])
                    .collect();
                table[l + 1] = child;
            }
            table
        })
    }

    /// Normalized class-prior mass `P_h(y)` for `|y| = h`.
    pub fn class_prior(&self, y: &FiniteString) -> Prob {
        assert_eq!(y.len(), self.horizon, "class prior is over the horizon length class");
        let table = self.table();
        let mass = &table[self.horizon][y.to_index() as usize];
        let total = &table[0][0];
        Prob::from_ratio(mass / total).expect("class mass within total")
    }
}

impl SemiPredictor for LzPrior {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        let context = if x.len() < self.horizon { x.clone() } else { x.tail(self.horizon - 1) };
        let table = self.table();
        let parent = &table[context.len()][context.to_index() as usize];
        let child_index = (context.to_index() as usize) << 1 | b.as_usize();
        let child = &table[context.len() + 1][child_index];
        Some(Prob::from_ratio(child / parent).expect("marginal conditional within [0,1]"))
    }
}
impl Predictor for LzPrior {}
