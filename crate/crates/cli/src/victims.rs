//! Victim predictors for the diagonal adversaries.
//!
//! A victim token names a predictor:
//!
//! * `uniform`
//! * `bernoulli:<num/den>`
//! * `markov-sticky` (the catalog order-1 chain)
//! * `lz:<horizon>`
//! * `solomonoff:<max-len>:<max-steps>`: the normalized
//!   algorithmic-probability predictor at that bound, extended uniformly
//!   where it is undefined so the victim is total
//! * `solomonoff-partial:<max-len>:<max-steps>`: the bare normalized
//!   predictor; traces may end in a coma
//! * `default:<n>`: the default pool mixture predictor
//! * anything else is read as a pool file path
//!
//! An engine cache keyed by bound avoids re-enumerating machines when
//! several victims share one.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use unipred_core::hypotheses::{
    default_pool, instantiate, sticky_markov, HypothesisPool, HypothesisSpec,
};
use unipred_core::lzprior::LzPrior;
use unipred_core::mixture::MixtureMeasure;
use unipred_core::monovm::{AlgProbEngine, ResourceBound, SolomonoffMode};
use unipred_core::predictor::{predictor_from, SemiPredictor, UniformFallback};
use unipred_core::prob::Prob;

pub struct Victim {
    pub name: String,
    pub predictor: Box<dyn SemiPredictor>,
}

pub fn parse_victim(token: &str) -> Result<Victim> {
    parse_victim_with(token, &mut |bound| Arc::new(AlgProbEngine::new(bound)))
}

/// Like [`parse_victim`], with caller-provided engine construction so a
/// shared cache can be injected.
pub fn parse_victim_with(
    token: &str,
    engine: &mut dyn FnMut(ResourceBound) -> Arc<AlgProbEngine>,
) -> Result<Victim> {
    let name = token.to_string();
    let predictor: Box<dyn SemiPredictor> = match token.split(':').collect::<Vec<_>>()[..] {
        ["uniform"] => Box::new(predictor_from(instantiate(&HypothesisSpec::Uniform)?)),
        ["bernoulli", bias] => {
            let bias: Prob = bias.parse().with_context(|| format!("bad bias {bias:?}"))?;
            Box::new(predictor_from(instantiate(&HypothesisSpec::Bernoulli { bias })?))
        }
        ["markov-sticky"] => Box::new(predictor_from(instantiate(&sticky_markov())?)),
        ["lz", horizon] => {
            let horizon: usize = horizon.parse().context("bad lz horizon")?;
            Box::new(LzPrior::new(horizon)?)
        }
        ["solomonoff", len, steps] => {
            let bound = parse_bound(len, steps)?;
            Box::new(UniformFallback(engine(bound).predictor(SolomonoffMode::Normalized)))
        }
        ["solomonoff-partial", len, steps] => {
            let bound = parse_bound(len, steps)?;
            Box::new(engine(bound).predictor(SolomonoffMode::Normalized))
        }
        ["default", n] => {
            let n: usize = n.parse().context("bad default pool size")?;
            if n == 0 {
                bail!("default pool size must be at least 1");
            }
            Box::new(MixtureMeasure::new(&default_pool(n))?.predictor())
        }
        _ => {
            let text = std::fs::read_to_string(Path::new(token))
                .with_context(|| format!("victim {token:?} is not a token or readable file"))?;
            let pool = HypothesisPool::from_json(&text)
                .with_context(|| format!("cannot parse pool file {token:?}"))?;
            Box::new(MixtureMeasure::new(&pool)?.predictor())
        }
    };
    Ok(Victim { name, predictor })
}

fn parse_bound(len: &str, steps: &str) -> Result<ResourceBound> {
    Ok(ResourceBound::new(
        len.parse().context("bad max program length")?,
        steps.parse().context("bad max steps")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use unipred_core::bits::{Bit, FiniteString};

    #[test]
    fn tokens_parse() {
        for token in ["uniform", "bernoulli:3/4", "markov-sticky", "lz:6", "default:3"] {
            let v = parse_victim(token).unwrap();
            assert!(v.predictor.predict(&FiniteString::empty(), Bit::One).is_some(), "{token}");
        }
        assert!(parse_victim("bernoulli:x").is_err());
        assert!(parse_victim("no/such/file.json").is_err());
    }

    #[test]
    fn solomonoff_victims_share_cached_engines() {
        let mut calls = 0;
        let mut cache: Option<Arc<AlgProbEngine>> = None;
        let mut make = |bound: ResourceBound| {
            calls += 1;
            cache.get_or_insert_with(|| Arc::new(AlgProbEngine::new(bound))).clone()
        };
        let total = parse_victim_with("solomonoff:9:40", &mut make).unwrap();
        let partial = parse_victim_with("solomonoff-partial:9:40", &mut make).unwrap();
        assert_eq!(calls, 2);
        let x = FiniteString::empty();
        assert_eq!(
            total.predictor.predict(&x, Bit::Zero),
            partial.predictor.predict(&x, Bit::Zero)
        );
    }
}
