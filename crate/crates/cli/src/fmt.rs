//! Deterministic text rendering for CSV cells.
//!
//! Exact rationals always travel next to their decimal renderings; the
//! decimals are display-only. Everything here is a pure function of the
//! value, so identical runs emit identical bytes.

use unipred_core::prob::Prob;

/// Significant digits for decimal renderings of probabilities.
pub const DECIMAL_DIGITS: usize = 12;

pub fn prob_cell(p: &Prob) -> String {
    format!("{},{}", p, p.decimal(DECIMAL_DIGITS))
}

/// Bit counts (losses, regrets, log weights) at fixed six decimals;
/// infinities print as `inf`/`-inf`.
pub fn bits_cell(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_are_stable() {
        let p: Prob = "3/4".parse().unwrap();
        assert_eq!(prob_cell(&p), "3/4,0.75");
        assert_eq!(bits_cell(1.0), "1.000000");
        assert_eq!(bits_cell(f64::INFINITY), "inf");
        assert_eq!(bits_cell(f64::NEG_INFINITY), "-inf");
    }
}
