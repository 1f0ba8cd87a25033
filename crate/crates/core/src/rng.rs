//! Seeded randomness.
//!
//! All sampling in this workspace uses splitmix64 (Steele, Lea, Flood 2014),
//! fixed here once so that every seeded experiment is reproducible bit for
//! bit across runs, platforms, and thread counts. Independent streams for
//! sample `i` of a run are seeded with the `i`-th output of a generator
//! seeded by the run seed; see [`stream_seeds`].

/// The splitmix64 generator. State advances by the golden-gamma constant;
/// output is the finalizer mix of the new state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Derives `n` independent stream seeds from a run seed.
pub fn stream_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.next_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_outputs() {
        // splitmix64 reference vector for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn streams_are_deterministic() {
        assert_eq!(stream_seeds(42, 3), stream_seeds(42, 3));
        assert_ne!(stream_seeds(42, 2)[0], stream_seeds(42, 2)[1]);
    }
}
