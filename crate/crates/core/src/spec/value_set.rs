//! Value sets: the admissible values (and default sampler) of a read action.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default sampler bounds. These keep generated traces short and all
/// arithmetic over generated content inside 64-bit range; membership is
/// unaffected.
pub const SAMPLE_INT_LO: i64 = -100;
pub const SAMPLE_INT_HI: i64 = 100;
pub const SAMPLE_NAT_HI: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueSet {
    /// All integers.
    Ints,
    /// Naturals: value >= 0.
    Nats,
    /// Closed interval, requires lo <= hi.
    Range(i64, i64),
}

impl ValueSet {
    pub fn contains(&self, value: i64) -> bool {
        match self {
            ValueSet::Ints => true,
            ValueSet::Nats => value >= 0,
            ValueSet::Range(lo, hi) => (*lo..=*hi).contains(&value),
        }
    }

    /// Draws a member using the default bounds.
    pub fn sample(&self, rng: &mut impl Rng) -> i64 {
        match self {
            ValueSet::Ints => rng.random_range(SAMPLE_INT_LO..=SAMPLE_INT_HI),
            ValueSet::Nats => rng.random_range(0..=SAMPLE_NAT_HI),
            ValueSet::Range(lo, hi) => rng.random_range(*lo..=*hi),
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSet::Ints => f.write_str("ints"),
            ValueSet::Nats => f.write_str("nats"),
            ValueSet::Range(lo, hi) => write!(f, "range({lo}, {hi})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn membership() {
        assert!(ValueSet::Ints.contains(-7));
        assert!(ValueSet::Nats.contains(0));
        assert!(!ValueSet::Nats.contains(-1));
        assert!(ValueSet::Range(-3, 3).contains(3));
        assert!(!ValueSet::Range(-3, 3).contains(4));
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        for vs in [ValueSet::Ints, ValueSet::Nats, ValueSet::Range(-9, 9)] {
            for _ in 0..500 {
                assert!(vs.contains(vs.sample(&mut rng)));
            }
        }
    }

    #[test]
    fn singleton_range_sample() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(ValueSet::Range(5, 5).sample(&mut rng), 5);
    }
}
