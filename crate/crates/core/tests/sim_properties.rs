mod common;

use common::suites::{self, orthogonal, productive};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn prefixes_are_sound_and_replayable(spec in productive(), seed in any::<u64>(), k in 0..6usize) {
        suites::prefix_sound_and_replayable(&spec, seed, k)?;
    }

    #[test]
    fn orthogonal_systems_ignore_the_seed(spec in orthogonal(), seed in any::<u64>(), other in any::<u64>(), k in 0..6usize) {
        suites::seed_independent(&spec, seed, other, k)?;
    }
}
