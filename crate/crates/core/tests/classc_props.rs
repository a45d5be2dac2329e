mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operations_match_pointwise_definitions(seed in any::<u64>(), r in 1usize..=3) {
        let mut rng = common::rng(seed);
        if let Err(e) = common::classc_instance(&mut rng, r, 12) {
            prop_assert!(false, "seed {seed}: {e}");
        }
    }
}

#[test]
fn rank_four_instances() {
    let mut rng = common::rng(4);
    for _ in 0..10 {
        common::classc_instance(&mut rng, 4, 8).unwrap();
    }
}
