//! Property suites for the definitions the schema is built from: filtering
//! conditions, splitting, precision maps, selectors and the orderings.

mod common;

use common::props::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn fd_precision_is_strictly_monotone(c in fd_cell(), seed in any::<u64>()) { check_precision(&c, seed)?; }
    #[test]
    fn int_precision_is_strictly_monotone(c in int_cell(), seed in any::<u64>()) { check_precision(&c, seed)?; }
    #[test]
    fn set_precision_is_strictly_monotone(c in set_cell(), seed in any::<u64>()) { check_precision(&c, seed)?; }
    #[test]
    fn real_precision_is_strictly_monotone(c in real_cell(), seed in any::<u64>()) { check_precision(&c, seed)?; }
    #[test]
    fn lattice_precision_is_strictly_monotone(c in lattice_cell(), seed in any::<u64>()) { check_precision(&c, seed)?; }

    #[test]
    fn fd_split_is_complete_and_contracting(c in fd_cell(), seed in any::<u64>()) { check_split(&c, seed)?; }
    #[test]
    fn int_split_is_complete_and_contracting(c in int_cell(), seed in any::<u64>()) { check_split(&c, seed)?; }
    #[test]
    fn set_split_is_complete_and_contracting(c in set_cell(), seed in any::<u64>()) { check_split(&c, seed)?; }
    #[test]
    fn real_split_is_complete_and_contracting(c in real_cell(), seed in any::<u64>()) { check_split(&c, seed)?; }
    #[test]
    fn lattice_split_is_complete_and_contracting(c in lattice_cell(), seed in any::<u64>()) { check_split(&c, seed)?; }

    #[test]
    fn set_interval_split_partitions_the_subset_family(c in set_cell()) { check_set_family(&c)?; }

    #[test]
    fn non_divisible_cells_do_not_split(c in any_cell(), seed in any::<u64>()) { check_non_divisible(&c, seed)?; }

    #[test]
    fn selectors_return_divisible_cells(s in store_strategy()) { check_selectors(&s)?; }

    #[test]
    fn store_order_is_a_partial_order(s in store_strategy(), seed in any::<u64>()) { check_store_order(&s, seed)?; }

    #[test]
    fn filters_satisfy_their_conditions_on_finite_instances(seed in any::<u64>()) { check_filters_finite(seed)?; }

    #[test]
    fn filters_satisfy_their_conditions_on_bool_and_set_instances(seed in any::<u64>()) { check_filters_mixed(seed)?; }

    #[test]
    fn real_narrowing_keeps_sampled_solutions(seed in any::<u64>()) { check_real_narrowing(seed)?; }
}
