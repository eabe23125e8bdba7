mod common;

use common::{random_finite_instance, random_real_instance, rng};
use genbranch::cost::{CostExpr, CostOrdering, CostSpec, Direction};
use genbranch::engine::{Schema, SolverConfig};
use genbranch::filter::FilteringKind;
use genbranch::model::{parse_model, print_model};
use genbranch::select::SelectorKind;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

fn random_config(n: usize, r: &mut StdRng) -> SolverConfig {
    let sum = |r: &mut StdRng| CostExpr::Sum {
        vars: (0..n).filter(|_| r.gen_bool(0.6)).collect(),
    };
    let cost = match r.gen_range(0..5) {
        0 => CostSpec::classical(r.gen_range(0..4) as f64),
        1 => CostSpec::minimise(sum(r)),
        2 => CostSpec::maximise(sum(r)),
        3 => CostSpec::compound(
            vec![sum(r), sum(r)],
            CostOrdering::Lexicographic(vec![Direction::Max, Direction::Min]),
        )
        .unwrap(),
        _ => CostSpec::compound(
            vec![sum(r), CostExpr::Constant { value: 2.5 }],
            CostOrdering::Componentwise(vec![Direction::Min, Direction::Max]),
        )
        .unwrap(),
    };
    SolverConfig {
        epsilon: r.gen_range(0..5) as f64 * 0.125,
        filtering: if r.gen_bool(0.5) {
            FilteringKind::ConsistencyCheck
        } else {
            FilteringKind::FixpointPropagation {
                max_rounds: r.gen_range(1..20_000),
            }
        },
        selector: if r.gen_bool(0.5) {
            SelectorKind::Naive
        } else {
            SelectorKind::FirstFail
        },
        cost,
        schema: if r.gen_bool(0.5) {
            Schema::Plain
        } else {
            Schema::Extended
        },
        keep_full_stack: r.gen_bool(0.5),
        trace: false,
        node_budget: r.gen_range(1..1_000_000),
        tolerance: 1e-9,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_models_parse_back_identically(seed in any::<u64>(), real in any::<bool>()) {
        let mut r = rng(seed);
        let inst = if real { random_real_instance(&mut r) } else { random_finite_instance(&mut r) };
        let cfg = random_config(inst.arity(), &mut r);
        let text = print_model(&inst, &cfg);
        let (inst2, cfg2) = parse_model(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&inst2, &inst);
        prop_assert_eq!(&cfg2, &cfg);
        prop_assert_eq!(print_model(&inst2, &cfg2), text);
    }
}
