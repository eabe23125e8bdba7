#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;

use genbranch::constraint::{ConstraintExpr, CspInstance, Relation};
use genbranch::domain::DomainDescriptor;
use genbranch::engine::SolverConfig;
use genbranch::filter::FilteringKind;
use genbranch::select::SelectorKind;
use genbranch::store::Store;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const RANDOM_INSTANCES: u64 = 200;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ seed)
}

pub fn appendix() -> CspInstance {
    let vars = (1..=3)
        .map(|i| {
            (
                format!("x{i}"),
                DomainDescriptor::IntInterval { lo: 0, hi: 1 },
            )
        })
        .collect();
    let c = ConstraintExpr::linear(vec![(1.0, 0), (1.0, 1), (1.0, 2)], Relation::Le, 1.0);
    CspInstance::new(vars, vec![c]).unwrap()
}

fn random_domain(rng: &mut StdRng) -> DomainDescriptor {
    match rng.gen_range(0..3) {
        0 => DomainDescriptor::Bool,
        1 => {
            let lo = rng.gen_range(-2..=2);
            DomainDescriptor::IntInterval {
                lo,
                hi: lo + rng.gen_range(0..=3),
            }
        }
        _ => {
            let mut pool: Vec<i64> = (-3..=4).collect();
            pool.shuffle(rng);
            let n = rng.gen_range(1..=4);
            DomainDescriptor::FiniteEnum(pool[..n].iter().copied().collect())
        }
    }
}

fn values(d: &DomainDescriptor) -> Vec<i64> {
    match d {
        DomainDescriptor::Bool => vec![0, 1],
        DomainDescriptor::IntInterval { lo, hi } => (*lo..=*hi).collect(),
        DomainDescriptor::FiniteEnum(s) => s.iter().copied().collect(),
        _ => unreachable!(),
    }
}

/// Up to 4 variables with up to 4 values each, mixing linear and
/// extensional constraints.
pub fn random_finite_instance(rng: &mut StdRng) -> CspInstance {
    let n = rng.gen_range(1..=4);
    let domains: Vec<DomainDescriptor> = (0..n).map(|_| random_domain(rng)).collect();
    let mut constraints = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=n);
            let terms = vars[..k]
                .iter()
                .map(|&v| {
                    let c = *[-2.0, -1.0, 1.0, 2.0].choose(rng).unwrap();
                    (c, v)
                })
                .collect();
            let rel = *[Relation::Le, Relation::Ge, Relation::Eq, Relation::Ne]
                .choose(rng)
                .unwrap();
            constraints.push(ConstraintExpr::linear(
                terms,
                rel,
                rng.gen_range(-3..=4) as f64,
            ));
        } else {
            let k = rng.gen_range(1..=n.min(3));
            let scope: Vec<usize> = vars[..k].to_vec();
            let mut tuples = vec![Vec::new()];
            for &v in &scope {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        values(&domains[v]).into_iter().map(move |x| {
                            let mut t = t.clone();
                            t.push(x);
                            t
                        })
                    })
                    .collect();
            }
            let keep = rng.gen_range(0.2..0.9);
            tuples.retain(|_| rng.gen_bool(keep));
            constraints.push(ConstraintExpr::table(scope, tuples));
        }
    }
    let vars = domains
        .into_iter()
        .enumerate()
        .map(|(i, d)| (format!("v{i}"), d))
        .collect();
    CspInstance::new(vars, constraints).unwrap()
}

/// Two or three real variables over small boxes with linear constraints.
pub fn random_real_instance(rng: &mut StdRng) -> CspInstance {
    let n = rng.gen_range(2..=3);
    let vars = (0..n)
        .map(|i| {
            let lo = rng.gen_range(-2..=0) as f64;
            let hi = lo + rng.gen_range(1..=3) as f64;
            (format!("r{i}"), DomainDescriptor::RealInterval { lo, hi })
        })
        .collect();
    let mut constraints = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let mut terms = Vec::new();
        for v in 0..n {
            if rng.gen_bool(0.7) {
                terms.push((*[-1.0, 1.0, 2.0].choose(rng).unwrap(), v));
            }
        }
        if terms.is_empty() {
            continue;
        }
        let rel = *[Relation::Le, Relation::Ge].choose(rng).unwrap();
        constraints.push(ConstraintExpr::linear(
            terms,
            rel,
            rng.gen_range(-1..=2) as f64,
        ));
    }
    CspInstance::new(vars, constraints).unwrap()
}

/// Two store lists hold the same stores, ignoring order and duplicates.
pub fn same_store_set(a: &[Store], b: &[Store]) -> bool {
    a.iter().all(|s| b.contains(s)) && b.iter().all(|s| a.contains(s))
}

pub fn set(v: &[i64]) -> BTreeSet<i64> {
    v.iter().copied().collect()
}

/// Both filters crossed with both selectors.
pub fn configs() -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for filtering in [FilteringKind::ConsistencyCheck, FilteringKind::fixpoint()] {
        for selector in [SelectorKind::Naive, SelectorKind::FirstFail] {
            out.push(SolverConfig {
                filtering,
                selector,
                ..SolverConfig::default()
            });
        }
    }
    out
}

pub fn with_eps(cfg: &SolverConfig, epsilon: f64) -> SolverConfig {
    SolverConfig {
        epsilon,
        ..cfg.clone()
    }
}

/// The 0/1 instance with each cell widened to a real interval.
pub fn widened_appendix(width: f64) -> CspInstance {
    let vars = (1..=3)
        .map(|i| {
            (
                format!("x{i}"),
                DomainDescriptor::RealInterval { lo: 0.0, hi: width },
            )
        })
        .collect();
    let c = ConstraintExpr::linear(vec![(1.0, 0), (1.0, 1), (1.0, 2)], Relation::Le, 1.0);
    CspInstance::new(vars, vec![c]).unwrap()
}

/// With non-negative coefficients and `<=`, a box covers a solution
/// exactly when its lower corner satisfies the constraint.
pub fn covers_a_solution(s: &Store) -> bool {
    let lows: f64 = s.cells().iter().map(|c| c.numeric_hull().unwrap().0).sum();
    lows <= 1.0 + 1e-9
}
