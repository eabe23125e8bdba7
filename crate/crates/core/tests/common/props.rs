//! Strategies and checks shared by the definition suites and the
//! acceptance run.

use std::collections::BTreeSet;

use super::{random_finite_instance, random_real_instance, rng};
use genbranch::constraint::{BoolExpr, ConstraintExpr, CspInstance, Relation, SetRelation};
use genbranch::domain::{lattice_by_name, Cardinality, DomainDescriptor, DomainValue};
use genbranch::filter::{filter, filter_fixpoint, FilteringKind, DEFAULT_MAX_ROUNDS};
use genbranch::oracle::enumerate_solutions;
use genbranch::select::{choose_ff, choose_naive};
use genbranch::store::{Stack, Store};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const CASES: u32 = 500;
pub const TOL: f64 = 1e-9;

pub fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

pub fn fd_cell() -> impl Strategy<Value = DomainValue> {
    prop::collection::btree_set(-5i64..6, 1..7).prop_map(DomainValue::Finite)
}

pub fn int_cell() -> impl Strategy<Value = DomainValue> {
    (-5i64..5, 0i64..7).prop_map(|(a, w)| DomainValue::int(a, a + w))
}

pub fn set_cell() -> impl Strategy<Value = DomainValue> {
    (prop::collection::btree_set(0i64..7, 0..6), any::<u8>()).prop_map(|(upper, mask)| {
        let lower = upper
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| *v)
            .collect();
        DomainValue::set(lower, upper)
    })
}

pub fn real_cell() -> impl Strategy<Value = DomainValue> {
    (-5.0f64..5.0, prop_oneof![Just(0.0), 0.0f64..4.0])
        .prop_map(|(a, w)| DomainValue::real(a, a + w))
}

pub fn lattice_cell() -> impl Strategy<Value = DomainValue> {
    (-5.0f64..5.0, 0.0f64..4.0, any::<bool>(), any::<bool>()).prop_map(|(a, w, lc, hc)| {
        let l = lattice_by_name("real").unwrap();
        if w == 0.0 {
            DomainValue::lattice(l, a, true, a, true)
        } else {
            DomainValue::lattice(l, a, lc, a + w, hc)
        }
    })
}

pub fn any_cell() -> impl Strategy<Value = DomainValue> {
    prop_oneof![
        fd_cell(),
        int_cell(),
        set_cell(),
        real_cell(),
        lattice_cell()
    ]
}

/// A random non-empty sub-cell, possibly equal to the input.
pub fn sub_cell(c: &DomainValue, r: &mut StdRng) -> DomainValue {
    match c {
        DomainValue::Finite(s) => {
            let mut v: Vec<i64> = s.iter().copied().collect();
            v.shuffle(r);
            let k = r.gen_range(1..=v.len());
            DomainValue::finite(v[..k].iter().copied())
        }
        DomainValue::Int(Some((a, b))) => {
            let lo = r.gen_range(*a..=*b);
            DomainValue::int(lo, r.gen_range(lo..=*b))
        }
        DomainValue::Set(Some((lower, upper))) => {
            let mut lo = lower.clone();
            for v in upper.difference(lower) {
                if r.gen_bool(0.3) {
                    lo.insert(*v);
                }
            }
            let mut hi = lo.clone();
            for v in upper.difference(&lo) {
                if r.gen_bool(0.7) {
                    hi.insert(*v);
                }
            }
            DomainValue::set(lo, hi)
        }
        DomainValue::Real(Some((a, b))) => {
            let lo = a + (b - a) * r.gen_range(0.0..=1.0);
            DomainValue::real(lo, lo + (b - lo) * r.gen_range(0.0..=1.0))
        }
        DomainValue::Lattice(range) => {
            let Some(b) = range.bounds else {
                return c.clone();
            };
            let lo = if r.gen_bool(0.5) {
                b.lo
            } else {
                b.lo + (b.hi - b.lo) * r.gen_range(0.0..0.5)
            };
            let hi = if r.gen_bool(0.5) {
                b.hi
            } else {
                b.hi - (b.hi - lo) * r.gen_range(0.0..0.5)
            };
            let lc = if lo == b.lo {
                b.lo_closed && r.gen_bool(0.7)
            } else {
                r.gen_bool(0.5)
            };
            let hc = if hi == b.hi {
                b.hi_closed && r.gen_bool(0.7)
            } else {
                r.gen_bool(0.5)
            };
            let v = DomainValue::lattice(range.lattice.clone(), lo, lc, hi, hc);
            if v.is_empty() {
                c.clone()
            } else {
                v
            }
        }
        _ => c.clone(),
    }
}

/// Sample members of a cell, with every member for discrete kinds.
pub fn members(c: &DomainValue, r: &mut StdRng) -> Vec<DomainValue> {
    match c {
        DomainValue::Finite(s) => s.iter().map(|v| DomainValue::finite([*v])).collect(),
        DomainValue::Int(Some((a, b))) => (*a..=*b).map(|v| DomainValue::int(v, v)).collect(),
        DomainValue::Set(Some((lower, upper))) => {
            let free: Vec<i64> = upper.difference(lower).copied().collect();
            (0u32..1 << free.len())
                .map(|mask| {
                    let mut s = lower.clone();
                    for (i, v) in free.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            s.insert(*v);
                        }
                    }
                    DomainValue::set(s.clone(), s)
                })
                .collect()
        }
        DomainValue::Real(Some((a, b))) => {
            let mut pts = vec![*a, *b, (a + b) / 2.0];
            pts.extend((0..8).map(|_| a + (b - a) * r.gen_range(0.0..=1.0)));
            pts.into_iter().map(|x| DomainValue::real(x, x)).collect()
        }
        DomainValue::Lattice(range) => {
            let Some(b) = range.bounds else {
                return Vec::new();
            };
            let mut pts: Vec<f64> = (0..8)
                .map(|_| b.lo + (b.hi - b.lo) * r.gen_range(0.0..1.0))
                .collect();
            pts.push((b.lo + b.hi) / 2.0);
            if b.lo_closed {
                pts.push(b.lo);
            }
            if b.hi_closed {
                pts.push(b.hi);
            }
            pts.into_iter()
                .filter(|x| {
                    (*x > b.lo || (b.lo_closed && *x == b.lo))
                        && (*x < b.hi || (b.hi_closed && *x == b.hi))
                })
                .map(|x| DomainValue::lattice(range.lattice.clone(), x, true, x, true))
                .collect()
        }
        _ => Vec::new(),
    }
}

pub fn below(a: &DomainValue, b: &DomainValue) -> bool {
    a.is_subset_of(b).unwrap()
}

pub fn check_precision(c: &DomainValue, seed: u64) -> Result<(), TestCaseError> {
    let s = sub_cell(c, &mut rng(seed));
    prop_assert!(below(&s, c));
    prop_assert!(s.precision().unwrap() <= c.precision().unwrap());
    if s != *c {
        prop_assert!(
            s.precision().unwrap() < c.precision().unwrap(),
            "{} vs {}",
            s,
            c
        );
    }
    Ok(())
}

pub fn check_split(c: &DomainValue, seed: u64) -> Result<(), TestCaseError> {
    if c.cardinality_class() != Cardinality::Many {
        prop_assert!(c.split().is_err());
        return Ok(());
    }
    let parts = c.split().unwrap();
    prop_assert!(parts.len() >= 2);
    for p in &parts {
        prop_assert!(!p.is_empty());
        prop_assert!(below(p, c) && p != c, "part {} of {}", p, c);
        prop_assert!(p.precision().unwrap() < c.precision().unwrap());
    }
    for m in members(c, &mut rng(seed)) {
        prop_assert!(parts.iter().any(|p| below(&m, p)), "{} lost from {}", m, c);
    }
    Ok(())
}

pub fn store_strategy() -> impl Strategy<Value = Store> {
    prop::collection::vec(
        prop_oneof![fd_cell(), int_cell(), set_cell(), real_cell()],
        1..6,
    )
    .prop_map(Store::new)
}

/// Small instances over Booleans, sets and a short integer range, so every
/// constraint family reaches the filters.
pub fn mixed_instance(r: &mut StdRng) -> CspInstance {
    let universe: BTreeSet<i64> = [1, 2, 3].into();
    let vars = vec![
        ("a".to_string(), DomainDescriptor::Bool),
        ("b".to_string(), DomainDescriptor::Bool),
        (
            "s".to_string(),
            DomainDescriptor::SetInterval {
                universe: universe.clone(),
            },
        ),
        ("t".to_string(), DomainDescriptor::SetInterval { universe }),
        (
            "n".to_string(),
            DomainDescriptor::IntInterval { lo: 0, hi: 3 },
        ),
    ];
    let lit = |r: &mut StdRng| {
        let v = BoolExpr::Var(r.gen_range(0..2));
        if r.gen_bool(0.5) {
            BoolExpr::negate(v)
        } else {
            v
        }
    };
    let mut cs = Vec::new();
    for _ in 0..r.gen_range(1..=4) {
        cs.push(match r.gen_range(0..6) {
            0 => {
                let (x, y) = (lit(r), lit(r));
                ConstraintExpr::Bool(if r.gen_bool(0.5) {
                    BoolExpr::Or(vec![x, y])
                } else {
                    BoolExpr::And(vec![x, BoolExpr::Or(vec![y, lit(r)])])
                })
            }
            1 => ConstraintExpr::Set(SetRelation::Member {
                element: r.gen_range(1..=3),
                var: r.gen_range(2..4),
            }),
            2 => ConstraintExpr::Set(SetRelation::Subset { sub: 2, sup: 3 }),
            3 => ConstraintExpr::Set(SetRelation::Card {
                var: r.gen_range(2..4),
                rel: *[Relation::Le, Relation::Ge, Relation::Eq, Relation::Ne]
                    .choose(r)
                    .unwrap(),
                n: r.gen_range(0..=3),
            }),
            4 => ConstraintExpr::linear(
                vec![(1.0, 0), (1.0, 1), (r.gen_range(-2..=2) as f64, 4)],
                *[Relation::Le, Relation::Ge, Relation::Eq, Relation::Ne]
                    .choose(r)
                    .unwrap(),
                r.gen_range(-1..=4) as f64,
            ),
            _ => ConstraintExpr::table(vec![0, 4], vec![vec![0, 1], vec![1, 2], vec![1, 3]]),
        });
    }
    CspInstance::new(vars, cs).unwrap()
}

pub fn random_substore(inst: &CspInstance, r: &mut StdRng) -> Store {
    Store::new(
        inst.initial
            .cells()
            .iter()
            .map(|c| sub_cell(c, r))
            .collect(),
    )
}

pub fn check_filter_conditions(inst: &CspInstance, s: &Store) -> Result<(), TestCaseError> {
    let below_s = enumerate_solutions(&inst.clone().with_initial_store(s.clone()).unwrap())
        .unwrap()
        .solutions;
    for kind in [FilteringKind::ConsistencyCheck, FilteringKind::fixpoint()] {
        let f = filter(kind, &inst.constraints, s, TOL);
        // (a) contractance
        prop_assert!(f.leq(s).unwrap(), "{:?}: {} not below {}", kind, f, s);
        // (b) no solution below the input is lost
        for sol in &below_s {
            prop_assert!(sol.leq(&f).unwrap(), "{:?} lost {} from {}", kind, sol, s);
        }
        // (c) a consistent ground result is a solution
        if f.is_consistent() && !f.is_divisible() {
            prop_assert!(
                inst.is_solution(&f, TOL),
                "{:?} kept non-solution {}",
                kind,
                f
            );
        }
    }
    let (once, stats) = filter_fixpoint(&inst.constraints, s, DEFAULT_MAX_ROUNDS, TOL);
    if !stats.hit_limit {
        let (twice, _) = filter_fixpoint(&inst.constraints, &once, DEFAULT_MAX_ROUNDS, TOL);
        prop_assert_eq!(twice, once);
    }
    Ok(())
}

pub fn check_set_family(c: &DomainValue) -> Result<(), TestCaseError> {
    if c.cardinality_class() != Cardinality::Many {
        return Ok(());
    }
    let parts = c.split().unwrap();
    let mut r = rng(0);
    let family = members(c, &mut r);
    let mut counted = 0;
    for p in &parts {
        counted += members(p, &mut r).len();
    }
    // the two halves share no member set
    prop_assert_eq!(counted, family.len());
    Ok(())
}

pub fn check_non_divisible(c: &DomainValue, seed: u64) -> Result<(), TestCaseError> {
    let point = members(c, &mut rng(seed)).swap_remove(0);
    prop_assert_eq!(point.cardinality_class(), Cardinality::One);
    prop_assert!(point.split().is_err());
    prop_assert!(c.empty_like().split().is_err());
    Ok(())
}

pub fn check_selectors(s: &Store) -> Result<(), TestCaseError> {
    let divisible: Vec<usize> = (0..s.len())
        .filter(|&i| s.cell(i).cardinality_class() == Cardinality::Many)
        .collect();
    if divisible.is_empty() {
        prop_assert!(choose_naive(s).is_err());
        prop_assert!(choose_ff(s).is_err());
        return Ok(());
    }
    let j = choose_naive(s).unwrap();
    prop_assert_eq!(j, divisible[0]);
    for i in 0..j {
        prop_assert!(s.cell(i).is_singleton());
    }
    let f = choose_ff(s).unwrap();
    prop_assert!(divisible.contains(&f));
    let pf = s.cell(f).precision().unwrap();
    for &i in &divisible {
        let pi = s.cell(i).precision().unwrap();
        prop_assert!(pf <= pi);
        if i < f {
            prop_assert!(pi > pf, "tie at {} must win over {}", i, f);
        }
    }
    Ok(())
}

pub fn check_store_order(s: &Store, seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let t = Store::new(s.cells().iter().map(|c| sub_cell(c, &mut r)).collect());
    let u = Store::new(t.cells().iter().map(|c| sub_cell(c, &mut r)).collect());
    prop_assert!(s.leq(s).unwrap());
    prop_assert!(t.leq(s).unwrap() && u.leq(&t).unwrap() && u.leq(s).unwrap());
    if s.leq(&t).unwrap() {
        prop_assert_eq!(s, &t);
    }
    prop_assert_eq!(t.lt(s).unwrap(), &t != s);
    let p = Stack::from(vec![u.clone(), t.clone()]);
    let q = Stack::from(vec![s.clone()]);
    prop_assert!(p.covered_by(&q).unwrap());
    prop_assert!(p.covered_by(&p).unwrap());
    Ok(())
}

pub fn check_filters_finite(seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let inst = random_finite_instance(&mut r);
    let s = random_substore(&inst, &mut r);
    check_filter_conditions(&inst, &s)
}

pub fn check_filters_mixed(seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let inst = mixed_instance(&mut r);
    let s = random_substore(&inst, &mut r);
    check_filter_conditions(&inst, &s)
}

pub fn check_real_narrowing(seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let inst = random_real_instance(&mut r);
    let s = random_substore(&inst, &mut r);
    let f = filter(FilteringKind::fixpoint(), &inst.constraints, &s, TOL);
    prop_assert!(f.leq(&s).unwrap());
    for _ in 0..30 {
        let pt = Store::new(
            s.cells()
                .iter()
                .map(|c| {
                    let (a, b) = c.numeric_hull().unwrap();
                    let x = a + (b - a) * r.gen_range(0.0..=1.0);
                    DomainValue::real(x, x)
                })
                .collect(),
        );
        if inst.is_solution(&pt, 0.0) {
            prop_assert!(
                pt.leq(&f).unwrap(),
                "{} lost by narrowing {} to {}",
                pt,
                s,
                f
            );
        }
    }
    Ok(())
}
