//! Brute-force ground truth on small finite instances.
//!
//! Enumerates the Cartesian product of the initial store's cells and keeps
//! the assignments that satisfy every constraint. The constraint semantics
//! here are evaluated on plain value tuples and share no code with the
//! engine's filtering, narrowing or splitting.

use std::collections::BTreeSet;

use crate::constraint::{BoolExpr, ConstraintExpr, CspInstance, Relation, SetRelation};
use crate::cost::{CostExpr, CostSpec, CostValue};
use crate::domain::DomainValue;
use crate::error::OracleError;
use crate::store::Store;

pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

/// A ground value of one variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundValue {
    Int(i64),
    Set(BTreeSet<i64>),
}

impl GroundValue {
    fn number(&self) -> f64 {
        match self {
            GroundValue::Int(v) => *v as f64,
            GroundValue::Set(_) => f64::NAN,
        }
    }

    fn set(&self) -> Option<&BTreeSet<i64>> {
        match self {
            GroundValue::Set(s) => Some(s),
            GroundValue::Int(_) => None,
        }
    }
}

pub type Assignment = Vec<GroundValue>;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Satisfying assignments in lexicographic enumeration order.
    pub assignments: Vec<Assignment>,
    /// The same solutions as ground stores shaped like the instance's cells.
    pub solutions: Vec<Store>,
}

impl OracleResult {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

fn members(index: usize, cell: &DomainValue) -> Result<Vec<GroundValue>, OracleError> {
    match cell {
        DomainValue::Finite(s) => Ok(s.iter().map(|v| GroundValue::Int(*v)).collect()),
        DomainValue::Int(None) | DomainValue::Set(None) => Ok(Vec::new()),
        DomainValue::Int(Some((a, b))) => Ok((*a..=*b).map(GroundValue::Int).collect()),
        DomainValue::Set(Some((lower, upper))) => {
            let free: Vec<i64> = upper.difference(lower).copied().collect();
            if free.len() > 20 {
                return Err(OracleError::CapExceeded {
                    count: 1u128 << free.len().min(127),
                    cap: DEFAULT_CANDIDATE_CAP,
                });
            }
            Ok((0u32..(1u32 << free.len()))
                .map(|mask| {
                    let mut s = lower.clone();
                    for (bit, v) in free.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            s.insert(*v);
                        }
                    }
                    GroundValue::Set(s)
                })
                .collect())
        }
        DomainValue::Real(_) | DomainValue::Lattice(_) => Err(OracleError::NonEnumerable(index)),
    }
}

fn cell_count(cell: &DomainValue) -> u128 {
    match cell {
        DomainValue::Finite(s) => s.len() as u128,
        DomainValue::Int(Some((a, b))) => (*b as i128 - *a as i128 + 1) as u128,
        DomainValue::Set(Some((lower, upper))) => 1u128 << upper.difference(lower).count().min(127),
        _ => 0,
    }
}

fn ground_cell(template: &DomainValue, value: &GroundValue) -> DomainValue {
    match (template, value) {
        (DomainValue::Finite(_), GroundValue::Int(v)) => DomainValue::finite([*v]),
        (DomainValue::Int(_), GroundValue::Int(v)) => DomainValue::int(*v, *v),
        (DomainValue::Set(_), GroundValue::Set(s)) => DomainValue::set(s.clone(), s.clone()),
        _ => unreachable!("members() only yields values of the cell's kind"),
    }
}

fn compare(rel: Relation, lhs: f64, rhs: f64) -> bool {
    match rel {
        Relation::Le => lhs <= rhs,
        Relation::Ge => lhs >= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ne => lhs != rhs,
    }
}

fn truth(e: &BoolExpr, a: &Assignment) -> bool {
    match e {
        BoolExpr::Const(b) => *b,
        BoolExpr::Var(v) => a[*v].number() != 0.0,
        BoolExpr::Not(inner) => !truth(inner, a),
        BoolExpr::And(es) => es.iter().all(|e| truth(e, a)),
        BoolExpr::Or(es) => es.iter().any(|e| truth(e, a)),
    }
}

/// Whether an assignment satisfies a constraint.
pub fn holds(c: &ConstraintExpr, a: &Assignment) -> bool {
    match c {
        ConstraintExpr::Linear { terms, rel, rhs } => {
            let lhs: f64 = terms.iter().map(|(k, v)| k * a[*v].number()).sum();
            compare(*rel, lhs, *rhs)
        }
        ConstraintExpr::Extensional { vars, tuples } => tuples.iter().any(|t| {
            vars.iter()
                .zip(t)
                .all(|(v, x)| a[*v] == GroundValue::Int(*x))
        }),
        ConstraintExpr::Bool(e) => truth(e, a),
        ConstraintExpr::Set(SetRelation::Member { element, var }) => {
            a[*var].set().is_some_and(|s| s.contains(element))
        }
        ConstraintExpr::Set(SetRelation::Subset { sub, sup }) => {
            match (a[*sub].set(), a[*sup].set()) {
                (Some(x), Some(y)) => x.is_subset(y),
                _ => false,
            }
        }
        ConstraintExpr::Set(SetRelation::Card { var, rel, n }) => a[*var]
            .set()
            .is_some_and(|s| compare(*rel, s.len() as f64, *n as f64)),
    }
}

/// Enumerates all solutions below the instance's initial store.
pub fn enumerate_solutions(instance: &CspInstance) -> Result<OracleResult, OracleError> {
    enumerate_solutions_capped(instance, DEFAULT_CANDIDATE_CAP)
}

pub fn enumerate_solutions_capped(
    instance: &CspInstance,
    cap: u64,
) -> Result<OracleResult, OracleError> {
    let cells = instance.initial.cells();
    let mut total: u128 = 1;
    for cell in cells {
        total = total.saturating_mul(cell_count(cell));
    }
    let choices = cells
        .iter()
        .enumerate()
        .map(|(i, c)| members(i, c))
        .collect::<Result<Vec<_>, _>>()?;
    if total > cap as u128 {
        return Err(OracleError::CapExceeded { count: total, cap });
    }

    let mut result = OracleResult {
        assignments: Vec::new(),
        solutions: Vec::new(),
    };
    if choices.iter().any(Vec::is_empty) {
        return Ok(result);
    }
    // odometer over the product, last variable fastest
    let mut idx = vec![0usize; choices.len()];
    loop {
        let a: Assignment = idx
            .iter()
            .zip(&choices)
            .map(|(i, c)| c[*i].clone())
            .collect();
        if instance.constraints.iter().all(|c| holds(c, &a)) {
            let store = Store::new(
                cells
                    .iter()
                    .zip(&a)
                    .map(|(t, v)| ground_cell(t, v))
                    .collect(),
            );
            result.solutions.push(store);
            result.assignments.push(a);
        }
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok(result);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn assignment_cost(spec: &CostSpec, a: &Assignment) -> Result<CostValue, OracleError> {
    spec.fcost
        .iter()
        .map(|e| match e {
            CostExpr::Constant { value } => Ok(*value),
            CostExpr::Sum { vars } => Ok(vars.iter().map(|v| a[*v].number()).sum()),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CostValue)
}

/// Optimal solutions under a cost spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Optima {
    pub costs: Vec<CostValue>,
    pub witnesses: Vec<Assignment>,
}

/// Keeps the solutions whose cost no other solution improves on.
pub fn optimal_by_order(result: &OracleResult, spec: &CostSpec) -> Result<Optima, OracleError> {
    if result.is_empty() {
        return Err(OracleError::Empty);
    }
    let costs = result
        .assignments
        .iter()
        .map(|a| assignment_cost(spec, a))
        .collect::<Result<Vec<_>, _>>()?;
    let mut optima = Optima {
        costs: Vec::new(),
        witnesses: Vec::new(),
    };
    for (i, ci) in costs.iter().enumerate() {
        let mut dominated = false;
        for cj in &costs {
            if spec.improves(cj, ci)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            if !optima.costs.contains(ci) {
                optima.costs.push(ci.clone());
            }
            optima.witnesses.push(result.assignments[i].clone());
        }
    }
    Ok(optima)
}
