//! Machine-checkable constraints over store variables.
//!
//! Each constraint supports three operations: exact evaluation on a store
//! whose referenced cells are singletons, a sound consistency test on
//! arbitrary stores, and one narrowing pass that never loses a solution.

use std::collections::BTreeSet;

use crate::domain::{DomainDescriptor, DomainKind, DomainValue, Point};
use crate::error::ConstraintError;
use crate::store::Store;

/// Default absolute tolerance for `=` and `!=` on real values.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
    Ne,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }

    fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => (lhs - rhs).abs() <= tol,
            Relation::Ne => (lhs - rhs).abs() > tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn var(v: usize) -> Self {
        BoolExpr::Var(v)
    }

    pub fn negate(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => out.push(*v),
            BoolExpr::Not(e) => e.collect_vars(out),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.collect_vars(out)),
        }
    }

    /// Kleene evaluation under a per-variable three-valued assignment.
    fn eval3(&self, value: &dyn Fn(usize) -> Tri) -> Tri {
        match self {
            BoolExpr::Const(b) => Tri::from(*b),
            BoolExpr::Var(v) => value(*v),
            BoolExpr::Not(e) => e.eval3(value).not(),
            BoolExpr::And(es) => es.iter().fold(Tri::True, |acc, e| acc.and(e.eval3(value))),
            BoolExpr::Or(es) => es.iter().fold(Tri::False, |acc, e| acc.or(e.eval3(value))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    True,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }
    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }
    fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetRelation {
    /// `element ∈ var`
    Member { element: i64, var: usize },
    /// `sub ⊆ sup`
    Subset { sub: usize, sup: usize },
    /// `#var rel n`
    Card { var: usize, rel: Relation, n: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintExpr {
    /// `sum(coeff * var) rel rhs`
    Linear {
        terms: Vec<(f64, usize)>,
        rel: Relation,
        rhs: f64,
    },
    /// Explicit relation over a tuple of integral variables.
    Extensional {
        vars: Vec<usize>,
        tuples: Vec<Vec<i64>>,
    },
    Bool(BoolExpr),
    Set(SetRelation),
}

impl ConstraintExpr {
    /// Builds a linear constraint, merging repeated variables and dropping
    /// zero coefficients.
    pub fn linear(terms: Vec<(f64, usize)>, rel: Relation, rhs: f64) -> Self {
        let mut merged: Vec<(f64, usize)> = Vec::new();
        for (c, v) in terms {
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, v)),
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        ConstraintExpr::Linear {
            terms: merged,
            rel,
            rhs,
        }
    }

    pub fn table(vars: Vec<usize>, tuples: Vec<Vec<i64>>) -> Self {
        ConstraintExpr::Extensional { vars, tuples }
    }

    /// Variables referenced, deduplicated, in first-occurrence order.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self {
            ConstraintExpr::Linear { terms, .. } => out.extend(terms.iter().map(|t| t.1)),
            ConstraintExpr::Extensional { vars, .. } => out.extend(vars.iter().copied()),
            ConstraintExpr::Bool(e) => e.collect_vars(&mut out),
            ConstraintExpr::Set(SetRelation::Member { var, .. })
            | ConstraintExpr::Set(SetRelation::Card { var, .. }) => out.push(*var),
            ConstraintExpr::Set(SetRelation::Subset { sub, sup }) => out.extend([*sub, *sup]),
        }
        let mut seen = BTreeSet::new();
        out.retain(|v| seen.insert(*v));
        out
    }

    /// Checks variable indices and kinds against the declarations.
    pub fn validate(&self, domains: &[DomainDescriptor]) -> Result<(), ConstraintError> {
        let arity = domains.len();
        for v in self.variables() {
            if v >= arity {
                return Err(ConstraintError::VariableOutOfRange { index: v, arity });
            }
        }
        let wrong = |index: usize, context: &'static str| ConstraintError::WrongKind {
            index,
            kind: domains[index].kind(),
            context,
        };
        match self {
            ConstraintExpr::Linear { terms, .. } => {
                for &(_, v) in terms {
                    if domains[v].kind() == DomainKind::SetInterval {
                        return Err(wrong(v, "linear"));
                    }
                }
            }
            ConstraintExpr::Extensional { vars, tuples } => {
                for &v in vars {
                    if !matches!(
                        domains[v].kind(),
                        DomainKind::FiniteEnum | DomainKind::Bool | DomainKind::IntInterval
                    ) {
                        return Err(wrong(v, "table"));
                    }
                }
                for t in tuples {
                    if t.len() != vars.len() {
                        return Err(ConstraintError::TupleArity {
                            expected: vars.len(),
                            found: t.len(),
                        });
                    }
                }
            }
            ConstraintExpr::Bool(e) => {
                let mut vars = Vec::new();
                e.collect_vars(&mut vars);
                for v in vars {
                    let ok = match &domains[v] {
                        DomainDescriptor::Bool => true,
                        DomainDescriptor::FiniteEnum(s) => s.iter().all(|x| *x == 0 || *x == 1),
                        DomainDescriptor::IntInterval { lo, hi } => *lo >= 0 && *hi <= 1,
                        _ => false,
                    };
                    if !ok {
                        return Err(wrong(v, "boolean"));
                    }
                }
            }
            ConstraintExpr::Set(_) => {
                for v in self.variables() {
                    if domains[v].kind() != DomainKind::SetInterval {
                        return Err(wrong(v, "set"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact satisfaction on a store whose referenced cells are singletons.
    pub fn eval_on_singleton(&self, s: &Store, tol: f64) -> Result<bool, ConstraintError> {
        let point = |v: usize| -> Result<Point, ConstraintError> {
            if v >= s.len() {
                return Err(ConstraintError::VariableOutOfRange {
                    index: v,
                    arity: s.len(),
                });
            }
            s.cell(v).point().ok_or(ConstraintError::NotSingleton(v))
        };
        let number = |v: usize| -> Result<f64, ConstraintError> {
            point(v)?.as_f64().ok_or(ConstraintError::NotSingleton(v))
        };
        let set = |v: usize| -> Result<BTreeSet<i64>, ConstraintError> {
            match point(v)? {
                Point::Set(x) => Ok(x),
                _ => Err(ConstraintError::NotSingleton(v)),
            }
        };
        match self {
            ConstraintExpr::Linear { terms, rel, rhs } => {
                let mut sum = 0.0;
                for &(c, v) in terms {
                    sum += c * number(v)?;
                }
                Ok(rel.holds(sum, *rhs, tol))
            }
            ConstraintExpr::Extensional { vars, tuples } => {
                let values = vars
                    .iter()
                    .map(|&v| match point(v)? {
                        Point::Int(x) => Ok(x),
                        _ => Err(ConstraintError::NotSingleton(v)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(tuples.contains(&values))
            }
            ConstraintExpr::Bool(e) => {
                let mut vars = Vec::new();
                e.collect_vars(&mut vars);
                for &v in &vars {
                    number(v)?;
                }
                let value = |v: usize| Tri::from(number(v).map(|x| x != 0.0).unwrap_or(false));
                Ok(e.eval3(&value) == Tri::True)
            }
            ConstraintExpr::Set(SetRelation::Member { element, var }) => {
                Ok(set(*var)?.contains(element))
            }
            ConstraintExpr::Set(SetRelation::Subset { sub, sup }) => {
                Ok(set(*sub)?.is_subset(&set(*sup)?))
            }
            ConstraintExpr::Set(SetRelation::Card { var, rel, n }) => {
                Ok(rel.holds(set(*var)?.len() as f64, *n as f64, 0.0))
            }
        }
    }

    /// Sound consistency test: `false` only if no tuple drawn from the
    /// store's cells satisfies the constraint.
    pub fn possibly_satisfiable(&self, s: &Store, tol: f64) -> bool {
        if !s.is_consistent() {
            return false;
        }
        match self {
            ConstraintExpr::Linear { terms, rel, rhs } => {
                let (lo, hi) = linear_range(terms, s, None);
                match rel {
                    Relation::Le => lo <= *rhs + tol,
                    Relation::Ge => hi >= *rhs - tol,
                    Relation::Eq => lo <= *rhs + tol && hi >= *rhs - tol,
                    Relation::Ne => !(lo == hi && (lo - rhs).abs() <= tol),
                }
            }
            ConstraintExpr::Extensional { vars, tuples } => {
                tuples.iter().any(|t| tuple_supported(vars, t, s))
            }
            ConstraintExpr::Bool(e) => e.eval3(&|v| bool_cell(s.cell(v))) != Tri::False,
            ConstraintExpr::Set(rel) => set_possible(rel, s),
        }
    }

    /// One narrowing pass. The result is below `s` and keeps every solution
    /// of this constraint lying in `s`; an emptied cell signals failure.
    pub fn narrow(&self, s: &Store, tol: f64) -> Store {
        if !s.is_consistent() {
            return s.clone();
        }
        let mut cells = s.cells().to_vec();
        match self {
            ConstraintExpr::Linear { terms, rel, rhs } => {
                narrow_linear(terms, *rel, *rhs, &mut cells, tol)
            }
            ConstraintExpr::Extensional { vars, tuples } => narrow_table(vars, tuples, &mut cells),
            ConstraintExpr::Bool(e) => narrow_bool(e, &mut cells),
            ConstraintExpr::Set(rel) => narrow_set(rel, &mut cells),
        }
        Store::new(cells)
    }
}

/// Interval enclosure of `sum(coeff * var)`, skipping term `skip`.
fn linear_range_cells(
    terms: &[(f64, usize)],
    cells: &[DomainValue],
    skip: Option<usize>,
) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (k, &(c, v)) in terms.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        let (a, b) = cells[v].numeric_hull().unwrap_or((0.0, 0.0));
        if c >= 0.0 {
            lo += c * a;
            hi += c * b;
        } else {
            lo += c * b;
            hi += c * a;
        }
    }
    (lo, hi)
}

fn linear_range(terms: &[(f64, usize)], s: &Store, skip: Option<usize>) -> (f64, f64) {
    linear_range_cells(terms, s.cells(), skip)
}

fn narrow_linear(
    terms: &[(f64, usize)],
    rel: Relation,
    rhs: f64,
    cells: &mut [DomainValue],
    tol: f64,
) {
    if terms.is_empty() {
        if !rel.holds(0.0, rhs, tol) {
            if let Some(c) = cells.first_mut() {
                *c = c.empty_like();
            }
        }
        return;
    }
    for (k, &(c, v)) in terms.iter().enumerate() {
        if cells[v].is_empty() {
            return;
        }
        let (rest_lo, rest_hi) = linear_range_cells(terms, cells, Some(k));
        if rel == Relation::Ne {
            if rest_lo == rest_hi {
                let target = (rhs - rest_lo) / c;
                narrow_ne(&mut cells[v], target, tol);
            }
            continue;
        }
        // bounds on c * x
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        if matches!(rel, Relation::Le | Relation::Eq) {
            hi = rhs - rest_lo;
        }
        if matches!(rel, Relation::Ge | Relation::Eq) {
            lo = rhs - rest_hi;
        }
        let (xlo, xhi) = if c > 0.0 {
            (lo / c, hi / c)
        } else {
            (hi / c, lo / c)
        };
        let narrowed = cells[v].restrict_to_hull(xlo, xhi, tol.max(DEFAULT_TOLERANCE));
        cells[v] = narrowed;
    }
}

fn narrow_ne(cell: &mut DomainValue, target: f64, tol: f64) {
    if let Some(p) = cell.point().and_then(|p| p.as_f64()) {
        if (p - target).abs() <= tol {
            *cell = cell.empty_like();
        }
        return;
    }
    if cell.is_integral() {
        let r = target.round();
        if (target - r).abs() <= tol {
            *cell = cell.remove_int(r as i64);
        }
    }
}

fn tuple_supported(vars: &[usize], t: &[i64], s: &Store) -> bool {
    tuple_supported_cells(vars, t, s.cells())
}

fn tuple_supported_cells(vars: &[usize], t: &[i64], cells: &[DomainValue]) -> bool {
    vars.iter().zip(t).enumerate().all(|(k, (&v, &x))| {
        cells[v].contains_int(x) && vars[..k].iter().zip(t).all(|(&w, &y)| w != v || y == x)
    })
}

fn narrow_table(vars: &[usize], tuples: &[Vec<i64>], cells: &mut [DomainValue]) {
    let supported: Vec<&Vec<i64>> = tuples
        .iter()
        .filter(|t| tuple_supported_cells(vars, t, cells))
        .collect();
    if supported.is_empty() {
        for &v in vars {
            cells[v] = cells[v].empty_like();
        }
        return;
    }
    for (k, &v) in vars.iter().enumerate() {
        let values: BTreeSet<i64> = supported.iter().map(|t| t[k]).collect();
        cells[v] = match &cells[v] {
            DomainValue::Finite(s) => {
                DomainValue::Finite(s.intersection(&values).copied().collect())
            }
            other => {
                let lo = *values.first().expect("non-empty") as f64;
                let hi = *values.last().expect("non-empty") as f64;
                other.restrict_to_hull(lo, hi, 0.0)
            }
        };
    }
}

fn bool_cell(cell: &DomainValue) -> Tri {
    match (cell.contains_int(0), cell.contains_int(1)) {
        (true, true) => Tri::Unknown,
        (false, true) => Tri::True,
        (true, false) => Tri::False,
        // empty cells are rejected before evaluation
        (false, false) => Tri::Unknown,
    }
}

fn narrow_bool(e: &BoolExpr, cells: &mut [DomainValue]) {
    let mut vars = Vec::new();
    e.collect_vars(&mut vars);
    vars.sort_unstable();
    vars.dedup();
    for &v in &vars {
        if bool_cell(&cells[v]) != Tri::Unknown {
            continue;
        }
        for value in [0i64, 1] {
            let fixed = Tri::from(value == 1);
            let snapshot: &[DomainValue] = cells;
            let outcome = e.eval3(&|w| {
                if w == v {
                    fixed
                } else {
                    bool_cell(&snapshot[w])
                }
            });
            if outcome == Tri::False {
                cells[v] = cells[v].remove_int(value);
            }
        }
    }
    if e.eval3(&|w| bool_cell(&cells[w])) == Tri::False {
        if let Some(&v) = vars.first() {
            cells[v] = cells[v].empty_like();
        }
    }
}

fn set_bounds(cell: &DomainValue) -> Option<(&BTreeSet<i64>, &BTreeSet<i64>)> {
    match cell {
        DomainValue::Set(Some((a, b))) => Some((a, b)),
        _ => None,
    }
}

fn set_possible(rel: &SetRelation, s: &Store) -> bool {
    match rel {
        SetRelation::Member { element, var } => {
            set_bounds(s.cell(*var)).is_some_and(|(_, up)| up.contains(element))
        }
        SetRelation::Subset { sub, sup } => {
            match (set_bounds(s.cell(*sub)), set_bounds(s.cell(*sup))) {
                (Some((lv, _)), Some((_, uw))) => lv.is_subset(uw),
                _ => false,
            }
        }
        SetRelation::Card { var, rel, n } => {
            let Some((lo, up)) = set_bounds(s.cell(*var)) else {
                return false;
            };
            let (min, max) = (lo.len() as i64, up.len() as i64);
            match rel {
                Relation::Le => min <= *n,
                Relation::Ge => max >= *n,
                Relation::Eq => min <= *n && *n <= max,
                Relation::Ne => !(min == max && min == *n),
            }
        }
    }
}

fn narrow_set(rel: &SetRelation, cells: &mut [DomainValue]) {
    match rel {
        SetRelation::Member { element, var } => {
            if let Some((lo, up)) = set_bounds(&cells[*var]) {
                let mut lo = lo.clone();
                lo.insert(*element);
                cells[*var] = DomainValue::set(lo, up.clone());
            }
        }
        SetRelation::Subset { sub, sup } => {
            if sub == sup {
                return;
            }
            if let (Some((lv, uv)), Some((lw, uw))) =
                (set_bounds(&cells[*sub]), set_bounds(&cells[*sup]))
            {
                let new_uv: BTreeSet<i64> = uv.intersection(uw).copied().collect();
                let new_lw: BTreeSet<i64> = lw.union(lv).copied().collect();
                let (lv, uw) = (lv.clone(), uw.clone());
                cells[*sub] = DomainValue::set(lv, new_uv);
                cells[*sup] = DomainValue::set(new_lw, uw);
            }
        }
        SetRelation::Card { var, rel, n } => {
            let Some((lo, up)) = set_bounds(&cells[*var]) else {
                return;
            };
            let (lo, up) = (lo.clone(), up.clone());
            let (min, max) = (lo.len() as i64, up.len() as i64);
            let empty = match rel {
                Relation::Le => min > *n,
                Relation::Ge => max < *n,
                Relation::Eq => min > *n || max < *n,
                Relation::Ne => min == max && min == *n,
            };
            cells[*var] = if empty {
                DomainValue::Set(None)
            } else if matches!(rel, Relation::Le | Relation::Eq) && min == *n {
                DomainValue::set(lo.clone(), lo)
            } else if matches!(rel, Relation::Ge | Relation::Eq) && max == *n {
                DomainValue::set(up.clone(), up)
            } else {
                DomainValue::set(lo, up)
            };
        }
    }
}

/// A CSP: named variables with their domains, constraints, and the store
/// the search starts from.
#[derive(Debug, Clone, PartialEq)]
pub struct CspInstance {
    pub names: Vec<String>,
    pub domains: Vec<DomainDescriptor>,
    pub constraints: Vec<ConstraintExpr>,
    pub initial: Store,
}

impl CspInstance {
    /// Validates the declarations and starts from the full top store.
    pub fn new(
        variables: Vec<(String, DomainDescriptor)>,
        constraints: Vec<ConstraintExpr>,
    ) -> Result<Self, ConstraintError> {
        if variables.is_empty() {
            return Err(ConstraintError::NoVariables);
        }
        let (names, domains): (Vec<_>, Vec<_>) = variables.into_iter().unzip();
        for d in &domains {
            d.validate()
                .map_err(|e| ConstraintError::InitialStore(e.to_string()))?;
        }
        for c in &constraints {
            c.validate(&domains)?;
        }
        let initial = Store::new(domains.iter().map(DomainDescriptor::top_value).collect());
        Ok(CspInstance {
            names,
            domains,
            constraints,
            initial,
        })
    }

    /// Replaces the initial store; every cell must lie within its declaration.
    pub fn with_initial_store(mut self, store: Store) -> Result<Self, ConstraintError> {
        if store.len() != self.domains.len() {
            return Err(ConstraintError::InitialStore(format!(
                "{} cells for {} variables",
                store.len(),
                self.domains.len()
            )));
        }
        for (i, (d, c)) in self.domains.iter().zip(store.cells()).enumerate() {
            if !d.admits(c) {
                return Err(ConstraintError::InitialStore(format!(
                    "cell {i} ({c}) is outside the domain of {}",
                    self.names[i]
                )));
            }
        }
        self.initial = store;
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Whether a ground store satisfies every constraint.
    pub fn is_solution(&self, s: &Store, tol: f64) -> bool {
        s.is_consistent()
            && !s.is_divisible()
            && self
                .constraints
                .iter()
                .all(|c| c.eval_on_singleton(s, tol).unwrap_or(false))
    }
}
