//! The branching schema and its optimisation extension.
//!
//! At each node the engine filters the incoming store and prunes it if
//! inconsistent. A consistent store is final when it is not divisible, or
//! when it lies below the root and its precision dropped by at most
//! `(epsilon, 0)` relative to its parent. Final stores are pushed (under
//! the cost test in the extended schema); any other store has one cell
//! selected and split, and the children are explored depth first, left to
//! right.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint::{ConstraintExpr, CspInstance, DEFAULT_TOLERANCE};
use crate::cost::{CostExpr, CostSpec, CostValue};
use crate::domain::DomainKind;
use crate::error::{ConfigError, CostError, StoreError};
use crate::filter::{filter, FilteringKind};
use crate::precision::PrecisionValue;
use crate::select::SelectorKind;
use crate::store::{Stack, Store};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Which push step the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    /// Push every final store unconditionally.
    Plain,
    /// Push a final store only when its cost improves on the bound, and
    /// move the bound to that cost.
    #[default]
    Extended,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub filtering: FilteringKind,
    pub selector: SelectorKind,
    pub cost: CostSpec,
    pub schema: Schema,
    /// When false, a push first discards the previous stack contents so
    /// only the incumbent is kept.
    pub keep_full_stack: bool,
    pub trace: bool,
    pub node_budget: u64,
    /// Absolute tolerance for real `=` and `!=` tests.
    pub tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 0.0,
            filtering: FilteringKind::default(),
            selector: SelectorKind::default(),
            cost: CostSpec::default(),
            schema: Schema::default(),
            keep_full_stack: true,
            trace: false,
            node_budget: DEFAULT_NODE_BUDGET,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if let FilteringKind::FixpointPropagation { max_rounds } = self.filtering {
            if max_rounds < 1 {
                return Err(ConfigError::MaxRounds);
            }
        }
        if self.node_budget < 1 {
            return Err(ConfigError::NodeBudget);
        }
        self.cost.validate()?;
        Ok(())
    }

    /// Checks that cost expressions only read numeric variables of `instance`.
    pub fn validate_for(&self, instance: &CspInstance) -> Result<(), ConfigError> {
        self.validate()?;
        for e in &self.cost.fcost {
            if let CostExpr::Sum { vars } = e {
                for &v in vars {
                    let ok = instance
                        .domains
                        .get(v)
                        .is_some_and(|d| d.kind() != DomainKind::SetInterval);
                    if !ok {
                        return Err(CostError::NonNumeric(v).into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// A node's position: child indices from the root, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Path(pub Vec<u32>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeOutcome {
    PrunedInconsistent,
    Pushed,
    /// Final, but its cost did not improve on the bound.
    NotImproving,
    Branched {
        variable: usize,
        children: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub path: Path,
    pub store_in: Store,
    pub store_filtered: Store,
    pub p_at_node: PrecisionValue,
    pub outcome: NodeOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Complete,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub stack: Stack,
    pub final_delta: CostValue,
    pub node_count: u64,
    pub max_depth: usize,
    pub status: SolveStatus,
    pub trace: Option<Vec<SearchNode>>,
}

impl SolveResult {
    pub fn is_complete(&self) -> bool {
        self.status == SolveStatus::Complete
    }
}

/// Counters from one `branch` run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BranchStats {
    pub node_count: u64,
    pub max_depth: usize,
    pub exhausted: bool,
    pub trace: Vec<SearchNode>,
}

struct Frame {
    store: Store,
    p: PrecisionValue,
    path: Vec<u32>,
}

/// Runs the schema from store `s` with parent precision `p`, pushing onto
/// `stack` and updating the bound `delta` in place.
///
/// Exploration is sequential depth first with chronological backtracking,
/// so children are visited strictly left to right.
pub fn branch(
    constraints: &[ConstraintExpr],
    s: Store,
    p: PrecisionValue,
    cfg: &SolverConfig,
    stack: &mut Stack,
    delta: &mut CostValue,
) -> Result<BranchStats, SolveError> {
    cfg.validate()?;
    let eps = PrecisionValue::new(cfg.epsilon, 0);
    let mut stats = BranchStats::default();
    let mut work = vec![Frame {
        store: s,
        p,
        path: Vec::new(),
    }];

    while let Some(Frame { store, p, path }) = work.pop() {
        if stats.node_count >= cfg.node_budget {
            stats.exhausted = true;
            break;
        }
        stats.node_count += 1;
        stats.max_depth = stats.max_depth.max(path.len());

        let filtered = filter(cfg.filtering, constraints, &store, cfg.tolerance);
        let record = |filtered: &Store, outcome: NodeOutcome, stats: &mut BranchStats| {
            if cfg.trace {
                stats.trace.push(SearchNode {
                    path: Path(path.clone()),
                    store_in: store.clone(),
                    store_filtered: filtered.clone(),
                    p_at_node: p,
                    outcome,
                });
            }
        };

        if !filtered.is_consistent() {
            record(&filtered, NodeOutcome::PrunedInconsistent, &mut stats);
            continue;
        }
        let precision = filtered.precision().map_err(StoreError::from)?;

        // the root (p = top) always branches when divisible
        let precise_enough = p < PrecisionValue::TOP && (p - precision).leq(&eps);
        if !filtered.is_divisible() || precise_enough {
            let outcome = match cfg.schema {
                Schema::Plain => NodeOutcome::Pushed,
                Schema::Extended => {
                    let cost = cfg.cost.eval(&filtered)?;
                    if cfg.cost.improves(&cost, delta)? {
                        *delta = cost;
                        NodeOutcome::Pushed
                    } else {
                        NodeOutcome::NotImproving
                    }
                }
            };
            if outcome == NodeOutcome::Pushed {
                if !cfg.keep_full_stack {
                    stack.pop();
                }
                stack.push(filtered.clone());
            }
            record(&filtered, outcome, &mut stats);
            continue;
        }

        let j = cfg.selector.choose(&filtered)?;
        let parts = filtered.cell(j).split().map_err(StoreError::from)?;
        let children = parts
            .into_iter()
            .map(|d| filtered.replace(j, d))
            .collect::<Result<Vec<_>, _>>()?;
        if cfg.trace {
            for child in &children {
                debug_assert!(
                    child.lt(&filtered).unwrap_or(false),
                    "split child is not strictly below its parent"
                );
            }
        }
        record(
            &filtered,
            NodeOutcome::Branched {
                variable: j,
                children: children.len(),
            },
            &mut stats,
        );

        // leftmost child on top of the work stack
        for (i, child) in children.into_iter().enumerate().rev() {
            let mut child_path = path.clone();
            child_path.push(i as u32 + 1);
            work.push(Frame {
                store: child,
                p: precision,
                path: child_path,
            });
        }
    }
    Ok(stats)
}

/// Runs the schema from the instance's initial store with `p = top` and an
/// empty stack.
pub fn solve(instance: &CspInstance, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    cfg.validate_for(instance)?;
    let mut stack = Stack::new();
    let mut delta = cfg.cost.delta0.clone();
    let stats = branch(
        &instance.constraints,
        instance.initial.clone(),
        PrecisionValue::TOP,
        cfg,
        &mut stack,
        &mut delta,
    )?;
    Ok(SolveResult {
        stack,
        final_delta: delta,
        node_count: stats.node_count,
        max_depth: stats.max_depth,
        status: if stats.exhausted {
            SolveStatus::BudgetExhausted
        } else {
            SolveStatus::Complete
        },
        trace: cfg.trace.then_some(stats.trace),
    })
}

/// `solve` for instances with real cells, where `epsilon > 0` is what
/// guarantees termination.
pub fn solve_real(instance: &CspInstance, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 {
        return Err(ConfigError::Epsilon(cfg.epsilon).into());
    }
    solve(instance, cfg)
}
