//! Run reports: the text rendering printed by the CLI and a JSON form that
//! can be read back for stack comparisons.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::constraint::CspInstance;
use crate::cost::CostValue;
use crate::domain::{lattice_by_name, DomainValue, LatticeBounds, LatticeRange};
use crate::engine::{SearchNode, SolveResult, SolveStatus, SolverConfig};
use crate::filter::FilteringKind;
use crate::model::{fmt_cost_expr, fmt_cost_value, fmt_number};
use crate::store::{Stack, Store};

/// An `f64` that survives JSON: infinities travel as `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&fmt_number(self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::F(v) => Ok(Num(v)),
            Raw::S(s) => match s.as_str() {
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                other => Err(de::Error::custom(format!("bad number `{other}`"))),
            },
        }
    }
}

fn nums(v: &CostValue) -> Vec<Num> {
    v.0.iter().copied().map(Num).collect()
}

/// One store cell in JSON; `null` payloads mark empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JsonCell {
    Enum(BTreeSet<i64>),
    Int(Option<(i64, i64)>),
    Set(Option<(BTreeSet<i64>, BTreeSet<i64>)>),
    Real(Option<(Num, Num)>),
    Lattice {
        lattice: String,
        bounds: Option<(Num, bool, Num, bool)>,
    },
}

impl From<&DomainValue> for JsonCell {
    fn from(v: &DomainValue) -> Self {
        match v {
            DomainValue::Finite(s) => JsonCell::Enum(s.clone()),
            DomainValue::Int(b) => JsonCell::Int(*b),
            DomainValue::Set(b) => JsonCell::Set(b.clone()),
            DomainValue::Real(b) => JsonCell::Real(b.map(|(a, b)| (Num(a), Num(b)))),
            DomainValue::Lattice(r) => JsonCell::Lattice {
                lattice: r.lattice.name().to_string(),
                bounds: r
                    .bounds
                    .map(|b| (Num(b.lo), b.lo_closed, Num(b.hi), b.hi_closed)),
            },
        }
    }
}

impl JsonCell {
    pub fn decode(&self) -> Result<DomainValue, String> {
        Ok(match self {
            JsonCell::Enum(s) => DomainValue::Finite(s.clone()),
            JsonCell::Int(b) => DomainValue::Int(*b),
            JsonCell::Set(b) => DomainValue::Set(b.clone()),
            JsonCell::Real(b) => DomainValue::Real(b.map(|(a, b)| (a.0, b.0))),
            JsonCell::Lattice { lattice, bounds } => DomainValue::Lattice(LatticeRange {
                lattice: lattice_by_name(lattice).map_err(|e| e.to_string())?,
                bounds: bounds.map(|(lo, lo_closed, hi, hi_closed)| LatticeBounds {
                    lo: lo.0,
                    lo_closed,
                    hi: hi.0,
                    hi_closed,
                }),
            }),
        })
    }
}

fn encode_store(s: &Store) -> Vec<JsonCell> {
    s.cells().iter().map(JsonCell::from).collect()
}

fn decode_store(cells: &[JsonCell]) -> Result<Store, String> {
    Ok(Store::new(
        cells
            .iter()
            .map(JsonCell::decode)
            .collect::<Result<_, _>>()?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackEntry {
    pub cells: Vec<JsonCell>,
    pub cost: Vec<Num>,
}

/// Solver settings as echoed in a report. The schema is deliberately left
/// out: with a constant cost and `eq`, both schemata must report the same
/// bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub epsilon: Num,
    pub filter: String,
    pub selector: String,
    pub stack: String,
    pub fcost: Vec<String>,
    pub order: String,
    pub delta0: Vec<Num>,
    pub tolerance: Num,
    pub node_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub variables: Vec<String>,
    /// Bottom to top.
    pub stack: Vec<StackEntry>,
    pub delta: Vec<Num>,
    pub nodes: u64,
    pub max_depth: usize,
    pub status: SolveStatus,
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<String>,
}

fn filter_name(f: &FilteringKind) -> String {
    match f {
        FilteringKind::ConsistencyCheck => "consistency".into(),
        FilteringKind::FixpointPropagation { max_rounds } => format!("fixpoint({max_rounds})"),
    }
}

impl RunReport {
    pub fn new(instance: &CspInstance, cfg: &SolverConfig, result: &SolveResult) -> Self {
        let stack = result
            .stack
            .iter()
            .map(|s| StackEntry {
                cells: encode_store(s),
                cost: cfg.cost.eval(s).map(|c| nums(&c)).unwrap_or_default(),
            })
            .collect();
        RunReport {
            variables: instance.names.clone(),
            stack,
            delta: nums(&result.final_delta),
            nodes: result.node_count,
            max_depth: result.max_depth,
            status: result.status,
            config: ConfigEcho {
                epsilon: Num(cfg.epsilon),
                filter: filter_name(&cfg.filtering),
                selector: cfg.selector.name().into(),
                stack: if cfg.keep_full_stack {
                    "full"
                } else {
                    "incumbent"
                }
                .into(),
                fcost: cfg
                    .cost
                    .fcost
                    .iter()
                    .map(|e| fmt_cost_expr(e, &instance.names))
                    .collect(),
                order: cfg.cost.ordering.to_string(),
                delta0: nums(&cfg.cost.delta0),
                tolerance: Num(cfg.tolerance),
                node_budget: cfg.node_budget,
            },
            trace_file: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// The reported stack as stores, bottom to top.
    pub fn decode_stack(&self) -> Result<Stack, String> {
        let stores = self
            .stack
            .iter()
            .map(|e| decode_store(&e.cells))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Stack::from(stores))
    }

    /// Human-readable form: one store per line bottom to top, the `top`
    /// marker, the final bound, then counters.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.stack {
            let cells: Vec<String> = self
                .variables
                .iter()
                .zip(&e.cells)
                .map(|(n, c)| match c.decode() {
                    Ok(v) => format!("{n}={v}"),
                    Err(_) => format!("{n}=?"),
                })
                .collect();
            let _ = writeln!(
                out,
                "({}) cost={}",
                cells.join(", "),
                fmt_cost_value(&CostValue(e.cost.iter().map(|n| n.0).collect()))
            );
        }
        out.push_str(if self.stack.is_empty() {
            "top none\n"
        } else {
            "top\n"
        });
        let _ = writeln!(
            out,
            "delta={}",
            fmt_cost_value(&CostValue(self.delta.iter().map(|n| n.0).collect()))
        );
        let status = match self.status {
            SolveStatus::Complete => "complete",
            SolveStatus::BudgetExhausted => "budget_exhausted",
        };
        let _ = writeln!(
            out,
            "nodes={} max_depth={} stack={} status={status}",
            self.nodes,
            self.max_depth,
            self.stack.len()
        );
        if let Some(t) = &self.trace_file {
            let _ = writeln!(out, "trace={t}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub path: String,
    pub store_in: Vec<JsonCell>,
    pub store_filtered: Vec<JsonCell>,
    pub precision: String,
    pub outcome: crate::engine::NodeOutcome,
}

pub fn trace_entries(nodes: &[SearchNode]) -> Vec<TraceEntry> {
    nodes
        .iter()
        .map(|n| TraceEntry {
            path: n.path.to_string(),
            store_in: encode_store(&n.store_in),
            store_filtered: encode_store(&n.store_filtered),
            precision: n.p_at_node.to_string(),
            outcome: n.outcome.clone(),
        })
        .collect()
}

/// One line per node in visiting order.
pub fn trace_text(nodes: &[SearchNode]) -> String {
    use crate::engine::NodeOutcome::*;
    let mut out = String::new();
    for n in nodes {
        let outcome = match &n.outcome {
            PrunedInconsistent => "pruned".to_string(),
            Pushed => "pushed".to_string(),
            NotImproving => "not_improving".to_string(),
            Branched { variable, children } => format!("split x{variable} into {children}"),
        };
        let _ = writeln!(
            out,
            "{} {} -> {} p={} {outcome}",
            n.path, n.store_in, n.store_filtered, n.p_at_node
        );
    }
    out
}
