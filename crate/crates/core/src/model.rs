//! Plain-text model files.
//!
//! A model is a sequence of sections. Blank lines and `#` comments are
//! ignored.
//!
//! ```text
//! [variables]
//! x1 : int 0..1
//! b  : bool
//! e  : enum {1, 3, 5}
//! s  : set of {1, 2, 3}
//! r  : real [0, 1]
//! l  : lattice real [0, 2]
//!
//! [constraints]
//! x1 + 2*e - r <= 4
//! table (x1, e) {(0, 1), (1, 3)}
//! b | (x1 & !b)
//! 2 in s
//! s subset s
//! card(s) >= 1
//!
//! [cost]
//! fcost = pair(sum(x1, e), sum(x1))
//! order = lex(max, min)
//! delta = (-inf, inf)
//!
//! [solver]
//! epsilon = 0.0
//! filter = fixpoint(10000)
//! selector = naive
//! stack = full
//! ```
//!
//! Omitted cost keys default to a classical run: constant cost `1.0`,
//! ordering `eq`, bound `1.0`. An omitted `delta` defaults to the
//! ordering's worst value (`inf` for minimised components, `-inf` for
//! maximised ones).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::constraint::{BoolExpr, ConstraintExpr, CspInstance, Relation, SetRelation};
use crate::cost::{CostExpr, CostOrdering, CostSpec, CostValue, Direction};
use crate::domain::{lattice_by_name, DomainDescriptor, DomainKind};
use crate::engine::{Schema, SolverConfig};
use crate::error::ModelError;
use crate::filter::FilteringKind;
use crate::select::SelectorKind;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64, bool),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

const PUNCTS: &[&str] = &[
    "..", "<=", ">=", "!=", "==", "(", ")", "{", "}", "[", "]", ",", ":", "=", "+", "-", "*", "&",
    "|", "!", "<", ">",
];

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ModelError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut integral = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                integral = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            } else if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1] != '.' {
                // trailing dot, as in `1.`
                integral = false;
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| ModelError::Syntax {
                line: lineno,
                column: col,
                message: format!("bad number `{text}`"),
            })?;
            out.push(Token {
                tok: Tok::Num(value, integral),
                col,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Token {
                    tok: Tok::Punct(p),
                    col,
                });
                i += p.len();
            }
            None => {
                return Err(ModelError::Syntax {
                    line: lineno,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, text: &str) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ModelError> {
        Err(ModelError::Syntax {
            line: self.line,
            column: self.col(),
            message: message.into(),
        })
    }

    fn semantic<T>(&self, message: impl Into<String>) -> Result<T, ModelError> {
        Err(ModelError::Semantic {
            line: self.line,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ModelError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), ModelError> {
        if self.at_ident(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{k}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ModelError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    /// Signed real number, accepting `inf`.
    fn real(&mut self) -> Result<f64, ModelError> {
        let neg = if self.eat_punct("-") {
            true
        } else {
            self.eat_punct("+");
            false
        };
        let v = match self.peek() {
            Some(Tok::Num(v, _)) => *v,
            Some(Tok::Ident(s)) if s == "inf" => f64::INFINITY,
            _ => return self.err("expected a number"),
        };
        self.pos += 1;
        Ok(if neg { -v } else { v })
    }

    fn int(&mut self) -> Result<i64, ModelError> {
        let neg = self.eat_punct("-");
        match self.peek() {
            Some(Tok::Num(v, true)) if v.abs() < 9.0e15 => {
                let v = *v as i64;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ModelError> {
        if self.done() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn int_set(&mut self) -> Result<BTreeSet<i64>, ModelError> {
        self.expect_punct("{")?;
        let mut out = BTreeSet::new();
        if self.eat_punct("}") {
            return Ok(out);
        }
        loop {
            out.insert(self.int()?);
            if self.eat_punct("}") {
                return Ok(out);
            }
            self.expect_punct(",")?;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Variables,
    Constraints,
    Cost,
    Solver,
}

struct Vars {
    names: Vec<String>,
    domains: Vec<DomainDescriptor>,
}

impl Vars {
    fn lookup(&self, cur: &Cursor<'_>, name: &str) -> Result<usize, ModelError> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok(i),
            None => cur.semantic(format!("unknown variable `{name}`")),
        }
    }
}

fn parse_domain(cur: &mut Cursor<'_>) -> Result<DomainDescriptor, ModelError> {
    let kind = cur.ident()?;
    let d = match kind.as_str() {
        "bool" => DomainDescriptor::Bool,
        "int" => {
            let lo = cur.int()?;
            cur.expect_punct("..")?;
            let hi = cur.int()?;
            DomainDescriptor::IntInterval { lo, hi }
        }
        "enum" => DomainDescriptor::FiniteEnum(cur.int_set()?),
        "set" => {
            cur.expect_keyword("of")?;
            DomainDescriptor::SetInterval {
                universe: cur.int_set()?,
            }
        }
        "real" => {
            cur.expect_punct("[")?;
            let lo = cur.real()?;
            cur.expect_punct(",")?;
            let hi = cur.real()?;
            cur.expect_punct("]")?;
            DomainDescriptor::RealInterval { lo, hi }
        }
        "lattice" => {
            let name = cur.ident()?;
            let lattice = match lattice_by_name(&name) {
                Ok(l) => l,
                Err(e) => return cur.semantic(e.to_string()),
            };
            cur.expect_punct("[")?;
            let lo = cur.real()?;
            cur.expect_punct(",")?;
            let hi = cur.real()?;
            cur.expect_punct("]")?;
            DomainDescriptor::LatticeInterval { lattice, lo, hi }
        }
        other => return cur.semantic(format!("unknown domain kind `{other}`")),
    };
    if let Err(e) = d.validate() {
        return cur.semantic(e.to_string());
    }
    Ok(d)
}

/// `sum (+|-) term ...` as (coefficient, variable) terms plus a constant.
fn parse_linear_side(
    cur: &mut Cursor<'_>,
    vars: &Vars,
) -> Result<(Vec<(f64, usize)>, f64), ModelError> {
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut sign = if cur.eat_punct("-") {
        -1.0
    } else {
        cur.eat_punct("+");
        1.0
    };
    loop {
        match cur.peek().cloned() {
            Some(Tok::Num(v, _)) => {
                cur.next();
                if cur.eat_punct("*") {
                    let name = cur.ident()?;
                    terms.push((sign * v, vars.lookup(cur, &name)?));
                } else {
                    constant += sign * v;
                }
            }
            Some(Tok::Ident(name)) if name == "inf" => return cur.err("infinite constant"),
            Some(Tok::Ident(name)) => {
                cur.next();
                terms.push((sign, vars.lookup(cur, &name)?));
            }
            _ => return cur.err("expected a term"),
        }
        if cur.eat_punct("+") {
            sign = 1.0;
        } else if cur.eat_punct("-") {
            sign = -1.0;
        } else {
            return Ok((terms, constant));
        }
    }
}

fn parse_relation(cur: &mut Cursor<'_>) -> Result<Relation, ModelError> {
    let r = match cur.peek() {
        Some(Tok::Punct("<=")) => Relation::Le,
        Some(Tok::Punct(">=")) => Relation::Ge,
        Some(Tok::Punct("=")) | Some(Tok::Punct("==")) => Relation::Eq,
        Some(Tok::Punct("!=")) => Relation::Ne,
        _ => return cur.err("expected one of <=, >=, =, !="),
    };
    cur.next();
    Ok(r)
}

fn parse_bool_or(cur: &mut Cursor<'_>, vars: &Vars) -> Result<BoolExpr, ModelError> {
    let mut items = vec![parse_bool_and(cur, vars)?];
    while cur.eat_punct("|") {
        items.push(parse_bool_and(cur, vars)?);
    }
    Ok(if items.len() == 1 {
        items.pop().unwrap()
    } else {
        BoolExpr::Or(items)
    })
}

fn parse_bool_and(cur: &mut Cursor<'_>, vars: &Vars) -> Result<BoolExpr, ModelError> {
    let mut items = vec![parse_bool_unary(cur, vars)?];
    while cur.eat_punct("&") {
        items.push(parse_bool_unary(cur, vars)?);
    }
    Ok(if items.len() == 1 {
        items.pop().unwrap()
    } else {
        BoolExpr::And(items)
    })
}

fn parse_bool_unary(cur: &mut Cursor<'_>, vars: &Vars) -> Result<BoolExpr, ModelError> {
    if cur.eat_punct("!") {
        return Ok(BoolExpr::negate(parse_bool_unary(cur, vars)?));
    }
    if cur.eat_punct("(") {
        let e = parse_bool_or(cur, vars)?;
        cur.expect_punct(")")?;
        return Ok(e);
    }
    let name = cur.ident()?;
    match name.as_str() {
        "true" => Ok(BoolExpr::Const(true)),
        "false" => Ok(BoolExpr::Const(false)),
        _ => Ok(BoolExpr::Var(vars.lookup(cur, &name)?)),
    }
}

fn parse_constraint(cur: &mut Cursor<'_>, vars: &Vars) -> Result<ConstraintExpr, ModelError> {
    let has = |p: &str| {
        cur.toks
            .iter()
            .any(|t| matches!(&t.tok, Tok::Punct(q) if *q == p))
    };
    let has_ident = |k: &str| {
        cur.toks
            .iter()
            .any(|t| matches!(&t.tok, Tok::Ident(s) if s == k))
    };

    if cur.at_ident("table") {
        cur.next();
        cur.expect_punct("(")?;
        let mut idx = Vec::new();
        loop {
            let name = cur.ident()?;
            idx.push(vars.lookup(cur, &name)?);
            if cur.eat_punct(")") {
                break;
            }
            cur.expect_punct(",")?;
        }
        cur.expect_punct("{")?;
        let mut tuples = Vec::new();
        if !cur.eat_punct("}") {
            loop {
                cur.expect_punct("(")?;
                let mut t = Vec::new();
                loop {
                    t.push(cur.int()?);
                    if cur.eat_punct(")") {
                        break;
                    }
                    cur.expect_punct(",")?;
                }
                tuples.push(t);
                if cur.eat_punct("}") {
                    break;
                }
                cur.expect_punct(",")?;
            }
        }
        return Ok(ConstraintExpr::table(idx, tuples));
    }
    if cur.at_ident("card") {
        cur.next();
        cur.expect_punct("(")?;
        let name = cur.ident()?;
        let var = vars.lookup(cur, &name)?;
        cur.expect_punct(")")?;
        let rel = parse_relation(cur)?;
        let n = cur.int()?;
        return Ok(ConstraintExpr::Set(SetRelation::Card { var, rel, n }));
    }
    if has_ident("in") {
        let element = cur.int()?;
        cur.expect_keyword("in")?;
        let name = cur.ident()?;
        let var = vars.lookup(cur, &name)?;
        return Ok(ConstraintExpr::Set(SetRelation::Member { element, var }));
    }
    if has_ident("subset") {
        let a = cur.ident()?;
        let sub = vars.lookup(cur, &a)?;
        cur.expect_keyword("subset")?;
        let b = cur.ident()?;
        let sup = vars.lookup(cur, &b)?;
        return Ok(ConstraintExpr::Set(SetRelation::Subset { sub, sup }));
    }
    if has("<=") || has(">=") || has("=") || has("==") || has("!=") {
        let (mut terms, lconst) = parse_linear_side(cur, vars)?;
        let rel = parse_relation(cur)?;
        let (rterms, rconst) = parse_linear_side(cur, vars)?;
        terms.extend(rterms.into_iter().map(|(c, v)| (-c, v)));
        return Ok(ConstraintExpr::linear(terms, rel, rconst - lconst));
    }
    parse_bool_or(cur, vars).map(ConstraintExpr::Bool)
}

fn parse_cost_expr(cur: &mut Cursor<'_>, vars: &Vars) -> Result<CostExpr, ModelError> {
    let head = cur.ident()?;
    match head.as_str() {
        "constant" => Ok(CostExpr::Constant { value: cur.real()? }),
        "sum" => {
            cur.expect_punct("(")?;
            let mut vs = Vec::new();
            if !cur.eat_punct(")") {
                loop {
                    let name = cur.ident()?;
                    vs.push(vars.lookup(cur, &name)?);
                    if cur.eat_punct(")") {
                        break;
                    }
                    cur.expect_punct(",")?;
                }
            }
            Ok(CostExpr::Sum { vars: vs })
        }
        other => cur.err(format!("unknown cost expression `{other}`")),
    }
}

fn parse_fcost(cur: &mut Cursor<'_>, vars: &Vars) -> Result<Vec<CostExpr>, ModelError> {
    if cur.at_ident("pair") {
        cur.next();
        cur.expect_punct("(")?;
        let mut out = vec![parse_cost_expr(cur, vars)?];
        while cur.eat_punct(",") {
            out.push(parse_cost_expr(cur, vars)?);
        }
        cur.expect_punct(")")?;
        return Ok(out);
    }
    Ok(vec![parse_cost_expr(cur, vars)?])
}

fn parse_ordering(cur: &mut Cursor<'_>) -> Result<CostOrdering, ModelError> {
    let name = cur.ident()?;
    let dirs = |cur: &mut Cursor<'_>| -> Result<Vec<Direction>, ModelError> {
        cur.expect_punct("(")?;
        let mut out = Vec::new();
        loop {
            match cur.ident()?.as_str() {
                "min" => out.push(Direction::Min),
                "max" => out.push(Direction::Max),
                other => return cur.err(format!("expected min or max, found `{other}`")),
            }
            if cur.eat_punct(")") {
                return Ok(out);
            }
            cur.expect_punct(",")?;
        }
    };
    match name.as_str() {
        "eq" => Ok(CostOrdering::Eq),
        "lt" => Ok(CostOrdering::Lt),
        "gt" => Ok(CostOrdering::Gt),
        "lex" => Ok(CostOrdering::Lexicographic(dirs(cur)?)),
        "comp" => Ok(CostOrdering::Componentwise(dirs(cur)?)),
        other => cur.err(format!("unknown ordering `{other}`")),
    }
}

fn parse_cost_value(cur: &mut Cursor<'_>) -> Result<CostValue, ModelError> {
    if cur.eat_punct("(") {
        let mut out = vec![cur.real()?];
        while cur.eat_punct(",") {
            out.push(cur.real()?);
        }
        cur.expect_punct(")")?;
        return Ok(CostValue(out));
    }
    Ok(CostValue::scalar(cur.real()?))
}

fn parse_filter(cur: &mut Cursor<'_>) -> Result<FilteringKind, ModelError> {
    match cur.ident()?.as_str() {
        "consistency" => Ok(FilteringKind::ConsistencyCheck),
        "fixpoint" => {
            let mut max_rounds = crate::filter::DEFAULT_MAX_ROUNDS;
            if cur.eat_punct("(") {
                let n = cur.int()?;
                if n < 1 {
                    return cur.semantic("fixpoint round limit must be at least 1");
                }
                max_rounds = n as usize;
                cur.expect_punct(")")?;
            }
            Ok(FilteringKind::FixpointPropagation { max_rounds })
        }
        other => cur.err(format!("unknown filter `{other}`")),
    }
}

/// Parses a model into an instance and the run configuration it declares.
pub fn parse_model(text: &str) -> Result<(CspInstance, SolverConfig), ModelError> {
    let mut section = Section::None;
    let mut vars = Vars {
        names: Vec::new(),
        domains: Vec::new(),
    };
    let mut constraints: Vec<(usize, ConstraintExpr)> = Vec::new();
    let mut fcost: Option<Vec<CostExpr>> = None;
    let mut ordering: Option<CostOrdering> = None;
    let mut delta: Option<CostValue> = None;
    let mut cost_line = 0;
    let mut cfg = SolverConfig::default();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = lex(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, lineno, raw);
        if cur.eat_punct("[") {
            let name = cur.ident()?;
            cur.expect_punct("]")?;
            cur.expect_end()?;
            section = match name.as_str() {
                "variables" => Section::Variables,
                "constraints" => Section::Constraints,
                "cost" => Section::Cost,
                "solver" => Section::Solver,
                other => return cur.err(format!("unknown section `{other}`")),
            };
            continue;
        }
        match section {
            Section::None => return cur.err("content before the first section header"),
            Section::Variables => {
                let name = cur.ident()?;
                if vars.names.contains(&name) {
                    return cur.semantic(format!("variable `{name}` declared twice"));
                }
                cur.expect_punct(":")?;
                let d = parse_domain(&mut cur)?;
                cur.expect_end()?;
                vars.names.push(name);
                vars.domains.push(d);
            }
            Section::Constraints => {
                let c = parse_constraint(&mut cur, &vars)?;
                cur.expect_end()?;
                if let Err(e) = c.validate(&vars.domains) {
                    return cur.semantic(e.to_string());
                }
                constraints.push((lineno, c));
            }
            Section::Cost => {
                let key = cur.ident()?;
                cur.expect_punct("=")?;
                cost_line = lineno;
                match key.as_str() {
                    "fcost" => fcost = Some(parse_fcost(&mut cur, &vars)?),
                    "order" => ordering = Some(parse_ordering(&mut cur)?),
                    "delta" => delta = Some(parse_cost_value(&mut cur)?),
                    other => return cur.semantic(format!("unknown cost key `{other}`")),
                }
                cur.expect_end()?;
            }
            Section::Solver => {
                let key = cur.ident()?;
                cur.expect_punct("=")?;
                match key.as_str() {
                    "epsilon" => {
                        let e = cur.real()?;
                        if !(e >= 0.0 && e.is_finite()) {
                            return cur.semantic("epsilon must be a finite non-negative number");
                        }
                        cfg.epsilon = e;
                    }
                    "filter" => cfg.filtering = parse_filter(&mut cur)?,
                    "selector" => {
                        cfg.selector = match cur.ident()?.as_str() {
                            "naive" => SelectorKind::Naive,
                            "ff" | "first_fail" => SelectorKind::FirstFail,
                            other => return cur.err(format!("unknown selector `{other}`")),
                        }
                    }
                    "stack" => {
                        cfg.keep_full_stack = match cur.ident()?.as_str() {
                            "full" => true,
                            "incumbent" => false,
                            other => return cur.err(format!("unknown stack policy `{other}`")),
                        }
                    }
                    "schema" => {
                        cfg.schema = match cur.ident()?.as_str() {
                            "plain" => Schema::Plain,
                            "extended" => Schema::Extended,
                            other => return cur.err(format!("unknown schema `{other}`")),
                        }
                    }
                    "tolerance" => {
                        let t = cur.real()?;
                        if !(t >= 0.0 && t.is_finite()) {
                            return cur.semantic("tolerance must be a finite non-negative number");
                        }
                        cfg.tolerance = t;
                    }
                    "budget" => {
                        let n = cur.int()?;
                        if n < 1 {
                            return cur.semantic("node budget must be at least 1");
                        }
                        cfg.node_budget = n as u64;
                    }
                    other => return cur.semantic(format!("unknown solver key `{other}`")),
                }
                cur.expect_end()?;
            }
        }
    }

    let semantic = |line: usize, message: String| ModelError::Semantic { line, message };
    let variables = vars.names.into_iter().zip(vars.domains).collect();
    let instance = CspInstance::new(variables, constraints.into_iter().map(|(_, c)| c).collect())
        .map_err(|e| semantic(text.lines().count().max(1), e.to_string()))?;

    if fcost.is_some() || ordering.is_some() || delta.is_some() {
        let fcost = fcost.unwrap_or_else(|| vec![CostExpr::Constant { value: 1.0 }]);
        let ordering = ordering.unwrap_or(CostOrdering::Eq);
        let delta0 = match delta {
            Some(d) => d,
            None => match ordering.default_bound() {
                Some(mut d) if d.arity() == 1 && fcost.len() > 1 => {
                    d.0.resize(fcost.len(), d.0[0]);
                    d
                }
                Some(d) => d,
                None => {
                    let consts: Option<Vec<f64>> = fcost
                        .iter()
                        .map(|e| match e {
                            CostExpr::Constant { value } => Some(*value),
                            _ => None,
                        })
                        .collect();
                    match consts {
                        Some(c) => CostValue(c),
                        None => {
                            return Err(semantic(
                                cost_line,
                                "ordering `eq` on a non-constant cost needs an explicit delta"
                                    .into(),
                            ))
                        }
                    }
                }
            },
        };
        cfg.cost = CostSpec {
            fcost,
            ordering,
            delta0,
        };
    }
    cfg.validate_for(&instance)
        .map_err(|e| semantic(cost_line, e.to_string()))?;
    Ok((instance, cfg))
}

fn fmt_set(s: &BTreeSet<i64>) -> String {
    let items: Vec<String> = s.iter().map(i64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn fmt_domain(d: &DomainDescriptor) -> String {
    match d {
        DomainDescriptor::Bool => "bool".into(),
        DomainDescriptor::IntInterval { lo, hi } => format!("int {lo}..{hi}"),
        DomainDescriptor::FiniteEnum(s) => format!("enum {}", fmt_set(s)),
        DomainDescriptor::SetInterval { universe } => format!("set of {}", fmt_set(universe)),
        DomainDescriptor::RealInterval { lo, hi } => format!("real [{lo:?}, {hi:?}]"),
        DomainDescriptor::LatticeInterval { lattice, lo, hi } => {
            format!("lattice {} [{lo:?}, {hi:?}]", lattice.name())
        }
    }
}

fn fmt_bool(e: &BoolExpr, names: &[String]) -> String {
    match e {
        BoolExpr::Const(b) => b.to_string(),
        BoolExpr::Var(v) => names[*v].clone(),
        BoolExpr::Not(inner) => format!("!{}", fmt_bool_atom(inner, names)),
        BoolExpr::And(es) => es
            .iter()
            .map(|e| fmt_bool_atom(e, names))
            .collect::<Vec<_>>()
            .join(" & "),
        BoolExpr::Or(es) => es
            .iter()
            .map(|e| fmt_bool_atom(e, names))
            .collect::<Vec<_>>()
            .join(" | "),
    }
}

fn fmt_bool_atom(e: &BoolExpr, names: &[String]) -> String {
    match e {
        BoolExpr::And(_) | BoolExpr::Or(_) => format!("({})", fmt_bool(e, names)),
        _ => fmt_bool(e, names),
    }
}

pub(crate) fn fmt_number(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:?}")
    }
}

/// Renders a constraint in model syntax.
pub fn format_constraint(c: &ConstraintExpr, names: &[String]) -> String {
    match c {
        ConstraintExpr::Linear { terms, rel, rhs } => {
            let mut out = String::new();
            if terms.is_empty() {
                out.push('0');
            }
            for (i, (k, v)) in terms.iter().enumerate() {
                let (sign, mag) = if *k < 0.0 { ("-", -k) } else { ("+", *k) };
                if i == 0 {
                    if sign == "-" {
                        out.push('-');
                    }
                } else {
                    let _ = write!(out, " {sign} ");
                }
                if mag == 1.0 {
                    out.push_str(&names[*v]);
                } else {
                    let _ = write!(out, "{}*{}", fmt_number(mag), names[*v]);
                }
            }
            let rhs = if *rhs < 0.0 {
                format!("-{}", fmt_number(-rhs))
            } else {
                fmt_number(*rhs)
            };
            format!("{out} {} {rhs}", rel.symbol())
        }
        ConstraintExpr::Extensional { vars, tuples } => {
            let vs: Vec<&str> = vars.iter().map(|v| names[*v].as_str()).collect();
            let ts: Vec<String> = tuples
                .iter()
                .map(|t| {
                    let items: Vec<String> = t.iter().map(i64::to_string).collect();
                    format!("({})", items.join(", "))
                })
                .collect();
            format!("table ({}) {{{}}}", vs.join(", "), ts.join(", "))
        }
        ConstraintExpr::Bool(e) => fmt_bool(e, names),
        ConstraintExpr::Set(SetRelation::Member { element, var }) => {
            format!("{element} in {}", names[*var])
        }
        ConstraintExpr::Set(SetRelation::Subset { sub, sup }) => {
            format!("{} subset {}", names[*sub], names[*sup])
        }
        ConstraintExpr::Set(SetRelation::Card { var, rel, n }) => {
            format!("card({}) {} {n}", names[*var], rel.symbol())
        }
    }
}

pub(crate) fn fmt_cost_expr(e: &CostExpr, names: &[String]) -> String {
    match e {
        CostExpr::Constant { value } => format!("constant {}", fmt_number(*value)),
        CostExpr::Sum { vars } => {
            let vs: Vec<&str> = vars.iter().map(|v| names[*v].as_str()).collect();
            format!("sum({})", vs.join(", "))
        }
    }
}

pub(crate) fn fmt_cost_value(v: &CostValue) -> String {
    if v.arity() == 1 {
        return fmt_number(v.0[0]);
    }
    let items: Vec<String> = v.0.iter().map(|x| fmt_number(*x)).collect();
    format!("({})", items.join(", "))
}

/// Renders an instance and configuration as a model that parses back to
/// the same values. The initial store is not part of the format.
pub fn print_model(instance: &CspInstance, cfg: &SolverConfig) -> String {
    let names = &instance.names;
    let mut out = String::from("[variables]\n");
    for (n, d) in names.iter().zip(&instance.domains) {
        let _ = writeln!(out, "{n} : {}", fmt_domain(d));
    }
    out.push_str("\n[constraints]\n");
    for c in &instance.constraints {
        let _ = writeln!(out, "{}", format_constraint(c, names));
    }
    out.push_str("\n[cost]\n");
    let fcost: Vec<String> = cfg
        .cost
        .fcost
        .iter()
        .map(|e| fmt_cost_expr(e, names))
        .collect();
    if fcost.len() == 1 {
        let _ = writeln!(out, "fcost = {}", fcost[0]);
    } else {
        let _ = writeln!(out, "fcost = pair({})", fcost.join(", "));
    }
    let _ = writeln!(out, "order = {}", cfg.cost.ordering);
    let _ = writeln!(out, "delta = {}", fmt_cost_value(&cfg.cost.delta0));
    out.push_str("\n[solver]\n");
    let _ = writeln!(out, "epsilon = {}", fmt_number(cfg.epsilon));
    match cfg.filtering {
        FilteringKind::ConsistencyCheck => out.push_str("filter = consistency\n"),
        FilteringKind::FixpointPropagation { max_rounds } => {
            let _ = writeln!(out, "filter = fixpoint({max_rounds})");
        }
    }
    let _ = writeln!(out, "selector = {}", cfg.selector.name());
    let _ = writeln!(
        out,
        "stack = {}",
        if cfg.keep_full_stack {
            "full"
        } else {
            "incumbent"
        }
    );
    let _ = writeln!(
        out,
        "schema = {}",
        match cfg.schema {
            Schema::Plain => "plain",
            Schema::Extended => "extended",
        }
    );
    let _ = writeln!(out, "tolerance = {}", fmt_number(cfg.tolerance));
    let _ = writeln!(out, "budget = {}", cfg.node_budget);
    out
}

/// What to optimise when overriding a model's cost block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Constant cost with `eq`: every solution is kept.
    Classical,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostChoice {
    /// Sum of every numeric variable.
    Sum,
    /// The constant 1.
    Constant,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classical" => Ok(Mode::Classical),
            "min" => Ok(Mode::Min),
            "max" => Ok(Mode::Max),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl std::str::FromStr for CostChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sum" => Ok(CostChoice::Sum),
            "constant" => Ok(CostChoice::Constant),
            other => Err(format!("unknown cost `{other}`")),
        }
    }
}

/// Settings layered over a parsed model. Every `Some` field replaces the
/// model's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub cost: Option<CostChoice>,
    pub epsilon: Option<f64>,
    pub filtering: Option<FilteringKind>,
    pub selector: Option<SelectorKind>,
    pub keep_full_stack: Option<bool>,
    pub schema: Option<Schema>,
    pub node_budget: Option<u64>,
}

fn sum_of_numeric(instance: &CspInstance) -> CostExpr {
    CostExpr::Sum {
        vars: (0..instance.arity())
            .filter(|&i| instance.domains[i].kind() != DomainKind::SetInterval)
            .collect(),
    }
}

impl Overrides {
    /// `min` and `max` without an explicit cost optimise the sum of all
    /// numeric variables. A cost without a mode keeps the model's ordering,
    /// which must then be a scalar `lt` or `gt`.
    pub fn apply(&self, instance: &CspInstance, cfg: &mut SolverConfig) -> Result<(), String> {
        let expr = self.cost.map(|c| match c {
            CostChoice::Sum => sum_of_numeric(instance),
            CostChoice::Constant => CostExpr::Constant { value: 1.0 },
        });
        match self.mode {
            Some(Mode::Classical) => cfg.cost = CostSpec::classical(1.0),
            Some(Mode::Min) => {
                cfg.cost = CostSpec::minimise(expr.unwrap_or_else(|| sum_of_numeric(instance)))
            }
            Some(Mode::Max) => {
                cfg.cost = CostSpec::maximise(expr.unwrap_or_else(|| sum_of_numeric(instance)))
            }
            None => {
                if let Some(e) = expr {
                    if !matches!(cfg.cost.ordering, CostOrdering::Lt | CostOrdering::Gt) {
                        return Err(
                            "a cost override needs a scalar lt/gt ordering; set a mode".into()
                        );
                    }
                    cfg.cost.fcost = vec![e];
                }
            }
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(f) = self.filtering {
            cfg.filtering = f;
        }
        if let Some(s) = self.selector {
            cfg.selector = s;
        }
        if let Some(k) = self.keep_full_stack {
            cfg.keep_full_stack = k;
        }
        if let Some(s) = self.schema {
            cfg.schema = s;
        }
        if let Some(n) = self.node_budget {
            cfg.node_budget = n;
        }
        cfg.validate_for(instance).map_err(|e| e.to_string())
    }
}
