//! Computation domains: subset representations, cardinality classes,
//! precision maps and splitting functions.
//!
//! A [`DomainDescriptor`] describes a variable's whole computation domain; a
//! [`DomainValue`] is one subset of it as held in a store cell. Every kind
//! provides a precision map that is strictly monotonic on strict inclusion
//! and a binary splitting function whose parts are strict subsets covering
//! the input.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::DomainError;
use crate::precision::PrecisionValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    FiniteEnum,
    Bool,
    IntInterval,
    SetInterval,
    RealInterval,
    LatticeInterval,
}

/// Cardinality class of a domain value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cardinality {
    Empty,
    One,
    Many,
}

/// A totally ordered lattice whose elements are embedded in `f64`.
///
/// Implementations must be dense enough that `cut(a, b)` lands in `[a, b)`
/// for every `a < b`, and `diff(b, a)` must be strictly monotonic in `b`
/// and strictly anti-monotonic in `a`.
pub trait Lattice: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;
    fn bottom(&self) -> f64;
    fn top(&self) -> f64;
    fn leq(&self, a: f64, b: f64) -> bool;
    /// The distance map `b o a` into the reals.
    fn diff(&self, b: f64, a: f64) -> f64;
    /// Cut point `c` with `a <= c < b`.
    fn cut(&self, a: f64, b: f64) -> f64;

    fn lt(&self, a: f64, b: f64) -> bool {
        self.leq(a, b) && a != b
    }
}

/// The real line with subtraction as distance and midpoint cuts.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealLattice;

impl Lattice for RealLattice {
    fn name(&self) -> &str {
        "real"
    }
    fn bottom(&self) -> f64 {
        f64::NEG_INFINITY
    }
    fn top(&self) -> f64 {
        f64::INFINITY
    }
    fn leq(&self, a: f64, b: f64) -> bool {
        a <= b
    }
    fn diff(&self, b: f64, a: f64) -> f64 {
        b - a
    }
    fn cut(&self, a: f64, b: f64) -> f64 {
        let m = a + (b - a) / 2.0;
        if m >= b {
            a
        } else {
            m
        }
    }
}

pub type LatticeHandle = Arc<dyn Lattice>;

/// Looks up a built-in lattice by name.
pub fn lattice_by_name(name: &str) -> Result<LatticeHandle, DomainError> {
    match name {
        "real" => Ok(Arc::new(RealLattice)),
        other => Err(DomainError::UnknownLattice(other.to_string())),
    }
}

/// A variable's computation domain.
#[derive(Debug, Clone)]
pub enum DomainDescriptor {
    FiniteEnum(BTreeSet<i64>),
    /// The integer subset `{0, 1}`.
    Bool,
    IntInterval {
        lo: i64,
        hi: i64,
    },
    SetInterval {
        universe: BTreeSet<i64>,
    },
    RealInterval {
        lo: f64,
        hi: f64,
    },
    LatticeInterval {
        lattice: LatticeHandle,
        lo: f64,
        hi: f64,
    },
}

impl PartialEq for DomainDescriptor {
    fn eq(&self, other: &Self) -> bool {
        use DomainDescriptor::*;
        match (self, other) {
            (FiniteEnum(a), FiniteEnum(b)) => a == b,
            (Bool, Bool) => true,
            (IntInterval { lo: a, hi: b }, IntInterval { lo: c, hi: d }) => a == c && b == d,
            (SetInterval { universe: a }, SetInterval { universe: b }) => a == b,
            (RealInterval { lo: a, hi: b }, RealInterval { lo: c, hi: d }) => a == c && b == d,
            (
                LatticeInterval {
                    lattice: l1,
                    lo: a,
                    hi: b,
                },
                LatticeInterval {
                    lattice: l2,
                    lo: c,
                    hi: d,
                },
            ) => l1.name() == l2.name() && a == c && b == d,
            _ => false,
        }
    }
}

impl DomainDescriptor {
    pub fn kind(&self) -> DomainKind {
        match self {
            DomainDescriptor::FiniteEnum(_) => DomainKind::FiniteEnum,
            DomainDescriptor::Bool => DomainKind::Bool,
            DomainDescriptor::IntInterval { .. } => DomainKind::IntInterval,
            DomainDescriptor::SetInterval { .. } => DomainKind::SetInterval,
            DomainDescriptor::RealInterval { .. } => DomainKind::RealInterval,
            DomainDescriptor::LatticeInterval { .. } => DomainKind::LatticeInterval,
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        match self {
            DomainDescriptor::FiniteEnum(values) if values.is_empty() => {
                Err(DomainError::Invalid("empty enumeration".into()))
            }
            DomainDescriptor::IntInterval { lo, hi } if lo > hi => {
                Err(DomainError::Invalid(format!("int {lo}..{hi} has lo > hi")))
            }
            DomainDescriptor::RealInterval { lo, hi }
            | DomainDescriptor::LatticeInterval { lo, hi, .. }
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) =>
            {
                Err(DomainError::Invalid(format!(
                    "real [{lo:?},{hi:?}] must have finite bounds with lo <= hi"
                )))
            }
            _ => Ok(()),
        }
    }

    /// The whole domain as a store cell.
    pub fn top_value(&self) -> DomainValue {
        match self {
            DomainDescriptor::FiniteEnum(values) => DomainValue::Finite(values.clone()),
            DomainDescriptor::Bool => DomainValue::Finite([0, 1].into_iter().collect()),
            DomainDescriptor::IntInterval { lo, hi } => DomainValue::int(*lo, *hi),
            DomainDescriptor::SetInterval { universe } => {
                DomainValue::set(BTreeSet::new(), universe.clone())
            }
            DomainDescriptor::RealInterval { lo, hi } => DomainValue::real(*lo, *hi),
            DomainDescriptor::LatticeInterval { lattice, lo, hi } => {
                DomainValue::lattice(lattice.clone(), *lo, true, *hi, true)
            }
        }
    }

    /// Whether `value` has this descriptor's kind and lies inside its domain.
    pub fn admits(&self, value: &DomainValue) -> bool {
        if !value.kind_matches(self.kind()) {
            return false;
        }
        if let DomainValue::Lattice(l) = value {
            if let DomainDescriptor::LatticeInterval { lattice, .. } = self {
                if l.lattice.name() != lattice.name() {
                    return false;
                }
            }
        }
        value.is_subset_of(&self.top_value()).unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeBounds {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

/// An interval over a lattice with per-endpoint openness; `bounds` is `None`
/// when the interval is empty.
#[derive(Debug, Clone)]
pub struct LatticeRange {
    pub lattice: LatticeHandle,
    pub bounds: Option<LatticeBounds>,
}

impl PartialEq for LatticeRange {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.name() == other.lattice.name() && self.bounds == other.bounds
    }
}

/// A subset of a computation domain, as held in one store cell.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainValue {
    /// Explicit finite value set (enumerations and Booleans).
    Finite(BTreeSet<i64>),
    /// Integer interval `lo..hi`.
    Int(Option<(i64, i64)>),
    /// Set interval `lower..upper`, denoting `{s | lower ⊆ s ⊆ upper}`.
    Set(Option<(BTreeSet<i64>, BTreeSet<i64>)>),
    /// Closed real interval `[lo, hi]`.
    Real(Option<(f64, f64)>),
    Lattice(LatticeRange),
}

/// A single point of a singleton cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Int(i64),
    Real(f64),
    Set(BTreeSet<i64>),
}

impl Point {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Point::Int(v) => Some(*v as f64),
            Point::Real(v) => Some(*v),
            Point::Set(_) => None,
        }
    }
}

impl DomainValue {
    pub fn finite<I: IntoIterator<Item = i64>>(values: I) -> Self {
        DomainValue::Finite(values.into_iter().collect())
    }

    pub fn int(lo: i64, hi: i64) -> Self {
        if lo > hi {
            DomainValue::Int(None)
        } else {
            DomainValue::Int(Some((lo, hi)))
        }
    }

    pub fn set(lower: BTreeSet<i64>, upper: BTreeSet<i64>) -> Self {
        if lower.is_subset(&upper) {
            DomainValue::Set(Some((lower, upper)))
        } else {
            DomainValue::Set(None)
        }
    }

    pub fn real(lo: f64, hi: f64) -> Self {
        if lo <= hi {
            DomainValue::Real(Some((lo, hi)))
        } else {
            DomainValue::Real(None)
        }
    }

    pub fn lattice(
        lattice: LatticeHandle,
        lo: f64,
        lo_closed: bool,
        hi: f64,
        hi_closed: bool,
    ) -> Self {
        let non_empty = lattice.lt(lo, hi) || (lo == hi && lo_closed && hi_closed && !lo.is_nan());
        let bounds = non_empty.then_some(LatticeBounds {
            lo,
            lo_closed,
            hi,
            hi_closed,
        });
        DomainValue::Lattice(LatticeRange { lattice, bounds })
    }

    /// Whether this value can sit in a cell whose descriptor has kind `kind`.
    pub fn kind_matches(&self, kind: DomainKind) -> bool {
        matches!(
            (self, kind),
            (DomainValue::Finite(_), DomainKind::FiniteEnum)
                | (DomainValue::Finite(_), DomainKind::Bool)
                | (DomainValue::Int(_), DomainKind::IntInterval)
                | (DomainValue::Set(_), DomainKind::SetInterval)
                | (DomainValue::Real(_), DomainKind::RealInterval)
                | (DomainValue::Lattice(_), DomainKind::LatticeInterval)
        )
    }

    /// Representative kind (Booleans report as `FiniteEnum`).
    pub fn kind(&self) -> DomainKind {
        match self {
            DomainValue::Finite(_) => DomainKind::FiniteEnum,
            DomainValue::Int(_) => DomainKind::IntInterval,
            DomainValue::Set(_) => DomainKind::SetInterval,
            DomainValue::Real(_) => DomainKind::RealInterval,
            DomainValue::Lattice(_) => DomainKind::LatticeInterval,
        }
    }

    /// The empty value of the same kind.
    pub fn empty_like(&self) -> DomainValue {
        match self {
            DomainValue::Finite(_) => DomainValue::Finite(BTreeSet::new()),
            DomainValue::Int(_) => DomainValue::Int(None),
            DomainValue::Set(_) => DomainValue::Set(None),
            DomainValue::Real(_) => DomainValue::Real(None),
            DomainValue::Lattice(l) => DomainValue::Lattice(LatticeRange {
                lattice: l.lattice.clone(),
                bounds: None,
            }),
        }
    }

    pub fn cardinality_class(&self) -> Cardinality {
        match self {
            DomainValue::Finite(v) => match v.len() {
                0 => Cardinality::Empty,
                1 => Cardinality::One,
                _ => Cardinality::Many,
            },
            DomainValue::Int(None)
            | DomainValue::Set(None)
            | DomainValue::Real(None)
            | DomainValue::Lattice(LatticeRange { bounds: None, .. }) => Cardinality::Empty,
            DomainValue::Int(Some((a, b))) => one_or_many(a == b),
            DomainValue::Set(Some((a, b))) => one_or_many(a == b),
            DomainValue::Real(Some((a, b))) => one_or_many(a == b),
            DomainValue::Lattice(LatticeRange {
                bounds: Some(b), ..
            }) => one_or_many(b.lo == b.hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality_class() == Cardinality::Empty
    }

    pub fn is_singleton(&self) -> bool {
        self.cardinality_class() == Cardinality::One
    }

    /// The unique element of a singleton cell.
    pub fn point(&self) -> Option<Point> {
        if !self.is_singleton() {
            return None;
        }
        match self {
            DomainValue::Finite(v) => v.iter().next().map(|x| Point::Int(*x)),
            DomainValue::Int(Some((a, _))) => Some(Point::Int(*a)),
            DomainValue::Set(Some((a, _))) => Some(Point::Set(a.clone())),
            DomainValue::Real(Some((a, _))) => Some(Point::Real(*a)),
            DomainValue::Lattice(LatticeRange {
                bounds: Some(b), ..
            }) => Some(Point::Real(b.lo)),
            _ => None,
        }
    }

    /// Closed numeric hull `[min, max]` of a non-empty numeric value.
    pub fn numeric_hull(&self) -> Option<(f64, f64)> {
        match self {
            DomainValue::Finite(v) => Some((*v.first()? as f64, *v.last()? as f64)),
            DomainValue::Int(Some((a, b))) => Some((*a as f64, *b as f64)),
            DomainValue::Real(Some((a, b))) => Some((*a, *b)),
            DomainValue::Lattice(LatticeRange {
                bounds: Some(b), ..
            }) => Some((b.lo, b.hi)),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self, DomainValue::Set(_))
    }

    /// Integer-valued kinds (finite sets and integer intervals).
    pub fn is_integral(&self) -> bool {
        matches!(self, DomainValue::Finite(_) | DomainValue::Int(_))
    }

    pub fn contains_int(&self, v: i64) -> bool {
        match self {
            DomainValue::Finite(s) => s.contains(&v),
            DomainValue::Int(Some((a, b))) => *a <= v && v <= *b,
            DomainValue::Real(Some((a, b))) => *a <= v as f64 && v as f64 <= *b,
            DomainValue::Lattice(LatticeRange {
                bounds: Some(b),
                lattice,
            }) => lattice_contains(lattice.as_ref(), b, v as f64),
            _ => false,
        }
    }

    /// Explicit members of an integral value.
    pub fn int_members(&self) -> Option<Vec<i64>> {
        match self {
            DomainValue::Finite(s) => Some(s.iter().copied().collect()),
            DomainValue::Int(None) => Some(Vec::new()),
            DomainValue::Int(Some((a, b))) => Some((*a..=*b).collect()),
            _ => None,
        }
    }

    /// Keeps only the part of a numeric value lying in `[lo, hi]`.
    ///
    /// Integer kinds round inward with an absolute slack `tol` so that
    /// bounds computed in floating point do not lose integral solutions.
    pub fn restrict_to_hull(&self, lo: f64, hi: f64, tol: f64) -> DomainValue {
        match self {
            DomainValue::Finite(s) => DomainValue::Finite(
                s.iter()
                    .copied()
                    .filter(|v| (*v as f64) >= lo - tol && (*v as f64) <= hi + tol)
                    .collect(),
            ),
            DomainValue::Int(None) => self.clone(),
            DomainValue::Int(Some((a, b))) => {
                let new_lo = if lo.is_finite() {
                    (*a).max(clamp_i64((lo - tol).ceil()))
                } else if lo > 0.0 {
                    return DomainValue::Int(None);
                } else {
                    *a
                };
                let new_hi = if hi.is_finite() {
                    (*b).min(clamp_i64((hi + tol).floor()))
                } else if hi < 0.0 {
                    return DomainValue::Int(None);
                } else {
                    *b
                };
                DomainValue::int(new_lo, new_hi)
            }
            DomainValue::Real(None) => self.clone(),
            DomainValue::Real(Some((a, b))) => {
                let new_lo = a.max(lo);
                let new_hi = b.min(hi);
                if new_lo > new_hi && new_lo - new_hi <= tol {
                    // crossing bounds within the tolerance collapse to a point
                    let m = (new_lo + new_hi) / 2.0;
                    DomainValue::real(m, m)
                } else {
                    DomainValue::real(new_lo, new_hi)
                }
            }
            DomainValue::Lattice(LatticeRange { bounds: None, .. }) => self.clone(),
            DomainValue::Lattice(LatticeRange {
                lattice,
                bounds: Some(b),
            }) => {
                let (new_lo, lo_closed) = if lattice.lt(b.lo, lo) {
                    (lo, true)
                } else {
                    (b.lo, b.lo_closed)
                };
                let (new_hi, hi_closed) = if lattice.lt(hi, b.hi) {
                    (hi, true)
                } else {
                    (b.hi, b.hi_closed)
                };
                DomainValue::lattice(lattice.clone(), new_lo, lo_closed, new_hi, hi_closed)
            }
            DomainValue::Set(_) => self.clone(),
        }
    }

    /// Removes one integral point from the value when its representation
    /// allows it exactly (finite sets, or an interval endpoint).
    pub fn remove_int(&self, v: i64) -> DomainValue {
        match self {
            DomainValue::Finite(s) => {
                let mut s = s.clone();
                s.remove(&v);
                DomainValue::Finite(s)
            }
            DomainValue::Int(Some((a, b))) if *a == v => DomainValue::int(a + 1, *b),
            DomainValue::Int(Some((a, b))) if *b == v => DomainValue::int(*a, b - 1),
            _ => self.clone(),
        }
    }

    /// Inclusion of denoted subsets; errors when the kinds differ.
    pub fn is_subset_of(&self, other: &DomainValue) -> Result<bool, DomainError> {
        if self.kind() != other.kind() {
            return Err(DomainError::KindMismatch {
                expected: other.kind(),
                found: self.kind(),
            });
        }
        if self.is_empty() {
            return Ok(true);
        }
        if other.is_empty() {
            return Ok(false);
        }
        Ok(match (self, other) {
            (DomainValue::Finite(a), DomainValue::Finite(b)) => a.is_subset(b),
            (DomainValue::Int(Some((a, b))), DomainValue::Int(Some((c, d)))) => c <= a && b <= d,
            (DomainValue::Set(Some((la, ua))), DomainValue::Set(Some((lb, ub)))) => {
                lb.is_subset(la) && ua.is_subset(ub)
            }
            (DomainValue::Real(Some((a, b))), DomainValue::Real(Some((c, d)))) => c <= a && b <= d,
            (
                DomainValue::Lattice(LatticeRange {
                    lattice,
                    bounds: Some(x),
                }),
                DomainValue::Lattice(LatticeRange {
                    lattice: l2,
                    bounds: Some(y),
                }),
            ) => {
                if lattice.name() != l2.name() {
                    return Err(DomainError::Invalid(format!(
                        "lattice mismatch: {} vs {}",
                        lattice.name(),
                        l2.name()
                    )));
                }
                let left_ok =
                    lattice.lt(y.lo, x.lo) || (y.lo == x.lo && (y.lo_closed || !x.lo_closed));
                let right_ok =
                    lattice.lt(x.hi, y.hi) || (x.hi == y.hi && (y.hi_closed || !x.hi_closed));
                left_ok && right_ok
            }
            _ => unreachable!("kinds checked above"),
        })
    }

    /// Precision map of the value's kind.
    pub fn precision(&self) -> Result<PrecisionValue, DomainError> {
        match self {
            DomainValue::Finite(s) => Ok(precision_fd(s)),
            DomainValue::Int(Some(r)) => Ok(precision_int_interval(r.0, r.1)),
            DomainValue::Set(Some((a, b))) => Ok(precision_set_interval(a, b)),
            DomainValue::Real(Some((a, b))) => Ok(precision_real_interval(*a, *b)),
            DomainValue::Lattice(LatticeRange {
                lattice,
                bounds: Some(b),
            }) => Ok(precision_lattice_interval(lattice.as_ref(), b)),
            _ => Err(DomainError::EmptyValue(self.kind())),
        }
    }

    /// Default binary splitting function of the value's kind.
    pub fn split(&self) -> Result<Vec<DomainValue>, DomainError> {
        if self.cardinality_class() != Cardinality::Many {
            return Err(DomainError::NotSplittable(self.kind()));
        }
        let (left, right) = match self {
            DomainValue::Finite(s) => split_fd_enumerate(s)?,
            DomainValue::Int(Some((a, b))) => split_int_interval(*a, *b)?,
            DomainValue::Set(Some((a, b))) => split_set_interval(a, b)?,
            DomainValue::Real(Some((a, b))) => split_real_interval(*a, *b)?,
            DomainValue::Lattice(LatticeRange {
                lattice,
                bounds: Some(b),
            }) => {
                let cut = lattice.cut(b.lo, b.hi);
                split_lattice_interval(self, cut)?
            }
            _ => return Err(DomainError::NotSplittable(self.kind())),
        };
        Ok(vec![left, right])
    }
}

fn one_or_many(single: bool) -> Cardinality {
    if single {
        Cardinality::One
    } else {
        Cardinality::Many
    }
}

fn clamp_i64(v: f64) -> i64 {
    if v >= i64::MAX as f64 {
        i64::MAX
    } else if v <= i64::MIN as f64 {
        i64::MIN
    } else {
        v as i64
    }
}

fn lattice_contains(lattice: &dyn Lattice, b: &LatticeBounds, x: f64) -> bool {
    let above = if b.lo_closed {
        lattice.leq(b.lo, x)
    } else {
        lattice.lt(b.lo, x)
    };
    let below = if b.hi_closed {
        lattice.leq(x, b.hi)
    } else {
        lattice.lt(x, b.hi)
    };
    above && below
}

/// `(#d, 0)`.
pub fn precision_fd(d: &BTreeSet<i64>) -> PrecisionValue {
    PrecisionValue::new(d.len() as f64, 0)
}

/// `(b - a, 0)` for the integer interval `a..b`.
pub fn precision_int_interval(a: i64, b: i64) -> PrecisionValue {
    PrecisionValue::new((b as f64) - (a as f64), 0)
}

/// `(#b - #a, 0)` for the set interval `a..b`.
pub fn precision_set_interval(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> PrecisionValue {
    PrecisionValue::new((b.len() - a.len().min(b.len())) as f64, 0)
}

/// `(b - a, 2)`: closed real intervals carry the closed-closed tag.
pub fn precision_real_interval(a: f64, b: f64) -> PrecisionValue {
    PrecisionValue::new(b - a, 2)
}

/// `(b o a, tag)` where the tag counts closed endpoints.
pub fn precision_lattice_interval(lattice: &dyn Lattice, b: &LatticeBounds) -> PrecisionValue {
    let tag = i64::from(b.lo_closed) + i64::from(b.hi_closed);
    PrecisionValue::new(lattice.diff(b.hi, b.lo), tag)
}

/// `{a1, a2, ..., ak}` splits into `({a1}, {a2, ..., ak})`.
pub fn split_fd_enumerate(d: &BTreeSet<i64>) -> Result<(DomainValue, DomainValue), DomainError> {
    if d.len() < 2 {
        return Err(DomainError::NotSplittable(DomainKind::FiniteEnum));
    }
    let mut rest = d.clone();
    let first = rest.pop_first().expect("non-empty");
    Ok((DomainValue::finite([first]), DomainValue::Finite(rest)))
}

/// `a..b` splits into `(a..a, a+1..b)`.
pub fn split_int_interval(a: i64, b: i64) -> Result<(DomainValue, DomainValue), DomainError> {
    if a >= b {
        return Err(DomainError::NotSplittable(DomainKind::IntInterval));
    }
    Ok((DomainValue::int(a, a), DomainValue::int(a + 1, b)))
}

/// With `c = min(b \ a)`, splits into `(a..b\{c}, a∪{c}..b)`.
pub fn split_set_interval(
    a: &BTreeSet<i64>,
    b: &BTreeSet<i64>,
) -> Result<(DomainValue, DomainValue), DomainError> {
    let c = *b
        .difference(a)
        .next()
        .ok_or(DomainError::NotSplittable(DomainKind::SetInterval))?;
    if !a.is_subset(b) {
        return Err(DomainError::Invalid(
            "set interval lower bound not within upper".into(),
        ));
    }
    let mut without = b.clone();
    without.remove(&c);
    let mut with = a.clone();
    with.insert(c);
    Ok((
        DomainValue::set(a.clone(), without),
        DomainValue::set(with, b.clone()),
    ))
}

/// Midpoint bisection into closed halves sharing the midpoint.
pub fn split_real_interval(a: f64, b: f64) -> Result<(DomainValue, DomainValue), DomainError> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(DomainError::NotSplittable(DomainKind::RealInterval));
    }
    let m = a + (b - a) / 2.0;
    Ok((DomainValue::real(a, m), DomainValue::real(m, b)))
}

/// `{a, b}` splits at `c` into `({a, c], (c, b})`, keeping outer openness.
pub fn split_lattice_interval(
    r: &DomainValue,
    cut: f64,
) -> Result<(DomainValue, DomainValue), DomainError> {
    let DomainValue::Lattice(LatticeRange {
        lattice,
        bounds: Some(b),
    }) = r
    else {
        return Err(DomainError::NotSplittable(r.kind()));
    };
    if !lattice.lt(b.lo, b.hi) {
        return Err(DomainError::NotSplittable(DomainKind::LatticeInterval));
    }
    if !(lattice.leq(b.lo, cut) && lattice.lt(cut, b.hi)) {
        return Err(DomainError::CutOutOfRange {
            cut,
            lo: b.lo,
            hi: b.hi,
        });
    }
    Ok((
        DomainValue::lattice(lattice.clone(), b.lo, b.lo_closed, cut, true),
        DomainValue::lattice(lattice.clone(), cut, false, b.hi, b.hi_closed),
    ))
}

fn fmt_set(f: &mut fmt::Formatter<'_>, s: &BTreeSet<i64>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for DomainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        match self {
            DomainValue::Finite(s) if s.len() == 1 => write!(f, "{}", s.first().unwrap()),
            DomainValue::Finite(s) => fmt_set(f, s),
            DomainValue::Int(Some((a, b))) if a == b => write!(f, "{a}"),
            DomainValue::Int(Some((a, b))) => write!(f, "{a}..{b}"),
            DomainValue::Set(Some((a, b))) if a == b => fmt_set(f, a),
            DomainValue::Set(Some((a, b))) => {
                fmt_set(f, a)?;
                write!(f, "..")?;
                fmt_set(f, b)
            }
            DomainValue::Real(Some((a, b))) if a == b => write!(f, "{a:?}"),
            DomainValue::Real(Some((a, b))) => write!(f, "[{a:?},{b:?}]"),
            DomainValue::Lattice(LatticeRange {
                bounds: Some(b), ..
            }) => {
                if b.lo == b.hi {
                    return write!(f, "{:?}", b.lo);
                }
                let open = if b.lo_closed { '[' } else { '(' };
                let close = if b.hi_closed { ']' } else { ')' };
                write!(f, "{open}{:?},{:?}{close}", b.lo, b.hi)
            }
            _ => write!(f, "empty"),
        }
    }
}
