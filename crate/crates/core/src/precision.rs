//! Precision values: pairs of a non-negative real and an integer tag.
//!
//! Every computation domain maps its subsets into this set, and the engine
//! compares the drop in precision between a node and its parent against
//! `(epsilon, 0)` to decide when a store is precise enough to be pushed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// Element of `R+ x Integer`, ordered lexicographically (real part first).
///
/// The fictitious top element is `(+inf, i64::MAX)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PrecisionValue {
    pub real: f64,
    pub tag: i64,
}

impl PrecisionValue {
    pub const ZERO: PrecisionValue = PrecisionValue { real: 0.0, tag: 0 };
    pub const TOP: PrecisionValue = PrecisionValue {
        real: f64::INFINITY,
        tag: i64::MAX,
    };

    /// Builds a value, clamping a slightly negative real part to zero.
    pub fn new(real: f64, tag: i64) -> Self {
        debug_assert!(!real.is_nan(), "precision real part is NaN");
        let real = if real < 0.0 { 0.0 } else { real };
        PrecisionValue { real, tag }
    }

    pub fn is_top(&self) -> bool {
        self.real == f64::INFINITY && self.tag == i64::MAX
    }

    pub fn is_finite(&self) -> bool {
        self.real.is_finite()
    }

    /// Lexicographic `<=`.
    pub fn leq(&self, other: &PrecisionValue) -> bool {
        self.cmp(other) != Ordering::Greater
    }

    pub fn lt(&self, other: &PrecisionValue) -> bool {
        self.cmp(other) == Ordering::Less
    }
}

impl Add for PrecisionValue {
    type Output = PrecisionValue;

    fn add(self, rhs: PrecisionValue) -> PrecisionValue {
        // +inf absorbs on the real part; the saturating tag keeps top at top
        PrecisionValue {
            real: self.real + rhs.real,
            tag: self.tag.saturating_add(rhs.tag),
        }
    }
}

impl Sub for PrecisionValue {
    type Output = PrecisionValue;

    fn sub(self, rhs: PrecisionValue) -> PrecisionValue {
        let real = if self.real == f64::INFINITY {
            f64::INFINITY
        } else {
            let d = self.real - rhs.real;
            if d < 0.0 {
                0.0
            } else {
                d
            }
        };
        PrecisionValue {
            real,
            tag: self.tag.saturating_sub(rhs.tag),
        }
    }
}

impl PartialEq for PrecisionValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PrecisionValue {}

impl PartialOrd for PrecisionValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrecisionValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_top(), other.is_top()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
        self.real
            .total_cmp(&other.real)
            .then(self.tag.cmp(&other.tag))
    }
}

impl fmt::Display for PrecisionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_top() {
            write!(f, "top")
        } else {
            write!(f, "({:?},{})", self.real, self.tag)
        }
    }
}

impl std::iter::Sum for PrecisionValue {
    fn sum<I: Iterator<Item = PrecisionValue>>(iter: I) -> Self {
        iter.fold(PrecisionValue::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(r: f64, t: i64) -> PrecisionValue {
        PrecisionValue::new(r, t)
    }

    #[test]
    fn componentwise_sum() {
        assert_eq!(pv(2.0, 1) + pv(3.0, 0), pv(5.0, 1));
        assert_eq!(pv(0.0, 0) + pv(7.5, -3), pv(7.5, -3));
        let s = pv(f64::INFINITY, 0) + pv(1.0, 5);
        assert_eq!(s.real, f64::INFINITY);
        assert_eq!(s.tag, 5);
    }

    #[test]
    fn componentwise_difference() {
        assert_eq!(pv(5.0, 2) - pv(3.0, 0), pv(2.0, 2));
        assert_eq!(pv(4.25, 9) - PrecisionValue::ZERO, pv(4.25, 9));
        let d = pv(f64::INFINITY, 0) - pv(4.0, 1);
        assert_eq!(d.real, f64::INFINITY);
        assert_eq!(d.tag, -1);
        // rounding noise never yields a negative real part
        assert_eq!((pv(0.1 + 0.2, 0) - pv(0.30000000000000004, 0)).real, 0.0);
        assert_eq!((pv(0.3, 0) - pv(0.30000000000000004, 0)).real, 0.0);
    }

    #[test]
    fn lexicographic_order() {
        assert!(pv(2.0, 5).leq(&pv(3.0, 0)));
        assert!(pv(2.0, 0).leq(&pv(2.0, 2)));
        assert!(pv(2.0, 0).lt(&pv(2.0, 2)));
        assert!(pv(1.5, 3).leq(&pv(1.5, 3)));
        assert!(!pv(3.0, 0).leq(&pv(2.0, 9)));
    }

    #[test]
    fn top_is_strict_maximum() {
        let top = PrecisionValue::TOP;
        assert!(pv(1e300, i64::MAX).lt(&top));
        assert!(pv(f64::INFINITY, 0).lt(&top));
        assert!(top.leq(&top));
        assert!(!top.lt(&top));
    }
}
