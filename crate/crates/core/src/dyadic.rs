//! Dyadic grid on ℤ: `I_{N,j} = [(j-1)·2^N + 1, j·2^N]`.
//!
//! Level 0 is admitted (singletons). For a fixed level the intervals tile ℤ,
//! and any two dyadic intervals are either nested or disjoint.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::IntInterval;

/// Largest admissible level; endpoints stay inside ±2^62.
pub const MAX_LEVEL: u32 = 61;
const ENDPOINT_LIMIT: i128 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    level: u32,
    index: i64,
}

/// Left double, right double and triple of a dyadic interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub two_left: IntInterval,
    pub two_right: IntInterval,
    pub three: IntInterval,
}

/// `⌈m / 2^level⌉` with exact integer rounding.
pub(crate) fn ceil_div_pow2(m: i64, level: u32) -> i64 {
    let q = m >> level; // floor for signed shift
    if m & ((1i64 << level) - 1) != 0 {
        q + 1
    } else {
        q
    }
}

impl DyadicInterval {
    pub fn new(level: u32, index: i64) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::domain(format!(
                "dyadic level {level} exceeds {MAX_LEVEL}"
            )));
        }
        let d = DyadicInterval { level, index };
        let lo = (index as i128 - 1) << level;
        let hi = (index as i128) << level;
        if lo.abs() > ENDPOINT_LIMIT || hi.abs() > ENDPOINT_LIMIT {
            return Err(Error::domain(format!(
                "dyadic interval I_{{{level},{index}}} overflows 2^62"
            )));
        }
        Ok(d)
    }

    /// The unique level-`level` interval containing `m`.
    pub fn locate(m: i64, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::domain(format!(
                "dyadic level {level} exceeds {MAX_LEVEL}"
            )));
        }
        Self::new(level, ceil_div_pow2(m, level))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    /// `2^level`.
    pub fn len(&self) -> u64 {
        1u64 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> i64 {
        ((self.index - 1) << self.level) + 1
    }

    pub fn hi(&self) -> i64 {
        self.index << self.level
    }

    pub fn span(&self) -> IntInterval {
        IntInterval::new_unchecked(self.lo(), self.hi())
    }

    pub fn contains(&self, m: i64) -> bool {
        self.lo() <= m && m <= self.hi()
    }

    /// `I_{N+1, ⌈j/2⌉}`.
    pub fn parent(&self) -> Result<Self> {
        Self::new(self.level + 1, ceil_div_pow2(self.index, 1))
    }

    /// `(I_{N-1, 2j-1}, I_{N-1, 2j})`.
    pub fn children(&self) -> Result<(Self, Self)> {
        if self.level == 0 {
            return Err(Error::domain("a level-0 interval has no children"));
        }
        let level = self.level - 1;
        Ok((
            DyadicInterval {
                level,
                index: 2 * self.index - 1,
            },
            DyadicInterval {
                level,
                index: 2 * self.index,
            },
        ))
    }

    /// `2LI = [(j-2)2^N+1, j2^N]`, `2RI = [(j-1)2^N+1, (j+1)2^N]`,
    /// `3I = [(j-2)2^N+1, (j+1)2^N]`.
    pub fn expand(&self) -> Expansion {
        let size = 1i64 << self.level;
        let lo = self.lo();
        let hi = self.hi();
        Expansion {
            two_left: IntInterval::new_unchecked(lo - size, hi),
            two_right: IntInterval::new_unchecked(lo, hi + size),
            three: IntInterval::new_unchecked(lo - size, hi + size),
        }
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.span().contains_interval(&other.span())
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{{{},{}}}={}", self.level, self.index, self.span())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: i64, hi: i64) -> IntInterval {
        IntInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn locate_examples() {
        let d = DyadicInterval::locate(0, 1).unwrap();
        assert_eq!((d.index(), d.span()), (0, iv(-1, 0)));
        let d = DyadicInterval::locate(1, 2).unwrap();
        assert_eq!((d.index(), d.span()), (1, iv(1, 4)));
        let d = DyadicInterval::locate(-3, 2).unwrap();
        assert_eq!((d.index(), d.span()), (0, iv(-3, 0)));
    }

    #[test]
    fn parent_and_children_examples() {
        let d = DyadicInterval::locate(1, 1).unwrap();
        assert_eq!(d.span(), iv(1, 2));
        assert_eq!(d.parent().unwrap().span(), iv(1, 4));
        let d = DyadicInterval::new(1, 0).unwrap();
        assert_eq!(d.parent().unwrap().span(), iv(-3, 0));
        let (l, r) = DyadicInterval::new(2, 1).unwrap().children().unwrap();
        assert_eq!((l.span(), r.span()), (iv(1, 2), iv(3, 4)));
        assert!(DyadicInterval::new(0, 5).unwrap().children().is_err());
    }

    #[test]
    fn expand_examples() {
        let e = DyadicInterval::new(2, 1).unwrap().expand();
        assert_eq!(e.two_left, iv(-3, 4));
        assert_eq!(e.two_right, iv(1, 8));
        assert_eq!(e.three, iv(-3, 8));
        assert_eq!(e.three.len(), 12);
        let e = DyadicInterval::new(1, 0).unwrap().expand();
        assert_eq!(e.two_left, iv(-3, 0));
        assert_eq!(e.two_right, iv(-1, 2));
        assert_eq!(e.three, iv(-3, 2));
    }

    #[test]
    fn overflow_is_a_domain_error() {
        assert!(DyadicInterval::new(62, 0).is_err());
        assert!(DyadicInterval::new(40, 1 << 30).is_err());
        assert!(DyadicInterval::locate(i64::MAX, MAX_LEVEL).is_err());
        assert!(DyadicInterval::locate(1 << 61, MAX_LEVEL).is_ok());
    }

    #[test]
    fn parent_matches_parity_of_double() {
        for level in 0..=20u32 {
            for index in -(1i64 << 10)..=(1i64 << 10) {
                let d = DyadicInterval::new(level, index).unwrap();
                let e = d.expand();
                let parent = d.parent().unwrap().span();
                if index % 2 == 0 {
                    assert_eq!(parent, e.two_left, "{d}");
                } else {
                    assert_eq!(parent, e.two_right, "{d}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn locate_contains_point(m in -1_000_000_000i64..1_000_000_000, level in 0u32..30) {
            let d = DyadicInterval::locate(m, level).unwrap();
            prop_assert!(d.contains(m));
            prop_assert_eq!(d.len(), d.span().len());
            // constant on the span
            prop_assert_eq!(DyadicInterval::locate(d.lo(), level).unwrap(), d);
            prop_assert_eq!(DyadicInterval::locate(d.hi(), level).unwrap(), d);
        }

        #[test]
        fn children_partition_parent(index in -100_000i64..100_000, level in 1u32..30) {
            let d = DyadicInterval::new(level, index).unwrap();
            let (l, r) = d.children().unwrap();
            prop_assert_eq!(l.lo(), d.lo());
            prop_assert_eq!(l.hi() + 1, r.lo());
            prop_assert_eq!(r.hi(), d.hi());
            prop_assert_eq!(l.parent().unwrap(), d);
            prop_assert_eq!(r.parent().unwrap(), d);
        }

        #[test]
        fn expansion_set_identities(index in -100_000i64..100_000, level in 0u32..30) {
            let d = DyadicInterval::new(level, index).unwrap();
            let e = d.expand();
            prop_assert_eq!(e.two_left.lo(), e.three.lo());
            prop_assert_eq!(e.two_right.hi(), e.three.hi());
            prop_assert_eq!(e.two_left.intersect(&e.two_right), Some(d.span()));
            prop_assert_eq!(e.three.len(), 3 * d.len());
        }

        #[test]
        fn nested_or_disjoint(a in -10_000i64..10_000, la in 0u32..12, b in -10_000i64..10_000, lb in 0u32..12) {
            let x = DyadicInterval::locate(a, la).unwrap();
            let y = DyadicInterval::locate(b, lb).unwrap();
            let (sx, sy) = (x.span(), y.span());
            prop_assert!(sx.is_disjoint(&sy) || sx.contains_interval(&sy) || sy.contains_interval(&sx));
            prop_assert!(x.parent().unwrap().contains_interval(&x));
        }
    }
}
