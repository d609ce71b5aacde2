//! Finitely supported real sequences on the integers.
//!
//! A [`FiniteSequence`] stores the values between the first and last nonzero
//! entries together with the index of the first one; every other index reads
//! as zero. Sequences are always kept canonical, so two sequences are equal
//! exactly when they agree at every integer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive integer interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntInterval {
    lo: i64,
    hi: i64,
}

impl IntInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(IntInterval { lo, hi })
    }

    /// Constructor for callers that have already established `lo <= hi`.
    pub(crate) fn new_unchecked(lo: i64, hi: i64) -> Self {
        debug_assert!(lo <= hi);
        IntInterval { lo, hi }
    }

    /// The centered window `{m - r, ..., m + r}`.
    pub fn centered(m: i64, r: i64) -> Result<Self> {
        if r < 0 {
            return Err(Error::domain(format!("negative radius {r}")));
        }
        IntInterval::new(m - r, m + r)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Cardinality `hi - lo + 1`.
    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }

    pub fn contains_interval(&self, other: &IntInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &IntInterval) -> Option<IntInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(IntInterval { lo, hi })
    }

    pub fn is_disjoint(&self, other: &IntInterval) -> bool {
        self.intersect(other).is_none()
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A real sequence on ℤ with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSequence {
    offset: i64,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRecord {
    offset: i64,
    values: Vec<f64>,
}

impl FiniteSequence {
    /// Builds a sequence with `values[k]` at index `offset + k`, trimming
    /// zeros at both ends. Non-finite values are rejected.
    pub fn new(offset: i64, values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite value {} at index {}",
                values[k],
                offset as i128 + k as i128
            )));
        }
        Ok(Self::canonical(offset, values))
    }

    fn canonical(offset: i64, mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            if *v == 0.0 {
                *v = 0.0; // folds -0.0
            }
        }
        let Some(first) = values.iter().position(|v| *v != 0.0) else {
            return Self::zero();
        };
        let last = values.iter().rposition(|v| *v != 0.0).unwrap();
        values.truncate(last + 1);
        values.drain(..first);
        FiniteSequence {
            offset: offset + first as i64,
            values,
        }
    }

    pub fn zero() -> Self {
        FiniteSequence {
            offset: 0,
            values: Vec::new(),
        }
    }

    /// `height` at index `at`, zero elsewhere.
    pub fn delta(at: i64, height: f64) -> Result<Self> {
        Self::new(at, vec![height])
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first stored value (0 for the zero sequence).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of stored values, i.e. the support width.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `[s_lo, s_hi]`, or `None` for the zero sequence.
    pub fn support(&self) -> Option<IntInterval> {
        (!self.values.is_empty()).then(|| {
            IntInterval::new_unchecked(self.offset, self.offset + self.values.len() as i64 - 1)
        })
    }

    pub fn at(&self, m: i64) -> f64 {
        let k = m as i128 - self.offset as i128;
        if k < 0 || k >= self.values.len() as i128 {
            0.0
        } else {
            self.values[k as usize]
        }
    }

    /// `(index, value)` pairs over the stored range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.offset + k as i64, v))
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// Pointwise absolute value.
    pub fn abs(&self) -> Self {
        FiniteSequence {
            offset: self.offset,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    /// The sequence `m -> a(m - k)`.
    pub fn shifted(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        FiniteSequence {
            offset: self.offset + k,
            values: self.values.clone(),
        }
    }

    /// Pointwise product with the indicator of `interval`.
    pub fn restrict(&self, interval: &IntInterval) -> Self {
        match self.support().and_then(|s| s.intersect(interval)) {
            None => Self::zero(),
            Some(common) => {
                let from = (common.lo() - self.offset) as usize;
                let to = (common.hi() - self.offset) as usize;
                Self::canonical(common.lo(), self.values[from..=to].to_vec())
            }
        }
    }

    /// `Σ_m |a(m)|^p`.
    pub fn lp_power(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.values.iter().map(|v| v.abs().powf(p)).sum())
    }

    /// `∫_0^∞ p λ^(p-1) |{m : |a(m)| > λ}| dλ`, integrated exactly over the
    /// steps of the distribution function.
    pub fn layer_cake_power(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let mut levels: Vec<f64> = self
            .values
            .iter()
            .map(|v| v.abs())
            .filter(|v| *v > 0.0)
            .collect();
        levels.sort_by(f64::total_cmp);
        // On (levels[i-1], levels[i]] the count is the number of entries >= levels[i].
        let n = levels.len();
        let mut total = 0.0;
        let mut below = 0.0;
        let mut i = 0;
        while i < n {
            let v = levels[i];
            let above = (n - i) as f64;
            total += above * (v.powf(p) - below);
            below = v.powf(p);
            while i < n && levels[i] == v {
                i += 1;
            }
        }
        Ok(total)
    }

    /// `|{m : |a(m)| > λ}|`.
    pub fn distribution_count(&self, lambda: f64) -> Result<u64> {
        distribution_count(self.values.iter().copied(), lambda)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SequenceRecord = serde_json::from_str(text).map_err(|e| {
            if contains_non_finite_token(text) {
                Error::domain("NaN/Infinity literals are not allowed in sequence files")
            } else {
                Error::Parse {
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                }
            }
        })?;
        Self::new(record.offset, record.values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SequenceRecord {
            offset: self.offset,
            values: self.values.clone(),
        })
        .expect("finite values always serialize")
    }
}

fn contains_non_finite_token(text: &str) -> bool {
    ["NaN", "Infinity", "inf", "nan"]
        .iter()
        .any(|tok| text.contains(tok))
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("exponent p = {p} must be >= 1")))
    }
}

/// Cardinality of the strict superlevel set `{|v| > λ}`.
pub fn distribution_count<I: IntoIterator<Item = f64>>(values: I, lambda: f64) -> Result<u64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("level λ = {lambda} must be > 0")));
    }
    Ok(values.into_iter().filter(|v| v.abs() > lambda).count() as u64)
}

/// `(1/|I|^(1-α)) Σ_{k∈I} |a(k)|`.
pub fn absolute_average(a: &FiniteSequence, interval: &IntInterval, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain(format!("α = {alpha} must lie in [0, 1)")));
    }
    let sum: f64 = match a.support().and_then(|s| s.intersect(interval)) {
        None => 0.0,
        Some(common) => common.iter().map(|m| a.at(m).abs()).sum(),
    };
    Ok(sum / (interval.len() as f64).powf(1.0 - alpha))
}

/// The plain signed mean `a_I = (1/|I|) Σ_{k∈I} a(k)`.
pub fn signed_average(a: &FiniteSequence, interval: &IntInterval) -> f64 {
    let sum: f64 = match a.support().and_then(|s| s.intersect(interval)) {
        None => 0.0,
        Some(common) => common.iter().map(|m| a.at(m)).sum(),
    };
    sum / interval.len() as f64
}

/// Prefix sums of `|a|` and `a` over the support, for O(1) interval sums.
#[derive(Clone, Debug)]
pub struct PrefixSums {
    offset: i64,
    abs: Vec<f64>,
    signed: Vec<f64>,
}

impl PrefixSums {
    pub fn new(a: &FiniteSequence) -> Self {
        let n = a.len();
        let mut abs = Vec::with_capacity(n + 1);
        let mut signed = Vec::with_capacity(n + 1);
        abs.push(0.0);
        signed.push(0.0);
        for &v in a.values() {
            abs.push(abs.last().unwrap() + v.abs());
            signed.push(signed.last().unwrap() + v);
        }
        PrefixSums {
            offset: a.offset(),
            abs,
            signed,
        }
    }

    fn clamp(&self, lo: i64, hi: i64) -> Option<(usize, usize)> {
        let n = self.abs.len() as i64 - 1;
        let lo = (lo as i128 - self.offset as i128).max(0);
        let hi = (hi as i128 - self.offset as i128).min(n as i128 - 1);
        (lo <= hi).then(|| (lo as usize, hi as usize + 1))
    }

    /// `Σ_{k=lo}^{hi} |a(k)|`; zero when the range misses the support.
    pub fn abs_sum(&self, lo: i64, hi: i64) -> f64 {
        self.clamp(lo, hi)
            .map_or(0.0, |(i, j)| self.abs[j] - self.abs[i])
    }

    pub fn signed_sum(&self, lo: i64, hi: i64) -> f64 {
        self.clamp(lo, hi)
            .map_or(0.0, |(i, j)| self.signed[j] - self.signed[i])
    }

    pub fn total_abs(&self) -> f64 {
        *self.abs.last().unwrap()
    }
}
