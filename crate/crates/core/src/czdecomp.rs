//! Stopping-time Calderón-Zygmund decomposition on the dyadic grid.
//!
//! Starting from a level where every dyadic interval has fractional average
//! at most `t`, the children of intervals meeting the support are walked
//! downwards; a child is selected as soon as its fractional average exceeds
//! `t`, and the walk does not descend into selected intervals.

use serde::{Deserialize, Serialize};

use crate::dyadic::{DyadicInterval, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::seq::{FiniteSequence, PrefixSums};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CZParams {
    /// Height `t > 0`.
    pub t: f64,
    /// Fractional exponent, `0 <= alpha < 1`.
    pub alpha: f64,
    /// Lowest level the walk descends to.
    pub min_level: u32,
}

impl CZParams {
    pub fn new(t: f64, alpha: f64) -> Self {
        CZParams {
            t,
            alpha,
            min_level: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::domain(format!("height t = {} must be > 0", self.t)));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::domain(format!(
                "alpha = {} must lie in [0, 1)",
                self.alpha
            )));
        }
        if self.min_level > MAX_LEVEL {
            return Err(Error::domain(format!(
                "min_level {} exceeds {MAX_LEVEL}",
                self.min_level
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CZEntry {
    pub interval: DyadicInterval,
    pub average: f64,
    /// The interval the walk came from; it is the left or right double of
    /// `interval` and its fractional average is at most `t`.
    pub parent: DyadicInterval,
    pub parent_average: f64,
}

/// Flat serialized form of a [`CZEntry`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CZRecord {
    pub lo: i64,
    pub hi: i64,
    pub avg: f64,
    pub parent_lo: i64,
    pub parent_hi: i64,
    pub parent_avg: f64,
}

impl From<&CZEntry> for CZRecord {
    fn from(e: &CZEntry) -> Self {
        CZRecord {
            lo: e.interval.lo(),
            hi: e.interval.hi(),
            avg: e.average,
            parent_lo: e.parent.lo(),
            parent_hi: e.parent.hi(),
            parent_avg: e.parent_average,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CZResult {
    /// Selected intervals ordered by left endpoint.
    pub selected: Vec<CZEntry>,
    /// Level the walk started from.
    pub start_level: u32,
}

impl CZResult {
    pub fn records(&self) -> Vec<CZRecord> {
        self.selected.iter().map(CZRecord::from).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("records serialize")
    }

    /// Whether `m` lies in some selected interval.
    pub fn covers(&self, m: i64) -> bool {
        let k = self.selected.partition_point(|e| e.interval.hi() < m);
        k < self.selected.len() && self.selected[k].interval.contains(m)
    }
}

fn fractional_average(prefix: &PrefixSums, d: &DyadicInterval, alpha: f64) -> f64 {
    let sum = prefix.abs_sum(d.lo(), d.hi());
    if alpha == 0.0 {
        sum / d.len() as f64
    } else {
        sum / (d.len() as f64).powf(1.0 - alpha)
    }
}

/// Smallest level `N >= min_level` with `‖a‖₁ / 2^{N(1-α)} <= t`.
fn start_level(l1: f64, params: &CZParams) -> Result<u32> {
    for level in params.min_level..=MAX_LEVEL {
        let scale = (2.0f64).powf(f64::from(level) * (1.0 - params.alpha));
        if l1 / scale <= params.t {
            return Ok(level);
        }
    }
    Err(Error::domain(format!(
        "no dyadic level up to {MAX_LEVEL} brings the average below t = {}",
        params.t
    )))
}

pub fn cz_decompose(a: &FiniteSequence, params: &CZParams) -> Result<CZResult> {
    params.validate()?;
    let Some(support) = a.support() else {
        return Ok(CZResult::default());
    };
    let prefix = PrefixSums::new(a);
    let n0 = start_level(a.l1_norm(), params)?;
    let first = DyadicInterval::locate(support.lo(), n0)?.index();
    let last = DyadicInterval::locate(support.hi(), n0)?.index();

    let mut selected = Vec::new();
    let mut stack: Vec<DyadicInterval> = Vec::new();
    for index in (first..=last).rev() {
        stack.push(DyadicInterval::new(n0, index)?);
    }
    // Depth-first, left child first, so selections come out ordered by lo.
    while let Some(parent) = stack.pop() {
        if parent.level() <= params.min_level {
            continue;
        }
        let parent_average = fractional_average(&prefix, &parent, params.alpha);
        let (left, right) = parent.children()?;
        for child in [right, left] {
            if child.hi() < support.lo() || child.lo() > support.hi() {
                continue;
            }
            let average = fractional_average(&prefix, &child, params.alpha);
            if average > params.t {
                selected.push(CZEntry {
                    interval: child,
                    average,
                    parent,
                    parent_average,
                });
            } else {
                stack.push(child);
            }
        }
    }
    selected.sort_by_key(|e| e.interval.lo());
    Ok(CZResult {
        selected,
        start_level: n0,
    })
}

/// Whether every interval selected at height `t1` lies inside one selected
/// at height `t2 < t1` (same `alpha` and `min_level`).
pub fn cz_nesting_check(a: &FiniteSequence, t1: f64, t2: f64, shared: &CZParams) -> Result<bool> {
    if !(t1 > t2) {
        return Err(Error::domain(format!("nesting needs t1 > t2, got {t1} <= {t2}")));
    }
    let high = cz_decompose(a, &CZParams { t: t1, ..*shared })?;
    let low = cz_decompose(a, &CZParams { t: t2, ..*shared })?;
    Ok(high.selected.iter().all(|e| {
        let k = low
            .selected
            .partition_point(|f| f.interval.hi() < e.interval.lo());
        k < low.selected.len() && low.selected[k].interval.contains_interval(&e.interval)
    }))
}
