//! Hardy-Littlewood operators: centered windows and arbitrary intervals.

use super::{CenteredDivisor, OperatorConfig};
use crate::seq::{FiniteSequence, PrefixSums};

/// `M′a(m) = sup_{r >= 1} (1/d(r)) Σ_{|n| <= r} |a(m - n)|`.
///
/// Past `r* = max(1, |m - s_lo|, |m - s_hi|)` the window holds the whole
/// support and the quotient only shrinks, so `r <= r*` suffices.
pub fn centered_max(a: &FiniteSequence, m: i64, cfg: &OperatorConfig) -> f64 {
    let Some(support) = a.support() else {
        return 0.0;
    };
    let prefix = PrefixSums::new(a);
    let r_max = 1.max((m - support.lo()).abs()).max((m - support.hi()).abs());
    centered_at(&prefix, m, r_max, cfg.centered_divisor)
}

pub(crate) fn centered_at(prefix: &PrefixSums, m: i64, r_max: i64, div: CenteredDivisor) -> f64 {
    (1..=r_max)
        .map(|r| prefix.abs_sum(m - r, m + r) / div.divisor(r))
        .fold(0.0, f64::max)
}

/// `Ma(m) = sup_{I ∋ m} (1/|I|) Σ_{n∈I} |a(n)|`.
///
/// Moving an endpoint beyond the support only appends zeros, so optimal
/// endpoints satisfy `l ∈ [min(m, s_lo), m]` and `r ∈ [m, max(m, s_hi)]`.
pub fn uncentered_max(a: &FiniteSequence, m: i64, cfg: &OperatorConfig) -> f64 {
    let Some(support) = a.support() else {
        return 0.0;
    };
    let prefix = PrefixSums::new(a);
    let pad = i64::from(!cfg.include_singleton_intervals);
    let l_min = m.min(support.lo() - pad);
    let r_max = m.max(support.hi() + pad);
    let mut best = 0.0f64;
    for l in l_min..=m {
        for r in m..=r_max {
            if r == l && !cfg.include_singleton_intervals {
                continue;
            }
            best = best.max(prefix.abs_sum(l, r) / (r - l + 1) as f64);
        }
    }
    best
}

/// `M′` at every support point.
pub(crate) fn centered_inside(a: &FiniteSequence, prefix: &PrefixSums, div: CenteredDivisor) -> Vec<f64> {
    let s = a.support().expect("nonzero sequence");
    s.iter()
        .map(|m| {
            let r_max = 1.max(m - s.lo()).max(s.hi() - m);
            centered_at(prefix, m, r_max, div)
        })
        .collect()
}

/// `M` at every support point in O(W²): for each left end, a running
/// maximum over right ends taken from the far end inwards.
pub(crate) fn uncentered_inside(a: &FiniteSequence, prefix: &PrefixSums, singletons: bool) -> Vec<f64> {
    let s = a.support().expect("nonzero sequence");
    let pad = i64::from(!singletons);
    let mut out = vec![0.0f64; a.len()];
    for l in (s.lo() - pad)..=s.hi() {
        let mut running = 0.0f64;
        for r in (l.max(s.lo())..=(s.hi() + pad)).rev() {
            if r != l || singletons {
                running = running.max(prefix.abs_sum(l, r) / (r - l + 1) as f64);
            }
            if r <= s.hi() {
                let k = (r - s.lo()) as usize;
                out[k] = out[k].max(running);
            }
        }
    }
    out
}

/// Far-field candidates `(u, e)`: at distance `d` from the support the
/// operator equals `max u / (slope·d + e)`.
#[derive(Clone, Debug)]
pub(crate) struct FarCandidates {
    pub slope: f64,
    pub left: Vec<(f64, f64)>,
    pub right: Vec<(f64, f64)>,
}

impl FarCandidates {
    /// For `M′` the window of radius `r = d + (j - s_lo)` reaches support
    /// point `j`; for `M` the interval `[m, j]` has length `d + (j - s_lo) + 1`.
    pub fn new(a: &FiniteSequence, centered: Option<CenteredDivisor>) -> Self {
        let (slope, shift) = match centered {
            Some(CenteredDivisor::TwoRPlusOne) => (2.0, 1.0),
            Some(CenteredDivisor::TwoR) => (2.0, 0.0),
            None => (1.0, 1.0),
        };
        let vals = a.values();
        let w = vals.len();
        let mut left = Vec::new();
        let mut acc = 0.0;
        for (k, v) in vals.iter().enumerate() {
            acc += v.abs();
            if *v != 0.0 {
                left.push((acc, slope * k as f64 + shift));
            }
        }
        let mut right = Vec::new();
        acc = 0.0;
        for k in (0..w).rev() {
            acc += vals[k].abs();
            if vals[k] != 0.0 {
                right.push((acc, slope * (w - 1 - k) as f64 + shift));
            }
        }
        FarCandidates { slope, left, right }
    }

    #[cfg(test)]
    pub fn eval(cands: &[(f64, f64)], slope: f64, d: u64) -> f64 {
        let x = slope * d as f64;
        cands.iter().map(|&(u, e)| u / (x + e)).fold(0.0, f64::max)
    }
}

/// Upper envelope of `d ↦ u / (slope·d + e)` over a candidate list, kept as
/// the lower envelope of the reciprocal lines `(slope/u)·d + e/u`.
#[derive(Clone, Debug)]
pub struct Envelope {
    slope: f64,
    /// `(u, e)` in the order they become optimal as `d` grows.
    lines: Vec<(f64, f64)>,
    /// `starts[i]` is where line `i` takes over; `starts[0] = -inf`.
    starts: Vec<f64>,
}

impl Envelope {
    pub fn new(cands: &[(f64, f64)], slope: f64) -> Self {
        let mut sorted: Vec<(f64, f64)> = cands.iter().copied().filter(|c| c.0 > 0.0).collect();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let line = |(u, e): (f64, f64)| (slope / u, e / u);
        let cross = |a: (f64, f64), b: (f64, f64)| {
            let (la, lb) = (line(a), line(b));
            (lb.1 - la.1) / (la.0 - lb.0)
        };
        let mut lines: Vec<(f64, f64)> = Vec::new();
        let mut starts: Vec<f64> = Vec::new();
        for c in sorted {
            if let Some(&last) = lines.last() {
                if last.0 == c.0 {
                    continue;
                }
            }
            loop {
                let n = lines.len();
                if n == 0 {
                    starts.push(f64::NEG_INFINITY);
                    break;
                }
                let x = cross(lines[n - 1], c);
                if n >= 2 && x <= starts[n - 1] {
                    lines.pop();
                    starts.pop();
                    continue;
                }
                starts.push(x);
                break;
            }
            lines.push(c);
        }
        Envelope {
            slope,
            lines,
            starts,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    fn value(&self, i: usize, d: f64) -> f64 {
        let (u, e) = self.lines[i];
        u / (self.slope * d + e)
    }

    pub fn eval(&self, d: u64) -> f64 {
        if self.lines.is_empty() {
            return 0.0;
        }
        let x = d as f64;
        let i = self.starts.partition_point(|&s| s <= x).saturating_sub(1);
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(self.lines.len() - 1);
        (lo..=hi).map(|k| self.value(k, x)).fold(0.0, f64::max)
    }

    /// Integer ranges `[lo, hi]` (`hi = None` for unbounded) with `lo >= from`
    /// on which one `(u, e)` attains the maximum.
    pub fn segments(&self, from: u64) -> Vec<((f64, f64), u64, Option<u64>)> {
        let mut out = Vec::new();
        for (i, &c) in self.lines.iter().enumerate() {
            let lo = if i == 0 {
                from
            } else {
                (self.starts[i].ceil().max(0.0) as u64).max(from)
            };
            let hi = match self.starts.get(i + 1) {
                None => None,
                Some(&next) => {
                    let end = next.ceil();
                    if end <= lo as f64 {
                        continue;
                    }
                    Some(end as u64 - 1)
                }
            };
            out.push((c, lo, hi));
        }
        out
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }
}
