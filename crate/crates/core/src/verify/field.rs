use crate::error::{Error, Result};
use crate::maxops::{Operator, OperatorConfig, Profile, Side};
use crate::seq::{FiniteSequence, IntInterval};

/// Largest distance a superlevel search may reach.
const MAX_REACH: u64 = 1 << 60;

/// Analysis window `[s_lo - pad, s_hi + pad]` with `pad = max(W, 8)`.
pub fn certified_window(a: &FiniteSequence) -> Option<IntInterval> {
    let s = a.support()?;
    let pad = pad_for(a);
    Some(IntInterval::new_unchecked(s.lo() - pad as i64, s.hi() + pad as i64))
}

fn pad_for(a: &FiniteSequence) -> u64 {
    (a.len() as u64).max(8)
}

/// An operator profile together with its values on the analysis window.
///
/// Far values are nonincreasing in the distance to the support, so every
/// point outside the window is bounded by the larger of the two values just
/// outside it (the floor). Levels at or above the floor are counted from the
/// window alone; lower levels search the far field.
#[derive(Clone, Debug)]
pub struct Field {
    profile: Profile,
    window: Option<IntInterval>,
    pad: u64,
    values: Vec<f64>,
    sorted: Vec<f64>,
    edge: [f64; 2],
}

impl Field {
    pub fn new(a: &FiniteSequence, op: Operator, cfg: &OperatorConfig) -> Self {
        Self::from_profile(a, Profile::new(a, op, cfg))
    }

    pub fn from_profile(a: &FiniteSequence, profile: Profile) -> Self {
        let window = certified_window(a);
        let pad = pad_for(a);
        let values = match window {
            None => Vec::new(),
            Some(w) => {
                let s = a.support().expect("nonzero");
                let mut v = Vec::with_capacity(w.len() as usize);
                v.extend((1..=pad).rev().map(|d| profile.far(Side::Left, d)));
                v.extend_from_slice(profile.inside());
                v.extend((1..=pad).map(|d| profile.far(Side::Right, d)));
                debug_assert_eq!(v.len() as u64, w.len());
                debug_assert_eq!(s.len() + 2 * pad, w.len());
                v
            }
        };
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let edge = if window.is_some() {
            [
                profile.far(Side::Left, pad + 1),
                profile.far(Side::Right, pad + 1),
            ]
        } else {
            [0.0, 0.0]
        };
        Field {
            profile,
            window,
            pad,
            values,
            sorted,
            edge,
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn window(&self) -> Option<IntInterval> {
        self.window
    }

    pub fn pad(&self) -> u64 {
        self.pad
    }

    /// Values on the window, left to right.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Every value outside the window is at most this.
    pub fn floor(&self) -> f64 {
        self.edge[0].max(self.edge[1])
    }

    /// Number of window values `> lambda`.
    pub fn window_count(&self, lambda: f64) -> u64 {
        (self.sorted.len() - self.sorted.partition_point(|&v| v <= lambda)) as u64
    }

    /// Largest `d >= 0` with value `> lambda` at distance `d` on `side`
    /// (0 when there is none).
    pub fn extent(&self, side: Side, lambda: f64) -> Result<u64> {
        let far = |d| self.profile.far(side, d);
        if self.window.is_none() || far(1) <= lambda {
            return Ok(0);
        }
        let mut hi = self.profile.decay_radius(lambda);
        if hi > MAX_REACH {
            return Err(Error::domain(format!(
                "level λ = {lambda} is too small for an exact count"
            )));
        }
        let mut lo = 1;
        if far(self.pad + 1) > lambda {
            lo = self.pad + 1;
        } else {
            hi = hi.min(self.pad + 1);
        }
        // far(lo) > λ >= far(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if far(mid) > lambda {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Exact `|{m ∈ ℤ : value(m) > lambda}|`.
    pub fn count_above(&self, lambda: f64) -> Result<u64> {
        let mut count = self.window_count(lambda);
        for (i, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            if self.edge[i] > lambda {
                count += self.extent(side, lambda)? - self.pad;
            }
        }
        Ok(count)
    }
}

/// Exact cardinality of `{m : op(a)(m) > lambda}`.
pub fn superlevel_count(op: Operator, a: &FiniteSequence, lambda: f64, cfg: &OperatorConfig) -> Result<u64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("level λ = {lambda} must be > 0")));
    }
    if a.is_zero() {
        return Ok(0);
    }
    Field::new(a, op, cfg).count_above(lambda)
}
