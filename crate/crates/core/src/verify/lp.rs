//! Certified `Σ_m op(a)(m)^p` over all of ℤ.
//!
//! * `M′`, `M`: off the support the operator is the upper envelope of
//!   `u / (s·d + e)`; each envelope segment is a Hurwitz-type partial sum
//!   `Σ (d + h)^{-p}`, summed directly near the support and bracketed by
//!   convexity further out.
//! * `M_d`: far points group by the first level at which their dyadic block
//!   reaches the support; the groups are finite in number up to a geometric
//!   tail with a closed form.
//! * `M♯`: exact values out to a distance `D`, then the envelope
//!   `max_j B_j/(d + k_j)` minus half of a curvature gap.

use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::maxops::{Operator, OperatorConfig, PieceFunction, Profile, Side};
use crate::seq::{FiniteSequence, PrefixSums};

/// Terms `(d + h)^{-p}` with `d + h` below this are summed one by one.
const DIRECT_LIMIT: f64 = 4096.0;
/// Largest exact sweep for the sharp operator, per side.
const SHARP_SWEEP_CAP: u64 = 1 << 20;

/// Certified p-th power sum: the true value lies in
/// `[value - tail_bound, value + tail_bound]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpPower {
    pub value: f64,
    pub tail_bound: f64,
}

impl LpPower {
    pub fn lower(&self) -> f64 {
        self.value - self.tail_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// `Σ_{d=a}^{b} (d + h)^{-p}` (`b = None` for ∞) as `(value, half_gap)`.
pub(crate) fn hurwitz(p: f64, h: f64, a: u64, b: Option<u64>) -> (f64, f64) {
    let mut sum = 0.0;
    let mut d = a;
    while b.is_none_or(|b| d <= b) && (d as f64 + h) < DIRECT_LIMIT {
        sum += (d as f64 + h).powf(-p);
        d += 1;
    }
    if b.is_some_and(|b| d > b) {
        return (sum, 0.0);
    }
    let f = |t: f64| t.powf(-p);
    let integral = |x0: f64, x1: Option<f64>| match x1 {
        None => x0.powf(1.0 - p) / (p - 1.0),
        Some(x1) => {
            -x0.powf(1.0 - p) * ((1.0 - p) * ((x1 - x0) / x0).ln_1p()).exp_m1() / (p - 1.0)
        }
    };
    let x = d as f64 + h;
    let y = b.map(|b| b as f64 + h);
    let lower = integral(x, y) + (f(x) + y.map_or(0.0, f)) / 2.0;
    let upper = integral(x - 0.5, y.map(|y| y + 0.5));
    (sum + (lower + upper) / 2.0, (upper - lower).abs() / 2.0)
}

fn inside_power(profile: &Profile, p: f64) -> f64 {
    profile.inside().iter().map(|v| v.powf(p)).sum()
}

fn hl_side(profile: &Profile, side: Side, p: f64) -> (f64, f64) {
    let env = profile.envelope(side).expect("hl profile");
    let s = env.slope();
    let (mut value, mut gap) = (0.0, 0.0);
    for ((u, e), lo, hi) in env.segments(1) {
        let (v, g) = hurwitz(p, e / s, lo, hi);
        let scale = (u / s).powf(p);
        value += scale * v;
        gap += scale * g;
    }
    (value, gap)
}

fn dyadic_side(prefix: &PrefixSums, a: &FiniteSequence, min_level: u32, side: Side, p: f64) -> Result<f64> {
    let support = a.support().expect("nonzero");
    let anchor = match side {
        Side::Left => support.lo(),
        Side::Right => support.hi(),
    };
    let top = crate::maxops::saturation_level(a, anchor).max(min_level);
    let mut sums = Vec::new();
    let mut averages = Vec::new();
    let mut edges = Vec::new();
    for level in min_level..=top {
        let b = DyadicInterval::locate(anchor, level)?;
        let sum = prefix.abs_sum(b.lo(), b.hi());
        sums.push(sum);
        averages.push(sum / b.len() as f64);
        edges.push(match side {
            Side::Left => b.lo(),
            Side::Right => b.hi(),
        });
    }
    for i in (0..averages.len().saturating_sub(1)).rev() {
        averages[i] = averages[i].max(averages[i + 1]);
    }
    let mut total = 0.0;
    let mut prev = anchor;
    for (avg, edge) in averages.iter().zip(&edges) {
        let count = prev.abs_diff(*edge) as f64;
        if count > 0.0 {
            total += count * avg.powf(p);
        }
        prev = *edge;
    }
    // Past `top` the block on the origin's side keeps doubling outward:
    // level N adds 2^{N-1} points of value L / 2^N.
    let grows = match side {
        Side::Left => anchor <= 0,
        Side::Right => anchor >= 1,
    };
    if grows {
        let l = *sums.last().expect("at least one level");
        let r = 2f64.powf(1.0 - p);
        total += 0.5 * l.powf(p) * 2f64.powf(f64::from(top + 1) * (1.0 - p)) / (1.0 - r);
    }
    Ok(total)
}

fn sharp_side(profile: &Profile, side: Side, p: f64, target: f64) -> (f64, f64) {
    let field = profile.sharp_field().expect("sharp profile");
    let traces: &[PieceFunction] = field.traces(side == Side::Left);
    let alpha_max = traces.iter().map(|f| f.bound()).fold(0.0, f64::max);
    let beta_max = traces.iter().map(|f| f.curvature()).fold(0.0, f64::max);
    let coeff = alpha_max.powf(p - 1.0) * beta_max;
    // gap(D) = coeff · (D + 1)^{-p} <= 2·target
    let depth = if coeff == 0.0 {
        0
    } else {
        let need = (coeff / (2.0 * target)).powf(1.0 / p).ceil() - 1.0;
        need.clamp(0.0, SHARP_SWEEP_CAP as f64) as u64
    };
    let far = |d| match side {
        Side::Left => field.left(d),
        Side::Right => field.right(d),
    };
    let mut value: f64 = (1..=depth).map(|d| far(d).powf(p)).sum();
    let cands: Vec<(f64, f64)> = traces.iter().map(|f| (f.bound(), f.base())).collect();
    let env = crate::maxops::Envelope::new(&cands, 1.0);
    let mut bound = 0.0;
    for ((u, e), lo, hi) in env.segments(depth + 1) {
        let (v, g) = hurwitz(p, e, lo, hi);
        let scale = u.powf(p);
        value += scale * v;
        bound += scale * g;
    }
    let gap = coeff * ((depth + 1) as f64).powf(-p);
    (value - gap / 2.0, bound + gap / 2.0)
}

/// `Σ_m profile(m)^p` with a certified error bound.
pub fn lp_power_of(profile: &Profile, p: f64, eps: f64) -> Result<LpPower> {
    if profile.support().is_none() {
        return Ok(LpPower {
            value: 0.0,
            tail_bound: 0.0,
        });
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "p = {p}: operator outputs of a nonzero sequence are only p-summable for p > 1"
        )));
    }
    let inside = inside_power(profile, p);
    let mut value = inside;
    let mut bound = 0.0;
    for side in [Side::Left, Side::Right] {
        let (v, b) = match profile.operator() {
            Operator::Centered | Operator::Uncentered => hl_side(profile, side, p),
            Operator::Dyadic => {
                let (prefix, a) = profile.dyadic_parts().expect("dyadic profile");
                (dyadic_side(prefix, a, profile.config().dyadic_min_level, side, p)?, 0.0)
            }
            Operator::Sharp => sharp_side(profile, side, p, eps.max(f64::EPSILON) * inside / 4.0),
        };
        value += v;
        bound += b;
    }
    Ok(LpPower {
        value,
        tail_bound: bound,
    })
}

/// `Σ_m op(a)(m)^p` with a certified error bound; `eps` is the relative
/// accuracy aimed for.
pub fn lp_power_certified(op: Operator, a: &FiniteSequence, p: f64, eps: f64, cfg: &OperatorConfig) -> Result<LpPower> {
    lp_power_of(&Profile::new(a, op, cfg), p, eps)
}
