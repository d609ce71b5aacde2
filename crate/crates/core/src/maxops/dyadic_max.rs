use super::OperatorConfig;
use crate::dyadic::{DyadicInterval, MAX_LEVEL};
use crate::seq::{FiniteSequence, PrefixSums};

/// `M_d a(m)`: the largest plain average of `|a|` over dyadic intervals of
/// level `>= cfg.dyadic_min_level` that contain `m`.
pub fn dyadic_max(a: &FiniteSequence, m: i64, cfg: &OperatorConfig) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    dyadic_at(&PrefixSums::new(a), a, m, cfg.dyadic_min_level)
}

/// Level past which every dyadic interval containing `m` already holds all
/// the support it will ever meet, so larger levels only dilute the average.
pub(crate) fn saturation_level(a: &FiniteSequence, m: i64) -> u32 {
    let s = a.support().expect("nonzero sequence");
    let reach = m.unsigned_abs().max(s.lo().unsigned_abs()).max(s.hi().unsigned_abs()) + 1;
    let bits = 64 - reach.leading_zeros();
    (bits + 1).min(MAX_LEVEL)
}

pub(crate) fn dyadic_at(prefix: &PrefixSums, a: &FiniteSequence, m: i64, min_level: u32) -> f64 {
    let top = saturation_level(a, m).max(min_level);
    let mut best = 0.0f64;
    for level in min_level..=top {
        let Ok(block) = DyadicInterval::locate(m, level) else {
            break;
        };
        let avg = prefix.abs_sum(block.lo(), block.hi()) / block.len() as f64;
        best = best.max(avg);
    }
    best
}
