//! Seeded hill climbing for extremal ratios.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::lp::lp_power_of;
use crate::error::{Error, Result};
use crate::maxops::{Operator, OperatorConfig};
use crate::seq::FiniteSequence;

const UNIT: f64 = 65536.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioId {
    /// `sup_m M a(m) / M′a(m)`.
    SandwichPointwise,
    /// `sup_λ |{M′a > 4λ}| / |{M_d a > λ}|`.
    WeakCompare,
    /// `Σ (M_d a)^p / Σ (M♯a)^p`.
    FeffermanSteinP,
}

impl RatioId {
    pub const ALL: [RatioId; 3] = [
        RatioId::SandwichPointwise,
        RatioId::WeakCompare,
        RatioId::FeffermanSteinP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RatioId::SandwichPointwise => "sandwich_pointwise",
            RatioId::WeakCompare => "weak_compare",
            RatioId::FeffermanSteinP => "fefferman_stein_p",
        }
    }
}

impl fmt::Display for RatioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RatioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RatioId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown ratio '{s}' (expected sandwich_pointwise, weak_compare or fefferman_stein_p)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: u32,
    /// Mutations tried per restart.
    pub iterations: u32,
    /// Support width of the candidates.
    pub width: usize,
    /// Exponent for `fefferman_stein_p`.
    pub p: f64,
    pub operators: OperatorConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 1,
            restarts: 4,
            iterations: 200,
            width: 8,
            p: 2.0,
            operators: OperatorConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub ratio_id: RatioId,
    pub best_ratio: f64,
    pub witness: FiniteSequence,
}

/// The ratio on one sequence; `None` when it is undefined (zero sequence).
pub fn ratio_of(id: RatioId, a: &FiniteSequence, p: f64, cfg: &OperatorConfig) -> Result<Option<f64>> {
    if a.is_zero() {
        return Ok(None);
    }
    Ok(Some(match id {
        RatioId::SandwichPointwise => {
            let fu = Field::new(a, Operator::Uncentered, cfg);
            let fc = Field::new(a, Operator::Centered, cfg);
            fu.values()
                .iter()
                .zip(fc.values())
                .filter(|(_, &c)| c > 0.0)
                .map(|(u, c)| u / c)
                .fold(0.0, f64::max)
        }
        RatioId::WeakCompare => {
            let fc = Field::new(a, Operator::Centered, cfg);
            let fd = Field::new(a, Operator::Dyadic, cfg);
            let mut grid: Vec<f64> = fc.values().iter().map(|v| v / 4.0).collect();
            grid.extend_from_slice(fd.values());
            grid.retain(|&l| l > 0.0);
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let mut best = 0.0f64;
            for lambda in grid {
                let rhs = fd.count_above(lambda)?;
                if rhs > 0 {
                    best = best.max(fc.count_above(4.0 * lambda)? as f64 / rhs as f64);
                }
            }
            best
        }
        RatioId::FeffermanSteinP => {
            let a = a.abs();
            let d = lp_power_of(Field::new(&a, Operator::Dyadic, cfg).profile(), p, 1e-9)?;
            let s = lp_power_of(Field::new(&a, Operator::Sharp, cfg).profile(), p, 1e-9)?;
            d.value / s.value
        }
    }))
}

fn dyadic_round(v: f64) -> f64 {
    (v * UNIT).round() / UNIT
}

/// Hill climbing over nonnegative sequences of a fixed width: mutate one
/// coordinate by a random step of random scale, keep the change when the
/// ratio grows, restart from random points. Restart 0 starts from `δ₀`.
/// Deterministic for a fixed configuration.
pub fn estimate_constant(id: RatioId, search: &SearchConfig) -> Result<SearchResult> {
    if search.width == 0 {
        return Err(Error::usage("search width must be at least 1"));
    }
    let w = search.width;
    let mut rng = Xoshiro256StarStar::seed_from_u64(search.seed);
    let eval = |v: &[f64]| -> Result<Option<(f64, FiniteSequence)>> {
        let a = FiniteSequence::new(0, v.to_vec())?;
        Ok(ratio_of(id, &a, search.p, &search.operators)?.map(|r| (r, a)))
    };
    let mut best: Option<(f64, FiniteSequence)> = None;
    for restart in 0..search.restarts.max(1) {
        let mut cur: Vec<f64> = if restart == 0 {
            let mut v = vec![0.0; w];
            v[0] = 1.0;
            v
        } else {
            (0..w)
                .map(|_| (rng.next_u64() % (1 << 16) + 1) as f64 / UNIT)
                .collect()
        };
        let Some((mut cur_ratio, a)) = eval(&cur)? else {
            continue;
        };
        if best.as_ref().is_none_or(|b| cur_ratio > b.0) {
            best = Some((cur_ratio, a));
        }
        for _ in 0..search.iterations {
            let i = (rng.next_u64() % w as u64) as usize;
            let scale = cur.iter().fold(1.0f64, |m, v| m.max(v.abs())) / f64::from(1u32 << (rng.next_u64() % 8));
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let mut next = cur.clone();
            next[i] = dyadic_round((next[i] + scale * (2.0 * u - 1.0)).abs());
            if next[i] == cur[i] {
                continue;
            }
            if let Some((r, a)) = eval(&next)? {
                if r > cur_ratio {
                    cur = next;
                    cur_ratio = r;
                    if best.as_ref().is_none_or(|b| r > b.0) {
                        best = Some((r, a));
                    }
                }
            }
        }
    }
    let (best_ratio, witness) = best.expect("restart 0 is nonzero");
    Ok(SearchResult {
        ratio_id: id,
        best_ratio,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_search_reaches_three_and_stops() {
        let cfg = SearchConfig {
            iterations: 40,
            restarts: 2,
            ..SearchConfig::default()
        };
        let r = estimate_constant(RatioId::SandwichPointwise, &cfg).unwrap();
        assert!(r.best_ratio >= 3.0 - 1e-9);
        assert!(r.best_ratio <= 3.0 * (1.0 + 1e-9));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = SearchConfig {
            iterations: 15,
            restarts: 2,
            width: 4,
            ..SearchConfig::default()
        };
        for id in RatioId::ALL {
            let x = estimate_constant(id, &cfg).unwrap();
            let y = estimate_constant(id, &cfg).unwrap();
            assert_eq!(x, y);
            assert!(x.best_ratio.is_finite());
        }
    }

    #[test]
    fn weak_ratio_stays_below_three() {
        let cfg = SearchConfig {
            iterations: 30,
            restarts: 2,
            ..SearchConfig::default()
        };
        let r = estimate_constant(RatioId::WeakCompare, &cfg).unwrap();
        assert!(r.best_ratio <= 3.0);
    }
}
