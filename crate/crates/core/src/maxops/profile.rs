use super::dyadic_max::dyadic_at;
use super::hl::{centered_inside, uncentered_inside, Envelope, FarCandidates};
use super::{CenteredDivisor, Operator, OperatorConfig, SharpField};
use crate::seq::{FiniteSequence, IntInterval, PrefixSums};

/// Which side of the support a far point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
enum Far {
    Zero,
    Hl { left: Envelope, right: Envelope },
    Dyadic { prefix: PrefixSums, seq: FiniteSequence },
    Sharp(SharpField),
}

impl Far {
    fn hl(c: FarCandidates) -> Self {
        Far::Hl {
            left: Envelope::new(&c.left, c.slope),
            right: Envelope::new(&c.right, c.slope),
        }
    }
}

/// One operator applied to one sequence, evaluated on all of ℤ.
///
/// Values on the support are precomputed; values off the support come from
/// a closed form in the distance `d` to the support, and are nonincreasing
/// in `d` for every operator.
#[derive(Clone, Debug)]
pub struct Profile {
    op: Operator,
    cfg: OperatorConfig,
    support: Option<IntInterval>,
    inside: Vec<f64>,
    far: Far,
    l1: f64,
}

impl Profile {
    pub fn new(a: &FiniteSequence, op: Operator, cfg: &OperatorConfig) -> Self {
        let l1 = a.l1_norm();
        let Some(support) = a.support() else {
            return Profile {
                op,
                cfg: *cfg,
                support: None,
                inside: Vec::new(),
                far: Far::Zero,
                l1,
            };
        };
        let (inside, far) = match op {
            Operator::Centered => {
                let prefix = PrefixSums::new(a);
                (
                    centered_inside(a, &prefix, cfg.centered_divisor),
                    Far::hl(FarCandidates::new(a, Some(cfg.centered_divisor))),
                )
            }
            Operator::Uncentered => {
                let prefix = PrefixSums::new(a);
                (
                    uncentered_inside(a, &prefix, cfg.include_singleton_intervals),
                    Far::hl(FarCandidates::new(a, None)),
                )
            }
            Operator::Dyadic => {
                let prefix = PrefixSums::new(a);
                let inside = support
                    .iter()
                    .map(|m| dyadic_at(&prefix, a, m, cfg.dyadic_min_level))
                    .collect();
                (
                    inside,
                    Far::Dyadic {
                        prefix,
                        seq: a.clone(),
                    },
                )
            }
            Operator::Sharp => {
                let field = SharpField::new(a);
                (field.inside().to_vec(), Far::Sharp(field))
            }
        };
        Profile {
            op,
            cfg: *cfg,
            support: Some(support),
            inside,
            far,
            l1,
        }
    }

    pub fn operator(&self) -> Operator {
        self.op
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.cfg
    }

    pub fn support(&self) -> Option<IntInterval> {
        self.support
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1
    }

    /// Values on the support, left to right.
    pub fn inside(&self) -> &[f64] {
        &self.inside
    }

    pub fn sharp_field(&self) -> Option<&SharpField> {
        match &self.far {
            Far::Sharp(f) => Some(f),
            _ => None,
        }
    }

    pub(crate) fn envelope(&self, side: Side) -> Option<&Envelope> {
        match (&self.far, side) {
            (Far::Hl { left, .. }, Side::Left) => Some(left),
            (Far::Hl { right, .. }, Side::Right) => Some(right),
            _ => None,
        }
    }

    pub(crate) fn dyadic_parts(&self) -> Option<(&PrefixSums, &FiniteSequence)> {
        match &self.far {
            Far::Dyadic { prefix, seq } => Some((prefix, seq)),
            _ => None,
        }
    }

    pub fn at(&self, m: i64) -> f64 {
        let Some(s) = self.support else {
            return 0.0;
        };
        if m < s.lo() {
            self.far(Side::Left, s.lo().abs_diff(m))
        } else if m > s.hi() {
            self.far(Side::Right, m.abs_diff(s.hi()))
        } else {
            self.inside[(m - s.lo()) as usize]
        }
    }

    /// Value at distance `d >= 1` from the support on the given side.
    pub fn far(&self, side: Side, d: u64) -> f64 {
        match (&self.far, self.support) {
            (Far::Zero, _) | (_, None) => 0.0,
            (Far::Hl { .. }, _) => self.envelope(side).map_or(0.0, |e| e.eval(d)),
            (Far::Dyadic { prefix, seq }, Some(s)) => {
                let m = match side {
                    Side::Left => s.lo().saturating_sub_unsigned(d),
                    Side::Right => s.hi().saturating_add_unsigned(d),
                };
                dyadic_at(prefix, seq, m, self.cfg.dyadic_min_level)
            }
            (Far::Sharp(f), _) => match side {
                Side::Left => f.left(d),
                Side::Right => f.right(d),
            },
        }
    }

    /// Values on `[lo, hi]`.
    pub fn window(&self, window: &IntInterval) -> Vec<f64> {
        window.iter().map(|m| self.at(m)).collect()
    }

    /// Upper bound for the value at distance `d >= 1`.
    pub fn decay_bound(&self, d: u64) -> f64 {
        self.op.decay_bound(self.l1, d, &self.cfg)
    }

    /// Largest value over ℤ; far values never exceed the nearest one.
    pub fn sup(&self) -> f64 {
        let edge = if self.support.is_some() {
            self.far(Side::Left, 1).max(self.far(Side::Right, 1))
        } else {
            0.0
        };
        self.inside.iter().copied().fold(edge, f64::max)
    }

    /// Smallest `d0 >= 1` such that the decay bound at `d0` is `<= lambda`.
    pub fn decay_radius(&self, lambda: f64) -> u64 {
        let ratio = self.l1 / lambda;
        let d = match self.op {
            Operator::Centered => match self.cfg.centered_divisor {
                CenteredDivisor::TwoRPlusOne => (ratio - 1.0) / 2.0,
                CenteredDivisor::TwoR => ratio / 2.0,
            },
            Operator::Uncentered | Operator::Dyadic => ratio - 1.0,
            Operator::Sharp => 2.0 * ratio - 1.0,
        };
        let mut d = d.ceil().clamp(1.0, 4.0e18) as u64;
        while d > 1 && self.decay_bound(d - 1) <= lambda {
            d -= 1;
        }
        while self.decay_bound(d) > lambda {
            d += 1;
        }
        d
    }
}
