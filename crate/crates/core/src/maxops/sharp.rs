//! Sharp maximal operator `M♯a(m) = sup_{I ∋ m} (1/|I|) Σ_{n∈I} |a(n) - a_I|`.
//!
//! An interval meeting the support is determined, as far as its oscillation
//! goes, by its trace `J` on the support and its length `n`: the remaining
//! `n - |J|` points are zeros. Intervals that stick out of the support on
//! the left have a prefix of the support as trace, and symmetrically on the
//! right. For a fixed trace `J` with sum `S >= 0` (negate otherwise) and
//! mean `μ = S/n`,
//!
//! ```text
//! g_J(n) = (2/n) Σ_{v ∈ J, v > μ} (v - μ) = α/n - β/n²,
//! α = 2 Σ_{v>μ} v,  β = 2 S #{v > μ},
//! ```
//!
//! and the set `{v > μ}` only changes when `μ` crosses a value of `J`. So
//! `g_J` is piecewise of the form `α/n - β/n²` with at most `|J| + 1`
//! pieces, and `sup_{n >= N} g_J(n)` is exact for every `N`.

use super::OperatorConfig;
use crate::seq::{FiniteSequence, IntInterval};

/// `n ↦ g_J(n)` for `n >= |J|`, stored piecewise.
#[derive(Clone, Debug)]
pub struct PieceFunction {
    base: f64,
    starts: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `tail_sup[i]` = sup over pieces `i..`.
    tail_sup: Vec<f64>,
    /// `A + |S|`; `g_J(n) <= bound / n` for all `n`.
    bound: f64,
}

fn piece_value(alpha: f64, beta: f64, n: f64) -> f64 {
    ((alpha - beta / n) / n).max(0.0)
}

/// Supremum of `α/n - β/n²` over integers in `[a, b]` (`b` may be infinite).
fn piece_sup(alpha: f64, beta: f64, a: f64, b: f64) -> f64 {
    if alpha <= 0.0 {
        return 0.0;
    }
    let peak = 2.0 * beta / alpha;
    if peak <= a {
        piece_value(alpha, beta, a)
    } else if peak >= b {
        piece_value(alpha, beta, b)
    } else {
        piece_value(alpha, beta, peak.floor().max(a)).max(piece_value(alpha, beta, peak.ceil().min(b)))
    }
}

impl PieceFunction {
    /// `values` are the entries of the trace `J`, in any order.
    pub fn new(values: &[f64]) -> Self {
        let k = values.len() as f64;
        let mut sum: f64 = values.iter().sum();
        let abs_sum: f64 = values.iter().map(|v| v.abs()).sum();
        let flip = sum < 0.0;
        if flip {
            sum = -sum;
        }
        let mut positives: Vec<f64> = values
            .iter()
            .map(|&v| if flip { -v } else { v })
            .filter(|&v| v > 0.0)
            .collect();
        positives.sort_by(|x, y| y.total_cmp(x));

        let mut starts = vec![k];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut gt_sum = 0.0;
        let mut gt_count = 0.0;
        for v in positives {
            // v joins {v > μ} once n exceeds S / v.
            let enters = (sum / v).ceil().max(k);
            if enters > *starts.last().unwrap() {
                alpha.push(2.0 * gt_sum);
                beta.push(2.0 * sum * gt_count);
                starts.push(enters);
            }
            gt_sum += v;
            gt_count += 1.0;
        }
        alpha.push(2.0 * gt_sum);
        beta.push(2.0 * sum * gt_count);

        let pieces = starts.len();
        let mut tail_sup = vec![0.0f64; pieces + 1];
        for i in (0..pieces).rev() {
            let end = if i + 1 < pieces {
                starts[i + 1] - 1.0
            } else {
                f64::INFINITY
            };
            tail_sup[i] = tail_sup[i + 1].max(piece_sup(alpha[i], beta[i], starts[i], end));
        }
        PieceFunction {
            base: k,
            starts,
            alpha,
            beta,
            tail_sup,
            bound: abs_sum + sum,
        }
    }

    /// `|J|`.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// `A + |S|`, with `g_J(n) <= bound / n`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `β` of the last piece: `g_J(n) >= bound/n - curvature/n²` for every `n`.
    pub fn curvature(&self) -> f64 {
        *self.beta.last().expect("at least one piece")
    }

    pub fn pieces(&self) -> usize {
        self.starts.len()
    }

    fn piece_of(&self, n: f64) -> usize {
        self.starts.partition_point(|&s| s <= n).saturating_sub(1)
    }

    /// `g_J(n)` for integer `n >= |J|`.
    pub fn value(&self, n: f64) -> f64 {
        let i = self.piece_of(n);
        piece_value(self.alpha[i], self.beta[i], n)
    }

    /// `sup_{n >= from} g_J(n)` over integers.
    pub fn sup_from(&self, from: f64) -> f64 {
        let from = from.max(self.base);
        let i = self.piece_of(from);
        let end = if i + 1 < self.starts.len() {
            self.starts[i + 1] - 1.0
        } else {
            f64::INFINITY
        };
        piece_sup(self.alpha[i], self.beta[i], from, end).max(self.tail_sup[i + 1])
    }

    /// `sup_{n >= |J|} g_J(n)`.
    pub fn sup(&self) -> f64 {
        self.tail_sup[0]
    }
}

/// Minimal Fenwick tree over value ranks carrying counts and sums.
struct RankTree {
    count: Vec<u32>,
    sum: Vec<f64>,
}

impl RankTree {
    fn new(n: usize) -> Self {
        RankTree {
            count: vec![0; n + 1],
            sum: vec![0.0; n + 1],
        }
    }

    fn clear(&mut self) {
        self.count.fill(0);
        self.sum.fill(0.0);
    }

    fn insert(&mut self, rank: usize, v: f64) {
        let mut i = rank + 1;
        while i < self.count.len() {
            self.count[i] += 1;
            self.sum[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Count and sum of entries with rank `< end`.
    fn prefix(&self, end: usize) -> (u32, f64) {
        let (mut c, mut s) = (0, 0.0);
        let mut i = end;
        while i > 0 {
            c += self.count[i];
            s += self.sum[i];
            i &= i - 1;
        }
        (c, s)
    }

    /// Rank of the `k`-th smallest entry (1-based).
    fn kth(&self, mut k: u32) -> usize {
        let mut pos = 0;
        let mut step = (self.count.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.count.len() && self.count[next] < k {
                pos = next;
                k -= self.count[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Sorted distinct values of the support, for rank lookups.
struct Ranks {
    sorted: Vec<f64>,
}

impl Ranks {
    fn new(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        Ranks { sorted }
    }

    fn rank(&self, v: f64) -> usize {
        self.sorted.partition_point(|&x| x < v)
    }

    /// Number of distinct values `<= t`.
    fn upper(&self, t: f64) -> usize {
        self.sorted.partition_point(|&x| x <= t)
    }
}

/// Exact `M♯a` on all of ℤ for one sequence.
#[derive(Clone, Debug)]
pub struct SharpField {
    support: Option<IntInterval>,
    inside: Vec<f64>,
    prefix: Vec<PieceFunction>,
    suffix: Vec<PieceFunction>,
    prefix_order: Vec<usize>,
    suffix_order: Vec<usize>,
    l1: f64,
}

impl SharpField {
    pub fn new(a: &FiniteSequence) -> Self {
        let Some(support) = a.support() else {
            return SharpField {
                support: None,
                inside: Vec::new(),
                prefix: Vec::new(),
                suffix: Vec::new(),
                prefix_order: Vec::new(),
                suffix_order: Vec::new(),
                l1: 0.0,
            };
        };
        let vals = a.values();
        let w = vals.len();
        let prefix: Vec<PieceFunction> = (0..w).map(|j| PieceFunction::new(&vals[..=j])).collect();
        let suffix: Vec<PieceFunction> = (0..w).map(|i| PieceFunction::new(&vals[i..])).collect();

        let mut inside = interior_oscillation_max(vals);
        // Traces that touch an end of the support may carry extra zeros.
        let mut best = 0.0f64;
        for j in (0..w).rev() {
            best = best.max(prefix[j].sup());
            inside[j] = inside[j].max(best);
        }
        best = 0.0;
        for i in 0..w {
            best = best.max(suffix[i].sup());
            inside[i] = inside[i].max(best);
        }

        let by_bound = |fs: &[PieceFunction]| {
            let mut order: Vec<usize> = (0..fs.len()).collect();
            order.sort_by(|&x, &y| fs[y].bound().total_cmp(&fs[x].bound()).then(x.cmp(&y)));
            order
        };
        SharpField {
            support: Some(support),
            inside,
            prefix_order: by_bound(&prefix),
            suffix_order: by_bound(&suffix),
            prefix,
            suffix,
            l1: a.l1_norm(),
        }
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

    pub fn at(&self, m: i64) -> f64 {
        let Some(s) = self.support else {
            return 0.0;
        };
        if m < s.lo() {
            self.left(s.lo().abs_diff(m))
        } else if m > s.hi() {
            self.right(m.abs_diff(s.hi()))
        } else {
            self.inside[(m - s.lo()) as usize]
        }
    }

    /// Value at distance `d >= 1` to the left of the support.
    pub fn left(&self, d: u64) -> f64 {
        far_value(&self.prefix, &self.prefix_order, d)
    }

    /// Value at distance `d >= 1` to the right of the support.
    pub fn right(&self, d: u64) -> f64 {
        far_value(&self.suffix, &self.suffix_order, d)
    }

    /// Piece functions of the prefixes (left side) or suffixes (right side).
    pub fn traces(&self, left: bool) -> &[PieceFunction] {
        if left {
            &self.prefix
        } else {
            &self.suffix
        }
    }

    /// `‖a‖⋆ = sup_m M♯a(m)`; far values never exceed the boundary values.
    pub fn sup(&self) -> f64 {
        self.inside.iter().copied().fold(0.0, f64::max)
    }
}

fn far_value(traces: &[PieceFunction], order: &[usize], d: u64) -> f64 {
    let d = d as f64;
    let mut best = 0.0f64;
    for &j in order {
        let f = &traces[j];
        if f.bound() / (d + 1.0) <= best {
            break;
        }
        let n = f.base() + d;
        if f.sup().min(f.bound() / n) <= best {
            continue;
        }
        best = best.max(f.sup_from(n));
    }
    best
}

/// For each support point, the largest oscillation over intervals inside
/// the support that contain it.
fn interior_oscillation_max(vals: &[f64]) -> Vec<f64> {
    let w = vals.len();
    let ranks = Ranks::new(vals);
    let rank_of: Vec<usize> = vals.iter().map(|&v| ranks.rank(v)).collect();
    let mut tree = RankTree::new(ranks.sorted.len());
    let mut out = vec![0.0f64; w];
    let mut row = vec![0.0f64; w];
    for l in 0..w {
        tree.clear();
        let mut sum = 0.0;
        for r in l..w {
            tree.insert(rank_of[r], vals[r]);
            sum += vals[r];
            let n = (r - l + 1) as f64;
            let mu = sum / n;
            let (c_le, s_le) = tree.prefix(ranks.upper(mu));
            let c_le = f64::from(c_le);
            let dev = (sum - s_le - (n - c_le) * mu) + (c_le * mu - s_le);
            row[r] = (dev / n).max(0.0);
        }
        let mut running = 0.0f64;
        for r in (l..w).rev() {
            running = running.max(row[r]);
            out[r] = out[r].max(running);
        }
    }
    out
}

/// Single-point `M♯a(m)`.
pub fn sharp_max(a: &FiniteSequence, m: i64, _cfg: &OperatorConfig) -> f64 {
    SharpField::new(a).at(m)
}

/// `‖a‖⋆ = sup_m M♯a(m)`.
pub fn bmo_norm(a: &FiniteSequence, _cfg: &OperatorConfig) -> f64 {
    SharpField::new(a).sup()
}

/// The lower median `b*` of `{a(k) : k ∈ I}` and
/// `min_b (1/|I|) Σ_{k∈I} |a(k) - b|`, attained at `b*`.
pub fn median_oscillation(a: &FiniteSequence, interval: &IntInterval) -> (f64, f64) {
    let mut vals: Vec<f64> = match a.support().and_then(|s| s.intersect(interval)) {
        None => Vec::new(),
        Some(c) => c.iter().map(|m| a.at(m)).collect(),
    };
    let n = interval.len();
    let zeros = n - vals.len() as u64;
    vals.sort_by(f64::total_cmp);
    let k = n.div_ceil(2);
    let negatives = vals.partition_point(|&v| v < 0.0) as u64;
    let b = if k <= negatives {
        vals[(k - 1) as usize]
    } else if k <= negatives + zeros {
        0.0
    } else {
        vals[(k - 1 - zeros) as usize]
    };
    let dev: f64 = vals.iter().map(|v| (v - b).abs()).sum::<f64>() + zeros as f64 * b.abs();
    (b, dev / n as f64)
}

/// `sup_I min_b (1/|I|) Σ_{k∈I} |a(k) - b|` over all intervals.
///
/// Inside the support every interval is visited. A trace touching an end of
/// the support may be padded with `z` zeros; once `z >= |J|` the median is 0
/// and the value `A_J / n` only decreases, so `z <= |J|` suffices.
pub fn med_bmo_norm(a: &FiniteSequence) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let vals = a.values();
    let w = vals.len();
    let ranks = Ranks::new(vals);
    let rank_of: Vec<usize> = vals.iter().map(|&v| ranks.rank(v)).collect();
    let mut tree = RankTree::new(ranks.sorted.len());

    let deviation = |tree: &RankTree, total: f64, len: u32, b: f64| {
        let (c_le, s_le) = tree.prefix(ranks.upper(b));
        (f64::from(c_le) * b - s_le) + (total - s_le - f64::from(len - c_le) * b)
    };

    let mut best = 0.0f64;
    for l in 0..w {
        tree.clear();
        let mut total = 0.0;
        for r in l..w {
            tree.insert(rank_of[r], vals[r]);
            total += vals[r];
            let n = (r - l + 1) as u32;
            let b = ranks.sorted[tree.kth(n.div_ceil(2))];
            best = best.max(deviation(&tree, total, n, b) / f64::from(n));
        }
    }

    let mut padded = |order: &mut dyn Iterator<Item = usize>| {
        tree.clear();
        let mut total = 0.0;
        let mut len = 0u32;
        for k in order {
            tree.insert(rank_of[k], vals[k]);
            total += vals[k];
            len += 1;
            let (negatives, _) = tree.prefix(ranks.rank(0.0));
            let (non_positive, _) = tree.prefix(ranks.upper(0.0));
            for z in 1..=(len + 1) {
                let n = len + z;
                let kth = n.div_ceil(2);
                let b = if kth <= negatives {
                    ranks.sorted[tree.kth(kth)]
                } else if kth <= non_positive + z {
                    0.0
                } else {
                    ranks.sorted[tree.kth(kth - z)]
                };
                let dev = deviation(&tree, total, len, b) + f64::from(z) * b.abs();
                best = best.max(dev / f64::from(n));
            }
        }
    };
    padded(&mut (0..w));
    padded(&mut (0..w).rev());
    best
}

#[cfg(test)]
pub(crate) fn interval_oscillation(a: &FiniteSequence, interval: &IntInterval) -> crate::error::Result<f64> {
    let n = interval.len() as f64;
    let mean = crate::seq::signed_average(a, interval);
    let (inner, zeros) = match a.support().and_then(|s| s.intersect(interval)) {
        None => (0.0, n),
        Some(c) => (
            c.iter().map(|m| (a.at(m) - mean).abs()).sum::<f64>(),
            n - c.len() as f64,
        ),
    };
    Ok((inner + zeros * mean.abs()) / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(offset: i64, values: &[f64]) -> FiniteSequence {
        FiniteSequence::new(offset, values.to_vec()).unwrap()
    }

    fn iv(lo: i64, hi: i64) -> IntInterval {
        IntInterval::new(lo, hi).unwrap()
    }

    /// Direct sup over every interval inside `[lo, hi]` containing `m`.
    fn brute(a: &FiniteSequence, m: i64, lo: i64, hi: i64) -> f64 {
        let mut best = 0.0f64;
        for l in lo..=m {
            for r in m..=hi {
                best = best.max(interval_oscillation(a, &iv(l, r)).unwrap());
            }
        }
        best
    }

    #[test]
    fn delta_values() {
        let d = FiniteSequence::delta(0, 1.0).unwrap();
        let c = OperatorConfig::default();
        assert_eq!(sharp_max(&d, 0, &c), 0.5);
        assert_eq!(bmo_norm(&d, &c), 0.5);
        assert_eq!(bmo_norm(&FiniteSequence::zero(), &c), 0.0);
        assert_eq!(sharp_max(&FiniteSequence::zero(), 3, &c), 0.0);
        let d2 = FiniteSequence::delta(0, 2.0).unwrap();
        assert_eq!(bmo_norm(&d2, &c), 1.0);
    }

    #[test]
    fn piece_function_matches_direct_oscillation() {
        let vals = [3.0, -1.0, 0.0, 2.5, 0.25, 4.0, -0.5];
        let a = seq(0, &vals);
        let f = PieceFunction::new(&vals);
        for n in 7..200i64 {
            // trace [0, 6] followed by n - 7 zeros
            let direct = interval_oscillation(&a, &iv(0, n - 1)).unwrap();
            assert!((f.value(n as f64) - direct).abs() < 1e-13, "n={n}");
        }
        for from in 7..150 {
            let direct = (from..400)
                .map(|n| f.value(n as f64))
                .fold(0.0, f64::max);
            assert!((f.sup_from(from as f64) - direct).abs() < 1e-13);
        }
        let neg: Vec<f64> = vals.iter().map(|v| -v).collect();
        let g = PieceFunction::new(&neg);
        for n in 7..50 {
            assert!((f.value(n as f64) - g.value(n as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn field_matches_brute_force() {
        let cases = [
            seq(0, &[1.0]),
            seq(-2, &[1.0, 0.0, 3.0, -2.0]),
            seq(3, &[0.5, 0.5, 0.5, 4.0, 0.5, 0.5]),
            seq(0, &[1.0, -1.0, 1.0, -1.0, 1.0]),
            seq(-1, &[5.0, 0.125, 0.0, 0.0, 0.0625, 7.0]),
        ];
        for a in &cases {
            let field = SharpField::new(a);
            let s = a.support().unwrap();
            for m in (s.lo() - 12)..=(s.hi() + 12) {
                let expect = brute(a, m, s.lo() - 40, s.hi() + 40);
                assert!(
                    (field.at(m) - expect).abs() < 1e-13,
                    "m={m}: {} vs {expect}",
                    field.at(m)
                );
            }
        }
    }

    #[test]
    fn constant_sequence_has_no_inner_oscillation() {
        let a = seq(0, &[2.0; 6]);
        for l in 0..6 {
            for r in l..6 {
                assert_eq!(interval_oscillation(&a, &iv(l, r)).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn median_oscillation_examples() {
        let a = seq(0, &[1.0, 2.0, 9.0]);
        let (b, v) = median_oscillation(&a, &iv(0, 2));
        assert_eq!(b, 2.0);
        assert!((v - 8.0 / 3.0).abs() < 1e-15);
        // dense grid over b confirms the minimum
        let grid_min = (0..=9000)
            .map(|k| {
                let b = k as f64 / 1000.0;
                ((1.0 - b).abs() + (2.0 - b).abs() + (9.0 - b).abs()) / 3.0
            })
            .fold(f64::INFINITY, f64::min);
        assert!((grid_min - v).abs() < 1e-12);

        let c = seq(0, &[3.0; 4]);
        assert_eq!(median_oscillation(&c, &iv(0, 3)).1, 0.0);
        let p = seq(0, &[0.0, 4.0]);
        let (b, v) = median_oscillation(&seq(1, &[4.0]), &iv(0, 1));
        assert_eq!((b, v), (0.0, 2.0));
        assert_eq!(median_oscillation(&p, &iv(0, 1)).1, 2.0);
        assert_eq!(median_oscillation(&seq(0, &[-3.0, -1.0]), &iv(-2, 1)), (-1.0, 1.0));
    }

    #[test]
    fn med_norm_matches_brute_force() {
        let cases = [
            seq(0, &[1.0]),
            seq(0, &[1.0, 2.0, 9.0]),
            seq(-2, &[1.0, 0.0, 3.0, -2.0]),
            seq(0, &[-1.0, -1.0, 4.0, -1.0]),
        ];
        for a in &cases {
            let s = a.support().unwrap();
            let mut expect = 0.0f64;
            for l in (s.lo() - 30)..=s.hi() {
                for r in l.max(s.lo())..=(s.hi() + 30) {
                    expect = expect.max(median_oscillation(a, &iv(l, r)).1);
                }
            }
            assert!((med_bmo_norm(a) - expect).abs() < 1e-14, "{a:?}");
        }
        assert_eq!(med_bmo_norm(&FiniteSequence::zero()), 0.0);
    }
}
