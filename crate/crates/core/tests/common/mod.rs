//! Naive enumeration of the four operators on the range [-256, 256].
#![allow(dead_code)]

use discmax::seq::FiniteSequence;

pub const REACH: i64 = 256;

/// `|a|` and signed prefix sums over `[-2^11, 2^11]`, enough for every
/// window of radius `REACH` and every block of level 10 near the range.
pub struct Dense {
    lo: i64,
    abs_prefix: Vec<f64>,
    prefix: Vec<f64>,
    vals: Vec<f64>,
}

impl Dense {
    pub fn new(a: &FiniteSequence) -> Self {
        let lo = -(1 << 11);
        let vals: Vec<f64> = (lo..=1 << 11).map(|m| a.at(m)).collect();
        let mut abs_prefix = vec![0.0];
        let mut prefix = vec![0.0];
        for v in &vals {
            abs_prefix.push(abs_prefix.last().unwrap() + v.abs());
            prefix.push(prefix.last().unwrap() + v);
        }
        Dense {
            lo,
            abs_prefix,
            prefix,
            vals,
        }
    }

    fn idx(&self, m: i64) -> usize {
        (m - self.lo) as usize
    }

    pub fn at(&self, m: i64) -> f64 {
        self.vals[self.idx(m)]
    }

    /// `Σ_{k=l}^{r} |a(k)|`.
    pub fn abs_sum(&self, l: i64, r: i64) -> f64 {
        self.abs_prefix[self.idx(r) + 1] - self.abs_prefix[self.idx(l)]
    }

    pub fn sum(&self, l: i64, r: i64) -> f64 {
        self.prefix[self.idx(r) + 1] - self.prefix[self.idx(l)]
    }
}

/// `max_{1 <= r <= 256} (1/(2r+1)) Σ_{|k-m| <= r} |a(k)|`, or divisor `2r`.
pub fn centered(a: &FiniteSequence, m: i64, two_r: bool) -> f64 {
    let d = Dense::new(a);
    centered_dense(&d, m, two_r)
}

pub fn centered_dense(d: &Dense, m: i64, two_r: bool) -> f64 {
    (1..=REACH)
        .map(|r| {
            let div = if two_r { 2 * r } else { 2 * r + 1 };
            d.abs_sum(m - r, m + r) / div as f64
        })
        .fold(0.0, f64::max)
}

/// Every interval `[l, r] ⊂ [-256, 256]`, through a running maximum:
/// `out(m) = max_{l <= m} max_{r >= m} f(l, r)`.
fn all_intervals(min_len: i64, f: impl Fn(i64, i64) -> f64) -> Vec<f64> {
    let n = (2 * REACH + 1) as usize;
    let mut out = vec![0.0f64; n];
    for l in -REACH..=REACH {
        let mut run = 0.0f64;
        for r in (l..=REACH).rev() {
            if r - l + 1 >= min_len {
                run = run.max(f(l, r));
            }
            let k = (r + REACH) as usize;
            out[k] = out[k].max(run);
        }
    }
    out
}

/// `M` on `[-256, 256]`, index `m + 256`.
pub fn uncentered_all(a: &FiniteSequence, singletons: bool) -> Vec<f64> {
    let d = Dense::new(a);
    all_intervals(if singletons { 1 } else { 2 }, |l, r| {
        d.abs_sum(l, r) / (r - l + 1) as f64
    })
}

/// Dyadic block `[(j-1)2^N + 1, j 2^N]` containing `m`.
pub fn dyadic_block(m: i64, level: u32) -> (i64, i64) {
    let size = 1i64 << level;
    let j = (m - 1).div_euclid(size) + 1;
    ((j - 1) * size + 1, j * size)
}

/// `M_d` with levels `min_level..=10`.
pub fn dyadic(a: &FiniteSequence, m: i64, min_level: u32) -> f64 {
    dyadic_dense(&Dense::new(a), m, min_level)
}

pub fn dyadic_dense(d: &Dense, m: i64, min_level: u32) -> f64 {
    (min_level..=10)
        .map(|n| {
            let (l, r) = dyadic_block(m, n);
            d.abs_sum(l, r) / (r - l + 1) as f64
        })
        .fold(0.0, f64::max)
}

/// `(1/|I|) Σ_I |a - a_I|` by direct summation.
pub fn oscillation(d: &Dense, l: i64, r: i64) -> f64 {
    let n = (r - l + 1) as f64;
    let mean = d.sum(l, r) / n;
    (l..=r).map(|k| (d.at(k) - mean).abs()).sum::<f64>() / n
}

/// `M♯` on `[-256, 256]`, index `m + 256`; `support` bounds the nonzero
/// entries so the zeros can be counted instead of summed.
pub fn sharp_all(a: &FiniteSequence) -> Vec<f64> {
    let d = Dense::new(a);
    let Some(s) = a.support() else {
        return vec![0.0; (2 * REACH + 1) as usize];
    };
    let (slo, shi) = (s.lo(), s.hi());
    all_intervals(2, |l, r| {
        let n = (r - l + 1) as f64;
        let mean = d.sum(l, r) / n;
        let (cl, cr) = (l.max(slo), r.min(shi));
        let (inner, count) = if cl <= cr {
            ((cl..=cr).map(|k| (d.at(k) - mean).abs()).sum::<f64>(), (cr - cl + 1) as f64)
        } else {
            (0.0, 0.0)
        };
        (inner + (n - count) * mean.abs()) / n
    })
}
