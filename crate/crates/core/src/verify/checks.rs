use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::lp::{lp_power_of, LpPower};
use crate::czdecomp::{cz_decompose, CZParams, CZResult};
use crate::error::{Error, Result};
use crate::maxops::{med_bmo_norm, Operator, OperatorConfig, Profile, Side};
use crate::seq::FiniteSequence;

/// Violations kept per sequence and check.
const MAX_VIOLATIONS_PER_SEQUENCE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Sandwich,
    WeakCompare,
    LpDomination,
    BmoEquiv,
    SharpAbs,
    GoodLambda,
    FeffermanStein,
    LayerCake,
    Cz,
}

impl CheckId {
    pub const ALL: [CheckId; 9] = [
        CheckId::Sandwich,
        CheckId::WeakCompare,
        CheckId::LpDomination,
        CheckId::BmoEquiv,
        CheckId::SharpAbs,
        CheckId::GoodLambda,
        CheckId::FeffermanStein,
        CheckId::LayerCake,
        CheckId::Cz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Sandwich => "sandwich",
            CheckId::WeakCompare => "weak_compare",
            CheckId::LpDomination => "lp_domination",
            CheckId::BmoEquiv => "bmo_equiv",
            CheckId::SharpAbs => "sharp_abs",
            CheckId::GoodLambda => "good_lambda",
            CheckId::FeffermanStein => "fefferman_stein",
            CheckId::LayerCake => "layer_cake",
            CheckId::Cz => "cz",
        }
    }

    /// Checks that report a constant rather than assert an inequality.
    pub fn reports_constant(self) -> bool {
        matches!(self, CheckId::GoodLambda | CheckId::FeffermanStein)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
                Error::usage(format!(
                    "unknown check '{s}' (expected one of {})",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub operators: OperatorConfig,
    /// Exponents for the ℓᵖ domination check.
    pub p_grid: Vec<f64>,
    /// Exponents for the Fefferman-Stein ratio.
    pub fs_p_grid: Vec<f64>,
    /// Exponents for the layer-cake identity.
    pub layer_cake_p_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    /// Explicit λ values; when empty the breakpoint grids are used.
    pub lambdas: Vec<f64>,
    /// Extra levels below the window floor, each half the previous one.
    pub tail_levels: u32,
    /// Relative slack for inequalities between real numbers.
    pub tolerance: f64,
    /// Relative accuracy aimed for by ℓᵖ sums.
    pub tail_eps: f64,
    pub cz_alphas: Vec<f64>,
    pub cz_min_levels: Vec<u32>,
    /// Heights `t = 2^k · ‖a‖₁ / width` for `k` in this range.
    pub cz_exponents: (i32, i32),
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            operators: OperatorConfig::default(),
            p_grid: vec![1.5, 2.0, 3.0],
            fs_p_grid: vec![2.0],
            layer_cake_p_grid: vec![1.0, 1.5, 2.0, 3.0],
            gamma_grid: (-6..=3).map(|k| 2f64.powi(k)).collect(),
            lambdas: Vec::new(),
            tail_levels: 4,
            tolerance: 1e-9,
            tail_eps: 1e-6,
            cz_alphas: vec![0.0, 0.5],
            cz_min_levels: vec![0, 1],
            cz_exponents: (-2, 8),
        }
    }
}

/// Sequences under test with a short description of where they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub descriptor: String,
    pub sequences: Vec<FiniteSequence>,
}

impl Corpus {
    pub fn new(descriptor: impl Into<String>, sequences: Vec<FiniteSequence>) -> Self {
        Corpus {
            descriptor: descriptor.into(),
            sequences,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sequence: usize,
    /// Grid point or location, e.g. `m=3`, `lambda=0.25`, `p=2`.
    pub witness: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// Worst case of one check on one sequence at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub sequence: usize,
    pub check: String,
    pub param: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub corpus: String,
    pub sequences: usize,
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub extremal_ratio: f64,
    pub certified_tail_error: f64,
    pub rows: Vec<ReportRow>,
    /// Wall-clock time; left out of serialized reports so they stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "sequence,check,param,lhs,rhs,ratio,pass\n"
    }

    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:?},{:?},{:?},{}",
                r.sequence, r.check, r.param, r.lhs, r.rhs, r.ratio, r.pass
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}{}", Self::csv_header(), self.csv_rows())
    }
}

/// Lazily built fields for one sequence, shared between checks.
pub(crate) struct Analysis<'a> {
    pub a: &'a FiniteSequence,
    cfg: OperatorConfig,
    fields: [OnceLock<Field>; 4],
    abs_sharp: OnceLock<Field>,
}

impl<'a> Analysis<'a> {
    pub fn new(a: &'a FiniteSequence, cfg: &OperatorConfig) -> Self {
        Analysis {
            a,
            cfg: *cfg,
            fields: Default::default(),
            abs_sharp: OnceLock::new(),
        }
    }

    pub fn field(&self, op: Operator) -> &Field {
        let i = Operator::ALL.iter().position(|&o| o == op).expect("known operator");
        self.fields[i].get_or_init(|| Field::new(self.a, op, &self.cfg))
    }

    fn abs_sharp(&self) -> &Field {
        self.abs_sharp.get_or_init(|| {
            let abs = self.a.abs();
            Field::from_profile(self.a, Profile::new(&abs, Operator::Sharp, &self.cfg))
        })
    }

    fn lp(&self, op: Operator, p: f64, eps: f64) -> Result<LpPower> {
        lp_power_of(self.field(op).profile(), p, eps)
    }
}

/// Result of one check on one sequence.
#[derive(Default)]
struct Outcome {
    rows: Vec<ReportRow>,
    violations: Vec<Violation>,
    tail: f64,
}

impl Outcome {
    fn row(&mut self, seq: usize, check: CheckId, param: String, lhs: f64, rhs: f64, ratio: f64, pass: bool) {
        self.rows.push(ReportRow {
            sequence: seq,
            check: check.name().to_string(),
            param,
            lhs,
            rhs,
            ratio,
            pass,
        });
    }

    fn violate(&mut self, seq: usize, witness: String, lhs: f64, rhs: f64) {
        if self.violations.len() < MAX_VIOLATIONS_PER_SEQUENCE {
            self.violations.push(Violation {
                sequence: seq,
                witness,
                lhs,
                rhs,
            });
        }
    }
}

fn window_point(field: &Field, i: usize) -> i64 {
    field.window().expect("nonzero").lo() + i as i64
}

fn sandwich(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) {
    // Off the window both operators come from the same (u_j, k_j) pairs with
    // denominators 2(d+k)+1 and d+k+1, so the window decides the check.
    let fc = an.field(Operator::Centered);
    let fu = an.field(Operator::Uncentered);
    let tol = cfg.tolerance;
    let mut worst = (0.0, 0.0, 0.0);
    let mut pass = true;
    for (i, (&c, &u)) in fc.values().iter().zip(fu.values()).enumerate() {
        if c > u * (1.0 + tol) || u > 3.0 * c * (1.0 + tol) {
            pass = false;
            out.violate(seq, format!("m={}", window_point(fc, i)), u, c);
        }
        if c > 0.0 && u / c > worst.2 {
            worst = (u, c, u / c);
        }
    }
    out.row(seq, CheckId::Sandwich, "pointwise".into(), worst.0, worst.1, worst.2, pass);
}

/// Distinct positive values, scaled, at or above `floor`, plus `extra`
/// halvings below the smallest of them.
fn breakpoints(values: &[f64], scale: f64, floor: f64, out: &mut Vec<f64>) {
    out.extend(
        values
            .iter()
            .filter(|&&v| v > 0.0 && v >= floor)
            .map(|&v| v * scale),
    );
}

fn finish_grid(mut grid: Vec<f64>, low: f64, tail_levels: u32) -> Vec<f64> {
    if low > 0.0 && low.is_finite() {
        let mut l = low;
        for _ in 0..tail_levels {
            l /= 2.0;
            grid.push(l);
        }
    }
    grid.retain(|&l| l > 0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn weak_compare(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    let fc = an.field(Operator::Centered);
    let fd = an.field(Operator::Dyadic);
    let grid = if cfg.lambdas.is_empty() {
        let mut g = Vec::new();
        breakpoints(fc.values(), 0.25, fc.floor(), &mut g);
        breakpoints(fd.values(), 1.0, fd.floor(), &mut g);
        let low = g.iter().copied().fold(f64::INFINITY, f64::min);
        finish_grid(g, low, cfg.tail_levels)
    } else {
        cfg.lambdas.clone()
    };
    let mut worst = (0.0, 0.0, 0.0);
    let mut pass = true;
    for lambda in grid {
        let lhs = fc.count_above(4.0 * lambda)?;
        let rhs = fd.count_above(lambda)?;
        if lhs > 3 * rhs {
            pass = false;
            out.violate(seq, format!("lambda={lambda}"), lhs as f64, 3.0 * rhs as f64);
        }
        let ratio = if rhs > 0 {
            lhs as f64 / (3 * rhs) as f64
        } else if lhs > 0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > worst.2 || (worst == (0.0, 0.0, 0.0) && rhs > 0) {
            worst = (lhs as f64, 3.0 * rhs as f64, ratio);
        }
    }
    out.row(seq, CheckId::WeakCompare, "lambda_grid".into(), worst.0, worst.1, worst.2, pass);
    Ok(())
}

fn lp_domination(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    for &p in &cfg.p_grid {
        let lhs = an.lp(Operator::Centered, p, cfg.tail_eps)?;
        let rhs = an.lp(Operator::Dyadic, p, cfg.tail_eps)?;
        let c = 3.0 * 4f64.powf(p);
        out.tail = out
            .tail
            .max(lhs.tail_bound / lhs.value)
            .max(rhs.tail_bound / rhs.value);
        let pass = lhs.upper() <= c * rhs.lower() * (1.0 + cfg.tolerance);
        if !pass {
            out.violate(seq, format!("p={p}"), lhs.value, c * rhs.value);
        }
        out.row(seq, CheckId::LpDomination, format!("p={p}"), lhs.value, c * rhs.value, lhs.value / rhs.value, pass);
    }
    Ok(())
}

fn bmo_equiv(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) {
    let norm = an.field(Operator::Sharp).profile().sup();
    let med = med_bmo_norm(an.a);
    let tol = cfg.tolerance;
    let pass = med >= 0.5 * norm * (1.0 - tol) && med <= norm * (1.0 + tol);
    if !pass {
        out.violate(seq, "norms".into(), med, norm);
    }
    out.row(seq, CheckId::BmoEquiv, "norms".into(), med, norm, med / norm, pass);
}

fn sharp_abs(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) {
    let fa = an.abs_sharp();
    let fs = an.field(Operator::Sharp);
    let mut worst = (0.0, 0.0, 0.0);
    let mut pass = true;
    for (i, (&x, &y)) in fa.values().iter().zip(fs.values()).enumerate() {
        if x > y * (1.0 + cfg.tolerance) {
            pass = false;
            out.violate(seq, format!("m={}", window_point(fs, i)), x, y);
        }
        if y > 0.0 && x / y > worst.2 {
            worst = (x, y, x / y);
        }
    }
    out.row(seq, CheckId::SharpAbs, "pointwise".into(), worst.0, worst.1, worst.2, pass);
}

/// Sorted copy for `#{v <= t}` queries.
struct Counter(Vec<f64>);

impl Counter {
    fn new(mut v: Vec<f64>) -> Self {
        v.sort_by(f64::total_cmp);
        Counter(v)
    }

    fn at_most(&self, t: f64) -> u64 {
        self.0.partition_point(|&v| v <= t) as u64
    }
}

/// `|{M_d > 2λ, M♯ <= γλ}|` from the window counters and the far fields.
fn good_lambda_numerator(fd: &Field, fs: &Field, ys: &Counter, maxes: &Counter, lambda: f64, gamma: f64) -> Result<u64> {
    let pad = fd.pad();
    let mut num = ys.at_most(lambda) - maxes.at_most(lambda);
    for side in [Side::Left, Side::Right] {
        let dx = fd.extent(side, 2.0 * lambda)?;
        if dx > pad {
            let dy = fs.extent(side, gamma * lambda)?;
            num += dx.saturating_sub(dy.max(pad));
        }
    }
    Ok(num)
}

/// Exact `(|{M_d a > 2λ, M♯a <= γλ}|, |{M_d a > λ}|)`.
pub fn good_lambda_counts(a: &FiniteSequence, lambda: f64, gamma: f64, cfg: &OperatorConfig) -> Result<(u64, u64)> {
    if !(lambda > 0.0 && gamma > 0.0) {
        return Err(Error::domain(format!("λ = {lambda} and γ = {gamma} must be > 0")));
    }
    if a.is_zero() {
        return Ok((0, 0));
    }
    let fd = Field::new(a, Operator::Dyadic, cfg);
    let fs = Field::new(a, Operator::Sharp, cfg);
    let ys: Vec<f64> = fs.values().iter().map(|v| v / gamma).collect();
    let maxes = Counter::new(fd.values().iter().zip(&ys).map(|(x, y)| (x / 2.0).max(*y)).collect());
    let num = good_lambda_numerator(&fd, &fs, &Counter::new(ys), &maxes, lambda, gamma)?;
    Ok((num, fd.count_above(lambda)?))
}

/// `R(λ, γ) = |{M_d > 2λ, M♯ <= γλ}| / (γ |{M_d > λ}|)`.
fn good_lambda(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    let fd = an.field(Operator::Dyadic);
    let fs = an.field(Operator::Sharp);
    for &gamma in &cfg.gamma_grid {
        // x = M_d / 2, y = M♯ / γ: the numerator on the window is
        // #{y <= λ} - #{max(x, y) <= λ}.
        let xs: Vec<f64> = fd.values().iter().map(|v| v / 2.0).collect();
        let ys: Vec<f64> = fs.values().iter().map(|v| v / gamma).collect();
        let maxes = Counter::new(xs.iter().zip(&ys).map(|(x, y)| x.max(*y)).collect());
        let ys_sorted = Counter::new(ys.clone());
        let grid = if cfg.lambdas.is_empty() {
            let floor = fd.floor();
            let mut g = Vec::new();
            breakpoints(fd.values(), 1.0, floor, &mut g);
            breakpoints(fd.values(), 0.5, 2.0 * floor, &mut g);
            g.extend(ys.iter().copied().filter(|&y| y >= floor && y > 0.0));
            let low = g.iter().copied().fold(f64::INFINITY, f64::min);
            finish_grid(g, low, cfg.tail_levels)
        } else {
            cfg.lambdas.clone()
        };
        let mut worst = (0.0, 0.0, 0.0);
        for lambda in grid {
            let den = fd.count_above(lambda)?;
            if den == 0 {
                continue;
            }
            let num = good_lambda_numerator(fd, fs, &ys_sorted, &maxes, lambda, gamma)?;
            let r = num as f64 / (gamma * den as f64);
            if r > worst.2 || worst.1 == 0.0 {
                worst = (num as f64, gamma * den as f64, r);
            }
        }
        out.row(seq, CheckId::GoodLambda, format!("gamma={gamma}"), worst.0, worst.1, worst.2, worst.2.is_finite());
    }
    Ok(())
}

fn fefferman_stein(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    for &p in &cfg.fs_p_grid {
        let lhs = an.lp(Operator::Dyadic, p, cfg.tail_eps)?;
        let rhs = an.lp(Operator::Sharp, p, cfg.tail_eps)?;
        out.tail = out
            .tail
            .max(lhs.tail_bound / lhs.value)
            .max(rhs.tail_bound / rhs.value);
        let ratio = lhs.value / rhs.value;
        let pass = lhs.upper().is_finite() && ratio.is_finite();
        if !pass {
            out.violate(seq, format!("p={p}"), lhs.value, rhs.value);
        }
        out.row(seq, CheckId::FeffermanStein, format!("p={p}"), lhs.value, rhs.value, ratio, pass);
    }
    Ok(())
}

fn layer_cake(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    for &p in &cfg.layer_cake_p_grid {
        let lc = an.a.layer_cake_power(p)?;
        let direct = an.a.lp_power(p)?;
        let err = (lc - direct).abs() / direct;
        let pass = err <= cfg.tolerance;
        if !pass {
            out.violate(seq, format!("p={p}"), lc, direct);
        }
        out.row(seq, CheckId::LayerCake, format!("p={p}"), lc, direct, err, pass);
    }
    Ok(())
}

fn cz_check(an: &Analysis, seq: usize, cfg: &VerifyConfig, out: &mut Outcome) -> Result<()> {
    let a = an.a;
    let l1 = a.l1_norm();
    let base = l1 / a.len() as f64;
    let heights: Vec<f64> = (cfg.cz_exponents.0..=cfg.cz_exponents.1)
        .map(|k| base * 2f64.powi(k))
        .collect();
    let tol = cfg.tolerance;
    for &alpha in &cfg.cz_alphas {
        for &min_level in &cfg.cz_min_levels {
            let mut pass = true;
            let mut worst = (0.0, 0.0, 0.0);
            let mut results: Vec<CZResult> = Vec::with_capacity(heights.len());
            for &t in &heights {
                let params = CZParams { t, alpha, min_level };
                let r = cz_decompose(a, &params)?;
                let mut fail = |what: &str, lhs: f64, rhs: f64, out: &mut Outcome| {
                    pass = false;
                    out.violate(seq, format!("alpha={alpha};min_level={min_level};t={t};{what}"), lhs, rhs);
                };
                let sharp = 2f64.powf(1.0 - alpha) * t;
                for (k, e) in r.selected.iter().enumerate() {
                    if !(e.average > t) {
                        fail("average>t", e.average, t, out);
                    }
                    if e.average > sharp * (1.0 + tol) || e.average > 2.0 * t * (1.0 + tol) {
                        fail("average<=2^(1-alpha)t", e.average, sharp, out);
                    }
                    if e.parent_average > t * (1.0 + tol) {
                        fail("parent_average<=t", e.parent_average, t, out);
                    }
                    let ex = e.interval.expand();
                    let ps = e.parent.span();
                    if ps != ex.two_left && ps != ex.two_right {
                        fail("parent_is_double", ps.lo() as f64, ps.hi() as f64, out);
                    }
                    if let Some(next) = r.selected.get(k + 1) {
                        if e.interval.hi() >= next.interval.lo() {
                            fail("disjoint", e.interval.hi() as f64, next.interval.lo() as f64, out);
                        }
                    }
                    if e.average / t > worst.2 {
                        worst = (e.average, t, e.average / t);
                    }
                }
                // Values off the union.
                let cap = if min_level == 0 { t } else { 2.0 * t };
                for (m, v) in a.iter() {
                    if v.abs() > cap * (1.0 + tol) && !r.covers(m) {
                        fail("off_union", v.abs(), cap, out);
                    }
                }
                // Selected intervals sit inside {M_d > t} when the grids agree.
                if alpha == 0.0 && min_level == an.cfg.dyadic_min_level {
                    let profile = an.field(Operator::Dyadic).profile();
                    for e in &r.selected {
                        if let Some(m) = e.interval.span().iter().find(|&m| !(profile.at(m) > t)) {
                            fail("inside_dyadic_superlevel", profile.at(m), t, out);
                        }
                    }
                }
                results.push(r);
            }
            for i in 0..heights.len() {
                for j in 0..i {
                    // heights increase with the index, so results[i] is the higher one
                    let (high, low) = (&results[i], &results[j]);
                    let nested = high.selected.iter().all(|e| {
                        let k = low
                            .selected
                            .partition_point(|f| f.interval.hi() < e.interval.lo());
                        k < low.selected.len() && low.selected[k].interval.contains_interval(&e.interval)
                    });
                    if !nested {
                        pass = false;
                        out.violate(
                            seq,
                            format!("alpha={alpha};min_level={min_level};nesting"),
                            heights[i],
                            heights[j],
                        );
                    }
                }
            }
            out.row(
                seq,
                CheckId::Cz,
                format!("alpha={alpha};min_level={min_level}"),
                worst.0,
                worst.1,
                worst.2,
                pass,
            );
        }
    }
    Ok(())
}

/// Whether `check` applies to `a` at all.
fn applies(check: CheckId, a: &FiniteSequence) -> bool {
    if a.is_zero() {
        return false;
    }
    match check {
        // Stated for nonnegative sequences.
        CheckId::SharpAbs | CheckId::FeffermanStein => a.is_nonnegative(),
        _ => true,
    }
}

fn check_one(check: CheckId, an: &Analysis, seq: usize, cfg: &VerifyConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    if !applies(check, an.a) {
        return Ok(out);
    }
    match check {
        CheckId::Sandwich => sandwich(an, seq, cfg, &mut out),
        CheckId::WeakCompare => weak_compare(an, seq, cfg, &mut out)?,
        CheckId::LpDomination => lp_domination(an, seq, cfg, &mut out)?,
        CheckId::BmoEquiv => bmo_equiv(an, seq, cfg, &mut out),
        CheckId::SharpAbs => sharp_abs(an, seq, cfg, &mut out),
        CheckId::GoodLambda => good_lambda(an, seq, cfg, &mut out)?,
        CheckId::FeffermanStein => fefferman_stein(an, seq, cfg, &mut out)?,
        CheckId::LayerCake => layer_cake(an, seq, cfg, &mut out)?,
        CheckId::Cz => cz_check(an, seq, cfg, &mut out)?,
    }
    Ok(out)
}

fn assemble(check: CheckId, corpus: &Corpus, outcomes: Vec<Outcome>, runtime: Duration) -> VerificationReport {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut tail = 0.0f64;
    for o in outcomes {
        rows.extend(o.rows);
        violations.extend(o.violations);
        tail = tail.max(o.tail);
    }
    let extremal_ratio = rows
        .iter()
        .map(|r| r.ratio)
        .filter(|r| !r.is_nan())
        .fold(0.0, f64::max);
    let pass = violations.is_empty();
    VerificationReport {
        check_id: check.name().to_string(),
        corpus: corpus.descriptor.clone(),
        sequences: corpus.sequences.len(),
        pass,
        violations,
        extremal_ratio,
        certified_tail_error: tail,
        rows,
        runtime,
    }
}

/// Run several checks, sharing per-sequence work between them. Reports come
/// back in the order of `checks`; rows follow corpus order.
pub fn run_checks(checks: &[CheckId], corpus: &Corpus, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let per_seq: Vec<Vec<(Outcome, Duration)>> = corpus
        .sequences
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let an = Analysis::new(a, &cfg.operators);
            checks
                .iter()
                .map(|&c| {
                    let t = Instant::now();
                    check_one(c, &an, i, cfg).map(|o| (o, t.elapsed()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut by_check: Vec<(Vec<Outcome>, Duration)> =
        checks.iter().map(|_| (Vec::new(), Duration::ZERO)).collect();
    for seq in per_seq {
        for (k, (o, t)) in seq.into_iter().enumerate() {
            by_check[k].0.push(o);
            by_check[k].1 += t;
        }
    }
    Ok(checks
        .iter()
        .zip(by_check)
        .map(|(&c, (outs, t))| assemble(c, corpus, outs, t))
        .collect())
}

/// Run one check over a corpus.
pub fn run_check(check_id: &str, corpus: &Corpus, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let check: CheckId = check_id.parse()?;
    Ok(run_checks(&[check], corpus, cfg)?.remove(0))
}
