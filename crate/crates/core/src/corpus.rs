//! Seeded generators of test sequences.
//!
//! Randomness comes from xoshiro256** seeded through splitmix64
//! (`Xoshiro256StarStar::seed_from_u64`). Every real value is `k / 2^16`
//! times the amplitude for an integer `k`, so with power-of-two amplitudes
//! all sums over a sequence are exact in binary floating point.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::FiniteSequence;

/// Master seed of the standard corpus.
pub const STANDARD_SEED: u64 = 0x00C0_FFEE_D15C_0001;
/// Number of sequences in the standard corpus.
pub const STANDARD_SIZE: usize = 1000;
/// Widths cycled through by the standard corpus.
pub const STANDARD_WIDTHS: [usize; 6] = [1, 4, 16, 64, 256, 512];
/// Largest accepted width.
pub const MAX_WIDTH: usize = 1 << 20;

const UNIT: f64 = 65536.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Delta,
    MultiDelta,
    Block,
    RandomDense,
    RandomSparse,
    GeometricSpikes,
    AlternatingSign,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Delta,
        Kind::MultiDelta,
        Kind::Block,
        Kind::RandomDense,
        Kind::RandomSparse,
        Kind::GeometricSpikes,
        Kind::AlternatingSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Delta => "delta",
            Kind::MultiDelta => "multi_delta",
            Kind::Block => "block",
            Kind::RandomDense => "random_dense",
            Kind::RandomSparse => "random_sparse",
            Kind::GeometricSpikes => "geometric_spikes",
            Kind::AlternatingSign => "alternating_sign",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown generator kind '{s}'")))
    }
}

fn default_density() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub width: usize,
    pub amplitude: f64,
    /// Probability of a nonzero entry; only used by `random_sparse`.
    #[serde(default = "default_density")]
    pub density: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: Kind, width: usize, amplitude: f64, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            width,
            amplitude,
            density: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.width > MAX_WIDTH {
            return Err(Error::usage(format!(
                "width {} must lie in 1..={MAX_WIDTH}",
                self.width
            )));
        }
        if !(self.amplitude > 0.0) || !self.amplitude.is_finite() {
            return Err(Error::usage(format!(
                "amplitude {} must be a finite positive number",
                self.amplitude
            )));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::usage(format!(
                "density {} must lie in (0, 1]",
                self.density
            )));
        }
        Ok(())
    }
}

/// Uniform integer in `0..n`.
fn below(rng: &mut Xoshiro256StarStar, n: u64) -> u64 {
    rng.next_u64() % n
}

/// Uniform real in `[0, 1)` from the top 53 bits.
fn unit(rng: &mut Xoshiro256StarStar) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Magnitude `k / 2^16` with `k` uniform in `1..=2^16`.
fn magnitude(rng: &mut Xoshiro256StarStar) -> f64 {
    (1 + below(rng, 1 << 16)) as f64 / UNIT
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteSequence> {
    spec.validate()?;
    let w = spec.width;
    let amp = spec.amplitude;
    let mut rng = Xoshiro256StarStar::seed_from_u64(spec.seed);
    let mut values = vec![0.0; w];
    match spec.kind {
        Kind::Delta => values[0] = amp,
        Kind::Block => values.fill(amp),
        Kind::MultiDelta => {
            let spikes = 1 + below(&mut rng, 4);
            for _ in 0..spikes {
                let at = below(&mut rng, w as u64) as usize;
                values[at] = amp * magnitude(&mut rng);
            }
        }
        Kind::RandomDense => {
            for v in values.iter_mut() {
                let k = below(&mut rng, (1 << 17) + 1) as i64 - (1 << 16);
                *v = amp * k as f64 / UNIT;
            }
        }
        Kind::RandomSparse => {
            for v in values.iter_mut() {
                if unit(&mut rng) < spec.density {
                    *v = amp * magnitude(&mut rng);
                }
            }
        }
        Kind::GeometricSpikes => {
            let mut i = 0;
            while i < 63 && (1usize << i) <= w {
                values[(1usize << i) - 1] = amp / (1u64 << i) as f64;
                i += 1;
            }
        }
        Kind::AlternatingSign => {
            for (k, v) in values.iter_mut().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                *v = sign * amp * magnitude(&mut rng);
            }
        }
    }
    FiniteSequence::new(0, values)
}

/// The standard 1000-entry corpus: kinds and widths cycle, amplitudes are
/// powers of two in `[1/4, 4]` and seeds are drawn from [`STANDARD_SEED`].
pub fn standard_corpus() -> Vec<GeneratorSpec> {
    corpus_from_seed(STANDARD_SEED, STANDARD_SIZE)
}

pub fn corpus_from_seed(master: u64, size: usize) -> Vec<GeneratorSpec> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(master);
    (0..size)
        .map(|i| {
            let kind = Kind::ALL[i % Kind::ALL.len()];
            let width = STANDARD_WIDTHS[(i / Kind::ALL.len()) % STANDARD_WIDTHS.len()];
            let amplitude = 2f64.powi(below(&mut rng, 5) as i32 - 2);
            let density = 0.5f64.powi(1 + below(&mut rng, 4) as i32);
            GeneratorSpec {
                kind,
                width,
                amplitude,
                density: if kind == Kind::RandomSparse { density } else { 1.0 },
                seed: rng.next_u64(),
            }
        })
        .collect()
}

pub fn manifest_to_json(specs: &[GeneratorSpec]) -> String {
    serde_json::to_string_pretty(specs).expect("specs serialize")
}

pub fn manifest_from_json(text: &str) -> Result<Vec<GeneratorSpec>> {
    let specs: Vec<GeneratorSpec> = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            Error::usage(format!("invalid corpus manifest: {e}"))
        } else {
            Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })?;
    for (i, s) in specs.iter().enumerate() {
        s.validate()
            .map_err(|e| Error::usage(format!("manifest entry {i}: {e}")))?;
    }
    Ok(specs)
}

/// Generate every sequence of a manifest, in order.
pub fn materialize(specs: &[GeneratorSpec]) -> Result<Vec<FiniteSequence>> {
    specs.iter().map(generate).collect()
}
