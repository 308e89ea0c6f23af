//! Monte Carlo estimation over Rayleigh block fading.
//!
//! Work is split into fixed-size chunks. Chunk `c` draws from the ChaCha8
//! stream `(seed, c)`, chunk statistics are merged in chunk order, so results
//! are bit-identical for any number of worker threads.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ChannelSample, ChannelStats};
use crate::scalar::Real;
use crate::sinr::{
    baseline_sinrs, exact_sinrs, highsnr_sinrs, instantaneous_secrecy_rate, secrecy_rate,
    SchemeKind, SinrBundle,
};

/// Samples per chunk. Changing it changes every seeded result.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Default number of fading realizations per estimate.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Deterministic random stream identified by `(seed, stream_id)`.
#[derive(Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on `(0, 1]` with 53 bits of resolution.
    pub fn next_unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential draw with the given mean by inversion.
    pub fn next_exponential<T: Real>(&mut self, mean: T) -> T {
        -mean * T::lit(self.next_unit()).ln()
    }
}

impl fmt::Debug for RngStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RngStream")
            .field("seed", &self.seed)
            .field("stream_id", &self.stream_id)
            .finish()
    }
}

/// Draws every link gain independently, exponential with mean `rho * m`.
/// Draw order is `[g, h, f, sr2, sd, dr1]` regardless of scheme, so schemes
/// compared at the same seed see the same fading.
pub fn sample_channels<T: Real>(stats: &ChannelStats<T>, rng: &mut RngStream) -> ChannelSample<T> {
    ChannelSample::from_values(stats.bar_all().map(|m| rng.next_exponential(m)))
}

/// Which SINR expressions the estimator substitutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinrMethod {
    ExactSinr,
    HighSnrSinr,
}

impl SinrMethod {
    pub fn name(self) -> &'static str {
        match self {
            SinrMethod::ExactSinr => "mc-exact",
            SinrMethod::HighSnrSinr => "mc-highsnr",
        }
    }
}

impl fmt::Display for SinrMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SinrMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc-exact" | "exact" => Ok(SinrMethod::ExactSinr),
            "mc-highsnr" | "highsnr" => Ok(SinrMethod::HighSnrSinr),
            other => Err(Error::Config(format!("unknown SINR method '{other}'"))),
        }
    }
}

/// Three-hop SINR bundle for one sample. High-SNR samples with a zero hop
/// gain yield `None`.
pub fn bundle_for<T: Real>(sample: &ChannelSample<T>, method: SinrMethod) -> Option<SinrBundle<T>> {
    match method {
        SinrMethod::ExactSinr => Some(exact_sinrs(sample)),
        SinrMethod::HighSnrSinr => highsnr_sinrs(sample).ok(),
    }
}

/// Draws until the sample is usable for `method`. Zero gains have
/// probability zero in exact arithmetic; they are redrawn.
fn draw_bundle<T: Real>(
    stats: &ChannelStats<T>,
    method: SinrMethod,
    rng: &mut RngStream,
) -> (ChannelSample<T>, SinrBundle<T>) {
    loop {
        let s = sample_channels(stats, rng);
        if let Some(b) = bundle_for(&s, method) {
            return (s, b);
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub n_samples: u64,
}

#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    count: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Moments<T> {
    fn empty() -> Self {
        Self {
            count: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::from_count(self.count);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (
            T::from_count(self.count),
            T::from_count(other.count),
            T::from_count(count),
        );
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    fn estimate(&self) -> MeanEstimate<T> {
        let std_error = if self.count > 1 {
            let n = T::from_count(self.count);
            (self.m2 / (n - T::one())).max(T::zero()).sqrt() / n.sqrt()
        } else {
            T::zero()
        };
        MeanEstimate {
            mean: self.mean,
            std_error,
            n_samples: self.count,
        }
    }
}

/// Mean of `f` over `n` draws, chunked and reproducible for a given seed.
pub fn estimate_mean<T, F>(n: u64, seed: u64, f: F) -> Result<MeanEstimate<T>>
where
    T: Real,
    F: Fn(&mut RngStream) -> T + Sync,
{
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let chunks = n.div_ceil(CHUNK_SIZE);
    let per_chunk: Vec<Moments<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK_SIZE.min(n - c * CHUNK_SIZE);
            let mut rng = RngStream::new(seed, c);
            let mut m = Moments::empty();
            for _ in 0..len {
                m.push(f(&mut rng));
            }
            m
        })
        .collect();
    let total = per_chunk.into_iter().fold(Moments::empty(), Moments::merge);
    Ok(total.estimate())
}

/// Monte Carlo ergodic secrecy rate of one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsrEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub n_samples: u64,
    pub seed: u64,
    pub scheme: SchemeKind,
    pub method: SinrMethod,
}

/// Instantaneous secrecy rate of `scheme` for one fading sample.
pub fn sample_secrecy_rate<T: Real>(
    sample: &ChannelSample<T>,
    scheme: SchemeKind,
    method: SinrMethod,
) -> Result<Option<T>> {
    match (scheme, method) {
        (SchemeKind::ThreeHop, m) => {
            Ok(bundle_for(sample, m).map(|b| instantaneous_secrecy_rate(&b, scheme.prelog())))
        }
        (_, SinrMethod::ExactSinr) => {
            let b = baseline_sinrs(sample, scheme)?;
            Ok(Some(secrecy_rate(
                b.gamma_d,
                b.gamma_leak_max,
                scheme.prelog(),
            )))
        }
        (_, SinrMethod::HighSnrSinr) => Err(Error::Misuse(format!(
            "high-SNR SINRs are only defined for the three-hop scheme, not {scheme}"
        ))),
    }
}

pub fn estimate_esr<T: Real>(
    stats: &ChannelStats<T>,
    scheme: SchemeKind,
    method: SinrMethod,
    n: u64,
    seed: u64,
) -> Result<EsrEstimate<T>> {
    // surface misuse before fanning out
    sample_secrecy_rate(
        &ChannelSample::hops(T::one(), T::one(), T::one()),
        scheme,
        method,
    )?;
    let est = estimate_mean(n, seed, |rng| loop {
        let s = sample_channels(stats, rng);
        if let Ok(Some(r)) = sample_secrecy_rate(&s, scheme, method) {
            return r;
        }
    })?;
    Ok(EsrEstimate {
        mean: est.mean,
        std_error: est.std_error,
        n_samples: est.n_samples,
        seed,
        scheme,
        method,
    })
}

/// Empirical probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimate<T> {
    pub p: T,
    pub std_error: T,
    pub n_samples: u64,
}

/// Frequency of `event` over three-hop SINR bundles.
pub fn estimate_event_probability<T, E>(
    stats: &ChannelStats<T>,
    event: E,
    method: SinrMethod,
    n: u64,
    seed: u64,
) -> Result<ProbabilityEstimate<T>>
where
    T: Real,
    E: Fn(&SinrBundle<T>) -> bool + Sync,
{
    let est = estimate_mean(n, seed, |rng| {
        let (_, b) = draw_bundle(stats, method, rng);
        if event(&b) {
            T::one()
        } else {
            T::zero()
        }
    })?;
    let p = est.mean;
    let nt = T::from_count(est.n_samples);
    Ok(ProbabilityEstimate {
        p,
        std_error: (p * (T::one() - p) / nt).sqrt(),
        n_samples: est.n_samples,
    })
}

/// Kolmogorov-Smirnov distance `sup |F_n(x) - F(x)|`.
pub fn empirical_cdf_ks<T: Real, F: Fn(T) -> T>(samples: &[T], cdf: F) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::Domain(
            "KS statistic needs at least one sample".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = T::from_count(sorted.len() as u64);
    let mut worst = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let below = T::from_count(i as u64) / n;
        let above = T::from_count(i as u64 + 1) / n;
        worst = worst.max((above - f).abs()).max((f - below).abs());
    }
    Ok(worst)
}
