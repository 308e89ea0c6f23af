//! Per-realization SINRs and instantaneous secrecy rates.
//!
//! Three-hop protocol: in phase 1 S sends to R1 while R2 jams; in phase 2
//! R1 forwards to R2 while D jams; in phase 3 R2 broadcasts to D while S jams
//! R1. Every receiver cancels its own jamming. R1 overhears in phases 1 and
//! 3, R2 in phase 2.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ChannelSample;
use crate::scalar::Real;

/// SINRs at R1 (phase 1), R2, R1 (phase 3) and D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrBundle<T> {
    pub gamma_r1_p1: T,
    pub gamma_r2: T,
    pub gamma_r1_p3: T,
    pub gamma_d: T,
}

impl<T: Real> SinrBundle<T> {
    /// Strongest eavesdropper SINR over all three relay observations.
    pub fn max_leakage(&self) -> T {
        self.gamma_r1_p1.max(self.gamma_r2).max(self.gamma_r1_p3)
    }

    /// Leakage with the phase-3 observation dropped, as in the closed-form
    /// analysis.
    pub fn dominant_leakage(&self) -> T {
        self.gamma_r1_p1.max(self.gamma_r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    ThreeHop,
    /// R1 relays, R2 is an idle eavesdropper.
    TwoHopCaseI,
    /// R2 relays, R1 is an idle eavesdropper.
    TwoHopCaseII,
    /// S to D with both relays eavesdropping.
    Direct,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::ThreeHop,
        SchemeKind::TwoHopCaseI,
        SchemeKind::TwoHopCaseII,
        SchemeKind::Direct,
    ];

    /// Number of transmission phases per message.
    pub fn phases(self) -> u32 {
        match self {
            SchemeKind::ThreeHop => 3,
            SchemeKind::TwoHopCaseI | SchemeKind::TwoHopCaseII => 2,
            SchemeKind::Direct => 1,
        }
    }

    pub fn prelog<T: Real>(self) -> T {
        T::one() / T::from_count(u64::from(self.phases()))
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::ThreeHop => "three-hop",
            SchemeKind::TwoHopCaseI => "two-hop-1",
            SchemeKind::TwoHopCaseII => "two-hop-2",
            SchemeKind::Direct => "direct",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "three-hop" | "threehop" | "3hop" => Ok(SchemeKind::ThreeHop),
            "two-hop-1" | "two-hop-i" | "twohopcasei" => Ok(SchemeKind::TwoHopCaseI),
            "two-hop-2" | "two-hop-ii" | "twohopcaseii" => Ok(SchemeKind::TwoHopCaseII),
            "direct" => Ok(SchemeKind::Direct),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected three-hop, two-hop-1, two-hop-2, direct)"
            ))),
        }
    }
}

pub fn exact_sinrs<T: Real>(s: &ChannelSample<T>) -> SinrBundle<T> {
    let (g, h, f) = (s.gamma_g, s.gamma_h, s.gamma_f);
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let gp1 = g + one;
    let ghp1 = g + h + one;
    SinrBundle {
        gamma_r1_p1: g / (h + one),
        gamma_r2: g * h / (g * f + h * f + two * h + g + f + one),
        gamma_r1_p3: g * h * h / (h * h + h * gp1 * gp1 + ghp1 * ghp1 * (f + one)),
        gamma_d: g * h * f / (three * h * f + two * f * g + g * h + two * f + two * h + g + one),
    }
}

/// High-SNR forms of the SINRs. All three hop gains must be positive.
pub fn highsnr_sinrs<T: Real>(s: &ChannelSample<T>) -> Result<SinrBundle<T>> {
    let (g, h, f) = (s.gamma_g, s.gamma_h, s.gamma_f);
    if !(g > T::zero() && h > T::zero() && f > T::zero()) {
        return Err(Error::DegenerateSample(format!(
            "high-SNR SINRs need positive gains, got ({g}, {h}, {f})"
        )));
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let gh = g + h;
    Ok(SinrBundle {
        gamma_r1_p1: g / h,
        gamma_r2: g * h / (f * gh),
        gamma_r1_p3: g * h * h / (gh * gh * f + two * h * g * g),
        gamma_d: g * h * f / (three * h * f + two * f * g + g * h),
    })
}

/// `[prelog * (log2(1 + gamma_d) - log2(1 + gamma_leak))]^+`.
pub fn secrecy_rate<T: Real>(gamma_d: T, gamma_leak: T, prelog: T) -> T {
    let diff = prelog * (gamma_d.ln_1p() - gamma_leak.ln_1p()) / T::LN_2();
    diff.max(T::zero())
}

pub fn instantaneous_secrecy_rate<T: Real>(b: &SinrBundle<T>, prelog: T) -> T {
    secrecy_rate(b.gamma_d, b.max_leakage(), prelog)
}

/// How an idle eavesdropper uses its two overheard two-hop phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combining {
    /// Best single observation.
    #[default]
    Selection,
    /// Sum of the per-phase SINRs.
    Sum,
}

/// Destination SINR and strongest eavesdropper SINR of a baseline scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSinrs<T> {
    pub gamma_d: T,
    pub gamma_leak_max: T,
}

/// Two-hop destination-jamming SINRs. `a`: source to helper, `b`: helper to
/// destination, `u`: source to idle eavesdropper, `v`: destination to idle
/// eavesdropper, `w`: helper to idle eavesdropper.
fn two_hop<T: Real>(a: T, b: T, u: T, v: T, w: T, combining: Combining) -> BaselineSinrs<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let gamma_d = a * b / (a + two * b + one);
    let gamma_helper = a / (b + one);
    let gamma_e1 = u / (v + one);
    let gamma_e2 = a * w / (b * w + w + a + b + one);
    let idle = match combining {
        Combining::Selection => gamma_e1.max(gamma_e2),
        Combining::Sum => gamma_e1 + gamma_e2,
    };
    BaselineSinrs {
        gamma_d,
        gamma_leak_max: gamma_helper.max(idle),
    }
}

pub fn baseline_sinrs<T: Real>(s: &ChannelSample<T>, kind: SchemeKind) -> Result<BaselineSinrs<T>> {
    baseline_sinrs_with(s, kind, Combining::Selection)
}

pub fn baseline_sinrs_with<T: Real>(
    s: &ChannelSample<T>,
    kind: SchemeKind,
    combining: Combining,
) -> Result<BaselineSinrs<T>> {
    match kind {
        SchemeKind::ThreeHop => Err(Error::Misuse(
            "baseline_sinrs called with the three-hop scheme".into(),
        )),
        SchemeKind::TwoHopCaseI => Ok(two_hop(
            s.gamma_sr1(),
            s.gamma_dr1,
            s.gamma_sr2,
            s.gamma_dr2(),
            s.gamma_r1r2(),
            combining,
        )),
        SchemeKind::TwoHopCaseII => Ok(two_hop(
            s.gamma_sr2,
            s.gamma_dr2(),
            s.gamma_sr1(),
            s.gamma_dr1,
            s.gamma_r1r2(),
            combining,
        )),
        SchemeKind::Direct => Ok(BaselineSinrs {
            gamma_d: s.gamma_sd,
            gamma_leak_max: s.gamma_sr1().max(s.gamma_sr2),
        }),
    }
}
