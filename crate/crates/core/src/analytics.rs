//! Closed-form expressions for the three-hop ergodic secrecy rate.
//!
//! All rate functions return bits/s/Hz unless noted; `t1`, `t2` and the
//! offset terms are in nats. Functions taking [`ChannelStats`] work with
//! the mean received SNRs `bar_k = rho * m_k`.
//!
//! The eavesdropping rate splits on which relay observation dominates at
//! high SNR: `R_E = (P T1 + (1 - P) T2) / (3 ln 2)` with
//! `P = Pr{gamma_f > gamma_h^2 / (gamma_g + gamma_h)}`. `P` is evaluated by
//! two-dimensional quadrature; the truncated Bessel-series expression for it
//! is kept as [`prob_r1_dominates_series`] for comparison only.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::model::ChannelStats;
use crate::quadrature::{integrate_to_infinity, QuadratureOptions};
use crate::scalar::Real;
use crate::specfun::{lambda_times_factorial, x_bessel_k1, SeriesOrder};

/// Relative distance below which `a ln(a/b) / (a - b)` switches to its
/// first-order expansion around `a = b`.
const SINGULAR_REL_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EavesdropDecomposition<T> {
    /// Probability that the phase-1 observation at R1 beats R2.
    pub p_dominates: T,
    /// `E{ln(1 + gamma_g / gamma_h)}`, nats.
    pub t1: T,
    /// `E{ln(1 + gamma_R2)}` under the mean-ratio approximation, nats.
    pub t2: T,
    /// Ergodic eavesdropping rate, bits/s/Hz.
    pub r_e: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteParams<T> {
    /// High-SNR slope, bits/s/Hz per unit of `log2(rho)`.
    pub s_infinity: T,
    /// High-SNR power offset in units of `log2(rho)`.
    pub l_infinity: T,
    pub a_term: T,
    pub b_term: T,
    pub c_term: T,
}

/// Result of the truncated-series evaluation of `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesProbability<T> {
    /// Value clamped into `[0, 1]` (NaN maps to 0).
    pub value: T,
    /// Value before clamping.
    pub raw: T,
    pub clamped: bool,
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus<T: Real>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `a ln(a / b) / (a - b)`, continuous across `a = b` where it equals 1.
pub fn log_ratio_mean<T: Real>(a: T, b: T) -> T {
    let diff = a - b;
    if diff.abs() < T::lit(SINGULAR_REL_DISTANCE) * a {
        T::one() + diff / (T::lit(2.0) * b)
    } else {
        a * (a / b).ln() / diff
    }
}

/// Jensen lower bound on the legitimate rate `E{(1/3) log2(1 + gamma_D)}`.
pub fn legit_rate_lower_bound<T: Real>(stats: &ChannelStats<T>) -> Result<T> {
    let (g, h, f) = (stats.bar_g(), stats.bar_h(), stats.bar_f());
    for (n, v) in [("bar_g", g), ("bar_h", h), ("bar_f", f)] {
        check_positive(n, v)?;
    }
    let three = T::lit(3.0);
    let exponent = -three * T::euler_gamma() + g.ln() + h.ln() + f.ln()
        - (three * h * f + T::lit(2.0) * f * g + g * h).ln();
    Ok(softplus(exponent) / (three * T::LN_2()))
}

/// `P = Pr{gamma_f > gamma_h^2 / (gamma_g + gamma_h)}` by nested adaptive
/// quadrature of its double-integral form, absolute error well below 1e-6.
pub fn prob_r1_dominates_oracle<T: Real>(stats: &ChannelStats<T>) -> Result<T> {
    let (m_x, m_y, m_z) = (stats.bar_f(), stats.bar_h(), stats.bar_g());
    for (n, v) in [("bar_f", m_x), ("bar_h", m_y), ("bar_g", m_z)] {
        check_positive(n, v)?;
    }
    // Y = m_y a, Z = m_z b with a, b ~ Exp(1):
    // P = E_a E_b exp(-(m_y a)^2 / ((m_y a + m_z b) m_x))
    let inner_opts = QuadratureOptions {
        abs_tol: T::lit(1e-12),
        rel_tol: T::lit(1e-11),
        max_intervals: 4000,
    };
    let outer_opts = QuadratureOptions {
        abs_tol: T::lit(1e-10),
        rel_tol: T::lit(1e-10),
        max_intervals: 4000,
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = integrate_to_infinity(
        |a: T| {
            let ya = m_y * a;
            let inner = integrate_to_infinity(
                |b: T| (-b - ya * ya / ((ya + m_z * b) * m_x)).exp(),
                T::zero(),
                T::one(),
                inner_opts,
            );
            match inner {
                Ok(r) => (-a).exp() * r.value,
                Err(e) => {
                    failure.set(Some(e));
                    T::zero()
                }
            }
        },
        T::zero(),
        T::one(),
        outer_opts,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(outer.value.max(T::zero()).min(T::one()))
}

/// Truncated Bessel-series expression for `P` with `m_x = bar_f`,
/// `m_y = bar_h`, `m_z = bar_g`. Order 1 gives the single-term closed form.
pub fn prob_r1_dominates_series<T: Real>(
    stats: &ChannelStats<T>,
    order: SeriesOrder,
) -> SeriesProbability<T> {
    let (m_x, m_y, m_z) = (stats.bar_f(), stats.bar_h(), stats.bar_g());
    let two = T::lit(2.0);
    let denom = m_z - m_y * m_x.sqrt() * m_z.sqrt() + two * m_z * m_y;
    let raw = if order.get() == 1 {
        T::lit(8.0) * m_x.sqrt() * m_z.powf(T::lit(2.5)) * m_y / (T::lit(3.0) * denom * denom)
    } else {
        let q = two * m_z * m_y / denom;
        let prefactor = m_x.sqrt() * m_z.powf(T::lit(1.5)) / denom;
        let mut sum = T::zero();
        for n in 1..=u64::from(order.get()) {
            let mut q_pow = T::one();
            for i in 1..=n {
                q_pow = q_pow * q;
                let c = lambda_times_factorial(T::one(), n, i).expect("indices in range");
                sum = sum + c * q_pow;
            }
        }
        prefactor * sum
    };
    let value = if raw.is_nan() {
        T::zero()
    } else {
        raw.max(T::zero()).min(T::one())
    };
    SeriesProbability {
        value,
        raw,
        clamped: raw.is_nan() || value != raw,
    }
}

/// `T1 = E{ln(1 + gamma_g / gamma_h)} = bar_g ln(bar_g / bar_h) / (bar_g - bar_h)`, nats.
pub fn t1_closed<T: Real>(stats: &ChannelStats<T>) -> T {
    log_ratio_mean(stats.bar_g(), stats.bar_h())
}

/// `E{XY / (X + Y)}` for independent exponentials with means `m_a`, `m_b`,
/// integrating the survival function of the harmonic-type variable.
pub fn expected_harmonic_mean<T: Real>(m_a: T, m_b: T) -> Result<T> {
    check_positive("m_a", m_a)?;
    check_positive("m_b", m_b)?;
    let root = (m_a * m_b).sqrt();
    let rate = T::one() / m_a + T::one() / m_b;
    let failure: Cell<Option<Error>> = Cell::new(None);
    let opts = QuadratureOptions {
        abs_tol: T::lit(1e-10) * (m_a + m_b),
        rel_tol: T::lit(1e-12),
        max_intervals: 4000,
    };
    let r = integrate_to_infinity(
        |w: T| {
            let survival = x_bessel_k1(T::lit(2.0) * w / root).map(|xk| xk * (-w * rate).exp());
            match survival {
                Ok(v) => v,
                Err(e) => {
                    failure.set(Some(e));
                    T::zero()
                }
            }
        },
        T::zero(),
        m_a * m_b / (m_a + m_b),
        opts,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r.value)
}

/// `T2 ~ ln(1 + E{gamma_g gamma_h / (gamma_g + gamma_h)} / bar_f)`, nats.
pub fn t2<T: Real>(stats: &ChannelStats<T>) -> Result<T> {
    let ew = expected_harmonic_mean(stats.bar_g(), stats.bar_h())?;
    Ok((ew / stats.bar_f()).ln_1p())
}

/// Alternative closed form
/// `ln(1 + m_g m_h (m_g^2 - m_h^2 - 2 ln(m_g/m_h)) / (3 m_f (m_g - m_h)))`
/// on the mean SNRs, kept for comparison with [`t2`]. Not invariant under a
/// common scaling of the means. `None` when the logarithm's argument is not
/// positive.
pub fn t2_alt_form<T: Real>(stats: &ChannelStats<T>) -> Option<T> {
    let (g, h, f) = (stats.bar_g(), stats.bar_h(), stats.bar_f());
    let two = T::lit(2.0);
    let diff = g - h;
    let ratio = if diff.abs() < T::lit(SINGULAR_REL_DISTANCE) * g {
        let m = (g + h) / two;
        two * m - two / m
    } else {
        (g * g - h * h - two * (g / h).ln()) / diff
    };
    let arg = T::one() + g * h * ratio / (T::lit(3.0) * f);
    (arg > T::zero() && arg.is_finite()).then(|| arg.ln())
}

pub fn eavesdrop_rate<T: Real>(stats: &ChannelStats<T>) -> Result<EavesdropDecomposition<T>> {
    let p = prob_r1_dominates_oracle(stats)?;
    let t1 = t1_closed(stats);
    let t2 = t2(stats)?;
    let r_e = (p * t1 + (T::one() - p) * t2) / (T::lit(3.0) * T::LN_2());
    Ok(EavesdropDecomposition {
        p_dominates: p,
        t1,
        t2,
        r_e,
    })
}

/// `[R_L^LB - R_E]^+` in bits/s/Hz.
pub fn esr_lower_bound<T: Real>(stats: &ChannelStats<T>) -> Result<T> {
    let legit = legit_rate_lower_bound(stats)?;
    let eve = eavesdrop_rate(stats)?;
    Ok((legit - eve.r_e).max(T::zero()))
}

/// The lower bound with an additional `1 / (3 ln 2)` applied to the
/// difference, for comparison against [`esr_lower_bound`].
pub fn esr_lower_bound_literal<T: Real>(stats: &ChannelStats<T>) -> Result<T> {
    Ok(esr_lower_bound(stats)? / (T::lit(3.0) * T::LN_2()))
}

pub fn high_snr_slope<T: Real>() -> T {
    T::one() / T::lit(3.0)
}

/// High-SNR slope of two-hop relaying.
pub fn two_hop_slope<T: Real>() -> T {
    T::lit(0.5)
}

/// Slope, power offset and its three terms from the physical mean powers.
pub fn high_snr_offset<T: Real>(m_g: T, m_h: T, m_f: T) -> Result<AsymptoteParams<T>> {
    for (n, v) in [("m_g", m_g), ("m_h", m_h), ("m_f", m_f)] {
        check_positive(n, v)?;
    }
    let a_term = T::lit(3.0) * T::euler_gamma()
        - (m_g * m_h * m_f / (T::lit(3.0) * m_f * m_h + T::lit(2.0) * m_f * m_g + m_g * m_h)).ln();
    let b_term = log_ratio_mean(m_g, m_h);
    let c_term = ((m_g * m_h + m_f * m_h + m_g * m_f) / (m_f * (m_g + m_h))).ln();
    let sum = m_f + m_h;
    let l_infinity = ((m_h / sum) * b_term + (m_f / sum) * c_term + a_term) / T::LN_2();
    Ok(AsymptoteParams {
        s_infinity: high_snr_slope(),
        l_infinity,
        a_term,
        b_term,
        c_term,
    })
}

pub fn high_snr_offset_for<T: Real>(stats: &ChannelStats<T>) -> Result<AsymptoteParams<T>> {
    high_snr_offset(stats.m_g(), stats.m_h(), stats.m_f())
}

/// `[S_inf (log2 rho - L_inf)]^+`.
pub fn esr_asymptote<T: Real>(rho: T, params: &AsymptoteParams<T>) -> T {
    (params.s_infinity * (rho.log2() - params.l_infinity)).max(T::zero())
}

/// CDF of `X / Y` for exponentials with means `m_x`, `m_y`.
pub fn cdf_ratio<T: Real>(z: T, m_x: T, m_y: T) -> T {
    if z <= T::zero() {
        return T::zero();
    }
    if z.is_infinite() {
        return T::one();
    }
    m_y * z / (m_y * z + m_x)
}

/// CDF of `XY / (X + Y)` for exponentials with means `m_x`, `m_y`.
pub fn cdf_harmonic<T: Real>(w: T, m_x: T, m_y: T) -> Result<T> {
    if w <= T::zero() {
        return Ok(T::zero());
    }
    if w.is_infinite() {
        return Ok(T::one());
    }
    let root = (m_x * m_y).sqrt();
    let survival = x_bessel_k1(T::lit(2.0) * w / root)? * (-w / m_x - w / m_y).exp();
    Ok((T::one() - survival).max(T::zero()).min(T::one()))
}
