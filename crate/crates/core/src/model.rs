//! Node geometry, link mean powers and fading realizations.
//!
//! Nodes sit on a line. Every link's mean channel power follows the
//! distance-power law `m = d^(-n)`, and the transmit SNR `rho` is shared by
//! all nodes, so the mean received SNR of a link is `rho * m`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Positions of source, first relay, second relay and destination on a
/// line, plus the path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology<T> {
    x_s: T,
    x_r1: T,
    x_r2: T,
    x_d: T,
    pathloss: T,
}

impl<T: Real> Topology<T> {
    pub fn new(x_s: T, x_r1: T, x_r2: T, x_d: T, pathloss: T) -> Result<Self> {
        if !(pathloss > T::zero()) || !pathloss.is_finite() {
            return Err(Error::InvalidTopology(format!(
                "path-loss exponent must be positive, got {pathloss}"
            )));
        }
        let pos = [x_s, x_r1, x_r2, x_d];
        if pos.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidTopology("positions must be finite".into()));
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if pos[i] == pos[j] {
                    return Err(Error::InvalidTopology(format!(
                        "nodes {} and {} coincide at {}",
                        NODE_NAMES[i], NODE_NAMES[j], pos[i]
                    )));
                }
            }
        }
        Ok(Self {
            x_s,
            x_r1,
            x_r2,
            x_d,
            pathloss,
        })
    }

    /// S, R1, R2, D at -3, -1, +1, +3 with exponent 2.7.
    pub fn topology_1() -> Self {
        Self::new(
            T::lit(-3.0),
            T::lit(-1.0),
            T::lit(1.0),
            T::lit(3.0),
            T::lit(2.7),
        )
        .expect("valid preset")
    }

    /// Topology 1 scaled by 1/3.
    pub fn topology_2() -> Self {
        Self::topology_1()
            .scaled(T::one() / T::lit(3.0))
            .expect("valid preset")
    }

    /// Multiplies every position by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.x_s * factor,
            self.x_r1 * factor,
            self.x_r2 * factor,
            self.x_d * factor,
            self.pathloss,
        )
    }

    pub fn positions(&self) -> [T; 4] {
        [self.x_s, self.x_r1, self.x_r2, self.x_d]
    }

    pub fn pathloss(&self) -> T {
        self.pathloss
    }
}

const NODE_NAMES: [&str; 4] = ["S", "R1", "R2", "D"];

/// Mean channel power `|a - b|^(-n)` of the link between two positions.
pub fn mean_power<T: Real>(pos_a: T, pos_b: T, n: T) -> Result<T> {
    if !(n > T::zero()) {
        return Err(Error::InvalidTopology(format!(
            "path-loss exponent must be positive, got {n}"
        )));
    }
    let d = (pos_a - pos_b).abs();
    if d == T::zero() {
        return Err(Error::InvalidTopology(format!(
            "coincident positions at {pos_a}"
        )));
    }
    let m = d.powf(-n);
    if !(m.is_finite() && m > T::zero()) {
        return Err(Error::InvalidTopology(format!(
            "mean power {m} for distance {d} is not representable"
        )));
    }
    Ok(m)
}

/// Mean powers of every link plus the per-node transmit SNR.
///
/// Reciprocal links share one mean: S-R1 is `m_g`, R1-R2 is `m_h`, R2-D is
/// `m_f`. The remaining links (S-R2, S-D, D-R1) are only used by the
/// baseline schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats<T> {
    m_g: T,
    m_h: T,
    m_f: T,
    m_sr2: T,
    m_sd: T,
    m_dr1: T,
    rho: T,
}

impl<T: Real> ChannelStats<T> {
    pub fn new(m_g: T, m_h: T, m_f: T, m_sr2: T, m_sd: T, m_dr1: T, rho: T) -> Result<Self> {
        let named = [
            ("m_g", m_g),
            ("m_h", m_h),
            ("m_f", m_f),
            ("m_sr2", m_sr2),
            ("m_sd", m_sd),
            ("m_dr1", m_dr1),
            ("rho", rho),
        ];
        for (name, v) in named {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            m_g,
            m_h,
            m_f,
            m_sr2,
            m_sd,
            m_dr1,
            rho,
        })
    }

    /// Stats for the three relaying hops only. Auxiliary links get `m_h`.
    pub fn three_hop(m_g: T, m_h: T, m_f: T, rho: T) -> Result<Self> {
        Self::new(m_g, m_h, m_f, m_h, m_h, m_h, rho)
    }

    pub fn m_g(&self) -> T {
        self.m_g
    }
    pub fn m_h(&self) -> T {
        self.m_h
    }
    pub fn m_f(&self) -> T {
        self.m_f
    }
    pub fn m_sr1(&self) -> T {
        self.m_g
    }
    pub fn m_r1r2(&self) -> T {
        self.m_h
    }
    pub fn m_dr2(&self) -> T {
        self.m_f
    }
    pub fn m_sr2(&self) -> T {
        self.m_sr2
    }
    pub fn m_sd(&self) -> T {
        self.m_sd
    }
    pub fn m_dr1(&self) -> T {
        self.m_dr1
    }
    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn bar_g(&self) -> T {
        self.rho * self.m_g
    }
    pub fn bar_h(&self) -> T {
        self.rho * self.m_h
    }
    pub fn bar_f(&self) -> T {
        self.rho * self.m_f
    }

    /// Mean received SNRs of all six distinct links, in sampling order
    /// `[g, h, f, sr2, sd, dr1]`.
    pub fn bar_all(&self) -> [T; 6] {
        [
            self.m_g, self.m_h, self.m_f, self.m_sr2, self.m_sd, self.m_dr1,
        ]
        .map(|m| self.rho * m)
    }

    pub fn with_rho(&self, rho: T) -> Result<Self> {
        Self::new(
            self.m_g, self.m_h, self.m_f, self.m_sr2, self.m_sd, self.m_dr1, rho,
        )
    }

    /// Multiplies every mean power by `c`; equivalent to scaling `rho`.
    pub fn scaled_means(&self, c: T) -> Result<Self> {
        Self::new(
            self.m_g * c,
            self.m_h * c,
            self.m_f * c,
            self.m_sr2 * c,
            self.m_sd * c,
            self.m_dr1 * c,
            self.rho,
        )
    }
}

pub fn topology_to_stats<T: Real>(t: &Topology<T>, rho: T) -> Result<ChannelStats<T>> {
    let [s, r1, r2, d] = t.positions();
    let n = t.pathloss();
    ChannelStats::new(
        mean_power(s, r1, n)?,
        mean_power(r1, r2, n)?,
        mean_power(r2, d, n)?,
        mean_power(s, r2, n)?,
        mean_power(s, d, n)?,
        mean_power(d, r1, n)?,
        rho,
    )
}

/// One block-fading realization of the instantaneous received SNRs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelSample<T> {
    pub gamma_g: T,
    pub gamma_h: T,
    pub gamma_f: T,
    pub gamma_sr2: T,
    pub gamma_sd: T,
    pub gamma_dr1: T,
}

impl<T: Real> ChannelSample<T> {
    /// Sample carrying only the three relaying hops; auxiliary links are 0.
    pub fn hops(gamma_g: T, gamma_h: T, gamma_f: T) -> Self {
        Self {
            gamma_g,
            gamma_h,
            gamma_f,
            ..Self::default()
        }
    }

    pub fn gamma_sr1(&self) -> T {
        self.gamma_g
    }
    pub fn gamma_r1r2(&self) -> T {
        self.gamma_h
    }
    pub fn gamma_dr2(&self) -> T {
        self.gamma_f
    }

    pub fn is_valid(&self) -> bool {
        self.values()
            .iter()
            .all(|v| v.is_finite() && *v >= T::zero())
    }

    pub fn values(&self) -> [T; 6] {
        [
            self.gamma_g,
            self.gamma_h,
            self.gamma_f,
            self.gamma_sr2,
            self.gamma_sd,
            self.gamma_dr1,
        ]
    }

    pub fn from_values(v: [T; 6]) -> Self {
        Self {
            gamma_g: v[0],
            gamma_h: v[1],
            gamma_f: v[2],
            gamma_sr2: v[3],
            gamma_sd: v[4],
            gamma_dr1: v[5],
        }
    }
}

pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

pub fn linear_to_db<T: Real>(lin: T) -> T {
    T::lit(10.0) * lin.log10()
}
