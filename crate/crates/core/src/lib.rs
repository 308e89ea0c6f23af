//! Secrecy analysis of three-hop untrusted amplify-and-forward relaying with
//! cooperative jamming.
//!
//! Every numeric routine is generic over [`Real`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`; the `*32` variants use
//! `f32`.
//!
//! ```
//! use relaysec_core::{analytics, model, Topology};
//!
//! let stats = model::topology_to_stats(&Topology::topology_1(), 1e4).unwrap();
//! let lb = analytics::esr_lower_bound(&stats).unwrap();
//! assert!(lb > 1.4 && lb < 1.6);
//! ```

// `!(x > 0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// quadrature and Lanczos tables keep their published digits
#![allow(clippy::excessive_precision)]

pub mod analytics;
pub mod config;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod scalar;
pub mod sinr;
pub mod specfun;

pub use error::{Error, Result};
pub use montecarlo::SinrMethod;
pub use scalar::Real;
pub use sinr::SchemeKind;
pub use specfun::SeriesOrder;

pub type Topology = model::Topology<f64>;
pub type ChannelStats = model::ChannelStats<f64>;
pub type ChannelSample = model::ChannelSample<f64>;
pub type SinrBundle = sinr::SinrBundle<f64>;
pub type EsrEstimate = montecarlo::EsrEstimate<f64>;
pub type EavesdropDecomposition = analytics::EavesdropDecomposition<f64>;
pub type AsymptoteParams = analytics::AsymptoteParams<f64>;

pub type Topology32 = model::Topology<f32>;
pub type ChannelStats32 = model::ChannelStats<f32>;
pub type ChannelSample32 = model::ChannelSample<f32>;
pub type SinrBundle32 = sinr::SinrBundle<f32>;
pub type EsrEstimate32 = montecarlo::EsrEstimate<f32>;
pub type EavesdropDecomposition32 = analytics::EavesdropDecomposition<f32>;
pub type AsymptoteParams32 = analytics::AsymptoteParams<f32>;
