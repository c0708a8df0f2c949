//! Numerics for shear flows that diffuse under the heat equation and can
//! lose spectral stability while doing so.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`flow`]: the closed-form evolving profile `b(t, y)`, its derivatives and
//!   the Schrödinger potential `V = b''/b`.
//! * [`spectrum`]: the lowest eigenpair of `-d²/dy² + V`, giving the critical
//!   wave number `k* = sqrt(-λ₁)` and the neutral mode.
//! * [`calibrate`]: tuning the amplitude `M` and locating transition times.
//! * [`rayleigh`]: regular Rayleigh solutions, the Wronskian `W(c, k)` and the
//!   purely imaginary unstable eigenvalue curve `k ↦ c_i(k)`.
//! * [`scenario`]: end-to-end torus and whole-line pipelines producing a
//!   [`scenario::ScenarioReport`].
//!
//! IO, config files and the command-line front end live in the companion
//! `viscoshear` crate.

#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies sqrt/powf without std; builds that link std shadow it
#![allow(unused_imports)]

extern crate alloc;

pub mod calibrate;
mod error;
pub mod exec;
pub mod flow;
pub mod ode;
pub mod quad;
pub mod rayleigh;
pub mod roots;
pub mod scenario;
pub mod special;
pub mod spectrum;
pub mod tridiag;

pub use error::{Error, Result};
pub use flow::{FlowParams, FlowState};
pub use spectrum::{Grid, SpectralResult};
