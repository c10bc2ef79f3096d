//! Planning, simulation and costing of piecewise-QSVT quantum state
//! preparation.
//!
//! A target amplitude vector is cut into aligned power-of-two segments
//! ([`segmentation`]), each fitted by a low-degree polynomial in the exact
//! linear block encoding `t_x = 1 - 2 (x mod L) / L` ([`encoding`]). The
//! polynomials are realised by QSVT phase factors ([`qsvt`]), applied to a
//! uniform or prior state and amplified ([`prep`]). [`cost`] evaluates the
//! Toffoli and qubit counts and [`window`] analyses B-spline windows for
//! phase estimation.

pub mod amplitudes;
pub mod cost;
pub mod encoding;
pub mod error;
pub mod parse;
pub mod plan;
pub mod poly;
pub mod prep;
pub mod qsvt;
pub mod segmentation;
pub mod window;

pub use amplitudes::{sample_target, AmplitudeVector, TargetKind, TargetSpec};
pub use error::{Error, Result};
pub use plan::{PiecewisePolynomial, Segment, SegmentPlan};
pub use qsvt::PhaseFactorSet;
