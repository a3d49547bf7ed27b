//! Models and simulation of how classical decoder latency and communication
//! latency shape the speed and physical-qubit cost of a surface-code
//! fault-tolerant quantum computer.
//!
//! The crate has two halves:
//!
//! * closed-form models: logical error rates ([`models`]), decoder and
//!   communication latency with the two reaction times ([`latency`]),
//!   decoder-fleet sizing ([`fleet`]), and microarchitecture assembly
//!   against an error budget ([`assembler`]);
//! * an independent discrete-event simulator of the decode/control pipeline
//!   ([`sim`]) scheduling decoding windows ([`windows`]) on a finite decoder
//!   pool, used to cross-check the analytic formulas.
//!
//! The analytic layer is generic over the floating-point scalar (see
//! [`scalar::Scalar`]); the aliases below fix `f64` for ordinary use. The
//! window geometry and the simulator are exact-integer code and are not
//! generic.

// Negated comparisons in the validators are deliberate: they reject NaN,
// which the suggested direct comparison would wave through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembler;
pub mod fleet;
pub mod latency;
pub mod models;
pub mod scalar;
pub mod sim;
pub mod time;
pub mod windows;

/// `f64` duration; the common currency of the latency models.
pub type Time64 = time::Time<f64>;
/// `f64` logical error-model fits.
pub type ErrorFit = models::ErrorFitParams<f64>;
/// `f64` hardware noise/timing parameters.
pub type Hardware = models::HardwareParams<f64>;
/// `f64` decoder-latency model.
pub type Decoder = latency::DecoderModel<f64>;
/// `f64` communication latencies.
pub type Comms = latency::CommLatencies<f64>;
/// `f64` reaction-time pair.
pub type Reaction = latency::ReactionTimes<f64>;

pub use models::Distance;
