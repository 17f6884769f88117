//! Core algorithms for throughput scheduling in an in-band full-duplex
//! wireless powered communication network.
//!
//! A hybrid access point (HAP) continuously radiates energy on the downlink
//! while users harvest it and take turns transmitting data on the uplink
//! (TDMA, one normalized frame). This crate provides:
//!
//! - [`model`]: physical-layer formulas (harvesting rate, Shannon rate,
//!   effective SNR coefficient) and schedule evaluation,
//! - [`channel`]: random network realizations (log-distance path loss,
//!   shadowing, Rayleigh fading),
//! - [`ptap`]: the convex power-and-time allocation solver for a fixed
//!   transmission order, plus a brute-force grid oracle for testing,
//! - [`exhaustive`]: the exact optimum over all transmission orders,
//! - [`schedulers`]: the maximum-rate-first heuristic (MFSA) and the
//!   equal-time baseline (ETA),
//! - [`verifier`]: independent feasibility and optimality-condition audits.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats, and the
//! experiment harness live in the companion `fdwpcn-sim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod channel;
pub mod exhaustive;
pub mod model;
pub mod ptap;
pub mod schedulers;
pub mod verifier;

pub use model::{Schedule, Slot, SystemParams, ThroughputReport, UserParams, Violation};
