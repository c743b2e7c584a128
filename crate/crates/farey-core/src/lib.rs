//! Exact arithmetic for slopes on the torus and Dehn-filling combinatorics.
//!
//! A *slope* is a primitive class in `H1(T^2; Z)` up to sign, written `p/q`.
//! This crate computes with slopes exactly: the Farey-graph metric and its
//! BFS oracle, Dehn twists and other unimodular actions, covering-induced
//! slope correspondences, bounded-set algebra with certified diameter
//! bounds, multislope filling lattices with minimally-non-hyperbolic
//! detection, and a validator for leveled filling-descent trees.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the CLI live
//! in the companion `farey-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounded;
pub mod covers;
pub mod fillings;
pub mod metric;
pub mod slope;
pub mod transforms;
pub mod txtree;

pub use bounded::SlopeSet;
pub use covers::CoverMap;
pub use fillings::{FillingEntry, Multislope};
pub use metric::{DistanceResult, GeodesicPath};
pub use slope::Slope;
pub use transforms::UnimodularMap;
