//! Exact step-2 rough-path arithmetic and the functionals built on it.
//!
//! The crate provides the group G²(ℝᵈ) in log coordinates, homogeneous
//! norms including the Carnot-Caratheodory norm for d = 2, lifting and
//! approximation of discrete paths, p-variation dynamic programming and
//! a reproducible simulator for continuous local martingales with their
//! Lévy areas.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature
//! is enabled; all transcendental math goes through `libm` so results
//! are identical in both configurations.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cc;
pub mod error;
pub mod group;
pub(crate) mod math;
pub mod path;
pub mod rng;
pub mod stochastic;
pub mod variation;

pub use error::{Error, Result};
pub use group::{GroupElement, HomNorm, LieValue, NormKind, VectorNorm};
pub use path::{Dissection, GroupPath};
pub use rng::{CounterRng, RngSpec};
pub use stochastic::{MartingaleFamily, MartingaleSample};
pub use variation::VariationResult;
