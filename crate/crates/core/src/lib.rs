//! Exact-arithmetic workbench for weighted ℓ¹-algebras on finitely generated
//! groups and monoids.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function of
//! its inputs: structures and weights are immutable once built, and every
//! inequality that ends up in a report is either decided in exact rational
//! arithmetic or through a dyadic [`Enclosure`] whose endpoints are themselves
//! exact rationals.
//!
//! Module map:
//!
//! - [`structures`]: groups and monoids, word length, ancestry balls `B_n`,
//!   set-valued right division, pseudo-finiteness.
//! - [`weights`]: weight families, certification of the weight axioms, the
//!   sphere-minimum sequence `τ` and generator constant `C`, and the two exotic
//!   weights on `ℤ⁺`/`ℤ`.
//! - [`sequences`]: tail-preservation diagnostics for positive sequences.
//! - [`algebra`]: finitely supported elements, convolution, norms, the
//!   augmentation character and the partial augmentations `σ_n`.
//! - [`idealkit`]: explicit decompositions into generator combinations and the
//!   counterexample witnesses.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod enclosure;
mod error;
pub mod idealkit;
pub mod rational;
pub mod sequences;
pub mod structures;
pub mod weights;

pub use algebra::{FinElement, SigmaReport};
pub use enclosure::Enclosure;
pub use error::{Error, Result};
pub use rational::{Rational, Scalar};
pub use structures::{BallTable, Element, Structure};
pub use weights::{Weight, WeightSpec, WeightValue};

/// Default relative precision, in bits, of dyadic enclosures.
pub const DEFAULT_PRECISION: u32 = 128;

/// Default maximum number of elements held by a single ball.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;
