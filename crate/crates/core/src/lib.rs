//! Exact-arithmetic workbench for Hopf-Galois module structure.
//!
//! The pipeline runs in four stages, each in its own module:
//!
//! * [`permcore`] enumerates the regular subgroups `N` of `Perm(X)` normalised
//!   by `λ(G)`, one per Hopf-Galois structure on `L/ℚ`.
//! * [`descent`] builds `H = E[N]^G` by Galois descent, its Hopf structure
//!   constants, and the action of `H` on `L`.
//! * [`orders`] computes the associated order of `𝒪_L`, the fixed-point order
//!   `𝒪_E[N]^G`, Hopf-order and p-maximality tests.
//! * [`freeness`] decides local freeness of `𝒪_L` prime by prime and assembles
//!   the verdicts.
//!
//! [`numfield`] supplies the exact field, lattice and linear algebra underneath,
//! and [`pipeline`] wires the stages together for an [`instance::Instance`].

pub mod descent;
pub mod error;
pub mod freeness;
pub mod instance;
pub mod numfield;
pub mod orders;
pub mod permcore;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
