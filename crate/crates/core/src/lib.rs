//! Law-invariant coherent risk measures evaluated through a generalized
//! optimal transport problem on discrete distributions.
//!
//! A risk measure is specified by a target set `R` of probability measures
//! on `ℝ₊` with unit mean; its value at a loss distribution `m` is
//!
//! ```text
//! ρ_R(m) = sup { ∫ x·y dπ(x, y) : π has first marginal m, second marginal in R }.
//! ```
//!
//! The crate provides exact one-dimensional transport ([`transport`]),
//! closed forms for CV@R, higher-moment and Kusuoka-mixture measures
//! ([`riskmeasures`]), primal/dual solvers with certified duality gaps for
//! finite-support target sets ([`dualsolver`]), and an executable property
//! harness ([`verify`]).
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod dualsolver;
pub mod error;
pub mod measures;
pub mod riskmeasures;
pub mod scalar;
pub mod transport;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Order, Scalar};

pub type Measure = measures::DiscreteMeasure<f64>;
pub type Partition = measures::QuantilePartition<f64>;
pub type Generators = transport::GeneratorSet<f64>;
pub type Plan = transport::Coupling<f64>;
pub type Potentials = transport::PotentialPair<f64>;
pub type Spec = riskmeasures::RiskSpec<f64>;
pub type Kusuoka = riskmeasures::KusuokaImage<f64>;
pub type Dual = dualsolver::DualPotential<f64>;
pub type Options = dualsolver::SolverOptions<f64>;
pub type Report = dualsolver::GapReport<f64>;
pub type Order64 = Order<f64>;
