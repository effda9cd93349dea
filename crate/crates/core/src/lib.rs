//! Commuting matrix pairs, McKay quivers, invariant rings and resolutions of
//! Kleinian singularities `ℂ²/Γ` for finite `Γ ⊂ SU(2)`.
//!
//! Every numerical type is generic over a [`scalar::Real`]; the aliases
//! below fix the working precision to `f64`.

pub mod commuting;
pub mod equivariant;
pub mod error;
pub mod group;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod mckay;
pub mod resolution;
pub mod scalar;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub type Matrix = scalar::CMatrix<f64>;
pub type Vector = scalar::CVector<f64>;
pub type Pair = commuting::MatrixPair<f64>;
pub type CyclicTriple = commuting::Triple<f64>;
pub type Spectrum = commuting::SpectrumMultiset<f64>;
pub type Group = group::FiniteSubgroup<f64>;
pub type Element = group::GroupElement<f64>;
pub type Characters = group::CharacterTable<f64>;
pub type Rep = group::Representation<f64>;
pub type GammaTriple = equivariant::EquivariantTriple<f64>;
pub type Stability = equivariant::StackyStability<f64>;
pub type InvariantModel = invariants::InvariantRingModel<f64>;
pub type Poly = invariants::Polynomial<f64>;
pub type Chart = resolution::ToricChartA<f64>;
pub type Coinvariants = resolution::CoinvariantAlgebra<f64>;
pub type Tols = Tolerances<f64>;
