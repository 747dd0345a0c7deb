//! Hyperreals built from integer functions of two variables.
//!
//! An element is a rescaling `a -> (n -> u(a, n))`: for each time index `n`
//! the map `a -> u(a, n)` is an almost homomorphism (a Eudoxus real), and two
//! rescalings are identified when their components agree on a set in the
//! ultrafilter.
//!
//! Two tiers are provided. [`Germ`] covers rescalings whose component slopes
//! are a rational function of `n`; their order and equality are decided
//! exactly, since any two such sequences compare the same way on a cofinite
//! set. [`GeneralRescaling`] covers everything else, and decides equality by
//! routing the agreement set through the ultrafilter simulator when that set
//! can be computed.

mod germ;
mod rescaling;

pub use germ::Germ;
pub use rescaling::{COMPONENT_WINDOW, eq_mod_filter, FilterVerdict, GeneralRescaling, RescalingRule};

use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperClass {
    Zero,
    PositiveInfinitesimal,
    NegativeInfinitesimal,
    /// Finite and not infinitesimal; carries the standard part.
    AppreciableFinite(BigRational),
    PositiveInfinite,
    NegativeInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HyperError {
    #[error("division by the zero germ")]
    DivisionByZeroGerm,
    #[error("infinite element has no standard part")]
    InfiniteElement,
    #[error("component {0} is a pole")]
    PoleAtIndex(u64),
    #[error("exponent too large")]
    ExponentTooLarge,
}
