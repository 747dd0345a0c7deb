//! Exact real arithmetic on Eudoxus reals (almost homomorphisms of the
//! integers modulo bounded functions) and a hyperreal layer built directly
//! from integer-valued functions of two variables.

pub mod ahom;
pub mod error;
pub mod eudoxus;

pub use ahom::AlmostHom;
pub use error::ParseError;
pub use eudoxus::{Comparison, EudoxusError, EudoxusReal, SignVerdict};
pub mod hyper;
pub mod indexset;
pub mod poly;
pub mod ufsim;

pub use hyper::{Germ, GeneralRescaling, HyperClass, HyperError};
pub use indexset::IndexSet;
pub use poly::Poly;
pub use ufsim::{FilterState, Membership, Verdict};
pub mod calculus;
pub mod lup;
pub use calculus::{adequal, CalculusError, RatFunction};
pub use lup::{LimitFilterSpec, LupElement, LupError, Partition};
pub mod expr;
pub use expr::{Ast, Context, Evaluator, ExprError, Sort, Value};
pub mod selftest;
