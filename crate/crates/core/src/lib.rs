//! Exact computations with reduction systems for path algebras of quivers
//! and their deformations.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`quiver`], [`element`]: coefficients, paths and the path
//!   algebra;
//! * [`reduction`]: right-most rewriting, ambiguities, confluence checks and
//!   completion;
//! * [`star`]: the combinatorial star product and the Maurer–Cartan test;
//! * [`cohomology`] and [`variety`]: first-order deformations and symbolic
//!   Maurer–Cartan equations;
//! * [`quantization`]: the polynomial algebra, Poisson structures and the
//!   graph expansion of the star product.

pub mod cohomology;
pub mod element;
pub mod error;
pub mod examples;
pub mod linalg;
pub mod quantization;
pub mod quiver;
pub mod reduction;
pub mod scalar;
pub mod star;
pub mod text;
pub mod variety;

pub use element::Element;
pub use error::{Error, Result};
pub use quiver::{deglex_less, AdmissibleOrder, Path, Quiver};
pub use reduction::{complete, Ambiguity, DiamondReport, ReductionSystem, Rule, DEFAULT_BUDGET};
pub use scalar::{PolyScalar, Rational, Role, Var};
pub use star::{DeformationCochain, GaugeOnArrows, StarProduct};
pub use text::Symbols;

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// A budget ran out before the check could decide.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
