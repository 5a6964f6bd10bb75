//! Exact-arithmetic non-archimedean pluripotential theory on projective
//! space: tropical semirings, monomial valuations and Newton polyhedra,
//! flag ideals and their PL calculus, toric test configurations, exact
//! intersection numbers, and the energy/entropy functionals of K-stability.

pub mod rat;
pub mod linalg;
pub mod tropical;
pub mod valuation;
pub mod flag;
pub mod geom;
pub mod fan;
pub mod testconfig;
pub mod intersect;
pub mod functionals;
pub mod checks;

use thiserror::Error as ThisError;

/// Errors surfaced by the library. Every failure names the hypothesis or
/// precondition that broke; nothing panics on user input.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("operands live on different charts or have mismatched dimensions")]
    ChartMismatch,
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("the unit ideal is not allowed here")]
    UnitIdeal,
    #[error("valuation has infinite weight in coordinate {0}, the point is off the stratum")]
    OffStratum(usize),
    #[error("character value missing on {0}")]
    MissingCharacterValue(String),
    #[error("max is only defined on the PL-plus cone")]
    MixedSignPL,
    #[error("fan is too coarse: {0}")]
    CoarseFan(String),
    #[error("target fan does not refine the source fan")]
    NotRefinement,
    #[error("hypothesis failed: {0}")]
    Precondition(String),
    #[error("cross-check disagreement: {0}")]
    CrossCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}
