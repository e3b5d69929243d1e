//! Exact equivariant L-polynomials for abelian extensions of `F_q(t)` and
//! Fitting-ideal verification over finite group rings.
//!
//! The crate computes the equivariant polynomial `Theta_{S0,T0}(u)` of a
//! supported extension model by direct Dirichlet-series summation with a
//! stabilization guard, evaluates and twists it exactly, and confronts the
//! results with the ideal-theoretic side: Fitting ideals, annihilators,
//! Pontryagin duals, and twist functoriality over `(Z/l^k)[G]`, through to
//! the predicted second-cohomology Fitting ideal and its witness-
//! independence, integrality, and level-stability checks.
//!
//! Everything outside the explicitly numeric Weil root-modulus check is
//! exact: big integers, big rationals, cyclotomic integers, and canonical
//! Howell normal forms, so every identity test is an equality of canonical
//! objects rather than a tolerance comparison.

pub mod ring;
pub mod poly;
pub mod ffq;
pub mod grpring;
pub mod linalg;
pub mod lfun;
pub mod numeric;
pub mod fitting;
pub mod cohomcheck;

use std::fmt;

/// Crate-wide error type. The CLI maps the variants onto its exit codes,
/// so the classification is part of the contract: `Config` for violated
/// preconditions, `EnumCap` for refused enumerations, `Stabilization` for
/// series that fail to vanish inside the guard window, `Numeric` for
/// root-finder breakdowns, `Property` for checked identities that are
/// false, and `Internal` for violated consistency guards.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Config(String),
    EnumCap { needed: u128, cap: u128 },
    Stabilization { smallest_failing_degree: usize, dmax: usize },
    Numeric(String),
    Property(String),
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {}", msg),
            Error::EnumCap { needed, cap } => {
                write!(f, "enumeration of {} items exceeds the cap {}", needed, cap)
            }
            Error::Stabilization { smallest_failing_degree, dmax } => write!(
                f,
                "series failed to stabilize: nonzero coefficient at degree {} inside the guard window (Dmax = {})",
                smallest_failing_degree, dmax
            ),
            Error::Numeric(msg) => write!(f, "numeric failure: {}", msg),
            Error::Property(msg) => write!(f, "property violated: {}", msg),
            Error::Internal(msg) => write!(f, "internal consistency violated: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

// Concrete instantiations of the generic core, named at the crate root.

/// Integer polynomials.
pub type ZPoly = poly::Poly<ring::IntRing>;
/// Rational polynomials.
pub type QPoly = poly::Poly<ring::RatRing>;
/// Polynomials over `Z[x]/Phi_N`.
pub type CycPoly = poly::Poly<ring::CycRing>;
/// Group-ring elements with integer coefficients.
pub type ZGroupElem = grpring::GroupRingElem;
/// The integral group ring `Z[G]` as a coefficient ring object.
pub type ZGroupRing = grpring::GroupRing<ring::IntRing>;
/// The rational group ring `Q[G]`.
pub type QGroupRing = grpring::GroupRing<ring::RatRing>;
/// The finite group ring `(Z/N)[G]`.
pub type ModGroupRing = grpring::GroupRing<ring::ModRing>;
/// Equivariant polynomials `Z[G][u]`.
pub type EquivPolyZ = poly::Poly<ZGroupRing>;
/// Equivariant polynomials `Q[G][u]`.
pub type EquivPolyQ = poly::Poly<QGroupRing>;
