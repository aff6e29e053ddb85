//! Exact symbolic engine for the defining equations of Rees algebras of
//! height-two perfect ideals via Weyl-algebra b-functions.
//!
//! Given a Hilbert-Burch presentation matrix over Q[x_1..x_d], the engine
//! computes the b-function b_p(s) of the associated D-module for every
//! T-degree p, translates its integral roots into the bigraded support of
//! K = ker(Sym(I) -> R(I)), and derives the special-fiber invariants
//! (relation type, regularity, multiplicity, reduction number). Every result
//! can be cross-checked by two independent commutative oracles: bigraded
//! Hilbert counting on the Rees ideal, and exact kernel computations for the
//! associated system of differential equations.
//!
//! All arithmetic is exact rational; there is no floating point anywhere.

pub mod bfun;
pub mod corepoly;
pub mod error;
pub mod gbcomm;
pub mod gbweyl;
pub mod oracle;
pub mod rees;
pub mod weyl;

pub use bfun::BFunction;
pub use corepoly::{BiDeg, Mono, MonoOrder, Poly, Rat, Ring, VarKind};
pub use error::Error;
pub use gbcomm::{IdealGB, PresMatrix};
pub use gbweyl::{DMatrix, WeylGB};
pub use rees::{FiberInvariants, KSupport, ReesInput, ValidationReport};
pub use weyl::{SPoly, TElem, WeylOp};

/// Cooperative execution control for long-running computations.
///
/// A deadline is polled at coarse checkpoints inside Groebner main loops;
/// exceeding it aborts the computation with [`Error::Timeout`] so callers can
/// emit partial reports instead of corrupt ones.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunCtl {
    pub deadline: Option<std::time::Instant>,
}

impl RunCtl {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn with_deadline(deadline: std::time::Instant) -> Self {
        Self {
            deadline: Some(deadline),
        }
    }

    pub fn check(&self, stage: &str) -> Result<(), Error> {
        if let Some(dl) = self.deadline {
            if std::time::Instant::now() > dl {
                return Err(Error::Timeout {
                    stage: stage.to_string(),
                });
            }
        }
        Ok(())
    }
}
