//! Covariant positive operator valued measures for unitary representations
//! of finite Abelian groups, with the phase and phase-difference observables
//! on the torus.
//!
//! Module map:
//! - [`group`]: products of cyclic groups, duals, subgroups, annihilators, quotients.
//! - [`harmonic`]: atomic measures, the cotransform on `G/H`, lifts and image measures.
//! - [`induction`]: the induced imprimitivity system and its diagonalisation `Σ`.
//! - [`povm`]: diagonal representations and the covariant POVM constructor.
//! - [`observables`]: position (on `Z_N`), phase and phase-difference observables, Born rule.
//! - [`io`]: JSON schemas and the command implementations behind the CLI.

pub mod error;
pub mod group;
pub mod harmonic;
pub mod induction;
pub mod io;
pub mod linalg;
pub mod observables;
pub mod par;
pub mod povm;

pub use error::{Error, Result};
pub use par::Execution;
