//! Exact divisor computations on resolution graphs of normal surface
//! singularities.
//!
//! The crate models a resolution `f: Y -> X` combinatorially (weighted dual
//! graph plus strict-curve incidences) and provides:
//!
//! - the intersection lattice: definiteness, dual basis, numerical pullback
//!   ([`lattice`]);
//! - divisor arithmetic and the relative numerical decomposition
//!   ([`divisor`]);
//! - antinef closures with step traces ([`antinef`]);
//! - discrepancies, the log terminal test and multiplier-ideal divisors
//!   ([`canonical`]);
//! - generic blowup chains over free points ([`blowup`]);
//! - the construction exhibiting an integrally closed ideal on a log
//!   terminal surface as a multiplier ideal, with an independent checker
//!   ([`realize`]).
//!
//! All arithmetic is exact over `Q`.

// Index loops mirror the matrix formulas.
#![allow(clippy::needless_range_loop)]

pub mod antinef;
pub mod blowup;
pub mod canonical;
pub mod corpus;
pub mod divisor;
pub mod error;
pub mod graphfile;
pub mod lattice;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod realize;
pub mod report;

pub use antinef::{antinef_closure, antinef_closure_with, is_antinef, ClosureOptions, ClosureTrace, Selection};
pub use blowup::{apply_plan, blow_up_free_point, generic_chain, verify_lemma_gen, BlowupPlan, BlowupResult};
pub use canonical::{discrepancies, multiplier_divisor, relative_canonical, DiscrepancyReport};
pub use divisor::{decompose, Decomposition, Divisor};
pub use error::{Error, Result};
pub use graphfile::GraphFile;
pub use lattice::{build_model, CurveLabel, Definiteness, GraphDescription, ResolutionModel};
pub use rational::Rational;
pub use realize::{realize, verify_certificate, RealizationCertificate, VerificationReport};
pub use report::Report;
