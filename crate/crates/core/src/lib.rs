//! Numerical toolkit for Grand Lebesgue spaces over concrete unimodular groups.
//!
//! The crate computes `L_p` norms, Grand Lebesgue norms (a supremum of
//! `|f|_p / psi(p)` over the exponent `p`), convolutions and Fourier
//! transforms on the real line and on cyclic groups, and runs verification
//! campaigns for the convolution inequalities these spaces satisfy: Young's
//! inequality, the Banach-algebra bound `||f * g|| <= ||f|| ||g||` for a
//! normalized generating function, the scaling argument that forces the Young
//! exponent relation, and the power-tail counterexample showing what breaks
//! when the generating function degenerates at `p = 1`.
//!
//! Everything is deterministic: random families are seeded, campaign cells
//! are pure, and reports serialize byte-identically for a fixed
//! configuration.

pub mod analysis;
pub mod convolution;
pub mod domain;
pub mod error;
pub mod fourier;
pub mod function;
pub mod norms;
pub mod psi;
pub mod quadrature;
pub mod report;
pub mod special;

pub use domain::GroupDomain;
pub use error::{Error, Result};
pub use function::{AnalyticFunction, FamilySpec, FunctionRep, SampledFunction, Support};
pub use norms::{grand_norm, lp_norm, small_lebesgue_norm, GrandNormOptions, GrandNormResult};
pub use psi::{degenerate_psi_check, PsiClass, PsiFamily, PsiSpec};
pub use quadrature::{integrate, Quadrature, QuadratureRequest};
pub use special::beta_function;
