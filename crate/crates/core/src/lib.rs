//! Exact and numeric verification tools for chain-type filtered Higgs bundles
//! on the weighted projective line P(2,3).
//!
//! The crate is organized around four computational layers:
//!
//! - [`chain`]: admissibility, tail-slope stability, multiplicity profiles and
//!   the three-term inequality `m_r <= m_{r-2} + m_{r+2}` for chains of line
//!   bundles `O(r_1) -> O(r_2) -> ... -> O(r_n)`, plus bounded enumeration.
//! - [`pairing`]: an injective matching from height-`r` vertices of the chain's
//!   lattice path into heights `r +/- 2`, with an independent certificate checker.
//! - [`filtered`]: exact degree/slope calculus for filtered objects, the rank-one
//!   character example for `PSL_2(Z)`, and the residue translation table.
//! - [`harmonic`]: floating-point checks of the totally geodesic harmonic metric
//!   of the inclusion representation and the operators derived from it.
//!
//! [`sweep`] drives exhaustive searches and [`cli`] is the batch front end.

pub mod chain;
pub mod cli;
pub mod error;
pub mod filtered;
pub mod harmonic;
pub mod metric_checks;
pub mod pairing;
pub mod ratio;
pub mod sweep;

pub use chain::{ChainHiggsBundle, MultiplicityProfile, RootSequence, StabilityReport, Verdict};
pub use error::{Error, Result};
pub use pairing::{MatchingCertificate, RegionKind};
pub use ratio::{ComplexRational, Rational};
