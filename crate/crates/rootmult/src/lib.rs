//! Exact integer (co)homology of spaces of real monic degree-d polynomials
//! with constrained real-root multiplicity patterns.
//!
//! The multiplicity pattern of a polynomial's real divisor is an integer
//! composition ω; a closed poset Θ of forbidden patterns defines the space
//! P_d^{cΘ} of polynomials avoiding every pattern in Θ. This crate builds the
//! combinatorial differential complexes that compute the reduced integer
//! (co)homology of these spaces, reduces them with Smith normal form, and
//! evaluates the named numerical invariants attached to them (bouquet counts
//! A(d,k,q), stabilization quantities η/ψ/ξ, free-group ranks κ(d), graded
//! Vassiliev ranks) together with a verifier for the reference table of
//! homology spheres.

pub mod complex;
pub mod composition;
pub mod error;
pub mod appendix;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod poset;
pub mod snf;

pub use appendix::{golden_table, parse_table, verify_appendix, AppendixEntry, AppendixReport, VerificationRow};
pub use complex::{boundary_of, Chain, ComplexLabel, Direction, GradedComplex};
pub use composition::{enumerate, Composition, Parity};
pub use error::{Error, Result};
pub use homology::{
    homology, raw_graded_table, reduced_cohomology_of_complement,
    reduced_homology_of_complement, AbelianGroup, Classification, HomologyTable, Indexing,
};
pub use invariants::{
    bouquet_count, eta_psi_xi, kappa, stability_check, theta_shift_comparison, vassiliev_ranks,
    StabilityFailure, StabilityReport, ThetaShiftReport,
};
pub use poset::{is_profinite, ClosedPoset, PosetSpec, ProfiniteVerdict};
