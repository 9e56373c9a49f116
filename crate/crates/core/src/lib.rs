//! Exact constructions of very negative embedded spheres in the elliptic
//! surfaces E(n) and their blow-ups.
//!
//! The pipeline is: pick singular fibers whose monodromies multiply to
//! `(ab)^{6n}` ([`fibration`]), hang their plumbing fragments
//! ([`catalog`]) off a section, rewrite the tree with blow-ups
//! ([`plumbing`]), and smooth it into one sphere. [`search`] minimizes the
//! resulting square over fibrations and blow-up plans.

pub mod catalog;
pub mod error;
pub mod fibration;
pub mod plumbing;
pub mod report;
pub mod search;
pub mod sl2z;

pub use catalog::{catalog, cusp_replacement, resolve, FiberKind, FiberType, PlumbingFragment};
pub use error::{Error, Result};
pub use fibration::{
    betti, build_tree, canonical_decomposition, s_closed_form, s_construction, AmbientSurface, FiberChoice,
    FibrationSpec, Provenance,
};
pub use plumbing::{Coloring, PlumbingGraph, RewriteRecord};

pub use search::{
    best_sphere, conjecture_check, enumerate_specs, guaranteed_square, BlowupPlan, ConjectureCheck, ExactRatio,
    SearchOptions, SearchResult,
};
pub use sl2z::{word_to_matrix, GroupElement, Letter, MonodromyWord};
