//! Desk-scale discrete verification: weighted-graph Laplacians on flat
//! two-dimensional models with removed disks and glued discrete cylinders.
//!
//! The energy form is `q(u) = sum_edges c_xy |u_x - u_y|^2` and the mass is
//! `||u||^2 = sum_x m_x |u_x|^2`; eigenvalues solve the generalized problem
//! `L v = lambda M v`.  Base manifolds are flat unit tori (or pairs of
//! them) with the five-point stencil: conductance 1 per edge and measure
//! `h^2` per vertex.  A handle is a product-metric cylinder grid glued
//! bijectively onto the boundary ring of a removed disk.

mod build;
mod eigen;
mod graph;
mod resolvent;
mod sweep;

pub use build::{
    attach_handles, build_adhering_case, build_base, build_cylinder, build_fading_case,
    build_identified_limit, ground_rings, remove_balls, remove_balls_with_cap, AdheringCase,
    AdheringConfig, BaseKind, FadingCase, FadingConfig, LimitModel, PuncturedManifold, Ring,
    WormholeModel,
};
pub use eigen::{eigenpairs, eigenvalues, EigenOptions};
pub use graph::{torus_distance, DiscreteManifold, Edge, VertexKind};
pub use resolvent::{hausdorff_spectral_distance, jmap_onto_model, resolvent_distance, JMap};
pub use sweep::{
    adhering_sweep, fading_sweep, sweep, ConvergenceStudy, FittedRate, SweepCase, SweepOutcome,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("grid resolution n={0} too small (need >= 8)")]
    Resolution(u32),
    #[error("disk of radius eps={eps} not resolvable at h={h}: {got} ring vertices (need >= 8)")]
    Unresolvable { eps: f64, h: f64, got: usize },
    #[error("centers are not eps-separated: distance {0} < 2 eps = {1}")]
    Separation(f64, f64),
    #[error("ring vertex sets of different disks overlap")]
    RingClash,
    #[error("gluing mismatch: cylinder has n_trans={0} but ring has {1} vertices")]
    GluingMismatch(usize, usize),
    #[error("handle discretization too coarse: n_long={0} (need >= 4)")]
    HandleResolution(u32),
    #[error("requested k={0} eigenvalues from a model with {1} vertices")]
    TooManyEigenvalues(usize, usize),
    #[error("eigensolver did not converge: worst residual {residual:e} (tolerance {tol:e})")]
    NoConvergence { residual: f64, tol: f64 },
    #[error("linear solver stalled at residual {0:e}")]
    CgStall(f64),
    #[error("identification is not measure/conductance preserving: {0}")]
    NotIsometric(String),
    #[error("empty spectral window")]
    EmptyWindow,
    #[error("eps list must be strictly decreasing and resolvable")]
    BadEpsList,
    #[error("vertex mapping has wrong dimensions: J maps {0} -> {1}, models have {2} -> {3}")]
    MapDimension(usize, usize, usize, usize),
}
