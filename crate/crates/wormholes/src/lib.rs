//! Numerical toolkit for Laplacians on manifolds with many small handles
//! ("wormholes").
//!
//! A thin handle of radius `eps` and length `ell` glued along two removed
//! balls perturbs the Laplace–Beltrami operator.  Depending on how densely
//! the handles sit (uniform cover distance `eta = eps^alpha`) and how fast
//! their length shrinks (`ell = eps^lambda`), the perturbed operators either
//! converge back to the unperturbed Laplacian (*fading* handles) or to a
//! Laplacian acting on functions identified on two isometric regions
//! (*adhering* handles).
//!
//! The crate makes the underlying quantitative analysis executable:
//!
//! * [`bessel`] — modified Bessel functions `I_nu`, `K_nu` for the orders
//!   `nu = (m-2)/2` arising from radial Laplace equations;
//! * [`constants`] — exact optimal Sobolev-trace and non-concentration
//!   constants on balls and annuli, their asymptotic expansions, and the
//!   Dirichlet-to-Neumann spectrum on spheres;
//! * [`handles`] — harmonic-extension profiles on thin cylinders and the
//!   seven `delta`-constants driving every convergence-rate estimate;
//! * [`regimes`] — exact rational classification of `(m, alpha, lambda)`
//!   parameter points into fading/adhering regimes, rate exponents, and the
//!   named region polygons;
//! * [`spectra`] — desk-scale discrete verification: weighted-graph
//!   Laplacians on flat 2-d models with removed disks and glued discrete
//!   cylinders, eigenvalue sweeps, and a resolvent-distance probe;
//! * [`cli`] — batch front-end shared by the `wormholes` binary and the
//!   runnable examples.

pub mod bessel;
pub mod cli;
pub mod constants;
pub mod handles;
pub mod ode;
pub mod quad;
pub mod regimes;
pub mod spectra;
