//! Decide whether closed boundary data in the 1-jet space of maps
//! `R^n -> R^m` bounds the graph of the 1-jet of a harmonic function.
//!
//! The criterion is a family of moment conditions: for every harmonic test
//! polynomial `H` there is a closed conservation law whose undifferentiated
//! form `phi` must integrate to zero over the boundary. The same data can be
//! filled directly by solving a Dirichlet problem and measuring the normal
//! defect `zeta` between the prescribed gradient slot and the gradient of the
//! harmonic extension. Both routes are implemented and cross-checked.
//!
//! Modules:
//! - [`extcalc`] — exact polynomial exterior calculus over jet-space
//!   variables; the symbolic oracle that pins every sign used downstream.
//! - [`jetgeom`] — sampled closed boundaries in jet space, normals, induced
//!   measure, isotropy residuals, and the cylinder construction.
//! - [`conslaw`] — harmonic test bases and moment-condition evaluation.
//! - [`dirichlet`] — spectral disk/ball solvers, a Shortley–Weller finite
//!   difference solver for general plane domains, and Dirichlet-to-Neumann
//!   maps.
//! - [`fill`] — the decision procedure: moments + Dirichlet defect, plus
//!   test-case generators.
//! - [`holo`] — boundaries of holomorphic disks in `C^m` via the integrable
//!   extension to the harmonic system.
//! - [`formats`] — JSON/TSV input and output schemas shared with the CLI.

pub mod conslaw;
pub mod dirichlet;
pub mod extcalc;
pub mod fill;
pub mod formats;
pub mod holo;
pub mod jetgeom;
pub mod numerics;
