//! Numerical toolkit for rotationally symmetric asymptotically flat manifolds:
//! Hawking and ADM masses, explicit example families, graph embeddings and
//! convergence experiments probing lower semicontinuity of the ADM mass.

pub mod convergence;
pub mod experiments;
pub mod families;
pub mod geometry;
pub mod numerics;
