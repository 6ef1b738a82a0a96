//! Exact computations on generalized flag manifolds `G/K`, their M-spaces
//! `G/K1`, invariant metrics and the geodesic-orbit property.

pub mod chevalley;
pub mod linalg;
pub mod rational;
pub mod rootsys;
pub mod flag;
pub mod mspace;
pub mod metric;
pub mod geocheck;
pub mod catalog;
pub mod report;
