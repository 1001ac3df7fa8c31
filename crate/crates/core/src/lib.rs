//! Validated enclosures of Abelian integrals over ovals of polynomial
//! Hamiltonians, and limit-cycle bifurcation certificates built from
//! certified sign changes.
//!
//! The pipeline: enclose a family of ovals `Γ_h = {H = h}` in a trapping box,
//! adaptively classify sub-boxes against the level set, trap the oval segment
//! crossing each straddling box inside a thin parallelepiped, then integrate
//! monomial 2-forms over the resulting cover. Every numeric step uses outward
//! rounded interval arithmetic, so the reported enclosures are mathematically
//! rigorous.

pub mod abelian;
pub mod config;
pub mod cover;
pub mod decimal;
pub mod interval;
pub mod newton;
pub mod poly;
pub mod quad;
mod round;
pub mod runner;

pub use interval::{Interval, SignClass};
pub use poly::{BivarPoly, MonoIndex, Point2, Segment, UnivarPoly};
