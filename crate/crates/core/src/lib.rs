//! Magnetostatics of superconducting atom-chip wires.
//!
//! Thin-strip sheet-current models (Meissner, normal, Bean critical state),
//! closed-form cylinder solutions, a boundary-element solver for wires of
//! finite thickness, and trap analysis (height, gradients, depth) for side
//! guides formed with a bias field.

pub mod bean;
pub mod bem;
pub mod config;
pub mod table;
pub mod cylinder;
pub mod error;
pub mod geometry;
pub mod physics;
pub mod quadrature;
pub mod scenario;
pub mod sheet;
pub mod trap;

pub use error::{Error, Result};
