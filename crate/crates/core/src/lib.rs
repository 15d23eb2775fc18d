//! Numerical toolkit for slice regular functions on the quaternionic unit
//! ball: quaternionic lifts of Banach spaces of holomorphic functions,
//! slice projections of measures, and Carleson box checks.

pub mod error;
pub mod numerics;
pub mod quaternion;
pub mod series;
pub mod measures;
pub mod spaces;
pub mod generators;
pub mod family;
pub mod carleson;

pub use error::{Error, Result};
pub use quaternion::{decompose, multiply, orthogonal_unit, ImaginaryUnit, Quaternion, SlicePoint};
pub use series::{representation_eval, ComplexSeries, SliceSeries};
pub mod cli;
