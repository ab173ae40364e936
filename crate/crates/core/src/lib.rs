//! Workbench for maximum scattered linear sets of PG(1, q^n) and MRD codes.

pub mod error;
pub mod field;
pub mod fp;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldDescriptor, FpLinearMap, FqnElem};
pub mod linpoly;
pub mod vecspace;

pub use linpoly::LinPoly;
pub mod catalog;
pub mod linset;
pub mod sweep;

pub use sweep::Budget;
pub mod geometry;
pub mod rmcode;
pub mod equiv;
