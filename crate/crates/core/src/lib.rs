//! Construction and analysis of LDPC convolutional codes over arbitrary finite
//! fields, where the parity-check matrix is laid out by a (weak) difference
//! triangle set.
//!
//! The crate is organised around the pipeline
//!
//! ```text
//! DifferenceTriangleSet --> CodeDescriptor --> BaseMatrix --> SlidingMatrix
//!                                                 |               |
//!                                          PolynomialMatrix   Tanner graph
//!                                                 |               |
//!                                       degree / distances   cycles / girth / FRC
//! ```
//!
//! plus a [`bounds`] module that evaluates the field-size thresholds under
//! which the constructed codes are guaranteed to avoid vanishing minors and
//! cycles violating the full rank condition.

pub mod analysis;
pub mod arith;
pub mod bounds;
pub mod budget;
pub mod construction;
pub mod cycles;
pub mod dts;
pub mod field;
pub mod matrix;
pub mod poly;

pub use analysis::{
    AnalysisError, DegreeReport, DistanceCertificate, FreeDistanceReport, FreeDistanceStatus,
    HypothesisReport,
};
pub use bounds::{BoundEntry, BoundReport, BoundsError, SideCondition};
pub use budget::{Budget, BudgetExceeded, BudgetMeter};
pub use construction::{
    BaseMatrix, CodeDescriptor, ExplicitValue, SlidingMatrix, SupportAssignment, Variant,
};
pub use cycles::{Cycle, CycleSignature, CyclesError, FrcReport, MinorAudit};
pub use dts::{
    DifferenceTriangleSet, DtsError, DtsMode, EvenCycleFReport, FPattern, ValidationReport,
};
pub use field::{FieldElement, FieldError, FiniteField};
pub use matrix::FieldMatrix;
pub use poly::{FieldPoly, PolynomialMatrix};
