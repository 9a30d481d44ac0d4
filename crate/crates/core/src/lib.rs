//! Verification engine for generalized complex and generalized contact
//! geometry on explicit coordinate charts.
//!
//! The crate builds the standard objects of the subject — the big tangent
//! bundle `TM ⊕ T*M` with its neutral pairing and Courant bracket,
//! generalized (almost) complex structures, generalized almost contact
//! (metric) structures, products and warps — over a small symbolic scalar
//! engine, and mechanically checks every axiom, bracket closure and
//! commuting-pair condition on seeded sample points.

pub mod bigtangent;
pub mod calculus;
pub mod catalog;
pub mod chart;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod products;
pub mod report;
pub mod structures;

pub use bigtangent::{BundleEndomorphism, Bracket, GeneralizedSection};
pub use calculus::{KForm, MatrixField, MetricTensor, VectorField};
pub use chart::{Chart, SamplePlan};
pub use error::{Error, Result};
pub use expr::ScalarField;
pub use report::{CheckReport, Verdict, Witness};
pub use structures::{GacmsRecord, GacsRecord, GacxRecord, SpanningFrame};
