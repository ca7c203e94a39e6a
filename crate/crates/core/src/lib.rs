//! Exact arithmetic in Ore extensions `K[x;sigma,delta]` and their quotient
//! division rings, plus a relation-search engine that hunts for group
//! relations among pro-unipotent units and certifies the outcome.

pub mod auto;
pub mod error;
pub mod ff;
pub mod field;
pub mod mpoly;
pub mod scalar;
pub mod scenarios;
pub mod skewpoly;
pub mod fraction;
pub mod series;
pub mod prounip;
pub mod freeness;
pub mod parse;
pub mod constructions;

pub use auto::{AutoOrder, AutoRule, Automorphism, ExtensionLaw, SigmaDerivation};
pub use error::{CoreError, Result};
pub use field::{Field, FieldDescriptor, FieldElem, VarName};
pub use fraction::LeftFraction;
pub use freeness::{Certificate, IndependenceReport, Letter, Word};
pub use mpoly::MPoly;
pub use prounip::{GradedHom, ProUnipotent};
pub use scalar::{CoeffCtx, Scalar};
pub use series::SkewSeries;
pub use skewpoly::{SkewPoly, SkewPolyRing, SkewRing};
