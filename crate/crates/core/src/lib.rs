pub mod catalog;
pub mod code;
pub mod counting;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod linalg;
pub mod predictor;
pub mod poly;
pub mod prime;
pub mod quadform;
pub mod registry;
pub mod sweep;

pub use cyclotomic::CycNum;
pub use error::{Error, Result};
pub use field::{ExtField, FieldElement};
pub use prime::PrimeField;
pub use quadform::{FormAnalysis, Preset, QuadraticFunction};
