//! Integer-valued string series, integration-operator transducers, and the
//! construction of canonical residual transducers.

pub mod builder;
pub mod error;
pub mod gallery;
pub mod resorder;
pub mod transducer;
pub mod zseries;

pub use error::{Error, Result};
pub use transducer::HTransducer;
pub use zseries::{Alphabet, Series, UnaryQP, Word};
