pub mod cache;
pub mod cayley;
pub mod charkron;
pub mod cube;
pub mod error;
pub mod exterior;
pub mod hwv;
pub mod latin;
pub mod lefschetz;
pub mod linalg;
pub mod partition;
pub mod seqlab;

pub use error::{Error, Result};
