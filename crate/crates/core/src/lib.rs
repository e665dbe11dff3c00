pub mod error;
pub mod io;
pub mod lang;
pub mod metrics;
pub mod paths;
pub mod petri;
pub mod pipeline;
pub mod realize;
pub mod rpst;
pub mod unfold;

pub use error::{Error, Result};
