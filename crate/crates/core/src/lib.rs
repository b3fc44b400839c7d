mod bigjson;
pub mod cli;
pub mod complex;
pub mod engine;
pub mod error;
pub mod homotopy;
pub mod linalg;
pub mod oracle;
pub mod series;
