pub mod ellcurve;
pub mod error;
pub mod gf;
pub mod kummer;
pub mod lattice;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod report;
pub mod series;
pub mod surfgeom;

pub use error::{Error, Result};
