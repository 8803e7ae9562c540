pub mod cli;
pub mod critical;
pub mod cube;
pub mod error;
pub mod expansion;
pub mod json;
pub mod lace;
pub mod poly;
pub mod quad;
pub mod saw;
pub mod series;
pub mod verify;

pub use cube::{CubeFn, Dim, Scalar, Vertex};
pub use error::{Error, Result};
pub use saw::{EnumConfig, SawProfile, SawSeries, Truncation};
pub use critical::{CriticalPoint, Linearization};
