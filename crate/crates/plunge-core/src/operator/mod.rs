//! Assembly of concentration matrices and the quadrature oracle.

pub mod matrix;
pub mod nystrom;
pub mod transform;

pub use matrix::{assemble, AssemblyMode, ConcentrationMatrix, TraceStats, DEFAULT_OMEGA_CAP};
pub use nystrom::nystrom_oracle;
pub use transform::{ft_indicator, ft_indicator_rasterized, has_exact_transform};
