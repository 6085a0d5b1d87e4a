//! Correlation-tensor entanglement measures for multiqubit states.

pub mod error;
pub mod families;
pub mod grover;
pub mod measure;
pub mod monotonicity;
pub mod numeric;
pub mod random;
pub mod roof;
pub mod state;
pub mod tensor;

pub use error::{Error, Result};
pub use measure::{e_t, e_t_value, r_n, MeasureReport};
pub use num_complex::Complex64 as C64;
pub use state::{DensityMatrix, PauliString, PureState, QubitState};
pub use tensor::{CorrTensor, ExtendedTensor};
