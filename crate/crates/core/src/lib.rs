//! Mixed-dimensional ZXW diagrams.
//!
//! Build diagrams from generators, evaluate them to dense tensors, rewrite
//! them with sound local rules and decide equality through the canonical
//! coefficient normal form.

pub mod cli;
pub mod diagram;
pub mod error;
pub mod gallery;
pub mod interpret;
pub mod io;
pub mod normal_form;
pub mod random;
pub mod rewrite;
pub mod tensor;

pub use diagram::{Diagram, Dim, Endpoint, GeneratorKind, ParamVec};
pub use error::{DiagramError, NormalFormError, TensorError, Violation};
pub use interpret::{eval, generator_semantics};
pub use normal_form::{normalize, synthesize, NormalForm};
pub use tensor::Tensor;

pub type C64 = num_complex::Complex64;
