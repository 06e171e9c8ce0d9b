//! Algebra of q-bic forms over finite fields and the enumerative geometry of
//! their hypersurfaces.

pub mod builtins;
pub mod error;
pub mod fano;
pub mod forms;
pub mod formulas;
pub mod geometry;
pub mod gf;
pub mod hermitian;
pub mod io;
pub mod linalg;
pub mod suite;

pub use error::{Error, Result};
pub use forms::{classify, standard_gram, QBicForm, TypeSignature};
pub use gf::{FieldCtx, Scalar};
pub use linalg::{Matrix, Subspace};
