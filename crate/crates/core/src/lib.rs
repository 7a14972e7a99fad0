pub mod error;
pub mod field;
pub mod mat;
pub mod poly;
pub mod quiver;
pub mod rep;
pub mod construct;
pub mod decomp;
pub mod kronecker;
pub mod closure;
pub mod purity;
pub mod format;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use field::{Field, FieldSpec, Fp, Rationals};
pub use mat::Mat;
pub use quiver::{AlgebraElement, AlgebraMatrix, Arrow, Path, Quiver};
pub use rep::{hom_basis, hom_dim, ModuleMap, Representation, ShortExact, Side};
