pub mod bipoly;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod fuchsian;
pub mod io;
pub mod maps;
pub mod modular;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod tower;

pub use bipoly::BiPoly;
pub use error::{Error, PullbackFailure, Result, Violation};
pub use field::{Fe, Field, FieldElement};
pub use fuchsian::FuchsianOperator;
pub use place::{Divisor, Place};
pub use poly::Poly;
pub use ratfunc::{Point, RatFunc};
