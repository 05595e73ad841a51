pub mod cli;
pub mod completion;
pub mod convmdp;
pub mod descriptor;
pub mod field;
pub mod gf;
pub mod matrix;
pub mod mrlrc;
pub mod poly;
pub mod polymat;

pub use field::{Field, NumField};
pub use gf::{Elem, GaloisField};
pub use matrix::Matrix;

pub type Rational = num_rational::BigRational;
pub type GfMatrix = Matrix<GaloisField>;
pub type RationalMatrix = Matrix<NumField<Rational>>;
