//! Exact combinatorics of the totally nonzero Grassmannian `Gr^tnz(m, n)`:
//! Plücker sign vectors, the signed permutation action, the plane strata and
//! their orbit counts.

pub mod counting;
pub mod det;
pub mod error;
pub mod explorer;
pub mod matrix;
pub mod perm;
pub mod plane;
pub mod pluecker;
pub mod rng;
pub mod scalar;
pub mod subset;
pub mod verify;

pub use counting::{GroupKind, OrbitReport};
pub use error::{Error, Result};
pub use explorer::{SampleConfig, StrataStore};
pub use matrix::Matrix;
pub use perm::{PlainPerm, ReflectionVector, SignAction, SignedPerm};
pub use plane::{CombinatorialRep, OrientationSignMatrix};
pub use pluecker::{canonicalize, sign_vector, SignVector, Stratum};
pub use scalar::{Scalar, Sign};
pub use subset::SubsetIndexer;

pub type Rational = num_rational::BigRational;
pub type RationalMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<num_bigint::BigInt>;
