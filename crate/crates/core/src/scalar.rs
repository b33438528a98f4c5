//! Exact scalar types usable as matrix entries.
//!
//! Everything downstream only ever looks at the *sign* of a minor, so the
//! trait is restricted to types with exact arithmetic. Fixed-width integers
//! are allowed for speed; callers are responsible for keeping the entries
//! small enough that elimination cannot overflow (see
//! [`crate::explorer`] for the bound used there).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::det;

/// Sign of a scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

pub trait Scalar: Clone + Debug + PartialEq + Num + Signed + Send + Sync {
    /// Exact determinant of a square matrix given as rows.
    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        det::bareiss(rows)
    }

    fn sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Scalar for i64 {}
impl Scalar for i128 {}
impl Scalar for BigInt {}

impl Scalar for BigRational {
    /// Clears denominators column by column, eliminates over the integers and
    /// divides the scale back out.
    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        let size = rows.len();
        if size == 0 {
            return BigRational::one();
        }
        let mut scale = BigInt::one();
        let mut ints: Vec<Vec<BigInt>> = vec![Vec::with_capacity(size); size];
        for col in 0..size {
            let lcm = rows
                .iter()
                .map(|row| row[col].denom().clone())
                .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
            for (r, row) in rows.iter().enumerate() {
                let entry = &row[col];
                ints[r].push(entry.numer() * (&lcm / entry.denom()));
            }
            scale *= lcm;
        }
        let d = det::bareiss(ints);
        if d.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(d, scale)
    }
}
