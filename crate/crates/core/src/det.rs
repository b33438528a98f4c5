//! Determinants over exact rings.

use num_traits::Num;
use std::ops::Neg;

/// Fraction-free Gaussian elimination (Bareiss). Every division is exact in
/// an integral domain, so for integer inputs all intermediates stay integral
/// and are bounded by minors of the input.
pub fn bareiss<T>(mut a: Vec<Vec<T>>) -> T
where
    T: Num + Clone + Neg<Output = T>,
{
    let size = a.len();
    if size == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = pivot_row[k].clone();
        for row in bottom.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..size {
                let v = row[j].clone() * pivot.clone() - factor.clone() * pivot_row[j].clone();
                row[j] = v / prev.clone();
            }
            row[k] = T::zero();
        }
        prev = pivot;
    }
    let d = a[size - 1][size - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Cofactor expansion along the first row. Exponential; only used as an
/// independent cross-check for small sizes.
pub fn laplace<T>(a: &[Vec<T>]) -> T
where
    T: Num + Clone + Neg<Output = T>,
{
    let size = a.len();
    match size {
        0 => T::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut total = T::zero();
            for col in 0..size {
                if a[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][col].clone() * laplace(&minor);
                total = if col % 2 == 0 {
                    total + term
                } else {
                    total - term
                };
            }
            total
        }
    }
}
