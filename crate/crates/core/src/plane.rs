//! Dimension two: orientation sign matrices, combinatorial representations
//! and exhaustive enumeration of the strata of `Gr^tnz(2, n)`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perm::{block_reps, coset_rep_blocks, SignedPerm};
use crate::pluecker::{canonicalize, SignVector, Stratum};
use crate::scalar::{Scalar, Sign};
use crate::RationalMatrix;

/// Enumeration runs without an override up to this `n`.
pub const ENUMERATION_LIMIT: usize = 9;
/// Enumeration refuses anything larger, override or not.
pub const ENUMERATION_HARD_LIMIT: usize = 10;

/// Antisymmetric `n x n` matrix of `±1` with zero diagonal; entry `(i, j)` is
/// `sgn det(v_i, v_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientationSignMatrix {
    n: usize,
    cells: Vec<i8>,
}

impl OrientationSignMatrix {
    pub fn new(n: usize, cells: Vec<Vec<i8>>) -> Result<Self> {
        if cells.len() != n || cells.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: format!("{n}x{n} cells"),
                found: format!("{} rows", cells.len()),
            });
        }
        for (i, row) in cells.iter().enumerate() {
            if row[i] != 0 {
                return Err(Error::Parse(format!(
                    "diagonal entry ({0},{0}) is nonzero",
                    i + 1
                )));
            }
            for (j, &a) in row.iter().enumerate().skip(i + 1) {
                if a.abs() != 1 || cells[j][i] != -a {
                    return Err(Error::Parse(format!(
                        "entries ({},{}) and ({},{}) are not an antisymmetric ±1 pair",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(OrientationSignMatrix {
            n,
            cells: cells.into_iter().flatten().collect(),
        })
    }

    /// `O_n`: `+1` above the diagonal, `-1` below.
    pub fn standard(n: usize) -> Self {
        let mut cells = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[i * n + j] = match i.cmp(&j) {
                    Ordering::Less => 1,
                    Ordering::Greater => -1,
                    Ordering::Equal => 0,
                };
            }
        }
        OrientationSignMatrix { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based access.
    pub fn cell(&self, i: usize, j: usize) -> i8 {
        self.cells[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.cells.chunks(self.n).map(<[i8]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cell(i, j);
            }
        }
        OrientationSignMatrix { n, cells }
    }

    pub fn negated(&self) -> Self {
        OrientationSignMatrix {
            n: self.n,
            cells: self.cells.iter().map(|c| -c).collect(),
        }
    }

    /// `P O P^{-1}` for the signed permutation matrix `P` of `p`.
    pub fn conjugate(&self, p: &SignedPerm) -> Result<Self> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: format!("size {}", self.n),
                found: format!("size {}", p.n()),
            });
        }
        let n = self.n;
        // (P O P^{-1})[i][j] = d_a d_b O[a][b] with a = σ^{-1}(i), b = σ^{-1}(j)
        let inv = p.inverse();
        let pre: Vec<(usize, i8)> = inv
            .entries()
            .iter()
            .map(|&b| (b.unsigned_abs() as usize - 1, b.signum() as i8))
            .collect();
        let mut cells = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let (a, da) = pre[i];
                let (b, db) = pre[j];
                cells[i * n + j] = da * db * self.cell(a, b);
            }
        }
        Ok(OrientationSignMatrix { n, cells })
    }

    /// The strictly upper triangle, read row by row, as a sign vector on
    /// 2-subsets; this is the Plücker sign vector of any witness.
    pub fn upper_triangle(&self) -> SignVector {
        let n = self.n;
        let mut out = SignVector::all_positive(n, 2).expect("n >= 2");
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                out.set_negative(k, self.cell(i, j) < 0);
                k += 1;
            }
        }
        out
    }
}

/// Signed permutation `(a_1, ..., a_n)` encoding a witness: `|a_i|` is the
/// angular rank of the line through column `i`, and the sign records which
/// side of that line the point sits on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialRep(SignedPerm);

impl CombinatorialRep {
    pub fn new(p: SignedPerm) -> Self {
        CombinatorialRep(p)
    }

    pub fn as_signed_perm(&self) -> &SignedPerm {
        &self.0
    }

    pub fn into_signed_perm(self) -> SignedPerm {
        self.0
    }
}

fn require_plane<T: Scalar>(matrix: &Matrix<T>) -> Result<()> {
    if matrix.m() != 2 {
        return Err(Error::Unsupported(format!(
            "operation is defined for m = 2 only, got m = {}",
            matrix.m()
        )));
    }
    Ok(())
}

fn cross<T: Scalar>(u: &(T, T), v: &(T, T)) -> T {
    u.0.clone() * v.1.clone() - u.1.clone() * v.0.clone()
}

pub fn orientation_matrix<T: Scalar>(matrix: &Matrix<T>) -> Result<OrientationSignMatrix> {
    require_plane(matrix)?;
    let n = matrix.n();
    let cols: Vec<(T, T)> = (0..n)
        .map(|c| (matrix.get(0, c).clone(), matrix.get(1, c).clone()))
        .collect();
    let mut cells = vec![0i8; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let s = match cross(&cols[i], &cols[j]).sign() {
                Sign::Zero => {
                    return Err(Error::ZeroMinor {
                        subset: vec![i + 1, j + 1],
                    })
                }
                s => s.as_i8(),
            };
            cells[i * n + j] = s;
            cells[j * n + i] = -s;
        }
    }
    Ok(OrientationSignMatrix { n, cells })
}

/// Representative of the line through `v` with angle in `[0, π)`:
/// `y > 0`, or `y = 0` and `x > 0`.
fn upper_representative<T: Scalar>(v: (T, T)) -> (T, T) {
    let flip = v.1.is_negative() || (v.1.is_zero() && v.0.is_negative());
    if flip {
        (-v.0, -v.1)
    } else {
        v
    }
}

/// Column indices (0-based) sorted by the angle of their line in `[0, π)`.
/// Exact: compares by the sign of a cross product, no trigonometry.
pub fn angle_order<T: Scalar>(matrix: &Matrix<T>) -> Result<Vec<usize>> {
    require_plane(matrix)?;
    let n = matrix.n();
    let reps: Vec<(T, T)> = (0..n)
        .map(|c| upper_representative((matrix.get(0, c).clone(), matrix.get(1, c).clone())))
        .collect();
    if let Some(c) = reps.iter().position(|v| v.0.is_zero() && v.1.is_zero()) {
        return Err(Error::ZeroMinor {
            subset: vec![c + 1, if c == 0 { 2 } else { 1 }],
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    // u before v iff det(u, v) > 0 for upper representatives
    order.sort_by(|&a, &b| match cross(&reps[a], &reps[b]).sign() {
        Sign::Positive => Ordering::Less,
        Sign::Negative => Ordering::Greater,
        Sign::Zero => a.cmp(&b),
    });
    for w in order.windows(2) {
        if cross(&reps[w[0]], &reps[w[1]]).sign() != Sign::Positive {
            return Err(Error::NotGeneric(w[0].min(w[1]) + 1, w[0].max(w[1]) + 1));
        }
    }
    Ok(order)
}

/// Combinatorial representation aligned to the original column order:
/// entry `i` is `a_{τ(i)}` where `τ(i)` is the angular rank of column `i`,
/// `a_1 = sgn(y)` (or `sgn(x)` when `y = 0`) and `a_k = sgn(y) k` for `k > 1`.
pub fn combinatorial_rep<T: Scalar>(matrix: &Matrix<T>) -> Result<CombinatorialRep> {
    let order = angle_order(matrix)?;
    let mut entries = vec![0i32; matrix.n()];
    for (pos, &col) in order.iter().enumerate() {
        let (x, y) = (matrix.get(0, col), matrix.get(1, col));
        let up = if pos == 0 && y.is_zero() {
            x.is_positive()
        } else {
            y.is_positive()
        };
        let k = pos as i32 + 1;
        entries[col] = if up { k } else { -k };
    }
    Ok(CombinatorialRep(SignedPerm::new(entries)?))
}

/// The orientation matrix shared by every witness whose representation is
/// `rep`: `R^{-1} O_n R` for the signed permutation matrix `R` of `rep`.
pub fn orientation_from_rep(rep: &CombinatorialRep) -> OrientationSignMatrix {
    OrientationSignMatrix::standard(rep.0.n())
        .conjugate(&rep.0.inverse())
        .expect("same size")
}

/// An integer witness with the given representation: line `k` in angular
/// order is spanned by `u_1 = (1, 0)` and `u_k = (n - k, 1)` for `k > 1`,
/// and column `i` is `sgn(a_i) u_{|a_i|}`.
pub fn witness_from_rep(rep: &CombinatorialRep) -> RationalMatrix {
    let n = rep.0.n() as i64;
    let columns = rep
        .0
        .entries()
        .iter()
        .map(|&a| {
            let k = a.unsigned_abs() as i64;
            let (x, y) = if k == 1 { (1, 0) } else { (n - k, 1) };
            let s = a.signum() as i64;
            vec![
                BigRational::from_integer((s * x).into()),
                BigRational::from_integer((s * y).into()),
            ]
        })
        .collect();
    Matrix::from_columns(columns).expect("2 x n with n >= 2")
}

/// Checks `sgn det(v_i, v_j) = sgn(a_i a_j (j - i))` on the angle-sorted
/// columns of `matrix`; returns the first violating pair (1-based, sorted
/// positions) if any.
pub fn sign_lemma_violation<T: Scalar>(matrix: &Matrix<T>) -> Result<Option<(usize, usize)>> {
    let order = angle_order(matrix)?;
    let sorted = Matrix::from_columns(order.iter().map(|&c| matrix.column(c)).collect())?;
    let rep = combinatorial_rep(&sorted)?;
    let a = rep.as_signed_perm().entries();
    let o = orientation_matrix(&sorted)?;
    let n = sorted.n();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let expected = (a[i].signum() * a[j].signum() * (j as i32 - i as i32).signum()) as i8;
            if o.cell(i, j) != expected {
                return Ok(Some((i + 1, j + 1)));
            }
        }
    }
    Ok(None)
}

pub(crate) fn check_enumeration_size(n: usize, allow_large: bool) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange("enumeration needs n >= 2".into()));
    }
    if n > ENUMERATION_HARD_LIMIT {
        return Err(Error::TooLarge {
            what: "plane enumeration",
            n,
            limit: ENUMERATION_HARD_LIMIT,
        });
    }
    if n > ENUMERATION_LIMIT && !allow_large {
        return Err(Error::TooLarge {
            what: "plane enumeration",
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Upper triangles of `P O_n P^{-1}` over all coset representatives `P`;
/// one per orientation matrix, `2^{n-1}(n-1)!` in total. Sorted.
pub fn enumerate_orientation_vectors_2d(n: usize, allow_large: bool) -> Result<Vec<SignVector>> {
    check_enumeration_size(n, allow_large)?;
    let standard = OrientationSignMatrix::standard(n);
    let set: HashSet<SignVector> = coset_rep_blocks(n)?
        .par_iter()
        .fold(HashSet::new, |mut acc, block| {
            for p in block_reps(block) {
                acc.insert(standard.conjugate(&p).expect("size n").upper_triangle());
            }
            acc
        })
        .reduce(HashSet::new, merge_sets);
    let mut out: Vec<SignVector> = set.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn merge_sets<T: std::hash::Hash + Eq>(mut a: HashSet<T>, b: HashSet<T>) -> HashSet<T> {
    if a.len() < b.len() {
        return merge_sets(b, a);
    }
    a.extend(b);
    a
}

/// Every stratum of `Gr^tnz(2, n)`, sorted. Conjugates `O_n` by each left
/// coset representative of `K_n`, reads off the upper triangle and
/// canonicalizes.
pub fn enumerate_strata_2d(n: usize, allow_large: bool) -> Result<Vec<Stratum>> {
    check_enumeration_size(n, allow_large)?;
    let standard = OrientationSignMatrix::standard(n);
    let set: HashSet<Stratum> = coset_rep_blocks(n)?
        .par_iter()
        .fold(HashSet::new, |mut acc, block| {
            for p in block_reps(block) {
                let o = standard.conjugate(&p).expect("size n");
                acc.insert(canonicalize(o.upper_triangle()));
            }
            acc
        })
        .reduce(HashSet::new, merge_sets);
    let mut out: Vec<Stratum> = set.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Strata together with an integer witness each. The witness comes from the
/// smallest coset representative `p` reaching the stratum; its combinatorial
/// representation is `p^{-1}`.
pub fn enumerate_strata_2d_with_witnesses(
    n: usize,
    allow_large: bool,
) -> Result<Vec<(Stratum, RationalMatrix)>> {
    check_enumeration_size(n, allow_large)?;
    let standard = OrientationSignMatrix::standard(n);
    let first: HashMap<Stratum, SignedPerm> = coset_rep_blocks(n)?
        .par_iter()
        .fold(
            HashMap::new,
            |mut acc: HashMap<Stratum, SignedPerm>, block| {
                for p in block_reps(block) {
                    let t = canonicalize(standard.conjugate(&p).expect("size n").upper_triangle());
                    match acc.get_mut(&t) {
                        Some(q) if *q <= p => {}
                        Some(q) => *q = p,
                        None => {
                            acc.insert(t, p);
                        }
                    }
                }
                acc
            },
        )
        .reduce(HashMap::new, |mut a, b| {
            for (t, p) in b {
                match a.get_mut(&t) {
                    Some(q) if *q <= p => {}
                    Some(q) => *q = p,
                    None => {
                        a.insert(t, p);
                    }
                }
            }
            a
        });
    let mut out: Vec<(Stratum, RationalMatrix)> = first
        .into_iter()
        .map(|(t, p)| (t, witness_from_rep(&CombinatorialRep(p.inverse()))))
        .collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{coset_reps, kn_elements, PlainPerm};
    use crate::pluecker::sign_vector;
    use crate::rng::SampleRng;

    fn witness() -> RationalMatrix {
        RationalMatrix::from_integers(2, 3, &[1, 0, 1, 0, 1, 1]).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let o = orientation_matrix(&witness()).unwrap();
        assert_eq!(o.upper_triangle().to_string(), "++-");
        // angle-sorted, all in the upper half plane
        let sorted = RationalMatrix::from_integers(2, 4, &[1, 3, 1, -2, 0, 1, 2, 1]).unwrap();
        assert_eq!(
            orientation_matrix(&sorted).unwrap(),
            OrientationSignMatrix::standard(4)
        );
        let o = orientation_matrix(&sorted).unwrap();
        assert_eq!(
            orientation_matrix(&sorted.reversed_columns()).unwrap(),
            o.transpose()
        );
        assert!(OrientationSignMatrix::new(2, o.rows()).is_err());
        assert!(OrientationSignMatrix::new(4, o.rows()).is_ok());
        let three = RationalMatrix::from_integers(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(orientation_matrix(&three).is_err());
    }

    #[test]
    fn rep_examples() {
        let m = RationalMatrix::from_integers(2, 2, &[1, 0, 0, 1]).unwrap();
        assert_eq!(
            combinatorial_rep(&m).unwrap().as_signed_perm().to_string(),
            "1,2"
        );
        let m = RationalMatrix::from_integers(2, 2, &[1, 0, 0, -1]).unwrap();
        assert_eq!(
            combinatorial_rep(&m).unwrap().as_signed_perm().to_string(),
            "1,-2"
        );
        // lines listed out of angular order
        let m = RationalMatrix::from_integers(2, 3, &[0, -1, 1, 1, 0, 1]).unwrap();
        // angles: col1 90°, col2 0° (x < 0), col3 45°
        assert_eq!(
            combinatorial_rep(&m).unwrap().as_signed_perm().to_string(),
            "3,-1,2"
        );
        let parallel = RationalMatrix::from_integers(2, 3, &[1, 2, 0, 1, 2, 1]).unwrap();
        assert!(matches!(
            combinatorial_rep(&parallel),
            Err(Error::NotGeneric(1, 2))
        ));
    }

    #[test]
    fn orientation_from_rep_examples() {
        assert_eq!(
            orientation_from_rep(&CombinatorialRep::new(SignedPerm::identity(5))),
            OrientationSignMatrix::standard(5)
        );
        for n in 2..=6 {
            for k in kn_elements(n).unwrap() {
                assert_eq!(
                    orientation_from_rep(&CombinatorialRep::new(k)),
                    OrientationSignMatrix::standard(n)
                );
            }
        }
        let o = orientation_from_rep(&CombinatorialRep::new("1,-2".parse().unwrap()));
        assert_eq!(o.cell(0, 1), -1);
    }

    #[test]
    fn witness_realizes_its_rep() {
        for n in 2..=5 {
            for p in coset_reps(n).unwrap() {
                let rep = CombinatorialRep::new(p.inverse());
                let w = witness_from_rep(&rep);
                assert!(w.is_totally_nonzero());
                assert_eq!(combinatorial_rep(&w).unwrap(), rep);
                assert_eq!(orientation_matrix(&w).unwrap(), orientation_from_rep(&rep));
                assert_eq!(
                    orientation_from_rep(&rep),
                    OrientationSignMatrix::standard(n).conjugate(&p).unwrap()
                );
            }
        }
    }

    #[test]
    fn rep_of_random_witness_gives_its_orientation() {
        let mut rng = SampleRng::new(5, 0);
        for n in 2..=7 {
            let mut done = 0;
            while done < 100 {
                let vals: Vec<i64> = (0..2 * n).map(|_| rng.symmetric(20)).collect();
                let m = RationalMatrix::from_integers(2, n, &vals).unwrap();
                if !m.is_totally_nonzero() {
                    continue;
                }
                let rep = combinatorial_rep(&m).unwrap();
                assert_eq!(orientation_from_rep(&rep), orientation_matrix(&m).unwrap());
                assert_eq!(sign_lemma_violation(&m).unwrap(), None);
                done += 1;
            }
        }
    }

    #[test]
    fn conjugation_matches_column_permutation() {
        let mut rng = SampleRng::new(9, 0);
        let m = RationalMatrix::from_integers(2, 5, &[3, -1, 4, 1, -5, 9, 2, -6, 5, 3]).unwrap();
        assert!(m.is_totally_nonzero());
        let o = orientation_matrix(&m).unwrap();
        for _ in 0..50 {
            let p = SignedPerm::random(5, &mut rng);
            let t = m.transform_columns(&p).unwrap();
            assert_eq!(orientation_matrix(&t).unwrap(), o.conjugate(&p).unwrap());
        }
        let rev = PlainPerm::reversal(5).to_signed();
        assert_eq!(
            orientation_matrix(&m.reversed_columns()).unwrap(),
            o.conjugate(&rev).unwrap()
        );
    }

    #[test]
    fn enumeration_small() {
        assert_eq!(enumerate_strata_2d(2, false).unwrap().len(), 1);
        let three = enumerate_strata_2d(3, false).unwrap();
        let texts: Vec<String> = three.iter().map(|t| t.to_string()).collect();
        assert_eq!(texts, vec!["+++", "++-", "+-+", "+--"]);
        assert_eq!(enumerate_strata_2d(5, false).unwrap().len(), 192);
        assert_eq!(
            enumerate_orientation_vectors_2d(4, false).unwrap().len(),
            48
        );
        assert!(enumerate_strata_2d(1, false).is_err());
        assert!(enumerate_strata_2d(10, false).is_err());
        assert!(enumerate_strata_2d(11, true).is_err());
    }

    #[test]
    fn enumeration_witnesses_reproduce_strata() {
        for n in 2..=5 {
            let plain = enumerate_strata_2d(n, false).unwrap();
            let with = enumerate_strata_2d_with_witnesses(n, false).unwrap();
            assert_eq!(
                with.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>(),
                plain
            );
            for (t, w) in &with {
                assert_eq!(&canonicalize(sign_vector(w).unwrap()), t);
            }
        }
    }
}
