//! The signed permutation group `P_n`, its cyclic subgroup `K_n`, and the
//! actions of `S_n`, `{±1}^n` and `P_n` on sign vectors and strata.
//!
//! An element is stored as the sequence `(a_1, ..., a_n)`; its matrix has
//! column `i` equal to `sgn(a_i) e_{|a_i|}`. Products are matrix products, and
//! `P` acts on a witness `M` by `M ↦ M P^{-1}`, which on columns scales `v_j`
//! by `sgn(a_j)` and moves it to position `|a_j|`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pluecker::{canonicalize, sort_parity, SignVector, Stratum};
use crate::rng::SampleRng;
use crate::subset::SubsetIndexer;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(Vec<i32>);

impl SignedPerm {
    pub fn new(entries: Vec<i32>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &a in &entries {
            let k = a.unsigned_abs() as usize;
            if k == 0 || k > n || seen[k - 1] {
                return Err(Error::InvalidPermutation(format_entries(&entries)));
            }
            seen[k - 1] = true;
        }
        Ok(SignedPerm(entries))
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i32).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| a == i as i32 + 1)
    }

    /// Image of a signed index: `i ↦ a_i`, `-i ↦ -a_i`.
    pub fn apply(&self, signed_index: i32) -> i32 {
        let a = self.0[signed_index.unsigned_abs() as usize - 1];
        if signed_index < 0 {
            -a
        } else {
            a
        }
    }

    /// `self * other` as signed permutation matrices.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                expected: format!("size {}", self.n()),
                found: format!("size {}", other.n()),
            });
        }
        Ok(SignedPerm(other.0.iter().map(|&b| self.apply(b)).collect()))
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut out = vec![0; self.n()];
        for (i, &a) in self.0.iter().enumerate() {
            out[a.unsigned_abs() as usize - 1] = a.signum() * (i as i32 + 1);
        }
        SignedPerm(out)
    }

    /// Split as `Q_σ · D_d` with `σ(i) = |a_i|` and `d_i = sgn(a_i)`.
    pub fn factor(&self) -> (PlainPerm, ReflectionVector) {
        let images = self.0.iter().map(|a| a.unsigned_abs() as usize).collect();
        let signs = self.0.iter().map(|a| a.signum() as i8).collect();
        (PlainPerm(images), ReflectionVector(signs))
    }

    pub fn from_parts(sigma: &PlainPerm, d: &ReflectionVector) -> Result<SignedPerm> {
        if sigma.n() != d.n() {
            return Err(Error::SizeMismatch {
                expected: format!("size {}", sigma.n()),
                found: format!("size {}", d.n()),
            });
        }
        Ok(SignedPerm(
            sigma
                .0
                .iter()
                .zip(&d.0)
                .map(|(&s, &e)| s as i32 * e as i32)
                .collect(),
        ))
    }

    /// The `n x n` signed permutation matrix.
    pub fn to_matrix(&self) -> Vec<Vec<i8>> {
        let n = self.n();
        let mut out = vec![vec![0i8; n]; n];
        for (i, &a) in self.0.iter().enumerate() {
            out[a.unsigned_abs() as usize - 1][i] = a.signum() as i8;
        }
        out
    }

    /// Order of the element in `P_n`.
    pub fn order(&self) -> usize {
        let id = SignedPerm::identity(self.n());
        let mut power = self.clone();
        let mut k = 1;
        while power != id {
            power = power.compose(self).expect("same size");
            k += 1;
        }
        k
    }

    pub fn random(n: usize, rng: &mut SampleRng) -> SignedPerm {
        let mut entries: Vec<i32> = (1..=n as i32).collect();
        rng.shuffle(&mut entries);
        for a in entries.iter_mut() {
            if rng.coin() {
                *a = -*a;
            }
        }
        SignedPerm(entries)
    }
}

fn format_entries(entries: &[i32]) -> String {
    entries
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_entries(&self.0))
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    /// `"-3,1,2"`
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad signed permutation entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SignedPerm::new(entries)
    }
}

/// A permutation `σ` of `[n]`, stored as images `(σ(1), ..., σ(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlainPerm(Vec<usize>);

impl PlainPerm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(PlainPerm(images))
    }

    pub fn identity(n: usize) -> Self {
        PlainPerm((1..=n).collect())
    }

    /// Swaps `i` and `i + 1` (1-based).
    pub fn adjacent_transposition(n: usize, i: usize) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        PlainPerm(images)
    }

    /// `i ↦ n - i + 1`.
    pub fn reversal(n: usize) -> Self {
        PlainPerm((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn inverse(&self) -> PlainPerm {
        let mut out = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x - 1] = i + 1;
        }
        PlainPerm(out)
    }

    pub fn to_signed(&self) -> SignedPerm {
        SignedPerm(self.0.iter().map(|&x| x as i32).collect())
    }
}

/// Column sign flips; the sign part of `(ℝ*)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReflectionVector(Vec<i8>);

impl ReflectionVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse(format!(
                "reflection entries must be ±1: {signs:?}"
            )));
        }
        Ok(ReflectionVector(signs))
    }

    pub fn identity(n: usize) -> Self {
        ReflectionVector(vec![1; n])
    }

    /// Flip only coordinate `i` (1-based).
    pub fn single(n: usize, i: usize) -> Self {
        let mut signs = vec![1; n];
        signs[i - 1] = -1;
        ReflectionVector(signs)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// `i ↦ d_{σ^{-1}(i)}`: the reflection `Q_σ D Q_σ^{-1}`.
    pub fn conjugated_by(&self, sigma: &PlainPerm) -> ReflectionVector {
        let inv = sigma.inverse();
        ReflectionVector(inv.0.iter().map(|&j| self.0[j - 1]).collect())
    }
}

/// The generator `(-n, 1, 2, ..., n-1)` of `K_n`.
pub fn kn_generator(n: usize) -> Result<SignedPerm> {
    if n < 1 {
        return Err(Error::OutOfRange("K_n needs n >= 1".into()));
    }
    let mut entries = vec![-(n as i32)];
    entries.extend(1..n as i32);
    Ok(SignedPerm(entries))
}

/// All `2n` powers of the generator, in order.
pub fn kn_elements(n: usize) -> Result<Vec<SignedPerm>> {
    let g = kn_generator(n)?;
    let mut out = vec![SignedPerm::identity(n)];
    loop {
        let next = out.last().unwrap().compose(&g)?;
        if next.is_identity() {
            return Ok(out);
        }
        out.push(next);
    }
}

/// Membership test for `K_n`.
pub struct KnSubgroup(HashSet<SignedPerm>);

impl KnSubgroup {
    pub fn new(n: usize) -> Result<Self> {
        Ok(KnSubgroup(kn_elements(n)?.into_iter().collect()))
    }

    pub fn contains(&self, p: &SignedPerm) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Advances `values` to its lexicographic successor; false when it was the
/// last permutation.
pub(crate) fn next_permutation<T: Ord>(values: &mut [T]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mut i = values.len() - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = values.len() - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Every ordering of `items`, lexicographic.
pub fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    let mut current = items.to_vec();
    current.sort_unstable();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

/// The signed versions of one arrangement of absolute values: all `2^len`
/// sign patterns, in mask order (bit `i` set = entry `i` negative).
fn signings(abs: &[i32]) -> impl Iterator<Item = Vec<i32>> + '_ {
    (0u64..1 << abs.len()).map(move |mask| {
        abs.iter()
            .enumerate()
            .map(|(i, &a)| if mask >> i & 1 == 1 { -a } else { a })
            .collect()
    })
}

/// Left coset representatives of `K_n` in `P_n`: every `(1, a_2, ..., a_n)`
/// with `(a_2, ..., a_n)` a signed permutation of `2..n`.
/// There are `2^{n-1} (n-1)!` of them.
pub fn coset_reps(n: usize) -> Result<Vec<SignedPerm>> {
    Ok(coset_rep_blocks(n)?
        .iter()
        .flat_map(|block| block_reps(block).collect::<Vec<_>>())
        .collect())
}

/// Coset representatives grouped by the underlying permutation of `2..n`,
/// for parallel traversal: each block holds the `2^{n-1}` signings.
pub fn coset_rep_blocks(n: usize) -> Result<Vec<Vec<usize>>> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "coset representatives need n >= 2".into(),
        ));
    }
    let tail: Vec<usize> = (2..=n).collect();
    Ok(permutations_of(&tail))
}

pub(crate) fn block_reps(arrangement: &[usize]) -> impl Iterator<Item = SignedPerm> + '_ {
    let abs: Vec<i32> = arrangement.iter().map(|&x| x as i32).collect();
    (0u64..1 << abs.len()).map(move |mask| {
        let mut entries = Vec::with_capacity(abs.len() + 1);
        entries.push(1);
        entries.extend(
            abs.iter()
                .enumerate()
                .map(|(i, &a)| if mask >> i & 1 == 1 { -a } else { a }),
        );
        SignedPerm(entries)
    })
}

/// Every element of `P_n`; `2^n n!` of them, so only for small `n`.
pub fn all_signed_perms(n: usize) -> Vec<SignedPerm> {
    let items: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for arrangement in permutations_of(&items) {
        let abs: Vec<i32> = arrangement.iter().map(|&x| x as i32).collect();
        out.extend(signings(&abs).map(SignedPerm));
    }
    out
}

/// The effect of a signed permutation on sign vectors of a fixed shape,
/// precompiled: entry `r` of the image is entry `source[r]` of the input,
/// negated when `flip[r]` is set.
#[derive(Clone, Debug)]
pub struct SignAction {
    n: usize,
    m: usize,
    source: Vec<u32>,
    flip: Vec<bool>,
}

impl SignAction {
    /// For `I = {i_1 < ... < i_m}`, the new entry is
    /// `sgn(sort of σ^{-1}(I)) · ∏_{j ∈ σ^{-1}(I)} d_j · s[σ^{-1}(I)]`.
    pub fn new(p: &SignedPerm, indexer: &SubsetIndexer) -> Result<Self> {
        if p.n() != indexer.n() {
            return Err(Error::SizeMismatch {
                expected: format!("signed permutation of size {}", indexer.n()),
                found: format!("size {}", p.n()),
            });
        }
        let inv = p.inverse();
        let mut source = Vec::with_capacity(indexer.len());
        let mut flip = Vec::with_capacity(indexer.len());
        let mut pre = Vec::with_capacity(indexer.m());
        for subset in indexer.subsets() {
            pre.clear();
            let mut negatives = false;
            for &i in &subset {
                // inv maps i to ±j where v_j lands at position i with sign d_j
                let b = inv.entries()[i - 1];
                negatives ^= b < 0;
                pre.push(b.unsigned_abs() as usize);
            }
            let odd = sort_parity(&mut pre);
            source.push(indexer.rank_unchecked(&pre) as u32);
            flip.push(odd ^ negatives);
        }
        Ok(SignAction {
            n: indexer.n(),
            m: indexer.m(),
            source,
            flip,
        })
    }

    pub fn apply(&self, s: &SignVector) -> Result<SignVector> {
        if s.n() != self.n || s.m() != self.m {
            return Err(Error::SizeMismatch {
                expected: format!("sign vector for (m, n) = ({}, {})", self.m, self.n),
                found: format!("({}, {})", s.m(), s.n()),
            });
        }
        Ok(self.apply_unchecked(s))
    }

    #[inline]
    pub fn apply_unchecked(&self, s: &SignVector) -> SignVector {
        let mut out = s.clone();
        for (r, (&src, &flip)) in self.source.iter().zip(&self.flip).enumerate() {
            out.set_negative(r, s.is_negative(src as usize) ^ flip);
        }
        out
    }
}

fn action_for(p: &SignedPerm, s: &SignVector) -> Result<SignAction> {
    if p.n() != s.n() {
        return Err(Error::SizeMismatch {
            expected: format!("size {}", s.n()),
            found: format!("size {}", p.n()),
        });
    }
    SignAction::new(p, &s.indexer())
}

/// Sign vector of `M P^{-1}` given the sign vector of `M`.
pub fn act_perm_on_sign_vector(sigma: &PlainPerm, s: &SignVector) -> Result<SignVector> {
    action_for(&sigma.to_signed(), s)?.apply(s)
}

/// Entry at `I` multiplied by `∏_{i ∈ I} d_i`.
pub fn act_reflection_on_sign_vector(d: &ReflectionVector, s: &SignVector) -> Result<SignVector> {
    if d.n() != s.n() {
        return Err(Error::SizeMismatch {
            expected: format!("size {}", s.n()),
            found: format!("size {}", d.n()),
        });
    }
    let mut out = s.clone();
    for (r, subset) in s.indexer().subsets().enumerate() {
        let negative = subset.iter().filter(|&&i| d.0[i - 1] < 0).count() % 2 == 1;
        out.set_negative(r, s.is_negative(r) ^ negative);
    }
    Ok(out)
}

/// Reflection first, then permutation, as `p = Q_σ D_d`.
pub fn act_signed_perm_on_sign_vector(p: &SignedPerm, s: &SignVector) -> Result<SignVector> {
    action_for(p, s)?.apply(s)
}

pub fn act_signed_perm_on_stratum(p: &SignedPerm, t: &Stratum) -> Result<Stratum> {
    Ok(canonicalize(act_signed_perm_on_sign_vector(
        p,
        t.canonical(),
    )?))
}
