//! Plücker sign vectors, strata and the sign-level three-term relation.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perm::PlainPerm;
use crate::scalar::{Scalar, Sign};
use crate::subset::SubsetIndexer;

/// Signs of all maximal minors, indexed by [`SubsetIndexer`] rank.
///
/// Packed one bit per entry (`+` = 0, `-` = 1), most significant bit first,
/// so the derived ordering agrees with the ordering of the `+`/`-` text form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    n: u16,
    m: u16,
    len: u32,
    words: Vec<u64>,
}

#[inline]
fn slot(k: usize) -> (usize, u64) {
    (k / 64, 1u64 << (63 - (k % 64)))
}

impl SignVector {
    /// The all-`+` vector on `C(n, m)` entries.
    pub fn all_positive(n: usize, m: usize) -> Result<Self> {
        let len = SubsetIndexer::new(n, m)?.len();
        Ok(SignVector {
            n: n as u16,
            m: m as u16,
            len: len as u32,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn from_signs(n: usize, m: usize, signs: &[i8]) -> Result<Self> {
        let mut out = Self::all_positive(n, m)?;
        if signs.len() != out.len() {
            return Err(Error::SizeMismatch {
                expected: format!("{} signs", out.len()),
                found: signs.len().to_string(),
            });
        }
        for (k, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => out.set_negative(k, true),
                _ => return Err(Error::Parse(format!("sign entry {s} is not +1 or -1"))),
            }
        }
        Ok(out)
    }

    /// Parses the `+`/`-` text form, e.g. `"++-"` for `n = 3, m = 2`.
    pub fn parse(n: usize, m: usize, text: &str) -> Result<Self> {
        let mut out = Self::all_positive(n, m)?;
        let chars: Vec<char> = text.trim().chars().collect();
        if chars.len() != out.len() {
            return Err(Error::Parse(format!(
                "sign string {text:?} has length {}, expected C({n},{m}) = {}",
                chars.len(),
                out.len()
            )));
        }
        for (k, c) in chars.into_iter().enumerate() {
            match c {
                '+' => {}
                '-' => out.set_negative(k, true),
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in sign string"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Entry `k` is negative iff bit `k` of `mask` is set (LSB = entry 0).
    /// Only for vectors of at most 64 entries.
    pub fn from_mask(n: usize, m: usize, mask: u64) -> Result<Self> {
        let mut out = Self::all_positive(n, m)?;
        if out.len() > 64 || (out.len() < 64 && mask >> out.len() != 0) {
            return Err(Error::OutOfRange(format!(
                "mask {mask:#x} does not fit {} entries",
                out.len()
            )));
        }
        for k in 0..out.len() {
            out.set_negative(k, mask >> k & 1 == 1);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_negative(&self, k: usize) -> bool {
        let (w, bit) = slot(k);
        self.words[w] & bit != 0
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn get(&self, k: usize) -> i8 {
        if self.is_negative(k) {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn set_negative(&mut self, k: usize, negative: bool) {
        let (w, bit) = slot(k);
        if negative {
            self.words[w] |= bit;
        } else {
            self.words[w] &= !bit;
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|k| self.get(k)).collect()
    }

    pub fn negated(&self) -> SignVector {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_padding();
        out
    }

    fn clear_padding(&mut self) {
        let used = self.len() % 64;
        if used != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= !0u64 << (64 - used);
        }
    }

    pub fn same_shape(&self, other: &SignVector) -> bool {
        self.n == other.n && self.m == other.m
    }

    pub fn indexer(&self) -> SubsetIndexer {
        SubsetIndexer::new(self.n(), self.m()).expect("valid by construction")
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = (0..self.len())
            .map(|k| if self.is_negative(k) { '-' } else { '+' })
            .collect();
        f.write_str(&text)
    }
}

/// A sign vector taken modulo global negation, stored by its representative
/// with leading `+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum(SignVector);

impl Stratum {
    pub fn canonical(&self) -> &SignVector {
        &self.0
    }

    pub fn into_inner(self) -> SignVector {
        self.0
    }

    pub fn parse(n: usize, m: usize, text: &str) -> Result<Self> {
        Ok(canonicalize(SignVector::parse(n, m, text)?))
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn canonicalize(s: SignVector) -> Stratum {
    if !s.is_empty() && s.is_negative(0) {
        Stratum(s.negated())
    } else {
        Stratum(s)
    }
}

/// Sign of every maximal minor of a totally nonzero matrix.
pub fn sign_vector<T: Scalar>(matrix: &Matrix<T>) -> Result<SignVector> {
    let indexer = SubsetIndexer::new(matrix.n(), matrix.m())?;
    let mut out = SignVector::all_positive(matrix.n(), matrix.m())?;
    for (k, subset) in indexer.subsets().enumerate() {
        match matrix.minor_unchecked(&subset).sign() {
            Sign::Zero => return Err(Error::ZeroMinor { subset }),
            Sign::Negative => out.set_negative(k, true),
            Sign::Positive => {}
        }
    }
    Ok(out)
}

/// Necessary condition for a sign vector to be realized: for every
/// `(m-2)`-subset `S` and `a < b < c < d` outside `S`, the relation
/// `Δ(Sac)Δ(Sbd) = Δ(Sab)Δ(Scd) + Δ(Sad)Δ(Sbc)` must be satisfiable in signs.
/// Sorting each index set introduces the same sign in all three products,
/// so the relation can be read directly on sorted subsets.
///
/// Vacuously true when no such quadruple exists (`m < 2` or `n < m + 2`).
pub fn three_term_feasible(s: &SignVector) -> bool {
    first_three_term_violation(s).is_none()
}

/// The first violated relation, as `(S, [a, b, c, d])` (1-based).
pub fn first_three_term_violation(s: &SignVector) -> Option<(Vec<usize>, [usize; 4])> {
    let (n, m) = (s.n(), s.m());
    if m < 2 || n < m + 2 {
        return None;
    }
    let indexer = s.indexer();
    let mut buf = Vec::with_capacity(m);
    let mut entry = |base: &[usize], x: usize, y: usize| -> bool {
        buf.clear();
        buf.extend_from_slice(base);
        buf.push(x);
        buf.push(y);
        buf.sort_unstable();
        s.is_negative(indexer.rank_unchecked(&buf))
    };
    for base in combinations(n, m - 2) {
        let rest: Vec<usize> = (1..=n).filter(|i| !base.contains(i)).collect();
        for quad in combinations(rest.len(), 4) {
            let [a, b, c, d] = [0, 1, 2, 3].map(|i| rest[quad[i] - 1]);
            // `true` = negative product
            let lhs = entry(&base, a, c) ^ entry(&base, b, d);
            let r1 = entry(&base, a, b) ^ entry(&base, c, d);
            let r2 = entry(&base, a, d) ^ entry(&base, b, c);
            if r1 == r2 && r1 != lhs {
                return Some((base, [a, b, c, d]));
            }
        }
    }
    None
}

/// All sorted k-subsets of [n], including the empty subset when k = 0.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    SubsetIndexer::new(n, k)
        .expect("1 <= k <= n")
        .subsets()
        .collect()
}

/// Searches for a relabeling `σ` with
/// `canonicalize(act(σ, sign_vector(b))) == canonicalize(sign_vector(a))`,
/// i.e. the two generic arrangements are isomorphic.
pub fn arrangement_isomorphic<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<Option<PlainPerm>> {
    if a.m() != b.m() || a.n() != b.n() {
        return Err(Error::SizeMismatch {
            expected: format!("{}x{}", a.m(), a.n()),
            found: format!("{}x{}", b.m(), b.n()),
        });
    }
    let target = sign_vector(a)?;
    let source = sign_vector(b)?;
    Ok(find_relabeling(&target, &source))
}

/// Depth-first search over relabelings; position `i` is filled with a column
/// of `source` and every subset closed by that choice is checked at once.
pub fn find_relabeling(target: &SignVector, source: &SignVector) -> Option<PlainPerm> {
    assert!(target.same_shape(source), "sign vectors of different shape");
    let (n, m) = (target.n(), target.m());
    let indexer = target.indexer();
    // closing[k] = (rank of I, positions of I) for every I whose largest element is k
    let closing: Vec<Vec<(usize, Vec<usize>)>> = (0..n)
        .map(|k| {
            combinations(k, m - 1)
                .into_iter()
                .map(|mut head| {
                    head.push(k + 1);
                    (indexer.rank_unchecked(&head), head)
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        target: &'a SignVector,
        source: &'a SignVector,
        indexer: &'a SubsetIndexer,
        closing: &'a [Vec<(usize, Vec<usize>)>],
        flip: bool,
        pre: Vec<usize>,
        used: Vec<bool>,
        scratch: Vec<usize>,
    }

    impl Search<'_> {
        fn consistent(&mut self, k: usize) -> bool {
            for (rank, positions) in &self.closing[k] {
                self.scratch.clear();
                self.scratch
                    .extend(positions.iter().map(|&p| self.pre[p - 1]));
                let odd = sort_parity(&mut self.scratch);
                let value = self
                    .source
                    .is_negative(self.indexer.rank_unchecked(&self.scratch))
                    ^ odd;
                if value != (self.target.is_negative(*rank) ^ self.flip) {
                    return false;
                }
            }
            true
        }

        fn run(&mut self, k: usize) -> bool {
            let n = self.used.len();
            if k == n {
                return true;
            }
            for col in 1..=n {
                if self.used[col - 1] {
                    continue;
                }
                self.used[col - 1] = true;
                self.pre.push(col);
                if self.consistent(k) && self.run(k + 1) {
                    return true;
                }
                self.pre.pop();
                self.used[col - 1] = false;
            }
            false
        }
    }

    for flip in [false, true] {
        let mut search = Search {
            target,
            source,
            indexer: &indexer,
            closing: &closing,
            flip,
            pre: Vec::with_capacity(n),
            used: vec![false; n],
            scratch: Vec::with_capacity(m),
        };
        if search.run(0) {
            // pre[i] = σ^{-1}(i + 1)
            let mut images = vec![0; n];
            for (i, &col) in search.pre.iter().enumerate() {
                images[col - 1] = i + 1;
            }
            return Some(PlainPerm::new(images).expect("bijection by construction"));
        }
    }
    None
}

/// Sorts in place; returns whether the sorting permutation is odd.
pub(crate) fn sort_parity(values: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 1..values.len() {
        let mut j = i;
        while j > 0 && values[j - 1] > values[j] {
            values.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}
