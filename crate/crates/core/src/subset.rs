//! Lexicographic indexing of the m-subsets of {1, ..., n}.

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// `{1,3}` style rendering, used in error messages.
pub fn format_subset(subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Bijection between sorted m-subsets of `[n]` (1-based) and
/// `0..C(n, m)` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetIndexer {
    n: usize,
    m: usize,
    len: usize,
    // table[a][b] = C(a, b)
    table: Vec<Vec<usize>>,
}

impl SubsetIndexer {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::OutOfRange(format!(
                "subset size m = {m} must satisfy 1 <= m <= n = {n}"
            )));
        }
        let table = (0..=n)
            .map(|a| (0..=m).map(|b| binomial(a, b)).collect())
            .collect();
        Ok(SubsetIndexer {
            n,
            m,
            len: binomial(n, m),
            table,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of subsets, `C(n, m)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn check(&self, subset: &[usize]) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidSubset {
                subset: subset.to_vec(),
                reason: reason.to_string(),
            })
        };
        if subset.len() != self.m {
            return bad(&format!("expected {} elements", self.m));
        }
        if subset.iter().any(|&i| i == 0 || i > self.n) {
            return bad(&format!("elements must lie in 1..={}", self.n));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return bad("elements must be strictly increasing");
        }
        Ok(())
    }

    pub fn rank(&self, subset: &[usize]) -> Result<usize> {
        self.check(subset)?;
        Ok(self.rank_unchecked(subset))
    }

    /// Rank of a sorted, in-range subset. No validation.
    pub fn rank_unchecked(&self, subset: &[usize]) -> usize {
        let (n, m) = (self.n, self.m);
        let mut rank = 0;
        let mut prev = 0; // last chosen element, 1-based; 0 = none yet
        for (j, &c) in subset.iter().enumerate() {
            // subsets whose j-th element is x in (prev, c) come first
            for x in prev + 1..c {
                rank += self.table[n - x][m - j - 1];
            }
            prev = c;
        }
        rank
    }

    pub fn unrank(&self, rank: usize) -> Result<Vec<usize>> {
        if rank >= self.len {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.len,
            });
        }
        let (n, m) = (self.n, self.m);
        let mut out = Vec::with_capacity(m);
        let mut rest = rank;
        let mut x = 1;
        for j in 0..m {
            loop {
                let block = self.table[n - x][m - j - 1];
                if rest < block {
                    break;
                }
                rest -= block;
                x += 1;
            }
            out.push(x);
            x += 1;
        }
        Ok(out)
    }

    /// All subsets in rank order.
    pub fn subsets(&self) -> SubsetIter {
        SubsetIter {
            n: self.n,
            current: Some((1..=self.m).collect()),
        }
    }
}

/// Lexicographic successor iteration over sorted m-subsets of `[n]`.
pub struct SubsetIter {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for SubsetIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let m = out.len();
        let mut next = out.clone();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (m - 1 - i) {
                next[i] += 1;
                for j in i + 1..m {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
