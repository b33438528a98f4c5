//! Closed-form counts, their Burnside and brute-force cross-checks, and
//! orbit partitions of strata under `S_n` and the hyperoctahedral group.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::{PlainPerm, ReflectionVector, SignAction, SignedPerm};
use crate::pluecker::{canonicalize, SignVector, Stratum};
use crate::subset::SubsetIndexer;

/// Largest `n` scanned by the brute-force fixed-point oracle without override.
pub const BRUTE_FORCE_LIMIT: usize = 20;
/// Hard ceiling for the brute-force scan.
pub const BRUTE_FORCE_HARD_LIMIT: usize = 28;

/// A point `d ∈ {±1}^n` acted on by the cyclic group of order `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZetaState(Vec<i8>);

impl ZetaState {
    pub fn new(d: Vec<i8>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::Parse("state entries must be +1 or -1".into()));
        }
        Ok(ZetaState(d))
    }

    /// State whose entry `i` is `-1` exactly when bit `i` of `mask` is set.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        ZetaState(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }
}

/// `ζ^i · d`, where `ζ · (d_1, ..., d_n) = (-d_n, d_1, ..., d_{n-1})`.
pub fn zeta_apply(i: u64, d: &ZetaState) -> ZetaState {
    let n = d.n();
    let steps = i % (2 * n as u64);
    let mut cur = d.0.clone();
    for _ in 0..steps {
        let last = cur[n - 1];
        cur.rotate_right(1);
        cur[0] = -last;
    }
    ZetaState(cur)
}

fn check_zeta_range(n: usize, i: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    if i >= 2 * n as u64 {
        return Err(Error::OutOfRange(format!("i = {i} outside 0..{}", 2 * n)));
    }
    Ok(())
}

/// Number of states fixed by `ζ^i`: `2^n` for `i = 0`, `2^{gcd(i, n)}` when
/// `i` is a nonzero multiple of `2^{l+1}` where `2^l` exactly divides `n`,
/// and `0` otherwise.
pub fn fixed_point_count(n: usize, i: u64) -> Result<BigUint> {
    check_zeta_range(n, i)?;
    if i == 0 {
        return Ok(BigUint::one() << n);
    }
    let l = n.trailing_zeros();
    if i.is_multiple_of(1u64 << (l + 1)) {
        Ok(BigUint::one() << i.gcd(&(n as u64)))
    } else {
        Ok(BigUint::zero())
    }
}

/// Fixed points of `ζ^i` by scanning all `2^n` states.
pub fn fixed_point_count_bruteforce(n: usize, i: u64, allow_large: bool) -> Result<BigUint> {
    check_zeta_range(n, i)?;
    let limit = if allow_large {
        BRUTE_FORCE_HARD_LIMIT
    } else {
        BRUTE_FORCE_LIMIT
    };
    if n > limit {
        return Err(Error::TooLarge {
            what: "fixed-point scan",
            n,
            limit,
        });
    }
    let count = (0u64..1 << n)
        .filter(|&mask| {
            let d = ZetaState::from_mask(n, mask);
            zeta_apply(i, &d) == d
        })
        .count();
    Ok(BigUint::from(count))
}

/// `2^{n-2} (n-1)!`, the number of strata of `Gr^tnz(2, n)`.
pub fn count_strata_2d(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    Ok(factorial(n - 1) << (n - 2))
}

/// `2^{n-1} (n-1)!`, the number of orientation sign matrices.
pub fn count_orientation_matrices_2d(n: usize) -> Result<BigUint> {
    Ok(count_strata_2d(n)? << 1)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Euler's totient by trial division.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn exact_div(sum: BigUint, divisor: u64, what: &str) -> Result<BigUint> {
    let (q, r) = sum.div_rem(&BigUint::from(divisor));
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!(
            "{what}: sum is not divisible by {divisor}"
        )));
    }
    Ok(q)
}

/// `(1/2n) Σ_{k | n, k odd} φ(k) 2^{n/k}`.
pub fn count_generic_orbits_closed_form(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let sum = (1..=n as u64)
        .step_by(2)
        .filter(|&k| (n as u64).is_multiple_of(k))
        .map(|k| BigUint::from(totient(k)) << (n as u64 / k))
        .fold(BigUint::zero(), |acc, x| acc + x);
    exact_div(sum, 2 * n as u64, "totient sum")
}

/// Burnside over the `ζ`-action: the average number of fixed points.
pub fn count_generic_orbits_burnside(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let mut sum = BigUint::zero();
    for i in 0..2 * n as u64 {
        sum += fixed_point_count(n, i)?;
    }
    exact_div(sum, 2 * n as u64, "Burnside sum")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Column permutations.
    Symmetric,
    /// Column permutations and column negations.
    Hyperoctahedral,
}

impl GroupKind {
    pub fn order(self, n: usize) -> BigUint {
        match self {
            GroupKind::Symmetric => factorial(n),
            GroupKind::Hyperoctahedral => factorial(n) << n,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Symmetric => "sn",
            GroupKind::Hyperoctahedral => "hyper",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sn" | "S_n" | "symmetric" => Ok(GroupKind::Symmetric),
            "hyper" | "hyperoctahedral" => Ok(GroupKind::Hyperoctahedral),
            other => Err(Error::Parse(format!("unknown group `{other}`"))),
        }
    }
}

/// Orbits of a set of strata. Orbits are listed by their smallest input
/// member. `orbit_sizes[k]` counts the input strata in orbit `k`;
/// `closure_sizes[k]` is the full size of that orbit. The two agree when the
/// input is closed under the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub group: GroupKind,
    pub n: usize,
    pub m: usize,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    pub closure_sizes: Vec<usize>,
    pub representatives: Vec<Stratum>,
}

impl OrbitReport {
    pub fn is_closed(&self) -> bool {
        self.orbit_sizes == self.closure_sizes
    }
}

fn generators(group: GroupKind, indexer: &SubsetIndexer) -> Vec<SignAction> {
    let n = indexer.n();
    let mut gens: Vec<_> = (1..n)
        .map(|i| PlainPerm::adjacent_transposition(n, i).to_signed())
        .collect();
    if group == GroupKind::Hyperoctahedral {
        gens.extend((1..=n).map(|i| {
            SignedPerm::from_parts(&PlainPerm::identity(n), &ReflectionVector::single(n, i))
                .expect("same size")
        }));
    }
    gens.iter()
        .map(|g| SignAction::new(g, indexer).expect("generator matches shape"))
        .collect()
}

/// Orbit id of every vector reachable from `seeds`, found by breadth-first
/// closure under the generator actions. `normalize` maps a vector to its
/// class key (identity for sign vectors, canonicalization for strata).
fn closure<K, F>(
    seeds: &[SignVector],
    gens: &[SignAction],
    normalize: F,
) -> (HashMap<K, usize>, Vec<usize>)
where
    K: std::hash::Hash + Eq + Clone + AsRef<SignVector>,
    F: Fn(SignVector) -> K,
{
    let mut orbit_of: HashMap<K, usize> = HashMap::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for seed in seeds {
        let key = normalize(seed.clone());
        if orbit_of.contains_key(&key) {
            continue;
        }
        let id = sizes.len();
        let mut size = 1;
        orbit_of.insert(key.clone(), id);
        queue.push_back(key);
        while let Some(cur) = queue.pop_front() {
            for g in gens {
                let next = normalize(g.apply_unchecked(cur.as_ref()));
                if !orbit_of.contains_key(&next) {
                    orbit_of.insert(next.clone(), id);
                    queue.push_back(next);
                    size += 1;
                }
            }
        }
        sizes.push(size);
    }
    (orbit_of, sizes)
}

impl AsRef<SignVector> for Stratum {
    fn as_ref(&self) -> &SignVector {
        self.canonical()
    }
}

impl AsRef<SignVector> for SignVector {
    fn as_ref(&self) -> &SignVector {
        self
    }
}

fn common_shape<'a>(items: impl Iterator<Item = &'a SignVector>) -> Result<Option<(usize, usize)>> {
    let mut shape = None;
    for s in items {
        match shape {
            None => shape = Some((s.m(), s.n())),
            Some((m, n)) if (m, n) == (s.m(), s.n()) => {}
            Some((m, n)) => {
                return Err(Error::SizeMismatch {
                    expected: format!("(m, n) = ({m}, {n})"),
                    found: format!("({}, {})", s.m(), s.n()),
                })
            }
        }
    }
    Ok(shape)
}

/// Partitions `strata` into orbits of `group`.
pub fn orbit_partition(strata: &[Stratum], group: GroupKind, n: usize) -> Result<OrbitReport> {
    let shape = common_shape(strata.iter().map(Stratum::canonical))?;
    let m = match shape {
        None => {
            return Ok(OrbitReport {
                group,
                n,
                m: 0,
                orbit_count: 0,
                orbit_sizes: vec![],
                closure_sizes: vec![],
                representatives: vec![],
            })
        }
        Some((m, found)) if found == n => m,
        Some((_, found)) => {
            return Err(Error::SizeMismatch {
                expected: format!("n = {n}"),
                found: format!("n = {found}"),
            })
        }
    };
    let mut sorted: Vec<Stratum> = strata.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let gens = generators(group, &SubsetIndexer::new(n, m)?);
    let seeds: Vec<SignVector> = sorted.iter().map(|t| t.canonical().clone()).collect();
    let (orbit_of, closure_sizes) = closure(&seeds, &gens, canonicalize);

    let mut orbit_sizes = vec![0; closure_sizes.len()];
    let mut representatives: Vec<Option<Stratum>> = vec![None; closure_sizes.len()];
    for t in &sorted {
        let id = orbit_of[t];
        orbit_sizes[id] += 1;
        representatives[id].get_or_insert_with(|| t.clone());
    }
    Ok(OrbitReport {
        group,
        n,
        m,
        orbit_count: closure_sizes.len(),
        orbit_sizes,
        closure_sizes,
        representatives: representatives.into_iter().map(Option::unwrap).collect(),
    })
}

/// Orbit sizes of `S_n` acting on sign vectors themselves (no identification
/// with the negation), in order of each orbit's smallest member.
pub fn oriented_orbit_sizes(vectors: &[SignVector]) -> Result<Vec<usize>> {
    let Some((m, n)) = common_shape(vectors.iter())? else {
        return Ok(vec![]);
    };
    let mut sorted = vectors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let gens = generators(GroupKind::Symmetric, &SubsetIndexer::new(n, m)?);
    Ok(closure(&sorted, &gens, |s| s).1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{enumerate_orientation_vectors_2d, enumerate_strata_2d};
    use crate::rng::SampleRng;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn zeta_examples() {
        let d = ZetaState::new(vec![1, 1, 1]).unwrap();
        assert_eq!(zeta_apply(0, &d), d);
        assert_eq!(zeta_apply(1, &d).entries(), &[-1, 1, 1]);
        let mut rng = SampleRng::new(3, 0);
        for n in 1..=12 {
            let d = ZetaState::from_mask(n, rng.below(1 << n));
            let mut cur = d.clone();
            for _ in 0..2 * n {
                cur = zeta_apply(1, &cur);
            }
            assert_eq!(cur, d);
            assert_eq!(zeta_apply(2 * n as u64, &d), d);
        }
        assert!(ZetaState::new(vec![1, 0]).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_point_count(3, 0).unwrap(), b(8));
        assert_eq!(fixed_point_count(3, 2).unwrap(), b(2));
        for i in [1, 3, 5] {
            assert_eq!(fixed_point_count(3, i).unwrap(), b(0));
        }
        assert_eq!(fixed_point_count(4, 4).unwrap(), b(0));
        assert_eq!(fixed_point_count_bruteforce(4, 4, false).unwrap(), b(0));
        assert_eq!(fixed_point_count(4, 0).unwrap(), b(16));
        assert!(fixed_point_count(4, 8).is_err());
        assert!(fixed_point_count_bruteforce(21, 0, false).is_err());
    }

    #[test]
    fn fixed_points_match_scan() {
        for n in 1..=10 {
            for i in 0..2 * n as u64 {
                assert_eq!(
                    fixed_point_count(n, i).unwrap(),
                    fixed_point_count_bruteforce(n, i, false).unwrap(),
                    "n={n} i={i}"
                );
            }
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(count_strata_2d(2).unwrap(), b(1));
        assert_eq!(count_strata_2d(4).unwrap(), b(24));
        assert_eq!(count_orientation_matrices_2d(4).unwrap(), b(48));
        let expected = [1u64, 2, 2, 4, 6, 10, 16, 30, 52];
        for (n, &e) in (2..=10).zip(&expected) {
            assert_eq!(count_generic_orbits_closed_form(n).unwrap(), b(e));
        }
        for n in 2..=16 {
            assert_eq!(
                count_generic_orbits_burnside(n).unwrap(),
                count_generic_orbits_closed_form(n).unwrap()
            );
        }
        assert_eq!(
            [1, 2, 6, 9, 10, 12, 97].map(totient),
            [1, 1, 2, 6, 4, 4, 96]
        );
    }

    #[test]
    fn transitive_and_sizes_divide_group_order() {
        for n in 2..=6 {
            let strata = enumerate_strata_2d(n, false).unwrap();
            let hyper = orbit_partition(&strata, GroupKind::Hyperoctahedral, n).unwrap();
            assert_eq!(hyper.orbit_count, 1);
            let sn = orbit_partition(&strata, GroupKind::Symmetric, n).unwrap();
            assert!(sn.is_closed());
            assert_eq!(sn.orbit_sizes.iter().sum::<usize>(), strata.len());
            let order = GroupKind::Symmetric.order(n);
            for &s in &sn.closure_sizes {
                assert!((&order % s).is_zero());
            }
        }
    }

    #[test]
    fn oriented_orbits_follow_closed_form() {
        for n in 2..=6 {
            let vectors = enumerate_orientation_vectors_2d(n, false).unwrap();
            let sizes = oriented_orbit_sizes(&vectors).unwrap();
            assert_eq!(
                b(sizes.len() as u64),
                count_generic_orbits_closed_form(n).unwrap()
            );
        }
    }

    #[test]
    fn partial_input() {
        let strata = enumerate_strata_2d(4, false).unwrap();
        let one = orbit_partition(&strata[..1], GroupKind::Hyperoctahedral, 4).unwrap();
        assert_eq!(one.orbit_count, 1);
        assert_eq!(one.orbit_sizes, vec![1]);
        assert_eq!(one.closure_sizes, vec![24]);
        assert!(!one.is_closed());
        let trivial = Stratum::parse(2, 2, "+").unwrap();
        let r = orbit_partition(std::slice::from_ref(&trivial), GroupKind::Symmetric, 2).unwrap();
        assert_eq!((r.orbit_count, r.closure_sizes.clone()), (1, vec![1]));
        assert_eq!(r.representatives, vec![trivial]);
        assert!(orbit_partition(&strata, GroupKind::Symmetric, 5).is_err());
        assert_eq!(
            orbit_partition(&[], GroupKind::Symmetric, 3)
                .unwrap()
                .orbit_count,
            0
        );
    }

    #[test]
    fn group_names() {
        assert_eq!("sn".parse::<GroupKind>().unwrap(), GroupKind::Symmetric);
        assert_eq!(
            "hyper".parse::<GroupKind>().unwrap(),
            GroupKind::Hyperoctahedral
        );
        assert!("x".parse::<GroupKind>().is_err());
        assert_eq!(GroupKind::Hyperoctahedral.order(3), b(48));
    }
}
