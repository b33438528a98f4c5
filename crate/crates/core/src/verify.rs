//! The reproduction suite: one named check per acceptance criterion, each
//! deterministic and self-contained.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::counting::{
    count_generic_orbits_burnside, count_generic_orbits_closed_form, count_orientation_matrices_2d,
    count_strata_2d, fixed_point_count, fixed_point_count_bruteforce, orbit_partition,
    oriented_orbit_sizes, GroupKind,
};
use crate::error::Result;
use crate::explorer::{classify_found, explore, SampleConfig, StrataStore};
use crate::perm::{
    act_perm_on_sign_vector, act_reflection_on_sign_vector, act_signed_perm_on_sign_vector,
    PlainPerm, SignedPerm,
};
use crate::plane::{enumerate_orientation_vectors_2d, enumerate_strata_2d, sign_lemma_violation};
use crate::pluecker::{canonicalize, sign_vector, three_term_feasible, SignVector};
use crate::rng::SampleRng;
use crate::RationalMatrix;

pub const STRATA_COUNTS: [u64; 7] = [1, 4, 24, 192, 1920, 23040, 322560];
pub const ORBIT_COUNTS: [u64; 9] = [1, 2, 2, 4, 6, 10, 16, 30, 52];
pub const STRATA_TIME_LIMIT: Duration = Duration::from_secs(60);

const SUITE_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    run: fn() -> Result<(bool, String)>,
}

impl Check {
    pub fn run(&self) -> CheckResult {
        let (passed, detail) = match (self.run)() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CheckResult {
            id: self.id,
            description: self.description,
            passed,
            detail,
        }
    }
}

pub const CHECKS: [Check; 10] = [
    Check {
        id: "strata-count",
        description: "plane strata number 2^(n-2)(n-1)! for n = 2..8, n = 8 under 60 s",
        run: strata_count,
    },
    Check {
        id: "orientation-count",
        description:
            "conjugates of O_n over coset representatives number 2^(n-1)(n-1)! for n = 2..7",
        run: orientation_count,
    },
    Check {
        id: "fixed-points",
        description: "closed-form fixed points of the cyclic action match a full scan for n <= 12",
        run: fixed_points,
    },
    Check {
        id: "orbit-counts",
        description: "totient formula = Burnside = S_n orbits of plane strata for n = 2..8",
        run: orbit_counts,
    },
    Check {
        id: "transitivity",
        description: "the hyperoctahedral group acts transitively on plane strata for n = 2..8",
        run: transitivity,
    },
    Check {
        id: "sign-lemma",
        description:
            "orientation signs follow the combinatorial representation on random witnesses",
        run: sign_lemma,
    },
    Check {
        id: "action-oracle",
        description: "combinatorial actions agree with recomputed minors for m in {2,3}, n <= 7",
        run: action_oracle,
    },
    Check {
        id: "three-term",
        description:
            "exactly 24 of 32 canonical sign vectors at (2,4) satisfy the three-term relations",
        run: three_term,
    },
    Check {
        id: "explorer",
        description: "random search recovers plane strata and the known class counts for m = 3",
        run: explorer,
    },
    Check {
        id: "determinism",
        description: "identical explorer runs write byte-identical stores",
        run: determinism,
    },
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

pub fn find_check(id: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.id == id)
}

pub fn run_all() -> Vec<CheckResult> {
    CHECKS.iter().map(Check::run).collect()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn strata_count() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut elapsed = Duration::ZERO;
    for (n, &expected) in (2..=8).zip(&STRATA_COUNTS) {
        let start = Instant::now();
        let found = enumerate_strata_2d(n, false)?.len() as u64;
        elapsed = start.elapsed();
        ok &= found == expected && count_strata_2d(n)? == big(expected);
        parts.push(format!("n={n}:{found}"));
    }
    ok &= elapsed < STRATA_TIME_LIMIT;
    parts.push(format!("n=8 in {:.2}s", elapsed.as_secs_f64()));
    Ok((ok, parts.join(" ")))
}

fn orientation_count() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=7 {
        let found = enumerate_orientation_vectors_2d(n, false)?.len();
        ok &= big(found as u64) == count_orientation_matrices_2d(n)?;
        parts.push(format!("n={n}:{found}"));
    }
    Ok((ok, parts.join(" ")))
}

fn fixed_points() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=12 {
        for i in 0..2 * n as u64 {
            checked += 1;
            if fixed_point_count(n, i)? != fixed_point_count_bruteforce(n, i, false)? {
                bad.push(format!("(n={n},i={i})"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} pairs agree")
    } else {
        format!("{} of {checked} pairs differ: {}", bad.len(), bad.join(" "))
    };
    Ok((bad.is_empty(), detail))
}

fn orbit_counts() -> Result<(bool, String)> {
    let mut ok = true;
    for (n, &expected) in (2..=10).zip(&ORBIT_COUNTS) {
        ok &= count_generic_orbits_closed_form(n)? == big(expected);
    }
    let mut parts = Vec::new();
    for n in 2..=8 {
        let closed = count_generic_orbits_closed_form(n)?;
        let burnside = count_generic_orbits_burnside(n)?;
        let strata = enumerate_strata_2d(n, false)?;
        let bfs = orbit_partition(&strata, GroupKind::Symmetric, n)?.orbit_count;
        let oriented = oriented_orbit_sizes(&enumerate_orientation_vectors_2d(n, false)?)?.len();
        let agree = closed == burnside && closed == big(bfs as u64);
        ok &= agree;
        parts.push(format!(
            "n={n}:{closed}/{burnside}/{bfs}{}",
            if agree {
                String::new()
            } else {
                format!("(oriented {oriented})")
            }
        ));
    }
    Ok((ok, format!("closed/burnside/bfs {}", parts.join(" "))))
}

fn transitivity() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=8 {
        let strata = enumerate_strata_2d(n, false)?;
        let count = orbit_partition(&strata, GroupKind::Hyperoctahedral, n)?.orbit_count;
        ok &= count == 1;
        parts.push(format!("n={n}:{count}"));
    }
    Ok((ok, parts.join(" ")))
}

/// A totally nonzero `m x n` matrix with entries in `[-bound, bound]`.
pub fn random_witness(rng: &mut SampleRng, m: usize, n: usize, bound: u32) -> RationalMatrix {
    loop {
        let vals: Vec<i64> = (0..m * n).map(|_| rng.symmetric(bound)).collect();
        let w = RationalMatrix::from_integers(m, n, &vals).expect("shape");
        if w.is_totally_nonzero() {
            return w;
        }
    }
}

fn sign_lemma() -> Result<(bool, String)> {
    let mut rng = SampleRng::new(SUITE_SEED, 6);
    let mut violations = 0;
    let mut checked = 0;
    for n in 2..=8 {
        for _ in 0..1000 {
            let w = random_witness(&mut rng, 2, n, 50);
            checked += 1;
            if sign_lemma_violation(&w)?.is_some() {
                violations += 1;
            }
        }
    }
    Ok((
        violations == 0,
        format!("{violations} violations in {checked} witnesses"),
    ))
}

fn action_oracle() -> Result<(bool, String)> {
    let mut rng = SampleRng::new(SUITE_SEED, 7);
    let mut mismatches = 0;
    let mut checked = 0;
    for m in 2..=3 {
        for n in m..=7 {
            for _ in 0..1000 {
                let w = random_witness(&mut rng, m, n, 50);
                let s = sign_vector(&w)?;
                let p = SignedPerm::random(n, &mut rng);
                let (sigma, d) = p.factor();
                let moved = sign_vector(&w.transform_columns(&p)?)?;
                let permuted = sign_vector(&w.transform_columns(&sigma.to_signed())?)?;
                let reflected = sign_vector(
                    &w.transform_columns(&SignedPerm::from_parts(&PlainPerm::identity(n), &d)?)?,
                )?;
                checked += 1;
                let agree = act_signed_perm_on_sign_vector(&p, &s)? == moved
                    && act_perm_on_sign_vector(&sigma, &s)? == permuted
                    && act_reflection_on_sign_vector(&d, &s)? == reflected;
                if !agree {
                    mismatches += 1;
                }
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches in {checked} witnesses"),
    ))
}

fn three_term() -> Result<(bool, String)> {
    let canonical: Vec<SignVector> = (0u64..64)
        .map(|mask| SignVector::from_mask(4, 2, mask))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|s| !s.is_negative(0))
        .collect();
    let feasible: Vec<_> = canonical
        .iter()
        .filter(|s| three_term_feasible(s))
        .cloned()
        .map(canonicalize)
        .collect();
    let strata = enumerate_strata_2d(4, false)?;
    let mut sorted = feasible.clone();
    sorted.sort_unstable();
    let ok = canonical.len() == 32 && feasible.len() == 24 && sorted == strata;
    Ok((
        ok,
        format!(
            "{} of {} feasible, enumeration has {}",
            feasible.len(),
            canonical.len(),
            strata.len()
        ),
    ))
}

fn explorer() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let cfg = SampleConfig::new(2, n, 100_000, SUITE_SEED);
        let mut store = StrataStore::new(2, n);
        explore(&cfg, &mut store)?;
        let full = store.strata() == enumerate_strata_2d(n, false)?;
        ok &= full;
        parts.push(format!("m=2,n={n}:{}", store.len()));
    }
    for (n, samples) in [(3, 100_000), (4, 100_000), (5, 100_000), (6, 1_000_000)] {
        let cfg = SampleConfig::new(3, n, samples, SUITE_SEED);
        let mut store = StrataStore::new(3, n);
        explore(&cfg, &mut store)?;
        let orbits = classify_found(&store, GroupKind::Hyperoctahedral)?.orbit_count;
        ok &= if n == 6 { orbits >= 2 } else { orbits == 1 };
        parts.push(format!("m=3,n={n}:{} strata/{orbits} orbits", store.len()));
    }
    Ok((ok, parts.join(" ")))
}

fn determinism() -> Result<(bool, String)> {
    let cfg = SampleConfig::new(3, 5, 20_000, SUITE_SEED);
    let dir = std::env::temp_dir().join(format!("tnz-determinism-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for run in 0..2 {
        let mut store = StrataStore::new(3, 5);
        explore(&cfg, &mut store)?;
        let path = dir.join(format!("run{run}.json"));
        std::fs::write(&path, store.to_json())?;
        files.push(std::fs::read(&path)?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same = files[0] == files[1];
    Ok((same, format!("{} bytes, identical: {same}", files[0].len())))
}
