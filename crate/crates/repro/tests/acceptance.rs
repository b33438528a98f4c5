//! Acceptance criteria, one line per criterion. Each check recomputes its
//! expected values with an oracle local to this file where one exists.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;

use tnz_core::counting::{
    count_generic_orbits_burnside, count_generic_orbits_closed_form, fixed_point_count,
    fixed_point_count_bruteforce, orbit_partition, GroupKind,
};
use tnz_core::explorer::{classify_found, explore, SampleConfig, StrataStore};
use tnz_core::perm::{
    act_perm_on_sign_vector, act_reflection_on_sign_vector, act_signed_perm_on_sign_vector,
    coset_reps, PlainPerm, SignedPerm,
};
use tnz_core::plane::{
    enumerate_orientation_vectors_2d, enumerate_strata_2d, sign_lemma_violation,
};
use tnz_core::pluecker::three_term_feasible;
use tnz_core::rng::SampleRng;
use tnz_core::{canonicalize, sign_vector, Matrix, RationalMatrix, SignVector, Stratum};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn criterion_1() -> Outcome {
    let expected = [1u64, 4, 24, 192, 1920, 23040, 322560];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut last = Duration::ZERO;
    for (n, &e) in (2u64..=8).zip(&expected) {
        assert_eq!(e, (1 << (n - 2)) * factorial(n - 1));
        let start = Instant::now();
        let found = enumerate_strata_2d(n as usize, false).unwrap().len() as u64;
        last = start.elapsed();
        ok &= found == e;
        parts.push(format!("{found}"));
    }
    ok &= last < Duration::from_secs(60);
    (
        ok,
        format!(
            "counts {} ; n=8 took {:.2}s",
            parts.join(","),
            last.as_secs_f64()
        ),
    )
}

fn transpose(a: &[Vec<i8>]) -> Vec<Vec<i8>> {
    (0..a.len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

fn mul(a: &[Vec<i8>], b: &[Vec<i8>]) -> Vec<Vec<i8>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=7usize {
        let standard: Vec<Vec<i8>> = (0..n)
            .map(|i| (0..n).map(|j| (j as i8 - i as i8).signum()).collect())
            .collect();
        let mut seen = HashSet::new();
        for p in coset_reps(n).unwrap() {
            let pm = p.to_matrix();
            // signed permutation matrices are orthogonal
            seen.insert(mul(&mul(&pm, &standard), &transpose(&pm)));
        }
        let expected = (1u64 << (n - 1)) * factorial(n as u64 - 1);
        let library = enumerate_orientation_vectors_2d(n, false).unwrap().len();
        ok &= seen.len() as u64 == expected && library == seen.len();
        parts.push(format!("{}", seen.len()));
    }
    (ok, format!("distinct conjugates {}", parts.join(",")))
}

/// `ζ` on bitmasks: bit `k` set means `d_{k+1} = -1`.
fn zeta_mask(n: usize, mask: u64) -> u64 {
    let full = (1u64 << n) - 1;
    ((mask << 1) & full) | (1 ^ (mask >> (n - 1) & 1))
}

fn criterion_3() -> Outcome {
    let mut bad = 0;
    let mut pairs = 0;
    for n in 1..=12usize {
        for i in 0..2 * n as u64 {
            let oracle = (0u64..1 << n)
                .filter(|&d| (0..i).fold(d, |x, _| zeta_mask(n, x)) == d)
                .count() as u64;
            let closed = fixed_point_count(n, i).unwrap();
            let scan = fixed_point_count_bruteforce(n, i, false).unwrap();
            pairs += 1;
            if closed != big(oracle) || scan != big(oracle) {
                bad += 1;
            }
        }
    }
    (
        bad == 0,
        format!("{pairs} (n,i) pairs, {bad} disagreements"),
    )
}

fn criterion_4() -> Outcome {
    let sequence = [1u64, 2, 2, 4, 6, 10, 16, 30, 52];
    let mut ok = true;
    for (n, &e) in (2..=10).zip(&sequence) {
        ok &= count_generic_orbits_closed_form(n).unwrap() == big(e);
    }
    let mut parts = Vec::new();
    for n in 2..=8 {
        let closed = count_generic_orbits_closed_form(n).unwrap();
        let burnside = count_generic_orbits_burnside(n).unwrap();
        let strata = enumerate_strata_2d(n, false).unwrap();
        let bfs = orbit_partition(&strata, GroupKind::Symmetric, n)
            .unwrap()
            .orbit_count;
        ok &= closed == burnside && closed == big(bfs as u64);
        parts.push(format!("n={n}:{closed}/{burnside}/{bfs}"));
    }
    (
        ok,
        format!("closed/burnside/S_n-orbits {}", parts.join(" ")),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=8 {
        let strata = enumerate_strata_2d(n, false).unwrap();
        let report = orbit_partition(&strata, GroupKind::Hyperoctahedral, n).unwrap();
        ok &= report.orbit_count == 1 && report.closure_sizes == vec![strata.len()];
        parts.push(format!("{}", report.orbit_count));
    }
    (ok, format!("orbit counts {}", parts.join(",")))
}

fn random_columns(rng: &mut SampleRng, n: usize) -> Vec<(i64, i64)> {
    loop {
        let cols: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.symmetric(50), rng.symmetric(50)))
            .collect();
        let generic =
            (0..n).all(|i| (i + 1..n).all(|j| cols[i].0 * cols[j].1 - cols[i].1 * cols[j].0 != 0));
        if generic {
            return cols;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = SampleRng::new(6, 0);
    let mut violations = 0;
    let mut library_violations = 0;
    let mut total = 0;
    for n in 2..=8 {
        for _ in 0..1000 {
            let cols = random_columns(&mut rng, n);
            let up: Vec<(i64, i64)> = cols
                .iter()
                .map(|&(x, y)| {
                    if y < 0 || (y == 0 && x < 0) {
                        (-x, -y)
                    } else {
                        (x, y)
                    }
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| (up[b].0 * up[a].1 - up[b].1 * up[a].0).cmp(&0));
            let sorted: Vec<(i64, i64)> = order.iter().map(|&c| cols[c]).collect();
            let a: Vec<i64> = sorted
                .iter()
                .enumerate()
                .map(|(k, &(x, y))| {
                    let s = if k == 0 && y == 0 {
                        x.signum()
                    } else {
                        y.signum()
                    };
                    s * (k as i64 + 1)
                })
                .collect();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let det = sorted[i].0 * sorted[j].1 - sorted[i].1 * sorted[j].0;
                    if det.signum() != (a[i] * a[j] * (j as i64 - i as i64)).signum() {
                        violations += 1;
                    }
                }
            }
            let flat: Vec<i64> = cols
                .iter()
                .map(|c| c.0)
                .chain(cols.iter().map(|c| c.1))
                .collect();
            let m = RationalMatrix::from_integers(2, n, &flat).unwrap();
            if sign_lemma_violation(&m).unwrap().is_some() {
                library_violations += 1;
            }
            total += 1;
        }
    }
    (
        violations == 0 && library_violations == 0,
        format!("{total} witnesses, {violations} pair violations, {library_violations} library violations"),
    )
}

/// `M P^{-1}` assembled column by column.
fn transform(w: &RationalMatrix, p: &SignedPerm) -> RationalMatrix {
    let n = w.n();
    let mut cols = vec![Vec::new(); n];
    for (j, &a) in p.entries().iter().enumerate() {
        cols[a.unsigned_abs() as usize - 1] = w
            .column(j)
            .into_iter()
            .map(|x: BigRational| if a < 0 { -x } else { x })
            .collect();
    }
    Matrix::from_columns(cols).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = SampleRng::new(7, 0);
    let mut mismatches = 0;
    let mut total = 0;
    for m in 2..=3 {
        for n in m..=7 {
            for _ in 0..1000 {
                let w = loop {
                    let vals: Vec<i64> = (0..m * n).map(|_| rng.symmetric(50)).collect();
                    let w = RationalMatrix::from_integers(m, n, &vals).unwrap();
                    if w.is_totally_nonzero() {
                        break w;
                    }
                };
                let s = sign_vector(&w).unwrap();
                let p = SignedPerm::random(n, &mut rng);
                let (sigma, d) = p.factor();
                let plain = sigma.to_signed();
                let reflect = SignedPerm::from_parts(&PlainPerm::identity(n), &d).unwrap();
                let agree = act_signed_perm_on_sign_vector(&p, &s).unwrap()
                    == sign_vector(&transform(&w, &p)).unwrap()
                    && act_perm_on_sign_vector(&sigma, &s).unwrap()
                        == sign_vector(&transform(&w, &plain)).unwrap()
                    && act_reflection_on_sign_vector(&d, &s).unwrap()
                        == sign_vector(&transform(&w, &reflect)).unwrap();
                total += 1;
                if !agree {
                    mismatches += 1;
                }
            }
        }
    }
    (
        mismatches == 0,
        format!("{total} witnesses, {mismatches} mismatches"),
    )
}

fn criterion_8() -> Outcome {
    // lex order of 2-subsets of [4]: 12 13 14 23 24 34
    let mut oracle = Vec::new();
    let mut library_agrees = true;
    for mask in 0u64..64 {
        let s: Vec<i8> = (0..6)
            .map(|k| if mask >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        if s[0] != 1 {
            continue;
        }
        let (lhs, r1, r2) = (s[1] * s[4], s[0] * s[5], s[2] * s[3]);
        let feasible = !(r1 == r2 && r1 != lhs);
        let v = SignVector::from_signs(4, 2, &s).unwrap();
        library_agrees &= three_term_feasible(&v) == feasible;
        oracle.push((v, feasible));
    }
    let feasible: Vec<Stratum> = oracle
        .iter()
        .filter(|(_, f)| *f)
        .map(|(v, _)| canonicalize(v.clone()))
        .collect();
    let strata = enumerate_strata_2d(4, false).unwrap();
    let mut sorted = feasible.clone();
    sorted.sort();
    let ok = oracle.len() == 32 && feasible.len() == 24 && library_agrees && sorted == strata;
    (
        ok,
        format!(
            "{} of {} canonical vectors feasible, enumeration {}",
            feasible.len(),
            oracle.len(),
            strata.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let mut store = StrataStore::new(2, n);
        explore(&SampleConfig::new(2, n, 100_000, 9), &mut store).unwrap();
        let full = store.strata() == enumerate_strata_2d(n, false).unwrap();
        ok &= full;
        parts.push(format!("(2,{n}) {} strata", store.len()));
    }
    for (n, samples) in [(3, 100_000), (4, 100_000), (5, 100_000), (6, 1_000_000)] {
        let mut store = StrataStore::new(3, n);
        explore(&SampleConfig::new(3, n, samples, 9), &mut store).unwrap();
        let orbits = classify_found(&store, GroupKind::Hyperoctahedral)
            .unwrap()
            .orbit_count;
        ok &= if n == 6 { orbits >= 2 } else { orbits == 1 };
        parts.push(format!("(3,{n}) {} strata {orbits} orbits", store.len()));
    }
    (ok, parts.join("; "))
}

fn criterion_10() -> Outcome {
    let cfg = SampleConfig::new(3, 6, 5_000, 10);
    let dir = std::env::temp_dir().join(format!("tnz-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bytes: Vec<Vec<u8>> = (0..2)
        .map(|run| {
            let mut store = StrataStore::new(3, 6);
            explore(&cfg, &mut store).unwrap();
            let path = dir.join(format!("store{run}.json"));
            std::fs::write(&path, store.to_json()).unwrap();
            std::fs::read(&path).unwrap()
        })
        .collect();
    std::fs::remove_dir_all(&dir).ok();
    let same = bytes[0] == bytes[1];
    (
        same,
        format!("{} bytes per store, identical: {same}", bytes[0].len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("strata count", criterion_1),
        ("orientation-matrix count", criterion_2),
        ("fixed-point theorem", criterion_3),
        ("orbit counts", criterion_4),
        ("transitivity", criterion_5),
        ("sign lemma", criterion_6),
        ("action/oracle agreement", criterion_7),
        ("three-term exactness", criterion_8),
        ("explorer consistency", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match std::panic::catch_unwind(check) {
            Ok(r) => r,
            Err(_) => (false, "panicked".to_string()),
        };
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1
        );
        if !ok {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
