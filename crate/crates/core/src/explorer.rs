//! Randomized witness search over integer matrices, with a persistent store
//! of discovered strata. For `m >= 3` the store is a lower bound on the set
//! of strata and its orbit counts are lower bounds too.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{orbit_partition, GroupKind, OrbitReport};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixFile};
use crate::pluecker::{canonicalize, sign_vector, three_term_feasible, Stratum};
use crate::rng::SampleRng;
use crate::subset::binomial;
use crate::RationalMatrix;

pub const DEFAULT_ENTRY_BOUND: u32 = 50;

const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub m: usize,
    pub n: usize,
    /// Entries are uniform integers in `[-entry_bound, entry_bound]`.
    pub entry_bound: u32,
    pub samples: u64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(m: usize, n: usize, samples: u64, seed: u64) -> Self {
        SampleConfig {
            m,
            n,
            entry_bound: DEFAULT_ENTRY_BOUND,
            samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::OutOfRange(format!(
                "need n >= m >= 1, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        if self.entry_bound == 0 {
            return Err(Error::OutOfRange("entry bound must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::OutOfRange("sample budget must be at least 1".into()));
        }
        if binomial(self.n, self.m) > u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "sign vector length",
                n: self.n,
                limit: 64,
            });
        }
        Ok(())
    }

    /// Whether every Bareiss intermediate fits in `i128`: minors of the
    /// samples are bounded by `(sqrt(m) B)^m` and the elimination multiplies
    /// two of them.
    fn fits_i128(&self) -> bool {
        let log2 = self.m as f64 * (self.m as f64).log2()
            + 2.0 * self.m as f64 * (self.entry_bound as f64).log2();
        log2 < 120.0
    }
}

/// The `m * n` entries of sample `k`, row-major, drawn from the stream
/// `(seed, k)`.
pub fn sample_entries(cfg: &SampleConfig, k: u64) -> Vec<i64> {
    let mut rng = SampleRng::new(cfg.seed, k);
    (0..cfg.m * cfg.n)
        .map(|_| rng.symmetric(cfg.entry_bound))
        .collect()
}

/// Sample `k` if it is totally nonzero, `None` otherwise.
pub fn sample_generic_matrix(cfg: &SampleConfig, k: u64) -> Option<RationalMatrix> {
    let m = RationalMatrix::from_integers(cfg.m, cfg.n, &sample_entries(cfg, k)).ok()?;
    m.is_totally_nonzero().then_some(m)
}

/// Stratum of sample `k`, or `None` when some minor vanishes.
pub fn sample_stratum(cfg: &SampleConfig, k: u64) -> Option<Stratum> {
    let entries = sample_entries(cfg, k);
    let s = if cfg.fits_i128() {
        let rows = entries
            .chunks(cfg.n)
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        sign_vector(&Matrix::<i128>::from_rows(rows).ok()?)
    } else {
        let rows = entries
            .chunks(cfg.n)
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        sign_vector(&Matrix::<BigInt>::from_rows(rows).ok()?)
    };
    s.ok().map(canonicalize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreEntry {
    pub witness: RationalMatrix,
    pub seed: u64,
    pub sample: u64,
}

/// Discovered strata keyed by canonical sign string, one witness each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataStore {
    m: usize,
    n: usize,
    found: BTreeMap<String, StoreEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreFile {
    m: usize,
    n: usize,
    strata: Vec<StoreRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreRecord {
    signs: String,
    witness: MatrixFile,
    seed: u64,
    sample: u64,
}

impl StrataStore {
    pub fn new(m: usize, n: usize) -> Self {
        StrataStore {
            m,
            n,
            found: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.found.is_empty()
    }

    pub fn contains(&self, t: &Stratum) -> bool {
        self.found.contains_key(&t.to_string())
    }

    pub fn get(&self, t: &Stratum) -> Option<&StoreEntry> {
        self.found.get(&t.to_string())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &StoreEntry)> {
        self.found.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Stored strata in key order.
    pub fn strata(&self) -> Vec<Stratum> {
        self.found
            .keys()
            .map(|k| Stratum::parse(self.n, self.m, k).expect("keys are validated"))
            .collect()
    }

    /// Inserts if absent after checking the witness; returns whether the
    /// stratum was new.
    pub fn insert(&mut self, entry: StoreEntry) -> Result<bool> {
        let key = self.check_entry(None, &entry)?;
        if self.found.contains_key(&key) {
            return Ok(false);
        }
        self.found.insert(key, entry);
        Ok(true)
    }

    /// Checks shape, genericity, key agreement and three-term feasibility;
    /// returns the key the witness produces.
    fn check_entry(&self, key: Option<&str>, entry: &StoreEntry) -> Result<String> {
        let w = &entry.witness;
        if (w.m(), w.n()) != (self.m, self.n) {
            return Err(Error::InvalidStore(format!(
                "witness is {}x{}, store is {}x{}",
                w.m(),
                w.n(),
                self.m,
                self.n
            )));
        }
        let s =
            sign_vector(w).map_err(|e| Error::InvalidStore(format!("witness rejected: {e}")))?;
        let t = canonicalize(s);
        let actual = t.to_string();
        if let Some(key) = key {
            if key != actual {
                return Err(Error::InvalidStore(format!(
                    "witness for {key} has signs {actual}"
                )));
            }
        }
        if !three_term_feasible(t.canonical()) {
            return Err(Error::InvalidStore(format!(
                "{actual} violates a three-term relation"
            )));
        }
        Ok(actual)
    }

    pub fn validate(&self) -> Result<()> {
        for (key, entry) in &self.found {
            self.check_entry(Some(key), entry)?;
        }
        Ok(())
    }

    /// Pretty JSON, strata in key order, trailing newline.
    pub fn to_json(&self) -> String {
        let file = StoreFile {
            m: self.m,
            n: self.n,
            strata: self
                .found
                .iter()
                .map(|(k, e)| StoreRecord {
                    signs: k.clone(),
                    witness: e.witness.to_file(),
                    seed: e.seed,
                    sample: e.sample,
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StoreFile = serde_json::from_str(text)?;
        if file.m == 0 || file.m > file.n {
            return Err(Error::InvalidStore(format!(
                "bad dimensions m = {}, n = {}",
                file.m, file.n
            )));
        }
        let mut store = StrataStore::new(file.m, file.n);
        for rec in file.strata {
            let entry = StoreEntry {
                witness: rec.witness.into_matrix()?,
                seed: rec.seed,
                sample: rec.sample,
            };
            store.check_entry(Some(&rec.signs), &entry)?;
            if store.found.insert(rec.signs.clone(), entry).is_some() {
                return Err(Error::InvalidStore(format!("duplicate key {}", rec.signs)));
            }
        }
        Ok(store)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExploreReport {
    /// Totally nonzero samples.
    pub accepted: u64,
    /// Samples with a vanishing minor.
    pub rejected: u64,
    /// Strata added to the store.
    pub new: usize,
    /// Distinct strata hit that were already stored.
    pub seen: usize,
}

/// Runs `cfg.samples` indices of the `cfg.seed` stream and records every
/// stratum not yet stored, keeping the lowest sample index as its witness.
/// The result depends only on `cfg` and the prior store.
pub fn explore(cfg: &SampleConfig, store: &mut StrataStore) -> Result<ExploreReport> {
    cfg.validate()?;
    if (store.m, store.n) != (cfg.m, cfg.n) {
        return Err(Error::SizeMismatch {
            expected: format!("store of shape {}x{}", cfg.m, cfg.n),
            found: format!("{}x{}", store.m, store.n),
        });
    }
    let chunks = cfg.samples.div_ceil(CHUNK);
    let (first, accepted) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<Stratum, u64> = HashMap::new();
            let mut accepted = 0u64;
            for k in c * CHUNK..((c + 1) * CHUNK).min(cfg.samples) {
                if let Some(t) = sample_stratum(cfg, k) {
                    accepted += 1;
                    local.entry(t).and_modify(|j| *j = (*j).min(k)).or_insert(k);
                }
            }
            (local, accepted)
        })
        .reduce(
            || (HashMap::new(), 0),
            |(mut a, na), (b, nb)| {
                for (t, k) in b {
                    a.entry(t).and_modify(|j| *j = (*j).min(k)).or_insert(k);
                }
                (a, na + nb)
            },
        );

    let mut report = ExploreReport {
        accepted,
        rejected: cfg.samples - accepted,
        ..Default::default()
    };
    let mut hits: Vec<(Stratum, u64)> = first.into_iter().collect();
    hits.sort_unstable();
    for (t, k) in hits {
        if store.contains(&t) {
            report.seen += 1;
            continue;
        }
        let witness = sample_generic_matrix(cfg, k)
            .ok_or_else(|| Error::Inconsistent(format!("sample {k} is not generic on replay")))?;
        let entry = StoreEntry {
            witness,
            seed: cfg.seed,
            sample: k,
        };
        if !store.insert(entry)? {
            return Err(Error::Inconsistent(format!(
                "replayed sample {k} changed stratum"
            )));
        }
        report.new += 1;
    }
    Ok(report)
}

/// Orbit partition of the stored strata. For `m >= 3` this is a lower bound
/// on the true number of classes.
pub fn classify_found(store: &StrataStore, group: GroupKind) -> Result<OrbitReport> {
    if store.is_empty() {
        return Err(Error::EmptyStore);
    }
    orbit_partition(&store.strata(), group, store.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::enumerate_strata_2d;

    #[test]
    fn samples_are_deterministic() {
        let cfg = SampleConfig::new(2, 3, 10, 11);
        assert_eq!(sample_entries(&cfg, 4), sample_entries(&cfg, 4));
        assert_ne!(sample_entries(&cfg, 4), sample_entries(&cfg, 5));
        let small = SampleConfig {
            entry_bound: 3,
            ..SampleConfig::new(2, 3, 10_000, 1)
        };
        let accepted: Vec<_> = (0..10_000)
            .filter_map(|k| sample_generic_matrix(&small, k))
            .collect();
        assert!(!accepted.is_empty());
        assert!(accepted.iter().all(|m| m.is_totally_nonzero()));
        for k in 0..200 {
            let fast = sample_stratum(&small, k);
            let exact =
                sample_generic_matrix(&small, k).map(|m| canonicalize(sign_vector(&m).unwrap()));
            assert_eq!(fast, exact);
        }
    }

    #[test]
    fn big_bound_takes_the_bigint_path() {
        let cfg = SampleConfig {
            entry_bound: u32::MAX,
            ..SampleConfig::new(4, 5, 10, 2)
        };
        assert!(!cfg.fits_i128());
        for k in 0..10 {
            let exact =
                sample_generic_matrix(&cfg, k).map(|m| canonicalize(sign_vector(&m).unwrap()));
            assert_eq!(sample_stratum(&cfg, k), exact);
        }
    }

    #[test]
    fn recovers_plane_strata() {
        let cfg = SampleConfig::new(2, 4, 20_000, 7);
        let mut store = StrataStore::new(2, 4);
        let report = explore(&cfg, &mut store).unwrap();
        assert_eq!(store.strata(), enumerate_strata_2d(4, false).unwrap());
        assert_eq!(report.new, 24);
        assert_eq!(report.accepted + report.rejected, 20_000);
        let again = explore(&cfg, &mut store).unwrap();
        assert_eq!((again.new, again.seen), (0, 24));
    }

    #[test]
    fn store_round_trip_and_validation() {
        let cfg = SampleConfig::new(3, 5, 2_000, 3);
        let mut store = StrataStore::new(3, 5);
        explore(&cfg, &mut store).unwrap();
        assert!(!store.is_empty());
        let text = store.to_json();
        let back = StrataStore::from_json(&text).unwrap();
        assert_eq!(back, store);
        assert_eq!(back.to_json(), text);

        let (key, _) = store.entries().next().unwrap();
        let mut other = key.to_string();
        let last = if other.pop() == Some('+') { '-' } else { '+' };
        other.push(last);
        let tampered = text.replacen(&format!("\"{key}\""), &format!("\"{other}\""), 1);
        assert!(StrataStore::from_json(&tampered).is_err());
        assert!(StrataStore::from_json("{\"m\":3,\"n\":5,\"strata\":[],\"x\":1}").is_err());
    }

    #[test]
    fn classify_rules() {
        assert!(matches!(
            classify_found(&StrataStore::new(3, 4), GroupKind::Symmetric),
            Err(Error::EmptyStore)
        ));
        let cfg = SampleConfig::new(3, 4, 5_000, 1);
        let mut store = StrataStore::new(3, 4);
        explore(&cfg, &mut store).unwrap();
        assert!(store
            .strata()
            .iter()
            .all(|t| three_term_feasible(t.canonical())));
        assert_eq!(
            classify_found(&store, GroupKind::Hyperoctahedral)
                .unwrap()
                .orbit_count,
            1
        );
        assert!(explore(&cfg, &mut StrataStore::new(2, 4)).is_err());
        assert!(SampleConfig::new(3, 2, 1, 0).validate().is_err());
        assert!(SampleConfig::new(2, 3, 0, 0).validate().is_err());
    }
}
