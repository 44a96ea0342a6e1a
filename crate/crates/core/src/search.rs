//! Greedy prime-set augmentation.
//!
//! A small first threshold `d_1` inflates `c`. Adding a prime factor of
//! `d_1` (or `d_2`) to `P` removes that crossing, so candidates are drawn
//! from those factors and ranked by the `d_1` a cheap bounded sweep predicts
//! for the enlarged set. The search is depth-first with backtracking.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Certificate, CertifyOptions, Verdict};
use crate::gsweep::{sweep, SweepMode};
use crate::numtheory::{is_prime, PrimeSet, DEFAULT_PRIME_SET_CAP};
use crate::ratioconfig::compile_prime_set;
use crate::{Error, Result};

/// Scan limit of the scoring sweep.
pub const DEFAULT_TRIAL_D: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest prime set that will be certified.
    pub max_primes: usize,
    /// Augmentations along one branch.
    pub max_depth: usize,
    /// Certifications over the whole search.
    pub max_nodes: usize,
    pub trial_d: u64,
    pub certify: CertifyOptions,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_primes: DEFAULT_PRIME_SET_CAP,
            max_depth: 2,
            max_nodes: 64,
            trial_d: DEFAULT_TRIAL_D,
            certify: CertifyOptions::default(),
        }
    }
}

/// A prime to add, with the `d_1` its trial sweep found (`None` when no
/// threshold lies within the trial range).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub prime: u64,
    pub trial_d1: Option<u64>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Ranked augmentation candidates for a certificate that does not hold.
pub fn augment_step(k: u64, p: &PrimeSet, cert: &Certificate, trial_d: u64) -> Result<Vec<Candidate>> {
    augment_candidates(k, p, cert, trial_d)
}

fn augment_candidates(k: u64, p: &PrimeSet, cert: &Certificate, trial_d: u64) -> Result<Vec<Candidate>> {
    if cert.verdict == Verdict::Holds {
        return Err(Error::Domain("certificate already holds".into()));
    }
    let ds = cert.threshold_values()?;
    let mut primes: Vec<u64> = ds
        .iter()
        .take(2)
        .flat_map(|&d| prime_factors(d))
        .filter(|&q| is_prime(q) && !p.contains(q))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    if primes.is_empty() {
        return Err(Error::DeadEnd(format!(
            "no new prime divides the leading thresholds {:?}",
            &ds[..ds.len().min(2)]
        )));
    }
    let mut scored: Vec<Candidate> = primes
        .par_iter()
        .map(|&q| {
            let bigger = p.with(q)?;
            let report = sweep(&compile_prime_set(k, &bigger)?, SweepMode::Bounded(trial_d))?;
            Ok(Candidate {
                prime: q,
                trial_d1: report.thresholds.first().copied(),
            })
        })
        .collect::<Result<_>>()?;
    // larger predicted d_1 first; no threshold at all ranks highest
    scored.sort_by_key(|c| (std::cmp::Reverse(c.trial_d1.unwrap_or(u64::MAX)), c.prime));
    Ok(scored)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStep {
    pub primes: Vec<u64>,
    pub added: Option<u64>,
    pub reason: String,
    pub verdict: Verdict,
    pub certificate_digest: String,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SearchOutcome {
    Success { primes: Vec<u64>, certificate: Box<Certificate> },
    Exhausted { reason: String },
}

/// `steps` is the final branch from the base set; every set on it strictly
/// contains its predecessor. `abandoned` holds the branches given up on, in
/// the order they were left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub k: u64,
    pub steps: Vec<SearchStep>,
    pub abandoned: Vec<SearchStep>,
    pub outcome: SearchOutcome,
}

impl SearchTrace {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Success { .. })
    }

    /// Number of primes added along the final branch.
    pub fn augmentations(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    /// One JSON object per line: each step, each abandoned step, then the
    /// outcome.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            kind: &'a str,
            k: u64,
            #[serde(flatten)]
            step: &'a SearchStep,
        }
        let mut out = String::new();
        for (kind, list) in [("step", &self.steps), ("abandoned", &self.abandoned)] {
            for step in list {
                let line = Line { kind, k: self.k, step };
                out.push_str(&serde_json::to_string(&line).expect("step serializes"));
                out.push('\n');
            }
        }
        let outcome = serde_json::json!({ "kind": "outcome", "k": self.k, "result": self.outcome });
        out.push_str(&outcome.to_string());
        out.push('\n');
        out
    }
}

struct Dfs<'a> {
    k: u64,
    budget: &'a SearchBudget,
    nodes: usize,
    path: Vec<SearchStep>,
    abandoned: Vec<SearchStep>,
}

enum Found {
    Yes(Box<Certificate>),
    No,
    OutOfBudget,
}

impl Dfs<'_> {
    fn visit(&mut self, p: PrimeSet, added: Option<u64>, reason: String, depth: usize) -> Result<Found> {
        if self.nodes >= self.budget.max_nodes {
            return Ok(Found::OutOfBudget);
        }
        self.nodes += 1;
        let cert = certify(self.k, &p, &self.budget.certify)?;
        let step = SearchStep {
            primes: p.primes().to_vec(),
            added,
            reason,
            verdict: cert.verdict,
            certificate_digest: cert.digest(),
            certificate: cert.clone(),
        };
        if cert.verdict == Verdict::Holds {
            self.path.push(step);
            return Ok(Found::Yes(Box::new(cert)));
        }
        if depth >= self.budget.max_depth || p.len() >= self.budget.max_primes {
            self.abandoned.push(step);
            return Ok(Found::No);
        }
        let candidates = match augment_step(self.k, &p, &cert, self.budget.trial_d) {
            Ok(c) => c,
            Err(Error::DeadEnd(_)) => {
                self.abandoned.push(step);
                return Ok(Found::No);
            }
            Err(e) => return Err(e),
        };
        self.path.push(step);
        for cand in candidates {
            let ds = cert.threshold_values()?;
            let source = ds.iter().take(2).position(|d| d % cand.prime == 0).map_or(1, |i| i + 1);
            let why = format!(
                "divides d_{source} = {}; trial d_1 = {}",
                ds[source - 1],
                cand.trial_d1.map_or_else(|| format!("> {}", self.budget.trial_d), |d| d.to_string())
            );
            match self.visit(p.with(cand.prime)?, Some(cand.prime), why, depth + 1)? {
                Found::No => {}
                other => return Ok(other),
            }
        }
        let step = self.path.pop().expect("pushed above");
        self.abandoned.push(step);
        Ok(Found::No)
    }
}

/// Depth-first augmentation from `base` until a certificate holds.
pub fn search(k: u64, base: &PrimeSet, budget: &SearchBudget) -> Result<SearchTrace> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let mut dfs = Dfs {
        k,
        budget,
        nodes: 0,
        path: Vec::new(),
        abandoned: Vec::new(),
    };
    let found = dfs.visit(base.clone(), None, "base set".into(), 0)?;
    let outcome = match found {
        Found::Yes(certificate) => SearchOutcome::Success {
            primes: dfs.path.last().expect("success has a step").primes.clone(),
            certificate,
        },
        Found::No => SearchOutcome::Exhausted {
            reason: format!("no holding set within depth {}", budget.max_depth),
        },
        Found::OutOfBudget => SearchOutcome::Exhausted {
            reason: format!("node budget {} spent", budget.max_nodes),
        },
    };
    Ok(SearchTrace {
        k,
        steps: dfs.path,
        abandoned: dfs.abandoned,
        outcome,
    })
}

/// `{p ≤ k}`, or `{2}` for `k = 1`.
pub fn default_base(k: u64) -> Result<PrimeSet> {
    PrimeSet::up_to(k.max(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(13), vec![13]);
        assert_eq!(prime_factors(49), vec![7]);
        assert_eq!(prime_factors(1309), vec![7, 11, 17]);
    }

    #[test]
    fn k5_ranks_13_first() {
        let p = ps(&[2, 3, 5]);
        let cert = certify(5, &p, &CertifyOptions::default()).unwrap();
        let c = augment_step(5, &p, &cert, DEFAULT_TRIAL_D).unwrap();
        assert_eq!(c[0].prime, 13);
        assert_eq!(c[0].trial_d1, Some(19));
    }

    #[test]
    fn dead_end() {
        let p = ps(&[2, 3, 5, 13]);
        let mut cert = certify(5, &ps(&[2, 3, 5]), &CertifyOptions::default()).unwrap();
        cert.thresholds = vec!["13".into()];
        assert!(matches!(augment_step(5, &p, &cert, 1000), Err(Error::DeadEnd(_))));
    }

    #[test]
    fn k2_needs_nothing() {
        let t = search(2, &default_base(2).unwrap(), &SearchBudget::default()).unwrap();
        assert!(t.succeeded());
        assert_eq!(t.augmentations(), 0);
    }

    #[test]
    fn k5_one_augmentation() {
        let t = search(5, &default_base(5).unwrap(), &SearchBudget::default()).unwrap();
        assert!(t.succeeded());
        let SearchOutcome::Success { primes, .. } = &t.outcome else { unreachable!() };
        assert!(primes.contains(&13));
        assert_eq!(t.augmentations(), 1);
        assert_eq!(t.to_json_lines().lines().count(), t.steps.len() + t.abandoned.len() + 1);
    }
}
