//! Batch comparison of the closed-form classifier with the oracle over
//! random samples, parallel or sequential.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::classifier::classify;
use crate::error::Result;
use crate::numerics::DEFAULT_ROOT_TOL;
use crate::oracle::{self, DEFAULT_T_TOL};
use crate::polar::{validate, CaseTag, PolarData};
use crate::strata::{random_elliptic, stratum_sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    /// Requires the `parallel` feature; otherwise runs sequentially.
    Parallel,
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub case: CaseTag,
    pub samples: usize,
    pub seed: u64,
    pub root_tol: f64,
    pub t_tol: f64,
    pub mode: Mode,
}

impl VerifyConfig {
    pub fn new(case: CaseTag, samples: usize, seed: u64) -> Self {
        VerifyConfig {
            case,
            samples,
            seed,
            root_tol: DEFAULT_ROOT_TOL,
            t_tol: DEFAULT_T_TOL,
            mode: Mode::default(),
        }
    }
}

/// Result of comparing classifier and oracle on one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub branch: &'static str,
    pub classifier: Vec<String>,
    /// `None` when the oracle failed or left a cluster unrecognized.
    pub oracle: Option<Vec<String>>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn labels(v: &[(crate::kodaira::KodairaType, bool)]) -> Vec<String> {
    v.iter()
        .map(|(k, deg)| if *deg { format!("{}(deg)", k.name()) } else { k.name() })
        .collect()
}

/// Classifies `d` both ways. Precondition: `d` is elliptic.
pub fn compare(d: &PolarData, root_tol: f64, t_tol: f64) -> Result<Comparison> {
    let inv = validate(d)?;
    let c = classify(&inv, d.case());
    let (oracle, error, agree) = match oracle::run(d, root_tol, t_tol) {
        Ok(rep) => {
            let agree = rep.agrees_with(&c);
            (rep.signature().map(|s| labels(&s)), None, agree)
        }
        Err(e) => (None, Some(e.to_string()), false),
    };
    Ok(Comparison {
        branch: c.branch,
        classifier: labels(&c.signature()),
        oracle,
        agree,
        error,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Disagreement {
    pub index: usize,
    pub params: Value,
    pub comparison: Comparison,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub case: CaseTag,
    pub samples: usize,
    pub seed: u64,
    pub agree: usize,
    pub disagree: Vec<Disagreement>,
    /// Non-elliptic draws discarded before reaching `samples`.
    pub rejected: usize,
    pub branch_counts: BTreeMap<&'static str, usize>,
}

impl VerifyReport {
    pub fn rejection_rate(&self) -> f64 {
        self.rejected as f64 / (self.rejected + self.samples).max(1) as f64
    }
}

/// Independent random stream for sample `index` of `case`.
pub fn sample_rng(seed: u64, case: CaseTag, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let case_ix = CaseTag::ALL.iter().position(|c| *c == case).expect("known case") as u64;
    rng.set_stream((case_ix << 48) | index as u64);
    rng
}

struct Outcome {
    index: usize,
    data: PolarData,
    rejected: usize,
    comparison: Comparison,
}

fn run_one(cfg: &VerifyConfig, index: usize) -> Outcome {
    let mut rng = sample_rng(cfg.seed, cfg.case, index);
    let (data, rejected) = random_elliptic(cfg.case, &mut rng);
    let comparison = compare(&data, cfg.root_tol, cfg.t_tol).expect("sample is elliptic");
    Outcome {
        index,
        data,
        rejected,
        comparison,
    }
}

fn run_all(cfg: &VerifyConfig) -> Vec<Outcome> {
    match cfg.mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            (0..cfg.samples).into_par_iter().map(|i| run_one(cfg, i)).collect()
        }
        _ => (0..cfg.samples).map(|i| run_one(cfg, i)).collect(),
    }
}

/// Compares classifier and oracle on `cfg.samples` random elliptic
/// configurations. The report does not depend on `cfg.mode`.
pub fn verify(cfg: &VerifyConfig) -> VerifyReport {
    let outcomes = run_all(cfg);
    let mut report = VerifyReport {
        case: cfg.case,
        samples: cfg.samples,
        seed: cfg.seed,
        agree: 0,
        disagree: Vec::new(),
        rejected: 0,
        branch_counts: BTreeMap::new(),
    };
    for o in outcomes {
        report.rejected += o.rejected;
        *report.branch_counts.entry(o.comparison.branch).or_default() += 1;
        if o.comparison.agree {
            report.agree += 1;
        } else {
            report.disagree.push(Disagreement {
                index: o.index,
                params: o.data.to_json(),
                comparison: o.comparison,
            });
        }
    }
    report
}

/// One row of a stratum sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub target: &'static str,
    pub index: usize,
    pub params: Value,
    #[serde(flatten)]
    pub comparison: Comparison,
}

/// For each branch, `per_branch` random points of its stratum, classified
/// both ways. Draws that are not elliptic are skipped; rows whose branch
/// differs from the target record a smaller stratum that was hit.
pub fn sweep(branches: &[&'static str], per_branch: usize, seed: u64, root_tol: f64, t_tol: f64) -> Vec<SweepRow> {
    let work: Vec<(usize, &'static str, usize)> = branches
        .iter()
        .enumerate()
        .flat_map(|(bi, b)| (0..per_branch).map(move |i| (bi, *b, i)))
        .collect();
    let one = |&(bi, b, i): &(usize, &'static str, usize)| -> Option<SweepRow> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((bi as u64) << 32) | i as u64);
        let d = stratum_sample(b, &mut rng)?;
        let comparison = compare(&d, root_tol, t_tol).ok()?;
        Some(SweepRow {
            target: b,
            index: i,
            params: d.to_json(),
            comparison,
        })
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Option<SweepRow>> = {
        use rayon::prelude::*;
        work.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Option<SweepRow>> = work.iter().map(one).collect();
    rows.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let mut cfg = VerifyConfig::new(CaseTag::D22Sn, 40, 3);
        cfg.mode = Mode::Sequential;
        let a = verify(&cfg);
        cfg.mode = Mode::Parallel;
        let b = verify(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.agree, 40);
    }
}
