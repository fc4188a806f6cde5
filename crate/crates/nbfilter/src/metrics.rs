//! Cost-sensitive evaluation measures.
//!
//! With lambda the cost ratio (one blocked legitimate message counts as
//! lambda passed spam messages):
//!
//! ```text
//! SR    = n_ss / (n_ss + n_sl)          SP    = n_ss / (n_ss + n_ls)
//! WAcc  = (l*n_ll + n_ss) / (l*N_L + N_S)
//! WAcc_b = l*N_L / (l*N_L + N_S)        (no-filter baseline)
//! TCR   = WErr_b / mean(WErr)
//! ```
//!
//! TCR > 1 means the filter beats having no filter. Undefined 0/0 ratios
//! are reported as `None`, never silently as 0 or 1. The paired one-tailed
//! t-test uses the sample (n-1) standard deviation and evaluates the exact
//! Student-t upper tail.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::corpus::Label;
use crate::error::{Error, Result};

/// Outcome counts for one evaluated message set: n_xy is the number of
/// actual-x messages classified as y.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    /// legitimate classified legitimate
    pub n_ll: usize,
    /// legitimate classified spam (the costly error)
    pub n_ls: usize,
    /// spam classified legitimate
    pub n_sl: usize,
    /// spam classified spam
    pub n_ss: usize,
}

impl ConfusionCounts {
    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Legitimate, Label::Legitimate) => self.n_ll += 1,
            (Label::Legitimate, Label::Spam) => self.n_ls += 1,
            (Label::Spam, Label::Legitimate) => self.n_sl += 1,
            (Label::Spam, Label::Spam) => self.n_ss += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionCounts) {
        self.n_ll += other.n_ll;
        self.n_ls += other.n_ls;
        self.n_sl += other.n_sl;
        self.n_ss += other.n_ss;
    }

    /// N_L of the evaluated set.
    pub fn n_legitimate(&self) -> usize {
        self.n_ll + self.n_ls
    }

    /// N_S of the evaluated set.
    pub fn n_spam(&self) -> usize {
        self.n_sl + self.n_ss
    }

    pub fn total(&self) -> usize {
        self.n_legitimate() + self.n_spam()
    }
}

/// (spam precision, spam recall); `None` marks an undefined 0/0 ratio.
pub fn spam_precision_recall(c: &ConfusionCounts) -> (Option<f64>, Option<f64>) {
    let sp = match c.n_ss + c.n_ls {
        0 => None,
        denom => Some(c.n_ss as f64 / denom as f64),
    };
    let sr = match c.n_ss + c.n_sl {
        0 => None,
        denom => Some(c.n_ss as f64 / denom as f64),
    };
    (sp, sr)
}

/// Unweighted (accuracy, error rate).
pub fn accuracy(c: &ConfusionCounts) -> (f64, f64) {
    let total = c.total() as f64;
    (
        (c.n_ll + c.n_ss) as f64 / total,
        (c.n_ls + c.n_sl) as f64 / total,
    )
}

/// (WAcc, WErr): each legitimate message counted lambda times.
pub fn weighted_accuracy(c: &ConfusionCounts, lambda: f64) -> (f64, f64) {
    let denom = lambda * c.n_legitimate() as f64 + c.n_spam() as f64;
    (
        (lambda * c.n_ll as f64 + c.n_ss as f64) / denom,
        (lambda * c.n_ls as f64 + c.n_sl as f64) / denom,
    )
}

/// (WAcc_b, WErr_b) of the no-filter policy: every message passes.
pub fn baseline_weighted(n_legit: usize, n_spam: usize, lambda: f64) -> (f64, f64) {
    let denom = lambda * n_legit as f64 + n_spam as f64;
    (lambda * n_legit as f64 / denom, n_spam as f64 / denom)
}

/// Baseline weighted error divided by the mean per-fold weighted error.
/// A zero mean yields the +infinity marker.
pub fn total_cost_ratio(werr_baseline: f64, werr_values: &[f64]) -> f64 {
    assert!(!werr_values.is_empty(), "need at least one weighted error");
    let mean = werr_values.iter().sum::<f64>() / werr_values.len() as f64;
    if mean == 0.0 {
        f64::INFINITY
    } else {
        werr_baseline / mean
    }
}

/// Exact upper-tail probability P(T_df > t) of the Student t distribution.
pub fn students_t_upper_tail(t: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .expect("degrees of freedom must be positive")
        .sf(t)
}

/// Paired one-tailed t-test of "a is greater than b" over fold-aligned
/// score lists. All-zero differences give p = 0.5; zero variance with a
/// nonzero mean gives p = 0 or 1 by sign.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "paired t-test needs at least 2 pairs".into(),
        ));
    }

    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd == 0.0 {
        return Ok(if mean == 0.0 {
            0.5
        } else if mean > 0.0 {
            0.0
        } else {
            1.0
        });
    }
    let t = mean / (sd / (n as f64).sqrt());
    Ok(students_t_upper_tail(t, (n - 1) as f64))
}

/// All measures for one evaluated message set at one lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub lambda: f64,
    pub sr: Option<f64>,
    pub sp: Option<f64>,
    pub acc: f64,
    pub err: f64,
    pub wacc: f64,
    pub werr: f64,
    pub wacc_b: f64,
    pub werr_b: f64,
    pub tcr: f64,
}

impl MetricsReport {
    /// Scores a single run: the baseline uses the run's own class counts
    /// and TCR is the ratio of the two weighted errors.
    pub fn from_counts(c: &ConfusionCounts, lambda: f64) -> Self {
        let (sp, sr) = spam_precision_recall(c);
        let (acc, err) = accuracy(c);
        let (wacc, werr) = weighted_accuracy(c, lambda);
        let (wacc_b, werr_b) = baseline_weighted(c.n_legitimate(), c.n_spam(), lambda);
        let tcr = total_cost_ratio(werr_b, &[werr]);
        Self {
            lambda,
            sr,
            sp,
            acc,
            err,
            wacc,
            werr,
            wacc_b,
            werr_b,
            tcr,
        }
    }
}
