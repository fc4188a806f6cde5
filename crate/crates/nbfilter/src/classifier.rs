//! Two-class naive Bayes over binary attributes with a cost-derived
//! decision threshold.
//!
//! Probabilities are relative frequencies adjusted by an estimator that
//! keeps every conditional strictly inside (0, 1). Posteriors are always
//! evaluated in log space and renormalized through log-sum-exp; the linear
//! product form defines the value, not the algorithm.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::BinaryVector;
use crate::textproc::PipelineChoice;

/// Conditional-probability estimator applied after frequency counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// Relative frequency clamped into [epsilon, 1 - epsilon].
    RawWithFloor { epsilon: f64 },
    /// (count + alpha) / (class_total + 2 * alpha).
    Laplace { alpha: f64 },
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator::RawWithFloor { epsilon: 1e-7 }
    }
}

impl Estimator {
    pub fn validate(self) -> Result<()> {
        match self {
            Estimator::RawWithFloor { epsilon } => {
                if !(epsilon > 0.0 && epsilon < 0.5) {
                    return Err(Error::InvalidArgument(format!(
                        "floor epsilon must be in (0, 0.5), got {epsilon}"
                    )));
                }
            }
            Estimator::Laplace { alpha } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "laplace alpha must be positive, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn adjust(self, ones: usize, class_total: usize) -> f64 {
        match self {
            Estimator::RawWithFloor { epsilon } => {
                let p = ones as f64 / class_total as f64;
                p.clamp(epsilon, 1.0 - epsilon)
            }
            Estimator::Laplace { alpha } => {
                (ones as f64 + alpha) / (class_total as f64 + 2.0 * alpha)
            }
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::RawWithFloor { epsilon } => write!(f, "raw_with_floor {epsilon:e}"),
            Estimator::Laplace { alpha } => write!(f, "laplace {alpha:e}"),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let est = match (parts.next(), parts.next(), parts.next()) {
            (Some("raw_with_floor"), Some(e), None) => {
                let epsilon: f64 = e.parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad estimator parameter {e:?}"))
                })?;
                Estimator::RawWithFloor { epsilon }
            }
            (Some("laplace"), Some(a), None) => {
                let alpha: f64 = a.parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad estimator parameter {a:?}"))
                })?;
                Estimator::Laplace { alpha }
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown estimator {s:?}"
                )))
            }
        };
        est.validate()?;
        Ok(est)
    }
}

/// The cost ratio lambda and its equivalent posterior threshold,
/// t = lambda / (1 + lambda).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostConfig {
    lambda: f64,
    t: f64,
}

impl CostConfig {
    /// Builds the pair from the cost ratio lambda > 0.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be a positive finite number, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            t: lambda / (1.0 + lambda),
        })
    }

    /// Builds the pair from the threshold t in (0, 1).
    pub fn from_threshold(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold must lie strictly between 0 and 1, got {t}"
            )));
        }
        Ok(Self {
            lambda: t / (1.0 - t),
            t,
        })
    }

    pub fn lambda(self) -> f64 {
        self.lambda
    }

    pub fn threshold(self) -> f64 {
        self.t
    }
}

/// A verdict for one message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub posterior_spam: f64,
    pub verdict: Label,
    pub threshold_t: f64,
}

/// Trained model: class priors and per-attribute P(X_i = 1 | C).
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    m: usize,
    prior_spam: f64,
    prior_legit: f64,
    cond_spam: Vec<f64>,
    cond_legit: Vec<f64>,
    estimator: Estimator,
}

/// Per-attribute one-bit counts for each class, the sufficient statistics
/// of training.
#[derive(Debug, Clone)]
pub(crate) struct BitCounts {
    pub width: usize,
    pub n_spam: usize,
    pub n_legit: usize,
    pub spam_ones: Vec<usize>,
    pub legit_ones: Vec<usize>,
}

pub(crate) fn bit_counts(vectors: &[BinaryVector]) -> Result<BitCounts> {
    let width = vectors.first().map_or(0, BinaryVector::len);
    let mut counts = BitCounts {
        width,
        n_spam: 0,
        n_legit: 0,
        spam_ones: vec![0; width],
        legit_ones: vec![0; width],
    };
    for v in vectors {
        if v.len() != width {
            return Err(Error::LengthMismatch {
                expected: width,
                got: v.len(),
            });
        }
        let ones = match v.label() {
            Some(Label::Spam) => {
                counts.n_spam += 1;
                &mut counts.spam_ones
            }
            Some(Label::Legitimate) => {
                counts.n_legit += 1;
                &mut counts.legit_ones
            }
            None => {
                return Err(Error::InvalidArgument(
                    "training vector without a label".into(),
                ))
            }
        };
        for (slot, &bit) in ones.iter_mut().zip(v.bits()) {
            *slot += usize::from(bit);
        }
    }
    if counts.n_spam == 0 {
        return Err(Error::MissingClass(Label::Spam));
    }
    if counts.n_legit == 0 {
        return Err(Error::MissingClass(Label::Legitimate));
    }
    Ok(counts)
}

/// Builds the model for the first `m` attributes of the counted width.
pub(crate) fn model_from_counts(counts: &BitCounts, m: usize, estimator: Estimator) -> NbModel {
    debug_assert!(m <= counts.width);
    let total = (counts.n_spam + counts.n_legit) as f64;
    NbModel {
        m,
        prior_spam: counts.n_spam as f64 / total,
        prior_legit: counts.n_legit as f64 / total,
        cond_spam: counts.spam_ones[..m]
            .iter()
            .map(|&c| estimator.adjust(c, counts.n_spam))
            .collect(),
        cond_legit: counts.legit_ones[..m]
            .iter()
            .map(|&c| estimator.adjust(c, counts.n_legit))
            .collect(),
        estimator,
    }
}

/// Trains priors and conditionals from labeled vectors. Requires at least
/// one vector of each class; all vectors must share one length.
pub fn train(vectors: &[BinaryVector], estimator: Estimator) -> Result<NbModel> {
    estimator.validate()?;
    let counts = bit_counts(vectors)?;
    let width = counts.width;
    Ok(model_from_counts(&counts, width, estimator))
}

fn logsumexp(a: f64, b: f64) -> f64 {
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

fn softmax_pair(ls: f64, ll: f64) -> (f64, f64) {
    let lse = logsumexp(ls, ll);
    ((ls - lse).exp(), (ll - lse).exp())
}

impl NbModel {
    /// Validated assembly from explicit parts (used by model files and
    /// synthetic models in tests).
    pub fn from_parts(
        prior_spam: f64,
        prior_legit: f64,
        cond_spam: Vec<f64>,
        cond_legit: Vec<f64>,
        estimator: Estimator,
    ) -> Result<Self> {
        if cond_spam.len() != cond_legit.len() {
            return Err(Error::LengthMismatch {
                expected: cond_spam.len(),
                got: cond_legit.len(),
            });
        }
        if !(prior_spam > 0.0 && prior_spam < 1.0 && prior_legit > 0.0 && prior_legit < 1.0) {
            return Err(Error::InvalidArgument(
                "class priors must lie strictly between 0 and 1".into(),
            ));
        }
        if (prior_spam + prior_legit - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "class priors must sum to 1".into(),
            ));
        }
        for p in cond_spam.iter().chain(&cond_legit) {
            if !(*p > 0.0 && *p < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "conditional probability {p} outside (0, 1)"
                )));
            }
        }
        Ok(Self {
            m: cond_spam.len(),
            prior_spam,
            prior_legit,
            cond_spam,
            cond_legit,
            estimator,
        })
    }

    pub fn attribute_count(&self) -> usize {
        self.m
    }

    pub fn prior_spam(&self) -> f64 {
        self.prior_spam
    }

    pub fn prior_legit(&self) -> f64 {
        self.prior_legit
    }

    pub fn cond_spam(&self) -> &[f64] {
        &self.cond_spam
    }

    pub fn cond_legit(&self) -> &[f64] {
        &self.cond_legit
    }

    pub fn estimator(&self) -> Estimator {
        self.estimator
    }

    /// (P(spam | x), P(legitimate | x)) via one left-to-right log-space
    /// accumulation. `checkpoints` must be ascending positions <= bits.len;
    /// the pair after that many attributes is emitted for each entry.
    pub(crate) fn posteriors_at_checkpoints(
        &self,
        bits: &[bool],
        checkpoints: &[usize],
    ) -> Vec<(f64, f64)> {
        debug_assert!(checkpoints.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(checkpoints.last().is_none_or(|&c| c <= bits.len()));
        debug_assert!(bits.len() <= self.m);

        let mut out = Vec::with_capacity(checkpoints.len());
        let mut ls = self.prior_spam.ln();
        let mut ll = self.prior_legit.ln();
        let mut ci = 0;
        while ci < checkpoints.len() && checkpoints[ci] == 0 {
            out.push(softmax_pair(ls, ll));
            ci += 1;
        }
        for (i, &bit) in bits.iter().enumerate() {
            if ci == checkpoints.len() {
                break;
            }
            if bit {
                ls += self.cond_spam[i].ln();
                ll += self.cond_legit[i].ln();
            } else {
                ls += (1.0 - self.cond_spam[i]).ln();
                ll += (1.0 - self.cond_legit[i]).ln();
            }
            while ci < checkpoints.len() && checkpoints[ci] == i + 1 {
                out.push(softmax_pair(ls, ll));
                ci += 1;
            }
        }
        out
    }

    /// Both class posteriors for a vector of the model's width.
    pub fn posteriors(&self, vector: &BinaryVector) -> Result<(f64, f64)> {
        if vector.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: vector.len(),
            });
        }
        Ok(self.posteriors_at_checkpoints(vector.bits(), &[self.m])[0])
    }

    /// P(spam | x).
    pub fn posterior_spam(&self, vector: &BinaryVector) -> Result<f64> {
        Ok(self.posteriors(vector)?.0)
    }

    /// Spam iff the spam posterior strictly exceeds the cost threshold.
    pub fn classify(&self, vector: &BinaryVector, cost: CostConfig) -> Result<Decision> {
        let posterior_spam = self.posterior_spam(vector)?;
        let verdict = if posterior_spam > cost.threshold() {
            Label::Spam
        } else {
            Label::Legitimate
        };
        Ok(Decision {
            posterior_spam,
            verdict,
            threshold_t: cost.threshold(),
        })
    }
}

const MODEL_MAGIC: &str = "nbfilter-model v1";

/// A trained model bound to its attribute words and the text pipeline the
/// training corpus went through, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub model: NbModel,
    pub words: Vec<String>,
    pub pipeline: PipelineChoice,
}

impl SavedModel {
    /// Writes the versioned text format: a header with attribute count,
    /// pipeline, estimator, and priors, then one
    /// `word<TAB>P(1|spam)<TAB>P(1|legit)` line per attribute. Floats carry
    /// 17 significant digits and round-trip exactly.
    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{MODEL_MAGIC}")?;
        writeln!(w, "pipeline {}", self.pipeline)?;
        writeln!(w, "attributes {}", self.model.m)?;
        writeln!(w, "estimator {}", self.model.estimator)?;
        writeln!(w, "prior_spam {:.16e}", self.model.prior_spam)?;
        writeln!(w, "prior_legit {:.16e}", self.model.prior_legit)?;
        for i in 0..self.model.m {
            writeln!(
                w,
                "{}\t{:.16e}\t{:.16e}",
                self.words[i], self.model.cond_spam[i], self.model.cond_legit[i]
            )?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(line))) => Ok((i + 1, line)),
                Some((i, Err(e))) => Err(Error::ModelParse {
                    line: i + 1,
                    message: e.to_string(),
                }),
                None => Err(Error::ModelParse {
                    line: 0,
                    message: format!("unexpected end of file, expected {expect}"),
                }),
            }
        };

        let (line, magic) = next_line("header")?;
        if magic != MODEL_MAGIC {
            return Err(Error::ModelParse {
                line,
                message: format!("bad header {magic:?}"),
            });
        }
        let field = |line: usize, text: &str, key: &str| -> Result<String> {
            text.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| Error::ModelParse {
                    line,
                    message: format!("expected {key:?} field, got {text:?}"),
                })
        };
        let parse_f64 = |line: usize, text: &str| -> Result<f64> {
            text.trim().parse().map_err(|_| Error::ModelParse {
                line,
                message: format!("bad number {text:?}"),
            })
        };

        let (l, text) = next_line("pipeline")?;
        let pipeline: PipelineChoice = field(l, &text, "pipeline")?
            .parse()
            .map_err(|e| Error::ModelParse {
                line: l,
                message: format!("{e}"),
            })?;
        let (l, text) = next_line("attributes")?;
        let m: usize = field(l, &text, "attributes")?
            .trim()
            .parse()
            .map_err(|_| Error::ModelParse {
                line: l,
                message: format!("bad attribute count in {text:?}"),
            })?;
        let (l, text) = next_line("estimator")?;
        let estimator: Estimator =
            field(l, &text, "estimator")?
                .parse()
                .map_err(|e| Error::ModelParse {
                    line: l,
                    message: format!("{e}"),
                })?;
        let (l, text) = next_line("prior_spam")?;
        let prior_spam = parse_f64(l, &field(l, &text, "prior_spam")?)?;
        let (l, text) = next_line("prior_legit")?;
        let prior_legit = parse_f64(l, &field(l, &text, "prior_legit")?)?;

        let mut words = Vec::with_capacity(m);
        let mut cond_spam = Vec::with_capacity(m);
        let mut cond_legit = Vec::with_capacity(m);
        for _ in 0..m {
            let (l, text) = next_line("attribute line")?;
            let mut cols = text.split('\t');
            match (cols.next(), cols.next(), cols.next(), cols.next()) {
                (Some(word), Some(ps), Some(pl), None) if !word.is_empty() => {
                    words.push(word.to_string());
                    cond_spam.push(parse_f64(l, ps)?);
                    cond_legit.push(parse_f64(l, pl)?);
                }
                _ => {
                    return Err(Error::ModelParse {
                        line: l,
                        message: format!("expected word<TAB>p<TAB>p, got {text:?}"),
                    })
                }
            }
        }

        let model = NbModel::from_parts(prior_spam, prior_legit, cond_spam, cond_legit, estimator)?;
        Ok(SavedModel {
            model,
            words,
            pipeline,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write(&mut buf).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        fs::write(path, buf).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read(io::Cursor::new(bytes))
    }
}
