//! Binary word attributes: candidate counting over the training set,
//! mutual-information scoring, top-m selection, and message vectorization.
//!
//! Mutual information is the four-term sum over the 2x2 joint distribution
//! of word presence and category, in nats, with empty cells contributing
//! zero. Probabilities are plain frequency ratios; smoothing belongs to the
//! classifier, not to selection.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::textproc::TokenizedMessage;

/// Document-frequency counts for one candidate word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateStats {
    pub word: String,
    /// Training spam messages containing the word.
    pub n1s: usize,
    /// Training legitimate messages containing the word.
    pub n1l: usize,
    /// Total training spam messages.
    pub ns: usize,
    /// Total training legitimate messages.
    pub nl: usize,
}

/// One CandidateStats per distinct word in the training set, sorted by
/// word. Counts are document frequencies: a word counts once per message.
pub fn collect_candidates(training: &[TokenizedMessage]) -> Result<Vec<CandidateStats>> {
    collect_candidates_with_min_df(training, 1)
}

/// Like [`collect_candidates`] but drops words whose total document
/// frequency is below `min_df`. `min_df = 1` keeps every word.
pub fn collect_candidates_with_min_df(
    training: &[TokenizedMessage],
    min_df: usize,
) -> Result<Vec<CandidateStats>> {
    let indices: Vec<usize> = (0..training.len()).collect();
    collect_candidates_indexed(training, &indices, min_df)
}

/// Candidate counting over the subset of `all` selected by `indices`;
/// lets the harness reuse one tokenized corpus across folds.
pub(crate) fn collect_candidates_indexed(
    all: &[TokenizedMessage],
    indices: &[usize],
    min_df: usize,
) -> Result<Vec<CandidateStats>> {
    let ns = indices.iter().filter(|&&i| all[i].label.is_spam()).count();
    let nl = indices.len() - ns;
    if ns == 0 {
        return Err(Error::MissingClass(Label::Spam));
    }
    if nl == 0 {
        return Err(Error::MissingClass(Label::Legitimate));
    }

    let counts = count_document_frequencies(all, indices);
    let mut stats: Vec<CandidateStats> = counts
        .into_iter()
        .filter(|(_, (s, l))| s + l >= min_df)
        .map(|(word, (n1s, n1l))| CandidateStats {
            word,
            n1s,
            n1l,
            ns,
            nl,
        })
        .collect();
    stats.sort_unstable_by(|a, b| a.word.cmp(&b.word));
    Ok(stats)
}

fn count_document_frequencies(
    all: &[TokenizedMessage],
    indices: &[usize],
) -> HashMap<String, (usize, usize)> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        indices
            .par_iter()
            .fold(HashMap::new, |mut map, &i| {
                add_message_counts(&mut map, &all[i]);
                map
            })
            .reduce(HashMap::new, |mut a, b| {
                for (word, (s, l)) in b {
                    let e = a.entry(word).or_insert((0, 0));
                    e.0 += s;
                    e.1 += l;
                }
                a
            })
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut map = HashMap::new();
        for &i in indices {
            add_message_counts(&mut map, &all[i]);
        }
        map
    }
}

fn add_message_counts(map: &mut HashMap<String, (usize, usize)>, msg: &TokenizedMessage) {
    for token in &msg.tokens {
        let e = map.entry(token.clone()).or_insert((0usize, 0usize));
        match msg.label {
            Label::Spam => e.0 += 1,
            Label::Legitimate => e.1 += 1,
        }
    }
}

/// Mutual information between word presence and the category, in nats.
/// Returns exactly 0 when the 2x2 table factorizes.
pub fn mutual_information(stats: &CandidateStats) -> f64 {
    let CandidateStats {
        n1s, n1l, ns, nl, ..
    } = *stats;
    // X independent of C iff n1s/ns == n1l/nl; exact in integers.
    if (n1s as u128) * (nl as u128) == (n1l as u128) * (ns as u128) {
        return 0.0;
    }

    let n = (ns + nl) as f64;
    let n1 = n1s + n1l;
    let n0 = (ns - n1s) + (nl - n1l);
    // (joint count, marginal-x count, marginal-c count) for each cell.
    let cells = [
        (n1s, n1, ns),
        (n1l, n1, nl),
        (ns - n1s, n0, ns),
        (nl - n1l, n0, nl),
    ];
    let mut mi = 0.0;
    for (joint, mx, mc) in cells {
        if joint == 0 {
            continue;
        }
        let p_joint = joint as f64 / n;
        let p_x = mx as f64 / n;
        let p_c = mc as f64 / n;
        mi += p_joint * (p_joint / (p_x * p_c)).ln();
    }
    mi
}

/// One retained attribute: its word, MI score, and dense index.
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub word: String,
    pub mi: f64,
    pub index: usize,
}

/// The retained attributes, ordered by MI descending with lexicographic
/// tie-break, indices dense from 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttributeSet {
    attributes: Vec<Attribute>,
}

impl AttributeSet {
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn words(&self) -> Vec<String> {
        self.attributes.iter().map(|a| a.word.clone()).collect()
    }

    /// Builds a set from ranked words alone (for deserialized models);
    /// scores are not available and stored as NaN-free zeros.
    pub fn from_words(words: Vec<String>) -> Self {
        let attributes = words
            .into_iter()
            .enumerate()
            .map(|(index, word)| Attribute {
                word,
                mi: 0.0,
                index,
            })
            .collect();
        Self { attributes }
    }

    /// Writes `word<TAB>mi_score` per line in selection order.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for a in &self.attributes {
            writeln!(w, "{}\t{:.16e}", a.word, a.mi)?;
        }
        Ok(())
    }

    /// Parses the output of [`AttributeSet::write_tsv`].
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut attributes = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, score) = line.split_once('\t').ok_or_else(|| {
                Error::InvalidArgument(format!("attribute file line {}: missing tab", i + 1))
            })?;
            let mi: f64 = score.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("attribute file line {}: bad score", i + 1))
            })?;
            attributes.push(Attribute {
                word: word.to_string(),
                mi,
                index: attributes.len(),
            });
        }
        Ok(Self { attributes })
    }
}

/// Selects the top-m candidates by MI (descending, ties broken by word
/// ascending). If fewer than m candidates exist, all are returned.
pub fn select_attributes(candidates: &[CandidateStats], m: usize) -> Result<AttributeSet> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "attribute count must be at least 1".into(),
        ));
    }
    let mut scored: Vec<(f64, &str)> = candidates
        .iter()
        .map(|c| (mutual_information(c), c.word.as_str()))
        .collect();
    scored.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored.truncate(m);
    let attributes = scored
        .into_iter()
        .enumerate()
        .map(|(index, (mi, word))| Attribute {
            word: word.to_string(),
            mi,
            index,
        })
        .collect();
    Ok(AttributeSet { attributes })
}

/// A message as a binary attribute vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVector {
    bits: Vec<bool>,
    label: Option<Label>,
}

impl BinaryVector {
    pub fn new(bits: Vec<bool>, label: Option<Label>) -> Self {
        Self { bits, label }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }
}

/// bit[i] = 1 iff attribute i's word occurs in the message.
pub fn vectorize(message: &TokenizedMessage, attrs: &AttributeSet) -> BinaryVector {
    let bits = attrs
        .attributes
        .iter()
        .map(|a| message.tokens.contains(&a.word))
        .collect();
    BinaryVector::new(bits, Some(message.label))
}
