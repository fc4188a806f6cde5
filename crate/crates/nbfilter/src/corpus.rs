//! Labeled message corpora: on-disk loading, stratified cross-validation
//! fold plans, and training-portion subsampling for learning curves.
//!
//! The on-disk layout is the published one for this kind of benchmark
//! corpus: `<root>/part<i>/<file>.txt` with spam files identified by a
//! filename prefix (default `spmsg`). A flat single-directory layout is
//! also accepted for synthetic corpora. Each message file carries a
//! `Subject:` header on the first line, a blank line, then the body.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default filename prefix marking spam messages.
pub const DEFAULT_SPAM_PREFIX: &str = "spmsg";

/// Message category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Legitimate,
    Spam,
}

impl Label {
    pub fn is_spam(self) -> bool {
        self == Label::Spam
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Legitimate => write!(f, "legitimate"),
            Label::Spam => write!(f, "spam"),
        }
    }
}

/// One labeled e-mail message.
#[derive(Debug, Clone)]
pub struct Message {
    /// Source path relative to the corpus root, unique within a corpus.
    pub id: String,
    pub subject: String,
    pub body: String,
    pub label: Label,
}

/// An ordered collection of labeled messages with derived class counts.
#[derive(Debug, Clone)]
pub struct Corpus {
    messages: Vec<Message>,
}

impl Corpus {
    /// Builds a corpus, rejecting empty input and duplicate message ids.
    pub fn new(messages: Vec<Message>) -> Result<Self> {
        if messages.is_empty() {
            return Err(Error::InvalidArgument("corpus has no messages".into()));
        }
        let mut seen = HashSet::with_capacity(messages.len());
        for m in &messages {
            if !seen.insert(m.id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate message id {:?}",
                    m.id
                )));
            }
        }
        Ok(Self { messages })
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Number of legitimate messages (N_L).
    pub fn n_legitimate(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| m.label == Label::Legitimate)
            .count()
    }

    /// Number of spam messages (N_S).
    pub fn n_spam(&self) -> usize {
        self.messages.iter().filter(|m| m.label.is_spam()).count()
    }

    /// N_S / (N_L + N_S).
    pub fn spam_fraction(&self) -> f64 {
        self.n_spam() as f64 / self.len() as f64
    }
}

/// A file the loader could not read; reported, never fatal.
#[derive(Debug)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

/// Result of [`load_corpus`]: the corpus plus any skipped files.
#[derive(Debug)]
pub struct LoadOutcome {
    pub corpus: Corpus,
    pub skipped: Vec<SkippedFile>,
}

/// Loads a corpus from `root`. Subdirectories are treated as corpus parts;
/// files directly under `root` form a part of their own. Messages are
/// ordered lexicographically by part then filename, and a message is spam
/// iff its filename starts with `spam_prefix`.
pub fn load_corpus(root: &Path, spam_prefix: &str) -> Result<LoadOutcome> {
    let mut units: Vec<(String, Vec<PathBuf>)> = Vec::new();
    let mut root_files = Vec::new();
    let mut parts = Vec::new();

    for entry in read_dir_sorted(root)? {
        if entry.is_dir() {
            parts.push(entry);
        } else {
            root_files.push(entry);
        }
    }
    if !root_files.is_empty() {
        units.push((String::new(), root_files));
    }
    for part in parts {
        let files = read_dir_sorted(&part)?
            .into_iter()
            .filter(|p| p.is_file())
            .collect();
        let name = part
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        units.push((name, files));
    }

    let mut messages = Vec::new();
    let mut skipped = Vec::new();
    for (part, files) in units {
        for path in files {
            let file_name = match path.file_name() {
                Some(n) => n.to_string_lossy().into_owned(),
                None => continue,
            };
            if file_name.starts_with('.') {
                continue;
            }
            let bytes = match fs::read(&path) {
                Ok(b) => b,
                Err(e) => {
                    skipped.push(SkippedFile {
                        path,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let text = decode_lossy_ascii(&bytes);
            let (subject, body) = split_subject_body(&text);
            let id = if part.is_empty() {
                file_name.clone()
            } else {
                format!("{part}/{file_name}")
            };
            let label = if file_name.starts_with(spam_prefix) {
                Label::Spam
            } else {
                Label::Legitimate
            };
            messages.push(Message {
                id,
                subject,
                body,
                label,
            });
        }
    }

    if messages.is_empty() {
        return Err(Error::EmptyCorpus(root.to_path_buf()));
    }
    Ok(LoadOutcome {
        corpus: Corpus::new(messages)?,
        skipped,
    })
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        paths.push(entry.path());
    }
    paths.sort();
    Ok(paths)
}

/// Keeps printable ASCII and line structure; every other byte becomes a
/// space. The corpora this targets are plain-text ASCII-era e-mail, and
/// tokenization discards non-letters anyway.
fn decode_lossy_ascii(bytes: &[u8]) -> String {
    bytes
        .iter()
        .map(|&b| match b {
            0x20..=0x7e | b'\n' | b'\r' | b'\t' => b as char,
            _ => ' ',
        })
        .collect()
}

/// Reads one message file outside any corpus (single-message filtering).
/// The label is unknown and recorded as legitimate; id is the filename.
pub fn read_message(path: &Path) -> Result<Message> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = decode_lossy_ascii(&bytes);
    let (subject, body) = split_subject_body(&text);
    let id = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(Message {
        id,
        subject,
        body,
        label: Label::Legitimate,
    })
}

/// First line is the subject header (an optional `Subject:` prefix is
/// stripped); one following blank line is consumed; the rest is the body.
fn split_subject_body(text: &str) -> (String, String) {
    let mut lines = text.split('\n');
    let first = lines.next().unwrap_or("").trim_end_matches('\r');
    let subject = first
        .trim()
        .strip_prefix("Subject:")
        .or_else(|| first.trim().strip_prefix("subject:"))
        .unwrap_or(first)
        .trim()
        .to_string();
    let rest: Vec<&str> = lines.collect();
    let body_lines = match rest.first() {
        Some(l) if l.trim().is_empty() => &rest[1..],
        _ => &rest[..],
    };
    (subject, body_lines.join("\n"))
}

/// Assignment of every corpus message to one of `k` cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    k: usize,
    seed: Option<u64>,
    ids: Vec<String>,
    folds: Vec<usize>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Seed used for the stratified shuffle; `None` for part-derived plans.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Fold of the message at corpus position `i`.
    pub fn fold_of_index(&self, i: usize) -> usize {
        self.folds[i]
    }

    /// Fold of a message id, if the id belongs to the planned corpus.
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .map(|i| self.folds[i])
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &f in &self.folds {
            sizes[f] += 1;
        }
        sizes
    }

    /// Corpus positions of the messages in `fold`.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len())
            .filter(|&i| self.folds[i] == fold)
            .collect()
    }

    /// Corpus positions of the messages outside `fold`.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len())
            .filter(|&i| self.folds[i] != fold)
            .collect()
    }
}

/// Plans a stratified k-fold split: each class is shuffled with the seed
/// and dealt round-robin, with the second class continuing where the first
/// stopped so total fold sizes differ by at most one message.
pub fn make_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "fold count must be at least 2, got {k}"
        )));
    }
    if k > corpus.len() {
        return Err(Error::InvalidArgument(format!(
            "fold count {k} exceeds corpus size {}",
            corpus.len()
        )));
    }

    let mut spam_idx = Vec::new();
    let mut legit_idx = Vec::new();
    for (i, m) in corpus.messages().iter().enumerate() {
        match m.label {
            Label::Spam => spam_idx.push(i),
            Label::Legitimate => legit_idx.push(i),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spam_idx.shuffle(&mut rng);
    legit_idx.shuffle(&mut rng);

    let mut folds = vec![0usize; corpus.len()];
    for (j, &i) in spam_idx.iter().enumerate() {
        folds[i] = j % k;
    }
    let offset = spam_idx.len() % k;
    for (j, &i) in legit_idx.iter().enumerate() {
        folds[i] = (offset + j) % k;
    }

    Ok(FoldPlan {
        k,
        seed: Some(seed),
        ids: corpus.messages().iter().map(|m| m.id.clone()).collect(),
        folds,
    })
}

/// Uses the corpus's published part structure as the fold assignment:
/// fold index = rank of the part name in lexicographic order. Requires a
/// part-structured corpus (ids of the form `part/filename`).
pub fn folds_from_parts(corpus: &Corpus) -> Result<FoldPlan> {
    let mut part_names = BTreeMap::new();
    let mut parts = Vec::with_capacity(corpus.len());
    for m in corpus.messages() {
        let part = m.id.split_once('/').map(|(p, _)| p).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "message {:?} has no part component; corpus is flat",
                m.id
            ))
        })?;
        part_names.insert(part.to_string(), 0usize);
        parts.push(part.to_string());
    }
    let k = part_names.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 corpus parts to use parts as folds, found {k}"
        )));
    }
    for (rank, v) in part_names.values_mut().enumerate() {
        *v = rank;
    }
    let folds = parts.iter().map(|p| part_names[p]).collect();
    Ok(FoldPlan {
        k,
        seed: None,
        ids: corpus.messages().iter().map(|m| m.id.clone()).collect(),
        folds,
    })
}

/// Corpus positions selected for training when `percent`% of each non-test
/// fold is used: per fold, a seeded shuffle is taken and the first
/// ceil(percent/100 * fold_size) positions kept. Returned sorted ascending.
pub(crate) fn subsample_indices(
    plan: &FoldPlan,
    test_fold: usize,
    percent: u32,
    seed: u64,
) -> Result<Vec<usize>> {
    if test_fold >= plan.k {
        return Err(Error::InvalidArgument(format!(
            "test fold {test_fold} out of range for {} folds",
            plan.k
        )));
    }
    if percent == 0 || percent > 100 || !percent.is_multiple_of(10) {
        return Err(Error::InvalidArgument(format!(
            "training percent must be one of 10, 20, ..., 100, got {percent}"
        )));
    }

    let mut selected = Vec::new();
    for fold in 0..plan.k {
        if fold == test_fold {
            continue;
        }
        let mut members = plan.test_indices(fold);
        if percent < 100 {
            // Per-fold derived seed so each part's draw is independent.
            let fold_seed = seed ^ (fold as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let mut rng = ChaCha8Rng::seed_from_u64(fold_seed);
            members.shuffle(&mut rng);
            let take = (percent as usize * members.len()).div_ceil(100);
            members.truncate(take);
        }
        selected.extend(members);
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Builds the training corpus for a learning-curve run: `percent`% of each
/// fold other than `test_fold`, drawn by seeded shuffle, in corpus order.
pub fn training_subsample(
    corpus: &Corpus,
    plan: &FoldPlan,
    test_fold: usize,
    percent: u32,
    seed: u64,
) -> Result<Corpus> {
    let indices = subsample_indices(plan, test_fold, percent, seed)?;
    let messages = indices
        .into_iter()
        .map(|i| corpus.messages()[i].clone())
        .collect();
    Corpus::new(messages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::fs;
    use tempfile::TempDir;

    fn synthetic_corpus(n_legit: usize, n_spam: usize) -> Corpus {
        let mut messages = Vec::new();
        for i in 0..n_legit {
            messages.push(Message {
                id: format!("legit{i:04}"),
                subject: "hello".into(),
                body: "meeting notes".into(),
                label: Label::Legitimate,
            });
        }
        for i in 0..n_spam {
            messages.push(Message {
                id: format!("spmsg{i:04}"),
                subject: "offer".into(),
                body: "free money".into(),
                label: Label::Spam,
            });
        }
        Corpus::new(messages).unwrap()
    }

    fn write_file(dir: &Path, name: &str, contents: &str) {
        fs::write(dir.join(name), contents).unwrap();
    }

    #[test]
    fn load_flat_directory_counts_by_prefix() {
        let tmp = TempDir::new().unwrap();
        write_file(tmp.path(), "a.txt", "Subject: one\n\nbody a\n");
        write_file(tmp.path(), "spmsg1.txt", "Subject: two\n\nbody b\n");
        write_file(tmp.path(), "b.txt", "Subject: three\n\nbody c\n");

        let out = load_corpus(tmp.path(), DEFAULT_SPAM_PREFIX).unwrap();
        assert_eq!(out.corpus.n_legitimate(), 2);
        assert_eq!(out.corpus.n_spam(), 1);
        assert!(out.skipped.is_empty());
        // Deterministic lexicographic order.
        let ids: Vec<_> = out.corpus.messages().iter().map(|m| m.id.clone()).collect();
        assert_eq!(ids, vec!["a.txt", "b.txt", "spmsg1.txt"]);
    }

    #[test]
    fn load_part_layout_orders_by_part_then_name() {
        let tmp = TempDir::new().unwrap();
        for part in ["part1", "part2"] {
            fs::create_dir(tmp.path().join(part)).unwrap();
        }
        write_file(&tmp.path().join("part2"), "x.txt", "Subject: s\n\nb\n");
        write_file(&tmp.path().join("part1"), "spmsga.txt", "Subject: s\n\nb\n");
        write_file(&tmp.path().join("part1"), "a.txt", "Subject: s\n\nb\n");

        let out = load_corpus(tmp.path(), DEFAULT_SPAM_PREFIX).unwrap();
        let ids: Vec<_> = out.corpus.messages().iter().map(|m| m.id.clone()).collect();
        assert_eq!(ids, vec!["part1/a.txt", "part1/spmsga.txt", "part2/x.txt"]);
        assert_eq!(out.corpus.n_spam(), 1);
    }

    #[test]
    fn load_empty_directory_is_fatal() {
        let tmp = TempDir::new().unwrap();
        match load_corpus(tmp.path(), DEFAULT_SPAM_PREFIX) {
            Err(Error::EmptyCorpus(_)) => {}
            other => panic!("expected EmptyCorpus, got {other:?}"),
        }
    }

    #[test]
    fn load_missing_directory_is_io_error() {
        let tmp = TempDir::new().unwrap();
        let missing = tmp.path().join("nope");
        match load_corpus(&missing, DEFAULT_SPAM_PREFIX) {
            Err(Error::Io { .. }) => {}
            other => panic!("expected Io, got {other:?}"),
        }
    }

    #[test]
    fn loader_replaces_non_ascii_with_whitespace() {
        let tmp = TempDir::new().unwrap();
        fs::write(
            tmp.path().join("a.txt"),
            b"Subject: caf\xc3\xa9\n\nr\xc3\xa9sum\xc3\xa9 body\n",
        )
        .unwrap();
        let out = load_corpus(tmp.path(), DEFAULT_SPAM_PREFIX).unwrap();
        let m = &out.corpus.messages()[0];
        assert_eq!(m.subject, "caf");
        assert!(m.body.contains("r  sum"));
    }

    #[test]
    fn subject_header_prefix_is_stripped() {
        let tmp = TempDir::new().unwrap();
        write_file(tmp.path(), "a.txt", "Subject: hello world\n\nthe body\n");
        let out = load_corpus(tmp.path(), DEFAULT_SPAM_PREFIX).unwrap();
        let m = &out.corpus.messages()[0];
        assert_eq!(m.subject, "hello world");
        assert_eq!(m.body, "the body\n");
    }

    #[test]
    fn corpus_rejects_duplicate_ids() {
        let m = Message {
            id: "x".into(),
            subject: String::new(),
            body: String::new(),
            label: Label::Spam,
        };
        assert!(Corpus::new(vec![m.clone(), m]).is_err());
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one_on_large_corpus() {
        let corpus = synthetic_corpus(2412, 481);
        let plan = make_folds(&corpus, 10, 7).unwrap();
        let mut sizes = plan.fold_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![289, 289, 289, 289, 289, 289, 289, 290, 290, 290]);
    }

    #[test]
    fn small_stratified_folds_have_balanced_spam() {
        let corpus = synthetic_corpus(16, 4);
        for seed in [0, 1, 42] {
            let plan = make_folds(&corpus, 10, seed).unwrap();
            let mut spam_per_fold = [0usize; 10];
            for (i, m) in corpus.messages().iter().enumerate() {
                if m.label.is_spam() {
                    spam_per_fold[plan.fold_of_index(i)] += 1;
                }
            }
            assert!(plan.fold_sizes().iter().all(|&s| s == 2));
            assert!(spam_per_fold.iter().all(|&s| s <= 1));
        }
    }

    #[test]
    fn make_folds_is_deterministic() {
        let corpus = synthetic_corpus(50, 10);
        let a = make_folds(&corpus, 10, 123).unwrap();
        let b = make_folds(&corpus, 10, 123).unwrap();
        assert_eq!(a, b);
        let c = make_folds(&corpus, 10, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn make_folds_validates_k() {
        let corpus = synthetic_corpus(4, 2);
        assert!(make_folds(&corpus, 1, 0).is_err());
        assert!(make_folds(&corpus, 7, 0).is_err());
    }

    #[test]
    fn folds_from_parts_uses_directory_structure() {
        let mut messages = Vec::new();
        for part in ["part1", "part2", "part3"] {
            for i in 0..2 {
                messages.push(Message {
                    id: format!("{part}/m{i}.txt"),
                    subject: String::new(),
                    body: String::new(),
                    label: Label::Legitimate,
                });
            }
        }
        let corpus = Corpus::new(messages).unwrap();
        let plan = folds_from_parts(&corpus).unwrap();
        assert_eq!(plan.k(), 3);
        assert_eq!(plan.fold_of("part2/m0.txt"), Some(1));
        assert_eq!(plan.fold_sizes(), vec![2, 2, 2]);
    }

    #[test]
    fn folds_from_parts_rejects_flat_corpus() {
        let corpus = synthetic_corpus(3, 1);
        assert!(folds_from_parts(&corpus).is_err());
    }

    #[test]
    fn subsample_full_percent_is_identity() {
        let corpus = synthetic_corpus(16, 4);
        let plan = make_folds(&corpus, 10, 5).unwrap();
        let sub = training_subsample(&corpus, &plan, 3, 100, 5).unwrap();
        assert_eq!(sub.len(), 18);
        let expected: HashSet<String> = corpus
            .messages()
            .iter()
            .enumerate()
            .filter(|(i, _)| plan.fold_of_index(*i) != 3)
            .map(|(_, m)| m.id.clone())
            .collect();
        let got: HashSet<String> = sub.messages().iter().map(|m| m.id.clone()).collect();
        assert_eq!(expected, got);
    }

    #[test]
    fn subsample_ten_percent_draws_one_per_part() {
        // 10 folds of 10 messages each.
        let corpus = synthetic_corpus(80, 20);
        let plan = make_folds(&corpus, 10, 9).unwrap();
        assert!(plan.fold_sizes().iter().all(|&s| s == 10));
        let sub = training_subsample(&corpus, &plan, 0, 10, 9).unwrap();
        assert_eq!(sub.len(), 9);
        let folds: HashSet<usize> = sub
            .messages()
            .iter()
            .map(|m| plan.fold_of(&m.id).unwrap())
            .collect();
        assert_eq!(folds.len(), 9);
        assert!(!folds.contains(&0));
    }

    #[test]
    fn subsample_ceiling_rule() {
        // 45 messages in 5 folds of 9; 50% of 9 is ceil(4.5) = 5 per part.
        let corpus = synthetic_corpus(36, 9);
        let plan = make_folds(&corpus, 5, 2).unwrap();
        assert!(plan.fold_sizes().iter().all(|&s| s == 9));
        let sub = training_subsample(&corpus, &plan, 1, 50, 2).unwrap();
        assert_eq!(sub.len(), 4 * 5);
    }

    #[test]
    fn subsample_rejects_bad_percent() {
        let corpus = synthetic_corpus(16, 4);
        let plan = make_folds(&corpus, 10, 5).unwrap();
        for percent in [0, 5, 15, 101, 110] {
            assert!(training_subsample(&corpus, &plan, 0, percent, 5).is_err());
        }
    }

    proptest! {
        #[test]
        fn folds_partition_the_corpus(
            n_legit in 1usize..120,
            n_spam in 1usize..40,
            k in 2usize..12,
            seed in 0u64..1000,
        ) {
            let corpus = synthetic_corpus(n_legit, n_spam);
            prop_assume!(k <= corpus.len());
            let plan = make_folds(&corpus, k, seed).unwrap();

            // Every message in exactly one fold; sizes differ by at most 1.
            let sizes = plan.fold_sizes();
            prop_assert_eq!(sizes.iter().sum::<usize>(), corpus.len());
            let max = *sizes.iter().max().unwrap();
            let min = *sizes.iter().min().unwrap();
            prop_assert!(max - min <= 1);

            // Stratification: per-fold spam within 1 of the expected floor.
            let total = corpus.len() as f64;
            let rate = corpus.n_spam() as f64 / total;
            let mut spam_per_fold = vec![0usize; k];
            for (i, m) in corpus.messages().iter().enumerate() {
                if m.label.is_spam() {
                    spam_per_fold[plan.fold_of_index(i)] += 1;
                }
            }
            for (f, &s) in spam_per_fold.iter().enumerate() {
                let expect = (sizes[f] as f64 * rate).floor() as usize;
                prop_assert!(s.abs_diff(expect) <= 1);
            }
        }

        #[test]
        fn subsample_sizes_are_monotone_in_percent(
            n_legit in 5usize..60,
            n_spam in 2usize..20,
            seed in 0u64..100,
        ) {
            let corpus = synthetic_corpus(n_legit, n_spam);
            let plan = make_folds(&corpus, 5, seed).unwrap();
            let mut last = 0usize;
            for percent in (10..=100).step_by(10) {
                let sub = subsample_indices(&plan, 0, percent, seed).unwrap();
                prop_assert!(sub.len() >= last);
                last = sub.len();
            }
        }

        #[test]
        fn subsample_is_deterministic(seed in 0u64..500) {
            let corpus = synthetic_corpus(30, 10);
            let plan = make_folds(&corpus, 5, seed).unwrap();
            let a = subsample_indices(&plan, 2, 30, seed).unwrap();
            let b = subsample_indices(&plan, 2, 30, seed).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
