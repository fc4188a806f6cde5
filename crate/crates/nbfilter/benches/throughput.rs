//! Throughput of the data-parallel inner loops against their sequential
//! fallbacks: batch preprocessing and full cross-validation. With the
//! default `parallel` feature the library paths run on rayon and the
//! `sequential` entries here drive the same per-item functions in a plain
//! loop; built with `--no-default-features` both entries are sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nbfilter::corpus::{Corpus, Label, Message};
use nbfilter::harness::{run_cross_validation, run_fold, ExperimentConfig};
use nbfilter::textproc::{preprocess, preprocess_corpus, PipelineChoice};

/// Synthetic corpus with a vocabulary large enough to exercise selection.
fn synthetic_corpus(n_messages: usize) -> Corpus {
    let mut messages = Vec::with_capacity(n_messages);
    let mut state = 0x2545f491u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    for i in 0..n_messages {
        let spam = i % 6 == 0;
        let pool: &[&str] = if spam {
            &["free", "money", "offer", "cash", "win", "adult", "cheap", "click"]
        } else {
            &["meeting", "paper", "language", "draft", "review", "project", "session", "notes"]
        };
        let mut words = Vec::new();
        for _ in 0..40 {
            words.push(pool[next() % pool.len()].to_string());
            words.push(format!("filler{}", next() % 400));
        }
        messages.push(Message {
            id: format!("{}{i:05}", if spam { "spmsg" } else { "msg" }),
            subject: words[0].clone(),
            body: words.join(" "),
            label: if spam { Label::Spam } else { Label::Legitimate },
        });
    }
    Corpus::new(messages).unwrap()
}

fn bench_preprocess(c: &mut Criterion) {
    let corpus = synthetic_corpus(1200);
    let config = PipelineChoice::LemmatizerStoplist.config();

    let mut group = c.benchmark_group("preprocess");
    group.bench_function(BenchmarkId::new("library", "1200"), |b| {
        b.iter(|| black_box(preprocess_corpus(&corpus, &config)))
    });
    group.bench_function(BenchmarkId::new("sequential", "1200"), |b| {
        b.iter(|| {
            let out: Vec<_> = corpus
                .messages()
                .iter()
                .map(|m| preprocess(m, &config))
                .collect();
            black_box(out)
        })
    });
    group.finish();
}

fn bench_cross_validation(c: &mut Criterion) {
    let corpus = synthetic_corpus(400);
    let cfg = ExperimentConfig {
        pipeline: PipelineChoice::LemmatizerStoplist,
        attribute_count: 50,
        ..Default::default()
    };

    let mut group = c.benchmark_group("cross_validation");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new("library", "400x50"), |b| {
        b.iter(|| black_box(run_cross_validation(&corpus, &cfg).unwrap()))
    });
    // Same pipeline stages as the library path, driven in a plain loop.
    group.bench_function(BenchmarkId::new("sequential", "400x50"), |b| {
        let config = cfg.pipeline_config();
        b.iter(|| {
            let plan = nbfilter::corpus::make_folds(&corpus, cfg.folds, cfg.seed).unwrap();
            let tokenized: Vec<_> = corpus
                .messages()
                .iter()
                .map(|m| preprocess(m, &config))
                .collect();
            let folds: Vec<_> = (0..plan.k())
                .map(|f| run_fold(&tokenized, &plan, f, &cfg).unwrap())
                .collect();
            black_box(folds)
        })
    });
    group.finish();
}

criterion_group!(benches, bench_preprocess, bench_cross_validation);
criterion_main!(benches);
