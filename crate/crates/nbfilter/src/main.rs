//! Experiment CLI: corpus statistics, cross-validated runs, attribute
//! sweeps, learning curves, the full configuration table, and
//! single-message filtering against a saved model.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use nbfilter::classifier::{Estimator, SavedModel};
use nbfilter::corpus::{self, Corpus, DEFAULT_SPAM_PREFIX};
use nbfilter::features::{vectorize, AttributeSet};
use nbfilter::harness::{
    attribute_sweep, learning_curve, run_cross_validation, run_table, write_aggregate_csv,
    write_curve_csv, write_folds_csv, write_sweep_csv, write_table_csv, ExperimentConfig,
    DEFAULT_LAMBDAS, DEFAULT_SEED,
};
use nbfilter::textproc::{
    self, preprocess, preprocess_corpus, PipelineChoice, PipelineConfig,
};

#[derive(Parser)]
#[command(name = "nbfilter", version, about = "Cost-sensitive naive Bayes spam filtering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus root: part subdirectories or a flat directory of messages
    corpus: PathBuf,

    /// Filename prefix marking spam messages
    #[arg(long, default_value = DEFAULT_SPAM_PREFIX)]
    spam_prefix: String,
}

#[derive(Args)]
struct WordListArgs {
    /// Stop-list file replacing the bundled one (one word per line)
    #[arg(long)]
    stoplist: Option<PathBuf>,

    /// Lemma table file replacing the bundled one (two columns per line)
    #[arg(long)]
    lemmas: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Cross-validation fold count
    #[arg(long, default_value_t = 10)]
    folds: usize,

    /// Seed for fold assignment and subsampling
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Probability estimator: raw[:epsilon] or laplace[:alpha]
    #[arg(long, default_value = "raw")]
    estimator: String,

    /// Use the corpus's part directories as folds instead of seeded folds
    #[arg(long)]
    parts_as_folds: bool,

    /// Select attributes once from the whole corpus (leaks test data into
    /// selection; for sensitivity comparison only)
    #[arg(long)]
    global_selection: bool,

    /// Minimum document frequency for candidate attributes
    #[arg(long, default_value_t = 1)]
    min_df: usize,

    /// Directory for CSV reports
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus composition and vocabulary size per pipeline
    Stats {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Ten-fold cross-validation of one configuration
    Cv {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Pipeline: bare, stop, lemma, or lemma+stop
        #[arg(long, value_parser = parse_pipeline)]
        pipeline: PipelineChoice,
        /// Cost ratio lambda
        #[arg(long)]
        lambda: f64,
        /// Number of retained attributes
        #[arg(long)]
        attrs: usize,
        /// Percent of each training part used
        #[arg(long, default_value_t = 100)]
        train_percent: u32,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Attribute-count sweep over all four pipelines
    Sweep {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        lambda: f64,
        /// Counts as start:end:step, a comma list, or one value
        #[arg(long, default_value = "50:700:50")]
        attrs: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Learning curve: TCR against training-corpus percentage
    Curve {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        attrs: usize,
        /// Percents as start:end:step, a comma list, or one value
        #[arg(long, default_value = "10:100:10")]
        percents: String,
        #[arg(long, value_parser = parse_pipeline, default_value = "lemma+stop")]
        pipeline: PipelineChoice,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Full configuration grid: 4 pipelines x 3 lambdas at best counts
    Table2 {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Counts swept per row, as start:end:step, comma list, or value
        #[arg(long, default_value = "50:700:50")]
        attrs: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Train on a whole corpus and write a model file
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_parser = parse_pipeline, default_value = "lemma+stop")]
        pipeline: PipelineChoice,
        #[arg(long)]
        attrs: usize,
        #[arg(long, default_value = "raw")]
        estimator: String,
        #[arg(long, default_value_t = 1)]
        min_df: usize,
        /// Model file to write
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        lists: WordListArgs,
    },
    /// Classify one message file against a saved model
    Classify {
        /// Model file written by `train`
        model: PathBuf,
        /// Message file (subject line, blank line, body)
        message: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        lists: WordListArgs,
    },
}

fn parse_pipeline(s: &str) -> Result<PipelineChoice, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_estimator(s: &str) -> Result<Estimator> {
    let est = match s.split_once(':') {
        None => match s {
            "raw" => Estimator::default(),
            "laplace" => Estimator::Laplace { alpha: 1.0 },
            other => bail!("unknown estimator {other:?}; expected raw[:eps] or laplace[:alpha]"),
        },
        Some(("raw", eps)) => Estimator::RawWithFloor {
            epsilon: eps.parse().context("bad raw floor epsilon")?,
        },
        Some(("laplace", alpha)) => Estimator::Laplace {
            alpha: alpha.parse().context("bad laplace alpha")?,
        },
        Some((other, _)) => bail!("unknown estimator {other:?}"),
    };
    est.validate()?;
    Ok(est)
}

/// Accepts `start:end:step`, `a,b,c`, or a single integer.
fn parse_axis(s: &str) -> Result<Vec<usize>> {
    let values: Vec<usize> = if let Some((start, rest)) = s.split_once(':') {
        let (end, step) = rest
            .split_once(':')
            .context("range must be start:end:step")?;
        let (start, end, step): (usize, usize, usize) =
            (start.parse()?, end.parse()?, step.parse()?);
        if step == 0 {
            bail!("range step must be positive");
        }
        (start..=end).step_by(step).collect()
    } else if s.contains(',') {
        s.split(',')
            .map(|v| v.trim().parse().context("bad axis value"))
            .collect::<Result<_>>()?
    } else {
        vec![s.parse()?]
    };
    if values.is_empty() {
        bail!("axis {s:?} produced no values");
    }
    Ok(values)
}

fn load_corpus(args: &CorpusArgs) -> Result<Corpus> {
    let outcome = corpus::load_corpus(&args.corpus, &args.spam_prefix)?;
    for skipped in &outcome.skipped {
        eprintln!(
            "warning: skipped {}: {}",
            skipped.path.display(),
            skipped.reason
        );
    }
    if !outcome.skipped.is_empty() {
        eprintln!("warning: {} file(s) skipped", outcome.skipped.len());
    }
    Ok(outcome.corpus)
}

struct WordLists {
    stoplist: Option<std::collections::HashSet<String>>,
    lemmas: Option<std::collections::HashMap<String, String>>,
}

fn load_word_lists(args: &WordListArgs) -> Result<WordLists> {
    Ok(WordLists {
        stoplist: args
            .stoplist
            .as_deref()
            .map(textproc::load_stoplist)
            .transpose()?,
        lemmas: args
            .lemmas
            .as_deref()
            .map(textproc::load_lemma_table)
            .transpose()?,
    })
}

fn build_config(
    pipeline: PipelineChoice,
    lambda: f64,
    attrs: usize,
    train_percent: u32,
    run: &RunArgs,
    lists: WordLists,
) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        pipeline,
        lambda,
        attribute_count: attrs,
        estimator: parse_estimator(&run.estimator)?,
        folds: run.folds,
        seed: run.seed,
        train_percent,
        global_selection: run.global_selection,
        parts_as_folds: run.parts_as_folds,
        min_doc_freq: run.min_df,
        custom_stoplist: lists.stoplist,
        custom_lemmas: lists.lemmas,
    })
}

fn write_report(path: &Path, render: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut buf = Vec::new();
    render(&mut buf)?;
    fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn fmt_lambda(lambda: f64) -> String {
    format!("{lambda}").replace('.', "p")
}

fn cmd_stats(corpus_args: CorpusArgs, lists: WordListArgs) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let lists = load_word_lists(&lists)?;
    println!("messages {}", corpus.len());
    println!("legitimate {}", corpus.n_legitimate());
    println!("spam {}", corpus.n_spam());
    println!("spam_fraction {:.6}", corpus.spam_fraction());
    for choice in PipelineChoice::ALL {
        let mut config = PipelineConfig::new(choice.use_lemmatizer(), choice.use_stoplist());
        if let Some(s) = &lists.stoplist {
            config = config.with_stoplist(s.clone());
        }
        if let Some(t) = &lists.lemmas {
            config = config.with_lemma_table(t.clone());
        }
        let vocabulary: BTreeSet<String> = preprocess_corpus(&corpus, &config)
            .into_iter()
            .flat_map(|m| m.tokens)
            .collect();
        println!("vocabulary_{} {}", choice.file_tag(), vocabulary.len());
    }
    Ok(())
}

fn cmd_cv(
    corpus_args: CorpusArgs,
    pipeline: PipelineChoice,
    lambda: f64,
    attrs: usize,
    train_percent: u32,
    run: RunArgs,
    lists: WordListArgs,
) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let lists = load_word_lists(&lists)?;
    let cfg = build_config(pipeline, lambda, attrs, train_percent, &run, lists)?;
    let report = run_cross_validation(&corpus, &cfg)?;

    let tag = format!(
        "cv_{}_lambda{}_m{}",
        pipeline.file_tag(),
        fmt_lambda(lambda),
        attrs
    );
    write_report(&run.out.join(format!("{tag}.csv")), |w| {
        write_aggregate_csv(w, &report)
    })?;
    write_report(&run.out.join(format!("{tag}_folds.csv")), |w| {
        write_folds_csv(w, &report)
    })?;

    let mut stdout = Vec::new();
    write_aggregate_csv(&mut stdout, &report)?;
    print!("{}", String::from_utf8_lossy(&stdout));
    Ok(())
}

fn cmd_sweep(
    corpus_args: CorpusArgs,
    lambda: f64,
    attrs: String,
    run: RunArgs,
    lists: WordListArgs,
) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let counts = parse_axis(&attrs)?;
    let lists = load_word_lists(&lists)?;

    for pipeline in PipelineChoice::ALL {
        let cfg = build_config(
            pipeline,
            lambda,
            *counts.last().unwrap(),
            100,
            &run,
            WordLists {
                stoplist: lists.stoplist.clone(),
                lemmas: lists.lemmas.clone(),
            },
        )?;
        let sweep = attribute_sweep(&corpus, &cfg, &counts)?;
        let path = run.out.join(format!(
            "sweep_{}_lambda{}.csv",
            pipeline.file_tag(),
            fmt_lambda(lambda)
        ));
        write_report(&path, |w| write_sweep_csv(w, &sweep))?;
        let (best, report) = sweep.best_by_tcr();
        println!(
            "{}: best attrs {} (tcr {})",
            pipeline,
            best,
            if report.tcr.is_infinite() {
                "inf".to_string()
            } else {
                format!("{:.4}", report.tcr)
            }
        );
    }
    Ok(())
}

fn cmd_curve(
    corpus_args: CorpusArgs,
    lambda: f64,
    attrs: usize,
    percents: String,
    pipeline: PipelineChoice,
    run: RunArgs,
    lists: WordListArgs,
) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let percents: Vec<u32> = parse_axis(&percents)?.into_iter().map(|p| p as u32).collect();
    let lists = load_word_lists(&lists)?;
    let cfg = build_config(pipeline, lambda, attrs, 100, &run, lists)?;
    let curve = learning_curve(&corpus, &cfg, &percents)?;

    let path = run.out.join(format!(
        "curve_{}_lambda{}_m{}.csv",
        pipeline.file_tag(),
        fmt_lambda(lambda),
        attrs
    ));
    write_report(&path, |w| write_curve_csv(w, &curve))?;
    Ok(())
}

fn cmd_table2(
    corpus_args: CorpusArgs,
    attrs: String,
    run: RunArgs,
    lists: WordListArgs,
) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let counts = parse_axis(&attrs)?;
    let lists = load_word_lists(&lists)?;
    let cfg = build_config(
        PipelineChoice::Bare,
        1.0,
        *counts.last().unwrap(),
        100,
        &run,
        lists,
    )?;
    let table = run_table(&corpus, &cfg, &counts, &DEFAULT_LAMBDAS)?;

    write_report(&run.out.join("table2.csv"), |w| write_table_csv(w, &table))?;
    let mut stdout = Vec::new();
    write_table_csv(&mut stdout, &table)?;
    print!("{}", String::from_utf8_lossy(&stdout));
    Ok(())
}

fn cmd_train(
    corpus_args: CorpusArgs,
    pipeline: PipelineChoice,
    attrs: usize,
    estimator: String,
    min_df: usize,
    output: PathBuf,
    lists: WordListArgs,
) -> Result<()> {
    let corpus = load_corpus(&corpus_args)?;
    let lists = load_word_lists(&lists)?;
    let mut config = pipeline.config();
    if let Some(s) = &lists.stoplist {
        config = config.with_stoplist(s.clone());
    }
    if let Some(t) = &lists.lemmas {
        config = config.with_lemma_table(t.clone());
    }

    let tokenized = preprocess_corpus(&corpus, &config);
    let candidates = nbfilter::features::collect_candidates_with_min_df(&tokenized, min_df)?;
    let selected = nbfilter::features::select_attributes(&candidates, attrs)?;
    let vectors: Vec<_> = tokenized.iter().map(|m| vectorize(m, &selected)).collect();
    let model = nbfilter::classifier::train(&vectors, parse_estimator(&estimator)?)?;

    let saved = SavedModel {
        model,
        words: selected.words(),
        pipeline,
    };
    if let Some(dir) = output.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    saved.save(&output)?;
    println!(
        "trained on {} messages ({} spam), {} attributes -> {}",
        corpus.len(),
        corpus.n_spam(),
        selected.len(),
        output.display()
    );

    let attrs_path = output.with_extension("attrs.tsv");
    let mut buf = Vec::new();
    selected.write_tsv(&mut buf)?;
    fs::write(&attrs_path, &buf)?;
    println!("wrote {}", attrs_path.display());
    Ok(())
}

fn cmd_classify(
    model_path: PathBuf,
    message_path: PathBuf,
    lambda: f64,
    lists: WordListArgs,
) -> Result<()> {
    let saved = SavedModel::load(&model_path)?;
    let lists = load_word_lists(&lists)?;
    let mut config = saved.pipeline.config();
    if let Some(s) = &lists.stoplist {
        config = config.with_stoplist(s.clone());
    }
    if let Some(t) = &lists.lemmas {
        config = config.with_lemma_table(t.clone());
    }

    let message = corpus::read_message(&message_path)?;
    let tokenized = preprocess(&message, &config);
    let attrs = AttributeSet::from_words(saved.words.clone());
    let vector = vectorize(&tokenized, &attrs);
    let cost = nbfilter::classifier::CostConfig::from_lambda(lambda)?;
    let decision = saved.model.classify(&vector, cost)?;

    let mut out = std::io::stdout().lock();
    writeln!(out, "{}\t{:.9}", decision.verdict, decision.posterior_spam)?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Stats { corpus, lists } => cmd_stats(corpus, lists),
        Command::Cv {
            corpus,
            pipeline,
            lambda,
            attrs,
            train_percent,
            run,
            lists,
        } => cmd_cv(corpus, pipeline, lambda, attrs, train_percent, run, lists),
        Command::Sweep {
            corpus,
            lambda,
            attrs,
            run,
            lists,
        } => cmd_sweep(corpus, lambda, attrs, run, lists),
        Command::Curve {
            corpus,
            lambda,
            attrs,
            percents,
            pipeline,
            run,
            lists,
        } => cmd_curve(corpus, lambda, attrs, percents, pipeline, run, lists),
        Command::Table2 { corpus, attrs, run, lists } => cmd_table2(corpus, attrs, run, lists),
        Command::Train {
            corpus,
            pipeline,
            attrs,
            estimator,
            min_df,
            output,
            lists,
        } => cmd_train(corpus, pipeline, attrs, estimator, min_df, output, lists),
        Command::Classify {
            model,
            message,
            lambda,
            lists,
        } => cmd_classify(model, message, lambda, lists),
    }
}
