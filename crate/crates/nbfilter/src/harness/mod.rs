//! Experiment orchestration: stratified k-fold cross-validation for one
//! configuration, attribute-count sweeps, learning curves, and the full
//! pipeline-by-lambda configuration table.
//!
//! Per fold, everything the model sees — candidate words, MI ranking,
//! probability estimates — is computed from that fold's training split
//! only. Attribute selection at several counts reuses one ranking because
//! the top-m set is a prefix of the full ordering, and posteriors at
//! several counts come from checkpoints of one left-to-right accumulation,
//! so a sweep row is numerically identical to a standalone run at that
//! count. Fold evaluation runs on rayon under the `parallel` feature.

mod report;

pub use report::{
    write_aggregate_csv, write_curve_csv, write_folds_csv, write_sweep_csv, write_table_csv,
    AGGREGATE_HEADER,
};

use std::collections::HashMap;
use std::collections::HashSet;

use crate::classifier::{bit_counts, model_from_counts, CostConfig, Estimator};
use crate::corpus::{self, Corpus, FoldPlan, Label};
use crate::error::{Error, Result};
use crate::exec;
use crate::features::{
    collect_candidates_indexed, select_attributes, vectorize, AttributeSet, BinaryVector,
};
use crate::metrics::{
    baseline_weighted, paired_t_test, spam_precision_recall, total_cost_ratio, ConfusionCounts,
    MetricsReport,
};
use crate::textproc::{preprocess_corpus, PipelineChoice, PipelineConfig, TokenizedMessage};

/// Seed used by the CLI when none is given, so published CSVs reproduce.
pub const DEFAULT_SEED: u64 = 42;

/// The cost ratios of the three filtering scenarios.
pub const DEFAULT_LAMBDAS: [f64; 3] = [1.0, 9.0, 999.0];

/// The standard attribute-count axis: 50 to 700 by 50.
pub fn default_attribute_counts() -> Vec<usize> {
    (1..=14).map(|i| i * 50).collect()
}

/// The standard learning-curve axis: 10% to 100% by 10.
pub fn default_train_percents() -> Vec<u32> {
    (1..=10).map(|i| i * 10).collect()
}

/// Everything one cross-validated run needs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub pipeline: PipelineChoice,
    pub lambda: f64,
    pub attribute_count: usize,
    pub estimator: Estimator,
    pub folds: usize,
    pub seed: u64,
    /// Percent of each training part used (learning curves); 100 = all.
    pub train_percent: u32,
    /// Select attributes once from the whole corpus instead of per fold.
    /// This leaks test data into selection; for sensitivity checks only.
    pub global_selection: bool,
    /// Use the corpus's published part structure as the fold assignment.
    pub parts_as_folds: bool,
    /// Minimum document frequency for candidate words; 1 keeps all.
    pub min_doc_freq: usize,
    /// Replacement stop-list (the bundled list otherwise).
    pub custom_stoplist: Option<HashSet<String>>,
    /// Replacement lemma table (the bundled table otherwise).
    pub custom_lemmas: Option<HashMap<String, String>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineChoice::Bare,
            lambda: 1.0,
            attribute_count: 100,
            estimator: Estimator::default(),
            folds: 10,
            seed: DEFAULT_SEED,
            train_percent: 100,
            global_selection: false,
            parts_as_folds: false,
            min_doc_freq: 1,
            custom_stoplist: None,
            custom_lemmas: None,
        }
    }
}

impl ExperimentConfig {
    pub fn pipeline_config(&self) -> PipelineConfig {
        let mut config = PipelineConfig::new(
            self.pipeline.use_lemmatizer(),
            self.pipeline.use_stoplist(),
        );
        if let Some(stoplist) = &self.custom_stoplist {
            config = config.with_stoplist(stoplist.clone());
        }
        if let Some(table) = &self.custom_lemmas {
            config = config.with_lemma_table(table.clone());
        }
        config
    }

    fn validate(&self) -> Result<()> {
        CostConfig::from_lambda(self.lambda)?;
        self.estimator.validate()?;
        if self.attribute_count < 1 {
            return Err(Error::InvalidArgument(
                "attribute count must be at least 1".into(),
            ));
        }
        if self.min_doc_freq < 1 {
            return Err(Error::InvalidArgument(
                "minimum document frequency must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of testing on one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    pub counts: ConfusionCounts,
    pub metrics: MetricsReport,
    /// Attributes actually available (vocabulary may be smaller than m).
    pub effective_attributes: usize,
    pub training_size: usize,
}

/// Cross-validated results for one configuration: per-fold outcomes plus
/// fold-averaged (macro) scores, pooled (micro) precision/recall, the
/// corpus-level baseline, and TCR computed from the averaged weighted
/// error.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub pipeline: PipelineChoice,
    pub lambda: f64,
    pub requested_attributes: usize,
    pub effective_attributes: usize,
    pub folds: Vec<FoldOutcome>,
    pub sr_macro: Option<f64>,
    pub sp_macro: Option<f64>,
    pub sr_micro: Option<f64>,
    pub sp_micro: Option<f64>,
    pub pooled: ConfusionCounts,
    pub acc: f64,
    pub wacc: f64,
    pub werr: f64,
    pub wacc_b: f64,
    pub werr_b: f64,
    pub tcr: f64,
}

impl ExperimentReport {
    pub fn fold_waccs(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.metrics.wacc).collect()
    }
}

/// Per-fold confusion counts over a (attribute count, lambda) grid.
struct FoldGrid {
    fold: usize,
    training_size: usize,
    /// min(requested count, ranking length), per requested count.
    effective: Vec<usize>,
    /// cells[count_index][lambda_index]
    cells: Vec<Vec<ConfusionCounts>>,
}

fn fold_class_error(fold: usize, e: Error) -> Error {
    match e {
        Error::MissingClass(class) => Error::FoldMissingClass { fold, class },
        other => other,
    }
}

fn evaluate_fold_grid(
    tokenized: &[TokenizedMessage],
    plan: &FoldPlan,
    test_fold: usize,
    cfg: &ExperimentConfig,
    counts: &[usize],
    costs: &[CostConfig],
    global_attrs: Option<&AttributeSet>,
) -> Result<FoldGrid> {
    let train_idx = corpus::subsample_indices(plan, test_fold, cfg.train_percent, cfg.seed)?;
    let test_idx = plan.test_indices(test_fold);
    debug_assert!(train_idx.iter().all(|i| !test_idx.contains(i)));

    let m_max = *counts.last().expect("counts validated non-empty");
    let selected;
    let attrs = match global_attrs {
        Some(attrs) => attrs,
        None => {
            let candidates = collect_candidates_indexed(tokenized, &train_idx, cfg.min_doc_freq)
                .map_err(|e| fold_class_error(test_fold, e))?;
            selected = select_attributes(&candidates, m_max)?;
            &selected
        }
    };
    let effective: Vec<usize> = counts.iter().map(|&c| c.min(attrs.len())).collect();

    let training_vectors: Vec<BinaryVector> = train_idx
        .iter()
        .map(|&i| vectorize(&tokenized[i], attrs))
        .collect();
    let sufficient = bit_counts(&training_vectors).map_err(|e| fold_class_error(test_fold, e))?;
    let model = model_from_counts(&sufficient, attrs.len(), cfg.estimator);

    let mut cells = vec![vec![ConfusionCounts::default(); costs.len()]; counts.len()];
    for &ti in &test_idx {
        let message = &tokenized[ti];
        let v = vectorize(message, attrs);
        let posteriors = model.posteriors_at_checkpoints(v.bits(), &effective);
        for (ci, &(posterior_spam, _)) in posteriors.iter().enumerate() {
            for (li, cost) in costs.iter().enumerate() {
                let predicted = if posterior_spam > cost.threshold() {
                    Label::Spam
                } else {
                    Label::Legitimate
                };
                cells[ci][li].record(message.label, predicted);
            }
        }
    }

    Ok(FoldGrid {
        fold: test_fold,
        training_size: train_idx.len(),
        effective,
        cells,
    })
}

struct GridRun {
    folds: Vec<FoldGrid>,
}

fn maybe_global_attrs(
    tokenized: &[TokenizedMessage],
    cfg: &ExperimentConfig,
    m_max: usize,
) -> Result<Option<AttributeSet>> {
    if !cfg.global_selection {
        return Ok(None);
    }
    let indices: Vec<usize> = (0..tokenized.len()).collect();
    let candidates = collect_candidates_indexed(tokenized, &indices, cfg.min_doc_freq)?;
    Ok(Some(select_attributes(&candidates, m_max)?))
}

fn run_grid(corpus: &Corpus, cfg: &ExperimentConfig, counts: &[usize], lambdas: &[f64]) -> Result<GridRun> {
    cfg.validate()?;
    if counts.is_empty() || !counts.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "attribute counts must be non-empty and strictly increasing".into(),
        ));
    }
    if counts[0] < 1 {
        return Err(Error::InvalidArgument(
            "attribute count must be at least 1".into(),
        ));
    }
    let costs: Vec<CostConfig> = lambdas
        .iter()
        .map(|&l| CostConfig::from_lambda(l))
        .collect::<Result<_>>()?;

    let plan = if cfg.parts_as_folds {
        corpus::folds_from_parts(corpus)?
    } else {
        corpus::make_folds(corpus, cfg.folds, cfg.seed)?
    };
    let tokenized = preprocess_corpus(corpus, &cfg.pipeline_config());
    let global_attrs = maybe_global_attrs(&tokenized, cfg, *counts.last().unwrap())?;

    let outcomes = exec::map_indexed(plan.k(), |fold| {
        evaluate_fold_grid(
            &tokenized,
            &plan,
            fold,
            cfg,
            counts,
            &costs,
            global_attrs.as_ref(),
        )
    });
    let folds = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(GridRun { folds })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    if defined.is_empty() {
        None
    } else {
        Some(mean(&defined))
    }
}

fn assemble_report(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    grid: &GridRun,
    count_index: usize,
    lambda_index: usize,
    requested: usize,
    lambda: f64,
) -> ExperimentReport {
    let folds: Vec<FoldOutcome> = grid
        .folds
        .iter()
        .map(|fg| {
            let counts = fg.cells[count_index][lambda_index];
            FoldOutcome {
                fold: fg.fold,
                counts,
                metrics: MetricsReport::from_counts(&counts, lambda),
                effective_attributes: fg.effective[count_index],
                training_size: fg.training_size,
            }
        })
        .collect();
    finish_report(corpus, cfg, requested, lambda, folds)
}

fn finish_report(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    requested: usize,
    lambda: f64,
    folds: Vec<FoldOutcome>,
) -> ExperimentReport {
    let mut pooled = ConfusionCounts::default();
    for f in &folds {
        pooled.merge(&f.counts);
    }
    let (sp_micro, sr_micro) = spam_precision_recall(&pooled);
    let sr_macro = mean_defined(folds.iter().map(|f| f.metrics.sr));
    let sp_macro = mean_defined(folds.iter().map(|f| f.metrics.sp));
    let acc = mean(&folds.iter().map(|f| f.metrics.acc).collect::<Vec<_>>());
    let wacc = mean(&folds.iter().map(|f| f.metrics.wacc).collect::<Vec<_>>());
    let werrs: Vec<f64> = folds.iter().map(|f| f.metrics.werr).collect();
    let werr = mean(&werrs);
    let (wacc_b, werr_b) = baseline_weighted(corpus.n_legitimate(), corpus.n_spam(), lambda);
    let tcr = total_cost_ratio(werr_b, &werrs);
    let effective_attributes = folds
        .iter()
        .map(|f| f.effective_attributes)
        .max()
        .unwrap_or(0);

    ExperimentReport {
        pipeline: cfg.pipeline,
        lambda,
        requested_attributes: requested,
        effective_attributes,
        folds,
        sr_macro,
        sp_macro,
        sr_micro,
        sp_micro,
        pooled,
        acc,
        wacc,
        werr,
        wacc_b,
        werr_b,
        tcr,
    }
}

/// Evaluates one fold of a prepared (tokenized) corpus under `cfg`. The
/// building block of [`run_cross_validation`]; exposed so callers can
/// drive folds themselves (benchmarks, custom schedules).
pub fn run_fold(
    tokenized: &[TokenizedMessage],
    plan: &FoldPlan,
    test_fold: usize,
    cfg: &ExperimentConfig,
) -> Result<FoldOutcome> {
    cfg.validate()?;
    let counts = [cfg.attribute_count];
    let costs = [CostConfig::from_lambda(cfg.lambda)?];
    let global_attrs = maybe_global_attrs(tokenized, cfg, cfg.attribute_count)?;
    let fg = evaluate_fold_grid(
        tokenized,
        plan,
        test_fold,
        cfg,
        &counts,
        &costs,
        global_attrs.as_ref(),
    )?;
    let counts = fg.cells[0][0];
    Ok(FoldOutcome {
        fold: fg.fold,
        counts,
        metrics: MetricsReport::from_counts(&counts, cfg.lambda),
        effective_attributes: fg.effective[0],
        training_size: fg.training_size,
    })
}

/// Full k-fold cross-validation of one configuration.
pub fn run_cross_validation(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let grid = run_grid(corpus, cfg, &[cfg.attribute_count], &[cfg.lambda])?;
    Ok(assemble_report(
        corpus,
        cfg,
        &grid,
        0,
        0,
        cfg.attribute_count,
        cfg.lambda,
    ))
}

/// Reports along an increasing axis (attribute counts or train percents).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Vec<usize>,
    pub reports: Vec<ExperimentReport>,
}

impl SweepResult {
    /// The point with the highest TCR; +infinity sorts above every finite
    /// value and ties go to the smaller axis value.
    pub fn best_by_tcr(&self) -> (usize, &ExperimentReport) {
        let mut best = 0;
        for i in 1..self.reports.len() {
            if self.reports[i].tcr > self.reports[best].tcr {
                best = i;
            }
        }
        (self.axis[best], &self.reports[best])
    }
}

/// Cross-validates `cfg` at every attribute count in `counts` (strictly
/// increasing), sharing fold plans, preprocessing, and rankings.
pub fn attribute_sweep(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    counts: &[usize],
) -> Result<SweepResult> {
    let grid = run_grid(corpus, cfg, counts, &[cfg.lambda])?;
    let reports = counts
        .iter()
        .enumerate()
        .map(|(ci, &count)| assemble_report(corpus, cfg, &grid, ci, 0, count, cfg.lambda))
        .collect();
    Ok(SweepResult {
        axis: counts.to_vec(),
        reports,
    })
}

/// Cross-validates `cfg` at every training percentage in `percents`
/// (strictly increasing values from 10, 20, ..., 100).
pub fn learning_curve(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    percents: &[u32],
) -> Result<SweepResult> {
    if percents.is_empty() || !percents.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "train percents must be non-empty and strictly increasing".into(),
        ));
    }
    let mut reports = Vec::with_capacity(percents.len());
    for &percent in percents {
        let mut point_cfg = cfg.clone();
        point_cfg.train_percent = percent;
        reports.push(run_cross_validation(corpus, &point_cfg)?);
    }
    Ok(SweepResult {
        axis: percents.iter().map(|&p| p as usize).collect(),
        reports,
    })
}

/// One row of the configuration table: a pipeline at one lambda, reported
/// at its best-TCR attribute count, with a paired one-tailed t-test on
/// per-fold weighted accuracy against the bare pipeline at the same
/// lambda (`None` for the bare row itself).
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub report: ExperimentReport,
    pub best_attributes: usize,
    pub p_vs_bare: Option<f64>,
}

/// The full configuration grid, lambda-major, pipelines in the order
/// bare, stop, lemma, lemma+stop within each lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
}

/// Sweeps every pipeline over `counts`, picks the best-TCR count per
/// (pipeline, lambda), and attaches significance tests against bare.
pub fn run_table(
    corpus: &Corpus,
    cfg: &ExperimentConfig,
    counts: &[usize],
    lambdas: &[f64],
) -> Result<TableReport> {
    // best[pipeline][lambda] = (axis value, report)
    let mut best: Vec<Vec<(usize, ExperimentReport)>> = Vec::with_capacity(4);
    for &pipeline in &PipelineChoice::ALL {
        let mut pipeline_cfg = cfg.clone();
        pipeline_cfg.pipeline = pipeline;
        let grid = run_grid(corpus, &pipeline_cfg, counts, lambdas)?;
        let mut per_lambda = Vec::with_capacity(lambdas.len());
        for (li, &lambda) in lambdas.iter().enumerate() {
            let reports: Vec<ExperimentReport> = counts
                .iter()
                .enumerate()
                .map(|(ci, &count)| {
                    assemble_report(corpus, &pipeline_cfg, &grid, ci, li, count, lambda)
                })
                .collect();
            let sweep = SweepResult {
                axis: counts.to_vec(),
                reports,
            };
            let (best_count, _) = sweep.best_by_tcr();
            let index = sweep.axis.iter().position(|&c| c == best_count).unwrap();
            per_lambda.push((best_count, sweep.reports[index].clone()));
        }
        best.push(per_lambda);
    }

    let mut rows = Vec::with_capacity(4 * lambdas.len());
    let bare_waccs: Vec<Vec<f64>> = best[0].iter().map(|(_, r)| r.fold_waccs()).collect();
    for (li, bare) in bare_waccs.iter().enumerate() {
        for (pi, per_lambda) in best.iter().enumerate() {
            let (best_attributes, report) = per_lambda[li].clone();
            let p_vs_bare = if pi == 0 {
                None
            } else {
                Some(paired_t_test(&report.fold_waccs(), bare)?)
            };
            rows.push(TableRow {
                report,
                best_attributes,
                p_vs_bare,
            });
        }
    }
    Ok(TableReport { rows })
}
