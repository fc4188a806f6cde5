//! Cost-sensitive naive Bayes spam filtering with a cross-validation
//! experiment harness.
//!
//! The pipeline: load a labeled message corpus from disk, normalize each
//! message into a set of distinct words ([`textproc`]), rank candidate words
//! by mutual information with the category and keep the top `m` as binary
//! attributes ([`features`]), train a two-class naive Bayes model and decide
//! spam/legitimate against a cost-derived posterior threshold
//! ([`classifier`]), then score runs with cost-sensitive measures —
//! weighted accuracy, baseline weighted accuracy, and the total cost ratio
//! ([`metrics`]). The [`harness`] module drives stratified k-fold
//! cross-validation, attribute-count sweeps, learning curves, and the full
//! configuration grid behind the `nbfilter` CLI.
//!
//! Fold evaluation and batch preprocessing run on rayon when the default
//! `parallel` feature is enabled; disabling it yields a fully sequential
//! build with identical results.
//!
//! ```
//! use nbfilter::classifier::CostConfig;
//!
//! // A blocked legitimate message costs as much as 999 passed spam messages.
//! let cost = CostConfig::from_lambda(999.0).unwrap();
//! assert_eq!(cost.threshold(), 0.999);
//! ```

pub mod classifier;
pub mod corpus;
mod error;
pub(crate) mod exec;
pub mod features;
pub mod harness;
pub mod metrics;
pub mod textproc;

pub use error::{Error, Result};
