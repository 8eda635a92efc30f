//! Core pipeline for mining reproducibility signals from citation contexts:
//! domain types and persistence, reproducibility scoring, labeled dataset
//! construction, reference sentiment classifiers, evaluation metrics, and
//! the bin-level sentiment/score analysis.

pub mod corpus;
pub mod correlate;
pub mod error;
pub mod eval;
pub mod groundtruth;
pub mod label;
pub mod plot;
pub mod rng;
pub mod scoring;
pub mod textmodel;

pub use error::{Error, Result};
pub use label::{ClassLabel, Polarity, Relatedness, SentimentLabel, SentimentProbs};
