//! Reference sentiment classifiers: TF-IDF features with a multinomial
//! logistic-regression head, plus the two-stage hierarchical variant and an
//! adapter for externally produced predictions.

pub mod classifier;
pub mod external;
pub mod linear;
pub mod preprocess;
pub mod vocab;

pub use classifier::{
    ClassifierConfig, HierarchicalClassifier, LinearTextModel, SentimentClassifier,
    MODEL_FORMAT_VERSION,
};
pub use external::{import_external_predictions, CoverageReport};
pub use linear::{argmax_first, softmax, LinearModel, TrainConfig};
pub use preprocess::{preprocess, CITE_TOKEN};
pub use vocab::{fit_vocabulary, SparseVec, Vocabulary, DEFAULT_MIN_DF};
