//! TF-IDF features over word 1- and 2-grams.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MIN_DF: usize = 2;

/// Fitted vocabulary: dense term indices, document frequencies, and idf
/// weights `idf(t) = ln((1+N)/(1+df(t))) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<u32>,
    idf: Vec<f64>,
    n_docs: usize,
    min_df: usize,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

/// Sparse tf-idf vector: (term index, weight) sorted by index, L2-normalized
/// unless empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVec(pub Vec<(u32, f64)>);

impl SparseVec {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().map(|&(i, v)| (i as usize, v))
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }
}

/// Emits the unigrams and adjacent bigrams of a token sequence.
fn ngrams(tokens: &[String]) -> impl Iterator<Item = String> + '_ {
    let unigrams = tokens.iter().cloned();
    let bigrams = tokens.windows(2).map(|w| format!("{} {}", w[0], w[1]));
    unigrams.chain(bigrams)
}

/// Fits a vocabulary over tokenized documents. Terms below `min_df` distinct
/// documents are excluded; indices are assigned in lexicographic term order
/// so fitting is deterministic.
pub fn fit_vocabulary(docs: &[Vec<String>], min_df: usize) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::Validation(
            "cannot fit a vocabulary on zero documents".into(),
        ));
    }
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for doc in docs {
        let distinct: HashSet<String> = ngrams(doc).collect();
        for term in distinct {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let n_docs = docs.len();
    let mut terms = Vec::new();
    let mut kept_df = Vec::new();
    for (term, count) in df {
        if count as usize >= min_df {
            terms.push(term);
            kept_df.push(count);
        }
    }
    let idf = kept_df
        .iter()
        .map(|&d| ((1 + n_docs) as f64 / (1 + d) as f64).ln() + 1.0)
        .collect();
    let index = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    Ok(Vocabulary {
        terms,
        df: kept_df,
        idf,
        n_docs,
        min_df,
        index,
    })
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn idf(&self, index: usize) -> f64 {
        self.idf[index]
    }

    /// Rebuilds the term index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
    }

    /// tf·idf vector over the kept terms, L2-normalized. Out-of-vocabulary
    /// terms are ignored; a document with no in-vocabulary term maps to the
    /// zero vector.
    pub fn vectorize(&self, tokens: &[String]) -> SparseVec {
        let mut tf: BTreeMap<u32, f64> = BTreeMap::new();
        for term in ngrams(tokens) {
            if let Some(&i) = self.index.get(&term) {
                *tf.entry(i as u32).or_insert(0.0) += 1.0;
            }
        }
        let mut entries: Vec<(u32, f64)> = tf
            .into_iter()
            .map(|(i, count)| (i, count * self.idf[i as usize]))
            .collect();
        let norm: f64 = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in entries.iter_mut() {
                *v /= norm;
            }
        }
        SparseVec(entries)
    }
}
