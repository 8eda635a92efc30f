//! Sentiment labels and their binary projections.
//!
//! Every classification task in this crate runs over a fixed, ordered class
//! set. The order in `CLASSES` doubles as the argmax tie-break order: when
//! two classes receive the same score, the one listed first wins.

use std::fmt;
use std::hash::Hash;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed, ordered set of class labels.
pub trait ClassLabel:
    Copy + Eq + Hash + Ord + fmt::Debug + fmt::Display + Serialize + DeserializeOwned + 'static
{
    /// Canonical class order. Also the tie-break order for argmax.
    const CLASSES: &'static [Self];

    fn as_str(&self) -> &'static str;

    fn parse(s: &str) -> Option<Self> {
        Self::CLASSES.iter().copied().find(|c| c.as_str() == s)
    }

    fn index(&self) -> usize {
        Self::CLASSES
            .iter()
            .position(|c| c == self)
            .expect("label listed in CLASSES")
    }
}

/// Three-way reproducibility sentiment of a citation context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    /// A context is related to reproducibility iff its sentiment is polar.
    pub fn related(self) -> bool {
        self != SentimentLabel::Neutral
    }

    pub fn relatedness(self) -> Relatedness {
        if self.related() {
            Relatedness::Related
        } else {
            Relatedness::NotRelated
        }
    }

    pub fn polarity(self) -> Option<Polarity> {
        match self {
            SentimentLabel::Positive => Some(Polarity::Positive),
            SentimentLabel::Negative => Some(Polarity::Negative),
            SentimentLabel::Neutral => None,
        }
    }

    /// Strict parse of the literal strings used in every file format.
    pub fn parse_strict(s: &str) -> Result<Self> {
        <Self as ClassLabel>::parse(s).ok_or_else(|| {
            Error::Validation(format!(
                "unknown label {s:?}: expected one of positive, negative, neutral"
            ))
        })
    }
}

impl ClassLabel for SentimentLabel {
    const CLASSES: &'static [Self] = &[
        SentimentLabel::Negative,
        SentimentLabel::Neutral,
        SentimentLabel::Positive,
    ];

    fn as_str(&self) -> &'static str {
        match self {
            SentimentLabel::Positive => "positive",
            SentimentLabel::Negative => "negative",
            SentimentLabel::Neutral => "neutral",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Binary view: does the context relate to reproducibility at all?
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relatedness {
    NotRelated,
    Related,
}

impl ClassLabel for Relatedness {
    const CLASSES: &'static [Self] = &[Relatedness::NotRelated, Relatedness::Related];

    fn as_str(&self) -> &'static str {
        match self {
            Relatedness::Related => "related",
            Relatedness::NotRelated => "not_related",
        }
    }
}

impl fmt::Display for Relatedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Binary view restricted to polar sentiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    pub fn sentiment(self) -> SentimentLabel {
        match self {
            Polarity::Positive => SentimentLabel::Positive,
            Polarity::Negative => SentimentLabel::Negative,
        }
    }
}

impl ClassLabel for Polarity {
    const CLASSES: &'static [Self] = &[Polarity::Negative, Polarity::Positive];

    fn as_str(&self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A normalized probability triple over the three sentiments.
///
/// Serialized as `[positive, negative, neutral]`, matching the column order
/// of the external predictions CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct SentimentProbs {
    pub positive: f64,
    pub negative: f64,
    pub neutral: f64,
}

impl SentimentProbs {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(positive: f64, negative: f64, neutral: f64) -> Result<Self> {
        let probs = SentimentProbs {
            positive,
            negative,
            neutral,
        };
        probs.validate()?;
        Ok(probs)
    }

    pub fn validate(&self) -> Result<()> {
        let values = [self.positive, self.negative, self.neutral];
        if values.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Validation(format!(
                "probabilities must be finite and non-negative, got {values:?}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::Validation(format!(
                "probabilities must sum to 1 within {}, got {sum}",
                Self::SUM_TOLERANCE
            )));
        }
        Ok(())
    }

    pub fn get(&self, label: SentimentLabel) -> f64 {
        match label {
            SentimentLabel::Positive => self.positive,
            SentimentLabel::Negative => self.negative,
            SentimentLabel::Neutral => self.neutral,
        }
    }
}

impl From<SentimentProbs> for [f64; 3] {
    fn from(p: SentimentProbs) -> Self {
        [p.positive, p.negative, p.neutral]
    }
}

impl TryFrom<[f64; 3]> for SentimentProbs {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        SentimentProbs::new(v[0], v[1], v[2])
    }
}
