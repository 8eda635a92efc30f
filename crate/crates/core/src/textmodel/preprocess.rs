//! Text preprocessing: normalization, citation-marker folding, tokenization.

use std::sync::LazyLock;

use regex::Regex;
use unicode_normalization::UnicodeNormalization;

/// The token all citation markers collapse to.
pub const CITE_TOKEN: &str = "_cite_";

// Numeric bracket markers: [12], [3, 5], [1; 2], [4-6].
static BRACKET_CITE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\[\s*\d+(?:\s*[,;-]\s*\d+)*\s*\]").unwrap());

// Author-year parentheticals: (smith et al., 2019), (lee and kim, 2020).
static PAREN_CITE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\([^()]*,\s*\d{4}[a-z]?\s*\)").unwrap());

/// Tokenizes a citation context:
/// NFC-normalize, lowercase, fold citation markers into [`CITE_TOKEN`],
/// split on non-alphanumeric runs, and drop tokens shorter than 2 chars
/// (the cite token excepted). Whitespace-only input yields an empty list.
pub fn preprocess(text: &str) -> Vec<String> {
    let nfc: String = text.nfc().collect();
    let lower = nfc.to_lowercase();
    let folded = BRACKET_CITE.replace_all(&lower, format!(" {CITE_TOKEN} ").as_str());
    let folded = PAREN_CITE.replace_all(&folded, format!(" {CITE_TOKEN} ").as_str());

    let mut tokens = Vec::new();
    for chunk in folded.split_whitespace() {
        if chunk == CITE_TOKEN {
            tokens.push(CITE_TOKEN.to_string());
            continue;
        }
        for piece in chunk.split(|c: char| !c.is_alphanumeric()) {
            if piece.chars().count() >= 2 {
                tokens.push(piece.to_string());
            }
        }
    }
    tokens
}
