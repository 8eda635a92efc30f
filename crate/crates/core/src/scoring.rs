//! Per-paper reproducibility scores: exact rational values pooled per paper
//! from rep-study finding counts, then binned to one decimal for the
//! bin-level analysis.

use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::corpus::RepStudy;
use crate::error::{Error, Result};

/// Fraction of findings that reproduced. Kept as the raw numerator and
/// denominator (not reduced) so pooled counts stay inspectable; no floating
/// rounding happens before binning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsScore {
    numerator: u32,
    denominator: u32,
}

impl RsScore {
    pub fn new(n_reproduced: u32, n_total: u32) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::Validation(
                "rs_score denominator must be >= 1".into(),
            ));
        }
        if n_reproduced > n_total {
            return Err(Error::Validation(format!(
                "rs_score numerator {n_reproduced} exceeds denominator {n_total}"
            )));
        }
        Ok(RsScore {
            numerator: n_reproduced,
            denominator: n_total,
        })
    }

    pub fn numerator(&self) -> u32 {
        self.numerator
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    /// Exact rational value (reduced).
    pub fn as_ratio(&self) -> Ratio<u32> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn value(&self) -> f64 {
        f64::from(self.numerator) / f64::from(self.denominator)
    }
}

/// One-decimal score bin, stored in tenths so 0.6/0.7 boundaries stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RsBin(u8);

impl RsBin {
    pub fn from_tenths(tenths: u8) -> Result<Self> {
        if tenths > 10 {
            return Err(Error::Validation(format!(
                "rs_bin must be in 0.0..=1.0, got {}",
                tenths as f64 / 10.0
            )));
        }
        Ok(RsBin(tenths))
    }

    pub fn tenths(&self) -> u8 {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.0) / 10.0
    }

    pub fn parse(s: &str) -> Result<Self> {
        let value: f64 = s
            .trim()
            .parse()
            .map_err(|e| Error::Validation(format!("cannot parse rs_bin {s:?}: {e}")))?;
        let tenths = (value * 10.0).round();
        if !(0.0..=10.0).contains(&tenths) || (value * 10.0 - tenths).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "rs_bin {s:?} is not a one-decimal value in [0, 1]"
            )));
        }
        RsBin::from_tenths(tenths as u8)
    }
}

impl fmt::Display for RsBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl From<RsBin> for String {
    fn from(bin: RsBin) -> String {
        bin.to_string()
    }
}

impl TryFrom<String> for RsBin {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        RsBin::parse(&s)
    }
}

/// rs_score = reproduced findings / findings selected to reproduce.
pub fn compute_rs_score(n_reproduced: u32, n_total: u32) -> Result<RsScore> {
    RsScore::new(n_reproduced, n_total)
}

/// Pools the rep-studies of one paper by summing numerators and denominators
/// (micro-average): each finding carries equal weight regardless of which
/// rep-study reported it.
pub fn pool_paper_score(studies: &[RepStudy]) -> Result<RsScore> {
    let Some(first) = studies.first() else {
        return Err(Error::Validation(
            "cannot pool an empty rep-study list".into(),
        ));
    };
    if let Some(other) = studies
        .iter()
        .find(|s| s.original_doi != first.original_doi)
    {
        return Err(Error::Internal(format!(
            "pool_paper_score called with mixed DOIs: {} vs {}",
            first.original_doi, other.original_doi
        )));
    }
    let mut numerator: u32 = 0;
    let mut denominator: u32 = 0;
    for study in studies {
        study.validate()?;
        numerator = numerator
            .checked_add(study.n_findings_reproduced)
            .ok_or_else(|| Error::Internal("pooled numerator overflow".into()))?;
        denominator = denominator
            .checked_add(study.n_findings_total)
            .ok_or_else(|| Error::Internal("pooled denominator overflow".into()))?;
    }
    RsScore::new(numerator, denominator)
}

/// Rounds to one decimal, half away from zero, in exact integer arithmetic:
/// tenths = floor((20·num + den) / (2·den)).
pub fn bin_rs_score(score: &RsScore) -> RsBin {
    let num = u64::from(score.numerator());
    let den = u64::from(score.denominator());
    let tenths = (20 * num + den) / (2 * den);
    RsBin(tenths as u8)
}

/// Emits `doi,numerator,denominator,rs_score,rs_bin` per scored paper.
pub fn write_scores_csv(rows: &[(String, RsScore)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Internal(format!("csv error: {other:?}")),
    })?;
    writer
        .write_record(["doi", "numerator", "denominator", "rs_score", "rs_bin"])
        .and_then(|_| {
            for (doi, score) in rows {
                writer.write_record([
                    doi.as_str(),
                    &score.numerator().to_string(),
                    &score.denominator().to_string(),
                    &score.value().to_string(),
                    &bin_rs_score(score).to_string(),
                ])?;
            }
            writer.flush()?;
            Ok(())
        })
        .map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RepSource;
    use proptest::prelude::*;

    fn study(doi: &str, reproduced: u32, total: u32) -> RepStudy {
        RepStudy {
            rep_id: format!("r-{doi}-{reproduced}-{total}"),
            source: RepSource::Mlrc2021,
            year: 2021,
            original_doi: doi.to_string(),
            n_findings_total: total,
            n_findings_reproduced: reproduced,
        }
    }

    #[test]
    fn zero_numerator_scores_zero() {
        let score = compute_rs_score(0, 5).unwrap();
        assert_eq!(score.value(), 0.0);
        assert_eq!(bin_rs_score(&score).to_string(), "0.0");
    }

    #[test]
    fn full_reproduction_scores_one() {
        let score = compute_rs_score(2, 2).unwrap();
        assert_eq!(score.value(), 1.0);
        assert_eq!(bin_rs_score(&score).to_string(), "1.0");
    }

    #[test]
    fn two_thirds_bins_to_seven_tenths() {
        let score = compute_rs_score(2, 3).unwrap();
        assert!((score.value() - 0.6667).abs() < 5e-4);
        assert_eq!(bin_rs_score(&score).tenths(), 7);
    }

    #[test]
    fn half_rounds_away_from_zero() {
        // 0.55 -> 0.6 and 0.65 -> 0.7
        assert_eq!(bin_rs_score(&RsScore::new(11, 20).unwrap()).tenths(), 6);
        assert_eq!(bin_rs_score(&RsScore::new(13, 20).unwrap()).tenths(), 7);
    }

    #[test]
    fn invalid_scores_are_rejected() {
        assert!(compute_rs_score(1, 0).is_err());
        assert!(compute_rs_score(3, 2).is_err());
    }

    #[test]
    fn pooling_one_study_is_identity() {
        let score = pool_paper_score(&[study("10.1/a", 1, 2)]).unwrap();
        assert_eq!((score.numerator(), score.denominator()), (1, 2));
        assert_eq!(score.value(), 0.5);
    }

    #[test]
    fn pooling_sums_numerators_and_denominators() {
        let score = pool_paper_score(&[study("10.1/a", 1, 2), study("10.1/a", 2, 2)]).unwrap();
        assert_eq!((score.numerator(), score.denominator()), (3, 4));
        assert_eq!(score.value(), 0.75);
    }

    #[test]
    fn pooling_all_failures_scores_zero() {
        let score = pool_paper_score(&[study("10.1/a", 0, 1), study("10.1/a", 0, 3)]).unwrap();
        assert_eq!(score.value(), 0.0);
    }

    #[test]
    fn pooling_mixed_dois_is_a_programming_error() {
        let err = pool_paper_score(&[study("10.1/a", 1, 2), study("10.1/b", 1, 2)]).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn pooling_empty_list_errors() {
        assert!(pool_paper_score(&[]).is_err());
    }

    #[test]
    fn bin_display_and_parse_round_trip() {
        for tenths in 0..=10u8 {
            let bin = RsBin::from_tenths(tenths).unwrap();
            assert_eq!(RsBin::parse(&bin.to_string()).unwrap(), bin);
        }
        assert_eq!(RsBin::parse("1.0").unwrap().tenths(), 10);
        assert!(RsBin::parse("0.15").is_err());
        assert!(RsBin::parse("1.1").is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_numerator(den in 1u32..200, num in 0u32..200) {
            let num = num.min(den);
            if num < den {
                let lo = RsScore::new(num, den).unwrap();
                let hi = RsScore::new(num + 1, den).unwrap();
                prop_assert!(hi.as_ratio() > lo.as_ratio());
                prop_assert!(bin_rs_score(&hi) >= bin_rs_score(&lo));
            }
        }

        #[test]
        fn pooling_is_permutation_invariant(
            counts in proptest::collection::vec((0u32..20, 1u32..20), 1..8),
            swap_index in 0usize..8,
        ) {
            let studies: Vec<RepStudy> = counts
                .iter()
                .map(|(r, t)| study("10.1/same", (*r).min(*t), *t))
                .collect();
            let mut permuted = studies.clone();
            let i = swap_index % permuted.len();
            permuted.swap(0, i);
            let a = pool_paper_score(&studies).unwrap();
            let b = pool_paper_score(&permuted).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn pooling_is_associative(
            left in proptest::collection::vec((0u32..20, 1u32..20), 1..5),
            right in proptest::collection::vec((0u32..20, 1u32..20), 1..5),
        ) {
            let to_studies = |counts: &[(u32, u32)]| -> Vec<RepStudy> {
                counts.iter().map(|(r, t)| study("10.1/same", (*r).min(*t), *t)).collect()
            };
            let ls = to_studies(&left);
            let rs = to_studies(&right);
            // Pool-of-pools equals pooling the concatenation.
            let pooled_left = pool_paper_score(&ls).unwrap();
            let pooled_right = pool_paper_score(&rs).unwrap();
            let combined = pool_paper_score(
                &[study("10.1/same", pooled_left.numerator(), pooled_left.denominator()),
                  study("10.1/same", pooled_right.numerator(), pooled_right.denominator())],
            ).unwrap();
            let all: Vec<RepStudy> = ls.into_iter().chain(rs).collect();
            prop_assert_eq!(combined, pool_paper_score(&all).unwrap());
        }

        #[test]
        fn binning_is_idempotent(tenths in 0u8..=10) {
            let bin = RsBin::from_tenths(tenths).unwrap();
            let rebinned = bin_rs_score(&RsScore::new(u32::from(tenths), 10).unwrap());
            prop_assert_eq!(rebinned, bin);
        }

        #[test]
        fn bin_within_half_a_tenth(num in 0u32..500, den in 1u32..500) {
            let num = num.min(den);
            let score = RsScore::new(num, den).unwrap();
            let bin = bin_rs_score(&score);
            prop_assert!((bin.as_f64() - score.value()).abs() <= 0.05 + 1e-12);
        }
    }
}
