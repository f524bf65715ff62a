use crate::error::{LidError, Result};

/// Area under the ROC curve of `scores` against binary `labels`, where a
/// higher score should indicate label 1.
///
/// Computed as the Mann-Whitney U statistic from midranks, so tied scores
/// contribute one half.
pub fn auroc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(LidError::InvalidParameter(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if let Some(l) = labels.iter().find(|l| **l > 1) {
        return Err(LidError::InvalidParameter(format!(
            "label must be 0 or 1, got {l}"
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(LidError::InvalidParameter("scores contain NaN".into()));
    }
    let n_pos = labels.iter().filter(|l| **l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(LidError::UndefinedAuroc);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // ranks are doubled to stay integral
    let mut pos_rank_sum2: u64 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let midrank2 = (start + 1 + end) as u64;
        let pos_in_group = order[start..end]
            .iter()
            .filter(|&&i| labels[i] == 1)
            .count() as u64;
        pos_rank_sum2 += midrank2 * pos_in_group;
        start = end;
    }
    let (np, nn) = (n_pos as u64, n_neg as u64);
    let u2 = pos_rank_sum2 - np * (np + 1);
    Ok(u2 as f64 / (2 * np * nn) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(auroc(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(auroc(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap(), 0.75);
        assert_eq!(auroc(&[2.0; 6], &[0, 1, 0, 1, 1, 0]).unwrap(), 0.5);
    }

    #[test]
    fn reversed_scores() {
        assert_eq!(auroc(&[4.0, 3.0, 2.0, 1.0], &[0, 0, 1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn single_class_is_undefined() {
        let err = auroc(&[1.0, 2.0], &[1, 1]).unwrap_err();
        assert!(err.to_string().starts_with("undefined AUROC"));
        assert!(matches!(auroc(&[1.0], &[0]), Err(LidError::UndefinedAuroc)));
    }

    #[test]
    fn bad_inputs() {
        assert!(auroc(&[1.0, 2.0], &[0]).is_err());
        assert!(auroc(&[1.0, 2.0], &[0, 2]).is_err());
        assert!(auroc(&[1.0, f64::NAN], &[0, 1]).is_err());
    }

    #[test]
    fn infinite_scores_rank_normally() {
        assert_eq!(
            auroc(&[f64::NEG_INFINITY, f64::INFINITY], &[0, 1]).unwrap(),
            1.0
        );
    }
}
