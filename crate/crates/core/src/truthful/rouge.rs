use crate::data::SampleRecord;
use crate::error::{LidError, Result};

/// Lowercases, removes every character that is neither alphanumeric nor
/// whitespace, and splits on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect();
    cleaned.split_whitespace().map(str::to_owned).collect()
}

/// Length of the longest common subsequence of two token sequences.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Rouge-L F-measure between token sequences; 0 when either is empty.
pub fn rouge_l_tokens<T: PartialEq>(candidate: &[T], reference: &[T]) -> f64 {
    if candidate.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(candidate, reference) as f64;
    if lcs == 0.0 {
        return 0.0;
    }
    let p = lcs / candidate.len() as f64;
    let r = lcs / reference.len() as f64;
    2.0 * p * r / (p + r)
}

pub fn rouge_l(candidate: &str, reference: &str) -> f64 {
    rouge_l_tokens(&tokenize(candidate), &tokenize(reference))
}

/// Labels each record 1 when `rouge_l(generation, reference) >= threshold`.
pub fn label_samples(samples: &[SampleRecord], threshold: f64) -> Result<Vec<SampleRecord>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(LidError::InvalidParameter(format!(
            "threshold must be in (0, 1], got {threshold}"
        )));
    }
    Ok(samples
        .iter()
        .map(|s| {
            let label = u8::from(rouge_l(&s.generation, &s.reference) >= threshold);
            if let Some(old) = s.label {
                if old != label {
                    log::warn!("sample {}: overwriting label {old} with {label}", s.id);
                }
            }
            s.clone().with_label(label)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(rouge_l("james coburn", "james coburn"), 1.0);
        assert_eq!(rouge_l("alpha beta", "gamma delta"), 0.0);
        assert_eq!(rouge_l("john coburn", "james coburn"), 0.5);
    }

    #[test]
    fn normalization() {
        assert_eq!(
            tokenize("  James COBURN, Jr.!  "),
            vec!["james", "coburn", "jr"]
        );
        assert_eq!(rouge_l("James Coburn.", "james coburn"), 1.0);
        assert_eq!(rouge_l("", "james"), 0.0);
        assert_eq!(rouge_l("...", "..."), 0.0);
    }

    #[test]
    fn unequal_lengths() {
        // LCS 2, P = 2/4, R = 2/2
        let f = rouge_l("the cat sat down", "cat down");
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
    }

    fn sample(gen: &str, reference: &str) -> SampleRecord {
        SampleRecord::new("s", "q", gen, reference)
    }

    #[test]
    fn threshold_is_inclusive() {
        let out = label_samples(&[sample("john coburn", "james coburn")], 0.5).unwrap();
        assert_eq!(out[0].label, Some(1));
    }

    #[test]
    fn threshold_semantics() {
        // LCS 2 over 5 and 5 tokens: F = 0.4
        let s = sample("a b x y z", "a b c d e");
        assert!((rouge_l(&s.generation, &s.reference) - 0.4).abs() < 1e-15);
        assert_eq!(label_samples(std::slice::from_ref(&s), 0.3).unwrap()[0].label, Some(1));
        assert_eq!(label_samples(&[s], 0.5).unwrap()[0].label, Some(0));
    }

    #[test]
    fn existing_labels_are_overwritten() {
        let s = sample("same", "same").with_label(0);
        assert_eq!(label_samples(&[s], 0.5).unwrap()[0].label, Some(1));
    }

    #[test]
    fn threshold_range() {
        let s = [sample("a", "a")];
        assert!(label_samples(&s, 0.0).is_err());
        assert!(label_samples(&s, 1.5).is_err());
        assert!(label_samples(&s, 1.0).is_ok());
    }
}
