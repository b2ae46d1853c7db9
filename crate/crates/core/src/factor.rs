//! Contiguous factor search over arbitrary slices (Knuth–Morris–Pratt).

fn failure_table<T: Eq>(pattern: &[T]) -> Vec<usize> {
    let mut fail = vec![0; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Start positions of all (possibly overlapping) occurrences of `pattern` in `text`.
///
/// An empty pattern has no occurrences.
pub fn occurrences<T: Eq>(pattern: &[T], text: &[T]) -> Vec<usize> {
    let mut found = Vec::new();
    if pattern.is_empty() || pattern.len() > text.len() {
        return found;
    }
    let fail = failure_table(pattern);
    let mut k = 0;
    for (i, x) in text.iter().enumerate() {
        while k > 0 && *x != pattern[k] {
            k = fail[k - 1];
        }
        if *x == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            found.push(i + 1 - k);
            k = fail[k - 1];
        }
    }
    found
}

pub fn count_occurrences<T: Eq>(pattern: &[T], text: &[T]) -> usize {
    occurrences(pattern, text).len()
}

pub fn contains_factor<T: Eq>(pattern: &[T], text: &[T]) -> bool {
    pattern.is_empty() || !occurrences(pattern, text).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(pattern: &[u8], text: &[u8]) -> usize {
        if pattern.is_empty() {
            return 0;
        }
        text.windows(pattern.len()).filter(|w| *w == pattern).count()
    }

    #[test]
    fn overlapping_matches() {
        assert_eq!(count_occurrences(b"aa", b"aaaa"), 3);
        assert_eq!(occurrences(b"aba", b"ababa"), vec![0, 2]);
        assert_eq!(count_occurrences(b"", b"abc"), 0);
        assert!(contains_factor(b"", b"abc"));
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_sliding_window(
            pattern in proptest::collection::vec(0u8..3, 1..5),
            text in proptest::collection::vec(0u8..3, 0..60),
        ) {
            proptest::prop_assert_eq!(count_occurrences(&pattern, &text), naive(&pattern, &text));
        }
    }
}
