//! Multiple-choice assembly: shuffle right and wrong answers, number them,
//! report the correct positions.

use std::fmt::Display;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha12Rng;

/// Shuffles `rights ++ wrongs`, keeps the first `n`, renders them as
/// numbered lines `i) <display>` (1-based), and returns the ascending
/// 1-based indices of the right answers among the kept items.
///
/// `rights` and `wrongs` must be disjoint as displayed text. Asking for
/// more items than exist yields all of them.
pub fn multiple_choice<T: Display>(
    n: usize,
    rights: &[T],
    wrongs: &[T],
    rng: &mut ChaCha12Rng,
) -> (String, Vec<usize>) {
    let mut tagged: Vec<(String, bool)> = rights
        .iter()
        .map(|r| (r.to_string(), true))
        .chain(wrongs.iter().map(|w| (w.to_string(), false)))
        .collect();
    tagged.shuffle(rng);
    tagged.truncate(n);

    let mut description = String::new();
    let mut indices = Vec::new();
    for (i, (display, is_right)) in tagged.iter().enumerate() {
        description.push_str(&format!("{}) {display}\n", i + 1));
        if *is_right {
            indices.push(i + 1);
        }
    }
    (description, indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn two_items_exhaustively() {
        // One right, one wrong: over many seeds both orders occur, and the
        // returned index always names the right item's line.
        let mut saw_first = false;
        let mut saw_second = false;
        for seed in 0..50 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let (desc, is) = multiple_choice(2, &["A"], &["B"], &mut rng);
            let lines: Vec<&str> = desc.lines().collect();
            assert_eq!(lines.len(), 2);
            assert_eq!(is.len(), 1);
            assert_eq!(lines[is[0] - 1], format!("{}) A", is[0]));
            saw_first |= is[0] == 1;
            saw_second |= is[0] == 2;
        }
        assert!(saw_first && saw_second);
    }

    #[test]
    fn no_rights_mean_no_indices() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let (_, is) = multiple_choice(3, &[] as &[&str], &["B", "C"], &mut rng);
        assert!(is.is_empty());
    }

    #[test]
    fn seven_of_ten() {
        let rights = ["r1", "r2", "r3", "r4", "r5"];
        let wrongs = ["w1", "w2", "w3", "w4", "w5"];
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let (desc, is) = multiple_choice(7, &rights, &wrongs, &mut rng);
        assert_eq!(desc.lines().count(), 7);
        assert!(is.windows(2).all(|w| w[0] < w[1]));
        assert!(is.iter().all(|i| (1..=7).contains(i)));
    }

    #[test]
    fn oversized_n_yields_everything() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let (desc, is) = multiple_choice(10, &["A"], &["B"], &mut rng);
        assert_eq!(desc.lines().count(), 2);
        assert_eq!(is.len(), 1);
    }
}
