//! AUC and precision over labeled scores.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance below which two scores count as tied in sampled AUC.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

/// Scores of probe links (positives) and sampled unobserved links (negatives).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScores<T> {
    pub positive: Vec<T>,
    pub negative: Vec<T>,
}

impl<T: Scalar> LabeledScores<T> {
    pub fn new(positive: Vec<T>, negative: Vec<T>) -> Self {
        Self { positive, negative }
    }

    fn check(&self, allow_empty_negatives: bool) -> Result<()> {
        if self.positive.is_empty() {
            return Err(Error::EmptyScores("no positive scores"));
        }
        if self.negative.is_empty() && !allow_empty_negatives {
            return Err(Error::EmptyScores("no negative scores"));
        }
        if self
            .positive
            .iter()
            .chain(&self.negative)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFiniteScore);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AucEstimate {
    pub value: f64,
    /// Comparisons performed.
    pub comparisons: u64,
    /// Comparisons won by the positive.
    pub wins: u64,
    pub ties: u64,
}

impl AucEstimate {
    pub fn from_counts(comparisons: u64, wins: u64, ties: u64) -> Self {
        let value = (wins as f64 + 0.5 * ties as f64) / comparisons as f64;
        Self {
            value,
            comparisons,
            wins,
            ties,
        }
    }

    /// Pools counts from independent shards.
    pub fn merge(self, other: Self) -> Self {
        Self::from_counts(
            self.comparisons + other.comparisons,
            self.wins + other.wins,
            self.ties + other.ties,
        )
    }
}

/// Compares with a relative tie band: `|p - n| <= eps * max(|p|, |n|)` is a tie.
#[inline]
fn compare<T: Scalar>(p: T, n: T, eps: T) -> Ordering {
    let band = eps * p.abs().max(n.abs());
    if (p - n).abs() <= band {
        Ordering::Equal
    } else if p > n {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Monte-Carlo AUC: `comparisons` independent draws of one positive and one
/// negative, with replacement.
pub fn auc_sampled<T: Scalar, R: Rng + ?Sized>(
    s: &LabeledScores<T>,
    comparisons: u64,
    rng: &mut R,
    tie_epsilon: f64,
) -> Result<AucEstimate> {
    s.check(false)?;
    if comparisons == 0 {
        return Err(Error::InvalidParameter(
            "auc comparisons must be >= 1".into(),
        ));
    }
    if tie_epsilon.is_nan() || tie_epsilon < 0.0 {
        return Err(Error::InvalidParameter("tie epsilon must be >= 0".into()));
    }
    let eps = T::lit(tie_epsilon);
    let (np, nn) = (s.positive.len(), s.negative.len());
    let (mut wins, mut ties) = (0u64, 0u64);
    for _ in 0..comparisons {
        let p = s.positive[rng.gen_range(0..np)];
        let n = s.negative[rng.gen_range(0..nn)];
        match compare(p, n, eps) {
            Ordering::Greater => wins += 1,
            Ordering::Equal => ties += 1,
            Ordering::Less => {}
        }
    }
    Ok(AucEstimate::from_counts(comparisons, wins, ties))
}

/// Exact AUC over all positive/negative pairs via mid-ranks, `O((P+Q) log(P+Q))`.
/// Ties are exact equality.
pub fn auc_exact<T: Scalar>(s: &LabeledScores<T>) -> Result<f64> {
    s.check(false)?;
    let mut all: Vec<(T, bool)> = s
        .positive
        .iter()
        .map(|&v| (v, true))
        .chain(s.negative.iter().map(|&v| (v, false)))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores"));
    // sum of 1-based mid-ranks of the positives
    let mut rank_sum = 0.0f64;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        let mid = (i + 1 + j) as f64 / 2.0;
        let pos = all[i..j].iter().filter(|e| e.1).count();
        rank_sum += mid * pos as f64;
        i = j;
    }
    let p = s.positive.len() as f64;
    let q = s.negative.len() as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

/// Precision among the top `l` scores. A block of scores tied at the cutoff
/// contributes its positives in proportion to the slots left, which equals
/// the mean over all orderings of the block.
pub fn precision_at_l<T: Scalar>(s: &LabeledScores<T>, l: usize) -> Result<f64> {
    s.check(true)?;
    let total = s.positive.len() + s.negative.len();
    if l == 0 || l > total {
        return Err(Error::InvalidParameter(format!(
            "L must be in [1, {total}], got {l}"
        )));
    }
    let mut all: Vec<T> = s.positive.iter().chain(&s.negative).copied().collect();
    // descending; the l-th largest value is the cutoff
    let (_, &mut cutoff, _) =
        all.select_nth_unstable_by(l - 1, |a, b| b.partial_cmp(a).expect("finite scores"));
    let above = |v: &T| *v > cutoff;
    let at = |v: &T| *v == cutoff;
    let pos_above = s.positive.iter().filter(|v| above(v)).count();
    let pos_at = s.positive.iter().filter(|v| at(v)).count();
    let all_above = pos_above + s.negative.iter().filter(|v| above(v)).count();
    let all_at = pos_at + s.negative.iter().filter(|v| at(v)).count();
    let remaining = l - all_above;
    let hits = pos_above as f64 + remaining as f64 * pos_at as f64 / all_at as f64;
    Ok(hits / l as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ls(p: &[f64], n: &[f64]) -> LabeledScores<f64> {
        LabeledScores::new(p.to_vec(), n.to_vec())
    }

    #[test]
    fn sampled_perfect_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for a in [1, 17, 1000] {
            let e = auc_sampled(&ls(&[1.0, 1.0], &[0.0]), a, &mut rng, 1e-9).unwrap();
            assert_eq!(e.value, 1.0);
            assert_eq!(e.wins, a);
        }
    }

    #[test]
    fn sampled_all_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = auc_sampled(&ls(&[3.0, 3.0], &[3.0, 3.0, 3.0]), 500, &mut rng, 1e-9).unwrap();
        assert_eq!((e.value, e.ties, e.wins), (0.5, 500, 0));
    }

    #[test]
    fn relative_tie_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = auc_sampled(&ls(&[1.0 + 1e-12], &[1.0]), 10, &mut rng, 1e-9).unwrap();
        assert_eq!(e.ties, 10);
        let e = auc_sampled(&ls(&[1.0 + 1e-12], &[1.0]), 10, &mut rng, 0.0).unwrap();
        assert_eq!(e.wins, 10);
    }

    #[test]
    fn sampled_rejects_bad_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(auc_sampled(&ls(&[], &[1.0]), 10, &mut rng, 0.0).is_err());
        assert!(auc_sampled(&ls(&[1.0], &[]), 10, &mut rng, 0.0).is_err());
        assert!(auc_sampled(&ls(&[1.0], &[1.0]), 0, &mut rng, 0.0).is_err());
        assert!(auc_sampled(&ls(&[f64::NAN], &[1.0]), 1, &mut rng, 0.0).is_err());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(auc_exact(&ls(&[2.0], &[1.0, 3.0])).unwrap(), 0.5);
        assert_eq!(auc_exact(&ls(&[1.0, 1.0], &[1.0])).unwrap(), 0.5);
        assert_eq!(auc_exact(&ls(&[5.0, 4.0], &[1.0])).unwrap(), 1.0);
        assert_eq!(auc_exact(&ls(&[0.0], &[1.0, 2.0])).unwrap(), 0.0);
        assert!(auc_exact(&ls(&[1.0], &[])).is_err());
    }

    #[test]
    fn merge_pools_counts() {
        let a = AucEstimate::from_counts(10, 6, 2);
        let b = AucEstimate::from_counts(30, 10, 4);
        let m = a.merge(b);
        assert_eq!((m.comparisons, m.wins, m.ties), (40, 16, 6));
        assert_eq!(m.value, (16.0 + 3.0) / 40.0);
    }

    #[test]
    fn precision_examples() {
        assert_eq!(
            precision_at_l(&ls(&[5.0, 4.0], &[3.0, 2.0, 1.0]), 2).unwrap(),
            1.0
        );
        assert_eq!(precision_at_l(&ls(&[1.0], &[3.0, 2.0]), 1).unwrap(), 0.0);
        let v = precision_at_l(&ls(&[1.0, 1.0], &[1.0]), 2).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn precision_range_checks() {
        let s = ls(&[1.0], &[2.0]);
        assert!(precision_at_l(&s, 0).is_err());
        assert!(precision_at_l(&s, 3).is_err());
        assert_eq!(precision_at_l(&s, 2).unwrap(), 0.5);
    }

    #[test]
    fn precision_without_negatives() {
        assert_eq!(precision_at_l(&ls(&[3.0, 1.0, 2.0], &[]), 2).unwrap(), 1.0);
    }

    #[test]
    fn f32_metrics() {
        let s = LabeledScores::new(vec![2.0f32, 0.5], vec![1.0f32, 0.5]);
        assert_eq!(auc_exact(&s).unwrap(), 0.625);
        assert_eq!(precision_at_l(&s, 1).unwrap(), 1.0);
    }
}
