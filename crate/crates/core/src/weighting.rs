/// Weighted mean of `(value, weight)` pairs, summed in iteration order.
///
/// The result is clamped to the range of the contributing values so that
/// rounding can never push it outside their convex hull. A single pair
/// yields its value exactly.
pub(crate) fn weighted_mean(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (v, w) in pairs {
        num += v * w;
        den += w;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        return lo;
    }
    (num / den).clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::weighted_mean;

    #[test]
    fn single_and_constant() {
        assert_eq!(weighted_mean([(1.0173, 0.37)]), 1.0173);
        assert_eq!(weighted_mean([(1.01, 0.3), (1.01, 0.7), (1.01, 1.9)]), 1.01);
    }

    #[test]
    fn two_values() {
        let v = weighted_mean([(1.0, 1.0), (1.04, 1.0 / 3.0)]);
        assert!((v - 1.01).abs() < 1e-15);
    }
}
