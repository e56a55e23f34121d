//! Deterministic pairwise reduction. Every sum in the engine funnels through
//! these helpers so that results are reproducible bit-for-bit across runs.

use num_complex::Complex64;

const BLOCK: usize = 16;

/// Pairwise sum of a real slice. Infinities propagate; the split points depend
/// only on the slice length.
pub fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Pairwise sum of a complex slice.
pub fn pairwise_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= BLOCK {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_c(&xs[..mid]) + pairwise_c(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i` in `0..len` without materialising a buffer.
pub fn pairwise_map(len: usize, f: &dyn Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &dyn Fn(usize) -> f64) -> f64 {
        if hi - lo <= BLOCK {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, len, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_on_small_inputs() {
        let xs: Vec<f64> = (1..=7).map(|i| i as f64).collect();
        assert_eq!(pairwise(&xs), 28.0);
    }

    #[test]
    fn infinity_propagates() {
        let xs = vec![1.0, f64::INFINITY, 2.0];
        assert!(pairwise(&xs).is_infinite());
    }

    #[test]
    fn map_form_agrees_with_slice_form() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = pairwise(&xs);
        let b = pairwise_map(xs.len(), &|i| xs[i]);
        assert_eq!(a, b);
    }

    #[test]
    fn close_to_exact_on_geometric_series() {
        let xs: Vec<f64> = (1..=40).map(|n| 0.25f64.powi(n)).collect();
        let exact = 1.0 / 3.0 * (1.0 - 0.25f64.powi(40));
        assert!((pairwise(&xs) - exact).abs() < 1e-16);
    }
}
