//! Dense kernels shared by the whole crate.
//!
//! With the `parallel` feature (default) the heavy loops split their output
//! into independent row blocks and run them on the rayon pool. Every element
//! is still computed by exactly one task with a fixed summation order, so the
//! parallel and sequential builds produce bit-identical results.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many multiply-adds the row-splitting overhead is not worth it.
const PAR_FLOP_THRESHOLD: usize = 1 << 16;

/// `a · b` for row-major operands of any stride.
pub fn matmul(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> Array2<f64> {
    let (m, _) = a.dim();
    let (_, n) = b.dim();
    let mut out = Array2::zeros((m, n));
    matmul_into(a, b, &mut out.view_mut());
    out
}

/// `out = a · b`, overwriting `out`.
pub fn matmul_into(a: &ArrayView2<f64>, b: &ArrayView2<f64>, out: &mut ArrayViewMut2<f64>) {
    let (m, k) = a.dim();
    let (k2, n) = b.dim();
    assert_eq!(k, k2, "matmul inner dims: {k} vs {k2}");
    assert_eq!(out.dim(), (m, n), "matmul output dims");

    #[cfg(feature = "parallel")]
    {
        let threads = rayon::current_num_threads();
        if threads > 1 && m > 1 && m * k * n >= PAR_FLOP_THRESHOLD {
            let chunk = m.div_ceil(threads);
            let blocks: Vec<(ArrayViewMut2<f64>, ArrayView2<f64>)> = out
                .axis_chunks_iter_mut(Axis(0), chunk)
                .zip(a.axis_chunks_iter(Axis(0), chunk))
                .collect();
            blocks.into_par_iter().for_each(|(mut oc, ac)| {
                general_mat_mul(1.0, &ac, b, 0.0, &mut oc);
            });
            return;
        }
    }
    general_mat_mul(1.0, a, b, 0.0, out);
}

/// Sequential `a · b`, kept callable regardless of features so benches can
/// compare both code paths inside one build.
pub fn matmul_seq(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> Array2<f64> {
    let (m, _) = a.dim();
    let (_, n) = b.dim();
    let mut out = Array2::zeros((m, n));
    general_mat_mul(1.0, a, b, 0.0, &mut out.view_mut());
    out
}

/// Order-preserving map over a slice, parallel when the feature allows it.
pub fn maybe_par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Indexed variant of [`maybe_par_map`].
pub fn maybe_par_map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

/// In-place parallel mutation of independent elements.
pub fn maybe_par_for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter_mut().for_each(f);
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().for_each(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Array2<f64> {
        Array2::from_shape_fn((m, n), |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, k, n) in &[(1, 1, 1), (3, 5, 2), (17, 9, 13), (64, 64, 64)] {
            let a = random_matrix(&mut rng, m, k);
            let b = random_matrix(&mut rng, k, n);
            let c = matmul(&a.view(), &b.view());
            for i in 0..m {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..k {
                        s += a[[i, l]] * b[[l, j]];
                    }
                    assert!((c[[i, j]] - s).abs() < 1e-12, "({i},{j}) {} vs {s}", c[[i, j]]);
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 130, 70);
        let b = random_matrix(&mut rng, 70, 90);
        let par = matmul(&a.view(), &b.view());
        let seq = matmul_seq(&a.view(), &b.view());
        assert_eq!(par, seq);
    }

    #[test]
    fn matmul_handles_transposed_views() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 20, 30);
        let b = random_matrix(&mut rng, 20, 40);
        // a^T · b through views must equal materialized transpose.
        let via_view = matmul(&a.t(), &b.view());
        let at = a.t().to_owned();
        let via_owned = matmul(&at.view(), &b.view());
        assert_eq!(via_view, via_owned);
    }
}
