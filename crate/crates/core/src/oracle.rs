//! Finite-dimensional embedding oracle. A truncated atomic measure turns the
//! inclusion map into an M x N complex matrix
//!   E[j, n] = sqrt(w_j) sqrt(v_n) / (z_j - gamma_n)
//! acting on b_n = a_n sqrt(v_n), so that ||E b||^2 is the integral of |f|^2
//! against the measure and ||b|| is the member norm. Its operator norm
//! squared is the best embedding constant at truncation, its Frobenius norm
//! squared is the exact Hilbert-Schmidt value, and column-restricted operator
//! norms probe the tail behaviour that compactness is about.
//!
//! All spectral numbers reported here are certified lower bounds: the power
//! iterate's Rayleigh quotient, the largest column norm and the largest row
//! norm never exceed the true operator norm, and the summary takes their max.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::measure::Measure;
use crate::space::{CoefficientVector, SpacePair};
use crate::sum::{pairwise_c, pairwise_map};

const MAX_POWER_ITERS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    rows: usize,
    cols: usize,
    /// Row-major entries; rows follow atom declaration order, columns follow
    /// node order.
    data: Vec<Complex64>,
}

impl EmbeddingMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// y = E x with x in coefficient space.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let terms: Vec<Complex64> = row.iter().zip(x).map(|(e, v)| e * v).collect();
                pairwise_c(&terms)
            })
            .collect()
    }

    /// x = E* y with y in atom space.
    pub fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let terms: Vec<Complex64> =
                    (0..self.rows).map(|i| self.entry(i, j).conj() * y[i]).collect();
                pairwise_c(&terms)
            })
            .collect()
    }

    pub fn frobenius_sq(&self) -> f64 {
        pairwise_map(self.data.len(), &|i| self.data[i].norm_sqr())
    }

    pub fn column_norm_sq(&self, j: usize) -> f64 {
        pairwise_map(self.rows, &|i| self.entry(i, j).norm_sqr())
    }

    pub fn row_norm_sq(&self, i: usize) -> f64 {
        pairwise_map(self.cols, &|j| self.entry(i, j).norm_sqr())
    }

    /// Submatrix keeping columns with 0-based index >= from, i.e. the block
    /// that only sees nodes past a cutoff.
    pub fn column_tail(&self, from: usize) -> EmbeddingMatrix {
        let from = from.min(self.cols);
        let cols = self.cols - from;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols + from..(i + 1) * self.cols]);
        }
        EmbeddingMatrix { rows: self.rows, cols, data }
    }

    /// Same operator with rows reordered. Panics unless perm is a permutation
    /// of 0..rows; diagnostic helper for invariance checks.
    pub fn with_row_permutation(&self, perm: &[usize]) -> EmbeddingMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut seen = vec![false; self.rows];
        for &p in perm {
            assert!(p < self.rows && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let mut data = Vec::with_capacity(self.data.len());
        for &p in perm {
            data.extend_from_slice(&self.data[p * self.cols..(p + 1) * self.cols]);
        }
        EmbeddingMatrix { rows: self.rows, cols: self.cols, data }
    }
}

/// Builds the embedding matrix of a purely atomic measure. Rows follow the
/// component order; a zero-mass atom contributes a zero row.
pub fn build_embedding(space: &SpacePair, mu: &Measure) -> Result<EmbeddingMatrix> {
    if !mu.is_atoms_only() {
        let i = mu
            .components()
            .iter()
            .position(|c| !matches!(c, crate::measure::MeasureComponent::Atom { .. }))
            .unwrap_or(0);
        return Err(CoreError::NotAtomic { i: i + 1 });
    }
    let cols = space.len();
    let atoms: Vec<(Complex64, f64)> = mu.atoms().collect();
    let mut data = Vec::with_capacity(atoms.len() * cols);
    for (i, &(z, w)) in atoms.iter().enumerate() {
        for n in 0..cols {
            let g = space.gamma().node(n + 1);
            if z == g {
                return Err(CoreError::AtomOnNode { i: i + 1, n: n + 1 });
            }
            let sv = space.weights().weight(n + 1).sqrt();
            data.push(Complex64::new(w.sqrt() * sv, 0.0) / (z - g));
        }
    }
    Ok(EmbeddingMatrix { rows: atoms.len(), cols, data })
}

fn vec_dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a * b.conj()).collect();
    pairwise_c(&terms)
}

fn vec_norm(x: &[Complex64]) -> f64 {
    pairwise_map(x.len(), &|i| x[i].norm_sqr()).sqrt()
}

struct PowerOutcome {
    value: f64,
    vector: Vec<Complex64>,
    iterations: usize,
    residual: f64,
    converged: bool,
}

/// Power iteration on a Hermitian PSD operator given as a closure, from the
/// deterministic normalised all-ones start. Convergence is relative residual
/// ||Gx - lambda x|| <= tol * lambda.
fn power_iteration<G: Fn(&[Complex64]) -> Vec<Complex64>>(
    g: G,
    dim: usize,
    tol: f64,
) -> PowerOutcome {
    if dim == 0 {
        return PowerOutcome {
            value: 0.0,
            vector: Vec::new(),
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let mut x: Vec<Complex64> = vec![Complex64::new(scale, 0.0); dim];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERS {
        let y = g(&x);
        lambda = vec_dot(&y, &x).re;
        let resid: Vec<Complex64> = y.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
        residual = vec_norm(&resid) / lambda.abs().max(1e-300);
        if residual <= tol {
            return PowerOutcome { value: lambda.max(0.0), vector: x, iterations: it, residual, converged: true };
        }
        let ny = vec_norm(&y);
        if ny == 0.0 {
            return PowerOutcome { value: 0.0, vector: x, iterations: it, residual: 0.0, converged: true };
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    PowerOutcome { value: lambda.max(0.0), vector: x, iterations: MAX_POWER_ITERS, residual, converged: false }
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    /// Certified lower bound on the squared operator norm: max of the power
    /// quotient, the largest column norm squared and the largest row norm
    /// squared.
    pub op_norm_sq: f64,
    /// Leading eigenvalues of the Gram operator from deflated power runs.
    pub top: Vec<f64>,
    pub frobenius_sq: f64,
    /// (cutoff, squared operator norm of the column block past the cutoff).
    pub tail_norms: Vec<(usize, f64)>,
    /// Iterations used by the leading power run.
    pub iterations: usize,
    /// Relative residual of the leading power run at exit.
    pub residual: f64,
    /// False when any power run hit the iteration cap before meeting tol.
    pub converged: bool,
}

fn gram_dim(e: &EmbeddingMatrix) -> usize {
    e.rows.min(e.cols)
}

fn gram_apply(e: &EmbeddingMatrix, x: &[Complex64]) -> Vec<Complex64> {
    if e.rows <= e.cols {
        e.apply(&e.apply_adjoint(x))
    } else {
        e.apply_adjoint(&e.apply(x))
    }
}

fn guarded_norm_bounds(e: &EmbeddingMatrix) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..e.cols {
        best = best.max(e.column_norm_sq(j));
    }
    for i in 0..e.rows {
        best = best.max(e.row_norm_sq(i));
    }
    best
}

pub fn spectral_summary(
    e: &EmbeddingMatrix,
    k: usize,
    tail_grid: &[usize],
    tol: f64,
) -> SpectralSummary {
    let dim = gram_dim(e);
    let k = k.clamp(1, dim.max(1));
    let mut found: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut top = Vec::new();
    let mut iterations = 0;
    let mut residual = 0.0;
    let mut converged = true;

    for l in 0..k.min(dim) {
        let deflated = |x: &[Complex64]| {
            let mut y = gram_apply(e, x);
            for (lam, u) in &found {
                let c = vec_dot(x, u) * *lam;
                for (yi, ui) in y.iter_mut().zip(u) {
                    *yi -= c * ui;
                }
            }
            y
        };
        let out = power_iteration(deflated, dim, tol);
        if l == 0 {
            iterations = out.iterations;
            residual = out.residual;
        }
        converged &= out.converged;
        top.push(out.value);
        found.push((out.value, out.vector));
    }

    let power_top = top.first().copied().unwrap_or(0.0);
    let op_norm_sq = power_top.max(guarded_norm_bounds(e));

    let mut tail_norms = Vec::with_capacity(tail_grid.len());
    for &cut in tail_grid {
        let sub = e.column_tail(cut);
        let val = if sub.cols == 0 || sub.rows == 0 {
            0.0
        } else {
            let out = power_iteration(|x| gram_apply(&sub, x), gram_dim(&sub), tol);
            converged &= out.converged;
            out.value.max(guarded_norm_bounds(&sub))
        };
        tail_norms.push((cut, val));
    }

    SpectralSummary {
        op_norm_sq,
        top,
        frobenius_sq: e.frobenius_sq(),
        tail_norms,
        iterations,
        residual,
        converged,
    }
}

/// Worst relative disagreement between the matrix route ||E b||^2 and direct
/// evaluation sum_j w_j |f(z_j)|^2 over a probe set.
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyRecord {
    pub max_rel_err: f64,
    pub checked: usize,
}

pub fn validate(
    space: &SpacePair,
    mu: &Measure,
    e: &EmbeddingMatrix,
    probes: &[CoefficientVector],
) -> Result<ConsistencyRecord> {
    let mut max_rel_err: f64 = 0.0;
    for a in probes {
        let b: Vec<Complex64> = a
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| c * space.weights().weight(i + 1).sqrt())
            .collect();
        let image = e.apply(&b);
        let lhs = pairwise_map(image.len(), &|i| image[i].norm_sqr());
        let atoms: Vec<(Complex64, f64)> = mu.atoms().collect();
        let mut rhs_terms = Vec::with_capacity(atoms.len());
        for &(z, w) in &atoms {
            let f = space.evaluate(a, z)?;
            rhs_terms.push(w * f.norm_sqr());
        }
        let rhs = crate::sum::pairwise(&rhs_terms);
        let rel = (lhs - rhs).abs() / rhs.max(1.0);
        max_rel_err = max_rel_err.max(rel);
    }
    Ok(ConsistencyRecord { max_rel_err, checked: probes.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureComponent;
    use crate::space::{GammaSequence, TestKind, WeightSequence};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s1(n: usize) -> SpacePair {
        let gamma: Vec<Complex64> = (1..=n).map(|k| c64(2f64.powi(k as i32), 0.0)).collect();
        SpacePair::new(
            GammaSequence::new(gamma).unwrap(),
            WeightSequence::new(vec![1.0; n]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_atom_is_rank_one() {
        let space = s1(24);
        let z = c64(5.0, 1.0);
        let w = 0.8;
        let mu = Measure::new(vec![MeasureComponent::Atom { z, w }], &space).unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        assert_eq!(e.rows(), 1);
        assert_eq!(e.cols(), 24);
        let s = spectral_summary(&e, 3, &[], 1e-10);
        let expected = w * space.kernel_norm_sq(z).unwrap();
        assert!((s.op_norm_sq - expected).abs() < 1e-10 * expected);
        assert!((s.frobenius_sq - expected).abs() < 1e-12 * expected);
        assert!(s.converged);
        // Rank one: every further eigenvalue is essentially zero.
        for &t in &s.top[1..] {
            assert!(t < 1e-12 * expected);
        }
    }

    #[test]
    fn two_conjugate_atoms_closed_form() {
        let space = s1(20);
        let mu = Measure::new(
            vec![
                MeasureComponent::Atom { z: c64(0.0, 3.0), w: 1.0 },
                MeasureComponent::Atom { z: c64(0.0, -3.0), w: 1.0 },
            ],
            &space,
        )
        .unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        // Gram = [[alpha, beta], [conj(beta), alpha]] with
        // alpha = sum 1/(9 + 4^n), beta = sum 1/(3i - 2^n)^2; eigenvalues are
        // alpha +- |beta|.
        let mut alpha = 0.0;
        let mut beta = Complex64::new(0.0, 0.0);
        for n in 1..=20 {
            let g = 2f64.powi(n);
            alpha += 1.0 / (9.0 + g * g);
            let d = c64(0.0, 3.0) - c64(g, 0.0);
            beta += 1.0 / (d * d);
        }
        let expected = alpha + beta.norm();
        let s = spectral_summary(&e, 2, &[], 1e-12);
        assert!(
            (s.op_norm_sq - expected).abs() < 1e-10 * expected,
            "{} vs {expected}",
            s.op_norm_sq
        );
        let second = alpha - beta.norm();
        assert!((s.top[1] - second).abs() < 1e-8 * expected);
        assert!((s.frobenius_sq - 2.0 * alpha).abs() < 1e-12 * alpha);
    }

    #[test]
    fn empty_measure_embeds_to_nothing() {
        let space = s1(10);
        let mu = Measure::empty();
        let e = build_embedding(&space, &mu).unwrap();
        assert_eq!(e.rows(), 0);
        let s = spectral_summary(&e, 3, &[0, 5], 1e-10);
        assert_eq!(s.op_norm_sq, 0.0);
        assert_eq!(s.frobenius_sq, 0.0);
        assert!(s.converged);
        assert_eq!(s.tail_norms, vec![(0, 0.0), (5, 0.0)]);
    }

    #[test]
    fn row_order_does_not_matter() {
        let space = s1(16);
        let comps: Vec<MeasureComponent> = (2..=12)
            .map(|n| MeasureComponent::Atom {
                z: c64(2f64.powi(n) + 1.0, 0.5),
                w: 1.0 / n as f64,
            })
            .collect();
        let mu = Measure::new(comps, &space).unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        let perm: Vec<usize> = (0..e.rows()).rev().collect();
        let ep = e.with_row_permutation(&perm);
        let s0 = spectral_summary(&e, 1, &[4], 1e-12);
        let s1 = spectral_summary(&ep, 1, &[4], 1e-12);
        assert!((s0.op_norm_sq - s1.op_norm_sq).abs() <= 1e-10 * s0.op_norm_sq);
        assert!((s0.frobenius_sq - s1.frobenius_sq).abs() <= 1e-12 * s0.frobenius_sq);
        assert!((s0.tail_norms[0].1 - s1.tail_norms[0].1).abs() <= 1e-10 * s0.tail_norms[0].1);
    }

    #[test]
    fn scaling_the_measure_scales_the_norms() {
        let space = s1(12);
        let mu = Measure::new(
            vec![
                MeasureComponent::Atom { z: c64(3.0, 1.0), w: 0.4 },
                MeasureComponent::Atom { z: c64(9.0, -2.0), w: 1.3 },
            ],
            &space,
        )
        .unwrap();
        let t = 2.25;
        let e0 = build_embedding(&space, &mu).unwrap();
        let e1 = build_embedding(&space, &mu.scaled(t)).unwrap();
        let s0 = spectral_summary(&e0, 1, &[], 1e-12);
        let s1 = spectral_summary(&e1, 1, &[], 1e-12);
        assert!((s1.op_norm_sq - t * s0.op_norm_sq).abs() <= 1e-10 * t * s0.op_norm_sq);
        assert!((s1.frobenius_sq - t * s0.frobenius_sq).abs() <= 1e-12 * t * s0.frobenius_sq);
    }

    #[test]
    fn tail_grid_endpoints() {
        let space = s1(10);
        let comps: Vec<MeasureComponent> = (2..=8)
            .map(|n| MeasureComponent::Atom { z: c64(2f64.powi(n) + 1.0, 0.0), w: 1.0 })
            .collect();
        let mu = Measure::new(comps, &space).unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        let s = spectral_summary(&e, 1, &[0, 10], 1e-10);
        assert_eq!(s.tail_norms[0].0, 0);
        assert!((s.tail_norms[0].1 - s.op_norm_sq).abs() <= 1e-9 * s.op_norm_sq);
        assert_eq!(s.tail_norms[1], (10, 0.0));
    }

    #[test]
    fn matrix_route_matches_direct_evaluation() {
        let space = s1(14);
        let comps: Vec<MeasureComponent> = (2..=10)
            .map(|n| MeasureComponent::Atom {
                z: c64(2f64.powi(n) + 1.0, 0.25 * n as f64),
                w: 1.0 / (n * n) as f64,
            })
            .collect();
        let mu = Measure::new(comps, &space).unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        let mut probes = Vec::new();
        for n in 1..=14 {
            probes.push(space.test_function(TestKind::Q, n).unwrap());
        }
        for n in 2..=14 {
            probes.push(space.test_function(TestKind::H, n).unwrap());
        }
        for n in 1..14 {
            probes.push(space.test_function(TestKind::G, n).unwrap());
        }
        let rec = validate(&space, &mu, &e, &probes).unwrap();
        assert_eq!(rec.checked, 14 + 13 + 13);
        assert!(rec.max_rel_err < 1e-12, "max rel err {}", rec.max_rel_err);
    }

    #[test]
    fn non_atomic_measure_rejected() {
        let space = s1(6);
        let mu = Measure::new(vec![MeasureComponent::CircleUniform { r: 3.0, w: 1.0 }], &space)
            .unwrap();
        assert!(matches!(build_embedding(&space, &mu), Err(CoreError::NotAtomic { i: 1 })));
    }

    #[test]
    fn column_norm_equals_spike_integral() {
        let space = s1(12);
        let comps: Vec<MeasureComponent> = (2..=9)
            .map(|n| MeasureComponent::Atom { z: c64(2f64.powi(n) + 1.0, 1.0), w: 0.3 })
            .collect();
        let mu = Measure::new(comps, &space).unwrap();
        let e = build_embedding(&space, &mu).unwrap();
        let q = crate::quad::QuadConfig::default();
        for n in 1..=12 {
            let direct =
                space.weights().weight(n) * mu.int_inv_sq_dist_total(space.gamma().node(n), &q);
            let col = e.column_norm_sq(n - 1);
            assert!((col - direct).abs() <= 1e-12 * (1.0 + direct));
        }
    }
}
