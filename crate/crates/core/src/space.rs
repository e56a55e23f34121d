//! The underlying sequence space: nodes, weights, the induced annulus
//! partition, point evaluation and reproducing kernels, and the three families
//! of unit-norm test vectors used by the certificate checks.
//!
//! A member function has the form f(z) = sum_n a_n v_n / (z - gamma_n) and its
//! norm is the weighted little-ell-two norm of the coefficients,
//! ||f||^2 = sum_n |a_n|^2 v_n. All public indices are 1-based to match the
//! way witnesses are reported.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::sum::{pairwise, pairwise_c, pairwise_map};

/// Three-valued answer for hypothesis checks that a finite window cannot
/// always settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Inconclusive,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Inconclusive => "inconclusive",
        }
    }
}

/// Node sequence gamma_1, gamma_2, ... with strictly increasing moduli.
#[derive(Debug, Clone)]
pub struct GammaSequence {
    entries: Vec<Complex64>,
    generator: Option<String>,
}

impl GammaSequence {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::TooShort { min: 1, got: 0 });
        }
        for (i, z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) || z.norm_sqr() == 0.0 {
                return Err(CoreError::ZeroModulus { n: i + 1 });
            }
        }
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i] == entries[j] {
                    return Err(CoreError::DuplicateNode { i: i + 1, j: j + 1 });
                }
            }
        }
        for n in 1..entries.len() {
            if entries[n - 1].norm() >= entries[n].norm() {
                return Err(CoreError::NonIncreasingModuli { n, m: n + 1 });
            }
        }
        Ok(Self { entries, generator: None })
    }

    pub fn with_generator(entries: Vec<Complex64>, generator: String) -> Result<Self> {
        let mut g = Self::new(entries)?;
        g.generator = Some(generator);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// gamma_n, 1-based.
    pub fn node(&self, n: usize) -> Complex64 {
        self.entries[n - 1]
    }

    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }

    /// Minimum of |gamma_{n+1}| / |gamma_n| together with the separation
    /// verdict. Needs at least two nodes.
    pub fn sparseness_report(&self) -> Result<SparsenessReport> {
        if self.entries.len() < 2 {
            return Err(CoreError::TooShort { min: 2, got: self.entries.len() });
        }
        let mut ratio = f64::INFINITY;
        for n in 1..self.entries.len() {
            let r = self.entries[n].norm() / self.entries[n - 1].norm();
            if r < ratio {
                ratio = r;
            }
        }
        Ok(SparsenessReport { ratio, satisfied: ratio > 1.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsenessReport {
    /// min_n |gamma_{n+1}| / |gamma_n| over the window.
    pub ratio: f64,
    /// Whether the observed minimum exceeds 1.
    pub satisfied: bool,
}

/// Positive weight sequence v_1, v_2, ...
#[derive(Debug, Clone)]
pub struct WeightSequence {
    entries: Vec<f64>,
    generator: Option<String>,
}

impl WeightSequence {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::TooShort { min: 1, got: 0 });
        }
        for (i, &v) in entries.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::BadWeight { n: i + 1, value: v });
            }
        }
        Ok(Self { entries, generator: None })
    }

    pub fn with_generator(entries: Vec<f64>, generator: String) -> Result<Self> {
        let mut w = Self::new(entries)?;
        w.generator = Some(generator);
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// v_n, 1-based.
    pub fn weight(&self, n: usize) -> f64 {
        self.entries[n - 1]
    }

    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }
}

/// Radial partition of the plane induced by the node moduli. Boundary
/// b_n = (|gamma_n| + |gamma_{n+1}|) / 2; annulus 1 is the disc |z| < b_1,
/// annulus n for 1 < n < N is b_{n-1} <= |z| < b_n, and annulus N is
/// everything from b_{N-1} outward. With a single node the partition is the
/// whole plane.
#[derive(Debug, Clone)]
pub struct AnnulusPartition {
    boundaries: Vec<f64>,
}

impl AnnulusPartition {
    fn from_nodes(gamma: &GammaSequence) -> Self {
        let n = gamma.len();
        let mut boundaries = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            boundaries.push(0.5 * (gamma.entries[i - 1].norm() + gamma.entries[i].norm()));
        }
        let part = Self { boundaries };
        // Each node must land in its own annulus; strict modulus growth makes
        // this automatic, so a violation means the inputs were corrupted.
        for i in 1..=n {
            assert_eq!(part.annulus_of_radius(gamma.entries[i - 1].norm()), i);
        }
        part
    }

    /// Number of annuli (= number of nodes at truncation).
    pub fn count(&self) -> usize {
        self.boundaries.len() + 1
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// 1-based index of the annulus containing z. Boundaries belong to the
    /// outer annulus: |z| = b_n lands in annulus n+1.
    pub fn annulus_of(&self, z: Complex64) -> usize {
        self.annulus_of_radius(z.norm())
    }

    pub fn annulus_of_radius(&self, r: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= r) + 1
    }

    /// Radial interval [lo, hi) covered by annulus n; hi is infinite for the
    /// outermost annulus.
    pub fn radial_range(&self, n: usize) -> (f64, f64) {
        let lo = if n == 1 { 0.0 } else { self.boundaries[n - 2] };
        let hi = if n == self.count() { f64::INFINITY } else { self.boundaries[n - 1] };
        (lo, hi)
    }
}

/// Windowed evidence for convergence of sum v_n / (1 + |gamma_n|^2).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    /// Partial sum over the truncation window.
    pub partial: f64,
    /// Max successive term ratio over the stabilization window; None when the
    /// window has no ratios to look at.
    pub tail_ratio: Option<f64>,
    pub flag: Tri,
}

/// Coefficient vector of a member function, in the a_n coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub Vec<Complex64>);

impl CoefficientVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// ||a||^2 = sum |a_n|^2 v_n.
    pub fn norm_sq(&self, v: &WeightSequence) -> f64 {
        let a = &self.0;
        pairwise_map(a.len().min(v.len()), &|i| a[i].norm_sqr() * v.entries[i])
    }

    /// Weighted inner product sum a_n conj(b_n) v_n.
    pub fn inner(&self, other: &CoefficientVector, v: &WeightSequence) -> Complex64 {
        let n = self.0.len().min(other.0.len()).min(v.len());
        let terms: Vec<Complex64> =
            (0..n).map(|i| self.0[i] * other.0[i].conj() * v.entries[i]).collect();
        pairwise_c(&terms)
    }
}

/// Which family of unit-norm test vectors to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    /// Single spike: q_n(z) = sqrt(v_n) / (z - gamma_n).
    Q,
    /// Normalised tail: g_n carried by indices m > n, coefficients 1/conj(gamma_m).
    G,
    /// Normalised head: h_n carried by indices m < n, flat coefficients.
    H,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Q => "q",
            TestKind::G => "g",
            TestKind::H => "h",
        }
    }
}

/// A node sequence and weight sequence of equal length, with the derived
/// partition and hypothesis reports computed once up front. The stabilization
/// window (number of trailing indices that ratio tests look at) defaults to
/// ceil(N/4).
#[derive(Debug, Clone)]
pub struct SpacePair {
    gamma: GammaSequence,
    v: WeightSequence,
    partition: AnnulusPartition,
    window: usize,
    admissibility: AdmissibilityReport,
}

impl SpacePair {
    pub fn new(gamma: GammaSequence, v: WeightSequence) -> Result<Self> {
        let w = gamma.len().div_ceil(4);
        Self::with_window(gamma, v, w)
    }

    pub fn with_window(gamma: GammaSequence, v: WeightSequence, window: usize) -> Result<Self> {
        if gamma.len() != v.len() {
            return Err(CoreError::LengthMismatch { nodes: gamma.len(), weights: v.len() });
        }
        let n = gamma.len();
        let window = window.clamp(1, n);
        let partition = AnnulusPartition::from_nodes(&gamma);
        let admissibility = admissibility_report(&gamma, &v, window);
        Ok(Self { gamma, v, partition, window, admissibility })
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn gamma(&self) -> &GammaSequence {
        &self.gamma
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.v
    }

    pub fn partition(&self) -> &AnnulusPartition {
        &self.partition
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn admissibility(&self) -> &AdmissibilityReport {
        &self.admissibility
    }

    pub fn sparseness(&self) -> Result<SparsenessReport> {
        self.gamma.sparseness_report()
    }

    /// Outer radius below which all mass provably sits in the annuli the
    /// window can see, extrapolating the observed minimum modulus ratio one
    /// step past the truncation. None when no trustworthy extrapolation
    /// exists (N < 2 or separation not satisfied).
    pub fn virtual_outer_boundary(&self) -> Option<f64> {
        let rep = self.gamma.sparseness_report().ok()?;
        if !rep.satisfied {
            return None;
        }
        let last = self.gamma.entries[self.gamma.len() - 1].norm();
        Some(0.5 * last * (1.0 + rep.ratio))
    }

    /// Strict containment radius: below b_{N-1} nothing touches the unbounded
    /// outermost annulus. None for a single-node space.
    pub fn strict_outer_boundary(&self) -> Option<f64> {
        self.partition.boundaries.last().copied()
    }

    fn check_off_nodes(&self, z: Complex64) -> Result<()> {
        for (i, g) in self.gamma.entries.iter().enumerate() {
            if *g == z {
                return Err(CoreError::PointOnNode { n: i + 1 });
            }
        }
        Ok(())
    }

    /// f(z) = sum a_n v_n / (z - gamma_n). Errors when z hits a node exactly.
    pub fn evaluate(&self, a: &CoefficientVector, z: Complex64) -> Result<Complex64> {
        if a.len() != self.len() {
            return Err(CoreError::CoefficientLength { got: a.len(), expected: self.len() });
        }
        self.check_off_nodes(z)?;
        let terms: Vec<Complex64> = (0..self.len())
            .map(|i| a.0[i] * self.v.entries[i] / (z - self.gamma.entries[i]))
            .collect();
        Ok(pairwise_c(&terms))
    }

    /// ||k_lambda||^2 = sum v_n / |lambda - gamma_n|^2. Finite exactly when
    /// lambda lies in the natural domain of the space, so this doubles as the
    /// membership test for that domain.
    pub fn kernel_norm_sq(&self, lambda: Complex64) -> Result<f64> {
        self.check_off_nodes(lambda)?;
        Ok(pairwise_map(self.len(), &|i| {
            self.v.entries[i] / (lambda - self.gamma.entries[i]).norm_sqr()
        }))
    }

    /// k_lambda(z) = sum v_n / ((conj(lambda) - conj(gamma_n)) (z - gamma_n)).
    pub fn kernel_eval(&self, lambda: Complex64, z: Complex64) -> Result<Complex64> {
        self.check_off_nodes(lambda)?;
        self.check_off_nodes(z)?;
        let terms: Vec<Complex64> = (0..self.len())
            .map(|i| {
                let g = self.gamma.entries[i];
                self.v.entries[i] / ((lambda - g).conj() * (z - g))
            })
            .collect();
        Ok(pairwise_c(&terms))
    }

    /// Coefficients of k_lambda as a member function: a_n = conj(1/(lambda - gamma_n)).
    pub fn kernel_coefficients(&self, lambda: Complex64) -> Result<CoefficientVector> {
        self.check_off_nodes(lambda)?;
        Ok(CoefficientVector(
            self.gamma
                .entries
                .iter()
                .map(|&g| (Complex64::new(1.0, 0.0) / (lambda - g)).conj())
                .collect(),
        ))
    }

    /// Unit-norm test vectors. q_n exists for every n; h_n needs a nonempty
    /// head (n >= 2); g_n needs a nonempty tail (n < N). The normalisers are
    /// the plain truncated sums, so the norm is 1 by construction.
    pub fn test_function(&self, kind: TestKind, n: usize) -> Result<CoefficientVector> {
        let len = self.len();
        if n < 1 || n > len {
            return Err(CoreError::IndexOutOfRange { n, len });
        }
        let mut a = CoefficientVector::zeros(len);
        match kind {
            TestKind::Q => {
                a.0[n - 1] = Complex64::new(1.0 / self.v.entries[n - 1].sqrt(), 0.0);
            }
            TestKind::H => {
                if n < 2 {
                    return Err(CoreError::EmptyTestRange { kind: "h", n });
                }
                let head = pairwise(&self.v.entries[..n - 1]);
                let scale = 1.0 / head.sqrt();
                for m in 0..n - 1 {
                    a.0[m] = Complex64::new(scale, 0.0);
                }
            }
            TestKind::G => {
                if n >= len {
                    return Err(CoreError::EmptyTestRange { kind: "g", n });
                }
                let tail = pairwise_map(len - n, &|i| {
                    self.v.entries[n + i] / self.gamma.entries[n + i].norm_sqr()
                });
                let scale = 1.0 / tail.sqrt();
                for m in n..len {
                    a.0[m] = scale / self.gamma.entries[m].conj();
                }
            }
        }
        Ok(a)
    }
}

fn admissibility_report(gamma: &GammaSequence, v: &WeightSequence, window: usize) -> AdmissibilityReport {
    let n = gamma.len();
    let term = |i: usize| v.entries[i] / (1.0 + gamma.entries[i].norm_sqr());
    let partial = pairwise_map(n, &term);
    // Ratios t_{m+1}/t_m for m in the last `window` positions that have a
    // successor inside the truncation.
    let lo = n.saturating_sub(window).max(1);
    let mut max_ratio: Option<f64> = None;
    let mut min_ratio: Option<f64> = None;
    for m in lo..n {
        let r = term(m) / term(m - 1);
        max_ratio = Some(max_ratio.map_or(r, |x: f64| x.max(r)));
        min_ratio = Some(min_ratio.map_or(r, |x: f64| x.min(r)));
    }
    let flag = match (max_ratio, min_ratio) {
        (Some(max), _) if max < 1.0 - 1e-6 => Tri::Yes,
        (_, Some(min)) if min >= 1.0 => Tri::No,
        _ => Tri::Inconclusive,
    };
    AdmissibilityReport { partial, tail_ratio: max_ratio, flag }
}
