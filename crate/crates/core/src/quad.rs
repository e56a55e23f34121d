//! Adaptive Gauss-Legendre quadrature on bounded intervals. Panels split by
//! bisection until the two-level estimate stabilises; an optional singular
//! abscissa outside the interval seeds geometric refinement toward the nearest
//! endpoint. Work is capped; hitting the cap is reported, not papered over.

use std::cmp::Ordering;
use std::sync::OnceLock;

/// Node/weight pairs on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = order.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess, then Newton on P_order.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (_, d2) = legendre_with_derivative(order, x);
                    dp = d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[order - 1 - i] = x;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Map onto [lo, hi] and integrate.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: &F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..order {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(15))
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_panels: 10_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub converged: bool,
    pub panels: usize,
}

/// Integrate f over [lo, hi]. `near_singularity` marks an abscissa outside the
/// interval where the integrand blows up; panels are pre-split geometrically
/// toward the endpoint closest to it.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    cfg: &QuadConfig,
    near_singularity: Option<f64>,
) -> QuadOutcome {
    // NaN endpoints count as an empty interval.
    if hi.partial_cmp(&lo) != Some(Ordering::Greater) {
        return QuadOutcome { value: 0.0, converged: true, panels: 0 };
    }
    let rule = panel_rule();
    let knots = initial_knots(lo, hi, near_singularity);
    let mut stack: Vec<(f64, f64, f64)> = Vec::new();
    for w in knots.windows(2).rev() {
        stack.push((w[0], w[1], rule.integrate(w[0], w[1], f)));
    }
    let mut total = 0.0;
    let mut panels = stack.len();
    let mut converged = true;
    while let Some((a, b, whole)) = stack.pop() {
        if panels >= cfg.max_panels {
            // Out of budget: fold in what is left so the value is still the
            // best available estimate, and say so.
            converged = false;
            total += whole;
            for &(_, _, w) in &stack {
                total += w;
            }
            break;
        }
        let m = 0.5 * (a + b);
        let left = rule.integrate(a, m, f);
        let right = rule.integrate(m, b, f);
        let refined = left + right;
        if (refined - whole).abs() <= cfg.rel_tol * (refined.abs() + 1e-300)
            || (b - a) < 1e-15 * (hi - lo)
        {
            total += refined;
        } else {
            panels += 2;
            stack.push((m, b, right));
            stack.push((a, m, left));
        }
    }
    QuadOutcome { value: total, converged, panels }
}

fn initial_knots(lo: f64, hi: f64, near_singularity: Option<f64>) -> Vec<f64> {
    let mut knots = vec![lo];
    if let Some(g) = near_singularity {
        let len = hi - lo;
        if g <= lo {
            let d = (lo - g).max(1e-300);
            if d < len {
                let mut off = d;
                while off < len && knots.len() < 60 {
                    knots.push(lo + off);
                    off *= 2.0;
                }
            }
        } else if g >= hi {
            let d = (g - hi).max(1e-300);
            if d < len {
                let mut off = d;
                let mut tail = Vec::new();
                while off < len && tail.len() < 60 {
                    tail.push(hi - off);
                    off *= 2.0;
                }
                tail.reverse();
                knots.extend(tail);
            }
        }
    }
    knots.push(hi);
    knots
}
