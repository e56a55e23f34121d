//! Finitely described positive measures on the plane: point masses, uniform
//! mass on circles, and radially symmetric densities c r^alpha dr spread
//! uniformly in angle. The three integral primitives the certificates need
//! (mass per annulus, 1/|z|^2 mass, 1/|z-gamma|^2 mass) have closed forms
//! except for the radial-against-node case, which goes through adaptive
//! quadrature. Divergent integrals come back as +infinity, never as an error:
//! an infinite value is a meaningful verdict input.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::quad::{adaptive, GaussLegendre, QuadConfig};
use crate::space::{AnnulusPartition, SpacePair};
use crate::sum::pairwise;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureComponent {
    Atom { z: Complex64, w: f64 },
    /// Total mass w spread uniformly over the circle |z| = r.
    CircleUniform { r: f64, w: f64 },
    /// Density c r^alpha dr in radius over a <= r <= b, uniform in angle.
    RadialPower { a: f64, b: f64, alpha: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    components: Vec<MeasureComponent>,
}

/// integral of r^p dr over [lo, hi]; +infinity when the endpoint singularity
/// at lo = 0 is not integrable.
fn power_integral(p: f64, lo: f64, hi: f64) -> f64 {
    // NaN endpoints fall through to the empty-interval branch.
    if hi.partial_cmp(&lo) != Some(Ordering::Greater) {
        return 0.0;
    }
    if lo == 0.0 && p <= -1.0 {
        return f64::INFINITY;
    }
    if p == -1.0 {
        (hi / lo).ln()
    } else {
        let q = p + 1.0;
        (hi.powf(q) - lo.powf(q)) / q
    }
}

impl Measure {
    /// Validate components against a space: finite parameters, nonnegative
    /// masses, atoms strictly off the node set, radial ranges with finite
    /// total mass.
    pub fn new(components: Vec<MeasureComponent>, space: &SpacePair) -> Result<Self> {
        for (i, comp) in components.iter().enumerate() {
            let idx = i + 1;
            match *comp {
                MeasureComponent::Atom { z, w } => {
                    if !(z.re.is_finite() && z.im.is_finite()) {
                        return Err(CoreError::BadComponent { i: idx, reason: "atom position is not finite".into() });
                    }
                    if !(w.is_finite() && w >= 0.0) {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("atom mass {w} is not a finite nonnegative number") });
                    }
                    for (n, g) in space.gamma().entries().iter().enumerate() {
                        if *g == z {
                            return Err(CoreError::AtomOnNode { i: idx, n: n + 1 });
                        }
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if !(r.is_finite() && r > 0.0) {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("circle radius {r} must be positive and finite") });
                    }
                    if !(w.is_finite() && w >= 0.0) {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("circle mass {w} is not a finite nonnegative number") });
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < b) {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("radial range [{a}, {b}] must satisfy 0 <= a < b") });
                    }
                    if !(c.is_finite() && c >= 0.0) {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("radial density scale {c} is not a finite nonnegative number") });
                    }
                    if !alpha.is_finite() {
                        return Err(CoreError::BadComponent { i: idx, reason: "radial exponent is not finite".into() });
                    }
                    if c > 0.0 && a == 0.0 && alpha <= -1.0 {
                        return Err(CoreError::BadComponent { i: idx, reason: format!("radial density r^{alpha} from r = 0 has infinite mass") });
                    }
                }
            }
        }
        Ok(Self { components })
    }

    pub fn empty() -> Self {
        Self { components: Vec::new() }
    }

    pub fn components(&self) -> &[MeasureComponent] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_atoms_only(&self) -> bool {
        self.components.iter().all(|c| matches!(c, MeasureComponent::Atom { .. }))
    }

    /// Positions and masses of the atomic components, in declaration order.
    pub fn atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.components.iter().filter_map(|c| match *c {
            MeasureComponent::Atom { z, w } => Some((z, w)),
            _ => None,
        })
    }

    /// Copy with every mass scaled by t >= 0.
    pub fn scaled(&self, t: f64) -> Measure {
        let components = self
            .components
            .iter()
            .map(|c| match *c {
                MeasureComponent::Atom { z, w } => MeasureComponent::Atom { z, w: t * w },
                MeasureComponent::CircleUniform { r, w } => MeasureComponent::CircleUniform { r, w: t * w },
                MeasureComponent::RadialPower { a, b, alpha, c } => MeasureComponent::RadialPower { a, b, alpha, c: t * c },
            })
            .collect();
        Measure { components }
    }

    /// Radius of the smallest origin-centred disc containing the support
    /// (components with zero mass do not count). 0 for the empty measure.
    pub fn support_radius(&self) -> f64 {
        let mut r_max: f64 = 0.0;
        for comp in &self.components {
            let r = match *comp {
                MeasureComponent::Atom { z, w } => {
                    if w > 0.0 {
                        z.norm()
                    } else {
                        0.0
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if w > 0.0 {
                        r
                    } else {
                        0.0
                    }
                }
                MeasureComponent::RadialPower { b, c, .. } => {
                    if c > 0.0 {
                        b
                    } else {
                        0.0
                    }
                }
            };
            r_max = r_max.max(r);
        }
        r_max
    }

    pub fn total_mass(&self) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|comp| match *comp {
                MeasureComponent::Atom { w, .. } => w,
                MeasureComponent::CircleUniform { w, .. } => w,
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        0.0
                    } else {
                        c * power_integral(alpha, a, b)
                    }
                }
            })
            .collect();
        pairwise(&terms)
    }

    fn clip(part: &AnnulusPartition, n: usize, a: f64, b: f64) -> (f64, f64) {
        let (lo, hi) = part.radial_range(n);
        (a.max(lo), b.min(hi))
    }

    /// mu(Omega_n).
    pub fn mass(&self, part: &AnnulusPartition, n: usize) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|comp| match *comp {
                MeasureComponent::Atom { z, w } => {
                    if w > 0.0 && part.annulus_of(z) == n {
                        w
                    } else {
                        0.0
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if w > 0.0 && part.annulus_of_radius(r) == n {
                        w
                    } else {
                        0.0
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        return 0.0;
                    }
                    let (lo, hi) = Self::clip(part, n, a, b);
                    c * power_integral(alpha, lo, hi)
                }
            })
            .collect();
        pairwise(&terms)
    }

    /// integral over Omega_n of 1/|z|^2 dmu.
    pub fn int_inv_sq_modulus(&self, part: &AnnulusPartition, n: usize) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|comp| match *comp {
                MeasureComponent::Atom { z, w } => {
                    if w > 0.0 && part.annulus_of(z) == n {
                        w / z.norm_sqr()
                    } else {
                        0.0
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if w > 0.0 && part.annulus_of_radius(r) == n {
                        w / (r * r)
                    } else {
                        0.0
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        return 0.0;
                    }
                    let (lo, hi) = Self::clip(part, n, a, b);
                    c * power_integral(alpha - 2.0, lo, hi)
                }
            })
            .collect();
        pairwise(&terms)
    }

    /// integral over Omega_n of 1/|z - gamma|^2 dmu. The angular average over
    /// a circle of radius r has the closed form 1/|r^2 - |gamma|^2|, which
    /// also drives the radial integrand.
    pub fn int_inv_sq_dist(
        &self,
        part: &AnnulusPartition,
        n: usize,
        gamma: Complex64,
        quad: &QuadConfig,
    ) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|comp| match *comp {
                MeasureComponent::Atom { z, w } => {
                    if w > 0.0 && part.annulus_of(z) == n {
                        w / (z - gamma).norm_sqr()
                    } else {
                        0.0
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if w > 0.0 && part.annulus_of_radius(r) == n {
                        circle_inv_sq_dist(r, w, gamma.norm())
                    } else {
                        0.0
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        return 0.0;
                    }
                    let (lo, hi) = Self::clip(part, n, a, b);
                    radial_inv_sq_dist(lo, hi, alpha, c, gamma.norm(), quad)
                }
            })
            .collect();
        pairwise(&terms)
    }

    /// integral over the whole plane of 1/|z - gamma|^2 dmu.
    pub fn int_inv_sq_dist_total(&self, gamma: Complex64, quad: &QuadConfig) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .map(|comp| match *comp {
                MeasureComponent::Atom { z, w } => {
                    if w > 0.0 {
                        w / (z - gamma).norm_sqr()
                    } else {
                        0.0
                    }
                }
                MeasureComponent::CircleUniform { r, w } => {
                    if w > 0.0 {
                        circle_inv_sq_dist(r, w, gamma.norm())
                    } else {
                        0.0
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        return 0.0;
                    }
                    radial_inv_sq_dist(a, b, alpha, c, gamma.norm(), quad)
                }
            })
            .collect();
        pairwise(&terms)
    }

    /// Purely atomic stand-in: atoms pass through, a circle becomes K equal
    /// masses at uniform angles, a radial density becomes a K-point
    /// Gauss-Legendre grid in radius crossed with K uniform angles. Radial
    /// node weights are normalised so the component keeps its exact mass.
    pub fn discretize(&self, k: usize) -> Result<Measure> {
        if k < 8 {
            return Err(CoreError::BadResolution { k });
        }
        let mut atoms = Vec::new();
        for comp in &self.components {
            match *comp {
                MeasureComponent::Atom { z, w } => atoms.push(MeasureComponent::Atom { z, w }),
                MeasureComponent::CircleUniform { r, w } => {
                    for j in 0..k {
                        let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                        let z = Complex64::from_polar(r, theta);
                        atoms.push(MeasureComponent::Atom { z, w: w / k as f64 });
                    }
                }
                MeasureComponent::RadialPower { a, b, alpha, c } => {
                    if c == 0.0 {
                        continue;
                    }
                    let rule = GaussLegendre::new(k);
                    let half = 0.5 * (b - a);
                    let mid = 0.5 * (b + a);
                    let radii: Vec<f64> = rule.nodes().iter().map(|x| mid + half * x).collect();
                    let mut ring_mass: Vec<f64> =
                        rule.weights().iter().zip(&radii).map(|(w, r)| half * w * c * r.powf(alpha)).collect();
                    let exact = c * power_integral(alpha, a, b);
                    let quad_mass = pairwise(&ring_mass);
                    if quad_mass > 0.0 && exact.is_finite() {
                        let scale = exact / quad_mass;
                        for m in ring_mass.iter_mut() {
                            *m *= scale;
                        }
                    }
                    for (r, m) in radii.iter().zip(&ring_mass) {
                        for j in 0..k {
                            let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                            let z = Complex64::from_polar(*r, theta);
                            atoms.push(MeasureComponent::Atom { z, w: m / k as f64 });
                        }
                    }
                }
            }
        }
        Ok(Measure { components: atoms })
    }
}

fn circle_inv_sq_dist(r: f64, w: f64, g: f64) -> f64 {
    let denom = (r * r - g * g).abs();
    if denom == 0.0 {
        f64::INFINITY
    } else {
        w / denom
    }
}

fn radial_inv_sq_dist(lo: f64, hi: f64, alpha: f64, c: f64, g: f64, quad: &QuadConfig) -> f64 {
    if hi.partial_cmp(&lo) != Some(Ordering::Greater) {
        return 0.0;
    }
    if g >= lo && g <= hi {
        // 1/|r - g| is not integrable, whether g is interior or an endpoint.
        return f64::INFINITY;
    }
    if lo == 0.0 && alpha <= -1.0 {
        // r^alpha / g^2 mass accumulates at the origin faster than r^{-1}.
        return f64::INFINITY;
    }
    let f = |r: f64| r.powf(alpha) / (r * r - g * g).abs();
    let out = adaptive(&f, lo, hi, quad, Some(g));
    if out.converged {
        c * out.value
    } else {
        f64::INFINITY
    }
}
