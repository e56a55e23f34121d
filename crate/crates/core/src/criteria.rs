//! Certificate layer: windowed quantity sequences and the three-valued
//! boundedness / compactness / Hilbert-Schmidt verdicts.
//!
//! For each annulus the two tracked quantities are
//!   A_n = v_n * int_{Omega_n} dmu / |z - gamma_n|^2
//!   D_n = (sum_{m<=n} v_m) * (sum_{m>n} tau_m^2)
//!       + (sum_{m>n} v_m/|gamma_m|^2) * (sum_{m<=n} mu(Omega_m))
//! with tau_m^2 = int_{Omega_m} dmu / |z|^2. Boundedness of the embedding is
//! equivalent to both sups being finite; compactness to both tending to zero.
//! The prefix factor in D includes the m = n term and the tail factor sums
//! v_m/|gamma_m|^2 over m > n; reports carry a note recording exactly this
//! index convention.
//!
//! A finite window cannot observe a limit, so the window semantics are
//! explicit: verdicts are `holds` / `fails` only when the visible evidence
//! (support containment, exact zero tails, stabilised geometric decay or a
//! stabilised positive floor) supports them, and `inconclusive` otherwise.

use crate::measure::Measure;
use crate::quad::QuadConfig;
use crate::space::{SpacePair, Tri};
use crate::sum::{pairwise, pairwise_map};

pub const INDEX_CONVENTION_NOTE: &str =
    "D_n = (sum_{m<=n} v_m)*(sum_{m>n} tau_m^2) + (sum_{m>n} v_m/|gamma_m|^2)*(sum_{m<=n} mass_m); \
     the tail weight factor is summed over m>n with summand v_m/|gamma_m|^2";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CriteriaConfig {
    /// Caller-asserted promise that the measure's behaviour past the window
    /// is no worse than inside it; lets boundedness conclude `holds` when
    /// support containment alone cannot.
    pub tail_monotone: bool,
    /// Successive-ratio threshold for calling a window geometrically
    /// decaying: max ratio must stay below 1 - decay_margin.
    pub decay_margin: f64,
    /// Floor for calling a window stagnant: all nonzero values at or above
    /// this level mean the sequence is not heading to zero.
    pub liminf_floor: f64,
    pub quad: QuadConfig,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        Self {
            tail_monotone: false,
            decay_margin: 1e-3,
            liminf_floor: 1e-9,
            quad: QuadConfig::default(),
        }
    }
}

/// Per-annulus quantities at truncation. Vectors are indexed by annulus, entry
/// i holding the value for n = i+1. `p` carries the geometric tail bound on
/// top of the window sum whenever admissibility was affirmed.
#[derive(Debug, Clone)]
pub struct QuantitySequences {
    pub a: Vec<f64>,
    pub tau_sq: Vec<f64>,
    pub mass: Vec<f64>,
    pub vhat: Vec<f64>,
    pub p: Vec<f64>,
    pub d: Vec<f64>,
    /// Geometric bound on sum_{m>N} v_m/|gamma_m|^2 added to every p entry;
    /// zero when admissibility is not affirmed or the terms do not shrink.
    pub p_tail_bound: f64,
}

pub fn quantity_sequences(space: &SpacePair, mu: &Measure, quad: &QuadConfig) -> QuantitySequences {
    let n = space.len();
    let part = space.partition();
    let v = space.weights();

    let a: Vec<f64> = (1..=n)
        .map(|k| v.weight(k) * mu.int_inv_sq_dist(part, k, space.gamma().node(k), quad))
        .collect();
    let tau_sq: Vec<f64> = (1..=n).map(|k| mu.int_inv_sq_modulus(part, k)).collect();
    let mass: Vec<f64> = (1..=n).map(|k| mu.mass(part, k)).collect();

    let vhat: Vec<f64> = (1..=n)
        .scan(0.0, |acc, k| {
            *acc += v.weight(k);
            Some(*acc)
        })
        .collect();

    let p_terms: Vec<f64> =
        (1..=n).map(|k| v.weight(k) / space.gamma().node(k).norm_sqr()).collect();
    let p_tail_bound = tail_bound(&p_terms, space);
    let mut p = vec![0.0; n];
    let mut suffix = p_tail_bound;
    for i in (0..n).rev() {
        p[i] = suffix;
        suffix += p_terms[i];
    }

    let mut tau_suffix = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        tau_suffix[i] = acc;
        acc += tau_sq[i];
    }
    let mut mass_prefix = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n {
        acc += mass[i];
        mass_prefix[i] = acc;
    }

    let d: Vec<f64> =
        (0..n).map(|i| vhat[i] * tau_suffix[i] + p[i] * mass_prefix[i]).collect();

    QuantitySequences { a, tau_sq, mass, vhat, p, d, p_tail_bound }
}

/// Geometric bound on the unseen tail of sum v_m/|gamma_m|^2, from the worst
/// successive ratio of the visible terms over the stabilization window. Only
/// trusted when the admissibility flag is an affirmative yes.
fn tail_bound(p_terms: &[f64], space: &SpacePair) -> f64 {
    if space.admissibility().flag != Tri::Yes {
        return 0.0;
    }
    let n = p_terms.len();
    let lo = n.saturating_sub(space.window()).max(1);
    let mut rho: f64 = 0.0;
    for m in lo..n {
        rho = rho.max(p_terms[m] / p_terms[m - 1]);
    }
    if rho > 0.0 && rho < 1.0 {
        p_terms[n - 1] * rho / (1.0 - rho)
    } else {
        0.0
    }
}

/// Boundedness certificate. `c_star = max(sup A, sup D)` is the certified
/// window constant; witnesses are the 1-based annulus indices achieving it.
#[derive(Debug, Clone)]
pub struct CarlesonCertificate {
    pub verdict: Verdict,
    pub sup_a: f64,
    pub witness_a: usize,
    pub sup_d: f64,
    pub witness_d: usize,
    pub c_star: f64,
    /// All support provably inside annuli whose quantities the window sees.
    pub exhausted: bool,
    pub tail_monotone: bool,
    pub warnings: Vec<String>,
}

fn sup_with_witness(xs: &[f64]) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut idx = 1;
    for (i, &x) in xs.iter().enumerate() {
        if x > best {
            best = x;
            idx = i + 1;
        }
    }
    if xs.is_empty() {
        (0.0, 0)
    } else {
        (best, idx)
    }
}

fn hypothesis_warnings(space: &SpacePair) -> Vec<String> {
    let mut warnings = Vec::new();
    match space.sparseness() {
        Ok(rep) if !rep.satisfied => warnings.push(format!(
            "node separation hypothesis unmet: min modulus ratio {} <= 1",
            rep.ratio
        )),
        Err(_) => warnings.push("single-node space: separation hypothesis untestable".into()),
        _ => {}
    }
    match space.admissibility().flag {
        Tri::Yes => {}
        Tri::No => warnings.push("weight admissibility test failed: windowed terms are nondecreasing".into()),
        Tri::Inconclusive => warnings.push("weight admissibility inconclusive on this window".into()),
    }
    warnings
}

/// True when every scrap of mass sits strictly below `radius`.
fn contained_below(mu: &Measure, radius: Option<f64>) -> bool {
    match radius {
        Some(r) => mu.support_radius() < r,
        None => false,
    }
}

pub fn carleson_check(space: &SpacePair, mu: &Measure, cfg: &CriteriaConfig) -> CarlesonCertificate {
    let qs = quantity_sequences(space, mu, &cfg.quad);
    carleson_from_sequences(space, mu, &qs, cfg)
}

pub fn carleson_from_sequences(
    space: &SpacePair,
    mu: &Measure,
    qs: &QuantitySequences,
    cfg: &CriteriaConfig,
) -> CarlesonCertificate {
    let (sup_a, witness_a) = sup_with_witness(&qs.a);
    let (sup_d, witness_d) = sup_with_witness(&qs.d);
    let c_star = sup_a.max(sup_d);
    let mut warnings = hypothesis_warnings(space);

    let exhausted = contained_below(mu, space.virtual_outer_boundary())
        || contained_below(mu, space.strict_outer_boundary());

    let verdict = if !sup_a.is_finite() || !sup_d.is_finite() {
        Verdict::Fails
    } else if exhausted || cfg.tail_monotone {
        Verdict::Holds
    } else {
        warnings.push(
            "support reaches past the window's outer containment radius; finite suprema alone \
             cannot certify boundedness (set the tail_monotone option to assert tail behaviour)"
                .into(),
        );
        Verdict::Inconclusive
    };

    CarlesonCertificate {
        verdict,
        sup_a,
        witness_a,
        sup_d,
        witness_d,
        c_star,
        exhausted,
        tail_monotone: cfg.tail_monotone,
        warnings,
    }
}

/// How a window was judged against "tends to zero".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssessMode {
    /// Support ends inside the bounded annuli and admissibility holds, so the
    /// true tail is exactly zero / dominated.
    ExactZeroTail,
    /// Purely atomic measure strictly inside the bounded annuli: the
    /// embedding has finite rank.
    FiniteRank,
    /// Stabilised geometric decay across the window.
    GeometricDecay,
    /// Window floor sits above the liminf threshold.
    Stagnant,
    /// A quantity is infinite.
    Divergent,
    /// None of the patterns stabilised.
    Mixed,
}

impl AssessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AssessMode::ExactZeroTail => "exact-zero-tail",
            AssessMode::FiniteRank => "finite-rank",
            AssessMode::GeometricDecay => "geometric-decay",
            AssessMode::Stagnant => "stagnant",
            AssessMode::Divergent => "divergent",
            AssessMode::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SequenceAssessment {
    pub verdict: Verdict,
    pub mode: AssessMode,
    /// Smallest nonzero value over the stabilization window (0 when the
    /// window is entirely zero).
    pub window_min: f64,
    /// Largest successive ratio of nonzero window values, when two or more
    /// exist.
    pub max_ratio: Option<f64>,
}

fn assess_sequence(s: &[f64], window: usize, cfg: &CriteriaConfig) -> SequenceAssessment {
    if s.iter().any(|x| x.is_infinite()) {
        return SequenceAssessment {
            verdict: Verdict::Fails,
            mode: AssessMode::Divergent,
            window_min: f64::INFINITY,
            max_ratio: None,
        };
    }
    let lo = s.len().saturating_sub(window);
    let zs: Vec<f64> = s[lo..].iter().copied().filter(|&x| x > 0.0).collect();
    if zs.is_empty() {
        return SequenceAssessment {
            verdict: Verdict::Holds,
            mode: AssessMode::ExactZeroTail,
            window_min: 0.0,
            max_ratio: None,
        };
    }
    let window_min = zs.iter().copied().fold(f64::INFINITY, f64::min);
    if zs.len() == 1 {
        return SequenceAssessment {
            verdict: Verdict::Inconclusive,
            mode: AssessMode::Mixed,
            window_min,
            max_ratio: None,
        };
    }
    let mut max_ratio: f64 = 0.0;
    for w in zs.windows(2) {
        max_ratio = max_ratio.max(w[1] / w[0]);
    }
    let (verdict, mode) = if max_ratio < 1.0 - cfg.decay_margin {
        (Verdict::Holds, AssessMode::GeometricDecay)
    } else if window_min >= cfg.liminf_floor {
        (Verdict::Fails, AssessMode::Stagnant)
    } else {
        (Verdict::Inconclusive, AssessMode::Mixed)
    };
    SequenceAssessment { verdict, mode, window_min, max_ratio: Some(max_ratio) }
}

#[derive(Debug, Clone)]
pub struct CompactnessCertificate {
    pub verdict: Verdict,
    pub carleson: Verdict,
    pub a: SequenceAssessment,
    pub d: SequenceAssessment,
    pub warnings: Vec<String>,
}

pub fn compactness_check(space: &SpacePair, mu: &Measure, cfg: &CriteriaConfig) -> CompactnessCertificate {
    let qs = quantity_sequences(space, mu, &cfg.quad);
    let car = carleson_from_sequences(space, mu, &qs, cfg);
    compactness_from_sequences(space, mu, &qs, &car, cfg)
}

pub fn compactness_from_sequences(
    space: &SpacePair,
    mu: &Measure,
    qs: &QuantitySequences,
    car: &CarlesonCertificate,
    cfg: &CriteriaConfig,
) -> CompactnessCertificate {
    let mut warnings = car.warnings.clone();
    let strictly_inside = contained_below(mu, space.strict_outer_boundary());

    // A purely atomic measure strictly inside the bounded annuli gives a
    // finite-rank embedding: compact outright.
    if car.verdict != Verdict::Fails && mu.is_atoms_only() && strictly_inside {
        let assessment = SequenceAssessment {
            verdict: Verdict::Holds,
            mode: AssessMode::FiniteRank,
            window_min: 0.0,
            max_ratio: None,
        };
        return CompactnessCertificate {
            verdict: Verdict::Holds,
            carleson: car.verdict,
            a: assessment,
            d: assessment,
            warnings,
        };
    }

    // Continuous mass that still ends inside the bounded annuli: the true A
    // tail is exactly zero and the D tail is dominated by the admissible
    // weight tail.
    if car.verdict != Verdict::Fails
        && strictly_inside
        && space.admissibility().flag == Tri::Yes
    {
        let assessment = SequenceAssessment {
            verdict: Verdict::Holds,
            mode: AssessMode::ExactZeroTail,
            window_min: 0.0,
            max_ratio: None,
        };
        return CompactnessCertificate {
            verdict: Verdict::Holds,
            carleson: car.verdict,
            a: assessment,
            d: assessment,
            warnings,
        };
    }

    let a = assess_sequence(&qs.a, space.window(), cfg);
    let d = assess_sequence(&qs.d, space.window(), cfg);
    let verdict = if car.verdict == Verdict::Fails {
        warnings.push("embedding is not bounded, hence not compact".into());
        Verdict::Fails
    } else if a.verdict == Verdict::Fails || d.verdict == Verdict::Fails {
        Verdict::Fails
    } else if a.verdict == Verdict::Holds && d.verdict == Verdict::Holds {
        Verdict::Holds
    } else {
        Verdict::Inconclusive
    };
    CompactnessCertificate { verdict, carleson: car.verdict, a, d, warnings }
}

/// Exact Hilbert-Schmidt norm and the equivalent split condition.
#[derive(Debug, Clone)]
pub struct HsReport {
    /// integral of ||k_z||^2 dmu = sum_n v_n int dmu/|z-gamma_n|^2, over the
    /// whole plane.
    pub hs_exact: f64,
    /// sum_n A_n.
    pub sum_local: f64,
    /// sum_m v_m (sum_{j>m} tau_j^2) + sum_m v_m/|gamma_m|^2 (sum_{j<m} mass_j).
    pub sum_global: f64,
    pub exact_finite: bool,
    pub local_finite: bool,
    pub global_finite: bool,
}

pub fn hs_check(space: &SpacePair, mu: &Measure, quad: &QuadConfig) -> HsReport {
    let n = space.len();
    let hs_exact = pairwise_map(n, &|i| {
        space.weights().weight(i + 1) * mu.int_inv_sq_dist_total(space.gamma().node(i + 1), quad)
    });
    let qs = quantity_sequences(space, mu, quad);
    let sum_local = pairwise(&qs.a);

    let mut tau_suffix = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        tau_suffix[i] = acc;
        acc += qs.tau_sq[i];
    }
    let mut mass_prefix_strict = vec![0.0; n];
    let mut acc = 0.0;
    for (slot, m) in mass_prefix_strict.iter_mut().zip(&qs.mass) {
        *slot = acc;
        acc += m;
    }
    let g1 = pairwise_map(n, &|i| space.weights().weight(i + 1) * tau_suffix[i]);
    let g2 = pairwise_map(n, &|i| {
        space.weights().weight(i + 1) / space.gamma().node(i + 1).norm_sqr() * mass_prefix_strict[i]
    });
    let sum_global = g1 + g2;

    HsReport {
        hs_exact,
        sum_local,
        sum_global,
        exact_finite: hs_exact.is_finite(),
        local_finite: sum_local.is_finite(),
        global_finite: sum_global.is_finite(),
    }
}

/// Which reduced tests apply: exponentially growing weights with
/// exponentially decaying v_n/|gamma_n|^2 make the local quantity decisive;
/// summable weights make the global one decisive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorollaryRegime {
    pub exp_weights: bool,
    pub summable: bool,
}

pub fn corollary_regime(space: &SpacePair) -> CorollaryRegime {
    let n = space.len();
    let v = space.weights();
    let exp_weights = if n < 2 {
        false
    } else {
        let mut vr_min = f64::INFINITY;
        let mut ur_max: f64 = 0.0;
        for k in 1..n {
            let vr = v.weight(k + 1) / v.weight(k);
            vr_min = vr_min.min(vr);
            let u0 = v.weight(k) / space.gamma().node(k).norm_sqr();
            let u1 = v.weight(k + 1) / space.gamma().node(k + 1).norm_sqr();
            ur_max = ur_max.max(u1 / u0);
        }
        vr_min > 1.0 && ur_max < 1.0
    };
    let summable = {
        let lo = n.saturating_sub(space.window()).max(1);
        let mut max_ratio: Option<f64> = None;
        for k in lo..n {
            let r = v.weight(k + 1) / v.weight(k);
            max_ratio = Some(max_ratio.map_or(r, |x: f64| x.max(r)));
        }
        matches!(max_ratio, Some(r) if r < 1.0 - 1e-6)
    };
    CorollaryRegime { exp_weights, summable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureComponent;
    use crate::space::{GammaSequence, WeightSequence};
    use num_complex::Complex64;

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

    /// Atoms just past each node: z_n = 2^n + 1 for n = 2..=40.
    fn ladder_measure(space: &SpacePair, mass: impl Fn(u32) -> f64) -> Measure {
        let comps: Vec<MeasureComponent> = (2..=40)
            .map(|n| MeasureComponent::Atom { z: c64(2f64.powi(n as i32) + 1.0, 0.0), w: mass(n) })
            .collect();
        Measure::new(comps, space).unwrap()
    }

    #[test]
    fn single_atom_quantities() {
        let space = s1(40);
        let mu =
            Measure::new(vec![MeasureComponent::Atom { z: c64(0.0, 3.0), w: 1.0 }], &space).unwrap();
        let qs = quantity_sequences(&space, &mu, &QuadConfig::default());
        // The atom sits in annulus 2 at distance |3i - 4|.
        assert!((qs.a[1] - 1.0 / 25.0).abs() < 1e-17);
        for (i, &a) in qs.a.iter().enumerate() {
            if i != 1 {
                assert_eq!(a, 0.0, "A at annulus {}", i + 1);
            }
        }
        // D_1 = tau_2^2 = 1/9; D_2 = P_2 * 1 = geometric tail 1/48.
        assert!((qs.d[0] - 1.0 / 9.0).abs() < 1e-16);
        assert!((qs.d[1] - 1.0 / 48.0).abs() < 1e-12);
    }

    #[test]
    fn empty_measure_holds_with_zero_constant() {
        let space = s1(40);
        let mu = Measure::empty();
        let cert = carleson_check(&space, &mu, &CriteriaConfig::default());
        assert_eq!(cert.verdict, Verdict::Holds);
        assert_eq!(cert.c_star, 0.0);
        assert!(cert.exhausted);
        let comp = compactness_check(&space, &mu, &CriteriaConfig::default());
        assert_eq!(comp.verdict, Verdict::Holds);
    }

    #[test]
    fn ladder_with_unit_masses_is_bounded_not_compact() {
        let space = s1(40);
        let mu = ladder_measure(&space, |_| 1.0);
        let cfg = CriteriaConfig::default();
        let qs = quantity_sequences(&space, &mu, &cfg.quad);
        for n in 2..=40 {
            assert_eq!(qs.a[n - 1], 1.0, "A_{n} should be exactly 1");
        }
        assert_eq!(qs.a[0], 0.0);

        let car = carleson_from_sequences(&space, &mu, &qs, &cfg);
        assert_eq!(car.verdict, Verdict::Holds);
        assert!(car.exhausted, "support must sit inside the extrapolated outer annulus");
        assert_eq!(car.sup_a, 1.0);
        assert_eq!(car.witness_a, 2);
        assert!(car.sup_d.is_finite());
        assert_eq!(car.c_star, 1.0);

        let comp = compactness_from_sequences(&space, &mu, &qs, &car, &cfg);
        assert_eq!(comp.verdict, Verdict::Fails);
        assert_eq!(comp.a.verdict, Verdict::Fails);
        assert_eq!(comp.a.mode, AssessMode::Stagnant);
    }

    #[test]
    fn ladder_with_decaying_masses_is_compact() {
        let space = s1(40);
        let mu = ladder_measure(&space, |n| 4f64.powi(-(n as i32)));
        let cfg = CriteriaConfig::default();
        let comp = compactness_check(&space, &mu, &cfg);
        assert_eq!(comp.carleson, Verdict::Holds);
        assert_eq!(comp.verdict, Verdict::Holds);
        assert_eq!(comp.a.mode, AssessMode::GeometricDecay);
        assert_eq!(comp.d.mode, AssessMode::GeometricDecay);
    }

    #[test]
    fn circle_through_node_fails_both() {
        let space = s1(20);
        let mu =
            Measure::new(vec![MeasureComponent::CircleUniform { r: 4.0, w: 1.0 }], &space).unwrap();
        let cfg = CriteriaConfig::default();
        let car = carleson_check(&space, &mu, &cfg);
        assert_eq!(car.verdict, Verdict::Fails);
        assert!(car.sup_a.is_infinite());
        assert_eq!(car.witness_a, 2);
        let comp = compactness_check(&space, &mu, &cfg);
        assert_eq!(comp.verdict, Verdict::Fails);
        assert_eq!(comp.a.mode, AssessMode::Divergent);
    }

    #[test]
    fn finite_atomic_measure_inside_window_is_compact() {
        let space = s1(6);
        let mu =
            Measure::new(vec![MeasureComponent::Atom { z: c64(0.0, 3.0), w: 5.0 }], &space).unwrap();
        let comp = compactness_check(&space, &mu, &CriteriaConfig::default());
        assert_eq!(comp.verdict, Verdict::Holds);
        assert_eq!(comp.a.mode, AssessMode::FiniteRank);
    }

    #[test]
    fn hs_single_atom_equals_weighted_kernel_norm() {
        let space = s1(30);
        let z = c64(7.0, 2.0);
        let w = 0.35;
        let mu = Measure::new(vec![MeasureComponent::Atom { z, w }], &space).unwrap();
        let rep = hs_check(&space, &mu, &QuadConfig::default());
        let expected = w * space.kernel_norm_sq(z).unwrap();
        assert!((rep.hs_exact - expected).abs() < 1e-12 * expected);
        assert!(rep.exact_finite && rep.local_finite && rep.global_finite);
    }

    #[test]
    fn hs_detects_divergence() {
        let space = s1(20);
        let mu =
            Measure::new(vec![MeasureComponent::CircleUniform { r: 4.0, w: 1.0 }], &space).unwrap();
        let rep = hs_check(&space, &mu, &QuadConfig::default());
        assert!(!rep.exact_finite);
        assert!(!rep.local_finite);
    }

    #[test]
    fn corollary_regimes() {
        let gamma: Vec<Complex64> = (1..=20).map(|k| c64(4f64.powi(k), 0.0)).collect();
        let v: Vec<f64> = (1..=20).map(|k| 2f64.powi(k)).collect();
        let s = SpacePair::new(GammaSequence::new(gamma).unwrap(), WeightSequence::new(v).unwrap())
            .unwrap();
        let reg = corollary_regime(&s);
        assert!(reg.exp_weights);
        assert!(!reg.summable);

        let s2 = {
            let gamma: Vec<Complex64> = (1..=20).map(|k| c64(2f64.powi(k), 0.0)).collect();
            let v: Vec<f64> = (1..=20).map(|k| 2f64.powi(-k)).collect();
            SpacePair::new(GammaSequence::new(gamma).unwrap(), WeightSequence::new(v).unwrap())
                .unwrap()
        };
        let reg2 = corollary_regime(&s2);
        assert!(reg2.summable);
        assert!(!reg2.exp_weights);

        let s3 = s1(20);
        let reg3 = corollary_regime(&s3);
        assert!(!reg3.exp_weights && !reg3.summable);
    }

    #[test]
    fn scaling_preserves_verdicts_and_scales_quantities() {
        let space = s1(40);
        let cfg = CriteriaConfig::default();
        for mu in [ladder_measure(&space, |_| 1.0), ladder_measure(&space, |n| 4f64.powi(-(n as i32)))] {
            let qs0 = quantity_sequences(&space, &mu, &cfg.quad);
            let car0 = carleson_from_sequences(&space, &mu, &qs0, &cfg);
            let comp0 = compactness_from_sequences(&space, &mu, &qs0, &car0, &cfg);
            for t in [0.5, 2.0, 7.0] {
                let nu = mu.scaled(t);
                let qs1 = quantity_sequences(&space, &nu, &cfg.quad);
                for i in 0..space.len() {
                    assert!((qs1.a[i] - t * qs0.a[i]).abs() <= 1e-10 * (1.0 + t * qs0.a[i]));
                    assert!((qs1.d[i] - t * qs0.d[i]).abs() <= 1e-10 * (1.0 + t * qs0.d[i]));
                }
                let car1 = carleson_from_sequences(&space, &nu, &qs1, &cfg);
                let comp1 = compactness_from_sequences(&space, &nu, &qs1, &car1, &cfg);
                assert_eq!(car1.verdict, car0.verdict);
                assert_eq!(comp1.verdict, comp0.verdict);
            }
        }
    }
}
