//! Shared fixture builders for the benchmark targets.

use num_complex::Complex64;

use carleson_core::{GammaSequence, Measure, MeasureComponent, SpacePair, WeightSequence};

/// Nodes 2^n with unit weights, truncated at n.
pub fn geometric_space(n: usize) -> SpacePair {
    let gamma: Vec<Complex64> =
        (1..=n).map(|k| Complex64::new(2f64.powi(k as i32), 0.0)).collect();
    SpacePair::new(
        GammaSequence::new(gamma).unwrap(),
        WeightSequence::new(vec![1.0; n]).unwrap(),
    )
    .unwrap()
}

/// One decaying atom halfway out of each node's annulus from 2 on. The
/// offset scales with the node so the positions stay exact in f64 at any
/// truncation (an absolute offset of 1 is absorbed by rounding past 2^53).
pub fn atom_ladder(space: &SpacePair) -> Measure {
    let n = space.len();
    let comps: Vec<MeasureComponent> = (2..=n)
        .map(|k| MeasureComponent::Atom {
            z: Complex64::new(1.25 * 2f64.powi(k as i32), 0.0),
            w: 4f64.powi(-(k as i32)),
        })
        .collect();
    Measure::new(comps, space).unwrap()
}
