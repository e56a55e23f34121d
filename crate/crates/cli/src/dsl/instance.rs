//! Turns a parsed instance file into live core objects: evaluate the node
//! and weight expressions at the resolved truncation, expand atom families,
//! validate through the core constructors and merge the three option layers
//! (command line flag beats instance option beats default).

use num_complex::Complex64;

use carleson_core::{
    CoreError, GammaSequence, Measure, MeasureComponent, SpacePair, WeightSequence,
};

use super::expr::{eval, print, Diag, Expr};
use super::parse::{ComponentSpec, InstanceFile, SeqSpec};

pub const DEFAULT_TRUNCATE: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_DISCRETIZE: usize = 64;

/// Option values picked up from command line flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub truncate: Option<usize>,
    pub tol: Option<f64>,
    pub window: Option<usize>,
    pub discretize: Option<usize>,
    /// Flags can only switch this on; absence defers to the instance.
    pub tail_monotone: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ResolvedOptions {
    pub truncate: usize,
    pub tol: f64,
    pub window: usize,
    pub discretize: usize,
    pub tail_monotone: bool,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub space: SpacePair,
    pub measure: Measure,
    pub options: ResolvedOptions,
}

/// Instance-level rejection: located when an expression misbehaves, plain
/// prose when a structural rule fails.
#[derive(Debug, Clone)]
pub enum LoadError {
    At(Diag),
    Plain(String),
}

impl From<Diag> for LoadError {
    fn from(d: Diag) -> Self {
        LoadError::At(d)
    }
}

impl From<CoreError> for LoadError {
    fn from(e: CoreError) -> Self {
        LoadError::Plain(e.to_string())
    }
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::At(d) => write!(f, "{d}"),
            LoadError::Plain(m) => write!(f, "{m}"),
        }
    }
}

fn seq_len(spec: &SeqSpec) -> Option<usize> {
    match spec {
        SeqSpec::Generator(_) => None,
        SeqSpec::List(entries) => Some(entries.len()),
    }
}

fn resolve_truncate(file: &InstanceFile, over: &Overrides) -> Result<usize, LoadError> {
    let lg = seq_len(&file.gamma);
    let lv = seq_len(&file.v);
    let requested = over.truncate.or(file.options.truncate);
    let n = match requested {
        Some(n) => n,
        None => match (lg, lv) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Err(LoadError::Plain(format!(
                        "gamma list has {a} entries but weight list has {b}; \
                         set truncate to a common prefix or make them match"
                    )));
                }
                a
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => DEFAULT_TRUNCATE,
        },
    };
    if n == 0 {
        return Err(LoadError::Plain("truncate must be at least 1".into()));
    }
    for (len, what) in [(lg, "gamma"), (lv, "weight")] {
        if let Some(len) = len {
            if n > len {
                return Err(LoadError::Plain(format!(
                    "truncate {n} exceeds the {what} list length {len}"
                )));
            }
        }
    }
    Ok(n)
}

fn eval_at(expr: &Expr, n: usize) -> Result<Complex64, LoadError> {
    Ok(eval(expr, Some(n as f64))?)
}

/// Evaluates a field that must come out real; the error names the field.
fn eval_real(expr: &Expr, n: Option<f64>, what: &str) -> Result<f64, LoadError> {
    let z = eval(expr, n)?;
    if z.im != 0.0 {
        let span = expr.span();
        return Err(LoadError::At(Diag::new(
            span.line,
            span.col,
            format!("{what} must be a real number, got imaginary part {}", z.im),
        )));
    }
    Ok(z.re)
}

fn build_gamma(spec: &SeqSpec, n: usize) -> Result<GammaSequence, LoadError> {
    let mut entries = Vec::with_capacity(n);
    match spec {
        SeqSpec::Generator(e) => {
            for k in 1..=n {
                entries.push(eval_at(e, k)?);
            }
            Ok(GammaSequence::with_generator(entries, print(e))?)
        }
        SeqSpec::List(list) => {
            for (k, e) in list.iter().take(n).enumerate() {
                entries.push(eval_at(e, k + 1)?);
            }
            Ok(GammaSequence::new(entries)?)
        }
    }
}

fn build_weights(spec: &SeqSpec, n: usize) -> Result<WeightSequence, LoadError> {
    let mut entries = Vec::with_capacity(n);
    match spec {
        SeqSpec::Generator(e) => {
            for k in 1..=n {
                entries.push(eval_real(e, Some(k as f64), "weight")?);
            }
            Ok(WeightSequence::with_generator(entries, print(e))?)
        }
        SeqSpec::List(list) => {
            for (k, e) in list.iter().take(n).enumerate() {
                entries.push(eval_real(e, Some((k + 1) as f64), "weight")?);
            }
            Ok(WeightSequence::new(entries)?)
        }
    }
}

fn expand_components(specs: &[ComponentSpec]) -> Result<Vec<MeasureComponent>, LoadError> {
    let mut out = Vec::new();
    for spec in specs {
        match spec {
            ComponentSpec::Atom { z, w } => {
                let z = eval(z, None)?;
                let w = eval_real(w, None, "atom mass")?;
                out.push(MeasureComponent::Atom { z, w });
            }
            ComponentSpec::AtomFamily { lo, hi, z, w } => {
                for n in *lo..=*hi {
                    let zv = eval_at(z, n)?;
                    let wv = eval_real(w, Some(n as f64), "atom mass")?;
                    out.push(MeasureComponent::Atom { z: zv, w: wv });
                }
            }
            ComponentSpec::Circle { r, w } => {
                let r = eval_real(r, None, "circle radius")?;
                let w = eval_real(w, None, "circle mass")?;
                out.push(MeasureComponent::CircleUniform { r, w });
            }
            ComponentSpec::Radial { a, b, alpha, c } => {
                let a = eval_real(a, None, "radial start")?;
                let b = eval_real(b, None, "radial end")?;
                let alpha = eval_real(alpha, None, "radial exponent")?;
                let c = eval_real(c, None, "radial density scale")?;
                out.push(MeasureComponent::RadialPower { a, b, alpha, c });
            }
        }
    }
    Ok(out)
}

pub fn load(file: &InstanceFile, over: &Overrides) -> Result<Instance, LoadError> {
    let truncate = resolve_truncate(file, over)?;
    let gamma = build_gamma(&file.gamma, truncate)?;
    let weights = build_weights(&file.v, truncate)?;

    let window = over.window.or(file.options.window);
    let space = match window {
        Some(w) => {
            if w == 0 {
                return Err(LoadError::Plain("window must be at least 1".into()));
            }
            SpacePair::with_window(gamma, weights, w)?
        }
        None => SpacePair::new(gamma, weights)?,
    };

    let components = expand_components(&file.components)?;
    let measure = Measure::new(components, &space)?;

    let tol = over.tol.or(file.options.tol).unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LoadError::Plain(format!("tol must be a positive number, got {tol}")));
    }
    let discretize = over.discretize.or(file.options.discretize).unwrap_or(DEFAULT_DISCRETIZE);
    if discretize < 8 {
        return Err(LoadError::Plain(format!(
            "discretize resolution {discretize} is too coarse; need at least 8"
        )));
    }
    let tail_monotone = over.tail_monotone || file.options.tail_monotone.unwrap_or(false);

    let options = ResolvedOptions {
        truncate,
        tol,
        window: space.window(),
        discretize,
        tail_monotone,
    };
    Ok(Instance { space, measure, options })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse::parse_instance;

    fn load_src(src: &str) -> Result<Instance, LoadError> {
        load(&parse_instance(src).unwrap(), &Overrides::default())
    }

    #[test]
    fn generator_instance_with_truncate() {
        let inst = load_src(
            "[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[measure]\natoms n = 2..40, z = 2^n + 1, w = 1\n[options]\ntruncate = 40\n",
        )
        .unwrap();
        assert_eq!(inst.space.len(), 40);
        assert_eq!(inst.space.gamma().node(40), Complex64::new(2f64.powi(40), 0.0));
        assert_eq!(inst.space.gamma().generator(), Some("2^n"));
        assert_eq!(inst.measure.components().len(), 39);
        assert_eq!(inst.options.window, 10);
        assert_eq!(inst.options.tol, DEFAULT_TOL);
    }

    #[test]
    fn default_truncate_is_64() {
        let inst = load_src("[sequence]\ngamma = 2^n\n[weights]\nv = 1\n").unwrap();
        assert_eq!(inst.space.len(), 64);
        assert_eq!(inst.options.window, 16);
    }

    #[test]
    fn list_lengths_drive_truncation() {
        let inst = load_src("[sequence]\ngamma = [2, 4, 8]\n[weights]\nv = [1, 1, 1]\n").unwrap();
        assert_eq!(inst.space.len(), 3);

        let err = load_src("[sequence]\ngamma = [2, 4, 8]\n[weights]\nv = [1, 1]\n").unwrap_err();
        assert!(err.to_string().contains("3 entries"), "{err}");

        let inst = load_src(
            "[sequence]\ngamma = [2, 4, 8]\n[weights]\nv = [1, 1]\n[options]\ntruncate = 2\n",
        )
        .unwrap();
        assert_eq!(inst.space.len(), 2);

        let err = load_src(
            "[sequence]\ngamma = [2, 4, 8]\n[weights]\nv = [1, 1, 1]\n[options]\ntruncate = 5\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("exceeds"), "{err}");
    }

    #[test]
    fn list_entries_see_their_position() {
        // Entry k evaluates with n = k, so [n, n * 2, n * 4] is [1, 4, 12].
        let inst =
            load_src("[sequence]\ngamma = [n, n * 2, n * 4]\n[weights]\nv = 1\n").unwrap();
        assert_eq!(inst.space.gamma().node(1), Complex64::new(1.0, 0.0));
        assert_eq!(inst.space.gamma().node(2), Complex64::new(4.0, 0.0));
        assert_eq!(inst.space.gamma().node(3), Complex64::new(12.0, 0.0));
    }

    #[test]
    fn flag_overrides_instance_option() {
        let file = parse_instance(
            "[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[options]\ntruncate = 40\ntol = 1e-6\n",
        )
        .unwrap();
        let over = Overrides { truncate: Some(12), tol: Some(1e-9), ..Default::default() };
        let inst = load(&file, &over).unwrap();
        assert_eq!(inst.space.len(), 12);
        assert_eq!(inst.options.tol, 1e-9);
    }

    #[test]
    fn complex_weight_rejected_with_position() {
        let err = load_src("[sequence]\ngamma = 2^n\n[weights]\nv = i\n").unwrap_err();
        match err {
            LoadError::At(d) => {
                assert_eq!(d.line, 4);
                assert!(d.message.contains("real"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_failure_carries_position() {
        let err = load_src("[sequence]\ngamma = 1 / (n - 2)\n[weights]\nv = 1\n").unwrap_err();
        match err {
            LoadError::At(d) => {
                assert_eq!(d.line, 2);
                assert!(d.message.contains("division by zero"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn core_validation_flows_through() {
        let err =
            load_src("[sequence]\ngamma = [4, 2]\n[weights]\nv = 1\n").unwrap_err();
        assert!(err.to_string().contains("modul"), "{err}");

        let err = load_src(
            "[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[measure]\natom z = 4, w = 1\n[options]\ntruncate = 6\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("node"), "{err}");
    }

    #[test]
    fn atom_family_expansion_matches_by_hand() {
        let inst = load_src(
            "[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[measure]\natoms n = 2..4, z = 2^n + 1, w = 1 / 4^n\n[options]\ntruncate = 8\n",
        )
        .unwrap();
        let atoms: Vec<_> = inst.measure.atoms().collect();
        assert_eq!(atoms.len(), 3);
        assert_eq!(atoms[0].0, Complex64::new(5.0, 0.0));
        assert_eq!(atoms[0].1, 1.0 / 16.0);
        assert_eq!(atoms[2].0, Complex64::new(17.0, 0.0));
        assert_eq!(atoms[2].1, 1.0 / 256.0);
    }

    #[test]
    fn bad_option_values_rejected() {
        let err = load_src(
            "[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[options]\ndiscretize = 4\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("too coarse"));

        let err =
            load_src("[sequence]\ngamma = 2^n\n[weights]\nv = 1\n[options]\ntruncate = 0\n")
                .unwrap_err();
        assert!(err.to_string().contains("at least 1"));
    }
}
