//! Deterministic report rendering. JSON is written by hand so identical
//! inputs give byte-identical output: fields appear in fixed code order,
//! floats always print with 17 significant digits, infinities and NaN become
//! the strings "inf", "-inf" and "nan", and nothing time- or address-derived
//! enters the stream.

use carleson_core::criteria::{
    CarlesonCertificate, CompactnessCertificate, CorollaryRegime, HsReport, QuantitySequences,
    SequenceAssessment, INDEX_CONVENTION_NOTE,
};
use carleson_core::oracle::{ConsistencyRecord, SpectralSummary};

use crate::dsl::{Instance, ResolvedOptions};

pub const ENGINE: &str = concat!("carleson ", env!("CARGO_PKG_VERSION"));

/// JSON-safe float: finite values in scientific notation with a full
/// round-trip mantissa, non-finite values as quoted strings.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "\"nan\"".into()
    } else if x == f64::INFINITY {
        "\"inf\"".into()
    } else if x == f64::NEG_INFINITY {
        "\"-inf\"".into()
    } else {
        format!("{x:.16e}")
    }
}

/// CSV cell for a float: same digits, no quoting.
pub fn fmt_f64_csv(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Minimal append-only object builder; field order is call order.
pub struct JsonObj {
    buf: String,
    first: bool,
}

impl JsonObj {
    pub fn new() -> Self {
        Self { buf: String::from("{"), first: true }
    }

    fn key(&mut self, k: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        self.buf.push_str(&quote(k));
        self.buf.push(':');
    }

    pub fn raw(mut self, k: &str, v: &str) -> Self {
        self.key(k);
        self.buf.push_str(v);
        self
    }

    pub fn str(self, k: &str, v: &str) -> Self {
        let q = quote(v);
        self.raw(k, &q)
    }

    pub fn opt_str(self, k: &str, v: Option<&str>) -> Self {
        match v {
            Some(s) => self.str(k, s),
            None => self.raw(k, "null"),
        }
    }

    pub fn f64(self, k: &str, v: f64) -> Self {
        let s = fmt_f64(v);
        self.raw(k, &s)
    }

    pub fn opt_f64(self, k: &str, v: Option<f64>) -> Self {
        match v {
            Some(x) => self.f64(k, x),
            None => self.raw(k, "null"),
        }
    }

    pub fn usize(self, k: &str, v: usize) -> Self {
        let s = v.to_string();
        self.raw(k, &s)
    }

    pub fn bool(self, k: &str, v: bool) -> Self {
        self.raw(k, if v { "true" } else { "false" })
    }

    pub fn obj(self, k: &str, o: JsonObj) -> Self {
        let s = o.finish();
        self.raw(k, &s)
    }

    pub fn arr_f64(self, k: &str, xs: &[f64]) -> Self {
        let items: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
        let s = format!("[{}]", items.join(","));
        self.raw(k, &s)
    }

    pub fn arr_str(self, k: &str, xs: &[String]) -> Self {
        let items: Vec<String> = xs.iter().map(|s| quote(s)).collect();
        let s = format!("[{}]", items.join(","));
        self.raw(k, &s)
    }

    pub fn arr_obj(self, k: &str, xs: Vec<JsonObj>) -> Self {
        let items: Vec<String> = xs.into_iter().map(|o| o.finish()).collect();
        let s = format!("[{}]", items.join(","));
        self.raw(k, &s)
    }

    pub fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf
    }
}

impl Default for JsonObj {
    fn default() -> Self {
        Self::new()
    }
}

pub fn meta_block(opts: &ResolvedOptions) -> JsonObj {
    JsonObj::new()
        .str("engine", ENGINE)
        .usize("truncate", opts.truncate)
        .usize("window", opts.window)
        .f64("tol", opts.tol)
        .usize("discretize", opts.discretize)
        .bool("tail_monotone", opts.tail_monotone)
        .str("index_note", INDEX_CONVENTION_NOTE)
}

pub fn instance_block(inst: &Instance, regime: &CorollaryRegime) -> JsonObj {
    let space = &inst.space;
    let sparseness = space.sparseness().ok().map(|rep| {
        JsonObj::new().f64("ratio", rep.ratio).bool("satisfied", rep.satisfied).finish()
    });
    let adm = space.admissibility();
    let admissibility = JsonObj::new()
        .f64("partial", adm.partial)
        .opt_f64("tail_ratio", adm.tail_ratio)
        .str("flag", adm.flag.as_str());
    let measure = JsonObj::new()
        .usize("components", inst.measure.components().len())
        .bool("atoms_only", inst.measure.is_atoms_only())
        .f64("total_mass", inst.measure.total_mass())
        .f64("support_radius", inst.measure.support_radius());
    let mut o = JsonObj::new()
        .usize("nodes", space.len())
        .usize("window", space.window())
        .opt_str("gamma_generator", space.gamma().generator())
        .opt_str("weights_generator", space.weights().generator());
    o = match sparseness {
        Some(s) => o.raw("sparseness", &s),
        None => o.raw("sparseness", "null"),
    };
    o.obj("admissibility", admissibility)
        .obj(
            "regime",
            JsonObj::new()
                .bool("exp_weights", regime.exp_weights)
                .bool("summable", regime.summable),
        )
        .opt_f64("virtual_outer_boundary", space.virtual_outer_boundary())
        .opt_f64("strict_outer_boundary", space.strict_outer_boundary())
        .obj("measure", measure)
}

pub fn carleson_block(cert: &CarlesonCertificate, qs: &QuantitySequences) -> JsonObj {
    JsonObj::new()
        .str("verdict", cert.verdict.as_str())
        .f64("c_star", cert.c_star)
        .f64("sup_a", cert.sup_a)
        .usize("witness_a", cert.witness_a)
        .f64("sup_d", cert.sup_d)
        .usize("witness_d", cert.witness_d)
        .bool("exhausted", cert.exhausted)
        .bool("tail_monotone", cert.tail_monotone)
        .obj(
            "quantities",
            JsonObj::new()
                .arr_f64("a", &qs.a)
                .arr_f64("tau_sq", &qs.tau_sq)
                .arr_f64("mass", &qs.mass)
                .arr_f64("vhat", &qs.vhat)
                .arr_f64("p", &qs.p)
                .arr_f64("d", &qs.d)
                .f64("p_tail_bound", qs.p_tail_bound),
        )
        .arr_str("warnings", &cert.warnings)
}

fn assessment_block(sa: &SequenceAssessment) -> JsonObj {
    JsonObj::new()
        .str("verdict", sa.verdict.as_str())
        .str("mode", sa.mode.as_str())
        .f64("window_min", sa.window_min)
        .opt_f64("max_ratio", sa.max_ratio)
}

pub fn compact_block(cert: &CompactnessCertificate) -> JsonObj {
    JsonObj::new()
        .str("verdict", cert.verdict.as_str())
        .str("carleson", cert.carleson.as_str())
        .obj("a", assessment_block(&cert.a))
        .obj("d", assessment_block(&cert.d))
        .arr_str("warnings", &cert.warnings)
}

pub fn hs_block(rep: &HsReport) -> JsonObj {
    let verdict = if rep.exact_finite { "holds" } else { "fails" };
    JsonObj::new()
        .str("verdict", verdict)
        .f64("hs_exact", rep.hs_exact)
        .f64("sum_local", rep.sum_local)
        .f64("sum_global", rep.sum_global)
        .bool("exact_finite", rep.exact_finite)
        .bool("local_finite", rep.local_finite)
        .bool("global_finite", rep.global_finite)
}

pub struct OracleData {
    pub rows: usize,
    pub cols: usize,
    pub summary: SpectralSummary,
    pub consistency: ConsistencyRecord,
    /// (resolution, resulting atom count) when a continuous measure was
    /// replaced by its atomic stand-in for the matrix route.
    pub discretized: Option<(usize, usize)>,
    /// Exact Hilbert-Schmidt value of the measure the matrix represents.
    pub hs_exact: f64,
}

pub fn oracle_block(data: &OracleData) -> JsonObj {
    let tails: Vec<JsonObj> = data
        .summary
        .tail_norms
        .iter()
        .map(|&(cutoff, value)| JsonObj::new().usize("cutoff", cutoff).f64("value", value))
        .collect();
    let discretized = match data.discretized {
        Some((resolution, atoms)) => {
            JsonObj::new().usize("resolution", resolution).usize("atoms", atoms).finish()
        }
        None => "null".to_string(),
    };
    JsonObj::new()
        .usize("rows", data.rows)
        .usize("cols", data.cols)
        .f64("op_norm_sq", data.summary.op_norm_sq)
        .arr_f64("top", &data.summary.top)
        .f64("frobenius_sq", data.summary.frobenius_sq)
        .f64("hs_exact", data.hs_exact)
        .arr_obj("tail_norms", tails)
        .usize("iterations", data.summary.iterations)
        .f64("residual", data.summary.residual)
        .bool("converged", data.summary.converged)
        .obj(
            "consistency",
            JsonObj::new()
                .f64("max_rel_err", data.consistency.max_rel_err)
                .usize("checked", data.consistency.checked),
        )
        .raw("discretized", &discretized)
}

pub fn wrap(schema: &str, body: JsonObj, opts: &ResolvedOptions) -> String {
    JsonObj::new()
        .str("schema", schema)
        .raw("body", &body.finish())
        .obj("meta", meta_block(opts))
        .finish()
}

pub fn sweep_header() -> &'static str {
    "param,sup_a,sup_d,op_norm_sq,hs_exact,carleson,compact"
}

pub struct SweepRow {
    pub param: f64,
    pub sup_a: f64,
    pub sup_d: f64,
    pub op_norm_sq: f64,
    pub hs_exact: f64,
    pub carleson: &'static str,
    pub compact: &'static str,
}

pub fn sweep_row(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        row.param,
        fmt_f64_csv(row.sup_a),
        fmt_f64_csv(row.sup_d),
        fmt_f64_csv(row.op_norm_sq),
        fmt_f64_csv(row.hs_exact),
        row.carleson,
        row.compact
    )
}
