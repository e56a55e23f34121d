//! Line-oriented instance format. Four sections:
//!
//! ```text
//! [sequence]
//! gamma = 2^n                 # generator, or [1 + i, 3, 5 - 2i]
//!
//! [weights]
//! v = 1
//!
//! [measure]
//! atom z = 3i, w = 1
//! atoms n = 2..40, z = 2^n + 1, w = 1 / 4^n
//! circle r = 4, w = 1
//! radial a = 3, b = 6, alpha = 0, c = 1
//!
//! [options]
//! truncate = 40
//! ```
//!
//! `#` starts a comment. Sections may appear once each; [sequence] and
//! [weights] are mandatory. Every rejection carries the line and column it
//! points at.

use super::expr::{parse_expr, print, Diag, Expr};

#[derive(Debug, Clone, PartialEq)]
pub enum SeqSpec {
    /// Expression in n, evaluated at n = 1, 2, ... up to the truncation.
    Generator(Expr),
    /// Explicit entries; entry k is evaluated with n bound to k.
    List(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSpec {
    Atom { z: Expr, w: Expr },
    /// One atom per n in lo..=hi, fields evaluated with n bound.
    AtomFamily { lo: usize, hi: usize, z: Expr, w: Expr },
    Circle { r: Expr, w: Expr },
    Radial { a: Expr, b: Expr, alpha: Expr, c: Expr },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptionsSpec {
    pub truncate: Option<usize>,
    pub tol: Option<f64>,
    pub window: Option<usize>,
    pub discretize: Option<usize>,
    pub tail_monotone: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub gamma: SeqSpec,
    pub v: SeqSpec,
    pub components: Vec<ComponentSpec>,
    pub options: OptionsSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Sequence,
    Weights,
    Measure,
    Options,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Sequence => "sequence",
            Section::Weights => "weights",
            Section::Measure => "measure",
            Section::Options => "options",
        }
    }
}

/// Strips a trailing comment; `#` anywhere starts one.
fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

/// Splits at top-level commas (outside parentheses), yielding 0-based byte
/// offsets of each piece.
fn split_top_commas(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// `key = value` split; returns (key, value offset, value).
fn split_key_eq(s: &str) -> Option<(&str, usize, &str)> {
    let eq = s.find('=')?;
    let key = s[..eq].trim();
    let value = &s[eq + 1..];
    Some((key, eq + 1, value))
}

/// Position of the first non-blank byte of `s` within the original line,
/// given that `s` itself starts at `base` (0-based).
fn lead(base: usize, s: &str) -> usize {
    base + (s.len() - s.trim_start().len())
}

struct LineCtx {
    line_no: usize,
}

impl LineCtx {
    /// 1-based column of offset within this line.
    fn col(&self, offset: usize) -> usize {
        offset + 1
    }

    fn diag(&self, offset: usize, message: impl Into<String>) -> Diag {
        Diag::new(self.line_no, self.col(offset), message)
    }

    fn expr(&self, offset: usize, raw: &str) -> Result<Expr, Diag> {
        let at = lead(offset, raw);
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(self.diag(offset, "expected an expression"));
        }
        parse_expr(trimmed, self.line_no, self.col(at))
    }
}

fn parse_seq_value(ctx: &LineCtx, offset: usize, raw: &str) -> Result<SeqSpec, Diag> {
    let at = lead(offset, raw);
    let trimmed = raw.trim();
    if let Some(inner) = trimmed.strip_prefix('[') {
        let Some(inner) = inner.strip_suffix(']') else {
            return Err(ctx.diag(at, "list must close with ']' on the same line"));
        };
        let inner_at = at + 1;
        let mut entries = Vec::new();
        for (off, piece) in split_top_commas(inner) {
            entries.push(ctx.expr(inner_at + off, piece)?);
        }
        if entries.is_empty() {
            return Err(ctx.diag(at, "list needs at least one entry"));
        }
        Ok(SeqSpec::List(entries))
    } else {
        Ok(SeqSpec::Generator(ctx.expr(offset, raw)?))
    }
}

/// Collects `key = expr` pairs, rejecting duplicates and keys outside
/// `allowed`. Returns pairs in `allowed` order with their offsets.
fn parse_pairs<'a>(
    ctx: &LineCtx,
    base: usize,
    rest: &'a str,
    kind: &str,
    allowed: &[&str],
) -> Result<Vec<(usize, &'a str)>, Diag> {
    let mut found: Vec<Option<(usize, &'a str)>> = vec![None; allowed.len()];
    for (off, piece) in split_top_commas(rest) {
        let at = lead(base + off, piece);
        if piece.trim().is_empty() {
            return Err(ctx.diag(at, format!("empty field in {kind} component")));
        }
        let Some((key, val_off, value)) = split_key_eq(piece) else {
            return Err(ctx.diag(at, format!("expected key = value in {kind} component")));
        };
        let Some(slot) = allowed.iter().position(|a| *a == key) else {
            return Err(ctx.diag(at, format!("unknown key '{key}' in {kind} component")));
        };
        if found[slot].is_some() {
            return Err(ctx.diag(at, format!("duplicate key '{key}' in {kind} component")));
        }
        found[slot] = Some((base + off + val_off, value));
    }
    let mut out = Vec::with_capacity(allowed.len());
    for (slot, name) in allowed.iter().enumerate() {
        let Some((off, value)) = found[slot] else {
            return Err(ctx.diag(0, format!("{kind} component is missing '{name} ='")));
        };
        out.push((off, value));
    }
    Ok(out)
}

fn parse_range(ctx: &LineCtx, offset: usize, raw: &str) -> Result<(usize, usize), Diag> {
    let at = lead(offset, raw);
    let trimmed = raw.trim();
    let Some(dots) = trimmed.find("..") else {
        return Err(ctx.diag(at, "expected a range like 2..40"));
    };
    let lo_txt = trimmed[..dots].trim();
    let hi_txt = trimmed[dots + 2..].trim();
    let lo: usize = lo_txt
        .parse()
        .map_err(|_| ctx.diag(at, format!("malformed range start '{lo_txt}'")))?;
    let hi: usize = hi_txt
        .parse()
        .map_err(|_| ctx.diag(at, format!("malformed range end '{hi_txt}'")))?;
    if lo < 1 {
        return Err(ctx.diag(at, "range must start at 1 or later"));
    }
    if hi < lo {
        return Err(ctx.diag(at, format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn parse_measure_line(ctx: &LineCtx, content: &str) -> Result<ComponentSpec, Diag> {
    let at = lead(0, content);
    let trimmed = content.trim();
    let (word, rest) = match trimmed.find(char::is_whitespace) {
        Some(p) => (&trimmed[..p], &trimmed[p..]),
        None => (trimmed, ""),
    };
    let rest_base = at + (trimmed.len() - rest.len());
    match word {
        "atom" => {
            let pairs = parse_pairs(ctx, rest_base, rest, "atom", &["z", "w"])?;
            let z = ctx.expr(pairs[0].0, pairs[0].1)?;
            let w = ctx.expr(pairs[1].0, pairs[1].1)?;
            Ok(ComponentSpec::Atom { z, w })
        }
        "atoms" => {
            let pairs = parse_pairs(ctx, rest_base, rest, "atoms", &["n", "z", "w"])?;
            let (lo, hi) = parse_range(ctx, pairs[0].0, pairs[0].1)?;
            let z = ctx.expr(pairs[1].0, pairs[1].1)?;
            let w = ctx.expr(pairs[2].0, pairs[2].1)?;
            Ok(ComponentSpec::AtomFamily { lo, hi, z, w })
        }
        "circle" => {
            let pairs = parse_pairs(ctx, rest_base, rest, "circle", &["r", "w"])?;
            let r = ctx.expr(pairs[0].0, pairs[0].1)?;
            let w = ctx.expr(pairs[1].0, pairs[1].1)?;
            Ok(ComponentSpec::Circle { r, w })
        }
        "radial" => {
            let pairs = parse_pairs(ctx, rest_base, rest, "radial", &["a", "b", "alpha", "c"])?;
            let a = ctx.expr(pairs[0].0, pairs[0].1)?;
            let b = ctx.expr(pairs[1].0, pairs[1].1)?;
            let alpha = ctx.expr(pairs[2].0, pairs[2].1)?;
            let c = ctx.expr(pairs[3].0, pairs[3].1)?;
            Ok(ComponentSpec::Radial { a, b, alpha, c })
        }
        other => Err(ctx.diag(
            at,
            format!("unknown measure component '{other}' (expected atom, atoms, circle or radial)"),
        )),
    }
}

fn parse_usize(ctx: &LineCtx, offset: usize, raw: &str, key: &str) -> Result<usize, Diag> {
    let at = lead(offset, raw);
    raw.trim()
        .parse()
        .map_err(|_| ctx.diag(at, format!("malformed integer '{}' for {key}", raw.trim())))
}

fn parse_f64(ctx: &LineCtx, offset: usize, raw: &str, key: &str) -> Result<f64, Diag> {
    let at = lead(offset, raw);
    raw.trim()
        .parse()
        .map_err(|_| ctx.diag(at, format!("malformed number '{}' for {key}", raw.trim())))
}

fn parse_bool(ctx: &LineCtx, offset: usize, raw: &str, key: &str) -> Result<bool, Diag> {
    let at = lead(offset, raw);
    match raw.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ctx.diag(at, format!("expected true or false for {key}, got '{other}'"))),
    }
}

pub fn parse_instance(source: &str) -> Result<InstanceFile, Diag> {
    let mut seen: Vec<Section> = Vec::new();
    let mut current: Option<Section> = None;
    let mut gamma: Option<SeqSpec> = None;
    let mut v: Option<SeqSpec> = None;
    let mut components = Vec::new();
    let mut options = OptionsSpec::default();
    let mut last_line = 0;

    for (idx, raw_line) in source.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = strip_comment(raw_line);
        if content.trim().is_empty() {
            continue;
        }
        let ctx = LineCtx { line_no };
        let trimmed = content.trim();
        let at = lead(0, content);

        if let Some(name) = trimmed.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ctx.diag(at, "section header must close with ']'"));
            };
            let section = match name {
                "sequence" => Section::Sequence,
                "weights" => Section::Weights,
                "measure" => Section::Measure,
                "options" => Section::Options,
                other => return Err(ctx.diag(at, format!("unknown section '[{other}]'"))),
            };
            if seen.contains(&section) {
                return Err(ctx.diag(at, format!("duplicate section '[{}]'", section.name())));
            }
            seen.push(section);
            current = Some(section);
            continue;
        }

        let Some(section) = current else {
            return Err(ctx.diag(at, "content before any section header"));
        };
        match section {
            Section::Sequence => {
                let Some((key, val_off, value)) = split_key_eq(trimmed) else {
                    return Err(ctx.diag(at, "expected gamma = ..."));
                };
                if key != "gamma" {
                    return Err(ctx.diag(at, format!("unknown key '{key}' in [sequence]")));
                }
                if gamma.is_some() {
                    return Err(ctx.diag(at, "duplicate key 'gamma'"));
                }
                gamma = Some(parse_seq_value(&ctx, at + val_off, value)?);
            }
            Section::Weights => {
                let Some((key, val_off, value)) = split_key_eq(trimmed) else {
                    return Err(ctx.diag(at, "expected v = ..."));
                };
                if key != "v" {
                    return Err(ctx.diag(at, format!("unknown key '{key}' in [weights]")));
                }
                if v.is_some() {
                    return Err(ctx.diag(at, "duplicate key 'v'"));
                }
                v = Some(parse_seq_value(&ctx, at + val_off, value)?);
            }
            Section::Measure => {
                components.push(parse_measure_line(&ctx, content)?);
            }
            Section::Options => {
                let Some((key, val_off, value)) = split_key_eq(trimmed) else {
                    return Err(ctx.diag(at, "expected key = value"));
                };
                let val_off = at + val_off;
                match key {
                    "truncate" => {
                        if options.truncate.is_some() {
                            return Err(ctx.diag(at, "duplicate key 'truncate'"));
                        }
                        options.truncate = Some(parse_usize(&ctx, val_off, value, "truncate")?);
                    }
                    "tol" => {
                        if options.tol.is_some() {
                            return Err(ctx.diag(at, "duplicate key 'tol'"));
                        }
                        options.tol = Some(parse_f64(&ctx, val_off, value, "tol")?);
                    }
                    "window" => {
                        if options.window.is_some() {
                            return Err(ctx.diag(at, "duplicate key 'window'"));
                        }
                        options.window = Some(parse_usize(&ctx, val_off, value, "window")?);
                    }
                    "discretize" => {
                        if options.discretize.is_some() {
                            return Err(ctx.diag(at, "duplicate key 'discretize'"));
                        }
                        options.discretize = Some(parse_usize(&ctx, val_off, value, "discretize")?);
                    }
                    "tail_monotone" => {
                        if options.tail_monotone.is_some() {
                            return Err(ctx.diag(at, "duplicate key 'tail_monotone'"));
                        }
                        options.tail_monotone =
                            Some(parse_bool(&ctx, val_off, value, "tail_monotone")?);
                    }
                    other => {
                        return Err(ctx.diag(at, format!("unknown key '{other}' in [options]")));
                    }
                }
            }
        }
    }

    let Some(gamma) = gamma else {
        return Err(Diag::new(last_line + 1, 1, "missing [sequence] section with gamma = ..."));
    };
    let Some(v) = v else {
        return Err(Diag::new(last_line + 1, 1, "missing [weights] section with v = ..."));
    };
    Ok(InstanceFile { gamma, v, components, options })
}

fn print_seq(spec: &SeqSpec) -> String {
    match spec {
        SeqSpec::Generator(e) => print(e),
        SeqSpec::List(entries) => {
            let pieces: Vec<String> = entries.iter().map(print).collect();
            format!("[{}]", pieces.join(", "))
        }
    }
}

/// Canonical text form of a parsed instance; reparsing yields an equal
/// InstanceFile.
pub fn print_instance(file: &InstanceFile) -> String {
    let mut out = String::new();
    out.push_str("[sequence]\n");
    out.push_str(&format!("gamma = {}\n", print_seq(&file.gamma)));
    out.push_str("\n[weights]\n");
    out.push_str(&format!("v = {}\n", print_seq(&file.v)));
    if !file.components.is_empty() {
        out.push_str("\n[measure]\n");
        for comp in &file.components {
            match comp {
                ComponentSpec::Atom { z, w } => {
                    out.push_str(&format!("atom z = {}, w = {}\n", print(z), print(w)));
                }
                ComponentSpec::AtomFamily { lo, hi, z, w } => {
                    out.push_str(&format!(
                        "atoms n = {lo}..{hi}, z = {}, w = {}\n",
                        print(z),
                        print(w)
                    ));
                }
                ComponentSpec::Circle { r, w } => {
                    out.push_str(&format!("circle r = {}, w = {}\n", print(r), print(w)));
                }
                ComponentSpec::Radial { a, b, alpha, c } => {
                    out.push_str(&format!(
                        "radial a = {}, b = {}, alpha = {}, c = {}\n",
                        print(a),
                        print(b),
                        print(alpha),
                        print(c)
                    ));
                }
            }
        }
    }
    let o = &file.options;
    if o.truncate.is_some()
        || o.tol.is_some()
        || o.window.is_some()
        || o.discretize.is_some()
        || o.tail_monotone.is_some()
    {
        out.push_str("\n[options]\n");
        if let Some(t) = o.truncate {
            out.push_str(&format!("truncate = {t}\n"));
        }
        if let Some(t) = o.tol {
            out.push_str(&format!("tol = {t}\n"));
        }
        if let Some(w) = o.window {
            out.push_str(&format!("window = {w}\n"));
        }
        if let Some(d) = o.discretize {
            out.push_str(&format!("discretize = {d}\n"));
        }
        if let Some(t) = o.tail_monotone {
            out.push_str(&format!("tail_monotone = {t}\n"));
        }
    }
    out
}
