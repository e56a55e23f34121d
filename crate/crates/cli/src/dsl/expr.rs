//! Arithmetic expressions used in instance files: decimal and imaginary
//! literals, the index variable n, + - * / ^, abs(.) and parentheses. The
//! parser records source spans so evaluation failures point at the offending
//! operator, and the printer emits a canonical form that reparses to an
//! identical tree.
//!
//! Power rules: ^ is right associative and binds tighter than unary minus,
//! so -2^2 is -(2^2). A real base takes any real exponent (negative bases
//! only integer ones); a complex base takes integer exponents only.

use num_complex::Complex64;

/// 1-based source position of a token or subexpression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        let end = (other.col + other.len).max(self.col + self.len);
        Span { line: self.line, col: self.col, len: end - self.col }
    }
}

/// A located error: parse or evaluation failure with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diag {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diag {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { line, col, message: message.into() }
    }

    fn at(span: Span, message: impl Into<String>) -> Self {
        Self { line: span.line, col: span.col, message: message.into() }
    }
}

impl std::fmt::Display for Diag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn glyph(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Expr {
    Num { value: f64, span: Span },
    /// Pure imaginary literal such as `i` or `3i`.
    Imag { value: f64, span: Span },
    /// The index variable `n`.
    Var { span: Span },
    Neg { inner: Box<Expr>, span: Span },
    Bin { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr>, span: Span },
    Abs { inner: Box<Expr>, span: Span },
}

/// Structural equality that ignores spans, so a reparse of the printed form
/// compares equal to the original.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Expr::Num { value: a, .. }, Expr::Num { value: b, .. }) => a == b,
            (Expr::Imag { value: a, .. }, Expr::Imag { value: b, .. }) => a == b,
            (Expr::Var { .. }, Expr::Var { .. }) => true,
            (Expr::Neg { inner: a, .. }, Expr::Neg { inner: b, .. }) => a == b,
            (
                Expr::Bin { op: oa, lhs: la, rhs: ra, .. },
                Expr::Bin { op: ob, lhs: lb, rhs: rb, .. },
            ) => oa == ob && la == lb && ra == rb,
            (Expr::Abs { inner: a, .. }, Expr::Abs { inner: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Num { span, .. }
            | Expr::Imag { span, .. }
            | Expr::Var { span }
            | Expr::Neg { span, .. }
            | Expr::Bin { span, .. }
            | Expr::Abs { span, .. } => *span,
        }
    }

    /// Literal constant with a synthetic span; used when a parameter sweep
    /// substitutes a value into a parsed instance.
    pub fn literal(value: f64) -> Expr {
        Expr::Num { value, span: Span { line: 0, col: 0, len: 0 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    VarN,
    Abs,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy)]
struct Lexed {
    tok: Tok,
    span: Span,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Lexed>, Diag> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = col0 + i;
        if c == b' ' || c == b'\t' {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' && !(i + 1 < bytes.len() && bytes[i + 1] == b'.')
            {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let word = &text[start..i];
            let value: f64 = word.parse().map_err(|_| {
                Diag::new(line, col0 + start, format!("malformed number '{word}'"))
            })?;
            // A trailing bare i makes the literal imaginary: 3i.
            let imag = i < bytes.len()
                && bytes[i] == b'i'
                && !(i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_'));
            if imag {
                i += 1;
                toks.push(Lexed {
                    tok: Tok::Imag(value),
                    span: Span { line, col: col0 + start, len: i - start },
                });
            } else {
                toks.push(Lexed {
                    tok: Tok::Num(value),
                    span: Span { line, col: col0 + start, len: i - start },
                });
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let span = Span { line, col: col0 + start, len: i - start };
            let tok = match word {
                "i" => Tok::Imag(1.0),
                "n" => Tok::VarN,
                "abs" => Tok::Abs,
                _ => return Err(Diag::at(span, format!("unknown name '{word}'"))),
            };
            toks.push(Lexed { tok, span });
            continue;
        }
        let span = Span { line, col, len: 1 };
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                return Err(Diag::at(span, format!("unexpected character '{}'", c as char)));
            }
        };
        toks.push(Lexed { tok, span });
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|l| l.tok)
    }

    fn here(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|l| l.span)
            .unwrap_or(Span { line: self.line, col: self.end_col, len: 1 })
    }

    fn bump(&mut self) -> Lexed {
        let l = self.toks[self.pos];
        self.pos += 1;
        l
    }

    fn expr(&mut self) -> Result<Expr, Diag> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            let op = match t {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span().join(rhs.span());
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), span };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, Diag> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            let op = match t {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span().join(rhs.span());
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, Diag> {
        if self.peek() == Some(Tok::Minus) {
            let minus = self.bump();
            let inner = self.unary()?;
            let span = minus.span.join(inner.span());
            return Ok(Expr::Neg { inner: Box::new(inner), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diag> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            let exp = self.unary()?;
            let span = base.span().join(exp.span());
            return Ok(Expr::Bin {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exp),
                span,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Diag> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Num(value)) => {
                self.bump();
                Ok(Expr::Num { value, span })
            }
            Some(Tok::Imag(value)) => {
                self.bump();
                Ok(Expr::Imag { value, span })
            }
            Some(Tok::VarN) => {
                self.bump();
                Ok(Expr::Var { span })
            }
            Some(Tok::Abs) => {
                self.bump();
                if self.peek() != Some(Tok::LParen) {
                    return Err(Diag::at(self.here(), "expected '(' after abs"));
                }
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(Diag::at(self.here(), "expected ')' to close abs"));
                }
                let close = self.bump();
                let full = span.join(close.span);
                Ok(Expr::Abs { inner: Box::new(inner), span: full })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(Diag::at(self.here(), "expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(_) => Err(Diag::at(span, "expected a value here")),
            None => Err(Diag::at(span, "expected an expression")),
        }
    }
}

/// Parses one expression occupying `text`, reporting positions relative to
/// the original source: `line` is the 1-based line and `col0` the 1-based
/// column of the first byte of `text`.
pub fn parse_expr(text: &str, line: usize, col0: usize) -> Result<Expr, Diag> {
    let toks = lex(text, line, col0)?;
    if toks.is_empty() {
        return Err(Diag::new(line, col0, "expected an expression"));
    }
    let end_col = col0 + text.len();
    let mut p = Parser { toks, pos: 0, line, end_col };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Diag::at(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates with the index variable bound to `n` (None outside indexed
/// contexts). Division by zero, zero to a negative power, a complex base
/// with a fractional exponent, a negative base with a fractional exponent
/// and a non-real exponent are all reported with their source position.
pub fn eval(expr: &Expr, n: Option<f64>) -> Result<Complex64, Diag> {
    match expr {
        Expr::Num { value, .. } => Ok(Complex64::new(*value, 0.0)),
        Expr::Imag { value, .. } => Ok(Complex64::new(0.0, *value)),
        Expr::Var { span } => n
            .map(|x| Complex64::new(x, 0.0))
            .ok_or_else(|| Diag::at(*span, "the index variable n is not available here")),
        Expr::Neg { inner, .. } => Ok(-eval(inner, n)?),
        Expr::Abs { inner, .. } => Ok(Complex64::new(eval(inner, n)?.norm(), 0.0)),
        Expr::Bin { op, lhs, rhs, span } => {
            let a = eval(lhs, n)?;
            let b = eval(rhs, n)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b == Complex64::new(0.0, 0.0) {
                        Err(Diag::at(*span, "division by zero"))
                    } else {
                        Ok(a / b)
                    }
                }
                BinOp::Pow => pow(a, b, *span),
            }
        }
    }
}

fn pow(base: Complex64, exp: Complex64, span: Span) -> Result<Complex64, Diag> {
    if exp.im != 0.0 {
        return Err(Diag::at(span, "exponent must be a real number"));
    }
    let p = exp.re;
    let integral = p.fract() == 0.0 && p.abs() <= i32::MAX as f64;
    if base.im == 0.0 {
        if base.re == 0.0 && p < 0.0 {
            return Err(Diag::at(span, "zero raised to a negative power"));
        }
        if integral {
            Ok(Complex64::new(base.re.powi(p as i32), 0.0))
        } else if base.re < 0.0 {
            Err(Diag::at(span, "negative base needs an integer exponent"))
        } else {
            Ok(Complex64::new(base.re.powf(p), 0.0))
        }
    } else if integral {
        Ok(base.powi(p as i32))
    } else {
        Err(Diag::at(span, "complex base needs an integer exponent"))
    }
}

/// Canonical text form. Reparsing the output yields a tree equal to the
/// input (spans aside); binary operators get single spaces except ^, which
/// stays tight.
pub fn print(expr: &Expr) -> String {
    render(expr, 0)
}

fn prec(expr: &Expr) -> u8 {
    match expr {
        Expr::Num { value, .. } | Expr::Imag { value, .. } if *value < 0.0 => 3,
        Expr::Num { .. } | Expr::Imag { .. } | Expr::Var { .. } | Expr::Abs { .. } => 5,
        Expr::Neg { .. } => 3,
        Expr::Bin { op: BinOp::Add | BinOp::Sub, .. } => 1,
        Expr::Bin { op: BinOp::Mul | BinOp::Div, .. } => 2,
        Expr::Bin { op: BinOp::Pow, .. } => 4,
    }
}

fn render(expr: &Expr, parent: u8) -> String {
    let own = prec(expr);
    let body = match expr {
        Expr::Num { value, .. } => format!("{value}"),
        Expr::Imag { value, .. } => {
            if *value == 1.0 {
                "i".to_string()
            } else {
                format!("{value}i")
            }
        }
        Expr::Var { .. } => "n".to_string(),
        Expr::Neg { inner, .. } => format!("-{}", render(inner, 4)),
        Expr::Abs { inner, .. } => format!("abs({})", render(inner, 0)),
        Expr::Bin { op, lhs, rhs, .. } => match op {
            BinOp::Add | BinOp::Sub => {
                format!("{} {} {}", render(lhs, 1), op.glyph(), render(rhs, 2))
            }
            BinOp::Mul | BinOp::Div => {
                format!("{} {} {}", render(lhs, 2), op.glyph(), render(rhs, 3))
            }
            BinOp::Pow => format!("{}^{}", render(lhs, 5), render(rhs, 3)),
        },
    };
    if own < parent {
        format!("({body})")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s, 1, 1).unwrap()
    }

    fn ev(s: &str, n: Option<f64>) -> Complex64 {
        eval(&p(s), n).unwrap()
    }

    #[test]
    fn literals_and_variable() {
        assert_eq!(ev("2.5", None), Complex64::new(2.5, 0.0));
        assert_eq!(ev("3i", None), Complex64::new(0.0, 3.0));
        assert_eq!(ev("i", None), Complex64::new(0.0, 1.0));
        assert_eq!(ev("n", Some(7.0)), Complex64::new(7.0, 0.0));
        assert_eq!(ev("1e-3", None), Complex64::new(1e-3, 0.0));
        assert_eq!(ev(".5", None), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2 + 3 * 4", None).re, 14.0);
        assert_eq!(ev("2 * 3 ^ 2", None).re, 18.0);
        assert_eq!(ev("-2^2", None).re, -4.0);
        assert_eq!(ev("(-2)^2", None).re, 4.0);
        assert_eq!(ev("2^3^2", None).re, 512.0);
        assert_eq!(ev("2^-1", None).re, 0.5);
        assert_eq!(ev("10 - 4 - 3", None).re, 3.0);
        assert_eq!(ev("16 / 4 / 2", None).re, 2.0);
    }

    #[test]
    fn complex_arithmetic() {
        assert_eq!(ev("(1 + i) * (1 - i)", None), Complex64::new(2.0, 0.0));
        assert_eq!(ev("i * i", None), Complex64::new(-1.0, 0.0));
        assert_eq!(ev("abs(3 + 4i)", None), Complex64::new(5.0, 0.0));
        assert_eq!(ev("(2i)^2", None), Complex64::new(-4.0, 0.0));
        assert_eq!(ev("i^-1", None), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn generator_values_are_exact() {
        // 2^n + 1 at n = 40 must be the exact integer.
        let e = p("2^n + 1");
        let got = eval(&e, Some(40.0)).unwrap();
        assert_eq!(got.re, 2f64.powi(40) + 1.0);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn eval_errors_carry_positions() {
        let e = parse_expr("1 / (n - 2)", 3, 10).unwrap();
        let err = eval(&e, Some(2.0)).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("division by zero"));

        let err = eval(&p("0 ^ -1"), None).unwrap_err();
        assert!(err.message.contains("negative power"));

        let err = eval(&p("i ^ 0.5"), None).unwrap_err();
        assert!(err.message.contains("complex base"));

        let err = eval(&p("(-2) ^ 0.5"), None).unwrap_err();
        assert!(err.message.contains("negative base"));

        let err = eval(&p("2 ^ i"), None).unwrap_err();
        assert!(err.message.contains("real"));

        let err = eval(&p("n + 1"), None).unwrap_err();
        assert!(err.message.contains("not available"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_expr("2 +", 1, 1).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("expected"));

        let err = parse_expr("2 $ 3", 1, 1).unwrap_err();
        assert_eq!(err.col, 3);
        assert!(err.message.contains("unexpected character"));

        let err = parse_expr("foo(2)", 1, 1).unwrap_err();
        assert!(err.message.contains("unknown name 'foo'"));

        let err = parse_expr("abs 2", 1, 1).unwrap_err();
        assert!(err.message.contains("expected '('"));

        let err = parse_expr("(1 + 2", 1, 1).unwrap_err();
        assert!(err.message.contains("expected ')'"));

        let err = parse_expr("1 2", 1, 1).unwrap_err();
        assert!(err.message.contains("trailing"));
    }

    #[test]
    fn printer_round_trips() {
        let cases = [
            "2^n + 1",
            "-2^2",
            "(-2)^2",
            "2^3^2",
            "(2^3)^2",
            "1 / 4^n",
            "abs(n - 3) * (1 + 2i)",
            "2^-n",
            "-(-n)",
            "1 + (2 + 3)",
            "(1 + 2) * 3i",
            "n / (n + 1) / 2",
            "0.5i * n^2",
        ];
        for case in cases {
            let e = p(case);
            let text = print(&e);
            let back = parse_expr(&text, 1, 1).unwrap();
            assert_eq!(back, e, "{case} printed as {text}");
        }
    }

    #[test]
    fn printed_form_is_stable() {
        assert_eq!(print(&p("2^n+1")), "2^n + 1");
        assert_eq!(print(&p("1/4^n")), "1 / 4^n");
        assert_eq!(print(&p("-2^2")), "-2^2");
        assert_eq!(print(&p("(-2)^2")), "(-2)^2");
        assert_eq!(print(&p("i")), "i");
        assert_eq!(print(&p("2.5i")), "2.5i");
    }
}
