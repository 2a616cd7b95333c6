//! Text format for polynomial systems and root fixtures.
//!
//! ```text
//! field: Q              # or: field: Fp 32003
//! vars: x1 x2
//! poly: x1^2 - 1
//! poly: x2^2 - 1
//! root: 1 1
//! root: -1 1
//! ```
//!
//! Expressions are built from integers, the declared variables, and
//! `+ - * ^ ( )`. `^` binds tightest and its exponent is a non-negative
//! integer literal; implicit multiplication is not allowed. `#` starts a
//! comment. A `root:` line lists one exact value per variable (integers, or
//! fractions `p/q` over Q) and may append, after `|`, the derivative exponent
//! vectors of the root's local dual, separated by `;`; without them the root
//! is taken as simple.

use std::fmt;

use crate::field::{Field, FieldError, PrimeField, Rationals};
use crate::monomial::Monomial;
use crate::oracle::{FixtureRoot, RootFixture};
use crate::poly::{Poly, PolySystem, SystemError};

/// Hard ceilings on expression evaluation so that untrusted input cannot
/// blow up memory or exponent arithmetic.
pub const MAX_EXPONENT: u32 = 1 << 20;
const MAX_DEGREE: u32 = 1 << 20;
const MAX_TERM_PRODUCT: usize = 1 << 18;
const MAX_PAREN_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    ArityMismatch {
        vars: usize,
        polys: usize,
    },
    NotPrime {
        value: u64,
    },
}

impl ParseError {
    fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, message } => {
                write!(f, "line {line}, column {col}: {message}")
            }
            ParseError::ArityMismatch { vars, polys } => write!(
                f,
                "system is not square: {vars} variables but {polys} polynomials"
            ),
            ParseError::NotPrime { value } => write!(f, "field modulus {value} is not prime"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Either a parse failure or a semantically invalid system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    Parse(ParseError),
    System(SystemError),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(e) => write!(f, "{e}"),
            InputError::System(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InputError {}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Parse(e)
    }
}

impl From<SystemError> for InputError {
    fn from(e: SystemError) -> Self {
        InputError::System(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

/// The declarative content of a system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub field_spec: FieldSpec,
    pub variables: Vec<String>,
    /// Raw expression text of each `poly:` line.
    pub polynomials: Vec<String>,
}

/// A `root:` line before field interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRoot {
    pub values: Vec<String>,
    pub derivatives: Option<Vec<Vec<u32>>>,
    pub line: usize,
}

/// Syntax-checked source: the file header, the polynomial ASTs, and any raw
/// root stanzas. Field interpretation happens in `build_system` /
/// `build_fixture`.
#[derive(Clone, Debug)]
pub struct ParsedSource {
    pub file: SystemFile,
    exprs: Vec<Expr>,
    poly_lines: Vec<usize>,
    pub roots: Vec<RawRoot>,
}

#[derive(Clone, Debug)]
enum Expr {
    Int(String),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

pub fn parse_source(text: &str) -> Result<ParsedSource, ParseError> {
    let mut field_spec: Option<FieldSpec> = None;
    let mut variables: Option<Vec<String>> = None;
    let mut polynomials = Vec::new();
    let mut poly_lines = Vec::new();
    let mut exprs = Vec::new();
    let mut roots = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let without_comment = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let trimmed = without_comment.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some((directive, rest)) = trimmed.split_once(':') else {
            return Err(ParseError::syntax(
                line_no,
                1,
                "expected a `field:`, `vars:`, `poly:` or `root:` line",
            ));
        };
        let rest = rest.trim();
        match directive.trim() {
            "field" => {
                if field_spec.is_some() {
                    return Err(ParseError::syntax(line_no, 1, "duplicate field line"));
                }
                field_spec = Some(parse_field_spec(rest, line_no)?);
            }
            "vars" => {
                if field_spec.is_none() {
                    return Err(ParseError::syntax(line_no, 1, "missing field line"));
                }
                if variables.is_some() {
                    return Err(ParseError::syntax(line_no, 1, "duplicate vars line"));
                }
                variables = Some(parse_vars(rest, line_no)?);
            }
            "poly" => {
                let Some(vars) = &variables else {
                    return Err(ParseError::syntax(
                        line_no,
                        1,
                        if field_spec.is_none() {
                            "missing field line"
                        } else {
                            "missing vars line"
                        },
                    ));
                };
                let expr = parse_expression(rest, vars, line_no)?;
                polynomials.push(rest.to_string());
                poly_lines.push(line_no);
                exprs.push(expr);
            }
            "root" => {
                let Some(vars) = &variables else {
                    return Err(ParseError::syntax(line_no, 1, "missing vars line"));
                };
                roots.push(parse_root_line(rest, vars.len(), line_no)?);
            }
            other => {
                return Err(ParseError::syntax(
                    line_no,
                    1,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let Some(field_spec) = field_spec else {
        return Err(ParseError::syntax(1, 1, "missing field line"));
    };
    let Some(variables) = variables else {
        return Err(ParseError::syntax(1, 1, "missing vars line"));
    };
    if polynomials.is_empty() {
        return Err(ParseError::syntax(1, 1, "missing poly lines"));
    }
    if polynomials.len() != variables.len() {
        return Err(ParseError::ArityMismatch {
            vars: variables.len(),
            polys: polynomials.len(),
        });
    }

    Ok(ParsedSource {
        file: SystemFile {
            field_spec,
            variables,
            polynomials,
        },
        exprs,
        poly_lines,
        roots,
    })
}

fn parse_field_spec(rest: &str, line: usize) -> Result<FieldSpec, ParseError> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    match parts.as_slice() {
        ["Q"] => Ok(FieldSpec::Rational),
        ["Fp", p] => {
            let value: u64 = p.parse().map_err(|_| {
                ParseError::syntax(line, 1, format!("invalid modulus `{p}`"))
            })?;
            match PrimeField::new(value) {
                Ok(_) => Ok(FieldSpec::Prime(value)),
                Err(FieldError::NotPrime(v)) => Err(ParseError::NotPrime { value: v }),
                Err(FieldError::ModulusTooLarge(v)) => Err(ParseError::syntax(
                    line,
                    1,
                    format!("modulus {v} does not fit in 63 bits"),
                )),
            }
        }
        _ => Err(ParseError::syntax(
            line,
            1,
            "field must be `Q` or `Fp <prime>`",
        )),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_vars(rest: &str, line: usize) -> Result<Vec<String>, ParseError> {
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(ParseError::syntax(line, 1, "vars line declares no variables"));
    }
    for name in &names {
        if !is_ident(name) {
            return Err(ParseError::syntax(
                line,
                1,
                format!("invalid variable name `{name}`"),
            ));
        }
    }
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(ParseError::syntax(
                line,
                1,
                format!("duplicate variable `{name}`"),
            ));
        }
    }
    Ok(names)
}

fn parse_root_line(rest: &str, n: usize, line: usize) -> Result<RawRoot, ParseError> {
    let (point_part, deriv_part) = match rest.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    let values: Vec<String> = point_part.split_whitespace().map(str::to_string).collect();
    if values.len() != n {
        return Err(ParseError::syntax(
            line,
            1,
            format!("root point needs {n} values, found {}", values.len()),
        ));
    }
    for v in &values {
        if !is_exact_value(v) {
            return Err(ParseError::syntax(
                line,
                1,
                format!("invalid root value `{v}`"),
            ));
        }
    }
    let derivatives = match deriv_part {
        None => None,
        Some(part) => {
            let mut vectors = Vec::new();
            for group in part.split(';') {
                let exps: Result<Vec<u32>, _> =
                    group.split_whitespace().map(str::parse::<u32>).collect();
                let exps = exps.map_err(|_| {
                    ParseError::syntax(line, 1, "derivative exponents must be non-negative integers")
                })?;
                if exps.len() != n {
                    return Err(ParseError::syntax(
                        line,
                        1,
                        format!("derivative exponent vector needs {n} entries"),
                    ));
                }
                vectors.push(exps);
            }
            if vectors.is_empty() {
                return Err(ParseError::syntax(line, 1, "empty derivative list after `|`"));
            }
            Some(vectors)
        }
    };
    Ok(RawRoot {
        values,
        derivatives,
        line,
    })
}

fn is_exact_value(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    match body.split_once('/') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        }
        None => !body.is_empty() && body.bytes().all(|c| c.is_ascii_digit()),
    }
}

// ---- expression tokenizer and recursive-descent parser ----

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(chars[start..i].iter().collect()), col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(ParseError::syntax(
                    line,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    line: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or_else(|| self.tokens.last().map(|(_, c)| c + 1).unwrap_or(1))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line, self.col(), message)
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Expr::Neg(Box::new(self.term(depth)?))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term(depth)?
            }
            _ => self.term(depth)?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term(depth)?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term(depth)?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<Expr, ParseError> {
        let mut acc = self.factor(depth)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor(depth)?));
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return Err(self.err(
                        "expected an operator; implicit multiplication is not allowed",
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self, depth: usize) -> Result<Expr, ParseError> {
        let base = self.atom(depth)?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(digits)) => {
                    let e: u32 = digits
                        .parse()
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| {
                            ParseError::syntax(
                                self.line,
                                self.col(),
                                format!("exponent exceeds the limit of {MAX_EXPONENT}"),
                            )
                        })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(self.err("exponent must be a non-negative integer literal")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self, depth: usize) -> Result<Expr, ParseError> {
        if depth > MAX_PAREN_DEPTH {
            return Err(self.err("expression nests too deeply"));
        }
        match self.bump() {
            Some(Tok::Int(digits)) => Ok(Expr::Int(digits)),
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| v == &name) {
                Some(i) => Ok(Expr::Var(i)),
                None => Err(ParseError::syntax(
                    self.line,
                    self.col().saturating_sub(name.chars().count()),
                    format!("unknown variable `{name}`"),
                )),
            },
            Some(Tok::LParen) => {
                let inner = self.expr(depth + 1)?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected an integer, a variable, or `(`")),
        }
    }
}

fn parse_expression(text: &str, vars: &[String], line: usize) -> Result<Expr, ParseError> {
    let tokens = tokenize(text, line)?;
    if tokens.is_empty() {
        return Err(ParseError::syntax(line, 1, "empty polynomial expression"));
    }
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        vars,
        line,
    };
    let expr = parser.expr(0)?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(expr)
}

// ---- field interpretation ----

fn guarded_mul<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>, String> {
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero(a.field().clone(), a.n()));
    }
    let deg = a.degree().unwrap() as u64 + b.degree().unwrap() as u64;
    if deg > MAX_DEGREE as u64 {
        return Err(format!("polynomial degree exceeds the limit of {MAX_DEGREE}"));
    }
    if a.term_count().saturating_mul(b.term_count()) > MAX_TERM_PRODUCT {
        return Err("polynomial expression is too large to expand".to_string());
    }
    Ok(a.mul(b))
}

fn eval_expr<F: Field>(field: &F, n: usize, expr: &Expr) -> Result<Poly<F>, String> {
    match expr {
        Expr::Int(digits) => {
            let ten = field.from_i64(10);
            let mut acc = field.zero();
            for b in digits.bytes() {
                let d = field.from_i64((b - b'0') as i64);
                acc = field.add(&field.mul(&acc, &ten), &d);
            }
            Ok(Poly::constant(field.clone(), n, acc))
        }
        Expr::Var(i) => Ok(Poly::var(field.clone(), n, *i)),
        Expr::Neg(e) => Ok(eval_expr(field, n, e)?.neg()),
        Expr::Add(a, b) => Ok(eval_expr(field, n, a)?.add(&eval_expr(field, n, b)?)),
        Expr::Sub(a, b) => Ok(eval_expr(field, n, a)?.sub(&eval_expr(field, n, b)?)),
        Expr::Mul(a, b) => guarded_mul(&eval_expr(field, n, a)?, &eval_expr(field, n, b)?),
        Expr::Pow(e, k) => {
            let base = eval_expr(field, n, e)?;
            let mut acc = Poly::one(field.clone(), n);
            let mut sq = base;
            let mut rem = *k;
            loop {
                if rem & 1 == 1 {
                    acc = guarded_mul(&acc, &sq)?;
                }
                rem >>= 1;
                if rem == 0 {
                    return Ok(acc);
                }
                sq = guarded_mul(&sq, &sq)?;
            }
        }
    }
}

impl ParsedSource {
    /// Interpret the polynomial expressions over the given field and build
    /// the validated system.
    pub fn build_system<F: Field>(&self, field: &F) -> Result<PolySystem<F>, InputError> {
        let n = self.file.variables.len();
        let mut polys = Vec::with_capacity(self.exprs.len());
        for (expr, &line) in self.exprs.iter().zip(&self.poly_lines) {
            let p = eval_expr(field, n, expr)
                .map_err(|message| ParseError::syntax(line, 1, message))?;
            polys.push(p);
        }
        Ok(PolySystem::new(field.clone(), polys)?)
    }

    /// Build the system together with its declared roots.
    pub fn build_fixture<F: Field>(&self, field: &F) -> Result<RootFixture<F>, InputError> {
        let system = self.build_system(field)?;
        let n = self.file.variables.len();
        let mut roots = Vec::with_capacity(self.roots.len());
        for raw in &self.roots {
            let mut point = Vec::with_capacity(n);
            for v in &raw.values {
                let value = field.parse(v).ok_or_else(|| {
                    ParseError::syntax(raw.line, 1, format!("value `{v}` is not valid over {}", field.describe()))
                })?;
                point.push(value);
            }
            let derivatives = raw
                .derivatives
                .clone()
                .unwrap_or_else(|| vec![vec![0; n]]);
            roots.push(FixtureRoot { point, derivatives });
        }
        Ok(RootFixture { system, roots })
    }
}

/// Parse a monomial key like `x1^2*x2` (or `1`) against declared variables.
pub fn parse_monomial_key(key: &str, vars: &[String]) -> Result<Monomial, String> {
    let n = vars.len();
    let key = key.trim();
    if key == "1" {
        return Ok(Monomial::one(n));
    }
    let mut exps = vec![0u32; n];
    for factor in key.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((name, e)) => {
                let e: u32 = e
                    .parse()
                    .ok()
                    .filter(|&e| e >= 1 && e <= MAX_EXPONENT)
                    .ok_or_else(|| format!("invalid exponent in `{factor}`"))?;
                (name, e)
            }
            None => (factor, 1),
        };
        let idx = vars
            .iter()
            .position(|v| v == name.trim())
            .ok_or_else(|| format!("unknown variable `{name}` in monomial key"))?;
        exps[idx] = exps[idx]
            .checked_add(exp)
            .ok_or_else(|| "exponent overflow in monomial key".to_string())?;
    }
    Ok(Monomial::new(exps))
}

/// Parse a field description like `Q` or `Fp 32003` (the certificate and
/// file-header syntax).
pub fn field_spec_from_str(s: &str) -> Result<FieldSpec, ParseError> {
    parse_field_spec(s.trim(), 1)
}

/// A parsed system over whichever field the file declared.
pub enum ParsedSystem {
    Rational(PolySystem<Rationals>),
    Prime(PrimeField, PolySystem<PrimeField>),
}

/// One-shot convenience: parse, interpret, validate.
pub fn parse_system(text: &str) -> Result<(SystemFile, ParsedSystem), InputError> {
    let source = parse_source(text)?;
    let parsed = match source.file.field_spec {
        FieldSpec::Rational => ParsedSystem::Rational(source.build_system(&Rationals)?),
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p).expect("primality checked during parsing");
            ParsedSystem::Prime(field, source.build_system(&field)?)
        }
    };
    Ok((source.file, parsed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_univariate_system() {
        let (file, parsed) = parse_system("field: Q\nvars: x\npoly: x^2 - 1\n").unwrap();
        assert_eq!(file.field_spec, FieldSpec::Rational);
        assert_eq!(file.variables, vec!["x"]);
        let ParsedSystem::Rational(sys) = parsed else {
            panic!("expected a rational system")
        };
        assert_eq!(sys.delta_f(), 1);
        assert_eq!(sys.dimension(), 2);
    }

    #[test]
    fn parses_prime_field_system() {
        let (file, parsed) = parse_system("field: Fp 7\nvars: x y\npoly: x^2\npoly: y^2\n").unwrap();
        assert_eq!(file.field_spec, FieldSpec::Prime(7));
        let ParsedSystem::Prime(field, sys) = parsed else {
            panic!("expected a prime-field system")
        };
        assert_eq!(field.modulus(), 7);
        assert_eq!(sys.n(), 2);
    }

    #[test]
    fn missing_field_line_is_a_syntax_error() {
        let err = parse_system("vars: x\npoly: x^2\n").unwrap_err();
        assert!(matches!(
            err,
            InputError::Parse(ParseError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn composite_modulus_is_rejected() {
        let err = parse_system("field: Fp 6\nvars: x\npoly: x^2\n").unwrap_err();
        assert_eq!(err, InputError::Parse(ParseError::NotPrime { value: 6 }));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let err = parse_system("field: Q\nvars: x y\npoly: x^2\n").unwrap_err();
        assert_eq!(
            err,
            InputError::Parse(ParseError::ArityMismatch { vars: 2, polys: 1 })
        );
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse_system("field: Q\nvars: x y\npoly: x y\npoly: y\n").unwrap_err();
        let InputError::Parse(ParseError::Syntax { message, .. }) = err else {
            panic!("expected syntax error")
        };
        assert!(message.contains("implicit multiplication"));
    }

    #[test]
    fn expression_grammar_cases() {
        let src = parse_source(
            "field: Q\nvars: x y\npoly: (x + 1)^2 - 2*y\npoly: -x + 12345678901234567890\n",
        )
        .unwrap();
        let sys = src.build_system(&Rationals).unwrap();
        assert_eq!(sys.poly(0).degree(), Some(2));
        // big literal parsed exactly via Horner
        let q = Rationals;
        let big = q.parse("12345678901234567890").unwrap();
        assert_eq!(sys.poly(1).coeff(&Monomial::one(2)), big);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a comment\nfield: Q\n\nvars: x  # trailing\npoly: x^3\n";
        assert!(parse_system(text).is_ok());
    }

    #[test]
    fn constant_polynomial_is_a_system_error() {
        let err = parse_system("field: Q\nvars: x\npoly: 5\n").unwrap_err();
        assert!(matches!(err, InputError::System(SystemError::ConstantPolynomial(0))));
    }

    #[test]
    fn root_lines_build_fixtures() {
        let text = "field: Q\nvars: x\npoly: x^3\nroot: 0 | 0 ; 1 ; 2\n";
        let src = parse_source(text).unwrap();
        let fixture = src.build_fixture(&Rationals).unwrap();
        assert_eq!(fixture.roots.len(), 1);
        assert_eq!(fixture.roots[0].derivatives.len(), 3);
        assert_eq!(fixture.expected_quotient_dimension(), 3);
    }

    #[test]
    fn simple_root_defaults_to_evaluation_only() {
        let text = "field: Q\nvars: x y\npoly: x^2 - 1\npoly: y^2 - 1\nroot: 1 -1\n";
        let fixture = parse_source(text)
            .unwrap()
            .build_fixture(&Rationals)
            .unwrap();
        assert!(fixture.all_simple());
    }

    #[test]
    fn oversized_expressions_are_rejected() {
        let err = parse_system("field: Q\nvars: x\npoly: x^9999999\n").unwrap_err();
        let InputError::Parse(ParseError::Syntax { message, .. }) = err else {
            panic!("expected syntax error")
        };
        assert!(message.contains("exponent"));
        // term blow-up guard: the exponent is legal but expansion is not
        let err = parse_system("field: Q\nvars: x y\npoly: (x + y + 1)^1024\npoly: y\n").unwrap_err();
        let InputError::Parse(ParseError::Syntax { message, .. }) = err else {
            panic!("expected syntax error")
        };
        assert!(message.contains("too large"));
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let mut expr = String::new();
        for _ in 0..300 {
            expr.push('(');
        }
        expr.push('x');
        for _ in 0..300 {
            expr.push(')');
        }
        let text = format!("field: Q\nvars: x\npoly: {expr}\n");
        let err = parse_system(&text).unwrap_err();
        let InputError::Parse(ParseError::Syntax { message, .. }) = err else {
            panic!("expected syntax error")
        };
        assert!(message.contains("deep"));
    }

    #[test]
    fn monomial_keys_round_trip() {
        let vars = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(
            parse_monomial_key("x1^2*x2", &vars).unwrap(),
            Monomial::new(vec![2, 1])
        );
        assert_eq!(parse_monomial_key("1", &vars).unwrap(), Monomial::one(2));
        assert!(parse_monomial_key("z^2", &vars).is_err());
    }
}
