//! Line-oriented tokenizer and expression parser shared by the presentation
//! (`.alg`) and extension (`.ext`) file formats.
//!
//! Both formats are sequences of keyword lines (`field`, `vars`, `param`,
//! then `rel` or `ext`); `#` starts a comment. Expressions support `+`, `-`,
//! `*`, unary minus, parentheses, integer literals, parameter names and
//! variable names. Juxtaposition is not multiplication: `2x` is a syntax
//! error, `2*x` is required.

use crate::ncpoly::NcPoly;
use crate::scalar::{FieldSpec, Scalar, ScalarError};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Errors raised while parsing presentation or extension text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("SyntaxError: {msg} (line {line}, column {col})")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("UnknownVariable: '{name}' is neither a variable nor a parameter (line {line}, column {col})")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("ZeroParameter: parameter '{name}' must be nonzero (line {line})")]
    ZeroParameter { line: usize, name: String },
    #[error("InhomogeneousRelation: relation mixes words of degrees {low} and {high} (line {line})")]
    InhomogeneousRelation { line: usize, low: usize, high: usize },
    #[error("RelationDegreeTooLow: relation has degree {degree}, but quadratic or higher is required (line {line})")]
    RelationDegreeTooLow { line: usize, degree: usize },
    #[error("DuplicateName: '{name}' is declared twice (line {line})")]
    DuplicateName { line: usize, name: String },
    #[error("ZeroCoefficient: the coefficient of x{j}*x{i} must be nonzero (line {line})")]
    ZeroCoefficient { line: usize, i: u32, j: u32 },
    #[error("NotAffine: lower-order terms must have degree at most 1 (line {line})")]
    NotAffine { line: usize },
    #[error("MissingExtensionRelation: no 'ext' line for the variable pair ({i}, {j})")]
    MissingExtensionRelation { i: u32, j: u32 },
    #[error("DuplicateExtensionRelation: the variable pair ({i}, {j}) has two 'ext' lines (line {line})")]
    DuplicateExtensionRelation { line: usize, i: u32, j: u32 },
    #[error("UnsupportedVarCount: {n} variables; extension files support 2 to 5 (line {line})")]
    UnsupportedVarCount { line: usize, n: usize },
}

impl ParseError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::SyntaxError { line, col, msg: msg.into() }
    }

    pub(crate) fn from_scalar(line: usize, col: usize, e: ScalarError) -> ParseError {
        ParseError::syntax(line, col, e.to_string())
    }
}

// ---- Tokens ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Equals,
    Colon,
    Arrow, // "=>"
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Int(v) => format!("integer '{v}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Equals => "'='".into(),
            Tok::Colon => "':'".into(),
            Tok::Arrow => "'=>'".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Tokenize the whole input; one token vector per source line (1-based).
/// Blank and comment-only lines yield empty vectors so line numbers track
/// the original text.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Vec<Spanned>>, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = Vec::new();
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '#' => break, // comment to end of line
                c if c.is_whitespace() => i += 1,
                '+' => {
                    toks.push(Spanned { tok: Tok::Plus, line, col });
                    i += 1;
                }
                '-' => {
                    toks.push(Spanned { tok: Tok::Minus, line, col });
                    i += 1;
                }
                '*' => {
                    toks.push(Spanned { tok: Tok::Star, line, col });
                    i += 1;
                }
                '/' => {
                    toks.push(Spanned { tok: Tok::Slash, line, col });
                    i += 1;
                }
                '(' => {
                    toks.push(Spanned { tok: Tok::LParen, line, col });
                    i += 1;
                }
                ')' => {
                    toks.push(Spanned { tok: Tok::RParen, line, col });
                    i += 1;
                }
                ':' => {
                    toks.push(Spanned { tok: Tok::Colon, line, col });
                    i += 1;
                }
                '=' => {
                    if chars.get(i + 1) == Some(&'>') {
                        toks.push(Spanned { tok: Tok::Arrow, line, col });
                        i += 2;
                    } else {
                        toks.push(Spanned { tok: Tok::Equals, line, col });
                        i += 1;
                    }
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lit: String = chars[start..i].iter().collect();
                    let value = lit.parse::<BigInt>().expect("digit run parses as integer");
                    toks.push(Spanned { tok: Tok::Int(value), line, col });
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    let name: String = chars[start..i].iter().collect();
                    toks.push(Spanned { tok: Tok::Ident(name), line, col });
                }
                other => {
                    return Err(ParseError::syntax(
                        line,
                        col,
                        format!("unexpected character '{other}'"),
                    ))
                }
            }
        }
        lines.push(toks);
    }
    Ok(lines)
}

// ---- Token cursor ----

pub(crate) struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    /// Column just past the final token, for end-of-line diagnostics.
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(line: usize, toks: &'a [Spanned]) -> Cursor<'a> {
        let end_col = toks.last().map_or(1, |s| s.col + 1);
        Cursor { toks, pos: 0, line, end_col }
    }

    pub fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'a Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn is_empty(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(s) => (s.line, s.col),
            None => (self.line, self.end_col),
        }
    }

    pub fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::syntax(line, col, msg)
    }

    pub fn expect(&mut self, want: &Tok) -> Result<&'a Spanned, ParseError> {
        match self.peek() {
            Some(s) if s.tok == *want => Ok(self.next().unwrap()),
            Some(s) => Err(ParseError::syntax(
                s.line,
                s.col,
                format!("expected {}, found {}", want.describe(), s.tok.describe()),
            )),
            None => Err(self.error_here(format!("expected {}", want.describe()))),
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Ident(name), line, col }) => {
                self.pos += 1;
                Ok((name.clone(), *line, *col))
            }
            Some(s) => Err(ParseError::syntax(
                s.line,
                s.col,
                format!("expected an identifier, found {}", s.tok.describe()),
            )),
            None => Err(self.error_here("expected an identifier")),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(s) => Err(ParseError::syntax(
                s.line,
                s.col,
                format!("unexpected trailing {}", s.tok.describe()),
            )),
        }
    }
}

// ---- Expressions ----

#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Num(BigInt),
    /// Rational literal `num/den`; `/` is only legal inside such a literal.
    Rat { num: BigInt, den: BigInt, line: usize, col: usize },
    Name { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

/// expr := term (('+' | '-') term)*
pub(crate) fn parse_expr(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_term(c)?;
    loop {
        match c.peek().map(|s| &s.tok) {
            Some(Tok::Plus) => {
                c.next();
                lhs = Expr::Add(Box::new(lhs), Box::new(parse_term(c)?));
            }
            Some(Tok::Minus) => {
                c.next();
                lhs = Expr::Sub(Box::new(lhs), Box::new(parse_term(c)?));
            }
            _ => return Ok(lhs),
        }
    }
}

/// term := factor ('*' factor)*
fn parse_term(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_factor(c)?;
    while let Some(Tok::Star) = c.peek().map(|s| &s.tok) {
        c.next();
        lhs = Expr::Mul(Box::new(lhs), Box::new(parse_factor(c)?));
    }
    Ok(lhs)
}

/// factor := '-' factor | integer ['/' integer] | name | '(' expr ')'
fn parse_factor(c: &mut Cursor) -> Result<Expr, ParseError> {
    match c.peek() {
        Some(Spanned { tok: Tok::Minus, .. }) => {
            c.next();
            Ok(Expr::Neg(Box::new(parse_factor(c)?)))
        }
        Some(Spanned { tok: Tok::Int(v), line, col }) => {
            let (v, line, col) = (v.clone(), *line, *col);
            c.next();
            if let Some(Spanned { tok: Tok::Slash, .. }) = c.peek() {
                c.next();
                match c.peek() {
                    Some(Spanned { tok: Tok::Int(d), .. }) => {
                        let d = d.clone();
                        c.next();
                        return Ok(Expr::Rat { num: v, den: d, line, col });
                    }
                    _ => return Err(c.error_here("expected a denominator")),
                }
            }
            Ok(Expr::Num(v))
        }
        Some(Spanned { tok: Tok::Ident(name), line, col }) => {
            let e = Expr::Name { name: name.clone(), line: *line, col: *col };
            c.next();
            Ok(e)
        }
        Some(Spanned { tok: Tok::LParen, .. }) => {
            c.next();
            let inner = parse_expr(c)?;
            c.expect(&Tok::RParen)?;
            Ok(inner)
        }
        Some(s) => Err(ParseError::syntax(
            s.line,
            s.col,
            format!("expected an expression, found {}", s.tok.describe()),
        )),
        None => Err(c.error_here("expected an expression")),
    }
}

// ---- Evaluation into the free algebra ----

pub(crate) struct EvalCtx<'a> {
    pub field: FieldSpec,
    pub n: usize,
    pub var_index: &'a BTreeMap<String, u32>,
    pub params: &'a BTreeMap<String, Scalar>,
    /// When false, variable names are rejected (used for constant positions).
    pub allow_vars: bool,
}

pub(crate) fn eval_expr(e: &Expr, ctx: &EvalCtx) -> Result<NcPoly, ParseError> {
    match e {
        Expr::Num(v) => Ok(NcPoly::constant(ctx.field, ctx.n, &Scalar::from_bigint(ctx.field, v))),
        Expr::Rat { num, den, line, col } => {
            let q = Scalar::rational(num.clone(), den.clone())
                .map_err(|e| ParseError::from_scalar(*line, *col, e))?;
            let value = match ctx.field {
                FieldSpec::Rationals => q,
                FieldSpec::PrimeField(p) => q
                    .reduce_to_prime_field(p)
                    .map_err(|e| ParseError::from_scalar(*line, *col, e))?,
            };
            Ok(NcPoly::constant(ctx.field, ctx.n, &value))
        }
        Expr::Name { name, line, col } => {
            if let Some(&v) = ctx.var_index.get(name) {
                if !ctx.allow_vars {
                    return Err(ParseError::syntax(
                        *line,
                        *col,
                        format!("variable '{name}' is not allowed here; expected a constant"),
                    ));
                }
                return Ok(NcPoly::generator(ctx.field, ctx.n, v));
            }
            if let Some(s) = ctx.params.get(name) {
                return Ok(NcPoly::constant(ctx.field, ctx.n, s));
            }
            Err(ParseError::UnknownVariable { line: *line, col: *col, name: name.clone() })
        }
        Expr::Neg(inner) => Ok(eval_expr(inner, ctx)?.neg()),
        Expr::Add(a, b) => {
            let (a, b) = (eval_expr(a, ctx)?, eval_expr(b, ctx)?);
            a.add(&b).map_err(|e| ParseError::syntax(0, 0, e.to_string()))
        }
        Expr::Sub(a, b) => {
            let (a, b) = (eval_expr(a, ctx)?, eval_expr(b, ctx)?);
            a.sub(&b).map_err(|e| ParseError::syntax(0, 0, e.to_string()))
        }
        Expr::Mul(a, b) => {
            let (a, b) = (eval_expr(a, ctx)?, eval_expr(b, ctx)?);
            a.mul(&b).map_err(|e| ParseError::syntax(0, 0, e.to_string()))
        }
    }
}

/// Scalar literal: `['-'] integer ['/' integer]`, as used in `param` lines.
pub(crate) fn parse_scalar_literal(
    c: &mut Cursor,
    field: FieldSpec,
) -> Result<Scalar, ParseError> {
    let (line, col) = c.here();
    let negative = if let Some(Spanned { tok: Tok::Minus, .. }) = c.peek() {
        c.next();
        true
    } else {
        false
    };
    let num = match c.peek() {
        Some(Spanned { tok: Tok::Int(v), .. }) => {
            let v = v.clone();
            c.next();
            v
        }
        _ => return Err(c.error_here("expected an integer")),
    };
    let num = if negative { -num } else { num };
    let value = if let Some(Spanned { tok: Tok::Slash, .. }) = c.peek() {
        c.next();
        let den = match c.peek() {
            Some(Spanned { tok: Tok::Int(v), .. }) => {
                let v = v.clone();
                c.next();
                v
            }
            _ => return Err(c.error_here("expected a denominator")),
        };
        let q = Scalar::rational(num, den).map_err(|e| ParseError::from_scalar(line, col, e))?;
        match field {
            FieldSpec::Rationals => q,
            FieldSpec::PrimeField(p) => {
                q.reduce_to_prime_field(p).map_err(|e| ParseError::from_scalar(line, col, e))?
            }
        }
    } else {
        Scalar::from_bigint(field, &num)
    };
    Ok(value)
}

/// Parsed shared header: field, var names, var index map, and the number of
/// header lines consumed as positions in the token-line list.
pub(crate) type Header = (FieldSpec, Vec<String>, BTreeMap<String, u32>, usize);

/// Shared header of both file formats: a `field` line then a `vars` line.
pub(crate) fn parse_header(lines: &[Vec<Spanned>]) -> Result<Header, ParseError> {
    let mut idx = 0;

    // field line
    let field = loop {
        if idx >= lines.len() {
            return Err(ParseError::syntax(lines.len(), 1, "missing 'field' line"));
        }
        if lines[idx].is_empty() {
            idx += 1;
            continue;
        }
        let mut c = Cursor::new(idx + 1, &lines[idx]);
        let (kw, line, col) = c.expect_ident()?;
        if kw != "field" {
            return Err(ParseError::syntax(line, col, "the first line must declare the field"));
        }
        let (name, line, col) = c.expect_ident()?;
        let field = match name.as_str() {
            "Q" => FieldSpec::Rationals,
            "F" => {
                let p = match c.peek() {
                    Some(Spanned { tok: Tok::Int(v), line, col }) => {
                        use num_traits::ToPrimitive;
                        let p = v.to_u64().ok_or_else(|| {
                            ParseError::syntax(*line, *col, "modulus out of range")
                        })?;
                        c.next();
                        p
                    }
                    _ => return Err(c.error_here("expected a prime modulus after 'F'")),
                };
                let (pl, pc) = (line, col);
                FieldSpec::prime_field(p).map_err(|e| ParseError::from_scalar(pl, pc, e))?
            }
            other => {
                return Err(ParseError::syntax(
                    line,
                    col,
                    format!("unknown field '{other}'; expected 'Q' or 'F <prime>'"),
                ))
            }
        };
        c.expect_end()?;
        idx += 1;
        break field;
    };

    // vars line
    loop {
        if idx >= lines.len() {
            return Err(ParseError::syntax(lines.len(), 1, "missing 'vars' line"));
        }
        if lines[idx].is_empty() {
            idx += 1;
            continue;
        }
        let mut c = Cursor::new(idx + 1, &lines[idx]);
        let (kw, line, col) = c.expect_ident()?;
        if kw != "vars" {
            return Err(ParseError::syntax(line, col, "expected the 'vars' line after 'field'"));
        }
        let mut names = Vec::new();
        let mut index = BTreeMap::new();
        while !c.is_empty() {
            let (name, line, _col) = c.expect_ident()?;
            if index.contains_key(&name) {
                return Err(ParseError::DuplicateName { line, name });
            }
            index.insert(name.clone(), names.len() as u32 + 1);
            names.push(name);
        }
        if names.is_empty() {
            return Err(c.error_here("at least one variable is required"));
        }
        idx += 1;
        return Ok((field, names, index, idx));
    }
}

/// Parse one `param` line (`param name = scalar ...`), extending `params`.
pub(crate) fn parse_param_line(
    c: &mut Cursor,
    field: FieldSpec,
    var_index: &BTreeMap<String, u32>,
    params: &mut BTreeMap<String, Scalar>,
) -> Result<(), ParseError> {
    let mut any = false;
    while !c.is_empty() {
        let (name, line, _col) = c.expect_ident()?;
        if params.contains_key(&name) || var_index.contains_key(&name) {
            return Err(ParseError::DuplicateName { line, name });
        }
        c.expect(&Tok::Equals)?;
        let value = parse_scalar_literal(c, field)?;
        if value.is_zero() {
            return Err(ParseError::ZeroParameter { line, name });
        }
        params.insert(name, value);
        any = true;
    }
    if !any {
        return Err(c.error_here("expected at least one 'name = value' pair"));
    }
    Ok(())
}
