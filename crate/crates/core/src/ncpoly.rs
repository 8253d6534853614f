//! Noncommutative free-algebra polynomials `K{x_1, ..., x_n}`, finitely
//! presented graded algebras, and the presentation file format.
//!
//! A [`Word`] is a sequence of variable indices read left to right; an
//! [`NcPoly`] maps words to nonzero coefficients. A [`Presentation`] is a
//! field, a variable list, named parameters, and homogeneous relations of
//! degree at least 2 (each relation is a polynomial that equals zero in the
//! quotient algebra).

use crate::parse::{
    eval_expr, parse_expr, parse_header, parse_param_line, tokenize, Cursor, EvalCtx, ParseError,
};
use crate::scalar::{FieldSpec, Scalar, ScalarError};
use std::collections::BTreeMap;
use std::fmt;

/// A word in the free monoid on `x_1..x_n`: factor indices, leftmost first.
/// The empty word has degree 0 and acts as the multiplicative identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(factors: Vec<u32>) -> Word {
        Word(factors)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn factors(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Concatenation: `(xy) * (z) = xyz`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

/// Canonical word order: degree first, then lexicographic on the factors.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the free algebra: finitely many words with nonzero
/// coefficients over one field. Immutable; all operations return new values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: FieldSpec,
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero(field: FieldSpec, n: usize) -> NcPoly {
        NcPoly { field, n, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, n: usize, value: &Scalar) -> NcPoly {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Word::empty(), value.clone());
        }
        NcPoly { field, n, terms }
    }

    /// The generator `x_v` (1-based index).
    pub fn generator(field: FieldSpec, n: usize, v: u32) -> NcPoly {
        assert!(v >= 1 && v as usize <= n, "generator index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Word::new(vec![v]), Scalar::one(field));
        NcPoly { field, n, terms }
    }

    /// Build from explicit terms; zero coefficients are dropped, repeated
    /// words are summed.
    pub fn from_terms(
        field: FieldSpec,
        n: usize,
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<NcPoly, ScalarError> {
        let mut poly = NcPoly::zero(field, n);
        for (w, c) in terms {
            poly.add_term(&w, &c)?;
        }
        Ok(poly)
    }

    fn add_term(&mut self, w: &Word, c: &Scalar) -> Result<(), ScalarError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get(w) {
            None => {
                self.terms.insert(w.clone(), c.clone());
            }
            Some(old) => {
                let sum = old.add(c)?;
                if sum.is_zero() {
                    self.terms.remove(w);
                } else {
                    self.terms.insert(w.clone(), sum);
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Maximum word length, or `None` for the zero polynomial (degree
    /// undefined).
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// True iff all words have the same length; vacuously true for zero.
    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::degree);
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly, ScalarError> {
        if self.field != other.field {
            return Err(ScalarError::MixedFields(self.field, other.field));
        }
        let mut out = NcPoly::zero(self.field, self.n.max(other.n));
        for (w, c) in &self.terms {
            out.add_term(w, c)?;
        }
        for (w, c) in &other.terms {
            out.add_term(w, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly, ScalarError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcPoly {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect();
        NcPoly { field: self.field, n: self.n, terms }
    }

    /// Noncommutative product: words concatenate, coefficients multiply.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly, ScalarError> {
        if self.field != other.field {
            return Err(ScalarError::MixedFields(self.field, other.field));
        }
        let mut out = NcPoly::zero(self.field, self.n.max(other.n));
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(&wa.concat(wb), &ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, by: &Scalar) -> Result<NcPoly, ScalarError> {
        let mut out = NcPoly::zero(self.field, self.n);
        for (w, c) in &self.terms {
            out.add_term(w, &c.mul(by)?)?;
        }
        Ok(out)
    }

    /// Render with the given variable names, leading (highest) term first,
    /// factors joined by `*`: `"y*x - 2*x*y"`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            render_term(&mut out, i == 0, c, &word_text(w, names));
        }
        out
    }
}

fn word_text(w: &Word, names: &[String]) -> String {
    w.factors()
        .iter()
        .map(|&v| names[(v - 1) as usize].as_str())
        .collect::<Vec<_>>()
        .join("*")
}

/// Shared sign-aware term printer for polynomial rendering. `mono` is the
/// rendered monomial ("" for the constant term).
pub(crate) fn render_term(out: &mut String, first: bool, coeff: &Scalar, mono: &str) {
    // Rational coefficients carry their sign into the separator; residues are
    // always printed as nonnegative values.
    let (neg, mag) = match coeff.rational_value() {
        Some(r) if r.numer().sign() == num_bigint::Sign::Minus => (true, coeff.neg()),
        _ => (false, coeff.clone()),
    };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let coeff_text = mag.to_string();
    if mono.is_empty() {
        out.push_str(&coeff_text);
    } else if coeff_text == "1" {
        out.push_str(mono);
    } else {
        out.push_str(&coeff_text);
        out.push('*');
        out.push_str(mono);
    }
}

/// A finitely presented graded algebra `K{x_1..x_n} / <f_1..f_r>`: the field,
/// the variable names, named nonzero parameters, and homogeneous relations of
/// degree >= 2. The relation list may be empty (free algebra).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    field: FieldSpec,
    var_names: Vec<String>,
    params: BTreeMap<String, Scalar>,
    relations: Vec<NcPoly>,
}

impl Presentation {
    /// Validated constructor for programmatic use; mirrors what the parser
    /// enforces.
    pub fn new(
        field: FieldSpec,
        var_names: Vec<String>,
        params: BTreeMap<String, Scalar>,
        relations: Vec<NcPoly>,
    ) -> Result<Presentation, ParseError> {
        let n = var_names.len();
        let mut seen = BTreeMap::new();
        for name in &var_names {
            if seen.insert(name.clone(), ()).is_some() {
                return Err(ParseError::DuplicateName { line: 0, name: name.clone() });
            }
        }
        for (name, value) in &params {
            if seen.contains_key(name) {
                return Err(ParseError::DuplicateName { line: 0, name: name.clone() });
            }
            if value.is_zero() {
                return Err(ParseError::ZeroParameter { line: 0, name: name.clone() });
            }
        }
        for rel in &relations {
            assert_eq!(rel.field(), field, "relation field must match the presentation");
            assert!(rel.var_count() <= n, "relation mentions more variables than declared");
            if !rel.is_homogeneous() {
                let degs: Vec<usize> = rel.terms().map(|(w, _)| w.degree()).collect();
                let low = *degs.iter().min().unwrap();
                let high = *degs.iter().max().unwrap();
                return Err(ParseError::InhomogeneousRelation { line: 0, low, high });
            }
            match rel.degree() {
                Some(d) if d >= 2 => {}
                d => {
                    return Err(ParseError::RelationDegreeTooLow {
                        line: 0,
                        degree: d.unwrap_or(0),
                    })
                }
            }
        }
        Ok(Presentation { field, var_names, params, relations })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of generators.
    pub fn n(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn params(&self) -> &BTreeMap<String, Scalar> {
        &self.params
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    /// Largest relation degree; `None` for the free algebra.
    pub fn max_relation_degree(&self) -> Option<usize> {
        self.relations.iter().filter_map(NcPoly::degree).max()
    }

    /// Canonical text form; parsing it back yields an equal value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.field {
            FieldSpec::Rationals => out.push_str("field Q\n"),
            FieldSpec::PrimeField(p) => out.push_str(&format!("field F {p}\n")),
        }
        out.push_str("vars ");
        out.push_str(&self.var_names.join(" "));
        out.push('\n');
        for (name, value) in &self.params {
            out.push_str(&format!("param {name} = {value}\n"));
        }
        for rel in &self.relations {
            out.push_str("rel ");
            out.push_str(&rel.render(&self.var_names));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parse the presentation format:
///
/// ```text
/// field F 7            # or: field Q
/// vars x y
/// param q = 3          # several "name = value" pairs per line are allowed
/// rel y*x - q*x*y      # '*' is required; '#' starts a comment
/// ```
///
/// Parameter names are substituted by their values; each relation is
/// collected into canonical form and must be homogeneous of degree >= 2.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let lines = tokenize(text)?;
    let (field, var_names, var_index, mut idx) = parse_header(&lines)?;
    let n = var_names.len();

    let mut params: BTreeMap<String, Scalar> = BTreeMap::new();
    let mut relations: Vec<NcPoly> = Vec::new();
    let mut rel_seen = false;

    while idx < lines.len() {
        let toks = &lines[idx];
        let line_no = idx + 1;
        idx += 1;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(line_no, toks);
        let (kw, line, col) = c.expect_ident()?;
        match kw.as_str() {
            "param" => {
                if rel_seen {
                    return Err(ParseError::syntax(
                        line,
                        col,
                        "'param' lines must come before 'rel' lines",
                    ));
                }
                parse_param_line(&mut c, field, &var_index, &mut params)?;
            }
            "rel" => {
                rel_seen = true;
                let expr = parse_expr(&mut c)?;
                c.expect_end()?;
                let ctx = EvalCtx { field, n, var_index: &var_index, params: &params, allow_vars: true };
                let poly = eval_expr(&expr, &ctx)?;
                if !poly.is_homogeneous() {
                    let degs: Vec<usize> = poly.terms().map(|(w, _)| w.degree()).collect();
                    return Err(ParseError::InhomogeneousRelation {
                        line,
                        low: *degs.iter().min().unwrap(),
                        high: *degs.iter().max().unwrap(),
                    });
                }
                match poly.degree() {
                    Some(d) if d >= 2 => relations.push(poly),
                    d => {
                        return Err(ParseError::RelationDegreeTooLow {
                            line,
                            degree: d.unwrap_or(0),
                        })
                    }
                }
            }
            other => {
                return Err(ParseError::syntax(
                    line,
                    col,
                    format!("unknown directive '{other}'; expected 'param' or 'rel'"),
                ))
            }
        }
    }

    Ok(Presentation { field, var_names, params, relations })
}
