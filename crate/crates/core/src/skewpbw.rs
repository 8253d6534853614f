//! Skew PBW extensions of a field: presentations with relations
//! x_j*x_i = c_{ij}*x_i*x_j + (affine lower terms), the associated graded
//! algebra (a multiparameter quantum affine space with q_{ij} = c_{ij}),
//! the end-to-end point-module analysis, and a built-in example catalog.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ncpoly::{NcPoly, Presentation, Word};
use crate::parse::{
    eval_expr, parse_expr, parse_header, parse_param_line, tokenize, Cursor, EvalCtx, ParseError,
    Tok,
};
use crate::pointscheme::{find_stabilization, SchemeError, StabilizationReport};
use crate::quantumaffine::{
    sigma_permutation_report, QaError, QuantumAffineParams, SigmaReport, MAX_VARS,
};
use crate::scalar::{FieldSpec, Scalar};

/// Errors from catalog lookups and the analysis pipeline.
#[derive(Debug, Error)]
pub enum SkewPbwError {
    #[error("NotInCatalog: no entry named `{0}`")]
    NotInCatalog(String),
    #[error("MissingConstant: entry `{entry}` requires a value for `{name}`")]
    MissingConstant { entry: String, name: String },
    #[error("UnknownConstant: entry `{entry}` has no constant named `{name}`")]
    UnknownConstant { entry: String, name: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Qa(#[from] QaError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// A skew PBW extension of the base field: for every pair i < j one
/// invertible constant c_{ij} and one lower-order term of degree <= 1, read
/// as x_j*x_i = c_{ij}*x_i*x_j + lower_{ij}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPbwPresentation {
    field: FieldSpec,
    var_names: Vec<String>,
    params: BTreeMap<String, Scalar>,
    c: BTreeMap<(u32, u32), Scalar>,
    lower: BTreeMap<(u32, u32), NcPoly>,
}

impl SkewPbwPresentation {
    /// Validated constructor; mirrors what `parse_extension` enforces.
    pub fn new(
        field: FieldSpec,
        var_names: Vec<String>,
        params: BTreeMap<String, Scalar>,
        c: BTreeMap<(u32, u32), Scalar>,
        lower: BTreeMap<(u32, u32), NcPoly>,
    ) -> Result<SkewPbwPresentation, ParseError> {
        let n = var_names.len();
        if !(2..=MAX_VARS).contains(&n) {
            return Err(ParseError::UnsupportedVarCount { line: 0, n });
        }
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
        for i in 1..=n as u32 {
            for j in (i + 1)..=n as u32 {
                if !c.contains_key(&(i, j)) {
                    return Err(ParseError::MissingExtensionRelation { i, j });
                }
            }
        }
        for (&(i, j), value) in &c {
            assert!(1 <= i && i < j && j as usize <= n, "pair indices in range");
            assert_eq!(value.field(), field, "constant field must match");
            if value.is_zero() {
                return Err(ParseError::ZeroCoefficient { line: 0, i, j });
            }
            let low = lower.get(&(i, j)).expect("one lower term per pair");
            assert_eq!(low.field(), field, "lower-term field must match");
            assert!(low.var_count() <= n, "lower term mentions undeclared variables");
            if low.degree().unwrap_or(0) > 1 {
                return Err(ParseError::NotAffine { line: 0 });
            }
        }
        assert_eq!(c.len(), lower.len(), "c and lower must cover the same pairs");
        Ok(SkewPbwPresentation { field, var_names, params, c, lower })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn params(&self) -> &BTreeMap<String, Scalar> {
        &self.params
    }

    /// The constant c_{ij}; requires 1 <= i < j <= n.
    pub fn c(&self, i: u32, j: u32) -> &Scalar {
        self.c.get(&(i, j)).expect("pair must satisfy 1 <= i < j <= n")
    }

    /// The affine lower term of the pair (i, j), possibly zero.
    pub fn lower(&self, i: u32, j: u32) -> &NcPoly {
        self.lower.get(&(i, j)).expect("pair must satisfy 1 <= i < j <= n")
    }

    /// Pairs in lex order with constant and lower term.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &Scalar, &NcPoly)> {
        self.c.iter().map(|(k, c)| (*k, c, &self.lower[k]))
    }

    pub fn has_lower_terms(&self) -> bool {
        self.lower.values().any(|l| !l.is_zero())
    }

    /// The same extension with every lower term deleted (already graded).
    pub fn without_lower_terms(&self) -> SkewPbwPresentation {
        let mut out = self.clone();
        for value in out.lower.values_mut() {
            *value = NcPoly::zero(self.field, self.var_names.len());
        }
        out
    }

    /// Associated graded algebra: the lower terms drop into lower filtration
    /// degree, leaving the quantum affine space with q_{ij} = c_{ij}.
    pub fn associated_graded(&self) -> QuantumAffineParams {
        QuantumAffineParams::new(self.field, self.n(), self.c.clone())
            .expect("presentation invariants match the quantum affine ones")
    }

    /// The graded algebra as a relation presentation, keeping variable names.
    pub fn graded_presentation(&self) -> Presentation {
        self.associated_graded().to_presentation_with_names(&self.var_names)
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
        for (&(i, j), c) in &self.c {
            out.push_str(&format!(
                "ext {} {} : {} => {}\n",
                self.var_names[j as usize - 1],
                self.var_names[i as usize - 1],
                c,
                self.lower[&(i, j)].render(&self.var_names),
            ));
        }
        out
    }
}

impl fmt::Display for SkewPbwPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parse the extension format:
///
/// ```text
/// field Q
/// vars t d
/// ext d t : 1 => d      # x_j x_i = c * x_i x_j + affine lower term
/// ```
///
/// The two names after `ext` are the higher-index variable then the
/// lower-index one; `c` is a nonzero constant expression; the lower term is
/// any expression of degree at most 1. Every pair must appear exactly once.
pub fn parse_extension(text: &str) -> Result<SkewPbwPresentation, ParseError> {
    let lines = tokenize(text)?;
    let (field, var_names, var_index, mut idx) = parse_header(&lines)?;
    let n = var_names.len();
    if !(2..=MAX_VARS).contains(&n) {
        return Err(ParseError::UnsupportedVarCount { line: idx, n });
    }

    let mut params: BTreeMap<String, Scalar> = BTreeMap::new();
    let mut c_table: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
    let mut lower: BTreeMap<(u32, u32), NcPoly> = BTreeMap::new();
    let mut ext_seen = false;

    while idx < lines.len() {
        let toks = &lines[idx];
        let line_no = idx + 1;
        idx += 1;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line_no, toks);
        let (kw, line, col) = cur.expect_ident()?;
        match kw.as_str() {
            "param" => {
                if ext_seen {
                    return Err(ParseError::syntax(
                        line,
                        col,
                        "'param' lines must come before 'ext' lines",
                    ));
                }
                parse_param_line(&mut cur, field, &var_index, &mut params)?;
            }
            "ext" => {
                ext_seen = true;
                let (j, i) = parse_ext_pair(&mut cur, &var_index)?;
                cur.expect(&Tok::Colon)?;
                let c_expr = parse_expr(&mut cur)?;
                let const_ctx =
                    EvalCtx { field, n, var_index: &var_index, params: &params, allow_vars: false };
                let c_poly = eval_expr(&c_expr, &const_ctx)?;
                let c_value = c_poly
                    .coefficient(&Word::empty())
                    .cloned()
                    .unwrap_or_else(|| Scalar::zero(field));
                if c_value.is_zero() {
                    return Err(ParseError::ZeroCoefficient { line, i, j });
                }
                cur.expect(&Tok::Arrow)?;
                let low_expr = parse_expr(&mut cur)?;
                cur.expect_end()?;
                let low_ctx =
                    EvalCtx { field, n, var_index: &var_index, params: &params, allow_vars: true };
                let low = eval_expr(&low_expr, &low_ctx)?;
                if low.degree().unwrap_or(0) > 1 {
                    return Err(ParseError::NotAffine { line });
                }
                if c_table.insert((i, j), c_value).is_some() {
                    return Err(ParseError::DuplicateExtensionRelation { line, i, j });
                }
                lower.insert((i, j), low);
            }
            other => {
                return Err(ParseError::syntax(
                    line,
                    col,
                    format!("unknown directive '{other}'; expected 'param' or 'ext'"),
                ))
            }
        }
    }

    for i in 1..=n as u32 {
        for j in (i + 1)..=n as u32 {
            if !c_table.contains_key(&(i, j)) {
                return Err(ParseError::MissingExtensionRelation { i, j });
            }
        }
    }
    SkewPbwPresentation::new(field, var_names, params, c_table, lower)
}

/// The `<higher> <lower>` variable pair of an `ext` line.
fn parse_ext_pair(
    cur: &mut Cursor,
    var_index: &BTreeMap<String, u32>,
) -> Result<(u32, u32), ParseError> {
    let read_var = |cur: &mut Cursor| -> Result<(u32, usize, usize), ParseError> {
        let (name, line, col) = cur.expect_ident()?;
        match var_index.get(&name) {
            Some(&v) => Ok((v, line, col)),
            None => Err(ParseError::UnknownVariable { line, col, name }),
        }
    };
    let (j, line, col) = read_var(cur)?;
    let (i, ..) = read_var(cur)?;
    if j <= i {
        return Err(ParseError::syntax(
            line,
            col,
            "the left variable of 'ext' must have the larger index: \
             'ext b a : c => ...' encodes b*a = c*a*b + ...",
        ));
    }
    Ok((j, i))
}

/// Full point-module analysis of one extension over F_p. Every field is
/// derived from the associated graded algebra alone, so two presentations
/// differing only in lower terms produce identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub p: u32,
    pub m_max: u32,
    pub n: usize,
    pub field: String,
    pub var_names: Vec<String>,
    /// Graded parameters q_{ij} = c_{ij} over the presentation field.
    pub graded_q: Vec<(u32, u32, String)>,
    /// Generators of the ideal of E over the presentation field.
    pub e_generators: Vec<String>,
    pub e_is_zero_ideal: bool,
    pub sigma: SigmaReport,
    pub stabilization: StabilizationReport,
    /// Where the point modules land, phrased from the computed data.
    pub parametrization: String,
}

impl AnalysisReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "skew PBW extension analysis over F_{} (m_max = {})\n",
            self.p, self.m_max
        ));
        out.push_str(&format!(
            "associated graded algebra: quantum affine {}-space over {} with\n",
            self.n, self.field
        ));
        for (i, j, q) in &self.graded_q {
            out.push_str(&format!("  q[{i},{j}] = {q}\n"));
        }
        if self.e_is_zero_ideal {
            out.push_str(&format!("E = P^{} (zero ideal)\n", self.n - 1));
        } else {
            out.push_str(&format!("E = V(I_F) in P^{} with generators\n", self.n - 1));
            for (k, g) in self.e_generators.iter().enumerate() {
                out.push_str(&format!("  f{} = {}\n", k + 1, g));
            }
        }
        out.push_str(&self.sigma.render());
        out.push_str(&self.stabilization.render());
        out.push('\n');
        out.push_str(&self.parametrization);
        out.push('\n');
        out
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Run the pipeline: associated graded parameters, the variety E and the
/// successor permutation over F_p, then truncated-scheme stabilization of the
/// graded presentation up to m_max.
pub fn analyze_extension(
    pres: &SkewPbwPresentation,
    p: u32,
    m_max: u32,
) -> Result<AnalysisReport, SkewPbwError> {
    let graded = pres.associated_graded();
    let e = graded.variety_e();
    let sigma = sigma_permutation_report(&graded, p)?;
    let stabilization = find_stabilization(&pres.graded_presentation(), p, m_max)?;

    let parametrization = match stabilization.m0_candidate {
        Some(m0) => format!(
            "point modules: isomorphism classes inject into the closed points of X_{m0}; \
             |X_{m0}(F_{p})| = {}",
            stabilization.counts[m0 as usize - 1]
        ),
        None => format!(
            "point modules: no stabilization detected up to m_max = {m_max}; \
             the parametrizing truncation was not identified"
        ),
    };

    Ok(AnalysisReport {
        p,
        m_max,
        n: pres.n(),
        field: pres.field().to_string(),
        var_names: pres.var_names().to_vec(),
        graded_q: graded.entries().map(|((i, j), q)| (i, j, q.to_string())).collect(),
        e_generators: e.generators().iter().map(|g| g.render(pres.var_names())).collect(),
        e_is_zero_ideal: e.is_zero_ideal(),
        sigma,
        stabilization,
        parametrization,
    })
}

/// One built-in example: an extension-file body with `{name}` placeholders
/// for constants, some of which may carry defaults.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Constant names with optional default literals; `None` means the user
    /// must supply a value at instantiation.
    pub constants: &'static [(&'static str, Option<&'static str>)],
    body: &'static str,
}

impl CatalogEntry {
    /// Substitute constants (overrides beat defaults) and parse the body.
    pub fn instantiate(
        &self,
        overrides: &BTreeMap<String, String>,
    ) -> Result<SkewPbwPresentation, SkewPbwError> {
        for name in overrides.keys() {
            if !self.constants.iter().any(|(c, _)| c == name) {
                return Err(SkewPbwError::UnknownConstant {
                    entry: self.name.into(),
                    name: name.clone(),
                });
            }
        }
        let mut body = self.body.to_string();
        for (name, default) in self.constants {
            let value = match overrides.get(*name).map(String::as_str).or(*default) {
                Some(v) => v.to_string(),
                None => {
                    return Err(SkewPbwError::MissingConstant {
                        entry: self.name.into(),
                        name: (*name).into(),
                    })
                }
            };
            body = body.replace(&format!("{{{name}}}"), &value);
        }
        Ok(parse_extension(&body)?)
    }

    /// True when every constant carries a default.
    pub fn has_defaults(&self) -> bool {
        self.constants.iter().all(|(_, d)| d.is_some())
    }

    /// The raw body with `{name}` placeholders still in place.
    pub fn body_template(&self) -> &'static str {
        self.body
    }

    pub fn describe(&self) -> String {
        let mut out = format!("{}: {}\n", self.name, self.summary);
        if self.constants.is_empty() {
            out.push_str("  constants: none\n");
        } else {
            let list: Vec<String> = self
                .constants
                .iter()
                .map(|(name, default)| match default {
                    Some(d) => format!("{name} (default {d})"),
                    None => format!("{name} (required)"),
                })
                .collect();
            out.push_str(&format!("  constants: {}\n", list.join(", ")));
        }
        out
    }
}

/// A 3-variable template whose quantum constants and affine lower terms are
/// all user-supplied; used for the named quantum algebras whose structure
/// constants vary across the literature and are deliberately not built in.
macro_rules! three_var_template {
    ($v1:literal, $v2:literal, $v3:literal) => {
        concat!(
            "field Q\nvars ",
            $v1,
            " ",
            $v2,
            " ",
            $v3,
            "\next ",
            $v2,
            " ",
            $v1,
            " : {c12} => {l12}\next ",
            $v3,
            " ",
            $v1,
            " : {c13} => {l13}\next ",
            $v3,
            " ",
            $v2,
            " : {c23} => {l23}\n"
        )
    };
}

const TEMPLATE_CONSTANTS: &[(&str, Option<&str>)] = &[
    ("c12", None),
    ("c13", None),
    ("c23", None),
    ("l12", None),
    ("l13", None),
    ("l23", None),
];

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "enveloping-lie-3",
        summary: "universal enveloping algebra of the 3-dimensional Lie algebra with \
                  [e,f] = h, [h,e] = 2e, [h,f] = -2f; all c = 1, graded to K[e,f,h]",
        constants: &[],
        body: "field Q\nvars e f h\next f e : 1 => -h\next h e : 1 => 2*e\next h f : 1 => -2*f\n",
    },
    CatalogEntry {
        name: "quantum-plane",
        summary: "two variables with y*x = q*x*y",
        constants: &[("q", Some("2"))],
        body: "field Q\nvars x y\next y x : {q} => 0\n",
    },
    CatalogEntry {
        name: "quantum-affine-3",
        summary: "three variables with y*x = q12*x*y, z*x = q13*x*z, z*y = q23*y*z",
        constants: &[("q12", Some("2")), ("q13", Some("6")), ("q23", Some("3"))],
        body: "field Q\nvars x y z\next y x : {q12} => 0\next z x : {q13} => 0\
               \next z y : {q23} => 0\n",
    },
    CatalogEntry {
        name: "shift-operators",
        summary: "polynomial coefficients t and the shift d with d*t = t*d + d; \
                  graded to the commutative plane",
        constants: &[],
        body: "field Q\nvars t d\next d t : 1 => d\n",
    },
    CatalogEntry {
        name: "u-so3",
        summary: "template for the quantum orthogonal-type algebra on i1, i2, i3; \
                  supply the three quantum constants and three affine lower terms",
        constants: TEMPLATE_CONSTANTS,
        body: three_var_template!("i1", "i2", "i3"),
    },
    CatalogEntry {
        name: "dispin",
        summary: "template for the dispin-type algebra on d1, d2, d3; \
                  supply the three quantum constants and three affine lower terms",
        constants: TEMPLATE_CONSTANTS,
        body: three_var_template!("d1", "d2", "d3"),
    },
    CatalogEntry {
        name: "woronowicz",
        summary: "template for the Woronowicz-type deformation on x, y, z; \
                  supply the three quantum constants and three affine lower terms",
        constants: TEMPLATE_CONSTANTS,
        body: three_var_template!("x", "y", "z"),
    },
    CatalogEntry {
        name: "q-heisenberg",
        summary: "template for the q-deformed Heisenberg-type algebra on x, y, z; \
                  supply the three quantum constants and three affine lower terms",
        constants: TEMPLATE_CONSTANTS,
        body: three_var_template!("x", "y", "z"),
    },
];

/// All built-in entries, stable order.
pub fn builtin_catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// Look up one entry by name.
pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry, SkewPbwError> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| SkewPbwError::NotInCatalog(name.into()))
}
