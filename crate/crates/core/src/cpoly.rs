//! Commutative multivariate polynomials in slotted variables, polynomial
//! matrices with exact determinants and minors, and rank/kernel computations
//! for scalar matrices.
//!
//! A slotted variable pairs a generator index `v` with a slot `u`; slot `u`
//! holds the coordinates of the `u`-th point of a tuple. Polynomials are kept
//! in a canonical sparse form under a fixed graded-lex term order, so
//! structural equality is polynomial equality.

use crate::scalar::{FieldSpec, Scalar, ScalarError};
use itertools::Itertools;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Errors from polynomial and matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CpolyError {
    #[error("MissingAssignment: no value for variable {0}")]
    MissingAssignment(SlotVar),
    #[error("NotSquare: matrix is {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("BadSize: minor size {k} is not positive")]
    BadSize { k: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Variable `v` (1-based) sitting in slot `u` (0-based). The total order is
/// by slot first, then variable index, so all coordinates of one point are
/// adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotVar {
    pub u: u32,
    pub v: u32,
}

impl SlotVar {
    pub fn new(v: u32, u: u32) -> SlotVar {
        SlotVar { u, v }
    }

    /// Text form using a variable-name table: variable `v` in slot `u`
    /// renders as `"<name><slot>"`, e.g. `y0`, `x1`.
    pub fn text(&self, names: &[String]) -> String {
        format!("{}{}", names[(self.v - 1) as usize], self.u)
    }
}

impl fmt::Display for SlotVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(var {}, slot {})", self.v, self.u)
    }
}

/// A power product of slotted variables: sorted `(variable, exponent)` pairs
/// with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(SlotVar, u32)>);

impl Monomial {
    /// Build from arbitrary pairs; exponents of repeated variables add up.
    pub fn new(pairs: impl IntoIterator<Item = (SlotVar, u32)>) -> Monomial {
        let mut map: BTreeMap<SlotVar, u32> = BTreeMap::new();
        for (sv, e) in pairs {
            if e > 0 {
                *map.entry(sv).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(SlotVar, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(other.0.iter()).copied())
    }

    fn shift_slots(&self, offset: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|(sv, e)| (SlotVar { u: sv.u + offset, v: sv.v }, *e))
                .collect(),
        )
    }

    pub fn text(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|(sv, e)| {
                if *e == 1 {
                    sv.text(names)
                } else {
                    format!("{}^{}", sv.text(names), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Graded lex: total degree first; ties broken by the first variable (in
/// slot-then-index order) where the exponents differ, larger exponent giving
/// the larger monomial.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let mut a = self.0.iter().peekable();
            let mut b = other.0.iter().peekable();
            loop {
                match (a.peek(), b.peek()) {
                    (None, None) => return Ordering::Equal,
                    // Remaining exponents in one monomial only: it has a
                    // positive exponent at an earlier-or-equal variable.
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                        // Earlier variable present on one side only.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(eb);
                            }
                            a.next();
                            b.next();
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A commutative polynomial in slotted variables over one field, in
/// canonical sparse form (no zero coefficients, graded-lex term order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPoly {
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CPoly {
    pub fn zero(field: FieldSpec) -> CPoly {
        CPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, value: &Scalar) -> CPoly {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::unit(), value.clone());
        }
        CPoly { field, terms }
    }

    pub fn one(field: FieldSpec) -> CPoly {
        CPoly::constant(field, &Scalar::one(field))
    }

    /// Single slotted variable with coefficient 1.
    pub fn variable(field: FieldSpec, sv: SlotVar) -> CPoly {
        CPoly::term(field, Monomial::new([(sv, 1)]), &Scalar::one(field))
    }

    /// Single term `coeff * mono`.
    pub fn term(field: FieldSpec, mono: Monomial, coeff: &Scalar) -> CPoly {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff.clone());
        }
        CPoly { field, terms }
    }

    /// Build from explicit terms; repeated monomials are summed.
    pub fn from_terms(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<CPoly, ScalarError> {
        let mut out = CPoly::zero(field);
        for (m, c) in terms {
            out.add_term(&m, &c)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, m: &Monomial, c: &Scalar) -> Result<(), ScalarError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get(m) {
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
            Some(old) => {
                let sum = old.add(c)?;
                if sum.is_zero() {
                    self.terms.remove(m);
                } else {
                    self.terms.insert(m.clone(), sum);
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// All variables occurring with positive exponent.
    pub fn variables(&self) -> Vec<SlotVar> {
        let mut vars: Vec<SlotVar> =
            self.terms.keys().flat_map(|m| m.pairs().iter().map(|(sv, _)| *sv)).collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn add(&self, other: &CPoly) -> Result<CPoly, ScalarError> {
        if self.field != other.field {
            return Err(ScalarError::MixedFields(self.field, other.field));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CPoly) -> Result<CPoly, ScalarError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        CPoly { field: self.field, terms }
    }

    pub fn mul(&self, other: &CPoly) -> Result<CPoly, ScalarError> {
        if self.field != other.field {
            return Err(ScalarError::MixedFields(self.field, other.field));
        }
        let mut out = CPoly::zero(self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&ma.mul(mb), &ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, by: &Scalar) -> Result<CPoly, ScalarError> {
        let mut out = CPoly::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m, &c.mul(by)?)?;
        }
        Ok(out)
    }

    /// Re-index every slot `u` to `u + offset` (used to shift an equation
    /// down a tuple of points).
    pub fn shift_slots(&self, offset: u32) -> CPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.shift_slots(offset), c.clone())).collect();
        CPoly { field: self.field, terms }
    }

    /// Exact evaluation; the assignment must cover every occurring variable.
    pub fn eval(&self, assignment: &BTreeMap<SlotVar, Scalar>) -> Result<Scalar, CpolyError> {
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (sv, e) in m.pairs() {
                let val =
                    assignment.get(sv).ok_or(CpolyError::MissingAssignment(*sv))?;
                for _ in 0..*e {
                    t = t.mul(val)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Render with a name table, smallest term first: `"y0*x1 - 2*x0*y1"`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            crate::ncpoly::render_term(&mut out, i == 0, c, &m.text(names));
        }
        out
    }
}

/// A rectangular matrix of polynomials sharing one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<CPoly>, // row-major
}

impl PolyMatrix {
    /// Build from row-major entries; all must share the matrix field.
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<CPoly>) -> PolyMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        assert!(entries.iter().all(|e| e.field() == field), "mixed fields in matrix");
        PolyMatrix { field, rows, cols, entries }
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::new(field, rows, cols, vec![CPoly::zero(field); rows * cols])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &CPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: CPoly) {
        assert_eq!(value.field(), self.field);
        self.entries[r * self.cols + c] = value;
    }

    /// Submatrix on the given row and column index sets (kept in order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.at(r, c).clone()))
            .collect();
        PolyMatrix::new(self.field, rows.len(), cols.len(), entries)
    }

    /// Exact determinant by cofactor expansion. At each level the expansion
    /// row is the one with the most zero entries (ties: first such row);
    /// these matrices are small and sparse, so expansion is cheap.
    pub fn determinant(&self) -> Result<CPoly, CpolyError> {
        if self.rows != self.cols {
            return Err(CpolyError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.det_rec()?)
    }

    fn det_rec(&self) -> Result<CPoly, ScalarError> {
        let n = self.rows;
        if n == 0 {
            return Ok(CPoly::one(self.field));
        }
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let row = (0..n)
            .max_by_key(|&r| {
                let zeros = (0..n).filter(|&c| self.at(r, c).is_zero()).count();
                (zeros, n - r) // prefer earlier rows on ties
            })
            .unwrap();
        self.det_along_row(row)
    }

    fn det_along_row(&self, row: usize) -> Result<CPoly, ScalarError> {
        let n = self.rows;
        let mut acc = CPoly::zero(self.field);
        let sub_rows: Vec<usize> = (0..n).filter(|&r| r != row).collect();
        for col in 0..n {
            let entry = self.at(row, col);
            if entry.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = (0..n).filter(|&c| c != col).collect();
            let cofactor = self.submatrix(&sub_rows, &sub_cols).det_rec()?;
            let signed = if (row + col).is_multiple_of(2) {
                entry.mul(&cofactor)?
            } else {
                entry.mul(&cofactor)?.neg()
            };
            acc = acc.add(&signed)?;
        }
        Ok(acc)
    }

    #[cfg(test)]
    fn det_along_col(&self, col: usize) -> Result<CPoly, ScalarError> {
        let n = self.rows;
        let mut acc = CPoly::zero(self.field);
        let sub_cols: Vec<usize> = (0..n).filter(|&c| c != col).collect();
        for row in 0..n {
            let entry = self.at(row, col);
            if entry.is_zero() {
                continue;
            }
            let sub_rows: Vec<usize> = (0..n).filter(|&r| r != row).collect();
            let cofactor = self.submatrix(&sub_rows, &sub_cols).det_rec()?;
            let signed = if (row + col).is_multiple_of(2) {
                entry.mul(&cofactor)?
            } else {
                entry.mul(&cofactor)?.neg()
            };
            acc = acc.add(&signed)?;
        }
        Ok(acc)
    }

    /// All `k`-by-`k` minors, indexed by (row subset, column subset), both in
    /// lexicographic subset order. Zero minors are included so callers can
    /// see when the whole minor ideal vanishes. A `k` exceeding the matrix
    /// dimensions yields an empty list (there are no such subsets).
    pub fn minors(&self, k: usize) -> Result<Vec<Minor>, CpolyError> {
        if k == 0 {
            return Err(CpolyError::BadSize { k });
        }
        if k > self.rows || k > self.cols {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for rows in (0..self.rows).combinations(k) {
            for cols in (0..self.cols).combinations(k) {
                let value = self.submatrix(&rows, &cols).det_rec()?;
                out.push(Minor { rows: rows.clone(), cols, value });
            }
        }
        Ok(out)
    }

    /// Evaluate every entry, producing a scalar matrix.
    pub fn eval(&self, assignment: &BTreeMap<SlotVar, Scalar>) -> Result<ScalarMat, CpolyError> {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for e in &self.entries {
            data.push(e.eval(assignment)?);
        }
        Ok(ScalarMat::new(self.field, self.rows, self.cols, data))
    }

    /// Bracketed row-by-row text form.
    pub fn render(&self, names: &[String]) -> String {
        (0..self.rows)
            .map(|r| {
                let row =
                    (0..self.cols).map(|c| self.at(r, c).render(names)).collect::<Vec<_>>();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// One minor: the row/column subsets that produced it and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: CPoly,
}

/// A matrix of scalars with exact rank and kernel computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl ScalarMat {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> ScalarMat {
        assert_eq!(data.len(), rows * cols);
        assert!(data.iter().all(|s| s.field() == field), "mixed fields in matrix");
        ScalarMat { field, rows, cols, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Reduced row echelon form together with the pivot column list.
    #[allow(clippy::needless_range_loop)] // in-place elimination over two rows
    fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut m: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).clone()).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, pr);
            let inv = m[row][col].inv().expect("pivot is nonzero");
            for c in col..self.cols {
                m[row][c] = m[row][c].mul(&inv).expect("same field");
            }
            for r in 0..self.rows {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..self.cols {
                        let delta = factor.mul(&m[row][c]).expect("same field");
                        m[r][c] = m[r][c].sub(&delta).expect("same field");
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel; one vector per free column, each normalized
    /// so its first nonzero entry is 1. `rank + kernel dimension = cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (m, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut vec: Vec<Scalar> = vec![Scalar::zero(self.field); self.cols];
            vec[free] = Scalar::one(self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                if !m[r][free].is_zero() {
                    vec[pc] = m[r][free].neg();
                }
            }
            let lead_inv = vec
                .iter()
                .find(|s| !s.is_zero())
                .expect("kernel vector is nonzero")
                .inv()
                .expect("nonzero scalar");
            for s in &mut vec {
                *s = s.mul(&lead_inv).expect("same field");
            }
            basis.push(vec);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn int(v: i64) -> Scalar {
        Scalar::from_integer(Q, v)
    }

    fn qr(n: i64, d: i64) -> Scalar {
        Scalar::rational(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    fn sv(v: u32, u: u32) -> SlotVar {
        SlotVar::new(v, u)
    }

    fn var(v: u32, u: u32) -> CPoly {
        CPoly::variable(Q, sv(v, u))
    }

    fn names3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn slot_var_order_is_slot_then_index() {
        assert!(sv(3, 0) < sv(1, 1)); // z0 < x1
        assert!(sv(1, 0) < sv(2, 0)); // x0 < y0
    }

    #[test]
    fn graded_lex_order() {
        // Total degree dominates.
        let x0 = Monomial::new([(sv(1, 0), 1)]);
        let y0x1 = Monomial::new([(sv(2, 0), 1), (sv(1, 1), 1)]);
        assert!(x0 < y0x1);
        // Same degree: larger exponent at the earliest differing variable wins.
        let x0y1 = Monomial::new([(sv(1, 0), 1), (sv(2, 1), 1)]);
        assert!(y0x1 < x0y1);
        let x0sq = Monomial::new([(sv(1, 0), 2)]);
        assert!(x0y1 < x0sq);
    }

    #[test]
    fn rendering_matches_slot_naming() {
        // y0*x1 - 2*x0*y1 prints smallest term first.
        let g = var(2, 0)
            .mul(&var(1, 1))
            .unwrap()
            .sub(&var(1, 0).mul(&var(2, 1)).unwrap().scale(&int(2)).unwrap())
            .unwrap();
        assert_eq!(g.render(&names3()), "y0*x1 - 2*x0*y1");

        let sq = var(3, 0).mul(&var(3, 0)).unwrap();
        assert_eq!(sq.render(&names3()), "z0^2");
        assert_eq!(CPoly::zero(Q).render(&names3()), "0");
    }

    #[test]
    fn eval_substitutes_exactly() {
        // g = y0*x1 - 2*x0*y1 at (x0,y0,x1,y1) = (1,2,2,1) -> 2*2 - 2*1*1 = 2
        let g = var(2, 0)
            .mul(&var(1, 1))
            .unwrap()
            .sub(&var(1, 0).mul(&var(2, 1)).unwrap().scale(&int(2)).unwrap())
            .unwrap();
        let mut a = BTreeMap::new();
        a.insert(sv(1, 0), int(1));
        a.insert(sv(2, 0), int(2));
        a.insert(sv(1, 1), int(2));
        a.insert(sv(2, 1), int(1));
        assert_eq!(g.eval(&a).unwrap(), int(2));

        a.remove(&sv(2, 1));
        assert!(matches!(g.eval(&a), Err(CpolyError::MissingAssignment(s)) if s == sv(2, 1)));

        // All-zero assignment returns the constant term.
        let f = g.add(&CPoly::constant(Q, &qr(5, 3))).unwrap();
        let zeros: BTreeMap<SlotVar, Scalar> =
            f.variables().into_iter().map(|s| (s, int(0))).collect();
        assert_eq!(f.eval(&zeros).unwrap(), qr(5, 3));
    }

    fn diag(values: &[i64]) -> PolyMatrix {
        let n = values.len();
        let mut m = PolyMatrix::zero(Q, n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, CPoly::constant(Q, &int(v)));
        }
        m
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(diag(&[1, 1, 1]).determinant().unwrap(), CPoly::one(Q));
        assert_eq!(
            diag(&[2, 3, 4]).determinant().unwrap(),
            CPoly::constant(Q, &int(24))
        );
        let r = PolyMatrix::zero(Q, 2, 3).determinant();
        assert!(matches!(r, Err(CpolyError::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn determinant_alternating_and_multilinear_spots() {
        // Swapping two rows flips the sign.
        let mut m = PolyMatrix::zero(Q, 2, 2);
        m.set(0, 0, var(1, 0));
        m.set(0, 1, var(2, 0));
        m.set(1, 0, CPoly::one(Q));
        m.set(1, 1, var(1, 0));
        let d = m.determinant().unwrap();
        let swapped = m.submatrix(&[1, 0], &[0, 1]).determinant().unwrap();
        assert_eq!(d.neg(), swapped);
        // Equal rows kill the determinant.
        let dup = m.submatrix(&[0, 0], &[0, 1]);
        assert!(dup.determinant().unwrap().is_zero());
    }

    #[test]
    fn laplace_expansion_is_row_and_column_independent() {
        // A 4x4 with polynomial entries in a few variables.
        let mut m = PolyMatrix::zero(Q, 4, 4);
        let polys = [
            var(1, 0),
            var(2, 0).add(&CPoly::one(Q)).unwrap(),
            CPoly::zero(Q),
            var(3, 0),
            CPoly::one(Q),
            var(1, 0).mul(&var(2, 0)).unwrap(),
            var(2, 1),
            CPoly::zero(Q),
            var(3, 1),
            CPoly::zero(Q),
            var(1, 1).scale(&int(-2)).unwrap(),
            var(2, 0),
            CPoly::zero(Q),
            var(1, 0),
            CPoly::one(Q).neg(),
            var(3, 0).mul(&var(3, 0)).unwrap(),
        ];
        for (i, p) in polys.into_iter().enumerate() {
            m.set(i / 4, i % 4, p);
        }
        let reference = m.det_along_row(0).unwrap();
        for r in 1..4 {
            assert_eq!(m.det_along_row(r).unwrap(), reference);
        }
        for c in 0..4 {
            assert_eq!(m.det_along_col(c).unwrap(), reference);
        }
        assert_eq!(m.determinant().unwrap(), reference);
    }

    #[test]
    fn minors_empty_when_size_exceeds_shape() {
        let m = PolyMatrix::zero(Q, 1, 2);
        assert!(m.minors(2).unwrap().is_empty());
        assert!(matches!(m.minors(0), Err(CpolyError::BadSize { k: 0 })));
    }

    #[test]
    fn minors_cover_all_subsets_in_lex_order() {
        let mut m = PolyMatrix::zero(Q, 3, 2);
        for r in 0..3 {
            for c in 0..2 {
                m.set(r, c, CPoly::constant(Q, &int((r * 2 + c) as i64 + 1)));
            }
        }
        let list = m.minors(2).unwrap();
        assert_eq!(list.len(), 3); // C(3,2) * C(2,2)
        assert_eq!(list[0].rows, vec![0, 1]);
        assert_eq!(list[1].rows, vec![0, 2]);
        assert_eq!(list[2].rows, vec![1, 2]);
        // dets: [1 2; 3 4] = -2, [1 2; 5 6] = -4, [3 4; 5 6] = -2
        assert_eq!(list[0].value, CPoly::constant(Q, &int(-2)));
        assert_eq!(list[1].value, CPoly::constant(Q, &int(-4)));
        assert_eq!(list[2].value, CPoly::constant(Q, &int(-2)));
        // Zero minors stay in the list.
        let z = PolyMatrix::zero(Q, 2, 2).minors(2).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].value.is_zero());
    }

    fn mat(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> ScalarMat {
        let data = vals.iter().map(|&v| Scalar::from_integer(field, v)).collect();
        ScalarMat::new(field, rows, cols, data)
    }

    #[test]
    fn rank_and_kernel() {
        let f7 = FieldSpec::prime_field(7).unwrap();
        let id = mat(f7, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(id.rank(), 3);
        assert!(id.kernel_basis().is_empty());

        let zero = mat(f7, 2, 2, &[0, 0, 0, 0]);
        assert_eq!(zero.rank(), 0);
        assert_eq!(zero.kernel_basis().len(), 2);

        // Rank-1 matrix over F_7: kernel dimension 2, rank+dim = cols.
        let m = mat(f7, 3, 3, &[1, 2, 3, 2, 4, 6, 3, 6, 2 + 7]);
        assert_eq!(m.rank() + m.kernel_basis().len(), 3);
        for v in m.kernel_basis() {
            // Normalized: first nonzero entry is one.
            let lead = v.iter().find(|s| !s.is_zero()).unwrap();
            assert!(lead.is_one());
            // And it really is in the kernel.
            for r in 0..3 {
                let mut acc = Scalar::zero(f7);
                for (c, vc) in v.iter().enumerate() {
                    acc = acc.add(&m.at(r, c).mul(vc).unwrap()).unwrap();
                }
                assert!(acc.is_zero());
            }
        }

        // Over Q too.
        let mq = mat(Q, 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(mq.rank(), 2);
        let k = mq.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(k[0].iter().find(|s| !s.is_zero()).unwrap().is_one());
    }

    #[test]
    fn shift_slots_moves_every_slot() {
        let g = var(2, 0).mul(&var(1, 1)).unwrap();
        let shifted = g.shift_slots(2);
        let expect = var(2, 2).mul(&var(1, 3)).unwrap();
        assert_eq!(shifted, expect);
    }
}
