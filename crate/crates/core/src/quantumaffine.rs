//! Multiparameter quantum affine space: the slotted relation matrices F and
//! G, the variety E cut out by the maximal minors of F, and the mutually
//! inverse successor maps on E computed from kernels.
//!
//! The algebra has relations x_j*x_i = q_{ij}*x_i*x_j for 1 <= i < j <= n.
//! Writing a pair of adjacent projective points as (p0, p1), the degree-2
//! truncation equations read F(p0) * p1 = 0 and equivalently G(p1) * p0 = 0,
//! where row (i, j) of F carries x_j^0 in column i and -q_{ij} x_i^0 in
//! column j, and row (i, j) of G carries -q_{ij} x_j^1 in column i and x_i^1
//! in column j. A point p0 admits a successor exactly when rank F(p0) drops
//! to n - 1, which happens exactly on E = V(nonzero n x n minors of F); the
//! successor sigma(p0) spans ker F(p0), and theta(p1) spanning ker G(p1)
//! inverts it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cpoly::{CPoly, CpolyError, Monomial, PolyMatrix, SlotVar};
use crate::ncpoly::{NcPoly, Presentation, Word};
use crate::pointscheme::{projective_points, ProjPoint, SchemeError, SchemePoint};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

/// Variable counts kept small enough that the minor count C(n(n-1)/2, n)
/// stays trivial to enumerate.
pub const MAX_VARS: usize = 5;

/// Default variable names used when synthesizing a presentation.
const NAME_POOL: [&str; MAX_VARS] = ["x", "y", "z", "w", "v"];

/// Errors from quantum affine constructions and the successor maps.
#[derive(Debug, Error)]
pub enum QaError {
    #[error("NotQuantumAffine: {0}")]
    NotQuantumAffine(String),
    #[error("UnsupportedVarCount: {0} variables (supported range is 2..={MAX_VARS})")]
    UnsupportedVarCount(usize),
    #[error("ZeroParameter: q[{i},{j}] must be nonzero")]
    ZeroParameter { i: u32, j: u32 },
    #[error("ParameterVanishes: q[{i},{j}] reduces to zero mod {p}")]
    ParameterVanishes { i: u32, j: u32, p: u32 },
    #[error("NotInE: point {0} lies outside E")]
    NotInE(ProjPoint),
    #[error("DegenerateKernel: kernel dimension {dim}, expected 1")]
    DegenerateKernel { dim: usize },
    #[error("ConsistencyViolation: {detail} at point {point:?}")]
    ConsistencyViolation { point: Vec<u64>, detail: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Cpoly(#[from] CpolyError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// The parameter table of a quantum affine n-space: one nonzero scalar
/// q_{ij} per pair 1 <= i < j <= n, all over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumAffineParams {
    field: FieldSpec,
    n: usize,
    q: BTreeMap<(u32, u32), Scalar>,
}

impl QuantumAffineParams {
    /// Validated constructor; `q` must hold exactly the pairs (i, j) with
    /// 1 <= i < j <= n, every value nonzero and over `field`.
    pub fn new(
        field: FieldSpec,
        n: usize,
        q: BTreeMap<(u32, u32), Scalar>,
    ) -> Result<QuantumAffineParams, QaError> {
        if !(2..=MAX_VARS).contains(&n) {
            return Err(QaError::UnsupportedVarCount(n));
        }
        for ((i, j), value) in &q {
            if !(1 <= *i && i < j && *j as usize <= n) {
                return Err(QaError::NotQuantumAffine(format!(
                    "parameter index ({i},{j}) is not a pair 1 <= i < j <= {n}"
                )));
            }
            if value.field() != field {
                return Err(QaError::Scalar(ScalarError::MixedFields(field, value.field())));
            }
            if value.is_zero() {
                return Err(QaError::ZeroParameter { i: *i, j: *j });
            }
        }
        for i in 1..=n as u32 {
            for j in (i + 1)..=n as u32 {
                if !q.contains_key(&(i, j)) {
                    return Err(QaError::NotQuantumAffine(format!(
                        "missing parameter q[{i},{j}]"
                    )));
                }
            }
        }
        Ok(QuantumAffineParams { field, n, q })
    }

    /// All q_{ij} equal to one scalar.
    pub fn uniform(field: FieldSpec, n: usize, q: &Scalar) -> Result<QuantumAffineParams, QaError> {
        let mut table = BTreeMap::new();
        for i in 1..=n as u32 {
            for j in (i + 1)..=n as u32 {
                table.insert((i, j), q.clone());
            }
        }
        QuantumAffineParams::new(field, n, table)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The parameter for the pair (i, j); requires 1 <= i < j <= n.
    pub fn q(&self, i: u32, j: u32) -> &Scalar {
        self.q.get(&(i, j)).expect("pair must satisfy 1 <= i < j <= n")
    }

    /// Pairs (i, j) in lex order with their parameters.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &Scalar)> {
        self.q.iter().map(|(k, v)| (*k, v))
    }

    /// Reduce every parameter into F_p; fails if one vanishes there.
    pub fn reduce_to_prime_field(&self, p: u32) -> Result<QuantumAffineParams, QaError> {
        let mut table = BTreeMap::new();
        for ((i, j), value) in &self.q {
            let r = value.reduce_to_prime_field(p)?;
            if r.is_zero() {
                return Err(QaError::ParameterVanishes { i: *i, j: *j, p });
            }
            table.insert((*i, *j), r);
        }
        Ok(QuantumAffineParams { field: FieldSpec::PrimeField(p), n: self.n, q: table })
    }

    /// Recognize a presentation whose relations are exactly
    /// x_j*x_i - q_{ij}*x_i*x_j, one per pair, up to scaling.
    pub fn from_presentation(pres: &Presentation) -> Result<QuantumAffineParams, QaError> {
        let n = pres.n();
        if !(2..=MAX_VARS).contains(&n) {
            return Err(QaError::UnsupportedVarCount(n));
        }
        let mut table = BTreeMap::new();
        for rel in pres.relations() {
            let terms: Vec<(&Word, &Scalar)> = rel.terms().collect();
            if terms.len() != 2 || rel.degree() != Some(2) {
                return Err(QaError::NotQuantumAffine(format!(
                    "relation `{}` is not a two-term quadratic",
                    rel.render(pres.var_names())
                )));
            }
            let (lo, hi) = (terms[0].0.factors(), terms[1].0.factors());
            let (i, j) = (lo[0], lo[1]);
            if i >= j || hi != [j, i] {
                return Err(QaError::NotQuantumAffine(format!(
                    "relation `{}` does not pair x{i}x{j} with its reversal",
                    rel.render(pres.var_names())
                )));
            }
            // c_hi * x_j x_i + c_lo * x_i x_j = 0, so q_{ij} = -c_lo / c_hi.
            let q = terms[0].1.neg().mul(&terms[1].1.inv()?)?;
            if table.insert((i, j), q).is_some() {
                return Err(QaError::NotQuantumAffine(format!(
                    "pair ({i},{j}) appears in more than one relation"
                )));
            }
        }
        QuantumAffineParams::new(pres.field(), n, table)
    }

    /// The canonical presentation with relations x_j*x_i - q_{ij}*x_i*x_j.
    pub fn to_presentation(&self) -> Presentation {
        self.to_presentation_with_names(&self.default_names())
    }

    /// Same presentation, with caller-chosen variable names.
    pub fn to_presentation_with_names(&self, names: &[String]) -> Presentation {
        assert_eq!(names.len(), self.n, "one name per variable");
        let names: Vec<String> = names.to_vec();
        let relations = self
            .q
            .iter()
            .map(|(&(i, j), q)| {
                NcPoly::from_terms(
                    self.field,
                    self.n,
                    [
                        (Word::new(vec![j, i]), Scalar::one(self.field)),
                        (Word::new(vec![i, j]), q.neg()),
                    ],
                )
                .expect("one field throughout")
            })
            .collect();
        Presentation::new(self.field, names, BTreeMap::new(), relations)
            .expect("synthesized presentation is valid")
    }

    /// The matrix F over slot-0 variables: row (i, j) has x_j^0 in column i
    /// and -q_{ij} x_i^0 in column j.
    pub fn build_f(&self) -> PolyMatrix {
        let pairs = self.n * (self.n - 1) / 2;
        let mut f = PolyMatrix::zero(self.field, pairs, self.n);
        for (r, (&(i, j), q)) in self.q.iter().enumerate() {
            f.set(r, i as usize - 1, CPoly::variable(self.field, SlotVar::new(j, 0)));
            let mono = Monomial::new([(SlotVar::new(i, 0), 1)]);
            f.set(r, j as usize - 1, CPoly::term(self.field, mono, &q.neg()));
        }
        f
    }

    /// The matrix G over slot-1 variables: row (i, j) has -q_{ij} x_j^1 in
    /// column i and x_i^1 in column j.
    pub fn build_g(&self) -> PolyMatrix {
        let pairs = self.n * (self.n - 1) / 2;
        let mut g = PolyMatrix::zero(self.field, pairs, self.n);
        for (r, (&(i, j), q)) in self.q.iter().enumerate() {
            let mono = Monomial::new([(SlotVar::new(j, 1), 1)]);
            g.set(r, i as usize - 1, CPoly::term(self.field, mono, &q.neg()));
            g.set(r, j as usize - 1, CPoly::variable(self.field, SlotVar::new(i, 1)));
        }
        g
    }

    /// E = V(I_F): keep the nonzero n x n minors of F as generators.
    pub fn variety_e(&self) -> VarietyE {
        let minors = self.build_f().minors(self.n).expect("n >= 2 is a legal minor size");
        let generators: Vec<CPoly> =
            minors.into_iter().map(|m| m.value).filter(|v| !v.is_zero()).collect();
        VarietyE { field: self.field, n: self.n, is_zero_ideal: generators.is_empty(), generators }
    }

    /// Default variable names matching `to_presentation`.
    pub fn default_names(&self) -> Vec<String> {
        NAME_POOL[..self.n].iter().map(|s| s.to_string()).collect()
    }
}

/// The vanishing locus of the nonzero maximal minors of F, inside P^{n-1}
/// (slot-0 variables). An empty generator list means E is all of P^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyE {
    field: FieldSpec,
    n: usize,
    generators: Vec<CPoly>,
    is_zero_ideal: bool,
}

impl VarietyE {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[CPoly] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.is_zero_ideal
    }

    /// Membership by evaluating every generator at p0.
    pub fn contains(&self, p0: &ProjPoint) -> Result<bool, QaError> {
        let field = FieldSpec::PrimeField(p0.prime());
        if field != self.field {
            return Err(QaError::Scalar(ScalarError::MixedFields(self.field, field)));
        }
        let assignment = slot_assignment(p0, 0);
        for g in &self.generators {
            if !g.eval(&assignment)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = format!("E inside P^{} over {}: ", self.n - 1, self.field);
        if self.is_zero_ideal {
            out.push_str("zero ideal, E is all of projective space\n");
        } else {
            out.push_str(&format!("{} nonzero minor generator(s)\n", self.generators.len()));
            for (k, g) in self.generators.iter().enumerate() {
                out.push_str(&format!("  f{} = {}\n", k + 1, g.render(names)));
            }
        }
        out
    }
}

/// Assignment sending each slot-`slot` variable to the coordinates of `p`.
fn slot_assignment(p: &ProjPoint, slot: u32) -> BTreeMap<SlotVar, Scalar> {
    let field = FieldSpec::PrimeField(p.prime());
    p.residues()
        .iter()
        .enumerate()
        .map(|(v, &r)| (SlotVar::new(v as u32 + 1, slot), Scalar::from_integer(field, r as i64)))
        .collect()
}

/// Per-prime machinery: E membership with a dual-route check, and the
/// kernel-computed successor and predecessor maps.
#[derive(Debug, Clone)]
pub struct SuccessorMaps {
    params: QuantumAffineParams,
    p: u32,
    f: PolyMatrix,
    g: PolyMatrix,
    e: VarietyE,
}

impl SuccessorMaps {
    /// Reduce the parameters mod p and precompute F, G, and E.
    pub fn new(params: &QuantumAffineParams, p: u32) -> Result<SuccessorMaps, QaError> {
        let reduced = params.reduce_to_prime_field(p)?;
        let f = reduced.build_f();
        let g = reduced.build_g();
        let e = reduced.variety_e();
        Ok(SuccessorMaps { params: reduced, p, f, g, e })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn params(&self) -> &QuantumAffineParams {
        &self.params
    }

    pub fn variety(&self) -> &VarietyE {
        &self.e
    }

    fn check_prime(&self, point: &ProjPoint) -> Result<(), QaError> {
        if point.prime() != self.p {
            return Err(QaError::Scalar(ScalarError::MixedFields(
                FieldSpec::PrimeField(self.p),
                FieldSpec::PrimeField(point.prime()),
            )));
        }
        Ok(())
    }

    /// Membership in E, decided by the minor generators and cross-checked
    /// against the rank criterion rank F(p0) = n - 1.
    pub fn is_in_e(&self, p0: &ProjPoint) -> Result<bool, QaError> {
        self.check_prime(p0)?;
        let by_minors = self.e.contains(p0)?;
        let rank = self.f.eval(&slot_assignment(p0, 0))?.rank();
        let by_rank = rank == self.params.n - 1;
        if by_minors != by_rank {
            return Err(QaError::ConsistencyViolation {
                point: p0.residues().to_vec(),
                detail: format!(
                    "minor route says member={by_minors} but rank F = {rank} (n - 1 = {})",
                    self.params.n - 1
                ),
            });
        }
        Ok(by_minors)
    }

    /// The unique successor of p0 in E: the projective kernel of F(p0).
    pub fn sigma_at(&self, p0: &ProjPoint) -> Result<ProjPoint, QaError> {
        let p1 = self.kernel_point(&self.f, p0, 0)?;
        if !self.is_in_e(&p1)? {
            return Err(QaError::ConsistencyViolation {
                point: p1.residues().to_vec(),
                detail: "successor of an E-point left E".into(),
            });
        }
        Ok(p1)
    }

    /// The unique predecessor of p1 in E: the projective kernel of G(p1).
    pub fn theta_at(&self, p1: &ProjPoint) -> Result<ProjPoint, QaError> {
        let p0 = self.kernel_point(&self.g, p1, 1)?;
        if !self.is_in_e(&p0)? {
            return Err(QaError::ConsistencyViolation {
                point: p0.residues().to_vec(),
                detail: "predecessor of an E-point left E".into(),
            });
        }
        Ok(p0)
    }

    fn kernel_point(
        &self,
        matrix: &PolyMatrix,
        at: &ProjPoint,
        slot: u32,
    ) -> Result<ProjPoint, QaError> {
        if !self.is_in_e(at)? {
            return Err(QaError::NotInE(at.clone()));
        }
        let evaluated = matrix.eval(&slot_assignment(at, slot))?;
        let basis = evaluated.kernel_basis();
        if basis.len() != 1 {
            return Err(QaError::DegenerateKernel { dim: basis.len() });
        }
        Ok(ProjPoint::new(basis.into_iter().next().unwrap())?)
    }

    /// All points of E(F_p) in ascending lex order of normalized coordinates.
    pub fn enumerate_e(&self) -> Result<Vec<ProjPoint>, QaError> {
        let mut out = Vec::new();
        for coords in projective_points(self.params.n, self.p) {
            let pt = ProjPoint::from_residues(self.p, coords)?;
            if self.is_in_e(&pt)? {
                out.push(pt);
            }
        }
        Ok(out)
    }

    /// The graph {(p0, sigma(p0))} as scheme points of length 2, sorted.
    pub fn graph_points(&self) -> Result<Vec<SchemePoint>, QaError> {
        self.enumerate_e()?
            .into_iter()
            .map(|p0| {
                let p1 = self.sigma_at(&p0)?;
                Ok(SchemePoint::new(vec![p0, p1]))
            })
            .collect()
    }

    /// The orbit tuples {(p0, sigma(p0), ..., sigma^{m-1}(p0))}, sorted.
    pub fn orbit_points(&self, m: usize) -> Result<Vec<SchemePoint>, QaError> {
        assert!(m >= 1, "orbit length must be at least 1");
        self.enumerate_e()?
            .into_iter()
            .map(|p0| {
                let mut tuple = vec![p0];
                for _ in 1..m {
                    let next = self.sigma_at(tuple.last().unwrap())?;
                    tuple.push(next);
                }
                Ok(SchemePoint::new(tuple))
            })
            .collect()
    }
}

/// The successor map as a permutation of E(F_p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub p: u32,
    pub n: usize,
    pub e_size: usize,
    pub is_zero_ideal: bool,
    pub is_bijection: bool,
    /// Sorted multiset of cycle lengths; empty when not a bijection.
    pub cycle_type: Vec<usize>,
}

impl SigmaReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("successor map on E over F_{} (n = {})\n", self.p, self.n));
        out.push_str(&format!(
            "  E: {}\n",
            if self.is_zero_ideal {
                format!("all of P^{} (zero ideal)", self.n - 1)
            } else {
                format!("proper subvariety of P^{}", self.n - 1)
            }
        ));
        out.push_str(&format!("  |E(F_{})| = {}\n", self.p, self.e_size));
        out.push_str(&format!("  sigma is a bijection of E: {}\n", self.is_bijection));
        out.push_str(&format!("  cycle type: {}\n", render_cycle_type(&self.cycle_type)));
        out
    }
}

/// Compress a sorted multiset of cycle lengths as "len^count" factors.
fn render_cycle_type(sorted: &[usize]) -> String {
    if sorted.is_empty() {
        return "-".into();
    }
    let mut parts = Vec::new();
    let mut k = 0;
    while k < sorted.len() {
        let run = sorted[k..].iter().take_while(|&&x| x == sorted[k]).count();
        parts.push(if run == 1 {
            format!("{}", sorted[k])
        } else {
            format!("{}^{}", sorted[k], run)
        });
        k += run;
    }
    parts.join(" ")
}

impl fmt::Display for SigmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Enumerate E(F_p), apply sigma everywhere, and report the permutation
/// structure. Successor images are computed concurrently per point.
pub fn sigma_permutation_report(
    params: &QuantumAffineParams,
    p: u32,
) -> Result<SigmaReport, QaError> {
    let maps = SuccessorMaps::new(params, p)?;
    let e = maps.enumerate_e()?;
    let images: Vec<ProjPoint> =
        e.par_iter().map(|p0| maps.sigma_at(p0)).collect::<Result<_, _>>()?;
    let index: BTreeMap<&ProjPoint, usize> = e.iter().enumerate().map(|(k, pt)| (pt, k)).collect();
    let perm: Vec<usize> = images
        .iter()
        .map(|im| *index.get(im).expect("sigma image certified to lie in E"))
        .collect();

    let mut hit = vec![false; perm.len()];
    let is_bijection = perm.iter().all(|&t| !std::mem::replace(&mut hit[t], true));

    let mut cycle_type = Vec::new();
    if is_bijection {
        let mut seen = vec![false; perm.len()];
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                len += 1;
                at = perm[at];
            }
            cycle_type.push(len);
        }
        cycle_type.sort_unstable();
    }

    Ok(SigmaReport {
        p,
        n: params.n(),
        e_size: e.len(),
        is_zero_ideal: maps.variety().is_zero_ideal(),
        is_bijection,
        cycle_type,
    })
}
