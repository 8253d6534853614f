//! Truncated point schemes of a finitely presented graded algebra.
//!
//! Each homogeneous relation is multilinearized into a polynomial over
//! slotted variables; the degree-`m` truncation X_m lives inside the `m`-fold
//! product of projective spaces and is cut out by all slot-shifts of those
//! polynomials. Over a finite prime field the truncations are enumerated
//! exhaustively, the projections dropping the last point are tested for
//! bijectivity, and a stabilization bound is searched empirically.

use crate::cpoly::{CPoly, Monomial, SlotVar};
use crate::ncpoly::{NcPoly, Presentation};
use crate::scalar::{FieldSpec, Scalar, ScalarError};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Errors from scheme construction and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("Inhomogeneous: multilinearization needs a homogeneous polynomial of degree >= 1")]
    Inhomogeneous,
    #[error("TruncationTooShort: relation of degree {degree} does not fit in {m} slots")]
    TruncationTooShort { degree: usize, m: u32 },
    #[error("LengthTooShort: cannot project a tuple of length {0}")]
    LengthTooShort(usize),
    #[error("ZeroPoint: a projective point needs a nonzero coordinate")]
    ZeroPoint,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

// ---- Projective points ----

/// A point of `P^{n-1}(F_p)` stored as the unique representative whose first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    p: u32,
    coords: Vec<u64>,
}

impl ProjPoint {
    /// Normalize a coordinate vector of prime-field scalars.
    pub fn new(coords: Vec<Scalar>) -> Result<ProjPoint, SchemeError> {
        let p = match coords.first().map(|c| c.field()) {
            Some(FieldSpec::PrimeField(p)) => p,
            _ => return Err(SchemeError::ZeroPoint),
        };
        let mut residues = Vec::with_capacity(coords.len());
        for c in &coords {
            residues.push(c.to_residue(p)?);
        }
        ProjPoint::from_residues(p, residues)
    }

    /// Normalize a residue vector (values are reduced mod `p` first).
    pub fn from_residues(p: u32, mut coords: Vec<u64>) -> Result<ProjPoint, SchemeError> {
        let pm = p as u64;
        for c in coords.iter_mut() {
            *c %= pm;
        }
        let lead = coords.iter().position(|&c| c != 0).ok_or(SchemeError::ZeroPoint)?;
        if coords[lead] != 1 {
            let inv = Scalar::from_integer(FieldSpec::PrimeField(p), coords[lead] as i64)
                .inv()
                .expect("nonzero residue")
                .residue()
                .expect("residue");
            for c in coords.iter_mut() {
                *c = *c * inv % pm;
            }
        }
        Ok(ProjPoint { p, coords })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Normalized residues in `[0, p)`.
    pub fn residues(&self) -> &[u64] {
        &self.coords
    }

    /// Coordinates as scalars of `F_p`.
    pub fn coords(&self) -> Vec<Scalar> {
        let f = FieldSpec::PrimeField(self.p);
        self.coords.iter().map(|&c| Scalar::from_integer(f, c as i64)).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body =
            self.coords.iter().map(u64::to_string).collect::<Vec<_>>().join(" : ");
        write!(f, "({body})")
    }
}

/// All points of `P^{n-1}(F_p)` as normalized residue vectors, in ascending
/// lexicographic order of the full coordinate tuple.
pub fn projective_points(n: usize, p: u32) -> Vec<Vec<u64>> {
    let pm = p as u64;
    let mut out = Vec::new();
    // Ascending lex means leading zeros first: the first nonzero coordinate
    // moves from the last position to the first.
    for lead in (0..n).rev() {
        let free = n - lead - 1;
        let mut tail = vec![0u64; free];
        loop {
            let mut coords = vec![0u64; lead];
            coords.push(1);
            coords.extend_from_slice(&tail);
            out.push(coords);
            // Odometer on the tail, leftmost digit most significant.
            let mut i = free;
            loop {
                if i == 0 {
                    break;
                }
                tail[i - 1] += 1;
                if tail[i - 1] < pm {
                    break;
                }
                tail[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
    out
}

/// A tuple `(p_0, ..., p_{m-1})` of projective points — an element of a
/// truncated scheme.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemePoint {
    pts: Vec<ProjPoint>,
}

impl SchemePoint {
    pub fn new(pts: Vec<ProjPoint>) -> SchemePoint {
        assert!(!pts.is_empty(), "a scheme point has at least one component");
        SchemePoint { pts }
    }

    /// Number of component points (the truncation length m, always >= 1).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.pts
    }

    /// Drop the last component: the canonical projection X_{m+1} -> X_m.
    pub fn project(&self) -> Result<SchemePoint, SchemeError> {
        if self.pts.len() < 2 {
            return Err(SchemeError::LengthTooShort(self.pts.len()));
        }
        Ok(SchemePoint { pts: self.pts[..self.pts.len() - 1].to_vec() })
    }

    /// Residue rows, one per component point (JSON-friendly form).
    pub fn residue_rows(&self) -> Vec<Vec<u64>> {
        self.pts.iter().map(|p| p.residues().to_vec()).collect()
    }
}

impl fmt::Display for SchemePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.pts.iter().map(ProjPoint::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "[{body}]")
    }
}

// ---- Multilinearization and truncated systems ----

/// Replace each degree-`d` word by a product of slotted variables: the k-th
/// factor from the left (1-based) becomes that variable in slot `k-1`, so a
/// word `x_a x_b` turns into `y_{a,0} * y_{b,1}`. Coefficients are kept.
pub fn multilinearize(f: &NcPoly) -> Result<CPoly, SchemeError> {
    if !f.is_homogeneous() || f.degree().unwrap_or(0) < 1 {
        return Err(SchemeError::Inhomogeneous);
    }
    let terms = f.terms().map(|(w, c)| {
        let mono = Monomial::new(
            w.factors().iter().enumerate().map(|(k, &v)| (SlotVar::new(v, k as u32), 1)),
        );
        (mono, c.clone())
    });
    Ok(CPoly::from_terms(f.field(), terms)?)
}

/// The polynomial system cutting X_m out of the m-fold product of projective
/// spaces: every relation, multilinearized, at every slot shift that fits.
#[derive(Debug, Clone)]
pub struct TruncatedSystem {
    m: u32,
    n: usize,
    equations: Vec<CPoly>,
    /// (relation index, shift) for each equation, in the same order.
    provenance: Vec<(usize, u32)>,
    source: Presentation,
}

impl TruncatedSystem {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[CPoly] {
        &self.equations
    }

    pub fn provenance(&self) -> &[(usize, u32)] {
        &self.provenance
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    /// Human-readable equation list, e.g. `g1[shift 0] = y0*x1 - 2*x0*y1`.
    pub fn render(&self) -> String {
        let names = self.source.var_names();
        self.equations
            .iter()
            .zip(&self.provenance)
            .map(|(eq, (l, i))| format!("g{}[shift {}] = {}", l + 1, i, eq.render(names)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Build the system for X_m. A relation of degree `d` contributes shifts
/// `0..=m-d`; with `allow_partial` set, relations too long for `m` slots are
/// simply absent (that is the literal definition of X_m), otherwise they are
/// an error to guard against accidentally underconstrained systems.
pub fn build_truncated_system(
    pres: &Presentation,
    m: u32,
    allow_partial: bool,
) -> Result<TruncatedSystem, SchemeError> {
    assert!(m >= 1, "truncation length must be at least 1");
    let mut equations = Vec::new();
    let mut provenance = Vec::new();
    for (l, rel) in pres.relations().iter().enumerate() {
        let d = rel.degree().expect("relations are nonzero") as u32;
        if d > m {
            if allow_partial {
                continue;
            }
            return Err(SchemeError::TruncationTooShort { degree: d as usize, m });
        }
        let g = multilinearize(rel)?;
        for i in 0..=(m - d) {
            equations.push(g.shift_slots(i));
            provenance.push((l, i));
        }
    }
    Ok(TruncatedSystem { m, n: pres.n(), equations, provenance, source: pres.clone() })
}

// ---- Fast residue evaluation ----

/// One compiled term: coefficient and [(slot, 0-based variable, exponent)].
type CompiledTerm = (u64, Vec<(usize, usize, u32)>);

/// An equation compiled to flat residue arithmetic mod `p`.
struct CompiledEq {
    terms: Vec<CompiledTerm>,
    top_slot: usize,
}

fn compile_equation(eq: &CPoly, p: u32) -> Result<CompiledEq, ScalarError> {
    let mut terms = Vec::new();
    let mut top_slot = 0usize;
    for (mono, coeff) in eq.terms() {
        let c = coeff.to_residue(p)?;
        if c == 0 {
            continue; // the coefficient vanishes mod p
        }
        let mut vars = Vec::new();
        for (sv, e) in mono.pairs() {
            top_slot = top_slot.max(sv.u as usize);
            vars.push((sv.u as usize, (sv.v - 1) as usize, *e));
        }
        terms.push((c, vars));
    }
    Ok(CompiledEq { terms, top_slot })
}

impl CompiledEq {
    /// Evaluate on a tuple of points; `coords(slot)` resolves a slot to the
    /// residue vector of the point occupying it.
    fn vanishes<'a>(&self, p: u64, coords: impl Fn(usize) -> &'a [u64]) -> bool {
        let mut acc: u64 = 0;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(slot, var, exp) in vars {
                let val = coords(slot)[var];
                for _ in 0..exp {
                    t = t * val % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc == 0
    }
}

/// Enumerate X_m(F_p): all tuples over the normalized projective points
/// where every equation vanishes, in ascending lexicographic order.
pub fn enumerate_points(sys: &TruncatedSystem, p: u32) -> Result<Vec<SchemePoint>, SchemeError> {
    let chain = enumerate_chain(sys, p)?;
    let candidates = &chain.candidates;
    let tuples = chain.levels.last().expect("m >= 1");
    Ok(tuples.iter().map(|t| tuple_to_point(t, candidates, p)).collect())
}

fn tuple_to_point(tuple: &[usize], candidates: &[Vec<u64>], p: u32) -> SchemePoint {
    SchemePoint::new(
        tuple
            .iter()
            .map(|&i| ProjPoint { p, coords: candidates[i].clone() })
            .collect(),
    )
}

/// The enumerated truncations X_1, ..., X_m as index tuples into the shared
/// candidate list. Staged construction: X_{k+1} extends each X_k tuple by
/// every candidate satisfying the equations whose top slot is `k` (equations
/// with lower top slots are already satisfied by the prefix).
pub(crate) struct Chain {
    pub candidates: Vec<Vec<u64>>,
    pub levels: Vec<Vec<Vec<usize>>>,
}

pub(crate) fn enumerate_chain(sys: &TruncatedSystem, p: u32) -> Result<Chain, SchemeError> {
    if let FieldSpec::PrimeField(q) = sys.source.field() {
        if q != p {
            return Err(SchemeError::Scalar(ScalarError::MixedFields(
                sys.source.field(),
                FieldSpec::prime_field(p as u64)?,
            )));
        }
    }
    let candidates = projective_points(sys.n, p);
    let mut by_top: Vec<Vec<CompiledEq>> = (0..sys.m).map(|_| Vec::new()).collect();
    for eq in &sys.equations {
        let c = compile_equation(eq, p)?;
        if !c.terms.is_empty() {
            by_top[c.top_slot].push(c);
        }
    }

    let pm = p as u64;
    // Level 1: every projective point, filtered by slot-0 equations (rare).
    let first: Vec<Vec<usize>> = (0..candidates.len())
        .filter(|&i| {
            by_top[0].iter().all(|eq| eq.vanishes(pm, |_| candidates[i].as_slice()))
        })
        .map(|i| vec![i])
        .collect();
    let mut levels = vec![first];

    for (k, eqs) in by_top.iter().enumerate().take(sys.m as usize).skip(1) {
        let prev = levels.last().unwrap();
        let extend = |tuple: &Vec<usize>| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            for (ci, cand) in candidates.iter().enumerate() {
                let ok = eqs.iter().all(|eq| {
                    eq.vanishes(pm, |slot| {
                        if slot < k {
                            candidates[tuple[slot]].as_slice()
                        } else {
                            cand.as_slice()
                        }
                    })
                });
                if ok {
                    let mut t = tuple.clone();
                    t.push(ci);
                    out.push(t);
                }
            }
            out
        };
        // Parallel over prefixes; per-prefix extension order is candidate
        // order, so the flattened result stays in ascending lex order.
        let next: Vec<Vec<usize>> = if prev.len() >= 64 {
            prev.par_iter().map(extend).collect::<Vec<_>>().into_iter().flatten().collect()
        } else {
            prev.iter().flat_map(extend).collect()
        };
        levels.push(next);
    }
    Ok(Chain { candidates, levels })
}

// ---- Projection reports ----

/// Result of testing `phi_m : X_{m+1} -> X_m` (drop the last point) for
/// injectivity and surjectivity by exhaustive enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct PhiReport {
    pub m: u32,
    pub p: u32,
    pub x_m_count: usize,
    pub x_m_plus_1_count: usize,
    pub injective: bool,
    pub surjective: bool,
    /// A base point with at least two preimages, if not injective.
    pub fiber_witness: Option<FiberWitness>,
    /// An X_m point with empty fiber, if not surjective.
    pub unhit_witness: Option<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberWitness {
    pub base: Vec<Vec<u64>>,
    pub fiber: Vec<Vec<Vec<u64>>>,
}

impl PhiReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "phi_{}: X_{} -> X_{} over F_{}: |X_{}| = {}, |X_{}| = {}, injective: {}, surjective: {}",
            self.m,
            self.m + 1,
            self.m,
            self.p,
            self.m + 1,
            self.x_m_plus_1_count,
            self.m,
            self.x_m_count,
            self.injective,
            self.surjective,
        );
        if let Some(w) = &self.fiber_witness {
            s.push_str(&format!(
                "\n  fiber witness: base {:?} has {} preimages",
                w.base,
                w.fiber.len()
            ));
        }
        if let Some(w) = &self.unhit_witness {
            s.push_str(&format!("\n  unhit witness: {w:?} has no preimage"));
        }
        s
    }
}

fn phi_report_from_levels(
    m: u32,
    p: u32,
    candidates: &[Vec<u64>],
    x_m: &[Vec<usize>],
    x_m1: &[Vec<usize>],
) -> PhiReport {
    // Both lists are lex-sorted, so equal prefixes are adjacent and the
    // parents appear in the same order as X_m.
    let mut injective = true;
    let mut fiber_witness = None;
    let mut i = 0;
    while i < x_m1.len() {
        let mut j = i + 1;
        while j < x_m1.len() && x_m1[j][..m as usize] == x_m1[i][..m as usize] {
            j += 1;
        }
        if j - i > 1 && injective {
            injective = false;
            fiber_witness = Some(FiberWitness {
                base: tuple_to_point(&x_m1[i][..m as usize], candidates, p).residue_rows(),
                fiber: (i..j)
                    .map(|t| tuple_to_point(&x_m1[t], candidates, p).residue_rows())
                    .collect(),
            });
        }
        i = j;
    }

    let mut surjective = true;
    let mut unhit_witness = None;
    let mut walk = x_m1.iter().map(|t| &t[..m as usize]).peekable();
    for base in x_m {
        while let Some(pref) = walk.peek() {
            if *pref < base.as_slice() {
                walk.next();
            } else {
                break;
            }
        }
        let hit = walk.peek().is_some_and(|pref| *pref == base.as_slice());
        if !hit {
            surjective = false;
            unhit_witness = Some(tuple_to_point(base, candidates, p).residue_rows());
            break;
        }
    }

    PhiReport {
        m,
        p,
        x_m_count: x_m.len(),
        x_m_plus_1_count: x_m1.len(),
        injective,
        surjective,
        fiber_witness,
        unhit_witness,
    }
}

/// Enumerate X_m and X_{m+1} and test the projection between them.
pub fn check_phi_bijective(
    pres: &Presentation,
    m: u32,
    p: u32,
) -> Result<PhiReport, SchemeError> {
    let sys = build_truncated_system(pres, m + 1, true)?;
    let chain = enumerate_chain(&sys, p)?;
    Ok(phi_report_from_levels(
        m,
        p,
        &chain.candidates,
        &chain.levels[m as usize - 1],
        &chain.levels[m as usize],
    ))
}

/// Empirical stabilization search.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizationReport {
    pub p: u32,
    pub m_max: u32,
    /// Lower end of the m0 search window (the largest relation degree).
    pub search_from: u32,
    /// `counts[k]` is |X_{k+1}|, for truncations 1 ..= m_max+1.
    pub counts: Vec<usize>,
    /// phi_m test results for m = 1 ..= m_max.
    pub phi: Vec<PhiReport>,
    /// Smallest m0 in [search_from, m_max] with phi_m bijective for every
    /// tested m >= m0; None when no such m0 exists in the window.
    pub m0_candidate: Option<u32>,
}

impl StabilizationReport {
    pub fn render(&self) -> String {
        let mut s = format!(
            "stabilization search over F_{}, m0 window [{}, {}] (empirical: finite range, fixed prime)",
            self.p, self.search_from, self.m_max
        );
        for (k, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("\n  |X_{}| = {}", k + 1, c));
        }
        for r in &self.phi {
            s.push_str(&format!(
                "\n  phi_{}: injective: {}, surjective: {}",
                r.m, r.injective, r.surjective
            ));
        }
        match self.m0_candidate {
            Some(m0) => s.push_str(&format!(
                "\n  m0 = {m0} (phi_m bijective for all tested m in [{m0}, {}])",
                self.m_max
            )),
            None => s.push_str("\n  m0 = NotFound in the tested window"),
        }
        s
    }
}

/// Enumerate X_1 ..= X_{m_max+1}, test every projection, and look for the
/// smallest m0 (at least the largest relation degree) from which all tested
/// projections are bijective. The verdict is evidence over one finite field,
/// not a proof.
pub fn find_stabilization(
    pres: &Presentation,
    p: u32,
    m_max: u32,
) -> Result<StabilizationReport, SchemeError> {
    let search_from = pres.max_relation_degree().unwrap_or(1) as u32;
    if m_max < search_from {
        return Err(SchemeError::TruncationTooShort { degree: search_from as usize, m: m_max });
    }
    let sys = build_truncated_system(pres, m_max + 1, true)?;
    let chain = enumerate_chain(&sys, p)?;
    let phi: Vec<PhiReport> = (1..=m_max)
        .map(|m| {
            phi_report_from_levels(
                m,
                p,
                &chain.candidates,
                &chain.levels[m as usize - 1],
                &chain.levels[m as usize],
            )
        })
        .collect();
    let m0_candidate = (search_from..=m_max).find(|&m0| {
        phi.iter().filter(|r| r.m >= m0).all(PhiReport::bijective)
    });
    Ok(StabilizationReport {
        p,
        m_max,
        search_from,
        counts: chain.levels.iter().map(Vec::len).collect(),
        phi,
        m0_candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_presentation;
    use std::collections::BTreeMap;

    fn quantum_plane_f5() -> Presentation {
        parse_presentation("field F 5\nvars x y\nparam q = 2\nrel y*x - q*x*y").unwrap()
    }

    fn jordan_plane_f5() -> Presentation {
        parse_presentation("field F 5\nvars x y\nrel y*x - x*y - x*x").unwrap()
    }

    fn free_algebra_f3() -> Presentation {
        parse_presentation("field F 3\nvars x y").unwrap()
    }

    /// 3-variable quantum affine space over Q with relations
    /// y*x = q12*x*y, z*x = q13*x*z, z*y = q23*y*z.
    fn quantum_affine(q12: i64, q13: i64, q23: i64) -> Presentation {
        let text = format!(
            "field Q\nvars x y z\nparam q12={q12} q13={q13} q23={q23}\n\
             rel y*x-q12*x*y\nrel z*x-q13*x*z\nrel z*y-q23*y*z"
        );
        parse_presentation(&text).unwrap()
    }

    /// q12*q23 = q13: the determinant of the relation matrix vanishes.
    fn qa_case1() -> Presentation {
        quantum_affine(2, 6, 3)
    }

    /// q12*q23 - q13 = 1: the scheme degenerates to the coordinate-plane
    /// locus x0*y0*z0 = 0.
    fn qa_case2() -> Presentation {
        quantum_affine(2, 5, 3)
    }

    #[test]
    fn projective_point_counts_and_order() {
        let pts = projective_points(2, 3);
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(projective_points(3, 7).len(), 57);
        assert_eq!(projective_points(2, 5).len(), 6);
        // Strictly ascending lex order, hence no duplicates.
        let pts = projective_points(3, 5);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts.len(), 31);
    }

    #[test]
    fn normalization_makes_first_nonzero_one() {
        let p = ProjPoint::from_residues(7, vec![0, 3, 5]).unwrap();
        assert_eq!(p.residues(), &[0, 1, 4]); // scale by 3^{-1} = 5: (0, 15, 25) = (0,1,4)
        assert!(ProjPoint::from_residues(7, vec![0, 0, 0]).is_err());
        assert_eq!(p.to_string(), "(0 : 1 : 4)");
    }

    #[test]
    fn multilinearization_follows_the_slot_convention() {
        let pres = quantum_plane_f5();
        let g = multilinearize(&pres.relations()[0]).unwrap();
        // y*x - 2*x*y becomes y0*x1 - 2*x0*y1.
        let names: Vec<String> = pres.var_names().to_vec();
        assert_eq!(g.render(&names), "y0*x1 + 3*x0*y1"); // -2 = 3 in F_5

        let jordan = jordan_plane_f5();
        let g = multilinearize(&jordan.relations()[0]).unwrap();
        assert_eq!(g.render(&names), "y0*x1 + 4*x0*y1 + 4*x0*x1"); // -1 = 4 in F_5

        // Over Q the signs are literal.
        let qa = qa_case1();
        let names: Vec<String> = qa.var_names().to_vec();
        let g1 = multilinearize(&qa.relations()[0]).unwrap();
        assert_eq!(g1.render(&names), "y0*x1 - 2*x0*y1");

        // Degree-1 polynomial maps to slot 0.
        let x = NcPoly::generator(FieldSpec::Rationals, 2, 1);
        let lin = multilinearize(&x).unwrap();
        assert_eq!(lin.render(&["x".into(), "y".into()]), "x0");

        // Inhomogeneous or zero input is rejected.
        let bad = x.add(&x.mul(&x).unwrap()).unwrap();
        assert!(matches!(multilinearize(&bad), Err(SchemeError::Inhomogeneous)));
        let zero = NcPoly::zero(FieldSpec::Rationals, 2);
        assert!(matches!(multilinearize(&zero), Err(SchemeError::Inhomogeneous)));
    }

    #[test]
    fn truncated_system_shift_counts() {
        let qa = qa_case1();
        let s2 = build_truncated_system(&qa, 2, false).unwrap();
        assert_eq!(s2.equations().len(), 3);
        let s3 = build_truncated_system(&qa, 3, false).unwrap();
        assert_eq!(s3.equations().len(), 6);
        assert_eq!(
            s3.provenance(),
            &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
        );
        // Free algebra: no equations at any m.
        let free = free_algebra_f3();
        assert!(build_truncated_system(&free, 4, false).unwrap().equations().is_empty());
        // m too short without opting into partial systems.
        let e = build_truncated_system(&qa, 1, false).unwrap_err();
        assert!(matches!(e, SchemeError::TruncationTooShort { degree: 2, m: 1 }));
        assert!(build_truncated_system(&qa, 1, true).unwrap().equations().is_empty());
    }

    #[test]
    fn shifted_equation_evaluates_like_unshifted_on_shifted_points() {
        let qa = qa_case2();
        let sys = build_truncated_system(&qa, 3, false).unwrap();
        let g = &sys.equations()[0]; // g1 at shift 0
        let g_shift = &sys.equations()[1]; // g1 at shift 1
        let vals: Vec<i64> = vec![1, 2, 3, 4, 5, 6, 1, 3, 5];
        let f = FieldSpec::Rationals;
        let mut a0 = BTreeMap::new();
        let mut a1 = BTreeMap::new();
        for u in 0..3u32 {
            for v in 1..=3u32 {
                let val = Scalar::from_integer(f, vals[(u * 3 + v - 1) as usize]);
                a1.insert(SlotVar::new(v, u), val.clone());
                if u >= 1 {
                    a0.insert(SlotVar::new(v, u - 1), val);
                }
            }
        }
        assert_eq!(g_shift.eval(&a1).unwrap(), g.eval(&a0).unwrap());
    }

    /// Brute-force oracle: scan the full m-fold product and keep tuples where
    /// every equation vanishes, using the exact (slow) evaluator.
    fn enumerate_by_full_scan(sys: &TruncatedSystem, p: u32) -> Vec<SchemePoint> {
        let candidates = projective_points(sys.n(), p);
        let f = FieldSpec::PrimeField(p);
        let reduced: Vec<CPoly> = sys
            .equations()
            .iter()
            .map(|eq| {
                CPoly::from_terms(
                    f,
                    eq.terms().map(|(m, c)| (m.clone(), c.reduce_to_prime_field(p).unwrap())),
                )
                .unwrap()
            })
            .collect();
        let m = sys.m() as usize;
        let mut idx = vec![0usize; m];
        let mut out = Vec::new();
        'outer: loop {
            let mut assign = BTreeMap::new();
            for (u, &i) in idx.iter().enumerate() {
                for (v0, &c) in candidates[i].iter().enumerate() {
                    assign.insert(
                        SlotVar::new(v0 as u32 + 1, u as u32),
                        Scalar::from_integer(f, c as i64),
                    );
                }
            }
            if reduced.iter().all(|eq| eq.eval(&assign).unwrap().is_zero()) {
                out.push(tuple_to_point(&idx, &candidates, p));
            }
            // Lex odometer, leftmost most significant.
            let mut pos = m;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                idx[pos - 1] += 1;
                if idx[pos - 1] < candidates.len() {
                    break;
                }
                idx[pos - 1] = 0;
                pos -= 1;
            }
        }
        out
    }

    #[test]
    fn staged_enumeration_matches_full_scan() {
        for (pres, p, m) in [
            (quantum_plane_f5(), 5u32, 2u32),
            (quantum_plane_f5(), 5, 3),
            (jordan_plane_f5(), 5, 3),
            (qa_case2(), 7, 2),
            (qa_case1(), 5, 2),
            (free_algebra_f3(), 3, 2),
        ] {
            let sys = build_truncated_system(&pres, m, false).unwrap();
            let staged = enumerate_points(&sys, p).unwrap();
            let scanned = enumerate_by_full_scan(&sys, p);
            assert_eq!(staged, scanned, "mismatch for m={m}, p={p}");
            // Ascending lex order and no duplicates.
            assert!(staged.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn quantum_plane_counts() {
        let pres = quantum_plane_f5();
        let sys = build_truncated_system(&pres, 2, false).unwrap();
        let pts = enumerate_points(&sys, 5).unwrap();
        assert_eq!(pts.len(), 6); // one successor per point of P^1(F_5)
    }

    #[test]
    fn free_algebra_is_the_full_product() {
        let pres = free_algebra_f3();
        let sys = build_truncated_system(&pres, 2, false).unwrap();
        let pts = enumerate_points(&sys, 3).unwrap();
        assert_eq!(pts.len(), 16); // (3+1)^2
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let pres = quantum_plane_f5();
        let sys = build_truncated_system(&pres, 2, false).unwrap();
        let e = enumerate_points(&sys, 7).unwrap_err();
        assert!(matches!(e, SchemeError::Scalar(ScalarError::MixedFields(..))));
    }

    #[test]
    fn rational_coefficients_reduce_mod_p() {
        // Coefficient 1/2 reduces to 3 mod 5.
        let pres =
            parse_presentation("field Q\nvars x y\nparam q = 1/2\nrel y*x - q*x*y").unwrap();
        let sys = build_truncated_system(&pres, 2, false).unwrap();
        let pts = enumerate_points(&sys, 5).unwrap();
        assert_eq!(pts.len(), 6);
        // But reduction mod 2 hits the denominator.
        let e = enumerate_points(&sys, 2).unwrap_err();
        assert!(matches!(e, SchemeError::Scalar(ScalarError::BadReduction { .. })));
    }

    #[test]
    fn projection_drops_the_last_point() {
        let a = ProjPoint::from_residues(5, vec![1, 2]).unwrap();
        let b = ProjPoint::from_residues(5, vec![0, 1]).unwrap();
        let c = ProjPoint::from_residues(5, vec![1, 0]).unwrap();
        let t = SchemePoint::new(vec![a.clone(), b.clone(), c]);
        let pr = t.project().unwrap();
        assert_eq!(pr.points(), &[a.clone(), b]);
        let single = SchemePoint::new(vec![a]);
        assert!(matches!(single.project(), Err(SchemeError::LengthTooShort(1))));
    }

    #[test]
    fn nesting_projection_lands_in_smaller_truncation() {
        let pres = qa_case1();
        let s2 = build_truncated_system(&pres, 2, false).unwrap();
        let s3 = build_truncated_system(&pres, 3, false).unwrap();
        let x2 = enumerate_points(&s2, 7).unwrap();
        let x3 = enumerate_points(&s3, 7).unwrap();
        for t in &x3 {
            let pr = t.project().unwrap();
            assert!(x2.binary_search(&pr).is_ok());
        }
    }

    #[test]
    fn phi_bijectivity_reports() {
        // Quantum plane: phi_2 bijective with 6 points on both sides.
        let r = check_phi_bijective(&quantum_plane_f5(), 2, 5).unwrap();
        assert!(r.bijective());
        assert_eq!((r.x_m_count, r.x_m_plus_1_count), (6, 6));

        // Jordan plane over F_5: also 6 = |P^1(F_5)| on both sides.
        let r = check_phi_bijective(&jordan_plane_f5(), 2, 5).unwrap();
        assert!(r.bijective());
        assert_eq!((r.x_m_count, r.x_m_plus_1_count), (6, 6));

        // Free algebra: every fiber is a full P^1, so phi_1 is far from
        // injective but is surjective.
        let r = check_phi_bijective(&free_algebra_f3(), 1, 3).unwrap();
        assert!(!r.injective);
        assert!(r.surjective);
        assert_eq!((r.x_m_count, r.x_m_plus_1_count), (4, 16));
        let w = r.fiber_witness.unwrap();
        assert_eq!(w.fiber.len(), 4);
    }

    #[test]
    fn stabilization_reports() {
        // Quantum affine 3-space, both parameter cases, over F_7.
        for (label, pres) in [("case1", qa_case1()), ("case2", qa_case2())] {
            let r = find_stabilization(&pres, 7, 4).unwrap();
            assert_eq!(r.m0_candidate, Some(2), "{label}");
            assert_eq!(r.counts.len(), 5);
            assert!(r.counts[1] == r.counts[2] && r.counts[2] == r.counts[3]);
        }

        // Jordan plane over F_5.
        let r = find_stabilization(&jordan_plane_f5(), 5, 4).unwrap();
        assert_eq!(r.m0_candidate, Some(2));

        // Free algebra: no stabilization, counts are (p+1)^m.
        let r = find_stabilization(&free_algebra_f3(), 3, 3).unwrap();
        assert_eq!(r.m0_candidate, None);
        assert_eq!(r.counts, vec![4, 16, 64, 256]);

        // Commutative polynomial ring in two variables.
        let comm = parse_presentation("field F 5\nvars x y\nrel y*x - x*y").unwrap();
        let r = find_stabilization(&comm, 5, 4).unwrap();
        assert_eq!(r.m0_candidate, Some(2));
        // phi_1 happens to be bijective here as well; the search window
        // starts at the relation degree, so m0 is still 2.
        assert!(r.phi[0].bijective());
    }

    #[test]
    fn case_counts_over_f7() {
        // Degenerate case: |X_2| = |{x0*y0*z0 = 0} in P^2(F_7)| = 21.
        let sys = build_truncated_system(&qa_case2(), 2, false).unwrap();
        assert_eq!(enumerate_points(&sys, 7).unwrap().len(), 21);
        // Vanishing-determinant case: |X_2| = |P^2(F_7)| = 57.
        let sys = build_truncated_system(&qa_case1(), 2, false).unwrap();
        assert_eq!(enumerate_points(&sys, 7).unwrap().len(), 57);
    }
}
