//! JSON documents: groups, complexes over the group algebra, Koszul cycles.
//!
//! An algebra element is a list of `[coefficient, monomial]` pairs. A monomial
//! is either an exponent list `[x_1, …, x_a]` standing for `∏ λ_i^{x_i}` over
//! the Jennings basis, or a bare element index `g`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgcomplex::{AlgMatrix, Direction, FreeComplex};
use crate::koszul::{subsets, KoszulCycle};
use crate::pgroup::{exponents_of_code, AlgebraElement, GroupAlgebra, GroupSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Monomial {
    Exponents(Vec<u32>),
    Element(usize),
}

pub type ElementSpec = Vec<(i64, Monomial)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Cochain,
    Chain,
}

/// `differentials[i]` leaves `min_degree + i` (cochain) or enters
/// `min_degree + i` from `min_degree + i + 1` (chain); rows index the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub kind: Kind,
    #[serde(default)]
    pub min_degree: i64,
    pub ranks: Vec<usize>,
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<ElementSpec>>>,
}

/// `mu` maps 1-based comma-separated subsets (`""` for ∅) to coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpec {
    pub r: usize,
    #[serde(default)]
    pub mu: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub p: u32,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<CycleSpec>,
}

fn schema(msg: impl std::fmt::Display) -> Error {
    Error::Invalid(msg.to_string())
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(schema)
}

impl Document {
    pub fn algebra(&self) -> Result<Arc<GroupAlgebra>> {
        let alg = GroupAlgebra::from_spec(&self.group)?;
        if alg.p() != self.p {
            return Err(schema(format!("p = {} but the group is a {}-group", self.p, alg.p())));
        }
        Ok(alg)
    }

    /// The complex, validated (`d∘d = 0` is checked).
    pub fn complex(&self, alg: &Arc<GroupAlgebra>) -> Result<FreeComplex> {
        let spec = self.complex.as_ref().ok_or_else(|| schema("the document has no complex"))?;
        complex_from_spec(alg, spec)
    }

    pub fn cycle(&self, a: usize) -> Result<KoszulCycle> {
        let spec = self.cycle.as_ref().ok_or_else(|| schema("the document has no cycle"))?;
        cycle_from_spec(self.p, a, spec)
    }
}

pub fn element_from_spec(alg: &GroupAlgebra, spec: &ElementSpec) -> Result<AlgebraElement> {
    let f = alg.field();
    let a = alg.jennings().rank();
    let mut x = alg.zero();
    for (c, m) in spec {
        let term = match m {
            Monomial::Exponents(e) => {
                if e.len() != a {
                    return Err(schema(format!("exponent list {e:?} has length {}, expected {a}", e.len())));
                }
                if e.iter().any(|&v| v >= alg.p()) {
                    return Err(schema(format!("exponents in {e:?} must be < p")));
                }
                alg.lambda_monomial(e)
            }
            Monomial::Element(g) => {
                if *g >= alg.order() {
                    return Err(schema(format!("element index {g} out of range")));
                }
                alg.element(*g)
            }
        };
        x = &x + &term.scale(f.reduce(*c));
    }
    Ok(x)
}

/// λ-monomial form, terms in ascending code order.
pub fn element_to_spec(alg: &GroupAlgebra, x: &AlgebraElement) -> ElementSpec {
    let a = alg.jennings().rank();
    alg.lambda_coords(x)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(code, &c)| (c as i64, Monomial::Exponents(exponents_of_code(code, alg.p(), a))))
        .collect()
}

pub fn complex_from_spec(alg: &Arc<GroupAlgebra>, spec: &ComplexSpec) -> Result<FreeComplex> {
    let n = spec.ranks.len();
    if spec.differentials.len() != n.saturating_sub(1) {
        return Err(schema(format!("{} differentials for {n} modules", spec.differentials.len())));
    }
    let mut diffs = Vec::with_capacity(spec.differentials.len());
    for (i, rows) in spec.differentials.iter().enumerate() {
        let (src, tgt) = match spec.kind {
            Kind::Cochain => (spec.ranks[i], spec.ranks[i + 1]),
            Kind::Chain => (spec.ranks[i + 1], spec.ranks[i]),
        };
        if rows.len() != tgt || rows.iter().any(|r| r.len() != src) {
            return Err(schema(format!("differential {i} must be {tgt}×{src}")));
        }
        let entries = rows.iter().map(|r| r.iter().map(|e| element_from_spec(alg, e)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        diffs.push(AlgMatrix::from_rows(alg, src, entries)?);
    }
    match spec.kind {
        Kind::Cochain => FreeComplex::cochain(alg.clone(), spec.min_degree, spec.ranks.clone(), diffs),
        Kind::Chain => FreeComplex::chain(alg.clone(), spec.min_degree, spec.ranks.clone(), diffs),
    }
}

pub fn complex_to_spec(c: &FreeComplex) -> ComplexSpec {
    let alg = c.algebra();
    let (min_degree, ranks) = c.native_ranks();
    let kind = match c.direction() {
        Direction::Cochain => Kind::Cochain,
        Direction::Chain => Kind::Chain,
    };
    let differentials = c
        .native_diffs()
        .iter()
        .map(|d| (0..d.rows()).map(|i| (0..d.cols()).map(|j| element_to_spec(alg, d.get(i, j))).collect()).collect())
        .collect();
    ComplexSpec { kind, min_degree, ranks, differentials }
}

pub fn document_for(group: &GroupSpec, c: &FreeComplex) -> Document {
    Document { p: c.algebra().p(), group: group.clone(), complex: Some(complex_to_spec(c)), cycle: None }
}

/// Parses `"1,3"` into the 0-based subset `[0, 2]`.
pub fn parse_subset(key: &str, a: usize) -> Result<Vec<usize>> {
    let mut s = Vec::new();
    for part in key.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let i: usize = part.parse().map_err(|_| schema(format!("bad subset index {part:?}")))?;
        if i == 0 || i > a {
            return Err(schema(format!("subset index {i} outside 1..={a}")));
        }
        s.push(i - 1);
    }
    let mut sorted = s.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() {
        return Err(schema(format!("repeated index in {key:?}")));
    }
    Ok(sorted)
}

pub fn cycle_from_spec(p: u32, a: usize, spec: &CycleSpec) -> Result<KoszulCycle> {
    let f = crate::linalg::PrimeField::new(p)?;
    if spec.r > a {
        return Err(schema(format!("r = {} exceeds a = {a}", spec.r)));
    }
    let mut terms = BTreeMap::new();
    for (key, &c) in &spec.mu {
        let s = parse_subset(key, a)?;
        if s.len() != spec.r {
            return Err(schema(format!("subset {key:?} does not have size {}", spec.r)));
        }
        let e = terms.entry(s).or_insert(0);
        *e = f.add(*e, f.reduce(c));
    }
    KoszulCycle::from_terms(p, a, spec.r, &terms)
}

pub fn cycle_to_spec(w: &KoszulCycle) -> CycleSpec {
    let mu = subsets(w.a, w.r)
        .iter()
        .zip(&w.mu)
        .filter(|(_, &m)| m != 0)
        .map(|(s, &m)| (s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","), m as i64))
        .collect();
    CycleSpec { r: w.r, mu }
}
