//! The spectral sequence of the filtration `F^k C = C·I^{L−k}`.
//!
//! Degrees `q` are internal (cochain) degrees of the underlying complex.
//! `d_r` maps `E_r^{k,q}` to `E_r^{k−r,q+1}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgcomplex::{ExpandedComplex, FreeComplex, HomologyRecord};
use crate::grfun::{gr_cup, translate, y_basis, GradedRing};
use crate::linalg::{preimage, quotient, Matrix, Quotient, Subspace};
use crate::pgroup::{exponents_of_code, AlgebraElement, GroupAlgebra};

/// A free complex with both forms of its ideal-power filtration.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: FreeComplex,
    expanded: ExpandedComplex,
    l: usize,
    /// `levels[q − min][k + 1]` is `F^k C^q` for `k = −1..=L`.
    levels: Vec<Vec<Subspace>>,
}

/// Expanded subspace `⊕_i e_i·V` of a free module of rank `rank`.
fn blockwise(v: &Subspace, rank: usize, n: usize) -> Subspace {
    let field = v.field();
    let basis = v.basis_vectors();
    let mut rows = Vec::with_capacity(rank * basis.len());
    for i in 0..rank {
        for b in &basis {
            let mut x = vec![0; rank * n];
            x[i * n..(i + 1) * n].copy_from_slice(b);
            rows.push(x);
        }
    }
    Subspace::from_vectors(field, rank * n, &rows)
}

/// Builds the filtration as `C·I^{L−k}` and as the annihilator of
/// `I^{k+1}`, asserting that the two agree.
pub fn filter(c: &FreeComplex) -> Result<FilteredComplex> {
    let alg = c.algebra();
    let n = alg.order();
    let l = alg.l();
    let levels: Vec<Vec<Subspace>> = c
        .degrees()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&q| {
            let rank = c.rank_at(q);
            (-1..=l as i64)
                .map(|k| {
                    let image_form = blockwise(&alg.ideal((l as i64 - k) as usize), rank, n);
                    let ann_form = blockwise(&alg.left_annihilator((k + 1) as usize), rank, n);
                    if image_form != ann_form {
                        return Err(Error::Verification(format!("filtration forms differ at k={k}, q={q}")));
                    }
                    Ok(image_form)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(FilteredComplex { complex: c.clone(), expanded: c.expand(), l, levels })
}

/// One entry `E_r^{k,q}` with its canonical representatives.
#[derive(Clone, Debug)]
pub struct Cell {
    pub k: i64,
    pub q: i64,
    quotient: Quotient,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
    /// Representative cocycles, one per row, in expanded coordinates.
    pub fn representatives(&self) -> &Matrix {
        self.quotient.representatives()
    }
    /// `Z_r^{k,q}`.
    pub fn cycles(&self) -> &Subspace {
        self.quotient.outer()
    }
    /// `B_r^{k,q}`.
    pub fn boundaries(&self) -> &Subspace {
        self.quotient.inner()
    }
    /// Page coordinates of an element of `Z_r^{k,q}`.
    pub fn coords(&self, x: &[u32]) -> Result<Vec<u32>> {
        Ok(self.quotient.coords(x)?)
    }
    pub fn contains(&self, x: &[u32]) -> bool {
        self.quotient.outer().contains(x)
    }
}

impl FilteredComplex {
    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }
    pub fn expanded(&self) -> &ExpandedComplex {
        &self.expanded
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn algebra(&self) -> &std::sync::Arc<GroupAlgebra> {
        self.complex.algebra()
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.complex.degrees()
    }

    /// `F^k C^q`, with `F^k = 0` for `k < 0` and `F^k = C^q` for `k ≥ L`.
    pub fn level(&self, k: i64, q: i64) -> Subspace {
        let dim = self.expanded.dim_at(q);
        let field = self.expanded.field();
        if dim == 0 || k < 0 {
            return Subspace::zero(field, dim);
        }
        if k >= self.l as i64 {
            return Subspace::full(field, dim);
        }
        let t = (q - self.complex.min_degree()) as usize;
        self.levels[t][(k + 1) as usize].clone()
    }

    fn d(&self, q: i64) -> Matrix {
        self.expanded.diff_at(q)
    }

    /// `E_r^{k,q} = Z_r / B_r`.
    pub fn cell(&self, r: usize, k: i64, q: i64) -> Result<Cell> {
        let r = r as i64;
        let d = self.d(q);
        let drop = preimage(&d, &self.level(k - r, q + 1))?;
        let z = self.level(k, q).intersect(&drop)?;
        let lower = self.level(k - 1, q).intersect(&drop)?;
        let incoming = self.level(k + r - 1, q - 1).image_under(&self.d(q - 1))?.intersect(&self.level(k, q))?;
        let b = lower.sum(&incoming)?;
        Ok(Cell { k, q, quotient: quotient(&z, &b)? })
    }

    /// The full page `E_r` with its differential.
    pub fn page(&self, r: usize) -> Result<PageTable> {
        let keys: Vec<(i64, i64)> = (0..=self.l as i64).flat_map(|k| self.degrees().map(move |q| (k, q))).collect();
        let cells: BTreeMap<(i64, i64), Cell> = keys
            .par_iter()
            .map(|&(k, q)| self.cell(r, k, q).map(|c| ((k, q), c)))
            .collect::<Result<_>>()?;
        let field = self.expanded.field();
        let mut diffs = BTreeMap::new();
        for (&(k, q), cell) in &cells {
            let target = cells.get(&(k - r as i64, q + 1));
            let rows = target.map_or(0, |t| t.dim());
            let d = self.d(q);
            let mut cols = Vec::with_capacity(cell.dim());
            if let Some(t) = target {
                let reps = cell.representatives();
                for i in 0..reps.rows() {
                    cols.push(t.coords(&d.mul_vec(reps.row(i))?)?);
                }
                for b in cell.boundaries().basis_vectors() {
                    if t.coords(&d.mul_vec(&b)?)?.iter().any(|&x| x != 0) {
                        return Err(Error::Verification(format!("d_{r} is not well defined at ({k},{q})")));
                    }
                }
            } else {
                cols = vec![Vec::new(); cell.dim()];
            }
            diffs.insert((k, q), Matrix::from_columns(field, rows, &cols));
        }
        Ok(PageTable { r, l: self.l, q_min: self.complex.min_degree(), q_max: self.complex.max_degree(), cells, diffs })
    }

    /// Pages `E_0, …, E_{L+1}`.
    pub fn pages(&self) -> Result<Vec<PageTable>> {
        (0..=self.l + 1).map(|r| self.page(r)).collect()
    }

    pub fn einfty(&self) -> Result<PageTable> {
        self.page(self.l + 1)
    }

    /// Compares `Σ_k dim E_∞^{k,q}` with `dim H^q` for every `q`.
    pub fn einfty_check(&self) -> Result<EinftyReport> {
        let e = self.einfty()?;
        let h = self.expanded.homology();
        let rows: Vec<(i64, usize, usize)> = self.degrees().map(|q| (q, (0..=self.l as i64).map(|k| e.dim(k, q)).sum(), h.dim_at(q))).collect();
        let ok = rows.iter().all(|&(_, a, b)| a == b);
        Ok(EinftyReport { rows, ok })
    }

    /// `E_1^{L−k,q} ≅ H^q(C/C·I) ⊗ I^k/I^{k+1}` via `[c]⊗[λ] ↦ [c·λ]`.
    pub fn e1_decomposition(&self) -> Result<E1Decomposition> {
        let alg = self.algebra().clone();
        let quot = self.complex.reduce_mod_augmentation();
        let hq = quot.homology();
        let page = self.page(1)?;
        let n = alg.order();
        let e = alg.group().identity();
        let mut maps = BTreeMap::new();
        for k in 0..=self.l {
            let monomials = ideal_monomials(&alg, k);
            for q in self.degrees() {
                let cell = page.cell(self.l as i64 - k as i64, q).expect("cell present");
                let reps = hq.representatives(q);
                let mut cols = Vec::new();
                for i in 0..reps.rows() {
                    let lifted: Vec<u32> = (0..self.complex.rank_at(q) * n).map(|x| if x % n == e { reps.row(i)[x / n] } else { 0 }).collect();
                    for (_, lam) in &monomials {
                        let v = right_multiply(&alg, &lifted, lam);
                        cols.push(cell.coords(&v)?);
                    }
                }
                let m = Matrix::from_columns(alg.field(), cell.dim(), &cols);
                if m.rows() != m.cols() || m.rank() != m.rows() {
                    return Err(Error::Verification(format!("E_1 decomposition fails at k={k}, q={q}")));
                }
                maps.insert((k, q), m);
            }
        }
        Ok(E1Decomposition { quotient_homology: hq, maps })
    }

    /// Page map induced by right multiplication with `g − 1`, which lowers
    /// `k` by the Jennings degree of `g`.
    pub fn derivation(&self, page: &PageTable, g: usize) -> Result<BTreeMap<(i64, i64), Matrix>> {
        let alg = self.algebra();
        let deg = alg.jennings().degree_of(g) as i64;
        let lam = alg.lambda_of(g);
        let field = alg.field();
        let mut out = BTreeMap::new();
        for (&(k, q), cell) in &page.cells {
            let target = page.cells.get(&(k - deg, q));
            let rows = target.map_or(0, |t| t.dim());
            let reps = cell.representatives();
            let mut cols = Vec::new();
            for i in 0..reps.rows() {
                cols.push(match target {
                    Some(t) => t.coords(&right_multiply(alg, reps.row(i), &lam))?,
                    None => Vec::new(),
                });
            }
            out.insert((k, q), Matrix::from_columns(field, rows, &cols));
        }
        Ok(out)
    }
}

/// Blockwise right multiplication `Σ e_i x_i ↦ Σ e_i x_i·λ` in expanded coordinates.
pub fn right_multiply(alg: &GroupAlgebra, v: &[u32], lambda: &AlgebraElement) -> Vec<u32> {
    let n = alg.order();
    let m = alg.right_mul_matrix(lambda);
    let mut out = Vec::with_capacity(v.len());
    for block in v.chunks(n) {
        out.extend(m.mul_vec(block).expect("block size"));
    }
    out
}

/// λ-monomials spanning `I^k/I^{k+1}`, with their exponent vectors.
pub fn ideal_monomials(alg: &GroupAlgebra, k: usize) -> Vec<(Vec<u32>, AlgebraElement)> {
    let a = alg.jennings().rank();
    (0..alg.order())
        .filter(|&code| alg.monomial_weight(code) == k)
        .map(|code| {
            let x = exponents_of_code(code, alg.p(), a);
            let m = alg.lambda_monomial(&x);
            (x, m)
        })
        .collect()
}

/// Dimensions, representatives and differential of one page.
#[derive(Clone, Debug)]
pub struct PageTable {
    r: usize,
    l: usize,
    q_min: i64,
    q_max: i64,
    cells: BTreeMap<(i64, i64), Cell>,
    diffs: BTreeMap<(i64, i64), Matrix>,
}

impl PageTable {
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn q_range(&self) -> std::ops::RangeInclusive<i64> {
        self.q_min..=self.q_max
    }
    pub fn cell(&self, k: i64, q: i64) -> Option<&Cell> {
        self.cells.get(&(k, q))
    }
    pub fn dim(&self, k: i64, q: i64) -> usize {
        self.cells.get(&(k, q)).map_or(0, |c| c.dim())
    }
    /// Matrix of `d_r` leaving `(k, q)`.
    pub fn differential(&self, k: i64, q: i64) -> Option<&Matrix> {
        self.diffs.get(&(k, q))
    }
    pub fn d_rank(&self, k: i64, q: i64) -> usize {
        self.diffs.get(&(k, q)).map_or(0, |m| m.rank())
    }
    pub fn total_dim(&self) -> usize {
        self.cells.values().map(|c| c.dim()).sum()
    }

    /// Checks `d_r ∘ d_r = 0`.
    pub fn check_square_zero(&self) -> Result<()> {
        let r = self.r as i64;
        for (&(k, q), d) in &self.diffs {
            if let Some(d2) = self.diffs.get(&(k - r, q + 1)) {
                if d.rows() > 0 && !d2.mul(d)?.is_zero() {
                    return Err(Error::Verification(format!("d_{r}∘d_{r} ≠ 0 at ({k},{q})")));
                }
            }
        }
        Ok(())
    }

    /// Checks that `next` is the homology of this page.
    pub fn check_successor(&self, next: &PageTable) -> Result<()> {
        let r = self.r as i64;
        for &(k, q) in self.cells.keys() {
            let out_rank = self.d_rank(k, q);
            let in_rank = self.d_rank(k + r, q - 1);
            let expected = self.dim(k, q) - out_rank - in_rank;
            if next.dim(k, q) != expected {
                return Err(Error::Verification(format!("E_{} at ({k},{q}) has dim {}, expected {expected}", next.r, next.dim(k, q))));
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> PageSummary {
        let cells = self
            .cells
            .keys()
            .map(|&(k, q)| CellSummary {
                k,
                q,
                dim: self.dim(k, q),
                d_target: [k - self.r as i64, q + 1],
                d_rank: self.d_rank(k, q),
            })
            .collect();
        PageSummary { r: self.r, l: self.l, q_min: self.q_min, q_max: self.q_max, cells }
    }

    /// Grid with `q` rows descending and `k` columns ascending; a `d_r` line
    /// lists the nonzero differential ranks.
    pub fn ascii(&self) -> String {
        let mut s = String::new();
        let width = self.cells.values().map(|c| c.dim().to_string().len()).max().unwrap_or(1).max(2);
        s.push_str(&format!("E_{}  (rows q, columns k)\n", self.r));
        s.push_str(&format!("{:>4} |", "q\\k"));
        for k in 0..=self.l {
            s.push_str(&format!(" {:>width$}", k));
        }
        s.push('\n');
        s.push_str(&format!("{}\n", "-".repeat(6 + (self.l + 1) * (width + 1))));
        for q in self.q_range().rev() {
            s.push_str(&format!("{:>4} |", q));
            for k in 0..=self.l as i64 {
                let d = self.dim(k, q);
                let cell = if d == 0 { ".".to_string() } else { d.to_string() };
                s.push_str(&format!(" {:>width$}", cell));
            }
            s.push('\n');
        }
        let arrows: Vec<String> = self
            .diffs
            .iter()
            .filter(|(_, m)| m.rank() > 0)
            .map(|(&(k, q), m)| format!("({k},{q})->({},{}):{}", k - self.r as i64, q + 1, m.rank()))
            .collect();
        if arrows.is_empty() {
            s.push_str(&format!("d_{} ranks: none\n", self.r));
        } else {
            s.push_str(&format!("d_{} ranks: {}\n", self.r, arrows.join(" ")));
        }
        s
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("r,k,q,dim,d_rank\n");
        for &(k, q) in self.cells.keys() {
            s.push_str(&format!("{},{},{},{},{}\n", self.r, k, q, self.dim(k, q), self.d_rank(k, q)));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CellSummary {
    pub k: i64,
    pub q: i64,
    pub dim: usize,
    pub d_target: [i64; 2],
    pub d_rank: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PageSummary {
    pub r: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub q_min: i64,
    pub q_max: i64,
    pub cells: Vec<CellSummary>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EinftyReport {
    /// `(q, Σ_k dim E_∞^{k,q}, dim H^q)`.
    pub rows: Vec<(i64, usize, usize)>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct E1Decomposition {
    pub quotient_homology: HomologyRecord,
    /// `(k, q)`: matrix from `H^q(C/C·I) ⊗ I^k/I^{k+1}` to `E_1^{L−k,q}`.
    pub maps: BTreeMap<(usize, i64), Matrix>,
}

/// `d_1(y_j) = Σ_i a_i ⊗ q_ij(y)` for every Jennings generator.
#[derive(Clone, Debug)]
pub struct D1Expression {
    pub alpha: Vec<usize>,
    /// Indices `i` with `α(i) = 1`.
    pub degree_one: Vec<usize>,
    /// `terms[j][t]`: coordinates of `q_{degree_one[t], j}` over the degree `α(j)−1` monomials.
    pub terms: Vec<Vec<Vec<u32>>>,
    /// Exponent vectors of the monomials per degree.
    pub monomials: Vec<Vec<Vec<u32>>>,
}

fn monomial_name(x: &[u32]) -> String {
    let parts: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

impl D1Expression {
    /// `q_ij` rendered as a polynomial in the `y`'s.
    pub fn polynomial(&self, j: usize, t: usize) -> String {
        let deg = self.alpha[j] - 1;
        let coeffs = &self.terms[j][t];
        let parts: Vec<String> = coeffs
            .iter()
            .zip(&self.monomials[deg])
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| if c == 1 { monomial_name(m) } else { format!("{c}·{}", monomial_name(m)) })
            .collect();
        parts.join(" + ")
    }

    /// `d1(y_j) = a_i⊗… + …`, with 1-based names.
    pub fn render(&self, j: usize) -> String {
        let terms: Vec<String> = self
            .degree_one
            .iter()
            .enumerate()
            .filter(|(t, _)| self.terms[j][*t].iter().any(|&c| c != 0))
            .map(|(t, &i)| {
                let poly = self.polynomial(j, t);
                if poly == "1" {
                    format!("a{}", i + 1)
                } else if poly.contains(" + ") {
                    format!("a{}⊗({poly})", i + 1)
                } else {
                    format!("a{}⊗{poly}", i + 1)
                }
            })
            .collect();
        format!("d1(y{}) = {}", j + 1, if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl fmt::Display for D1Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.alpha.len() {
            writeln!(f, "{}", self.render(j))?;
        }
        Ok(())
    }
}

/// Determines `d_1(y_j)` by induction on `α(j)`, using that right
/// multiplication by `f_i − 1` commutes with `d_1` and acts as the
/// translation derivation on `gr∪`.
pub fn d1_solver(alg: &std::sync::Arc<GroupAlgebra>) -> Result<D1Expression> {
    let gr = gr_cup(alg)?;
    let y = y_basis(alg)?;
    let alpha = y.alpha.clone();
    let a = alpha.len();
    let field = alg.field();
    let degree_one: Vec<usize> = (0..a).filter(|&i| alpha[i] == 1).collect();
    let local = |deg: usize, x: &[u32]| -> Option<usize> {
        let g = gr.monomial_index(x)?;
        gr.monomials_in_degree(deg).iter().position(|&m| m == g)
    };
    let dim = |deg: usize| gr.monomials_in_degree(deg).len();
    let mut terms: Vec<Option<Vec<Vec<u32>>>> = vec![None; a];
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by_key(|&j| (alpha[j], j));
    for &j in &order {
        if alpha[j] == 1 {
            let t = degree_one.iter().position(|&i| i == j).expect("degree one");
            terms[j] = Some((0..degree_one.len()).map(|s| vec![if s == t { 1 } else { 0 }]).collect());
            continue;
        }
        let deg = alpha[j] - 1;
        // d_1 on a monomial of degree deg, as coordinates in degree deg−1 per a_i.
        let d1_monomial = |x: &[u32]| -> Result<Vec<Vec<u32>>> {
            let mut out = vec![vec![0; dim(deg - 1)]; degree_one.len()];
            for l in 0..a {
                if x[l] == 0 {
                    continue;
                }
                let ql = terms[l].as_ref().ok_or_else(|| Error::Verification("induction order violated".into()))?;
                let mut rest = x.to_vec();
                rest[l] -= 1;
                let rest_deg = deg - alpha[l];
                let mut rest_coords = vec![0; dim(rest_deg)];
                rest_coords[local(rest_deg, &rest).ok_or_else(|| Error::Verification("monomial missing".into()))?] = 1;
                for (t, qlt) in ql.iter().enumerate() {
                    let prod = gr.multiply(alpha[l] - 1, qlt, rest_deg, &rest_coords);
                    if !prod.is_empty() {
                        field.axpy(&mut out[t], field.reduce(x[l] as i64), &prod);
                    }
                }
            }
            Ok(out)
        };
        let mut blocks = Vec::new();
        let mut rhs: Vec<Vec<u32>> = vec![Vec::new(); degree_one.len()];
        for &i in &degree_one {
            let moved = translate(&y.y[j], &alg.lambda(i))?;
            let p_i = gr.class_of(deg, &moved)?;
            let mut d = vec![vec![0; dim(deg - 1)]; degree_one.len()];
            for (c, &g) in p_i.iter().zip(gr.monomials_in_degree(deg)) {
                if *c != 0 {
                    let dm = d1_monomial(&gr.monomials()[g])?;
                    for t in 0..degree_one.len() {
                        field.axpy(&mut d[t], *c, &dm[t]);
                    }
                }
            }
            blocks.push(gr.translation_matrix(&alg.lambda(i), 1, deg)?);
            for t in 0..degree_one.len() {
                rhs[t].extend_from_slice(&d[t]);
            }
        }
        let stacked = blocks.iter().skip(1).try_fold(blocks[0].clone(), |acc, b| acc.vstack(b))?;
        if stacked.rank() != stacked.cols() {
            return Err(Error::Verification(format!("translation system for y{} is not injective", j + 1)));
        }
        let mut sol = Vec::with_capacity(degree_one.len());
        for b in &rhs {
            sol.push(stacked.solve(b)?.ok_or_else(|| Error::Verification(format!("no solution for d1(y{})", j + 1)))?);
        }
        terms[j] = Some(sol);
    }
    let monomials = (0..=gr.l()).map(|d| gr.monomials_in_degree(d).iter().map(|&g| gr.monomials()[g].clone()).collect()).collect();
    Ok(D1Expression { alpha, degree_one, terms: terms.into_iter().map(|t| t.expect("all solved")).collect(), monomials })
}

/// Convenience for the graded ring used by [`d1_solver`].
pub fn graded_ring(alg: &std::sync::Arc<GroupAlgebra>) -> Result<GradedRing> {
    gr_cup(alg)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fgcomplex::{AlgMatrix, ChainMap};
    use crate::koszul::{build_koszul, KoszulCycle};
    use crate::pgroup::GroupSpec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    pub(crate) fn example_36() -> FreeComplex {
        let k = build_koszul(2, 2).unwrap();
        k.dual_cone(&KoszulCycle::new(2, 2, 2, vec![1]).unwrap()).unwrap()
    }

    fn grid(page: &PageTable, k: i64) -> Vec<usize> {
        (0..=5).map(|q| page.dim(k, q)).collect()
    }

    #[test]
    fn filter_examples() {
        let a = GroupAlgebra::from_spec(&GroupSpec::ElementaryAbelian { p: 2, rank: 2 }).unwrap();
        let c = FreeComplex::cochain(a.clone(), 0, vec![1], vec![]).unwrap();
        let fc = filter(&c).unwrap();
        assert_eq!((0..=2).map(|k| fc.level(k, 0).dim()).collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(fc.level(-1, 0).dim(), 0);
        assert!(fc.level(2, 0).is_full());
    }

    #[test]
    fn figure_one_pages() {
        let fc = filter(&example_36()).unwrap();
        let e1 = fc.page(1).unwrap();
        assert_eq!(grid(&e1, 0), vec![1, 2, 1, 1, 2, 1]);
        assert_eq!(grid(&e1, 1), vec![2, 4, 2, 2, 4, 2]);
        assert_eq!(grid(&e1, 2), vec![1, 2, 1, 1, 2, 1]);
        // arrow labels of the figure, read per source column
        assert_eq!([0, 1, 3, 4].map(|q| e1.d_rank(1, q)), [2, 1, 2, 1]);
        assert_eq!([0, 1, 3, 4].map(|q| e1.d_rank(2, q)), [1, 2, 1, 2]);
        assert_eq!([2, 5].map(|q| e1.d_rank(1, q) + e1.d_rank(2, q)), [0, 0]);
        let e2 = fc.page(2).unwrap();
        let nonzero: Vec<(i64, i64, usize)> = (0..=2).flat_map(|k| (0..=5).map(move |q| (k, q))).filter(|&(k, q)| e2.dim(k, q) > 0).map(|(k, q)| (k, q, e2.dim(k, q))).collect();
        assert_eq!(nonzero, vec![(0, 0, 1), (0, 3, 1), (1, 1, 2), (1, 4, 2), (2, 2, 1), (2, 5, 1)]);
        assert_eq!(e2.d_rank(2, 2), 1);
        assert_eq!(e2.diffs.values().filter(|m| m.rank() > 0).count(), 1);
        for r in 0..4 {
            let p = fc.page(r).unwrap();
            p.check_square_zero().unwrap();
            p.check_successor(&fc.page(r + 1).unwrap()).unwrap();
        }
        assert!(fc.page(3).unwrap().diffs.values().all(|m| m.is_zero()));
    }

    #[test]
    fn einfty_examples() {
        let fc = filter(&example_36()).unwrap();
        let rep = fc.einfty_check().unwrap();
        assert!(rep.ok);
        assert_eq!(rep.rows.iter().map(|r| r.1).collect::<Vec<_>>(), vec![1, 2, 0, 0, 2, 1]);
        let k = build_koszul(3, 2).unwrap();
        let dual = k.complex().dualize().unwrap();
        let rep = filter(&dual).unwrap().einfty_check().unwrap();
        assert!(rep.ok);
        assert_eq!(rep.rows.iter().map(|r| r.2).collect::<Vec<_>>(), dual.homology().dims());
        let cone = FreeComplex::cone(&ChainMap::identity(k.complex()).unwrap()).unwrap();
        let rep = filter(&cone).unwrap().einfty_check().unwrap();
        assert!(rep.rows.iter().all(|r| r.1 == 0 && r.2 == 0));
    }

    #[test]
    fn e1_decomposition_examples() {
        let fc = filter(&example_36()).unwrap();
        let dec = fc.e1_decomposition().unwrap();
        assert_eq!(dec.quotient_homology.dims(), &[1, 2, 1, 1, 2, 1]);
        assert!(fc.complex().reduce_mod_augmentation().diff_at(0).is_zero());
        for q in 0..=5 {
            assert_eq!(dec.maps[&(0, q)], Matrix::identity(crate::linalg::PrimeField::new(2).unwrap(), dec.quotient_homology.dim_at(q)));
        }
    }

    #[test]
    fn derivation_examples() {
        let fc = filter(&example_36()).unwrap();
        let alg = fc.algebra().clone();
        let e1 = fc.page(1).unwrap();
        // λ1·λ2 on E_1^{2,*} is multiplication by N onto E_1^{0,*}
        let d1 = fc.derivation(&e1, 1).unwrap();
        let d2 = fc.derivation(&e1, 2).unwrap();
        for q in 0..=5 {
            let m = d1[&(1, q)].mul(&d2[&(2, q)]).unwrap();
            assert_eq!(m.rank(), e1.dim(2, q));
            assert_eq!(m.rank(), e1.dim(0, q));
        }
        let e2 = fc.page(2).unwrap();
        let f1 = fc.derivation(&e2, 1).unwrap();
        assert_eq!(e2.dim(2, 1), 0);
        assert_eq!(e2.dim(1, 1), 2);
        assert_eq!(f1[&(2, 1)].rank(), 0);
        let id = fc.derivation(&e1, alg.group().identity()).unwrap();
        assert!(id.values().all(|m| m.is_zero()));
    }

    #[test]
    fn d1_examples() {
        for (p, a) in [(2, 1), (2, 3), (3, 2)] {
            let alg = GroupAlgebra::from_spec(&GroupSpec::ElementaryAbelian { p, rank: a }).unwrap();
            let d = d1_solver(&alg).unwrap();
            for j in 0..a {
                assert_eq!(d.render(j), format!("d1(y{}) = a{}", j + 1, j + 1));
            }
        }
        let c4 = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order: 4 }).unwrap();
        assert_eq!(d1_solver(&c4).unwrap().render(1), "d1(y2) = a1⊗y1");
        let c8 = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order: 8 }).unwrap();
        let d = d1_solver(&c8).unwrap();
        assert_eq!(d.render(1), "d1(y2) = a1⊗y1");
        assert_eq!(d.degree_one, vec![0]);
    }

    #[test]
    fn perturbation_stability() {
        for (p, a, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
            let k = build_koszul(p, a).unwrap();
            let subs = crate::koszul::binomial(a, r);
            let w = KoszulCycle::new(p, a, r, vec![1; subs]).unwrap();
            let fw = filter(&k.dual_cone(&w).unwrap()).unwrap();
            let f0 = filter(&k.dual_cone(&KoszulCycle::zero(p, a, r)).unwrap()).unwrap();
            let m = r * (p as usize - 1);
            for page in 0..m {
                let (x, y) = (fw.page(page).unwrap(), f0.page(page).unwrap());
                assert_eq!(x.summary(), y.summary(), "p={p} a={a} r={r} page={page}");
                assert_eq!(x.diffs, y.diffs);
            }
        }
    }

    #[test]
    fn zero_cycle_pages_split() {
        let k = build_koszul(2, 2).unwrap();
        let dual = k.complex().dualize().unwrap();
        let cone = k.dual_cone(&KoszulCycle::zero(2, 2, 2)).unwrap();
        let shifted = dual.shift(3);
        for r in 0..=3 {
            let a = filter(&cone).unwrap().page(r).unwrap();
            let b = filter(&dual).unwrap().page(r).unwrap();
            let c = filter(&shifted).unwrap().page(r).unwrap();
            for kk in 0..=2 {
                for q in -1..=6 {
                    assert_eq!(a.dim(kk, q), b.dim(kk, q) + c.dim(kk, q));
                }
            }
        }
    }

    #[test]
    fn e1_derivation_matches_translation_on_functions() {
        // E_1 of FG in one degree is gr(FG); ε identifies it with gr∪ C⁰(G).
        for spec in [GroupSpec::ElementaryAbelian { p: 2, rank: 2 }, GroupSpec::ElementaryAbelian { p: 3, rank: 2 }, GroupSpec::Cyclic { order: 8 }] {
            let alg = GroupAlgebra::from_spec(&spec).unwrap();
            let c = FreeComplex::cochain(alg.clone(), 0, vec![1], vec![]).unwrap();
            let fc = filter(&c).unwrap();
            let e1 = fc.page(1).unwrap();
            let gr = gr_cup(&alg).unwrap();
            let eps = crate::grfun::FunctionOnG::epsilon(alg.group());
            let to_gr = |k: usize| -> Matrix {
                let cell = e1.cell(k as i64, 0).unwrap();
                let reps = cell.representatives();
                let cols: Vec<Vec<u32>> = (0..reps.rows())
                    .map(|i| gr.class_of(k, &translate(&eps, &alg.from_coeffs(reps.row(i).to_vec()).unwrap()).unwrap()).unwrap())
                    .collect();
                Matrix::from_columns(alg.field(), gr.monomials_in_degree(k).len(), &cols)
            };
            for g in 0..alg.order() {
                let deg = alg.jennings().degree_of(g);
                let der = fc.derivation(&e1, g).unwrap();
                for k in deg..=alg.l() {
                    let lhs = to_gr(k - deg).mul(&der[&(k as i64, 0)]).unwrap();
                    let rhs = gr.translation_matrix(&alg.lambda_of(g), deg, k).unwrap().mul(&to_gr(k)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn random_free(alg: &Arc<GroupAlgebra>, rng: &mut ChaCha8Rng) -> FreeComplex {
        crate::fgcomplex::tests::random_complex(alg, rng, 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn pages_are_consistent(seed in any::<u64>(), gi in 0usize..16) {
            let algs: Vec<_> = crate::pgroup::small_group_catalog().into_iter().map(|(_, s)| GroupAlgebra::from_spec(&s).unwrap()).filter(|a| a.order() <= 9).collect();
            let alg = &algs[gi % algs.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_free(alg, &mut rng);
            let fc = filter(&c).unwrap();
            let pages = fc.pages().unwrap();
            for w in pages.windows(2) {
                w[0].check_square_zero().unwrap();
                w[0].check_successor(&w[1]).unwrap();
            }
            prop_assert!(fc.einfty_check().unwrap().ok);
            fc.e1_decomposition().unwrap();
            // derivations commute with d_r
            let r = rng.gen_range(0..=fc.l() + 1);
            let page = &pages[r];
            let g = rng.gen_range(0..alg.order());
            let der = fc.derivation(page, g).unwrap();
            let deg = alg.jennings().degree_of(g) as i64;
            for (&(k, q), m) in &der {
                let d_src = page.differential(k, q).unwrap();
                let lhs = match page.differential(k - deg, q) { Some(d) if m.rows() > 0 && d.rows() > 0 => d.mul(m).unwrap(), _ => continue };
                let rhs = match der.get(&(k - r as i64, q + 1)) { Some(dm) if d_src.rows() > 0 => dm.mul(d_src).unwrap(), _ => continue };
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn blockwise_matches_matrix_form() {
        let a = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order: 4 }).unwrap();
        let x = AlgMatrix::from_rows(&a, 1, vec![vec![a.lambda(0)], vec![a.zero()]]).unwrap();
        let c = FreeComplex::cochain(a.clone(), 0, vec![1, 2], vec![x]).unwrap();
        let fc = filter(&c).unwrap();
        assert_eq!(fc.level(0, 1).dim(), 2);
        assert_eq!(fc.level(2, 1).dim(), 6);
    }
}
