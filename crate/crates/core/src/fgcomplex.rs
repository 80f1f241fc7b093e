//! Bounded complexes of finitely generated free right `F_p G`-modules.
//!
//! Everything is stored with cochain indexing (differential raises the
//! internal degree by one). A chain complex `C_n` sits at internal degree
//! `-n`; `direction` only records how degrees are reported.
//!
//! A differential matrix `(m_ij)` acts by `d(e_j) = Σ_i e_i·m_ij`, so on
//! coordinate columns it is left multiplication and composites are ordinary
//! matrix products with the algebra product inside.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, quotient, Matrix, PrimeField, Subspace};
use crate::pgroup::{same_group, AlgebraElement, GroupAlgebra, GroupAutomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Chain,
    Cochain,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Chain => Direction::Cochain,
            Direction::Cochain => Direction::Chain,
        }
    }
}

/// Matrix with group-algebra entries; rows index the target basis.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<AlgebraElement>,
}

impl fmt::Debug for AlgMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AlgMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl AlgMatrix {
    pub fn zero(alg: &GroupAlgebra, rows: usize, cols: usize) -> Self {
        AlgMatrix { rows, cols, entries: vec![alg.zero(); rows * cols] }
    }
    pub fn identity(alg: &GroupAlgebra, n: usize) -> Self {
        let mut m = Self::zero(alg, n, n);
        for i in 0..n {
            m.set(i, i, alg.one());
        }
        m
    }
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> AlgebraElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        AlgMatrix { rows, cols, entries }
    }
    pub fn from_rows(alg: &GroupAlgebra, cols: usize, rows: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a matrix with {cols} columns", row.len())));
            }
            for x in row {
                if !same_group(x.group(), alg.group()) {
                    return Err(Error::Group(crate::pgroup::GroupError::GroupMismatch));
                }
                entries.push(x);
            }
        }
        Ok(AlgMatrix { rows: r, cols, entries })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: AlgebraElement) {
        self.entries[i * self.cols + j] = x;
    }
    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn map(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Self {
        AlgMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
    pub fn scale(&self, c: u32) -> Self {
        self.map(|x| x.scale(c))
    }
    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }
    pub fn transpose(&self) -> Self {
        AlgMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?,
        })
    }

    /// Product `self · other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} · {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<AlgebraElement> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        if acc.is_none() {
                            acc = Some(AlgebraElement::zero(a.group()));
                        }
                        continue;
                    }
                    let prod = a.try_mul(b)?;
                    acc = Some(match acc {
                        Some(s) => s.try_add(&prod)?,
                        None => prod,
                    });
                }
                out.push(acc.ok_or_else(|| Error::Shape("product with an empty inner dimension needs an algebra".into()))?);
            }
        }
        Ok(AlgMatrix { rows: self.rows, cols: other.cols, entries: out })
    }

    /// Same as [`mul`](Self::mul) but well-defined for empty inner dimension.
    pub fn mul_in(&self, other: &Self, alg: &GroupAlgebra) -> Result<Self> {
        if self.cols == 0 {
            if other.rows != 0 {
                return Err(Error::Shape("inner dimension mismatch".into()));
            }
            return Ok(AlgMatrix::zero(alg, self.rows, other.cols));
        }
        self.mul(other)
    }

    /// Entrywise augmentation, an `F_p` matrix.
    pub fn augmentation(&self, field: PrimeField) -> Matrix {
        Matrix::from_fn(field, self.rows, self.cols, |i, j| self.get(i, j).augmentation())
    }

    /// Regular-representation expansion in the basis `e_i·g` ordered by `(i, g)`.
    pub fn expand(&self, alg: &GroupAlgebra) -> Matrix {
        let n = alg.order();
        let mut m = Matrix::zeros(alg.field(), self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    m.set_block(i * n, j * n, &alg.left_mul_matrix(x));
                }
            }
        }
        m
    }

    /// `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("inconsistent block sizes".into()));
        }
        let (r1, c1) = (a.rows, a.cols);
        Ok(AlgMatrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < r1, j < c1) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - c1).clone(),
            (false, true) => c.get(i - r1, j).clone(),
            (false, false) => d.get(i - r1, j - c1).clone(),
        }))
    }

    fn without(&self, row: Option<usize>, col: Option<usize>) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| Some(i) != row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| Some(j) != col).collect();
        AlgMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

/// A bounded complex of free right `F_p G`-modules.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    alg: Arc<GroupAlgebra>,
    direction: Direction,
    min_degree: i64,
    ranks: Vec<usize>,
    diffs: Vec<AlgMatrix>,
}

impl PartialEq for FreeComplex {
    fn eq(&self, other: &Self) -> bool {
        same_group(self.alg.group(), other.alg.group())
            && self.direction == other.direction
            && self.min_degree == other.min_degree
            && self.ranks == other.ranks
            && self.diffs == other.diffs
    }
}

/// `(−1)^k` as an element of F_p.
pub(crate) fn sign(field: PrimeField, k: i64) -> u32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        field.neg(1)
    }
}

impl FreeComplex {
    /// Builds a complex from internal (cochain-indexed) data and validates it.
    pub fn new(alg: Arc<GroupAlgebra>, direction: Direction, min_degree: i64, ranks: Vec<usize>, diffs: Vec<AlgMatrix>) -> Result<Self> {
        let c = FreeComplex { alg, direction, min_degree, ranks, diffs };
        c.check_shapes()?;
        c.validate()?;
        Ok(c)
    }

    /// Cochain complex: `diffs[i]` maps degree `min_degree + i` to `min_degree + i + 1`.
    pub fn cochain(alg: Arc<GroupAlgebra>, min_degree: i64, ranks: Vec<usize>, diffs: Vec<AlgMatrix>) -> Result<Self> {
        Self::new(alg, Direction::Cochain, min_degree, ranks, diffs)
    }

    /// Chain complex: `ranks[i]` is the rank of `C_{min_degree+i}` and
    /// `diffs[i]` maps `C_{min_degree+i+1}` to `C_{min_degree+i}`.
    pub fn chain(alg: Arc<GroupAlgebra>, min_degree: i64, mut ranks: Vec<usize>, mut diffs: Vec<AlgMatrix>) -> Result<Self> {
        let len = ranks.len() as i64;
        let internal_min = if len == 0 { -min_degree } else { -(min_degree + len - 1) };
        ranks.reverse();
        diffs.reverse();
        Self::new(alg, Direction::Chain, internal_min, ranks, diffs)
    }

    pub fn zero(alg: Arc<GroupAlgebra>, direction: Direction) -> Self {
        FreeComplex { alg, direction, min_degree: 0, ranks: Vec::new(), diffs: Vec::new() }
    }

    fn check_shapes(&self) -> Result<()> {
        let expected = self.ranks.len().saturating_sub(1);
        if self.diffs.len() != expected {
            return Err(Error::Shape(format!("{} differentials for {} modules", self.diffs.len(), self.ranks.len())));
        }
        for (t, d) in self.diffs.iter().enumerate() {
            if d.rows != self.ranks[t + 1] || d.cols != self.ranks[t] {
                return Err(Error::Shape(format!(
                    "differential leaving internal degree {} is {}x{}, expected {}x{}",
                    self.min_degree + t as i64,
                    d.rows,
                    d.cols,
                    self.ranks[t + 1],
                    self.ranks[t]
                )));
            }
            if d.entries.iter().any(|x| !same_group(x.group(), self.alg.group())) {
                return Err(Error::Group(crate::pgroup::GroupError::GroupMismatch));
            }
        }
        Ok(())
    }

    /// Checks `d∘d = 0` at the algebra level.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.diffs.len().saturating_sub(1) {
            let comp = self.diffs[t + 1].mul_in(&self.diffs[t], &self.alg)?;
            for i in 0..comp.rows {
                for j in 0..comp.cols {
                    if !comp.get(i, j).is_zero() {
                        return Err(Error::NotAComplex { degree: self.native(self.min_degree + t as i64), row: i, col: j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.alg
    }
    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }
    pub fn direction(&self) -> Direction {
        self.direction
    }
    /// Smallest internal degree.
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }
    /// Largest internal degree (`min_degree − 1` when empty).
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.ranks.len() as i64 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.max_degree()
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn diffs(&self) -> &[AlgMatrix] {
        &self.diffs
    }
    /// Native degree of an internal degree.
    pub fn native(&self, q: i64) -> i64 {
        match self.direction {
            Direction::Chain => -q,
            Direction::Cochain => q,
        }
    }
    /// Internal degree of a native degree.
    pub fn internal(&self, n: i64) -> i64 {
        self.native(n)
    }
    pub fn rank_at(&self, q: i64) -> usize {
        if q < self.min_degree || q > self.max_degree() {
            0
        } else {
            self.ranks[(q - self.min_degree) as usize]
        }
    }
    pub fn native_rank(&self, n: i64) -> usize {
        self.rank_at(self.internal(n))
    }
    /// Differential leaving internal degree `q`.
    pub fn diff_at(&self, q: i64) -> AlgMatrix {
        if q >= self.min_degree && q < self.max_degree() {
            self.diffs[(q - self.min_degree) as usize].clone()
        } else {
            AlgMatrix::zero(&self.alg, self.rank_at(q + 1), self.rank_at(q))
        }
    }
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }
    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Native minimum degree and per-native-degree ranks, ascending.
    pub fn native_ranks(&self) -> (i64, Vec<usize>) {
        match self.direction {
            Direction::Cochain => (self.min_degree, self.ranks.clone()),
            Direction::Chain => {
                let mut r = self.ranks.clone();
                r.reverse();
                (-self.max_degree(), r)
            }
        }
    }

    /// Native differentials: for cochain complexes `d: C^{n} → C^{n+1}`,
    /// for chain complexes `d: C_{n+1} → C_n`, ascending in `n`.
    pub fn native_diffs(&self) -> Vec<AlgMatrix> {
        match self.direction {
            Direction::Cochain => self.diffs.clone(),
            Direction::Chain => self.diffs.iter().rev().cloned().collect(),
        }
    }

    /// Same complex regarded over a structurally equal algebra.
    pub fn with_algebra(&self, alg: &Arc<GroupAlgebra>) -> Result<Self> {
        if !same_group(self.alg.group(), alg.group()) {
            return Err(Error::Group(crate::pgroup::GroupError::GroupMismatch));
        }
        let diffs = self
            .diffs
            .iter()
            .map(|d| AlgMatrix { rows: d.rows, cols: d.cols, entries: d.entries.iter().map(|x| x.rebase(alg.group()).expect("checked")).collect() })
            .collect();
        Ok(FreeComplex { alg: alg.clone(), direction: self.direction, min_degree: self.min_degree, ranks: self.ranks.clone(), diffs })
    }

    /// Regular-representation expansion over F_p.
    pub fn expand(&self) -> ExpandedComplex {
        let n = self.alg.order();
        ExpandedComplex {
            field: self.field(),
            min_degree: self.min_degree,
            dims: self.ranks.iter().map(|r| r * n).collect(),
            diffs: self.diffs.par_iter().map(|d| d.expand(&self.alg)).collect(),
        }
    }

    pub fn homology(&self) -> HomologyRecord {
        self.expand().homology()
    }

    /// The F_p-complex `C ⊗_{FG} F` (entries replaced by their augmentation).
    pub fn reduce_mod_augmentation(&self) -> ExpandedComplex {
        ExpandedComplex {
            field: self.field(),
            min_degree: self.min_degree,
            dims: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.augmentation(self.field())).collect(),
        }
    }

    /// Dual complex on dual bases, `d(f) = −(−1)^{|f|} f∘d`. Only for
    /// commutative group algebras.
    pub fn dualize(&self) -> Result<Self> {
        if !self.alg.group().is_abelian() {
            return Err(Error::Unsupported("dualize needs a commutative group algebra".into()));
        }
        let f = self.field();
        if self.ranks.is_empty() {
            return Ok(FreeComplex::zero(self.alg.clone(), self.direction.flip()));
        }
        let min = -self.max_degree();
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let mut diffs = Vec::with_capacity(self.diffs.len());
        for t in 0..self.diffs.len() {
            let m = min + t as i64;
            let d = self.diff_at(-m - 1);
            diffs.push(d.transpose().scale(f.neg(sign(f, m))));
        }
        FreeComplex::new(self.alg.clone(), self.direction.flip(), min, ranks, diffs)
    }

    /// Raises native degrees by `r`; the differential picks up `(−1)^r`.
    pub fn shift(&self, r: i64) -> Self {
        let s = sign(self.field(), r);
        let min_degree = match self.direction {
            Direction::Cochain => self.min_degree + r,
            Direction::Chain => self.min_degree - r,
        };
        FreeComplex {
            alg: self.alg.clone(),
            direction: self.direction,
            min_degree,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(s)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.direction != other.direction || !same_group(self.alg.group(), other.alg.group()) {
            return Err(Error::Shape("direct sum needs equal directions and groups".into()));
        }
        let (lo, hi) = span(self, other);
        let ranks: Vec<usize> = (lo..=hi).map(|q| self.rank_at(q) + other.rank_at(q)).collect();
        let mut diffs = Vec::new();
        for q in lo..hi {
            let a = self.diff_at(q);
            let d = other.diff_at(q);
            let b = AlgMatrix::zero(&self.alg, a.rows, d.cols);
            let c = AlgMatrix::zero(&self.alg, d.rows, a.cols);
            diffs.push(AlgMatrix::block(&a, &b, &c, &d)?);
        }
        FreeComplex::new(self.alg.clone(), self.direction, lo, ranks, diffs)
    }

    /// Mapping cone of `f: C → D`: internally `Cone^q = D^q ⊕ C^{q+1}` with
    /// differential `[[d_D, −f], [0, −d_C]]`. For chain complexes this is
    /// `Cone_n = D_n ⊕ C_{n−1}`, and its dual carries the block
    /// `(−1)^m w^*` below the diagonal.
    pub fn cone(f: &ChainMap) -> Result<Self> {
        f.verify()?;
        let (c, d) = (&f.source, &f.target);
        let alg = d.alg.clone();
        let lo = d.min_degree.min(c.min_degree - 1);
        let hi = d.max_degree().max(c.max_degree() - 1);
        if hi < lo {
            return Ok(FreeComplex::zero(alg, d.direction));
        }
        let ranks: Vec<usize> = (lo..=hi).map(|q| d.rank_at(q) + c.rank_at(q + 1)).collect();
        let mut diffs = Vec::new();
        for q in lo..hi {
            let dd = d.diff_at(q);
            let fq = f.block(q + 1).neg();
            let zero = AlgMatrix::zero(&alg, c.rank_at(q + 2), d.rank_at(q));
            let dc = c.diff_at(q + 1).neg();
            diffs.push(AlgMatrix::block(&dd, &fq, &zero, &dc)?);
        }
        FreeComplex::new(alg, d.direction, lo, ranks, diffs)
    }

    /// Tensor product over F with the Koszul sign `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`;
    /// the result lives over the product group (colexicographic indexing).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.direction != other.direction {
            return Err(Error::Shape("tensor needs equal directions".into()));
        }
        let (a1, a2) = (&self.alg, &other.alg);
        let alg = if a2.order() == 1 && a2.p() == a1.p() {
            a1.clone()
        } else if a1.order() == 1 && a1.p() == a2.p() {
            a2.clone()
        } else {
            GroupAlgebra::new(a1.group().direct_product(a2.group())?)?
        };
        let n1 = a1.order();
        let embed1 = |x: &AlgebraElement| -> AlgebraElement {
            let mut c = vec![0; alg.order()];
            for (g, &v) in x.coeffs().iter().enumerate() {
                c[g] = v;
            }
            alg.from_coeffs(c).expect("sizes agree")
        };
        let embed2 = |x: &AlgebraElement| -> AlgebraElement {
            let mut c = vec![0; alg.order()];
            for (h, &v) in x.coeffs().iter().enumerate() {
                c[n1 * h] = v;
            }
            alg.from_coeffs(c).expect("sizes agree")
        };
        if self.ranks.is_empty() || other.ranks.is_empty() {
            return Ok(FreeComplex::zero(alg, self.direction));
        }
        let lo = self.min_degree + other.min_degree;
        let hi = self.max_degree() + other.max_degree();
        // offset of block (i, j) inside degree i + j
        let offset = |i: i64, j: i64| -> usize { (self.min_degree..i).map(|ii| self.rank_at(ii) * other.rank_at(i + j - ii)).sum() };
        let ranks: Vec<usize> = (lo..=hi).map(|m| (self.min_degree..=self.max_degree()).map(|i| self.rank_at(i) * other.rank_at(m - i)).sum()).collect();
        let f = self.field();
        let mut diffs = Vec::new();
        for m in lo..hi {
            let mut mat = AlgMatrix::zero(&alg, ranks[(m + 1 - lo) as usize], ranks[(m - lo) as usize]);
            for i in self.degrees() {
                let j = m - i;
                let (ri, rj) = (self.rank_at(i), other.rank_at(j));
                if ri == 0 || rj == 0 {
                    continue;
                }
                let src = offset(i, j);
                let dx = self.diff_at(i);
                let tgt_x = offset(i + 1, j);
                let dy = other.diff_at(j);
                let tgt_y = offset(i, j + 1);
                let s = sign(f, i);
                for a in 0..ri {
                    for b in 0..rj {
                        let col = src + a * rj + b;
                        for a2 in 0..dx.rows {
                            let e = dx.get(a2, a);
                            if !e.is_zero() {
                                mat.set(tgt_x + a2 * rj + b, col, embed1(e));
                            }
                        }
                        for b2 in 0..dy.rows {
                            let e = dy.get(b2, b);
                            if !e.is_zero() {
                                let rj2 = other.rank_at(j + 1);
                                mat.set(tgt_y + a * rj2 + b2, col, embed2(e).scale(s));
                            }
                        }
                    }
                }
            }
            diffs.push(mat);
        }
        FreeComplex::new(alg, self.direction, lo, ranks, diffs)
    }

    /// Restriction of scalars along φ: entries `u ↦ φ^{-1}(u)`.
    pub fn restrict_scalars(&self, phi: &GroupAutomorphism) -> Result<Self> {
        GroupAutomorphism::new(self.alg.group(), phi.images().to_vec())?;
        let inv = phi.inverse();
        Ok(FreeComplex {
            alg: self.alg.clone(),
            direction: self.direction,
            min_degree: self.min_degree,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.map(|x| x.apply(&inv))).collect(),
        })
    }

    /// Gaussian cancellation of unit entries until every entry lies in `I`.
    /// Returns the minimal complex and its rank profile (internal degrees ascending).
    pub fn minimize(&self) -> Result<(Self, Vec<usize>)> {
        let mut ranks = self.ranks.clone();
        let mut diffs = self.diffs.clone();
        loop {
            let pivot = diffs.iter().enumerate().find_map(|(t, d)| {
                (0..d.rows).find_map(|i| (0..d.cols).find(|&j| d.get(i, j).is_unit()).map(|j| (t, i, j)))
            });
            let Some((t, i, j)) = pivot else { break };
            let b = &diffs[t];
            let uinv = self.alg.inverse(b.get(i, j)).expect("unit entry");
            let rows: Vec<usize> = (0..b.rows).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..b.cols).filter(|&c| c != j).collect();
            let mut reduced = AlgMatrix::zero(&self.alg, rows.len(), cols.len());
            for (ri, &r) in rows.iter().enumerate() {
                let left = b.get(r, j).try_mul(&uinv)?;
                for (ci, &c) in cols.iter().enumerate() {
                    let corr = left.try_mul(b.get(i, c))?;
                    reduced.set(ri, ci, b.get(r, c) - &corr);
                }
            }
            diffs[t] = reduced;
            if t > 0 {
                diffs[t - 1] = diffs[t - 1].without(Some(j), None);
            }
            if t + 1 < diffs.len() {
                diffs[t + 1] = diffs[t + 1].without(None, Some(i));
            }
            ranks[t] -= 1;
            ranks[t + 1] -= 1;
        }
        let c = FreeComplex::new(self.alg.clone(), self.direction, self.min_degree, ranks.clone(), diffs)?;
        Ok((c, ranks))
    }

    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| d.entries.iter().all(|x| !x.is_unit()))
    }

    /// Alternating sum of ranks over internal degrees.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|q| if q.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank_at(q) as i64).sum()
    }
}

fn span(a: &FreeComplex, b: &FreeComplex) -> (i64, i64) {
    match (a.ranks.is_empty(), b.ranks.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.min_degree, b.max_degree()),
        (false, true) => (a.min_degree, a.max_degree()),
        (false, false) => (a.min_degree.min(b.min_degree), a.max_degree().max(b.max_degree())),
    }
}

/// A degree-preserving map of complexes, one block per internal degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: FreeComplex,
    target: FreeComplex,
    blocks: BTreeMap<i64, AlgMatrix>,
}

impl ChainMap {
    /// Builds and verifies a chain map; `block(q)` gives the matrix at internal degree `q`.
    pub fn new(source: &FreeComplex, target: &FreeComplex, block: impl Fn(i64) -> AlgMatrix) -> Result<Self> {
        let (lo, hi) = span(source, target);
        let mut blocks = BTreeMap::new();
        for q in lo..=hi {
            let b = block(q);
            if b.rows != target.rank_at(q) || b.cols != source.rank_at(q) {
                return Err(Error::Shape(format!("chain map block at degree {q} has the wrong shape")));
            }
            blocks.insert(q, b);
        }
        let m = ChainMap { source: source.clone(), target: target.clone(), blocks };
        m.verify()?;
        Ok(m)
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Result<Self> {
        Self::new(source, target, |q| AlgMatrix::zero(target.algebra(), target.rank_at(q), source.rank_at(q)))
    }

    pub fn identity(c: &FreeComplex) -> Result<Self> {
        Self::new(c, c, |q| AlgMatrix::identity(c.algebra(), c.rank_at(q)))
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }
    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn block(&self, q: i64) -> AlgMatrix {
        self.blocks
            .get(&q)
            .cloned()
            .unwrap_or_else(|| AlgMatrix::zero(self.target.algebra(), self.target.rank_at(q), self.source.rank_at(q)))
    }

    /// Checks `d_D f = f d_C` in every degree.
    pub fn verify(&self) -> Result<()> {
        if self.source.direction != self.target.direction || !same_group(self.source.alg.group(), self.target.alg.group()) {
            return Err(Error::Shape("chain map between complexes of different kinds".into()));
        }
        let alg = &self.target.alg;
        let (lo, hi) = span(&self.source, &self.target);
        for q in lo - 1..=hi {
            let lhs = self.target.diff_at(q).mul_in(&self.block(q), alg)?;
            let rhs = self.block(q + 1).mul_in(&self.source.diff_at(q), alg)?;
            if lhs != rhs {
                return Err(Error::NotAChainMap(self.source.native(q)));
            }
        }
        Ok(())
    }

    /// Degreewise invertibility over `F G`: square blocks whose augmentation is invertible.
    pub fn is_isomorphism(&self) -> bool {
        let f = self.target.field();
        let (lo, hi) = span(&self.source, &self.target);
        (lo..=hi).all(|q| {
            let b = self.block(q);
            b.rows == b.cols && (b.rows == 0 || b.augmentation(f).inverse().is_ok())
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        let alg = self.target.alg.clone();
        ChainMap::new(&self.source, &other.target, |q| other.block(q).mul_in(&self.block(q), &alg).expect("shapes agree"))
    }

    /// Induced map on homology at internal degree `q`, in the bases of the
    /// homology records of source and target.
    pub fn homology_map(&self, q: i64) -> Result<Matrix> {
        let hs = self.source.homology();
        let ht = self.target.homology();
        let f = self.target.field();
        let tex = self.target.expand();
        let zt = kernel(&tex.diff_at(q));
        let bt = tex.diff_at(q - 1).image();
        let qt = quotient(&zt, &bt)?;
        let m = self.block(q).expand(&self.target.alg);
        let reps = hs.representatives(q);
        let mut cols = Vec::new();
        for r in 0..reps.rows() {
            let img = m.mul_vec(reps.row(r))?;
            cols.push(qt.coords(&img)?);
        }
        Ok(Matrix::from_columns(f, ht.dim_at(q), &cols))
    }
}

/// An F_p cochain-indexed complex of finite-dimensional vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedComplex {
    field: PrimeField,
    min_degree: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl ExpandedComplex {
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim_at(&self, q: i64) -> usize {
        if q < self.min_degree || q > self.max_degree() {
            0
        } else {
            self.dims[(q - self.min_degree) as usize]
        }
    }
    pub fn diff_at(&self, q: i64) -> Matrix {
        if q >= self.min_degree && q < self.max_degree() {
            self.diffs[(q - self.min_degree) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim_at(q + 1), self.dim_at(q))
        }
    }

    pub fn homology(&self) -> HomologyRecord {
        let records: Vec<(usize, Matrix)> = (0..self.dims.len())
            .into_par_iter()
            .map(|t| {
                let q = self.min_degree + t as i64;
                let z = kernel(&self.diff_at(q));
                let b = self.diff_at(q - 1).image();
                let quo = quotient(&z, &b).expect("boundaries are cycles");
                (quo.dim(), quo.representatives().clone())
            })
            .collect();
        let (dims, representatives) = records.into_iter().unzip();
        HomologyRecord { min_degree: self.min_degree, dims, representatives }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(t, &d)| if (self.min_degree + t as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// Homology per internal degree with representative cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyRecord {
    min_degree: i64,
    dims: Vec<usize>,
    representatives: Vec<Matrix>,
}

impl HomologyRecord {
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim_at(&self, q: i64) -> usize {
        let t = q - self.min_degree;
        if t < 0 || t >= self.dims.len() as i64 {
            0
        } else {
            self.dims[t as usize]
        }
    }
    /// Representative cycles in expanded coordinates, one per row.
    pub fn representatives(&self, q: i64) -> Matrix {
        let t = q - self.min_degree;
        self.representatives[t as usize].clone()
    }
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(t, &d)| if (self.min_degree + t as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }
    /// Dimensions keyed by degree, dropping nothing.
    pub fn by_degree(&self) -> Vec<(i64, usize)> {
        self.dims.iter().enumerate().map(|(t, &d)| (self.min_degree + t as i64, d)).collect()
    }
}

/// Subspace spanned by the expanded rows `rows` of a free module of rank `r`.
pub fn module_span(field: PrimeField, dim: usize, rows: &[Vec<u32>]) -> Subspace {
    Subspace::from_vectors(field, dim, rows)
}
