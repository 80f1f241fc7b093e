//! Dense exact linear algebra over prime fields.
//!
//! Subspaces are stored by their reduced row-echelon basis, so two equal
//! subspaces always compare equal as values.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field mismatch: F{0} vs F{1}")]
    FieldMismatch(u32, u32),
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("matrix is not invertible")]
    Singular,
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, (self.p - 2) as u64))
        }
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Signed representative in (-p/2, p/2], handy for display.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `y += c * x` on slices of equal length.
    pub fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(c, xi));
            }
        }
    }

    pub fn scale(self, x: &mut [u32], c: u32) {
        for xi in x.iter_mut() {
            *xi = self.mul(*xi, c);
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.p)
    }
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing entries mod p. All rows must have length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r.iter().map(|&x| x % field.p));
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        Matrix::from_fn(field, rows, columns.len(), |i, j| columns[j][i])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
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
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field.p, other.field.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.axpy(acc, a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                let r = self.row(i);
                let s: u64 = r.iter().zip(x).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % f.p as u64) as u32
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn scaled(&self, c: u32) -> Matrix {
        let mut m = self.clone();
        self.field.scale(&mut m.data, c);
        m
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: other.rows });
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    /// In-place RREF; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            f.scale(&mut self.data[r * cols..(r + 1) * cols], inv);
            let pivot_row: Vec<u32> = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i != r {
                    let factor = self.data[i * cols + c];
                    if factor != 0 {
                        f.axpy(&mut self.data[i * cols..(i + 1) * cols], f.neg(factor), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form, its pivot columns and rank.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Singular);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n))?;
        let (r, piv) = aug.rref_with_pivots();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(self.field, n, n, |i, j| r.get(i, n + j)))
    }

    /// Particular solution of `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let aug = self.hstack(&Matrix::from_columns(self.field, self.rows, &[b.to_vec()]))?;
        let (r, piv) = aug.rref_with_pivots();
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Column space as a subspace of F^rows.
    pub fn image(&self) -> Subspace {
        Subspace::from_spanning(&self.transpose())
    }

    /// Row space as a subspace of F^cols.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_spanning(self)
    }
}

/// `(rref, rank)` of a matrix.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let (r, piv) = m.rref_with_pivots();
    (r, piv.len())
}

/// Right null space `{x : m x = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field;
    let (r, piv) = m.rref_with_pivots();
    let mut is_pivot = vec![false; m.cols];
    for &c in &piv {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; m.cols];
        v[free] = 1;
        for (i, &c) in piv.iter().enumerate() {
            v[c] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    Subspace::from_vectors(f, m.cols, &basis)
}

/// A subspace of F_p^n stored by its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in F{}^{}) {:?}", self.dim(), self.basis.field.p, self.ambient_dim(), self.basis.to_rows())
    }
}

impl Subspace {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        Subspace { basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of the rows of `m`.
    pub fn from_spanning(m: &Matrix) -> Self {
        let (mut r, piv) = m.rref_with_pivots();
        r.rows = piv.len();
        r.data.truncate(piv.len() * r.cols);
        Subspace { basis: r, pivots: piv }
    }

    pub fn from_vectors(field: PrimeField, n: usize, vs: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vs.len() * n);
        for v in vs {
            assert_eq!(v.len(), n, "vector length must equal ambient dimension");
            data.extend(v.iter().map(|&x| x % field.p));
        }
        Subspace::from_spanning(&Matrix { field, rows: vs.len(), cols: n, data })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.basis.field
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.to_rows()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn check_ambient(&self, n: usize) -> Result<(), LinalgError> {
        if self.ambient_dim() != n {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim(), got: n });
        }
        Ok(())
    }

    /// Subtracts basis multiples so that `v` vanishes at every pivot column.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field();
        for (i, &c) in self.pivots.iter().enumerate() {
            let x = v[c];
            if x != 0 {
                f.axpy(v, f.neg(x), self.basis.row(i));
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim() && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other.ambient_dim())?;
        Ok(Subspace::from_spanning(&self.basis.vstack(&other.basis)?))
    }

    /// Rows spanning the orthogonal complement under the standard pairing.
    fn constraints(&self) -> Matrix {
        let k = kernel(&self.basis);
        k.basis
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other.ambient_dim())?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let a = other.constraints();
        // x = c U lies in other iff A U^T c = 0
        let m = a.mul(&self.basis.transpose())?;
        let coeffs = kernel(&m);
        let vs = coeffs.basis.mul(&self.basis)?;
        Ok(Subspace::from_spanning(&vs))
    }

    /// Image of the subspace under `m` (acting on column vectors).
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        self.check_ambient(m.cols)?;
        let imgs = self.basis.mul(&m.transpose())?;
        Ok(Subspace::from_spanning(&imgs))
    }
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace, LinalgError> {
    u.intersect(v)
}

/// `{x : m x ∈ v}`.
pub fn preimage(m: &Matrix, v: &Subspace) -> Result<Subspace, LinalgError> {
    v.check_ambient(m.rows)?;
    if v.is_full() {
        return Ok(Subspace::full(m.field, m.cols));
    }
    let a = v.constraints();
    Ok(kernel(&a.mul(m)?))
}

/// A quotient `outer / inner` with a canonical complement basis.
///
/// The complement consists of the vectors of `outer` vanishing on the pivot
/// columns of `inner`, in RREF. Coordinates of `x ∈ outer` are read off after
/// reducing `x` modulo `inner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    outer: Subspace,
    inner: Subspace,
    complement: Subspace,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.complement.dim()
    }
    pub fn outer(&self) -> &Subspace {
        &self.outer
    }
    pub fn inner(&self) -> &Subspace {
        &self.inner
    }
    /// Canonical representatives, one row per quotient basis vector.
    pub fn representatives(&self) -> &Matrix {
        self.complement.basis()
    }

    /// Coordinates of `x` in the complement basis. `x` must lie in `outer`.
    pub fn coords(&self, x: &[u32]) -> Result<Vec<u32>, LinalgError> {
        self.outer.check_ambient(x.len())?;
        let mut r = x.to_vec();
        self.inner.reduce(&mut r);
        let c: Vec<u32> = self.complement.pivots.iter().map(|&j| r[j]).collect();
        // verify membership: r minus its complement expansion must vanish
        let f = self.outer.field();
        for (i, &ci) in c.iter().enumerate() {
            f.axpy(&mut r, f.neg(ci), self.complement.basis.row(i));
        }
        if r.iter().any(|&v| v != 0) {
            return Err(LinalgError::NotContained);
        }
        Ok(c)
    }

    /// The canonical lift of a coordinate vector.
    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        let f = self.outer.field();
        let mut v = vec![0; self.outer.ambient_dim()];
        for (i, &c) in coords.iter().enumerate() {
            f.axpy(&mut v, c, self.complement.basis.row(i));
        }
        v
    }
}

pub fn quotient(v: &Subspace, u: &Subspace) -> Result<Quotient, LinalgError> {
    v.check_ambient(u.ambient_dim())?;
    if !u.is_subspace_of(v) {
        return Err(LinalgError::NotContained);
    }
    let mut rows = Vec::new();
    for i in 0..v.dim() {
        let mut r = v.basis.row(i).to_vec();
        u.reduce(&mut r);
        if r.iter().any(|&x| x != 0) {
            rows.push(r);
        }
    }
    let complement = Subspace::from_vectors(v.field(), v.ambient_dim(), &rows);
    Ok(Quotient { outer: v.clone(), inner: u.clone(), complement })
}
