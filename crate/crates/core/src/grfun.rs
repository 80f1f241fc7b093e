//! Degree-zero cochains `C⁰(G) = F^G`, their filtration by translation
//! against ideal powers, the functions `y_i` and the associated graded ring.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{quotient, Matrix, Quotient, Subspace};
use crate::pgroup::{same_group, AlgebraElement, GroupAlgebra, PGroup};

/// An F_p-valued function on G.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FunctionOnG {
    group: Arc<PGroup>,
    values: Vec<u32>,
}

impl FunctionOnG {
    pub fn from_values(group: &Arc<PGroup>, values: Vec<u32>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Shape(format!("{} values for a group of order {}", values.len(), group.order())));
        }
        let p = group.p();
        Ok(FunctionOnG { group: group.clone(), values: values.into_iter().map(|v| v % p).collect() })
    }
    pub fn zero(group: &Arc<PGroup>) -> Self {
        FunctionOnG { group: group.clone(), values: vec![0; group.order()] }
    }
    pub fn constant(group: &Arc<PGroup>, c: u32) -> Self {
        FunctionOnG { group: group.clone(), values: vec![c % group.p(); group.order()] }
    }
    pub fn indicator(group: &Arc<PGroup>, g: usize) -> Self {
        let mut f = Self::zero(group);
        f.values[g] = 1;
        f
    }
    /// Indicator of the identity.
    pub fn epsilon(group: &Arc<PGroup>) -> Self {
        Self::indicator(group, group.identity())
    }
    pub fn values(&self) -> &[u32] {
        &self.values
    }
    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
    pub fn sum(&self) -> u32 {
        let f = self.group.field();
        self.values.iter().fold(0, |a, &v| f.add(a, v))
    }

    fn zip(&self, other: &Self, op: impl Fn(u32, u32) -> u32) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::Group(crate::pgroup::GroupError::GroupMismatch));
        }
        Ok(FunctionOnG { group: self.group.clone(), values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect() })
    }

    /// Pointwise (cup) product.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        let f = self.group.field();
        self.zip(other, |a, b| f.mul(a, b))
    }
    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.group.field();
        self.zip(other, |a, b| f.add(a, b))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.group.field();
        self.zip(other, |a, b| f.sub(a, b))
    }
    pub fn scale(&self, c: u32) -> Self {
        let f = self.group.field();
        FunctionOnG { group: self.group.clone(), values: self.values.iter().map(|&v| f.mul(v, c)).collect() }
    }
    pub fn pow(&self, e: u32) -> Self {
        let f = self.group.field();
        FunctionOnG { group: self.group.clone(), values: self.values.iter().map(|&v| f.pow(v, e as u64)).collect() }
    }
}

/// Right action `(ψ.x)(σ) = Σ_g x_g ψ(gσ)`.
pub fn translate(psi: &FunctionOnG, x: &AlgebraElement) -> Result<FunctionOnG> {
    if !same_group(&psi.group, x.group()) {
        return Err(Error::Group(crate::pgroup::GroupError::GroupMismatch));
    }
    let g = &psi.group;
    let f = g.field();
    let n = g.order();
    let mut out = vec![0; n];
    for (h, &c) in x.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (sigma, o) in out.iter_mut().enumerate() {
            *o = f.add(*o, f.mul(c, psi.values[g.mul(h, sigma)]));
        }
    }
    Ok(FunctionOnG { group: g.clone(), values: out })
}

/// Least `k` with `ψ.λ = 0` for all `λ ∈ I^{k+1}`; `-1` for the zero function.
pub fn filtration_degree(alg: &GroupAlgebra, psi: &FunctionOnG) -> Result<i64> {
    if psi.is_zero() {
        return Ok(-1);
    }
    for k in 0..=alg.l() {
        let ik = alg.ideal(k + 1);
        let mut killed = true;
        for v in ik.basis_vectors() {
            if !translate(psi, &alg.from_coeffs(v)?)?.is_zero() {
                killed = false;
                break;
            }
        }
        if killed {
            return Ok(k as i64);
        }
    }
    Ok(alg.l() as i64)
}

/// `true` iff the values of ψ sum to zero.
pub fn in_augmentation_image(psi: &FunctionOnG) -> bool {
    psi.sum() == 0
}

/// The subspace `C⁰(G).I^m = ε.I^m`.
pub fn translated_ideal(alg: &GroupAlgebra, m: usize) -> Result<Subspace> {
    let eps = FunctionOnG::epsilon(alg.group());
    let mut rows = Vec::new();
    for v in alg.ideal(m).basis_vectors() {
        rows.push(translate(&eps, &alg.from_coeffs(v)?)?.values);
    }
    Ok(Subspace::from_vectors(alg.field(), alg.order(), &rows))
}

/// `F^k C⁰(G)` for `k = -1..=L`, stored at index `k + 1`.
pub fn function_filtration(alg: &GroupAlgebra) -> Result<Vec<Subspace>> {
    let l = alg.l();
    let mut levels = vec![Subspace::zero(alg.field(), alg.order())];
    for k in 0..=l {
        levels.push(translated_ideal(alg, l - k)?);
    }
    Ok(levels)
}

/// The functions `y_i(f_1^{x_1}…f_a^{x_a}) = x_i`.
#[derive(Clone, Debug)]
pub struct YBasis {
    pub y: Vec<FunctionOnG>,
    pub alpha: Vec<usize>,
}

/// Reads the `y_i` off the Jennings normal forms and checks them against the
/// group-ring expression
/// `ε.((f_a^{-1}−1)^{p−1}…f_i^{-1}(1−f_i^{-1})^{p−2}…(f_1^{-1}−1)^{p−1})`.
pub fn y_basis(alg: &GroupAlgebra) -> Result<YBasis> {
    let j = alg.jennings();
    let g = alg.group();
    let mut y = Vec::with_capacity(j.rank());
    for i in 0..j.rank() {
        let values = (0..alg.order()).map(|h| j.normal_form(h)[i]).collect();
        let yi = FunctionOnG::from_values(g, values)?;
        let closed = y_closed_formula(alg, i)?;
        if closed != yi {
            return Err(Error::Verification(format!("closed formula for y_{} disagrees with digit definition", i + 1)));
        }
        y.push(yi);
    }
    Ok(YBasis { y, alpha: j.alpha().to_vec() })
}

/// Evaluates the group-ring expression for `y_i` (0-based `i`).
pub fn y_closed_formula(alg: &GroupAlgebra, i: usize) -> Result<FunctionOnG> {
    let j = alg.jennings();
    let g = alg.group();
    let p = alg.p() as usize;
    let one = alg.one();
    let mut x = one.clone();
    for k in (0..j.rank()).rev() {
        let finv = alg.element(g.inv(j.basis()[k]));
        let factor = if k == i {
            &finv * &(&one - &finv).pow(p - 2)
        } else {
            (&finv - &one).pow(p - 1)
        };
        x = &x * &factor;
    }
    translate(&FunctionOnG::epsilon(g), &x)
}

/// The associated graded ring `gr∪ C⁰(G)` with its monomial basis.
#[derive(Clone, Debug)]
pub struct GradedRing {
    alg: Arc<GroupAlgebra>,
    levels: Vec<Subspace>,
    quotients: Vec<Quotient>,
    monomials: Vec<Vec<u32>>,
    degrees: Vec<usize>,
    by_degree: Vec<Vec<usize>>,
    /// Per degree: quotient coordinates → monomial coordinates.
    to_monomial: Vec<Matrix>,
    functions: Vec<FunctionOnG>,
    /// `structure[i][j]`: monomial coordinates of `m_i·m_j` in degree `deg_i + deg_j`.
    structure: Vec<Vec<Vec<u32>>>,
}

pub fn gr_cup(alg: &Arc<GroupAlgebra>) -> Result<GradedRing> {
    let l = alg.l();
    let p = alg.p();
    let yb = y_basis(alg)?;
    let a = yb.y.len();
    let levels = function_filtration(alg)?;
    let quotients: Vec<Quotient> = (0..=l).map(|k| quotient(&levels[k + 1], &levels[k])).collect::<Result<_, _>>()?;

    let mut monomials: Vec<Vec<u32>> = (0..alg.order()).map(|c| crate::pgroup::exponents_of_code(c, p, a)).collect();
    let weight = |x: &Vec<u32>| -> usize { x.iter().zip(&yb.alpha).map(|(&xi, &ai)| xi as usize * ai).sum() };
    monomials.sort_by(|x, y| weight(x).cmp(&weight(y)).then_with(|| x.cmp(y)));
    let degrees: Vec<usize> = monomials.iter().map(weight).collect();
    let mut by_degree = vec![Vec::new(); l + 1];
    for (i, &d) in degrees.iter().enumerate() {
        by_degree[d].push(i);
    }

    let g = alg.group();
    let mut functions = Vec::with_capacity(monomials.len());
    for x in &monomials {
        let mut f = FunctionOnG::constant(g, 1);
        for (yi, &e) in yb.y.iter().zip(x) {
            f = f.cup(&yi.pow(e))?;
        }
        functions.push(f);
    }

    let mut to_monomial = Vec::with_capacity(l + 1);
    for k in 0..=l {
        let q = &quotients[k];
        let mut cols = Vec::new();
        for &i in &by_degree[k] {
            let c = q.coords(functions[i].values()).map_err(|_| {
                Error::Verification(format!("monomial {:?} does not lie in F^{k}", monomials[i]))
            })?;
            cols.push(c);
        }
        let m = Matrix::from_columns(alg.field(), q.dim(), &cols);
        let inv = m
            .inverse()
            .map_err(|_| Error::Verification(format!("monomials of degree {k} are not a basis of gr^{k}")))?;
        to_monomial.push(inv);
    }

    let mut ring = GradedRing { alg: alg.clone(), levels, quotients, monomials, degrees, by_degree, to_monomial, functions, structure: Vec::new() };
    let n = ring.monomials.len();
    let mut structure = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = ring.degrees[i] + ring.degrees[j];
            if d > l {
                continue;
            }
            let prod = ring.functions[i].cup(&ring.functions[j])?;
            structure[i][j] = ring.class_of(d, &prod)?;
        }
    }
    ring.structure = structure;
    let top = n - 1;
    if ring.degrees[top] != l || ring.functions[top].is_zero() {
        return Err(Error::Verification("top monomial vanishes in gr^L".into()));
    }
    Ok(ring)
}

impl GradedRing {
    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.alg
    }
    pub fn l(&self) -> usize {
        self.alg.l()
    }
    pub fn dims(&self) -> Vec<usize> {
        self.quotients.iter().map(|q| q.dim()).collect()
    }
    /// `F^k` for `k ≥ -1`.
    pub fn level(&self, k: i64) -> &Subspace {
        let idx = (k + 1).clamp(0, self.levels.len() as i64 - 1) as usize;
        &self.levels[idx]
    }
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }
    pub fn monomial_degree(&self, i: usize) -> usize {
        self.degrees[i]
    }
    /// Global indices of the monomials of degree `k`.
    pub fn monomials_in_degree(&self, k: usize) -> &[usize] {
        self.by_degree.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn monomial_index(&self, x: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m == x)
    }
    pub fn monomial_function(&self, i: usize) -> &FunctionOnG {
        &self.functions[i]
    }

    /// Monomial coordinates of the class of `ψ ∈ F^k` in `gr^k`.
    pub fn class_of(&self, k: usize, psi: &FunctionOnG) -> Result<Vec<u32>> {
        let q = &self.quotients[k];
        let c = q.coords(psi.values()).map_err(|_| Error::Verification(format!("function does not lie in F^{k}")))?;
        Ok(self.to_monomial[k].mul_vec(&c)?)
    }

    /// Function representing a combination of degree-`k` monomials.
    pub fn function_of(&self, k: usize, coords: &[u32]) -> FunctionOnG {
        let f = self.alg.field();
        let mut vals = vec![0; self.alg.order()];
        for (&i, &c) in self.monomials_in_degree(k).iter().zip(coords) {
            f.axpy(&mut vals, c, self.functions[i].values());
        }
        FunctionOnG { group: self.alg.group().clone(), values: vals }
    }

    /// Product of monomial `i` and monomial `j` in monomial coordinates of
    /// degree `deg_i + deg_j`; empty when that degree exceeds `L`.
    pub fn structure_constant(&self, i: usize, j: usize) -> &[u32] {
        &self.structure[i][j]
    }

    /// Product of homogeneous elements given in degree-local coordinates.
    pub fn multiply(&self, j: usize, x: &[u32], k: usize, y: &[u32]) -> Vec<u32> {
        let f = self.alg.field();
        let d = j + k;
        if d > self.l() {
            return Vec::new();
        }
        let mut out = vec![0; self.monomials_in_degree(d).len()];
        for (&a, &xa) in self.monomials_in_degree(j).iter().zip(x) {
            for (&b, &yb) in self.monomials_in_degree(k).iter().zip(y) {
                let c = f.mul(xa, yb);
                if c != 0 {
                    f.axpy(&mut out, c, &self.structure[a][b]);
                }
            }
        }
        out
    }

    /// Poincaré polynomial coefficients `Σ_k dim gr^k t^k`.
    pub fn poincare(&self) -> Vec<usize> {
        self.dims()
    }

    /// Matrix of `[ψ] ↦ [ψ.λ]` from `gr^k` to `gr^{k−deg}`, where `λ ∈ I^{deg}`.
    pub fn translation_matrix(&self, lambda: &AlgebraElement, deg: usize, k: usize) -> Result<Matrix> {
        let src = self.monomials_in_degree(k);
        if k < deg {
            return Ok(Matrix::zeros(self.alg.field(), 0, src.len()));
        }
        let tgt = k - deg;
        let mut cols = Vec::with_capacity(src.len());
        for &i in src {
            let img = translate(&self.functions[i], lambda)?;
            cols.push(self.class_of(tgt, &img)?);
        }
        Ok(Matrix::from_columns(self.alg.field(), self.monomials_in_degree(tgt).len(), &cols))
    }
}

/// Expected Poincaré coefficients `∏_i (1 + t^{α_i} + … + t^{(p−1)α_i})`.
pub fn expected_poincare(alpha: &[usize], p: u32) -> Vec<usize> {
    let mut coeffs = vec![1usize];
    for &a in alpha {
        let mut next = vec![0; coeffs.len() + (p as usize - 1) * a];
        for (d, &c) in coeffs.iter().enumerate() {
            for e in 0..p as usize {
                next[d + e * a] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}
