//! Koszul complexes of `F_p (Z/p)^a` on the sequence `λ_i = f_i − 1`.
//!
//! Generators are 0-based internally; `z_s` runs over subsets of
//! `{0, …, a−1}` in lexicographic order of increasing lists, and
//! `d(z_s) = Σ_{i=1}^{m} (−1)^i λ_{s_i} z_{s∖s_i}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgcomplex::{AlgMatrix, ChainMap, FreeComplex};
use crate::linalg::Matrix;
use crate::pgroup::{exponent_code, AlgebraElement, GroupAlgebra, GroupAutomorphism, GroupSpec};

/// Subsets of `{0..a}` of size `m`, lexicographically ordered.
pub fn subsets(a: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, a: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..a {
            cur.push(i);
            rec(i + 1, a, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= a {
        rec(0, a, m, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Sign of `z_s ∧ z_t` relative to `z_{s∪t}`, or `None` if they overlap.
pub fn shuffle_sign(s: &[usize], t: &[usize]) -> Option<bool> {
    let mut inversions = 0;
    for &x in s {
        for &y in t {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Some(inversions % 2 == 1)
}

fn union(s: &[usize], t: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
    u.sort_unstable();
    u
}

/// An element of `K_m`: one coefficient per `m`-subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulChain {
    pub degree: usize,
    pub coeffs: Vec<AlgebraElement>,
}

impl KoszulChain {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    pub fn scale_by(&self, x: &AlgebraElement) -> Self {
        KoszulChain { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * x).collect() }
    }
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Shape("adding Koszul chains of different degrees".into()));
        }
        Ok(KoszulChain { degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }
    pub fn neg(&self) -> Self {
        KoszulChain { degree: self.degree, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    /// Coordinates in the expanded basis `(subset, g)`.
    pub fn expanded(&self) -> Vec<u32> {
        self.coeffs.iter().flat_map(|c| c.coeffs().iter().copied()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    p: u32,
    a: usize,
    alg: Arc<GroupAlgebra>,
    subsets: Vec<Vec<Vec<usize>>>,
    complex: FreeComplex,
}

/// The Koszul complex of `(λ_1, …, λ_a)` over `F_p (Z/p)^a`.
pub fn build_koszul(p: u32, a: usize) -> Result<KoszulComplex> {
    let alg = GroupAlgebra::from_spec(&GroupSpec::ElementaryAbelian { p, rank: a })?;
    KoszulComplex::over(alg, a)
}

impl KoszulComplex {
    fn over(alg: Arc<GroupAlgebra>, a: usize) -> Result<Self> {
        let p = alg.p();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=a).map(|m| subsets(a, m)).collect();
        let f = alg.field();
        let mut diffs = Vec::new();
        for m in 1..=a {
            let (src, tgt) = (&subsets[m], &subsets[m - 1]);
            let mut d = AlgMatrix::zero(&alg, tgt.len(), src.len());
            for (j, s) in src.iter().enumerate() {
                for (i0, &si) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != si).collect();
                    let row = tgt.iter().position(|t| *t == rest).expect("subset present");
                    let sign = if (i0 + 1) % 2 == 0 { 1 } else { f.neg(1) };
                    d.set(row, j, alg.lambda(si).scale(sign));
                }
            }
            diffs.push(d);
        }
        let ranks = subsets.iter().map(|s| s.len()).collect();
        let complex = FreeComplex::chain(alg.clone(), 0, ranks, diffs)?;
        Ok(KoszulComplex { p, a, alg, subsets, complex })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn a(&self) -> usize {
        self.a
    }
    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.alg
    }
    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }
    pub fn subsets(&self, m: usize) -> &[Vec<usize>] {
        self.subsets.get(m).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn subset_index(&self, s: &[usize]) -> Option<usize> {
        self.subsets(s.len()).iter().position(|t| t == s)
    }
    pub fn rank(&self, m: usize) -> usize {
        self.subsets(m).len()
    }

    pub fn zero_chain(&self, m: usize) -> KoszulChain {
        KoszulChain { degree: m, coeffs: vec![self.alg.zero(); self.rank(m)] }
    }
    /// `x·z_s`.
    pub fn basis_chain(&self, s: &[usize], x: AlgebraElement) -> KoszulChain {
        let mut c = self.zero_chain(s.len());
        c.coeffs[self.subset_index(s).expect("valid subset")] = x;
        c
    }
    pub fn chain_from_expanded(&self, m: usize, v: &[u32]) -> KoszulChain {
        let n = self.alg.order();
        KoszulChain { degree: m, coeffs: (0..self.rank(m)).map(|i| self.alg.from_coeffs(v[i * n..(i + 1) * n].to_vec()).expect("length")).collect() }
    }

    /// `λ_{s_1}^{p−1} ⋯ λ_{s_r}^{p−1}`.
    pub fn power_monomial(&self, s: &[usize]) -> AlgebraElement {
        s.iter().fold(self.alg.one(), |acc, &i| &acc * &self.alg.lambda(i).pow(self.p as usize - 1))
    }
    /// `λ_{s_1}^{p−1} ⋯ λ_{s_r}^{p−1} z_s`, the standard cycle for `s`.
    pub fn standard_cycle(&self, s: &[usize]) -> KoszulChain {
        self.basis_chain(s, self.power_monomial(s))
    }

    /// Native differential `d_m: K_m → K_{m−1}`.
    pub fn differential_matrix(&self, m: usize) -> AlgMatrix {
        self.complex.diff_at(-(m as i64))
    }

    pub fn differential(&self, c: &KoszulChain) -> KoszulChain {
        if c.degree == 0 {
            return KoszulChain { degree: 0, coeffs: Vec::new() };
        }
        let d = self.differential_matrix(c.degree);
        let mut out = self.zero_chain(c.degree - 1);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                out.coeffs[i] = &out.coeffs[i] + &(d.get(i, j) * &c.coeffs[j]);
            }
        }
        out
    }

    pub fn is_cycle(&self, c: &KoszulChain) -> bool {
        c.degree == 0 || self.differential(c).is_zero()
    }

    /// Exterior product, bilinear over the (commutative) group algebra.
    pub fn wedge(&self, x: &KoszulChain, y: &KoszulChain) -> KoszulChain {
        let m = x.degree + y.degree;
        let mut out = self.zero_chain(m);
        if m > self.a {
            return out;
        }
        for (i, s) in self.subsets(x.degree).iter().enumerate() {
            if x.coeffs[i].is_zero() {
                continue;
            }
            for (j, t) in self.subsets(y.degree).iter().enumerate() {
                if y.coeffs[j].is_zero() {
                    continue;
                }
                if let Some(neg) = shuffle_sign(s, t) {
                    let k = self.subset_index(&union(s, t)).expect("union is a subset");
                    let prod = &x.coeffs[i] * &y.coeffs[j];
                    out.coeffs[k] = if neg { &out.coeffs[k] - &prod } else { &out.coeffs[k] + &prod };
                }
            }
        }
        out
    }

    fn expanded_differential(&self, m: usize) -> Matrix {
        self.differential_matrix(m).expand(&self.alg)
    }

    /// Coordinates of `[c]` in the basis of standard cycles of degree `c.degree`.
    pub fn homology_class(&self, c: &KoszulChain) -> Result<Vec<u32>> {
        if !self.is_cycle(c) {
            return Err(Error::NotACycle);
        }
        let m = c.degree;
        let f = self.alg.field();
        let dim = self.rank(m) * self.alg.order();
        let gens: Vec<Vec<u32>> = self.subsets(m).iter().map(|s| self.standard_cycle(s).expanded()).collect();
        let mut cols = gens.clone();
        if m < self.a {
            let bnd = self.expanded_differential(m + 1).image();
            cols.extend(bnd.basis_vectors());
        }
        let system = Matrix::from_columns(f, dim, &cols);
        let x = system.solve(&c.expanded())?.ok_or_else(|| Error::Verification("cycle outside the span of the standard classes".into()))?;
        Ok(x[..gens.len()].to_vec())
    }

    /// Returns the normal form of a cycle and `b` with `c = normal + d(b)`.
    pub fn normalize_cycle(&self, c: &KoszulChain) -> Result<(KoszulCycle, KoszulChain)> {
        let mu = self.homology_class(c)?;
        let cycle = KoszulCycle { p: self.p, a: self.a, r: c.degree, mu, raw: Some(c.clone()) };
        let normal = cycle.chain(self);
        let diff = c.add(&normal.neg())?;
        let b = if diff.is_zero() || c.degree >= self.a {
            self.zero_chain(c.degree + 1)
        } else {
            let v = self.expanded_differential(c.degree + 1).solve(&diff.expanded())?.ok_or_else(|| Error::Verification("difference is not a boundary".into()))?;
            self.chain_from_expanded(c.degree + 1, &v)
        };
        let raw = if diff.is_zero() { None } else { Some(c.clone()) };
        Ok((KoszulCycle { raw, ..cycle }, b))
    }

    /// Solves `d z = x` for `z ∈ K_{m+1}`, permuting the unknowns first so
    /// that different pivot choices can be compared.
    /// Some `b` with `d b = x`, if `x` is a boundary.
    pub fn boundary_preimage(&self, x: &KoszulChain) -> Result<Option<KoszulChain>> {
        self.solve_boundary(x, None)
    }

    fn solve_boundary(&self, x: &KoszulChain, order: Option<&[usize]>) -> Result<Option<KoszulChain>> {
        let m = x.degree + 1;
        if m > self.a {
            return Ok(if x.is_zero() { Some(self.zero_chain(m)) } else { None });
        }
        let d = self.expanded_differential(m);
        let n = d.cols();
        let perm: Vec<usize> = order.map(|o| o.to_vec()).unwrap_or_else(|| (0..n).collect());
        let permuted = Matrix::from_fn(d.field(), d.rows(), n, |i, j| d.get(i, perm[j]));
        let Some(y) = permuted.solve(&x.expanded())? else { return Ok(None) };
        let mut v = vec![0; n];
        for (j, &pj) in perm.iter().enumerate() {
            v[pj] = y[j];
        }
        Ok(Some(self.chain_from_expanded(m, &v)))
    }

    /// Class of `λ^{p−1} z` where `d z = λ`, checked against the closed form
    /// `−μ_i^p = −μ_i` read off from `λ ≡ Σ μ_i λ_i mod I²`.
    pub fn class_of_power_cycle(&self, lambda: &AlgebraElement) -> Result<Vec<u32>> {
        self.class_of_power_cycle_with(lambda, None)
    }

    pub fn class_of_power_cycle_with(&self, lambda: &AlgebraElement, order: Option<&[usize]>) -> Result<Vec<u32>> {
        if lambda.augmentation() != 0 {
            return Err(Error::Invalid("element is not in the augmentation ideal".into()));
        }
        let x = KoszulChain { degree: 0, coeffs: vec![lambda.clone()] };
        let z = self.solve_boundary(&x, order)?.ok_or_else(|| Error::Verification("λ is not a boundary in K".into()))?;
        let cls = self.homology_class(&z.scale_by(&lambda.pow(self.p as usize - 1)))?;
        let f = self.alg.field();
        let predicted: Vec<u32> = self.linear_part(lambda).iter().map(|&m| f.neg(f.pow(m, self.p as u64))).collect();
        if cls != predicted {
            return Err(Error::Verification(format!("power cycle class {cls:?} differs from the closed form {predicted:?}")));
        }
        Ok(cls)
    }

    /// Coordinates of `x + I²` in the basis `λ_1, …, λ_a` of `I/I²`.
    pub fn linear_part(&self, x: &AlgebraElement) -> Vec<u32> {
        let c = self.alg.lambda_coords(x);
        (0..self.a)
            .map(|i| {
                let mut e = vec![0; self.a];
                e[i] = 1;
                c[exponent_code(&e, self.p)]
            })
            .collect()
    }

    /// Right action of `aut(G)` on `H_1(K)` together with `Φ: φ^*K → K`.
    pub fn aut_action(&self, phi: &GroupAutomorphism) -> Result<AutAction> {
        GroupAutomorphism::new(self.alg.group(), phi.images().to_vec())?;
        let inv = phi.inverse();
        let f = self.alg.field();
        let n = self.alg.order();
        let a = self.a;
        // φ^{-1}(λ_i) = Σ_j a_ji λ_j
        let blocks: Vec<Matrix> = (0..a).map(|j| self.alg.left_mul_matrix(&self.alg.lambda(j))).collect();
        let mut system = Matrix::zeros(f, n, a * n);
        for (j, b) in blocks.iter().enumerate() {
            system.set_block(0, j * n, b);
        }
        let mut coeffs = vec![vec![self.alg.zero(); a]; a];
        let mut degree_one = Vec::with_capacity(a);
        for i in 0..a {
            let target = self.alg.lambda(i).apply(&inv);
            let sol = system.solve(target.coeffs())?.ok_or_else(|| Error::Verification("φ^{-1}(λ_i) outside the ideal".into()))?;
            let mut chain = self.zero_chain(1);
            for j in 0..a {
                let x = self.alg.from_coeffs(sol[j * n..(j + 1) * n].to_vec())?;
                coeffs[j][i] = x.clone();
                chain.coeffs[j] = x;
            }
            degree_one.push(chain);
        }
        let source = self.complex.restrict_scalars(phi)?;
        let target = &self.complex;
        let mut blocks = BTreeMap::new();
        for m in 0..=a {
            let cols: Vec<KoszulChain> = self
                .subsets(m)
                .iter()
                .map(|s| s.iter().fold(self.basis_chain(&[], self.alg.one()), |acc, &i| self.wedge(&acc, &degree_one[i])))
                .collect();
            let mat = AlgMatrix::from_fn(self.rank(m), cols.len(), |r, c| cols[c].coeffs[r].clone());
            blocks.insert(-(m as i64), mat);
        }
        let iso = ChainMap::new(&source, target, |q| blocks[&q].clone())?;
        if !iso.is_isomorphism() {
            return Err(Error::Verification("Φ is not invertible".into()));
        }
        // ρ(φ)[λ_i^{p−1} z_i] = [Φ(z_i·φ^{-1}(λ_i^{p−1}))]
        let mut rho_cols = Vec::with_capacity(a);
        for (i, d1) in degree_one.iter().enumerate() {
            let w = d1.scale_by(&self.power_monomial(&[i]).apply(&inv));
            rho_cols.push(self.homology_class(&w)?);
        }
        let rho = Matrix::from_columns(f, a, &rho_cols);
        let expected = Matrix::from_columns(f, a, &(0..a).map(|i| self.linear_part(&self.alg.lambda(i).apply(&inv))).collect::<Vec<_>>());
        if rho != expected {
            return Err(Error::Verification("ρ(φ) differs from φ^{-1} on I/I²".into()));
        }
        Ok(AutAction { rho, coefficients: coeffs, phi_iso: iso, degree_one })
    }

    /// Cone of `w∧−: Σ^r K → K`, i.e. `Cone_m = K_m ⊕ K_{m−r−1}`.
    pub fn cone_of_chain(&self, w: &KoszulChain) -> Result<FreeComplex> {
        FreeComplex::cone(&self.wedge_map(w)?)
    }

    /// The chain map `w∧−: Σ^r K → K` for a cycle `w ∈ K_r`.
    pub fn wedge_map(&self, w: &KoszulChain) -> Result<ChainMap> {
        if !self.is_cycle(w) {
            return Err(Error::NotACycle);
        }
        let r = w.degree as i64;
        let k = &self.complex;
        let sk = k.shift(r);
        ChainMap::new(&sk, k, |q| {
            let n = -q;
            let src_m = n - r;
            if n < 0 || src_m < 0 || n as usize > self.a {
                return AlgMatrix::zero(&self.alg, k.rank_at(q), sk.rank_at(q));
            }
            let cols: Vec<KoszulChain> = self.subsets(src_m as usize).iter().map(|s| self.wedge(w, &self.basis_chain(s, self.alg.one()))).collect();
            AlgMatrix::from_fn(k.rank_at(q), sk.rank_at(q), |i, j| cols[j].coeffs[i].clone())
        })
    }

    pub fn build_cone(&self, w: &KoszulCycle) -> Result<FreeComplex> {
        self.cone_of_chain(&w.chain(self))
    }

    pub fn dual_cone(&self, w: &KoszulCycle) -> Result<FreeComplex> {
        self.build_cone(w)?.dualize()
    }
}

/// Output of [`KoszulComplex::aut_action`].
#[derive(Clone, Debug)]
pub struct AutAction {
    /// Matrix of ρ(φ) on `H_1` in the standard-cycle basis.
    pub rho: Matrix,
    /// `coefficients[j][i] = a_ji`.
    pub coefficients: Vec<Vec<AlgebraElement>>,
    pub phi_iso: ChainMap,
    /// `Φ(z_i)` for each `i`.
    pub degree_one: Vec<KoszulChain>,
}

/// A Koszul cycle in normal form `Σ_s μ_s λ_s^{p−1} z_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCycle {
    pub p: u32,
    pub a: usize,
    pub r: usize,
    /// Indexed like `subsets(a, r)`.
    pub mu: Vec<u32>,
    #[serde(skip)]
    pub raw: Option<KoszulChain>,
}

impl KoszulCycle {
    pub fn new(p: u32, a: usize, r: usize, mu: Vec<u32>) -> Result<Self> {
        if mu.len() != binomial(a, r) {
            return Err(Error::Shape(format!("{} coefficients for {} subsets", mu.len(), binomial(a, r))));
        }
        let f = crate::linalg::PrimeField::new(p)?;
        Ok(KoszulCycle { p, a, r, mu: mu.into_iter().map(|m| f.reduce(m as i64)).collect(), raw: None })
    }

    /// From a map of subsets to coefficients.
    pub fn from_terms(p: u32, a: usize, r: usize, terms: &BTreeMap<Vec<usize>, u32>) -> Result<Self> {
        let subs = subsets(a, r);
        let mut mu = vec![0; subs.len()];
        for (s, &c) in terms {
            let i = subs.iter().position(|t| t == s).ok_or_else(|| Error::Invalid(format!("{s:?} is not a {r}-subset of 0..{a}")))?;
            mu[i] = c;
        }
        Self::new(p, a, r, mu)
    }

    pub fn zero(p: u32, a: usize, r: usize) -> Self {
        KoszulCycle { p, a, r, mu: vec![0; binomial(a, r)], raw: None }
    }

    pub fn is_zero_class(&self) -> bool {
        self.mu.iter().all(|&m| m == 0)
    }

    /// Nonzero coefficients keyed by subset.
    pub fn terms(&self) -> Vec<(Vec<usize>, u32)> {
        subsets(self.a, self.r).into_iter().zip(&self.mu).filter(|(_, &m)| m != 0).map(|(s, &m)| (s, m)).collect()
    }

    /// The normal-form chain.
    pub fn chain(&self, k: &KoszulComplex) -> KoszulChain {
        let mut c = k.zero_chain(self.r);
        for (i, s) in k.subsets(self.r).iter().enumerate() {
            c.coeffs[i] = k.power_monomial(s).scale(self.mu[i]);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn build_examples() {
        assert_eq!(build_koszul(2, 2).unwrap().complex().native_ranks(), (0, vec![1, 2, 1]));
        assert_eq!(build_koszul(3, 3).unwrap().complex().native_ranks(), (0, vec![1, 3, 3, 1]));
        let k0 = build_koszul(2, 0).unwrap();
        assert_eq!(k0.complex().native_ranks(), (0, vec![1]));
        assert_eq!(k0.algebra().order(), 1);
    }

    #[test]
    fn signs_follow_the_stated_formula() {
        let k = build_koszul(3, 2).unwrap();
        let alg = k.algebra();
        let d = k.differential(&k.basis_chain(&[0, 1], alg.one()));
        // d(z_12) = −λ_1 z_2 + λ_2 z_1
        assert_eq!(d.coeffs, vec![alg.lambda(1), -&alg.lambda(0)]);
        assert_eq!(k.differential(&k.basis_chain(&[0], alg.one())).coeffs, vec![-&alg.lambda(0)]);
    }

    #[test]
    fn wedge_examples() {
        let k = build_koszul(3, 2).unwrap();
        let alg = k.algebra();
        let z1 = k.basis_chain(&[0], alg.one());
        let z2 = k.basis_chain(&[1], alg.one());
        assert_eq!(k.wedge(&z1, &z2), k.basis_chain(&[0, 1], alg.one()));
        assert_eq!(k.wedge(&z2, &z1), k.basis_chain(&[0, 1], -&alg.one()));
        assert!(k.wedge(&z1, &z1).is_zero());
        let w = k.wedge(&k.standard_cycle(&[0]), &k.standard_cycle(&[1]));
        assert_eq!(w, k.standard_cycle(&[0, 1]));
    }

    #[test]
    fn homology_class_examples() {
        for p in [2, 3] {
            let k = build_koszul(p, 2).unwrap();
            let alg = k.algebra();
            assert_eq!(k.homology_class(&k.standard_cycle(&[0])).unwrap(), vec![1, 0]);
            let b = k.differential(&k.basis_chain(&[0, 1], alg.one()));
            assert_eq!(k.homology_class(&b).unwrap(), vec![0, 0]);
            assert_eq!(k.homology_class(&k.basis_chain(&[0], alg.one())), Err(Error::NotACycle));
        }
        let k = build_koszul(2, 2).unwrap();
        let top = k.basis_chain(&[0, 1], &k.algebra().lambda(0) * &k.algebra().lambda(1));
        assert_eq!(k.homology_class(&top).unwrap(), vec![1]);
    }

    #[test]
    fn normalize_examples() {
        let k = build_koszul(3, 2).unwrap();
        let alg = k.algebra();
        let w = k.standard_cycle(&[0]);
        let (n, b) = k.normalize_cycle(&w).unwrap();
        assert_eq!(n.mu, vec![1, 0]);
        assert!(n.raw.is_none());
        assert!(b.is_zero());
        let z12 = k.basis_chain(&[0, 1], alg.one());
        let c = w.add(&k.differential(&z12)).unwrap();
        let (n, b) = k.normalize_cycle(&c).unwrap();
        assert_eq!(n.mu, vec![1, 0]);
        assert_eq!(k.differential(&b), k.differential(&z12));
        assert_eq!(n.chain(&k).add(&k.differential(&b)).unwrap(), c);
        let (n, _) = k.normalize_cycle(&k.differential(&z12)).unwrap();
        assert!(n.is_zero_class());
    }

    #[test]
    fn power_cycle_examples() {
        let k = build_koszul(2, 2).unwrap();
        let alg = k.algebra();
        assert_eq!(k.class_of_power_cycle(&alg.lambda(0)).unwrap(), vec![1, 0]);
        assert_eq!(k.class_of_power_cycle(&(&alg.lambda(0) + &alg.lambda(1))).unwrap(), vec![1, 1]);
        assert_eq!(k.class_of_power_cycle(&(&alg.lambda(0) * &alg.lambda(1))).unwrap(), vec![0, 0]);
        assert!(k.class_of_power_cycle(&alg.one()).is_err());
        // odd p: the sign of d(z_i) = −λ_i shows up
        let k3 = build_koszul(3, 2).unwrap();
        assert_eq!(k3.class_of_power_cycle(&k3.algebra().lambda(0)).unwrap(), vec![2, 0]);
    }

    #[test]
    fn aut_action_examples() {
        let k = build_koszul(2, 2).unwrap();
        let g = k.algebra().group().clone();
        let id = k.aut_action(&GroupAutomorphism::identity(&g)).unwrap();
        assert_eq!(id.rho, Matrix::identity(k.algebra().field(), 2));
        let swap = GroupAutomorphism::new(&g, vec![0, 2, 1, 3]).unwrap();
        let rho = k.aut_action(&swap).unwrap().rho;
        assert_eq!(rho.to_rows(), vec![vec![0, 1], vec![1, 0]]);
        // φ(f1) = f1 f2, φ(f2) = f2
        let phi = GroupAutomorphism::new(&g, vec![0, 3, 2, 1]).unwrap();
        let rho = k.aut_action(&phi).unwrap().rho;
        assert_eq!(rho.column(0), vec![1, 1]);
    }

    #[test]
    fn cone_of_zero_splits() {
        let k = build_koszul(2, 2).unwrap();
        let c = k.build_cone(&KoszulCycle::zero(2, 2, 2)).unwrap();
        let split = k.complex().direct_sum(&k.complex().shift(3)).unwrap();
        assert_eq!(c.native_ranks(), split.native_ranks());
        assert_eq!(c.homology().total(), 8);
    }

    fn random_aut(g: &crate::pgroup::PGroup, a: usize, rng: &mut ChaCha8Rng) -> GroupAutomorphism {
        let p = g.p();
        let f = crate::linalg::PrimeField::new(p).unwrap();
        loop {
            let m = Matrix::from_fn(f, a, a, |_, _| rng.gen_range(0..p));
            if m.rank() < a {
                continue;
            }
            let n = g.order();
            let images = (0..n)
                .map(|x| {
                    let digits: Vec<u32> = (0..a).map(|i| ((x / (p as usize).pow(i as u32)) % p as usize) as u32).collect();
                    let img = m.mul_vec(&digits).unwrap();
                    img.iter().enumerate().map(|(i, &d)| d as usize * (p as usize).pow(i as u32)).sum()
                })
                .collect();
            return GroupAutomorphism::new(g, images).unwrap();
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn rho_is_a_right_action(seed in any::<u64>(), which in 0usize..3) {
            let (p, a) = [(2, 2), (2, 3), (3, 2)][which];
            let k = build_koszul(p, a).unwrap();
            let g = k.algebra().group().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f1 = random_aut(&g, a, &mut rng);
            let f2 = random_aut(&g, a, &mut rng);
            let r1 = k.aut_action(&f1).unwrap().rho;
            let r2 = k.aut_action(&f2).unwrap().rho;
            let r21 = k.aut_action(&f2.compose(&f1)).unwrap().rho;
            prop_assert_eq!(r1.mul(&r2).unwrap(), r21);
        }

        #[test]
        fn normalize_is_idempotent(seed in any::<u64>(), which in 0usize..3, r in 0usize..3) {
            let (p, a) = [(2, 2), (2, 3), (3, 2)][which];
            let k = build_koszul(p, a).unwrap();
            prop_assume!(r <= a);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = k.algebra();
            let mu: Vec<u32> = (0..k.rank(r)).map(|_| rng.gen_range(0..p)).collect();
            let w = KoszulCycle::new(p, a, r, mu).unwrap().chain(&k);
            let noise = if r < a {
                let b = KoszulChain { degree: r + 1, coeffs: (0..k.rank(r + 1)).map(|_| alg.from_coeffs((0..alg.order()).map(|_| rng.gen_range(0..p)).collect()).unwrap()).collect() };
                k.differential(&b)
            } else { k.zero_chain(r) };
            let c = w.add(&noise).unwrap();
            let (n1, _) = k.normalize_cycle(&c).unwrap();
            prop_assert_eq!(&n1.mu, &k.homology_class(&c).unwrap());
            let (n2, b2) = k.normalize_cycle(&n1.chain(&k)).unwrap();
            prop_assert_eq!(&n2.mu, &n1.mu);
            prop_assert!(b2.is_zero());
        }

        #[test]
        fn power_cycle_class_is_choice_free(seed in any::<u64>(), which in 0usize..3) {
            let (p, a) = [(2, 2), (2, 3), (3, 2)][which];
            let k = build_koszul(p, a).unwrap();
            let alg = k.algebra();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c: Vec<u32> = (0..alg.order()).map(|_| rng.gen_range(0..p)).collect();
            let s: u32 = c.iter().sum::<u32>() % p;
            c[0] = (c[0] + p - s) % p;
            let lambda = alg.from_coeffs(c).unwrap();
            let n = k.rank(1) * alg.order();
            let rev: Vec<usize> = (0..n).rev().collect();
            prop_assert_eq!(k.class_of_power_cycle(&lambda).unwrap(), k.class_of_power_cycle_with(&lambda, Some(&rev)).unwrap());
        }
    }

    #[test]
    fn total_homology_is_two_to_the_a() {
        for p in [2, 3] {
            for a in 0..=3 {
                let k = build_koszul(p, a).unwrap();
                assert_eq!(k.complex().homology().total(), 1 << a, "p={p} a={a}");
            }
        }
    }
}
