//! Finite p-groups as multiplication tables, their modular group algebras,
//! augmentation-ideal powers and Jennings bases.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kernel, LinalgError, Matrix, PrimeField, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("order {0} is not a prime power")]
    NotPrimePower(usize),
    #[error("factors have different primes ({0} and {1})")]
    MixedPrimes(u32, u32),
    #[error("group mismatch between operands")]
    GroupMismatch,
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Description of a p-group. Structured constructors produce tables whose
/// element order is colexicographic in the generator exponents (the first
/// generator's exponent varies fastest).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    ElementaryAbelian { p: u32, rank: usize },
    Cyclic { order: usize },
    Product { factors: Vec<GroupSpec> },
    /// `N ⋊ ⟨b⟩` style extension: `N = Z/m_1 × … × Z/m_k`, `b v b^{-1} = A v`,
    /// `b^order = tail`. Elements are pairs `(v, j)` with `0 ≤ j < order`.
    Extension { moduli: Vec<usize>, action: Vec<Vec<i64>>, order: usize, tail: Vec<i64> },
    Table {
        #[serde(default)]
        p: Option<u32>,
        table: Vec<Vec<usize>>,
    },
}

fn prime_power(n: usize) -> Option<(u32, usize)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut m, mut e) = (n, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p as u32, e))
}

/// A finite p-group given by its multiplication table.
#[derive(Clone)]
pub struct PGroup {
    p: u32,
    rank: usize,
    identity: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    name: String,
}

impl PartialEq for PGroup {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.table == other.table
    }
}
impl Eq for PGroup {}

impl fmt::Debug for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PGroup({}, order {})", self.name, self.order())
    }
}

impl PGroup {
    pub fn build(spec: &GroupSpec) -> Result<PGroup, GroupError> {
        match spec {
            GroupSpec::ElementaryAbelian { p, rank } => {
                PrimeField::new(*p)?;
                let c = PGroup::cyclic(*p as usize)?;
                let mut g = PGroup::trivial(*p);
                for _ in 0..*rank {
                    g = g.direct_product(&c)?;
                }
                g.name = format!("(Z/{p})^{rank}");
                Ok(g)
            }
            GroupSpec::Cyclic { order } => PGroup::cyclic(*order),
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| GroupError::NotAGroup("empty product".into()))?;
                let mut g = PGroup::build(first)?;
                for f in it {
                    g = g.direct_product(&PGroup::build(f)?)?;
                }
                Ok(g)
            }
            GroupSpec::Extension { moduli, action, order, tail } => PGroup::extension(moduli, action, *order, tail),
            GroupSpec::Table { p, table } => PGroup::from_table(table, *p),
        }
    }

    pub fn trivial(p: u32) -> PGroup {
        PGroup { p, rank: 0, identity: 0, table: vec![0], inverse: vec![0], name: "1".into() }
    }

    pub fn cyclic(n: usize) -> Result<PGroup, GroupError> {
        let (p, rank) = prime_power(n).ok_or(GroupError::NotPrimePower(n))?;
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let inverse = (0..n).map(|i| (n - i) % n).collect();
        Ok(PGroup { p, rank, identity: 0, table, inverse, name: format!("Z/{n}") })
    }

    /// Validates an explicit table. `p` is needed only for the trivial group.
    pub fn from_table(rows: &[Vec<usize>], p: Option<u32>) -> Result<PGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::NotAGroup("table must be square with entries < order".into()));
        }
        let (p, rank) = if n == 1 {
            let p = p.ok_or_else(|| GroupError::NotAGroup("trivial table needs an explicit p".into()))?;
            PrimeField::new(p)?;
            (p, 0)
        } else {
            let (q, r) = prime_power(n).ok_or(GroupError::NotPrimePower(n))?;
            if let Some(p) = p {
                if p != q {
                    return Err(GroupError::NotPrimePower(n));
                }
            }
            (q, r)
        };
        let table: Vec<usize> = rows.iter().flatten().copied().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e * n + g] == g && table[g * n + e] == g))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g * n + h] == identity && table[h * n + g] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {g} has no inverse")))?;
        }
        let g = PGroup { p, rank, identity, table, inverse, name: format!("table group of order {n}") };
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn extension(moduli: &[usize], action: &[Vec<i64>], order: usize, tail: &[i64]) -> Result<PGroup, GroupError> {
        let k = moduli.len();
        if action.len() != k || action.iter().any(|r| r.len() != k) || tail.len() != k || order == 0 {
            return Err(GroupError::NotAGroup("extension data has inconsistent sizes".into()));
        }
        if moduli.iter().any(|&m| m == 0) {
            return Err(GroupError::NotAGroup("zero modulus".into()));
        }
        let n_size: usize = moduli.iter().product();
        let n = n_size * order;
        prime_power(n).ok_or(GroupError::NotPrimePower(n))?;
        let decode = |mut idx: usize| -> (Vec<i64>, usize) {
            let mut v = Vec::with_capacity(k);
            for &m in moduli {
                v.push((idx % m) as i64);
                idx /= m;
            }
            (v, idx)
        };
        let encode = |v: &[i64], j: usize| -> usize {
            let mut idx = j;
            for (i, &m) in moduli.iter().enumerate().rev() {
                idx = idx * m + v[i].rem_euclid(m as i64) as usize;
            }
            idx
        };
        let act = |v: &[i64]| -> Vec<i64> {
            (0..k)
                .map(|i| (0..k).map(|l| action[i][l] * v[l]).sum::<i64>().rem_euclid(moduli[i] as i64))
                .collect()
        };
        let mut rows = vec![vec![0; n]; n];
        for x in 0..n {
            let (v, j) = decode(x);
            for y in 0..n {
                let (mut w, jj) = decode(y);
                for _ in 0..j {
                    w = act(&w);
                }
                let mut s: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
                if j + jj >= order {
                    for (si, ti) in s.iter_mut().zip(tail) {
                        *si += ti;
                    }
                }
                rows[x][y] = encode(&s, (j + jj) % order);
            }
        }
        let mut g = PGroup::from_table(&rows, None)?;
        g.name = format!("extension of order {n}");
        Ok(g)
    }

    /// Direct product with colexicographic indexing `(g, h) ↦ g + |G|·h`.
    pub fn direct_product(&self, other: &PGroup) -> Result<PGroup, GroupError> {
        if self.order() == 1 && other.order() > 1 {
            let mut g = other.clone();
            g.p = other.p;
            return Ok(g);
        }
        if other.order() == 1 {
            return Ok(self.clone());
        }
        if self.p != other.p {
            return Err(GroupError::MixedPrimes(self.p, other.p));
        }
        let (n1, n2) = (self.order(), other.order());
        let n = n1 * n2;
        let mut table = vec![0; n * n];
        for x in 0..n {
            let (a, b) = (x % n1, x / n1);
            for y in 0..n {
                let (c, d) = (y % n1, y / n1);
                table[x * n + y] = self.mul(a, c) + n1 * other.mul(b, d);
            }
        }
        let inverse = (0..n).map(|x| self.inv(x % n1) + n1 * other.inv(x / n1)).collect();
        Ok(PGroup {
            p: self.p,
            rank: self.rank + other.rank,
            identity: self.identity + n1 * other.identity,
            table,
            inverse,
            name: format!("{} x {}", self.name, other.name),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn order(&self) -> usize {
        self.inverse.len()
    }
    /// `n` with `|G| = p^n`.
    #[inline]
    pub fn log_order(&self) -> usize {
        self.rank
    }
    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }
    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order() + h]
    }
    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn pow(&self, g: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted list of element indices.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&g| seen[g]).collect()
    }
}

/// Catalogue of small p-groups used by the test suites: every group of
/// order at most 16 for p = 2 and at most 27 for p = 3, up to isomorphism.
pub fn small_group_catalog() -> Vec<(&'static str, GroupSpec)> {
    use GroupSpec::*;
    let c = |n| Cyclic { order: n };
    let prod = |f: Vec<GroupSpec>| Product { factors: f };
    let ext = |m: Vec<usize>, a: Vec<Vec<i64>>, o: usize, t: Vec<i64>| Extension { moduli: m, action: a, order: o, tail: t };
    let d8 = ext(vec![4], vec![vec![3]], 2, vec![0]);
    let q8 = ext(vec![4], vec![vec![3]], 2, vec![2]);
    vec![
        ("C2", c(2)),
        ("C4", c(4)),
        ("C2^2", ElementaryAbelian { p: 2, rank: 2 }),
        ("C8", c(8)),
        ("C4xC2", prod(vec![c(4), c(2)])),
        ("C2^3", ElementaryAbelian { p: 2, rank: 3 }),
        ("D8", d8.clone()),
        ("Q8", q8.clone()),
        ("C16", c(16)),
        ("C8xC2", prod(vec![c(8), c(2)])),
        ("C4xC4", prod(vec![c(4), c(4)])),
        ("C4xC2^2", prod(vec![c(4), c(2), c(2)])),
        ("C2^4", ElementaryAbelian { p: 2, rank: 4 }),
        ("D8xC2", prod(vec![d8, c(2)])),
        ("Q8xC2", prod(vec![q8, c(2)])),
        ("D16", ext(vec![8], vec![vec![7]], 2, vec![0])),
        ("SD16", ext(vec![8], vec![vec![3]], 2, vec![0])),
        ("Q16", ext(vec![8], vec![vec![7]], 2, vec![4])),
        ("M16", ext(vec![8], vec![vec![5]], 2, vec![0])),
        ("C4:C4", ext(vec![4], vec![vec![3]], 4, vec![0])),
        ("C2^2:C4", ext(vec![2, 2], vec![vec![0, 1], vec![1, 0]], 4, vec![0, 0])),
        ("C4oD8", ext(vec![4, 2], vec![vec![1, 2], vec![0, 1]], 2, vec![0, 0])),
        ("C3", c(3)),
        ("C9", c(9)),
        ("C3^2", ElementaryAbelian { p: 3, rank: 2 }),
        ("C27", c(27)),
        ("C9xC3", prod(vec![c(9), c(3)])),
        ("C3^3", ElementaryAbelian { p: 3, rank: 3 }),
        ("Heis27", ext(vec![3, 3], vec![vec![1, 1], vec![0, 1]], 3, vec![0, 0])),
        ("C9:C3", ext(vec![9], vec![vec![4]], 3, vec![0])),
    ]
}

/// A group automorphism, stored as the image of each element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAutomorphism {
    image: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn new(group: &PGroup, image: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if image.len() != n {
            return Err(GroupError::NotAutomorphism(format!("expected {n} images, got {}", image.len())));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(GroupError::NotAutomorphism("not a bijection".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                if image[group.mul(g, h)] != group.mul(image[g], image[h]) {
                    return Err(GroupError::NotAutomorphism(format!("φ({g}·{h}) != φ({g})·φ({h})")));
                }
            }
        }
        Ok(GroupAutomorphism { image })
    }

    pub fn identity(group: &PGroup) -> Self {
        GroupAutomorphism { image: (0..group.order()).collect() }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (g, &h) in self.image.iter().enumerate() {
            inv[h] = g;
        }
        GroupAutomorphism { image: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        GroupAutomorphism { image: other.image.iter().map(|&g| self.image[g]).collect() }
    }
}

/// An element of the group algebra F_p G.
#[derive(Clone)]
pub struct AlgebraElement {
    group: Arc<PGroup>,
    coeffs: Vec<u32>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}
impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| if c == 1 { format!("g{g}") } else { format!("{c}·g{g}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub(crate) fn same_group(a: &Arc<PGroup>, b: &Arc<PGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(group: &Arc<PGroup>) -> Self {
        AlgebraElement { group: group.clone(), coeffs: vec![0; group.order()] }
    }
    pub fn one(group: &Arc<PGroup>) -> Self {
        Self::basis(group, group.identity())
    }
    pub fn scalar(group: &Arc<PGroup>, c: u32) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[group.identity()] = c % group.p();
        x
    }
    /// The group element `g` viewed in F G.
    pub fn basis(group: &Arc<PGroup>, g: usize) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g] = 1;
        x
    }
    /// `λ_g = g − 1`.
    pub fn lambda(group: &Arc<PGroup>, g: usize) -> Self {
        let mut x = Self::basis(group, g);
        let e = group.identity();
        x.coeffs[e] = group.field().sub(x.coeffs[e], 1);
        x
    }
    /// The norm element `N = Σ_g g`.
    pub fn norm(group: &Arc<PGroup>) -> Self {
        AlgebraElement { group: group.clone(), coeffs: vec![1; group.order()] }
    }
    pub fn from_coeffs(group: &Arc<PGroup>, coeffs: Vec<u32>) -> Result<Self, GroupError> {
        if coeffs.len() != group.order() {
            return Err(GroupError::Linalg(LinalgError::DimensionMismatch { expected: group.order(), got: coeffs.len() }));
        }
        let p = group.p();
        Ok(AlgebraElement { group: group.clone(), coeffs: coeffs.into_iter().map(|c| c % p).collect() })
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
    pub fn field(&self) -> PrimeField {
        self.group.field()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn augmentation(&self) -> u32 {
        let f = self.field();
        self.coeffs.iter().fold(0, |a, &c| f.add(a, c))
    }
    pub fn is_unit(&self) -> bool {
        self.augmentation() != 0
    }

    fn check(&self, other: &Self) -> Result<(), GroupError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GroupError> {
        self.check(other)?;
        let f = self.field();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    /// Convolution product `(x·y)[gh] += x[g]·y[h]`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, GroupError> {
        self.check(other)?;
        let f = self.field();
        let n = self.group.order();
        let mut out = vec![0u32; n];
        for (g, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (h, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    let gh = self.group.mul(g, h);
                    out[gh] = f.add(out[gh], f.mul(a, b));
                }
            }
        }
        Ok(AlgebraElement { group: self.group.clone(), coeffs: out })
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field();
        AlgebraElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(&self.group), |acc, _| &acc * self)
    }

    /// Image under the algebra map induced by a group automorphism.
    pub fn apply(&self, phi: &GroupAutomorphism) -> Self {
        let mut out = vec![0; self.coeffs.len()];
        for (g, &c) in self.coeffs.iter().enumerate() {
            out[phi.apply(g)] = c;
        }
        AlgebraElement { group: self.group.clone(), coeffs: out }
    }

    /// `ū(g) = u(g^{-1})`.
    pub fn conjugate(&self) -> Self {
        let mut out = vec![0; self.coeffs.len()];
        for (g, &c) in self.coeffs.iter().enumerate() {
            out[self.group.inv(g)] = c;
        }
        AlgebraElement { group: self.group.clone(), coeffs: out }
    }

    /// Same coefficients regarded over a structurally equal group.
    pub fn rebase(&self, group: &Arc<PGroup>) -> Result<Self, GroupError> {
        if !same_group(&self.group, group) {
            return Err(GroupError::GroupMismatch);
        }
        Ok(AlgebraElement { group: group.clone(), coeffs: self.coeffs.clone() })
    }
}

impl PGroup {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("group prime validated on construction")
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.try_add(rhs).expect("group mismatch in addition")
    }
}
impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.try_add(&-rhs).expect("group mismatch in subtraction")
    }
}
impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        let f = self.field();
        AlgebraElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}
impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.try_mul(rhs).expect("group mismatch in multiplication")
    }
}

pub fn algebra_mul(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, GroupError> {
    x.try_mul(y)
}

/// Powers `I^0 ⊇ I^1 ⊇ … ⊇ I^{L+1} = 0` of the augmentation ideal.
#[derive(Clone, Debug)]
pub struct IdealChain {
    powers: Vec<Subspace>,
}

impl IdealChain {
    /// Largest `k` with `I^k ≠ 0`.
    pub fn l(&self) -> usize {
        self.powers.len() - 2
    }
    /// `I^k`; zero for `k > L`.
    pub fn power(&self, k: usize) -> Subspace {
        match self.powers.get(k) {
            Some(s) => s.clone(),
            None => Subspace::zero(self.powers[0].field(), self.powers[0].ambient_dim()),
        }
    }
    pub fn dims(&self) -> Vec<usize> {
        self.powers.iter().map(|s| s.dim()).collect()
    }
}

/// Jennings filtration data and the chosen Jennings basis.
#[derive(Clone, Debug)]
pub struct JenningsData {
    /// `subgroups[i-1] = G_i` for `i = 1..=L+1`.
    subgroups: Vec<Vec<usize>>,
    basis: Vec<usize>,
    alpha: Vec<usize>,
    normal_form: Vec<Vec<u32>>,
    /// Element with exponent vector of colex code `Σ x_i p^{i-1}`.
    element_of_code: Vec<usize>,
    /// Jennings degree of each element (largest `i` with `g ∈ G_i`); `L+1` for the identity.
    degree: Vec<usize>,
}

impl JenningsData {
    /// `G_i` for `i ≥ 1`.
    pub fn subgroup(&self, i: usize) -> &[usize] {
        let idx = (i.max(1) - 1).min(self.subgroups.len() - 1);
        &self.subgroups[idx]
    }
    pub fn subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn normal_form(&self, g: usize) -> &[u32] {
        &self.normal_form[g]
    }
    pub fn element_with_exponents(&self, x: &[u32], p: u32) -> usize {
        self.element_of_code[exponent_code(x, p)]
    }
    pub fn degree_of(&self, g: usize) -> usize {
        self.degree[g]
    }
}

pub(crate) fn exponent_code(x: &[u32], p: u32) -> usize {
    x.iter().rev().fold(0, |acc, &xi| acc * p as usize + xi as usize)
}

pub fn exponents_of_code(mut code: usize, p: u32, a: usize) -> Vec<u32> {
    (0..a)
        .map(|_| {
            let d = (code % p as usize) as u32;
            code /= p as usize;
            d
        })
        .collect()
}

/// A p-group together with its group algebra data.
#[derive(Debug)]
pub struct GroupAlgebra {
    group: Arc<PGroup>,
    field: PrimeField,
    ideals: IdealChain,
    jennings: JenningsData,
    /// Rows: λ-monomials `∏(f_i−1)^{x_i}` indexed by colex exponent code.
    monomials: Matrix,
    /// Inverse change of basis: group coefficients → λ-monomial coordinates.
    monomial_coords: Matrix,
}

impl GroupAlgebra {
    pub fn new(group: PGroup) -> Result<Arc<GroupAlgebra>, GroupError> {
        Self::from_arc(Arc::new(group))
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Arc<GroupAlgebra>, GroupError> {
        Self::new(PGroup::build(spec)?)
    }

    pub fn from_arc(group: Arc<PGroup>) -> Result<Arc<GroupAlgebra>, GroupError> {
        let field = group.field();
        let ideals = compute_ideal_chain(&group, field);
        let jennings = compute_jennings(&group, &ideals)?;
        let n = group.order();
        let a = jennings.rank();
        let p = group.p();
        let mut rows = Vec::with_capacity(n);
        for code in 0..n {
            let x = exponents_of_code(code, p, a);
            rows.push(lambda_monomial_raw(&group, &jennings.basis, &x).coeffs);
        }
        let monomials = Matrix::from_rows(field, n, &rows)?;
        let monomial_coords = monomials
            .transpose()
            .inverse()
            .map_err(|_| GroupError::Internal("λ-monomials do not form a basis".into()))?;
        let alg = GroupAlgebra { group, field, ideals, jennings, monomials, monomial_coords };
        alg.verify_basis_theorem()?;
        Ok(Arc::new(alg))
    }

    fn verify_basis_theorem(&self) -> Result<(), GroupError> {
        let j = &self.jennings;
        let l = self.l();
        let weight: usize = j.alpha.iter().sum::<usize>() * (self.group.p() as usize - 1);
        if weight != l {
            return Err(GroupError::Internal(format!("L = {l} but (p-1)Σα = {weight}")));
        }
        let n = self.order();
        for k in 0..=l + 1 {
            let rows: Vec<Vec<u32>> = (0..n)
                .filter(|&c| self.monomial_weight(c) >= k)
                .map(|c| self.monomials.row(c).to_vec())
                .collect();
            let span = Subspace::from_vectors(self.field, n, &rows);
            if span.dim() != rows.len() || span != self.ideals.power(k) {
                return Err(GroupError::Internal(format!("monomials of weight ≥ {k} do not give a basis of I^{k}")));
            }
        }
        Ok(())
    }

    /// `Σ α(i) x_i` of the monomial with colex code `code`.
    pub fn monomial_weight(&self, code: usize) -> usize {
        let x = exponents_of_code(code, self.group.p(), self.jennings.rank());
        x.iter().zip(&self.jennings.alpha).map(|(&xi, &a)| xi as usize * a).sum()
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.group.p()
    }
    pub fn order(&self) -> usize {
        self.group.order()
    }
    pub fn l(&self) -> usize {
        self.ideals.l()
    }
    pub fn ideals(&self) -> &IdealChain {
        &self.ideals
    }
    pub fn ideal(&self, k: usize) -> Subspace {
        self.ideals.power(k)
    }
    pub fn jennings(&self) -> &JenningsData {
        &self.jennings
    }
    pub fn is_elementary_abelian(&self) -> bool {
        self.group.is_abelian() && self.jennings.alpha.iter().all(|&a| a == 1)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(&self.group)
    }
    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::one(&self.group)
    }
    pub fn scalar(&self, c: u32) -> AlgebraElement {
        AlgebraElement::scalar(&self.group, c)
    }
    pub fn element(&self, g: usize) -> AlgebraElement {
        AlgebraElement::basis(&self.group, g)
    }
    pub fn lambda_of(&self, g: usize) -> AlgebraElement {
        AlgebraElement::lambda(&self.group, g)
    }
    pub fn norm(&self) -> AlgebraElement {
        AlgebraElement::norm(&self.group)
    }
    pub fn from_coeffs(&self, coeffs: Vec<u32>) -> Result<AlgebraElement, GroupError> {
        AlgebraElement::from_coeffs(&self.group, coeffs)
    }

    /// `λ_i = f_i − 1` for the i-th Jennings generator (0-based).
    pub fn lambda(&self, i: usize) -> AlgebraElement {
        self.lambda_of(self.jennings.basis[i])
    }

    /// `∏_i (f_i − 1)^{x_i}` in generator order.
    pub fn lambda_monomial(&self, x: &[u32]) -> AlgebraElement {
        lambda_monomial_raw(&self.group, &self.jennings.basis, x)
    }

    /// Coordinates of `x` in the λ-monomial basis (indexed by colex code).
    pub fn lambda_coords(&self, x: &AlgebraElement) -> Vec<u32> {
        self.monomial_coords.mul_vec(x.coeffs()).expect("sizes agree")
    }

    pub fn from_lambda_coords(&self, c: &[u32]) -> AlgebraElement {
        let coeffs = self.monomials.transpose().mul_vec(c).expect("sizes agree");
        AlgebraElement { group: self.group.clone(), coeffs }
    }

    /// Largest `k` with `x ∈ I^k`; `None` for zero.
    pub fn ideal_degree(&self, x: &AlgebraElement) -> Option<usize> {
        if x.is_zero() {
            return None;
        }
        (0..=self.l()).rev().find(|&k| self.ideals.power(k).contains(x.coeffs()))
    }

    /// Matrix of `v ↦ u·v` on the regular module.
    pub fn left_mul_matrix(&self, u: &AlgebraElement) -> Matrix {
        let n = self.order();
        let f = self.field;
        let mut m = Matrix::zeros(f, n, n);
        for (g, &c) in u.coeffs().iter().enumerate() {
            if c != 0 {
                for h in 0..n {
                    let gh = self.group.mul(g, h);
                    m.set(gh, h, f.add(m.get(gh, h), c));
                }
            }
        }
        m
    }

    /// Matrix of `v ↦ v·u` on the regular module.
    pub fn right_mul_matrix(&self, u: &AlgebraElement) -> Matrix {
        let n = self.order();
        let f = self.field;
        let mut m = Matrix::zeros(f, n, n);
        for (g, &c) in u.coeffs().iter().enumerate() {
            if c != 0 {
                for h in 0..n {
                    let hg = self.group.mul(h, g);
                    m.set(hg, h, f.add(m.get(hg, h), c));
                }
            }
        }
        m
    }

    /// `{x : y·x = 0 for all y ∈ I^k}`.
    pub fn annihilator(&self, k: usize) -> Subspace {
        self.annihilator_by(k, |y| self.left_mul_matrix(y))
    }

    /// `{x : x·y = 0 for all y ∈ I^k}`.
    pub fn left_annihilator(&self, k: usize) -> Subspace {
        self.annihilator_by(k, |y| self.right_mul_matrix(y))
    }

    fn annihilator_by(&self, k: usize, op: impl Fn(&AlgebraElement) -> Matrix) -> Subspace {
        let n = self.order();
        let ik = self.ideal(k);
        if ik.is_zero() {
            return Subspace::full(self.field, n);
        }
        let mut stacked = Matrix::zeros(self.field, 0, n);
        for y in ik.basis_vectors() {
            let y = AlgebraElement { group: self.group.clone(), coeffs: y };
            stacked = stacked.vstack(&op(&y)).expect("same width");
        }
        kernel(&stacked)
    }

    /// Inverse of a unit (nonzero augmentation).
    pub fn inverse(&self, u: &AlgebraElement) -> Option<AlgebraElement> {
        if !u.is_unit() {
            return None;
        }
        let one = self.one();
        let x = self.left_mul_matrix(u).solve(one.coeffs()).ok()??;
        Some(AlgebraElement { group: self.group.clone(), coeffs: x })
    }
}

fn lambda_monomial_raw(group: &Arc<PGroup>, basis: &[usize], x: &[u32]) -> AlgebraElement {
    let mut acc = AlgebraElement::one(group);
    for (&f, &e) in basis.iter().zip(x) {
        let l = AlgebraElement::lambda(group, f);
        for _ in 0..e {
            acc = &acc * &l;
        }
    }
    acc
}

fn compute_ideal_chain(group: &Arc<PGroup>, field: PrimeField) -> IdealChain {
    let n = group.order();
    let e = group.identity();
    let i1: Vec<Vec<u32>> = (0..n).filter(|&g| g != e).map(|g| AlgebraElement::lambda(group, g).coeffs).collect();
    let mut powers = vec![Subspace::full(field, n), Subspace::from_vectors(field, n, &i1)];
    while !powers.last().unwrap().is_zero() {
        let last = powers.last().unwrap();
        let mut rows = Vec::new();
        for v in last.basis_vectors() {
            let v = AlgebraElement { group: group.clone(), coeffs: v };
            for g in (0..n).filter(|&g| g != e) {
                rows.push((&AlgebraElement::lambda(group, g) * &v).coeffs);
            }
        }
        powers.push(Subspace::from_vectors(field, n, &rows));
    }
    IdealChain { powers }
}

fn compute_jennings(group: &Arc<PGroup>, ideals: &IdealChain) -> Result<JenningsData, GroupError> {
    let n = group.order();
    let l = ideals.l();
    let p = group.p();
    let subgroups: Vec<Vec<usize>> = (1..=l + 1)
        .map(|i| {
            let ii = ideals.power(i);
            (0..n).filter(|&g| ii.contains(AlgebraElement::lambda(group, g).coeffs())).collect()
        })
        .collect();
    let mut degree = vec![0; n];
    for (idx, gi) in subgroups.iter().enumerate() {
        for &g in gi {
            degree[g] = idx + 1;
        }
    }
    let mut basis = Vec::new();
    let mut alpha = Vec::new();
    for i in 1..=l {
        let gi = &subgroups[i - 1];
        let mut gens: Vec<usize> = subgroups[i].clone();
        let mut current = group.generated(&gens);
        for &g in gi {
            if current.len() == gi.len() {
                break;
            }
            if current.binary_search(&g).is_err() {
                basis.push(g);
                alpha.push(i);
                gens.push(g);
                current = group.generated(&gens);
            }
        }
        if current.len() != gi.len() {
            return Err(GroupError::Internal(format!("G_{i} is not generated by G_{} and chosen lifts", i + 1)));
        }
    }
    let a = basis.len();
    if p.checked_pow(a as u32).map(|q| q as usize) != Some(n) {
        return Err(GroupError::Internal(format!("Jennings basis has {a} elements for order {n}")));
    }
    let mut normal_form = vec![Vec::new(); n];
    let mut element_of_code = vec![usize::MAX; n];
    for (code, slot) in element_of_code.iter_mut().enumerate() {
        let x = exponents_of_code(code, p, a);
        let g = basis.iter().zip(&x).fold(group.identity(), |acc, (&f, &e)| group.mul(acc, group.pow(f, e as usize)));
        if !normal_form[g].is_empty() || (a == 0 && code > 0) {
            return Err(GroupError::Internal("normal form is not unique".into()));
        }
        normal_form[g] = x;
        *slot = g;
    }
    Ok(JenningsData { subgroups, basis, alpha, normal_form, element_of_code, degree })
}
