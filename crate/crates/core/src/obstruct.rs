//! Nonrealizability of `Cone(w)` through the Leibniz rule.
//!
//! All "up to a unit" identities are checked projectively and the unit is
//! reported.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgcomplex::FreeComplex;
use crate::grfun::{gr_cup, translate, FunctionOnG};
use crate::koszul::{binomial, build_koszul, subsets, KoszulCycle};
use crate::linalg::{kernel, Matrix, PrimeField};
use crate::pgroup::AlgebraElement;
use crate::specseq::{filter, right_multiply, FilteredComplex};

fn scaled(field: PrimeField, x: &[u32], c: u32) -> Vec<u32> {
    let mut v = x.to_vec();
    field.scale(&mut v, c);
    v
}

/// Scalar `c` with `x = c·y`, or `None` if the vectors are not proportional.
pub fn proportional(field: PrimeField, x: &[u32], y: &[u32]) -> Option<u32> {
    let i = y.iter().position(|&v| v != 0)?;
    let c = field.mul(x[i], field.inv(y[i])?);
    (scaled(field, y, c) == x).then_some(c)
}

/// Normalizes so the first nonzero entry is 1; returns the removed scale.
pub fn normalize(field: PrimeField, x: &[u32]) -> (Vec<u32>, u32) {
    match x.iter().find(|&&v| v != 0) {
        Some(&lead) => (scaled(field, x, field.inv(lead).expect("nonzero")), lead),
        None => (x.to_vec(), 0),
    }
}

/// The matrices of `− ∪ a_i: E_1^{0,q} → E_1^{0,q+1}`.
#[derive(Clone, Debug)]
pub struct ForcedAction {
    pub a: usize,
    pub field: PrimeField,
    pub degrees: Vec<i64>,
    /// `dims[q]` = `dim E_1^{0,q}`.
    pub dims: BTreeMap<i64, usize>,
    /// Raw matrices keyed by `(i, q)`.
    pub matrices: BTreeMap<(usize, i64), Matrix>,
    /// Scale removed by [`normalize`] from each flattened matrix.
    pub scales: BTreeMap<(usize, i64), u32>,
}

impl ForcedAction {
    pub fn matrix(&self, i: usize, q: i64) -> Matrix {
        self.matrices.get(&(i, q)).cloned().unwrap_or_else(|| Matrix::zeros(self.field, self.dims.get(&(q + 1)).copied().unwrap_or(0), self.dims.get(&q).copied().unwrap_or(0)))
    }

    /// Projective form of the `(i, q)` matrix.
    pub fn normalized(&self, i: usize, q: i64) -> Matrix {
        let m = self.matrix(i, q);
        let s = self.scales.get(&(i, q)).copied().unwrap_or(0);
        if s == 0 {
            m
        } else {
            m.scaled(self.field.inv(s).expect("nonzero"))
        }
    }

    /// `x ∪ a_i` for `x ∈ E_1^{0,q}`.
    pub fn apply(&self, i: usize, q: i64, x: &[u32]) -> Result<Vec<u32>> {
        Ok(self.matrix(i, q).mul_vec(x)?)
    }

    /// Operator of a monomial `a^e` starting in degree `q`.
    pub fn monomial_operator(&self, e: &[u32], q: i64) -> Result<Matrix> {
        let mut m = Matrix::identity(self.field, self.dims.get(&q).copied().unwrap_or(0));
        let mut deg = q;
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                m = self.matrix(i, deg).mul(&m)?;
                deg += 1;
            }
        }
        Ok(m)
    }
}

fn require_elementary_abelian(d: &FreeComplex) -> Result<()> {
    if !d.algebra().is_elementary_abelian() {
        return Err(Error::Unsupported("the forced action needs an elementary abelian group".into()));
    }
    Ok(())
}

/// `∏_i λ_i^{e_i}`.
fn lambda_power(fc: &FilteredComplex, e: &[u32]) -> AlgebraElement {
    fc.algebra().lambda_monomial(e)
}

/// Lifts of a basis of `H^q(C/C·I)`, rows in expanded coordinates.
fn quotient_lifts(fc: &FilteredComplex, q: i64) -> Vec<Vec<u32>> {
    let c = fc.complex();
    let alg = c.algebra();
    let n = alg.order();
    let e = alg.group().identity();
    let h = c.reduce_mod_augmentation().homology();
    let reps = h.representatives(q);
    (0..reps.rows()).map(|i| (0..c.rank_at(q) * n).map(|x| if x % n == e { reps.row(i)[x / n] } else { 0 }).collect()).collect()
}

/// `x ∪ a_i = (−1)^q d_1[c·λ_i^{p−2} ∏_{j≠i} λ_j^{p−1}]` for `x = [c·N]`.
pub fn forced_ai_action(d: &FreeComplex) -> Result<ForcedAction> {
    require_elementary_abelian(d)?;
    let fc = filter(d)?;
    forced_action_of(&fc)
}

pub fn forced_action_of(fc: &FilteredComplex) -> Result<ForcedAction> {
    require_elementary_abelian(fc.complex())?;
    let alg = fc.algebra().clone();
    let field = alg.field();
    let p = alg.p();
    let a = alg.jennings().rank();
    let norm = lambda_power(fc, &vec![p - 1; a]);
    let page = fc.page(1)?;
    let ex = fc.expanded();
    let mut dims = BTreeMap::new();
    let mut matrices = BTreeMap::new();
    let mut scales = BTreeMap::new();
    let degrees: Vec<i64> = fc.degrees().collect();
    for &q in &degrees {
        dims.insert(q, page.dim(0, q));
    }
    for &q in &degrees {
        let lifts = quotient_lifts(fc, q);
        let cell = page.cell(0, q).expect("cell");
        let cols: Vec<Vec<u32>> = lifts.iter().map(|c| cell.coords(&right_multiply(&alg, c, &norm))).collect::<Result<_>>()?;
        let m = Matrix::from_columns(field, cell.dim(), &cols);
        let m_inv = m.inverse().map_err(|_| Error::Verification(format!("c ↦ c·N is not an isomorphism in degree {q}")))?;
        let Some(target) = page.cell(0, q + 1) else { continue };
        let sign = crate::fgcomplex::sign(field, q);
        let dq = ex.diff_at(q);
        for i in 0..a {
            let mut e = vec![p - 1; a];
            e[i] = p - 2;
            let lam = lambda_power(fc, &e);
            let cols: Vec<Vec<u32>> = lifts
                .iter()
                .map(|c| {
                    let v = right_multiply(&alg, c, &lam);
                    let dv = dq.mul_vec(&v)?;
                    Ok(scaled(field, &target.coords(&dv)?, sign))
                })
                .collect::<Result<_>>()?;
            let raw = Matrix::from_columns(field, target.dim(), &cols).mul(&m_inv)?;
            let flat: Vec<u32> = raw.to_rows().concat();
            scales.insert((i, q), normalize(field, &flat).1);
            matrices.insert((i, q), raw);
        }
    }
    Ok(ForcedAction { a, field, degrees, dims, matrices, scales })
}

/// A polynomial in the `a_i` as `(coefficient, exponents)` terms.
pub type Polynomial = Vec<(u32, Vec<u32>)>;

pub fn format_polynomial(poly: &Polynomial) -> String {
    if poly.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = poly
        .iter()
        .map(|(c, e)| {
            let mono: Vec<String> = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| if x == 1 { format!("a{}", i + 1) } else { format!("a{}^{}", i + 1, x) }).collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("·") };
            if *c == 1 {
                mono
            } else {
                format!("{c}·{mono}")
            }
        })
        .collect();
    terms.join(" + ")
}

/// Degreewise kernel of the forced action and its minimal generators.
#[derive(Clone, Debug, Serialize)]
pub struct AnnihilatorIdeal {
    pub max_degree: usize,
    pub degreewise: Vec<Vec<Polynomial>>,
    pub generators: Vec<Polynomial>,
}

impl AnnihilatorIdeal {
    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.len() == 1 && g[0].1.iter().all(|&x| x == 0))
    }
}

impl fmt::Display for AnnihilatorIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(format_polynomial).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Exponent vectors of total degree `e` in `a` variables, lexicographically descending.
pub fn monomials_of_degree(a: usize, e: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, a: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == a {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            rec(i + 1, a, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if a == 0 {
        if e == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, a, e, &mut Vec::new(), &mut out);
    out
}

/// The ideal of polynomials `b` in the `a_i` with `x ∪ b = 0` on all of
/// `E_1^{0,*}`, up to one more than the top nonzero degree.
pub fn annihilator_ideal(d: &FreeComplex) -> Result<AnnihilatorIdeal> {
    require_elementary_abelian(d)?;
    if d.algebra().p() != 2 {
        return Err(Error::Unsupported("the annihilator ideal is computed for p = 2".into()));
    }
    let fa = forced_ai_action(d)?;
    let field = fa.field;
    let a = fa.a;
    let top = fa.dims.iter().filter(|(_, &n)| n > 0).map(|(&q, _)| q).max();
    let bottom = fa.dims.iter().filter(|(_, &n)| n > 0).map(|(&q, _)| q).min();
    let max_degree = match (top, bottom) {
        (Some(t), Some(b)) => (t - b) as usize + 1,
        _ => 1,
    };
    let mut degreewise: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut generators: Vec<Polynomial> = Vec::new();
    for e in 0..=max_degree as u32 {
        let monos = monomials_of_degree(a, e);
        let mut cols = Vec::with_capacity(monos.len());
        for m in &monos {
            let mut flat = Vec::new();
            for &q in &fa.degrees {
                flat.extend(fa.monomial_operator(m, q)?.to_rows().concat());
            }
            cols.push(flat);
        }
        let len = cols.first().map_or(0, |c| c.len());
        let ker = kernel(&Matrix::from_columns(field, len, &cols)).basis_vectors();
        // multiples of the previous degree
        let mut from_lower: Vec<Vec<u32>> = Vec::new();
        if let Some(prev) = degreewise.last() {
            let prev_monos = monomials_of_degree(a, e - 1);
            for v in prev {
                for i in 0..a {
                    let mut w = vec![0; monos.len()];
                    for (c, m) in v.iter().zip(&prev_monos) {
                        if *c != 0 {
                            let mut m2 = m.clone();
                            m2[i] += 1;
                            let idx = monos.iter().position(|x| *x == m2).expect("monomial");
                            w[idx] = field.add(w[idx], *c);
                        }
                    }
                    from_lower.push(w);
                }
            }
        }
        let mut span = crate::linalg::Subspace::from_vectors(field, monos.len(), &from_lower);
        for v in &ker {
            if !span.contains(v) {
                generators.push(v.iter().zip(&monos).filter(|(&c, _)| c != 0).map(|(&c, m)| (c, m.clone())).collect());
                let mut vs = span.basis_vectors();
                vs.push(v.clone());
                span = crate::linalg::Subspace::from_vectors(field, monos.len(), &vs);
            }
        }
        degreewise.push(ker);
    }
    let degreewise = degreewise
        .iter()
        .enumerate()
        .map(|(e, vs)| {
            let monos = monomials_of_degree(a, e as u32);
            vs.iter().map(|v| v.iter().zip(&monos).filter(|(&c, _)| c != 0).map(|(&c, m)| (c, m.clone())).collect()).collect()
        })
        .collect();
    Ok(AnnihilatorIdeal { max_degree, degreewise, generators })
}

/// Everything the Leibniz contradiction needs, re-verified on construction.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionWitness {
    pub p: u32,
    pub a: usize,
    pub r: usize,
    /// Chosen subset, 1-based.
    pub subset: Vec<usize>,
    pub mu_s: u32,
    /// `r(p−1)`.
    pub page: usize,
    /// Page coordinates of each factor class on `E_{r(p−1)}^{p−1,1}`.
    pub factor_classes: Vec<(usize, Vec<u32>)>,
    /// Page coordinates of the product class on `E_{r(p−1)}^{r(p−1),r}`.
    pub product_class: Vec<u32>,
    /// `d_{r(p−1)}` of the product class in `E_{r(p−1)}^{0,r+1}`.
    pub differential_value: Vec<u32>,
    /// Coordinates of `[(0, z_∅^*·N)]` on the same page.
    pub target_class: Vec<u32>,
    /// Unit `u` with `d(product) = u·target`; equals `±μ_s`.
    pub unit: u32,
    /// Scale relating the forced-action chain from `[z_∅^*·N]` to `[z_s^*·N]`.
    pub forced_chain_unit: u32,
    /// Units `u_i` with `[ε·∏_{j≠i} λ_j^{p−1}] = u_i·y_i^{p−1}` in `gr∪`.
    pub factor_units: Vec<u32>,
    /// Unit relating the `gr∪` product of the factors to `[ε·∏_{i∉s} λ_i^{p−1}]`.
    pub product_unit: u32,
    /// Matrix of `d_{r(p−1)}` on the product cell.
    pub differential_matrix: Vec<Vec<u32>>,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Obstruction {
    NoObstruction { reason: String },
    Witness(Box<ObstructionWitness>),
}

impl Obstruction {
    pub fn witness(&self) -> Option<&ObstructionWitness> {
        match self {
            Obstruction::Witness(w) => Some(w),
            _ => None,
        }
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

/// Checks the Leibniz contradiction for `Cone(w)^*` with `w` in normal form.
pub fn leibniz_obstruction(w: &KoszulCycle) -> Result<Obstruction> {
    if w.is_zero_class() {
        return Ok(Obstruction::NoObstruction { reason: "class zero".into() });
    }
    if w.r < 2 {
        return Ok(Obstruction::NoObstruction { reason: "degree < 2".into() });
    }
    let (p, a, r) = (w.p, w.a, w.r);
    let k = build_koszul(p, a)?;
    let alg = k.algebra().clone();
    let field = alg.field();
    let n = alg.order();
    let s_index = w.mu.iter().position(|&m| m != 0).expect("nonzero class");
    let s = subsets(a, r)[s_index].clone();
    let mu_s = w.mu[s_index];
    let big_r = r * (p as usize - 1);
    let dual = k.dual_cone(w)?;
    let fc = filter(&dual)?;
    let ex = fc.expanded();

    // (x, y) with x in the K^* summand or y in the shifted one
    let vector = |m: usize, first: bool, t: &[usize], coeff: &AlgebraElement| -> Vec<u32> {
        let r1 = binomial(a, m);
        let r2 = if m >= r + 1 { binomial(a, m - r - 1) } else { 0 };
        let mut v = vec![0; (r1 + r2) * n];
        let idx = if first { k.subset_index(t).expect("subset") } else { r1 + k.subset_index(t).expect("subset") };
        v[idx * n..(idx + 1) * n].copy_from_slice(coeff.coeffs());
        v
    };
    let prod_except = |skip: &dyn Fn(usize) -> bool| -> AlgebraElement {
        (0..a).filter(|&j| !skip(j)).fold(alg.one(), |acc, j| &acc * &alg.lambda(j).pow(p as usize - 1))
    };

    // (a) factor classes survive to page r(p−1) with vanishing differentials
    let kf = p as i64 - 1;
    let mut factor_classes = Vec::new();
    for &i in &s {
        let c = vector(1, true, &[i], &prod_except(&|j| j == i));
        let dc = ex.diff_at(1).mul_vec(&c)?;
        if dc.iter().any(|&x| x != 0) {
            return Err(fail(format!("factor class for {} is not a cocycle", i + 1)));
        }
        let mut last = Vec::new();
        for t in 1..=big_r {
            let cell = fc.cell(t, kf, 1)?;
            let coords = cell.coords(&c)?;
            if coords.iter().all(|&x| x == 0) {
                return Err(fail(format!("factor class for {} vanishes on page {t}", i + 1)));
            }
            if t < big_r && kf - t as i64 >= 0 {
                let tgt = fc.cell(t, kf - t as i64, 2)?;
                if tgt.coords(&dc)?.iter().any(|&x| x != 0) {
                    return Err(fail(format!("d_{t} of factor class for {} is nonzero", i + 1)));
                }
            }
            last = coords;
        }
        factor_classes.push((i + 1, last));
    }

    // (c) the product class and its differential
    let prod = vector(r, true, &s, &prod_except(&|j| s.contains(&j)));
    let dprod = ex.diff_at(r as i64).mul_vec(&prod)?;
    for t in 1..big_r {
        let tgt = fc.cell(t, (big_r - t) as i64, r as i64 + 1)?;
        if tgt.coords(&dprod)?.iter().any(|&x| x != 0) {
            return Err(fail(format!("d_{t} of the product class is nonzero")));
        }
    }
    let src = fc.cell(big_r, big_r as i64, r as i64)?;
    let product_class = src.coords(&prod)?;
    if product_class.iter().all(|&x| x == 0) {
        return Err(fail("product class vanishes"));
    }
    let tgt = fc.cell(big_r, 0, r as i64 + 1)?;
    let differential_value = tgt.coords(&dprod)?;
    let target = vector(r + 1, false, &[], &alg.norm());
    let target_class = tgt.coords(&target)?;
    if target_class.iter().all(|&x| x == 0) {
        return Err(fail("(0, z_∅^*·N) vanishes on the critical page"));
    }
    let unit = proportional(field, &differential_value, &target_class).ok_or_else(|| fail("d of the product is not a multiple of (0, z_∅^*·N)"))?;
    if unit != mu_s && unit != field.neg(mu_s) {
        return Err(fail(format!("unit {unit} is not ±μ_s = ±{mu_s}")));
    }
    let reps = src.representatives();
    let mut dm_cols = Vec::new();
    for row in 0..reps.rows() {
        dm_cols.push(tgt.coords(&ex.diff_at(r as i64).mul_vec(reps.row(row))?)?);
    }
    let differential_matrix = Matrix::from_columns(field, tgt.dim(), &dm_cols).to_rows();

    // (b) the product identity: forced action and gr∪ coordinates
    let fa = forced_action_of(&fc)?;
    let e1 = fc.page(1)?;
    let start = e1.cell(0, 0).expect("cell").coords(&vector(0, true, &[], &alg.norm()))?;
    let mut x = start;
    for (step, &i) in s.iter().enumerate() {
        x = fa.apply(i, step as i64, &x)?;
    }
    let expected = e1.cell(0, r as i64).expect("cell").coords(&vector(r, true, &s, &alg.norm()))?;
    let forced_chain_unit = proportional(field, &x, &expected).filter(|&u| u != 0).ok_or_else(|| fail("forced action chain misses [z_s^*·N]"))?;

    let gr = gr_cup(&alg)?;
    let eps = FunctionOnG::epsilon(alg.group());
    let pm1 = p - 1;
    let local = |deg: usize, e: &[u32]| -> Vec<u32> {
        let g = gr.monomial_index(e).expect("monomial");
        gr.monomials_in_degree(deg).iter().map(|&m| u32::from(m == g)).collect()
    };
    let mut factor_units = Vec::new();
    let mut acc: Option<(usize, Vec<u32>)> = None;
    for &i in &s {
        let f = translate(&eps, &prod_except(&|j| j == i))?;
        let cls = gr.class_of(pm1 as usize, &f)?;
        let mut e = vec![0; a];
        e[i] = pm1;
        let u = proportional(field, &cls, &local(pm1 as usize, &e)).filter(|&u| u != 0).ok_or_else(|| fail("factor is not a multiple of y_i^{p−1}"))?;
        factor_units.push(u);
        acc = Some(match acc {
            None => (pm1 as usize, cls),
            Some((d, v)) => (d + pm1 as usize, gr.multiply(d, &v, pm1 as usize, &cls)),
        });
    }
    let (deg, product_gr) = acc.expect("r ≥ 2");
    let pf = translate(&eps, &prod_except(&|j| s.contains(&j)))?;
    let direct = gr.class_of(deg, &pf)?;
    let product_unit = proportional(field, &product_gr, &direct).filter(|&u| u != 0).ok_or_else(|| fail("gr∪ product of the factors differs from the product class"))?;

    let subset: Vec<usize> = s.iter().map(|i| i + 1).collect();
    let verdict = format!(
        "Cone(w) is not realizable: the classes for {:?} are permanent on page {big_r}, but d_{big_r} of their product is {unit}·[(0, z_∅^*·N)] ≠ 0, contradicting the Leibniz rule",
        subset
    );
    Ok(Obstruction::Witness(Box::new(ObstructionWitness {
        p,
        a,
        r,
        subset,
        mu_s,
        page: big_r,
        factor_classes,
        product_class,
        differential_value,
        target_class,
        unit,
        forced_chain_unit,
        factor_units,
        product_unit,
        differential_matrix,
        verdict,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(p: u32, a: usize, s: &[usize]) -> KoszulCycle {
        let r = s.len();
        let mut terms = BTreeMap::new();
        terms.insert(s.to_vec(), 1);
        KoszulCycle::from_terms(p, a, r, &terms).unwrap()
    }

    #[test]
    fn forced_action_on_dual_koszul() {
        for (p, a) in [(2, 2), (2, 3), (3, 2)] {
            let k = build_koszul(p, a).unwrap();
            let dual = k.complex().dualize().unwrap();
            let fc = filter(&dual).unwrap();
            let fa = forced_action_of(&fc).unwrap();
            let e1 = fc.page(1).unwrap();
            let n = k.algebra().order();
            let class = |t: &[usize]| -> Vec<u32> {
                let m = t.len();
                let mut v = vec![0; k.rank(m) * n];
                let idx = k.subset_index(t).unwrap();
                v[idx * n..(idx + 1) * n].copy_from_slice(k.algebra().norm().coeffs());
                e1.cell(0, m as i64).unwrap().coords(&v).unwrap()
            };
            for m in 0..a {
                for t in subsets(a, m) {
                    for i in 0..a {
                        let img = fa.apply(i, m as i64, &class(&t)).unwrap();
                        if t.contains(&i) {
                            assert!(img.iter().all(|&x| x == 0));
                        } else {
                            let mut u = t.clone();
                            u.push(i);
                            u.sort_unstable();
                            let c = proportional(fa.field, &img, &class(&u)).unwrap();
                            assert_ne!(c, 0);
                        }
                    }
                }
            }
            if p == 2 {
                for q in 0..a as i64 - 1 {
                    for i in 0..a {
                        for j in 0..a {
                            let ij = fa.matrix(j, q + 1).mul(&fa.matrix(i, q)).unwrap();
                            let ji = fa.matrix(i, q + 1).mul(&fa.matrix(j, q)).unwrap();
                            assert_eq!(ij, ji);
                        }
                        assert!(fa.matrix(i, q + 1).mul(&fa.matrix(i, q)).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn forced_action_on_cone_matches_koszul_part() {
        let k = build_koszul(2, 3).unwrap();
        let w = single(2, 3, &[0, 1]);
        let fa_cone = forced_ai_action(&k.dual_cone(&w).unwrap()).unwrap();
        let fa_zero = forced_ai_action(&k.dual_cone(&KoszulCycle::zero(2, 3, 2)).unwrap()).unwrap();
        assert_eq!(fa_cone.matrices, fa_zero.matrices);
    }

    #[test]
    fn smallest_example() {
        let w = single(2, 2, &[0, 1]);
        let ob = leibniz_obstruction(&w).unwrap();
        let wit = ob.witness().expect("witness");
        assert_eq!(wit.page, 2);
        assert_eq!(wit.subset, vec![1, 2]);
        assert_eq!(wit.differential_matrix.len(), 1);
        let k = build_koszul(2, 2).unwrap();
        let ideal = annihilator_ideal(&k.dual_cone(&w).unwrap()).unwrap();
        assert_eq!(ideal.to_string(), "(a1^2, a2^2)");
        let dual = k.complex().dualize().unwrap();
        assert_eq!(annihilator_ideal(&dual).unwrap().to_string(), "(a1^2, a2^2)");
    }

    #[test]
    fn no_obstruction_cases() {
        let k = build_koszul(2, 2).unwrap();
        let zero = leibniz_obstruction(&KoszulCycle::zero(2, 2, 2)).unwrap();
        assert!(matches!(zero, Obstruction::NoObstruction { ref reason } if reason == "class zero"));
        let one = leibniz_obstruction(&single(2, 2, &[0])).unwrap();
        assert!(matches!(one, Obstruction::NoObstruction { ref reason } if reason == "degree < 2"));
        let z = FreeComplex::zero(k.algebra().clone(), crate::fgcomplex::Direction::Cochain);
        let ideal = annihilator_ideal(&z).unwrap();
        assert!(ideal.is_unit());
        assert_eq!(ideal.to_string(), "(1)");
    }

    #[test]
    fn every_single_subset_has_a_witness() {
        for (p, a) in [(2, 2), (2, 3), (3, 2)] {
            for r in 2..=a {
                for s in subsets(a, r) {
                    let ob = leibniz_obstruction(&single(p, a, &s)).unwrap();
                    let w = ob.witness().unwrap();
                    assert_eq!(w.page, r * (p as usize - 1));
                }
            }
        }
    }

    #[test]
    fn monomials_listing() {
        assert_eq!(monomials_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_of_degree(0, 0), vec![Vec::<u32>::new()]);
    }
}
