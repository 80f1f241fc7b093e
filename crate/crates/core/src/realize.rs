//! Explicit free models realizing `Cone(w)` and the realizability verdict.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgcomplex::{AlgMatrix, ChainMap, FreeComplex};
use crate::koszul::{build_koszul, KoszulChain, KoszulComplex, KoszulCycle};
use crate::obstruct::{leibniz_obstruction, Obstruction, ObstructionWitness};
use crate::pgroup::{GroupAlgebra, GroupAutomorphism, GroupSpec, PGroup};

/// Cellular chains of `T^a`: the Koszul complex itself.
pub fn torus_complex(p: u32, a: usize) -> Result<FreeComplex> {
    Ok(build_koszul(p, a)?.complex().clone())
}

/// `F[Z/p] ←λ F[Z/p] ←λ^{p−1} F[Z/p] ←λ F[Z/p]` in chain degrees 0..3.
pub fn lens_complex(p: u32) -> Result<FreeComplex> {
    let alg = GroupAlgebra::from_spec(&GroupSpec::ElementaryAbelian { p, rank: 1 })?;
    let lam = alg.lambda(0);
    let one = |x: crate::pgroup::AlgebraElement| AlgMatrix::from_fn(1, 1, |_, _| x.clone());
    let diffs = vec![one(lam.clone()), one(lam.pow(p as usize - 1)), one(lam)];
    FreeComplex::chain(alg, 0, vec![1; 4], diffs)
}

/// Cells of `S^{r+1}` with trivial action: `F` in degrees 0 and `r+1`.
fn sphere(p: u32, r: usize) -> Result<FreeComplex> {
    let alg = GroupAlgebra::new(PGroup::trivial(p))?;
    let mut ranks = vec![0; r + 2];
    ranks[0] = 1;
    ranks[r + 1] = 1;
    let diffs = (0..=r).map(|i| AlgMatrix::zero(&alg, ranks[i], ranks[i + 1])).collect();
    FreeComplex::chain(alg, 0, ranks, diffs)
}

/// `C_*(S^{r+1}) ⊗ K`, the model for boundaries.
pub fn sphere_times_torus(p: u32, a: usize, r: usize) -> Result<FreeComplex> {
    let k = build_koszul(p, a)?;
    sphere(p, r)?.tensor(k.complex())?.with_algebra(k.algebra())
}

/// `lens ⊗ K(a−1)` over `Z/p × (Z/p)^{a−1} = (Z/p)^a`.
pub fn s3_times_torus(p: u32, a: usize) -> Result<FreeComplex> {
    if a == 0 {
        return Err(Error::Invalid("S³×T^{a−1} needs a ≥ 1".into()));
    }
    let k = build_koszul(p, a)?;
    lens_complex(p)?.tensor(build_koszul(p, a - 1)?.complex())?.with_algebra(k.algebra())
}

/// Basis of `C ⊗ D` at internal degree `q` as `(i, a, b)`, in the order used by `tensor`.
fn tensor_basis(c: &FreeComplex, d: &FreeComplex, q: i64) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    for i in c.degrees() {
        for a in 0..c.rank_at(i) {
            for b in 0..d.rank_at(q - i) {
                out.push((i, a, b));
            }
        }
    }
    out
}

/// A chain isomorphism `source → target` sending basis element `j` at
/// internal degree `q` to `±perm[q][j]`, with signs propagated along the
/// differential.
pub fn signed_permutation(source: &FreeComplex, target: &FreeComplex, perm: &BTreeMap<i64, Vec<usize>>) -> Result<ChainMap> {
    let alg = target.algebra().clone();
    let f = alg.field();
    let minus = f.neg(1);
    let index = |q: i64, j: usize| -> usize { perm.range(..q).map(|(_, v)| v.len()).sum::<usize>() + j };
    let total: usize = perm.values().map(|v| v.len()).sum();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); total];
    for (&q, pj) in perm {
        let Some(pi) = perm.get(&(q + 1)) else { continue };
        let ds = source.diff_at(q);
        let dt = target.diff_at(q);
        for j in 0..pj.len() {
            for i in 0..pi.len() {
                let s = ds.get(i, j);
                let t = dt.get(pi[i], pj[j]);
                if s.is_zero() && t.is_zero() {
                    continue;
                }
                let flip = if *t == *s {
                    false
                } else if *t == -s {
                    true
                } else {
                    return Err(Error::Verification(format!("entries at degree {q} differ by more than a sign")));
                };
                adj[index(q, j)].push((index(q + 1, i), flip));
                adj[index(q + 1, i)].push((index(q, j), flip));
            }
        }
    }
    let mut sign: Vec<Option<bool>> = vec![None; total];
    for root in 0..total {
        if sign[root].is_some() {
            continue;
        }
        sign[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let su = sign[u].expect("visited");
            for &(v, flip) in &adj[u] {
                match sign[v] {
                    None => {
                        sign[v] = Some(su ^ flip);
                        queue.push_back(v);
                    }
                    Some(sv) if sv != su ^ flip => return Err(Error::Verification("inconsistent signs".into())),
                    _ => {}
                }
            }
        }
    }
    ChainMap::new(source, target, |q| {
        let mut m = AlgMatrix::zero(&alg, target.rank_at(q), source.rank_at(q));
        if let Some(pj) = perm.get(&q) {
            for (j, &t) in pj.iter().enumerate() {
                let neg = sign[index(q, j)].expect("assigned");
                m.set(t, j, alg.scalar(if neg { minus } else { 1 }));
            }
        }
        m
    })
}

/// Index of `(z_t, 0)` or `(0, z_t)` in the cone at native degree `n`.
fn cone_index(k: &KoszulComplex, n: usize, first: bool, t: &[usize]) -> usize {
    let idx = k.subset_index(t).expect("subset");
    if first {
        idx
    } else {
        k.rank(n) + idx
    }
}

/// `C_*(S^{r+1}) ⊗ K ≅ Cone(0: Σ^r K → K)`.
pub fn sphere_to_zero_cone(k: &KoszulComplex, r: usize) -> Result<ChainMap> {
    let sph = sphere(k.p(), r)?;
    let model = sph.tensor(k.complex())?.with_algebra(k.algebra())?;
    let cone = k.cone_of_chain(&k.zero_chain(r))?;
    let mut perm = BTreeMap::new();
    for q in model.degrees() {
        let n = (-q) as usize;
        let targets = tensor_basis(&sph, k.complex(), q)
            .into_iter()
            .map(|(i, _, b)| {
                let m = (-(q - i)) as usize;
                let t = &k.subsets(m)[b];
                cone_index(k, n, i == 0, t)
            })
            .collect();
        perm.insert(q, targets);
    }
    signed_permutation(&model, &cone, &perm)
}

/// `lens ⊗ K(a−1) ≅ Cone(λ_1^{p−1} z_1)`.
pub fn s3_to_cone(k: &KoszulComplex) -> Result<ChainMap> {
    let (p, a) = (k.p(), k.a());
    let lens = lens_complex(p)?;
    let small = build_koszul(p, a - 1)?;
    let model = s3_times_torus(p, a)?;
    let cone = k.cone_of_chain(&k.standard_cycle(&[0]))?;
    let mut perm = BTreeMap::new();
    for q in model.degrees() {
        let n = (-q) as usize;
        let targets = tensor_basis(&lens, small.complex(), q)
            .into_iter()
            .map(|(i, _, b)| {
                let m = (-(q - i)) as usize;
                let t: Vec<usize> = small.subsets(m)[b].iter().map(|x| x + 1).collect();
                let mut with0 = vec![0];
                with0.extend(&t);
                match -i {
                    0 => cone_index(k, n, true, &t),
                    1 => cone_index(k, n, true, &with0),
                    2 => cone_index(k, n, false, &t),
                    _ => cone_index(k, n, false, &with0),
                }
            })
            .collect();
        perm.insert(q, targets);
    }
    signed_permutation(&model, &cone, &perm)
}

/// `Ψ(x, y) = (x − b∧y, y): Cone(w1) → Cone(w2)` for `w1 − w2 = d b`.
pub fn triangular_iso(k: &KoszulComplex, w1: &KoszulChain, w2: &KoszulChain) -> Result<ChainMap> {
    let r = w1.degree;
    let diff = w1.add(&w2.neg())?;
    let b = k.boundary_preimage(&diff)?.ok_or_else(|| Error::Invalid("the cycles are not homologous".into()))?;
    let c1 = k.cone_of_chain(w1)?;
    let c2 = k.cone_of_chain(w2)?;
    let alg = k.algebra().clone();
    ChainMap::new(&c1, &c2, |q| {
        let n = -q;
        let mut m = AlgMatrix::identity(&alg, c2.rank_at(q));
        let m2 = n - r as i64 - 1;
        if n < 0 || m2 < 0 || n as usize > k.a() {
            return m;
        }
        let r1 = k.rank(n as usize);
        for (j, s) in k.subsets(m2 as usize).iter().enumerate() {
            let col = k.wedge(&b, &k.basis_chain(s, alg.one()));
            for (i, x) in col.coeffs.iter().enumerate() {
                m.set(i, r1 + j, -x);
            }
        }
        m
    })
}

/// `φ` with `φ(f_1) = f_1^{μ_1}⋯f_a^{μ_a}`, completed by the standard basis;
/// if `μ_1 = 0` the first `k` with `μ_k ≠ 0` gets `f_1` instead.
pub fn choose_automorphism(alg: &Arc<GroupAlgebra>, mu: &[u32]) -> Result<GroupAutomorphism> {
    if !alg.is_elementary_abelian() {
        return Err(Error::Unsupported("choose_automorphism needs (Z/p)^a".into()));
    }
    let a = alg.jennings().rank();
    let p = alg.p();
    let f = alg.field();
    if mu.len() != a {
        return Err(Error::Shape(format!("μ has {} entries, expected {a}", mu.len())));
    }
    let k = mu.iter().position(|&m| m % p != 0).ok_or_else(|| Error::Invalid("μ = 0".into()))?;
    // columns are the images of the generators
    let mut cols: Vec<Vec<u32>> = (0..a).map(|j| (0..a).map(|i| u32::from(i == j)).collect()).collect();
    cols[0] = mu.iter().map(|&m| m % p).collect();
    if k != 0 {
        cols[k] = (0..a).map(|i| u32::from(i == 0)).collect();
    }
    let jd = alg.jennings();
    let images: Vec<usize> = (0..alg.order())
        .map(|g| {
            let x = jd.normal_form(g);
            let y: Vec<u32> = (0..a).map(|i| (0..a).fold(0, |acc, j| f.add(acc, f.mul(cols[j][i], x[j])))).collect();
            jd.element_with_exponents(&y, p)
        })
        .collect();
    let phi = GroupAutomorphism::new(alg.group(), images)?;
    let image = alg.element(phi.apply(jd.basis()[0]));
    let lin = (0..a).fold(alg.zero(), |acc, i| &acc + &alg.lambda(i).scale(mu[i]));
    let rest = &(&image - &alg.one()) - &lin;
    if !alg.ideal(2).contains(rest.coeffs()) {
        return Err(Error::Verification("φ(λ_1) ≢ Σ μ_i λ_i mod I²".into()));
    }
    Ok(phi)
}

/// Necessary-condition data compared between the model and the cone.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Steps composed into the isomorphism.
    pub steps: Vec<String>,
    pub isomorphism_verified: bool,
    /// `(native degree, dim)`.
    pub model_homology: Vec<(i64, usize)>,
    pub cone_homology: Vec<(i64, usize)>,
    pub model_minimal_ranks: Vec<usize>,
    pub cone_minimal_ranks: Vec<usize>,
    #[serde(skip)]
    pub isomorphism: Option<ChainMap>,
}

#[derive(Clone, Debug)]
pub enum RealizationResult {
    Realized { model_name: String, model: FreeComplex, cone: FreeComplex, certificate: Certificate },
    NotRealizable(Box<ObstructionWitness>),
    EmptySpace { cone_homology_total: usize },
}

impl RealizationResult {
    pub fn verdict(&self) -> String {
        match self {
            RealizationResult::Realized { model_name, .. } => format!("Realized({model_name})"),
            RealizationResult::NotRealizable(_) => "NotRealizable".into(),
            RealizationResult::EmptySpace { .. } => "EmptySpace".into(),
        }
    }
}

fn native_homology(c: &FreeComplex) -> Vec<(i64, usize)> {
    let mut v: Vec<(i64, usize)> = c.homology().by_degree().into_iter().map(|(q, d)| (c.native(q), d)).collect();
    v.sort_unstable();
    v
}

fn native_minimal_ranks(c: &FreeComplex) -> Result<Vec<usize>> {
    let (m, _) = c.minimize()?;
    let (lo, ranks) = m.native_ranks();
    let mut out = vec![0; lo.max(0) as usize];
    out.extend(ranks);
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

fn certify(steps: Vec<String>, iso: ChainMap, model: &FreeComplex, cone: &FreeComplex) -> Result<Certificate> {
    iso.verify()?;
    if !iso.is_isomorphism() || iso.source() != model || iso.target() != cone {
        return Err(Error::Verification("certificate is not an isomorphism model → cone".into()));
    }
    let cert = Certificate {
        steps,
        isomorphism_verified: true,
        model_homology: native_homology(model),
        cone_homology: native_homology(cone),
        model_minimal_ranks: native_minimal_ranks(model)?,
        cone_minimal_ranks: native_minimal_ranks(cone)?,
        isomorphism: Some(iso),
    };
    if cert.model_homology != cert.cone_homology || cert.model_minimal_ranks != cert.cone_minimal_ranks {
        return Err(Error::Verification("model and cone differ in homology or minimal ranks".into()));
    }
    Ok(cert)
}

/// Decides realizability of `Cone(w)` and builds the model or the witness.
pub fn realize_cone(w: &KoszulCycle) -> Result<RealizationResult> {
    let (p, a, r) = (w.p, w.a, w.r);
    let k = build_koszul(p, a)?;
    let chain = match &w.raw {
        Some(raw) => raw.clone(),
        None => w.chain(&k),
    };
    if !k.is_cycle(&chain) {
        return Err(Error::NotACycle);
    }
    let cone = k.cone_of_chain(&chain)?;
    if w.is_zero_class() {
        let to_zero = sphere_to_zero_cone(&k, r)?;
        let psi = triangular_iso(&k, &k.zero_chain(r), &chain)?;
        let model = to_zero.source().clone();
        let iso = to_zero.then(&psi)?;
        let steps = vec!["S^{r+1}×T^a ≅ Cone(0) by a signed permutation".into(), "Cone(0) ≅ Cone(w) by (x, y) ↦ (x − b∧y, y) with d b = −w".into()];
        let certificate = certify(steps, iso, &model, &cone)?;
        return Ok(RealizationResult::Realized { model_name: format!("S^{}×T^{}", r + 1, a), model, cone, certificate });
    }
    match r {
        0 => {
            let total = cone.homology().total();
            if total != 0 {
                return Err(Error::Verification(format!("cone on a unit has homology of total dimension {total}")));
            }
            Ok(RealizationResult::EmptySpace { cone_homology_total: total })
        }
        1 => {
            let psi = choose_automorphism(k.algebra(), &w.mu)?;
            let phi = psi.inverse();
            let action = k.aut_action(&phi)?;
            let big_phi = &action.phi_iso;
            let to_w1 = s3_to_cone(&k)?;
            let model = to_w1.source().restrict_scalars(&phi)?;
            let cone_w1 = to_w1.target().restrict_scalars(&phi)?;
            let step1 = ChainMap::new(&model, &cone_w1, |q| to_w1.block(q))?;
            // w'' = Φ(φ^*w_1)
            let w1 = k.standard_cycle(&[0]);
            let inv = phi.inverse();
            let col = AlgMatrix::from_fn(a, 1, |i, _| w1.coeffs[i].apply(&inv));
            let img = big_phi.block(-1).mul(&col)?;
            let w2 = KoszulChain { degree: 1, coeffs: (0..a).map(|i| img.get(i, 0).clone()).collect() };
            let cone_w2 = k.cone_of_chain(&w2)?;
            let alg = k.algebra().clone();
            let step2 = ChainMap::new(&cone_w1, &cone_w2, |q| {
                let top = big_phi.block(q);
                let bottom = big_phi.block(q + 1 + r as i64);
                let b = AlgMatrix::zero(&alg, top.rows(), bottom.cols());
                let c = AlgMatrix::zero(&alg, bottom.rows(), top.cols());
                AlgMatrix::block(&top, &b, &c, &bottom).expect("shapes agree")
            })?;
            let step3 = triangular_iso(&k, &w2, &chain)?;
            let iso = step1.then(&step2)?.then(&step3)?;
            let steps = vec![
                "φ^*(S³×T^{a−1}) ≅ φ^*Cone(λ_1^{p−1}z_1) by a signed permutation".into(),
                "φ^*Cone(λ_1^{p−1}z_1) ≅ Cone(Φ(φ^*λ_1^{p−1}z_1)) by diag(Φ, Φ)".into(),
                "Cone(Φ(φ^*λ_1^{p−1}z_1)) ≅ Cone(w) by (x, y) ↦ (x − b∧y, y)".into(),
            ];
            let certificate = certify(steps, iso, &model, &cone)?;
            Ok(RealizationResult::Realized { model_name: format!("S³×T^{}", a - 1), model, cone, certificate })
        }
        _ => match leibniz_obstruction(w)? {
            Obstruction::Witness(wit) => Ok(RealizationResult::NotRealizable(wit)),
            Obstruction::NoObstruction { reason } => Err(Error::Verification(format!("no obstruction for a nonzero class in degree {r}: {reason}"))),
        },
    }
}
