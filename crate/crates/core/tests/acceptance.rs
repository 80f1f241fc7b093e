//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p augspec --test acceptance`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use augspec::fgcomplex::{AlgMatrix, FreeComplex};
use augspec::grfun::{expected_poincare, filtration_degree, gr_cup, y_closed_formula, FunctionOnG};
use augspec::koszul::{binomial, build_koszul, KoszulChain, KoszulComplex, KoszulCycle};
use augspec::linalg::{kernel, Matrix, PrimeField, Subspace};
use augspec::obstruct::{annihilator_ideal, leibniz_obstruction, proportional, Obstruction};
use augspec::pgroup::{small_group_catalog, AlgebraElement, GroupAlgebra, GroupAutomorphism, GroupSpec, PGroup};
use augspec::realize::{realize_cone, RealizationResult};
use augspec::specseq::{d1_solver, filter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn catalog() -> Vec<(&'static str, Arc<GroupAlgebra>)> {
    small_group_catalog().into_iter().map(|(n, s)| (n, GroupAlgebra::from_spec(&s).unwrap())).collect()
}

fn single(p: u32, a: usize, s: &[usize]) -> KoszulCycle {
    let mut terms = BTreeMap::new();
    terms.insert(s.to_vec(), 1);
    KoszulCycle::from_terms(p, a, s.len(), &terms).unwrap()
}

/// All vectors in `F_p^n`, zero first.
fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(n as u32);
    (0..total).map(|c| (0..n).map(|i| ((c / (p as usize).pow(i as u32)) % p as usize) as u32).collect()).collect()
}

// ---------------------------------------------------------------- oracles

/// Product in `F G` by direct convolution over the multiplication table.
fn convolve(g: &PGroup, x: &[u32], y: &[u32]) -> Vec<u32> {
    let f = g.field();
    let mut out = vec![0; g.order()];
    for (a, &xa) in x.iter().enumerate() {
        if xa == 0 {
            continue;
        }
        for (b, &yb) in y.iter().enumerate() {
            if yb != 0 {
                let ab = g.mul(a, b);
                out[ab] = f.add(out[ab], f.mul(xa, yb));
            }
        }
    }
    out
}

/// `I^0 ⊇ I^1 ⊇ …` down to the zero ideal, spanned by products of `g − 1`.
fn oracle_powers(g: &PGroup) -> Vec<Subspace> {
    let f = g.field();
    let n = g.order();
    let gens: Vec<Vec<u32>> = (0..n)
        .filter(|&h| h != g.identity())
        .map(|h| {
            let mut v = vec![0; n];
            v[h] = 1;
            v[g.identity()] = f.neg(1);
            v
        })
        .collect();
    let mut powers = vec![Subspace::full(f, n)];
    loop {
        let last = powers.last().unwrap();
        if last.is_zero() {
            break;
        }
        let products: Vec<Vec<u32>> = last.basis_vectors().iter().flat_map(|x| gens.iter().map(move |y| convolve(g, x, y))).collect();
        powers.push(Subspace::from_vectors(f, n, &products));
    }
    powers
}

/// `{x : x·y = 0 ∀ y ∈ V}` (left) or `{x : y·x = 0 ∀ y ∈ V}` (right).
fn oracle_annihilator(g: &PGroup, v: &Subspace, left: bool) -> Subspace {
    let f = g.field();
    let n = g.order();
    let basis = v.basis_vectors();
    if basis.is_empty() {
        return Subspace::full(f, n);
    }
    let mut rows = Vec::new();
    for y in &basis {
        // column e_x ↦ e_x·y (or y·e_x)
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|x| {
                let mut e = vec![0; n];
                e[x] = 1;
                if left {
                    convolve(g, &e, y)
                } else {
                    convolve(g, y, &e)
                }
            })
            .collect();
        rows.extend(Matrix::from_columns(f, n, &cols).to_rows());
    }
    kernel(&Matrix::from_rows(f, n, &rows).unwrap())
}

/// Random cochain complex with each row of `d^{q+1}` drawn from the left
/// kernel of `d^q`.
fn random_complex(alg: &Arc<GroupAlgebra>, rng: &mut ChaCha8Rng) -> FreeComplex {
    let n = alg.order();
    let f = alg.field();
    let p = alg.p();
    let len = rng.gen_range(2..=4);
    let mut ranks = vec![rng.gen_range(1..=2)];
    let mut diffs: Vec<AlgMatrix> = Vec::new();
    for _ in 1..len {
        let cols = *ranks.last().unwrap();
        let rows = rng.gen_range(0..=2);
        let admissible: Vec<Vec<u32>> = match diffs.last() {
            None => Matrix::identity(f, cols * n).to_rows(),
            Some(prev) => {
                let mut system = Matrix::zeros(f, prev.cols() * n, prev.rows() * n);
                for i in 0..prev.rows() {
                    for j in 0..prev.cols() {
                        system.set_block(j * n, i * n, &alg.right_mul_matrix(prev.get(i, j)));
                    }
                }
                kernel(&system).basis_vectors()
            }
        };
        let mut entries = Vec::new();
        for _ in 0..rows {
            let mut row = vec![0; cols * n];
            for v in &admissible {
                if rng.gen_bool(0.5) {
                    f.axpy(&mut row, rng.gen_range(0..p), v);
                }
            }
            entries.push((0..cols).map(|j| alg.from_coeffs(row[j * n..(j + 1) * n].to_vec()).unwrap()).collect());
        }
        diffs.push(AlgMatrix::from_rows(alg, cols, entries).unwrap());
        ranks.push(rows);
    }
    FreeComplex::cochain(alg.clone(), 0, ranks, diffs).unwrap()
}

fn example_3_6() -> FreeComplex {
    build_koszul(2, 2).unwrap().dual_cone(&single(2, 2, &[0, 1])).unwrap()
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Check {
    let c = example_3_6();
    let fixture = augspec::io::parse_document(include_str!("../../cli/tests/fixtures/example_3_6.json")).map_err(|e| e.to_string())?;
    ensure!(fixture.complex(c.algebra()).map_err(|e| e.to_string())? == c, "constructed complex differs from the hand-entered one");
    let fc = filter(&c).map_err(|e| e.to_string())?;
    let e1 = fc.page(1).map_err(|e| e.to_string())?;
    let outer = [1, 2, 1, 1, 2, 1];
    for q in 0..6 {
        let expected = [outer[q as usize], 2 * outer[q as usize], outer[q as usize]];
        for k in 0..3 {
            ensure!(e1.dim(k, q) == expected[k as usize], "E1({k},{q}) = {} ≠ {}", e1.dim(k, q), expected[k as usize]);
        }
    }
    for (k, want) in [(1, [2, 1, 2, 1]), (2, [1, 2, 1, 2])] {
        for (q, w) in [0, 1, 3, 4].into_iter().zip(want) {
            ensure!(e1.d_rank(k, q) == w, "d1 rank at ({k},{q}) = {} ≠ {w}", e1.d_rank(k, q));
        }
        for q in [2, 5] {
            ensure!(e1.d_rank(k, q) == 0, "unexpected d1 at ({k},{q})");
        }
    }
    let e2 = fc.page(2).map_err(|e| e.to_string())?;
    let nonzero: BTreeMap<(i64, i64), usize> = [((0, 0), 1), ((1, 1), 2), ((2, 2), 1), ((0, 3), 1), ((1, 4), 2), ((2, 5), 1)].into_iter().collect();
    for q in 0..6 {
        for k in 0..3 {
            let want = nonzero.get(&(k, q)).copied().unwrap_or(0);
            ensure!(e2.dim(k, q) == want, "E2({k},{q}) = {} ≠ {want}", e2.dim(k, q));
        }
    }
    ensure!(e2.d_rank(2, 2) == 1, "d2: E2(2,2) → E2(0,3) has rank {}", e2.d_rank(2, 2));
    let others: usize = (0..6).flat_map(|q| (0..3).map(move |k| (k, q))).filter(|&kq| kq != (2, 2)).map(|(k, q)| e2.d_rank(k, q)).sum();
    ensure!(others == 0, "E2 carries {others} further d2 rank");
    Ok(())
}

fn einfty_matches(c: &FreeComplex) -> std::result::Result<Vec<usize>, String> {
    let fc = filter(c).map_err(|e| e.to_string())?;
    let einf = fc.einfty().map_err(|e| e.to_string())?;
    let h = c.homology();
    let mut sums = Vec::new();
    for q in c.degrees() {
        let s: usize = (0..=fc.l() as i64).map(|k| einf.dim(k, q)).sum();
        ensure!(s == h.dim_at(q), "Σ_k E∞(k,{q}) = {s} but dim H^{q} = {}", h.dim_at(q));
        sums.push(s);
    }
    Ok(sums)
}

fn criterion_2() -> Check {
    let sums = einfty_matches(&example_3_6())?;
    ensure!(sums == vec![1, 2, 0, 0, 2, 1], "E∞ totals {sums:?}");
    ensure!(sums.iter().sum::<usize>() == 6, "E∞ sum");
    let groups: Vec<_> = catalog().into_iter().filter(|(_, a)| a.order() <= 9).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut nontrivial = 0;
    for t in 0..100 {
        let (name, alg) = &groups[t % groups.len()];
        let c = random_complex(alg, &mut rng);
        einfty_matches(&c).map_err(|e| format!("random complex {t} over {name}: {e}"))?;
        if c.diffs().iter().any(|d| !d.is_zero()) && filter(&c).unwrap().l() > 0 {
            nontrivial += 1;
        }
    }
    ensure!(nontrivial >= 50, "only {nontrivial} random complexes have a nonzero differential");
    Ok(())
}

fn criterion_3() -> Check {
    for (name, alg) in catalog() {
        let g = alg.group();
        let powers = oracle_powers(g);
        let l = powers.len() - 2;
        ensure!(alg.l() == l, "{name}: L = {} but the oracle gives {l}", alg.l());
        let ideal = |k: usize| powers.get(k).cloned().unwrap_or_else(|| Subspace::zero(alg.field(), alg.order()));
        for k in 0..=l + 1 {
            let want = ideal(l + 1 - k);
            let left = oracle_annihilator(g, &ideal(k), true);
            let right = oracle_annihilator(g, &ideal(k), false);
            ensure!(left == want && right == want, "{name}: Ann(I^{k}) ≠ I^{}", l + 1 - k);
            ensure!(alg.annihilator(k) == want && alg.left_annihilator(k) == want, "{name}: library annihilator of I^{k} differs");
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let c8 = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order: 8 }).unwrap();
    let j = c8.jennings();
    let g = c8.group();
    let sorted = |s: &[usize]| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v
    };
    // t is element 1 in the cyclic table
    ensure!(sorted(j.subgroup(2)) == g.generated(&[2]), "Z/8: G2 ≠ ⟨t²⟩");
    ensure!(sorted(j.subgroup(3)) == g.generated(&[4]) && sorted(j.subgroup(4)) == g.generated(&[4]), "Z/8: G3, G4 ≠ ⟨t⁴⟩");
    ensure!(sorted(j.subgroup(5)) == vec![0], "Z/8: G5 ≠ 1");
    ensure!(j.alpha() == [1, 2, 4], "Z/8: α = {:?}", j.alpha());
    ensure!(c8.l() == 7, "Z/8: L = {}", c8.l());
    for (name, alg) in catalog() {
        let g = alg.group();
        let p = alg.p();
        let powers = oracle_powers(g);
        let alpha = alg.jennings().alpha().to_vec();
        let codes = all_vectors(p, alpha.len());
        for k in 0..powers.len() {
            let next = powers.get(k + 1).map_or(0, |s| s.dim());
            let layer = powers[k].dim() - next;
            let count = codes.iter().filter(|x| x.iter().zip(&alpha).map(|(&xi, &ai)| xi as usize * ai).sum::<usize>() == k).count();
            ensure!(layer == count, "{name}: dim I^{k}/I^{} = {layer} but {count} monomials", k + 1);
        }
        // G_i = {g : g − 1 ∈ I^i}
        for i in 1..powers.len() {
            let members: Vec<usize> = (0..alg.order())
                .filter(|&h| {
                    let mut v = vec![0; alg.order()];
                    v[h] = alg.field().add(v[h], 1);
                    v[g.identity()] = alg.field().sub(v[g.identity()], 1);
                    powers[i].contains(&v)
                })
                .collect();
            ensure!(sorted(alg.jennings().subgroup(i)) == members, "{name}: G_{i} differs from the dimension subgroup");
        }
    }
    Ok(())
}

fn digit_function(alg: &GroupAlgebra, x: &[u32]) -> FunctionOnG {
    let j = alg.jennings();
    let f = alg.field();
    let values = (0..alg.order()).map(|h| j.normal_form(h).iter().zip(x).fold(1, |acc, (&d, &e)| f.mul(acc, f.pow(d, e as u64)))).collect();
    FunctionOnG::from_values(alg.group(), values).unwrap()
}

fn criterion_5() -> Check {
    let c4 = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order: 4 }).unwrap();
    ensure!(c4.jennings().alpha() == [1, 2], "Z/4: α = {:?}", c4.jennings().alpha());
    let monomials = [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
    let rows: Vec<Vec<u32>> = monomials.iter().map(|x| digit_function(&c4, x).values().to_vec()).collect();
    ensure!(Matrix::from_rows(c4.field(), 4, &rows).unwrap().rank() == 4, "Z/4: monomial functions are dependent");
    for (x, deg) in monomials.iter().zip([0, 1, 2, 3]) {
        let fd = filtration_degree(&c4, &digit_function(&c4, x)).map_err(|e| e.to_string())?;
        ensure!(fd == deg, "Z/4: y^{x:?} has filtration degree {fd}");
    }
    let (y1, y2) = (digit_function(&c4, &[1, 0]), digit_function(&c4, &[0, 1]));
    for (y, top) in [(&y1, 2), (&y2, 4)] {
        let sq = y.cup(y).map_err(|e| e.to_string())?;
        let fd = filtration_degree(&c4, &sq).map_err(|e| e.to_string())?;
        ensure!(fd < top, "Z/4: a square survives in degree {top}");
    }
    let gr = gr_cup(&c4).map_err(|e| e.to_string())?;
    ensure!(gr.poincare() == vec![1, 1, 1, 1], "Z/4: Poincaré {:?}", gr.poincare());
    for (name, alg) in catalog() {
        let gr = gr_cup(&alg).map_err(|e| e.to_string())?;
        let alpha = alg.jennings().alpha().to_vec();
        let p = alg.p() as usize;
        let mut series = vec![1usize];
        for &ai in &alpha {
            let mut next = vec![0; series.len() + (p - 1) * ai];
            for (d, &c) in series.iter().enumerate() {
                for e in 0..p {
                    next[d + e * ai] += c;
                }
            }
            series = next;
        }
        ensure!(gr.poincare() == series && expected_poincare(&alpha, alg.p()) == series, "{name}: Poincaré {:?} ≠ {series:?}", gr.poincare());
        for i in 0..alpha.len() {
            let mut e = vec![0; alpha.len()];
            e[i] = 1;
            let closed = y_closed_formula(&alg, i).map_err(|e| e.to_string())?;
            ensure!(closed == digit_function(&alg, &e), "{name}: closed formula for y{} differs", i + 1);
        }
    }
    Ok(())
}

/// Coefficient `c` with `y_j(f_i·σ) − y_j(σ) − c·y_i(σ)` constant in `σ`,
/// found by enumerating digits and scalars.
fn translation_coefficient(alg: &GroupAlgebra, i: usize, j: usize) -> Option<u32> {
    let jd = alg.jennings();
    let g = alg.group();
    let f = alg.field();
    let fi = jd.basis()[i];
    let hits: Vec<u32> = (0..alg.p())
        .filter(|&c| {
            let vals: Vec<u32> = (0..alg.order())
                .map(|s| {
                    let moved = jd.normal_form(g.mul(fi, s))[j];
                    f.sub(f.sub(moved, jd.normal_form(s)[j]), f.mul(c, jd.normal_form(s)[i]))
                })
                .collect();
            vals.iter().all(|&v| v == vals[0])
        })
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

fn criterion_6() -> Check {
    for (p, a) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let alg = GroupAlgebra::from_spec(&GroupSpec::ElementaryAbelian { p, rank: a }).unwrap();
        let d = d1_solver(&alg).map_err(|e| e.to_string())?;
        for j in 0..a {
            ensure!(d.render(j) == format!("d1(y{}) = a{}", j + 1, j + 1), "(Z/{p})^{a}: {}", d.render(j));
        }
    }
    for order in [4, 8] {
        let alg = GroupAlgebra::from_spec(&GroupSpec::Cyclic { order }).unwrap();
        let d = d1_solver(&alg).map_err(|e| e.to_string())?;
        ensure!(d.render(1) == "d1(y2) = a1⊗y1", "Z/{order}: {}", d.render(1));
        let oracle = translation_coefficient(&alg, 0, 1).ok_or(format!("Z/{order}: digit oracle is ambiguous"))?;
        // degree-1 monomials of Z/{4,8} are just y1
        ensure!(d.monomials[1] == vec![vec![1, 0, 0][..alg.jennings().rank()].to_vec()], "Z/{order}: degree-one monomials");
        ensure!(d.terms[1][0] == vec![oracle], "Z/{order}: solver {:?} vs digit oracle {oracle}", d.terms[1][0]);
        ensure!(oracle == 1, "Z/{order}: digit oracle gives {oracle}");
    }
    Ok(())
}

/// Class of `λ^{p−1} z` with `d z = λ`, by enumerating all coefficient vectors.
fn brute_force_power_class(k: &KoszulComplex, lambda: &AlgebraElement) -> std::result::Result<Vec<u32>, String> {
    let alg = k.algebra();
    let d1 = k.differential_matrix(1).expand(alg);
    let z = d1.solve(lambda.coeffs()).map_err(|e| e.to_string())?.ok_or("λ is not a boundary")?;
    let z = k.chain_from_expanded(1, &z);
    ensure!(k.differential(&z) == (KoszulChain { degree: 0, coeffs: vec![lambda.clone()] }), "d z ≠ λ");
    let x = z.scale_by(&lambda.pow(alg.p() as usize - 1)).expanded();
    let boundaries = if k.a() >= 2 { k.differential_matrix(2).expand(alg).image() } else { Subspace::zero(alg.field(), x.len()) };
    let f = alg.field();
    let std: Vec<Vec<u32>> = (0..k.a()).map(|i| k.standard_cycle(&[i]).expanded()).collect();
    let hits: Vec<Vec<u32>> = all_vectors(alg.p(), k.a())
        .into_iter()
        .filter(|c| {
            let mut v = x.clone();
            for (ci, s) in c.iter().zip(&std) {
                f.axpy(&mut v, f.neg(*ci), s);
            }
            boundaries.contains(&v)
        })
        .collect();
    ensure!(hits.len() == 1, "{} classes fit", hits.len());
    Ok(hits[0].clone())
}

fn random_aut(g: &PGroup, a: usize, rng: &mut ChaCha8Rng) -> GroupAutomorphism {
    let p = g.p();
    let f = PrimeField::new(p).unwrap();
    loop {
        let m = Matrix::from_fn(f, a, a, |_, _| rng.gen_range(0..p));
        if m.rank() < a {
            continue;
        }
        let digits = all_vectors(p, a);
        let code = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
        let images = digits.iter().map(|x| code(&m.mul_vec(x).unwrap())).collect();
        return GroupAutomorphism::new(g, images).unwrap();
    }
}

fn criterion_7() -> Check {
    for p in [2, 3] {
        for a in 1..=4 {
            let k = build_koszul(p, a).map_err(|e| e.to_string())?;
            let total = k.complex().homology().total();
            ensure!(total == 1 << a, "H(K) for p={p}, a={a} has total {total}");
        }
    }
    for (p, a) in [(2, 2), (2, 3), (3, 2)] {
        let k = build_koszul(p, a).map_err(|e| e.to_string())?;
        let alg = k.algebra();
        let mut spanning: Vec<AlgebraElement> = (1..alg.order()).map(|g| alg.lambda_of(g)).collect();
        spanning.extend((0..a).map(|i| alg.lambda(i)));
        let span = Subspace::from_vectors(alg.field(), alg.order(), &spanning.iter().map(|x| x.coeffs().to_vec()).collect::<Vec<_>>());
        ensure!(span == alg.ideal(1), "p={p}, a={a}: test elements do not span I");
        for lam in &spanning {
            let lib = k.class_of_power_cycle(lam).map_err(|e| e.to_string())?;
            let oracle = brute_force_power_class(&k, lam).map_err(|e| format!("p={p}, a={a}, λ={lam}: {e}"))?;
            ensure!(lib == oracle, "p={p}, a={a}, λ={lam}: {lib:?} vs oracle {oracle:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = [(2, 2), (2, 3), (3, 2)];
    for t in 0..50 {
        let (p, a) = grid[t % grid.len()];
        let k = build_koszul(p, a).map_err(|e| e.to_string())?;
        let g = k.algebra().group().clone();
        let (f1, f2) = (random_aut(&g, a, &mut rng), random_aut(&g, a, &mut rng));
        let r1 = k.aut_action(&f1).map_err(|e| e.to_string())?.rho;
        let r2 = k.aut_action(&f2).map_err(|e| e.to_string())?.rho;
        let r21 = k.aut_action(&f2.compose(&f1)).map_err(|e| e.to_string())?.rho;
        ensure!(r1.mul(&r2).unwrap() == r21, "pair {t} (p={p}, a={a}): ρ(φ1)ρ(φ2) ≠ ρ(φ2φ1)");
    }
    Ok(())
}

fn criterion_8() -> Check {
    for (p, a) in [(2, 2), (2, 3), (3, 2)] {
        for r in 2..=a {
            for mu in all_vectors(p, binomial(a, r)).into_iter().skip(1) {
                let w = KoszulCycle::new(p, a, r, mu.clone()).map_err(|e| e.to_string())?;
                let ob = leibniz_obstruction(&w).map_err(|e| format!("p={p}, a={a}, μ={mu:?}: {e}"))?;
                let Obstruction::Witness(wit) = ob else {
                    return Err(format!("p={p}, a={a}, μ={mu:?}: no witness"));
                };
                let f = PrimeField::new(p).unwrap();
                ensure!(wit.page == r * (p as usize - 1), "μ={mu:?}: page {}", wit.page);
                ensure!(wit.mu_s != 0 && wit.unit != 0, "μ={mu:?}: degenerate witness");
                ensure!(wit.product_class.iter().any(|&c| c != 0), "μ={mu:?}: zero product class");
                ensure!(proportional(f, &wit.differential_value, &wit.target_class).is_some_and(|u| u != 0), "μ={mu:?}: differential value not a unit multiple of the target");
                // the differential is visible on the page itself
                let fc = filter(&build_koszul(p, a).unwrap().dual_cone(&w).unwrap()).map_err(|e| e.to_string())?;
                let page = fc.page(wit.page).map_err(|e| e.to_string())?;
                let rank: usize = page.q_range().flat_map(|q| (0..=fc.l() as i64).map(move |k| (k, q))).map(|(k, q)| page.d_rank(k, q)).sum();
                ensure!(rank > 0, "μ={mu:?}: d_{} vanishes", wit.page);
            }
        }
    }
    let w = single(2, 2, &[0, 1]);
    let wit = leibniz_obstruction(&w).map_err(|e| e.to_string())?;
    ensure!(wit.witness().is_some_and(|x| x.page == 2 && x.subset == vec![1, 2]), "smallest case witness");
    let ideal = annihilator_ideal(&example_3_6()).map_err(|e| e.to_string())?;
    ensure!(ideal.to_string() == "(a1^2, a2^2)", "annihilator ideal {ideal}");
    Ok(())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (p, a) in [(2, 2), (2, 3), (3, 2)] {
        let k = build_koszul(p, a).map_err(|e| e.to_string())?;
        let alg = k.algebra().clone();
        for r in 0..=a {
            for mu in all_vectors(p, binomial(a, r)) {
                let normal = KoszulCycle::new(p, a, r, mu.clone()).map_err(|e| e.to_string())?;
                let mut variants = vec![normal.clone()];
                if r < a {
                    // same class, representative moved by a random boundary
                    let b = KoszulChain { degree: r + 1, coeffs: (0..k.rank(r + 1)).map(|_| alg.from_coeffs((0..alg.order()).map(|_| rng.gen_range(0..p)).collect()).unwrap()).collect() };
                    let raw = normal.chain(&k).add(&k.differential(&b)).map_err(|e| e.to_string())?;
                    variants.push(KoszulCycle { raw: Some(raw), ..normal.clone() });
                }
                for w in variants {
                    let tag = format!("p={p}, a={a}, r={r}, μ={mu:?}, raw={}", w.raw.is_some());
                    let res = realize_cone(&w).map_err(|e| format!("{tag}: {e}"))?;
                    let expected = if w.is_zero_class() {
                        format!("Realized(S^{}×T^{a})", r + 1)
                    } else {
                        match r {
                            0 => "EmptySpace".into(),
                            1 => format!("Realized(S³×T^{})", a - 1),
                            _ => "NotRealizable".into(),
                        }
                    };
                    ensure!(res.verdict() == expected, "{tag}: {} ≠ {expected}", res.verdict());
                    match res {
                        RealizationResult::Realized { model, cone, certificate, .. } => {
                            let iso = certificate.isomorphism.as_ref().ok_or(format!("{tag}: no isomorphism"))?;
                            let chain = w.raw.clone().unwrap_or_else(|| w.chain(&k));
                            ensure!(cone == k.cone_of_chain(&chain).unwrap(), "{tag}: certificate targets another cone");
                            ensure!(iso.verify().is_ok() && iso.is_isomorphism(), "{tag}: certificate is not a chain isomorphism");
                            ensure!(iso.source() == &model && iso.target() == &cone, "{tag}: certificate endpoints");
                            let total = model.homology().total();
                            ensure!(total >= 1 << a, "{tag}: model homology {total} < 2^{a}");
                        }
                        RealizationResult::EmptySpace { .. } => {
                            let chain = w.raw.clone().unwrap_or_else(|| w.chain(&k));
                            ensure!(k.cone_of_chain(&chain).unwrap().homology().total() == 0, "{tag}: empty space with homology");
                        }
                        RealizationResult::NotRealizable(wit) => {
                            ensure!(wit.page == r * (p as usize - 1), "{tag}: witness page {}", wit.page);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 9] = [
        ("spectral sequence table of the smallest dual cone", criterion_1, Some(Duration::from_secs(1))),
        ("E∞ convergence", criterion_2, Some(Duration::from_secs(30))),
        ("annihilators of augmentation powers", criterion_3, Some(Duration::from_secs(10))),
        ("Jennings filtration", criterion_4, None),
        ("graded cup ring", criterion_5, None),
        ("d1 solver", criterion_6, None),
        ("Koszul complex", criterion_7, None),
        ("nonrealizability witnesses", criterion_8, None),
        ("realization trichotomy", criterion_9, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, budget) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, budget {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
