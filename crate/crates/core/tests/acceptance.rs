//! One line per acceptance criterion. Every expected value is produced by
//! the reference code in `common`, not by the library under test.

mod common;

use std::error::Error as StdError;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use tenv_core::backend::{FinSetOp, FinVectFq, Limits, Obj, Partition, RegularCategory};
use tenv_core::degree::{validate_degree_axioms, DegreeFunction, DegreeTable, Validation};
use tenv_core::envelope::{Envelope, LinearHom};
use tenv_core::moebius::{
    check_idempotents, lattice_idempotents, moebius, stanley_split, wilf_determinant,
    PartialSemilattice,
};
use tenv_core::radical::{
    gram_omega, indecomposable_surjections, nonsingularity_verdict, omegas, radical, simple_census,
    singular_parameters,
};
use tenv_core::scalar::{MultiPoly, Rational};
use tenv_core::specialization::{
    functoriality_check, interpolation_dim_check, specialize_basis, uniformity_and_adapted_check,
    UniformFunctor,
};

type Outcome = Result<String, Box<dyn StdError>>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Box<dyn StdError>> {
    if cond {
        Ok(())
    } else {
        Err(msg().into())
    }
}

fn f2() -> FinVectFq {
    FinVectFq::new(2, Limits::default()).unwrap()
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

fn eval(p: &MultiPoly, v: &Rational) -> Rational {
    p.substitute("t", v)
        .constant_value()
        .expect("univariate in t")
}

fn surjections_out_of<C: RegularCategory>(cat: &C, x: Obj) -> Vec<C::Mor> {
    (0..=x)
        .flat_map(|y| cat.homs(x, y).unwrap())
        .filter(|e| cat.is_surjective(e))
        .collect()
}

fn criterion_1() -> Outcome {
    let env = Envelope::new(FinSetOp::default(), DegreeFunction::setop(t()));
    let mut pairs = 0;
    for n in 0..=5 {
        for m in 0..=5 - n {
            for k in 0..=5 - n {
                let left = env.hom_basis(m, n)?;
                let right = env.hom_basis(n, k)?;
                ensure(
                    left.dim() == bell(m + n) && right.dim() == bell(n + k),
                    || format!("hom dims for ({m},{n},{k})"),
                )?;
                for r in left.relations() {
                    for s in right.relations() {
                        let (labels, loops) =
                            stack_diagrams(r.body.labels(), m, n, s.body.labels(), k);
                        let w = env.weighted(&r, &s)?.ok_or("composite missing")?;
                        ensure(
                            w.rel.left == m
                                && w.rel.right == k
                                && w.rel.body == Partition::from_labels(&labels)
                                && w.coeff == t().pow(loops as u32),
                            || {
                                format!(
                                    "{:?} then {:?}: got {} {:?}",
                                    r.body, s.body, w.coeff, w.rel.body
                                )
                            },
                        )?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} basis pairs"))
}

fn criterion_2() -> Outcome {
    let cat = FinSetOp::default();
    let delta = DegreeFunction::setop(t());
    let mut count = 0;
    for a in 0..=5usize {
        let es: Vec<_> = cat
            .homs(a + 1, a)?
            .into_iter()
            .filter(|e| cat.is_surjective(e))
            .collect();
        let injections: usize = (2..=a + 1).product();
        ensure(es.len() == injections, || {
            format!("{} surjections {}→{a}", es.len(), a + 1)
        })?;
        for om in omegas(&cat, &delta, &es)? {
            ensure(om.value == lin(a as i64), || {
                format!("ω = {} for |A| = {a}", om.value)
            })?;
        }
        let ind = indecomposable_surjections(&cat, a + 1)?;
        ensure(
            ind.len() == a + 1 && ind.iter().all(|e| cat.target(e) == a),
            || format!("{} indecomposable classes out of {}", ind.len(), a + 1),
        )?;
        count += es.len();
    }
    let v = f2();
    let delta = DegreeFunction::vect(t());
    for b in 0..=3usize {
        let es: Vec<_> = v
            .homs(b + 1, b)?
            .into_iter()
            .filter(|e| v.is_surjective(e))
            .collect();
        let expected: usize = (0..b).map(|i| (1usize << (b + 1)) - (1 << i)).product();
        ensure(es.len() == expected, || {
            format!("{} surjections F_2^{} → F_2^{b}", es.len(), b + 1)
        })?;
        for om in omegas(&v, &delta, &es)? {
            ensure(om.value == lin(1 << b), || {
                format!("ω = {} for dim V = {b}", om.value)
            })?;
        }
        let lines = (1usize << (b + 1)) - 1;
        ensure(
            indecomposable_surjections(&v, b + 1)?.len() == lines,
            || format!("indecomposables out of F_2^{}", b + 1),
        )?;
        count += es.len();
    }
    Ok(format!("{count} surjections"))
}

fn criterion_3() -> Outcome {
    let cat = FinSetOp::default();
    for m in 0..=4i64 {
        let bound = (m + 1) as Obj;
        let expected: Vec<Rational> = (0..=m).map(int).collect();
        let rep = singular_parameters(&cat, bound)?;
        ensure(rep.singular_params == expected, || {
            format!("sizes ≤ {bound}: {:?}", rep.singular_params)
        })?;
        let mut probes: Vec<Rational> = (-2..=m + 3).map(int).collect();
        probes.extend([rat("1/2"), rat("7/2"), rat("-5/3")]);
        for tv in probes {
            let verdict = nonsingularity_verdict(&cat, &DegreeFunction::setop(tv.clone()), bound)?;
            ensure(verdict.nonsingular == !expected.contains(&tv), || {
                format!("verdict at t = {tv}")
            })?;
            ensure(verdict.nonsingular == verdict.witness.is_none(), || {
                "witness mismatch".into()
            })?;
        }
    }
    for (q, dmax) in [(2u64, 3usize), (3, 2)] {
        let v = FinVectFq::new(q, Limits::default())?;
        for d in 1..=dmax {
            let expected: Vec<Rational> = (0..d as u32).map(|i| int((q as i64).pow(i))).collect();
            let rep = singular_parameters(&v, d)?;
            ensure(rep.singular_params == expected, || {
                format!("q = {q}, dim ≤ {d}: {:?}", rep.singular_params)
            })?;
            let top = (q as i64).pow(d as u32);
            for tv in (-1..=top + 1).map(int).chain([rat("3/2")]) {
                let verdict = nonsingularity_verdict(&v, &DegreeFunction::vect(tv.clone()), d)?;
                ensure(verdict.nonsingular == !expected.contains(&tv), || {
                    format!("q = {q} verdict at t = {tv}")
                })?;
            }
        }
    }
    Ok("setop m ≤ 4, F_2 d ≤ 3, F_3 d ≤ 2".into())
}

fn check_gram<C: RegularCategory>(
    cat: &C,
    delta: &DegreeFunction<MultiPoly>,
    x: Obj,
    entry: impl Fn(&C::Sub, &C::Sub) -> usize,
    omega_of: impl Fn(&C::Sub) -> MultiPoly,
) -> Result<MultiPoly, Box<dyn StdError>> {
    let g = gram_omega(cat, delta, x)?;
    let subs = &g.subobjects;
    for (i, u) in subs.iter().enumerate() {
        for (j, w) in subs.iter().enumerate() {
            let e = t().pow(entry(u, w) as u32);
            ensure(g.matrix[(i, j)] == e, || {
                format!("β at ({i},{j}) for x = {x}")
            })?;
        }
    }
    let product = subs
        .iter()
        .fold(MultiPoly::one(), |acc, u| &acc * &omega_of(u));
    ensure(g.det == product && g.factorization_holds, || {
        format!("Ω_{x} = {} vs {}", g.det, product)
    })?;
    for tv in [int(5), int(-3), rat("7/2")] {
        let rows: Vec<Vec<Rational>> = subs
            .iter()
            .map(|u| subs.iter().map(|w| tv.pow(entry(u, w) as u32)).collect())
            .collect();
        ensure(det(&rows) == eval(&g.det, &tv), || {
            format!("determinant of x = {x} at t = {tv}")
        })?;
    }
    Ok(g.det)
}

fn criterion_4() -> Outcome {
    let cat = FinSetOp::default();
    let delta = DegreeFunction::setop(t());
    let mut omega2 = None;
    for x in 0..=4 {
        let d = check_gram(
            &cat,
            &delta,
            x,
            |u, w| u.join(w).num_blocks(),
            |u| falling(u.num_blocks()),
        )?;
        if x == 2 {
            omega2 = Some(d);
        }
    }
    ensure(omega2 == Some(&t().pow(2) * &lin(1)), || {
        "Ω of the 2-set".into()
    })?;
    let v = f2();
    let delta = DegreeFunction::vect(t());
    for x in 0..=2 {
        check_gram(
            &v,
            &delta,
            x,
            |u, w| u.dim() + w.dim() - u.basis().vcat(w.basis()).rank(2),
            |u| q_falling(2, u.dim()),
        )?;
    }
    Ok("setop ≤ 4, F_2 ≤ 2".into())
}

fn criterion_5() -> Outcome {
    let mut dims = Vec::new();
    for (tv, singular) in [
        ("0", true),
        ("1", true),
        ("2", true),
        ("-1", false),
        ("7/2", false),
    ] {
        let env = Envelope::new(FinSetOp::default(), DegreeFunction::setop(rat(tv)));
        let basis: Vec<LinearHom<Rational>> = (0..15)
            .map(|i| env.basis_element(2, 2, i))
            .collect::<Result<_, _>>()?;
        let form: Vec<Vec<Rational>> = basis
            .iter()
            .map(|g| {
                basis
                    .iter()
                    .map(|f| env.trace(&env.compose_hom(g, f)?))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let oracle_dim = 15 - rank(&form);
        let rad = radical(&env, 2, 2)?;
        ensure(rad.radical_dim == oracle_dim, || {
            format!("t = {tv}: {} vs {oracle_dim}", rad.radical_dim)
        })?;
        ensure((oracle_dim > 0) == singular, || {
            format!("t = {tv}: radical dim {oracle_dim}")
        })?;
        for v in &rad.basis {
            let f = LinearHom {
                source: 2,
                target: 2,
                coeffs: v.clone(),
            };
            ensure(!f.is_zero(), || "zero radical vector".into())?;
            for g in &basis {
                ensure(env.trace(&env.compose_hom(g, &f)?)?.is_zero(), || {
                    format!("t = {tv}: tr(g f) ≠ 0")
                })?;
            }
        }
        dims.push(format!("{tv}:{oracle_dim}"));
    }
    Ok(format!("radical dims {}", dims.join(" ")))
}

fn criterion_6() -> Outcome {
    let cat = FinSetOp::default();
    let tv = rat("7/2");
    let mut out = Vec::new();
    for x in 1..=2 {
        let expected: usize = (0..=x).map(symmetric_classes).sum();
        let c = simple_census(&cat, x, 2, &tv)?;
        ensure(c.predicted_blocks == expected, || {
            format!("predicted {} vs {expected}", c.predicted_blocks)
        })?;
        ensure(
            c.symbolic.radical_dim == 0 && c.symbolic.center_dim == expected,
            || format!("symbolic center {} for x = {x}", c.symbolic.center_dim),
        )?;
        ensure(c.blocks.blocks.len() == expected, || {
            format!("{} blocks for x = {x}", c.blocks.blocks.len())
        })?;
        ensure(c.blocks.sum_of_squares() == bell(2 * x), || {
            format!("Σd² = {}", c.blocks.sum_of_squares())
        })?;
        ensure(c.agrees, || "census disagrees".into())?;
        out.push(format!(
            "n={x}: {} blocks {:?}",
            expected,
            c.blocks.split_dims()
        ));
    }
    let c = simple_census(&f2(), 1, 2, &tv)?;
    ensure(
        c.predicted_blocks == 2 && c.blocks.blocks.len() == 2 && c.blocks.sum_of_squares() == 5,
        || "F_2 line census".into(),
    )?;
    ensure(c.agrees, || "F_2 census disagrees".into())?;
    out.push("F_2 n=1: 2 blocks".into());
    Ok(out.join(", "))
}

fn criterion_7() -> Outcome {
    let p = UniformFunctor::new(FinSetOp::default(), 3)?;
    let mut out = Vec::new();
    for n in 1..=2 {
        let orbits = tuple_orbits(3, 2 * n);
        let rep = interpolation_dim_check(&p, n, n)?;
        ensure(rep.quotient_dim == orbits && rep.holds, || {
            format!("n = {n}: quotient {} vs {orbits} orbits", rep.quotient_dim)
        })?;
        out.push(format!("n={n}: {orbits}"));
    }
    ensure(tuple_orbits(3, 2) == 2 && tuple_orbits(3, 4) == 14, || {
        "orbit counts".into()
    })?;
    Ok(out.join(", "))
}

/// `T_P(r)` for `P = Hom_Set(-, [3])`: entry `(ψ, φ)` is 1 when the joint
/// labelling `(φ, ψ)` is constant on the blocks of `r`.
fn diagram_matrix(r: &Partition, x: usize, elems: &[Vec<usize>]) -> Vec<Vec<Rational>> {
    elems
        .iter()
        .map(|psi| {
            elems
                .iter()
                .map(|phi| {
                    let joint: Vec<usize> = phi.iter().chain(psi.iter()).copied().collect();
                    let ok = (0..2 * x).all(|i| {
                        (0..2 * x).all(|j| r.labels()[i] != r.labels()[j] || joint[i] == joint[j])
                    });
                    int(ok as i64)
                })
                .collect()
        })
        .collect()
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    (0..b.len()).fold(int(0), |acc, k| acc + a[i][k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let cat = FinSetOp::default();
    let p = UniformFunctor::new(cat.clone(), 3)?;
    let env = Envelope::new(cat.clone(), DegreeFunction::setop(int(3)));
    let mut pairs = 0;
    for x in 1..=2 {
        let elems: Vec<Vec<usize>> = p.apply(x)?.elements.iter().map(|m| m.map.clone()).collect();
        let space = env.hom_basis(x, x)?;
        let oracle: Vec<Vec<Vec<Rational>>> = space
            .relations()
            .map(|r| diagram_matrix(&r.body, x, &elems))
            .collect();
        let lib = specialize_basis(&p, &env, x, x)?;
        for (i, m) in lib.iter().enumerate() {
            let rows: Vec<Vec<Rational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
            ensure(rows == oracle[i], || {
                format!("T_P of basis element {i} of End([{x}])")
            })?;
        }
        for (i, r) in space.relations().enumerate() {
            for (j, s) in space.relations().enumerate() {
                let (labels, loops) = stack_diagrams(r.body.labels(), x, x, s.body.labels(), x);
                let composite = diagram_matrix(&Partition::from_labels(&labels), x, &elems);
                let scale = int(3).pow(loops as u32);
                let expected: Vec<Vec<Rational>> = composite
                    .iter()
                    .map(|row| row.iter().map(|v| v.clone() * scale.clone()).collect())
                    .collect();
                ensure(matmul(&oracle[j], &oracle[i]) == expected, || {
                    format!("pair ({i},{j}) in End([{x}])")
                })?;
                pairs += 1;
            }
        }
        let rep = functoriality_check(&p, &env, x)?;
        ensure(rep.holds && rep.witness.is_none(), || {
            format!("functoriality on End([{x}])")
        })?;
        if x == 1 {
            let id: Vec<Vec<Rational>> = (0..3)
                .map(|i| (0..3).map(|j| int((i == j) as i64)).collect())
                .collect();
            let ones = vec![vec![int(1); 3]; 3];
            let mut got = oracle.clone();
            got.sort();
            let mut want = vec![id, ones];
            want.sort();
            ensure(got == want, || "End([1]) specializes to {I, J}".into())?;
        }
    }
    let bad_env = Envelope::new(cat.clone(), DegreeFunction::setop(int(2)));
    let bad = functoriality_check(&p, &bad_env, 1)?;
    ensure(!bad.holds && bad.witness.is_some(), || {
        "t = 2 not detected by functoriality".into()
    })?;
    let adapted = uniformity_and_adapted_check(&p, &DegreeFunction::setop(int(2)), 2)?;
    ensure(!adapted.adapted && adapted.witness.is_some(), || {
        "t = 2 not detected by adaptedness".into()
    })?;
    Ok(format!(
        "{pairs} pairs at t = 3, t = 2 witness {:?}",
        bad.witness.unwrap()
    ))
}

fn lattices() -> Result<Vec<(String, PartialSemilattice)>, Box<dyn StdError>> {
    let mut out = Vec::new();
    let cat = FinSetOp::default();
    for x in 0..=4 {
        out.push((
            format!("sub set {x}"),
            PartialSemilattice::of_subobjects(&cat, x)?.0,
        ));
    }
    let v = f2();
    for x in 0..=3 {
        out.push((
            format!("sub F_2^{x}"),
            PartialSemilattice::of_subobjects(&v, x)?.0,
        ));
    }
    out.push(("chain 5".into(), PartialSemilattice::chain(5)));
    out.push(("boolean 3".into(), PartialSemilattice::boolean(3)));
    Ok(out)
}

fn pushpull_squares<C: RegularCategory>(
    cat: &C,
    bound: Obj,
) -> Result<(usize, usize), Box<dyn StdError>> {
    let (mut squares, mut pullbacks) = (0, 0);
    for x in 0..=bound {
        let es = surjections_out_of(cat, x);
        for e1 in &es {
            for e2 in &es {
                let c = cat.pushout(e1, e2)?;
                ensure(
                    cat.compose(&c.left, e1)? == cat.compose(&c.right, e2)?,
                    || "pushout square commutes".into(),
                )?;
                ensure(
                    cat.is_surjective(&c.left) && cat.is_surjective(&c.right),
                    || "pushout legs".into(),
                )?;
                let comparison = cat.pair(e1, e2)?;
                let injective = cat.is_injective(&comparison);
                let is_pullback = match cat.pullback(&c.left, &c.right)? {
                    None => false,
                    Some(span) => {
                        let apex = cat.image(&cat.pair(&span.left, &span.right)?).mono;
                        injective && cat.image(&comparison).mono == apex
                    }
                };
                ensure(is_pullback == injective, || {
                    format!("square over {x}: pullback {is_pullback}")
                })?;
                squares += 1;
                pullbacks += is_pullback as usize;
            }
        }
    }
    Ok((squares, pullbacks))
}

fn criterion_9() -> Outcome {
    let cat = FinSetOp::default();
    let v = f2();
    let exhaustive = |bound| Validation::Exhaustive { bound };
    for delta in [DegreeFunction::setop(t()), DegreeFunction::trivial()] {
        let rep = validate_degree_axioms(&delta, &cat, &exhaustive(3))?;
        ensure(rep.passed() && rep.d3_checked > 0, || {
            format!("{} on sets", delta.family_name())
        })?;
    }
    let rep = validate_degree_axioms(&DegreeFunction::setop(rat("5/2")), &cat, &exhaustive(3))?;
    ensure(rep.passed(), || "t = 5/2 on sets".into())?;
    let rep = validate_degree_axioms(&DegreeFunction::vect(t()), &v, &exhaustive(2))?;
    ensure(rep.passed() && rep.d2_checked > 0, || {
        "natural degree on F_2".into()
    })?;
    let bad = DegreeTable::from_fn(3, |a, b| int(if a == b { 2 } else { 1 }));
    ensure(
        DegreeFunction::validated_table(&cat, bad, 3).is_err(),
        || "bad table accepted".into(),
    )?;

    let mut rng = StdRng::seed_from_u64(33);
    let all = lattices()?;
    for (name, lat) in &all {
        lat.check_axioms()?;
        let mu = moebius(lat);
        ensure(mu.inverts_zeta(lat), || format!("{name}: μ ζ ≠ 1"))?;
        let n = lat.len();
        for u in 0..n {
            for w in 0..n {
                if lat.le(u, w) {
                    let s: i64 = (0..n)
                        .filter(|&k| lat.le(u, k) && lat.le(k, w))
                        .map(|k| mu.get(k, w))
                        .sum();
                    ensure(s == (u == w) as i64, || format!("{name}: ζ μ at ({u},{w})"))?;
                }
            }
        }
        check_idempotents(lat, &lattice_idempotents(lat, &mu))?;
        for _ in 0..50 {
            let phi: Vec<Rational> = (0..n)
                .map(|_| Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
                .collect();
            let w = wilf_determinant(lat, &mu, &phi)?;
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| lat.meet(a, b).map_or(int(0), |m| phi[m].clone()))
                        .collect()
                })
                .collect();
            ensure(w.agrees && w.det == det(&rows), || format!("{name}: Wilf"))?;
        }
    }

    let mut stanley = 0;
    for x in 0..=3 {
        for e in surjections_out_of(&cat, x) {
            for l in cat.subobjects(x)?.iter() {
                ensure(stanley_split(&cat, &e, l)?.holds, || {
                    format!("Stanley for {e:?}")
                })?;
                stanley += 1;
            }
        }
    }
    for x in 0..=2 {
        for e in surjections_out_of(&v, x) {
            for l in v.subobjects(x)?.iter() {
                ensure(stanley_split(&v, &e, l)?.holds, || {
                    format!("Stanley for {e:?}")
                })?;
                stanley += 1;
            }
        }
    }
    let (s1, p1) = pushpull_squares(&cat, 3)?;
    let (s2, p2) = pushpull_squares(&v, 2)?;
    ensure(p1 > 0 && p1 < s1 && p2 > 0 && p2 < s2, || {
        "pushpull saw only one kind of square".into()
    })?;
    Ok(format!(
        "{} lattices, {stanley} Stanley cases, {} squares ({} pullbacks)",
        all.len(),
        s1 + s2,
        p1 + p2
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(Ok(detail)) => println!("criterion {n}: PASS ({detail}; {secs:.1}s)"),
            Ok(Err(e)) => {
                failed += 1;
                println!("criterion {n}: FAIL ({e})");
            }
            Err(p) => {
                failed += 1;
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {n}: FAIL (panic: {msg})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
