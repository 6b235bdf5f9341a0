mod common;

use proptest::prelude::*;

use common::*;
use tenv_core::backend::{
    FinSetOp, FinVectFq, FqMat, Limits, Partition, RegularCategory, Subspace,
};
use tenv_core::degree::DegreeFunction;
use tenv_core::envelope::Envelope;
use tenv_core::relations::{relation, transpose, Relation};
use tenv_core::scalar::{MultiPoly, Rational};
use tenv_core::specialization::{specialize_relation, UniformFunctor};

fn partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n.max(1), n).prop_map(|raw| Partition::from_labels(&raw))
}

fn setop_rel(m: usize, n: usize) -> impl Strategy<Value = Relation<Partition>> {
    partition(m + n).prop_map(move |body| Relation {
        left: m,
        right: n,
        body,
    })
}

fn composable_pair() -> impl Strategy<Value = (Relation<Partition>, Relation<Partition>)> {
    (0usize..4, 0usize..4, 0usize..4).prop_flat_map(|(m, n, k)| (setop_rel(m, n), setop_rel(n, k)))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(p, q)| Rational::new(p, q))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(|c| MultiPoly::from_dense("t", &c))
}

fn fq_rows(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = FqMat> {
    prop::collection::vec(0..q, rows * cols).prop_map(move |d| FqMat::from_rows(rows, cols, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_diagrams((r, s) in composable_pair()) {
        let env = Envelope::new(FinSetOp::default(), DegreeFunction::setop(t()));
        let w = env.weighted(&r, &s).unwrap().unwrap();
        let (labels, loops) = stack_diagrams(r.body.labels(), r.left, r.right, s.body.labels(), s.right);
        prop_assert_eq!(w.rel.body, Partition::from_labels(&labels));
        prop_assert_eq!(w.coeff, t().pow(loops as u32));
    }

    #[test]
    fn weighted_composition_is_associative(
        a in setop_rel(2, 2),
        b in setop_rel(2, 1),
        c in setop_rel(1, 2),
    ) {
        let env = Envelope::new(FinSetOp::default(), DegreeFunction::setop(t()));
        let ab = env.weighted(&a, &b).unwrap().unwrap();
        let left = env.weighted(&ab.rel, &c).unwrap().unwrap();
        let bc = env.weighted(&b, &c).unwrap().unwrap();
        let right = env.weighted(&a, &bc.rel).unwrap().unwrap();
        prop_assert_eq!(&left.rel, &right.rel);
        prop_assert_eq!(&ab.coeff * &left.coeff, &bc.coeff * &right.coeff);
    }

    #[test]
    fn transpose_is_an_involution(r in setop_rel(2, 3)) {
        let cat = FinSetOp::default();
        let tr = transpose(&cat, &r).unwrap();
        prop_assert_eq!((tr.left, tr.right), (3, 2));
        prop_assert_eq!(transpose(&cat, &tr).unwrap(), r);
    }

    #[test]
    fn specialized_transpose_is_matrix_transpose(r in setop_rel(1, 2)) {
        let cat = FinSetOp::default();
        let p = UniformFunctor::new(cat.clone(), 3).unwrap();
        let (p1, p2) = (p.apply(1).unwrap(), p.apply(2).unwrap());
        let m = specialize_relation(&p, &r, &p1, &p2).unwrap();
        let mt = specialize_relation(&p, &transpose(&cat, &r).unwrap(), &p2, &p1).unwrap();
        prop_assert_eq!(m.transpose(), mt);
    }

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), int(0));
        if let Some(inv) = b.recip() {
            prop_assert_eq!(b.clone() * inv, int(1));
        }
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn substitution_is_a_ring_map(p in poly(), q in poly(), v in rational()) {
        let at = |x: &MultiPoly| x.substitute("t", &v).constant_value().unwrap();
        prop_assert_eq!(at(&(&p * &q)), at(&p) * at(&q));
        prop_assert_eq!(at(&(&p + &q)), at(&p) + at(&q));
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(), q in poly()) {
        let prod = &p * &q;
        if !q.is_constant() || q.constant_value() != Some(int(0)) {
            prop_assert_eq!(prod.exact_div(&q), Some(p));
        }
    }

    #[test]
    fn rank_nullity_over_fq(m in fq_rows(3, 3, 4)) {
        let k = m.kernel(3);
        prop_assert_eq!(m.rank(3) + k.rows(), 4);
        prop_assert!(m.mul(&k.transpose(), 3).is_zero());
    }

    #[test]
    fn subspace_span_is_canonical(m in fq_rows(2, 3, 4), mix in fq_rows(2, 3, 3)) {
        let combined = mix.mul(&m, 2);
        let a = Subspace::span(2, &m);
        let b = Subspace::span(2, &m.vcat(&combined));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn vect_relation_composite_is_a_subspace(
        r in fq_rows(2, 2, 3),
        s in fq_rows(2, 2, 3),
    ) {
        let v = FinVectFq::new(2, Limits::default()).unwrap();
        let env = Envelope::new(v.clone(), DegreeFunction::vect(t()));
        let r = relation(&v, 1, 2, Subspace::span(2, &r)).unwrap();
        let s = relation(&v, 2, 1, Subspace::span(2, &s)).unwrap();
        let w = env.weighted(&r, &s).unwrap().unwrap();
        prop_assert_eq!(v.sub_ambient(&w.rel.body), 2);
        prop_assert!(v.subobjects(2).unwrap().contains(&w.rel.body));
    }
}
