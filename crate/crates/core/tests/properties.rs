//! Randomized invariants across the modules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcoinv::cli::checks::{generators, random_elem};
use qcoinv::cli::json::{elem_from_json, elem_to_json};
use qcoinv::cli::parse::parse_expr;
use qcoinv::coact::{coact, is_coinvariant, CoactionKind, Kind};
use qcoinv::coinv::coinvariant_basis;
use qcoinv::hopf::{self, coproduct, counit, GLElem, Slot, TensorElem};
use qcoinv::qmatrix::{reduce_word_with, AlgElem, Gen};
use qcoinv::rform::{Norm, RForm};
use qcoinv::scalar::linalg::fraction_solve;
use qcoinv::scalar::{Coeff, Notation, QFraction, QScalar};

fn coeff() -> impl Strategy<Value = Coeff> {
    prop_oneof![
        (-9i64..=9).prop_map(Coeff::from),
        (any::<i64>(), 1i64..=7).prop_map(|(a, b)| Coeff::from(BigRational::new(a.into(), b.into()))),
        (any::<i64>(), any::<i64>()).prop_map(|(a, b)| Coeff::from(BigInt::from(a) * BigInt::from(b))),
    ]
}

fn scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-6i32..=6, coeff()), 0..4).prop_map(QScalar::from_terms)
}

/// Entries like those of the r-form systems: few terms, small integers.
fn small_scalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-3i32..=3, -5i64..=5), 0..3).prop_map(QScalar::from_terms)
}

fn nonzero_scalar() -> impl Strategy<Value = QScalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn elem(n: usize, max_deg: usize) -> impl Strategy<Value = GLElem> {
    any::<u64>().prop_map(move |seed| random_elem(&mut ChaCha8Rng::seed_from_u64(seed), n, max_deg))
}

fn word(n: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec((0..n as u8, 0..n as u8).prop_map(|(row, col)| Gen { row, col }), 1..=5)
}

fn size() -> impl Strategy<Value = usize> {
    2usize..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a - &b) + &b) == a);
    }

    #[test]
    fn divide_exact_inverts_multiplication(a in scalar(), b in nonzero_scalar()) {
        prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn coeff_matches_rationals(a in coeff(), b in coeff()) {
        let (x, y) = (a.to_rational(), b.to_rational());
        prop_assert_eq!((&a + &b).to_rational(), &x + &y);
        prop_assert_eq!((&a - &b).to_rational(), &x - &y);
        prop_assert_eq!((&a * &b).to_rational(), &x * &y);
        if !b.is_zero() {
            prop_assert_eq!((&a / &b).to_rational(), &x / &y);
        }
        // small values always take the small representation
        prop_assert_eq!(Coeff::from(x.clone()), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn fraction_solve_residuals(
        entries in prop::collection::vec(small_scalar(), 12),
        rhs in prop::collection::vec(small_scalar(), 3),
    ) {
        let m: Vec<Vec<QFraction>> =
            entries.chunks(4).map(|r| r.iter().cloned().map(QFraction::from_scalar).collect()).collect();
        let b: Vec<QFraction> = rhs.into_iter().map(QFraction::from_scalar).collect();
        let sol = fraction_solve(&m, &b);
        let apply = |v: &[QFraction]| -> Vec<QFraction> {
            m.iter().map(|row| row.iter().zip(v).fold(QFraction::zero(), |acc, (x, y)| acc.add(&x.mul(y)))).collect()
        };
        for k in &sol.kernel {
            prop_assert!(apply(k).iter().all(|x| x.is_zero()));
        }
        if let Some(x) = &sol.particular {
            prop_assert_eq!(apply(x), b.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reduction_order_does_not_matter(n in size(), w in word(3), seed in any::<u64>()) {
        let w: Vec<Gen> = w.into_iter().map(|g| Gen { row: g.row % n as u8, col: g.col % n as u8 }).collect();
        let nf = AlgElem::normal_form_gens(n, &w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        prop_assert_eq!(reduce_word_with(n, &w, |k| rng.gen_range(0..k)), nf.clone());
        prop_assert_eq!(reduce_word_with(n, &w, |k| k - 1), nf);
    }

    #[test]
    fn multiplication_associative_unital(n in size(), a in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(a);
        let (x, y, z) = (random_elem(&mut rng, n, 2), random_elem(&mut rng, n, 2), random_elem(&mut rng, n, 2));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&GLElem::one(n)), x.clone());
        prop_assert_eq!(GLElem::one(n).mul(&x), x);
    }

    #[test]
    fn no_zero_divisors(n in size(), a in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(a);
        let x = random_elem(&mut rng, n, 2).num().homogeneous_components().into_values().last();
        let y = random_elem(&mut rng, n, 2).num().homogeneous_components().into_values().last();
        prop_assume!(x.is_some() && y.is_some());
        let (x, y) = (x.unwrap(), y.unwrap());
        let p = x.mul(&y);
        prop_assert!(!p.is_zero());
        prop_assert_eq!(p.homogeneous_degree(), Some(x.homogeneous_degree().unwrap() + y.homogeneous_degree().unwrap()));
    }

    #[test]
    fn bialgebra_n3(a in elem(3, 2), b in elem(3, 2)) {
        prop_assert!(coproduct(&a.mul(&b)).sub(&coproduct(&a).mul(&coproduct(&b))).is_zero());
        prop_assert_eq!(counit(&a.mul(&b)), &counit(&a) * &counit(&b));
    }

    #[test]
    fn bialgebra_n2(a in elem(2, 2), b in elem(2, 2)) {
        prop_assert!(coproduct(&a.mul(&b)).sub(&coproduct(&a).mul(&coproduct(&b))).is_zero());
        prop_assert_eq!(counit(&a.mul(&b)), &counit(&a) * &counit(&b));
    }

    #[test]
    fn grading_is_multiplicative(a in elem(2, 2), b in elem(2, 2)) {
        let ga = hopf::pi_z_grade(&a);
        let gb = hopf::pi_z_grade(&b);
        for d in hopf::pi_z_grade(&a.mul(&b)).keys() {
            prop_assert!(ga.keys().any(|x| gb.keys().any(|y| x + y == *d)));
        }
    }

    #[test]
    fn iota_is_injective_and_multiplicative(n in size(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_elem(&mut rng, n, 3);
        let b = random_elem(&mut rng, n, 1);
        prop_assert!(!hopf::iota_embed(&a).is_empty());
        prop_assert_eq!(hopf::iota_mul(&hopf::iota_embed(&a), &hopf::iota_embed(&b), n), hopf::iota_embed(&a.mul(&b)));
    }

    #[test]
    fn det_minus_one_ideal(n in size(), seed in any::<u64>()) {
        let a = random_elem(&mut ChaCha8Rng::seed_from_u64(seed), n, 2);
        let ideal = a.mul(&GLElem::det(n).sub(&GLElem::one(n)));
        prop_assert!(hopf::sl_is_zero(&ideal));
    }

    #[test]
    fn json_and_text_round_trip(n in size(), seed in any::<u64>(), k in 0u32..2) {
        let a = random_elem(&mut ChaCha8Rng::seed_from_u64(seed), n, 3).mul(&GLElem::det_inverse(n, k));
        let j = elem_to_json(&a);
        prop_assert_eq!(&elem_from_json(&j).unwrap(), &a);
        prop_assert_eq!(elem_to_json(&elem_from_json(&j).unwrap()), j);
        for notation in [Notation::Q, Notation::S] {
            prop_assert_eq!(&parse_expr(&a.to_expr_in(notation), n).unwrap(), &a);
        }
    }
}

/// `sum a2 (x) pi_Z(a1)` and `sum a1 (x) pi_Z(a2)`, keyed by the power of `z`.
fn central_sides(a: &GLElem) -> (BTreeMap<i64, GLElem>, BTreeMap<i64, GLElem>) {
    let n = a.n();
    let d = coproduct(a);
    let mut left: BTreeMap<i64, GLElem> = BTreeMap::new();
    let mut right: BTreeMap<i64, GLElem> = BTreeMap::new();
    for (legs, c) in d.terms() {
        for (z, w) in hopf::pi_z(&d.leg_elem(legs, 0)) {
            let e = left.entry(z).or_insert_with(|| GLElem::zero(n));
            *e = e.add(&d.leg_elem(legs, 1).scale(&(c * &w)));
        }
        for (z, w) in hopf::pi_z(&d.leg_elem(legs, 1)) {
            let e = right.entry(z).or_insert_with(|| GLElem::zero(n));
            *e = e.add(&d.leg_elem(legs, 0).scale(&(c * &w)));
        }
    }
    left.retain(|_, v| !v.is_zero());
    right.retain(|_, v| !v.is_zero());
    (left, right)
}

#[test]
fn central_subgroup_identity() {
    for n in [2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut elems = generators(n);
        elems.push(GLElem::det_inverse(n, 1));
        elems.extend((0..20).map(|_| random_elem(&mut rng, n, 2)));
        for a in &elems {
            let (l, r) = central_sides(a);
            assert_eq!(l, r, "{}", a);
        }
    }
}

#[test]
fn lambda_and_rho_commute() {
    for n in [2, 3] {
        let lambda = CoactionKind::new(Kind::Lambda, Slot::Gl);
        let rho = CoactionKind::new(Kind::Rho, Slot::Gl);
        for a in generators(n) {
            // (lambda (x) id) rho and (id (x) rho) lambda, both as O (x) V (x) O
            let mut lhs = TensorElem::zero(n, &[Slot::Gl; 3]);
            let r = coact(rho, &a);
            for (legs, c) in r.terms() {
                for (l2, c2) in coact(lambda, &r.leg_elem(legs, 0)).terms() {
                    lhs.add_term(vec![l2[0].clone(), l2[1].clone(), legs[1].clone()], &(c * c2));
                }
            }
            let mut rhs = TensorElem::zero(n, &[Slot::Gl; 3]);
            let l = coact(lambda, &a);
            for (legs, c) in l.terms() {
                for (r2, c2) in coact(rho, &l.leg_elem(legs, 1)).terms() {
                    rhs.add_term(vec![legs[0].clone(), r2[0].clone(), r2[1].clone()], &(c * c2));
                }
            }
            assert!(lhs.sub(&rhs).is_zero());
        }
    }
}

#[test]
fn coinvariant_bases_are_coinvariant_and_closed() {
    let n = 2;
    for kind in [Kind::Alpha, Kind::Beta, Kind::Lambda, Kind::Rho] {
        for target in [Slot::Gl, Slot::Sl] {
            let ck = CoactionKind::new(kind, target);
            let mut all = Vec::new();
            for d in 0..=3 {
                for v in coinvariant_basis(ck, n, d).basis {
                    let v = GLElem::from_alg(v);
                    assert!(is_coinvariant(ck, &v), "{} {}", ck, v);
                    all.push(v);
                }
            }
            // products of coinvariants stay coinvariant, and commute for alpha and beta
            for x in all.iter().filter(|v| v.num().max_degree() <= Some(2)) {
                for y in all.iter().filter(|v| v.num().max_degree() <= Some(1)) {
                    assert!(is_coinvariant(ck, &x.mul(y)), "{} {} {}", ck, x, y);
                    if matches!(kind, Kind::Alpha | Kind::Beta) {
                        let comm = x.mul(y).sub(&y.mul(x));
                        assert!(if target == Slot::Gl { comm.is_zero() } else { hopf::sl_is_zero(&comm) });
                    }
                }
            }
        }
    }
}

#[test]
fn rform_convolution_on_random_degree_two_pairs() {
    let n = 2;
    let f = RForm::solve(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let a =
            GLElem::from_alg(random_elem(&mut rng, n, 2).num().homogeneous_components().into_values().last().unwrap());
        let b =
            GLElem::from_alg(random_elem(&mut rng, n, 2).num().homogeneous_components().into_values().last().unwrap());
        assert!(f.convolution_identity(Norm::Gl, &a, &b), "{} {}", a, b);
        assert!(f.convolution_identity(Norm::Sl, &a, &b), "{} {}", a, b);
    }
}
