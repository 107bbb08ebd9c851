//! Randomized invariant suite: algebraic laws that must hold for *every*
//! input, exercised over generated data. All assertions are exact.

use inoue::affine_group::{
    build_generators_type2, build_generators_type3, normal_form, AffineMap, Cx, NormalForm,
};
use inoue::centralizer::positive_centralizer_generator;
use inoue::conjugacy::{are_similar, associated_form, reduce_with_transform, similarity_classes, Similarity};
use inoue::cubic::{is_alpha_stable, multiplication_matrix, stable_sublattices, ideals_equivalent};
use inoue::exact_arith::{int, isqrt, pell_minimal, quad_compare, rat, QuadElem};
use inoue::intmat::{gl_inverse, quotient_group, smith_normal_form, IMat};
use inoue::moduli_core::{
    admissible_alpha, canonical_eigenpair, compat_c_from_p, compat_matrix, compat_p_from_c,
    k_dot_c, k_dot_t, k_dot_t_closed_form, star_action, Kind,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::cmp::Ordering;

// ---------------------------------------------------------------- helpers

fn quad(d: i64, an: i64, ad: i64, bn: i64, bd: i64) -> QuadElem {
    QuadElem::new(int(d), rat(an, ad), rat(bn, bd))
}

/// Strategy for elements of Q(√5) with small numerators and denominators.
fn quad_strategy() -> impl Strategy<Value = QuadElem> {
    ((-9i64..=9), (1i64..=4), (-9i64..=9), (1i64..=4))
        .prop_map(|(an, ad, bn, bd)| quad(5, an, ad, bn, bd))
}

/// Word in the generators of GL(2,Z); `proper_only` restricts to SL(2,Z).
fn gl_word(letters: &[u8], proper_only: bool) -> IMat {
    let gens = [
        IMat::mat2(1, 1, 0, 1),
        IMat::mat2(1, -1, 0, 1),
        IMat::mat2(0, -1, 1, 0),
        IMat::mat2(1, 0, 0, -1),
    ];
    let modulus = if proper_only { 3 } else { 4 };
    let mut k = IMat::identity(2);
    for &l in letters {
        k = k.mul(&gens[(l as usize) % modulus]);
    }
    k
}

fn word_strategy(len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..=len)
}

fn mat_strategy(rows: usize, cols: usize, span: i64) -> impl Strategy<Value = IMat> {
    prop::collection::vec(-span..=span, rows * cols)
        .prop_map(move |v| IMat::new(rows, cols, v.into_iter().map(int).collect()))
}

fn rep_of(theta: i64, det: i64) -> IMat {
    similarity_classes(theta, det).unwrap()[0].representative.clone()
}

/// Evaluate an ascending-coefficient polynomial at a square matrix.
fn poly_at(coeffs: &[BigInt], a: &IMat) -> IMat {
    let n = a.rows();
    let mut acc = IMat::zero(n, n);
    let mut power = IMat::identity(n);
    for c in coeffs {
        acc = acc.add(&power.scale(c));
        power = power.mul(a);
    }
    acc
}

// ----------------------------------------------------- exact_arith laws

proptest! {
    #[test]
    fn quad_field_axioms(x in quad_strategy(), y in quad_strategy(), z in quad_strategy()) {
        let xy = x.checked_add(&y).unwrap();
        prop_assert_eq!(xy.checked_add(&z).unwrap(),
                        x.checked_add(&y.checked_add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.checked_mul(&y).unwrap(), y.checked_mul(&x).unwrap());
        let lhs = x.checked_mul(&y.checked_add(&z).unwrap()).unwrap();
        let rhs = x.checked_mul(&y).unwrap().checked_add(&x.checked_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quad_conj_and_norm_are_multiplicative(x in quad_strategy(), y in quad_strategy()) {
        let xy = x.checked_mul(&y).unwrap();
        prop_assert_eq!(xy.conj(), x.conj().checked_mul(&y.conj()).unwrap());
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        prop_assert_eq!(x.checked_mul(&x.conj()).unwrap().as_rational().cloned(),
                        Some(x.norm()));
    }

    #[test]
    fn quad_inverse_cancels(x in quad_strategy()) {
        prop_assume!(!x.is_zero());
        let inv = x.inverse().unwrap();
        prop_assert!(x.checked_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn quad_floor_brackets_value(x in quad_strategy()) {
        let f = x.floor();
        let lo = QuadElem::from_int(x.radicand(), &f);
        let hi = QuadElem::from_int(x.radicand(), &(&f + 1));
        prop_assert_ne!(quad_compare(&lo, &x).unwrap(), Ordering::Greater);
        prop_assert_eq!(quad_compare(&hi, &x).unwrap(), Ordering::Greater);
    }
}

#[test]
fn pell_solutions_are_minimal() {
    for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 19, 29] {
        let (x, y, sign) = pell_minimal(&int(d)).unwrap();
        assert_eq!(&x * &x - int(d) * &y * &y, int(sign as i64), "d={d}");
        assert!(y.is_positive());
        // No positive y' < y solves x'² − d·y'² = ±1.
        let mut yp = BigInt::one();
        while yp < y {
            let square = int(d) * &yp * &yp;
            for s in [-1i64, 1] {
                let cand = &square + int(s);
                if !cand.is_negative() {
                    let r = isqrt(&cand);
                    assert!(&r * &r != cand, "smaller Pell solution at d={d}");
                }
            }
            yp += 1u32;
        }
    }
}

// --------------------------------------------------------- intmat laws

proptest! {
    #[test]
    fn snf_transform_identity(a in mat_strategy(2, 4, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.det().abs().is_one());
        prop_assert!(snf.v.det().abs().is_one());
        let divs = snf.divisors();
        for i in 0..divs.len() {
            prop_assert!(!divs[i].is_negative());
            if i + 1 < divs.len() && !divs[i].is_zero() {
                prop_assert!((&divs[i + 1] % &divs[i]).is_zero(), "divisor chain");
            }
            if divs[i].is_zero() && i + 1 < divs.len() {
                prop_assert!(divs[i + 1].is_zero(), "zeros trail");
            }
        }
        // Off-diagonal entries of D vanish.
        for r in 0..snf.d.rows() {
            for c in 0..snf.d.cols() {
                if r != c {
                    prop_assert!(snf.d.at(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_square_matches(a in mat_strategy(3, 3, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        // |det| is preserved by unimodular transforms.
        let prod: BigInt = snf.divisors().iter().product();
        prop_assert_eq!(prod, a.det().abs());
    }

    #[test]
    fn unimodular_inverse_and_power_laws(w in word_strategy(8), i in -3i64..=3, j in -3i64..=3) {
        let k = gl_word(&w, false);
        let inv = gl_inverse(&k).unwrap();
        prop_assert!(k.mul(&inv).is_identity());
        prop_assert!(inv.mul(&k).is_identity());
        prop_assert_eq!(k.pow(i + j).unwrap(), k.pow(i).unwrap().mul(&k.pow(j).unwrap()));
    }

    #[test]
    fn cayley_hamilton(a in mat_strategy(2, 2, 9), b in mat_strategy(3, 3, 6)) {
        for m in [&a, &b] {
            let cp = m.charpoly();
            let value = poly_at(&cp, m);
            for r in 0..value.rows() {
                for c in 0..value.cols() {
                    prop_assert!(value.at(r, c).is_zero(), "p(A) = 0");
                }
            }
        }
    }

    #[test]
    fn quotient_reduction_is_well_defined(
        a in mat_strategy(2, 2, 5),
        r in 1i64..=6,
        p in prop::array::uniform2(-10i64..=10),
        v in prop::array::uniform2(-3i64..=3),
        w in prop::array::uniform2(-3i64..=3),
    ) {
        let q = quotient_group(&a, &int(r));
        let p = [int(p[0]), int(p[1])];
        // Shift by lattice vectors: A·v + r·w.
        let av = a.mul_vec(&[int(v[0]), int(v[1])]);
        let shifted = [
            &p[0] + &av[0] + int(r) * int(w[0]),
            &p[1] + &av[1] + int(r) * int(w[1]),
        ];
        prop_assert_eq!(q.reduce(&p), q.reduce(&shifted));
        // Round trip through a canonical label.
        let label = q.reduce(&p);
        prop_assert_eq!(q.reduce(&q.lift(&label)), label);
        // Representative count equals the group order.
        prop_assert_eq!(int(q.representatives().len() as i64), q.order());
    }
}

// ------------------------------------------------------ conjugacy laws

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugates_are_recognized(theta in 3i64..=6, det in prop::bool::ANY, w in word_strategy(8)) {
        let det = if det { 1 } else { -1 };
        let n = rep_of(theta, det);
        let k = gl_word(&w, false);
        let conj = k.mul(&n).mul(&gl_inverse(&k).unwrap());
        match are_similar(&n, &conj, 0).unwrap() {
            Similarity::Similar(c) => prop_assert_eq!(c.mul(&n), conj.mul(&c)),
            _ => prop_assert!(false, "conjugate not recognized"),
        }
    }

    #[test]
    fn form_transforms_contragrediently(theta in 3i64..=6, w in word_strategy(8)) {
        let n = rep_of(theta, 1);
        let k = gl_word(&w, true); // proper words only
        let f = associated_form(&n).unwrap();
        let moved = gl_inverse(&k).unwrap().mul(&n).mul(&k);
        prop_assert_eq!(associated_form(&moved).unwrap(), f.transform(&k));
        // Reduction reaches a reduced form through a proper transform.
        let (reduced, t) = reduce_with_transform(&f).unwrap();
        prop_assert_eq!(f.transform(&t), reduced);
        prop_assert!(t.det().is_one());
    }
}

// ----------------------------------------------------- centralizer laws

#[test]
fn centralizer_generator_commutes_and_reaches_n() {
    for theta in 3..=8i64 {
        for det in [1i64, -1] {
            if det == -1 && theta > 6 {
                continue;
            }
            for class in similarity_classes(theta, det).unwrap() {
                let n = &class.representative;
                let generator = match positive_centralizer_generator(n) {
                    Ok(g) => g,
                    Err(_) => continue, // non-coprime lattice data is out of scope here
                };
                assert_eq!(generator.k.mul(n), n.mul(&generator.k), "K commutes with N");
                assert!(generator.k.det().abs().is_one());
                let one = QuadElem::one(generator.theta_eig.radicand());
                assert_eq!(
                    quad_compare(&generator.theta_eig, &one).unwrap(),
                    Ordering::Greater,
                    "expanding eigenvalue exceeds 1"
                );
                if let Some(e) = generator.power_to_n {
                    assert_eq!(generator.k.pow(e).unwrap(), n.clone(), "K^e = N");
                }
            }
        }
    }
}

// ----------------------------------------------------- moduli_core laws

proptest! {
    #[test]
    fn bijection_round_trip(
        theta_idx in 0usize..4,
        minus in prop::bool::ANY,
        r in 1i64..=5,
        p in prop::array::uniform2(-6i64..=6),
    ) {
        let (kind, theta) = if minus {
            (Kind::Minus, [1i64, 2, 3, 4][theta_idx])
        } else {
            (Kind::Plus, [3i64, 4, 5, 6][theta_idx])
        };
        let n = rep_of(theta, kind.det_i64());
        let alpha = admissible_alpha(theta, kind).unwrap();
        let ep = canonical_eigenpair(&n, &alpha).unwrap();
        let p = [int(p[0]), int(p[1])];
        let c = compat_c_from_p(&ep, &n, r, &p, kind);
        prop_assert_eq!(compat_p_from_c(&ep, &n, r, &c, kind).unwrap(), p);
    }

    #[test]
    fn translation_action_commutes_with_bijection(
        r in 1i64..=4,
        p in prop::array::uniform2(-4i64..=4),
        k in prop::array::uniform2(-5i64..=5),
    ) {
        let n = rep_of(3, 1);
        let alpha = admissible_alpha(3, Kind::Plus).unwrap();
        let ep = canonical_eigenpair(&n, &alpha).unwrap();
        let p = [int(p[0]), int(p[1])];
        let c = compat_c_from_p(&ep, &n, r, &p, Kind::Plus);
        let moved = k_dot_c(&ep, &n, r, &c, &k, Kind::Plus);
        let q = compat_p_from_c(&ep, &n, r, &moved, Kind::Plus).unwrap();
        prop_assert_eq!(&q[0] - &p[0], int(r) * int(-k[1]));
        prop_assert_eq!(&q[1] - &p[1], int(r) * int(k[0]));
        // The companion scalar action agrees with its closed form.
        let t = quad(5, 1, 3, -1, 2);
        let direct = k_dot_t(&ep, &n, r, &c, &t, &k);
        let closed = k_dot_t_closed_form(&ep, &n, r, &c, &t, &k).unwrap();
        prop_assert_eq!(direct, closed);
    }

    #[test]
    fn star_action_is_well_defined(
        r in 1i64..=6,
        j in 0i64..=3,
        negate in prop::bool::ANY,
        p in prop::array::uniform2(-8i64..=8),
        v in prop::array::uniform2(-3i64..=3),
        w in prop::array::uniform2(-3i64..=3),
    ) {
        let n = rep_of(4, 1);
        let lattice = compat_matrix(Kind::Plus, &n);
        let q = quotient_group(&lattice, &int(r));
        let k = if negate { n.pow(j).unwrap().neg() } else { n.pow(j).unwrap() };
        let p = [int(p[0]), int(p[1])];
        let av = lattice.mul_vec(&[int(v[0]), int(v[1])]);
        let shifted = [
            &p[0] + &av[0] + int(r) * int(w[0]),
            &p[1] + &av[1] + int(r) * int(w[1]),
        ];
        prop_assert_eq!(
            star_action(&k, &p, &q).unwrap(),
            star_action(&k, &shifted, &q).unwrap()
        );
    }
}

// ---------------------------------------------------- affine_group laws

proptest! {
    #[test]
    fn affine_group_laws(
        parts in prop::collection::vec(quad_strategy(), 9),
        mu_exp in 0i64..=2,
    ) {
        // Build two maps with strictly positive dilation parts.
        let alpha = quad(5, 3, 2, 1, 2); // (3+√5)/2 > 1
        let make = |mu: QuadElem, chunk: &[QuadElem]| AffineMap {
            mu,
            lambda: Cx::new(chunk[0].clone(), chunk[1].clone()),
            nu: Cx::new(chunk[2].clone(), chunk[3].clone()),
            u: chunk[4].clone(),
            zeta: Cx::new(chunk[5].clone(), chunk[6].clone()),
        };
        let f = make(alpha.pow(mu_exp), &parts[0..7]);
        let g = make(alpha.pow(-mu_exp), &parts[2..9]);
        prop_assume!(!f.nu.is_provably_zero() && !g.nu.is_provably_zero());
        let id = AffineMap::identity_like(&parts[0]);
        prop_assert!(f.compose(&f.inverse()).close_to(&id));
        prop_assert!(f.inverse().compose(&f).close_to(&id));
        prop_assert!(f.compose(&g).inverse().close_to(&g.inverse().compose(&f.inverse())));
        let h = make(alpha.pow(1), &parts[1..8]);
        prop_assume!(!h.nu.is_provably_zero());
        prop_assert!(f.compose(&g).compose(&h).close_to(&f.compose(&g.compose(&h))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_reproduces_random_words(
        word in prop::collection::vec((0usize..4, -3i64..=3), 0..=6),
        reflection in prop::bool::ANY,
    ) {
        let gs = if reflection {
            build_generators_type3(&rep_of(2, -1), 3, &[int(0), int(1)]).unwrap()
        } else {
            let t = Cx::new(quad(5, 0, 1, 1, 3), quad(5, 1, 2, 0, 1));
            build_generators_type2(&rep_of(3, 1), 2, &[int(1), int(1)], &t).unwrap()
        };
        // `normal_form` verifies its own expansion against the word map
        // and errors on any mismatch, so Ok(_) is the property.
        let nf = normal_form(&word, &gs).unwrap();
        // Membership in the translation subgroup is equivalent to a
        // vanishing dilation exponent and lattice exponents.
        let mut map = AffineMap::identity_like(&gs.g0.mu);
        for &(idx, e) in &word {
            map = map.compose(&gs.generator(idx).pow(e));
        }
        if let NormalForm::Lattice { l, n1, n2, .. } = &nf {
            prop_assert_eq!(
                map.is_translation(),
                *l == 0 && n1.is_zero() && n2.is_zero()
            );
        } else {
            prop_assert!(false, "lattice data yields lattice normal forms");
        }
    }
}

// ----------------------------------------------------------- cubic laws

#[test]
fn enumerated_ideals_are_stable_lattices() {
    for (t2, t1) in [(2i64, -2i64), (8, 0)] {
        let t = multiplication_matrix(t2, t1);
        let ideals = stable_sublattices(t2, t1, 8);
        assert!(!ideals.is_empty());
        for ideal in &ideals {
            assert!(is_alpha_stable(&ideal.hnf_basis, &t), "α·I ⊆ I");
            assert_eq!(ideal.hnf_basis.det().abs(), ideal.norm, "norm = index");
            assert!(ideals_equivalent(ideal, ideal, &t), "reflexive");
        }
        // Norms do not exceed the bound and the unit ideal is present.
        assert!(ideals.iter().any(|i| i.norm.is_one()));
        assert!(ideals.iter().all(|i| i.norm <= int(8)));
    }
}
