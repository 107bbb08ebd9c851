//! The classification pipeline for the solvable groups attached to a
//! hyperbolic matrix N ∈ GL(2,Z): admissible expanding eigenvalues, exact
//! eigenpairs, the correspondence between translation parts c ∈ Q(√d)² and
//! integer vectors p, the Z²-action on translation parts, the star action
//! of the positive centraliser on the finite quotient
//! Z_{N,r} = Z²/((I₂ ∓ N)Z² + rZ²), and per-(θ, r) classification reports.
//!
//! Conventions. [`Kind::Plus`] covers det N = +1 (trace θ ≥ 3, eigenvalues
//! α, α⁻¹ with α > 1); [`Kind::Minus`] covers det N = −1 (trace θ ≥ 1,
//! eigenvalues α, −α⁻¹). The wedge stored on an [`EigenPair`] is always
//! b ∧ a = b₁a₂ − b₂a₁; the Minus-kind compatibility condition is phrased
//! with a ∧ b = −(b ∧ a) and the implementation flips the sign where
//! needed. Vectors k, p, s ∈ Z² act on data as follows: the compatibility
//! lattice matrix is M = I₂ − N (Plus) or M = I₂ + N (Minus), and
//!
//! - c ↦ p is the bijection r·M(c − ½ĝ)/w − (r/2)n̂ with ĝ = (a₁b₁, a₂b₂)ᵀ,
//!   n̂ = (n₁₁n₁₂, n₂₁n₂₂)ᵀ and w the kind-adjusted wedge;
//! - k · c translates c inside its compatibility class, shifting p by
//!   r·(−k₂, k₁) (Plus) or r·(k₂, −k₁) (Minus);
//! - K * [p] = [det(K)·K·p] for K in the centraliser of N descends to
//!   Z_{N,r}, and its orbits — together with a C/C* component label in the
//!   Plus case — are the content of a [`ClassReport`].

use crate::centralizer::{positive_centralizer_generator, CentralizerGen};
use crate::conjugacy::similarity_classes;
use crate::exact_arith::{int, rat, BigRat, QuadElem};
use crate::intmat::{quotient_group, FiniteQuotient, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// Sign of det N: `Plus` for +1 (trace θ ≥ 3), `Minus` for −1 (trace θ ≥ 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Plus,
    Minus,
}

impl Kind {
    /// The determinant this kind prescribes for N.
    pub fn det_i64(self) -> i64 {
        match self {
            Kind::Plus => 1,
            Kind::Minus => -1,
        }
    }

    /// Smallest admissible trace: θ ≥ 3 for det +1, θ ≥ 1 for det −1.
    pub fn min_theta(self) -> i64 {
        match self {
            Kind::Plus => 3,
            Kind::Minus => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ModuliError {
    #[error(
        "θ = {theta} is not admissible for det {:+} (need θ ≥ {})",
        .kind.det_i64(),
        .kind.min_theta()
    )]
    Inadmissible { theta: i64, kind: Kind },
    #[error("matrix spectrum (trace {0}, det {1}) does not match the given α")]
    WrongSpectrum(BigInt, BigInt),
    #[error("translation part is not compatible: recovered p is not an integer vector")]
    NotCompatible,
    #[error("matrix does not commute with the lattice matrix")]
    NonCommuting,
    #[error("determinant {0} is not ±1")]
    NotUnimodular(BigInt),
    #[error(transparent)]
    Conjugacy(#[from] crate::conjugacy::ConjugacyError),
    #[error(transparent)]
    Centralizer(#[from] crate::centralizer::CentralizerError),
}

/// An admissible expanding eigenvalue α > 1 together with its conjugate
/// root: α is the larger root of t² − θt − det, so α·α_conj = det(N).
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleAlpha {
    pub theta: i64,
    pub kind: Kind,
    pub alpha: QuadElem,
    /// The conjugate root (θ − √(θ² ∓ 4))/2: equals α⁻¹ for `Plus`,
    /// −α⁻¹ for `Minus`.
    pub alpha_conj: QuadElem,
}

/// The expanding root α = (θ + √(θ² ∓ 4))/2 for an admissible trace θ.
///
/// `Plus` requires θ ≥ 3 (discriminant θ² − 4), `Minus` requires θ ≥ 1
/// (discriminant θ² + 4); both discriminants are then positive non-squares,
/// so α is a quadratic irrationality with α > 1.
pub fn admissible_alpha(theta: i64, kind: Kind) -> Result<AdmissibleAlpha, ModuliError> {
    if theta < kind.min_theta() {
        return Err(ModuliError::Inadmissible { theta, kind });
    }
    let disc = match kind {
        Kind::Plus => theta * theta - 4,
        Kind::Minus => theta * theta + 4,
    };
    let root = QuadElem::sqrt_of(&int(disc));
    let half_trace = QuadElem::from_rat(root.radicand(), rat(theta, 2));
    let half_root = root.scale(&rat(1, 2));
    let alpha = qadd(&half_trace, &half_root);
    let alpha_conj = qsub(&half_trace, &half_root);
    debug_assert_eq!(
        qmul(&alpha, &alpha_conj),
        QuadElem::from_rat(alpha.radicand(), rat(kind.det_i64(), 1))
    );
    debug_assert!(qsub(&alpha, &QuadElem::one(alpha.radicand())).is_positive());
    Ok(AdmissibleAlpha {
        theta,
        kind,
        alpha,
        alpha_conj,
    })
}

/// Exact eigenvectors a (for α) and b (for the conjugate root) of a matrix
/// N with the spectrum of an [`AdmissibleAlpha`], both normalised to have
/// first coordinate 1, together with the wedge b ∧ a = b₁a₂ − b₂a₁.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub alpha: AdmissibleAlpha,
    pub a: [QuadElem; 2],
    pub b: [QuadElem; 2],
    /// b ∧ a = (α − α_conj)/n₁₂; never zero.
    pub wedge: QuadElem,
}

/// Solve the eigenvector equations of N exactly and verify the spectral
/// decomposition N = P·diag(α, α_conj)·P⁻¹ with P = (a | b).
pub fn canonical_eigenpair(n: &IMat, alpha: &AdmissibleAlpha) -> Result<EigenPair, ModuliError> {
    assert_eq!((n.rows(), n.cols()), (2, 2), "eigenpair needs a 2×2 matrix");
    let trace = n.trace();
    let det = n.det();
    if trace != int(alpha.theta) || det != int(alpha.kind.det_i64()) {
        return Err(ModuliError::WrongSpectrum(trace, det));
    }
    // n₁₂ = 0 would force integer eigenvalues, impossible for an
    // irrational α once trace and determinant match.
    assert!(!n.at(0, 1).is_zero(), "irrational spectrum forces n₁₂ ≠ 0");
    let d = alpha.alpha.radicand().clone();
    let n11 = QuadElem::from_int(&d, n.at(0, 0));
    let n12 = QuadElem::from_int(&d, n.at(0, 1));
    let a2 = qdiv(&qsub(&alpha.alpha, &n11), &n12);
    let b2 = qdiv(&qsub(&alpha.alpha_conj, &n11), &n12);
    let one = QuadElem::one(&d);
    let a = [one.clone(), a2];
    let b = [one, b2];
    let wedge = qsub(&qmul(&b[0], &a[1]), &qmul(&b[1], &a[0]));
    assert!(!wedge.is_zero(), "eigenvectors of distinct roots are independent");

    // Exactness of both eigenvector equations.
    let na = mat2_apply(n, &a);
    let nb = mat2_apply(n, &b);
    for i in 0..2 {
        assert_eq!(na[i], qmul(&alpha.alpha, &a[i]), "N·a = α·a must hold exactly");
        assert_eq!(nb[i], qmul(&alpha.alpha_conj, &b[i]), "N·b = α_conj·b must hold exactly");
    }

    // Reconstruction: P·diag(α, α_conj)·P⁻¹ recovers N entrywise, with
    // P = (a | b) and det P = a₁b₂ − a₂b₁ = −wedge.
    let det_p = qsub(&qmul(&a[0], &b[1]), &qmul(&a[1], &b[0]));
    let pd = [
        qmul(&a[0], &alpha.alpha),
        qmul(&b[0], &alpha.alpha_conj),
        qmul(&a[1], &alpha.alpha),
        qmul(&b[1], &alpha.alpha_conj),
    ];
    // adj(P) = [[b₂, −b₁], [−a₂, a₁]].
    let adj = [b[1].clone(), qneg(&b[0]), qneg(&a[1]), a[0].clone()];
    for i in 0..2 {
        for j in 0..2 {
            let num = qadd(
                &qmul(&pd[2 * i], &adj[j]),
                &qmul(&pd[2 * i + 1], &adj[2 + j]),
            );
            let entry = qdiv(&num, &det_p);
            assert_eq!(
                entry,
                QuadElem::from_int(&d, n.at(i, j)),
                "spectral reconstruction must recover N"
            );
        }
    }

    Ok(EigenPair {
        alpha: alpha.clone(),
        a,
        b,
        wedge,
    })
}

/// The hat vector (m₁₁m₁₂, m₂₁m₂₂)ᵀ of a 2×2 integer matrix.
pub fn hat(m: &IMat) -> [BigInt; 2] {
    assert_eq!((m.rows(), m.cols()), (2, 2));
    [m.at(0, 0) * m.at(0, 1), m.at(1, 0) * m.at(1, 1)]
}

/// The defect L·hat(K) + det(K)·hat(L) − hat(L·K); both entries are even
/// for all K, L ∈ GL(2,Z).
pub fn mod2_congruence_defect(k: &IMat, l: &IMat) -> [BigInt; 2] {
    let kh = hat(k);
    let lh = hat(l);
    let lk_h = hat(&l.mul(k));
    let lkh = l.mul_vec(&kh);
    let det_k = k.det();
    [
        &lkh[0] + &det_k * &lh[0] - &lk_h[0],
        &lkh[1] + &det_k * &lh[1] - &lk_h[1],
    ]
}

/// The compatibility lattice matrix: I₂ − N for `Plus`, I₂ + N for `Minus`.
/// Its determinant is 2 − θ respectively θ, never zero on admissible data.
pub fn compat_matrix(kind: Kind, n: &IMat) -> IMat {
    let id = IMat::identity(2);
    match kind {
        Kind::Plus => id.sub(n),
        Kind::Minus => id.add(n),
    }
}

/// The unique translation part c with image p under the c ↦ p bijection:
/// c = ½ĝ + M⁻¹·w·(½n̂ + p/r), where M and the sign of w follow the kind.
pub fn compat_c_from_p(
    ep: &EigenPair,
    n: &IMat,
    r: i64,
    p: &[BigInt; 2],
    kind: Kind,
) -> [QuadElem; 2] {
    assert_eq!(kind, ep.alpha.kind, "kind must match the eigenpair");
    assert!(r >= 1, "the level r must be ≥ 1");
    let w = kind_wedge(ep, kind);
    let nh = hat(n);
    let rhs = [
        w.scale(&(BigRat::new(nh[0].clone(), int(2)) + BigRat::new(p[0].clone(), int(r)))),
        w.scale(&(BigRat::new(nh[1].clone(), int(2)) + BigRat::new(p[1].clone(), int(r)))),
    ];
    let sol = mat2_solve(&compat_matrix(kind, n), &rhs);
    let gh = g_hat(ep);
    [
        qadd(&gh[0].scale(&rat(1, 2)), &sol[0]),
        qadd(&gh[1].scale(&rat(1, 2)), &sol[1]),
    ]
}

/// Inverse direction of the bijection: p = r·(M(c − ½ĝ) − (w/2)·n̂)/w.
/// Fails with [`ModuliError::NotCompatible`] when c is not in the lattice
/// of compatible translation parts for this level r.
pub fn compat_p_from_c(
    ep: &EigenPair,
    n: &IMat,
    r: i64,
    c: &[QuadElem; 2],
    kind: Kind,
) -> Result<[BigInt; 2], ModuliError> {
    assert_eq!(kind, ep.alpha.kind, "kind must match the eigenpair");
    assert!(r >= 1, "the level r must be ≥ 1");
    let w = kind_wedge(ep, kind);
    let gh = g_hat(ep);
    let centered = [
        qsub(&c[0], &gh[0].scale(&rat(1, 2))),
        qsub(&c[1], &gh[1].scale(&rat(1, 2))),
    ];
    let mv = mat2_apply(&compat_matrix(kind, n), &centered);
    let nh = hat(n);
    let mut p = [BigInt::zero(), BigInt::zero()];
    for i in 0..2 {
        let v = qsub(&mv[i], &w.scale(&BigRat::new(nh[i].clone(), int(2))));
        let q = qdiv(&v, &w).scale(&rat(r, 1));
        match q.as_rational() {
            Some(x) if x.is_integer() => p[i] = x.to_integer(),
            _ => return Err(ModuliError::NotCompatible),
        }
    }
    Ok(p)
}

/// The action of k ∈ Z² on translation parts:
///
/// - `Plus`:  k·c = c − (α(ka)/(α−1))·b − (kb/(α−1))·a,
/// - `Minus`: k·c = c + (kb/(1+α))·a + (α(ka)/(1−α))·b,
///
/// where ka = k₁a₁ + k₂a₂ and kb = k₁b₁ + k₂b₂. On compatible data the
/// image of p shifts by r·(−k₂, k₁) (Plus) or r·(k₂, −k₁) (Minus).
pub fn k_dot_c(
    ep: &EigenPair,
    n: &IMat,
    r: i64,
    c: &[QuadElem; 2],
    k: &[i64; 2],
    kind: Kind,
) -> [QuadElem; 2] {
    assert_eq!(kind, ep.alpha.kind, "kind must match the eigenpair");
    let alpha = &ep.alpha.alpha;
    let one = QuadElem::one(alpha.radicand());
    let ka = dot_i64(k, &ep.a);
    let kb = dot_i64(k, &ep.b);
    let out = match kind {
        Kind::Plus => {
            let am1 = qsub(alpha, &one);
            let coef_b = qdiv(&qmul(alpha, &ka), &am1);
            let coef_a = qdiv(&kb, &am1);
            [
                qsub(&qsub(&c[0], &qmul(&coef_b, &ep.b[0])), &qmul(&coef_a, &ep.a[0])),
                qsub(&qsub(&c[1], &qmul(&coef_b, &ep.b[1])), &qmul(&coef_a, &ep.a[1])),
            ]
        }
        Kind::Minus => {
            let coef_a = qdiv(&kb, &qadd(&one, alpha));
            let coef_b = qdiv(&qmul(alpha, &ka), &qsub(&one, alpha));
            [
                qadd(&qadd(&c[0], &qmul(&coef_a, &ep.a[0])), &qmul(&coef_b, &ep.b[0])),
                qadd(&qadd(&c[1], &qmul(&coef_a, &ep.a[1])), &qmul(&coef_b, &ep.b[1])),
            ]
        }
    };
    // Self-check of the shift law at the p level whenever c is compatible.
    #[cfg(debug_assertions)]
    {
        if let Ok(p) = compat_p_from_c(ep, n, r, c, kind) {
            let p2 = compat_p_from_c(ep, n, r, &out, kind)
                .expect("the Z²-action preserves compatibility");
            let (s0, s1) = match kind {
                Kind::Plus => (-k[1], k[0]),
                Kind::Minus => (k[1], -k[0]),
            };
            debug_assert_eq!(p2[0], &p[0] + int(r) * int(s0));
            debug_assert_eq!(p2[1], &p[1] + int(r) * int(s1));
        }
    }
    out
}

/// The companion action of k on the scalar parameter t (det +1 data only):
///
/// k ·_c t = t + α(ka)(kb)/(1−α) + kc
///         + (k₁(k₁−1)a₁b₁ + k₂(k₂−1)a₂b₂)/2 + k₁k₂b₁a₂.
pub fn k_dot_t(
    ep: &EigenPair,
    n: &IMat,
    r: i64,
    c: &[QuadElem; 2],
    t: &QuadElem,
    k: &[i64; 2],
) -> QuadElem {
    assert_eq!(
        ep.alpha.kind,
        Kind::Plus,
        "the t parameter exists only on det +1 data"
    );
    let alpha = &ep.alpha.alpha;
    let one = QuadElem::one(alpha.radicand());
    let ka = dot_i64(k, &ep.a);
    let kb = dot_i64(k, &ep.b);
    let lead = qdiv(&qmul(alpha, &qmul(&ka, &kb)), &qsub(&one, alpha));
    let kc = dot_i64(k, c);
    let a1b1 = qmul(&ep.a[0], &ep.b[0]);
    let a2b2 = qmul(&ep.a[1], &ep.b[1]);
    let b1a2 = qmul(&ep.b[0], &ep.a[1]);
    let half_1 = BigRat::new(int(k[0]) * (int(k[0]) - BigInt::one()), int(2));
    let half_2 = BigRat::new(int(k[1]) * (int(k[1]) - BigInt::one()), int(2));
    let cross = BigRat::from_integer(int(k[0]) * int(k[1]));
    let comb = qadd(
        &qadd(&a1b1.scale(&half_1), &a2b2.scale(&half_2)),
        &b1a2.scale(&cross),
    );
    let out = qadd(&qadd(&qadd(t, &lead), &kc), &comb);
    // The closed form below must agree whenever c is compatible.
    #[cfg(debug_assertions)]
    {
        if let Ok(v) = k_dot_t_closed_form(ep, n, r, c, t, k) {
            debug_assert_eq!(out, v);
        }
    }
    out
}

/// Closed form of [`k_dot_t`] through the integer vector p = image of c:
///
/// k ·_c t = t + (b∧a)·( k·(I₂−N)⁻¹(½(n₁₁n₁₂ − k₂, n₂₁n₂₂ + k₁)ᵀ + p/r)
///           + k₁k₂/2 ),
///
/// with k acting as a row vector. Requires compatible c.
pub fn k_dot_t_closed_form(
    ep: &EigenPair,
    n: &IMat,
    r: i64,
    c: &[QuadElem; 2],
    t: &QuadElem,
    k: &[i64; 2],
) -> Result<QuadElem, ModuliError> {
    assert_eq!(
        ep.alpha.kind,
        Kind::Plus,
        "the t parameter exists only on det +1 data"
    );
    let p = compat_p_from_c(ep, n, r, c, Kind::Plus)?;
    let nh = hat(n);
    let u = [
        BigRat::new(&nh[0] - int(k[1]), int(2)) + BigRat::new(p[0].clone(), int(r)),
        BigRat::new(&nh[1] + int(k[0]), int(2)) + BigRat::new(p[1].clone(), int(r)),
    ];
    let m = compat_matrix(Kind::Plus, n);
    let det = BigRat::from_integer(m.det());
    // M⁻¹·u through the adjugate of the 2×2 matrix M.
    let v = [
        (BigRat::from_integer(m.at(1, 1).clone()) * &u[0]
            - BigRat::from_integer(m.at(0, 1).clone()) * &u[1])
            / &det,
        (BigRat::from_integer(m.at(0, 0).clone()) * &u[1]
            - BigRat::from_integer(m.at(1, 0).clone()) * &u[0])
            / &det,
    ];
    let scalar = BigRat::from_integer(int(k[0])) * &v[0]
        + BigRat::from_integer(int(k[1])) * &v[1]
        + BigRat::new(int(k[0]) * int(k[1]), int(2));
    Ok(qadd(t, &ep.wedge.scale(&scalar)))
}

/// The star action K * [p] = [det(K)·K·p] on a finite quotient built from
/// the compatibility lattice matrix. K must commute with that matrix and
/// lie in GL(2,Z); returns the canonical label of the image class.
pub fn star_action(
    k: &IMat,
    p: &[BigInt; 2],
    q: &FiniteQuotient,
) -> Result<[BigInt; 2], ModuliError> {
    assert_eq!((k.rows(), k.cols()), (2, 2));
    let a = q.lattice_matrix();
    if k.mul(a) != a.mul(k) {
        return Err(ModuliError::NonCommuting);
    }
    let det = k.det();
    let eps = if det == int(1) {
        1
    } else if det == int(-1) {
        -1
    } else {
        return Err(ModuliError::NotUnimodular(det));
    };
    let kp = k.mul_vec(&p[..]);
    let signed = if eps == 1 {
        [kp[0].clone(), kp[1].clone()]
    } else {
        [-&kp[0], -&kp[1]]
    };
    Ok(q.reduce(&signed))
}

/// The star action before quotienting by rZ², for det N = +1 data:
///
/// K * p = (r/2)·((ε_K·K − I₂)·n̂ + ε_K·(I₂−N)·k̂) + ε_K·K·p,
///
/// where k̂ = hat(K) and ε_K = det K. Returns `(value, first_term)`; the
/// first term always lies in rZ² (its pre-factor is even entrywise), which
/// is why the action descends to Z_{N,r} as [p] ↦ [ε_K·K·p].
pub fn star_action_prequotient(
    k: &IMat,
    n: &IMat,
    r: i64,
    p: &[BigInt; 2],
) -> Result<([BigInt; 2], [BigInt; 2]), ModuliError> {
    assert_eq!((k.rows(), k.cols()), (2, 2));
    assert!(r >= 1, "the level r must be ≥ 1");
    if k.mul(n) != n.mul(k) {
        return Err(ModuliError::NonCommuting);
    }
    let det = k.det();
    let eps = if det == int(1) {
        1
    } else if det == int(-1) {
        -1
    } else {
        return Err(ModuliError::NotUnimodular(det));
    };
    let ek = if eps == 1 { k.clone() } else { k.neg() };
    let nh = hat(n);
    let kh = hat(k);
    let m1 = ek.sub(&IMat::identity(2));
    let m2 = compat_matrix(Kind::Plus, n);
    let part1 = m1.mul_vec(&nh);
    let part2 = m2.mul_vec(&kh);
    let mut first = [BigInt::zero(), BigInt::zero()];
    for i in 0..2 {
        let f = &part1[i] + int(eps) * &part2[i];
        assert!(f.is_even(), "the pre-factor of the first term is even");
        first[i] = (f / int(2)) * int(r);
    }
    let kp = ek.mul_vec(&p[..]);
    Ok(([&first[0] + &kp[0], &first[1] + &kp[1]], first))
}

/// The translation part picked up when conjugating the group data by a
/// matrix K commuting with N:
///
/// C^K = ½((Ka)₁(Kb)₁, (Ka)₂(Kb)₂)ᵀ + K(c − ½ĝ) + (b∧a)/2·hat(K).
///
/// Composing with the c ↦ p bijection on det(K)·C^K reproduces
/// [`star_action_prequotient`] exactly.
pub fn conjugated_c(
    k: &IMat,
    ep: &EigenPair,
    n: &IMat,
    c: &[QuadElem; 2],
) -> Result<[QuadElem; 2], ModuliError> {
    assert_eq!((k.rows(), k.cols()), (2, 2));
    if k.mul(n) != n.mul(k) {
        return Err(ModuliError::NonCommuting);
    }
    let det = k.det();
    if det != int(1) && det != int(-1) {
        return Err(ModuliError::NotUnimodular(det));
    }
    let ka = mat2_apply(k, &ep.a);
    let kb = mat2_apply(k, &ep.b);
    let gh = g_hat(ep);
    // For commuting K the head is det(K)·ĝ/2 — Ka, Kb stay proportional to
    // a, b with eigenvalues multiplying to det(K).
    #[cfg(debug_assertions)]
    for i in 0..2 {
        let det_r = BigRat::from_integer(det.clone());
        debug_assert_eq!(qmul(&ka[i], &kb[i]), gh[i].scale(&det_r));
    }
    let centered = [
        qsub(&c[0], &gh[0].scale(&rat(1, 2))),
        qsub(&c[1], &gh[1].scale(&rat(1, 2))),
    ];
    let mid = mat2_apply(k, &centered);
    let kh = hat(k);
    let mut out = [QuadElem::zero(ep.alpha.alpha.radicand()), QuadElem::zero(ep.alpha.alpha.radicand())];
    for i in 0..2 {
        let head = qmul(&ka[i], &kb[i]).scale(&rat(1, 2));
        let tail = ep.wedge.scale(&BigRat::new(kh[i].clone(), int(2)));
        out[i] = qadd(&qadd(&head, &mid[i]), &tail);
    }
    Ok(out)
}

/// Label of a connected component: biholomorphic to ℂ or to ℂ*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentType {
    C,
    Cstar,
}

/// Component label of one star-action orbit on Z_{N,r} (det N = +1 data).
///
/// The label is ℂ exactly when some odd power L = gen^m (hence det L = −1)
/// fixes the orbit's class, i.e. L * [p] = [p]; the quotient group is
/// abelian, so checking one representative decides the whole orbit. Odd
/// exponents are scanned over one doubled period of the induced action,
/// which covers every distinct odd-power transformation. A generator with
/// det +1 admits no odd-determinant powers at all, giving ℂ* directly.
pub fn component_type(
    n: &IMat,
    r: i64,
    orbit: &[[BigInt; 2]],
    gen: &CentralizerGen,
) -> ComponentType {
    assert!(!orbit.is_empty(), "an orbit has at least one class");
    if gen.eps == 1 {
        return ComponentType::Cstar;
    }
    let q = quotient_group(&compat_matrix(Kind::Plus, n), &int(r));
    let step = |w: &[BigInt; 2]| -> [BigInt; 2] {
        star_action(&gen.k, &q.lift(w), &q).expect("the generator commutes with I₂−N")
    };
    // Order of the induced permutation of Z_{N,r}.
    let id_labels: Vec<[BigInt; 2]> = q
        .representatives()
        .iter()
        .map(|p| q.reduce(p))
        .collect();
    let mut cur: Vec<[BigInt; 2]> = id_labels.iter().map(&step).collect();
    let mut period = 1usize;
    while cur != id_labels {
        cur = cur.iter().map(&step).collect();
        period += 1;
    }
    // Scan L = gen^m for odd m over one doubled period.
    let start = q.reduce(&q.lift(&orbit[0]));
    let mut w = step(&start);
    let mut m = 1usize;
    loop {
        if w == start {
            return ComponentType::C;
        }
        m += 2;
        if m >= 2 * period {
            return ComponentType::Cstar;
        }
        w = step(&step(&w));
    }
}

/// One orbit of the star action on Z_{N,r}.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    /// Canonical labels (coordinates in Z_{d₁} × Z_{d₂}) of the classes in
    /// this orbit, sorted lexicographically.
    pub representatives: Vec<[BigInt; 2]>,
    /// ℂ/ℂ* label for det +1 reports; `None` for det −1 reports.
    pub component: Option<ComponentType>,
}

/// Everything the classification records for one similarity class.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    /// Canonical representative N of the similarity class.
    pub matrix: IMat,
    /// Generator of the positive centraliser of N.
    pub generator: CentralizerGen,
    /// |Z_{N,r}|.
    pub quotient_order: BigInt,
    /// Elementary divisors (d₁ | d₂) of Z_{N,r}.
    pub divisors: (BigInt, BigInt),
    /// Star-action orbits, each one labelled in the det +1 case.
    pub orbits: Vec<OrbitRecord>,
}

/// Full classification report for one (θ, r, kind) triple: one entry per
/// similarity class, whose orbit counts add up to `total` — deformation
/// classes for `Plus` data, biholomorphism classes for `Minus` data.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub theta: i64,
    pub r: i64,
    pub kind: Kind,
    pub classes: Vec<ClassEntry>,
    pub total: usize,
}

/// Run the whole pipeline for a trace θ and level r: enumerate similarity
/// classes, build each finite quotient Z_{N,r}, partition it into orbits of
/// the positive-centraliser generator and (for `Plus`) label every orbit.
pub fn classify(theta: i64, r: i64, kind: Kind) -> Result<ClassReport, ModuliError> {
    let alpha = admissible_alpha(theta, kind)?;
    assert!(r >= 1, "the level r must be ≥ 1");
    let classes = similarity_classes(theta, kind.det_i64())?;
    let mut entries = Vec::new();
    let mut total = 0usize;
    for class in &classes {
        let n = &class.representative;
        // Constructing the eigenpair replays the exact spectral checks for
        // this representative.
        let _ep = canonical_eigenpair(n, &alpha)?;
        let gen = positive_centralizer_generator(n)?;
        let q = quotient_group(&compat_matrix(kind, n), &int(r));
        let mut seen: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
        let mut orbits: Vec<OrbitRecord> = Vec::new();
        for p in q.representatives() {
            let start = q.reduce(&p);
            if seen.contains(&(start[0].clone(), start[1].clone())) {
                continue;
            }
            let mut members = Vec::new();
            let mut w = start.clone();
            loop {
                seen.insert((w[0].clone(), w[1].clone()));
                members.push(w.clone());
                w = star_action(&gen.k, &q.lift(&w), &q)
                    .expect("the generator commutes with the lattice matrix");
                if w == start {
                    break;
                }
            }
            members.sort();
            let component = match kind {
                Kind::Plus => Some(component_type(n, r, &members, &gen)),
                Kind::Minus => None,
            };
            orbits.push(OrbitRecord {
                representatives: members,
                component,
            });
        }
        let covered: usize = orbits.iter().map(|o| o.representatives.len()).sum();
        assert_eq!(
            int(covered as i64),
            q.order(),
            "orbits must partition Z_{{N,r}}"
        );
        total += orbits.len();
        entries.push(ClassEntry {
            matrix: n.clone(),
            generator: gen,
            quotient_order: q.order(),
            divisors: (q.divisors().0.clone(), q.divisors().1.clone()),
            orbits,
        });
    }
    Ok(ClassReport {
        theta,
        r,
        kind,
        classes: entries,
        total,
    })
}

// ---------------------------------------------------------------------------
// Small exact-arithmetic helpers. All QuadElem data inside one pipeline run
// shares the radicand of α, so the checked operations cannot mismatch.

fn qadd(x: &QuadElem, y: &QuadElem) -> QuadElem {
    x.checked_add(y).expect("matching radicands")
}

fn qsub(x: &QuadElem, y: &QuadElem) -> QuadElem {
    x.checked_sub(y).expect("matching radicands")
}

fn qmul(x: &QuadElem, y: &QuadElem) -> QuadElem {
    x.checked_mul(y).expect("matching radicands")
}

fn qdiv(x: &QuadElem, y: &QuadElem) -> QuadElem {
    x.checked_div(y).expect("matching radicands, nonzero divisor")
}

fn qneg(x: &QuadElem) -> QuadElem {
    x.scale(&rat(-1, 1))
}

/// Apply an integer 2×2 matrix to a vector of quadratic numbers.
fn mat2_apply(m: &IMat, v: &[QuadElem; 2]) -> [QuadElem; 2] {
    let row = |i: usize| {
        qadd(
            &v[0].scale(&BigRat::from_integer(m.at(i, 0).clone())),
            &v[1].scale(&BigRat::from_integer(m.at(i, 1).clone())),
        )
    };
    [row(0), row(1)]
}

/// Solve M·x = v for an invertible integer 2×2 matrix M.
fn mat2_solve(m: &IMat, v: &[QuadElem; 2]) -> [QuadElem; 2] {
    let det = m.det();
    assert!(!det.is_zero(), "singular 2×2 system");
    let adj = IMat::new(
        2,
        2,
        vec![
            m.at(1, 1).clone(),
            -m.at(0, 1),
            -m.at(1, 0),
            m.at(0, 0).clone(),
        ],
    );
    let w = mat2_apply(&adj, v);
    let s = BigRat::new(BigInt::one(), det);
    [w[0].scale(&s), w[1].scale(&s)]
}

/// k₁v₁ + k₂v₂ for an integer pair k.
fn dot_i64(k: &[i64; 2], v: &[QuadElem; 2]) -> QuadElem {
    qadd(
        &v[0].scale(&rat(k[0], 1)),
        &v[1].scale(&rat(k[1], 1)),
    )
}

/// ĝ = (a₁b₁, a₂b₂)ᵀ.
fn g_hat(ep: &EigenPair) -> [QuadElem; 2] {
    [qmul(&ep.a[0], &ep.b[0]), qmul(&ep.a[1], &ep.b[1])]
}

/// The wedge entering the compatibility condition: b ∧ a for `Plus`,
/// a ∧ b = −(b ∧ a) for `Minus`.
fn kind_wedge(ep: &EigenPair, kind: Kind) -> QuadElem {
    match kind {
        Kind::Plus => ep.wedge.clone(),
        Kind::Minus => qneg(&ep.wedge),
    }
}
