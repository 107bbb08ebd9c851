//! Centralisers of hyperbolic 2×2 integer matrices: the commutant lattice
//! in M₂(Z), the positive centraliser inside GL(2,Z) (matrices commuting
//! with N that preserve the expanding eigenray), and its generator.
//!
//! Every integer matrix commuting with N is an integer combination
//! x·B + y·I₂ where B = (N − n₁₁I₂)/g and g = gcd(n₁₂, n₂₁, n₂₂−n₁₁).
//! Units of the quadratic order Z[B] are exactly the GL(2,Z) members of the
//! commutant, and those with a positive eigenvalue on the expanding
//! eigenvector form an infinite cyclic group; its generator is read off the
//! fundamental unit of Z[B].

use crate::exact_arith::{
    fundamental_unit, int, is_perfect_square, quad_compare, squarefree_decompose, BigRat,
    QuadElem,
};
use crate::intmat::IMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CentralizerError {
    #[error("matrix has rational spectrum (discriminant {0})")]
    RationalSpectrum(BigInt),
    #[error("determinant {0} is not ±1")]
    NotUnimodular(BigInt),
    #[error("expanding eigenvalue is not > 1 (trace {0}, det {1})")]
    NotExpanding(BigInt, BigInt),
}

/// The expanding eigenvalue (larger characteristic root) of a hyperbolic
/// matrix, as an exact quadratic number (trace + √disc)/2.
pub fn expanding_eigenvalue(n: &IMat) -> Result<QuadElem, CentralizerError> {
    assert_eq!((n.rows(), n.cols()), (2, 2));
    let tr = n.trace();
    let disc = &tr * &tr - int(4) * n.det();
    if !disc.is_positive() || is_perfect_square(&disc) {
        return Err(CentralizerError::RationalSpectrum(disc));
    }
    let (d, f) = squarefree_decompose(&disc);
    Ok(QuadElem::new(
        d,
        BigRat::new(tr, int(2)),
        BigRat::new(f, int(2)),
    ))
}

/// Basis of the commutant Z_{M₂(Z)}(N) = Z·I₂ ⊕ Z·B together with the
/// coefficient gcd g; when g = 1 the lattice is ⟨I₂, N⟩ itself.
pub fn centralizer_lattice(n: &IMat) -> Result<((IMat, IMat), BigInt), CentralizerError> {
    let _ = expanding_eigenvalue(n)?; // validates hyperbolicity
    let g = n
        .at(0, 1)
        .gcd(n.at(1, 0))
        .gcd(&(n.at(1, 1) - n.at(0, 0)));
    debug_assert!(g.is_positive(), "hyperbolic matrices are never scalar");
    let shifted = n.sub(&IMat::identity(2).scale(n.at(0, 0)));
    let b = IMat::new(
        2,
        2,
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| shifted.at(i, j) / &g)
            .collect(),
    );
    Ok(((IMat::identity(2), b), g))
}

/// Generator of the positive centraliser of N in GL(2,Z).
#[derive(Clone, Debug)]
pub struct CentralizerGen {
    /// The generator K: every element of the positive centraliser is K^k.
    pub k: IMat,
    /// det K.
    pub eps: i32,
    /// ϑ(K) > 1, the eigenvalue of K on the expanding eigenvector of N.
    pub theta_eig: QuadElem,
    /// Exponent e ≥ 1 with K^e = N, when N is a power of the generator
    /// (always the case for valid inputs, since N lies in the group).
    pub power_to_n: Option<i64>,
}

/// ϑ of the commutant element x·B + y·I₂ on the expanding eigenvector:
/// x·(α − n₁₁)/g + y.
pub fn commutant_theta(
    n: &IMat,
    x: &BigInt,
    y: &BigInt,
) -> Result<QuadElem, CentralizerError> {
    let alpha = expanding_eigenvalue(n)?;
    let g = n
        .at(0, 1)
        .gcd(n.at(1, 0))
        .gcd(&(n.at(1, 1) - n.at(0, 0)));
    let d = alpha.radicand().clone();
    let theta_b = alpha
        .checked_sub(&QuadElem::from_int(&d, n.at(0, 0)))
        .unwrap()
        .scale(&BigRat::new(BigInt::one(), g));
    Ok(theta_b
        .scale(&BigRat::from_integer(x.clone()))
        .checked_add(&QuadElem::from_int(&d, y))
        .unwrap())
}

pub fn positive_centralizer_generator(n: &IMat) -> Result<CentralizerGen, CentralizerError> {
    let ((_, b), g) = centralizer_lattice(n)?;
    let det = n.det();
    if !det.abs().is_one() {
        return Err(CentralizerError::NotUnimodular(det));
    }
    let alpha = expanding_eigenvalue(n)?;
    let one = QuadElem::one(alpha.radicand());
    if quad_compare(&alpha, &one).unwrap() != Ordering::Greater {
        return Err(CentralizerError::NotExpanding(n.trace(), det));
    }

    // Fundamental unit of Z[B], B² = t·B − m.
    let (t_b, m_b) = (b.trace(), b.det());
    let unit = fundamental_unit(&t_b, &m_b).expect("hyperbolic B has a real nonsquare discriminant");
    let k = b.scale(&unit.x).add(&IMat::identity(2).scale(&unit.y));
    let theta_eig = commutant_theta(n, &unit.x, &unit.y)?;

    // structural invariants
    assert_eq!(k.mul(n), n.mul(&k), "generator must commute with N");
    assert_eq!(k.det(), int(unit.norm as i64), "determinant read-back");
    assert_eq!(
        quad_compare(&theta_eig, &one).unwrap(),
        Ordering::Greater,
        "generator eigenvalue must exceed 1"
    );

    // locate N among the powers of K by comparing eigenvalues
    let mut power_to_n = None;
    let mut pow_mat = k.clone();
    let mut pow_theta = theta_eig.clone();
    for e in 1..=64i64 {
        match quad_compare(&pow_theta, &alpha).unwrap() {
            Ordering::Equal => {
                assert_eq!(pow_mat, *n, "matching eigenvalue must mean matching power");
                power_to_n = Some(e);
                break;
            }
            Ordering::Greater => break,
            Ordering::Less => {}
        }
        pow_mat = pow_mat.mul(&k);
        pow_theta = pow_theta.checked_mul(&theta_eig).unwrap();
    }
    assert!(
        power_to_n.is_some(),
        "N lies in its own positive centraliser, so it must be a power of K"
    );

    // conformance with the classified det-1, gcd-1 cases
    if g.is_one() && det.is_one() {
        let theta = n.trace();
        if theta == int(3) {
            assert_eq!(unit.norm, -1, "trace 3: generator has determinant −1");
            assert_eq!(k.mul(&k), *n, "trace 3: generator squares to N");
        } else {
            assert_eq!(k, *n, "trace > 3: the generator is N itself");
        }
    }

    Ok(CentralizerGen {
        k,
        eps: unit.norm,
        theta_eig,
        power_to_n,
    })
}

/// N^k = a_k·N + b_k·I₂ for |det N| = 1, by the trace recurrence
/// a_{k+1} = θ·a_k + b_k, b_{k+1} = −ε·a_k (ε = det N), run forwards or
/// backwards from (a₀, b₀) = (0, 1).
pub fn power_expand(n: &IMat, k: i64) -> (BigInt, BigInt) {
    let theta = n.trace();
    let eps = n.det();
    assert!(eps.abs().is_one(), "power_expand requires |det| = 1");
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    if k >= 0 {
        for _ in 0..k {
            let a_next = &theta * &a + &b;
            let b_next = -&eps * &a;
            a = a_next;
            b = b_next;
        }
    } else {
        for _ in 0..(-k) {
            // invert one step: a_{k−1} = −ε·b_k, b_{k−1} = a_k + ε·θ·b_k
            let a_prev = -&eps * &b;
            let b_prev = &a + &eps * &theta * &b;
            a = a_prev;
            b = b_prev;
        }
    }
    (a, b)
}

/// Exhaustive check over |x|, |y| ≤ bound that no unit x·B + y·I₂ has an
/// expanding eigenvalue strictly between 1 and ϑ(K): certifies minimality
/// of the generator at desk scale.
pub fn verify_generator_minimality(n: &IMat, bound: i64) -> Result<bool, CentralizerError> {
    let generator = positive_centralizer_generator(n)?;
    let ((_, b), _) = centralizer_lattice(n)?;
    let (t_b, m_b) = (b.trace(), b.det());
    let one = QuadElem::one(generator.theta_eig.radicand());
    for x in -bound..=bound {
        for y in -bound..=bound {
            // |det(xB + yI)| = |x²·m − xy·t·(−1)... | computed directly
            let det = int(x * x) * &m_b + int(x * y) * &t_b + int(y * y);
            if !det.abs().is_one() {
                continue;
            }
            let theta = commutant_theta(n, &int(x), &int(y))?;
            if quad_compare(&theta, &one).unwrap() == Ordering::Greater
                && quad_compare(&theta, &generator.theta_eig).unwrap() == Ordering::Less
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
