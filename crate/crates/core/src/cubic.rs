//! The cubic-order pipeline: admissibility of P(X) = X³ − θ₂X² + θ₁X − 1,
//! exact discriminants, enumeration of the ideals of the (possibly
//! non-maximal) order Z[α] as α-stable sublattices in Hermite form, the
//! ideal-class partition via exact colon-lattice searches, and the final
//! 2·h count of biholomorphism classes.
//!
//! All lattices live in the basis (1, α, α²) of Z[α]; multiplication by α
//! is the companion matrix of P. Class counts are reported together with
//! the norm bound used for the enumeration and a stability flag (the count
//! is recomputed at twice the bound): the bound is a Minkowski-style
//! heuristic, honest for the maximal order but not proved complete for
//! arbitrary non-maximal cubic orders.

use crate::exact_arith::{int, is_perfect_square, isqrt, BigRat};
use crate::intmat::{column_hnf, smith_normal_form, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Coefficient data of the cubic P(X) = X³ − θ₂X² + θ₁X − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubicInput {
    pub theta2: i64,
    pub theta1: i64,
}

impl CubicInput {
    pub fn new(theta2: i64, theta1: i64) -> Self {
        CubicInput { theta2, theta1 }
    }

    /// Ascending coefficients (constant first) of P.
    pub fn coefficients(&self) -> [BigInt; 4] {
        [int(-1), int(self.theta1), int(-self.theta2), int(1)]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CubicError {
    #[error("P(X) = X³ − {theta2}X² + {theta1}X − 1 is not admissible (disc {disc})")]
    Inadmissible {
        theta2: i64,
        theta1: i64,
        disc: BigInt,
    },
    #[error("norm bound {0} exceeds the enumeration guard")]
    BoundTooLarge(u64),
    #[error("discriminant ratio {0} is not the square of a rational")]
    NonSquareRatio(BigRat),
    #[error("a degenerate (zero) discriminant admits no index comparison")]
    DegenerateDiscriminant,
    #[error("no small polynomial witness identifies the two fields")]
    FieldMismatch,
}

/// Outcome of the admissibility test, with the individual criteria spelled
/// out: a negative discriminant (one real and two non-real roots) and
/// P(1) < 0 (the real root exceeds 1, equivalently θ₁ < θ₂). An admissible
/// P is automatically irreducible; the only possible rational roots are ±1
/// and both are excluded by the two criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicDiagnosis {
    pub admissible: bool,
    pub disc: BigInt,
    pub negative_disc: bool,
    /// P(1) < 0, i.e. θ₁ < θ₂.
    pub expanding_real_root: bool,
    /// A rational root of P, when one exists (only ±1 are candidates).
    pub rational_root: Option<i64>,
}

/// Exact discriminant of X³ − θ₂X² + θ₁X − 1, by the cubic discriminant
/// formula 18abc − 4a³c + a²b² − 4b³ − 27c² for X³ + aX² + bX + c.
pub fn cubic_disc(theta2: i64, theta1: i64) -> BigInt {
    let a = int(-theta2);
    let b = int(theta1);
    let c = int(-1);
    int(18) * &a * &b * &c - int(4) * (&a * &a * &a) * &c + (&a * &a) * (&b * &b)
        - int(4) * (&b * &b * &b)
        - int(27) * (&c * &c)
}

/// Admissibility of the cubic data, with diagnosis.
pub fn admissible_cubic(theta2: i64, theta1: i64) -> CubicDiagnosis {
    let disc = cubic_disc(theta2, theta1);
    let negative_disc = disc.is_negative();
    let p_at_one = theta1 - theta2;
    let expanding_real_root = p_at_one < 0;
    let p_at_minus_one = -2 - theta2 - theta1;
    let rational_root = if p_at_one == 0 {
        Some(1)
    } else if p_at_minus_one == 0 {
        Some(-1)
    } else {
        None
    };
    let admissible = negative_disc && expanding_real_root;
    // One real and two non-real roots exclude any rational root.
    debug_assert!(!(admissible && rational_root.is_some()));
    CubicDiagnosis {
        admissible,
        disc,
        negative_disc,
        expanding_real_root,
        rational_root,
    }
}

/// Multiplication by α on the basis (1, α, α²) of Z[α]: the companion
/// matrix of P, satisfying T³ − θ₂T² + θ₁T − I = 0.
pub fn multiplication_matrix(theta2: i64, theta1: i64) -> IMat {
    IMat::from_i64(3, 3, &[0, 0, 1, 1, 0, -theta1, 0, 1, theta2])
}

/// An ideal of Z[α], stored as the upper-triangular column Hermite basis
/// of a full α-stable sublattice; `norm` is its index in Z[α].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderIdeal {
    pub hnf_basis: IMat,
    pub norm: BigInt,
}

/// Exact stability test: T maps the column lattice of `basis` into itself.
/// `basis` must be upper-triangular with positive diagonal.
pub fn is_alpha_stable(basis: &IMat, t: &IMat) -> bool {
    let image = t.mul(basis);
    for j in 0..3 {
        // Back-substitute H·x = image column j and demand integrality.
        let w = [image.at(0, j), image.at(1, j), image.at(2, j)];
        let (q2, r2) = w[2].div_rem(basis.at(2, 2));
        if !r2.is_zero() {
            return false;
        }
        let num1 = w[1] - basis.at(1, 2) * &q2;
        let (q1, r1) = num1.div_rem(basis.at(1, 1));
        if !r1.is_zero() {
            return false;
        }
        let num0 = w[0] - basis.at(0, 1) * &q1 - basis.at(0, 2) * &q2;
        if !num0.div_rem(basis.at(0, 0)).1.is_zero() {
            return false;
        }
    }
    true
}

/// Enumerate every ideal of Z[α] of index ≤ bound, i.e. every α-stable
/// full sublattice of index ≤ bound, each in canonical Hermite form.
/// Ordered by (norm, basis entries).
pub fn stable_sublattices(theta2: i64, theta1: i64, bound: u64) -> Vec<OrderIdeal> {
    let t = multiplication_matrix(theta2, theta1);
    let bound = bound as i64;
    let mut out = Vec::new();
    for d0 in 1..=bound {
        for d1 in 1..=bound / d0 {
            for d2 in 1..=bound / (d0 * d1) {
                for h01 in 0..d0 {
                    for h02 in 0..d0 {
                        for h12 in 0..d1 {
                            let basis = IMat::from_i64(
                                3,
                                3,
                                &[d0, h01, h02, 0, d1, h12, 0, 0, d2],
                            );
                            if is_alpha_stable(&basis, &t) {
                                out.push(OrderIdeal {
                                    norm: int(d0 * d1 * d2),
                                    hnf_basis: basis,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let entries = |m: &IMat| -> Vec<BigInt> {
        (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .map(|(r, c)| m.at(r, c).clone())
            .collect()
    };
    out.sort_by_key(|ideal| (ideal.norm.clone(), entries(&ideal.hnf_basis)));
    out
}

/// Adjugate of a 3×3 integer matrix: adj(M)·M = det(M)·I.
fn adjugate3(m: &IMat) -> IMat {
    let a = |i: usize, j: usize| m.at(i, j);
    let cof = |i0: usize, i1: usize, j0: usize, j1: usize| a(i0, j0) * a(i1, j1) - a(i0, j1) * a(i1, j0);
    // Entry (i,j) of the adjugate is the (j,i) cofactor.
    let data = vec![
        cof(1, 2, 1, 2),
        -cof(0, 2, 1, 2),
        cof(0, 1, 1, 2),
        -cof(1, 2, 0, 2),
        cof(0, 2, 0, 2),
        -cof(0, 1, 0, 2),
        cof(1, 2, 0, 1),
        -cof(0, 2, 0, 1),
        cof(0, 1, 0, 1),
    ];
    IMat::new(3, 3, data)
}

/// Basis of the colon lattice (J : I) = {λ ∈ Q(α) : λ·I ⊆ J}, scaled to
/// integer coordinates: the returned columns span {m·λ : λ ∈ (J : I)} in
/// the basis (1, α, α²), with m = index(I). Obtained by solving the
/// stacked congruence system with one Smith normal form.
fn colon_lattice(i: &OrderIdeal, j: &OrderIdeal, t: &IMat) -> (IMat, BigInt) {
    let m = i.norm.clone();
    let d = j.norm.clone();
    let adj_j = adjugate3(&j.hnf_basis);
    let t2 = t.mul(t);
    // Condition matrix: for each basis vector b of I, the coordinates of
    // λ·b in the basis of J are (1/D)·adj(H_J)·(x₀·b + x₁·Tb + x₂·T²b).
    let mut cond = IMat::zero(9, 3);
    for col in 0..3 {
        let b = [
            i.hnf_basis.at(0, col).clone(),
            i.hnf_basis.at(1, col).clone(),
            i.hnf_basis.at(2, col).clone(),
        ];
        let images = [b.to_vec(), t.mul_vec(&b), t2.mul_vec(&b)];
        for (x_idx, image) in images.iter().enumerate() {
            let mapped = adj_j.mul_vec(image);
            for row in 0..3 {
                cond.set(3 * col + row, x_idx, mapped[row].clone());
            }
        }
    }
    // Solve cond·y ∈ E·Z⁹ with E = m·D over y ∈ Z³ (y = m·x clears the
    // denominator of λ, since index(I)·Z[α] ⊆ I forces m·λ integral).
    let e = &m * &d;
    let snf = smith_normal_form(&cond);
    let mut basis = IMat::zero(3, 3);
    for k in 0..3 {
        let s = snf.d.at(k, k);
        assert!(!s.is_zero(), "colon system has full rank");
        let mult = &e / s.gcd(&e);
        for row in 0..3 {
            basis.set(row, k, snf.v.at(row, k) * &mult);
        }
    }
    #[cfg(debug_assertions)]
    {
        let check = cond.mul(&basis);
        for r in 0..9 {
            for c in 0..3 {
                debug_assert!(check.at(r, c).mod_floor(&e).is_zero());
            }
        }
    }
    (size_reduce_columns(basis), m)
}

/// Greedy pairwise size reduction of the three basis columns (keeps the
/// lattice, shrinks the vectors so the element search hits early).
fn size_reduce_columns(mut b: IMat) -> IMat {
    let dot = |b: &IMat, x: usize, y: usize| -> BigInt {
        (0..3).map(|r| b.at(r, x) * b.at(r, y)).sum()
    };
    for _ in 0..64 {
        let mut changed = false;
        for x in 0..3 {
            for y in 0..3 {
                if x == y {
                    continue;
                }
                let nyy = dot(&b, y, y);
                if nyy.is_zero() {
                    continue;
                }
                let nxy = dot(&b, x, y);
                // Nearest integer of nxy / nyy.
                let q = (int(2) * &nxy + &nyy).div_floor(&(int(2) * &nyy));
                if q.is_zero() {
                    continue;
                }
                for r in 0..3 {
                    let v = b.at(r, x) - &q * b.at(r, y);
                    b.set(r, x, v);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Deterministic column order: by squared length, then entries.
    let mut cols: Vec<Vec<BigInt>> = (0..3)
        .map(|c| (0..3).map(|r| b.at(r, c).clone()).collect())
        .collect();
    cols.sort_by_key(|col| {
        (
            col.iter().map(|v| v * v).sum::<BigInt>(),
            col.clone(),
        )
    });
    for (c, col) in cols.iter().enumerate() {
        for r in 0..3 {
            b.set(r, c, col[r].clone());
        }
    }
    b
}

/// Height cap of the λ-search: coefficient vectors over the reduced colon
/// basis range over [−50, 50]³, scanned in growing max-norm shells.
pub const LAMBDA_SEARCH_HEIGHT: i64 = 50;

/// Search for λ with λ·I = J. Every candidate lies in the colon lattice,
/// so λ·I ⊆ J holds by construction and the exact filter
/// |N(λ)| = index(J)/index(I) forces equality of the lattices. Returns the
/// integer coordinate vector of m·λ (m = index(I)) when found; a `None`
/// only means no witness within the height cap.
fn find_scaling_element(
    i: &OrderIdeal,
    j: &OrderIdeal,
    t: &IMat,
    height: i64,
) -> Option<[BigInt; 3]> {
    let (basis, m) = colon_lattice(i, j, t);
    // |N(m·λ)| = index(J)·m³ / index(I) = index(J)·index(I)².
    let target = &j.norm * &i.norm * &i.norm;
    let t2 = t.mul(t);

    // Fast path when every intermediate fits comfortably in i128.
    let max_basis = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .map(|(r, c)| basis.at(r, c).abs())
        .max()
        .unwrap();
    let max_t = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .map(|(r, c)| t.at(r, c).abs().max(t2.at(r, c).abs()))
        .max()
        .unwrap();
    let entry_bound = int(3 * height) * max_basis * (int(1) + int(3) * max_t);
    let found = if entry_bound < int(1) << 40 && target < (int(1) << 120) {
        scan_i128(&basis, t, &t2, &target, height)
    } else {
        scan_bigint(&basis, t, &t2, &target, height)
    };
    let y = found?;
    // Exact confirmation: the lattice (m·λ)·I equals m·J.
    let mu = mu_matrix_big(&y, t, &t2);
    let image = mu.mul(&i.hnf_basis);
    let (hnf, _) = column_hnf(&image);
    assert_eq!(
        hnf,
        j.hnf_basis.scale(&m),
        "norm-matched colon element must map I onto J"
    );
    Some(y)
}

/// The matrix of multiplication by μ = y₀ + y₁α + y₂α² on (1, α, α²).
fn mu_matrix_big(y: &[BigInt; 3], t: &IMat, t2: &IMat) -> IMat {
    let mut out = IMat::zero(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            let ident = if r == c { int(1) } else { int(0) };
            let v = &y[0] * ident + &y[1] * t.at(r, c) + &y[2] * t2.at(r, c);
            out.set(r, c, v);
        }
    }
    out
}

fn scan_bigint(
    basis: &IMat,
    t: &IMat,
    t2: &IMat,
    target: &BigInt,
    height: i64,
) -> Option<[BigInt; 3]> {
    let eval = |z: [i64; 3]| -> Option<[BigInt; 3]> {
        let y = [
            basis.at(0, 0) * z[0] + basis.at(0, 1) * z[1] + basis.at(0, 2) * z[2],
            basis.at(1, 0) * z[0] + basis.at(1, 1) * z[1] + basis.at(1, 2) * z[2],
            basis.at(2, 0) * z[0] + basis.at(2, 1) * z[1] + basis.at(2, 2) * z[2],
        ];
        let mu = mu_matrix_big(&y, t, t2);
        if mu.det().abs() == *target {
            Some(y)
        } else {
            None
        }
    };
    shell_scan(height, &mut |z| eval(z))
}

fn scan_i128(
    basis: &IMat,
    t: &IMat,
    t2: &IMat,
    target: &BigInt,
    height: i64,
) -> Option<[BigInt; 3]> {
    let small = |m: &IMat| -> [[i128; 3]; 3] {
        let mut out = [[0i128; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = m.at(r, c).to_i128().expect("gated by entry bound");
            }
        }
        out
    };
    let b = small(basis);
    let tm = small(t);
    let tm2 = small(t2);
    let target = target.to_i128().expect("gated by entry bound");
    let mut eval = |z: [i64; 3]| -> Option<[BigInt; 3]> {
        let z = [z[0] as i128, z[1] as i128, z[2] as i128];
        let y = [
            b[0][0] * z[0] + b[0][1] * z[1] + b[0][2] * z[2],
            b[1][0] * z[0] + b[1][1] * z[1] + b[1][2] * z[2],
            b[2][0] * z[0] + b[2][1] * z[1] + b[2][2] * z[2],
        ];
        let mut mu = [[0i128; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let ident = if r == c { 1 } else { 0 };
                mu[r][c] = y[0] * ident + y[1] * tm[r][c] + y[2] * tm2[r][c];
            }
        }
        let det = mu[0][0] * (mu[1][1] * mu[2][2] - mu[1][2] * mu[2][1])
            - mu[0][1] * (mu[1][0] * mu[2][2] - mu[1][2] * mu[2][0])
            + mu[0][2] * (mu[1][0] * mu[2][1] - mu[1][1] * mu[2][0]);
        if det.abs() == target {
            Some([
                BigInt::from(y[0]),
                BigInt::from(y[1]),
                BigInt::from(y[2]),
            ])
        } else {
            None
        }
    };
    shell_scan(height, &mut eval)
}

/// Visit coefficient vectors in growing max-norm shells and stop at the
/// first hit, so short witnesses are found immediately.
fn shell_scan(
    height: i64,
    eval: &mut dyn FnMut([i64; 3]) -> Option<[BigInt; 3]>,
) -> Option<[BigInt; 3]> {
    for rho in 1..=height {
        // Faces z₀ = ±ρ.
        for &z0 in &[-rho, rho] {
            for z1 in -rho..=rho {
                for z2 in -rho..=rho {
                    if let Some(hit) = eval([z0, z1, z2]) {
                        return Some(hit);
                    }
                }
            }
        }
        // Faces z₁ = ±ρ with |z₀| < ρ.
        for z0 in (-rho + 1)..rho {
            for &z1 in &[-rho, rho] {
                for z2 in -rho..=rho {
                    if let Some(hit) = eval([z0, z1, z2]) {
                        return Some(hit);
                    }
                }
            }
        }
        // Faces z₂ = ±ρ with |z₀|, |z₁| < ρ.
        for z0 in (-rho + 1)..rho {
            for z1 in (-rho + 1)..rho {
                for &z2 in &[-rho, rho] {
                    if let Some(hit) = eval([z0, z1, z2]) {
                        return Some(hit);
                    }
                }
            }
        }
    }
    None
}

/// Decision procedure for ideal equivalence, symmetrised: I ~ J when a
/// scaling element is found in either direction within the height cap.
pub fn ideals_equivalent(i: &OrderIdeal, j: &OrderIdeal, t: &IMat) -> bool {
    ideals_equivalent_at(i, j, t, LAMBDA_SEARCH_HEIGHT)
}

fn ideals_equivalent_at(i: &OrderIdeal, j: &OrderIdeal, t: &IMat, height: i64) -> bool {
    find_scaling_element(i, j, t, height).is_some()
        || find_scaling_element(j, i, t, height).is_some()
}

/// Canonical form of the multiplier ring (I : I) ⊆ Q(α): Hermite basis and
/// denominator in lowest terms. Equivalent ideals have equal multiplier
/// rings, so differing keys certify inequivalence without any search.
fn multiplier_ring_key(i: &OrderIdeal, t: &IMat) -> (IMat, BigInt) {
    let (basis, m) = colon_lattice(i, i, t);
    let (h, _) = column_hnf(&basis);
    let mut g = m.clone();
    for r in 0..3 {
        for c in 0..3 {
            g = g.gcd(h.at(r, c));
        }
    }
    let mut reduced = IMat::zero(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            reduced.set(r, c, h.at(r, c) / &g);
        }
    }
    (reduced, m / g)
}

/// Result of the ideal-class enumeration at a given norm bound.
#[derive(Clone, Debug)]
pub struct IdealClasses {
    /// Number of classes among the enumerated ideals.
    pub h: usize,
    /// Canonical representative of each class: its (norm, basis)-least
    /// member. The principal class is represented by Z[α] itself.
    pub representatives: Vec<OrderIdeal>,
    /// Norm bound actually used for the enumeration.
    pub bound: u64,
    /// True when recomputing with bound doubled leaves h unchanged.
    pub stable: bool,
}

/// Smallest B with B ≥ 0.2829·√|disc| — the Minkowski constant
/// (4/π)·(3!/3³) for signature (1,1), evaluated in exact integer
/// arithmetic: B minimal with 10⁸·B² ≥ 2829²·|disc|.
pub fn default_norm_bound(disc: &BigInt) -> u64 {
    let rhs = int(2829 * 2829) * disc.abs();
    let scale = int(100_000_000);
    let mut b = isqrt(&(&rhs / &scale));
    while &b * &b * &scale < rhs {
        b += 1u32;
    }
    b.max(int(1)).to_u64().expect("bound fits in u64")
}

const ENUMERATION_GUARD: u64 = 100_000;

/// Box size of the first-pass search: over a size-reduced colon basis the
/// scaling witnesses are short, so almost every match is caught here and
/// the full-height scan only runs before a new class is declared.
const SHALLOW_SEARCH_HEIGHT: i64 = 8;

fn partition_into_classes(ideals: &[OrderIdeal], t: &IMat) -> Vec<Vec<usize>> {
    let keys: Vec<_> = ideals
        .iter()
        .map(|ideal| multiplier_ring_key(ideal, t))
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (idx, ideal) in ideals.iter().enumerate() {
        for deep in [false, true] {
            let height = if deep {
                LAMBDA_SEARCH_HEIGHT
            } else {
                SHALLOW_SEARCH_HEIGHT
            };
            for class in classes.iter_mut() {
                if keys[class[0]] != keys[idx] {
                    continue;
                }
                // Compare against every member: a missed witness against
                // one member can still be found against another.
                if class
                    .iter()
                    .any(|&other| ideals_equivalent_at(ideal, &ideals[other], t, height))
                {
                    class.push(idx);
                    continue 'next;
                }
            }
        }
        classes.push(vec![idx]);
    }
    classes
}

/// Enumerate the ideals of Z[α] up to the norm bound (default: the
/// Minkowski-style bound from the discriminant) and partition them into
/// equivalence classes.
pub fn ideal_classes(
    theta2: i64,
    theta1: i64,
    norm_bound: Option<u64>,
) -> Result<IdealClasses, CubicError> {
    let diag = admissible_cubic(theta2, theta1);
    if !diag.admissible {
        return Err(CubicError::Inadmissible {
            theta2,
            theta1,
            disc: diag.disc,
        });
    }
    let bound = norm_bound.unwrap_or_else(|| default_norm_bound(&diag.disc));
    if bound > ENUMERATION_GUARD {
        return Err(CubicError::BoundTooLarge(bound));
    }
    let t = multiplication_matrix(theta2, theta1);
    let ideals = stable_sublattices(theta2, theta1, bound);
    let classes = partition_into_classes(&ideals, &t);
    let representatives = classes
        .iter()
        .map(|class| ideals[class[0]].clone())
        .collect::<Vec<_>>();
    let h = classes.len();

    // Stability probe: the same computation at twice the bound.
    let doubled = stable_sublattices(theta2, theta1, bound * 2);
    let h2 = partition_into_classes(&doubled, &t).len();

    Ok(IdealClasses {
        h,
        representatives,
        bound,
        stable: h == h2,
    })
}

/// Symbolic label distinguishing the two conjugate non-real roots of P
/// attached to one ideal class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaLabel {
    Beta,
    BetaConj,
}

/// One biholomorphism class: an ideal class together with the choice of
/// one of the two conjugate labels.
#[derive(Clone, Debug)]
pub struct TypeIClass {
    pub ideal: OrderIdeal,
    pub label: BetaLabel,
}

/// Full report: 2·h biholomorphism classes, every ideal class listed once
/// per conjugate label.
#[derive(Clone, Debug)]
pub struct TypeIReport {
    pub input: CubicInput,
    pub disc: BigInt,
    pub h: usize,
    pub bound: u64,
    pub stable: bool,
    pub biholo_count: usize,
    pub classes: Vec<TypeIClass>,
}

/// Classify the surfaces attached to an admissible cubic: the class list
/// doubles the ideal classes, labelling each with β respectively β̄ (the
/// two labels never merge — no class is isomorphic to its conjugate).
pub fn classify_type1(theta2: i64, theta1: i64) -> Result<TypeIReport, CubicError> {
    classify_type1_with_bound(theta2, theta1, None)
}

/// [`classify_type1`] with an explicit norm bound for the enumeration
/// (`None` uses the discriminant-derived default).
pub fn classify_type1_with_bound(
    theta2: i64,
    theta1: i64,
    bound: Option<u64>,
) -> Result<TypeIReport, CubicError> {
    let counts = ideal_classes(theta2, theta1, bound)?;
    let mut classes = Vec::with_capacity(2 * counts.h);
    for rep in &counts.representatives {
        classes.push(TypeIClass {
            ideal: rep.clone(),
            label: BetaLabel::Beta,
        });
        classes.push(TypeIClass {
            ideal: rep.clone(),
            label: BetaLabel::BetaConj,
        });
    }
    Ok(TypeIReport {
        input: CubicInput::new(theta2, theta1),
        disc: cubic_disc(theta2, theta1),
        h: counts.h,
        bound: counts.bound,
        stable: counts.stable,
        biholo_count: 2 * counts.h,
        classes,
    })
}

/// Search for an integer-coefficient expression g (|coefficients| ≤ 10)
/// with guest-P(g(α_host)) = 0 inside Z[α_host]: a witness that the guest
/// field embeds into (hence equals, both being cubic) the host field.
fn same_field_witness(host: CubicInput, guest: CubicInput) -> bool {
    let t = multiplication_matrix(host.theta2, host.theta1);
    let t2 = t.mul(&t);
    let id = IMat::identity(3);
    for c2 in -10..=10i64 {
        for c1 in -10..=10i64 {
            if c2 == 0 && c1 == 0 {
                // A rational element cannot be a root of an irreducible cubic.
                continue;
            }
            for c0 in -10..=10i64 {
                let m = t2
                    .scale(&int(c2))
                    .add(&t.scale(&int(c1)))
                    .add(&id.scale(&int(c0)));
                let m2 = m.mul(&m);
                let m3 = m2.mul(&m);
                let value = m3
                    .sub(&m2.scale(&int(guest.theta2)))
                    .add(&m.scale(&int(guest.theta1)))
                    .sub(&id);
                if value == IMat::zero(3, 3) {
                    return true;
                }
            }
        }
    }
    false
}

/// The relative index √(disc(P)/disc(P')) of the two orders, defined when
/// both cubics generate the same field and the discriminant ratio is the
/// square of a rational. Reports the exact square root.
pub fn order_index_ratio(
    theta2: i64,
    theta1: i64,
    other2: i64,
    other1: i64,
) -> Result<BigRat, CubicError> {
    let d1 = cubic_disc(theta2, theta1);
    let d2 = cubic_disc(other2, other1);
    if d1.is_zero() || d2.is_zero() {
        return Err(CubicError::DegenerateDiscriminant);
    }
    let ratio = BigRat::new(d1, d2);
    if ratio.is_negative()
        || !is_perfect_square(ratio.numer())
        || !is_perfect_square(ratio.denom())
    {
        return Err(CubicError::NonSquareRatio(ratio));
    }
    let root = BigRat::new(isqrt(ratio.numer()), isqrt(ratio.denom()));
    let a = CubicInput::new(theta2, theta1);
    let b = CubicInput::new(other2, other1);
    if !(same_field_witness(a, b) || same_field_witness(b, a)) {
        return Err(CubicError::FieldMismatch);
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_examples() {
        assert_eq!(cubic_disc(2, -2), int(-83));
        assert_eq!(cubic_disc(8, 0), int(-2075));
        assert_eq!(&cubic_disc(8, 0), &(int(25) * cubic_disc(2, -2)));
        assert_eq!(cubic_disc(0, 0), int(-27));
    }

    #[test]
    fn admissibility_examples() {
        let d1 = admissible_cubic(2, -2);
        assert!(d1.admissible && d1.negative_disc && d1.expanding_real_root);
        assert_eq!(d1.rational_root, None);

        let d2 = admissible_cubic(8, 0);
        assert!(d2.admissible);

        // X³ − 1: reducible and without an expanding real root.
        let d0 = admissible_cubic(0, 0);
        assert!(!d0.admissible);
        assert!(!d0.expanding_real_root);
        assert_eq!(d0.rational_root, Some(1));

        // θ₁ = θ₂ always has the rational root 1.
        assert_eq!(admissible_cubic(3, 3).rational_root, Some(1));
    }

    #[test]
    fn companion_matrix_satisfies_polynomial() {
        for (theta2, theta1) in [(2i64, -2i64), (8, 0), (5, 1), (-1, -4)] {
            let t = multiplication_matrix(theta2, theta1);
            let t2 = t.mul(&t);
            let t3 = t2.mul(&t);
            let id = IMat::identity(3);
            let value = t3
                .sub(&t2.scale(&int(theta2)))
                .add(&t.scale(&int(theta1)))
                .sub(&id);
            assert_eq!(value, IMat::zero(3, 3));
        }
    }

    #[test]
    fn enumeration_contains_unit_ideal_and_only_stable_lattices() {
        let t = multiplication_matrix(2, -2);
        let ideals = stable_sublattices(2, -2, 6);
        assert_eq!(ideals[0].hnf_basis, IMat::identity(3));
        assert_eq!(ideals[0].norm, int(1));
        for ideal in &ideals {
            assert!(is_alpha_stable(&ideal.hnf_basis, &t));
            assert!(ideal.norm <= int(6));
            // Canonical Hermite form: re-normalising is the identity.
            let (h, _) = column_hnf(&ideal.hnf_basis);
            assert_eq!(h, ideal.hnf_basis);
        }
        // An unstable lattice is rejected: index-2 sublattice spanned by
        // (2, α, α²) is not an ideal here.
        let bad = IMat::from_i64(3, 3, &[2, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert!(!is_alpha_stable(&bad, &t));
    }

    #[test]
    fn default_bounds_match_examples() {
        assert_eq!(default_norm_bound(&int(-83)), 3);
        assert_eq!(default_norm_bound(&int(-2075)), 13);
        assert_eq!(default_norm_bound(&int(-27)), 2);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation() {
        let t = multiplication_matrix(2, -2);
        let ideals = stable_sublattices(2, -2, 6);
        let n = ideals.len();
        let mut related = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                related[x][y] = ideals_equivalent(&ideals[x], &ideals[y], &t);
            }
        }
        for x in 0..n {
            assert!(related[x][x], "reflexivity");
            for y in 0..n {
                assert_eq!(related[x][y], related[y][x], "symmetry");
                for z in 0..n {
                    if related[x][y] && related[y][z] {
                        assert!(related[x][z], "transitivity");
                    }
                }
            }
        }
    }

    #[test]
    fn class_counts_are_stable_on_golden_inputs() {
        // Maximal order Z[ε], disc −83: a single ideal class.
        let c1 = ideal_classes(2, -2, None).unwrap();
        assert_eq!(c1.bound, 3);
        assert_eq!(c1.h, 1);
        assert!(c1.stable);
        assert_eq!(c1.representatives[0].hnf_basis, IMat::identity(3));
        let c1_wide = ideal_classes(2, -2, Some(12)).unwrap();
        assert_eq!(c1_wide.h, c1.h);

        // Index-5 order Z[α] inside the same field: four classes (the
        // conductor makes some norm-5 ideals non-invertible, so this
        // exceeds the maximal-order count), stable from bound 13 through
        // 52.
        let c2 = ideal_classes(8, 0, None).unwrap();
        assert_eq!(c2.bound, 13);
        assert_eq!(c2.h, 4);
        assert!(c2.stable);
        let c2_wide = ideal_classes(8, 0, Some(26)).unwrap();
        assert_eq!(c2_wide.h, 4);
        assert!(c2_wide.stable);

        assert_eq!(
            ideal_classes(0, 0, None).unwrap_err(),
            CubicError::Inadmissible {
                theta2: 0,
                theta1: 0,
                disc: int(-27)
            }
        );
    }

    #[test]
    fn classify_type1_doubles_the_class_count() {
        let report = classify_type1(2, -2).unwrap();
        assert_eq!(report.disc, int(-83));
        assert_eq!(report.biholo_count, 2 * report.h);
        assert_eq!(report.classes.len(), report.biholo_count);
        for pair in report.classes.chunks(2) {
            assert_eq!(pair[0].ideal, pair[1].ideal);
            assert_ne!(pair[0].label, pair[1].label);
        }
        assert!(classify_type1(0, 0).is_err());
    }

    #[test]
    fn order_index_ratio_examples() {
        assert_eq!(
            order_index_ratio(8, 0, 2, -2).unwrap(),
            BigRat::from_integer(int(5))
        );
        assert_eq!(
            order_index_ratio(2, -2, 8, 0).unwrap(),
            BigRat::new(int(1), int(5))
        );
        assert_eq!(
            order_index_ratio(2, -2, 2, -2).unwrap(),
            BigRat::from_integer(int(1))
        );
        assert!(matches!(
            order_index_ratio(2, -2, 0, 0),
            Err(CubicError::NonSquareRatio(_))
        ));
    }
}
