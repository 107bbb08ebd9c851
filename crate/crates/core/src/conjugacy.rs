//! GL(2,Z)-similarity classes of hyperbolic integer 2×2 matrices with
//! prescribed trace and determinant ±1, via the classical reduction theory
//! of indefinite binary quadratic forms.
//!
//! A matrix N is sent to its associated form (n₂₁, n₂₂−n₁₁, −n₁₂); proper
//! (SL) similarity classes correspond bijectively to reduction cycles of
//! forms of discriminant tr²−4·det, and GL classes are SL classes merged
//! under the improper involution (a,b,c) ↦ (−a,b,−c), which is conjugation
//! by diag(1,−1) on the matrix side. Similarity certificates are assembled
//! from the explicit SL(2,Z) transforms of each reduction step, so every
//! returned conjugator is verified exactly before it is handed out.

use crate::exact_arith::{int, is_perfect_square, isqrt};
use crate::intmat::{gl_inverse, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConjugacyError {
    #[error("matrix is not hyperbolic: discriminant {0} is not a positive nonsquare")]
    NotHyperbolic(BigInt),
    #[error("form discriminant {0} is not a positive nonsquare")]
    BadDiscriminant(BigInt),
    #[error("trace/determinant mismatch: ({0},{1}) vs ({2},{3})")]
    InvariantMismatch(BigInt, BigInt, BigInt, BigInt),
    #[error("determinant must be +1 or -1, got {0}")]
    BadDeterminant(BigInt),
    #[error("trace {0} out of range for determinant {1}")]
    TraceOutOfRange(BigInt, BigInt),
}

/// Binary quadratic form a·x² + b·xy + c·y².
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BQForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BQForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        BQForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        BQForm::new(int(a), int(b), int(c))
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// Reduced in the classical indefinite sense: |√Δ − 2|a|| < b < √Δ.
    /// Both inequalities are decided exactly through s = ⌊√Δ⌋, using that
    /// √Δ is irrational.
    pub fn is_reduced(&self) -> bool {
        let disc = self.discriminant();
        if !disc.is_positive() || is_perfect_square(&disc) {
            return false;
        }
        let s = isqrt(&disc);
        let two_abs_a = int(2) * self.a.abs();
        self.b.is_positive()
            && self.b <= s
            && &two_abs_a + &self.b >= &s + 1
            && &two_abs_a - &self.b <= s
    }

    /// The form f∘K for K ∈ SL(2,Z) (change of variables (x,y) ↦ K(x,y)).
    pub fn transform(&self, k: &IMat) -> BQForm {
        let (p, q, r, s) = (k.at(0, 0), k.at(0, 1), k.at(1, 0), k.at(1, 1));
        let a = &self.a * p * p + &self.b * p * r + &self.c * r * r;
        let b = int(2) * &self.a * p * q + &self.b * (p * s + q * r) + int(2) * &self.c * r * s;
        let c = &self.a * q * q + &self.b * q * s + &self.c * s * s;
        BQForm::new(a, b, c)
    }

    /// Improper involution (a,b,c) ↦ (−a,b,−c): the effect of conjugating
    /// the corresponding matrix by diag(1,−1).
    pub fn improper(&self) -> BQForm {
        BQForm::new(-self.a.clone(), self.b.clone(), -self.c.clone())
    }
}

/// The form associated to a hyperbolic matrix; its coefficients transform
/// contragrediently under conjugation: f_{K⁻¹NK} = f_N ∘ K for det K = 1.
pub fn associated_form(n: &IMat) -> Result<BQForm, ConjugacyError> {
    assert_eq!((n.rows(), n.cols()), (2, 2), "associated_form expects 2×2");
    let tr = n.trace();
    let det = n.det();
    let disc = &tr * &tr - int(4) * &det;
    if !disc.is_positive() || is_perfect_square(&disc) {
        return Err(ConjugacyError::NotHyperbolic(disc));
    }
    Ok(BQForm::new(
        n.at(1, 0).clone(),
        n.at(1, 1) - n.at(0, 0),
        -n.at(0, 1).clone(),
    ))
}

/// One classical reduction step, together with the SL(2,Z) change of
/// variables realizing it: returns (ρ(f), P) with f∘P = ρ(f).
pub fn reduction_step(f: &BQForm) -> (BQForm, IMat) {
    let disc = f.discriminant();
    debug_assert!(disc.is_positive() && !is_perfect_square(&disc));
    let s = isqrt(&disc);
    let c_abs = f.c.abs();
    assert!(!f.c.is_zero(), "c = 0 impossible for nonsquare discriminant");
    let two_c_abs = int(2) * &c_abs;
    let b_next = if c_abs <= s {
        // largest b' ≡ −b (mod 2|c|) with b' ≤ s
        let k = (&s + &f.b).div_floor(&two_c_abs);
        -&f.b + &two_c_abs * k
    } else {
        // representative of −b in (−|c|, |c|]
        let mut r = (-&f.b).mod_floor(&two_c_abs);
        if r > c_abs {
            r -= &two_c_abs;
        }
        r
    };
    let c_next = (&b_next * &b_next - &disc) / (int(4) * &f.c);
    let m = (&f.b + &b_next) / (int(2) * &f.c);
    let p = IMat::new(2, 2, vec![BigInt::zero(), int(-1), BigInt::one(), m]);
    (BQForm::new(f.c.clone(), b_next, c_next), p)
}

const REDUCTION_STEP_CAP: usize = 100_000;

/// Reduces f, returning the reduced form and the accumulated K ∈ SL(2,Z)
/// with f∘K = reduced.
pub fn reduce_with_transform(f: &BQForm) -> Result<(BQForm, IMat), ConjugacyError> {
    let disc = f.discriminant();
    if !disc.is_positive() || is_perfect_square(&disc) {
        return Err(ConjugacyError::BadDiscriminant(disc));
    }
    let mut g = f.clone();
    let mut k = IMat::identity(2);
    for _ in 0..REDUCTION_STEP_CAP {
        if g.is_reduced() {
            debug_assert_eq!(f.transform(&k), g);
            return Ok((g, k));
        }
        let (next, p) = reduction_step(&g);
        g = next;
        k = k.mul(&p);
    }
    unreachable!("reduction did not terminate within {REDUCTION_STEP_CAP} steps")
}

/// The cycle of reduced forms equivalent to f, starting at the reduction of
/// f. Two forms are properly equivalent iff their cycles agree up to
/// rotation.
pub fn reduction_cycle(f: &BQForm) -> Result<Vec<BQForm>, ConjugacyError> {
    let (start, _) = reduce_with_transform(f)?;
    let mut cycle = vec![start.clone()];
    let mut g = reduction_step(&start).0;
    while g != start {
        cycle.push(g.clone());
        g = reduction_step(&g).0;
        assert!(cycle.len() <= REDUCTION_STEP_CAP, "cycle did not close");
    }
    Ok(cycle)
}

/// Rotation-invariant canonical key of a cycle: rotate so the
/// lexicographically least member comes first.
fn canonical_rotation(cycle: &[BQForm]) -> Vec<BQForm> {
    let least = cycle.iter().enumerate().min_by_key(|(_, f)| *f).unwrap().0;
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[least..]);
    out.extend_from_slice(&cycle[..least]);
    out
}

/// A GL(2,Z)- (or SL(2,Z)-) similarity class of hyperbolic matrices.
#[derive(Clone, Debug)]
pub struct SimilarityClass {
    pub representative: IMat,
    pub trace: BigInt,
    pub det: BigInt,
    /// Reduction cycle of the representative's associated form.
    pub cycle: Vec<BQForm>,
    /// Second cycle absorbed by the improper involution, when it differs
    /// from `cycle`.
    pub mirror_cycle: Option<Vec<BQForm>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassMode {
    /// Full GL(2,Z) similarity (proper cycles merged under the involution).
    Gl,
    /// Proper (SL) classes only, for diagnostics.
    SlOnly,
}

/// Builds the matrix with the given trace whose associated form is f;
/// requires b ≡ trace (mod 2), which holds automatically for discriminant
/// trace² − 4·det.
fn matrix_from_form(f: &BQForm, trace: &BigInt) -> IMat {
    let diff = trace - &f.b;
    assert!(diff.is_even(), "form parity must match the trace");
    let n11 = diff / 2;
    let n22 = trace - &n11;
    IMat::new(2, 2, vec![n11, -f.c.clone(), f.a.clone(), n22])
}

/// All reduced forms of discriminant disc > 0 (nonsquare), sorted.
fn reduced_forms(disc: &BigInt) -> Vec<BQForm> {
    let s = isqrt(disc);
    let mut out = Vec::new();
    let mut b = if disc.is_even() { int(2) } else { int(1) };
    while b <= s {
        let m4 = disc - &b * &b;
        if m4.is_multiple_of(&int(4)) {
            let m = m4 / int(4); // = −ac = |a||c|
            let mut d = BigInt::one();
            while &d * &d <= m {
                if m.is_multiple_of(&d) {
                    for a_abs in [d.clone(), &m / &d] {
                        let two_a = int(2) * &a_abs;
                        if &two_a + &b >= &s + 1 && &two_a - &b <= s {
                            let c_abs = &m / &a_abs;
                            out.push(BQForm::new(a_abs.clone(), b.clone(), -&c_abs));
                            out.push(BQForm::new(-&a_abs, b.clone(), c_abs));
                        }
                    }
                }
                d += 1u32;
            }
        }
        b += 2u32;
    }
    out.sort();
    out.dedup();
    out
}

/// Complete, duplicate-free list of similarity classes of hyperbolic
/// integer matrices with the given trace and determinant, one canonical
/// representative each.
pub fn similarity_classes(trace: i64, det: i64) -> Result<Vec<SimilarityClass>, ConjugacyError> {
    similarity_classes_mode(trace, det, ClassMode::Gl)
}

pub fn similarity_classes_mode(
    trace: i64,
    det: i64,
    mode: ClassMode,
) -> Result<Vec<SimilarityClass>, ConjugacyError> {
    let theta = int(trace);
    let eps = int(det);
    if det != 1 && det != -1 {
        return Err(ConjugacyError::BadDeterminant(eps));
    }
    if (det == 1 && trace < 3) || (det == -1 && trace < 1) {
        return Err(ConjugacyError::TraceOutOfRange(theta, eps));
    }
    let disc = &theta * &theta - int(4) * &eps;
    if !disc.is_positive() || is_perfect_square(&disc) {
        return Err(ConjugacyError::BadDiscriminant(disc));
    }

    let forms = reduced_forms(&disc);
    // Partition into reduction cycles.
    let mut remaining: HashSet<BQForm> = forms.iter().cloned().collect();
    let mut cycles: Vec<Vec<BQForm>> = Vec::new();
    for f in &forms {
        if !remaining.contains(f) {
            continue;
        }
        let cycle = reduction_cycle(f)?;
        for g in &cycle {
            assert!(
                remaining.remove(g),
                "cycle member {g:?} missing from the reduced-form enumeration"
            );
        }
        cycles.push(canonical_rotation(&cycle));
    }
    cycles.sort_by(|x, y| x[0].cmp(&y[0]));

    // Merge cycles under the improper involution when requested.
    let mut classes: Vec<SimilarityClass> = Vec::new();
    let mut used: HashSet<usize> = HashSet::new();
    let key_of: HashMap<BQForm, usize> = cycles
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().cloned().map(move |f| (f, i)))
        .collect();
    for (i, cycle) in cycles.iter().enumerate() {
        if used.contains(&i) {
            continue;
        }
        used.insert(i);
        let mut members: Vec<&Vec<BQForm>> = vec![cycle];
        let mut mirror = None;
        if mode == ClassMode::Gl {
            let image = cycle[0].improper();
            debug_assert!(image.is_reduced());
            let j = *key_of
                .get(&image)
                .expect("involution image must be a reduced form of the same discriminant");
            if j != i {
                used.insert(j);
                members.push(&cycles[j]);
                mirror = Some(cycles[j].clone());
            }
        }
        // canonical form: least member with a > 0 across the merged cycles
        let canon = members
            .iter()
            .flat_map(|c| c.iter())
            .filter(|f| f.a.is_positive())
            .min()
            .expect("every cycle alternates the sign of a");
        let representative = matrix_from_form(canon, &theta);
        debug_assert_eq!(representative.trace(), theta);
        debug_assert_eq!(representative.det(), eps);
        classes.push(SimilarityClass {
            representative,
            trace: theta.clone(),
            det: eps.clone(),
            cycle: canonical_rotation(&reduction_cycle(canon)?),
            mirror_cycle: mirror,
        });
    }
    classes.sort_by(|x, y| x.cycle[0].cmp(&y.cycle[0]));
    Ok(classes)
}

/// Outcome of a similarity test.
#[derive(Clone, Debug)]
pub enum Similarity {
    /// K ∈ GL(2,Z) with K·N·K⁻¹ = N₂, verified exactly.
    Similar(IMat),
    /// The two reduction cycles (canonically rotated) differ; they are a
    /// complete invariant, so the matrices are not similar.
    NotSimilar {
        cycle1: Vec<BQForm>,
        cycle2: Vec<BQForm>,
    },
    /// Step budget exhausted before a verdict (cannot happen on the cycle
    /// route; retained for bounded searches).
    Inconclusive,
}

/// Walks the cycle from `start` looking for `target`, composing the
/// reduction transforms: on success start∘Q = target with Q ∈ SL(2,Z).
fn walk_cycle_to(start: &BQForm, target: &BQForm, cap: usize) -> Option<IMat> {
    let mut cur = start.clone();
    let mut q = IMat::identity(2);
    for _ in 0..cap.max(1) {
        if &cur == target {
            return Some(q);
        }
        let (next, p) = reduction_step(&cur);
        cur = next;
        q = q.mul(&p);
        if &cur == start {
            // full rotation without a hit
            return None;
        }
    }
    None
}

/// Decides GL(2,Z)-similarity of two hyperbolic matrices sharing trace and
/// determinant. `bound` caps the cycle walk length (the cycle length is
/// always enough; 0 selects a generous default).
pub fn are_similar(n1: &IMat, n2: &IMat, bound: usize) -> Result<Similarity, ConjugacyError> {
    let (t1, d1) = (n1.trace(), n1.det());
    let (t2, d2) = (n2.trace(), n2.det());
    if t1 != t2 || d1 != d2 {
        return Err(ConjugacyError::InvariantMismatch(t1, d1, t2, d2));
    }
    let f1 = associated_form(n1)?;
    let f2 = associated_form(n2)?;
    let cap = if bound == 0 { REDUCTION_STEP_CAP } else { bound };

    let (r1, k1) = reduce_with_transform(&f1)?;
    let (r2, k2) = reduce_with_transform(&f2)?;

    // proper route: f1∘(k1·q·k2⁻¹) = f2, i.e. C·N1·C⁻¹ = N2 for C = (k1·q·k2⁻¹)⁻¹
    if let Some(q) = walk_cycle_to(&r1, &r2, cap) {
        let k = k1.mul(&q).mul(&gl_inverse(&k2).expect("SL transform"));
        let c = gl_inverse(&k).expect("SL transform");
        let conj = c.mul(n1).mul(&gl_inverse(&c).unwrap());
        assert_eq!(&conj, n2, "certificate failed verification");
        return Ok(Similarity::Similar(c));
    }
    // improper route: pass through diag(1,−1)
    let j = IMat::mat2(1, 0, 0, -1);
    let n1j = j.mul(n1).mul(&j); // J⁻¹ = J
    let f1j = associated_form(&n1j)?;
    debug_assert_eq!(f1j, f1.improper());
    let (r1j, k1j) = reduce_with_transform(&f1j)?;
    if let Some(q) = walk_cycle_to(&r1j, &r2, cap) {
        let k = k1j.mul(&q).mul(&gl_inverse(&k2).expect("SL transform"));
        let c = gl_inverse(&k).expect("SL transform").mul(&j);
        let conj = c.mul(n1).mul(&gl_inverse(&c).unwrap());
        assert_eq!(&conj, n2, "certificate failed verification");
        return Ok(Similarity::Similar(c));
    }
    Ok(Similarity::NotSimilar {
        cycle1: canonical_rotation(&reduction_cycle(&f1)?),
        cycle2: canonical_rotation(&reduction_cycle(&f2)?),
    })
}

const BFS_ENTRY_CAP: u32 = 1_000_000;

/// Independent certificate oracle: breadth-first search over words in the
/// generators T, T⁻¹, S, diag(1,−1) of GL(2,Z), returning the first K (in
/// shortest-then-lexicographic word order) with K·N1·K⁻¹ = N2 and entries
/// bounded by 10⁶. Exhaustive only in word length; None is not a proof of
/// non-similarity.
pub fn bfs_conjugator(n1: &IMat, n2: &IMat, max_len: usize) -> Option<IMat> {
    let gens = [
        IMat::mat2(1, 1, 0, 1),
        IMat::mat2(1, -1, 0, 1),
        IMat::mat2(0, -1, 1, 0),
        IMat::mat2(1, 0, 0, -1),
    ];
    let cap = int(BFS_ENTRY_CAP as i64);
    let fits = |m: &IMat| (0..2).all(|i| (0..2).all(|j| m.at(i, j).abs() <= cap));
    let mut seen: HashSet<IMat> = HashSet::new();
    let mut queue: VecDeque<(IMat, usize)> = VecDeque::new();
    queue.push_back((IMat::identity(2), 0));
    seen.insert(IMat::identity(2));
    while let Some((k, len)) = queue.pop_front() {
        if k.mul(n1) == n2.mul(&k) {
            return Some(k);
        }
        if len == max_len {
            continue;
        }
        for g in &gens {
            let next = k.mul(g);
            if fits(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back((next, len + 1));
            }
        }
    }
    None
}
