//! Arbitrary-precision rational arithmetic and exact arithmetic in real
//! quadratic fields Q(√d), plus continued fractions of quadratic surds and
//! fundamental units of real quadratic orders.
//!
//! All values are exact; there is no floating point anywhere in this module.
//! Sign determination of a + b√d is done by case analysis on the signs of a
//! and b and comparison of a² against b²d.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational, always in canonical reduced form with a
/// positive denominator (guaranteed by `num_rational`).
pub type BigRat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("radicand mismatch: values live in Q(√{0}) and Q(√{1})")]
    RadicandMismatch(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("continued fraction of a rational number is finite; quadratic surd required")]
    RationalInput,
    #[error("degenerate discriminant {0}: not positive or a perfect square")]
    DegenerateDiscriminant(BigInt),
}

/// Shorthand for small integer constants.
pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Shorthand for small rational constants; `d` must be nonzero.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(int(n), int(d))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Largest bound for which `squarefree_decompose` is guaranteed exact: after
/// trial division by every prime ≤ 10⁶ the cofactor has at most two prime
/// factors, so a perfect-square test finishes the job.
const SQUAREFREE_EXACT_BOUND_LOG10: u32 = 18;

/// Writes `n = d · f²` with `d` squarefree, returning `(d, f)`.
///
/// Exact for all `0 < n ≤ 10^18`; larger inputs are rejected rather than
/// risking a silently non-squarefree radicand.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "squarefree_decompose needs n > 0");
    assert!(
        n <= &BigInt::from(10u64).pow(SQUAREFREE_EXACT_BOUND_LOG10),
        "radicand {n} too large for guaranteed-exact squarefree decomposition"
    );
    let mut m = n.clone();
    let mut d = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2u32);
    let million = BigInt::from(1_000_000u32);
    while &(&p * &p) <= &m && p <= million {
        if m.is_multiple_of(&p) {
            let mut e = 0u32;
            while m.is_multiple_of(&p) {
                m /= &p;
                e += 1;
            }
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += 1u32;
    }
    // Cofactor has all prime factors > 10⁶, hence is 1, p, p·q or p².
    if is_perfect_square(&m) {
        f *= m.sqrt();
    } else {
        d *= &m;
    }
    (d, f)
}

/// An element a + b√d of the real quadratic field Q(√d), under the real
/// embedding with √d > 0. The radicand d is squarefree and > 1.
///
/// A value with b = 0 is rational and combines with any radicand; for b ≠ 0
/// arithmetic between different radicands is a programming error and panics
/// in the operators (the checked entry point is [`quad_arith`]).
#[derive(Clone, Debug)]
pub struct QuadElem {
    d: BigInt,
    a: BigRat,
    b: BigRat,
}

impl QuadElem {
    /// a + b√d. Panics unless d is squarefree and > 1.
    pub fn new(d: BigInt, a: BigRat, b: BigRat) -> Self {
        let (sf, f) = squarefree_decompose(&d);
        assert!(
            f.is_one() && d > BigInt::one(),
            "radicand {d} must be squarefree and > 1"
        );
        let _ = sf;
        QuadElem { d, a, b }
    }

    /// The rational a as an element of Q(√d).
    pub fn from_rat(d: &BigInt, a: BigRat) -> Self {
        QuadElem::new(d.clone(), a, BigRat::zero())
    }

    pub fn from_int(d: &BigInt, a: &BigInt) -> Self {
        QuadElem::from_rat(d, BigRat::from_integer(a.clone()))
    }

    pub fn zero(d: &BigInt) -> Self {
        QuadElem::from_rat(d, BigRat::zero())
    }

    pub fn one(d: &BigInt) -> Self {
        QuadElem::from_rat(d, BigRat::one())
    }

    /// √(d·f²) as f√d, i.e. the square root of a radicand with square part.
    pub fn sqrt_of(n: &BigInt) -> Self {
        let (d, f) = squarefree_decompose(n);
        assert!(d > BigInt::one(), "sqrt_of needs a nonsquare argument");
        QuadElem::new(d, BigRat::zero(), BigRat::from_integer(f))
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn rat_part(&self) -> &BigRat {
        &self.a
    }

    pub fn quad_part(&self) -> &BigRat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Rational value if b = 0.
    pub fn as_rational(&self) -> Option<&BigRat> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Galois conjugate a − b√d.
    pub fn conj(&self) -> Self {
        QuadElem {
            d: self.d.clone(),
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm a² − b²d (a rational).
    pub fn norm(&self) -> BigRat {
        &self.a * &self.a - &self.b * &self.b * BigRat::from_integer(self.d.clone())
    }

    fn resolve_d(&self, other: &Self) -> Result<BigInt, QuadError> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(QuadError::RadicandMismatch(self.d.clone(), other.d.clone()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.resolve_d(other)?;
        Ok(QuadElem {
            d,
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.resolve_d(other)?;
        Ok(QuadElem {
            d,
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.resolve_d(other)?;
        let dd = BigRat::from_integer(d.clone());
        Ok(QuadElem {
            d,
            a: &self.a * &other.a + &self.b * &other.b * &dd,
            b: &self.a * &other.b + &self.b * &other.a,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, QuadError> {
        if other.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = other.norm();
        let num = self.checked_mul(&other.conj())?;
        Ok(QuadElem {
            d: num.d,
            a: num.a / &n,
            b: num.b / &n,
        })
    }

    pub fn inverse(&self) -> Result<Self, QuadError> {
        QuadElem::one(&self.d).checked_div(self)
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        QuadElem {
            d: self.d.clone(),
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().expect("pow of zero").pow(-e);
        }
        let mut acc = QuadElem::one(&self.d);
        for _ in 0..e {
            acc = acc.checked_mul(self).unwrap();
        }
        acc
    }

    /// Exact sign under the embedding √d > 0: −1, 0 or 1.
    pub fn sign(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            // Mixed signs: compare a² with b²d; the larger magnitude wins.
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRat::from_integer(self.d.clone());
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => unreachable!("√d irrational: a² = b²d forces a = b = 0"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    /// Exact floor. Writes the value as (p + s√d)/q over a common denominator
    /// and uses ⌊(p + ⌊s√d⌋)/q⌋, valid because s√d is irrational for s ≠ 0.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let q = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&q / self.a.denom());
        let s = self.b.numer() * (&q / self.b.denom());
        let t = isqrt(&(&s * &s * &self.d));
        let u = if s.is_positive() { t } else { -t - 1 };
        (p + u).div_floor(&q)
    }
}

fn sign_of(r: &BigRat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        if self.b.is_zero() && other.b.is_zero() {
            self.a == other.a
        } else {
            self.d == other.d && self.a == other.a && self.b == other.b
        }
    }
}

impl Eq for QuadElem {}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let q = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&q / self.a.denom());
        let s = self.b.numer() * (&q / self.b.denom());
        let root = if s.is_one() {
            format!("sqrt({})", self.d)
        } else if (-&s).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", s, self.d)
        };
        let numer = if p.is_zero() {
            root
        } else if s.is_negative() {
            format!("{} {}", p, root.replacen('-', "- ", 1))
        } else {
            format!("{} + {}", p, root)
        };
        if q.is_one() {
            write!(f, "{}", numer)
        } else {
            write!(f, "({})/{}", numer, q)
        }
    }
}

/// Checked arithmetic entry point mirroring the library contract; the
/// operator-style methods above are the ergonomic form.
pub fn quad_arith(x: &QuadElem, y: &QuadElem, op: QuadOp) -> Result<QuadElem, QuadError> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact total order consistent with the real embedding.
pub fn quad_compare(x: &QuadElem, y: &QuadElem) -> Result<Ordering, QuadError> {
    let diff = x.checked_sub(y)?;
    Ok(match diff.sign() {
        s if s > 0 => Ordering::Greater,
        0 => Ordering::Equal,
        _ => Ordering::Less,
    })
}

/// Eventually periodic continued fraction of a quadratic surd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub pre_period: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl CFExpansion {
    /// Reconstructs the surd from the expansion: the periodic tail solves a
    /// quadratic equation, then the pre-period is folded back in.
    pub fn evaluate(&self) -> QuadElem {
        assert!(!self.period.is_empty(), "period must be nonempty");
        // Convergent matrix of one period: (p h + p') / (q h + q').
        let (mut p1, mut p0) = (BigInt::one(), BigInt::zero());
        let (mut q1, mut q0) = (BigInt::zero(), BigInt::one());
        for a in &self.period {
            let p2 = a * &p1 + &p0;
            let q2 = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        // Tail y > 1 satisfies q1·y² + (q0 − p1)·y − p0 = 0.
        let b = &q0 - &p1;
        let disc = &b * &b + int(4) * &q1 * &p0;
        let root = QuadElem::sqrt_of(&disc);
        let y = root
            .checked_add(&QuadElem::from_int(root.radicand(), &-b))
            .unwrap()
            .scale(&BigRat::new(BigInt::one(), int(2) * &q1));
        let mut x = y;
        for a in self.pre_period.iter().rev() {
            // x ← a + 1/x
            x = QuadElem::from_int(x.radicand(), a)
                .checked_add(&x.inverse().unwrap())
                .unwrap();
        }
        x
    }
}

/// Continued fraction expansion of an irrational x = a + b√d using the
/// classical integer (P, Q) surd recurrence; the period is detected by
/// repetition of the (P, Q) state (Lagrange).
pub fn cf_expand(x: &QuadElem) -> Result<CFExpansion, QuadError> {
    if x.is_rational() {
        return Err(QuadError::RationalInput);
    }
    // x = (p + s√d)/q with integers p, s, q; flip signs so the √ coefficient
    // is positive, giving x = (P + √D)/Q with D = s²d.
    let q0 = x.a.denom().lcm(x.b.denom());
    let mut p = x.a.numer() * (&q0 / x.a.denom());
    let mut s = x.b.numer() * (&q0 / x.b.denom());
    let mut q = q0;
    if s.is_negative() {
        p = -p;
        q = -q;
        s = -s;
    }
    let mut dd = &s * &s * &x.d;
    // Enforce Q | D − P².
    if !(&dd - &p * &p).is_multiple_of(&q) {
        let qa = q.abs();
        p *= &qa;
        dd *= &qa * &qa;
        q *= &qa;
    }
    let mut digits: Vec<BigInt> = Vec::new();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = digits.split_off(start);
            return Ok(CFExpansion {
                pre_period: digits,
                period,
            });
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let u = isqrt(&dd);
        let a = if q.is_positive() {
            (&p + &u).div_floor(&q)
        } else {
            (&p + &u + 1u32).div_floor(&q)
        };
        let p_next = &a * &q - &p;
        let q_next = (&dd - &p_next * &p_next) / &q;
        digits.push(a);
        p = p_next;
        q = q_next;
    }
}

/// Minimal solution (p, q, sign) of p² − d·q² = ±1 with q ≥ 1, found on the
/// continued fraction convergents of √d. The first convergent satisfying the
/// equation is the fundamental solution.
pub fn pell_minimal(d: &BigInt) -> Result<(BigInt, BigInt, i32), QuadError> {
    if !d.is_positive() || is_perfect_square(d) {
        return Err(QuadError::DegenerateDiscriminant(d.clone()));
    }
    let s0 = isqrt(d);
    // Surd state for √d = (0 + √d)/1.
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let (mut h1, mut h0) = (BigInt::one(), BigInt::zero()); // numerators
    let (mut k1, mut k0) = (BigInt::zero(), BigInt::one()); // denominators
    // The fundamental solution appears within the first period; 10⁷ steps is
    // an unreachable safety net at desk scale.
    for _ in 0..10_000_000u64 {
        let a = (&p + &s0).div_floor(&q);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let val = &h2 * &h2 - d * &k2 * &k2;
        if val.is_one() {
            return Ok((h2, k2, 1));
        }
        if (-&val).is_one() {
            return Ok((h2, k2, -1));
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
    }
    unreachable!("Pell fundamental solution not found within iteration cap")
}

/// The fundamental unit of the real quadratic order Z[B], B² = tB − n,
/// expressed on the basis (B, I): the returned (x, y) give the smallest unit
/// x·B + y·I with eigenvalue > 1 on the larger root of X² − tX + n; `norm` is
/// its determinant sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i32,
}

/// Computes the fundamental unit of Z[B] where B² = tB − n.
///
/// Z[B] is the quadratic order of discriminant D = t² − 4n. For even t the
/// units are y′ + x′√d′ with d′ = (t/2)² − n and the minimal solution of
/// y′² − d′x′² = ±1 is fundamental. For odd t the Pell solution over √D
/// gives the fundamental unit of Z[√D], which has index 1 or 3 in the unit
/// group of the order; the index-3 case (possible only for D ≡ 5 mod 8) is
/// detected by extracting a half-integer cube root.
pub fn fundamental_unit(t: &BigInt, n: &BigInt) -> Result<FundamentalUnit, QuadError> {
    let d_disc = t * t - int(4) * n;
    if !d_disc.is_positive() || is_perfect_square(&d_disc) {
        return Err(QuadError::DegenerateDiscriminant(d_disc));
    }
    if t.is_even() {
        let half_t = t / 2;
        let d1 = &half_t * &half_t - n;
        let (p, q, norm) = pell_minimal(&d1)?;
        // ε = p + q√d′ = x·λ + y with λ = t/2 + √d′.
        Ok(FundamentalUnit {
            y: p - &q * half_t,
            x: q,
            norm,
        })
    } else {
        let (p, q, norm) = pell_minimal(&d_disc)?;
        let (cap_x, cap_y) = if d_disc.mod_floor(&int(8)) == int(5) {
            half_unit_cube_root(&d_disc, &p, &q).unwrap_or((int(2) * &p, int(2) * &q))
        } else {
            (int(2) * &p, int(2) * &q)
        };
        // ε = (X + Y√D)/2 = x·λ + y with λ = (t + √D)/2.
        Ok(FundamentalUnit {
            y: (&cap_x - &cap_y * t) / 2,
            x: cap_y,
            norm,
        })
    }
}

/// Searches for odd u, v ≥ 1 with ((u + v√D)/2)³ = p + q√D, i.e. a
/// half-integer unit whose cube is the fundamental Pell unit.
fn half_unit_cube_root(d: &BigInt, p: &BigInt, q: &BigInt) -> Option<(BigInt, BigInt)> {
    let eight_q = int(8) * q;
    let mut v = BigInt::one();
    while &v * &v * &v * d <= eight_q {
        // 3u²v + v³D = 8q  ⇒  u² = (8q − v³D)/(3v)
        let num = &eight_q - &v * &v * &v * d;
        let den = int(3) * &v;
        if num.is_multiple_of(&den) {
            let u2 = num / den;
            if is_perfect_square(&u2) {
                let u = u2.sqrt();
                let norm4 = &u * &u - &v * &v * d;
                if u.is_odd()
                    && (&u * &u * &u + int(3) * &u * &v * &v * d) == int(8) * p
                    && (norm4 == int(4) || norm4 == int(-4))
                {
                    return Some((u, v));
                }
            }
        }
        v += 2u32;
    }
    None
}
