//! Exact integer matrix algebra: arithmetic, determinants, characteristic
//! polynomials, unimodular inverses, column Hermite normal form, Smith
//! normal form with transforms, and the finite abelian quotients
//! Z² / (A·Z² + r·Z²) used throughout the classification.

use crate::exact_arith::{int, BigRat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntMatError {
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}×{1} vs {2}×{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix has determinant {0}, not ±1")]
    NotUnimodular(BigInt),
    #[error("matrix does not have full column rank")]
    RankDeficient,
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        IMat { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        IMat::new(rows, cols, data.iter().map(|&x| int(x)).collect())
    }

    /// 2×2 convenience constructor, row major.
    pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Self {
        IMat::from_i64(2, 2, &[a, b, c, d])
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IMat::identity(self.rows)
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IMat {
        IMat::new(
            self.rows,
            self.cols,
            self.data.iter().map(|a| -a).collect(),
        )
    }

    pub fn scale(&self, s: &BigInt) -> IMat {
        IMat::new(
            self.rows,
            self.cols,
            self.data.iter().map(|a| a * s).collect(),
        )
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions must agree ({}×{} times {}×{})",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.at(i, k) * &v[k]).sum())
            .collect()
    }

    /// Integer power; negative exponents require a unimodular matrix.
    pub fn pow(&self, e: i64) -> Result<IMat, IntMatError> {
        if !self.is_square() {
            return Err(IntMatError::NotSquare(self.rows, self.cols));
        }
        let base = if e < 0 { gl_inverse(self)? } else { self.clone() };
        let mut acc = IMat::identity(self.rows);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut w = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if w.at(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !w.at(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let tmp = w.at(k, j).clone();
                    let other = w.at(p, j).clone();
                    w.set(k, j, other);
                    w.set(p, j, tmp);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / &prev;
                    w.set(i, j, v);
                }
                w.set(i, k, BigInt::zero());
            }
            prev = w.at(k, k).clone();
        }
        sign * w.at(n - 1, n - 1).clone()
    }

    /// Characteristic polynomial det(λI − A) by the Faddeev–LeVerrier
    /// recurrence; coefficients ascending, leading coefficient 1.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IMat::zero(n, n); // M₀ = 0
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut am = self.mul(&m);
            for i in 0..n {
                let v = am.at(i, i) + &coeffs[n - k + 1];
                am.set(i, i, v);
            }
            m = am;
            let t = self.mul(&m).trace();
            // c_{n−k} = −tr(A·M_k)/k, an exact integer division
            let (q, rem) = t.div_rem(&int(k as i64));
            debug_assert!(rem.is_zero());
            coeffs[n - k] = -q;
        }
        coeffs
    }
}

/// Macro-free index sugar: `m[(i, j)]`.
impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.at(i, j)
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Determinant, trace and characteristic polynomial in one call.
pub fn matrix_invariants(a: &IMat) -> (BigInt, BigInt, Vec<BigInt>) {
    (a.det(), a.trace(), a.charpoly())
}

/// Inverse of a unimodular integer matrix (determinant ±1), computed by
/// rational Gauss–Jordan elimination; the result is integral by Cramer.
pub fn gl_inverse(a: &IMat) -> Result<IMat, IntMatError> {
    if !a.is_square() {
        return Err(IntMatError::NotSquare(a.rows, a.cols));
    }
    let d = a.det();
    if !d.is_one() && !(-&d).is_one() {
        return Err(IntMatError::NotUnimodular(d));
    }
    let n = a.rows;
    // augmented [A | I] over Q
    let mut w: Vec<Vec<BigRat>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRat::from_integer(a.at(i, j).clone())
                    } else if j - n == i {
                        BigRat::one()
                    } else {
                        BigRat::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !w[i][k].is_zero())
            .expect("unimodular matrix cannot be singular");
        w.swap(k, p);
        let pivot = w[k][k].clone();
        for j in 0..2 * n {
            w[k][j] = &w[k][j] / &pivot;
        }
        for i in 0..n {
            if i != k && !w[i][k].is_zero() {
                let f = w[i][k].clone();
                for j in 0..2 * n {
                    w[i][j] = &w[i][j] - &f * &w[k][j];
                }
            }
        }
    }
    let mut inv = IMat::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let e = &w[i][n + j];
            debug_assert!(e.is_integer(), "unimodular inverse must be integral");
            inv.set(i, j, e.to_integer());
        }
    }
    Ok(inv)
}

/// Column Hermite normal form: the columns of the result are the canonical
/// basis of the lattice generated by the columns of `a`. Pivots sit at
/// strictly increasing rows, each pivot is positive, the column is zero
/// below its pivot, and every entry to the right of a pivot (same row) lies
/// in [0, pivot). For a full-rank square input the result is upper
/// triangular. Also returns the pivot rows.
pub fn column_hnf(a: &IMat) -> (IMat, Vec<usize>) {
    let m = a.rows;
    // Echelonize the row-reversed matrix so that pivots are the topmost
    // nonzero entries, then undo the reversal (and reverse column order):
    // pivots land on the diagonal for a full-rank square input.
    let mut cols: Vec<Vec<BigInt>> = (0..a.cols)
        .map(|j| (0..m).rev().map(|i| a.at(i, j).clone()).collect())
        .collect();
    let mut placed = 0usize;
    let mut pivot_rows: Vec<usize> = Vec::new();
    for row in 0..m {
        loop {
            let mut best: Option<usize> = None;
            let mut count = 0usize;
            for (c, col) in cols.iter().enumerate().skip(placed) {
                if !col[row].is_zero() {
                    count += 1;
                    if best.is_none_or(|b| col[row].abs() < cols[b][row].abs()) {
                        best = Some(c);
                    }
                }
            }
            let Some(bc) = best else { break };
            if count == 1 {
                cols.swap(placed, bc);
                if cols[placed][row].is_negative() {
                    for e in &mut cols[placed] {
                        *e = -std::mem::take(e);
                    }
                }
                pivot_rows.push(row);
                placed += 1;
                break;
            }
            let pivot = cols[bc][row].clone();
            for c in placed..cols.len() {
                if c != bc && !cols[c][row].is_zero() {
                    let q = cols[c][row].div_floor(&pivot);
                    if !q.is_zero() {
                        for i in 0..m {
                            let v = &cols[c][i] - &q * &cols[bc][i];
                            cols[c][i] = v;
                        }
                    }
                }
            }
        }
    }
    // Canonical reduction: at each pivot row, the entries of the earlier
    // columns are residues in [0, pivot). Columns are zero above their own
    // pivot, so processing pivots top to bottom never disturbs a row that
    // has already been reduced.
    for k in 1..placed {
        let p = pivot_rows[k];
        for j in 0..k {
            let q = cols[j][p].div_floor(&cols[k][p]);
            if !q.is_zero() {
                for i in 0..m {
                    let v = &cols[j][i] - &q * &cols[k][i];
                    cols[j][i] = v;
                }
            }
        }
    }
    let mut h = IMat::zero(m, placed);
    for j in 0..placed {
        let src = &cols[placed - 1 - j];
        for i in 0..m {
            h.set(i, j, src[m - 1 - i].clone());
        }
    }
    let pivots: Vec<usize> = (0..placed)
        .map(|j| m - 1 - pivot_rows[placed - 1 - j])
        .collect();
    (h, pivots)
}

/// Smith normal form U·A·V = D with U, V unimodular and D diagonal with
/// nonnegative entries d₁ | d₂ | …. Pivot selection scans for the entry of
/// least absolute value, row-major on ties, so the output is deterministic.
#[derive(Clone, Debug)]
pub struct SNFResult {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

impl SNFResult {
    /// The diagonal of D.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IMat) -> SNFResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IMat::identity(m);
    let mut v = IMat::identity(n);

    let swap_rows = |d: &mut IMat, u: &mut IMat, r1: usize, r2: usize| {
        if r1 == r2 {
            return;
        }
        for j in 0..d.cols {
            let t = d.at(r1, j).clone();
            let o = d.at(r2, j).clone();
            d.set(r1, j, o);
            d.set(r2, j, t);
        }
        for j in 0..u.cols {
            let t = u.at(r1, j).clone();
            let o = u.at(r2, j).clone();
            u.set(r1, j, o);
            u.set(r2, j, t);
        }
    };
    let swap_cols = |d: &mut IMat, v: &mut IMat, c1: usize, c2: usize| {
        if c1 == c2 {
            return;
        }
        for i in 0..d.rows {
            let t = d.at(i, c1).clone();
            let o = d.at(i, c2).clone();
            d.set(i, c1, o);
            d.set(i, c2, t);
        }
        for i in 0..v.rows {
            let t = v.at(i, c1).clone();
            let o = v.at(i, c2).clone();
            v.set(i, c1, o);
            v.set(i, c2, t);
        }
    };
    // row_i ← row_i − q·row_k (on D and U)
    let row_sub = |d: &mut IMat, u: &mut IMat, i: usize, k: usize, q: &BigInt| {
        for j in 0..d.cols {
            let vnew = d.at(i, j) - q * d.at(k, j);
            d.set(i, j, vnew);
        }
        for j in 0..u.cols {
            let vnew = u.at(i, j) - q * u.at(k, j);
            u.set(i, j, vnew);
        }
    };
    let col_sub = |d: &mut IMat, v: &mut IMat, j: usize, k: usize, q: &BigInt| {
        for i in 0..d.rows {
            let vnew = d.at(i, j) - q * d.at(i, k);
            d.set(i, j, vnew);
        }
        for i in 0..v.rows {
            let vnew = v.at(i, j) - q * v.at(i, k);
            v.set(i, j, vnew);
        }
    };

    for t in 0..m.min(n) {
        'pivot: loop {
            // smallest nonzero |entry| in the trailing block, row-major ties
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d.at(i, j).is_zero()
                        && best.is_none_or(|(bi, bj)| d.at(i, j).abs() < d.at(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // trailing block is zero: done with this and all later pivots
                break 'pivot;
            };
            swap_rows(&mut d, &mut u, t, bi);
            swap_cols(&mut d, &mut v, t, bj);
            if d.at(t, t).is_negative() {
                let minus_one = -BigInt::one();
                // negate row t
                for j in 0..n {
                    let vnew = -d.at(t, j);
                    d.set(t, j, vnew);
                }
                for j in 0..m {
                    let vnew = -u.at(t, j);
                    u.set(t, j, vnew);
                }
                let _ = minus_one;
            }
            let pivot = d.at(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !d.at(i, t).is_zero() {
                    let q = d.at(i, t).div_floor(&pivot);
                    row_sub(&mut d, &mut u, i, t, &q);
                    if !d.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !d.at(t, j).is_zero() {
                    let q = d.at(t, j).div_floor(&pivot);
                    col_sub(&mut d, &mut v, j, t, &q);
                    if !d.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // divisibility: pivot must divide the rest of the block
            for i in t + 1..m {
                for j in t + 1..n {
                    if !d.at(i, j).is_multiple_of(&pivot) {
                        let one = BigInt::one();
                        let minus = -&one;
                        row_sub(&mut d, &mut u, t, i, &minus); // row t += row i
                        let _ = one;
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }
    SNFResult { u, d, v }
}

/// The finite abelian group Z² / (A·Z² + r·Z²) with canonical labels.
///
/// Built from the Smith normal form of the 2×4 block matrix (A | r·I₂);
/// since r ≥ 1 the quotient is finite with invariant factors d₁ | d₂. The
/// canonical label of p is (U·p) mod (d₁, d₂); `lift` sends a label back to
/// a representative via U⁻¹.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    a: IMat,
    r: BigInt,
    u: IMat,
    u_inv: IMat,
    divisors: (BigInt, BigInt),
}

pub fn quotient_group(a: &IMat, r: &BigInt) -> FiniteQuotient {
    assert_eq!((a.rows, a.cols), (2, 2), "quotient_group expects a 2×2 matrix");
    assert!(r.is_positive(), "modulus r must be positive");
    let mut block = IMat::zero(2, 4);
    for i in 0..2 {
        for j in 0..2 {
            block.set(i, j, a.at(i, j).clone());
        }
        block.set(i, 2 + i, r.clone());
    }
    let snf = smith_normal_form(&block);
    let d1 = snf.d.at(0, 0).clone();
    let d2 = snf.d.at(1, 1).clone();
    assert!(
        d1.is_positive() && d2.is_positive(),
        "lattice A·Z² + r·Z² must have full rank"
    );
    let u_inv = gl_inverse(&snf.u).expect("SNF transform is unimodular");
    FiniteQuotient {
        a: a.clone(),
        r: r.clone(),
        u: snf.u,
        u_inv,
        divisors: (d1, d2),
    }
}

impl FiniteQuotient {
    pub fn order(&self) -> BigInt {
        &self.divisors.0 * &self.divisors.1
    }

    pub fn divisors(&self) -> (&BigInt, &BigInt) {
        (&self.divisors.0, &self.divisors.1)
    }

    pub fn modulus(&self) -> &BigInt {
        &self.r
    }

    pub fn lattice_matrix(&self) -> &IMat {
        &self.a
    }

    /// Canonical label of p ∈ Z² in Z_{d₁} × Z_{d₂}.
    pub fn reduce(&self, p: &[BigInt; 2]) -> [BigInt; 2] {
        let w = self.u.mul_vec(&p[..]);
        [
            w[0].mod_floor(&self.divisors.0),
            w[1].mod_floor(&self.divisors.1),
        ]
    }

    /// A representative in Z² of the class with canonical label w.
    pub fn lift(&self, w: &[BigInt; 2]) -> [BigInt; 2] {
        let p = self.u_inv.mul_vec(&w[..]);
        [p[0].clone(), p[1].clone()]
    }

    pub fn is_zero_class(&self, p: &[BigInt; 2]) -> bool {
        let w = self.reduce(p);
        w[0].is_zero() && w[1].is_zero()
    }

    pub fn same_class(&self, p: &[BigInt; 2], q: &[BigInt; 2]) -> bool {
        self.reduce(p) == self.reduce(q)
    }

    /// One representative per class, ordered by label (lexicographic).
    pub fn representatives(&self) -> Vec<[BigInt; 2]> {
        let mut out = Vec::new();
        let mut i = BigInt::zero();
        while i < self.divisors.0 {
            let mut j = BigInt::zero();
            while j < self.divisors.1 {
                out.push(self.lift(&[i.clone(), j.clone()]));
                j += 1u32;
            }
            i += 1u32;
        }
        out
    }

    /// True when K maps the lattice A·Z² + r·Z² into itself, i.e. when K
    /// descends to an endomorphism of the quotient.
    pub fn is_stable_under(&self, k: &IMat) -> bool {
        assert_eq!((k.rows(), k.cols()), (2, 2));
        (0..2).all(|j| {
            let col = [self.a.at(0, j).clone(), self.a.at(1, j).clone()];
            let image = k.mul_vec(&col);
            self.is_zero_class(&[image[0].clone(), image[1].clone()])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_2x2() {
        let n = IMat::mat2(1, 1, 1, 2);
        let (d, t, cp) = matrix_invariants(&n);
        assert_eq!(d, int(1));
        assert_eq!(t, int(3));
        // λ² − 3λ + 1 ascending
        assert_eq!(cp, vec![int(1), int(-3), int(1)]);
    }

    #[test]
    fn charpoly_of_companion_3x3() {
        // companion of X³ − 2X² − 3X − 1
        let m = IMat::from_i64(3, 3, &[0, 0, 1, 1, 0, 3, 0, 1, 2]);
        let cp = m.charpoly();
        assert_eq!(cp, vec![int(-1), int(-3), int(-2), int(1)]);
        assert_eq!(m.det(), int(1));
    }

    #[test]
    fn det_matches_charpoly_constant() {
        let mats = [
            IMat::from_i64(3, 3, &[2, 0, 1, -1, 3, 4, 5, 2, 0]),
            IMat::from_i64(4, 4, &[1, 2, 0, -1, 3, 0, 1, 1, 0, -2, 2, 0, 1, 1, 1, 1]),
            IMat::zero(3, 3),
        ];
        for m in mats {
            let n = m.rows();
            let cp = m.charpoly();
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(m.det(), sign * cp[0].clone());
        }
    }

    #[test]
    fn gl_inverse_roundtrip() {
        let m = IMat::mat2(2, 1, 1, 1);
        let inv = gl_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), IMat::identity(2));
        assert_eq!(inv, IMat::mat2(1, -1, -1, 2));
        let bad = IMat::mat2(2, 0, 0, 2);
        assert!(matches!(gl_inverse(&bad), Err(IntMatError::NotUnimodular(_))));
    }

    #[test]
    fn pow_with_negative_exponent() {
        let n = IMat::mat2(1, 1, 1, 2);
        let p = n.pow(3).unwrap().mul(&n.pow(-3).unwrap());
        assert!(p.is_identity());
    }

    #[test]
    fn snf_examples() {
        let a = IMat::mat2(2, 4, 6, 8);
        let s = smith_normal_form(&a);
        assert_eq!(s.divisors(), vec![int(2), int(4)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());

        let z = IMat::zero(2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.divisors(), vec![int(0), int(0)]);

        // (I−N | 3I) for the trace-3 golden matrix: the lattice is all of Z²
        let block = IMat::from_i64(2, 4, &[0, -1, 3, 0, -1, -1, 0, 3]);
        let s = smith_normal_form(&block);
        assert_eq!(s.divisors(), vec![int(1), int(1)]);
        assert_eq!(s.u.mul(&block).mul(&s.v), s.d);
    }

    #[test]
    fn snf_divisibility_chain() {
        let mats = [
            IMat::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, 4, 16]),
            IMat::from_i64(2, 2, &[6, 10, 15, 0]),
            IMat::from_i64(3, 2, &[1, 2, 3, 4, 5, 6]),
            IMat::from_i64(2, 4, &[4, 0, 6, 0, 0, 10, 0, 14]),
        ];
        for a in mats {
            let s = smith_normal_form(&a);
            assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "UAV = D failed for {a}");
            assert!(s.u.det().abs().is_one());
            assert!(s.v.det().abs().is_one());
            let div = s.divisors();
            for w in div.windows(2) {
                if !w[0].is_zero() {
                    assert!(
                        w[1].is_multiple_of(&w[0]),
                        "divisor chain broken for {a}: {:?}",
                        div
                    );
                } else {
                    assert!(w[1].is_zero());
                }
            }
            for d in &div {
                assert!(!d.is_negative());
            }
            // off-diagonal zero
            for i in 0..s.d.rows() {
                for j in 0..s.d.cols() {
                    if i != j {
                        assert!(s.d.at(i, j).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn hnf_canonical_form() {
        // two generating sets of the same lattice give the same HNF
        let g1 = IMat::from_i64(2, 2, &[2, 1, 0, 3]);
        let g2 = IMat::from_i64(2, 3, &[2, 3, 8, 0, 3, 6]);
        let (h1, p1) = column_hnf(&g1);
        let (h2, p2) = column_hnf(&g2);
        assert_eq!(h1, h2);
        assert_eq!(p1, vec![0, 1]);
        assert_eq!(p2, vec![0, 1]);
        // upper triangular, positive diagonal, reduced above
        assert_eq!(h1.at(1, 0), &int(0));
        assert!(h1.at(0, 0).is_positive() && h1.at(1, 1).is_positive());
        assert!(h1.at(0, 1) >= &int(0) && h1.at(0, 1) < h1.at(0, 0));
        // index = product of diagonal = |det g1| = 6
        assert_eq!(h1.at(0, 0) * h1.at(1, 1), int(6));
    }

    #[test]
    fn hnf_rank_deficient() {
        let g = IMat::from_i64(3, 2, &[1, 2, 2, 4, 3, 6]);
        let (h, pivots) = column_hnf(&g);
        assert_eq!(h.cols(), 1);
        // pivot = bottom-most nonzero entry in the upper convention
        assert_eq!(pivots, vec![2]);
        assert_eq!(
            (h.at(0, 0), h.at(1, 0), h.at(2, 0)),
            (&int(1), &int(2), &int(3))
        );
    }

    #[test]
    fn quotient_of_full_lattice_is_trivial() {
        // det(I−N) = −1 for trace 3 ⇒ quotient trivial for every r
        let a = IMat::mat2(0, -1, -1, -1);
        for r in 1..=6i64 {
            let q = quotient_group(&a, &int(r));
            assert_eq!(q.order(), int(1));
            assert!(q.is_zero_class(&[int(17), int(-5)]));
        }
    }

    #[test]
    fn quotient_labels_and_lifts() {
        // A = I − N for N = [[1,1],[2,3]] (trace 4): det(A) = −2, so with
        // r = 2 the quotient is Z₁ × Z₂.
        let a = IMat::mat2(0, -1, -2, -2);
        let q = quotient_group(&a, &int(2));
        assert_eq!(q.order(), int(2));
        assert_eq!(*q.divisors().0, int(1));
        assert_eq!(*q.divisors().1, int(2));
        let reps = q.representatives();
        assert_eq!(reps.len(), 2);
        // lift/reduce round-trip and class distinctness
        let mut labels: Vec<_> = reps.iter().map(|p| q.reduce(p)).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 2);
        for w in [[int(0), int(0)], [int(0), int(1)]] {
            assert_eq!(q.reduce(&q.lift(&w)), w);
        }
        // translation by a lattice vector does not change the class
        let p = [int(3), int(7)];
        let av = a.mul_vec(&[int(1), int(1)]);
        let moved = [&p[0] + &av[0], &p[1] + &av[1]];
        assert_eq!(q.reduce(&p), q.reduce(&moved));
    }

    #[test]
    fn quotient_stability() {
        let a = IMat::mat2(0, -1, -2, -2);
        let q = quotient_group(&a, &int(2));
        // N itself stabilizes (I−N)Z² + rZ²: N(I−N) = (I−N)N
        let n = IMat::mat2(1, 1, 2, 3);
        assert!(q.is_stable_under(&n));
    }
}
