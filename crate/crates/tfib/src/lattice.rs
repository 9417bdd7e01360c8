//! Exact integer linear algebra: Smith normal form, saturated kernels,
//! primitivity and unipotence tests.
//!
//! Everything here works over arbitrary-precision integers. Intermediate
//! entries in a Smith reduction can overflow machine words even for small
//! inputs, so no fixed-width arithmetic is used anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is empty")]
    Empty,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix must be square, has shape {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: BigInt },
    #[error("primitivity is undefined for the zero vector")]
    ZeroVector,
}

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

// On the wire a matrix is a plain array of integer rows, e.g.
// [[1,0,1],[0,1,0],[0,0,1]]. Interchange values fit in i64 by far.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        self.at(r, c)
                            .to_i64()
                            .expect("matrix entry exceeds i64 in serialization")
                    })
                    .collect()
            })
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(de)?;
        if rows.is_empty() {
            return Err(D::Error::custom("matrix must have at least one row"));
        }
        let c = rows[0].len();
        if rows.iter().any(|r| r.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(IntMatrix::from_rows(&rows))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*x));
            }
        }
        m
    }

    /// 3x3 convenience constructor, the common case for monodromy matrices.
    pub fn from_rows3(rows: [[i64; 3]; 3]) -> Self {
        Self::from_rows(&[rows[0].to_vec(), rows[1].to_vec(), rows[2].to_vec()])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank(), "shape mismatch in mul_vec");
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                out[i] += self.at(i, k) * &v.coords[k];
            }
        }
        LatticeVector::new(out)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.entries.len() {
            out.entries[i] += &other.entries[i];
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.entries.len() {
            out.entries[i] -= &other.entries[i];
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = -(&*e);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMatrix::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Exact inverse of a unimodular matrix via its Smith decomposition.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let d = self.det();
        if d.magnitude() != BigInt::one().magnitude() {
            return Err(LatticeError::NotUnimodular { det: d });
        }
        let snf = smith_normal_form(self);
        // U A V = I  =>  A^{-1} = V U
        debug_assert!(snf.d.is_identity());
        Ok(snf.v.mul(&snf.u))
    }

    pub fn row(&self, r: usize) -> LatticeVector {
        LatticeVector::new((0..self.cols).map(|c| self.at(r, c).clone()).collect())
    }

    pub fn col(&self, c: usize) -> LatticeVector {
        LatticeVector::new((0..self.rows).map(|r| self.at(r, c).clone()).collect())
    }

    pub fn from_cols(cols: &[LatticeVector]) -> IntMatrix {
        assert!(!cols.is_empty());
        let rows = cols[0].rank();
        let mut m = IntMatrix::zero(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.rank(), rows);
            for i in 0..rows {
                m.set(i, j, v.coords[i].clone());
            }
        }
        m
    }

    /// Stack matrices vertically (all must share a column count).
    pub fn vstack(mats: &[IntMatrix]) -> IntMatrix {
        assert!(!mats.is_empty());
        let cols = mats[0].cols;
        let rows: usize = mats.iter().map(|m| m.rows).sum();
        let mut out = IntMatrix::zero(rows, cols);
        let mut r0 = 0;
        for m in mats {
            assert_eq!(m.cols, cols);
            for r in 0..m.rows {
                for c in 0..cols {
                    out.set(r0 + r, c, m.at(r, c).clone());
                }
            }
            r0 += m.rows;
        }
        out
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.at(r, c).to_i64().expect("entry exceeds i64"))
                    .collect()
            })
            .collect()
    }
}

/// Integer vector with a fixed ambient rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<i64> = self
            .coords
            .iter()
            .map(|c| c.to_i64().expect("vector entry exceeds i64 in serialization"))
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(de)?;
        Ok(LatticeVector::from_i64(&v))
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        g
    }
}

/// Result of a Smith reduction `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal elementary divisors d1 | d2 | ... (nonnegative).
    pub fn divisors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with a fixed pivot rule (smallest nonzero absolute
/// value, ties broken by lowest row then column index) so that the output
/// is deterministic for a given input.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    assert!(
        a.rows() > 0 && a.cols() > 0,
        "smith_normal_form of empty matrix"
    );
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let pivot = |d: &IntMatrix, k: usize| -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let x = d.at(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                match &best {
                    Some((b, _, _)) if *b <= ax => {}
                    _ => best = Some((ax, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    };

    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = pivot(&d, k) else { break };
        // move pivot to (k, k)
        if pi != k {
            swap_rows(&mut d, k, pi);
            swap_rows(&mut u, k, pi);
        }
        if pj != k {
            swap_cols(&mut d, k, pj);
            swap_cols(&mut v, k, pj);
        }
        // clear row and column k by Euclidean steps
        let mut clean = true;
        for i in k + 1..rows {
            if !d.at(i, k).is_zero() {
                let q = div_round(d.at(i, k), d.at(k, k));
                if !q.is_zero() {
                    row_axpy(&mut d, i, k, &-&q);
                    row_axpy(&mut u, i, k, &-&q);
                }
                if !d.at(i, k).is_zero() {
                    clean = false;
                }
            }
        }
        for j in k + 1..cols {
            if !d.at(k, j).is_zero() {
                let q = div_round(d.at(k, j), d.at(k, k));
                if !q.is_zero() {
                    col_axpy(&mut d, j, k, &-&q);
                    col_axpy(&mut v, j, k, &-&q);
                }
                if !d.at(k, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // pivot shrank; repeat with a smaller pivot
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut fixed = None;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(d.at(i, j) % d.at(k, k)).is_zero() {
                    fixed = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fixed {
            // add row i to row k and restart the elimination at k
            row_add(&mut d, k, i);
            row_add(&mut u, k, i);
            continue;
        }
        if d.at(k, k).is_negative() {
            negate_row(&mut d, k);
            negate_row(&mut u, k);
        }
        k += 1;
    }
    debug_assert_eq!(u.mul(a).mul(&v), d, "UAV != D");
    SnfResult { d, u, v }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for c in 0..m.cols() {
        let x = m.at(a, c).clone();
        let y = m.at(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let x = m.at(r, a).clone();
        let y = m.at(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// row[i] += q * row[k]
fn row_axpy(m: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let v = m.at(i, c) + q * m.at(k, c);
        m.set(i, c, v);
    }
}

/// col[j] += q * col[k]
fn col_axpy(m: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let v = m.at(r, j) + q * m.at(r, k);
        m.set(r, j, v);
    }
}

fn row_add(m: &mut IntMatrix, dst: usize, src: usize) {
    for c in 0..m.cols() {
        let v = m.at(dst, c) + m.at(src, c);
        m.set(dst, c, v);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.at(r, c);
        m.set(r, c, v);
    }
}

/// Round-to-nearest integer division (ties toward zero), used so Euclidean
/// steps shrink remainders as fast as possible.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Basis of the saturated integer kernel `{v : A v = 0}`. The returned
/// basis spans a saturated (primitive) sublattice.
pub fn kernel_saturated(a: &IntMatrix) -> Vec<LatticeVector> {
    let snf = smith_normal_form(a);
    let n = a.cols();
    let r = snf.rank();
    // A = U^{-1} D V^{-1}; A v = 0 iff D (V^{-1} v) = 0 iff V^{-1} v supported
    // on zero-divisor coordinates. Basis: columns r..n of V.
    (r..n).map(|j| snf.v.col(j)).collect()
}

/// True iff the gcd of the coordinates is 1. Errors on the zero vector.
pub fn is_primitive(v: &LatticeVector) -> Result<bool, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.content() == BigInt::one())
}

/// Exact `(T^t)^{-1}` for unimodular T.
pub fn transpose_inverse(t: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    t.transpose().inverse_unimodular()
}

/// True iff `(T - I)^n = 0` with n the dimension.
pub fn is_unipotent(t: &IntMatrix) -> bool {
    assert!(t.is_square(), "is_unipotent of non-square matrix");
    let n = t.rows();
    let m = t.sub(&IntMatrix::identity(n));
    let mut p = m.clone();
    for _ in 1..n {
        p = p.mul(&m);
    }
    p.is_zero()
}

/// The simple-connectivity criterion: the stacked matrix of all `T - I`
/// has exactly `d` elementary divisors, all equal to 1. Equivalently no
/// nonzero common fixed vector mod any n >= 2.
pub fn trivial_invariants_all_n(ts: &[IntMatrix]) -> Result<bool, LatticeError> {
    if ts.is_empty() {
        return Err(LatticeError::Empty);
    }
    let d = ts[0].rows();
    for t in ts {
        if !t.is_square() || t.rows() != d {
            return Err(LatticeError::Dimension(
                "generators must be square of equal dimension".into(),
            ));
        }
    }
    let id = IntMatrix::identity(d);
    let stacked: Vec<IntMatrix> = ts.iter().map(|t| t.sub(&id)).collect();
    let snf = smith_normal_form(&IntMatrix::vstack(&stacked));
    let divisors = snf.divisors();
    Ok(divisors.len() == d && divisors.iter().all(|x| *x == BigInt::one()))
}

/// Completes a primitive vector to a basis of the ambient lattice; the
/// returned unimodular matrix has `v` as its first column.
pub fn complete_primitive(v: &LatticeVector) -> Result<IntMatrix, LatticeError> {
    if !is_primitive(v)? {
        return Err(LatticeError::Dimension("vector is not primitive".into()));
    }
    let col = IntMatrix::from_cols(&[v.clone()]);
    let snf = smith_normal_form(&col);
    // U * v = e1 (divisor 1), so v = U^{-1} e1: take P = U^{-1}.
    debug_assert!(snf.d.at(0, 0).is_one());
    let p = snf.u.inverse_unimodular()?;
    debug_assert_eq!(p.col(0), *v);
    Ok(p)
}

/// Given columns spanning a saturated sublattice, returns a unimodular
/// matrix whose first k columns span the same sublattice.
pub fn complete_saturated_basis(basis: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let k = basis.cols();
    let snf = smith_normal_form(basis);
    for i in 0..k {
        if !snf.d.at(i, i).is_one() {
            return Err(LatticeError::Dimension(
                "columns do not span a saturated sublattice".into(),
            ));
        }
    }
    // B = U^{-1} (I_k; 0) V^{-1}; columns of U^{-1} restricted to 0..k span im(B).
    snf.u.inverse_unimodular()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_diag_2_3() {
        // cross-checked against naive row/column reduction: diag(2,3) ~ diag(1,6)
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.divisors(),
            vec![BigInt::from(1), BigInt::from(6)],
        );
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_t_minus_i() {
        // T - I for T = [[1,0,1],[0,1,0],[0,0,1]] has a single nonzero entry
        let t = m(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
        let a = t.sub(&IntMatrix::identity(3));
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.divisors(),
            vec![BigInt::from(1), BigInt::zero(), BigInt::zero()],
        );
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let a = IntMatrix::zero(3, 3);
        let basis = kernel_saturated(&a);
        assert_eq!(basis.len(), 3);
        let b = IntMatrix::from_cols(&basis);
        assert_eq!(b.det().abs(), BigInt::one());
    }

    #[test]
    fn kernel_rank_one() {
        // Thm 1.4 proof: rank ker(T - I) = 1 for T = [[1,1],[0,1]]
        let t = m(&[vec![1, 1], vec![0, 1]]);
        let a = t.sub(&IntMatrix::identity(2));
        let basis = kernel_saturated(&a);
        assert_eq!(basis.len(), 1);
        // spanned by (1, 0) up to sign
        let v = &basis[0];
        assert!(v.coords()[1].is_zero());
        assert_eq!(v.coords()[0].abs(), BigInt::one());
    }

    #[test]
    fn kernel_stacked_thm_110_3() {
        // Thm 1.10(3) generators: common fixed lattice is span{e1, e2}
        let t1 = m(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
        let t2 = m(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let id = IntMatrix::identity(3);
        let stacked = IntMatrix::vstack(&[t1.sub(&id), t2.sub(&id)]);
        let basis = kernel_saturated(&stacked);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v.coords()[2].is_zero());
        }
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&LatticeVector::from_i64(&[1, 0, 0])).unwrap());
        assert!(!is_primitive(&LatticeVector::from_i64(&[2, 4])).unwrap());
        // gcd oracle
        assert!(is_primitive(&LatticeVector::from_i64(&[5, 3])).unwrap());
        assert_eq!(
            is_primitive(&LatticeVector::from_i64(&[0, 0])),
            Err(LatticeError::ZeroVector)
        );
    }

    #[test]
    fn transpose_inverse_cases() {
        let id = IntMatrix::identity(2);
        assert_eq!(transpose_inverse(&id).unwrap(), id);
        let t = m(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            transpose_inverse(&t).unwrap(),
            m(&[vec![1, 0], vec![-1, 1]])
        );
        let t3 = m(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
        // exact inverse oracle: (T^t)^{-1} computed by hand
        assert_eq!(
            transpose_inverse(&t3).unwrap(),
            m(&[vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1]])
        );
        let bad = m(&[vec![2, 0], vec![0, 1]]);
        assert!(transpose_inverse(&bad).is_err());
    }

    #[test]
    fn unipotence() {
        assert!(is_unipotent(&m(&[vec![1, 1], vec![0, 1]])));
        // Thm 1.4 trace-1 and trace-3 matrices have no eigenvalue 1
        assert!(!is_unipotent(&m(&[vec![0, -1], vec![1, 1]])));
        assert!(!is_unipotent(&m(&[vec![0, -1], vec![1, 3]])));
    }

    #[test]
    fn trivial_invariants() {
        let id = IntMatrix::identity(2);
        assert!(!trivial_invariants_all_n(std::slice::from_ref(&id)).unwrap());
        let a = m(&[vec![1, 1], vec![0, 1]]);
        let b = m(&[vec![1, 0], vec![1, 1]]);
        assert!(trivial_invariants_all_n(&[a, b]).unwrap());
        assert_eq!(
            trivial_invariants_all_n(&[]),
            Err(LatticeError::Empty)
        );
    }

    #[test]
    fn brute_force_fixed_vectors_mod_n_oracle() {
        // trivial_invariants_all_n agrees with direct search mod n = 2..20
        let cases: Vec<Vec<IntMatrix>> = vec![
            vec![m(&[vec![1, 1], vec![0, 1]]), m(&[vec![1, 0], vec![1, 1]])],
            vec![m(&[vec![1, 2], vec![0, 1]])],
            vec![m(&[vec![1, 1], vec![0, 1]])],
        ];
        for ts in cases {
            let expected = {
                let mut trivial = true;
                'outer: for n in 2i64..=20 {
                    for x in 0..n {
                        for y in 0..n {
                            if x == 0 && y == 0 {
                                continue;
                            }
                            let fixed = ts.iter().all(|t| {
                                let r = t.to_i64_rows();
                                let fx = (r[0][0] * x + r[0][1] * y - x).rem_euclid(n);
                                let fy = (r[1][0] * x + r[1][1] * y - y).rem_euclid(n);
                                fx == 0 && fy == 0
                            });
                            if fixed {
                                trivial = false;
                                break 'outer;
                            }
                        }
                    }
                }
                trivial
            };
            assert_eq!(trivial_invariants_all_n(&ts).unwrap(), expected);
        }
    }

    #[test]
    fn complete_primitive_basis() {
        let v = LatticeVector::from_i64(&[3, 5, 7]);
        let p = complete_primitive(&v).unwrap();
        assert_eq!(p.col(0), v);
        assert_eq!(p.det().abs(), BigInt::one());
    }
}
