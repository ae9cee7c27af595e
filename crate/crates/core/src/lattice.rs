//! Integer matrices and symmetric bilinear forms: Bareiss determinants,
//! Smith and Hermite normal forms, sublattice discriminants, and 2-adic
//! valuation bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("ragged matrix literal")
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(x));
        }
        m
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + c * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(pr) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, pr);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    /// Determinant of the leading i×i block.
    pub fn leading_minor(&self, i: usize) -> BigInt {
        let mut m = Self::zeros(i, i);
        for r in 0..i {
            for c in 0..i {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        m.determinant()
    }

    /// Sylvester's criterion applied to the negated form.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric() && (1..=self.rows).all(|i| self.scale(-1).leading_minor(i).is_positive())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Integer symmetric bilinear form on Z^r.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntLattice {
    gram: IntMatrix,
    labels: Option<Vec<String>>,
}

impl IntLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if gram.rows() == 0 {
            return Err(Error::InvalidArgument("lattice of rank zero".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
        }
        Ok(IntLattice { gram, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::InvalidArgument("wrong number of labels".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += &a[i] * self.gram.get(i, j) * &b[j];
            }
        }
        acc
    }
}

pub fn gram_det(lattice: &IntLattice) -> BigInt {
    lattice.gram.determinant()
}

/// `u * m * v = d` with `d` diagonal, entries nonnegative and each
/// dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let steps = r.min(c);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..r {
                let q = a.get(i, t).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_row(i, t, &-q.clone());
                    u.add_row(i, t, &-q);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = a.get(t, j).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_col(j, t, &-q.clone());
                    v.add_col(j, t, &-q);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = a.get(t, t).clone();
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    let diag = (0..steps).map(|i| a.get(i, i).clone()).collect();
    Snf { diag, u, v }
}

/// Hermite-style row basis of the lattice spanned by the rows of
/// `generators`: upper triangular, positive pivots, zero rows dropped.
pub fn row_basis(generators: &IntMatrix) -> IntMatrix {
    let mut a = generators.clone();
    let (r, c) = (a.rows(), a.cols());
    let mut pr = 0;
    for col in 0..c {
        if pr == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..r {
                let x = a.get(i, col);
                if !x.is_zero() && best.is_none_or(|b| x.abs() < a.get(b, col).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else {
                break;
            };
            a.swap_rows(pr, b);
            let mut done = true;
            for i in pr + 1..r {
                let q = a.get(i, col).div_floor(a.get(pr, col));
                if !q.is_zero() {
                    a.add_row(i, pr, &-q);
                }
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(pr, col).is_zero() {
            continue;
        }
        if a.get(pr, col).is_negative() {
            a.negate_row(pr);
        }
        for i in 0..pr {
            let q = a.get(i, col).div_floor(a.get(pr, col));
            if !q.is_zero() {
                a.add_row(i, pr, &-q);
            }
        }
        pr += 1;
    }
    let rows = (0..pr).map(|i| a.row(i).to_vec()).collect();
    IntMatrix::from_rows(rows).unwrap_or_else(|_| IntMatrix::zeros(0, c))
}

/// A finite-index sublattice; the columns of `inclusion` are the
/// sub-basis vectors in parent coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    parent: IntLattice,
    inclusion: IntMatrix,
}

impl Sublattice {
    pub fn new(parent: IntLattice, inclusion: IntMatrix) -> Result<Self> {
        if inclusion.rows() != parent.rank() || !inclusion.is_square() {
            return Err(Error::InvalidArgument(
                "inclusion must be square of the parent rank".into(),
            ));
        }
        if inclusion.determinant().is_zero() {
            return Err(Error::InvalidArgument("sublattice has infinite index".into()));
        }
        Ok(Sublattice { parent, inclusion })
    }

    pub fn parent(&self) -> &IntLattice {
        &self.parent
    }

    pub fn inclusion(&self) -> &IntMatrix {
        &self.inclusion
    }

    pub fn index(&self) -> BigInt {
        self.inclusion.determinant().abs()
    }

    /// Gram matrix of the sub-basis, `B^T G B`.
    pub fn gram(&self) -> IntMatrix {
        self.inclusion
            .transpose()
            .mul(self.parent.gram())
            .mul(&self.inclusion)
    }

    /// Invariant factors of the quotient group parent/sub.
    pub fn quotient_invariants(&self) -> Vec<BigInt> {
        smith_normal_form(&self.inclusion)
            .diag
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

/// `disc(parent) * index^2`, checked against the Gram determinant of the
/// sub-basis.
pub fn sublattice_disc(s: &Sublattice) -> Result<BigInt> {
    let index = s.index();
    let by_law = gram_det(&s.parent) * &index * &index;
    let direct = s.gram().determinant();
    if by_law != direct {
        return Err(Error::Verification(format!(
            "index law gives {by_law}, direct Gram gives {direct}"
        )));
    }
    Ok(by_law)
}

/// `(v, u)` with `d = 2^v * u` and `u` odd.
pub fn two_adic_normalize(d: &BigInt) -> Result<(u32, BigInt)> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero has no 2-adic valuation".into()));
    }
    let v = d.trailing_zeros().unwrap_or(0) as u32;
    Ok((v, d >> v))
}

pub fn a2_block() -> IntMatrix {
    IntMatrix::from_i64(&[vec![-2, 1], vec![1, -2]])
}

pub fn hyperbolic_plane() -> IntMatrix {
    IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]])
}
