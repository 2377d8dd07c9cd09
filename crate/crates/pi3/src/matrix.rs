//! Exact dense matrices over the integers and rationals.
//!
//! Everything downstream (group rings, lattices, symmetric squares) reduces to
//! integer linear algebra, so this module keeps to arbitrary precision
//! throughout: no floating point, no modular shortcuts.  Normal forms return
//! their transformation matrices so callers can certify results by
//! re-multiplication instead of trusting the elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense row-major matrix over `BigInt`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense row-major matrix over `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from a generator on (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Convenience constructor from machine integers, row major.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.get(r, c).is_one()
                    } else {
                        self.get(r, c).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        IntMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![BigInt::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] += a * &v[c];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| -self.get(r, c))
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * k)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    pub fn block_diag(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(ro + r, co + c, b.get(r, c).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Kronecker product: block (i,j) of the result is `self[i][j] * other`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        let b = other.get(r, c);
                        if !b.is_zero() {
                            out.set(i * other.rows + r, j * other.cols + c, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| {
            BigRational::from_integer(self.get(r, c).clone())
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.data.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Inverse of a unimodular integer matrix.  Panics if `self` is not
    /// square; returns `None` when the determinant is not a unit.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = self.to_rational().inverse()?;
        inv.to_integer()
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        let v = a * b;
                        out.data[idx] += v;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * k)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).to_integer()))
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.rows == self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(col * n + c, pivot * n + c);
                    inv.data.swap(col * n + c, pivot * n + c);
                }
            }
            let p = a.get(col, col).clone();
            for c in 0..n {
                let v = a.get(col, c) / &p;
                a.set(col, c, v);
                let w = inv.get(col, c) / &p;
                inv.set(col, c, w);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &factor * a.get(col, c);
                    a.set(r, c, v);
                    let w = inv.get(r, c) - &factor * inv.get(col, c);
                    inv.set(r, c, w);
                }
            }
        }
        Some(inv)
    }

    /// Any solution of `self * x = b`, or `None` when inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, b.rows, "dimension mismatch in solve");
        let (m, n, k) = (self.rows, self.cols, b.cols);
        let mut a = self.clone();
        let mut rhs = b.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m).find(|&r| !a.get(r, col).is_zero()) else { continue };
            if p != row {
                for c in 0..n {
                    a.data.swap(row * n + c, p * n + c);
                }
                for c in 0..k {
                    rhs.data.swap(row * k + c, p * k + c);
                }
            }
            let piv = a.get(row, col).clone();
            for c in 0..n {
                let v = a.get(row, c) / &piv;
                a.set(row, c, v);
            }
            for c in 0..k {
                let v = rhs.get(row, c) / &piv;
                rhs.set(row, c, v);
            }
            for r in 0..m {
                if r == row || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &f * a.get(row, c);
                    a.set(r, c, v);
                }
                for c in 0..k {
                    let v = rhs.get(r, c) - &f * rhs.get(row, c);
                    rhs.set(r, c, v);
                }
            }
            pivots.push((row, col));
            row += 1;
            if row == m {
                break;
            }
        }
        // Rows of zeros must have a zero right-hand side.
        for r in row..m {
            for c in 0..k {
                if !rhs.get(r, c).is_zero() {
                    return None;
                }
            }
        }
        let mut x = RatMatrix::zeros(n, k);
        for &(r, col) in &pivots {
            for c in 0..k {
                x.set(col, c, rhs.get(r, c).clone());
            }
        }
        Some(x)
    }
}

/// Column-style Hermite normal form: `a * u = h` with `u` unimodular.
///
/// Pivots are positive, pivot rows strictly increase column by column,
/// entries left of a pivot in its row are reduced into `[0, pivot)`, and
/// zero columns are pushed to the right.
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Number of nonzero columns of `h` (the rank).
    pub rank: usize,
}

pub fn hermite_normal_form(a: &IntMatrix) -> Hnf {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(cols);

    let col_swap = |m: &mut IntMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in 0..m.rows() {
            let x = m.get(r, i).clone();
            let y = m.get(r, j).clone();
            m.set(r, i, y);
            m.set(r, j, x);
        }
    };
    // col_j -= q * col_k
    let col_axpy = |m: &mut IntMatrix, j: usize, q: &BigInt, k: usize| {
        for r in 0..m.rows() {
            let v = m.get(r, j) - q * m.get(r, k);
            m.set(r, j, v);
        }
    };
    let col_negate = |m: &mut IntMatrix, j: usize| {
        for r in 0..m.rows() {
            let v = -m.get(r, j);
            m.set(r, j, v);
        }
    };

    let mut next = 0; // next pivot column slot
    for row in 0..rows {
        if next == cols {
            break;
        }
        // Reduce active columns until at most one has a nonzero entry in this row.
        loop {
            let mut best: Option<usize> = None;
            for c in next..cols {
                if !h.get(row, c).is_zero() {
                    best = match best {
                        None => Some(c),
                        Some(b) => {
                            if h.get(row, c).abs() < h.get(row, b).abs() {
                                Some(c)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            let mut others = false;
            for c in next..cols {
                if c == b || h.get(row, c).is_zero() {
                    continue;
                }
                others = true;
                let q = h.get(row, c).div_floor(h.get(row, b));
                if !q.is_zero() {
                    col_axpy(&mut h, c, &q, b);
                    col_axpy(&mut u, c, &q, b);
                }
            }
            if !others {
                // Lone nonzero: normalize sign and install as pivot.
                if h.get(row, b).is_negative() {
                    col_negate(&mut h, b);
                    col_negate(&mut u, b);
                }
                col_swap(&mut h, next, b);
                col_swap(&mut u, next, b);
                // Reduce earlier pivot columns against the new pivot in this row.
                let p = h.get(row, next).clone();
                for c in 0..next {
                    let q = h.get(row, c).div_floor(&p);
                    if !q.is_zero() {
                        col_axpy(&mut h, c, &q, next);
                        col_axpy(&mut u, c, &q, next);
                    }
                }
                next += 1;
                break;
            }
        }
    }
    Hnf { h, u, rank: next }
}

/// Basis of the column lattice of `a`: the nonzero columns of its Hermite
/// normal form.  Two matrices span the same lattice iff these agree.
pub fn column_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(a);
    IntMatrix::from_fn(a.rows(), hnf.rank, |r, c| hnf.h.get(r, c).clone())
}

/// Whether two integer matrices span the same column lattice.
pub fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows(), "ambient rank mismatch");
    column_lattice_basis(a) == column_lattice_basis(b)
}

/// Basis of the integer kernel `{x : a x = 0}`, as matrix columns.
/// The basis spans a saturated sublattice (it is the full kernel).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(a);
    let cols: Vec<Vec<BigInt>> = (hnf.rank..a.cols()).map(|c| hnf.u.column(c)).collect();
    IntMatrix::from_columns(a.cols(), &cols)
}

/// Smith normal form: `u * a * v = s` with `u`, `v` unimodular and
/// `s` diagonal with nonnegative entries, each dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    fn row_axpy(m: &mut IntMatrix, i: usize, q: &BigInt, k: usize) {
        for c in 0..m.cols() {
            let val = m.get(i, c) - q * m.get(k, c);
            m.set(i, c, val);
        }
    }
    fn col_axpy(m: &mut IntMatrix, j: usize, q: &BigInt, k: usize) {
        for r in 0..m.rows() {
            let val = m.get(r, j) - q * m.get(r, k);
            m.set(r, j, val);
        }
    }
    fn row_swap(m: &mut IntMatrix, i: usize, j: usize) {
        if i != j {
            for c in 0..m.cols() {
                let x = m.get(i, c).clone();
                let y = m.get(j, c).clone();
                m.set(i, c, y);
                m.set(j, c, x);
            }
        }
    }
    fn col_swap(m: &mut IntMatrix, i: usize, j: usize) {
        if i != j {
            for r in 0..m.rows() {
                let x = m.get(r, i).clone();
                let y = m.get(r, j).clone();
                m.set(r, i, y);
                m.set(r, j, x);
            }
        }
    }
    fn row_negate(m: &mut IntMatrix, i: usize) {
        for c in 0..m.cols() {
            let val = -m.get(i, c);
            m.set(i, c, val);
        }
    }

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Locate minimal nonzero entry in the trailing block.
        let mut pos: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !s.get(r, c).is_zero() {
                    pos = match pos {
                        None => Some((r, c)),
                        Some((pr, pc)) => {
                            if s.get(r, c).abs() < s.get(pr, pc).abs() {
                                Some((r, c))
                            } else {
                                Some((pr, pc))
                            }
                        }
                    };
                }
            }
        }
        let Some((pr, pc)) = pos else { break };
        row_swap(&mut s, t, pr);
        row_swap(&mut u, t, pr);
        col_swap(&mut s, t, pc);
        col_swap(&mut v, t, pc);

        // Clear row and column t; restart whenever a remainder appears.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for r in t + 1..rows {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = s.get(r, t).div_floor(s.get(t, t));
                row_axpy(&mut s, r, &q, t);
                row_axpy(&mut u, r, &q, t);
                if !s.get(r, t).is_zero() {
                    row_swap(&mut s, t, r);
                    row_swap(&mut u, t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = s.get(t, c).div_floor(s.get(t, t));
                col_axpy(&mut s, c, &q, t);
                col_axpy(&mut v, c, &q, t);
                if !s.get(t, c).is_zero() {
                    col_swap(&mut s, t, c);
                    col_swap(&mut v, t, c);
                    dirty = true;
                }
            }
        }

        // Divisibility: fold any bad entry into column t and redo this pivot.
        let piv = s.get(t, t).clone();
        let mut fixed = true;
        'divis: for r in t + 1..rows {
            for c in t + 1..cols {
                if !s.get(r, c).mod_floor(&piv).is_zero() {
                    // Add row r to row t, making (t, c) nonzero mod pivot.
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, &minus_one, r);
                    row_axpy(&mut u, t, &minus_one, r);
                    fixed = false;
                    break 'divis;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s.get(t, t).is_negative() {
            row_negate(&mut s, t);
            row_negate(&mut u, t);
        }
        t += 1;
    }
    Snf { s, u, v }
}

/// Solves `a x = b` over the integers column by column via the Smith form.
/// Returns `None` when some column has no integral solution.
pub fn solve_integer(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows(), "dimension mismatch in solve");
    let snf = smith_normal_form(a);
    solve_integer_with_snf(&snf, a.cols(), b)
}

/// Same as [`solve_integer`] but reusing a precomputed Smith form of `a`.
pub fn solve_integer_with_snf(snf: &Snf, a_cols: usize, b: &IntMatrix) -> Option<IntMatrix> {
    let ub = snf.u.mul(b);
    let n = snf.s.rows().min(snf.s.cols());
    let mut y = IntMatrix::zeros(a_cols, b.cols());
    for c in 0..b.cols() {
        for r in 0..snf.s.rows() {
            let rhs = ub.get(r, c);
            if r < n && !snf.s.get(r, r).is_zero() {
                let d = snf.s.get(r, r);
                let (q, rem) = rhs.div_rem(d);
                if !rem.is_zero() {
                    return None;
                }
                y.set(r, c, q);
            } else if !rhs.is_zero() {
                return None;
            }
        }
    }
    Some(snf.v.mul(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn product_and_identity() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        let i = IntMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
        let b = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), m(&[vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[vec![2, 4], vec![6, 8]]).det(), BigInt::from(-8));
        assert_eq!(m(&[vec![1, 0], vec![0, 1]]).det(), BigInt::from(1));
        assert_eq!(
            m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).det(),
            BigInt::zero()
        );
        // Needs a row swap to find the first pivot.
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
    }

    #[test]
    fn hermite_form_certified_by_transform() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let hnf = hermite_normal_form(&a);
        assert_eq!(a.mul(&hnf.u), hnf.h);
        assert_eq!(hnf.u.det().abs(), BigInt::one());
        // Canonical shape: pivots positive, increasing pivot rows, reduced row entries.
        let mut last_row = None;
        for c in 0..hnf.rank {
            let pr = (0..hnf.h.rows()).find(|&r| !hnf.h.get(r, c).is_zero()).unwrap();
            assert!(hnf.h.get(pr, c) > &BigInt::zero());
            if let Some(lr) = last_row {
                assert!(pr > lr);
            }
            for c2 in 0..c {
                let v = hnf.h.get(pr, c2);
                assert!(v >= &BigInt::zero() && v < hnf.h.get(pr, c));
            }
            last_row = Some(pr);
        }
        for c in hnf.rank..hnf.h.cols() {
            assert!((0..hnf.h.rows()).all(|r| hnf.h.get(r, c).is_zero()));
        }
    }

    #[test]
    fn hermite_form_is_canonical_under_column_ops() {
        let a = m(&[vec![1, 3], vec![0, 2]]);
        // Same column lattice, scrambled generators (third is a combination).
        let b = m(&[vec![3, 1, 4], vec![2, 0, 2]]);
        assert!(same_column_lattice(&a, &b));
        let c = m(&[vec![1, 3], vec![0, 4]]);
        assert!(!same_column_lattice(&a, &c));
    }

    #[test]
    fn smith_form_of_frozen_example() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s);
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn smith_divisibility_chain_holds() {
        let a = m(&[vec![6, 4, 2], vec![4, 0, 8], vec![2, 8, 0]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s);
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "{:?}", f);
        }
    }

    #[test]
    fn kernel_is_exact() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        // Saturation: invariant factors of the kernel basis are all 1.
        let snf = smith_normal_form(&k);
        assert!(snf.invariant_factors().iter().all(|d| d.is_one()));
    }

    #[test]
    fn kernel_of_injective_map_is_trivial() {
        let a = m(&[vec![1, 0], vec![0, 2], vec![3, 3]]);
        assert_eq!(kernel_basis(&a).cols(), 0);
    }

    #[test]
    fn integer_solve_detects_non_integral_systems() {
        let a = m(&[vec![2, 0], vec![0, 2]]);
        let b = m(&[vec![2], vec![4]]);
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let odd = m(&[vec![1], vec![4]]);
        assert!(solve_integer(&a, &odd).is_none());
    }

    #[test]
    fn rational_inverse_and_solve() {
        let a = m(&[vec![2, 1], vec![1, 1]]).to_rational();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        let b = m(&[vec![1], vec![0]]).to_rational();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        // Singular matrix has no inverse.
        let s = m(&[vec![1, 2], vec![2, 4]]).to_rational();
        assert!(s.inverse().is_none());
        // Inconsistent system.
        let bad = m(&[vec![1], vec![1]]).to_rational();
        assert!(s.solve(&bad).is_none());
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let a = m(&[vec![1, 2], vec![1, 3]]);
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn kronecker_mixed_product() {
        let a = m(&[vec![1, 2], vec![0, 1]]);
        let b = m(&[vec![0, 1], vec![1, 0]]);
        let c = m(&[vec![1, 1], vec![0, 1]]);
        let d = m(&[vec![2, 0], vec![1, 1]]);
        // (A (x) B)(C (x) D) = AC (x) BD
        assert_eq!(
            a.kronecker(&b).mul(&c.kronecker(&d)),
            a.mul(&c).kronecker(&b.mul(&d))
        );
    }
}
