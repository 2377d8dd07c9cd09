//! Group rings ZG and QG with exact scalars, plus matrices over them.
//!
//! Elements are sparse maps from group-element indices to coefficients.  The
//! ring operations are total once both operands live over the same group; the
//! `try_*` variants surface a mismatch as an error, the operator impls panic.

use super::FiniteGroup;
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("operands belong to different groups (orders {left} and {right})")]
    GroupMismatch { left: usize, right: usize },
}

/// Exact coefficient ring: implemented for `BigInt` and `BigRational`.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Signed
    + for<'a> std::ops::AddAssign<&'a Self>
    + for<'a> std::ops::SubAssign<&'a Self>
{
    fn mul_ref(a: &Self, b: &Self) -> Self;
}

impl Scalar for BigInt {
    fn mul_ref(a: &Self, b: &Self) -> Self {
        a * b
    }
}

impl Scalar for BigRational {
    fn mul_ref(a: &Self, b: &Self) -> Self {
        a * b
    }
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Element of the group ring over `S`.
#[derive(Clone)]
pub struct GroupRingElement<S: Scalar> {
    group: Arc<FiniteGroup>,
    coeffs: BTreeMap<usize, S>,
}

pub type ZgElem = GroupRingElement<BigInt>;
pub type QgElem = GroupRingElement<BigRational>;

impl<S: Scalar> PartialEq for GroupRingElement<S> {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Eq for GroupRingElement<S> {}

impl<S: Scalar> fmt::Debug for GroupRingElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for GroupRingElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.coeffs.iter().enumerate() {
            let name = self.group.element_name(*g);
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{a}*{name}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> GroupRingElement<S> {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        GroupRingElement { group: group.clone(), coeffs: BTreeMap::new() }
    }

    /// The basis element `g` with coefficient one.
    pub fn basis(group: &Arc<FiniteGroup>, g: usize) -> Self {
        assert!(g < group.order(), "element index out of range");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(g, S::one());
        GroupRingElement { group: group.clone(), coeffs }
    }

    pub fn from_terms(group: &Arc<FiniteGroup>, terms: &[(usize, S)]) -> Self {
        let mut el = Self::zero(group);
        for (g, c) in terms {
            el.add_term(*g, c.clone());
        }
        el
    }

    pub fn from_dense(group: &Arc<FiniteGroup>, v: &[S]) -> Self {
        assert_eq!(v.len(), group.order());
        let mut el = Self::zero(group);
        for (g, c) in v.iter().enumerate() {
            el.add_term(g, c.clone());
        }
        el
    }

    pub fn to_dense(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.group.order()];
        for (&g, c) in &self.coeffs {
            v[g] = c.clone();
        }
        v
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, g: usize) -> S {
        self.coeffs.get(&g).cloned().unwrap_or_else(S::zero)
    }

    /// Terms in increasing element order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().map(|(&g, c)| (g, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    fn add_term(&mut self, g: usize, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(g).or_insert_with(S::zero);
        *entry += &c;
        if entry.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    fn mismatch(&self, other: &Self) -> RingError {
        RingError::GroupMismatch { left: self.group.order(), right: other.group.order() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        if !same_group(&self.group, &other.group) {
            return Err(self.mismatch(other));
        }
        let mut out = self.clone();
        for (&g, c) in &other.coeffs {
            out.add_term(g, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        if !same_group(&self.group, &other.group) {
            return Err(self.mismatch(other));
        }
        let mut out = self.clone();
        for (&g, c) in &other.coeffs {
            out.add_term(g, -c.clone());
        }
        Ok(out)
    }

    /// Convolution product through the multiplication table.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        if !same_group(&self.group, &other.group) {
            return Err(self.mismatch(other));
        }
        let mut out = Self::zero(&self.group);
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                out.add_term(self.group.mul(a, b), S::mul_ref(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&g, c)| (g, -c.clone())).collect();
        GroupRingElement { group: self.group.clone(), coeffs }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(&self.group);
        for (&g, c) in &self.coeffs {
            out.add_term(g, S::mul_ref(c, k));
        }
        out
    }

    /// Canonical involution `g -> g^-1`, extended linearly.
    pub fn involute(&self) -> Self {
        let mut out = Self::zero(&self.group);
        for (&g, c) in &self.coeffs {
            out.add_term(self.group.inv(g), c.clone());
        }
        out
    }

    /// Sum of coefficients (image under the augmentation map).
    pub fn augmentation(&self) -> S {
        let mut s = S::zero();
        for c in self.coeffs.values() {
            s += c;
        }
        s
    }

    /// Right translate by a group element.
    pub fn mul_element(&self, g: usize) -> Self {
        let mut out = Self::zero(&self.group);
        for (&a, c) in &self.coeffs {
            out.add_term(self.group.mul(a, g), c.clone());
        }
        out
    }
}

macro_rules! ring_ops {
    ($trait:ident, $method:ident, $delegate:ident) => {
        impl<S: Scalar> std::ops::$trait for &GroupRingElement<S> {
            type Output = GroupRingElement<S>;
            fn $method(self, rhs: &GroupRingElement<S>) -> GroupRingElement<S> {
                self.$delegate(rhs).expect("group ring operands over different groups")
            }
        }
    };
}
ring_ops!(Add, add, try_add);
ring_ops!(Sub, sub, try_sub);
ring_ops!(Mul, mul, try_mul);

/// The central element summing every group element with coefficient one.
pub fn sigma(group: &Arc<FiniteGroup>) -> ZgElem {
    ZgElem::from_terms(group, &group.elements().map(|g| (g, BigInt::one())).collect::<Vec<_>>())
}

/// Matrix over the group ring.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupMatrix<S: Scalar> {
    group: Arc<FiniteGroup>,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement<S>>,
}

pub type ZgMatrix = GroupMatrix<BigInt>;

impl<S: Scalar> fmt::Debug for GroupMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GroupMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> GroupMatrix<S> {
    pub fn zeros(group: &Arc<FiniteGroup>, rows: usize, cols: usize) -> Self {
        GroupMatrix {
            group: group.clone(),
            rows,
            cols,
            entries: vec![GroupRingElement::zero(group); rows * cols],
        }
    }

    pub fn from_fn(
        group: &Arc<FiniteGroup>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GroupRingElement<S>,
    ) -> Self {
        let mut m = Self::zeros(group, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GroupRingElement<S> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GroupRingElement<S>) {
        assert!(same_group(&self.group, v.group()), "entry over a different group");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(same_group(&self.group, &other.group), "matrices over different groups");
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        Self::from_fn(&self.group, self.rows, other.cols, |r, c| {
            let mut acc = GroupRingElement::zero(&self.group);
            for k in 0..self.cols {
                let a = self.get(r, k);
                let b = other.get(k, c);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.group, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Transpose with the canonical involution applied entrywise.  This is
    /// the adjoint exchanging left and right module structures.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(&self.group, self.cols, self.rows, |r, c| self.get(c, r).involute())
    }
}

impl ZgMatrix {
    /// Expands to an integer matrix, one `n x n` block per entry, where the
    /// block of a ring element is its left-multiplication action on the
    /// element basis of ZG.
    ///
    /// Left multiplication makes the expansion functorial,
    /// `expand(A*B) = expand(A)*expand(B)`, and its image commutes with the
    /// blockwise right-regular representation, so kernels and images of
    /// expanded matrices inherit the right ZG-module structure.
    pub fn expand_to_integer_matrix(&self) -> IntMatrix {
        let n = self.group.order();
        let mut out = IntMatrix::zeros(n * self.rows, n * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let entry = self.get(i, j);
                for (f, c) in entry.terms() {
                    for g in 0..n {
                        out.set(i * n + self.group.mul(f, g), j * n + g, c.clone());
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, parse_presentation};

    fn group(src: &str) -> Arc<FiniteGroup> {
        Arc::new(enumerate_group(&parse_presentation(src).unwrap(), 100_000).unwrap())
    }

    fn c3() -> Arc<FiniteGroup> {
        group("gens: x ; rels: x^3")
    }

    #[test]
    fn convolution_in_cyclic_three() {
        let g = c3();
        let one = |k: usize| ZgElem::basis(&g, k);
        // (e + x)(e + x^2) = 2e + x + x^2
        let a = &one(0) + &one(1);
        let b = &one(0) + &one(2);
        let p = &a * &b;
        assert_eq!(p.coeff(0), BigInt::from(2));
        assert_eq!(p.coeff(1), BigInt::from(1));
        assert_eq!(p.coeff(2), BigInt::from(1));
    }

    #[test]
    fn product_matches_table_expansion_oracle() {
        // Multiply two dense elements by an independent double loop over the
        // multiplication table and compare.
        let g = group("gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1");
        let a = ZgElem::from_dense(
            &g,
            &(0..8).map(|k| BigInt::from(k as i64 - 3)).collect::<Vec<_>>(),
        );
        let b = ZgElem::from_dense(
            &g,
            &(0..8).map(|k| BigInt::from(2 * k as i64 - 5)).collect::<Vec<_>>(),
        );
        let mut expected = vec![BigInt::zero(); 8];
        let (da, db) = (a.to_dense(), b.to_dense());
        for i in 0..8 {
            for j in 0..8 {
                let idx = g.mul(i, j);
                expected[idx] += &da[i] * &db[j];
            }
        }
        assert_eq!((&a * &b).to_dense(), expected);
    }

    #[test]
    fn involution_is_an_anti_automorphism() {
        let g = group("gens: x, y ; rels: x^3, y^2, x*y*x*y");
        let a = ZgElem::from_terms(&g, &[(1, BigInt::from(2)), (3, BigInt::from(-1))]);
        let b = ZgElem::from_terms(&g, &[(0, BigInt::one()), (4, BigInt::from(5))]);
        assert_eq!((&a * &b).involute(), &b.involute() * &a.involute());
        assert_eq!(a.involute().involute(), a);
    }

    #[test]
    fn augmentation_is_a_ring_map() {
        let g = c3();
        let a = ZgElem::from_terms(&g, &[(0, BigInt::from(3)), (2, BigInt::from(-1))]);
        let b = ZgElem::from_terms(&g, &[(1, BigInt::from(4))]);
        assert_eq!((&a * &b).augmentation(), a.augmentation() * b.augmentation());
        assert_eq!((&a + &b).augmentation(), a.augmentation() + b.augmentation());
    }

    #[test]
    fn sigma_absorbs_multiplication() {
        let g = group("gens: x, y ; rels: x^3, y^2, x*y*x*y");
        let s = sigma(&g);
        let a = ZgElem::from_terms(&g, &[(2, BigInt::from(3)), (5, BigInt::from(-2))]);
        assert_eq!(&s * &a, s.scale(&a.augmentation()));
        assert_eq!(&a * &s, s.scale(&a.augmentation()));
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let a = ZgElem::basis(&c3(), 1);
        let b = ZgElem::basis(&group("gens: x ; rels: x^2"), 1);
        assert!(matches!(
            a.try_add(&b),
            Err(RingError::GroupMismatch { left: 3, right: 2 })
        ));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn structurally_equal_groups_interoperate() {
        let a = ZgElem::basis(&c3(), 1);
        let b = ZgElem::basis(&c3(), 2);
        assert_eq!((&a * &b).coeff(0), BigInt::one());
    }

    #[test]
    fn expansion_is_functorial() {
        let g = group("gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1");
        let el = |terms: &[(usize, i64)]| {
            ZgElem::from_terms(
                &g,
                &terms.iter().map(|&(k, c)| (k, BigInt::from(c))).collect::<Vec<_>>(),
            )
        };
        let a = ZgMatrix::from_fn(&g, 2, 2, |r, c| el(&[((r + 2 * c) % 8, 1), (1, r as i64)]));
        let b = ZgMatrix::from_fn(&g, 2, 1, |r, _| el(&[((3 * r + 1) % 8, -2), (6, 1)]));
        assert_eq!(
            a.mul(&b).expand_to_integer_matrix(),
            a.expand_to_integer_matrix().mul(&b.expand_to_integer_matrix())
        );
    }

    #[test]
    fn expansion_of_identity_entry() {
        let g = c3();
        let m = ZgMatrix::from_fn(&g, 1, 1, |_, _| ZgElem::basis(&g, 0));
        assert!(m.expand_to_integer_matrix().is_identity());
    }

    #[test]
    fn conj_transpose_reverses_products() {
        let g = c3();
        let a = ZgMatrix::from_fn(&g, 2, 2, |r, c| ZgElem::basis(&g, (r + c) % 3));
        let b = ZgMatrix::from_fn(&g, 2, 2, |r, c| ZgElem::basis(&g, (2 * r + c) % 3));
        assert_eq!(a.mul(&b).conj_transpose(), b.conj_transpose().mul(&a.conj_transpose()));
    }
}
