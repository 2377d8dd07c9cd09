//! Symmetric squares of lattices.
//!
//! For a lattice `J` of rank `k`, the symmetric square `S2(J)` is the
//! quotient of `J (x) J` by `a (x) b - b (x) a`.  Its basis here is all
//! `e_i (x) e_i` (diagonal part, ascending), followed by all
//! `e_i (x) e_j + e_j (x) e_i` for `i < j` in lexicographic order.
//!
//! `S2` is a functor: a matrix `H : J -> K` induces `S2(H)`, and applying
//! this to the action matrices gives the G-lattice structure of `S2(J)`.
//! The universal quadratic map `q(v) = v (x) v` and the pairing
//! `[a, b] = q(a+b) - q(a) - q(b)` are computed in coordinates.

use crate::lattice::{LatticeHom, ZgLattice};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Basis vector of a symmetric square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymBasis {
    /// `e_i (x) e_i`
    Diag(usize),
    /// `e_i (x) e_j + e_j (x) e_i`, `i < j`
    Pair(usize, usize),
}

/// Rank of `S2` of a rank-`k` lattice: `k(k+1)/2`.
pub fn sym_rank(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Index of the diagonal basis vector `e_i (x) e_i`.
pub fn diag_index(_k: usize, i: usize) -> usize {
    i
}

/// Index of the off-diagonal basis vector for `i < j`.
pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    k + i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// The basis in storage order.
pub fn sym_basis(k: usize) -> Vec<SymBasis> {
    let mut v: Vec<SymBasis> = (0..k).map(SymBasis::Diag).collect();
    for i in 0..k {
        for j in i + 1..k {
            v.push(SymBasis::Pair(i, j));
        }
    }
    v
}

/// Matrix of `S2(H)` for an integer matrix `H` with `src` columns and `tgt`
/// rows.  Multiplicative: `S2(A*B) = S2(A)*S2(B)`.
pub fn sym_square_matrix(h: &IntMatrix) -> IntMatrix {
    let (tgt, src) = (h.rows(), h.cols());
    let mut out = IntMatrix::zeros(sym_rank(tgt), sym_rank(src));
    let two = BigInt::from(2);
    for i in 0..src {
        // q(H e_i)
        let col = diag_index(src, i);
        for r in 0..tgt {
            let hri = h.get(r, i);
            if hri.is_zero() {
                continue;
            }
            out.set(diag_index(tgt, r), col, hri * hri);
            for s in r + 1..tgt {
                let hsi = h.get(s, i);
                if !hsi.is_zero() {
                    out.set(pair_index(tgt, r, s), col, hri * hsi);
                }
            }
        }
    }
    for i in 0..src {
        for j in i + 1..src {
            // [H e_i, H e_j]
            let col = pair_index(src, i, j);
            for r in 0..tgt {
                let a = h.get(r, i) * h.get(r, j);
                if !a.is_zero() {
                    out.set(diag_index(tgt, r), col, &a * &two);
                }
                for s in r + 1..tgt {
                    let b = h.get(r, i) * h.get(s, j) + h.get(r, j) * h.get(s, i);
                    if !b.is_zero() {
                        out.set(pair_index(tgt, r, s), col, b);
                    }
                }
            }
        }
    }
    out
}

/// A lattice together with its role as the symmetric square of a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSquare {
    base: ZgLattice,
    lattice: ZgLattice,
}

/// Symmetric square of a lattice, with the functorial action.
pub fn sym_square(base: &ZgLattice) -> SymSquare {
    let group = base.group().clone();
    let actions = group.elements().map(|g| sym_square_matrix(base.action(g))).collect();
    let lattice = ZgLattice::from_element_actions(&group, sym_rank(base.rank()), actions);
    SymSquare { base: base.clone(), lattice }
}

impl SymSquare {
    pub fn base(&self) -> &ZgLattice {
        &self.base
    }

    pub fn lattice(&self) -> &ZgLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn basis(&self) -> Vec<SymBasis> {
        sym_basis(self.base.rank())
    }

    /// The universal quadratic map: coordinates of `q(v) = v (x) v`.
    pub fn q_map(&self, v: &[BigInt]) -> Vec<BigInt> {
        let k = self.base.rank();
        assert_eq!(v.len(), k, "vector length does not match the base rank");
        let mut out = vec![BigInt::zero(); self.rank()];
        for i in 0..k {
            out[diag_index(k, i)] = &v[i] * &v[i];
            for j in i + 1..k {
                out[pair_index(k, i, j)] = &v[i] * &v[j];
            }
        }
        out
    }

    /// `[a, b] = q(a+b) - q(a) - q(b)`, bilinear and symmetric.
    pub fn whitehead_pairing(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let k = self.base.rank();
        assert_eq!(a.len(), k);
        assert_eq!(b.len(), k);
        let mut out = vec![BigInt::zero(); self.rank()];
        for i in 0..k {
            out[diag_index(k, i)] = BigInt::from(2) * (&a[i] * &b[i]);
            for j in i + 1..k {
                out[pair_index(k, i, j)] = &a[i] * &b[j] + &a[j] * &b[i];
            }
        }
        out
    }

    /// l1 norm of an element in symmetric-square coordinates.
    pub fn norm(&self, w: &[BigInt]) -> BigInt {
        assert_eq!(w.len(), self.rank());
        w.iter().map(|x| x.abs()).sum()
    }
}

/// The functorial map on symmetric squares induced by a hom of bases.
pub fn sym_square_hom(h: &LatticeHom, src: &SymSquare, tgt: &SymSquare) -> LatticeHom {
    assert!(h.source() == src.base(), "hom source is not the base of the source square");
    assert!(h.target() == tgt.base(), "hom target is not the base of the target square");
    LatticeHom::new(
        src.lattice().clone(),
        tgt.lattice().clone(),
        sym_square_matrix(h.matrix()),
    )
}

/// Tabulated values of a function on the base lattice that is claimed to be
/// quadratic: its values on the basis vectors and on all pairwise sums.
/// These values determine a quadratic map uniquely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticTable {
    pub base_rank: usize,
    pub target_rank: usize,
    /// `f(e_i)` for each `i`.
    pub on_basis: Vec<Vec<BigInt>>,
    /// `f(e_i + e_j)` for `i < j`, in pair order.
    pub on_pair_sums: Vec<Vec<BigInt>>,
}

/// Evaluates a function on the tabulation points.
pub fn tabulate_quadratic(
    base_rank: usize,
    target_rank: usize,
    mut f: impl FnMut(&[BigInt]) -> Vec<BigInt>,
) -> QuadraticTable {
    let basis_vec = |i: usize| {
        let mut v = vec![BigInt::zero(); base_rank];
        v[i] = BigInt::from(1);
        v
    };
    let on_basis: Vec<Vec<BigInt>> = (0..base_rank)
        .map(|i| {
            let out = f(&basis_vec(i));
            assert_eq!(out.len(), target_rank);
            out
        })
        .collect();
    let mut on_pair_sums = Vec::with_capacity(sym_rank(base_rank) - base_rank);
    for i in 0..base_rank {
        for j in i + 1..base_rank {
            let mut v = basis_vec(i);
            v[j] = BigInt::from(1);
            let out = f(&v);
            assert_eq!(out.len(), target_rank);
            on_pair_sums.push(out);
        }
    }
    QuadraticTable { base_rank, target_rank, on_basis, on_pair_sums }
}

/// The unique linear map `phi : S2(J) -> target` with `phi(q(e_i)) = f(e_i)`
/// and `phi(q(e_i + e_j)) = f(e_i + e_j)`: on the symmetric basis,
/// `phi(diag i) = f(e_i)` and
/// `phi(pair i j) = f(e_i+e_j) - f(e_i) - f(e_j)`.
///
/// The table is only a claim; `phi` is returned together with its
/// equivariance certificate, which fails when the tabulated values do not
/// come from a G-quadratic map.
pub fn extend_quadratic(
    s: &SymSquare,
    table: &QuadraticTable,
    target: &ZgLattice,
) -> (LatticeHom, crate::lattice::HomCertificate) {
    let k = s.base().rank();
    assert_eq!(table.base_rank, k, "table base rank mismatch");
    assert_eq!(table.target_rank, target.rank(), "table target rank mismatch");
    let mut m = IntMatrix::zeros(target.rank(), s.rank());
    for i in 0..k {
        for (r, v) in table.on_basis[i].iter().enumerate() {
            m.set(r, diag_index(k, i), v.clone());
        }
    }
    let mut p = 0;
    for i in 0..k {
        for j in i + 1..k {
            let fij = &table.on_pair_sums[p];
            for r in 0..target.rank() {
                m.set(r, pair_index(k, i, j), fij[r].clone() - &table.on_basis[i][r] - &table.on_basis[j][r]);
            }
            p += 1;
        }
    }
    let hom = LatticeHom::new(s.lattice().clone(), target.clone(), m);
    let cert = hom.verify();
    (hom, cert)
}
