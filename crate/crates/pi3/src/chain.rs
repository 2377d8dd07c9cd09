//! Cellular chain complex of the universal cover of the presentation
//! 2-complex, over ZG.
//!
//! For a presentation with generators `x_1..x_m` and relators `r_1..r_k`,
//! the complex is `C_2 = ZG^k -> C_1 = ZG^m -> C_0 = ZG`, with the boundary
//! of a 2-cell given by free differential calculus and the boundary of a
//! 1-cell by `x_j - e`.
//!
//! Matrices over ZG are stored left-module style, so the product
//! `dd2 * dd1 = 0` is the literal fundamental identity of the calculus.  To
//! compute with the right-module structure the matrices are conjugate
//! transposed and expanded to integer block matrices; the expansion is
//! functorial and commutes with the right-regular action, so kernels carry
//! an induced lattice structure.

use crate::cert::Certificate;
use crate::group::{FiniteGroup, Presentation, Word, ZgElem, ZgMatrix};
use crate::lattice::{kernel_lattice, LatticeHom, ZgLattice};
use crate::matrix::{kernel_basis, same_column_lattice, IntMatrix};
use serde::Serialize;
use std::sync::Arc;

/// Fox derivative of a word with respect to generator `j`, pushed into ZG
/// along the quotient map.  Satisfies the product rule
/// `d(uv) = du + u dv` with `d(x_i) = delta_ij e` and
/// `d(x_i^-1) = -delta_ij x_i^-1`.
pub fn fox_derivative(w: &Word, j: usize, group: &Arc<FiniteGroup>) -> ZgElem {
    let mut acc = ZgElem::zero(group);
    let mut prefix = group.id();
    for l in &w.0 {
        let img = group.gen_image(l.gen);
        if l.inv {
            let t = group.mul(prefix, group.inv(img));
            if l.gen == j {
                acc = acc.try_sub(&ZgElem::basis(group, t)).unwrap();
            }
            prefix = t;
        } else {
            if l.gen == j {
                acc = acc.try_add(&ZgElem::basis(group, prefix)).unwrap();
            }
            prefix = group.mul(prefix, img);
        }
    }
    acc
}

/// The chain data of a presentation over its enumerated group.
#[derive(Clone)]
pub struct ChainComplex {
    group: Arc<FiniteGroup>,
    n1: usize,
    n2: usize,
    /// Relators x generators matrix of Fox derivatives.
    dd2: ZgMatrix,
    /// Generators x 1 matrix with entries `x_j - e`.
    dd1: ZgMatrix,
}

/// Builds both boundary matrices from a presentation.
pub fn boundary_matrices(pres: &Presentation, group: &Arc<FiniteGroup>) -> ChainComplex {
    let n1 = pres.gen_count();
    let n2 = pres.rel_count();
    let dd2 = ZgMatrix::from_fn(group, n2, n1, |r, j| fox_derivative(&pres.relators[r], j, group));
    let dd1 = ZgMatrix::from_fn(group, n1, 1, |j, _| {
        let xj = ZgElem::basis(group, group.gen_image(j));
        let e = ZgElem::basis(group, group.id());
        xj.try_sub(&e).unwrap()
    });
    ChainComplex { group: group.clone(), n1, n2, dd2, dd1 }
}

impl ChainComplex {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn gen_count(&self) -> usize {
        self.n1
    }

    pub fn rel_count(&self) -> usize {
        self.n2
    }

    pub fn dd2(&self) -> &ZgMatrix {
        &self.dd2
    }

    pub fn dd1(&self) -> &ZgMatrix {
        &self.dd1
    }

    /// Integer matrix of the second boundary on the right-module
    /// coordinates: `|G|*n1` rows, `|G|*n2` columns.
    pub fn boundary2_int(&self) -> IntMatrix {
        self.dd2.conj_transpose().expand_to_integer_matrix()
    }

    /// Integer matrix of the first boundary: `|G|` rows, `|G|*n1` columns.
    pub fn boundary1_int(&self) -> IntMatrix {
        self.dd1.conj_transpose().expand_to_integer_matrix()
    }

    /// Rank the second homotopy module must have:
    /// `|G| * (n2 - n1 + 1) - 1`.
    pub fn expected_pi2_rank(&self) -> usize {
        let n = self.group.order();
        n * (self.n2 + 1 - self.n1) - 1
    }

    /// Exactness certificate for the complex of the universal cover:
    /// the composite boundary vanishes over ZG, first homology vanishes
    /// integrally, and the kernel of the second boundary has the forced rank.
    pub fn verify_exactness(&self) -> ExactnessCertificate {
        let composite = self.dd2.mul(&self.dd1);
        let zero_composite = Certificate::of(
            "composite boundary dd2 * dd1 vanishes over ZG",
            composite.is_zero(),
            format!("composite = {:?}", composite),
        );

        let b2 = self.boundary2_int();
        let b1 = self.boundary1_int();
        let k1 = kernel_basis(&b1);
        let h1_ok = same_column_lattice(&k1, &b2);
        let h1_vanishes = Certificate::of(
            "kernel of d1 equals image of d2 (H1 of the cover is zero)",
            h1_ok,
            format!("ker rank {}, image rank {}", k1.cols(), {
                crate::matrix::column_lattice_basis(&b2).cols()
            }),
        );

        let pi2_rank_got = kernel_basis(&b2).cols();
        let pi2_rank = Certificate::of(
            format!("rank of ker(d2) equals |G|(n2-n1+1)-1 = {}", self.expected_pi2_rank()),
            pi2_rank_got == self.expected_pi2_rank(),
            format!("computed rank {pi2_rank_got}"),
        );

        let passed = zero_composite.passed && h1_vanishes.passed && pi2_rank.passed;
        ExactnessCertificate { zero_composite, h1_vanishes, pi2_rank, passed }
    }

    /// The second homotopy module: kernel of the second boundary as a
    /// lattice with its induced action, plus the inclusion into `ZG^{n2}`.
    pub fn pi2(&self) -> (ZgLattice, LatticeHom) {
        let ambient = ZgLattice::free(&self.group, self.n2);
        kernel_lattice(&self.boundary2_int(), &ambient)
            .expect("kernel of an expanded ZG-matrix is always G-stable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessCertificate {
    pub zero_composite: Certificate,
    pub h1_vanishes: Certificate,
    pub pi2_rank: Certificate,
    pub passed: bool,
}
