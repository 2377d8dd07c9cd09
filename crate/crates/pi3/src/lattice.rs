//! Lattices over ZG: finitely generated free Z-modules with a right G-action
//! by unimodular integer matrices.
//!
//! A lattice stores one action matrix per group element, indexed by the
//! element numbering of its [`FiniteGroup`].  With `coords(v * g) =
//! action(g) * coords(v)` the table satisfies `action(g*h) =
//! action(h) * action(g)`; constructors either verify this from generator
//! data or inherit it from functorial builds.
//!
//! Homomorphisms are plain integer matrices; equivariance and invertibility
//! are checked, never assumed, and [`verify_hom`] packages the outcome as a
//! certificate.

use crate::group::ring::same_group;
use crate::group::FiniteGroup;
use crate::group::ZgElem;
use crate::matrix::{kernel_basis, IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("expected {expected} generator actions, got {got}")]
    WrongGeneratorCount { expected: usize, got: usize },
    #[error("generator {generator} action has shape {rows}x{cols}, expected {rank}x{rank}")]
    BadShape { generator: usize, rows: usize, cols: usize, rank: usize },
    #[error("generator {generator} action is not invertible over the integers")]
    NotUnimodular { generator: usize },
    #[error("generator actions do not extend to a group action (element {element}, generator {generator})")]
    NotAnAction { element: usize, generator: usize },
    #[error("kernel is not closed under the action of generator {generator}")]
    KernelNotStable { generator: usize },
    #[error("lattices live over different groups")]
    GroupMismatch,
    #[error("serialization failed: {0}")]
    Serialization(String),
}

/// A right ZG-lattice.  Cheap to clone.
#[derive(Clone)]
pub struct ZgLattice {
    inner: Arc<LatticeInner>,
}

struct LatticeInner {
    group: Arc<FiniteGroup>,
    rank: usize,
    actions: Vec<IntMatrix>,
}

impl PartialEq for ZgLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (same_group(&self.inner.group, &other.inner.group)
                && self.inner.rank == other.inner.rank
                && self.inner.actions == other.inner.actions)
    }
}

impl Eq for ZgLattice {}

impl std::fmt::Debug for ZgLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZgLattice(rank {}, group order {})", self.rank(), self.group().order())
    }
}

impl ZgLattice {
    /// Builds a lattice from one action matrix per generator, verifying that
    /// the data extends to a genuine action: each matrix is unimodular and
    /// the breadth-first extension over the whole group is consistent.
    pub fn from_generator_actions(
        group: &Arc<FiniteGroup>,
        rank: usize,
        gen_actions: Vec<IntMatrix>,
    ) -> Result<Self, LatticeError> {
        let m = group.gen_count();
        if gen_actions.len() != m {
            return Err(LatticeError::WrongGeneratorCount { expected: m, got: gen_actions.len() });
        }
        for (j, a) in gen_actions.iter().enumerate() {
            if a.rows() != rank || a.cols() != rank {
                return Err(LatticeError::BadShape {
                    generator: j,
                    rows: a.rows(),
                    cols: a.cols(),
                    rank,
                });
            }
            if !a.det().abs().is_one() {
                return Err(LatticeError::NotUnimodular { generator: j });
            }
        }
        // Extend breadth-first along representative words.
        let n = group.order();
        let mut actions = vec![IntMatrix::zeros(0, 0); n];
        actions[group.id()] = IntMatrix::identity(rank);
        for g in 1..n {
            let w = group.word(g);
            let (prefix, last) = (&w[..w.len() - 1], w[w.len() - 1]);
            let mut parent = group.id();
            for &j in prefix {
                parent = group.mul(parent, group.gen_image(j));
            }
            actions[g] = gen_actions[last].mul(&actions[parent]);
        }
        // Consistency of the full table: action(g * x_j) = action(x_j) * action(g).
        for g in 0..n {
            for j in 0..m {
                let gx = group.mul(g, group.gen_image(j));
                if actions[gx] != gen_actions[j].mul(&actions[g]) {
                    return Err(LatticeError::NotAnAction { element: g, generator: j });
                }
            }
        }
        Ok(ZgLattice {
            inner: Arc::new(LatticeInner { group: group.clone(), rank, actions }),
        })
    }

    /// Builds a lattice from a full element-action table that is known
    /// consistent by construction (direct sums, tensors, symmetric squares of
    /// existing lattices).  Only the identity action is asserted.
    pub(crate) fn from_element_actions(
        group: &Arc<FiniteGroup>,
        rank: usize,
        actions: Vec<IntMatrix>,
    ) -> Self {
        assert_eq!(actions.len(), group.order());
        assert!(actions[group.id()].is_identity(), "identity must act as the identity matrix");
        assert!(actions.iter().all(|a| a.rows() == rank && a.cols() == rank));
        ZgLattice { inner: Arc::new(LatticeInner { group: group.clone(), rank, actions }) }
    }

    /// Free lattice `ZG^k` with basis (copy, group element), copy-major.
    /// The action is the right-regular permutation on each copy.
    pub fn free(group: &Arc<FiniteGroup>, k: usize) -> Self {
        let n = group.order();
        let actions = group
            .elements()
            .map(|g| {
                let r = right_regular_matrix(group, g);
                IntMatrix::block_diag(&vec![r; k])
            })
            .collect();
        ZgLattice { inner: Arc::new(LatticeInner { group: group.clone(), rank: n * k, actions }) }
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        let actions = group.elements().map(|_| IntMatrix::zeros(0, 0)).collect();
        ZgLattice { inner: Arc::new(LatticeInner { group: group.clone(), rank: 0, actions }) }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.inner.group
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.inner.actions[g]
    }

    pub fn gen_action(&self, j: usize) -> &IntMatrix {
        &self.inner.actions[self.inner.group.gen_image(j)]
    }

    /// Coordinates of `v * g`.
    pub fn apply(&self, g: usize, v: &[BigInt]) -> Vec<BigInt> {
        self.action(g).mul_vec(v)
    }

    /// Coordinates of `v * a` for a group ring element `a`.
    pub fn apply_ring(&self, a: &ZgElem, v: &[BigInt]) -> Vec<BigInt> {
        assert!(same_group(self.group(), a.group()), "ring element over a different group");
        let mut out = vec![BigInt::zero(); self.rank()];
        for (g, c) in a.terms() {
            let t = self.apply(g, v);
            for (o, x) in out.iter_mut().zip(t) {
                *o += c * x;
            }
        }
        out
    }

    /// Matrix of the action of the full group sum.
    pub fn sigma_action(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank(), self.rank());
        for g in self.group().elements() {
            m = m.add(self.action(g));
        }
        m
    }

    pub fn character(&self) -> CharacterVector {
        let values = self
            .group()
            .elements()
            .map(|g| {
                let a = self.action(g);
                let mut t = BigInt::zero();
                for i in 0..a.rows() {
                    t += a.get(i, i);
                }
                t
            })
            .collect();
        CharacterVector { group: self.group().clone(), values }
    }

    /// Direct sum with the injection of each part.
    pub fn direct_sum(parts: &[ZgLattice]) -> (ZgLattice, Vec<LatticeHom>) {
        assert!(!parts.is_empty(), "direct sum of no parts needs a group");
        let group = parts[0].group().clone();
        assert!(
            parts.iter().all(|p| same_group(p.group(), &group)),
            "direct sum parts over different groups"
        );
        let rank: usize = parts.iter().map(|p| p.rank()).sum();
        let actions: Vec<IntMatrix> = group
            .elements()
            .map(|g| {
                IntMatrix::block_diag(&parts.iter().map(|p| p.action(g).clone()).collect::<Vec<_>>())
            })
            .collect();
        let sum = ZgLattice::from_element_actions(&group, rank, actions);
        let mut offset = 0;
        let injections = parts
            .iter()
            .map(|p| {
                let m = IntMatrix::from_fn(rank, p.rank(), |r, c| {
                    if r == offset + c {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                });
                offset += p.rank();
                LatticeHom::new(p.clone(), sum.clone(), m)
            })
            .collect();
        (sum, injections)
    }

    /// Tensor product over Z with the diagonal action; basis ordered
    /// row-major in (left index, right index).
    pub fn tensor(a: &ZgLattice, b: &ZgLattice) -> ZgLattice {
        assert!(same_group(a.group(), b.group()), "tensor factors over different groups");
        let group = a.group().clone();
        let actions = group
            .elements()
            .map(|g| a.action(g).kronecker(b.action(g)))
            .collect();
        ZgLattice::from_element_actions(&group, a.rank() * b.rank(), actions)
    }

    /// JSON image: rank, group order, and the generator action matrices.
    pub fn to_json(&self) -> Result<LatticeJson, LatticeError> {
        let to_i64 = |m: &IntMatrix| -> Result<Vec<i64>, LatticeError> {
            let mut v = Vec::with_capacity(m.rows() * m.cols());
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let x = m.get(r, c);
                    v.push(i64::try_from(x).map_err(|_| {
                        LatticeError::Serialization(format!("entry {x} does not fit in i64"))
                    })?);
                }
            }
            Ok(v)
        };
        Ok(LatticeJson {
            rank: self.rank(),
            group_order: self.group().order(),
            generator_actions: (0..self.group().gen_count())
                .map(|j| to_i64(self.gen_action(j)))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Rebuilds a lattice from its JSON image over the given group,
    /// re-verifying the action data.
    pub fn from_json(group: &Arc<FiniteGroup>, json: &LatticeJson) -> Result<Self, LatticeError> {
        if json.group_order != group.order() {
            return Err(LatticeError::Serialization(format!(
                "group order mismatch: document says {}, group has {}",
                json.group_order,
                group.order()
            )));
        }
        if json.generator_actions.len() != group.gen_count() {
            return Err(LatticeError::Serialization(format!(
                "expected {} generator actions, document has {}",
                group.gen_count(),
                json.generator_actions.len()
            )));
        }
        let rank = json.rank;
        let gen_actions = json
            .generator_actions
            .iter()
            .map(|flat| {
                if flat.len() != rank * rank {
                    return Err(LatticeError::Serialization(format!(
                        "action matrix has {} entries, expected {}",
                        flat.len(),
                        rank * rank
                    )));
                }
                Ok(IntMatrix::from_fn(rank, rank, |r, c| BigInt::from(flat[r * rank + c])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_generator_actions(group, rank, gen_actions)
    }
}

/// Permutation matrix of right multiplication by `g` on the element basis.
pub fn right_regular_matrix(group: &Arc<FiniteGroup>, g: usize) -> IntMatrix {
    let n = group.order();
    IntMatrix::from_fn(n, n, |r, c| {
        if group.mul(c, g) == r {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// Serialized form of a lattice.  Round-trips bit-exactly through
/// [`ZgLattice::to_json`] / [`ZgLattice::from_json`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    pub group_order: usize,
    pub generator_actions: Vec<Vec<i64>>,
}

/// Z-linear map between lattices, as a (target rank) x (source rank) matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeHom {
    source: ZgLattice,
    target: ZgLattice,
    matrix: IntMatrix,
}

impl std::fmt::Debug for LatticeHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatticeHom({} -> {})", self.source.rank(), self.target.rank())
    }
}

impl LatticeHom {
    pub fn new(source: ZgLattice, target: ZgLattice, matrix: IntMatrix) -> Self {
        assert!(same_group(source.group(), target.group()), "hom across different groups");
        assert_eq!(matrix.rows(), target.rank(), "hom matrix row count");
        assert_eq!(matrix.cols(), source.rank(), "hom matrix column count");
        LatticeHom { source, target, matrix }
    }

    pub fn identity(l: &ZgLattice) -> Self {
        Self::new(l.clone(), l.clone(), IntMatrix::identity(l.rank()))
    }

    pub fn source(&self) -> &ZgLattice {
        &self.source
    }

    pub fn target(&self) -> &ZgLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// `self` after `inner`: the composite `self . inner`.
    pub fn compose(&self, inner: &LatticeHom) -> LatticeHom {
        assert!(inner.target == self.source, "composition mismatch");
        LatticeHom::new(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix))
    }

    /// First generator whose action the matrix fails to intertwine.
    pub fn equivariance_witness(&self) -> Option<usize> {
        (0..self.source.group().gen_count()).find(|&j| {
            self.target.gen_action(j).mul(&self.matrix) != self.matrix.mul(self.source.gen_action(j))
        })
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariance_witness().is_none()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_square() && self.matrix.det().abs().is_one() && self.is_equivariant()
    }

    pub fn verify(&self) -> HomCertificate {
        let failing_generator = self.equivariance_witness();
        let square = self.matrix.is_square();
        let det_abs = if square { Some(self.matrix.det().abs()) } else { None };
        let unimodular = det_abs.as_ref().map(|d| d.is_one()).unwrap_or(false);
        HomCertificate {
            equivariant: failing_generator.is_none(),
            failing_generator,
            square,
            unimodular,
            isomorphism: failing_generator.is_none() && unimodular,
        }
    }

    /// Inverse of an equivariant unimodular hom.
    pub fn inverse(&self) -> Option<LatticeHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let inv = self.matrix.inverse_unimodular()?;
        Some(LatticeHom::new(self.target.clone(), self.source.clone(), inv))
    }
}

/// Equivariance and invertibility report for a hom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCertificate {
    pub equivariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_generator: Option<usize>,
    pub square: bool,
    pub unimodular: bool,
    pub isomorphism: bool,
}

/// Checks a hom and reports the result.  Equivariance over the generators
/// implies equivariance over the whole group.
pub fn verify_hom(h: &LatticeHom) -> HomCertificate {
    h.verify()
}

/// The sublattice `{v : m v = 0}` of `ambient` with its induced action,
/// together with the inclusion.  Fails when `ker m` is not G-stable.
pub fn kernel_lattice(
    m: &IntMatrix,
    ambient: &ZgLattice,
) -> Result<(ZgLattice, LatticeHom), LatticeError> {
    assert_eq!(m.cols(), ambient.rank(), "matrix does not act on the ambient lattice");
    let k = kernel_basis(m);
    let group = ambient.group().clone();
    let kr = RatMatrix::from_fn(k.rows(), k.cols(), |r, c| {
        num_rational::BigRational::from_integer(k.get(r, c).clone())
    });
    let mut gen_actions = Vec::with_capacity(group.gen_count());
    for j in 0..group.gen_count() {
        let image = ambient.gen_action(j).mul(&k);
        let rhs = RatMatrix::from_fn(image.rows(), image.cols(), |r, c| {
            num_rational::BigRational::from_integer(image.get(r, c).clone())
        });
        let x = kr
            .solve(&rhs)
            .and_then(|x| x.to_integer())
            .ok_or(LatticeError::KernelNotStable { generator: j })?;
        if k.mul(&x) != image {
            return Err(LatticeError::KernelNotStable { generator: j });
        }
        gen_actions.push(x);
    }
    let lattice = ZgLattice::from_generator_actions(&group, k.cols(), gen_actions)?;
    let inclusion = LatticeHom::new(lattice.clone(), ambient.clone(), k);
    Ok((lattice, inclusion))
}

/// Character of a lattice: traces of the action matrices, indexed by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterVector {
    group: Arc<FiniteGroup>,
    values: Vec<BigInt>,
}

impl CharacterVector {
    pub fn new(group: &Arc<FiniteGroup>, values: Vec<BigInt>) -> Self {
        assert_eq!(values.len(), group.order());
        CharacterVector { group: group.clone(), values }
    }

    /// Character of `ZG^k`: `k*|G|` at the identity, zero elsewhere.
    pub fn regular(group: &Arc<FiniteGroup>, k: usize) -> Self {
        let mut values = vec![BigInt::zero(); group.order()];
        values[group.id()] = BigInt::from((k * group.order()) as i64);
        CharacterVector { group: group.clone(), values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, g: usize) -> &BigInt {
        &self.values[g]
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        assert!(same_group(&self.group, &other.group));
        CharacterVector {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CharacterVector) -> CharacterVector {
        assert!(same_group(&self.group, &other.group));
        CharacterVector {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> CharacterVector {
        let k = BigInt::from(k);
        CharacterVector {
            group: self.group.clone(),
            values: self.values.iter().map(|a| a * &k).collect(),
        }
    }

    pub fn is_class_function(&self) -> bool {
        self.group
            .conjugacy_classes()
            .iter()
            .all(|class| class.iter().all(|&g| self.values[g] == self.values[class[0]]))
    }
}

/// Z-basis of the space of equivariant integer matrices `source -> target`,
/// found by solving the intertwining equations exactly.
pub fn hom_space_basis(source: &ZgLattice, target: &ZgLattice) -> Vec<IntMatrix> {
    assert!(same_group(source.group(), target.group()));
    let (sr, tr) = (source.rank(), target.rank());
    let unknowns = tr * sr;
    let gens = source.group().gen_count();
    let mut c = IntMatrix::zeros(gens * unknowns, unknowns);
    for j in 0..gens {
        let t = target.gen_action(j);
        let s = source.gen_action(j);
        // Equation (i, jj): sum_k T[i,k] M[k,jj] - sum_l M[i,l] S[l,jj] = 0.
        for i in 0..tr {
            for jj in 0..sr {
                let row = j * unknowns + i * sr + jj;
                for k in 0..tr {
                    if !t.get(i, k).is_zero() {
                        let col = k * sr + jj;
                        let v = c.get(row, col) + t.get(i, k);
                        c.set(row, col, v);
                    }
                }
                for l in 0..sr {
                    if !s.get(l, jj).is_zero() {
                        let col = i * sr + l;
                        let v = c.get(row, col) - s.get(l, jj);
                        c.set(row, col, v);
                    }
                }
            }
        }
    }
    let k = kernel_basis(&c);
    (0..k.cols())
        .map(|b| IntMatrix::from_fn(tr, sr, |r, cc| k.get(r * sr + cc, b).clone()))
        .collect()
}

/// Z-basis of the equivariant maps into a free lattice `ZG^copies`, by the
/// closed form: a basis element per (copy, source coordinate), sending `v`
/// to `sum_g (v * g^-1)_r g` in the chosen copy.
pub fn hom_space_basis_to_free(source: &ZgLattice, copies: usize) -> Vec<IntMatrix> {
    let group = source.group().clone();
    let n = group.order();
    let tr = n * copies;
    let mut out = Vec::with_capacity(copies * source.rank());
    for copy in 0..copies {
        for r in 0..source.rank() {
            let mut m = IntMatrix::zeros(tr, source.rank());
            for h in group.elements() {
                let a = source.action(group.inv(h));
                for col in 0..source.rank() {
                    m.set(copy * n + h, col, a.get(r, col).clone());
                }
            }
            out.push(m);
        }
    }
    out
}

/// Deterministic search for an equivariant unimodular iso `source -> target`.
///
/// Solves for the equivariant hom space, then looks for an integer
/// combination with determinant of absolute value one: small boxes first,
/// then seeded pseudo-random combinations.  Returns `None` when the ranks
/// differ or no witness is found within the budget.
pub fn find_equivariant_iso(source: &ZgLattice, target: &ZgLattice) -> Option<LatticeHom> {
    if source.rank() != target.rank() {
        return None;
    }
    let basis = hom_space_basis(source, target);
    if basis.is_empty() {
        return if source.rank() == 0 {
            Some(LatticeHom::new(source.clone(), target.clone(), IntMatrix::zeros(0, 0)))
        } else {
            None
        };
    }
    let d = basis.len();
    let eval = |coeffs: &[i64]| -> IntMatrix {
        let mut m = IntMatrix::zeros(target.rank(), source.rank());
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0 {
                m = m.add(&b.scale(&BigInt::from(c)));
            }
        }
        m
    };
    let check = |m: IntMatrix| -> Option<LatticeHom> {
        if m.det().abs().is_one() {
            Some(LatticeHom::new(source.clone(), target.clone(), m))
        } else {
            None
        }
    };
    // Exhaustive box search for small hom spaces.
    if d <= 10 {
        let mut coeffs = vec![-1i64; d];
        loop {
            if coeffs.iter().any(|&c| c != 0) {
                if let Some(h) = check(eval(&coeffs)) {
                    return Some(h);
                }
            }
            let mut i = 0;
            loop {
                if i == d {
                    coeffs.clear();
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] <= 1 {
                    break;
                }
                coeffs[i] = -1;
                i += 1;
            }
            if coeffs.is_empty() {
                break;
            }
        }
    }
    // Seeded xorshift fallback over a wider range.
    let mut state = 0x243F_6A88_85A3_08D3u64 ^ ((d as u64) << 32) ^ source.rank() as u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..20_000 {
        let coeffs: Vec<i64> = (0..d).map(|_| (next() % 7) as i64 - 3).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        if let Some(h) = check(eval(&coeffs)) {
            return Some(h);
        }
    }
    None
}
