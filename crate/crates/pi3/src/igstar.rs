//! The augmentation quotient `IG* = ZG / Z*Sigma` and the half-lattice
//! model of the third homotopy module.
//!
//! The chain of identifications implemented and certified here:
//!
//! * `delta: ZG -> IG*` kills the norm element `Sigma`;
//! * its symmetric square `delta': S2(ZG) -> S2(IG*)` is onto, and its
//!   kernel is the ZG-span of `u = e (x) Sigma + Sigma (x) e` together with
//!   `Sigma (x) Sigma = u*Sigma/2`;
//! * quotienting the decomposition `S2(ZG) = ZG (+) M` by those relations
//!   identifies `S2(IG*)` with the overlattice `M[u_M/2]` generated by `M`
//!   and half of a distinguished vector `u_M`.
//!
//! When a certified isomorphism from the second homotopy module onto `IG*`
//! is supplied, the pipeline produces an explicit equivariant unimodular
//! isomorphism from the third homotopy module onto `M[u_M/2]`.

use crate::cert::Certificate;
use crate::decomp::{coset_transversal, involution_ideal, involution_pairs, sym_square_zg_iso};
use crate::group::ring::sigma;
use crate::group::{FiniteGroup, ZgElem};
use crate::lattice::{HomCertificate, LatticeHom, ZgLattice};
use crate::matrix::{
    column_lattice_basis, kernel_basis, smith_normal_form, solve_integer, solve_integer_with_snf,
    IntMatrix, RatMatrix, Snf,
};
use crate::symsq::{sym_square, sym_square_hom, SymSquare};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IgError {
    #[error("half vector has {got} coordinates, the base lattice has rank {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("adjoined vector is already halvable inside the base lattice (index {index})")]
    DegenerateAdjoin { index: BigInt },
}

/// The quotient of the regular lattice by the norm element, with the
/// quotient map and its equivariance certificate.
#[derive(Clone, Debug)]
pub struct IgStar {
    pub lattice: ZgLattice,
    pub quotient: LatticeHom,
    pub quotient_certificate: HomCertificate,
}

/// `ZG / Z*Sigma`, of rank `n - 1`, with basis the images of the elements
/// `g != e`.  The image of `e` is minus the sum of the other images.
pub fn ig_star(group: &Arc<FiniteGroup>) -> IgStar {
    let n = group.order();
    let rank = n - 1;
    // Image of basis element g: column g of the quotient matrix.
    let mut q = IntMatrix::zeros(rank, n);
    for g in 1..n {
        q.set(g - 1, g, BigInt::one());
    }
    for r in 0..rank {
        q.set(r, 0, BigInt::from(-1));
    }
    let actions: Vec<IntMatrix> = group
        .elements()
        .map(|h| {
            let mut m = IntMatrix::zeros(rank, rank);
            for g in 1..n {
                let gh = group.mul(g, h);
                if gh == group.id() {
                    for r in 0..rank {
                        m.set(r, g - 1, BigInt::from(-1));
                    }
                } else {
                    m.set(gh - 1, g - 1, BigInt::one());
                }
            }
            m
        })
        .collect();
    let lattice = ZgLattice::from_element_actions(group, rank, actions);
    let quotient = LatticeHom::new(ZgLattice::free(group, 1), lattice.clone(), q);
    let quotient_certificate = quotient.verify();
    IgStar { lattice, quotient, quotient_certificate }
}

/// The symmetric square of the quotient map, with a Smith-form proof that
/// it stays surjective.
#[derive(Clone, Debug)]
pub struct DeltaPrime {
    pub source: SymSquare,
    pub target: SymSquare,
    pub map: LatticeHom,
    pub snf: Snf,
    pub surjective: Certificate,
}

pub fn delta_prime(group: &Arc<FiniteGroup>) -> DeltaPrime {
    let ig = ig_star(group);
    let source = sym_square(&ZgLattice::free(group, 1));
    let target = sym_square(&ig.lattice);
    let map = sym_square_hom(&ig.quotient, &source, &target);
    let snf = smith_normal_form(map.matrix());
    let factors = snf.invariant_factors();
    let onto = factors.len() == target.rank() && factors.iter().all(|f| f.is_one());
    let surjective = Certificate::of(
        "symmetric square of the quotient map is surjective",
        onto,
        format!("invariant factors {factors:?}, target rank {}", target.rank()),
    );
    DeltaPrime { source, target, map, snf, surjective }
}

/// The distinguished kernel generator `u = e (x) Sigma + Sigma (x) e` in
/// symmetric coordinates: twice the diagonal at `e` plus every pair at `e`.
pub fn u_vector(s2zg: &SymSquare) -> Vec<BigInt> {
    let n = s2zg.base().rank();
    let ones = vec![BigInt::one(); n];
    let mut e0 = vec![BigInt::zero(); n];
    e0[0] = BigInt::one();
    s2zg.whitehead_pairing(&ones, &e0)
}

/// `Sigma (x) Sigma` in symmetric coordinates: the all-ones vector.
pub fn sigma_square_vector(s2zg: &SymSquare) -> Vec<BigInt> {
    let n = s2zg.base().rank();
    s2zg.q_map(&vec![BigInt::one(); n])
}

/// Certified computation of `ker delta'` and comparison against the span
/// of the translates of `u` together with `Sigma (x) Sigma`.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub kernel: IntMatrix,
    pub rank_is_order: Certificate,
    pub span_equal: Certificate,
    pub passed: bool,
}

pub fn kernel_delta_prime_check(group: &Arc<FiniteGroup>) -> KernelReport {
    kernel_check_with(&delta_prime(group))
}

pub(crate) fn kernel_check_with(dp: &DeltaPrime) -> KernelReport {
    let group = dp.source.base().group().clone();
    let n = group.order();
    let kernel = kernel_basis(dp.map.matrix());
    let rank_is_order = Certificate::of(
        format!("kernel of the symmetric quotient map has rank {n}"),
        kernel.cols() == n,
        format!("computed rank {}", kernel.cols()),
    );

    let u = u_vector(&dp.source);
    let rank = dp.source.rank();
    let mut span = IntMatrix::zeros(rank, n + 1);
    for g in group.elements() {
        let ug = dp.source.lattice().action(g).mul_vec(&u);
        for (r, v) in ug.into_iter().enumerate() {
            span.set(r, g, v);
        }
    }
    for (r, v) in sigma_square_vector(&dp.source).into_iter().enumerate() {
        span.set(r, n, v);
    }

    // Two-sided containment, naming an offending column on failure.
    let witness = |a: &IntMatrix, b: &IntMatrix, dir: &str| -> Option<String> {
        (0..b.cols()).find_map(|c| {
            let col = IntMatrix::from_fn(b.rows(), 1, |r, _| b.get(r, c).clone());
            solve_integer(a, &col).is_none().then(|| format!("column {c} {dir}"))
        })
    };
    let bad = witness(&span, &kernel, "of the kernel lies outside the stated span")
        .or_else(|| witness(&kernel, &span, "of the stated span lies outside the kernel"));
    let span_equal = Certificate::of(
        "kernel equals the span of the norm pairings and their translates",
        bad.is_none(),
        bad.unwrap_or_default(),
    );
    let passed = rank_is_order.passed && span_equal.passed;
    KernelReport { kernel, rank_is_order, span_equal, passed }
}

/// One summand of the complement lattice `M`: a free copy of `ZG` tagged by
/// a pair representative, or an involution ideal tagged by the involution.
#[derive(Clone, Debug)]
pub struct MBlock {
    pub element: usize,
    pub free: bool,
    pub offset: usize,
    pub size: usize,
    /// Coset representatives for ideal blocks, empty for free blocks.
    pub reps: Vec<usize>,
}

/// The complement of the diagonal family in the decomposition of `S2(ZG)`,
/// together with the canonical vector whose half generates the model.
#[derive(Clone, Debug)]
pub struct MLattice {
    pub lattice: ZgLattice,
    pub blocks: Vec<MBlock>,
    pub u_m: Vec<BigInt>,
}

pub fn m_lattice(group: &Arc<FiniteGroup>) -> MLattice {
    let n = group.order();
    let inv = involution_pairs(group);
    let mut parts = Vec::new();
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for &g in &inv.s {
        parts.push(ZgLattice::free(group, 1));
        blocks.push(MBlock { element: g, free: true, offset, size: n, reps: Vec::new() });
        offset += n;
    }
    for &t in &inv.t {
        let (ideal, reps) = involution_ideal(group, t);
        let size = reps.len();
        parts.push(ideal);
        blocks.push(MBlock { element: t, free: false, offset, size, reps });
        offset += size;
    }
    let lattice = if parts.is_empty() {
        ZgLattice::zero(group)
    } else {
        ZgLattice::direct_sum(&parts).0
    };
    // u_M = -( sum over pair reps g of e_g(1 + g^-1)  +  sum over t of e_t ).
    let mut u_m = vec![BigInt::zero(); lattice.rank()];
    for b in &blocks {
        if b.free {
            u_m[b.offset] = BigInt::from(-1);
            u_m[b.offset + group.inv(b.element)] += &BigInt::from(-1);
        } else {
            u_m[b.offset] = BigInt::from(-1);
        }
    }
    MLattice { lattice, blocks, u_m }
}

/// The lattice generated by a base lattice and half of one of its vectors,
/// closed under the group action.  `basis_in_ambient` expresses the result
/// basis over the base basis; `base_in_result` is the integral inclusion.
#[derive(Clone, Debug)]
pub struct AdjoinedLattice {
    pub base: ZgLattice,
    pub result: ZgLattice,
    pub basis_in_ambient: RatMatrix,
    pub base_in_result: IntMatrix,
    pub half_vector_in_result: Vec<BigInt>,
    pub index: BigInt,
}

/// Builds `base + ZG * (u/2)` inside `base (x) Q`.  Fails when the result
/// is the base itself (nothing was adjoined).
pub fn half_overlattice(base: &ZgLattice, u: &[BigInt]) -> Result<AdjoinedLattice, IgError> {
    let group = base.group().clone();
    let m = base.rank();
    if u.len() != m {
        return Err(IgError::WrongLength { expected: m, got: u.len() });
    }
    if m == 0 {
        return Err(IgError::DegenerateAdjoin { index: BigInt::one() });
    }
    // Column lattice of [2I | u*g for all g], i.e. twice the result.
    let n = group.order();
    let mut cols = IntMatrix::zeros(m, m + n);
    for i in 0..m {
        cols.set(i, i, BigInt::from(2));
    }
    for g in group.elements() {
        let ug = base.action(g).mul_vec(u);
        for (r, v) in ug.into_iter().enumerate() {
            cols.set(r, m + g, v);
        }
    }
    let b = column_lattice_basis(&cols);
    assert_eq!(b.cols(), m, "doubled basis keeps full rank");
    let b_inv = b.to_rational().inverse().expect("full-rank basis");

    let gen_actions: Vec<IntMatrix> = (0..group.gen_count())
        .map(|j| {
            b_inv
                .mul(&base.gen_action(j).to_rational())
                .mul(&b.to_rational())
                .to_integer()
                .expect("adjoined lattice is closed under the action")
        })
        .collect();
    let result = ZgLattice::from_generator_actions(&group, m, gen_actions)
        .expect("induced action is a valid unimodular action");

    let base_in_result = b_inv
        .scale(&BigRational::from_integer(BigInt::from(2)))
        .to_integer()
        .expect("base embeds integrally");
    let index = base_in_result.det().abs();
    if index.is_one() {
        return Err(IgError::DegenerateAdjoin { index });
    }
    let half_vector_in_result = {
        let uc = IntMatrix::from_fn(m, 1, |r, _| u[r].clone());
        let y = b_inv.mul(&uc.to_rational()).to_integer().expect("half vector lies in the result");
        (0..m).map(|r| y.get(r, 0).clone()).collect()
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let basis_in_ambient = b.to_rational().scale(&half);
    Ok(AdjoinedLattice {
        base: base.clone(),
        result,
        basis_in_ambient,
        base_in_result,
        half_vector_in_result,
        index,
    })
}

/// An adjoined lattice together with the two exact relations that make its
/// half vector a valid replacement for the diagonal generator.
#[derive(Clone, Debug)]
pub struct CertifiedAdjoin {
    pub adjoined: AdjoinedLattice,
    pub doubling: Certificate,
    pub sigma_relation: Certificate,
    pub index_power_of_two: Certificate,
    pub passed: bool,
}

/// Adjoins `u_m/2` to `M` and verifies the relations the diagonal generator
/// satisfies: its double is the stated block combination, and its image
/// under the norm element matches the transversal formula.
pub fn adjoin_half(m: &MLattice, u_m: &[BigInt]) -> Result<CertifiedAdjoin, IgError> {
    let group = m.lattice.group().clone();
    let adjoined = half_overlattice(&m.lattice, u_m)?;

    let doubling = Certificate::of(
        "adjoined vector doubles to the canonical block combination",
        u_m == m.u_m.as_slice(),
        format!("supplied {u_m:?}, canonical {:?}", m.u_m),
    );

    // (u_M/2) * Sigma  =  -( sum_g e_g*Sigma + sum_t e_t*S_t ),
    // verified as  u_M * Sigma = 2 * rhs  to stay in integers.
    let lhs = m.lattice.sigma_action().mul_vec(u_m);
    let mut rhs = vec![BigInt::zero(); m.lattice.rank()];
    for b in &m.blocks {
        let mut basis = vec![BigInt::zero(); m.lattice.rank()];
        basis[b.offset] = BigInt::one();
        let mult: ZgElem = if b.free {
            sigma(&group)
        } else {
            coset_transversal(&group, b.element)
        };
        let image = m.lattice.apply_ring(&mult, &basis);
        for (r, v) in image.into_iter().enumerate() {
            rhs[r] -= &v;
        }
    }
    let ok = lhs
        .iter()
        .zip(rhs.iter())
        .all(|(l, r)| l == &(r * BigInt::from(2)));
    let sigma_relation = Certificate::of(
        "norm relation for the adjoined vector holds exactly",
        ok,
        format!("u_M * Sigma = {lhs:?}, block formula doubled = {:?}", rhs),
    );

    let mut idx = adjoined.index.clone();
    while (&idx % BigInt::from(2)).is_zero() {
        idx /= BigInt::from(2);
    }
    let index_power_of_two = Certificate::of(
        "base sits inside the adjoined lattice with 2-power index",
        idx.is_one(),
        format!("index {}", adjoined.index),
    );

    let passed = doubling.passed && sigma_relation.passed && index_power_of_two.passed;
    Ok(CertifiedAdjoin { adjoined, doubling, sigma_relation, index_power_of_two, passed })
}

/// Outcome of the half-lattice model pipeline.
#[derive(Clone, Debug)]
pub struct ModelReport {
    /// FULL when an isomorphism onto the quotient was supplied and pushed
    /// through the whole pipeline, NECESSARY-ONLY for the character check.
    pub mode: &'static str,
    pub stages: Vec<Certificate>,
    pub model: Option<CertifiedAdjoin>,
    /// The explicit isomorphism from the symmetric square of the input onto
    /// the model lattice, in FULL mode.
    pub composite: Option<LatticeHom>,
    pub passed: bool,
}

impl ModelReport {
    fn finish(mut self) -> Self {
        self.passed = self.stages.iter().all(|c| c.passed);
        self
    }
}

/// Certifies the half-lattice model of the third homotopy module.  With a
/// supplied isomorphism `pi2 -> IG*` the result is an explicit equivariant
/// unimodular isomorphism `S2(pi2) -> M[u_M/2]`; without one, only the
/// character-level necessary condition is checked.
pub fn verify_half_lattice_model(
    pi2: &ZgLattice,
    iso: Option<&LatticeHom>,
    group: &Arc<FiniteGroup>,
) -> ModelReport {
    let mut report =
        ModelReport { mode: "FULL", stages: Vec::new(), model: None, composite: None, passed: false };

    if group.order() == 1 {
        report.stages.push(Certificate::of(
            "trivial group has a vanishing model",
            pi2.rank() == 0,
            format!("second homotopy rank {}", pi2.rank()),
        ));
        return report.finish();
    }

    let ig = ig_star(group);
    let Some(phi) = iso else {
        report.mode = "NECESSARY-ONLY";
        let (cp, ci) = (pi2.character(), ig.lattice.character());
        let w = group.elements().find(|&g| cp.get(g) != ci.get(g));
        report.stages.push(Certificate::of(
            "second homotopy module has the character of the augmentation quotient",
            w.is_none(),
            w.map(|g| format!("characters differ at {}", group.element_name(g))).unwrap_or_default(),
        ));
        let ml = m_lattice(group);
        match adjoin_half(&ml, &ml.u_m.clone()) {
            Ok(adj) => {
                let cs = sym_square(pi2).lattice().character();
                let cm = adj.adjoined.result.character();
                let w = group.elements().find(|&g| cs.get(g) != cm.get(g));
                report.stages.push(Certificate::of(
                    "third homotopy module has the character of the half-lattice model",
                    w.is_none(),
                    w.map(|g| format!("characters differ at {}", group.element_name(g)))
                        .unwrap_or_default(),
                ));
                report.model = Some(adj);
            }
            Err(e) => report
                .stages
                .push(Certificate::fail("half-lattice model construction", e.to_string())),
        }
        return report.finish();
    };

    // Stage 1: the supplied identification of pi2 with IG*.
    let shapes_ok = phi.source() == pi2 && phi.target() == &ig.lattice;
    let cert = phi.verify();
    report.stages.push(Certificate::of(
        "supplied map is an equivariant unimodular isomorphism onto the quotient",
        shapes_ok && cert.isomorphism,
        format!("shapes match: {shapes_ok}, {cert:?}"),
    ));
    if !report.stages.last().unwrap().passed {
        return report.finish();
    }

    // Stage 2: its symmetric square.
    let s2pi2 = sym_square(pi2);
    let s2ig = sym_square(&ig.lattice);
    let s2phi = sym_square_hom(phi, &s2pi2, &s2ig);
    let cert = s2phi.verify();
    report.stages.push(Certificate::of(
        "symmetric square of the isomorphism is an isomorphism",
        cert.isomorphism,
        format!("{cert:?}"),
    ));

    // Stage 3: surjectivity of the symmetric quotient map and its kernel.
    let dp = delta_prime(group);
    report.stages.push(dp.surjective.clone());
    let kr = kernel_check_with(&dp);
    report.stages.push(kr.rank_is_order.clone());
    report.stages.push(kr.span_equal.clone());

    // Stage 4: the half-lattice model itself.
    let ml = m_lattice(group);
    let adj = match adjoin_half(&ml, &ml.u_m.clone()) {
        Ok(a) => a,
        Err(e) => {
            report
                .stages
                .push(Certificate::fail("half-lattice model construction", e.to_string()));
            return report.finish();
        }
    };
    report.stages.push(adj.doubling.clone());
    report.stages.push(adj.sigma_relation.clone());
    report.stages.push(adj.index_power_of_two.clone());

    // Stage 5: S2(ZG) -> model, sending the diagonal family through the
    // half vector and the complement through the inclusion.
    let zg_dec = sym_square_zg_iso(group);
    let n = group.order();
    let model = &adj.adjoined;
    let mrank = model.result.rank();
    let mut theta = IntMatrix::zeros(mrank, zg_dec.source.rank());
    for col in 0..zg_dec.source.rank() {
        let row = (0..zg_dec.decomposed.rank())
            .find(|&r| zg_dec.iso.matrix().get(r, col).is_one())
            .expect("decomposition is a permutation");
        if row < n {
            let y = model.result.action(row).mul_vec(&model.half_vector_in_result);
            for (r, v) in y.into_iter().enumerate() {
                theta.set(r, col, v);
            }
        } else {
            for r in 0..mrank {
                theta.set(r, col, model.base_in_result.get(r, row - n).clone());
            }
        }
    }
    let annihilated = theta.mul(&kr.kernel).is_zero();
    report.stages.push(Certificate::of(
        "kernel of the symmetric quotient map dies in the model",
        annihilated,
        String::new(),
    ));

    // Stage 6: the induced map S2(IG*) -> model on integral preimages.
    let mut m2 = IntMatrix::zeros(mrank, dp.target.rank());
    let mut preimages_ok = true;
    for w in 0..dp.target.rank() {
        let mut e = IntMatrix::zeros(dp.target.rank(), 1);
        e.set(w, 0, BigInt::one());
        match solve_integer_with_snf(&dp.snf, dp.source.rank(), &e) {
            Some(v) => {
                let img = theta.mul(&v);
                for r in 0..mrank {
                    m2.set(r, w, img.get(r, 0).clone());
                }
            }
            None => preimages_ok = false,
        }
    }
    report.stages.push(Certificate::of(
        "symmetric quotient basis lifts integrally",
        preimages_ok,
        String::new(),
    ));
    let iso2 = LatticeHom::new(s2ig.lattice().clone(), model.result.clone(), m2);
    let cert = iso2.verify();
    report.stages.push(Certificate::of(
        "induced map onto the model is an equivariant unimodular isomorphism",
        cert.isomorphism,
        format!("{cert:?}"),
    ));

    // Stage 7: the composite explicit model isomorphism.
    let composite = iso2.compose(&s2phi);
    let cert = composite.verify();
    report.stages.push(Certificate::of(
        "third homotopy module maps isomorphically onto the half-lattice model",
        cert.isomorphism,
        format!("{cert:?}"),
    ));
    report.model = Some(adj);
    report.composite = Some(composite);
    report.finish()
}

/// Equality of two adjoined lattices presented over the same ambient basis:
/// their doubled Hermite bases coincide.
pub fn adjoined_equal(a: &AdjoinedLattice, b: &AdjoinedLattice) -> bool {
    let two = BigRational::from_integer(BigInt::from(2));
    a.base.rank() == b.base.rank()
        && a.basis_in_ambient.scale(&two).to_integer()
            == b.basis_in_ambient.scale(&two).to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::boundary_matrices;
    use crate::group::{enumerate_group, parse_presentation};
    use crate::lattice::find_equivariant_iso;
    use crate::matrix::same_column_lattice;

    fn group(src: &str) -> Arc<FiniteGroup> {
        Arc::new(enumerate_group(&parse_presentation(src).unwrap(), 100_000).unwrap())
    }

    fn pi2_of(src: &str) -> (Arc<FiniteGroup>, ZgLattice) {
        let p = parse_presentation(src).unwrap();
        let g = Arc::new(enumerate_group(&p, 100_000).unwrap());
        let cc = boundary_matrices(&p, &g);
        let (pi2, _) = cc.pi2();
        (g, pi2)
    }

    #[test]
    fn quotient_lattice_has_corank_one() {
        for src in ["gens: x ; rels: x", "gens: x ; rels: x^3", "gens: x, y ; rels: x^3, y^2, x*y*x*y"] {
            let g = group(src);
            let ig = ig_star(&g);
            assert_eq!(ig.lattice.rank(), g.order() - 1, "{src}");
            assert!(ig.quotient_certificate.equivariant, "{src}");
        }
    }

    #[test]
    fn quotient_character_is_regular_minus_trivial() {
        let g = group("gens: x ; rels: x^3");
        let chi = ig_star(&g).lattice.character();
        assert_eq!(chi.values(), &[BigInt::from(2), BigInt::from(-1), BigInt::from(-1)]);
        let g = group("gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1");
        let chi = ig_star(&g).lattice.character();
        for el in g.elements() {
            let expect = if el == 0 { 7 } else { -1 };
            assert_eq!(chi.get(el), &BigInt::from(expect));
        }
    }

    #[test]
    fn c3_second_homotopy_matches_quotient_character() {
        let (g, pi2) = pi2_of("gens: x ; rels: x^3");
        assert_eq!(pi2.character(), ig_star(&g).lattice.character());
    }

    #[test]
    fn norm_kills_the_quotient() {
        let g = group("gens: x ; rels: x^5");
        let ig = ig_star(&g);
        // Sigma acts as zero on the quotient.
        assert!(ig.lattice.sigma_action().is_zero());
        // The quotient map sends Sigma to zero.
        let ones = IntMatrix::from_fn(g.order(), 1, |_, _| BigInt::one());
        assert!(ig.quotient.matrix().mul(&ones).is_zero());
    }

    #[test]
    fn symmetric_quotient_map_is_onto() {
        for src in [
            "gens: x ; rels: x",
            "gens: x ; rels: x^2",
            "gens: x ; rels: x^3",
            "gens: x ; rels: x^4",
            "gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1",
        ] {
            let g = group(src);
            let dp = delta_prime(&g);
            assert!(dp.surjective.passed, "{src}: {:?}", dp.surjective);
            let n = g.order();
            assert_eq!(dp.source.rank(), n * (n + 1) / 2);
            assert_eq!(dp.target.rank(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn u_times_sigma_is_twice_sigma_square() {
        for src in ["gens: x ; rels: x^3", "gens: x, y ; rels: x^3, y^2, x*y*x*y"] {
            let g = group(src);
            let s2 = sym_square(&ZgLattice::free(&g, 1));
            let u = u_vector(&s2);
            let usigma = s2.lattice().sigma_action().mul_vec(&u);
            let ss = sigma_square_vector(&s2);
            let doubled: Vec<BigInt> = ss.iter().map(|v| v * BigInt::from(2)).collect();
            assert_eq!(usigma, doubled, "{src}");
        }
    }

    #[test]
    fn kernel_matches_the_stated_span() {
        for src in [
            "gens: x ; rels: x^2",
            "gens: x ; rels: x^3",
            "gens: x ; rels: x^4",
            "gens: x, y ; rels: x^3, y^2, x*y*x*y",
            "gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1",
        ] {
            let g = group(src);
            let r = kernel_delta_prime_check(&g);
            assert!(r.passed, "{src}: {:?} {:?}", r.rank_is_order, r.span_equal);
            assert_eq!(r.kernel.cols(), g.order(), "{src}");
        }
    }

    #[test]
    fn complement_lattice_shapes() {
        let g = group("gens: x ; rels: x^3");
        let ml = m_lattice(&g);
        assert_eq!(ml.lattice.rank(), 3);
        assert_eq!(ml.blocks.len(), 1);
        assert!(ml.blocks[0].free);
        // u_M = -e_x(1 + x^2): entries -1 at e and at x^2 of the single block.
        assert_eq!(
            ml.u_m,
            vec![BigInt::from(-1), BigInt::zero(), BigInt::from(-1)]
        );

        let g = group("gens: x ; rels: x^2");
        let ml = m_lattice(&g);
        assert_eq!(ml.lattice.rank(), 1);
        assert!(!ml.blocks[0].free);
        assert_eq!(ml.u_m, vec![BigInt::from(-1)]);

        let g = group("gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1");
        let ml = m_lattice(&g);
        assert_eq!(ml.lattice.rank(), 28);
        let frees = ml.blocks.iter().filter(|b| b.free).count();
        assert_eq!((frees, ml.blocks.len() - frees), (3, 1));
        // One -1 per ideal block, two per free block.
        let minus_ones = ml.u_m.iter().filter(|v| **v == BigInt::from(-1)).count();
        assert_eq!(minus_ones, 7);
    }

    #[test]
    fn adjoining_half_of_one_plus_x_in_c3() {
        let g = group("gens: x ; rels: x^3");
        let free = ZgLattice::free(&g, 1);
        let u = vec![BigInt::one(), BigInt::one(), BigInt::zero()];
        let adj = half_overlattice(&free, &u).unwrap();
        // Translates of (1+x)/2 generate a quotient (Z/2)^2 over ZG.
        assert_eq!(adj.index, BigInt::from(4));
        assert_eq!(adj.result.rank(), 3);
        // The inclusion composed with the result basis is the identity.
        let prod = adj.basis_in_ambient.mul(&adj.base_in_result.to_rational());
        assert!(prod.to_integer().unwrap().is_identity());
        // The unit shift: adjoining (1+x^2)/2 gives the same lattice.
        let u2 = vec![BigInt::one(), BigInt::zero(), BigInt::one()];
        let adj2 = half_overlattice(&free, &u2).unwrap();
        assert!(adjoined_equal(&adj, &adj2));
    }

    #[test]
    fn degenerate_adjunctions_are_rejected() {
        let g = group("gens: x ; rels: x^3");
        let free = ZgLattice::free(&g, 1);
        let err = half_overlattice(&free, &vec![BigInt::zero(); 3]).unwrap_err();
        assert!(matches!(err, IgError::DegenerateAdjoin { .. }));
        let two = vec![BigInt::from(2), BigInt::zero(), BigInt::zero()];
        let err = half_overlattice(&free, &two).unwrap_err();
        assert!(matches!(err, IgError::DegenerateAdjoin { .. }));
        let err = half_overlattice(&free, &[BigInt::one()]).unwrap_err();
        assert!(matches!(err, IgError::WrongLength { .. }));
    }

    #[test]
    fn certified_adjunction_on_c2_has_index_two() {
        let g = group("gens: x ; rels: x^2");
        let ml = m_lattice(&g);
        let adj = adjoin_half(&ml, &ml.u_m.clone()).unwrap();
        assert!(adj.passed, "{:?} {:?}", adj.doubling, adj.sigma_relation);
        assert_eq!(adj.adjoined.index, BigInt::from(2));
    }

    #[test]
    fn certified_adjunction_satisfies_the_norm_relation() {
        for src in [
            "gens: x ; rels: x^3",
            "gens: x ; rels: x^4",
            "gens: x, y ; rels: x^3, y^2, x*y*x*y",
            "gens: x, y ; rels: x^2*y^-2, x*y*x*y^-1",
        ] {
            let g = group(src);
            let ml = m_lattice(&g);
            let adj = adjoin_half(&ml, &ml.u_m.clone()).unwrap();
            assert!(adj.passed, "{src}: {:?}", adj.sigma_relation);
        }
    }

    #[test]
    fn full_model_for_c3_equals_the_shifted_regular_lattice() {
        let (g, pi2) = pi2_of("gens: x ; rels: x^3");
        let ig = ig_star(&g);
        let phi = find_equivariant_iso(&pi2, &ig.lattice).expect("rank-2 iso exists");
        let report = verify_half_lattice_model(&pi2, Some(&phi), &g);
        assert_eq!(report.mode, "FULL");
        assert!(report.passed, "{:#?}", report.stages);
        let model = report.model.unwrap();
        // The model is ZG[(1+x)/2], up to the unit identification.
        let free = ZgLattice::free(&g, 1);
        let named = half_overlattice(&free, &[BigInt::one(), BigInt::one(), BigInt::zero()]).unwrap();
        assert!(adjoined_equal(&model.adjoined, &named));
        assert_eq!(report.composite.unwrap().target().rank(), 3);
    }

    #[test]
    fn necessary_only_mode_checks_characters() {
        let (g, pi2) = pi2_of("gens: x ; rels: x^3");
        let report = verify_half_lattice_model(&pi2, None, &g);
        assert_eq!(report.mode, "NECESSARY-ONLY");
        assert!(report.passed, "{:#?}", report.stages);
    }

    #[test]
    fn non_equivariant_candidate_fails_at_the_first_stage() {
        let (g, pi2) = pi2_of("gens: x ; rels: x^3");
        let ig = ig_star(&g);
        let good = find_equivariant_iso(&pi2, &ig.lattice).unwrap();
        // Perturb single entries until equivariance breaks.
        let bogus = (0..4)
            .find_map(|i| {
                let mut m = good.matrix().clone();
                let v = m.get(i / 2, i % 2) + BigInt::one();
                m.set(i / 2, i % 2, v);
                let h = LatticeHom::new(pi2.clone(), ig.lattice.clone(), m);
                (!h.verify().equivariant).then_some(h)
            })
            .expect("some perturbation breaks equivariance");
        let report = verify_half_lattice_model(&pi2, Some(&bogus), &g);
        assert!(!report.passed);
        assert!(!report.stages[0].passed);
        assert_eq!(report.stages.len(), 1, "pipeline stops at the failed stage");
    }

    #[test]
    fn trivial_group_model_vanishes() {
        let (g, pi2) = pi2_of("gens: x ; rels: x");
        let report = verify_half_lattice_model(&pi2, None, &g);
        assert!(report.passed);
    }

    #[test]
    fn rational_identity_of_characters() {
        // chi of S2(IG*) plus the regular character equals chi of S2(ZG).
        for src in ["gens: x ; rels: x^4", "gens: x, y ; rels: x^3, y^2, x*y*x*y"] {
            let g = group(src);
            let dp = delta_prime(&g);
            let lhs = dp.target.lattice().character().add(&crate::lattice::CharacterVector::regular(&g, 1));
            assert_eq!(lhs, dp.source.lattice().character(), "{src}");
        }
    }

    #[test]
    fn model_lattice_doubles_into_the_base() {
        let g = group("gens: x, y ; rels: x^3, y^2, x*y*x*y");
        let ml = m_lattice(&g);
        let adj = adjoin_half(&ml, &ml.u_m.clone()).unwrap().adjoined;
        // 2 * result is contained in the base: doubled basis columns are integral
        // and lie in the base lattice.
        let two = BigRational::from_integer(BigInt::from(2));
        let doubled = adj.basis_in_ambient.scale(&two).to_integer().unwrap();
        let id = IntMatrix::identity(ml.lattice.rank());
        assert!(same_column_lattice(&doubled, &doubled));
        assert!(solve_integer(&id, &doubled).is_some());
    }
}
