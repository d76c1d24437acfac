//! Differential operators between central bimodules over a commutative
//! algebra, defined by the vanishing of iterated commutators `δ_c`.

use std::sync::Arc;

use crate::algcore::{AlgElem, Algebra};
use crate::bimod::{
    left_apply, regular_bimodule, solve_map_conditions, star_apply, Bimodule, HomKind, HomSpace, LinMap,
};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, solve_conditions, Scalar, Subspace};

/// Highest supported operator order.
pub const MAX_ORDER: usize = 2;

/// `δ_c φ = c φ − c ⋆ φ`, i.e. `p ↦ c φ(p) − φ(c p)`.
pub fn delta(p: &Bimodule, q: &Bimodule, c: &AlgElem, phi: &LinMap) -> LinMap {
    left_apply(q, c, phi).sub(&star_apply(p, c, phi))
}

fn delta_basis(p: &Bimodule, q: &Bimodule, i: usize, phi: &LinMap) -> LinMap {
    LinMap(q.left_basis_matrix(i).mul(&phi.0).sub(&phi.0.mul(p.left_basis_matrix(i))))
}

/// `δ_{c_0} ∘ … ∘ δ_{c_s} φ` for basis indices `tuple = [c_0, …, c_s]`.
fn delta_chain(p: &Bimodule, q: &Bimodule, tuple: &[usize], phi: &LinMap) -> LinMap {
    tuple.iter().rev().fold(phi.clone(), |acc, &i| delta_basis(p, q, i, &acc))
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn require_commutative(a: &Algebra) -> Result<()> {
    match a.noncommuting_pair() {
        Some((i, j)) => Err(Error::NoncommutativeBase(i, j)),
        None => Ok(()),
    }
}

fn check_pair(p: &Bimodule, q: &Bimodule, s: usize) -> Result<()> {
    if p.algebra() != q.algebra() {
        return Err(Error::Malformed("modules over different algebras".into()));
    }
    require_commutative(p.algebra())?;
    if s > MAX_ORDER {
        return Err(Error::Malformed(format!("operator order {s} exceeds the supported maximum {MAX_ORDER}")));
    }
    if !p.is_central() || !q.is_central() {
        return Err(Error::Malformed(
            "differential operators over a commutative algebra need central bimodules".into(),
        ));
    }
    Ok(())
}

/// `Diff_s(P, Q)`: all `Δ` killed by every `δ_{c_0} ∘ … ∘ δ_{c_s}` over basis tuples.
pub fn diff_space(p: &Bimodule, q: &Bimodule, s: usize) -> Result<HomSpace> {
    check_pair(p, q, s)?;
    let n = p.algebra().dim();
    let (mp, mq) = (p.dim(), q.dim());
    let all = tuples(n, s + 1);
    let space = solve_map_conditions(p.field(), mp, mq, all.len() * mp * mq, |phi| {
        all.iter().flat_map(|t| delta_chain(p, q, t, phi).flatten()).collect()
    });
    Ok(HomSpace { dom_dim: mp, cod_dim: mq, kind: HomKind::Diff(s), space })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffStatus {
    Verified,
    /// `δ_{c_0} ∘ … ∘ δ_{c_s} Δ` is nonzero on basis vector `p`; `value` is that image.
    Violated {
        tuple: Vec<usize>,
        p: usize,
        value: Vec<Scalar>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOpCertificate {
    pub order: usize,
    pub operator: LinMap,
    pub status: DiffStatus,
}

impl DiffOpCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == DiffStatus::Verified
    }
}

/// Checks the order-`s` condition, reporting the lexicographically first
/// failing basis tuple and argument.
pub fn is_diff_op(p: &Bimodule, q: &Bimodule, op: &LinMap, s: usize) -> Result<DiffOpCertificate> {
    check_pair(p, q, s)?;
    check_shape(p, q, op)?;
    let n = p.algebra().dim();
    for t in tuples(n, s + 1) {
        let image = delta_chain(p, q, &t, op);
        if let Some(j) = (0..p.dim()).find(|&j| !is_zero_vec(&image.0.column(j))) {
            return Ok(DiffOpCertificate {
                order: s,
                operator: op.clone(),
                status: DiffStatus::Violated { tuple: t, p: j, value: image.0.column(j) },
            });
        }
    }
    Ok(DiffOpCertificate { order: s, operator: op.clone(), status: DiffStatus::Verified })
}

fn check_shape(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<()> {
    if op.dom_dim() != p.dim() || op.cod_dim() != q.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, modules need {}x{}",
            op.cod_dim(),
            op.dom_dim(),
            q.dim(),
            p.dim()
        )));
    }
    Ok(())
}

/// `Q`-valued derivations of `A`: `Δ(ab) = aΔ(b) + bΔ(a)` on basis pairs.
pub fn derivation_space(a: &Arc<Algebra>, q: &Bimodule) -> HomSpace {
    let n = a.dim();
    let mq = q.dim();
    let space = solve_map_conditions(a.field(), n, mq, n * n * mq, |d| {
        let mut out = Vec::with_capacity(n * n * mq);
        for i in 0..n {
            for j in 0..n {
                let prod = d.apply(a.mul(&a.basis(i), &a.basis(j)).coords());
                let t1 = q.left_basis_matrix(i).mul_vec(&d.0.column(j));
                let t2 = q.left_basis_matrix(j).mul_vec(&d.0.column(i));
                for k in 0..mq {
                    out.push(&(&prod[k] - &t1[k]) - &t2[k]);
                }
            }
        }
        out
    });
    HomSpace { dom_dim: n, cod_dim: mq, kind: HomKind::Diff(1), space }
}

/// `h(Δ) = Δ(1)`.
pub fn h_morphism(a: &Algebra, op: &LinMap) -> Vec<Scalar> {
    op.apply(a.unit().coords())
}

/// The zero-order operator `a ↦ a q`.
pub fn zero_order_from_value(a: &Algebra, q: &Bimodule, value: &[Scalar]) -> LinMap {
    let cols: Vec<Vec<Scalar>> = (0..a.dim()).map(|i| q.left_basis_matrix(i).mul_vec(value)).collect();
    LinMap(crate::exactla::Mat::from_columns(a.field(), q.dim(), &cols))
}

/// Splits a first-order `Δ : A → Q` into `a ↦ aΔ(1)` plus a derivation.
pub fn decompose_first_order(a: &Arc<Algebra>, q: &Bimodule, op: &LinMap) -> Result<(LinMap, LinMap)> {
    let reg = regular_bimodule(a);
    let cert = is_diff_op(&reg, q, op, 1)?;
    if let DiffStatus::Violated { tuple, p, .. } = cert.status {
        return Err(Error::NotFirstOrder(format!("fails on basis tuple {tuple:?} at argument {p}")));
    }
    let zero = zero_order_from_value(a, q, &h_morphism(a, op));
    let der = op.sub(&zero);
    Ok((zero, der))
}

/// `f_Δ(p) = (a ↦ Δ(ap))`, one map `A → Q` per basis vector of `P`.
pub fn factor_through_diff1(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<Vec<LinMap>> {
    let cert = is_diff_op(p, q, op, 1)?;
    if let DiffStatus::Violated { tuple, p: arg, .. } = cert.status {
        return Err(Error::NotFirstOrder(format!("fails on basis tuple {tuple:?} at argument {arg}")));
    }
    Ok(factor_images(p, op))
}

pub(crate) fn factor_images(p: &Bimodule, op: &LinMap) -> Vec<LinMap> {
    let n = p.algebra().dim();
    (0..p.dim())
        .map(|j| {
            let cols: Vec<Vec<Scalar>> = (0..n).map(|i| op.apply(&p.left_basis_matrix(i).column(j))).collect();
            LinMap(crate::exactla::Mat::from_columns(p.field(), op.cod_dim(), &cols))
        })
        .collect()
}

/// Recovers `Δ(f_j) = h(f_Δ(f_j))` from a factorization.
pub fn reconstruct_from_factorization(a: &Algebra, images: &[LinMap]) -> LinMap {
    let cols: Vec<Vec<Scalar>> = images.iter().map(|f| h_morphism(a, f)).collect();
    let cod = images.first().map_or(0, |f| f.cod_dim());
    LinMap(crate::exactla::Mat::from_columns(a.field(), cod, &cols))
}

/// Outcome of comparing both sides of an isomorphism of operator spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub dim_lhs: usize,
    pub dim_rhs: usize,
    pub injective: bool,
    pub bijective: bool,
}

/// `Diff_1(P, Q) ≅ Hom_A(P, Diff_1(A, Q))`, the right side taken with the
/// `⋆` structure on `Diff_1(A, Q)`; both sides are solved independently.
pub fn check_iso_n1(p: &Bimodule, q: &Bimodule) -> Result<IsoReport> {
    check_pair(p, q, 1)?;
    let a = p.algebra();
    let reg = regular_bimodule(a);
    let lhs = diff_space(p, q, 1)?;
    let d1 = diff_space(&reg, q, 1)?;
    let rhs = morphisms_into_star(p, &d1, |phi, i| star_apply(&reg, &a.basis(i), phi));

    let mut images = Vec::new();
    for op in lhs.maps() {
        let f = factor_images(p, &op);
        let mut coords = Vec::new();
        for g in &f {
            match d1.coordinates(g) {
                Some(c) => coords.extend(c),
                None => return Err(Error::Internal("f_Δ(p) is not a first-order operator".into())),
            }
        }
        if !rhs.contains(&coords) {
            return Err(Error::Internal("f_Δ is not a module morphism".into()));
        }
        images.push(coords);
    }
    let rank = Subspace::span(p.field(), rhs.ambient_dim(), &images).dim();
    let injective = rank == lhs.dim();
    Ok(IsoReport { dim_lhs: lhs.dim(), dim_rhs: rhs.dim(), injective, bijective: injective && lhs.dim() == rhs.dim() })
}

/// Maps `f : P → D` into a space of operators `D ⊆ Hom_K(A, Q)` with
/// `f(e_i p) = act(f(p), i)`, as a subspace of `(coords in D)^{dim P}`.
pub(crate) fn morphisms_into_star(p: &Bimodule, target: &HomSpace, act: impl Fn(&LinMap, usize) -> LinMap) -> Subspace {
    let n = p.algebra().dim();
    let mp = p.dim();
    let d = target.dim();
    let block = target.dom_dim * target.cod_dim;
    let basis = target.maps();
    let acted: Vec<Vec<Vec<Scalar>>> = basis.iter().map(|b| (0..n).map(|i| act(b, i).flatten()).collect()).collect();
    solve_conditions(p.field(), mp * d, n * mp * block, |u| {
        let (k, t) = (u / d, u % d);
        let mut out = Vec::with_capacity(n * mp * block);
        for i in 0..n {
            let l = p.left_basis_matrix(i);
            for j in 0..mp {
                // f(e_i f_j) - e_i ⋆ f(f_j) with f(f_k) = B_t and f = 0 elsewhere
                let coef = l.get(k, j);
                let b = basis[t].flatten();
                for (bv, av) in b.iter().zip(&acted[t][i]) {
                    let mut v = coef * bv;
                    if j == k {
                        v -= av;
                    }
                    out.push(v);
                }
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{builtin_algebra, BuiltinSpec};
    use crate::bimod::{free_bimodule, hom_space};
    use crate::exactla::{Field, Mat};

    fn alg(field: Field, spec: BuiltinSpec) -> Arc<Algebra> {
        Arc::new(builtin_algebra(field, &spec).unwrap())
    }

    #[test]
    fn delta_of_unit_and_of_homs_vanish() {
        let q = Field::Rationals;
        let a = alg(q, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let phi = LinMap(Mat::from_i64(q, &[&[2, 5], &[-1, 3]]));
        assert!(delta(&reg, &reg, &a.unit(), &phi).is_zero());
        for h in hom_space(&reg, &reg, HomKind::LeftHom).unwrap().maps() {
            for i in 0..2 {
                assert!(delta(&reg, &reg, &a.basis(i), &h).is_zero());
            }
        }
    }

    #[test]
    fn delta_of_coordinate_functional() {
        // φ(1) = 0, φ(x) = 1; δ_x φ (p) = x φ(p) − φ(x p)
        let q = Field::Rationals;
        let a = alg(q, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let phi = LinMap(Mat::from_i64(q, &[&[0, 1], &[0, 0]]));
        let d = delta(&reg, &reg, &a.basis(1), &phi);
        // p = 1: x·0 − φ(x) = −1;  p = x: x·1 − φ(0) = x
        assert_eq!(d, LinMap(Mat::from_i64(q, &[&[-1, 0], &[0, 1]])));
    }

    #[test]
    fn dual_number_dimensions() {
        for field in [Field::Rationals, Field::Prime(7)] {
            let a = alg(field, BuiltinSpec::DualNumbers);
            let reg = regular_bimodule(&a);
            assert_eq!(diff_space(&reg, &reg, 0).unwrap().dim(), 2);
            assert_eq!(diff_space(&reg, &reg, 1).unwrap().dim(), 3);
            let der = derivation_space(&a, &reg);
            assert_eq!(der.dim(), 1);
            // spanned by 1 ↦ 0, x ↦ x
            assert!(der.contains(&LinMap(Mat::from_i64(field, &[&[0, 0], &[0, 1]]))));
        }
    }

    #[test]
    fn gf3_enumeration_matches_solver() {
        let f = Field::Prime(3);
        let a = alg(f, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let mut count = 0;
        for code in 0..81u32 {
            let entries: Vec<i64> = (0..4).map(|k| ((code / 3u32.pow(k)) % 3) as i64).collect();
            let op = LinMap(Mat::from_flat(f, 2, 2, entries.iter().map(|&x| f.from_i64(x)).collect()));
            // Δ(abp) − aΔ(bp) − bΔ(ap) + abΔ(p) for all basis a, b, p
            let ok = (0..2).all(|ai| {
                (0..2).all(|bi| {
                    (0..2).all(|pi| {
                        let (ea, eb, ep) = (a.basis(ai), a.basis(bi), a.basis(pi));
                        let ab = a.mul(&ea, &eb);
                        let t1 = op.apply(a.mul(&ab, &ep).coords());
                        let t2 = a.mul(&ea, &AlgElem(op.apply(a.mul(&eb, &ep).coords())));
                        let t3 = a.mul(&eb, &AlgElem(op.apply(a.mul(&ea, &ep).coords())));
                        let t4 = a.mul(&ab, &AlgElem(op.apply(ep.coords())));
                        let v = crate::exactla::add_vec(
                            &crate::exactla::sub_vec(&crate::exactla::sub_vec(&t1, &t2.0), &t3.0),
                            &t4.0,
                        );
                        is_zero_vec(&v)
                    })
                })
            });
            if ok {
                count += 1;
            }
        }
        assert_eq!(count, 27);
        assert_eq!(diff_space(&reg, &reg, 1).unwrap().dim(), 3);
    }

    #[test]
    fn cubic_truncation_derivations() {
        let a = alg(Field::Prime(7), BuiltinSpec::Truncated(3));
        assert_eq!(derivation_space(&a, &regular_bimodule(&a)).dim(), 2);
    }

    #[test]
    fn zero_map_is_a_derivation() {
        let a = alg(Field::Rationals, BuiltinSpec::Truncated(3));
        let reg = regular_bimodule(&a);
        assert!(derivation_space(&a, &reg).contains(&LinMap::zero(Field::Rationals, 3, 3)));
    }

    #[test]
    fn refuses_noncommutative_base() {
        let m2 = alg(Field::Prime(7), BuiltinSpec::Matrix(2));
        let reg = regular_bimodule(&m2);
        assert!(matches!(diff_space(&reg, &reg, 1), Err(Error::NoncommutativeBase(..))));
        assert!(matches!(
            is_diff_op(&reg, &reg, &LinMap::identity(Field::Prime(7), 4), 0),
            Err(Error::NoncommutativeBase(..))
        ));
    }

    #[test]
    fn witnesses_for_non_operators() {
        let f = Field::Rationals;
        let a = alg(f, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let d1 = diff_space(&reg, &reg, 1).unwrap();
        for op in d1.maps() {
            assert!(is_diff_op(&reg, &reg, &op, 1).unwrap().is_verified());
        }
        // pick a vector outside the solved space
        let comp = d1.space.annihilator();
        let outside = LinMap::unflatten(f, 2, 2, comp.basis_vectors()[0].clone());
        assert!(!d1.contains(&outside));
        let cert = is_diff_op(&reg, &reg, &outside, 1).unwrap();
        let DiffStatus::Violated { tuple, p, value } = cert.status else { panic!("expected a violation") };
        assert_eq!(delta_chain(&reg, &reg, &tuple, &outside).0.column(p), value);
        // zero order: identity is a module hom
        assert!(is_diff_op(&reg, &reg, &LinMap::identity(f, 2), 0).unwrap().is_verified());
    }

    #[test]
    fn decomposition_and_h() {
        let f = Field::Rationals;
        let a = alg(f, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let der = derivation_space(&a, &reg);
        for op in diff_space(&reg, &reg, 1).unwrap().maps() {
            let (zero, d) = decompose_first_order(&a, &reg, &op).unwrap();
            assert_eq!(zero.add(&d), op);
            assert!(der.contains(&d));
            assert!(is_diff_op(&reg, &reg, &zero, 0).unwrap().is_verified());
        }
        let x_dx = LinMap(Mat::from_i64(f, &[&[0, 0], &[0, 1]]));
        let (zero, d) = decompose_first_order(&a, &reg, &x_dx).unwrap();
        assert!(zero.is_zero());
        assert_eq!(d, x_dx);
        assert!(is_zero_vec(&h_morphism(&a, &x_dx)));
        let q_val = vec![f.from_i64(3), f.from_i64(-2)];
        let delta_q = zero_order_from_value(&a, &reg, &q_val);
        assert_eq!(h_morphism(&a, &delta_q), q_val);
        let (_, d) = decompose_first_order(&a, &reg, &delta_q).unwrap();
        assert!(d.is_zero());
        let not_first = LinMap(Mat::from_i64(f, &[&[0, 1], &[0, 0]]));
        assert!(matches!(decompose_first_order(&a, &reg, &not_first), Err(Error::NotFirstOrder(_))));
    }

    #[test]
    fn factorization_reconstructs() {
        let f = Field::Rationals;
        let a = alg(f, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let id = LinMap::identity(f, 2);
        let imgs = factor_through_diff1(&reg, &reg, &id).unwrap();
        for (j, g) in imgs.iter().enumerate() {
            // f_id(p)(a) = a p
            assert_eq!(g.0, a.right_basis_matrix(j).clone());
        }
        assert_eq!(reconstruct_from_factorization(&a, &imgs), id);

        let p2 = free_bimodule(&a, 2).unwrap();
        // x d/dx on each summand
        let op = LinMap(Mat::from_i64(f, &[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1]]));
        let imgs = factor_through_diff1(&p2, &p2, &op).unwrap();
        assert_eq!(reconstruct_from_factorization(&a, &imgs), op);
    }

    #[test]
    fn iso_through_diff1() {
        let f = Field::Rationals;
        let a = alg(f, BuiltinSpec::DualNumbers);
        let reg = regular_bimodule(&a);
        let r = check_iso_n1(&reg, &reg).unwrap();
        assert_eq!((r.dim_lhs, r.dim_rhs, r.bijective), (3, 3, true));
        let p2 = free_bimodule(&a, 2).unwrap();
        let r = check_iso_n1(&p2, &reg).unwrap();
        assert_eq!((r.dim_lhs, r.dim_rhs, r.bijective), (6, 6, true));
        let c = alg(Field::Prime(7), BuiltinSpec::Truncated(3));
        let reg = regular_bimodule(&c);
        let r = check_iso_n1(&reg, &reg).unwrap();
        assert!(r.bijective);
        assert_eq!(r.dim_lhs, r.dim_rhs);
    }
}
