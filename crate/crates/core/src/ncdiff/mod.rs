//! Operators over noncommutative algebras: where the classical definitions
//! break, first-order operators on the ring itself, the derivation-pair
//! condition on bimodules, and two standard examples of it.

mod calculus;
mod n21;

pub use calculus::{dv_check, universal_calculus_truncated, DVConnection, DiffCalculus, DvReport};
pub use n21::{n21_check, n21_solve, DerivationWitness, N21Outcome, N21Problem, N21Status};

use std::sync::Arc;

use crate::algcore::{AlgElem, Algebra};
use crate::bimod::{module_center, regular_bimodule, solve_map_conditions, Bimodule, HomKind, HomSpace, LinMap};
use crate::commdiff::{h_morphism, morphisms_into_star, zero_order_from_value};
use crate::error::{Error, Result};
use crate::exactla::{solve_affine, AffineSolution, Mat, Scalar, Subspace};
use crate::jetmod::{most_visible, probe_arguments};

/// A basis triple on which an identity fails, with the offending value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleWitness {
    pub a: usize,
    pub b: usize,
    /// Index into [`probe_arguments`] of the regular bimodule.
    pub p: usize,
    pub p_label: String,
    pub value: Vec<Scalar>,
}

/// Probes `Δ(abp) − aΔ(bp) − bΔ(ap) + abΔ(p)` for `Δ = Id` on the regular
/// bimodule. The value is `abp − bap`; `None` exactly when `A` is commutative.
pub fn nc_zero_order_failure(a: &Arc<Algebra>) -> Option<TripleWitness> {
    let reg = regular_bimodule(a);
    let args = probe_arguments(&reg);
    let mut cands = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let (ea, eb) = (a.basis(i), a.basis(j));
            for (k, (_, arg)) in args.iter().enumerate() {
                let p = AlgElem(arg.clone());
                let abp = a.mul(&a.mul(&ea, &eb), &p);
                let a_bp = a.mul(&ea, &a.mul(&eb, &p));
                let b_ap = a.mul(&eb, &a.mul(&ea, &p));
                let ab_p = a.mul(&a.mul(&ea, &eb), &p);
                let value = a.add(&a.sub(&a.sub(&abp, &a_bp), &b_ap), &ab_p);
                cands.push(((i, j, k), value.0));
            }
        }
    }
    most_visible(cands).map(|((i, j, k), value)| TripleWitness { a: i, b: j, p: k, p_label: args[k].0.clone(), value })
}

/// `a ↦ ma − am`.
pub fn inner_derivation(a: &Algebra, m: &AlgElem) -> LinMap {
    LinMap(a.left_matrix(m).sub(&a.right_matrix(m)))
}

/// Some `m` with `ad_m = D`, if `D` is inner.
pub fn inner_generator(a: &Algebra, d: &LinMap) -> Option<AlgElem> {
    let cols: Vec<Vec<Scalar>> = (0..a.dim()).map(|k| inner_derivation(a, &a.basis(k)).flatten()).collect();
    let m = Mat::from_columns(a.field(), a.dim() * a.dim(), &cols);
    match solve_affine(&m, &d.flatten()).ok()? {
        AffineSolution::Feasible { particular, .. } => Some(AlgElem(particular)),
        AffineSolution::Infeasible(_) => None,
    }
}

fn check_over(a: &Arc<Algebra>, q: &Bimodule) -> Result<()> {
    if q.algebra() != a {
        return Err(Error::Malformed("module is over a different algebra".into()));
    }
    Ok(())
}

/// `Q`-valued derivations `∂(ab) = (∂a)b + a∂b` of a possibly noncommutative algebra.
pub fn nc_derivation_space(a: &Arc<Algebra>, q: &Bimodule) -> Result<HomSpace> {
    check_over(a, q)?;
    let n = a.dim();
    let mq = q.dim();
    let space = solve_map_conditions(a.field(), n, mq, n * n * mq, |d| {
        let mut out = Vec::with_capacity(n * n * mq);
        for i in 0..n {
            for j in 0..n {
                let prod = d.apply(a.mul(&a.basis(i), &a.basis(j)).coords());
                let t1 = q.right_basis_matrix(j).mul_vec(&d.0.column(i));
                let t2 = q.left_basis_matrix(i).mul_vec(&d.0.column(j));
                out.extend((0..mq).map(|k| &(&prod[k] - &t1[k]) - &t2[k]));
            }
        }
        out
    });
    Ok(HomSpace { dom_dim: n, cod_dim: mq, kind: HomKind::Diff(1), space })
}

/// Checks the Leibniz rule on basis pairs, reporting the first failing pair.
pub fn derivation_failure(a: &Algebra, q: &Bimodule, d: &LinMap) -> Option<(usize, usize)> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(a.mul(&a.basis(i), &a.basis(j)).coords());
            let t1 = q.right_basis_matrix(j).mul_vec(&d.0.column(i));
            let t2 = q.left_basis_matrix(i).mul_vec(&d.0.column(j));
            if lhs.iter().zip(t1.iter().zip(&t2)).any(|(l, (x, y))| *l != x + y) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `Δ : A → Q` with `Δ(ab) = aΔ(b) + Δ(a)b − abΔ(1)` on basis pairs.
/// Checks that `Δ(1)` is central for every member and that the space is
/// exactly derivations plus `{a ↦ az : z ∈ Z_Q}`.
pub fn first_order_on_ring(a: &Arc<Algebra>, q: &Bimodule) -> Result<HomSpace> {
    check_over(a, q)?;
    let n = a.dim();
    let mq = q.dim();
    let unit = a.unit();
    let space = solve_map_conditions(a.field(), n, mq, n * n * mq, |d| {
        let d1 = d.apply(unit.coords());
        let mut out = Vec::with_capacity(n * n * mq);
        for i in 0..n {
            for j in 0..n {
                let prod = a.mul(&a.basis(i), &a.basis(j));
                let lhs = d.apply(prod.coords());
                let t1 = q.left_basis_matrix(i).mul_vec(&d.0.column(j));
                let t2 = q.right_basis_matrix(j).mul_vec(&d.0.column(i));
                let t3 = q.left_matrix(&prod).mul_vec(&d1);
                out.extend((0..mq).map(|k| &(&(&lhs[k] - &t1[k]) - &t2[k]) + &t3[k]));
            }
        }
        out
    });
    let fo = HomSpace { dom_dim: n, cod_dim: mq, kind: HomKind::Diff(1), space };

    let zq = module_center(q);
    for d in fo.maps() {
        if !zq.contains(&h_morphism(a, &d)) {
            return Err(Error::Internal("first-order operator with non-central value at 1".into()));
        }
    }
    let ders = nc_derivation_space(a, q)?;
    let zero_order: Vec<Vec<Scalar>> =
        zq.basis_vectors().iter().map(|z| zero_order_from_value(a, q, z).flatten()).collect();
    let expected = ders.space.join(&Subspace::span(a.field(), n * mq, &zero_order));
    if expected != fo.space {
        return Err(Error::Internal(
            "first-order operators differ from derivations plus central zero-order maps".into(),
        ));
    }
    Ok(fo)
}

/// Whether left multiplication by the center of `A` preserves the first-order operators `A → Q`.
pub fn zq_module_closure(a: &Arc<Algebra>, q: &Bimodule) -> Result<bool> {
    let fo = first_order_on_ring(a, q)?;
    let center = a.center();
    let maps = fo.maps();
    Ok(center.basis_vectors().iter().all(|z| {
        let lz = q.left_matrix(&AlgElem(z.clone()));
        maps.iter().all(|d| fo.contains(&LinMap(lz.mul(&d.0))))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub first_order_dim: usize,
    /// Module maps `f : P → Diff_1(A, Q)`, `f(ap) = a ⋆ f(p)`.
    pub morphism_dim: usize,
    /// Span of the operators `p ↦ f(p)(1)`, flattened into `Hom_K(P, Q)`.
    pub obtainable: Subspace,
    /// The same span over all `K`-linear `f : P → Diff_1(A, Q)`.
    pub linear_obtainable: Subspace,
    pub hom_k_dim: usize,
    pub center_dim: usize,
    pub image_in_center: bool,
}

impl ObstructionReport {
    pub fn obtainable_dim(&self) -> usize {
        self.obtainable.dim()
    }
}

/// Forms every `Δ = h ∘ f` for module maps `f : P → Diff_1(A, Q)` with
/// `(a ⋆ φ)(x) = φ(xa)`, and for all `K`-linear `f`, and checks that all of
/// them are center-valued.
pub fn center_obstruction(a: &Arc<Algebra>, p: &Bimodule, q: &Bimodule) -> Result<ObstructionReport> {
    check_over(a, p)?;
    check_over(a, q)?;
    let fo = first_order_on_ring(a, q)?;
    let morphisms = morphisms_into_star(p, &fo, |phi, i| LinMap(phi.0.mul(a.right_basis_matrix(i))));
    let zq = module_center(q);
    let d = fo.dim();
    let unit = a.unit();
    let mut image_in_center = true;
    let mut ops = Vec::new();
    for f in morphisms.basis_vectors() {
        let cols: Vec<Vec<Scalar>> =
            (0..p.dim()).map(|j| fo.from_coordinates(&f[j * d..(j + 1) * d]).apply(unit.coords())).collect();
        image_in_center &= cols.iter().all(|c| zq.contains(c));
        ops.push(LinMap(Mat::from_columns(a.field(), q.dim(), &cols)).flatten());
    }
    // a K-linear f sends one basis vector of P to one basis operator and the rest to 0
    let values: Vec<Vec<Scalar>> = fo.maps().iter().map(|d| d.apply(unit.coords())).collect();
    image_in_center &= values.iter().all(|v| zq.contains(v));
    let mut linear = Vec::new();
    for j in 0..p.dim() {
        for v in &values {
            let mut m = Mat::zeros(a.field(), q.dim(), p.dim());
            for (r, x) in v.iter().enumerate() {
                m.set(r, j, x.clone());
            }
            linear.push(m.as_slice().to_vec());
        }
    }
    Ok(ObstructionReport {
        first_order_dim: d,
        morphism_dim: morphisms.dim(),
        obtainable: Subspace::span(a.field(), p.dim() * q.dim(), &ops),
        linear_obtainable: Subspace::span(a.field(), p.dim() * q.dim(), &linear),
        hom_k_dim: p.dim() * q.dim(),
        center_dim: zq.dim(),
        image_in_center,
    })
}
