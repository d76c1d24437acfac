//! The truncated universal first-order calculus `A ⊕ Ω¹` and
//! Dubois-Violette connections.

use std::sync::Arc;

use crate::algcore::{AlgElem, Algebra};
use crate::bimod::{make_bimodule_from_mats, regular_bimodule, tensor_over_k, Bimodule, LinMap};
use crate::error::{Error, Result};
use crate::exactla::{add_vec, kernel, sub_vec, unit_vec, Field, Mat, Scalar, Subspace};

use super::derivation_failure;
use super::n21::{n21_solve, N21Outcome, N21Status};

/// `P* = A ⊕ Ω¹` with `Ω¹ = ker(A ⊗ A → A)`, `d a = 1 ⊗ a − a ⊗ 1`,
/// `d(Ω¹) = 0` and all products of two 1-forms set to zero.
#[derive(Clone, Debug)]
pub struct DiffCalculus {
    algebra: Arc<Algebra>,
    omega: Subspace,
    total: Bimodule,
    d: LinMap,
}

impl DiffCalculus {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// `Ω¹` inside `A ⊗ A`, tensor index `i·n + j`.
    pub fn omega(&self) -> &Subspace {
        &self.omega
    }

    pub fn omega_dim(&self) -> usize {
        self.omega.dim()
    }

    /// `A ⊕ Ω¹` as a bimodule; coordinates are `A` first, then `Ω¹` coordinates.
    pub fn total(&self) -> &Bimodule {
        &self.total
    }

    pub fn d(&self) -> &LinMap {
        &self.d
    }

    /// `(x, ω) ∘ (y, η) = (xy, xη + ωy)`.
    pub fn product(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let a = &self.algebra;
        let n = a.dim();
        let (x, om) = (AlgElem(u[..n].to_vec()), &u[n..]);
        let (y, eta) = (AlgElem(v[..n].to_vec()), &v[n..]);
        let mut out = a.mul(&x, &y).0;
        let xe = self.total.act_left(&x, &embed_omega(a.field(), n, eta));
        let oy = self.total.act_right(&embed_omega(a.field(), n, om), &y);
        out.extend(add_vec(&xe[n..], &oy[n..]));
        out
    }

    fn degree_zero(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.algebra.field(), self.total.dim(), i)
    }

    /// First basis triple `(a, p, b)` with `d(apb) ≠ (da)∘pb + a(dp)b + ap∘db`.
    pub fn leibniz_failure(&self) -> Option<(usize, usize, usize)> {
        let a = &self.algebra;
        let n = a.dim();
        let t = &self.total;
        for i in 0..n {
            let ea = self.degree_zero(i);
            let da = self.d.apply(&ea);
            for j in 0..t.dim() {
                let p = t.basis(j);
                let dp = self.d.apply(&p);
                for k in 0..n {
                    let eb = self.degree_zero(k);
                    let db = self.d.apply(&eb);
                    let (ai, bk) = (a.basis(i), a.basis(k));
                    let apb = t.act_right(&t.act_left(&ai, &p), &bk);
                    let lhs = self.d.apply(&apb);
                    let t1 = self.product(&da, &t.act_right(&p, &bk));
                    let t2 = t.act_right(&t.act_left(&ai, &dp), &bk);
                    let t3 = self.product(&t.act_left(&ai, &p), &db);
                    if lhs != add_vec(&add_vec(&t1, &t2), &t3) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let n = a.dim();
        let m = self.total.dim();
        let bad = |s: &str| Err(Error::Internal(format!("calculus: {s}")));
        let basis: Vec<Vec<Scalar>> = (0..m).map(|j| self.total.basis(j)).collect();
        let one = {
            let mut u = a.unit().0;
            u.resize(m, a.field().zero());
            u
        };
        for u in &basis {
            if self.product(&one, u) != *u || self.product(u, &one) != *u {
                return bad("unit law");
            }
            if !self.d.apply(&self.d.apply(u)).iter().all(Scalar::is_zero) {
                return bad("d∘d ≠ 0");
            }
        }
        for x in &basis[n..] {
            for y in &basis[n..] {
                if !self.product(x, y).iter().all(Scalar::is_zero) {
                    return bad("product of 1-forms");
                }
            }
        }
        for x in &basis {
            for y in &basis {
                let xy = self.product(x, y);
                for z in &basis {
                    if self.product(&xy, z) != self.product(x, &self.product(y, z)) {
                        return bad("associativity");
                    }
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                let (ea, eb) = (&basis[i], &basis[k]);
                let lhs = self.d.apply(&self.product(ea, eb));
                let rhs = add_vec(&self.product(&self.d.apply(ea), eb), &self.product(ea, &self.d.apply(eb)));
                if lhs != rhs {
                    return bad("Leibniz rule for d");
                }
            }
        }
        if self.leibniz_failure().is_some() {
            return bad("bimodule Leibniz rule for d");
        }
        Ok(())
    }
}

fn embed_omega(field: Field, n: usize, w: &[Scalar]) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v.extend_from_slice(w);
    v
}

pub fn universal_calculus_truncated(a: &Arc<Algebra>) -> Result<DiffCalculus> {
    let field = a.field();
    let n = a.dim();
    let reg = regular_bimodule(a);
    let t = tensor_over_k(a, &reg);
    let mult_cols: Vec<Vec<Scalar>> = (0..n * n).map(|c| a.mul(&a.basis(c / n), &a.basis(c % n)).0).collect();
    let omega = kernel(&Mat::from_columns(field, n, &mult_cols));
    let w = omega.dim();
    let id = Mat::identity(field, n);
    let restrict = |m: &Mat| -> Result<Mat> {
        let cols = omega
            .basis_vectors()
            .iter()
            .map(|v| omega.coordinates(&m.mul_vec(v)).ok_or_else(|| Error::Internal("Ω¹ is not a sub-bimodule".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(field, w, &cols))
    };
    let block = |x: &Mat, y: &Mat| {
        let mut m = Mat::zeros(field, n + w, n + w);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, x.get(r, c).clone());
            }
        }
        for r in 0..w {
            for c in 0..w {
                m.set(n + r, n + c, y.get(r, c).clone());
            }
        }
        m
    };
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        left.push(block(a.left_basis_matrix(i), &restrict(&t.kron(a.left_basis_matrix(i), &id))?));
        right.push(block(a.right_basis_matrix(i), &restrict(&t.kron(&id, a.right_basis_matrix(i)))?));
    }
    let names: Vec<String> = a.basis_names().iter().cloned().chain((1..=w).map(|r| format!("w{r}"))).collect();
    let total = make_bimodule_from_mats(a, n + w, left, right, false)?.with_names(names);

    let unit = a.unit();
    let mut d = Mat::zeros(field, n + w, n + w);
    for i in 0..n {
        let form = sub_vec(&t.pure(unit.coords(), a.basis(i).coords()), &t.pure(a.basis(i).coords(), unit.coords()));
        let c = omega.coordinates(&form).ok_or_else(|| Error::Internal("d(a) is not a 1-form".into()))?;
        for (r, x) in c.into_iter().enumerate() {
            d.set(n + r, i, x);
        }
    }
    let calc = DiffCalculus { algebra: a.clone(), omega, total, d: LinMap(d) };
    calc.validate()?;
    Ok(calc)
}

/// A derivation `u : A → A` and the operator `∇_u : P → P` assigned to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DVConnection {
    pub u: LinMap,
    pub nabla_u: LinMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvReport {
    pub status: N21Status,
    /// Present when the rule holds: the solver's outcome for `∇_u`.
    pub n21: Option<N21Outcome>,
}

/// Checks `∇_u(apb) = u(a)pb + a∇_u(p)b + apu(b)` on basis triples and, when
/// it holds, that `∇_u` admits a derivation pair.
pub fn dv_check(p: &Bimodule, conn: &DVConnection) -> Result<DvReport> {
    let a = p.algebra();
    let n = a.dim();
    let reg = regular_bimodule(a);
    if conn.u.dom_dim() != n || conn.u.cod_dim() != n {
        return Err(Error::Dimension("u must be a map A → A".into()));
    }
    if conn.nabla_u.dom_dim() != p.dim() || conn.nabla_u.cod_dim() != p.dim() {
        return Err(Error::Dimension("∇_u must be a map P → P".into()));
    }
    if let Some((i, j)) = derivation_failure(a, &reg, &conn.u) {
        return Err(Error::InvalidDerivation(format!("u fails the Leibniz rule at (e{i}, e{j})")));
    }
    let nabla = &conn.nabla_u.0;
    let mut status = N21Status::Verified;
    'outer: for i in 0..n {
        let ua = AlgElem(conn.u.0.column(i));
        for col in 0..p.dim() {
            for k in 0..n {
                let ub = AlgElem(conn.u.0.column(k));
                let (la, rb) = (p.left_basis_matrix(i), p.right_basis_matrix(k));
                let lhs = nabla.mul(&rb.mul(la)).column(col);
                let t1 = rb.mul(&p.left_matrix(&ua)).column(col);
                let t2 = rb.mul(&la.mul(nabla)).column(col);
                let t3 = p.right_matrix(&ub).mul(la).column(col);
                let value = sub_vec(&lhs, &add_vec(&add_vec(&t1, &t2), &t3));
                if value.iter().any(|v| !v.is_zero()) {
                    status = N21Status::Violated { a: i, p: col, b: k, value };
                    break 'outer;
                }
            }
        }
    }
    if status != N21Status::Verified {
        return Ok(DvReport { status, n21: None });
    }
    let outcome = n21_solve(p, p, &conn.nabla_u)?;
    if !matches!(outcome, N21Outcome::Feasible(_)) {
        return Err(Error::Internal("a connection operator admits no derivation pair".into()));
    }
    Ok(DvReport { status, n21: Some(outcome) })
}
