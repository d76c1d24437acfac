//! First-order operators on bimodules defined by a derivation pair:
//! `Δ(apb) = (∂→a)(p)b + aΔ(p)b + a(∂←b)(p)`, with `∂→` valued in right
//! module maps and `∂←` in left module maps. Existence of the pair is one
//! linear feasibility problem.

use crate::bimod::{hom_space, Bimodule, HomKind, HomSpace, LinMap};
use crate::error::{Error, Result};
use crate::exactla::{AffineSolution, Certificate, LinearSystem, Mat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationWitness {
    /// `∂→(e_i)`, right module maps `P → Q`.
    pub d_right: Vec<LinMap>,
    /// `∂←(e_i)`, left module maps `P → Q`.
    pub d_left: Vec<LinMap>,
}

impl DerivationWitness {
    pub fn zero(p: &Bimodule, q: &Bimodule) -> DerivationWitness {
        let n = p.algebra().dim();
        let z = LinMap::zero(p.field(), p.dim(), q.dim());
        DerivationWitness { d_right: vec![z.clone(); n], d_left: vec![z; n] }
    }

    /// Module-map and Leibniz conditions, in the bimodule structures
    /// `(aφ)(p) = aφ(p), (φa)(p) = φ(ap)` on right maps and
    /// `(aφ)(p) = φ(pa), (φa)(p) = φ(p)a` on left maps.
    pub fn validate(&self, p: &Bimodule, q: &Bimodule) -> Result<()> {
        let a = p.algebra();
        let n = a.dim();
        let bad = |s: String| Err(Error::InvalidWitness(s));
        if self.d_right.len() != n || self.d_left.len() != n {
            return bad(format!("witness needs {n} values per side"));
        }
        for f in self.d_right.iter().chain(&self.d_left) {
            if f.dom_dim() != p.dim() || f.cod_dim() != q.dim() {
                return bad("witness value has the wrong shape".into());
            }
        }
        for i in 0..n {
            for k in 0..n {
                let (h, g) = (&self.d_right[i].0, &self.d_left[i].0);
                if h.mul(p.right_basis_matrix(k)) != q.right_basis_matrix(k).mul(h) {
                    return bad(format!("d_right[{i}] is not a right module map (fails at e{k})"));
                }
                if g.mul(p.left_basis_matrix(k)) != q.left_basis_matrix(k).mul(g) {
                    return bad(format!("d_left[{i}] is not a left module map (fails at e{k})"));
                }
            }
        }
        for j in 0..n {
            for k in 0..n {
                let prod = a.mul(&a.basis(j), &a.basis(k));
                let at = |d: &[LinMap]| {
                    prod.coords()
                        .iter()
                        .zip(d)
                        .fold(Mat::zeros(p.field(), q.dim(), p.dim()), |acc, (c, f)| acc.add(&f.0.scale(c)))
                };
                let r = at(&self.d_right)
                    .sub(&q.left_basis_matrix(j).mul(&self.d_right[k].0))
                    .sub(&self.d_right[j].0.mul(p.left_basis_matrix(k)));
                if !r.is_zero() {
                    return bad(format!("d_right fails the Leibniz rule at (e{j}, e{k})"));
                }
                let l = at(&self.d_left)
                    .sub(&self.d_left[k].0.mul(p.right_basis_matrix(j)))
                    .sub(&q.right_basis_matrix(k).mul(&self.d_left[j].0));
                if !l.is_zero() {
                    return bad(format!("d_left fails the Leibniz rule at (e{j}, e{k})"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum N21Status {
    Verified,
    /// Basis indices `(a, p, b)` and `Δ(apb) − (∂→a)(p)b − aΔ(p)b − a(∂←b)(p)`.
    Violated {
        a: usize,
        p: usize,
        b: usize,
        value: Vec<Scalar>,
    },
}

fn check_shapes(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<()> {
    if p.algebra() != q.algebra() {
        return Err(Error::Malformed("modules over different algebras".into()));
    }
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

/// `Δ(e_j f_p e_k) − e_j Δ(f_p) e_k` as a `Q`-matrix per `(j, k)`, columns indexed by `p`.
fn defect_blocks(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Vec<Vec<Mat>> {
    let n = p.algebra().dim();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let outer = op.0.mul(&p.right_basis_matrix(k).mul(p.left_basis_matrix(j)));
                    let inner = q.right_basis_matrix(k).mul(&q.left_basis_matrix(j).mul(&op.0));
                    outer.sub(&inner)
                })
                .collect()
        })
        .collect()
}

/// Checks the condition on every basis triple after validating the witness.
pub fn n21_check(p: &Bimodule, q: &Bimodule, op: &LinMap, w: &DerivationWitness) -> Result<N21Status> {
    check_shapes(p, q, op)?;
    w.validate(p, q)?;
    let n = p.algebra().dim();
    let blocks = defect_blocks(p, q, op);
    for j in 0..n {
        for col in 0..p.dim() {
            for k in 0..n {
                let lhs = blocks[j][k].column(col);
                let r = q.right_basis_matrix(k).mul_vec(&w.d_right[j].0.column(col));
                let l = q.left_basis_matrix(j).mul_vec(&w.d_left[k].0.column(col));
                let value: Vec<Scalar> = lhs.iter().zip(r.iter().zip(&l)).map(|(x, (y, z))| &(x - y) - z).collect();
                if value.iter().any(|v| !v.is_zero()) {
                    return Ok(N21Status::Violated { a: j, p: col, b: k, value });
                }
            }
        }
    }
    Ok(N21Status::Verified)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum N21Outcome {
    Feasible(DerivationWitness),
    Infeasible(Certificate),
}

/// The feasibility system. Unknown `t·n + i` is the `t`-th coordinate of
/// `∂→(e_i)` in a basis of right module maps; the `∂←(e_i)` coordinates in a
/// basis of left module maps follow in the same layout, so module-map
/// membership holds by construction.
/// Equations come in three blocks: Leibniz for `∂→` per basis pair,
/// Leibniz for `∂←` per basis pair, and the condition per basis triple.
pub struct N21Problem {
    n: usize,
    mp: usize,
    mq: usize,
    right: HomSpace,
    left: HomSpace,
    system: LinearSystem,
}

impl N21Problem {
    pub fn new(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<N21Problem> {
        check_shapes(p, q, op)?;
        let a = p.algebra();
        let field = p.field();
        let (n, mp, mq) = (a.dim(), p.dim(), q.dim());
        let right = hom_space(p, q, HomKind::RightHom)?;
        let left = hom_space(p, q, HomKind::LeftHom)?;
        let block = mp * mq;
        let leibniz = n * n * block;
        let total = 2 * leibniz + n * n * block;
        let mut system = LinearSystem::new(field, total);

        let triple_row = |j: usize, col: usize, k: usize| 2 * leibniz + ((j * mp + col) * n + k) * mq;
        let put = |v: &mut [Scalar], at: usize, m: &Mat| {
            for (slot, x) in v[at..at + block].iter_mut().zip(m.as_slice()) {
                *slot += x;
            }
        };

        for h in right.maps() {
            let lq: Vec<Mat> = (0..n).map(|j| q.left_basis_matrix(j).mul(&h.0)).collect();
            let hp: Vec<Mat> = (0..n).map(|k| h.0.mul(p.left_basis_matrix(k))).collect();
            let rq: Vec<Mat> = (0..n).map(|k| q.right_basis_matrix(k).mul(&h.0)).collect();
            for i in 0..n {
                let mut col = vec![field.zero(); total];
                for j in 0..n {
                    for k in 0..n {
                        let at = (j * n + k) * block;
                        let c = a.structure_constant(j, k, i);
                        if !c.is_zero() {
                            put(&mut col, at, &h.0.scale(c));
                        }
                        if k == i {
                            put(&mut col, at, &lq[j].scale(&field.from_i64(-1)));
                        }
                        if j == i {
                            put(&mut col, at, &hp[k].scale(&field.from_i64(-1)));
                        }
                    }
                }
                for pc in 0..mp {
                    for k in 0..n {
                        let at = triple_row(i, pc, k);
                        for (r, x) in rq[k].column(pc).into_iter().enumerate() {
                            col[at + r] = x;
                        }
                    }
                }
                system.push_column(&col);
            }
        }
        for g in left.maps() {
            let gp: Vec<Mat> = (0..n).map(|j| g.0.mul(p.right_basis_matrix(j))).collect();
            let rq: Vec<Mat> = (0..n).map(|k| q.right_basis_matrix(k).mul(&g.0)).collect();
            let lq: Vec<Mat> = (0..n).map(|j| q.left_basis_matrix(j).mul(&g.0)).collect();
            for i in 0..n {
                let mut col = vec![field.zero(); total];
                for j in 0..n {
                    for k in 0..n {
                        let at = leibniz + (j * n + k) * block;
                        let c = a.structure_constant(j, k, i);
                        if !c.is_zero() {
                            put(&mut col, at, &g.0.scale(c));
                        }
                        if k == i {
                            put(&mut col, at, &gp[j].scale(&field.from_i64(-1)));
                        }
                        if j == i {
                            put(&mut col, at, &rq[k].scale(&field.from_i64(-1)));
                        }
                    }
                }
                for pc in 0..mp {
                    for j in 0..n {
                        let at = triple_row(j, pc, i);
                        for (r, x) in lq[j].column(pc).into_iter().enumerate() {
                            col[at + r] = x;
                        }
                    }
                }
                system.push_column(&col);
            }
        }
        let mut rhs = vec![field.zero(); total];
        let blocks = defect_blocks(p, q, op);
        for j in 0..n {
            for pc in 0..mp {
                for k in 0..n {
                    let at = triple_row(j, pc, k);
                    for (r, x) in blocks[j][k].column(pc).into_iter().enumerate() {
                        rhs[at + r] = x;
                    }
                }
            }
        }
        system.set_rhs(rhs);
        Ok(N21Problem { n, mp, mq, right, left, system })
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn unknowns(&self) -> usize {
        self.system.unknowns()
    }

    pub fn equations(&self) -> usize {
        self.system.equations()
    }

    /// The witness encoded by a solution vector.
    pub fn witness(&self, x: &[Scalar]) -> DerivationWitness {
        let (n, dr) = (self.n, self.right.dim());
        let mut d_right = Vec::with_capacity(n);
        let mut d_left = Vec::with_capacity(n);
        for i in 0..n {
            let cr: Vec<Scalar> = (0..dr).map(|t| x[t * n + i].clone()).collect();
            d_right.push(self.right.from_coordinates(&cr));
            let cl: Vec<Scalar> = (0..self.left.dim()).map(|t| x[dr * n + t * n + i].clone()).collect();
            d_left.push(self.left.from_coordinates(&cl));
        }
        DerivationWitness { d_right, d_left }
    }

    /// Solves with free unknowns set to zero, or returns a certified inconsistency.
    pub fn solve(&self) -> N21Outcome {
        match self.system.solve(true) {
            AffineSolution::Feasible { particular, .. } => N21Outcome::Feasible(self.witness(&particular)),
            AffineSolution::Infeasible(cert) => N21Outcome::Infeasible(cert),
        }
    }

    pub fn verify_certificate(&self, cert: &Certificate) -> bool {
        self.system.verify_certificate(cert)
    }

    /// Human-readable name of an equation row.
    pub fn describe_equation(&self, row: usize) -> String {
        let (n, mp, mq) = (self.n, self.mp, self.mq);
        let block = mp * mq;
        let leibniz = n * n * block;
        if row < 2 * leibniz {
            let side = if row < leibniz { "d_right" } else { "d_left" };
            let r = row % leibniz;
            let (pair, entry) = (r / block, r % block);
            format!("{side} Leibniz at (e{}, e{}), entry ({}, {})", pair / n, pair % n, entry / mp, entry % mp)
        } else {
            let r = row - 2 * leibniz;
            let (triple, coord) = (r / mq, r % mq);
            let k = triple % n;
            let jp = triple / n;
            format!("triple (e{}, f{}, e{}), coordinate {coord}", jp / mp, jp % mp, k)
        }
    }
}

/// Decides whether a derivation pair exists for `Δ`.
pub fn n21_solve(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<N21Outcome> {
    Ok(N21Problem::new(p, q, op)?.solve())
}
