//! Jet modules `J^k(P) = (A ⊗_K P) / μ^{k+1}` for `k ∈ {1, 2}`, the jet
//! morphism `p ↦ 1 ⊗ p`, the projection `a ⊗ p ↦ ap`, and the
//! factorization of first-order operators through `J^1(P)`.

use crate::algcore::{AlgElem, Algebra};
use crate::bimod::{
    hom_space, make_bimodule_from_mats, regular_bimodule, tensor_over_k, Bimodule, HomKind, LinMap, TensorSpace,
};
use crate::commdiff::{diff_space, is_diff_op, DiffOpCertificate, IsoReport};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, quotient_by, AffineSolution, LinearSystem, Mat, Quotient, Scalar, Subspace};

pub const MAX_JET_ORDER: usize = 2;

#[derive(Clone, Debug)]
pub struct JetModule {
    base: Bimodule,
    order: usize,
    tensor: TensorSpace,
    mu: Subspace,
    quot: Quotient,
    left_action: Option<Vec<Mat>>,
    star_action: Option<Vec<Mat>>,
    jk_map: LinMap,
    pi_map: Option<LinMap>,
}

impl JetModule {
    pub fn base(&self) -> &Bimodule {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tensor(&self) -> TensorSpace {
        self.tensor
    }

    /// The relation subspace `μ^{k+1}`.
    pub fn mu(&self) -> &Subspace {
        &self.mu
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quot
    }

    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// `b · (a ⊗ p) = ba ⊗ p` on the quotient, per basis element `b`; present when it descends.
    pub fn left_action(&self) -> Option<&[Mat]> {
        self.left_action.as_deref()
    }

    /// `b ⋆ (a ⊗ p) = a ⊗ bp` on the quotient, per basis element `b`; present when it descends.
    pub fn star_action(&self) -> Option<&[Mat]> {
        self.star_action.as_deref()
    }

    /// `p ↦ class of 1 ⊗ p`.
    pub fn jk_map(&self) -> &LinMap {
        &self.jk_map
    }

    /// `class of a ⊗ p ↦ ap`, withheld when it is not well defined.
    pub fn pi_map(&self) -> Option<&LinMap> {
        self.pi_map.as_ref()
    }

    /// The quotient as a central bimodule under the left action.
    pub fn as_bimodule(&self) -> Result<Bimodule> {
        let left = self
            .left_action
            .clone()
            .ok_or_else(|| Error::ActionDescentFailure("left action does not descend".into()))?;
        make_bimodule_from_mats(self.base.algebra(), self.dim(), left.clone(), left, true)
    }
}

/// Matrix of `δ^b` on `A ⊗ P`: `a ⊗ p ↦ ba ⊗ p − a ⊗ bp`.
pub fn delta_upper_matrix(a: &Algebra, p: &Bimodule, b: &AlgElem) -> Mat {
    let t = tensor_over_k(a, p);
    let left = t.kron(&a.left_matrix(b), &Mat::identity(a.field(), p.dim()));
    let right = t.kron(&Mat::identity(a.field(), a.dim()), &p.left_matrix(b));
    left.sub(&right)
}

pub fn delta_upper(a: &Algebra, p: &Bimodule, b: &AlgElem, t: &[Scalar]) -> Vec<Scalar> {
    delta_upper_matrix(a, p, b).mul_vec(t)
}

/// `a ⊗ p ↦ ap`.
pub fn contraction(a: &Algebra, p: &Bimodule) -> LinMap {
    let t = tensor_over_k(a, p);
    let mut m = Mat::zeros(a.field(), p.dim(), t.dim());
    for i in 0..a.dim() {
        let l = p.left_basis_matrix(i);
        for j in 0..p.dim() {
            for k in 0..p.dim() {
                m.set(k, t.index(i, j), l.get(k, j).clone());
            }
        }
    }
    LinMap(m)
}

/// Span of `δ^{b_0} ∘ … ∘ δ^{b_k}(e_i ⊗ f_j)` over all basis tuples.
pub fn mu_submodule(p: &Bimodule, k: usize) -> Result<Subspace> {
    if k == 0 || k > MAX_JET_ORDER {
        return Err(Error::Malformed(format!("jet order must be 1 or 2, got {k}")));
    }
    let a = p.algebra();
    let n = a.dim();
    let deltas: Vec<Mat> = (0..n).map(|b| delta_upper_matrix(a, p, &a.basis(b))).collect();
    let dim = n * p.dim();
    let mut composites = vec![Mat::identity(a.field(), dim)];
    for _ in 0..=k {
        composites = composites.iter().flat_map(|c| deltas.iter().map(move |d| d.mul(c))).collect();
    }
    let mut gens = Vec::new();
    for c in &composites {
        for col in 0..dim {
            let v = c.column(col);
            if !is_zero_vec(&v) {
                gens.push(v);
            }
        }
    }
    Ok(Subspace::span(a.field(), dim, &gens))
}

/// Builds `(A ⊗ P)/μ^{k+1}` for any algebra. Actions are kept only if they
/// preserve `μ^{k+1}`; the projection only if it kills `μ^{k+1}`.
pub fn jet_quotient(p: &Bimodule, k: usize) -> Result<JetModule> {
    let a = p.algebra();
    let field = a.field();
    let tensor = tensor_over_k(a, p);
    let mu = mu_submodule(p, k)?;
    let quot = quotient_by(&mu);
    let n = a.dim();

    let preserves = |m: &Mat| mu.basis_vectors().iter().all(|v| mu.contains(&m.mul_vec(v)));
    let id_a = Mat::identity(field, n);
    let id_p = Mat::identity(field, p.dim());
    let ambient_left: Vec<Mat> = (0..n).map(|b| tensor.kron(a.left_basis_matrix(b), &id_p)).collect();
    let ambient_star: Vec<Mat> = (0..n).map(|b| tensor.kron(&id_a, p.left_basis_matrix(b))).collect();
    let left_action =
        ambient_left.iter().all(&preserves).then(|| ambient_left.iter().map(|m| quot.induced(m)).collect());
    let star_action =
        ambient_star.iter().all(&preserves).then(|| ambient_star.iter().map(|m| quot.induced(m)).collect());

    let unit = a.unit();
    let jk_cols: Vec<Vec<Scalar>> =
        (0..p.dim()).map(|j| quot.project(&tensor.pure(unit.coords(), &p.basis(j)))).collect();
    let jk_map = LinMap(Mat::from_columns(field, quot.dim(), &jk_cols));

    let contract = contraction(a, p);
    let defect_free = mu.basis_vectors().iter().all(|v| is_zero_vec(&contract.apply(v)));
    let pi_map = defect_free.then(|| LinMap(contract.0.mul(quot.section())));

    Ok(JetModule { base: p.clone(), order: k, tensor, mu, quot, left_action, star_action, jk_map, pi_map })
}

/// The jet module of a central bimodule over a commutative algebra, with
/// the descent, projection and generation properties checked.
pub fn jet_module(p: &Bimodule, k: usize) -> Result<JetModule> {
    let a = p.algebra();
    if let Some((i, j)) = a.noncommuting_pair() {
        return Err(Error::NoncommutativeBase(i, j));
    }
    if !p.is_central() {
        return Err(Error::Malformed("jet modules need a central bimodule".into()));
    }
    let jm = jet_quotient(p, k)?;
    let left = jm.left_action.as_ref().ok_or_else(|| Error::ActionDescentFailure("left action".into()))?;
    if jm.star_action.is_none() {
        return Err(Error::ActionDescentFailure("star action".into()));
    }
    let pi = jm.pi_map.as_ref().ok_or_else(|| Error::Internal("projection does not vanish on relations".into()))?;
    if pi.compose(&jm.jk_map) != LinMap::identity(a.field(), p.dim()) {
        return Err(Error::Internal("projection ∘ jet is not the identity".into()));
    }
    if pi.matrix().rank() != p.dim() {
        return Err(Error::Internal("projection is not surjective".into()));
    }
    let mut orbit = Vec::new();
    for m in left {
        let img = m.mul(jm.jk_map.matrix());
        orbit.extend((0..img.cols()).map(|c| img.column(c)));
    }
    if Subspace::span(a.field(), jm.dim(), &orbit).dim() != jm.dim() {
        return Err(Error::Internal("jets of P do not generate the jet module".into()));
    }
    Ok(jm)
}

/// Certifies that `p ↦ 1 ⊗ p` is a first-order operator `P → J^1(P)`.
pub fn j1_is_first_order(p: &Bimodule) -> Result<DiffOpCertificate> {
    let jm = jet_module(p, 1)?;
    let target = jm.as_bimodule()?;
    is_diff_op(p, &target, jm.jk_map(), 1)
}

/// The unique left-module map `f : J^1(P) → Q` with `f ∘ J^1 = Δ`.
pub fn factor_through_jet(p: &Bimodule, q: &Bimodule, op: &LinMap) -> Result<LinMap> {
    let jm = jet_module(p, 1)?;
    factor_with(&jm, q, op)
}

fn factor_with(jm: &JetModule, q: &Bimodule, op: &LinMap) -> Result<LinMap> {
    let a = jm.base.algebra();
    let field = a.field();
    let n = a.dim();
    let (dj, mq, mp) = (jm.dim(), q.dim(), jm.base.dim());
    let left = jm.left_action.as_ref().ok_or_else(|| Error::ActionDescentFailure("left action".into()))?;
    if op.dom_dim() != mp || op.cod_dim() != mq {
        return Err(Error::Dimension("operator shape does not match P and Q".into()));
    }
    let hom_rows = n * mq * dj;
    let mut sys = LinearSystem::new(field, hom_rows + mq * mp);
    for u in 0..dj * mq {
        let f = LinMap::matrix_unit(field, dj, mq, u / dj, u % dj);
        let mut col = Vec::with_capacity(hom_rows + mq * mp);
        for (i, l) in left.iter().enumerate() {
            col.extend_from_slice(q.left_basis_matrix(i).mul(&f.0).sub(&f.0.mul(l)).as_slice());
        }
        col.extend(f.compose(&jm.jk_map).flatten());
        sys.push_column(&col);
    }
    let mut rhs = vec![field.zero(); hom_rows];
    rhs.extend(op.flatten());
    sys.set_rhs(rhs);
    match sys.solve(false) {
        AffineSolution::Feasible { particular, homogeneous } => {
            if homogeneous.dim() != 0 {
                return Err(Error::Factorization(format!("{} independent factorizations", homogeneous.dim() + 1)));
            }
            Ok(LinMap::unflatten(field, dj, mq, particular))
        }
        AffineSolution::Infeasible(_) => {
            Err(Error::Factorization("no module map through J^1 reproduces the operator".into()))
        }
    }
}

/// `Diff_1(P, Q) ≅ Hom_A(J^1(P), Q)`, both sides solved independently.
pub fn check_iso_550(p: &Bimodule, q: &Bimodule) -> Result<IsoReport> {
    let jm = jet_module(p, 1)?;
    let target = jm.as_bimodule()?;
    let lhs = diff_space(p, q, 1)?;
    let rhs = hom_space(&target, q, HomKind::LeftHom)?;
    let mut images = Vec::new();
    for op in lhs.maps() {
        let f = factor_with(&jm, q, &op)?;
        if !rhs.contains(&f) {
            return Err(Error::Internal("factor is not a module map".into()));
        }
        images.push(f.flatten());
    }
    let rank = Subspace::span(p.field(), rhs.space.ambient_dim(), &images).dim();
    let injective = rank == lhs.dim();
    Ok(IsoReport { dim_lhs: lhs.dim(), dim_rhs: rhs.dim(), injective, bijective: injective && lhs.dim() == rhs.dim() })
}

/// A relation element whose projection is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectWitness {
    pub a: usize,
    pub b: usize,
    /// Index into [`probe_arguments`].
    pub p: usize,
    pub p_label: String,
    pub argument: Vec<Scalar>,
    /// `δ^a ∘ δ^b (1 ⊗ p)` in `A ⊗ P`.
    pub relation: Vec<Scalar>,
    /// Its image `(ab − ba)p` under `a ⊗ p ↦ ap`.
    pub image: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetDefect {
    NoDefect,
    Defect {
        /// Columns are projections of the basis of `μ^2`.
        defect_map: LinMap,
        witness: DefectWitness,
    },
}

/// Arguments tried by the failure probes: the unit first when `P` is the
/// regular bimodule, then the basis of `P`.
pub fn probe_arguments(p: &Bimodule) -> Vec<(String, Vec<Scalar>)> {
    let a = p.algebra();
    let mut out = Vec::new();
    if *p == regular_bimodule(a) {
        out.push(("1".to_string(), a.unit().0));
    }
    for j in 0..p.dim() {
        out.push((p.basis_names()[j].clone(), p.basis(j)));
    }
    out
}

/// Picks, among candidate witnesses, one whose value has the most nonzero
/// coordinates; ties go to the first candidate.
pub(crate) fn most_visible<T>(cands: impl IntoIterator<Item = (T, Vec<Scalar>)>) -> Option<(T, Vec<Scalar>)> {
    let mut best: Option<(T, Vec<Scalar>, usize)> = None;
    for (t, v) in cands {
        let support = v.iter().filter(|s| !s.is_zero()).count();
        if support > 0 && best.as_ref().is_none_or(|(_, _, s)| support > *s) {
            best = Some((t, v, support));
        }
    }
    best.map(|(t, v, _)| (t, v))
}

/// Restricts `a ⊗ p ↦ ap` to `μ^2` and reports a relation element it does not kill.
pub fn nc_jet_defect(p: &Bimodule) -> Result<JetDefect> {
    let a = p.algebra();
    let field = a.field();
    let mu = mu_submodule(p, 1)?;
    let contract = contraction(a, p);
    let cols: Vec<Vec<Scalar>> = mu.basis_vectors().iter().map(|v| contract.apply(v)).collect();
    let defect_map = LinMap(Mat::from_columns(field, p.dim(), &cols));
    if defect_map.is_zero() {
        return Ok(JetDefect::NoDefect);
    }
    let t = tensor_over_k(a, p);
    let unit = a.unit();
    let deltas: Vec<Mat> = (0..a.dim()).map(|b| delta_upper_matrix(a, p, &a.basis(b))).collect();
    let args = probe_arguments(p);
    let mut cands = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for (k, (_, arg)) in args.iter().enumerate() {
                let rel = deltas[i].mul_vec(&deltas[j].mul_vec(&t.pure(unit.coords(), arg)));
                let img = contract.apply(&rel);
                cands.push(((i, j, k, rel), img));
            }
        }
    }
    let ((i, j, k, rel), image) =
        most_visible(cands).ok_or_else(|| Error::Internal("defect without a witness".into()))?;
    Ok(JetDefect::Defect {
        defect_map,
        witness: DefectWitness {
            a: i,
            b: j,
            p: k,
            p_label: args[k].0.clone(),
            argument: args[k].1.clone(),
            relation: rel,
            image,
        },
    })
}
