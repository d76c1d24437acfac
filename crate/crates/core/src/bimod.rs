//! Bimodules over an algebra, linear maps between them, and hom spaces.

use std::sync::Arc;

use crate::algcore::{AlgElem, Algebra};
use crate::error::{Error, Result};
use crate::exactla::{solve_conditions, Field, Mat, Scalar, Subspace};

/// A finite-dimensional `A`-bimodule, stored as the matrices of left and
/// right multiplication by each basis element of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    algebra: Arc<Algebra>,
    dim: usize,
    left: Vec<Mat>,
    right: Vec<Mat>,
    central: bool,
    names: Vec<String>,
}

impl Bimodule {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether `ap = pa` holds for all `a`, `p`.
    pub fn is_central(&self) -> bool {
        self.central
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim, "one name per basis vector");
        self.names = names;
        self
    }

    /// Matrix of `p ↦ e_i p`.
    pub fn left_basis_matrix(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Matrix of `p ↦ p e_i`.
    pub fn right_basis_matrix(&self, i: usize) -> &Mat {
        &self.right[i]
    }

    pub fn left_matrix(&self, a: &AlgElem) -> Mat {
        combine(self.field(), self.dim, &self.left, a.coords())
    }

    pub fn right_matrix(&self, a: &AlgElem) -> Mat {
        combine(self.field(), self.dim, &self.right, a.coords())
    }

    pub fn act_left(&self, a: &AlgElem, p: &[Scalar]) -> Vec<Scalar> {
        self.left_matrix(a).mul_vec(p)
    }

    pub fn act_right(&self, p: &[Scalar], a: &AlgElem) -> Vec<Scalar> {
        self.right_matrix(a).mul_vec(p)
    }

    pub fn basis(&self, j: usize) -> Vec<Scalar> {
        crate::exactla::unit_vec(self.field(), self.dim, j)
    }

    pub fn format(&self, p: &[Scalar]) -> String {
        crate::algcore::format_vector(&self.names, p)
    }

    /// `P ⊕ Q` with componentwise actions.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if self.algebra != other.algebra {
            return Err(Error::Malformed("direct sum of modules over different algebras".into()));
        }
        let n = self.algebra.dim();
        let block = |a: &Mat, b: &Mat| {
            let d = a.rows() + b.rows();
            let mut m = Mat::zeros(self.field(), d, d);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                }
            }
            m
        };
        let left = (0..n).map(|i| block(&self.left[i], &other.left[i])).collect();
        let right = (0..n).map(|i| block(&self.right[i], &other.right[i])).collect();
        let names = self
            .names
            .iter()
            .map(|s| format!("({s},0)"))
            .chain(other.names.iter().map(|s| format!("(0,{s})")))
            .collect();
        Ok(Bimodule {
            algebra: self.algebra.clone(),
            dim: self.dim + other.dim,
            left,
            right,
            central: self.central && other.central,
            names,
        })
    }
}

fn combine(field: Field, m: usize, mats: &[Mat], coords: &[Scalar]) -> Mat {
    let mut out = Mat::zeros(field, m, m);
    for (mat, c) in mats.iter().zip(coords) {
        if !c.is_zero() {
            out = out.add(&mat.scale(c));
        }
    }
    out
}

/// `A` as a bimodule over itself.
pub fn regular_bimodule(a: &Arc<Algebra>) -> Bimodule {
    let n = a.dim();
    Bimodule {
        algebra: a.clone(),
        dim: n,
        left: (0..n).map(|i| a.left_basis_matrix(i).clone()).collect(),
        right: (0..n).map(|i| a.right_basis_matrix(i).clone()).collect(),
        central: a.is_commutative(),
        names: a.basis_names().to_vec(),
    }
}

/// `A^r` with componentwise actions.
pub fn free_bimodule(a: &Arc<Algebra>, rank: usize) -> Result<Bimodule> {
    let reg = regular_bimodule(a);
    match rank {
        0 => make_bimodule_from_mats(
            a,
            0,
            vec![Mat::zeros(a.field(), 0, 0); a.dim()],
            vec![Mat::zeros(a.field(), 0, 0); a.dim()],
            false,
        ),
        _ => (1..rank).try_fold(reg.clone(), |acc, _| acc.direct_sum(&reg)),
    }
}

/// Validates action tensors. `left[i][j][k]` is the coefficient of `f_k` in
/// `e_i f_j`; `right[i][j][k]` the coefficient of `f_k` in `f_j e_i`
/// (both flattened, index `(i*m+j)*m+k`).
pub fn make_bimodule(
    a: &Arc<Algebra>,
    dim: usize,
    left: &[Scalar],
    right: &[Scalar],
    require_central: bool,
) -> Result<Bimodule> {
    let n = a.dim();
    let expected = n * dim * dim;
    if left.len() != expected || right.len() != expected {
        return Err(Error::Malformed(format!("action tensors must have {expected} entries")));
    }
    if left.iter().chain(right).any(|s| s.field() != a.field()) {
        return Err(Error::Malformed(format!("action entries must lie in {}", a.field())));
    }
    let to_mats = |t: &[Scalar]| -> Vec<Mat> {
        (0..n)
            .map(|i| {
                let mut m = Mat::zeros(a.field(), dim, dim);
                for j in 0..dim {
                    for k in 0..dim {
                        m.set(k, j, t[(i * dim + j) * dim + k].clone());
                    }
                }
                m
            })
            .collect()
    };
    make_bimodule_from_mats(a, dim, to_mats(left), to_mats(right), require_central)
}

/// As [`make_bimodule`], with the actions already given as matrices
/// (`left[i]` is `p ↦ e_i p`, `right[i]` is `p ↦ p e_i`).
pub fn make_bimodule_from_mats(
    a: &Arc<Algebra>,
    dim: usize,
    left: Vec<Mat>,
    right: Vec<Mat>,
    require_central: bool,
) -> Result<Bimodule> {
    let n = a.dim();
    if left.len() != n || right.len() != n {
        return Err(Error::Malformed(format!("need one action matrix per basis element ({n})")));
    }
    for m in left.iter().chain(&right) {
        if m.rows() != dim || m.cols() != dim || m.field() != a.field() {
            return Err(Error::Malformed(format!("action matrices must be {dim}x{dim} over {}", a.field())));
        }
    }
    let field = a.field();
    let module = Bimodule {
        algebra: a.clone(),
        dim,
        left,
        right,
        central: false,
        names: (0..dim).map(|j| format!("f{j}")).collect(),
    };

    let first_bad_column = |x: &Mat, y: &Mat| (0..dim).find(|&p| x.column(p) != y.column(p));
    let id = Mat::identity(field, dim);
    let one = a.unit();
    if let Some(p) = first_bad_column(&module.left_matrix(&one), &id) {
        return Err(Error::AxiomViolation { identity: "1p = p", a: 0, b: 0, p });
    }
    if let Some(p) = first_bad_column(&module.right_matrix(&one), &id) {
        return Err(Error::AxiomViolation { identity: "p1 = p", a: 0, b: 0, p });
    }
    for i in 0..n {
        for j in 0..n {
            let ij = a.mul(&a.basis(i), &a.basis(j));
            let lhs = module.left_matrix(&ij);
            let rhs = module.left[i].mul(&module.left[j]);
            if let Some(p) = first_bad_column(&lhs, &rhs) {
                return Err(Error::AxiomViolation { identity: "(ab)p = a(bp)", a: i, b: j, p });
            }
            let lhs = module.right_matrix(&ij);
            let rhs = module.right[j].mul(&module.right[i]);
            if let Some(p) = first_bad_column(&lhs, &rhs) {
                return Err(Error::AxiomViolation { identity: "p(ab) = (pa)b", a: i, b: j, p });
            }
            let lhs = module.right[j].mul(&module.left[i]);
            let rhs = module.left[i].mul(&module.right[j]);
            if let Some(p) = first_bad_column(&lhs, &rhs) {
                return Err(Error::AxiomViolation { identity: "(ap)b = a(pb)", a: i, b: j, p });
            }
        }
    }
    let mut central_violation = None;
    'outer: for i in 0..n {
        if let Some(p) = first_bad_column(&module.left[i], &module.right[i]) {
            central_violation = Some((i, p));
            break 'outer;
        }
    }
    match central_violation {
        Some((i, p)) if require_central => Err(Error::CentralityViolation { a: i, p }),
        other => Ok(Bimodule { central: other.is_none(), ..module }),
    }
}

/// A `K`-linear map, as its matrix (codomain dim × domain dim).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinMap(pub Mat);

impl LinMap {
    pub fn zero(field: Field, dom: usize, cod: usize) -> LinMap {
        LinMap(Mat::zeros(field, cod, dom))
    }

    pub fn identity(field: Field, n: usize) -> LinMap {
        LinMap(Mat::identity(field, n))
    }

    pub fn matrix(&self) -> &Mat {
        &self.0
    }

    pub fn dom_dim(&self) -> usize {
        self.0.cols()
    }

    pub fn cod_dim(&self) -> usize {
        self.0.rows()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.0.mul_vec(v)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinMap) -> LinMap {
        LinMap(self.0.mul(&inner.0))
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        LinMap(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        LinMap(self.0.sub(&other.0))
    }

    pub fn scale(&self, s: &Scalar) -> LinMap {
        LinMap(self.0.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Row-major flattening; the coordinate system of every hom space.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.0.as_slice().to_vec()
    }

    pub fn unflatten(field: Field, dom: usize, cod: usize, v: Vec<Scalar>) -> LinMap {
        LinMap(Mat::from_flat(field, cod, dom, v))
    }

    /// The map sending the `j`-th domain basis vector to the `i`-th codomain one.
    pub fn matrix_unit(field: Field, dom: usize, cod: usize, i: usize, j: usize) -> LinMap {
        let mut m = Mat::zeros(field, cod, dom);
        m.set(i, j, field.one());
        LinMap(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomKind {
    KLinear,
    LeftHom,
    RightHom,
    BimoduleHom,
    Diff(usize),
}

/// A subspace of `Hom_K(P, Q)` in the row-major flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    pub dom_dim: usize,
    pub cod_dim: usize,
    pub kind: HomKind,
    pub space: Subspace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn maps(&self) -> Vec<LinMap> {
        self.space
            .basis_vectors()
            .into_iter()
            .map(|v| LinMap::unflatten(self.field(), self.dom_dim, self.cod_dim, v))
            .collect()
    }

    pub fn contains(&self, f: &LinMap) -> bool {
        f.dom_dim() == self.dom_dim && f.cod_dim() == self.cod_dim && self.space.contains(&f.flatten())
    }

    pub fn coordinates(&self, f: &LinMap) -> Option<Vec<Scalar>> {
        self.space.coordinates(&f.flatten())
    }

    pub fn from_coordinates(&self, c: &[Scalar]) -> LinMap {
        LinMap::unflatten(self.field(), self.dom_dim, self.cod_dim, self.space.from_coordinates(c))
    }
}

/// Solves linear conditions on an unknown map `dom → cod`. `conditions`
/// receives each matrix unit and returns the values of all conditions on it.
pub fn solve_map_conditions(
    field: Field,
    dom: usize,
    cod: usize,
    equations: usize,
    mut conditions: impl FnMut(&LinMap) -> Vec<Scalar>,
) -> Subspace {
    solve_conditions(field, dom * cod, equations, |t| {
        let (i, j) = (t / dom, t % dom);
        conditions(&LinMap::matrix_unit(field, dom, cod, i, j))
    })
}

fn check_same_algebra(p: &Bimodule, q: &Bimodule) -> Result<()> {
    if p.algebra != q.algebra {
        return Err(Error::Malformed("modules over different algebras".into()));
    }
    Ok(())
}

/// All maps `P → Q` of the given kind. Differential-operator kinds are
/// delegated to [`crate::commdiff::diff_space`].
pub fn hom_space(p: &Bimodule, q: &Bimodule, kind: HomKind) -> Result<HomSpace> {
    check_same_algebra(p, q)?;
    let field = p.field();
    let n = p.algebra.dim();
    let (mp, mq) = (p.dim, q.dim);
    let block = mp * mq;
    let space = match kind {
        HomKind::KLinear => Subspace::full(field, block),
        HomKind::LeftHom | HomKind::RightHom => {
            let (pa, qa) = if kind == HomKind::LeftHom { (&p.left, &q.left) } else { (&p.right, &q.right) };
            solve_map_conditions(field, mp, mq, n * block, |phi| {
                (0..n).flat_map(|i| qa[i].mul(&phi.0).sub(&phi.0.mul(&pa[i])).as_slice().to_vec()).collect()
            })
        }
        HomKind::BimoduleHom => solve_map_conditions(field, mp, mq, 2 * n * block, |phi| {
            let mut out = Vec::with_capacity(2 * n * block);
            for i in 0..n {
                out.extend_from_slice(q.left[i].mul(&phi.0).sub(&phi.0.mul(&p.left[i])).as_slice());
                out.extend_from_slice(q.right[i].mul(&phi.0).sub(&phi.0.mul(&p.right[i])).as_slice());
            }
            out
        }),
        HomKind::Diff(s) => return crate::commdiff::diff_space(p, q, s),
    };
    Ok(HomSpace { dom_dim: mp, cod_dim: mq, kind, space })
}

/// `p ↦ a φ(p)`
pub fn left_apply(q: &Bimodule, a: &AlgElem, phi: &LinMap) -> LinMap {
    LinMap(q.left_matrix(a).mul(&phi.0))
}

/// `p ↦ φ(a p)`
pub fn star_apply(p: &Bimodule, a: &AlgElem, phi: &LinMap) -> LinMap {
    LinMap(phi.0.mul(&p.left_matrix(a)))
}

/// Bookkeeping for `A ⊗_K P`: basis `e_i ⊗ f_j` at flat index `i·m + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    pub left_dim: usize,
    pub right_dim: usize,
}

impl TensorSpace {
    pub fn dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right_dim + j
    }

    pub fn split(&self, t: usize) -> (usize, usize) {
        (t / self.right_dim, t % self.right_dim)
    }

    /// Coordinates of `a ⊗ p`.
    pub fn pure(&self, a: &[Scalar], p: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.dim());
        for x in a {
            for y in p {
                out.push(x * y);
            }
        }
        out
    }

    /// Matrix of `f ⊗ g` acting on the tensor space.
    pub fn kron(&self, f: &Mat, g: &Mat) -> Mat {
        let (n, m) = (self.left_dim, self.right_dim);
        assert_eq!((f.rows(), f.cols(), g.rows(), g.cols()), (n, n, m, m), "operand shapes");
        let mut out = Mat::zeros(f.field(), n * m, n * m);
        for i in 0..n {
            for k in 0..n {
                let a = f.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    for l in 0..m {
                        let b = g.get(j, l);
                        if !b.is_zero() {
                            out.set(self.index(i, j), self.index(k, l), a * b);
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn tensor_over_k(a: &Algebra, p: &Bimodule) -> TensorSpace {
    TensorSpace { left_dim: a.dim(), right_dim: p.dim() }
}

/// `Z_P = {p : e_i p = p e_i for all i}`.
pub fn module_center(p: &Bimodule) -> Subspace {
    let n = p.algebra.dim();
    let m = p.dim;
    solve_conditions(p.field(), m, n * m, |j| {
        (0..n).flat_map(|i| crate::exactla::sub_vec(&p.left[i].column(j), &p.right[i].column(j))).collect()
    })
}
