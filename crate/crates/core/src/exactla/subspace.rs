use num_rational::BigRational;

use super::elim::{lift_vec, lower_vec, null_vectors, with_arith, Arith, Echelon, ModP, Rat, Reduced};
use super::mat::Mat;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A subspace of `K^n`, stored as its canonical reduced row-echelon basis.
/// Two equal subspaces have identical representations, so `==` is subspace
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let rows = vectors.to_vec();
        Subspace::from_rows(&Mat::from_rows(field, ambient, rows).expect("vector lengths"))
    }

    /// Row space of `m`.
    pub fn from_rows(m: &Mat) -> Subspace {
        let (basis, pivots) = m.rref();
        Subspace { ambient: m.cols(), basis, pivots }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "ambient dimension");
        let mut r = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            if r[c].is_zero() {
                continue;
            }
            let f = r[c].clone();
            for (k, b) in self.basis.row(i).iter().enumerate().skip(c) {
                if !b.is_zero() {
                    r[k] = &r[k] - &(&f * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` is a member.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
    }

    pub fn from_coordinates(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(), "coordinate count");
        let mut out = vec![self.field().zero(); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    out[k] += &(c * b);
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// Vectors `w` with `w · v = 0` for every `v` in the subspace.
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis)
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension");
        Subspace::from_rows(&self.basis.vstack(&other.basis))
    }

    pub fn meet(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension");
        let ann = self.annihilator().join(&other.annihilator());
        ann.annihilator()
    }

    /// Image of the subspace under `m` (acting on column vectors).
    pub fn image_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map domain");
        let imgs: Vec<Vec<Scalar>> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.field(), m.rows(), &imgs)
    }
}

/// `{v : m v = 0}` in canonical form.
pub fn kernel(m: &Mat) -> Subspace {
    let field = m.field();
    let cols = m.cols();
    let vectors = with_arith!(field, |ar| {
        let mut e = Echelon::new(ar, cols, false, false);
        for i in 0..m.rows() {
            e.push(i, lift_vec(ar, m.row(i)));
        }
        let red = e.finish();
        null_vectors(ar, &red.rows, &red.pivots, cols).iter().map(|v| lower_vec(ar, v)).collect::<Vec<_>>()
    });
    Subspace::span(field, cols, &vectors)
}

/// A proof that `M x = b` has no solution: `Σ y_i M_i = 0` while `Σ y_i b_i = residual ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Sparse `(equation index, coefficient)` pairs, sorted by index.
    pub combination: Vec<(usize, Scalar)>,
    pub residual: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Feasible { particular: Vec<Scalar>, homogeneous: Subspace },
    Infeasible(Certificate),
}

impl AffineSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AffineSolution::Feasible { .. })
    }
}

/// Full solution set of `m x = b`.
pub fn solve_affine(m: &Mat, b: &[Scalar]) -> Result<AffineSolution> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!("rhs has {} entries, matrix has {} rows", b.len(), m.rows())));
    }
    let mut sys = LinearSystem::new(m.field(), m.rows());
    for j in 0..m.cols() {
        sys.push_column(&m.column(j));
    }
    sys.set_rhs(b.to_vec());
    Ok(sys.solve(true))
}

/// Intersection and sum of two subspaces; the modular law
/// `dim(a ∩ b) + dim(a + b) = dim a + dim b` is checked on the way out.
pub fn meet_join(a: &Subspace, b: &Subspace) -> Result<(Subspace, Subspace)> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Dimension(format!("ambient {} vs {}", a.ambient_dim(), b.ambient_dim())));
    }
    let meet = a.meet(b);
    let join = a.join(b);
    if meet.dim() + join.dim() != a.dim() + b.dim() {
        return Err(Error::Internal("modular law violated".into()));
    }
    Ok((meet, join))
}

enum Store {
    Mod(u64, Vec<Vec<u64>>),
    Rat(Vec<Vec<BigRational>>),
}

/// A linear system assembled column by column, i.e. by recording the image
/// of each unknown's unit vector. Kept in backend form so that large modular
/// systems stay compact.
pub struct LinearSystem {
    field: Field,
    equations: usize,
    store: Store,
    rhs: Vec<Scalar>,
}

impl LinearSystem {
    pub fn new(field: Field, equations: usize) -> LinearSystem {
        let store = match field {
            Field::Prime(p) => Store::Mod(p, Vec::new()),
            Field::Rationals => Store::Rat(Vec::new()),
        };
        LinearSystem { field, equations, store, rhs: vec![field.zero(); equations] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn equations(&self) -> usize {
        self.equations
    }

    pub fn unknowns(&self) -> usize {
        match &self.store {
            Store::Mod(_, c) => c.len(),
            Store::Rat(c) => c.len(),
        }
    }

    pub fn push_column(&mut self, col: &[Scalar]) {
        assert_eq!(col.len(), self.equations, "column length");
        match &mut self.store {
            Store::Mod(p, cols) => cols.push(lift_vec(&ModP(*p), col)),
            Store::Rat(cols) => cols.push(lift_vec(&Rat, col)),
        }
    }

    pub fn set_rhs(&mut self, rhs: Vec<Scalar>) {
        assert_eq!(rhs.len(), self.equations, "rhs length");
        self.rhs = rhs;
    }

    pub fn rhs(&self) -> &[Scalar] {
        &self.rhs
    }

    fn reduce<A: Arith>(&self, ar: &A, cols: &[Vec<A::E>], augmented: bool, certify: bool) -> Reduced<A::E> {
        let width = cols.len();
        let mut e = Echelon::new(ar, width, augmented, certify);
        for i in 0..self.equations {
            let mut row: Vec<A::E> = cols.iter().map(|c| c[i].clone()).collect();
            if augmented {
                row.push(ar.lift(&self.rhs[i]));
            }
            e.push(i, row);
            if e.is_inconsistent() {
                break;
            }
        }
        e.finish()
    }

    fn solve_with<A: Arith>(&self, ar: &A, cols: &[Vec<A::E>], certify: bool) -> AffineSolution {
        let width = cols.len();
        let red = self.reduce(ar, cols, true, certify);
        if let Some((comb, residual)) = red.inconsistency {
            return AffineSolution::Infeasible(Certificate {
                combination: comb.into_iter().map(|(i, v)| (i, ar.lower(&v))).collect(),
                residual: ar.lower(&residual),
            });
        }
        let mut particular = vec![self.field.zero(); width];
        for (row, &c) in red.rows.iter().zip(&red.pivots) {
            particular[c] = ar.lower(&row[width]);
        }
        let coeff: Vec<Vec<A::E>> = red.rows.iter().map(|r| r[..width].to_vec()).collect();
        let null: Vec<Vec<Scalar>> =
            null_vectors(ar, &coeff, &red.pivots, width).iter().map(|v| lower_vec(ar, v)).collect();
        AffineSolution::Feasible { particular, homogeneous: Subspace::span(self.field, width, &null) }
    }

    /// Solves `M x = rhs`. The particular solution sets every free unknown to 0.
    /// With `certify`, infeasibility comes with a combination of equations.
    pub fn solve(&self, certify: bool) -> AffineSolution {
        match &self.store {
            Store::Mod(p, cols) => self.solve_with(&ModP(*p), cols, certify),
            Store::Rat(cols) => self.solve_with(&Rat, cols, certify),
        }
    }

    /// Solution space of the homogeneous system `M x = 0`.
    pub fn kernel(&self) -> Subspace {
        fn run<A: Arith>(sys: &LinearSystem, ar: &A, cols: &[Vec<A::E>]) -> Subspace {
            let red = sys.reduce(ar, cols, false, false);
            let null: Vec<Vec<Scalar>> =
                null_vectors(ar, &red.rows, &red.pivots, cols.len()).iter().map(|v| lower_vec(ar, v)).collect();
            Subspace::span(sys.field, cols.len(), &null)
        }
        match &self.store {
            Store::Mod(p, cols) => run(self, &ModP(*p), cols),
            Store::Rat(cols) => run(self, &Rat, cols),
        }
    }

    /// `M x - rhs`.
    pub fn residual(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.unknowns(), "unknown count");
        fn run<A: Arith>(sys: &LinearSystem, ar: &A, cols: &[Vec<A::E>], x: &[Scalar]) -> Vec<Scalar> {
            let xs = lift_vec(ar, x);
            let mut out: Vec<A::E> = lift_vec(ar, &sys.rhs).iter().map(|b| ar.neg(b)).collect();
            for (col, xj) in cols.iter().zip(&xs) {
                if ar.is_zero(xj) {
                    continue;
                }
                let neg = ar.neg(xj);
                for (o, c) in out.iter_mut().zip(col) {
                    if !ar.is_zero(c) {
                        ar.sub_mul(o, &neg, c);
                    }
                }
            }
            lower_vec(ar, &out)
        }
        match &self.store {
            Store::Mod(p, cols) => run(self, &ModP(*p), cols, x),
            Store::Rat(cols) => run(self, &Rat, cols, x),
        }
    }

    /// Checks that the certificate annihilates every column and leaves the stated nonzero residual.
    pub fn verify_certificate(&self, cert: &Certificate) -> bool {
        if cert.residual.is_zero() || cert.combination.iter().any(|(i, _)| *i >= self.equations) {
            return false;
        }
        fn run<A: Arith>(sys: &LinearSystem, ar: &A, cols: &[Vec<A::E>], cert: &Certificate) -> bool {
            let comb: Vec<(usize, A::E)> = cert.combination.iter().map(|(i, v)| (*i, ar.lift(v))).collect();
            let columns_vanish = cols.iter().all(|col| {
                let mut acc = ar.zero();
                for (i, y) in &comb {
                    let neg = ar.neg(y);
                    ar.sub_mul(&mut acc, &neg, &col[*i]);
                }
                ar.is_zero(&acc)
            });
            let mut rhs = ar.zero();
            for (i, y) in &comb {
                let neg = ar.neg(y);
                ar.sub_mul(&mut rhs, &neg, &ar.lift(&sys.rhs[*i]));
            }
            columns_vanish && ar.lower(&rhs) == cert.residual
        }
        match &self.store {
            Store::Mod(p, cols) => run(self, &ModP(*p), cols, cert),
            Store::Rat(cols) => run(self, &Rat, cols, cert),
        }
    }
}

/// `K^n / relations`, with an explicit complement (spanned by the standard
/// basis vectors at non-pivot positions of the relation basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    relations: Subspace,
    /// ambient × quotient-dim; columns are the chosen complement basis
    section: Mat,
    /// quotient-dim × ambient
    projection: Mat,
    free: Vec<usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn section(&self) -> &Mat {
        &self.section
    }

    pub fn projection(&self) -> &Mat {
        &self.projection
    }

    /// Ambient coordinates lifted into the complement, one per quotient coordinate.
    pub fn complement_columns(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.projection.mul_vec(v)
    }

    pub fn embed(&self, q: &[Scalar]) -> Vec<Scalar> {
        self.section.mul_vec(q)
    }

    /// The matrix of a linear endomorphism of the ambient space, pushed to the
    /// quotient. Only meaningful when `m` preserves the relations.
    pub fn induced(&self, m: &Mat) -> Mat {
        self.projection.mul(m).mul(&self.section)
    }
}

pub fn quotient_by(relations: &Subspace) -> Quotient {
    let field = relations.field();
    let n = relations.ambient_dim();
    let mut is_pivot = vec![None; n];
    for (i, &c) in relations.pivots().iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let free: Vec<usize> = (0..n).filter(|&c| is_pivot[c].is_none()).collect();
    let q = free.len();
    let mut section = Mat::zeros(field, n, q);
    let mut projection = Mat::zeros(field, q, n);
    for (k, &c) in free.iter().enumerate() {
        section.set(c, k, field.one());
        projection.set(k, c, field.one());
    }
    // e_c for a pivot column c is congruent to minus the free part of its relation row
    for (j, slot) in is_pivot.iter().enumerate() {
        if let Some(i) = slot {
            let row = relations.basis().row(*i);
            for (k, &c) in free.iter().enumerate() {
                if !row[c].is_zero() {
                    projection.set(k, j, -&row[c]);
                }
            }
        }
    }
    Quotient { relations: relations.clone(), section, projection, free }
}
