//! Finite-dimensional associative unital algebras given by structure constants.

use crate::error::{Error, Result};
use crate::exactla::{solve_affine, solve_conditions, unit_vec, AffineSolution, Field, Mat, Scalar, Subspace};

/// An element of an algebra, in coordinates of the algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem(pub Vec<Scalar>);

impl AlgElem {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }
}

/// `e_i · e_j = Σ_k c[i][j][k] e_k`, validated associative and unital.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    dim: usize,
    structure: Vec<Scalar>,
    unit: Vec<Scalar>,
    names: Vec<String>,
    left: Vec<Mat>,
    right: Vec<Mat>,
}

/// Builders for the standard test algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinSpec {
    /// The ground field as a 1-dimensional algebra.
    Field,
    /// `n × n` matrices with the matrix-unit basis `E_ij`.
    Matrix(usize),
    /// `K[x]/(f)` for monic `f`, coefficients listed from the constant term up.
    PolyQuotient(Vec<Scalar>),
    /// `K[x]/(x²)`.
    DualNumbers,
    /// `K[x]/(x^n)`.
    Truncated(usize),
    DirectSum(Box<BuiltinSpec>, Box<BuiltinSpec>),
}

impl Algebra {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[self.idx(i, j, k)]
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> AlgElem {
        AlgElem(self.unit.clone())
    }

    pub fn basis(&self, i: usize) -> AlgElem {
        AlgElem(unit_vec(self.field, self.dim, i))
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem(vec![self.field.zero(); self.dim])
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_basis_matrix(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_basis_matrix(&self, i: usize) -> &Mat {
        &self.right[i]
    }

    pub fn left_matrix(&self, a: &AlgElem) -> Mat {
        combine(self.field, self.dim, &self.left, a.coords())
    }

    pub fn right_matrix(&self, a: &AlgElem) -> Mat {
        combine(self.field, self.dim, &self.right, a.coords())
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        assert_eq!(a.0.len(), self.dim, "element length");
        assert_eq!(b.0.len(), self.dim, "element length");
        let mut out = vec![self.field.zero(); self.dim];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.structure[self.idx(i, j, k)];
                    if !c.is_zero() {
                        *o += &(&ab * c);
                    }
                }
            }
        }
        AlgElem(out)
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(crate::exactla::add_vec(&a.0, &b.0))
    }

    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(crate::exactla::sub_vec(&a.0, &b.0))
    }

    pub fn commutator(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// `Z_A = {z : z e_i = e_i z for all i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        solve_conditions(self.field, n, n * n, |j| {
            // z = e_j; condition block i is e_j e_i - e_i e_j
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for k in 0..n {
                    out.push(self.structure_constant(j, i, k) - self.structure_constant(i, j, k));
                }
            }
            out
        })
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    /// A basis pair `(i, j)` with `e_i e_j != e_j e_i`. Among all such pairs the
    /// one whose commutator has the most nonzero coordinates is returned,
    /// ties going to the lexicographically first pair.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        let mut best: Option<((usize, usize), usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                let support =
                    (0..n).filter(|&k| self.structure_constant(i, j, k) != self.structure_constant(j, i, k)).count();
                if support > 0 && best.is_none_or(|(_, s)| support > s) {
                    best = Some(((i, j), support));
                }
            }
        }
        best.map(|(pair, _)| pair)
    }

    /// Human-readable form of an element, e.g. `E11 - E22`.
    pub fn format(&self, a: &AlgElem) -> String {
        format_vector(&self.names, a.coords())
    }
}

fn combine(field: Field, n: usize, mats: &[Mat], coords: &[Scalar]) -> Mat {
    let mut out = Mat::zeros(field, n, n);
    for (m, c) in mats.iter().zip(coords) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

/// Renders `Σ v_i name_i`; over GF(p) residues above p/2 are shown as negatives.
pub fn format_vector(names: &[String], v: &[Scalar]) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = signed_parts(c);
        let term = if mag == "1" { name.clone() } else { format!("{mag}*{name}") };
        terms.push((neg, term));
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, t)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{t}")),
            (0, false) => out.push_str(&t),
            (_, true) => out.push_str(&format!(" - {t}")),
            (_, false) => out.push_str(&format!(" + {t}")),
        }
    }
    out
}

fn signed_parts(c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Mod { value, p } => {
            if *value > p / 2 {
                (true, (p - value).to_string())
            } else {
                (false, value.to_string())
            }
        }
        Scalar::Rat(_) => {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        }
    }
}

/// Validates structure constants (flattened `n×n×n`, index `(i*n+j)*n+k`) and a unit.
/// Unit laws are checked before associativity.
pub fn make_algebra(
    field: Field,
    dim: usize,
    structure: Vec<Scalar>,
    unit: Vec<Scalar>,
    names: Option<Vec<String>>,
) -> Result<Algebra> {
    if structure.len() != dim * dim * dim {
        return Err(Error::Malformed(format!("structure has {} constants, expected {}", structure.len(), dim.pow(3))));
    }
    if unit.len() != dim {
        return Err(Error::Malformed(format!("unit has {} coordinates, expected {dim}", unit.len())));
    }
    if structure.iter().chain(&unit).any(|s| s.field() != field) {
        return Err(Error::Malformed(format!("entries must all lie in {field}")));
    }
    let names = match names {
        Some(n) if n.len() == dim => n,
        Some(n) => return Err(Error::Malformed(format!("{} basis names for dimension {dim}", n.len()))),
        None => (0..dim).map(|i| format!("e{i}")).collect(),
    };
    let mut left = Vec::with_capacity(dim);
    let mut right = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut l = Mat::zeros(field, dim, dim);
        let mut r = Mat::zeros(field, dim, dim);
        for j in 0..dim {
            for k in 0..dim {
                l.set(k, j, structure[(i * dim + j) * dim + k].clone());
                r.set(k, j, structure[(j * dim + i) * dim + k].clone());
            }
        }
        left.push(l);
        right.push(r);
    }
    let alg = Algebra { field, dim, structure, unit, names, left, right };

    let one = alg.unit();
    for i in 0..dim {
        let e = alg.basis(i);
        if alg.mul(&one, &e) != e || alg.mul(&e, &one) != e {
            return Err(Error::UnitViolation(i));
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            let eij = alg.mul(&alg.basis(i), &alg.basis(j));
            for k in 0..dim {
                let lhs = alg.mul(&eij, &alg.basis(k));
                let rhs = alg.mul(&alg.basis(i), &alg.mul(&alg.basis(j), &alg.basis(k)));
                if lhs != rhs {
                    return Err(Error::AssociativityViolation(i, j, k));
                }
            }
        }
    }
    Ok(alg)
}

/// Solves the unit laws for a two-sided unit, if one exists.
pub fn find_unit(field: Field, dim: usize, structure: &[Scalar]) -> Option<Vec<Scalar>> {
    // unknown u: Σ_t u_t c[t][i][k] = δ_ik and Σ_t u_t c[i][t][k] = δ_ik
    let rows = 2 * dim * dim;
    let mut m = Mat::zeros(field, rows, dim);
    let mut b = vec![field.zero(); rows];
    for i in 0..dim {
        for k in 0..dim {
            let r1 = i * dim + k;
            let r2 = dim * dim + r1;
            for t in 0..dim {
                m.set(r1, t, structure[(t * dim + i) * dim + k].clone());
                m.set(r2, t, structure[(i * dim + t) * dim + k].clone());
            }
            if i == k {
                b[r1] = field.one();
                b[r2] = field.one();
            }
        }
    }
    match solve_affine(&m, &b).ok()? {
        AffineSolution::Feasible { particular, .. } => Some(particular),
        AffineSolution::Infeasible(_) => None,
    }
}

pub fn builtin_algebra(field: Field, spec: &BuiltinSpec) -> Result<Algebra> {
    match spec {
        BuiltinSpec::Field => matrix_algebra(field, 1).map(|a| rename(a, vec!["1".into()])),
        BuiltinSpec::Matrix(n) => matrix_algebra(field, *n),
        BuiltinSpec::DualNumbers => poly_quotient(field, &[field.zero(), field.zero(), field.one()]),
        BuiltinSpec::Truncated(n) => {
            if *n == 0 {
                return Err(Error::NonMonic);
            }
            let mut f = vec![field.zero(); n + 1];
            f[*n] = field.one();
            poly_quotient(field, &f)
        }
        BuiltinSpec::PolyQuotient(f) => poly_quotient(field, f),
        BuiltinSpec::DirectSum(a, b) => {
            let a = builtin_algebra(field, a)?;
            let b = builtin_algebra(field, b)?;
            direct_sum(&a, &b)
        }
    }
}

fn rename(mut a: Algebra, names: Vec<String>) -> Algebra {
    a.names = names;
    a
}

/// `M_n(K)` with basis `E_ij` in row-major order; `E_ij E_kl = δ_jk E_il`.
pub fn matrix_algebra(field: Field, n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::Malformed("matrix size must be at least 1".into()));
    }
    let d = n * n;
    let mut c = vec![field.zero(); d * d * d];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                // E_ij E_jl = E_il
                let a = i * n + j;
                let b = j * n + l;
                let out = i * n + l;
                c[(a * d + b) * d + out] = field.one();
            }
        }
    }
    let mut unit = vec![field.zero(); d];
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    let names = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect();
    make_algebra(field, d, c, unit, Some(names))
}

/// `K[x]/(f)` with the power basis; `f` given by coefficients from the constant term up.
pub fn poly_quotient(field: Field, f: &[Scalar]) -> Result<Algebra> {
    let deg = match f.len() {
        0 | 1 => return Err(Error::NonMonic),
        l => l - 1,
    };
    if !f[deg].is_one() {
        return Err(Error::NonMonic);
    }
    // powers[m] = coordinates of x^m reduced mod f, for m < 2 deg - 1
    let mut powers: Vec<Vec<Scalar>> = Vec::new();
    for m in 0..(2 * deg).max(1) {
        if m < deg {
            powers.push(unit_vec(field, deg, m));
        } else {
            // x^m = x · x^{m-1}
            let prev = &powers[m - 1];
            let mut next = vec![field.zero(); deg];
            next[1..].clone_from_slice(&prev[..deg - 1]);
            let top = &prev[deg - 1];
            for t in 0..deg {
                next[t] -= &(top * &f[t]);
            }
            powers.push(next);
        }
    }
    let mut c = vec![field.zero(); deg * deg * deg];
    for i in 0..deg {
        for j in 0..deg {
            for k in 0..deg {
                c[(i * deg + j) * deg + k] = powers[i + j][k].clone();
            }
        }
    }
    let names = (0..deg)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    make_algebra(field, deg, c, unit_vec(field, deg, 0), Some(names))
}

/// `A × B` with componentwise product; basis of `A` first, then of `B`.
pub fn direct_sum(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.field != b.field {
        return Err(Error::Malformed("summands over different fields".into()));
    }
    let field = a.field;
    let (n, m) = (a.dim, b.dim);
    let d = n + m;
    let mut c = vec![field.zero(); d * d * d];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[(i * d + j) * d + k] = a.structure_constant(i, j, k).clone();
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                c[((n + i) * d + n + j) * d + n + k] = b.structure_constant(i, j, k).clone();
            }
        }
    }
    let mut unit = a.unit.clone();
    unit.extend(b.unit.iter().cloned());
    let names = a.names.iter().map(|s| format!("({s},0)")).chain(b.names.iter().map(|s| format!("(0,{s})"))).collect();
    make_algebra(field, d, c, unit, Some(names))
}
