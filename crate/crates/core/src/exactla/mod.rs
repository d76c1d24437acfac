//! Exact linear algebra over `Q` and prime fields.

pub(crate) mod elim;
mod mat;
mod scalar;
mod subspace;

pub use mat::Mat;
pub use scalar::{Field, Scalar};
pub use subspace::{
    kernel, meet_join, quotient_by, solve_affine, AffineSolution, Certificate, LinearSystem, Quotient, Subspace,
};

/// Solves a homogeneous family of linear conditions on `unknowns` scalars.
/// `image(j)` returns the condition values produced by the `j`-th unit vector.
pub fn solve_conditions(
    field: Field,
    unknowns: usize,
    equations: usize,
    mut image: impl FnMut(usize) -> Vec<Scalar>,
) -> Subspace {
    let mut sys = LinearSystem::new(field, equations);
    for j in 0..unknowns {
        sys.push_column(&image(j));
    }
    sys.kernel()
}

pub fn zero_vec(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(s: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| s * x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}
