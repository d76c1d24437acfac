use std::sync::Arc;

use jetcalc::algcore::builtin_algebra;
use jetcalc::bimod::{hom_space, regular_bimodule};
use jetcalc::commdiff::{check_iso_n1, delta, derivation_space, diff_space, is_diff_op};
use jetcalc::jetmod::{check_iso_550, j1_is_first_order, jet_module};
use jetcalc::{AlgElem, Algebra, BuiltinSpec, Field, HomKind, LinMap, Mat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alg(field: Field, spec: BuiltinSpec) -> Arc<Algebra> {
    Arc::new(builtin_algebra(field, &spec).unwrap())
}

fn kxk() -> BuiltinSpec {
    BuiltinSpec::DirectSum(Box::new(BuiltinSpec::Field), Box::new(BuiltinSpec::Field))
}

// Dual numbers over GF(3) with c0 + c1 x stored as [c0, c1], multiplied by hand.
fn dual_mul(a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
    [(a[0] * b[0]) % 3, (a[0] * b[1] + a[1] * b[0]) % 3]
}

#[test]
fn gf3_dual_numbers_enumeration() {
    let elems: Vec<[u64; 2]> = (0..9).map(|c| [c % 3, c / 3]).collect();
    let mut good = Vec::new();
    for code in 0..81u64 {
        let d: Vec<u64> = (0..4).map(|i| (code / 3u64.pow(i)) % 3).collect();
        // column 0 is Δ(1), column 1 is Δ(x)
        let apply = |v: [u64; 2]| [(d[0] * v[0] + d[1] * v[1]) % 3, (d[2] * v[0] + d[3] * v[1]) % 3];
        let first_order = elems.iter().all(|&a| {
            elems.iter().all(|&b| {
                elems.iter().all(|&p| {
                    let t1 = apply(dual_mul(dual_mul(a, b), p));
                    let t2 = dual_mul(a, apply(dual_mul(b, p)));
                    let t3 = dual_mul(b, apply(dual_mul(a, p)));
                    let t4 = dual_mul(dual_mul(a, b), apply(p));
                    (0..2).all(|k| (t1[k] + 6 - t2[k] - t3[k] + t4[k]).is_multiple_of(3))
                })
            })
        });
        if first_order {
            good.push(d);
        }
    }
    assert_eq!(good.len(), 27);

    let f = Field::prime(3).unwrap();
    let a = alg(f, BuiltinSpec::DualNumbers);
    let reg = regular_bimodule(&a);
    let space = diff_space(&reg, &reg, 1).unwrap();
    assert_eq!(3usize.pow(space.dim() as u32), good.len());
    for d in &good {
        let m = Mat::from_flat(f, 2, 2, d.iter().map(|&x| f.from_i64(x as i64)).collect());
        assert!(space.contains(&LinMap(m)));
    }
}

// K[x]/(x^n) in characteristic not dividing n: Der has dim n - 1 (D(x) ∈ (x)),
// Diff_1 = A ⊕ Der, J^1 = A ⊕ Ω^1 with Ω^1 = A dx / (x^{n-1} dx).
#[test]
fn truncated_polynomial_dimensions() {
    for field in [Field::Rationals, Field::prime(7).unwrap()] {
        for n in 2..=4 {
            let a = alg(field, BuiltinSpec::Truncated(n));
            let reg = regular_bimodule(&a);
            assert_eq!(diff_space(&reg, &reg, 0).unwrap().dim(), n);
            assert_eq!(derivation_space(&a, &reg).dim(), n - 1);
            assert_eq!(diff_space(&reg, &reg, 1).unwrap().dim(), 2 * n - 1);
            let j1 = jet_module(&reg, 1).unwrap();
            assert_eq!(j1.dim(), 2 * n - 1);
            assert_eq!(j1.mu().dim(), (n - 1) * (n - 1));
        }
    }
}

#[test]
fn product_of_fields_has_no_derivations() {
    let a = alg(Field::Rationals, kxk());
    let reg = regular_bimodule(&a);
    assert_eq!(derivation_space(&a, &reg).dim(), 0);
    assert_eq!(diff_space(&reg, &reg, 1).unwrap().space, diff_space(&reg, &reg, 0).unwrap().space);
    assert_eq!(jet_module(&reg, 1).unwrap().dim(), 2);
}

#[test]
fn isomorphisms_and_jets_on_corpus() {
    for field in [Field::Rationals, Field::prime(7).unwrap()] {
        for spec in [BuiltinSpec::Truncated(2), BuiltinSpec::Truncated(3), BuiltinSpec::Truncated(4), kxk()] {
            let a = alg(field, spec);
            let reg = regular_bimodule(&a);
            let d: Vec<_> = (0..=2).map(|s| diff_space(&reg, &reg, s).unwrap()).collect();
            assert!(d[0].space.is_subspace_of(&d[1].space) && d[1].space.is_subspace_of(&d[2].space));
            assert_eq!(d[0].space, hom_space(&reg, &reg, HomKind::LeftHom).unwrap().space);
            for iso in [check_iso_n1(&reg, &reg).unwrap(), check_iso_550(&reg, &reg).unwrap()] {
                assert!(iso.bijective, "{iso:?}");
            }
            let j1 = jet_module(&reg, 1).unwrap();
            let j1_mod = j1.as_bimodule().unwrap();
            assert_eq!(hom_space(&j1_mod, &reg, HomKind::LeftHom).unwrap().dim(), d[1].dim());
            assert_eq!(j1.pi_map().unwrap().compose(j1.jk_map()), LinMap::identity(field, a.dim()));
            assert!(j1_is_first_order(&reg).unwrap().is_verified());

            let j2 = jet_module(&reg, 2).unwrap();
            let j2_mod = j2.as_bimodule().unwrap();
            assert_eq!(hom_space(&j2_mod, &reg, HomKind::LeftHom).unwrap().dim(), d[2].dim());
            assert!(is_diff_op(&reg, &j2_mod, j2.jk_map(), 2).unwrap().is_verified());
        }
    }
}

#[test]
fn delta_is_linear_in_c() {
    let f = Field::prime(7).unwrap();
    let a = alg(f, BuiltinSpec::Truncated(3));
    let reg = regular_bimodule(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut scalar = || f.from_i64(rng.gen_range(0..7));
    for _ in 0..100 {
        let c1 = AlgElem((0..3).map(|_| scalar()).collect());
        let c2 = AlgElem((0..3).map(|_| scalar()).collect());
        let lambda = scalar();
        let phi = LinMap(Mat::from_flat(f, 3, 3, (0..9).map(|_| scalar()).collect()));
        let combo = AlgElem(c1.0.iter().zip(&c2.0).map(|(x, y)| x + &(&lambda * y)).collect());
        let lhs = delta(&reg, &reg, &combo, &phi);
        let rhs = delta(&reg, &reg, &c1, &phi).add(&delta(&reg, &reg, &c2, &phi).scale(&lambda));
        assert_eq!(lhs, rhs);
        assert!(lhs.0.as_slice().iter().all(|s: &Scalar| s.field() == f));
    }
}
