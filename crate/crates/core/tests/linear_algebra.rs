use jetcalc::exactla::{kernel, solve_affine, AffineSolution};
use jetcalc::{Field, Mat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mat(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize, range: std::ops::Range<i64>) -> Mat {
    let data = (0..rows * cols).map(|_| field.from_i64(rng.gen_range(range.clone()))).collect();
    Mat::from_flat(field, rows, cols, data)
}

// Every vector of GF(3)^4, counted by hand.
#[test]
fn kernel_size_matches_enumeration_over_gf3() {
    let f = Field::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let m = random_mat(&mut rng, f, 3, 4, 0..3);
        let mut count = 0u32;
        for code in 0..81u32 {
            let x: Vec<Scalar> = (0..4).map(|i| f.from_i64(((code / 3u32.pow(i)) % 3) as i64)).collect();
            if m.mul_vec(&x).iter().all(Scalar::is_zero) {
                count += 1;
            }
        }
        let k = kernel(&m);
        assert_eq!(count, 3u32.pow(k.dim() as u32));
        assert_eq!(k.dim() + m.rank(), 4);
    }
}

#[test]
fn affine_solutions_and_certificates_over_q() {
    let f = Field::Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut feasible, mut infeasible) = (0, 0);
    for round in 0..100 {
        let m = random_mat(&mut rng, f, 4, 3, -3..4);
        let b: Vec<Scalar> = if round % 2 == 0 {
            let x: Vec<Scalar> = (0..3).map(|_| f.from_i64(rng.gen_range(-3..4))).collect();
            m.mul_vec(&x)
        } else {
            (0..4).map(|_| f.from_i64(rng.gen_range(-3..4))).collect()
        };
        match solve_affine(&m, &b).unwrap() {
            AffineSolution::Feasible { particular, homogeneous } => {
                feasible += 1;
                assert_eq!(m.mul_vec(&particular), b);
                for v in homogeneous.basis_vectors() {
                    assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
                }
            }
            AffineSolution::Infeasible(cert) => {
                infeasible += 1;
                let mut row = vec![f.zero(); 3];
                let mut rhs = f.zero();
                for (i, y) in &cert.combination {
                    for (j, r) in row.iter_mut().enumerate() {
                        *r = &*r + &(y * m.get(*i, j));
                    }
                    rhs = &rhs + &(y * &b[*i]);
                }
                assert!(row.iter().all(Scalar::is_zero));
                assert!(!rhs.is_zero());
                assert_eq!(rhs, cert.residual);
            }
        }
    }
    assert!(feasible > 0 && infeasible > 0, "{feasible} feasible, {infeasible} infeasible");
}
