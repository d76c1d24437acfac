//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use jetcalc::algcore::builtin_algebra;
use jetcalc::bimod::{hom_space, regular_bimodule};
use jetcalc::commdiff::{check_iso_n1, decompose_first_order, delta, derivation_space, diff_space};
use jetcalc::exactla::unit_vec;
use jetcalc::io::{parse_doc, to_json, WitnessDoc};
use jetcalc::jetmod::check_iso_550;
use jetcalc::jetmod::{contraction, j1_is_first_order, jet_module, nc_jet_defect, JetDefect};
use jetcalc::ncdiff::{
    center_obstruction, dv_check, first_order_on_ring, inner_derivation, inner_generator, n21_check, n21_solve,
    nc_derivation_space, nc_zero_order_failure, universal_calculus_truncated, DVConnection, N21Outcome, N21Problem,
    N21Status,
};
use jetcalc::{AlgElem, Algebra, BuiltinSpec, Field, HomKind, LinMap, Mat, Scalar, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || format!("{what} took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn jetcalc(args: &[&Path]) -> Result<i32, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_jetcalc")).args(args).output().map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "jetcalc killed by signal".to_string())
}

fn read_json(p: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn check<'a>(report: &'a Value, id: &str) -> Result<&'a Value, String> {
    report["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["id"] == id))
        .ok_or_else(|| format!("report has no check {id}"))
}

fn dim(report: &Value, id: &str, key: &str) -> Result<u64, String> {
    check(report, id)?["dims"][key].as_u64().ok_or_else(|| format!("{id} has no dim {key}"))
}

fn gf7() -> Field {
    Field::prime(7).unwrap()
}

fn alg(field: Field, spec: &BuiltinSpec) -> Arc<Algebra> {
    Arc::new(builtin_algebra(field, spec).unwrap())
}

fn corpus() -> Vec<(String, Arc<Algebra>)> {
    let kxk = BuiltinSpec::DirectSum(Box::new(BuiltinSpec::Field), Box::new(BuiltinSpec::Field));
    let specs = [
        ("K[x]/(x^2)", BuiltinSpec::Truncated(2)),
        ("K[x]/(x^3)", BuiltinSpec::Truncated(3)),
        ("K[x]/(x^4)", BuiltinSpec::Truncated(4)),
        ("KxK", kxk),
    ];
    let mut out = Vec::new();
    for field in [gf7(), Field::Rationals] {
        for (name, spec) in &specs {
            out.push((format!("{name} over {field}"), alg(field, spec)));
        }
    }
    out
}

fn random_scalar(rng: &mut ChaCha8Rng, f: Field) -> Scalar {
    f.from_i64(rng.gen_range(-3..7))
}

// Dual numbers with integer coordinates [c0, c1] = c0 + c1 x.
fn dual_mul(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] * b[0], a[0] * b[1] + a[1] * b[0]]
}

/// The first order condition on dual numbers, written out by hand: one row per
/// basis triple and output coordinate, one column per entry `d[k·2 + j]` of `Δ`.
fn dual_condition_rows() -> Vec<Vec<i64>> {
    let basis = [[1, 0], [0, 1]];
    // coefficient of d[k*2+j] in coordinate m of u·Δ(v) is (u e_k)_m v_j
    let term = |u: [i64; 2], v: [i64; 2], m: usize| -> Vec<i64> {
        let mut row = vec![0; 4];
        for k in 0..2 {
            for j in 0..2 {
                row[k * 2 + j] = dual_mul(u, basis[k])[m] * v[j];
            }
        }
        row
    };
    let one = [1, 0];
    let mut rows = Vec::new();
    for a in basis {
        for b in basis {
            for p in basis {
                for m in 0..2 {
                    let ab = dual_mul(a, b);
                    let parts = [
                        (1, term(one, dual_mul(ab, p), m)),
                        (-1, term(a, dual_mul(b, p), m)),
                        (-1, term(b, dual_mul(a, p), m)),
                        (1, term(ab, p, m)),
                    ];
                    rows.push((0..4).map(|c| parts.iter().map(|(s, r)| s * r[c]).sum()).collect());
                }
            }
        }
    }
    rows
}

fn gf3_first_order_count() -> usize {
    let elems: Vec<[i64; 2]> = (0..9).map(|c| [c % 3, c / 3]).collect();
    (0..81i64)
        .filter(|code| {
            let d: Vec<i64> = (0..4).map(|i| (code / 3i64.pow(i)) % 3).collect();
            let apply = |v: [i64; 2]| [d[0] * v[0] + d[1] * v[1], d[2] * v[0] + d[3] * v[1]];
            elems.iter().all(|&a| {
                elems.iter().all(|&b| {
                    elems.iter().all(|&p| {
                        let t1 = apply(dual_mul(dual_mul(a, b), p));
                        let t2 = dual_mul(a, apply(dual_mul(b, p)));
                        let t3 = dual_mul(b, apply(dual_mul(a, p)));
                        let t4 = dual_mul(dual_mul(a, b), apply(p));
                        (0..2).all(|k| (t1[k] - t2[k] - t3[k] + t4[k]).rem_euclid(3) == 0)
                    })
                })
            })
        })
        .count()
}

fn ac1() -> Outcome {
    let count = gf3_first_order_count();
    ensure(count == 27, || format!("GF(3) enumeration found {count} first order maps, expected 27"))?;
    let rows = dual_condition_rows();
    let row_refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();

    let mut elapsed = Duration::ZERO;
    for (tag, field) in [("Q", Field::Rationals), ("Fp:7", gf7())] {
        let oracle_diff1 = 4 - Mat::from_i64(field, &row_refs).rank();
        ensure(oracle_diff1 == 3, || format!("hand-built system over {field} gives Diff1 = {oracle_diff1}"))?;

        let (a_doc, p_doc, out) = (
            scratch(&format!("dual_{tag}.json")),
            scratch(&format!("dual_{tag}_reg.json")),
            scratch(&format!("dual_{tag}_report.json")),
        );
        let code = jetcalc(&[
            Path::new("builtin"),
            Path::new("--name"),
            Path::new("dual"),
            Path::new("--field"),
            Path::new(tag),
            Path::new("--emit"),
            &a_doc,
            Path::new("--emit-regular"),
            &p_doc,
        ])?;
        ensure(code == 0, || format!("builtin exited {code}"))?;
        let started = Instant::now();
        let code = jetcalc(&[
            Path::new("verify-commutative"),
            Path::new("-a"),
            &a_doc,
            Path::new("-p"),
            &p_doc,
            Path::new("--out"),
            &out,
        ])?;
        elapsed += started.elapsed();
        ensure(code == 0, || format!("verify-commutative over {field} exited {code}"))?;
        let r = read_json(&out)?;
        let got = [
            dim(&r, "diff_filtration", "Diff0")?,
            dim(&r, "derivations", "Der")?,
            dim(&r, "diff_filtration", "Diff1")?,
            dim(&r, "jet_module", "mu2")?,
            dim(&r, "jet_module", "J1")?,
        ];
        ensure(got == [2, 1, oracle_diff1 as u64, 1, 3], || {
            format!("over {field}: (Diff0, Der, Diff1, mu2, J1) = {got:?}")
        })?;
        for id in ["iso_factor_through_h", "iso_factor_through_jets"] {
            let c = check(&r, id)?;
            ensure(c["status"] == "Pass" && c["dims"]["lhs"] == c["dims"]["rhs"], || {
                format!("{id} over {field}: {c}")
            })?;
        }

        // μ² is spanned by (x ⊗ 1 − 1 ⊗ x)² = −2 x ⊗ x, tensor index 3.
        let a = alg(field, &BuiltinSpec::DualNumbers);
        let mu = jet_module(&regular_bimodule(&a), 1).map_err(|e| e.to_string())?.mu().clone();
        ensure(mu == Subspace::span(field, 4, &[unit_vec(field, 4, 3)]), || format!("μ² over {field} is {mu:?}"))?;
    }
    within(elapsed, 1.0, "both verify-commutative runs")?;
    Ok(format!("dims (2,1,3,1,3) over Q and GF(7); 27 of 81 maps over GF(3); {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn ac2() -> Outcome {
    let started = Instant::now();
    for (name, a) in corpus() {
        let reg = regular_bimodule(&a);
        let diff1 = diff_space(&reg, &reg, 1).map_err(|e| e.to_string())?.dim();
        let j1 = jet_module(&reg, 1).and_then(|j| j.as_bimodule()).map_err(|e| e.to_string())?;
        let hom = hom_space(&j1, &reg, HomKind::LeftHom).map_err(|e| e.to_string())?.dim();
        ensure(diff1 == hom, || format!("{name}: Diff1 = {diff1}, Hom_A(J1, A) = {hom}"))?;
        let n1 = check_iso_n1(&reg, &reg).map_err(|e| e.to_string())?;
        let j = check_iso_550(&reg, &reg).map_err(|e| e.to_string())?;
        ensure(n1.bijective && j.bijective, || format!("{name}: {n1:?} {j:?}"))?;
    }
    within(started.elapsed(), 5.0, "dimension agreement")?;
    Ok(format!("8 algebras, both maps bijective; {:.0} ms", started.elapsed().as_secs_f64() * 1e3))
}

fn ac3() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let algebras = corpus();
    for (name, a) in &algebras {
        let reg = regular_bimodule(a);
        let f = a.field();
        let d = (0..=2).map(|s| diff_space(&reg, &reg, s)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        ensure(d[0].space.is_subspace_of(&d[1].space) && d[1].space.is_subspace_of(&d[2].space), || {
            format!("{name}: filtration not nested")
        })?;
        let hom = hom_space(&reg, &reg, HomKind::LeftHom).map_err(|e| e.to_string())?;
        ensure(d[0].space == hom.space, || format!("{name}: Diff0 != Hom_A"))?;
        let ders = derivation_space(a, &reg);
        for op in d[1].maps() {
            let (zero, der) = decompose_first_order(a, &reg, &op).map_err(|e| e.to_string())?;
            ensure(zero.add(&der) == op && d[0].contains(&zero) && ders.contains(&der), || {
                format!("{name}: decomposition does not re-sum")
            })?;
        }
        let j1 = jet_module(&reg, 1).map_err(|e| e.to_string())?;
        let pi = j1.pi_map().ok_or_else(|| format!("{name}: no projection"))?;
        ensure(pi.compose(j1.jk_map()) == LinMap::identity(f, a.dim()), || format!("{name}: π∘J1 != id"))?;
        ensure(j1_is_first_order(&reg).map_err(|e| e.to_string())?.is_verified(), || {
            format!("{name}: J1 not first order")
        })?;
    }
    for round in 0..100 {
        let (name, a) = &algebras[round % algebras.len()];
        let reg = regular_bimodule(a);
        let (f, n) = (a.field(), a.dim());
        let c1 = AlgElem((0..n).map(|_| random_scalar(&mut rng, f)).collect());
        let c2 = AlgElem((0..n).map(|_| random_scalar(&mut rng, f)).collect());
        let lambda = random_scalar(&mut rng, f);
        let phi = LinMap(Mat::from_flat(f, n, n, (0..n * n).map(|_| random_scalar(&mut rng, f)).collect()));
        let combo = a.add(&c1, &AlgElem(c2.0.iter().map(|x| &lambda * x).collect()));
        let lhs = delta(&reg, &reg, &combo, &phi);
        let rhs = delta(&reg, &reg, &c1, &phi).add(&delta(&reg, &reg, &c2, &phi).scale(&lambda));
        ensure(lhs == rhs, || format!("{name}: δ not linear in c at round {round}"))?;
    }
    within(started.elapsed(), 10.0, "structure suite")?;
    Ok(format!("8 algebras, 100 δ pairs; {:.0} ms", started.elapsed().as_secs_f64() * 1e3))
}

fn ac4() -> Outcome {
    let started = Instant::now();
    let a = alg(gf7(), &BuiltinSpec::Matrix(2));
    let reg = regular_bimodule(&a);
    let f = gf7();
    let e11_minus_e22: Vec<Scalar> = [1, 0, 0, -1].iter().map(|&x| f.from_i64(x)).collect();

    let t = nc_zero_order_failure(&a).ok_or("no zero order failure over M2")?;
    ensure((t.a, t.b, t.p_label.as_str()) == (1, 2, "1") && t.value == e11_minus_e22, || format!("(a) witness {t:?}"))?;

    let JetDefect::Defect { witness, .. } = nc_jet_defect(&reg).map_err(|e| e.to_string())? else {
        return Err("(b) no jet defect".into());
    };
    let (ea, eb) = (a.basis(witness.a), a.basis(witness.b));
    let predicted = a.mul(&a.commutator(&ea, &eb), &AlgElem(witness.argument.clone()));
    ensure((witness.a, witness.b, witness.p_label.as_str()) == (1, 2, "1"), || format!("(b) witness at {witness:?}"))?;
    ensure(witness.image == predicted.0 && witness.image == e11_minus_e22, || {
        format!("(b) projection {:?}", witness.image)
    })?;
    ensure(contraction(&a, &reg).apply(&witness.relation) == witness.image, || {
        "(b) relation does not project to the image".into()
    })?;

    let ders = nc_derivation_space(&a, &reg).map_err(|e| e.to_string())?;
    let inner =
        ders.maps().iter().filter(|d| inner_generator(&a, d).is_some_and(|m| inner_derivation(&a, &m) == **d)).count();
    ensure(a.center().dim() == 1 && ders.dim() == 3 && inner == 3, || {
        format!("(c) center {}, derivations {}, inner {inner}", a.center().dim(), ders.dim())
    })?;

    let is_scalar = |v: &[Scalar]| v[1].is_zero() && v[2].is_zero() && v[0] == v[3];
    let unit = a.unit();
    for d in first_order_on_ring(&a, &reg).map_err(|e| e.to_string())?.maps() {
        let v = d.apply(unit.coords());
        let central = (0..4).all(|i| a.commutator(&a.basis(i), &AlgElem(v.clone())).0.iter().all(Scalar::is_zero));
        ensure(central, || format!("(d) Δ(1) = {v:?} is not central"))?;
    }
    let obs = center_obstruction(&a, &reg, &reg).map_err(|e| e.to_string())?;
    let lin = obs.linear_obtainable.dim();
    ensure(obs.image_in_center && lin < 16 && lin <= obs.center_dim * reg.dim(), || format!("(d) {obs:?}"))?;
    ensure(obs.obtainable.is_subspace_of(&obs.linear_obtainable), || "(d) module maps escape the linear span".into())?;
    for op in obs.linear_obtainable.basis_vectors() {
        let m = LinMap::unflatten(f, 4, 4, op);
        ensure((0..4).all(|j| is_scalar(&m.0.column(j))), || {
            format!("(d) obtainable operator {m:?} leaves the scalars")
        })?;
    }
    within(started.elapsed(), 5.0, "M2 probes")?;
    Ok(format!(
        "witness (E12, E21, 1) -> E11 - E22; derivations 3/3 inner; obtainable dim {lin} < 16; {:.0} ms",
        started.elapsed().as_secs_f64() * 1e3
    ))
}

fn round_trip(p: &jetcalc::Bimodule, q: &jetcalc::Bimodule, op: &LinMap) -> Result<(), String> {
    let N21Outcome::Feasible(w) = n21_solve(p, q, op).map_err(|e| e.to_string())? else {
        return Err(format!("infeasible: {op:?}"));
    };
    let doc: WitnessDoc = parse_doc(&to_json(&WitnessDoc::from_witness(&w)), "witness").map_err(|e| e.to_string())?;
    let back = doc.to_witness(p.field(), p.dim(), q.dim()).map_err(|e| e.to_string())?;
    ensure(back == w, || "witness changed through JSON".into())?;
    let st = n21_check(p, q, op, &back).map_err(|e| e.to_string())?;
    ensure(st == N21Status::Verified, || format!("n21_check: {st:?}"))
}

fn ac5() -> Outcome {
    let a = alg(gf7(), &BuiltinSpec::Matrix(2));
    let reg = regular_bimodule(&a);
    let f = gf7();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let m = AlgElem((0..4).map(|_| random_scalar(&mut rng, f)).collect());
        round_trip(&reg, &reg, &inner_derivation(&a, &m)).map_err(|e| format!("(a) ad_m, m = {m:?}: {e}"))?;
    }

    let started = Instant::now();
    let calc = universal_calculus_truncated(&a).map_err(|e| e.to_string())?;
    let total = calc.total();
    ensure(total.dim() == 16 && calc.omega().ambient_dim() == 16, || {
        format!("(b) calculus dims {} / {}", total.dim(), calc.omega().ambient_dim())
    })?;
    round_trip(total, total, calc.d()).map_err(|e| format!("(b) d: {e}"))?;
    let calc_time = started.elapsed();
    within(calc_time, 30.0, "(b) calculus solve")?;

    let ders = nc_derivation_space(&a, &reg).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let c: Vec<Scalar> = (0..ders.dim()).map(|_| random_scalar(&mut rng, f)).collect();
        let u = ders.from_coordinates(&c);
        let rep = dv_check(&reg, &DVConnection { u: u.clone(), nabla_u: u.clone() }).map_err(|e| e.to_string())?;
        ensure(rep.status == N21Status::Verified, || format!("(c) DV rule fails for {u:?}"))?;
        round_trip(&reg, &reg, &u).map_err(|e| format!("(c) ∇_u: {e}"))?;
    }

    let t = LinMap(Mat::from_i64(f, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]));
    let problem = N21Problem::new(&reg, &reg, &t).map_err(|e| e.to_string())?;
    let N21Outcome::Infeasible(cert) = problem.solve() else {
        return Err("transpose reported feasible".into());
    };
    ensure(problem.verify_certificate(&cert) && !cert.residual.is_zero(), || "transpose certificate invalid".into())?;
    Ok(format!(
        "10 ad_m, d on P* (dim 16, {:.0} ms), 10 ∇_u; transpose certificate terms: {}",
        calc_time.as_secs_f64() * 1e3,
        cert.combination.len()
    ))
}

fn ac6() -> Outcome {
    let (m2, m2_reg) = (scratch("m2.json"), scratch("m2_reg.json"));
    let (t3, t3_reg) = (scratch("t3.json"), scratch("t3_reg.json"));
    let (dual, dual_reg) = (data("dual_q.json"), data("dual_q_reg.json"));
    let p = Path::new;
    let commands: Vec<(&str, Vec<&Path>, Vec<&Path>)> = vec![
        (
            "builtin matrix2",
            vec![
                p("builtin"),
                p("--name"),
                p("matrix2"),
                p("--field"),
                p("Fp:7"),
                p("--emit"),
                &m2,
                p("--emit-regular"),
                &m2_reg,
            ],
            vec![&m2, &m2_reg],
        ),
        (
            "builtin trunc3",
            vec![
                p("builtin"),
                p("--name"),
                p("trunc3"),
                p("--field"),
                p("Fp:7"),
                p("--emit"),
                &t3,
                p("--emit-regular"),
                &t3_reg,
            ],
            vec![&t3, &t3_reg],
        ),
        (
            "verify-commutative",
            vec![p("verify-commutative"), p("-a"), &dual, p("-p"), &dual_reg, p("--out"), p("OUT")],
            vec![],
        ),
        (
            "verify-commutative order 2",
            vec![p("verify-commutative"), p("-a"), &t3, p("-p"), &t3_reg, p("--order"), p("2"), p("--out"), p("OUT")],
            vec![],
        ),
        ("demo-noncommutative", vec![p("demo-noncommutative"), p("-a"), &m2, p("--out"), p("OUT")], vec![]),
        (
            "demo-noncommutative commutative",
            vec![p("demo-noncommutative"), p("-a"), &dual, p("--out"), p("OUT")],
            vec![],
        ),
    ];
    let ad = data("m2_f7_ad_e11.json");
    let tr = data("m2_f7_transpose.json");
    let solves = [("solve-n21 ad_m", &ad), ("solve-n21 transpose", &tr)];

    let mut runs = 0;
    let mut snapshots: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for pass in 0..2 {
        let mut snap = Vec::new();
        for (label, args, files) in &commands {
            let out = scratch(&format!("det_{pass}_{}.json", label.replace(' ', "_")));
            let args: Vec<&Path> = args.iter().map(|a| if *a == p("OUT") { out.as_path() } else { a }).collect();
            jetcalc(&args)?;
            let mut read: Vec<PathBuf> = files.iter().map(|f| f.to_path_buf()).collect();
            if read.is_empty() {
                read.push(out.clone());
            }
            for f in read {
                snap.push((
                    format!(
                        "{label}: {}",
                        f.file_name().unwrap().to_string_lossy().replace(&format!("det_{pass}_"), "")
                    ),
                    std::fs::read(&f).map_err(|e| e.to_string())?,
                ));
            }
            runs += 1;
        }
        for (label, op) in solves {
            let stem = label.replace(' ', "_");
            let (out, w) = (scratch(&format!("det_{pass}_{stem}.json")), scratch(&format!("det_{pass}_{stem}_w.json")));
            jetcalc(&[
                p("solve-n21"),
                p("-a"),
                &m2,
                p("-p"),
                &m2_reg,
                p("-q"),
                &m2_reg,
                p("-d"),
                op,
                p("--out"),
                &out,
                p("--witness"),
                &w,
            ])?;
            snap.push((format!("{label}: report"), std::fs::read(&out).map_err(|e| e.to_string())?));
            snap.push((format!("{label}: witness"), std::fs::read(&w).map_err(|e| e.to_string())?));
            runs += 1;
        }
        snapshots.push(snap);
    }
    for ((label, first), (_, second)) in snapshots[0].iter().zip(&snapshots[1]) {
        ensure(first == second, || format!("{label} differs between runs"))?;
        ensure(!first.is_empty(), || format!("{label} is empty"))?;
    }
    Ok(format!("{runs} command runs, {} outputs byte-identical", snapshots[0].len()))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1", "dual numbers golden run", ac1),
        ("2", "dimension agreement", ac2),
        ("3", "filtration and structure", ac3),
        ("4", "noncommutative failure witnesses", ac4),
        ("5", "derivation pair round trips", ac5),
        ("6", "determinism", ac6),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("AC{id} PASS  {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("AC{id} FAIL  {title}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
