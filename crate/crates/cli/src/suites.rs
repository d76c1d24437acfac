use std::sync::Arc;

use serde_json::{json, Value};

use jetcalc::algcore::Algebra;
use jetcalc::bimod::{hom_space, regular_bimodule, Bimodule, HomKind, LinMap};
use jetcalc::commdiff::{check_iso_n1, decompose_first_order, derivation_space, diff_space, DiffStatus, IsoReport};
use jetcalc::io::{CertificateDoc, WitnessDoc};
use jetcalc::jetmod::{check_iso_550, j1_is_first_order, jet_module, nc_jet_defect, JetDefect};
use jetcalc::ncdiff::{
    center_obstruction, derivation_failure, first_order_on_ring, inner_generator, n21_check, nc_derivation_space,
    nc_zero_order_failure, zq_module_closure, N21Outcome, N21Problem, N21Status,
};
use jetcalc::{AlgElem, Error, Result, Scalar};

use crate::report::VerificationReport;

fn coords(v: &[Scalar]) -> Value {
    Value::from(v.iter().map(Scalar::to_canonical_string).collect::<Vec<_>>())
}

fn element(a: &Algebra, v: &[Scalar]) -> Value {
    json!({ "text": a.format(&AlgElem(v.to_vec())), "coords": coords(v) })
}

fn error_witness(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

fn iso_check(r: &mut VerificationReport, id: &str, paper_ref: &str, iso: Result<IsoReport>) {
    match iso {
        Ok(iso) => {
            let w = json!({ "dim_lhs": iso.dim_lhs, "dim_rhs": iso.dim_rhs, "injective": iso.injective });
            let w = if iso.bijective { Value::Null } else { w };
            r.outcome(id, paper_ref, iso.bijective, w).dim("lhs", iso.dim_lhs).dim("rhs", iso.dim_rhs);
        }
        Err(e) => {
            r.fail(id, paper_ref, error_witness(&e));
        }
    }
}

fn status_witness(p: &Bimodule, st: &DiffStatus) -> Value {
    match st {
        DiffStatus::Verified => Value::Null,
        DiffStatus::Violated { tuple, p: arg, value } => {
            json!({ "tuple": tuple, "argument": p.basis_names()[*arg], "value": coords(value) })
        }
    }
}

/// The commutative suite. Refuses noncommutative algebras with [`Error::NoncommutativeBase`].
pub fn verify_commutative(
    a: &Arc<Algebra>,
    p: &Bimodule,
    q: &Bimodule,
    order: usize,
    digest: String,
) -> Result<VerificationReport> {
    if let Some((i, j)) = a.noncommuting_pair() {
        return Err(Error::NoncommutativeBase(i, j));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::Malformed(format!("order must be 1 or 2, got {order}")));
    }
    let mut r = VerificationReport::new("verify-commutative", digest);
    let reg = regular_bimodule(a);

    let spaces = (0..=order).map(|s| diff_space(p, q, s)).collect::<Result<Vec<_>>>()?;
    let nested = spaces.windows(2).all(|w| w[0].space.is_subspace_of(&w[1].space));
    let c = r.outcome(
        "diff_filtration",
        "δ_{c_0}∘…∘δ_{c_s}Δ = 0;  Diff_{s-1}(P,Q) ⊂ Diff_s(P,Q)",
        nested,
        json!({ "nested": false }),
    );
    for (s, sp) in spaces.iter().enumerate() {
        c.dim(&format!("Diff{s}"), sp.dim());
    }

    let hom = hom_space(p, q, HomKind::LeftHom)?;
    r.outcome(
        "diff0_is_hom",
        "Diff_0(P,Q) = Hom_A(P,Q)",
        spaces[0].space == hom.space,
        json!({ "hom_dim": hom.dim() }),
    )
    .dim("Hom_A", hom.dim());

    let ders = derivation_space(a, q);
    let d1a = diff_space(&reg, q, 1)?;
    let unit = a.unit();
    let bad_der =
        ders.maps().iter().position(|d| !d1a.contains(d) || !d.apply(unit.coords()).iter().all(Scalar::is_zero));
    r.outcome("derivations", "Δ(ab) = aΔ(b) + bΔ(a)", bad_der.is_none(), json!({ "basis_index": bad_der }))
        .dim("Der", ders.dim());

    let d0a = diff_space(&reg, q, 0)?;
    let mut decomposition_failure = Value::Null;
    for (k, op) in d1a.maps().iter().enumerate() {
        match decompose_first_order(a, q, op) {
            Ok((zero, der)) if zero.add(&der) == *op && d0a.contains(&zero) && ders.contains(&der) => {}
            Ok(_) => decomposition_failure = json!({ "basis_index": k }),
            Err(e) => decomposition_failure = json!({ "basis_index": k, "error": e.to_string() }),
        }
        if !decomposition_failure.is_null() {
            break;
        }
    }
    r.outcome("decomposition", "Δ(a) = aΔ(1) + [Δ(a) − aΔ(1)]", decomposition_failure.is_null(), decomposition_failure)
        .dim("Diff1_A", d1a.dim());

    iso_check(
        &mut r,
        "iso_factor_through_h",
        "Diff_1(P,Q) = Hom_A(P, Diff_1(A,Q)),  (f_Δ p)(a) = Δ(ap)",
        check_iso_n1(p, q),
    );

    let jets = (1..=order).map(|k| jet_module(p, k)).collect::<Vec<_>>();
    match &jets[0] {
        Ok(_) => {
            let c = r.pass("jet_module", "J^k(P) = (A ⊗_K P)/μ^{k+1}");
            for (k, jm) in jets.iter().enumerate() {
                if let Ok(jm) = jm {
                    c.dim(&format!("mu{}", k + 2), jm.mu().dim()).dim(&format!("J{}", k + 1), jm.dim());
                }
            }
        }
        Err(e) => {
            r.fail("jet_module", "J^k(P) = (A ⊗_K P)/μ^{k+1}", error_witness(e));
        }
    }
    if let Ok(j1) = &jets[0] {
        let id = LinMap::identity(a.field(), p.dim());
        let ok = j1.pi_map().is_some_and(|pi| pi.compose(j1.jk_map()) == id);
        r.outcome(
            "projection_after_jet",
            "π^1_0(1 ⊗_1 p) = p",
            ok,
            json!({ "projection_defined": j1.pi_map().is_some() }),
        );
    }
    match j1_is_first_order(p) {
        Ok(cert) => {
            r.outcome(
                "jet_is_first_order",
                "J^1: p ↦ 1 ⊗_1 p is a first order differential operator",
                cert.is_verified(),
                status_witness(p, &cert.status),
            );
        }
        Err(e) => {
            r.fail("jet_is_first_order", "J^1: p ↦ 1 ⊗_1 p is a first order differential operator", error_witness(&e));
        }
    }
    iso_check(&mut r, "iso_factor_through_jets", "Diff_1(P,Q) = Hom_A(J^1(P), Q),  Δ = f^Δ ∘ J^1", check_iso_550(p, q));
    Ok(r)
}

/// Failure probes for the classical definitions. Each probe passes when it
/// finds a witness exactly if the algebra is noncommutative.
pub fn demo_noncommutative(a: &Arc<Algebra>, digest: String) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("demo-noncommutative", digest);
    let expect = !a.is_commutative();
    let reg = regular_bimodule(a);
    let names = a.basis_names();

    let zero_order = nc_zero_order_failure(a);
    let w = match &zero_order {
        Some(t) => json!({ "a": names[t.a], "b": names[t.b], "p": t.p_label, "value": element(a, &t.value) }),
        None => json!({ "found": null }),
    };
    r.probe(
        "zero_order_failure",
        "Δ = Id P fails δ_a∘δ_b Δ(p) = Δ(abp) − aΔ(bp) − bΔ(ap) + abΔ(p) = 0",
        zero_order.is_some() == expect,
        w,
    );

    let defect = nc_jet_defect(&reg)?;
    let (found, w) = match &defect {
        JetDefect::NoDefect => (false, json!({ "found": null })),
        JetDefect::Defect { witness, defect_map } => {
            let (ea, eb) = (a.basis(witness.a), a.basis(witness.b));
            let predicted = a.mul(&a.commutator(&ea, &eb), &AlgElem(witness.argument.clone()));
            (
                predicted.0 == witness.image,
                json!({
                    "a": names[witness.a],
                    "b": names[witness.b],
                    "p": witness.p_label,
                    "projection": element(a, &witness.image),
                    "defect_rank": defect_map.matrix().rank(),
                }),
            )
        }
    };
    r.probe("jet_defect", "π^1_0(δ^a∘δ^b(1 ⊗ p)) = (ab − ba)p fails to be zero in P", found == expect, w);

    let center = a.center();
    let ders = nc_derivation_space(a, &reg)?;
    let maps = ders.maps();
    let inner = maps.iter().filter(|d| inner_generator(a, d).is_some()).count();
    let bad = maps.iter().position(|d| derivation_failure(a, &reg, d).is_some());
    r.outcome("derivations", "∂(ab) = (∂a)b + a∂b", bad.is_none(), json!({ "basis_index": bad }))
        .dim("center", center.dim())
        .dim("derivations", ders.dim())
        .dim("inner_derivations", inner);

    match first_order_on_ring(a, &reg) {
        Ok(fo) => {
            let unit = a.unit();
            let off = fo.maps().iter().position(|d| {
                let v = AlgElem(d.apply(unit.coords()));
                (0..a.dim()).any(|i| !a.commutator(&a.basis(i), &v).0.iter().all(Scalar::is_zero))
            });
            r.pass("first_order_on_ring", "Δ(ab) = aΔ(b) + Δ(a)b − abΔ(1)")
                .dim("first_order", fo.dim())
                .dim("derivations", ders.dim());
            r.outcome("value_at_unit_central", "Δ(1) ∈ Z_Q", off.is_none(), json!({ "basis_index": off }));
        }
        Err(e) => {
            r.fail("first_order_on_ring", "Δ(ab) = aΔ(b) + Δ(a)b − abΔ(1)", error_witness(&e));
        }
    }
    match zq_module_closure(a, &reg) {
        Ok(ok) => {
            r.outcome("center_module_closure", "Diff_1(A,Q) is a left Z_A-module", ok, json!({ "closed": false }));
        }
        Err(e) => {
            r.fail("center_module_closure", "Diff_1(A,Q) is a left Z_A-module", error_witness(&e));
        }
    }

    let obs = center_obstruction(a, &reg, &reg)?;
    let strict = obs.linear_obtainable.dim() < obs.hom_k_dim;
    r.outcome(
        "center_obstruction",
        "Δ = h∘f takes its values only in Z_Q since Δ(p) = (f p)(1)",
        obs.image_in_center && (strict || !expect),
        json!({ "image_in_center": obs.image_in_center }),
    )
    .dim("obtainable", obs.obtainable_dim())
    .dim("obtainable_linear", obs.linear_obtainable.dim())
    .dim("hom_k", obs.hom_k_dim)
    .dim("morphisms", obs.morphism_dim)
    .dim("center_Q", obs.center_dim);
    Ok(r)
}

/// What `solve-n21` produced besides the report.
pub enum N21Artifact {
    Witness(WitnessDoc),
    Certificate(CertificateDoc),
}

/// Runs the solver. The witness goes through its JSON form before it is
/// checked, so the written file is what gets verified.
pub fn solve_n21(p: &Bimodule, q: &Bimodule, op: &LinMap, digest: String) -> Result<(VerificationReport, N21Artifact)> {
    let problem = N21Problem::new(p, q, op)?;
    let mut r = VerificationReport::new("solve-n21", digest);
    let cond = "Δ(apb) = (∂→a)(p)b + aΔ(p)b + a(∂←b)(p)";
    match problem.solve() {
        N21Outcome::Feasible(w) => {
            let doc = WitnessDoc::from_witness(&w);
            let text = jetcalc::io::to_json(&doc);
            let back: WitnessDoc = jetcalc::io::parse_doc(&text, "witness")?;
            let w2 = back.to_witness(p.field(), p.dim(), q.dim())?;
            r.pass("n21_feasible", cond).dim("unknowns", problem.unknowns()).dim("equations", problem.equations());
            match n21_check(p, q, op, &w2) {
                Ok(N21Status::Verified) => {
                    r.pass("n21_check", cond);
                }
                Ok(N21Status::Violated { a, p: arg, b, value }) => {
                    r.fail("n21_check", cond, json!({ "a": a, "p": arg, "b": b, "value": coords(&value) }));
                }
                Err(e) => {
                    r.fail("n21_check", cond, error_witness(&e));
                }
            }
            Ok((r, N21Artifact::Witness(doc)))
        }
        N21Outcome::Infeasible(cert) => {
            let doc = CertificateDoc::from_certificate(&cert, |i| Some(problem.describe_equation(i)));
            r.fail("n21_feasible", cond, serde_json::to_value(&doc).expect("certificate serializes"))
                .dim("unknowns", problem.unknowns())
                .dim("equations", problem.equations());
            let valid = problem.verify_certificate(&cert);
            r.outcome("certificate_valid", "Σ y_i (row_i) = 0 while Σ y_i b_i ≠ 0", valid, json!({ "valid": false }));
            Ok((r, N21Artifact::Certificate(doc)))
        }
    }
}
