//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use symlie::catalog::{
    build_entry, catalog_list, g2_example, g2_gm_with, hurwitz, lift, magic_square_extraction,
    magic_square_row2, octonions_trace_zero, pauli_cube, same_operator_span, sl_example, sl_gm,
    so_example, so_jts, split_octonions, twisted_commutant, Payload,
};
use symlie::coordinatize::{
    build_g_from_nlrta, compute_lrt, extract_gm_from_s3, extract_nlrta, involution_typing,
    lrt_isotypic, nontrivial_klein_part, verify_nlrta,
};
use symlie::gmalcev::{
    build_g_of_m, check_gm_axioms, check_malcev, gm_to_malcev, malcev_to_gm, tkk, GMAlgebra,
};
use symlie::linalg::unit;
use symlie::symaction::{check_action, isotypic_s3, isotypic_s4, klein_grading, GroupAction};
use symlie::tetra::{
    decomposition_window, scodim, uiuj_check, v_closure, v_generators_check, vs_modules,
};
use symlie::{Field, Matrix, Rational, Scalar, Span};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn full_space<F: Field>(n: usize) -> Vec<Vec<F>> {
    (0..n).map(|i| unit(n, i)).collect()
}

fn gm_axioms() -> Outcome {
    let start = Instant::now();
    let mut suite: Vec<(String, GMAlgebra<Scalar>)> = Vec::new();
    suite.push(("G2".into(), g2_example().map_err(|e| e.to_string())?.gm));
    for m in [2, 3] {
        suite.push((
            format!("sl m={m}"),
            sl_example(m).map_err(|e| e.to_string())?.gm,
        ));
    }
    for n in [4, 5] {
        suite.push((
            format!("so n={n}"),
            so_example(n).map_err(|e| e.to_string())?.gm,
        ));
    }
    suite.push((
        "O0".into(),
        malcev_to_gm(&octonions_trace_zero())
            .map_err(|e| e.to_string())?
            .map_scalars(lift),
    ));
    for d in [1, 2, 4] {
        let ms = magic_square_row2(d).map_err(|e| e.to_string())?;
        suite.push((
            format!("magic d={d}"),
            magic_square_extraction(&ms).map_err(|e| e.to_string())?,
        ));
    }
    for (name, m) in &suite {
        let rep = check_gm_axioms(m);
        ensure(rep.ok(), || format!("{name}: {}", rep.summary()))?;
    }

    let mut mutants: Vec<(&str, GMAlgebra<Scalar>)> = vec![("G2 with -2b(y,z)x", g2_gm_with(2))];
    let mut sl = sl_gm::<Scalar>(2);
    let (i, j, k, v) = sl
        .tri
        .nonzero_entries()
        .next()
        .map(|(i, j, k, v)| (i, j, k, v[0].clone()))
        .expect("nonempty");
    sl.tri.add_entry(i, j, k, v.0, v.1);
    mutants.push(("sl m=2, one triple constant doubled", sl));
    let mut so = so_jts::<Scalar>(3);
    so.tri.add_entry(0, 0, 0, 0, Scalar::from_int(1));
    mutants.push(("so JTS, {e0,e0,e0} shifted by e0", so));
    let mut counts = Vec::new();
    for (name, m) in &mutants {
        let n = check_gm_axioms(m).violation_count();
        ensure(n >= 1, || format!("mutant `{name}` passes"))?;
        counts.push(n);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} algebras clean, mutants give {counts:?} violations, {elapsed:.2?}",
        suite.len()
    ))
}

fn g_of_m() -> Outcome {
    let g2 = g2_gm_with::<Scalar>(3);
    let o0 = malcev_to_gm(&octonions_trace_zero())
        .map_err(|e| e.to_string())?
        .map_scalars(lift);
    let mut dims = Vec::new();
    for (name, m, expected) in [("G2", g2, 14), ("O0", o0, 28)] {
        let (g, act) = build_g_of_m(&m).map_err(|e| format!("{name}: {e}"))?;
        ensure(g.alg.dim == expected, || {
            format!("{name}: dim {} != {expected}", g.alg.dim)
        })?;
        ensure(
            g.alg.check_jacobi().is_empty() && g.alg.check_anticommutative().is_empty(),
            || format!("{name}: Jacobi"),
        )?;
        let rep = check_action(&g.alg, &GroupAction::S3(act.clone())).map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("{name}: action {rep:?}"))?;
        let back = extract_gm_from_s3(&g.alg, &act, Some(&g.nu_basis(0)))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(back.gm.bil == m.bil && back.gm.tri == m.tri, || {
            format!("{name}: round trip differs")
        })?;
        dims.push(g.alg.dim);
    }
    Ok(format!(
        "dims {dims:?}, Jacobi and action clean, extraction reproduces both tensors"
    ))
}

fn magic_square() -> Outcome {
    let mut out = Vec::new();
    for (d, expected) in [(1, 8), (2, 16), (4, 35), (8, 78)] {
        let start = Instant::now();
        let ms = magic_square_row2(d).map_err(|e| e.to_string())?;
        ensure(ms.alg.dim == expected, || {
            format!("d={d}: dim {} != {expected}", ms.alg.dim)
        })?;
        let jac = ms.alg.check_jacobi();
        ensure(jac.is_empty(), || {
            format!("d={d}: {} Jacobi violations", jac.len())
        })?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(600), || {
            format!("d={d} took {elapsed:?}")
        })?;
        out.push(format!("d={d}: {expected} ({elapsed:.2?})"));
    }
    Ok(out.join(", "))
}

fn isotypic() -> Outcome {
    let g2 = g2_example().map_err(|e| e.to_string())?;
    let rep = isotypic_s3(&full_space(14), &g2.action).map_err(|e| e.to_string())?;
    ensure(
        rep.s3_triple() == (3, 5, 3) && rep.total_dim() == 14,
        || format!("G2: {:?}", rep.multiplicities),
    )?;

    let lrt = compute_lrt(&split_octonions()).map_err(|e| e.to_string())?;
    let rep = isotypic_s3(&lrt.full_space(), &lrt.action).map_err(|e| e.to_string())?;
    ensure(
        rep.s3_triple() == (14, 0, 7) && rep.total_dim() == 28,
        || format!("lrt(O): {:?}", rep.multiplicities),
    )?;
    let parts = lrt_isotypic(&split_octonions()).map_err(|e| e.to_string())?;
    let (der, sder, w) = parts.dims();
    ensure(parts.consistent && (der, sder, w) == (14, 0, 14), || {
        format!("lrt(O) parts {:?}", parts.dims())
    })?;

    let mut so = Vec::new();
    for n in [3, 4, 5] {
        let ex = so_example(n).map_err(|e| e.to_string())?;
        let dim = n * (n - 1) / 2;
        let rep = isotypic_s3(&full_space(dim), &ex.action).map_err(|e| e.to_string())?;
        let expected = ((n - 2) * (n - 3) / 2, 1, n - 2);
        ensure(
            rep.s3_triple() == expected && rep.total_dim() == dim,
            || format!("so n={n}: {:?}", rep.multiplicities),
        )?;
        so.push(format!("{:?}", rep.s3_triple()));
    }
    Ok(format!(
        "G2 (3,5,3), lrt(O) (14,0,7), so n=3,4,5 {}",
        so.join(" ")
    ))
}

fn lrt_sder() -> Outcome {
    let o = compute_lrt(&split_octonions()).map_err(|e| e.to_string())?;
    ensure(o.dim() == 28, || format!("lrt(O) dim {}", o.dim()))?;
    let k = compute_lrt(&hurwitz(1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(k.dim() == 0, || format!("lrt(k) dim {}", k.dim()))?;

    let mut unital = 0;
    for info in catalog_list() {
        let entry = build_entry(info.name, None).map_err(|e| e.to_string())?;
        if let Payload::Algebra(a) = &entry.payload {
            if symlie::catalog::unit_element(a).is_some() && a.invol.is_some() {
                let parts = lrt_isotypic(a).map_err(|e| e.to_string())?;
                ensure(parts.sder.is_empty(), || {
                    format!("{}: sder dim {}", info.name, parts.sder.len())
                })?;
                unital += 1;
            }
        }
    }
    for d in [1, 2, 4, 8] {
        let parts =
            lrt_isotypic(&hurwitz(d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(parts.sder.is_empty(), || {
            format!("hurwitz d={d}: sder dim {}", parts.sder.len())
        })?;
        unital += 1;
    }

    let cube = pauli_cube().map_err(|e| e.to_string())?;
    let ex = extract_nlrta(&cube.alg, &cube.action).map_err(|e| e.to_string())?;
    let mu_a = mu_on_a(&cube.mu, &ex.iota[0], cube.base.dim)?;
    let parts = lrt_isotypic(&ex.nlrta.algebra).map_err(|e| e.to_string())?;
    let solved = twisted_commutant(&mu_a, -1);
    ensure(same_operator_span(&parts.sder, &solved), || {
        "cube: sder differs from {f : f mu = -mu f}".into()
    })?;
    Ok(format!(
        "lrt(O) 28, lrt(k) 0, sder = 0 on {unital} unital algebras, cube sder = {{f : f mu = -mu f}} (dim {})",
        solved.len()
    ))
}

/// Matrix of `μ` on `A` read through `ι₀(x) = (x, 0, 0)`.
fn mu_on_a(
    mu: &Matrix<Rational>,
    iota0: &[Vec<Rational>],
    n: usize,
) -> Result<Matrix<Rational>, String> {
    let dim = iota0.first().map_or(0, Vec::len);
    let span = Span::from_vectors(dim, iota0.to_vec());
    let cols: Option<Vec<Vec<Rational>>> = iota0
        .iter()
        .map(|v| {
            let mut image = vec![Rational::from_i64(0); dim];
            image[..n].clone_from_slice(&mu.apply(&v[..n]));
            span.coords(&image)
        })
        .collect();
    let cols = cols.ok_or("mu does not preserve iota0(A)")?;
    Ok(Matrix::from_columns(iota0.len(), &cols))
}

fn tetrahedron() -> Outcome {
    let start = Instant::now();
    for c in uiuj_check().into_iter().chain(v_generators_check()) {
        ensure(c.ok(), || format!("{}: {} vs {}", c.name, c.lhs, c.rhs))?;
    }
    for s in -3..=3 {
        let (vp, v) = vs_modules(s).map_err(|e| e.to_string())?;
        ensure(vp.ok() && v.ok(), || {
            format!("s={s}: {:?} / {:?}", vp.multiplicities, v.multiplicities)
        })?;
    }
    let closure = v_closure(6).map_err(|e| e.to_string())?;
    ensure(closure.ok(), || {
        format!("closure: {:?}", closure.membership_failures)
    })?;
    let codim = scodim(10);
    ensure(codim.ok(), || format!("scodim: {codim:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "brackets exact, V'/V for s in -3..3, closure dims {:?} in S, degree-10 window: A {} = S {} + 1, {elapsed:.2?}",
        closure.dims, codim.window_dim, codim.s_slice_dim
    ))
}

fn s4_typing() -> Outcome {
    let cube = pauli_cube().map_err(|e| e.to_string())?;
    let g = klein_grading(&cube.action).map_err(|e| e.to_string())?;
    let rep = isotypic_s4(&nontrivial_klein_part(&g), &cube.action).map_err(|e| e.to_string())?;
    let bad = rep.multiplicity("U") + rep.multiplicity("U'") + rep.multiplicity("W");
    ensure(bad == 0, || {
        format!("cube g0+g1+g2: {:?}", rep.multiplicities)
    })?;
    let ex = extract_nlrta(&cube.alg, &cube.action).map_err(|e| e.to_string())?;
    let cases = involution_typing(&cube.action, &ex).map_err(|e| e.to_string())?;
    ensure(!cases.is_empty() && cases.iter().all(|c| c.ok()), || {
        format!("cube typing {cases:?}")
    })?;

    for s in -3..=3 {
        let (vp, v) = vs_modules(s).map_err(|e| e.to_string())?;
        for m in [&vp, &v] {
            let bad: usize = ["U", "U'", "W"]
                .iter()
                .filter_map(|k| m.multiplicities.get(*k))
                .sum();
            ensure(bad == 0 && m.ok(), || {
                format!("tetra s={s}: {:?}", m.multiplicities)
            })?;
        }
    }
    let window = decomposition_window(3).map_err(|e| e.to_string())?;
    ensure(window.ok(), || format!("window {window:?}"))?;
    Ok(format!(
        "cube {:?}, {} involution eigenvectors typed, tetra slices only V/V', window |s| <= 3 spans (dim {})",
        rep.multiplicities.iter().filter(|(_, m)| **m > 0).collect::<Vec<_>>(),
        cases.len(),
        window.window_dim
    ))
}

fn malcev_bridge() -> Outcome {
    let o0 = octonions_trace_zero();
    ensure(check_malcev(&o0), || "O0 is not Malcev".into())?;
    let mut lie = 0;
    for info in catalog_list() {
        let entry = build_entry(info.name, None).map_err(|e| e.to_string())?;
        if let Payload::LieS3 { alg, .. } | Payload::LieS4 { alg, .. } = &entry.payload {
            ensure(check_malcev(alg), || format!("{} is not Malcev", info.name))?;
            lie += 1;
        }
    }
    let sl2 = sl_gm::<Scalar>(2);
    ensure(!check_malcev(&sl2.binary_algebra()), || {
        "sl m=2 binary passes the Malcev check".into()
    })?;
    let gm = malcev_to_gm(&o0).map_err(|e| e.to_string())?;
    let back = gm_to_malcev(&gm).map_err(|e| e.to_string())?;
    ensure(back.bil == o0.bil, || {
        "gm_to_malcev does not recover O0".into()
    })?;
    let again = malcev_to_gm(&back).map_err(|e| e.to_string())?;
    ensure(again.bil == gm.bil && again.tri == gm.tri, || {
        "malcev_to_gm . gm_to_malcev is not the identity".into()
    })?;
    Ok(format!(
        "O0 and {lie} catalog Lie algebras Malcev, sl m=2 not, O0 round trip exact"
    ))
}

fn tkk_dims() -> Outcome {
    let mut out = Vec::new();
    for m in [2, 3] {
        let t = tkk(&so_jts::<Rational>(m)).map_err(|e| e.to_string())?;
        let expected = (m + 2) * (m + 1) / 2;
        ensure(t.alg.dim == expected, || {
            format!("m={m}: dim {} != {expected}", t.alg.dim)
        })?;
        ensure(t.alg.check_jacobi().is_empty(), || format!("m={m}: Jacobi"))?;
        ensure(t.is_isomorphism(), || {
            format!(
                "m={m}: bijective {}, failures {:?}",
                t.bijective, t.bracket_failures
            )
        })?;
        out.push(expected);
    }
    Ok(format!(
        "dims {out:?}, map bijective and bracket preserving"
    ))
}

fn nlrta() -> Outcome {
    let cube = pauli_cube().map_err(|e| e.to_string())?;
    let ex = extract_nlrta(&cube.alg, &cube.action).map_err(|e| e.to_string())?;
    ensure(ex.nlrta.algebra.bil.is_zero(), || "x.y is not zero".into())?;
    let mu_a = mu_on_a(&cube.mu, &ex.iota[0], cube.base.dim)?;
    ensure(
        *ex.nlrta.bar() == mu_a.scale(&Rational::from_i64(-1)),
        || "bar is not -mu".into(),
    )?;
    let rep = verify_nlrta(&ex.nlrta);
    ensure(rep.ok(), || rep.summary())?;
    let rebuilt = build_g_from_nlrta(&ex.nlrta).map_err(|e| e.to_string())?;
    ensure(rebuilt.alg.check_jacobi().is_empty(), || {
        "rebuilt algebra fails Jacobi".into()
    })?;
    let act = check_action(&rebuilt.alg, &GroupAction::S4(rebuilt.action.clone()))
        .map_err(|e| e.to_string())?;
    ensure(act.ok(), || format!("rebuilt action {act:?}"))?;
    let (before, after) = (
        klein_grading(&cube.action)
            .map_err(|e| e.to_string())?
            .dims(),
        klein_grading(&rebuilt.action)
            .map_err(|e| e.to_string())?
            .dims(),
    );
    ensure(before == after, || {
        format!("Klein dims {before:?} vs {after:?}")
    })?;
    Ok(format!("A dim {}, x.y = 0, bar = -mu, identities (i)-(vi) hold, Klein dims {after:?} on both sides", ex.nlrta.dim()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("GM axiom suite", gm_axioms),
        ("g(M) construction", g_of_m),
        ("magic square", magic_square),
        ("isotypic decompositions", isotypic),
        ("lrt and sder", lrt_sder),
        ("tetrahedron", tetrahedron),
        ("S4 typing", s4_typing),
        ("Malcev bridge", malcev_bridge),
        ("TKK", tkk_dims),
        ("NLRTA", nlrta),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
