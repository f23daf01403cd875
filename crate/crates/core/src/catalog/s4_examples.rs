//! Lie algebras with S₄-symmetry: the cube `g³` of a `ℤ₂ × ℤ₂`-graded algebra and
//! the algebra rebuilt from the octonions.

use super::composition::{split_octonions, unit_element};
use super::CatalogError;
use crate::algebra::{AlgebraSpec, Bilinear};
use crate::coordinatize::{build_g_from_nlrta, conj_op, Nlrta, NlrtaLie};
use crate::linalg::{solve_linear, unit, Matrix, Span, SparseVec};
use crate::scalar::{rat_int, Field, Rational};
use crate::symaction::{check_action, GroupAction, S4Action};

#[derive(Clone, Debug)]
pub struct Cube<F> {
    pub base: AlgebraSpec<F>,
    pub nu: Matrix<F>,
    pub mu: Matrix<F>,
    pub alg: AlgebraSpec<F>,
    pub action: S4Action<F>,
}

fn is_automorphism<F: Field>(a: &AlgebraSpec<F>, g: &Matrix<F>) -> bool {
    let n = a.dim;
    (0..n).all(|i| {
        (0..n).all(|j| {
            g.apply(&a.product(&unit(n, i), &unit(n, j))) == a.product(&g.column(i), &g.column(j))
        })
    })
}

/// Basis of the component where `ν = sν`, `μ = sμ`.
pub fn graded_component<F: Field>(
    nu: &Matrix<F>,
    mu: &Matrix<F>,
    s_nu: i64,
    s_mu: i64,
) -> Vec<Vec<F>> {
    let n = nu.rows;
    let a = nu.add(&Matrix::scalar(n, F::from_i64(s_nu)));
    let b = mu.add(&Matrix::scalar(n, F::from_i64(s_mu)));
    a.mul(&b).column_space()
}

/// `τ₁(x,y,z) = (x, νy, νz)`, `τ₂ = (νx, y, νz)`, `φ(x,y,z) = (z,x,y)`, `τ(x,y,z) = (μx, μz, μy)`.
pub fn cube_example<F: Field>(
    base: AlgebraSpec<F>,
    nu: Matrix<F>,
    mu: Matrix<F>,
) -> Result<Cube<F>, CatalogError> {
    let n = base.dim;
    let id = Matrix::identity(n);
    for (name, g) in [("nu", &nu), ("mu", &mu)] {
        if g.mul(g) != id || !is_automorphism(&base, g) {
            return Err(CatalogError::Invalid(format!(
                "{name} is not an involutive automorphism"
            )));
        }
    }
    if nu.mul(&mu) != mu.mul(&nu) {
        return Err(CatalogError::Invalid("nu and mu do not commute".into()));
    }
    if graded_component(&nu, &mu, -1, 1).is_empty() || graded_component(&nu, &mu, -1, -1).is_empty()
    {
        return Err(CatalogError::Invalid(
            "grading hypothesis fails: g(0,1) or g(1,1) is zero".into(),
        ));
    }
    let dim = 3 * n;
    let mut bil = Bilinear::zero(dim);
    for c in 0..3 {
        for i in 0..n {
            for j in 0..n {
                let v: Vec<(usize, F)> = base
                    .bil
                    .get(i, j)
                    .iter()
                    .map(|(k, x)| (c * n + k, x.clone()))
                    .collect();
                bil.set(c * n + i, c * n + j, &crate::linalg::to_dense(dim, &v));
            }
        }
    }
    let alg = AlgebraSpec::new(bil);
    let block = |blocks: [[Option<&Matrix<F>>; 3]; 3]| {
        let mut m = Matrix::zeros(dim, dim);
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    for i in 0..n {
                        for j in 0..n {
                            m.set(r * n + i, c * n + j, b.get(i, j).clone());
                        }
                    }
                }
            }
        }
        m
    };
    let action = S4Action {
        tau1: block([
            [Some(&id), None, None],
            [None, Some(&nu), None],
            [None, None, Some(&nu)],
        ]),
        tau2: block([
            [Some(&nu), None, None],
            [None, Some(&id), None],
            [None, None, Some(&nu)],
        ]),
        phi: block([
            [None, None, Some(&id)],
            [Some(&id), None, None],
            [None, Some(&id), None],
        ]),
        tau: block([
            [Some(&mu), None, None],
            [None, None, Some(&mu)],
            [None, Some(&mu), None],
        ]),
    };
    let rep = check_action(&alg, &GroupAction::S4(action.clone()))?;
    if !rep.ok() {
        return Err(CatalogError::Failed(format!(
            "cube action fails: {:?}",
            rep.relation_failures
        )));
    }
    Ok(Cube {
        base,
        nu,
        mu,
        alg,
        action,
    })
}

/// `sl₂` on `h, e + f, e − f` with the Pauli grading `h ∈ g(1,0)`, `e + f ∈ g(0,1)`, `e − f ∈ g(1,1)`.
pub fn pauli_sl2() -> (AlgebraSpec<Rational>, Matrix<Rational>, Matrix<Rational>) {
    let r = rat_int;
    let mut bil = Bilinear::zero(3);
    let mut put = |i: usize, j: usize, k: usize, c: i64| {
        bil.add_entry(i, j, k, r(c));
        bil.add_entry(j, i, k, r(-c));
    };
    put(0, 1, 2, 2);
    put(0, 2, 1, 2);
    put(1, 2, 0, -2);
    let alg = AlgebraSpec::new(bil).with_labels(vec!["h".into(), "e+f".into(), "e-f".into()]);
    (
        alg,
        Matrix::diagonal(vec![r(1), r(-1), r(-1)]),
        Matrix::diagonal(vec![r(-1), r(1), r(-1)]),
    )
}

pub fn pauli_cube() -> Result<Cube<Rational>, CatalogError> {
    let (base, nu, mu) = pauli_sl2();
    cube_example(base, nu, mu)
}

/// Solved space `{f ∈ gl(n) : f m = sign · m f}`.
pub fn twisted_commutant<F: Field>(m: &Matrix<F>, sign: i64) -> Vec<Matrix<F>> {
    let n = m.rows;
    let s = F::from_i64(sign);
    let mut eqs: Vec<SparseVec<F>> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut row = Vec::new();
            for k in 0..n {
                let a = m.get(k, c);
                if !a.is_zero() {
                    row.push((r * n + k, a.clone()));
                }
                let b = m.get(r, k).mul_ref(&s);
                if !b.is_zero() {
                    row.push((k * n + c, b.neg_ref()));
                }
            }
            eqs.push(row);
        }
    }
    solve_linear(n * n, &eqs)
        .basis
        .into_iter()
        .map(|v| Matrix {
            rows: n,
            cols: n,
            data: v,
        })
        .collect()
}

pub fn same_operator_span<F: Field>(a: &[Matrix<F>], b: &[Matrix<F>]) -> bool {
    let n = a.first().or(b.first()).map_or(0, |m| m.rows * m.cols);
    let sa = Span::from_vectors(n, a.iter().map(|m| m.data.clone()));
    sa.len() == a.len() && a.len() == b.len() && b.iter().all(|m| sa.contains(&m.data))
}

/// The octonions with `δ₁(x,y) = L_ȳL_x − L_x̄L_y`, `δ₂(x,y) = R_ȳR_x − R_x̄R_y` and `δ₀`
/// completed from the related-triple condition at `y = 1`: `δ̄₀ = δ₁ + R_{δ₂(1)}`.
pub fn octonion_nlrta() -> Nlrta<Rational> {
    let o = split_octonions();
    let n = o.dim;
    let bar = o.invol.clone().expect("involution");
    let one = unit_element(&o).expect("unital");
    let e = |k: usize| unit::<Rational>(n, k);
    let mut delta: [Vec<Matrix<Rational>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for x in 0..n {
        for y in 0..n {
            let (bx, by) = (bar.column(x), bar.column(y));
            let d1 = o
                .left_mult(&by)
                .mul(&o.left_mult(&e(x)))
                .sub(&o.left_mult(&bx).mul(&o.left_mult(&e(y))));
            let d2 = o
                .right_mult(&by)
                .mul(&o.right_mult(&e(x)))
                .sub(&o.right_mult(&bx).mul(&o.right_mult(&e(y))));
            let d0 = conj_op(&bar, &d1.add(&o.right_mult(&d2.apply(&one))));
            delta[0].push(d0);
            delta[1].push(d1);
            delta[2].push(d2);
        }
    }
    Nlrta { algebra: o, delta }
}

pub fn octonion_s4() -> Result<NlrtaLie<Rational>, CatalogError> {
    Ok(build_g_from_nlrta(&octonion_nlrta())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinatize::{
        extract_nlrta, involution_typing, lrt_isotypic, nontrivial_klein_part, verify_nlrta,
    };
    use crate::symaction::{isotypic_s4, klein_grading};

    #[test]
    fn cube_extraction() {
        let cube = pauli_cube().unwrap();
        assert_eq!(cube.alg.dim, 9);
        assert!(cube.alg.check_jacobi().is_empty());
        let g = klein_grading(&cube.action).unwrap();
        assert_eq!(g.dims(), [3, 2, 2, 2]);
        let ex = extract_nlrta(&cube.alg, &cube.action).unwrap();
        assert!(ex.nlrta.algebra.bil.is_zero());
        let rep = verify_nlrta(&ex.nlrta);
        assert!(rep.ok(), "{}", rep.summary());
        let typing = involution_typing(&cube.action, &ex).unwrap();
        assert_eq!(typing.len(), 2);
        assert!(typing.iter().all(|t| t.ok()));
        let iso = isotypic_s4(&nontrivial_klein_part(&g), &cube.action).unwrap();
        assert_eq!(
            iso.multiplicity("U") + iso.multiplicity("U'") + iso.multiplicity("W"),
            0
        );
        let rebuilt = build_g_from_nlrta(&ex.nlrta).unwrap();
        let g2 = klein_grading(&rebuilt.action).unwrap();
        assert_eq!(g2.dims()[1..], g.dims()[1..]);
    }

    #[test]
    fn cube_lrt_parts() {
        let cube = pauli_cube().unwrap();
        let ex = extract_nlrta(&cube.alg, &cube.action).unwrap();
        let parts = lrt_isotypic(&ex.nlrta.algebra).unwrap();
        assert!(parts.consistent);
        let mu_a = ex.nlrta.bar().scale(&rat_int(-1));
        assert!(same_operator_span(
            &parts.sder,
            &twisted_commutant(&mu_a, -1)
        ));
        assert!(same_operator_span(&parts.der, &twisted_commutant(&mu_a, 1)));
    }

    #[test]
    fn grading_hypothesis_enforced() {
        let (base, nu, _) = pauli_sl2();
        let id = Matrix::identity(3);
        assert!(cube_example(base, nu, id).is_err());
    }

    #[test]
    fn octonion_nlrta_rebuilds() {
        let nl = octonion_nlrta();
        let rep = verify_nlrta(&nl);
        assert!(rep.ok(), "{}", rep.summary());
        let g = build_g_from_nlrta(&nl).unwrap();
        assert_eq!(g.alg.dim, 52);
        let back = extract_nlrta(&g.alg, &g.action).unwrap();
        assert_eq!(back.nlrta.algebra.bil, nl.algebra.bil);
        assert_eq!(back.nlrta.bar(), nl.bar());
        assert_eq!(back.nlrta.delta, nl.delta);
    }
}
