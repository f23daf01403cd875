//! Lie algebras with S₃-symmetry built from a three-dimensional space `E` or from
//! `V = W ⊕ E`: type `G₂`, orthogonal and general linear algebras.

use super::CatalogError;
use crate::algebra::{AlgebraSpec, Bilinear, Trilinear};
use crate::coordinatize::extract_gm_from_s3;
use crate::gmalcev::GMAlgebra;
use crate::linalg::{unit, Matrix, Span};
use crate::scalar::{rat, rat_int, Field, Rational, Scalar};
use crate::symaction::S3Action;

/// A Lie algebra over ℚ(ω) with an S₃-action and the generalized Malcev algebra read off it.
#[derive(Clone, Debug)]
pub struct S3Example {
    pub alg: AlgebraSpec<Scalar>,
    pub action: S3Action<Scalar>,
    pub gm: GMAlgebra<Scalar>,
    /// The same generalized Malcev algebra given by its closed-form table.
    pub expected_gm: GMAlgebra<Scalar>,
}

impl S3Example {
    pub fn matches_expected(&self) -> bool {
        self.gm.bil == self.expected_gm.bil && self.gm.tri == self.expected_gm.tri
    }
}

pub fn lift(x: &Rational) -> Scalar {
    Scalar::from(x.clone())
}

/// Brackets of matrices re-expressed in a basis closed under commutators.
pub fn matrix_lie_algebra<F: Field>(
    basis: &[Matrix<F>],
) -> Result<(AlgebraSpec<F>, Span<F>), CatalogError> {
    let n = basis.len();
    let size = basis.first().map_or(0, |m| m.rows * m.cols);
    let span = Span::from_vectors(size, basis.iter().map(|m| m.data.clone()));
    if span.len() != n {
        return Err(CatalogError::Invalid(
            "matrix basis is linearly dependent".into(),
        ));
    }
    let mut bil = Bilinear::zero(n);
    for i in 0..n {
        for j in 0..n {
            let c = span
                .coords(&basis[i].commutator(&basis[j]).data)
                .ok_or_else(|| {
                    CatalogError::Invalid("matrix span not closed under commutators".into())
                })?;
            bil.set(i, j, &c);
        }
    }
    Ok((AlgebraSpec::new(bil), span))
}

/// The matrix of `X ↦ g X g⁻¹` on the span.
pub fn conjugation_matrix<F: Field>(
    span: &Span<F>,
    basis: &[Matrix<F>],
    g: &Matrix<F>,
    g_inv: &Matrix<F>,
) -> Result<Matrix<F>, CatalogError> {
    let cols: Result<Vec<Vec<F>>, CatalogError> = basis
        .iter()
        .map(|x| {
            span.coords(&g.mul(x).mul(g_inv).data)
                .ok_or_else(|| CatalogError::Invalid("conjugation leaves the span".into()))
        })
        .collect();
    Ok(Matrix::from_columns(basis.len(), &cols?))
}

/// Permutation action on `kⁿ` moving the first three coordinates: `φ = (1 2 3)`, `τ = (1 2)`.
fn first_three_permutations<F: Field>(n: usize) -> (Matrix<F>, Matrix<F>) {
    let perm = |p: [usize; 3]| {
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            let r = if c < 3 { p[c] } else { c };
            m.set(r, c, F::one());
        }
        m
    };
    (perm([1, 2, 0]), perm([1, 0, 2]))
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// The generalized Malcev algebra on `E = k³` with `xy = 2x×y` and
/// `{x,y,z} = b(x,y)z − c·b(y,z)x`; `c = 3` is the one coming from `G₂`.
pub fn g2_gm_with<F: Field>(c: i64) -> GMAlgebra<F> {
    let mut bil = Bilinear::zero(3);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0 {
                    bil.add_entry(i, j, k, F::from_i64(2 * e));
                }
            }
        }
    }
    let mut tri = Trilinear::zero(3);
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                if x == y {
                    tri.add_entry(x, y, z, z, F::one());
                }
                if y == z {
                    tri.add_entry(x, y, z, x, F::from_i64(-c));
                }
            }
        }
    }
    GMAlgebra::new(bil, tri)
        .expect("matching dimensions")
        .with_labels(vec!["e1".into(), "e2".into(), "e3".into()])
}

/// `E* ⊕ sl(E) ⊕ E` with `[e,f] = 3f(·)e − f(e)I`, `[eᵢ,eⱼ] = −2 eᵢ∧eⱼ ∈ E*`, `[fᵢ,fⱼ] = 2 fᵢ∧fⱼ ∈ E`.
///
/// Basis: `f₁, f₂, f₃`, then `E₁₂, E₁₃, E₂₁, E₂₃, E₃₁, E₃₂, E₁₁ − E₂₂, E₂₂ − E₃₃`, then `e₁, e₂, e₃`.
pub fn g2_lie() -> AlgebraSpec<Rational> {
    let r = |n: i64| rat_int(n);
    let mut sl_basis = Vec::new();
    for (a, b) in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)] {
        let mut m = Matrix::zeros(3, 3);
        m.set(a, b, r(1));
        sl_basis.push(m);
    }
    sl_basis.push(Matrix::diagonal(vec![r(1), r(-1), r(0)]));
    sl_basis.push(Matrix::diagonal(vec![r(0), r(1), r(-1)]));
    let sl_span = Span::from_vectors(9, sl_basis.iter().map(|m| m.data.clone()));

    // (f, A, e) with f a row vector
    type Elem = ([Rational; 3], Matrix<Rational>, [Rational; 3]);
    let decode = |i: usize| -> Elem {
        let mut f = [r(0), r(0), r(0)];
        let mut e = [r(0), r(0), r(0)];
        let mut a = Matrix::zeros(3, 3);
        match i {
            0..=2 => f[i] = r(1),
            3..=10 => a = sl_basis[i - 3].clone(),
            _ => e[i - 11] = r(1),
        }
        (f, a, e)
    };
    let bracket = |x: &Elem, y: &Elem| -> Elem {
        let (f1, a1, e1) = x;
        let (f2, a2, e2) = y;
        let mut f = [r(0), r(0), r(0)];
        let mut e = [r(0), r(0), r(0)];
        let mut a = a1.commutator(a2);
        let ae = |m: &Matrix<Rational>, v: &[Rational; 3]| m.apply(v);
        let fa = |v: &[Rational; 3], m: &Matrix<Rational>| m.transpose().apply(v);
        let (x1, x2) = (ae(a1, e2), ae(a2, e1));
        let (y1, y2) = (fa(f2, a1), fa(f1, a2));
        for k in 0..3 {
            e[k] += &(&x1[k] - &x2[k]);
            f[k] += &(&y2[k] - &y1[k]);
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = levi_civita(i, j, k);
                    if eps == 0 {
                        continue;
                    }
                    f[k] += &(&e1[i] * &e2[j] * r(-2 * eps));
                    e[k] += &(&f1[i] * &f2[j] * r(2 * eps));
                }
            }
        }
        // [e, f] = 3 f(·)e − f(e)I and [f, e] = −[e, f]
        let ef = |ev: &[Rational; 3], fv: &[Rational; 3]| {
            let mut m = Matrix::zeros(3, 3);
            let fe: Rational = ev.iter().zip(fv).map(|(p, q)| p * q).sum();
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = &ev[i] * &fv[j] * r(3);
                    if i == j {
                        v -= &fe;
                    }
                    m.set(i, j, v);
                }
            }
            m
        };
        a = a.add(&ef(e1, f2)).sub(&ef(e2, f1));
        (f, a, e)
    };
    let encode = |x: &Elem| -> Vec<Rational> {
        let mut v = x.0.to_vec();
        v.extend(sl_span.coords(&x.1.data).expect("traceless"));
        v.extend(x.2.iter().cloned());
        v
    };
    let bil = Bilinear::from_fn(14, |i, j| encode(&bracket(&decode(i), &decode(j))));
    let mut labels: Vec<String> = (1..=3).map(|k| format!("f{k}")).collect();
    labels.extend(
        ["E12", "E13", "E21", "E23", "E31", "E32", "H1", "H2"]
            .iter()
            .map(|s| s.to_string()),
    );
    labels.extend((1..=3).map(|k| format!("e{k}")));
    AlgebraSpec::new(bil).with_labels(labels)
}

/// `φ(e) = ωe`, `φ(f) = ω²f`, `φ(A) = A`; `τ(e) = −b(e,·)`, `τ(f) = −f^♯`, `τ(A) = −Aᵗ`.
pub fn g2_action() -> S3Action<Scalar> {
    let w = Scalar::omega();
    let w2 = w.mul_ref(&w);
    let mut phi = Matrix::identity(14);
    let mut tau = Matrix::zeros(14, 14);
    for k in 0..3 {
        phi.set(k, k, w2.clone());
        phi.set(11 + k, 11 + k, w.clone());
        tau.set(11 + k, k, Scalar::from_int(-1));
        tau.set(k, 11 + k, Scalar::from_int(-1));
    }
    // −Aᵗ on E12, E13, E21, E23, E31, E32, H1, H2
    for (a, b) in [(0, 2), (1, 4), (3, 5)] {
        tau.set(3 + b, 3 + a, Scalar::from_int(-1));
        tau.set(3 + a, 3 + b, Scalar::from_int(-1));
    }
    tau.set(9, 9, Scalar::from_int(-1));
    tau.set(10, 10, Scalar::from_int(-1));
    S3Action { phi, tau }
}

pub fn g2_example() -> Result<S3Example, CatalogError> {
    let alg = g2_lie().map_scalars(lift);
    let action = g2_action();
    let ex = extract_gm_from_s3(&alg, &action, None)?;
    Ok(S3Example {
        alg,
        action,
        gm: ex.gm,
        expected_gm: g2_gm_with(3),
    })
}

/// `b = diag(1/3, 1/3, 1/3, 1, …, 1)`, so that `b|_W` is the invariant form with `(w_ω | w_{ω²}) = 1`.
fn so_form<F: Field>(n: usize) -> Matrix<F> {
    Matrix::diagonal(
        (0..n)
            .map(|i| if i < 3 { F::from_frac(1, 3) } else { F::one() })
            .collect(),
    )
}

/// `σ_{u,v}: w ↦ b(u,w)v − b(v,w)u`
fn sigma_matrix<F: Field>(b: &Matrix<F>, u: &[F], v: &[F]) -> Matrix<F> {
    let n = u.len();
    let bu = b.apply(u);
    let bv = b.apply(v);
    let mut m = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut x = v[r].mul_ref(&bu[c]);
            x -= &u[r].mul_ref(&bv[c]);
            m.set(r, c, x);
        }
    }
    m
}

/// Basis `ε₀ = (1,1,1,0,…)`, `εⱼ = e_{j+3}` of the trivial part `E`, orthonormal for `b`.
fn trivial_part_basis<F: Field>(n: usize) -> Vec<Vec<F>> {
    let mut out = vec![(0..n)
        .map(|i| if i < 3 { F::one() } else { F::zero() })
        .collect::<Vec<F>>()];
    out.extend((3..n).map(|i| unit(n, i)));
    out
}

fn w_omega_vector(n: usize, conj: bool) -> Vec<Scalar> {
    let w = Scalar::omega();
    let w2 = w.mul_ref(&w);
    let mut v = vec![Scalar::from_int(0); n];
    let (a, b) = if conj { (w, w2) } else { (w2, w) };
    v[0] = a;
    v[1] = b;
    v[2] = Scalar::from_int(1);
    v
}

/// The Jordan triple `{x,y,z} = b(x,z)y − b(y,z)x − b(x,y)z` on `E` with `b` the identity form.
pub fn so_jts<F: Field>(m: usize) -> GMAlgebra<F> {
    let mut tri = Trilinear::zero(m);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if x == z {
                    tri.add_entry(x, y, z, y, F::one());
                }
                if y == z {
                    tri.add_entry(x, y, z, x, F::from_i64(-1));
                }
                if x == y {
                    tri.add_entry(x, y, z, z, F::from_i64(-1));
                }
            }
        }
    }
    GMAlgebra::jordan_triple(tri)
}

/// `so(V, b)` on the basis `σ_{eᵢ,eⱼ}`, `i < j`, with `S₃` permuting `e₁, e₂, e₃`.
pub fn so_example(n: usize) -> Result<S3Example, CatalogError> {
    if n < 3 {
        return Err(CatalogError::Invalid(format!(
            "so example needs dim V >= 3, got {n}"
        )));
    }
    let b: Matrix<Rational> = so_form(n);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(sigma_matrix(&b, &unit(n, i), &unit(n, j)));
            labels.push(format!("s{}{}", i + 1, j + 1));
        }
    }
    let (alg, span) = matrix_lie_algebra(&basis)?;
    let (p_phi, p_tau) = first_three_permutations::<Rational>(n);
    let phi = conjugation_matrix(&span, &basis, &p_phi, &p_phi.transpose())?;
    let tau = conjugation_matrix(&span, &basis, &p_tau, &p_tau.transpose())?;
    let alg = alg.with_labels(labels).map_scalars(lift);
    let action = S3Action {
        phi: phi.map(lift),
        tau: tau.map(lift),
    };

    let bs: Matrix<Scalar> = b.map(lift);
    let w = w_omega_vector(n, false);
    let lifted: Vec<Matrix<Scalar>> = basis.iter().map(|m| m.map(lift)).collect();
    let lspan = Span::from_vectors(n * n, lifted.iter().map(|m| m.data.clone()));
    let preferred: Result<Vec<Vec<Scalar>>, CatalogError> = trivial_part_basis::<Scalar>(n)
        .iter()
        .map(|eps| {
            lspan
                .coords(&sigma_matrix(&bs, &w, eps).data)
                .ok_or_else(|| CatalogError::Invalid("sigma outside so(V)".into()))
        })
        .collect();
    let ex = extract_gm_from_s3(&alg, &action, Some(&preferred?))?;
    Ok(S3Example {
        alg,
        action,
        gm: ex.gm,
        expected_gm: so_jts(n - 2),
    })
}

/// The table on `k·a ⊕ E ⊕ E*` with `ae = −e`, `af = f`, `fe = f(e)a` and the listed triples;
/// basis `a, e₀, …, e_{m−1}, f₀, …, f_{m−1}` with `f` dual to `e`.
pub fn sl_gm<F: Field>(m: usize) -> GMAlgebra<F> {
    let dim = 1 + 2 * m;
    let e = |i: usize| 1 + i;
    let f = |i: usize| 1 + m + i;
    let one = F::one;
    let neg = || F::from_i64(-1);
    let mut bil = Bilinear::zero(dim);
    for i in 0..m {
        bil.add_entry(0, e(i), e(i), neg());
        bil.add_entry(e(i), 0, e(i), one());
        bil.add_entry(0, f(i), f(i), one());
        bil.add_entry(f(i), 0, f(i), neg());
        bil.add_entry(f(i), e(i), 0, one());
        bil.add_entry(e(i), f(i), 0, neg());
    }
    let mut tri = Trilinear::zero(dim);
    tri.add_entry(0, 0, 0, 0, F::from_i64(2));
    for i in 0..m {
        tri.add_entry(0, 0, e(i), e(i), neg());
        tri.add_entry(0, 0, f(i), f(i), neg());
        // {e,f,a} = −f(e)a = {f,e,a}
        tri.add_entry(e(i), f(i), 0, 0, neg());
        tri.add_entry(f(i), e(i), 0, 0, neg());
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                // {e_i, f_j, e_k} = f_j(e_k) e_i + f_j(e_i) e_k
                if j == k {
                    tri.add_entry(e(i), f(j), e(k), e(i), one());
                    // {f_j, e_i, e_k} = −f_j(e_k) e_i
                    tri.add_entry(f(j), e(i), e(k), e(i), neg());
                }
                if j == i {
                    tri.add_entry(e(i), f(j), e(k), e(k), one());
                }
                // {e_i, f_j, f_k} = −f_k(e_i) f_j
                if k == i {
                    tri.add_entry(e(i), f(j), f(k), f(j), neg());
                    // {f_j, e_i, f_k} = f_k(e_i) f_j + f_j(e_i) f_k
                    tri.add_entry(f(j), e(i), f(k), f(j), one());
                }
                if j == i {
                    tri.add_entry(f(j), e(i), f(k), f(k), one());
                }
            }
        }
    }
    let mut labels = vec!["a".to_string()];
    labels.extend((0..m).map(|i| format!("e{i}")));
    labels.extend((0..m).map(|i| format!("f{i}")));
    GMAlgebra::new(bil, tri)
        .expect("matching dimensions")
        .with_labels(labels)
}

/// `gl(W ⊕ E)` with `dim E = m`, `S₃` acting by conjugation with the permutations of `e₁, e₂, e₃`.
pub fn sl_example(m: usize) -> Result<S3Example, CatalogError> {
    if m == 0 {
        return Err(CatalogError::Invalid("sl example needs dim E >= 1".into()));
    }
    let n = m + 2;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut x = Matrix::<Rational>::zeros(n, n);
            x.set(r, c, rat_int(1));
            basis.push(x);
            labels.push(format!("E{}{}", r + 1, c + 1));
        }
    }
    let (alg, span) = matrix_lie_algebra(&basis)?;
    let (p_phi, p_tau) = first_three_permutations::<Rational>(n);
    let phi = conjugation_matrix(&span, &basis, &p_phi, &p_phi.transpose())?;
    let tau = conjugation_matrix(&span, &basis, &p_tau, &p_tau.transpose())?;
    let alg = alg.with_labels(labels).map_scalars(lift);
    let action = S3Action {
        phi: phi.map(lift),
        tau: tau.map(lift),
    };

    let w = w_omega_vector(n, false);
    let w2 = w_omega_vector(n, true);
    let third = Scalar::from(rat(1, 3));
    // (w|·) as a row vector: (1/3) wᵗ on the first three coordinates
    let pairing = |v: &[Scalar]| -> Vec<Scalar> { v.iter().map(|x| x.mul_ref(&third)).collect() };
    let outer = |v: &[Scalar], f: &[Scalar]| -> Vec<Scalar> {
        let mut d = Vec::with_capacity(n * n);
        for vr in v {
            for fc in f {
                d.push(vr.mul_ref(fc));
            }
        }
        d
    };
    let eps = trivial_part_basis::<Scalar>(n);
    let mut duals: Vec<Vec<Scalar>> = vec![(0..n)
        .map(|i| {
            if i < 3 {
                third.clone()
            } else {
                Scalar::from_int(0)
            }
        })
        .collect()];
    duals.extend((3..n).map(|i| unit(n, i)));
    let mut preferred = vec![outer(&w2, &pairing(&w2))];
    preferred.extend(eps.iter().map(|e| outer(e, &pairing(&w))));
    preferred.extend(duals.iter().map(|f| outer(&w, f)));
    let ex = extract_gm_from_s3(&alg, &action, Some(&preferred))?;
    Ok(S3Example {
        alg,
        action,
        gm: ex.gm,
        expected_gm: sl_gm(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmalcev::{check_gm_axioms, check_malcev};
    use crate::symaction::isotypic_s3;

    fn full(n: usize) -> Vec<Vec<Scalar>> {
        (0..n).map(|i| unit(n, i)).collect()
    }

    #[test]
    fn g2_model() {
        let ex = g2_example().unwrap();
        assert_eq!(ex.alg.dim, 14);
        assert!(ex.alg.check_jacobi().is_empty());
        // [e₁, e₂] = −2 e₁∧e₂ = −2 f₃
        let p = ex.alg.product(&unit(14, 11), &unit(14, 12));
        assert_eq!(p, crate::linalg::scale(&Scalar::from_int(-2), &unit(14, 2)));
        assert!(ex.matches_expected());
        let rep = isotypic_s3(&full(14), &ex.action).unwrap();
        assert_eq!(rep.s3_triple(), (3, 5, 3));
    }

    #[test]
    fn so_examples() {
        for n in 3..=5 {
            let ex = so_example(n).unwrap();
            assert_eq!(ex.alg.dim, n * (n - 1) / 2);
            assert!(ex.alg.check_jacobi().is_empty());
            assert!(ex.matches_expected(), "n = {n}");
            let rep = isotypic_s3(&full(ex.alg.dim), &ex.action).unwrap();
            assert_eq!(rep.s3_triple(), ((n - 2) * (n - 3) / 2, 1, n - 2));
        }
        assert!(so_example(2).is_err());
    }

    #[test]
    fn sl_examples() {
        for m in 1..=3 {
            let expected: GMAlgebra<Rational> = sl_gm(m);
            assert!(
                check_gm_axioms(&expected).ok(),
                "m = {m}: {}",
                check_gm_axioms(&expected).summary()
            );
            let ex = sl_example(m).unwrap();
            assert!(ex.matches_expected(), "m = {m}");
        }
        assert!(!check_malcev(&sl_gm::<Rational>(2).binary_algebra()));
        assert!(check_malcev(&sl_gm::<Rational>(1).binary_algebra()));
    }
}
