//! The two-dimensional module model, split Hurwitz algebras, their para-Hurwitz
//! counterparts and triality algebras.

use serde::Serialize;

use super::CatalogError;
use crate::algebra::{AlgebraSpec, Bilinear};
use crate::coordinatize::RelatedTriple;
use crate::linalg::{scale, solve_linear, sub, to_dense, unit, Matrix, Span, SparseVec};
use crate::scalar::{rat, rat_int, Field, Rational};

/// Structure constants on `W` in the basis `{w₊, w₋}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WConstants {
    pub bullet: Bilinear<Rational>,
    pub sym: Matrix<Rational>,
    pub alt: Matrix<Rational>,
    /// Matrix of `w ↦ u' ⋄ w`.
    pub diamond: Matrix<Rational>,
    /// `u' ⋄ u' = c·u`
    pub diamond_square: Rational,
}

fn w_plus() -> [Rational; 3] {
    [rat_int(-1), rat_int(-1), rat_int(2)]
}

fn w_minus() -> [Rational; 3] {
    [rat_int(3), rat_int(-3), rat_int(0)]
}

/// Coordinates of a vector of `k³` with coordinate sum zero in `{w₊, w₋}`.
fn w_coords(v: &[Rational; 3]) -> Vec<Rational> {
    let span = Span::from_vectors(3, vec![w_plus().to_vec(), w_minus().to_vec()]);
    span.coords(v).expect("vector lies in W")
}

fn cross3(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot3(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Read off from componentwise multiplication in `k³ = U ⊕ W`.
pub fn model_w_constants() -> WConstants {
    let basis = [w_plus(), w_minus()];
    let third = rat(1, 3);
    let mut bullet = Bilinear::zero(2);
    let mut sym = Matrix::zeros(2, 2);
    let mut alt = Matrix::zeros(2, 2);
    let u = [rat_int(1), rat_int(1), rat_int(1)];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let xy: [Rational; 3] = [&x[0] * &y[0], &x[1] * &y[1], &x[2] * &y[2]];
            let mean = xy.iter().sum::<Rational>() * &third;
            let pw = [&xy[0] - &mean, &xy[1] - &mean, &xy[2] - &mean];
            bullet.set(i, j, &w_coords(&pw));
            sym.set(i, j, mean);
            // det(u, x, y), normalized so that ⟨w₋|w₊⟩ = 1
            let det = dot3(&u, &cross3(x, y));
            alt.set(i, j, det * rat(-1, 18));
        }
    }
    let diamond_cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|w| {
            let c = cross3(&u, w);
            w_coords(&[&c[0] * rat_int(2), &c[1] * rat_int(2), &c[2] * rat_int(2)])
        })
        .collect();
    WConstants {
        bullet,
        sym,
        alt,
        diamond: Matrix::from_columns(2, &diamond_cols),
        diamond_square: rat_int(-12),
    }
}

/// `w_ω = (ω², ω, 1)` in the basis `{w₊, w₋}`: `½w₊ + ((ω² − ω)/6)·w₋`.
pub fn w_omega_coords<F: crate::scalar::OmegaField>() -> [F; 2] {
    let w = F::omega();
    let w2 = w.mul_ref(&w);
    [F::from_frac(1, 2), (w2 - w).mul_ref(&F::from_frac(1, 6))]
}

/// Zorn vector matrices `(a, u, v, b)` on the basis `e₁, u₁, u₂, u₃, v₁, v₂, v₃, e₂`.
pub fn split_octonions() -> AlgebraSpec<Rational> {
    type Z = (Rational, [Rational; 3], [Rational; 3], Rational);
    let decode = |v: &[Rational]| -> Z {
        (
            v[0].clone(),
            [v[1].clone(), v[2].clone(), v[3].clone()],
            [v[4].clone(), v[5].clone(), v[6].clone()],
            v[7].clone(),
        )
    };
    let mul = |x: Z, y: Z| -> Vec<Rational> {
        let (a, u, v, b) = x;
        let (a2, u2, v2, b2) = y;
        let vv = cross3(&v, &v2);
        let uu = cross3(&u, &u2);
        let mut out = vec![&a * &a2 + dot3(&u, &v2)];
        out.extend((0..3).map(|k| &a * &u2[k] + &b2 * &u[k] - &vv[k]));
        out.extend((0..3).map(|k| &a2 * &v[k] + &b * &v2[k] + &uu[k]));
        out.push(&b * &b2 + dot3(&v, &u2));
        out
    };
    let bil = Bilinear::from_fn(8, |i, j| mul(decode(&unit(8, i)), decode(&unit(8, j))));
    let mut invol = Matrix::zeros(8, 8);
    invol.set(7, 0, rat_int(1));
    invol.set(0, 7, rat_int(1));
    for k in 1..7 {
        invol.set(k, k, rat_int(-1));
    }
    // polar form of the norm ab − u·v
    let mut form = Matrix::zeros(8, 8);
    form.set(0, 7, rat_int(1));
    form.set(7, 0, rat_int(1));
    for k in 0..3 {
        form.set(1 + k, 4 + k, rat_int(-1));
        form.set(4 + k, 1 + k, rat_int(-1));
    }
    let labels = ["e1", "u1", "u2", "u3", "v1", "v2", "v3", "e2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    AlgebraSpec::new(bil)
        .with_invol(invol)
        .with_form(form)
        .with_labels(labels)
}

/// The subalgebra spanned by `basis`, with involution and form restricted.
pub fn restrict_algebra<F: Field>(
    alg: &AlgebraSpec<F>,
    basis: &[Vec<F>],
) -> Result<AlgebraSpec<F>, CatalogError> {
    let span = Span::from_vectors(alg.dim, basis.to_vec());
    let n = basis.len();
    let coords = |v: &[F]| {
        span.coords(v)
            .ok_or_else(|| CatalogError::Invalid("span is not a subalgebra".into()))
    };
    let mut bil = Bilinear::zero(n);
    for i in 0..n {
        for j in 0..n {
            bil.set(i, j, &coords(&alg.product(&basis[i], &basis[j]))?);
        }
    }
    let mut out = AlgebraSpec::new(bil);
    if let Some(b) = &alg.invol {
        let cols: Result<Vec<_>, _> = basis.iter().map(|v| coords(&b.apply(v))).collect();
        out = out.with_invol(Matrix::from_columns(n, &cols?));
    }
    if let Some(q) = &alg.form {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            let qi = q.transpose().apply(&basis[i]);
            for j in 0..n {
                g.set(
                    i,
                    j,
                    basis[j].iter().zip(&qi).fold(F::zero(), |mut s, (a, b)| {
                        s.add_mul(a, b);
                        s
                    }),
                );
            }
        }
        out = out.with_form(g);
    }
    Ok(out)
}

/// Trace-zero split octonions `e₁ − e₂, u, v` under the commutator `[x,y] = xy − yx`.
pub fn octonions_trace_zero() -> AlgebraSpec<Rational> {
    let o = split_octonions();
    let mut basis = vec![sub(&unit(8, 0), &unit(8, 7))];
    basis.extend((1..7).map(|k| unit(8, k)));
    let span = Span::from_vectors(8, basis.clone());
    let bil = Bilinear::from_fn(7, |i, j| {
        let c = sub(
            &o.product(&basis[i], &basis[j]),
            &o.product(&basis[j], &basis[i]),
        );
        span.coords(&c).expect("commutator stays trace-zero")
    });
    let labels = ["h", "u1", "u2", "u3", "v1", "v2", "v3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    AlgebraSpec::new(bil).with_labels(labels)
}

/// `k[z]` with `z² = −3`, `z̄ = −z` and norm `q(e) = 1`, `q(z) = 3`.
pub fn quadratic_k() -> AlgebraSpec<Rational> {
    let mut bil = Bilinear::zero(2);
    bil.add_entry(0, 0, 0, rat_int(1));
    bil.add_entry(0, 1, 1, rat_int(1));
    bil.add_entry(1, 0, 1, rat_int(1));
    bil.add_entry(1, 1, 0, rat_int(-3));
    AlgebraSpec::new(bil)
        .with_invol(Matrix::diagonal(vec![rat_int(1), rat_int(-1)]))
        .with_form(Matrix::diagonal(vec![rat_int(2), rat_int(6)]))
        .with_labels(vec!["e".into(), "z".into()])
}

/// Unital Hurwitz algebra of dimension `d`: `k`, `k[z]`, split quaternions or split octonions.
pub fn hurwitz(d: usize) -> Result<AlgebraSpec<Rational>, CatalogError> {
    let o = split_octonions();
    let e = |k: usize| unit::<Rational>(8, k);
    match d {
        1 => {
            let one: Vec<Rational> = crate::linalg::add(&e(0), &e(7));
            Ok(restrict_algebra(&o, &[one])?.with_labels(vec!["1".into()]))
        }
        2 => Ok(quadratic_k()),
        4 => Ok(
            restrict_algebra(&o, &[e(0), e(1), e(4), e(7)])?.with_labels(
                ["e1", "u1", "v1", "e2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            ),
        ),
        8 => Ok(o),
        _ => Err(CatalogError::Invalid(format!(
            "Hurwitz dimension must be 1, 2, 4 or 8, got {d}"
        ))),
    }
}

/// `x * y = x̄ ȳ` on the Hurwitz algebra of dimension `d`, with the same polar form.
pub fn para_hurwitz(d: usize) -> Result<AlgebraSpec<Rational>, CatalogError> {
    let h = hurwitz(d)?;
    let bar = h.invol.clone().expect("Hurwitz involution");
    let bil = Bilinear::from_fn(d, |i, j| h.product(&bar.column(i), &bar.column(j)));
    let mut s = AlgebraSpec::new(bil).with_form(h.form.clone().expect("Hurwitz norm"));
    s.labels = h.labels.clone();
    Ok(s)
}

/// Violations of the composition-algebra laws on basis tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    /// `(x,x,y)` or `(y,x,x)` nonzero.
    pub alternative: Vec<(usize, usize)>,
    /// `n(xy) ≠ n(x) n(y)`
    pub multiplicative: Vec<(usize, usize)>,
    /// `x + x̄ ∉ k·1`
    pub standard_involution: Vec<usize>,
    /// `q(x*y, z) ≠ q(x, y*z)`
    pub associative_form: Vec<(usize, usize, usize)>,
}

impl CompositionReport {
    pub fn ok(&self) -> bool {
        self.alternative.is_empty()
            && self.multiplicative.is_empty()
            && self.standard_involution.is_empty()
            && self.associative_form.is_empty()
    }
}

fn form_value<F: Field>(q: &Matrix<F>, x: &[F], y: &[F]) -> F {
    let qy = q.apply(y);
    x.iter().zip(&qy).fold(F::zero(), |mut s, (a, b)| {
        s.add_mul(a, b);
        s
    })
}

/// Norm `n(x) = ½ q(x, x)` from the polar form.
pub fn norm<F: Field>(q: &Matrix<F>, x: &[F]) -> F {
    form_value(q, x, x).mul_ref(&F::from_frac(1, 2))
}

pub fn polar<F: Field>(q: &Matrix<F>, x: &[F], y: &[F]) -> F {
    form_value(q, x, y)
}

/// The two-sided unit, if any.
pub fn unit_element<F: Field>(a: &AlgebraSpec<F>) -> Option<Vec<F>> {
    let n = a.dim;
    // Σ uᵢ eᵢe_j − s e_j = 0 = Σ uᵢ e_j eᵢ − s e_j, then normalize s = 1
    let mut eqs: Vec<SparseVec<F>> = Vec::new();
    for j in 0..n {
        for left in [true, false] {
            let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); n];
            rows[j].push((n, F::one().neg_ref()));
            for i in 0..n {
                let p = if left {
                    a.bil.get(i, j)
                } else {
                    a.bil.get(j, i)
                };
                for (l, c) in p {
                    rows[*l].push((i, c.clone()));
                }
            }
            eqs.extend(rows);
        }
    }
    let sol = solve_linear(n + 1, &eqs);
    let v = sol.basis.into_iter().find(|v| !v[n].is_zero())?;
    let s = v[n].inv()?;
    Some(v[..n].iter().map(|x| x.mul_ref(&s)).collect())
}

/// Checks a unital Hurwitz algebra: alternativity, multiplicative norm, standard involution.
pub fn check_hurwitz<F: Field>(a: &AlgebraSpec<F>) -> CompositionReport {
    let n = a.dim;
    let q = a.form.as_ref().expect("norm present");
    let bar = a.invol.as_ref().expect("involution present");
    let e = |k: usize| unit::<F>(n, k);
    let one_span = Span::from_vectors(n, unit_element(a));
    let mut rep = CompositionReport::default();
    for x in 0..n {
        let t = crate::linalg::add(&e(x), &bar.column(x));
        if !crate::linalg::is_zero_vec(&t) && !one_span.contains(&t) {
            rep.standard_involution.push(x);
        }
        for y in 0..n {
            let xx_y = a.product(&a.product(&e(x), &e(x)), &e(y));
            let x_xy = a.product(&e(x), &a.product(&e(x), &e(y)));
            let yx_x = a.product(&a.product(&e(y), &e(x)), &e(x));
            let y_xx = a.product(&e(y), &a.product(&e(x), &e(x)));
            if xx_y != x_xy || yx_x != y_xx {
                rep.alternative.push((x, y));
            }
            let xy = to_dense(n, a.bil.get(x, y));
            if norm(q, &xy) != norm(q, &e(x)).mul_ref(&norm(q, &e(y))) {
                rep.multiplicative.push((x, y));
            }
        }
    }
    rep
}

/// Checks a symmetric composition algebra: multiplicative norm and `q(x*y, z) = q(x, y*z)`.
pub fn check_symmetric_composition<F: Field>(s: &AlgebraSpec<F>) -> CompositionReport {
    let n = s.dim;
    let q = s.form.as_ref().expect("norm present");
    let e = |k: usize| unit::<F>(n, k);
    let mut rep = CompositionReport::default();
    for x in 0..n {
        for y in 0..n {
            let xy = to_dense(n, s.bil.get(x, y));
            if norm(q, &xy) != norm(q, &e(x)).mul_ref(&norm(q, &e(y))) {
                rep.multiplicative.push((x, y));
            }
            for z in 0..n {
                let yz = to_dense(n, s.bil.get(y, z));
                if polar(q, &xy, &e(z)) != polar(q, &e(x), &yz) {
                    rep.associative_form.push((x, y, z));
                }
            }
        }
    }
    rep
}

/// `tri(S, *, q) = {(d₀,d₁,d₂) ∈ so(S,q)³ : d₀(x*y) = d₁(x)*y + x*d₂(y)}`.
#[derive(Clone, Debug)]
pub struct Triality<F> {
    pub basis: Vec<RelatedTriple<F>>,
    span: Span<F>,
}

impl<F: Field> Triality<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, t: &RelatedTriple<F>) -> Option<Vec<F>> {
        self.span.coords(&t.flatten())
    }
}

pub fn triality_tri<F: Field>(s: &AlgebraSpec<F>) -> Triality<F> {
    let n = s.dim;
    let q = s.form.as_ref().expect("norm present");
    let var = |i: usize, r: usize, c: usize| i * n * n + r * n + c;
    let mut eqs: Vec<SparseVec<F>> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); n];
            for (m, c) in s.bil.get(x, y) {
                for (l, row) in rows.iter_mut().enumerate() {
                    row.push((var(0, l, *m), c.clone()));
                }
            }
            for r in 0..n {
                for (l, c) in s.bil.get(r, y) {
                    rows[*l].push((var(1, r, x), c.neg_ref()));
                }
                for (l, c) in s.bil.get(x, r) {
                    rows[*l].push((var(2, r, y), c.neg_ref()));
                }
            }
            eqs.extend(rows.into_iter().filter(|r| !r.is_empty()));
        }
    }
    // q(d x, y) + q(x, d y) = 0
    for i in 0..3 {
        for x in 0..n {
            for y in x..n {
                let mut row: SparseVec<F> = Vec::new();
                for r in 0..n {
                    let a = q.get(r, y);
                    if !a.is_zero() {
                        row.push((var(i, r, x), a.clone()));
                    }
                    let b = q.get(x, r);
                    if !b.is_zero() {
                        row.push((var(i, r, y), b.clone()));
                    }
                }
                if !row.is_empty() {
                    eqs.push(row);
                }
            }
        }
    }
    let sol = solve_linear(3 * n * n, &eqs);
    let span = Span::from_vectors(3 * n * n, sol.basis.clone());
    Triality {
        basis: sol
            .basis
            .iter()
            .map(|v| RelatedTriple::from_flat(n, v))
            .collect(),
        span,
    }
}

/// `σ_{a,b} = q(a,·) b − q(b,·) a`
pub fn sigma<F: Field>(q: &Matrix<F>, a: &[F], b: &[F]) -> Matrix<F> {
    let n = a.len();
    let cols: Vec<Vec<F>> = (0..n)
        .map(|c| {
            let ec = unit::<F>(n, c);
            sub(&scale(&polar(q, a, &ec), b), &scale(&polar(q, b, &ec), a))
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

/// `t_{a,b} = (σ_{a,b}, ½q(a,b)I − R_a L_b, ½q(a,b)I − L_a R_b)`
pub fn t_triple<F: Field>(s: &AlgebraSpec<F>, a: &[F], b: &[F]) -> RelatedTriple<F> {
    let q = s.form.as_ref().expect("norm present");
    let n = s.dim;
    let half = Matrix::scalar(n, polar(q, a, b).mul_ref(&F::from_frac(1, 2)));
    let ra_lb = s.right_mult(a).mul(&s.left_mult(b));
    let la_rb = s.left_mult(a).mul(&s.right_mult(b));
    RelatedTriple([sigma(q, a, b), half.sub(&ra_lb), half.sub(&la_rb)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        rat_int(n)
    }

    #[test]
    fn w_constants_match_model() {
        let w = model_w_constants();
        assert_eq!(to_dense(2, w.bullet.get(0, 0)), vec![r(1), r(0)]);
        assert_eq!(to_dense(2, w.bullet.get(0, 1)), vec![r(0), r(-1)]);
        assert_eq!(to_dense(2, w.bullet.get(1, 1)), vec![r(-3), r(0)]);
        assert_eq!(w.sym, Matrix::diagonal(vec![r(2), r(6)]));
        assert_eq!(*w.alt.get(1, 0), r(1));
        assert_eq!(*w.alt.get(0, 1), r(-1));
        assert_eq!(w.diamond.column(0), vec![r(0), r(2)]);
        assert_eq!(w.diamond.column(1), vec![r(-6), r(0)]);
        assert_eq!(w.diamond_square, r(-12));
    }

    #[test]
    fn w_omega_is_eigenvector() {
        use crate::scalar::Scalar;
        let [a, b] = w_omega_coords::<Scalar>();
        let v: Vec<Scalar> = (0..3)
            .map(|k| {
                a.mul_ref(&Scalar::from(w_plus()[k].clone()))
                    + b.mul_ref(&Scalar::from(w_minus()[k].clone()))
            })
            .collect();
        let w = Scalar::omega();
        assert_eq!(v, vec![w.mul_ref(&w), w, Scalar::from_int(1)]);
    }

    #[test]
    fn octonions_are_composition() {
        let o = split_octonions();
        assert!(check_hurwitz(&o).ok());
        for d in [1, 2, 4] {
            let h = hurwitz(d).unwrap();
            assert_eq!(h.dim, d);
            assert!(check_hurwitz(&h).ok(), "d = {d}");
        }
        assert!(hurwitz(3).is_err());
    }

    #[test]
    fn para_hurwitz_laws() {
        for d in [1, 2, 4, 8] {
            let s = para_hurwitz(d).unwrap();
            assert!(check_symmetric_composition(&s).ok(), "d = {d}");
        }
        let k = para_hurwitz(2).unwrap();
        assert_eq!(to_dense(2, k.bil.get(0, 1)), vec![r(0), r(-1)]);
        assert_eq!(to_dense(2, k.bil.get(1, 1)), vec![r(-3), r(0)]);
        let p1 = para_hurwitz(1).unwrap();
        assert_eq!(to_dense(1, p1.bil.get(0, 0)), vec![r(1)]);
    }

    #[test]
    fn triality_dimensions() {
        let dims: Vec<usize> = [1, 2, 4, 8]
            .iter()
            .map(|&d| triality_tri(&para_hurwitz(d).unwrap()).dim())
            .collect();
        assert_eq!(dims, vec![0, 2, 9, 28]);
    }

    #[test]
    fn triality_of_k_is_sigma_multiples() {
        let k = para_hurwitz(2).unwrap();
        let tri = triality_tri(&k);
        let q = k.form.clone().unwrap();
        let s = sigma(&q, &unit(2, 0), &unit(2, 1));
        assert_eq!(s.column(0), vec![r(0), r(2)]);
        assert_eq!(s.column(1), vec![r(-6), r(0)]);
        for t in &tri.basis {
            let alphas: Vec<Rational> = t.0.iter().map(|m| m.get(1, 0) / r(2)).collect();
            for (m, a) in t.0.iter().zip(&alphas) {
                assert_eq!(*m, s.scale(a));
            }
            assert_eq!(alphas.iter().sum::<Rational>(), r(0));
        }
        let t_ez = t_triple(&k, &unit(2, 0), &unit(2, 1));
        assert_eq!(
            t_ez,
            RelatedTriple([s.clone(), s.scale(&rat(-1, 2)), s.scale(&rat(-1, 2))])
        );
    }

    #[test]
    fn t_triples_lie_in_triality() {
        for d in [1, 2, 4, 8] {
            let s = para_hurwitz(d).unwrap();
            let tri = triality_tri(&s);
            for a in 0..d {
                for b in 0..d {
                    let t = t_triple(&s, &unit(d, a), &unit(d, b));
                    assert!(tri.coords(&t).is_some(), "d = {d}, ({a},{b})");
                }
            }
        }
    }
}
