//! `g(K, S) = tri(K) ⊕ tri(S) ⊕ ι₀(K⊗S) ⊕ ι₁(K⊗S) ⊕ ι₂(K⊗S)` for the para-Hurwitz
//! algebras `S`, with `S₃ = Aut(K, •)` acting through `K`.

use super::composition::{para_hurwitz, polar, t_triple, triality_tri, Triality};
use super::s3_examples::lift;
use super::CatalogError;
use crate::algebra::{AlgebraSpec, Bilinear, Trilinear};
use crate::coordinatize::{extract_gm_from_s3, RelatedTriple};
use crate::gmalcev::GMAlgebra;
use crate::linalg::{neg, to_dense, unit, zeros, Matrix};
use crate::scalar::{rat, Field, Rational, Scalar};
use crate::symaction::S3Action;
use num_traits::{One, Zero};

/// `φ(e) = −½e + ½z`, `φ(z) = −³⁄₂e − ½z`; `τ(e) = e`, `τ(z) = −z`.
pub fn k_action() -> S3Action<Rational> {
    S3Action {
        phi: Matrix::from_columns(
            2,
            &[vec![rat(-1, 2), rat(1, 2)], vec![rat(-3, 2), rat(-1, 2)]],
        ),
        tau: Matrix::diagonal(vec![rat(1, 1), rat(-1, 1)]),
    }
}

/// `k_ω = ½e + ((ω² − ω)/6) z`, the `ω`-eigenvector of `φ` on `K`.
pub fn k_omega() -> [Scalar; 2] {
    super::composition::w_omega_coords()
}

#[derive(Clone, Debug)]
pub struct MagicSquare {
    pub alg: AlgebraSpec<Rational>,
    pub action: S3Action<Rational>,
    pub s: AlgebraSpec<Rational>,
    pub tri_k: Triality<Rational>,
    pub tri_s: Triality<Rational>,
}

impl MagicSquare {
    pub fn d(&self) -> usize {
        self.s.dim
    }

    /// Index of `ι_i(a ⊗ x)`, `a ∈ {e, z}`.
    pub fn iota_index(&self, i: usize, a: usize, x: usize) -> usize {
        self.tri_k.dim() + self.tri_s.dim() + (i % 3) * 2 * self.d() + a * self.d() + x
    }

    /// `ι_i(k_ω ⊗ eₓ)` for all `i`, `x`: the basis in which the closing table holds.
    pub fn preferred_basis(&self) -> Vec<Vec<Scalar>> {
        let [a, b] = k_omega();
        let mut out = Vec::new();
        for i in 0..3 {
            for x in 0..self.d() {
                let mut v = zeros(self.alg.dim);
                v[self.iota_index(i, 0, x)] = a.clone();
                v[self.iota_index(i, 1, x)] = b.clone();
                out.push(v);
            }
        }
        out
    }
}

pub fn magic_square_row2(d: usize) -> Result<MagicSquare, CatalogError> {
    let k = para_hurwitz(2)?;
    let s = para_hurwitz(d)?;
    let tri_k = triality_tri(&k);
    let tri_s = triality_tri(&s);
    let (nk, ns) = (tri_k.dim(), tri_s.dim());
    let base = nk + ns;
    let dim = base + 6 * d;
    let io = |i: usize, a: usize, x: usize| base + (i % 3) * 2 * d + a * d + x;
    let qk = k.form.clone().expect("norm");
    let qs = s.form.clone().expect("norm");
    let coords_k = |t: &RelatedTriple<Rational>| {
        tri_k
            .coords(t)
            .ok_or_else(|| CatalogError::Invalid("t_{a,b} outside tri(K)".into()))
    };
    let coords_s = |t: &RelatedTriple<Rational>| {
        tri_s
            .coords(t)
            .ok_or_else(|| CatalogError::Invalid("t_{x,y} outside tri(S)".into()))
    };

    let mut bil = Bilinear::zero(dim);
    let mut put = |a: usize, b: usize, v: Vec<Rational>| {
        bil.set(b, a, &neg(&v));
        bil.set(a, b, &v);
    };
    for p in 0..nk {
        for q in p + 1..nk {
            let c = coords_k(&tri_k.basis[p].commutator(&tri_k.basis[q]))?;
            let mut v = zeros(dim);
            v[..nk].clone_from_slice(&c);
            put(p, q, v);
        }
    }
    for p in 0..ns {
        for q in p + 1..ns {
            let c = coords_s(&tri_s.basis[p].commutator(&tri_s.basis[q]))?;
            let mut v = zeros(dim);
            v[nk..base].clone_from_slice(&c);
            put(nk + p, nk + q, v);
        }
    }
    for i in 0..3 {
        for a in 0..2 {
            for x in 0..d {
                for (p, t) in tri_k.basis.iter().enumerate() {
                    let mut v = zeros(dim);
                    for (c, val) in t.0[i].column(a).into_iter().enumerate() {
                        v[io(i, c, x)] = val;
                    }
                    put(p, io(i, a, x), v);
                }
                for (p, t) in tri_s.basis.iter().enumerate() {
                    let mut v = zeros(dim);
                    for (y, val) in t.0[i].column(x).into_iter().enumerate() {
                        v[io(i, a, y)] = val;
                    }
                    put(nk + p, io(i, a, x), v);
                }
            }
        }
    }
    for i in 0..3 {
        for a in 0..2 {
            for b in 0..2 {
                let ab = to_dense(2, k.bil.get(a, b));
                let tk = coords_k(&t_triple(&k, &unit(2, a), &unit(2, b)).shift_by(i))?;
                let qab = polar(&qk, &unit(2, a), &unit(2, b));
                for x in 0..d {
                    for y in 0..d {
                        let xy = to_dense(d, s.bil.get(x, y));
                        let mut v = zeros(dim);
                        for (c, kc) in ab.iter().enumerate() {
                            for (z, sz) in xy.iter().enumerate() {
                                v[io(i + 2, c, z)] = kc * sz;
                            }
                        }
                        put(io(i, a, x), io(i + 1, b, y), v);

                        let (ia, ib) = (io(i, a, x), io(i, b, y));
                        if ia < ib {
                            let qxy = polar(&qs, &unit(d, x), &unit(d, y));
                            let ts = coords_s(&t_triple(&s, &unit(d, x), &unit(d, y)).shift_by(i))?;
                            let mut v = zeros(dim);
                            for (p, c) in tk.iter().enumerate() {
                                v[p] = &qxy * c;
                            }
                            for (p, c) in ts.iter().enumerate() {
                                v[nk + p] = &qab * c;
                            }
                            put(ia, ib, v);
                        }
                    }
                }
            }
        }
    }
    let alg = AlgebraSpec::new(bil);

    let kact = k_action();
    let lift_k = |g: &Matrix<Rational>| -> Result<Matrix<Rational>, CatalogError> {
        let g_inv = g.pow(if g == &kact.phi { 2 } else { 1 });
        let mut cols = Vec::with_capacity(dim);
        for t in &tri_k.basis {
            let conj = RelatedTriple([0, 1, 2].map(|i| g.mul(&t.0[i]).mul(&g_inv)));
            let mut v = zeros(dim);
            v[..nk].clone_from_slice(&coords_k(&conj)?);
            cols.push(v);
        }
        for p in 0..ns {
            cols.push(unit(dim, nk + p));
        }
        for i in 0..3 {
            for a in 0..2 {
                for x in 0..d {
                    let mut v = zeros(dim);
                    for (c, val) in g.column(a).into_iter().enumerate() {
                        v[io(i, c, x)] = val;
                    }
                    cols.push(v);
                }
            }
        }
        Ok(Matrix::from_columns(dim, &cols))
    };
    let action = S3Action {
        phi: lift_k(&kact.phi)?,
        tau: lift_k(&kact.tau)?,
    };
    Ok(MagicSquare {
        alg,
        action,
        s,
        tri_k,
        tri_s,
    })
}

/// The generalized Malcev algebra on `ι₀(S) ⊕ ι₁(S) ⊕ ι₂(S)` given by the closed-form table:
/// `ιᵢ(x)ιᵢ₊₁(y) = ιᵢ₊₂(x*y)`, `{ιᵢx, ιᵢy, ιᵢ₊₁z} = −ιᵢ₊₁((y*z)*x)`,
/// `{ιᵢx, ιᵢy, ιᵢ₊₂z} = −ιᵢ₊₂(x*(z*y))`, `{ιᵢx, ιᵢy, ιᵢz} = ιᵢ(q(x,z)y − q(y,z)x + q(x,y)z)`
/// when `minus_sign = 1`. Other values scale the `q(x,y)z` part coming from `d⁻`:
/// `ιᵢ(s·q(x,y)z)` on `ιᵢ` and `ιⱼ(−½s·q(x,y)z)` on `ιᵢ₊₁`, `ιᵢ₊₂`.
pub fn magic_square_gm<F: Field>(
    s: &AlgebraSpec<Rational>,
    minus_sign: i64,
    lift: impl Fn(&Rational) -> F + Copy,
) -> GMAlgebra<F> {
    let d = s.dim;
    let n = 3 * d;
    let q = s.form.as_ref().expect("norm");
    let idx = |i: usize, x: usize| (i % 3) * d + x;
    let mul = |x: &[Rational], y: &[Rational]| s.product(x, y);
    let mut bil = Bilinear::zero(n);
    let mut tri = Trilinear::zero(n);
    for i in 0..3 {
        for x in 0..d {
            for y in 0..d {
                let ex = unit::<Rational>(d, x);
                let ey = unit::<Rational>(d, y);
                for (z, c) in s.bil.get(x, y) {
                    bil.add_entry(idx(i, x), idx(i + 1, y), idx(i + 2, *z), lift(c));
                    bil.add_entry(idx(i + 1, y), idx(i, x), idx(i + 2, *z), lift(&-c));
                }
                for z in 0..d {
                    let ez = unit::<Rational>(d, z);
                    let a = mul(&mul(&ey, &ez), &ex);
                    let b = mul(&ex, &mul(&ez, &ey));
                    for (w, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        tri.add_entry(
                            idx(i, x),
                            idx(i, y),
                            idx(i + 1, z),
                            idx(i + 1, w),
                            lift(&-c),
                        );
                    }
                    for (w, c) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        tri.add_entry(
                            idx(i, x),
                            idx(i, y),
                            idx(i + 2, z),
                            idx(i + 2, w),
                            lift(&-c),
                        );
                    }
                    let (qxz, qyz, qxy) =
                        (polar(q, &ex, &ez), polar(q, &ey, &ez), polar(q, &ex, &ey));
                    let sign = Rational::from_integer(minus_sign.into());
                    for (w, c) in [(y, qxz), (x, -qyz), (z, &qxy * &sign)] {
                        if !c.is_zero() {
                            tri.add_entry(idx(i, x), idx(i, y), idx(i, z), idx(i, w), lift(&c));
                        }
                    }
                    // d⁺ contributes ½q(x,y)z on the other two copies, d⁻ contributes −½s·q(x,y)z
                    let off = &qxy * &(Rational::one() - &sign) * rat(1, 2);
                    if !off.is_zero() {
                        for j in [i + 1, i + 2] {
                            tri.add_entry(idx(i, x), idx(i, y), idx(j, z), idx(j, z), lift(&off));
                        }
                    }
                }
            }
        }
    }
    let labels = (0..3)
        .flat_map(|i| (0..d).map(move |x| format!("i{i}x{x}")))
        .collect();
    GMAlgebra::new(bil, tri)
        .expect("matching dimensions")
        .with_labels(labels)
}

/// `g(K,S)` over ℚ(ω) with the generalized Malcev algebra read in the basis `ιᵢ(k_ω ⊗ x)`.
pub fn magic_square_extraction(ms: &MagicSquare) -> Result<GMAlgebra<Scalar>, CatalogError> {
    let alg = ms.alg.map_scalars(lift);
    let act = ms.action.map_scalars(lift);
    Ok(extract_gm_from_s3(&alg, &act, Some(&ms.preferred_basis()))?.gm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmalcev::check_gm_axioms;
    use crate::symaction::{check_action, GroupAction};

    #[test]
    fn k_action_is_by_automorphisms() {
        let k = para_hurwitz(2).unwrap();
        let rep = check_action(&k, &GroupAction::S3(k_action())).unwrap();
        assert!(rep.ok());
        let [a, b] = k_omega();
        let phi = k_action().phi.map(lift);
        let v = vec![a.clone(), b.clone()];
        assert_eq!(phi.apply(&v), crate::linalg::scale(&Scalar::omega(), &v));
    }

    #[test]
    fn small_magic_squares() {
        for (d, dim) in [(1, 8), (2, 16), (4, 35)] {
            let ms = magic_square_row2(d).unwrap();
            assert_eq!(ms.alg.dim, dim);
            assert!(ms.alg.check_anticommutative().is_empty());
            assert!(ms.alg.check_jacobi().is_empty(), "d = {d}");
            let rep = check_action(&ms.alg, &GroupAction::S3(ms.action.clone())).unwrap();
            assert!(rep.ok(), "d = {d}: {:?}", rep);
            let gm = magic_square_extraction(&ms).unwrap();
            assert!(check_gm_axioms(&gm).ok());
        }
    }

    #[test]
    fn extraction_against_closed_table() {
        for d in [1, 2, 4] {
            let ms = magic_square_row2(d).unwrap();
            let gm = magic_square_extraction(&ms).unwrap();
            let table = magic_square_gm(&ms.s, -1, lift);
            assert_eq!(gm.bil, table.bil, "d = {d}");
            assert_eq!(gm.tri, table.tri, "d = {d}");
        }
    }

    #[test]
    fn printed_sign_breaks_the_axioms() {
        let s = para_hurwitz(2).unwrap();
        let rep = check_gm_axioms(&magic_square_gm(&s, 1, lift));
        assert!(!rep.ok());
        assert!(check_gm_axioms(&magic_square_gm(&s, -1, lift)).ok());
    }
}
