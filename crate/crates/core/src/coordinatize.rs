//! Coordinate structures read off Lie algebras with symmetry: normal Lie related triple
//! algebras for S₄-actions, generalized Malcev algebras for S₃-actions, and the
//! reverse constructions.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Bilinear, Trilinear};
use crate::gmalcev::{check_gm_axioms, GMAlgebra, GmError};
use crate::linalg::{
    add, is_zero_vec, solve_linear, sub, to_dense, unit, zeros, Matrix, Span, SparseVec,
};
use crate::scalar::{Field, OmegaField};
use crate::symaction::{
    check_action, isotypic_s4, klein_grading, ActionError, GroupAction, KleinGrading, S3Action,
    S4Action,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordError {
    #[error("V4 acts trivially, use S3 extraction")]
    TrivialKlein,
    #[error("phi acts trivially")]
    PhiTrivial,
    #[error("algebra has no involution")]
    MissingInvolution,
    #[error("bracket leaves the expected component: {0}")]
    Leak(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("invalid preferred basis: {0}")]
    Basis(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Gm(#[from] GmError),
}

/// A triple `(d₀, d₁, d₂)` of operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatedTriple<F>(pub [Matrix<F>; 3]);

impl<F: Field> RelatedTriple<F> {
    pub fn zero(n: usize) -> Self {
        RelatedTriple([
            Matrix::zeros(n, n),
            Matrix::zeros(n, n),
            Matrix::zeros(n, n),
        ])
    }

    pub fn diagonal(d: &Matrix<F>) -> Self {
        RelatedTriple([d.clone(), d.clone(), d.clone()])
    }

    pub fn flatten(&self) -> Vec<F> {
        self.0.iter().flat_map(|m| m.data.iter().cloned()).collect()
    }

    pub fn from_flat(n: usize, v: &[F]) -> Self {
        let part = |i: usize| Matrix {
            rows: n,
            cols: n,
            data: v[i * n * n..(i + 1) * n * n].to_vec(),
        };
        RelatedTriple([part(0), part(1), part(2)])
    }

    /// `(d₂, d₀, d₁)`
    pub fn shift(&self) -> Self {
        RelatedTriple([self.0[2].clone(), self.0[0].clone(), self.0[1].clone()])
    }

    pub fn shift_by(&self, i: usize) -> Self {
        (0..i % 3).fold(self.clone(), |t, _| t.shift())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        RelatedTriple([
            self.0[0].commutator(&other.0[0]),
            self.0[1].commutator(&other.0[1]),
            self.0[2].commutator(&other.0[2]),
        ])
    }

    pub fn add(&self, other: &Self) -> Self {
        RelatedTriple([
            self.0[0].add(&other.0[0]),
            self.0[1].add(&other.0[1]),
            self.0[2].add(&other.0[2]),
        ])
    }

    pub fn scale(&self, c: &F) -> Self {
        RelatedTriple([self.0[0].scale(c), self.0[1].scale(c), self.0[2].scale(c)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|m| m.is_zero())
    }
}

/// `d̄ = B d B` for the involution matrix `B`.
pub fn conj_op<F: Field>(bar: &Matrix<F>, d: &Matrix<F>) -> Matrix<F> {
    bar.mul(d).mul(bar)
}

/// An algebra with involution `(A, ·, ¯)` together with `δ : A × A → gl(A)³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nlrta<F> {
    /// Product in `bil`, involution in `invol`.
    pub algebra: AlgebraSpec<F>,
    /// `delta[i][x·n + y] = δ_i(e_x, e_y)`
    pub delta: [Vec<Matrix<F>>; 3],
}

impl<F: Field> Nlrta<F> {
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    pub fn bar(&self) -> &Matrix<F> {
        self.algebra.invol.as_ref().expect("involution present")
    }

    pub fn delta_basis(&self, i: usize, x: usize, y: usize) -> &Matrix<F> {
        &self.delta[i % 3][x * self.dim() + y]
    }

    pub fn delta_triple(&self, x: usize, y: usize) -> RelatedTriple<F> {
        RelatedTriple([0, 1, 2].map(|i| self.delta_basis(i, x, y).clone()))
    }

    /// `δ_i(u, v)` for arbitrary vectors.
    pub fn delta_vec(&self, i: usize, u: &[F], v: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut out: Matrix<F> = Matrix::zeros(n, n);
        for (a, ua) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = ua.mul_ref(vb);
                for (o, d) in out.data.iter_mut().zip(&self.delta_basis(i, a, b).data) {
                    o.add_mul(&c, d);
                }
            }
        }
        out
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Nlrta<G> {
        Nlrta {
            algebra: self.algebra.map_scalars(f),
            delta: [0, 1, 2].map(|i| self.delta[i].iter().map(|m| m.map(f)).collect()),
        }
    }
}

/// Result of reading an S₄-action: the NLRTA and where `ι_i(A)` sits.
#[derive(Clone, Debug)]
pub struct NlrtaExtraction<F> {
    pub nlrta: Nlrta<F>,
    /// `iota[i][k] = ι_i(e_k)` in the ambient Lie algebra.
    pub iota: [Vec<Vec<F>>; 3],
    pub grading: KleinGrading<F>,
}

pub fn extract_nlrta<F: Field>(
    alg: &AlgebraSpec<F>,
    act: &S4Action<F>,
) -> Result<NlrtaExtraction<F>, CoordError> {
    let report = check_action(alg, &GroupAction::S4(act.clone()))?;
    if !report.ok() {
        return Err(CoordError::Action(ActionError::Relations(
            report.relation_failures.clone(),
        )));
    }
    let grading = klein_grading(act)?;
    if grading.g0.is_empty() {
        return Err(CoordError::TrivialKlein);
    }
    let dim = alg.dim;
    let n = grading.g0.len();
    let iota0 = grading.g0.clone();
    let iota1: Vec<Vec<F>> = iota0.iter().map(|v| act.phi.apply(v)).collect();
    let iota2: Vec<Vec<F>> = iota1.iter().map(|v| act.phi.apply(v)).collect();
    let spans: Vec<Span<F>> = [&iota0, &iota1, &iota2]
        .iter()
        .map(|b| Span::from_vectors(dim, b.to_vec()))
        .collect();
    let t_span = Span::from_vectors(dim, grading.t.clone());
    let coords = |i: usize, v: &[F], what: &str| {
        spans[i]
            .coords(v)
            .ok_or_else(|| CoordError::Leak(format!("{what} not in iota_{i}(A)")))
    };
    let mut bar_cols = Vec::with_capacity(n);
    for x in &iota0 {
        bar_cols.push(crate::linalg::neg(&coords(
            0,
            &act.tau.apply(x),
            "tau(iota_0 x)",
        )?));
    }
    let bar = Matrix::from_columns(n, &bar_cols);
    let mut prod = Bilinear::zero(n);
    for x in 0..n {
        for y in 0..n {
            let c = coords(
                0,
                &alg.product(&iota1[x], &iota2[y]),
                "[iota_1 x, iota_2 y]",
            )?;
            prod.set(x, y, &bar.apply(&c));
        }
    }
    let iota = [iota0, iota1, iota2];
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let deltas: Vec<Result<[Matrix<F>; 3], CoordError>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let d = alg.product(&iota[0][x], &iota[0][y]);
            if !t_span.contains(&d) {
                return Err(CoordError::Leak("[iota_0 x, iota_0 y] not in t".into()));
            }
            let mut out = [
                Matrix::zeros(n, n),
                Matrix::zeros(n, n),
                Matrix::zeros(n, n),
            ];
            for (i, m) in out.iter_mut().enumerate() {
                let cols: Result<Vec<Vec<F>>, CoordError> = (0..n)
                    .map(|z| coords(i, &alg.product(&d, &iota[i][z]), "[t, iota_i z]"))
                    .collect();
                *m = Matrix::from_columns(n, &cols?);
            }
            Ok(out)
        })
        .collect();
    let mut delta: [Vec<Matrix<F>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for d in deltas {
        let [d0, d1, d2] = d?;
        delta[0].push(d0);
        delta[1].push(d1);
        delta[2].push(d2);
    }
    let algebra = AlgebraSpec::new(prod).with_invol(bar);
    Ok(NlrtaExtraction {
        nlrta: Nlrta { algebra, delta },
        iota,
        grading,
    })
}

/// Violations of the identities (i)–(vi) together with skew-symmetry and relatedness of `δ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NlrtaReport {
    pub skew: Vec<(usize, usize)>,
    /// `δ(x, y)` is not a related triple.
    pub related: Vec<(usize, usize)>,
    /// `(i, j, a, b, x, y)`
    pub bracket: Vec<[usize; 6]>,
    pub cyclic_product: Vec<[usize; 3]>,
    pub cyclic_delta0: Vec<[usize; 3]>,
    pub left_formula: Vec<(usize, usize)>,
    pub right_formula: Vec<(usize, usize)>,
    /// `(i, x, y)`
    pub involution: Vec<[usize; 3]>,
}

impl NlrtaReport {
    pub fn ok(&self) -> bool {
        self.skew.is_empty()
            && self.related.is_empty()
            && self.bracket.is_empty()
            && self.cyclic_product.is_empty()
            && self.cyclic_delta0.is_empty()
            && self.left_formula.is_empty()
            && self.right_formula.is_empty()
            && self.involution.is_empty()
    }

    /// Per-identity pass flags for (i)–(vi).
    pub fn identities(&self) -> [bool; 6] {
        [
            self.bracket.is_empty(),
            self.cyclic_product.is_empty(),
            self.cyclic_delta0.is_empty(),
            self.left_formula.is_empty(),
            self.right_formula.is_empty(),
            self.involution.is_empty(),
        ]
    }

    pub fn summary(&self) -> String {
        format!(
            "skew {}, related {}, (i) {}, (ii) {}, (iii) {}, (iv) {}, (v) {}, (vi) {}",
            self.skew.len(),
            self.related.len(),
            self.bracket.len(),
            self.cyclic_product.len(),
            self.cyclic_delta0.len(),
            self.left_formula.len(),
            self.right_formula.len(),
            self.involution.len()
        )
    }
}

/// Whether `(d₀, d₁, d₂)` satisfies `d̄_i(x·y) = d_{i+1}(x)·y + x·d_{i+2}(y)` on basis pairs.
pub fn is_related<F: Field>(a: &AlgebraSpec<F>, t: &RelatedTriple<F>) -> bool {
    let n = a.dim;
    let bar = a.invol.as_ref().expect("involution present");
    (0..3).all(|i| {
        let conj = conj_op(bar, &t.0[i]);
        (0..n).all(|x| {
            (0..n).all(|y| {
                let lhs = conj.apply(&to_dense(n, a.bil.get(x, y)));
                let r1 = a.bil.apply_basis_right(&t.0[(i + 1) % 3].column(x), y);
                let r2 = a.bil.apply_basis_left(x, &t.0[(i + 2) % 3].column(y));
                lhs == add(&r1, &r2)
            })
        })
    })
}

pub fn verify_nlrta<F: Field>(nl: &Nlrta<F>) -> NlrtaReport {
    let n = nl.dim();
    let a = &nl.algebra;
    let bar = nl.bar();
    let e = |k: usize| unit(n, k);
    let mut rep = NlrtaReport::default();
    for x in 0..n {
        for y in x..n {
            let sum = nl.delta_triple(x, y).add(&nl.delta_triple(y, x));
            if !sum.is_zero() {
                rep.skew.push((x, y));
            }
            if !is_related(a, &nl.delta_triple(x, y)) {
                rep.related.push((x, y));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    rep.bracket = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .flat_map(|ij| pairs.iter().map(move |ab| (ij, *ab)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|((i, j), (a_, b_))| {
            let dab = nl.delta_basis(i, a_, b_);
            let shift = nl.delta_basis((i + 3 - j) % 3, a_, b_);
            let mut bad = Vec::new();
            for &(x, y) in &pairs {
                let lhs = dab.commutator(nl.delta_basis(j, x, y));
                let rhs = nl.delta_vec(j, &shift.column(x), &e(y)).add(&nl.delta_vec(
                    j,
                    &e(x),
                    &shift.column(y),
                ));
                if lhs != rhs {
                    bad.push([i, j, a_, b_, x, y]);
                }
            }
            bad
        })
        .collect();
    let prod = |u: &[F], v: &[F]| a.bil.apply(u, v);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let s = nl
                    .delta_vec(0, &bar.column(x), &prod(&e(y), &e(z)))
                    .add(&nl.delta_vec(1, &bar.column(y), &prod(&e(z), &e(x))))
                    .add(&nl.delta_vec(2, &bar.column(z), &prod(&e(x), &e(y))));
                if !s.is_zero() {
                    rep.cyclic_product.push([x, y, z]);
                }
                let c = add(
                    &nl.delta_basis(0, x, y).column(z),
                    &add(
                        &nl.delta_basis(0, y, z).column(x),
                        &nl.delta_basis(0, z, x).column(y),
                    ),
                );
                if !is_zero_vec(&c) {
                    rep.cyclic_delta0.push([x, y, z]);
                }
            }
        }
    }
    let left = |v: &[F]| a.left_mult(v);
    let right = |v: &[F]| a.right_mult(v);
    for x in 0..n {
        for y in 0..n {
            let (ex, ey, bx, by) = (e(x), e(y), bar.column(x), bar.column(y));
            let l = left(&by).mul(&left(&ex)).sub(&left(&bx).mul(&left(&ey)));
            if *nl.delta_basis(1, x, y) != l {
                rep.left_formula.push((x, y));
            }
            let r = right(&by)
                .mul(&right(&ex))
                .sub(&right(&bx).mul(&right(&ey)));
            if *nl.delta_basis(2, x, y) != r {
                rep.right_formula.push((x, y));
            }
            for i in 0..3 {
                let lhs = conj_op(bar, nl.delta_basis(i, x, y));
                if lhs != nl.delta_vec((3 - i) % 3, &bx, &by) {
                    rep.involution.push([i, x, y]);
                }
            }
        }
    }
    rep
}

/// The Lie algebra `inlrt ⊕ ι₀(A) ⊕ ι₁(A) ⊕ ι₂(A)` with its S₄-action.
#[derive(Clone, Debug)]
pub struct NlrtaLie<F> {
    pub alg: AlgebraSpec<F>,
    pub action: S4Action<F>,
    pub inlrt: Vec<RelatedTriple<F>>,
    pub a_dim: usize,
}

impl<F: Field> NlrtaLie<F> {
    pub fn iota_index(&self, i: usize, k: usize) -> usize {
        self.inlrt.len() + i * self.a_dim + k
    }

    pub fn iota(&self, i: usize, x: &[F]) -> Vec<F> {
        let mut v = zeros(self.alg.dim);
        for (k, c) in x.iter().enumerate() {
            v[self.iota_index(i, k)] = c.clone();
        }
        v
    }
}

pub fn build_g_from_nlrta<F: Field>(nl: &Nlrta<F>) -> Result<NlrtaLie<F>, CoordError> {
    let rep = verify_nlrta(nl);
    if !rep.ok() {
        return Err(CoordError::Verify(rep.summary()));
    }
    let n = nl.dim();
    let bar = nl.bar().clone();
    let mut span = Span::new(3 * n * n);
    let mut inlrt = Vec::new();
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                let t = nl.delta_triple(x, y).shift_by(i);
                if span.insert(&t.flatten()) {
                    inlrt.push(t);
                }
            }
        }
    }
    let m = inlrt.len();
    let dim = m + 3 * n;
    let io = |i: usize, k: usize| m + (i % 3) * n + k;
    let place_d = |c: &[F]| {
        let mut v = zeros(dim);
        v[..m].clone_from_slice(c);
        v
    };
    let place_i = |i: usize, x: &[F]| {
        let mut v = zeros(dim);
        for (k, c) in x.iter().enumerate() {
            v[io(i, k)] = c.clone();
        }
        v
    };
    let coords = |t: &RelatedTriple<F>, what: &str| {
        span.coords(&t.flatten())
            .ok_or_else(|| CoordError::NotClosed(what.into()))
    };
    let mut bil = Bilinear::zero(dim);
    let mut put = |a: usize, b: usize, v: Vec<F>| {
        bil.set(b, a, &crate::linalg::neg(&v));
        bil.set(a, b, &v);
    };
    for a in 0..m {
        for b in a + 1..m {
            put(
                a,
                b,
                place_d(&coords(&inlrt[a].commutator(&inlrt[b]), "inlrt")?),
            );
        }
        for i in 0..3 {
            for k in 0..n {
                put(a, io(i, k), place_i(i, &inlrt[a].0[i].column(k)));
            }
        }
    }
    for i in 0..3 {
        for x in 0..n {
            for y in 0..n {
                let xy = to_dense(n, nl.algebra.bil.get(x, y));
                put(io(i, x), io(i + 1, y), place_i(i + 2, &bar.apply(&xy)));
                if x < y {
                    put(
                        io(i, x),
                        io(i, y),
                        place_d(&coords(&nl.delta_triple(x, y).shift_by(i), "delta")?),
                    );
                }
            }
        }
    }
    let alg = AlgebraSpec::new(bil);

    let lift =
        |f: &dyn Fn(&RelatedTriple<F>) -> RelatedTriple<F>| -> Result<Vec<Vec<F>>, CoordError> {
            inlrt
                .iter()
                .map(|t| coords(&f(t), "action on inlrt").map(|c| place_d(&c)))
                .collect()
        };
    let mut phi_cols = lift(&|t: &RelatedTriple<F>| t.shift())?;
    let mut tau_cols = lift(&|t: &RelatedTriple<F>| {
        RelatedTriple([
            conj_op(&bar, &t.0[0]),
            conj_op(&bar, &t.0[2]),
            conj_op(&bar, &t.0[1]),
        ])
    })?;
    let mut t1_cols: Vec<Vec<F>> = (0..m).map(|a| unit(dim, a)).collect();
    let mut t2_cols = t1_cols.clone();
    for i in 0..3 {
        for k in 0..n {
            let ek = unit(n, k);
            phi_cols.push(place_i(i + 1, &ek));
            let neg_bar = crate::linalg::neg(&bar.column(k));
            tau_cols.push(place_i([0, 2, 1][i], &neg_bar));
            let s1 = if i == 0 { 1 } else { -1 };
            let s2 = if i == 1 { 1 } else { -1 };
            t1_cols.push(crate::linalg::scale(&F::from_i64(s1), &place_i(i, &ek)));
            t2_cols.push(crate::linalg::scale(&F::from_i64(s2), &place_i(i, &ek)));
        }
    }
    let action = S4Action {
        tau1: Matrix::from_columns(dim, &t1_cols),
        tau2: Matrix::from_columns(dim, &t2_cols),
        phi: Matrix::from_columns(dim, &phi_cols),
        tau: Matrix::from_columns(dim, &tau_cols),
    };
    let jac = alg.check_jacobi();
    if !jac.is_empty() {
        return Err(CoordError::Verify(format!(
            "Jacobi fails on {} triples",
            jac.len()
        )));
    }
    let rep = check_action(&alg, &GroupAction::S4(action.clone()))?;
    if !rep.ok() {
        return Err(CoordError::Verify(format!(
            "action fails: {:?}",
            rep.relation_failures
        )));
    }
    Ok(NlrtaLie {
        alg,
        action,
        inlrt,
        a_dim: n,
    })
}

/// `lrt(A, ·, ¯)` with its S₃-action in the solver basis.
#[derive(Clone, Debug)]
pub struct Lrt<F> {
    pub basis: Vec<RelatedTriple<F>>,
    pub action: S3Action<F>,
    span: Span<F>,
}

impl<F: Field> Lrt<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, t: &RelatedTriple<F>) -> Option<Vec<F>> {
        self.span.coords(&t.flatten())
    }

    /// The whole space, as coordinate vectors.
    pub fn full_space(&self) -> Vec<Vec<F>> {
        (0..self.dim()).map(|i| unit(self.dim(), i)).collect()
    }
}

fn involution<F: Field>(a: &AlgebraSpec<F>) -> Result<&Matrix<F>, CoordError> {
    a.invol.as_ref().ok_or(CoordError::MissingInvolution)
}

fn lrt_equations<F: Field>(a: &AlgebraSpec<F>, bar: &Matrix<F>) -> Vec<SparseVec<F>> {
    let n = a.dim;
    let var = |i: usize, r: usize, c: usize| (i % 3) * n * n + r * n + c;
    let mut eqs = Vec::new();
    for i in 0..3 {
        for x in 0..n {
            for y in 0..n {
                let w = bar.apply(&to_dense(n, a.bil.get(x, y)));
                let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); n];
                for (l, row) in rows.iter_mut().enumerate() {
                    for r in 0..n {
                        let blr = bar.get(l, r);
                        if blr.is_zero() {
                            continue;
                        }
                        for (c, wc) in w.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            row.push((var(i, r, c), blr.mul_ref(wc)));
                        }
                    }
                }
                for r in 0..n {
                    for (l, c) in a.bil.get(r, y) {
                        rows[*l].push((var(i + 1, r, x), c.neg_ref()));
                    }
                    for (l, c) in a.bil.get(x, r) {
                        rows[*l].push((var(i + 2, r, y), c.neg_ref()));
                    }
                }
                eqs.extend(rows.into_iter().filter(|r| !r.is_empty()));
            }
        }
    }
    eqs
}

pub fn compute_lrt<F: Field>(a: &AlgebraSpec<F>) -> Result<Lrt<F>, CoordError> {
    let bar = involution(a)?.clone();
    let n = a.dim;
    let sol = solve_linear(3 * n * n, &lrt_equations(a, &bar));
    let basis: Vec<RelatedTriple<F>> = sol
        .basis
        .iter()
        .map(|v| RelatedTriple::from_flat(n, v))
        .collect();
    let span = Span::from_vectors(3 * n * n, sol.basis.clone());
    let dim = basis.len();
    let image = |t: RelatedTriple<F>, what: &str| {
        span.coords(&t.flatten())
            .ok_or_else(|| CoordError::NotClosed(what.into()))
    };
    let mut phi_cols = Vec::with_capacity(dim);
    let mut tau_cols = Vec::with_capacity(dim);
    for t in &basis {
        phi_cols.push(image(t.shift(), "phi on lrt")?);
        let c = |k: usize| conj_op(&bar, &t.0[k]);
        tau_cols.push(image(RelatedTriple([c(0), c(2), c(1)]), "tau on lrt")?);
    }
    for s in &basis {
        for t in &basis {
            image(s.commutator(t), "lrt commutator")?;
        }
    }
    let action = S3Action {
        phi: Matrix::from_columns(dim, &phi_cols),
        tau: Matrix::from_columns(dim, &tau_cols),
    };
    Ok(Lrt {
        basis,
        action,
        span,
    })
}

/// Equations `d(xy) − sign·(d(x)y + x d(y)) = 0` and `d̄ − sign_bar·d = 0` on `d ∈ gl(A)`.
fn twisted_derivation_equations<F: Field>(
    a: &AlgebraSpec<F>,
    sign: i64,
    bar: &Matrix<F>,
    sign_bar: i64,
) -> Vec<SparseVec<F>> {
    let n = a.dim;
    let var = |r: usize, c: usize| r * n + c;
    let s = F::from_i64(sign);
    let mut eqs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); n];
            for (m, c) in a.bil.get(x, y) {
                for (l, row) in rows.iter_mut().enumerate() {
                    row.push((var(l, *m), c.clone()));
                }
            }
            for r in 0..n {
                for (l, c) in a.bil.get(r, y) {
                    rows[*l].push((var(r, x), c.mul_ref(&s).neg_ref()));
                }
                for (l, c) in a.bil.get(x, r) {
                    rows[*l].push((var(r, y), c.mul_ref(&s).neg_ref()));
                }
            }
            eqs.extend(rows.into_iter().filter(|r| !r.is_empty()));
        }
    }
    let sb = F::from_i64(sign_bar);
    for l in 0..n {
        for c in 0..n {
            let mut row: SparseVec<F> = vec![(var(l, c), sb.neg_ref())];
            for r in 0..n {
                for s2 in 0..n {
                    let coef = bar.get(l, r).mul_ref(bar.get(s2, c));
                    if !coef.is_zero() {
                        row.push((var(r, s2), coef));
                    }
                }
            }
            eqs.push(row);
        }
    }
    eqs
}

/// `der`, `sder` and the `W`-part of `lrt(A, ·, ¯)`.
#[derive(Clone, Debug)]
pub struct LrtParts<F> {
    pub lrt_dim: usize,
    pub der: Vec<Matrix<F>>,
    pub sder: Vec<Matrix<F>>,
    pub w_part: Vec<RelatedTriple<F>>,
    /// Projection formulas and direct solves agree in every part.
    pub consistent: bool,
}

impl<F: Field> LrtParts<F> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.der.len(), self.sder.len(), self.w_part.len())
    }
}

pub fn lrt_isotypic<F: Field>(a: &AlgebraSpec<F>) -> Result<LrtParts<F>, CoordError> {
    let bar = involution(a)?.clone();
    let n = a.dim;
    let lrt = compute_lrt(a)?;
    let sixth = F::from_frac(1, 6);
    let third = F::from_frac(1, 3);
    let mut der_span = Span::new(n * n);
    let mut sder_span = Span::new(n * n);
    let mut w_span = Span::new(3 * n * n);
    for t in &lrt.basis {
        let sum = t.0[0].add(&t.0[1]).add(&t.0[2]);
        let csum = conj_op(&bar, &sum);
        der_span.insert(&sum.add(&csum).scale(&sixth).data);
        sder_span.insert(&sum.sub(&csum).scale(&sixth).data);
        let f = |i: usize| {
            t.0[i]
                .scale(&F::from_i64(2))
                .sub(&t.0[(i + 1) % 3])
                .sub(&t.0[(i + 2) % 3])
                .scale(&third)
        };
        w_span.insert(&RelatedTriple([f(0), f(1), f(2)]).flatten());
    }
    let der: Vec<Matrix<F>> = der_span
        .basis()
        .iter()
        .map(|v| Matrix {
            rows: n,
            cols: n,
            data: v.clone(),
        })
        .collect();
    let sder: Vec<Matrix<F>> = sder_span
        .basis()
        .iter()
        .map(|v| Matrix {
            rows: n,
            cols: n,
            data: v.clone(),
        })
        .collect();
    let w_part: Vec<RelatedTriple<F>> = w_span
        .basis()
        .iter()
        .map(|v| RelatedTriple::from_flat(n, v))
        .collect();

    let direct_der = solve_linear(n * n, &twisted_derivation_equations(a, 1, &bar, 1)).basis;
    let direct_sder = solve_linear(n * n, &twisted_derivation_equations(a, -1, &bar, -1)).basis;
    let mut w_eqs = lrt_equations(a, &bar);
    for k in 0..n * n {
        w_eqs.push((0..3).map(|i| (i * n * n + k, F::one())).collect());
    }
    let direct_w = solve_linear(3 * n * n, &w_eqs).basis;
    let same = |span: &Span<F>, other: &[Vec<F>]| {
        span.len() == other.len() && other.iter().all(|v| span.contains(v))
    };
    let consistent = same(&der_span, &direct_der)
        && same(&sder_span, &direct_sder)
        && same(&w_span, &direct_w)
        && der.len() + sder.len() + w_part.len() == lrt.dim()
        && der
            .iter()
            .all(|d| is_related(a, &RelatedTriple::diagonal(d)))
        && sder
            .iter()
            .all(|d| is_related(a, &RelatedTriple::diagonal(d)));
    Ok(LrtParts {
        lrt_dim: lrt.dim(),
        der,
        sder,
        w_part,
        consistent,
    })
}

/// A generalized Malcev algebra read off the `ω`-eigenspace of `φ`.
#[derive(Clone, Debug)]
pub struct GmExtraction<F> {
    pub gm: GMAlgebra<F>,
    /// Basis of the `ω`-eigenspace in ambient coordinates.
    pub basis: Vec<Vec<F>>,
}

/// `xy = [τx, τy]` and `{x,y,z} = [[x, τy], z]` on `M = ker(φ − ω)`.
pub fn extract_gm_from_s3<F: OmegaField>(
    alg: &AlgebraSpec<F>,
    act: &S3Action<F>,
    preferred: Option<&[Vec<F>]>,
) -> Result<GmExtraction<F>, CoordError> {
    let dim = alg.dim;
    if act.phi == Matrix::identity(dim) {
        return Err(CoordError::PhiTrivial);
    }
    let eigen = act.phi.sub(&Matrix::scalar(dim, F::omega())).kernel();
    if eigen.is_empty() {
        return Err(CoordError::PhiTrivial);
    }
    let basis = match preferred {
        None => eigen,
        Some(p) => {
            let es = Span::from_vectors(dim, eigen.clone());
            if p.iter().any(|v| !es.contains(v)) {
                return Err(CoordError::Basis(
                    "vector outside the omega-eigenspace".into(),
                ));
            }
            if Span::from_vectors(dim, p.to_vec()).len() != eigen.len() || p.len() != eigen.len() {
                return Err(CoordError::Basis(
                    "does not form a basis of the omega-eigenspace".into(),
                ));
            }
            p.to_vec()
        }
    };
    let n = basis.len();
    let span = Span::from_vectors(dim, basis.clone());
    let coords = |v: &[F], what: &str| {
        span.coords(v)
            .ok_or_else(|| CoordError::Leak(format!("{what} outside the omega-eigenspace")))
    };
    let taus: Vec<Vec<F>> = basis.iter().map(|v| act.tau.apply(v)).collect();
    let mut bil = Bilinear::zero(n);
    for x in 0..n {
        for y in 0..n {
            bil.set(
                x,
                y,
                &coords(&alg.product(&taus[x], &taus[y]), "[tau x, tau y]")?,
            );
        }
    }
    let inner: Vec<Vec<F>> = (0..n * n)
        .into_par_iter()
        .map(|xy| alg.product(&basis[xy / n], &taus[xy % n]))
        .collect();
    let entries: Vec<Result<Vec<F>, CoordError>> = (0..n * n * n)
        .into_par_iter()
        .map(|xyz| {
            coords(
                &alg.product(&inner[xyz / n], &basis[xyz % n]),
                "[[x, tau y], z]",
            )
        })
        .collect();
    let mut tri = Trilinear::zero(n);
    for (xyz, v) in entries.into_iter().enumerate() {
        tri.set(xyz / (n * n), (xyz / n) % n, xyz % n, &v?);
    }
    let gm = GMAlgebra::new(bil, tri)?;
    let report = check_gm_axioms(&gm);
    if !report.ok() {
        return Err(CoordError::Gm(GmError::Axioms(report.summary())));
    }
    Ok(GmExtraction { gm, basis })
}

/// One eigenvector of the involution and the S₄-type of `span{ι₀x, ι₁x, ι₂x}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypingCase {
    /// `+1` for `x̄ = x`, `−1` for `x̄ = −x`.
    pub sign: i64,
    pub found: Option<String>,
    pub expected: String,
}

impl TypingCase {
    pub fn ok(&self) -> bool {
        self.found.as_deref() == Some(self.expected.as_str())
    }
}

/// For each eigenvector `x` of the involution: `x̄ = −x` gives type `V`, `x̄ = x` gives `V'`.
pub fn involution_typing<F: Field>(
    act: &S4Action<F>,
    ex: &NlrtaExtraction<F>,
) -> Result<Vec<TypingCase>, CoordError> {
    let n = ex.nlrta.dim();
    let bar = ex.nlrta.bar();
    let dim = act.dim();
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let eig = bar.sub(&Matrix::scalar(n, F::from_i64(sign))).kernel();
        for x in eig {
            let span: Vec<Vec<F>> = (0..3)
                .map(|i| {
                    let mut v = zeros(dim);
                    for (k, c) in x.iter().enumerate() {
                        crate::linalg::axpy(&mut v, c, &ex.iota[i][k]);
                    }
                    v
                })
                .collect();
            let rep = isotypic_s4(&span, act)?;
            let found = rep
                .multiplicities
                .iter()
                .find(|(_, m)| **m == 1)
                .map(|(name, _)| name.clone());
            let found = if rep.total_dim() == 3 && rep.multiplicities.values().sum::<usize>() == 1 {
                found
            } else {
                None
            };
            out.push(TypingCase {
                sign,
                found,
                expected: if sign == 1 { "V'".into() } else { "V".into() },
            });
        }
    }
    Ok(out)
}

/// Basis of `g₀ ⊕ g₁ ⊕ g₂`.
pub fn nontrivial_klein_part<F: Field>(g: &KleinGrading<F>) -> Vec<Vec<F>> {
    g.g0.iter().chain(&g.g1).chain(&g.g2).cloned().collect()
}

/// Difference of two vectors; re-exported for report assembly.
pub fn difference<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    sub(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::r;
    use crate::scalar::Rational;

    fn one_dim() -> AlgebraSpec<Rational> {
        let mut bil = Bilinear::zero(1);
        bil.add_entry(0, 0, 0, r(1));
        AlgebraSpec::new(bil).with_invol(Matrix::identity(1))
    }

    #[test]
    fn lrt_of_ground_field_is_zero() {
        let lrt = compute_lrt(&one_dim()).unwrap();
        assert_eq!(lrt.dim(), 0);
        let parts = lrt_isotypic(&one_dim()).unwrap();
        assert_eq!(parts.dims(), (0, 0, 0));
        assert!(parts.consistent);
    }

    #[test]
    fn trivial_nlrta_builds_abelian() {
        let a = AlgebraSpec::<Rational>::abelian(1).with_invol(Matrix::identity(1));
        let nl = Nlrta {
            algebra: a,
            delta: [
                vec![Matrix::zeros(1, 1)],
                vec![Matrix::zeros(1, 1)],
                vec![Matrix::zeros(1, 1)],
            ],
        };
        assert!(verify_nlrta(&nl).ok());
        let g = build_g_from_nlrta(&nl).unwrap();
        assert_eq!(g.alg.dim, 3);
        assert!(g.alg.bil.is_zero());
        assert_eq!(g.action.phi.apply(&g.iota(0, &[r(1)])), g.iota(1, &[r(1)]));
        let rep = isotypic_s4(&(0..3).map(|k| unit(3, k)).collect::<Vec<_>>(), &g.action).unwrap();
        assert_eq!(rep.multiplicity("V'"), 1);
    }

    #[test]
    fn abelian_lrt_is_everything() {
        let a = AlgebraSpec::<Rational>::abelian(2).with_invol(Matrix::diagonal(vec![r(1), r(-1)]));
        let lrt = compute_lrt(&a).unwrap();
        assert_eq!(lrt.dim(), 12);
        let parts = lrt_isotypic(&a).unwrap();
        assert!(parts.consistent);
        assert_eq!(parts.dims(), (2, 2, 8));
    }

    #[test]
    fn related_triple_shift() {
        let t = RelatedTriple([
            Matrix::scalar(1, r(1)),
            Matrix::scalar(1, r(2)),
            Matrix::scalar(1, r(3)),
        ]);
        assert_eq!(t.shift().0[0], Matrix::scalar(1, r(3)));
        assert_eq!(t.shift_by(3), t);
    }
}
