//! Generalized Malcev algebras, their associated Lie algebras with S₃-action,
//! the Malcev and Jordan-triple special cases, and the Lie–Yamaguti reduction.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Bilinear, Trilinear};
use crate::linalg::{
    add, is_zero_vec, operator_span, scale, sub, to_dense, unit, zeros, Matrix, Span,
};
use crate::scalar::{Field, OmegaField};
use crate::symaction::S3Action;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GmError {
    #[error("binary product is not anticommutative on pairs {0:?}")]
    NotAnticommutative(Vec<(usize, usize)>),
    #[error("identities fail: {0}")]
    Axioms(String),
    #[error("binary product is not a Malcev algebra")]
    NotMalcev,
    #[error("triple product is not skew in its first two arguments at basis pair ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("binary product must vanish for a Jordan triple system")]
    NonzeroBinary,
    #[error("operator span not closed: {0}")]
    NotClosed(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("construction check failed: {0}")]
    Check(String),
}

/// A vector space with an anticommutative product `xy` and a triple product `{x,y,z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMAlgebra<F> {
    pub dim: usize,
    pub bil: Bilinear<F>,
    pub tri: Trilinear<F>,
    pub labels: Option<Vec<String>>,
}

impl<F: Field> GMAlgebra<F> {
    pub fn new(bil: Bilinear<F>, tri: Trilinear<F>) -> Result<Self, GmError> {
        if bil.dim() != tri.dim() {
            return Err(GmError::DimensionMismatch {
                expected: bil.dim(),
                got: tri.dim(),
            });
        }
        Ok(GMAlgebra {
            dim: bil.dim(),
            bil,
            tri,
            labels: None,
        })
    }

    /// Zero binary product.
    pub fn jordan_triple(tri: Trilinear<F>) -> Self {
        GMAlgebra {
            dim: tri.dim(),
            bil: Bilinear::zero(tri.dim()),
            tri,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn product(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.bil.apply(x, y)
    }

    pub fn triple(&self, x: &[F], y: &[F], z: &[F]) -> Vec<F> {
        self.tri.apply(x, y, z)
    }

    /// `{e_i, e_j, ·}`
    pub fn triple_operator(&self, i: usize, j: usize) -> Matrix<F> {
        self.tri.basis_operator(i, j)
    }

    pub fn binary_algebra(&self) -> AlgebraSpec<F> {
        let mut a = AlgebraSpec::new(self.bil.clone());
        a.labels = self.labels.clone();
        a
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> GMAlgebra<G> {
        GMAlgebra {
            dim: self.dim,
            bil: self.bil.map_scalars(f),
            tri: self.tri.map_scalars(f),
            labels: self.labels.clone(),
        }
    }

    fn label(&self, i: usize) -> String {
        self.labels
            .as_ref()
            .and_then(|l| l.get(i).cloned())
            .unwrap_or_else(|| format!("m{i}"))
    }

    fn e(&self, i: usize) -> Vec<F> {
        unit(self.dim, i)
    }

    fn b(&self, i: usize, j: usize) -> Vec<F> {
        to_dense(self.dim, self.bil.get(i, j))
    }

    fn t(&self, i: usize, j: usize, k: usize) -> Vec<F> {
        to_dense(self.dim, self.tri.get(i, j, k))
    }
}

/// Violating basis tuples for each defining identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GmReport {
    /// `(xy)z = {x,z,y} − {y,z,x}` on `(x, y, z)`.
    pub product_triple: Vec<[usize; 3]>,
    /// `{a,b,xy} = −{b,a,x}y − x{b,a,y}` on `(a, b, x, y)`.
    pub triple_on_product: Vec<[usize; 4]>,
    /// Generalized Jordan triple identity on `(a, b, x, y, z)`.
    pub generalized_jordan: Vec<[usize; 5]>,
    /// `{xy,z,t} + {yz,x,t} + {zx,y,t} = 0` on `(x, y, z, t)`.
    pub cyclic_first: Vec<[usize; 4]>,
    /// `{x,yz,t} + {y,zx,t} + {z,xy,t} = 0` on `(x, y, z, t)`.
    pub cyclic_second: Vec<[usize; 4]>,
    pub not_anticommutative: Vec<(usize, usize)>,
}

impl GmReport {
    pub fn ok(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn violation_count(&self) -> usize {
        self.product_triple.len()
            + self.triple_on_product.len()
            + self.generalized_jordan.len()
            + self.cyclic_first.len()
            + self.cyclic_second.len()
            + self.not_anticommutative.len()
    }

    pub fn core_ok(&self) -> bool {
        self.product_triple.is_empty()
            && self.triple_on_product.is_empty()
            && self.generalized_jordan.is_empty()
            && self.not_anticommutative.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "anticommutativity {}, (xy)z {}, {{a,b,xy}} {}, generalized Jordan {}, cyclic first {}, cyclic second {}",
            self.not_anticommutative.len(),
            self.product_triple.len(),
            self.triple_on_product.len(),
            self.generalized_jordan.len(),
            self.cyclic_first.len(),
            self.cyclic_second.len()
        )
    }
}

fn par_tuples<T: Send>(n: usize, f: impl Fn(usize) -> Vec<T> + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().flat_map_iter(f).collect()
}

/// Which argument of a product a sparse vector occupies; the others are basis vectors.
#[derive(Clone, Copy)]
enum Slot {
    First,
    Second,
    Third,
}

/// Dense accumulator for signed sums of products in which one argument is a sparse
/// vector and the rest are basis vectors.
struct Acc<'m, F> {
    m: &'m GMAlgebra<F>,
    v: Vec<F>,
}

impl<'m, F: Field> Acc<'m, F> {
    fn new(m: &'m GMAlgebra<F>) -> Self {
        Acc { m, v: zeros(m.dim) }
    }

    fn push(&mut self, negate: bool, coef: &F, entry: &[(usize, F)]) {
        let c = if negate { coef.neg_ref() } else { coef.clone() };
        for (l, x) in entry {
            self.v[*l].add_mul(&c, x);
        }
    }

    /// `±{·,·,·}` with `vec` in `slot` and basis vectors `i`, `j` in the other two, in order.
    fn tri(&mut self, negate: bool, slot: Slot, vec: &[(usize, F)], i: usize, j: usize) {
        let m = self.m;
        for (k, c) in vec {
            let entry = match slot {
                Slot::First => m.tri.get(*k, i, j),
                Slot::Second => m.tri.get(i, *k, j),
                Slot::Third => m.tri.get(i, j, *k),
            };
            self.push(negate, c, entry);
        }
    }

    /// `±(u v)` with `vec` in `slot` and basis vector `i` in the other.
    fn mul(&mut self, negate: bool, slot: Slot, vec: &[(usize, F)], i: usize) {
        let m = self.m;
        for (k, c) in vec {
            let entry = match slot {
                Slot::First => m.bil.get(*k, i),
                _ => m.bil.get(i, *k),
            };
            self.push(negate, c, entry);
        }
    }

    /// `±` a basis-tuple entry.
    fn entry(&mut self, negate: bool, entry: &[(usize, F)]) {
        for (l, x) in entry {
            if negate {
                self.v[*l] -= x;
            } else {
                self.v[*l] += x;
            }
        }
    }

    /// Whether the accumulated vector is zero; resets it either way.
    fn take_is_zero(&mut self) -> bool {
        let zero = self.v.iter().all(|x| x.is_zero());
        if !zero {
            self.v.iter_mut().for_each(|x| *x = F::zero());
        }
        zero
    }
}

/// Checks every defining identity on basis tuples.
pub fn check_gm_axioms<F: Field>(m: &GMAlgebra<F>) -> GmReport {
    let n = m.dim;
    let anti = m.binary_algebra().check_anticommutative();
    let b = |i: usize, j: usize| m.bil.get(i, j);
    let t = |i: usize, j: usize, k: usize| m.tri.get(i, j, k);

    let product_triple = par_tuples(n, |x| {
        let mut acc = Acc::new(m);
        let mut bad = Vec::new();
        for y in 0..n {
            for z in 0..n {
                acc.mul(false, Slot::First, b(x, y), z);
                acc.entry(true, t(x, z, y));
                acc.entry(false, t(y, z, x));
                if !acc.take_is_zero() {
                    bad.push([x, y, z]);
                }
            }
        }
        bad
    });

    let triple_on_product = par_tuples(n, |a| {
        let mut acc = Acc::new(m);
        let mut bad = Vec::new();
        for b_ in 0..n {
            for x in 0..n {
                for y in 0..n {
                    acc.tri(false, Slot::Third, b(x, y), a, b_);
                    acc.mul(false, Slot::First, t(b_, a, x), y);
                    acc.mul(false, Slot::Second, t(b_, a, y), x);
                    if !acc.take_is_zero() {
                        bad.push([a, b_, x, y]);
                    }
                }
            }
        }
        bad
    });

    let generalized_jordan = par_tuples(n, |a| {
        let mut acc = Acc::new(m);
        let mut bad = Vec::new();
        for b_ in 0..n {
            for x in 0..n {
                let abx = t(a, b_, x);
                for y in 0..n {
                    let bay = t(b_, a, y);
                    for z in 0..n {
                        acc.tri(false, Slot::Third, t(x, y, z), a, b_);
                        acc.tri(true, Slot::Third, t(a, b_, z), x, y);
                        acc.tri(true, Slot::First, abx, y, z);
                        acc.tri(false, Slot::Second, bay, x, z);
                        if !acc.take_is_zero() {
                            bad.push([a, b_, x, y, z]);
                        }
                    }
                }
            }
        }
        bad
    });

    let cyclic = |second: bool| {
        par_tuples(n, |x| {
            let mut acc = Acc::new(m);
            let mut bad = Vec::new();
            for y in 0..n {
                for z in 0..n {
                    for t_ in 0..n {
                        for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                            if second {
                                acc.tri(false, Slot::Second, b(q, r), p, t_);
                            } else {
                                acc.tri(false, Slot::First, b(p, q), r, t_);
                            }
                        }
                        if !acc.take_is_zero() {
                            bad.push([x, y, z, t_]);
                        }
                    }
                }
            }
            bad
        })
    };

    GmReport {
        product_triple,
        triple_on_product,
        generalized_jordan,
        cyclic_first: cyclic(false),
        cyclic_second: cyclic(true),
        not_anticommutative: anti,
    }
}

/// Whether the cyclic identities follow from the other three, as predicted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub first_holds: bool,
    /// `M = M²`
    pub square_is_everything: bool,
    /// `{x : x M² = 0} = 0`
    pub annihilator_trivial: bool,
    pub second_applicable: bool,
    pub second_holds: bool,
}

impl RedundancyReport {
    pub fn confirmed(&self) -> bool {
        self.first_holds && (!self.second_applicable || self.second_holds)
    }
}

pub fn check_redundancy<F: Field>(m: &GMAlgebra<F>) -> Result<RedundancyReport, GmError> {
    let report = check_gm_axioms(m);
    if !report.core_ok() {
        return Err(GmError::Axioms(report.summary()));
    }
    let n = m.dim;
    let square = Span::from_vectors(
        n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.b(i, j)),
    );
    let square_is_everything = square.len() == n;
    // x ↦ (x·u for u in a basis of M²), stacked
    let mut rows: Vec<Vec<F>> = Vec::new();
    for u in square.basis() {
        let right = m.binary_algebra().right_mult(u);
        for r in 0..n {
            rows.push(right.row(r).to_vec());
        }
    }
    let annihilator_trivial = if rows.is_empty() {
        n == 0
    } else {
        Matrix::from_rows(rows).kernel().is_empty()
    };
    let second_applicable = square_is_everything || annihilator_trivial;
    Ok(RedundancyReport {
        first_holds: report.cyclic_first.is_empty(),
        square_is_everything,
        annihilator_trivial,
        second_applicable,
        second_holds: report.cyclic_second.is_empty(),
    })
}

/// The operator spans of `{x,y,·} ∓ {y,x,·}`.
#[derive(Clone, Debug)]
pub struct DPlusDMinus<F> {
    pub dplus: Vec<Matrix<F>>,
    pub dminus: Vec<Matrix<F>>,
    plus_span: Span<F>,
    minus_span: Span<F>,
}

impl<F: Field> DPlusDMinus<F> {
    pub fn compute(m: &GMAlgebra<F>) -> Self {
        let n = m.dim;
        let ops: Vec<Matrix<F>> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.triple_operator(i, j))
            .collect();
        let at = |i: usize, j: usize| &ops[i * n + j];
        let half = F::from_frac(1, 2);
        let plus = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| at(i, j).sub(at(j, i)).scale(&half));
        let (dplus, plus_span) = operator_span(n, plus.collect::<Vec<_>>());
        let minus = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| at(i, j).add(at(j, i)).scale(&half));
        let (dminus, minus_span) = operator_span(n, minus.collect::<Vec<_>>());
        DPlusDMinus {
            dplus,
            dminus,
            plus_span,
            minus_span,
        }
    }

    pub fn plus_coords(&self, op: &Matrix<F>) -> Option<Vec<F>> {
        self.plus_span.coords(&op.data)
    }

    pub fn minus_coords(&self, op: &Matrix<F>) -> Option<Vec<F>> {
        self.minus_span.coords(&op.data)
    }

    /// Whether `d⁺ + d⁻` is closed under the commutator.
    pub fn is_closed(&self) -> bool {
        let n2 = self.plus_span.dim_ambient();
        let all = Span::from_vectors(
            n2,
            self.dplus
                .iter()
                .chain(&self.dminus)
                .map(|d| d.data.clone()),
        );
        let ops: Vec<&Matrix<F>> = self.dplus.iter().chain(&self.dminus).collect();
        ops.iter()
            .all(|a| ops.iter().all(|b| all.contains(&a.commutator(b).data)))
    }
}

/// The Lie algebra `d⁺ ⊕ d⁻ ⊕ ν₀(M) ⊕ ν₁(M)` attached to a generalized Malcev algebra.
#[derive(Clone, Debug)]
pub struct AssociatedLie<F> {
    pub alg: AlgebraSpec<F>,
    /// `ν₀ ↔ ν₁`, identity on `d⁺`, `−1` on `d⁻`.
    pub tau: Matrix<F>,
    pub d: DPlusDMinus<F>,
    pub m_dim: usize,
}

impl<F: Field> AssociatedLie<F> {
    pub fn n_plus(&self) -> usize {
        self.d.dplus.len()
    }

    pub fn n_minus(&self) -> usize {
        self.d.dminus.len()
    }

    pub fn plus_index(&self, a: usize) -> usize {
        a
    }

    pub fn minus_index(&self, a: usize) -> usize {
        self.n_plus() + a
    }

    /// Index of `ν_i(e_k)`.
    pub fn nu_index(&self, i: usize, k: usize) -> usize {
        self.n_plus() + self.n_minus() + i * self.m_dim + k
    }

    /// `ν_i(x)` as a vector of the Lie algebra.
    pub fn nu(&self, i: usize, x: &[F]) -> Vec<F> {
        let mut v = zeros(self.alg.dim);
        for (k, c) in x.iter().enumerate() {
            v[self.nu_index(i, k)] = c.clone();
        }
        v
    }

    pub fn nu_basis(&self, i: usize) -> Vec<Vec<F>> {
        (0..self.m_dim)
            .map(|k| unit(self.alg.dim, self.nu_index(i, k)))
            .collect()
    }
}

/// The bracket of the associated Lie algebra, without the S₃-action.
pub fn associated_lie_algebra<F: Field>(m: &GMAlgebra<F>) -> Result<AssociatedLie<F>, GmError> {
    let report = check_gm_axioms(m);
    if !report.ok() {
        return Err(GmError::Axioms(report.summary()));
    }
    let n = m.dim;
    let d = DPlusDMinus::compute(m);
    let (np, nm) = (d.dplus.len(), d.dminus.len());
    let dim = np + nm + 2 * n;
    let nu = |i: usize, k: usize| np + nm + i * n + k;
    let mut bil = Bilinear::zero(dim);
    let put = |bil: &mut Bilinear<F>, a: usize, b: usize, v: Vec<F>| {
        let neg = crate::linalg::neg(&v);
        bil.set(a, b, &v);
        bil.set(b, a, &neg);
    };
    let place = |offset: usize, coords: &[F]| {
        let mut v = zeros(dim);
        for (k, c) in coords.iter().enumerate() {
            v[offset + k] = c.clone();
        }
        v
    };
    let closed = |what: &str| GmError::NotClosed(what.to_string());
    for a in 0..np {
        for b in a + 1..np {
            let c = d
                .plus_coords(&d.dplus[a].commutator(&d.dplus[b]))
                .ok_or_else(|| closed("[d+, d+]"))?;
            put(&mut bil, a, b, place(0, &c));
        }
        for b in 0..nm {
            let c = d
                .minus_coords(&d.dplus[a].commutator(&d.dminus[b]))
                .ok_or_else(|| closed("[d+, d-]"))?;
            put(&mut bil, a, np + b, place(np, &c));
        }
        for k in 0..n {
            let img = d.dplus[a].column(k);
            for i in 0..2 {
                put(&mut bil, a, nu(i, k), place(nu(i, 0), &img));
            }
        }
    }
    for a in 0..nm {
        for b in a + 1..nm {
            let c = d
                .plus_coords(&d.dminus[a].commutator(&d.dminus[b]))
                .ok_or_else(|| closed("[d-, d-]"))?;
            put(&mut bil, np + a, np + b, place(0, &c));
        }
        for k in 0..n {
            let img = d.dminus[a].column(k);
            put(&mut bil, np + a, nu(0, k), place(nu(0, 0), &img));
            put(
                &mut bil,
                np + a,
                nu(1, k),
                place(nu(1, 0), &crate::linalg::neg(&img)),
            );
        }
    }
    let half = F::from_frac(1, 2);
    for k in 0..n {
        for l in 0..n {
            if k < l {
                for i in 0..2 {
                    put(
                        &mut bil,
                        nu(i, k),
                        nu(i, l),
                        place(nu(1 - i, 0), &m.b(k, l)),
                    );
                }
            }
            let lkl = m.triple_operator(k, l);
            let llk = m.triple_operator(l, k);
            let cp = d
                .plus_coords(&lkl.sub(&llk).scale(&half))
                .ok_or_else(|| closed("d+_{x,y}"))?;
            let cm = d
                .minus_coords(&lkl.add(&llk).scale(&half))
                .ok_or_else(|| closed("d-_{x,y}"))?;
            let v = add(&place(0, &cp), &place(np, &cm));
            put(&mut bil, nu(0, k), nu(1, l), v);
        }
    }
    let mut labels: Vec<String> = (0..np).map(|a| format!("d+{a}")).collect();
    labels.extend((0..nm).map(|a| format!("d-{a}")));
    for i in 0..2 {
        labels.extend((0..n).map(|k| format!("nu{i}({})", m.label(k))));
    }
    let alg = AlgebraSpec::new(bil).with_labels(labels);
    let mut tau = Matrix::zeros(dim, dim);
    for a in 0..np {
        tau.set(a, a, F::one());
    }
    for a in 0..nm {
        tau.set(np + a, np + a, F::from_i64(-1));
    }
    for k in 0..n {
        tau.set(nu(1, k), nu(0, k), F::one());
        tau.set(nu(0, k), nu(1, k), F::one());
    }
    Ok(AssociatedLie {
        alg,
        tau,
        d,
        m_dim: n,
    })
}

/// The associated Lie algebra with its S₃-action: `φ` is `ω` on `ν₀(M)` and `ω²` on `ν₁(M)`.
pub fn build_g_of_m<F: OmegaField>(
    m: &GMAlgebra<F>,
) -> Result<(AssociatedLie<F>, S3Action<F>), GmError> {
    let g = associated_lie_algebra(m)?;
    let dim = g.alg.dim;
    let mut phi = Matrix::identity(dim);
    let (w, w2) = (F::omega(), F::omega().conj_omega());
    for k in 0..m.dim {
        phi.set(g.nu_index(0, k), g.nu_index(0, k), w.clone());
        phi.set(g.nu_index(1, k), g.nu_index(1, k), w2.clone());
    }
    let act = S3Action {
        phi,
        tau: g.tau.clone(),
    };
    let jac = g.alg.check_jacobi();
    if !jac.is_empty() {
        return Err(GmError::Check(format!(
            "Jacobi fails on {} triples, first {:?}",
            jac.len(),
            jac[0]
        )));
    }
    let rep =
        crate::symaction::check_action(&g.alg, &crate::symaction::GroupAction::S3(act.clone()))
            .map_err(|e| GmError::Check(e.to_string()))?;
    if !rep.ok() {
        return Err(GmError::Check(format!(
            "action fails: {:?}",
            rep.relation_failures
        )));
    }
    Ok((g, act))
}

/// Linearized Sagle identity `J(x₁,y,x₂z) + J(x₂,y,x₁z) = J(x₁,y,z)x₂ + J(x₂,y,z)x₁`;
/// returns violating `(x₁, x₂, y, z)` with `x₁ ≤ x₂`.
pub fn malcev_violations<F: Field>(alg: &AlgebraSpec<F>) -> Vec<[usize; 4]> {
    let n = alg.dim;
    let jac: Vec<Vec<F>> = (0..n * n * n)
        .into_par_iter()
        .map(|ijk| alg.jacobiator_basis(ijk / (n * n), (ijk / n) % n, ijk % n))
        .collect();
    if jac.iter().all(|v| is_zero_vec(v)) {
        return Vec::new();
    }
    let j_at = |i: usize, j: usize, k: usize| &jac[(i * n + j) * n + k];
    // J(e_i, e_j, w) for arbitrary w
    let j_vec = |i: usize, j: usize, w: &crate::linalg::SparseVec<F>| {
        let mut out = zeros(n);
        for (k, c) in w {
            crate::linalg::axpy(&mut out, c, j_at(i, j, *k));
        }
        out
    };
    par_tuples(n, |x1| {
        let mut bad = Vec::new();
        for x2 in x1..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = add(
                        &j_vec(x1, y, alg.bil.get(x2, z)),
                        &j_vec(x2, y, alg.bil.get(x1, z)),
                    );
                    let rhs = add(
                        &alg.bil.apply_basis_right(j_at(x1, y, z), x2),
                        &alg.bil.apply_basis_right(j_at(x2, y, z), x1),
                    );
                    if lhs != rhs {
                        bad.push([x1, x2, y, z]);
                    }
                }
            }
        }
        bad
    })
}

pub fn check_malcev<F: Field>(alg: &AlgebraSpec<F>) -> bool {
    alg.check_anticommutative().is_empty() && malcev_violations(alg).is_empty()
}

/// `2{x,y,z} = (xy)z + x(yz) − y(xz)` applied to any anticommutative algebra.
pub fn triple_from_binary<F: Field>(alg: &AlgebraSpec<F>) -> GMAlgebra<F> {
    let n = alg.dim;
    let half = F::from_frac(1, 2);
    let b = |i: usize, j: usize| to_dense(n, alg.bil.get(i, j));
    let tri = Trilinear::from_fn(n, |x, y, z| {
        let t1 = alg.bil.apply_basis_right(&b(x, y), z);
        let t2 = alg.bil.apply_basis_left(x, &b(y, z));
        let t3 = alg.bil.apply_basis_left(y, &b(x, z));
        scale(&half, &sub(&add(&t1, &t2), &t3))
    });
    GMAlgebra {
        dim: n,
        bil: alg.bil.clone(),
        tri,
        labels: alg.labels.clone(),
    }
}

pub fn malcev_to_gm<F: Field>(alg: &AlgebraSpec<F>) -> Result<GMAlgebra<F>, GmError> {
    let anti = alg.check_anticommutative();
    if !anti.is_empty() {
        return Err(GmError::NotAnticommutative(anti));
    }
    if !malcev_violations(alg).is_empty() {
        return Err(GmError::NotMalcev);
    }
    Ok(triple_from_binary(alg))
}

pub fn gm_to_malcev<F: Field>(m: &GMAlgebra<F>) -> Result<AlgebraSpec<F>, GmError> {
    let n = m.dim;
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if !is_zero_vec(&add(&m.t(i, j, k), &m.t(j, i, k))) {
                    return Err(GmError::NotSkew(i, j));
                }
            }
        }
    }
    let report = check_gm_axioms(m);
    if !report.ok() {
        return Err(GmError::Axioms(report.summary()));
    }
    let alg = m.binary_algebra();
    if triple_from_binary(&alg).tri != m.tri {
        return Err(GmError::Check(
            "triple product differs from the binary formula".into(),
        ));
    }
    Ok(alg)
}

/// `T ⊕ 𝔰(T) ⊕ T̂` together with the map from the associated Lie algebra.
#[derive(Clone, Debug)]
pub struct Tkk<F> {
    pub alg: AlgebraSpec<F>,
    /// Basis of `𝔰(T)` as operator pairs.
    pub s_basis: Vec<(Matrix<F>, Matrix<F>)>,
    pub g_of_t: AssociatedLie<F>,
    /// Columns: images of the basis of `g(T)` in `𝒦(T)`.
    pub iso: Matrix<F>,
    pub bijective: bool,
    /// Basis pairs of `g(T)` where the map fails to preserve brackets.
    pub bracket_failures: Vec<(usize, usize)>,
}

impl<F: Field> Tkk<F> {
    pub fn is_isomorphism(&self) -> bool {
        self.bijective && self.bracket_failures.is_empty()
    }
}

pub fn tkk<F: Field>(t: &GMAlgebra<F>) -> Result<Tkk<F>, GmError> {
    if !t.bil.is_zero() {
        return Err(GmError::NonzeroBinary);
    }
    let g = associated_lie_algebra(t)?;
    let n = t.dim;
    let pair_vec = |a: &Matrix<F>, b: &Matrix<F>| {
        let mut v = a.data.clone();
        v.extend(b.data.iter().cloned());
        v
    };
    let mut span = Span::new(2 * n * n);
    let mut s_basis = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let d1 = t.triple_operator(x, y);
            let d2 = t.triple_operator(y, x).neg();
            if span.insert(&pair_vec(&d1, &d2)) {
                s_basis.push((d1, d2));
            }
        }
    }
    let ns = s_basis.len();
    let dim = 2 * n + ns;
    let (s_off, hat_off) = (n, n + ns);
    let place = |offset: usize, coords: &[F]| {
        let mut v = zeros(dim);
        for (k, c) in coords.iter().enumerate() {
            v[offset + k] = c.clone();
        }
        v
    };
    let mut bil = Bilinear::zero(dim);
    let mut put = |a: usize, b: usize, v: Vec<F>| {
        bil.set(b, a, &crate::linalg::neg(&v));
        bil.set(a, b, &v);
    };
    for a in 0..ns {
        for b in a + 1..ns {
            let (p, q) = (&s_basis[a], &s_basis[b]);
            let c = span
                .coords(&pair_vec(&p.0.commutator(&q.0), &p.1.commutator(&q.1)))
                .ok_or_else(|| GmError::NotClosed("s(T)".into()))?;
            put(s_off + a, s_off + b, place(s_off, &c));
        }
        for k in 0..n {
            put(s_off + a, k, place(0, &s_basis[a].0.column(k)));
            put(
                s_off + a,
                hat_off + k,
                place(hat_off, &s_basis[a].1.column(k)),
            );
        }
    }
    for x in 0..n {
        for y in 0..n {
            let c = span
                .coords(&pair_vec(
                    &t.triple_operator(x, y),
                    &t.triple_operator(y, x).neg(),
                ))
                .expect("spanning pair");
            put(x, hat_off + y, place(s_off, &c));
        }
    }
    let mut labels: Vec<String> = (0..n).map(|k| t.label(k)).collect();
    labels.extend((0..ns).map(|a| format!("s{a}")));
    labels.extend((0..n).map(|k| format!("hat({})", t.label(k))));
    let alg = AlgebraSpec::new(bil).with_labels(labels);

    let gdim = g.alg.dim;
    let mut cols: Vec<Vec<F>> = Vec::with_capacity(gdim);
    for d in &g.d.dplus {
        cols.push(place(
            s_off,
            &span
                .coords(&pair_vec(d, d))
                .ok_or_else(|| GmError::Check("d+ not in s(T)".into()))?,
        ));
    }
    for d in &g.d.dminus {
        cols.push(place(
            s_off,
            &span
                .coords(&pair_vec(d, &d.neg()))
                .ok_or_else(|| GmError::Check("d- not in s(T)".into()))?,
        ));
    }
    for k in 0..n {
        cols.push(unit(dim, k));
    }
    for k in 0..n {
        cols.push(unit(dim, hat_off + k));
    }
    let iso = Matrix::from_columns(dim, &cols);
    let bijective = dim == gdim && iso.rank() == dim;
    let bracket_failures = homomorphism_failures(&g.alg, &alg, &iso);
    Ok(Tkk {
        alg,
        s_basis,
        g_of_t: g,
        iso,
        bijective,
        bracket_failures,
    })
}

/// Basis pairs `(a, b)`, `a < b`, with `f[e_a, e_b] ≠ [f e_a, f e_b]`.
pub fn homomorphism_failures<F: Field>(
    src: &AlgebraSpec<F>,
    dst: &AlgebraSpec<F>,
    f: &Matrix<F>,
) -> Vec<(usize, usize)> {
    let cols = f.columns();
    let n = src.dim;
    par_tuples(n, |a| {
        let mut bad = Vec::new();
        for b in a + 1..n {
            let lhs = f.apply(&to_dense(n, src.bil.get(a, b)));
            let rhs = dst.product(&cols[a], &cols[b]);
            if lhs != rhs {
                bad.push((a, b));
            }
        }
        bad
    })
}

/// The binary–ternary system `(M, xy, [x,y,z])` and its standard enveloping Lie algebra.
#[derive(Clone, Debug)]
pub struct LieYamaguti<F> {
    pub binary: Bilinear<F>,
    /// `[x,y,z] = {x,y,z} − {y,x,z}`
    pub ternary: Trilinear<F>,
    /// `[M,M,·] ⊕ M`
    pub enveloping: AlgebraSpec<F>,
    pub inner_ops: Vec<Matrix<F>>,
    /// Columns: images of the enveloping basis in the associated Lie algebra.
    pub embedding: Matrix<F>,
    /// The embedding is injective, bracket preserving, and onto the `τ`-fixed subalgebra.
    pub matches_fixed_subalgebra: bool,
}

pub fn lie_yamaguti_reduce<F: Field>(m: &GMAlgebra<F>) -> Result<LieYamaguti<F>, GmError> {
    let g = associated_lie_algebra(m)?;
    let n = m.dim;
    let ternary = Trilinear::from_fn(n, |x, y, z| sub(&m.t(x, y, z), &m.t(y, x, z)));
    let ops = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .map(|(x, y)| ternary.basis_operator(x, y));
    let (inner_ops, span) = operator_span(n, ops.collect::<Vec<_>>());
    let no = inner_ops.len();
    let dim = no + n;
    let place = |offset: usize, coords: &[F]| {
        let mut v = zeros(dim);
        for (k, c) in coords.iter().enumerate() {
            v[offset + k] = c.clone();
        }
        v
    };
    let mut bil = Bilinear::zero(dim);
    let mut put = |a: usize, b: usize, v: Vec<F>| {
        bil.set(b, a, &crate::linalg::neg(&v));
        bil.set(a, b, &v);
    };
    for a in 0..no {
        for b in a + 1..no {
            let c = span
                .coords(&inner_ops[a].commutator(&inner_ops[b]).data)
                .ok_or_else(|| GmError::NotClosed("[M,M,.]".into()))?;
            put(a, b, place(0, &c));
        }
        for k in 0..n {
            put(a, no + k, place(no, &inner_ops[a].column(k)));
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let c = span
                .coords(&ternary.basis_operator(x, y).data)
                .expect("spanning operator");
            put(no + x, no + y, add(&place(0, &c), &place(no, &m.b(x, y))));
        }
    }
    let enveloping = AlgebraSpec::new(bil);
    let jac = enveloping.check_jacobi();
    if !jac.is_empty() {
        return Err(GmError::Check(format!(
            "enveloping algebra fails Jacobi on {:?}",
            jac[0]
        )));
    }

    let gdim = g.alg.dim;
    let mut cols = Vec::with_capacity(dim);
    for op in &inner_ops {
        let c =
            g.d.plus_coords(op)
                .ok_or_else(|| GmError::Check("[x,y,.] outside d+".into()))?;
        let mut v = zeros(gdim);
        for (k, x) in c.into_iter().enumerate() {
            v[k] = x;
        }
        cols.push(v);
    }
    for k in 0..n {
        cols.push(add(
            &unit(gdim, g.nu_index(0, k)),
            &unit(gdim, g.nu_index(1, k)),
        ));
    }
    let embedding = Matrix::from_columns(gdim, &cols);
    let fixed = g.tau.sub(&Matrix::identity(gdim)).kernel();
    let fixed_span = Span::from_vectors(gdim, fixed.clone());
    let matches_fixed_subalgebra = embedding.rank() == dim
        && fixed.len() == dim
        && cols.iter().all(|c| fixed_span.contains(c))
        && homomorphism_failures(&enveloping, &g.alg, &embedding).is_empty();
    Ok(LieYamaguti {
        binary: m.bil.clone(),
        ternary,
        enveloping,
        inner_ops,
        embedding,
        matches_fixed_subalgebra,
    })
}

/// Operator-wise checks: `d⁺` acts by derivations and `d⁻` by antiderivations of `xy`.
pub fn check_d_operators<F: Field>(
    m: &GMAlgebra<F>,
    d: &DPlusDMinus<F>,
) -> (Vec<usize>, Vec<usize>) {
    let n = m.dim;
    let fails = |op: &Matrix<F>, sign: i64| {
        (0..n).any(|x| {
            (0..n).any(|y| {
                let lhs = op.apply(&m.b(x, y));
                let rhs = add(
                    &m.bil.apply(&op.column(x), &m.e(y)),
                    &m.bil.apply(&m.e(x), &op.column(y)),
                );
                lhs != scale(&F::from_i64(sign), &rhs)
            })
        })
    };
    let plus = d
        .dplus
        .iter()
        .enumerate()
        .filter(|(_, op)| fails(op, 1))
        .map(|(i, _)| i)
        .collect();
    let minus = d
        .dminus
        .iter()
        .enumerate()
        .filter(|(_, op)| fails(op, -1))
        .map(|(i, _)| i)
        .collect();
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{cross, r, sl2};
    use crate::scalar::{Rational, Scalar};

    /// `(E, 2x×y, b(x,y)z − 3b(y,z)x)` with `b` the standard dot product.
    pub fn g2_gm(c: i64) -> GMAlgebra<Rational> {
        let cr = cross();
        let bil = Bilinear::from_fn(3, |i, j| scale(&r(2), &to_dense(3, cr.bil.get(i, j))));
        let tri = Trilinear::from_fn(3, |x, y, z| {
            let mut v = zeros(3);
            if x == y {
                v[z] += &r(1);
            }
            if y == z {
                v[x] -= &r(c);
            }
            v
        });
        GMAlgebra::new(bil, tri).unwrap()
    }

    #[test]
    fn g2_axioms_hold() {
        let rep = check_gm_axioms(&g2_gm(3));
        assert!(rep.ok(), "{}", rep.summary());
        let red = check_redundancy(&g2_gm(3)).unwrap();
        assert!(red.square_is_everything && red.confirmed());
    }

    #[test]
    fn mutated_g2_breaks_first_identity() {
        let rep = check_gm_axioms(&g2_gm(2));
        assert!(!rep.product_triple.is_empty());
    }

    #[test]
    fn g2_associated_algebra() {
        let m = g2_gm(3).map_scalars(|x| Scalar::from(x.clone()));
        let (g, act) = build_g_of_m(&m).unwrap();
        assert_eq!((g.n_plus(), g.n_minus(), g.alg.dim), (3, 5, 14));
        assert!(g.alg.is_lie());
        let rep =
            crate::symaction::isotypic_s3(&(0..14).map(|i| unit(14, i)).collect::<Vec<_>>(), &act)
                .unwrap();
        assert_eq!(rep.s3_triple(), (3, 5, 3));
        let (p, q) = check_d_operators(&m, &g.d);
        assert!(p.is_empty() && q.is_empty());
    }

    #[test]
    fn g2_rejected_as_malcev_triple() {
        assert!(matches!(
            gm_to_malcev(&g2_gm(3)),
            Err(GmError::NotSkew(_, _))
        ));
    }

    #[test]
    fn lie_algebras_are_malcev() {
        assert!(check_malcev(&sl2()));
        let m = malcev_to_gm(&sl2()).unwrap();
        assert!(check_gm_axioms(&m).ok());
        // {x,y,.} = ad_{xy}
        for x in 0..3 {
            for y in 0..3 {
                let xy = to_dense(3, sl2().bil.get(x, y));
                assert_eq!(m.triple_operator(x, y), sl2().ad(&xy));
            }
        }
        assert_eq!(gm_to_malcev(&m).unwrap().bil, sl2().bil);
    }

    #[test]
    fn zero_algebra() {
        let m = GMAlgebra::<Rational>::jordan_triple(Trilinear::zero(2));
        let g = associated_lie_algebra(&m).unwrap();
        assert_eq!(g.alg.dim, 4);
        assert!(g.alg.bil.is_zero());
        let red = check_redundancy(&m).unwrap();
        assert!(!red.second_applicable && red.confirmed());
        let t = tkk(&m).unwrap();
        assert_eq!(t.alg.dim, 4);
        assert!(t.is_isomorphism());
    }

    #[test]
    fn one_dimensional_triple() {
        let mut tri = Trilinear::zero(1);
        tri.add_entry(0, 0, 0, 0, r(2));
        let t = tkk(&GMAlgebra::jordan_triple(tri)).unwrap();
        assert_eq!(t.alg.dim, 3);
        assert!(t.alg.is_lie());
        assert!(t.is_isomorphism());
    }

    #[test]
    fn g2_lie_yamaguti() {
        let ly = lie_yamaguti_reduce(&g2_gm(3)).unwrap();
        assert_eq!(ly.enveloping.dim, 6);
        assert!(ly.matches_fixed_subalgebra);
    }

    #[test]
    fn non_anticommutative_rejected() {
        let mut bil = Bilinear::<Rational>::zero(2);
        bil.add_entry(0, 0, 1, r(1));
        let alg = AlgebraSpec::new(bil);
        assert!(matches!(
            malcev_to_gm(&alg),
            Err(GmError::NotAnticommutative(_))
        ));
    }

    /// Direct evaluation on dense vectors, the identities written out term by term.
    fn dense_violations(m: &GMAlgebra<Rational>) -> [usize; 5] {
        let n = m.dim;
        let (e, b, t) = (|i| m.e(i), |i, j| m.b(i, j), |i, j, k| m.t(i, j, k));
        let tri = |x: &[Rational], y: &[Rational], z: &[Rational]| m.tri.apply(x, y, z);
        let mul = |x: &[Rational], y: &[Rational]| m.bil.apply(x, y);
        let mut out = [0; 5];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out[0] += usize::from(mul(&b(x, y), &e(z)) != sub(&t(x, z, y), &t(y, z, x)));
                    for w in 0..n {
                        let lhs = tri(&e(x), &e(y), &b(z, w));
                        let rhs = add(&mul(&t(y, x, z), &e(w)), &mul(&e(z), &t(y, x, w)));
                        out[1] += usize::from(!is_zero_vec(&add(&lhs, &rhs)));
                        let c1 = [
                            tri(&b(x, y), &e(z), &e(w)),
                            tri(&b(y, z), &e(x), &e(w)),
                            tri(&b(z, x), &e(y), &e(w)),
                        ];
                        let c2 = [
                            tri(&e(x), &b(y, z), &e(w)),
                            tri(&e(y), &b(z, x), &e(w)),
                            tri(&e(z), &b(x, y), &e(w)),
                        ];
                        out[3] += usize::from(!is_zero_vec(&add(&c1[0], &add(&c1[1], &c1[2]))));
                        out[4] += usize::from(!is_zero_vec(&add(&c2[0], &add(&c2[1], &c2[2]))));
                        for v in 0..n {
                            let l = sub(
                                &tri(&e(x), &e(y), &t(z, w, v)),
                                &tri(&e(z), &e(w), &t(x, y, v)),
                            );
                            let r = sub(
                                &tri(&t(x, y, z), &e(w), &e(v)),
                                &tri(&e(z), &t(y, x, w), &e(v)),
                            );
                            out[2] += usize::from(l != r);
                        }
                    }
                }
            }
        }
        out
    }

    fn counts(rep: &GmReport) -> [usize; 5] {
        [
            rep.product_triple.len(),
            rep.triple_on_product.len(),
            rep.generalized_jordan.len(),
            rep.cyclic_first.len(),
            rep.cyclic_second.len(),
        ]
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sparse_check_agrees_with_dense_evaluation(
            c in -3i64..4,
            bil_entry in (0usize..3, 0usize..3, -2i64..3),
            tri_entries in proptest::collection::vec((0usize..3, 0usize..3, 0usize..3, 0usize..3, -2i64..3), 0..4),
        ) {
            let mut m = g2_gm(c);
            let (i, j, v) = bil_entry;
            if i != j {
                m.bil.add_entry(i, j, (i + j + 1) % 3, r(v));
                m.bil.add_entry(j, i, (i + j + 1) % 3, r(-v));
            }
            for (x, y, z, l, v) in tri_entries {
                m.tri.add_entry(x, y, z, l, r(v));
            }
            prop_assert_eq!(counts(&check_gm_axioms(&m)), dense_violations(&m));
        }
    }
}
