//! Finite-dimensional algebras given by sparse structure tensors.

use rayon::prelude::*;

use crate::linalg::{
    axpy_sparse, is_zero_vec, solve_linear, to_sparse, unit, zeros, Matrix, Span, SparseVec,
};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("involution does not square to the identity")]
    InvolutionNotInvolutive,
    #[error("bilinear form is not symmetric")]
    FormNotSymmetric,
    #[error("{0}")]
    Invalid(String),
}

/// Bilinear map `V × V → V` stored as the sparse images of basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bilinear<F> {
    dim: usize,
    table: Vec<SparseVec<F>>,
}

impl<F: Field> Bilinear<F> {
    pub fn zero(dim: usize) -> Self {
        Bilinear {
            dim,
            table: vec![Vec::new(); dim * dim],
        }
    }

    /// Builds the table from the dense images of basis pairs.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<F>) -> Self {
        let mut b = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                assert_eq!(v.len(), dim, "dimension mismatch");
                b.table[i * dim + j] = to_sparse(&v);
            }
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[F]) {
        self.table[i * self.dim + j] = to_sparse(v);
    }

    /// Adds `c·e_k` to the product of `e_i` and `e_j`.
    pub fn add_entry(&mut self, i: usize, j: usize, k: usize, c: F) {
        let mut v = crate::linalg::to_dense(self.dim, self.get(i, j));
        v[k] += &c;
        self.set(i, j, &v);
    }

    pub fn apply(&self, x: &[F], y: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        assert_eq!(y.len(), self.dim, "dimension mismatch");
        let mut out = zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entry = self.get(i, j);
                if !entry.is_empty() {
                    axpy_sparse(&mut out, &xi.mul_ref(yj), entry);
                }
            }
        }
        out
    }

    /// Product of a basis vector with a vector.
    pub fn apply_basis_left(&self, i: usize, y: &[F]) -> Vec<F> {
        let mut out = zeros(self.dim);
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                axpy_sparse(&mut out, yj, self.get(i, j));
            }
        }
        out
    }

    /// Product of a vector with a basis vector.
    pub fn apply_basis_right(&self, x: &[F], j: usize) -> Vec<F> {
        let mut out = zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                axpy_sparse(&mut out, xi, self.get(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_empty())
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &SparseVec<F>)> {
        let d = self.dim;
        self.table
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(move |(ij, v)| (ij / d, ij % d, v))
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G) -> Bilinear<G> {
        Bilinear {
            dim: self.dim,
            table: self
                .table
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(k, x)| (*k, f(x)))
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Trilinear map `V × V × V → V` stored as sparse images of basis triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trilinear<F> {
    dim: usize,
    table: Vec<SparseVec<F>>,
}

impl<F: Field> Trilinear<F> {
    pub fn zero(dim: usize) -> Self {
        Trilinear {
            dim,
            table: vec![Vec::new(); dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Vec<F>) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let v = f(i, j, k);
                    assert_eq!(v.len(), dim, "dimension mismatch");
                    t.table[(i * dim + j) * dim + k] = to_sparse(&v);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &SparseVec<F> {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: &[F]) {
        let d = self.dim;
        self.table[(i * d + j) * d + k] = to_sparse(v);
    }

    pub fn add_entry(&mut self, i: usize, j: usize, k: usize, l: usize, c: F) {
        let mut v = crate::linalg::to_dense(self.dim, self.get(i, j, k));
        v[l] += &c;
        self.set(i, j, k, &v);
    }

    pub fn apply(&self, x: &[F], y: &[F], z: &[F]) -> Vec<F> {
        let mut out = zeros(self.dim);
        let nz = |v: &[F]| {
            v.iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| (i, a.clone()))
                .collect::<Vec<_>>()
        };
        let (xs, ys, zs) = (nz(x), nz(y), nz(z));
        for (i, a) in &xs {
            for (j, b) in &ys {
                let ab = a.mul_ref(b);
                for (k, c) in &zs {
                    let entry = self.get(*i, *j, *k);
                    if !entry.is_empty() {
                        axpy_sparse(&mut out, &ab.mul_ref(c), entry);
                    }
                }
            }
        }
        out
    }

    /// The operator `z ↦ T(x, y, z)` as a matrix.
    pub fn operator(&self, x: &[F], y: &[F]) -> Matrix<F> {
        let n = self.dim;
        let cols: Vec<Vec<F>> = (0..n).map(|k| self.apply(x, y, &unit(n, k))).collect();
        Matrix::from_columns(n, &cols)
    }

    /// The operator `z ↦ T(e_i, e_j, z)`.
    pub fn basis_operator(&self, i: usize, j: usize) -> Matrix<F> {
        let n = self.dim;
        let cols: Vec<Vec<F>> = (0..n)
            .map(|k| crate::linalg::to_dense(n, self.get(i, j, k)))
            .collect();
        Matrix::from_columns(n, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_empty())
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &SparseVec<F>)> {
        let d = self.dim;
        self.table
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(move |(ijk, v)| (ijk / (d * d), (ijk / d) % d, ijk % d, v))
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G) -> Trilinear<G> {
        Trilinear {
            dim: self.dim,
            table: self
                .table
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(k, x)| (*k, f(x)))
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect(),
        }
    }
}

/// A finite-dimensional algebra with optional ternary product, involution and bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec<F> {
    pub dim: usize,
    pub bil: Bilinear<F>,
    pub tri: Option<Trilinear<F>>,
    pub invol: Option<Matrix<F>>,
    pub form: Option<Matrix<F>>,
    pub labels: Option<Vec<String>>,
}

impl<F: Field> AlgebraSpec<F> {
    pub fn new(bil: Bilinear<F>) -> Self {
        AlgebraSpec {
            dim: bil.dim(),
            bil,
            tri: None,
            invol: None,
            form: None,
            labels: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(Bilinear::zero(dim))
    }

    pub fn with_invol(mut self, invol: Matrix<F>) -> Self {
        self.invol = Some(invol);
        self
    }

    pub fn with_form(mut self, form: Matrix<F>) -> Self {
        self.form = Some(form);
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Checks shapes, the involution law and the symmetry of the form.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        if self.bil.dim() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                got: self.bil.dim(),
            });
        }
        if let Some(t) = &self.tri {
            if t.dim() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: t.dim(),
                });
            }
        }
        if let Some(j) = &self.invol {
            if j.rows != n || j.cols != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: j.rows,
                });
            }
            if j.mul(j) != Matrix::identity(n) {
                return Err(AlgebraError::InvolutionNotInvolutive);
            }
        }
        if let Some(b) = &self.form {
            if b.rows != n || b.cols != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: b.rows,
                });
            }
            if &b.transpose() != b {
                return Err(AlgebraError::FormNotSymmetric);
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: l.len(),
                });
            }
        }
        Ok(())
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        unit(self.dim, i)
    }

    pub fn product(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.bil.apply(x, y)
    }

    pub fn try_product(&self, x: &[F], y: &[F]) -> Result<Vec<F>, AlgebraError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        Ok(self.product(x, y))
    }

    /// Left multiplication `y ↦ x·y`.
    pub fn left_mult(&self, x: &[F]) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim)
            .map(|j| self.bil.apply_basis_right(x, j))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Right multiplication `y ↦ y·x`.
    pub fn right_mult(&self, x: &[F]) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim)
            .map(|j| self.bil.apply_basis_left(j, x))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        self.left_mult(x)
    }

    pub fn involution(&self, x: &[F]) -> Vec<F> {
        match &self.invol {
            Some(j) => j.apply(x),
            None => x.to_vec(),
        }
    }

    /// Pairs `(i, j)`, `i ≤ j`, with `e_i e_j ≠ −e_j e_i`.
    pub fn check_anticommutative(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let a = crate::linalg::to_dense(self.dim, self.bil.get(i, j));
                let b = crate::linalg::to_dense(self.dim, self.bil.get(j, i));
                if !is_zero_vec(&crate::linalg::add(&a, &b)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Jacobiator of three basis vectors.
    pub fn jacobiator_basis(&self, i: usize, j: usize, k: usize) -> Vec<F> {
        let n = self.dim;
        let mut out = zeros(n);
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (m, x) in self.bil.get(a, b) {
                axpy_sparse(&mut out, x, self.bil.get(*m, c));
            }
        }
        out
    }

    /// Triples `i ≤ j ≤ k` on which the Jacobi identity fails.
    pub fn check_jacobi(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim;
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut bad = Vec::new();
                for j in i..n {
                    for k in j..n {
                        if !is_zero_vec(&self.jacobiator_basis(i, j, k)) {
                            bad.push((i, j, k));
                        }
                    }
                }
                bad
            })
            .collect()
    }

    pub fn is_lie(&self) -> bool {
        self.check_anticommutative().is_empty() && self.check_jacobi().is_empty()
    }

    /// Same algebra in the basis given by the columns of `p` (which must be invertible).
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self, AlgebraError> {
        let n = self.dim;
        let cols = p.columns();
        let span = Span::from_vectors(n, cols.clone());
        if span.len() != n {
            return Err(AlgebraError::Invalid("change of basis is singular".into()));
        }
        let bil = Bilinear::from_fn(n, |a, b| {
            span.coords(&self.product(&cols[a], &cols[b]))
                .expect("full rank")
        });
        let tri = self.tri.as_ref().map(|t| {
            Trilinear::from_fn(n, |a, b, c| {
                span.coords(&t.apply(&cols[a], &cols[b], &cols[c]))
                    .expect("full rank")
            })
        });
        let conj = |m: &Matrix<F>| {
            let images: Vec<Vec<F>> = cols
                .iter()
                .map(|c| span.coords(&m.apply(c)).expect("full rank"))
                .collect();
            Matrix::from_columns(n, &images)
        };
        let invol = self.invol.as_ref().map(conj);
        let form = self.form.as_ref().map(|b| p.transpose().mul(b).mul(p));
        Ok(AlgebraSpec {
            dim: n,
            bil,
            tri,
            invol,
            form,
            labels: None,
        })
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> AlgebraSpec<G> {
        AlgebraSpec {
            dim: self.dim,
            bil: self.bil.map_scalars(f),
            tri: self.tri.as_ref().map(|t| t.map_scalars(f)),
            invol: self.invol.as_ref().map(|m| m.map(f)),
            form: self.form.as_ref().map(|m| m.map(f)),
            labels: self.labels.clone(),
        }
    }

    /// Basis of the derivation algebra as matrices.
    pub fn derivations(&self) -> Vec<Matrix<F>> {
        let n = self.dim;
        let var = |r: usize, c: usize| r * n + c;
        let mut eqs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                // d(e_i e_j) − d(e_i) e_j − e_i d(e_j), component l
                let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); n];
                for (m, x) in self.bil.get(i, j) {
                    for (l, row) in rows.iter_mut().enumerate() {
                        row.push((var(l, *m), x.clone()));
                    }
                }
                for r in 0..n {
                    for (l, x) in self.bil.get(r, j) {
                        rows[*l].push((var(r, i), x.neg_ref()));
                    }
                    for (l, x) in self.bil.get(i, r) {
                        rows[*l].push((var(r, j), x.neg_ref()));
                    }
                }
                eqs.extend(rows.into_iter().filter(|r| !r.is_empty()));
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
}

/// Result of closing a set of seeds under the product.
#[derive(Clone, Debug)]
pub struct Generated<F> {
    pub basis: Vec<Vec<F>>,
    /// Whether a step added nothing new before `max_depth` was exhausted.
    pub stabilized: bool,
    /// Last depth at which new elements appeared.
    pub depth_reached: usize,
    /// Cumulative dimension after each depth.
    pub dims: Vec<usize>,
}

pub fn generated_subalgebra<F: Field>(
    alg: &AlgebraSpec<F>,
    seeds: &[Vec<F>],
    max_depth: usize,
) -> Generated<F> {
    assert!(max_depth >= 1, "max_depth must be at least 1");
    let mut span = Span::new(alg.dim);
    let mut frontier = Vec::new();
    for s in seeds {
        if span.insert(s) {
            frontier.push(s.clone());
        }
    }
    let mut dims = vec![span.len()];
    let mut depth_reached = 1;
    let mut stabilized = frontier.is_empty();
    for depth in 2..=max_depth {
        if stabilized {
            break;
        }
        let current: Vec<Vec<F>> = span.basis().to_vec();
        let mut new = Vec::new();
        for x in &frontier {
            for y in &current {
                for p in [alg.product(x, y), alg.product(y, x)] {
                    if span.insert(&p) {
                        new.push(p);
                    }
                }
            }
        }
        dims.push(span.len());
        if new.is_empty() {
            stabilized = true;
        } else {
            depth_reached = depth;
        }
        frontier = new;
    }
    Generated {
        basis: span.into_basis(),
        stabilized,
        depth_reached,
        dims,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rational};
    use proptest::prelude::*;

    pub fn r(n: i64) -> Rational {
        rat_int(n)
    }

    /// sl₂ on (h, e, f).
    pub fn sl2() -> AlgebraSpec<Rational> {
        let mut b = Bilinear::zero(3);
        let mut set = |i, j, v: [i64; 3]| {
            let v: Vec<Rational> = v.iter().map(|&x| r(x)).collect();
            b.set(i, j, &v);
            b.set(j, i, &crate::linalg::neg(&v));
        };
        set(0, 1, [0, 2, 0]);
        set(0, 2, [0, 0, -2]);
        set(1, 2, [1, 0, 0]);
        AlgebraSpec::new(b)
    }

    pub fn cross() -> AlgebraSpec<Rational> {
        let mut b = Bilinear::zero(3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            b.add_entry(i, j, k, r(1));
            b.add_entry(j, i, k, r(-1));
        }
        AlgebraSpec::new(b)
    }

    #[test]
    fn sl2_products() {
        let a = sl2();
        assert_eq!(a.product(&unit(3, 0), &unit(3, 1)), vec![r(0), r(2), r(0)]);
        assert_eq!(a.product(&unit(3, 0), &zeros(3)), zeros::<Rational>(3));
        assert!(a.check_anticommutative().is_empty());
        assert!(a.check_jacobi().is_empty());
        assert!(a.try_product(&unit(2, 0), &unit(3, 0)).is_err());
    }

    #[test]
    fn cross_product() {
        let a = cross();
        assert_eq!(a.product(&unit(3, 0), &unit(3, 1)), unit(3, 2));
        assert!(a.check_jacobi().is_empty());
    }

    #[test]
    fn anticommutativity_violation() {
        let mut b = Bilinear::zero(2);
        b.add_entry(0, 0, 1, r(1));
        assert_eq!(AlgebraSpec::new(b).check_anticommutative(), vec![(0, 0)]);
    }

    #[test]
    fn sl2_derivations_are_inner() {
        let d = sl2().derivations();
        assert_eq!(d.len(), 3);
        // oracle: ad maps span a 3-dim space
        let a = sl2();
        let (ads, _) = crate::linalg::operator_span(3, (0..3).map(|i| a.ad(&unit(3, i))));
        assert_eq!(ads.len(), 3);
        let (both, _) = crate::linalg::operator_span(3, ads.into_iter().chain(d));
        assert_eq!(both.len(), 3);
    }

    #[test]
    fn generated_subalgebras() {
        let a = sl2();
        let g = generated_subalgebra(&a, &[unit(3, 0)], 4);
        assert_eq!(g.basis.len(), 1);
        assert!(g.stabilized);
        let g = generated_subalgebra(&a, &[unit(3, 1), unit(3, 2)], 5);
        assert_eq!(g.basis.len(), 3);
        assert!(g.stabilized);
        assert_eq!(g.depth_reached, 2);
        let ab = AlgebraSpec::<Rational>::abelian(2);
        let g = generated_subalgebra(&ab, &[unit(2, 0)], 3);
        assert_eq!(g.basis, vec![unit(2, 0)]);
    }

    #[test]
    fn zero_dimensional_algebra_is_legal() {
        let a = AlgebraSpec::<Rational>::abelian(0);
        assert!(a.validate().is_ok());
        assert!(a.check_jacobi().is_empty());
        assert!(a.check_anticommutative().is_empty());
        assert!(a.derivations().is_empty());
    }

    #[test]
    fn invalid_involution_rejected() {
        let a = sl2().with_invol(Matrix::scalar(3, r(2)));
        assert_eq!(a.validate(), Err(AlgebraError::InvolutionNotInvolutive));
    }

    fn arb_vec() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-5i64..6).prop_map(r), 3)
    }

    proptest! {
        #[test]
        fn product_is_bilinear(x in arb_vec(), y in arb_vec(), z in arb_vec(), al in -4i64..5, be in -4i64..5) {
            let a = sl2();
            let lhs = a.product(&crate::linalg::add(&crate::linalg::scale(&r(al), &x), &crate::linalg::scale(&r(be), &y)), &z);
            let rhs = crate::linalg::add(&crate::linalg::scale(&r(al), &a.product(&x, &z)), &crate::linalg::scale(&r(be), &a.product(&y, &z)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn jacobi_is_basis_independent(entries in proptest::collection::vec(-3i64..4, 9)) {
            let p = Matrix { rows: 3, cols: 3, data: entries.iter().map(|&x| r(x)).collect() };
            prop_assume!(p.rank() == 3);
            let changed = sl2().change_basis(&p).unwrap();
            prop_assert!(changed.check_anticommutative().is_empty());
            prop_assert!(changed.check_jacobi().is_empty());
            let c2 = cross().change_basis(&p).unwrap();
            prop_assert!(c2.check_jacobi().is_empty());
        }
    }
}
