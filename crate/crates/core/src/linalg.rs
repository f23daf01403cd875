//! Exact linear algebra over any [`Field`]: dense matrices, sparse echelon spans, kernels.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sorted `(index, value)` pairs with no explicit zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

pub fn zeros<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = zeros(n);
    v[i] = F::one();
    v
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense<F: Field>(n: usize, v: &SparseVec<F>) -> Vec<F> {
    let mut out = zeros(n);
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `acc += c * v`
pub fn axpy<F: Field>(acc: &mut [F], c: &F, v: &[F]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            a.add_mul(c, x);
        }
    }
}

/// `acc += c * v` for a sparse `v`.
pub fn axpy_sparse<F: Field>(acc: &mut [F], c: &F, v: &SparseVec<F>) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        acc[*i].add_mul(c, x);
    }
}

pub fn scale<F: Field>(c: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| c.mul_ref(x)).collect()
}

pub fn add<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    let mut out = x.to_vec();
    for (a, b) in out.iter_mut().zip(y) {
        *a += b;
    }
    out
}

pub fn sub<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    let mut out = x.to_vec();
    for (a, b) in out.iter_mut().zip(y) {
        *a -= b;
    }
    out
}

pub fn neg<F: Field>(x: &[F]) -> Vec<F> {
    x.iter().map(|a| a.neg_ref()).collect()
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

/// Square matrix acting on column vectors.
pub type LinearMap<F> = Matrix<F>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(n_rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n_rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut F {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out: Vec<F> = zeros(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    o.add_mul(a, x);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        m.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale(c, &self.data),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: neg(&self.data),
        }
    }

    /// `self·other − other·self`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut s = Span::new(self.rows);
        for c in self.columns() {
            s.insert(&c);
        }
        s.len()
    }

    /// Independent columns in first-seen order.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        Span::from_vectors(self.rows, self.columns()).into_basis()
    }

    pub fn kernel(&self) -> Vec<Vec<F>> {
        let eqs: Vec<SparseVec<F>> = (0..self.rows).map(|i| to_sparse(self.row(i))).collect();
        solve_linear(self.cols, &eqs).basis
    }

    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<F> {
    pivot: usize,
    entries: SparseVec<F>,
    combo: SparseVec<F>,
}

/// Incrementally built subspace with exact coordinates relative to the accepted vectors.
///
/// Vectors are accepted in insertion order; a vector dependent on earlier ones is skipped,
/// so the basis is the first-seen independent subsequence.
#[derive(Clone, Debug)]
pub struct Span<F> {
    dim: usize,
    rows: Vec<EchelonRow<F>>,
    pivot_row: BTreeMap<usize, usize>,
    basis: Vec<Vec<F>>,
}

type Work<F> = BTreeMap<usize, F>;

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
            basis: Vec::new(),
        }
    }

    pub fn from_vectors(dim: usize, vs: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut s = Self::new(dim);
        for v in vs {
            s.insert(&v);
        }
        s
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<F>> {
        self.basis
    }

    /// Reduce against the echelon rows; returns the residual and the coordinates consumed.
    fn reduce(&self, v: &[F], track: bool) -> (Work<F>, Work<F>) {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut work: Work<F> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        let mut used: Work<F> = BTreeMap::new();
        let mut cursor = 0usize;
        while let Some((&key, _)) = work.range(cursor..).next() {
            cursor = key + 1;
            let Some(&r) = self.pivot_row.get(&key) else {
                continue;
            };
            let c = work.remove(&key).expect("present");
            let row = &self.rows[r];
            for (j, x) in row.entries.iter().skip(1) {
                let e = work.entry(*j).or_insert_with(F::zero);
                *e -= &c.mul_ref(x);
                if e.is_zero() {
                    work.remove(j);
                }
            }
            if track {
                for (k, x) in &row.combo {
                    let e = used.entry(*k).or_insert_with(F::zero);
                    e.add_mul(&c, x);
                    if e.is_zero() {
                        used.remove(k);
                    }
                }
            }
        }
        (work, used)
    }

    /// Adds `v` if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let (work, used) = self.reduce(v, true);
        let Some((&pivot, lead)) = work.iter().next() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero lead");
        let idx = self.basis.len();
        let entries: SparseVec<F> = work.iter().map(|(j, x)| (*j, x.mul_ref(&inv))).collect();
        let mut combo: SparseVec<F> = used
            .iter()
            .map(|(k, x)| (*k, x.neg_ref().mul_ref(&inv)))
            .collect();
        combo.push((idx, inv));
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow {
            pivot,
            entries,
            combo,
        });
        self.basis.push(v.to_vec());
        true
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v, false).0.is_empty()
    }

    /// Coordinates of `v` in the accepted basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let (work, used) = self.reduce(v, true);
        if !work.is_empty() {
            return None;
        }
        let mut out = zeros(self.basis.len());
        for (k, x) in used {
            out[k] = x;
        }
        Some(out)
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.pivot).collect();
        p.sort_unstable();
        p
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn combine(&self, coords: &[F]) -> Vec<F> {
        let mut out = zeros(self.dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            axpy(&mut out, c, b);
        }
        out
    }
}

/// Solution space of a homogeneous linear system.
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub unknowns: usize,
    pub rank: usize,
    pub basis: Vec<Vec<F>>,
}

impl<F> Solution<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of the system `Σ_j row[j]·x_j = 0` for every row, by exact Gauss–Jordan elimination.
pub fn solve_linear<F: Field>(unknowns: usize, equations: &[SparseVec<F>]) -> Solution<F> {
    let mut rows: BTreeMap<usize, Work<F>> = BTreeMap::new();
    for eq in equations {
        let mut work: Work<F> = BTreeMap::new();
        for (j, x) in eq {
            assert!(*j < unknowns, "unknown index out of range");
            if x.is_zero() {
                continue;
            }
            let e = work.entry(*j).or_insert_with(F::zero);
            *e += x;
            if e.is_zero() {
                work.remove(j);
            }
        }
        let mut cursor = 0usize;
        while let Some((&key, _)) = work.range(cursor..).next() {
            cursor = key + 1;
            let Some(row) = rows.get(&key) else { continue };
            let c = work.remove(&key).expect("present");
            for (j, x) in row.iter().skip(1) {
                let e = work.entry(*j).or_insert_with(F::zero);
                *e -= &c.mul_ref(x);
                if e.is_zero() {
                    work.remove(j);
                }
            }
        }
        if let Some((&pivot, lead)) = work.iter().next() {
            let inv = lead.inv().expect("nonzero lead");
            for x in work.values_mut() {
                *x *= &inv;
            }
            rows.insert(pivot, work);
        }
    }
    let pivots: Vec<usize> = rows.keys().copied().collect();
    for &p in pivots.iter().rev() {
        let mut row = rows.remove(&p).expect("row");
        let mut cursor = p + 1;
        while let Some((&key, _)) = row.range(cursor..).next() {
            cursor = key + 1;
            let Some(other) = rows.get(&key) else {
                continue;
            };
            let c = row.remove(&key).expect("present");
            for (j, x) in other.iter().skip(1) {
                let e = row.entry(*j).or_insert_with(F::zero);
                *e -= &c.mul_ref(x);
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
        rows.insert(p, row);
    }
    let mut basis = Vec::new();
    for f in (0..unknowns).filter(|j| !rows.contains_key(j)) {
        let mut v = zeros(unknowns);
        v[f] = F::one();
        for (&p, row) in &rows {
            if let Some(x) = row.get(&f) {
                v[p] = x.neg_ref();
            }
        }
        basis.push(v);
    }
    Solution {
        unknowns,
        rank: rows.len(),
        basis,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("subspace is not invariant: image of basis vector {0} leaves the span")]
pub struct NotInvariant(pub usize);

/// Matrix of `map` restricted to the span, in the span's basis.
pub fn restrict<F: Field>(map: &Matrix<F>, span: &Span<F>) -> Result<Matrix<F>, NotInvariant> {
    let mut cols = Vec::with_capacity(span.len());
    for (j, b) in span.basis().iter().enumerate() {
        cols.push(span.coords(&map.apply(b)).ok_or(NotInvariant(j))?);
    }
    Ok(Matrix::from_columns(span.len(), &cols))
}

/// Span of linear maps viewed as flattened vectors; first-seen basis order.
pub fn operator_span<F: Field>(
    n: usize,
    ops: impl IntoIterator<Item = Matrix<F>>,
) -> (Vec<Matrix<F>>, Span<F>) {
    let mut span = Span::new(n * n);
    let mut kept = Vec::new();
    for op in ops {
        if span.insert(&op.data) {
            kept.push(op);
        }
    }
    (kept, span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rational, Scalar};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        rat_int(n)
    }

    #[test]
    fn trivial_kernel() {
        let eqs = vec![vec![(0, r(1)), (1, r(1))], vec![(0, r(1)), (1, r(-1))]];
        let sol = solve_linear(2, &eqs);
        assert_eq!(sol.dim(), 0);
        assert_eq!(sol.rank, 2);
    }

    #[test]
    fn plane_kernel() {
        let eqs = vec![vec![(0, r(1)), (1, r(1)), (2, r(1))]];
        let sol = solve_linear(3, &eqs);
        assert_eq!(sol.dim(), 2);
        for v in &sol.basis {
            assert!((v[0].clone() + v[1].clone() + v[2].clone()).is_zero());
        }
    }

    #[test]
    fn span_coordinates() {
        let mut s: Span<Rational> = Span::new(3);
        assert!(s.insert(&[r(1), r(2), r(0)]));
        assert!(s.insert(&[r(0), r(1), r(1)]));
        assert!(!s.insert(&[r(1), r(3), r(1)]));
        let c = s.coords(&[r(2), r(3), r(-1)]).unwrap();
        assert_eq!(c, vec![r(2), r(-1)]);
        assert!(s.coords(&[r(0), r(0), r(1)]).is_none());
        assert_eq!(s.combine(&c), vec![r(2), r(3), r(-1)]);
    }

    #[test]
    fn omega_eigenspace() {
        // cyclic permutation of three coordinates
        let z = Scalar::zero();
        let o = Scalar::one();
        let p = Matrix::from_rows(vec![
            vec![z.clone(), z.clone(), o.clone()],
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone()],
        ]);
        let m = p.sub(&Matrix::scalar(3, Scalar::omega()));
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(p.apply(&k[0]), scale(&Scalar::omega(), &k[0]));
    }

    #[test]
    fn restriction_detects_non_invariance() {
        let m: Matrix<Rational> = Matrix::from_rows(vec![vec![r(0), r(1)], vec![r(1), r(0)]]);
        let s = Span::from_vectors(2, vec![vec![r(1), r(0)]]);
        assert_eq!(restrict(&m, &s), Err(NotInvariant(0)));
        let s2 = Span::from_vectors(2, vec![vec![r(1), r(1)]]);
        assert_eq!(restrict(&m, &s2).unwrap(), Matrix::identity(1));
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..7)
            .prop_flat_map(|(m, n)| (Just(m), Just(n), proptest::collection::vec(-3i64..4, m * n)))
    }

    proptest! {
        #[test]
        fn kernel_vectors_solve_and_count((m, n, data) in arb_matrix()) {
            let mat = Matrix { rows: m, cols: n, data: data.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>() };
            let sol = solve_linear(n, &(0..m).map(|i| to_sparse(mat.row(i))).collect::<Vec<_>>());
            for v in &sol.basis {
                prop_assert!(is_zero_vec(&mat.apply(v)));
            }
            prop_assert_eq!(sol.dim(), n - sol.rank);
            prop_assert_eq!(sol.rank, mat.rank());
            prop_assert_eq!(Span::from_vectors(n, sol.basis.clone()).len(), sol.dim());
        }

        #[test]
        fn coords_reconstruct(vs in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 1..6),
                              cs in proptest::collection::vec(-3i64..4, 6)) {
            let vecs: Vec<Vec<Rational>> = vs.iter().map(|v| v.iter().map(|&x| r(x)).collect()).collect();
            let span = Span::from_vectors(4, vecs.clone());
            let mut target = zeros::<Rational>(4);
            for (v, c) in vecs.iter().zip(&cs) {
                axpy(&mut target, &r(*c), v);
            }
            let coords = span.coords(&target).unwrap();
            prop_assert_eq!(span.combine(&coords), target);
        }
    }

    #[test]
    fn identity_rank() {
        let i: Matrix<Rational> = Matrix::identity(4);
        assert_eq!(i.rank(), 4);
        assert_eq!(i.pow(3), i);
        assert!(i.kernel().is_empty());
        assert_eq!(i.trace(), r(4));
        assert!(Matrix::<Rational>::identity(2)
            .commutator(&Matrix::identity(2))
            .is_zero());
        assert!(Rational::one() == r(1));
    }
}
