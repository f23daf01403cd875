//! S₃ and S₄ actions by matrices: relation and automorphism checks, the Klein grading,
//! and isotypic decompositions.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::AlgebraSpec;
use crate::linalg::{is_zero_vec, restrict, Matrix, Span};
use crate::scalar::{rat_int, Field};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("dimension mismatch: algebra has dimension {expected}, action matrices {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("group relations fail: {0:?}")]
    Relations(Vec<String>),
    #[error("subspace is not invariant under `{0}`")]
    NotInvariant(String),
    #[error("multiplicity of {irrep} is {value}, not a nonnegative integer")]
    NonIntegerMultiplicity { irrep: String, value: String },
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
}

/// S₃ = ⟨φ, τ⟩ acting by matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S3Action<F> {
    pub phi: Matrix<F>,
    pub tau: Matrix<F>,
}

/// S₄ = V₄ ⋊ S₃ = ⟨τ₁, τ₂, φ, τ⟩ acting by matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S4Action<F> {
    pub tau1: Matrix<F>,
    pub tau2: Matrix<F>,
    pub phi: Matrix<F>,
    pub tau: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAction<F> {
    S3(S3Action<F>),
    S4(S4Action<F>),
}

/// A permutation of {0,1,2,3}; `p[i]` is the image of `i`.
pub type Perm = [u8; 4];

const ID: Perm = [0, 1, 2, 3];
pub const PERM_PHI: Perm = [1, 2, 0, 3];
pub const PERM_TAU: Perm = [1, 0, 2, 3];
pub const PERM_TAU1: Perm = [1, 0, 3, 2];
pub const PERM_TAU2: Perm = [3, 2, 1, 0];

/// `p ∘ q`
pub fn compose(p: &Perm, q: &Perm) -> Perm {
    [
        p[q[0] as usize],
        p[q[1] as usize],
        p[q[2] as usize],
        p[q[3] as usize],
    ]
}

/// Sorted cycle lengths.
pub fn cycle_type(p: &Perm) -> Vec<usize> {
    let mut seen = [false; 4];
    let mut out = Vec::new();
    for start in 0..4 {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

pub fn sign(p: &Perm) -> i64 {
    if cycle_type(p).iter().map(|l| l - 1).sum::<usize>() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Conjugacy classes of S₄ in table order: e, 2-cycles, 3-cycles, double transpositions, 4-cycles.
pub fn s4_class(p: &Perm) -> usize {
    match cycle_type(p).as_slice() {
        [1, 1, 1, 1] => 0,
        [1, 1, 2] => 1,
        [1, 3] => 2,
        [2, 2] => 3,
        [4] => 4,
        _ => unreachable!("cycle types of S4"),
    }
}

pub const S4_CLASS_SIZES: [i64; 5] = [1, 6, 8, 3, 6];

/// Character table of S₄ on the classes of [`s4_class`].
pub const S4_CHARACTERS: [(&str, i64, [i64; 5]); 5] = [
    ("U", 1, [1, 1, 1, 1, 1]),
    ("U'", 1, [1, -1, 1, 1, -1]),
    ("W", 2, [2, 0, -1, 2, 0]),
    ("V", 3, [3, 1, 0, -1, -1]),
    ("V'", 3, [3, -1, 0, -1, 1]),
];

/// Row orthogonality of [`S4_CHARACTERS`].
pub fn s4_table_self_test() -> Result<(), ActionError> {
    for (i, (ni, di, ci)) in S4_CHARACTERS.iter().enumerate() {
        if ci[0] != *di {
            return Err(ActionError::Inconsistent(format!("degree of {ni}")));
        }
        for (j, (nj, _, cj)) in S4_CHARACTERS.iter().enumerate() {
            let ip: i64 = (0..5).map(|k| S4_CLASS_SIZES[k] * ci[k] * cj[k]).sum();
            let expected = if i == j { 24 } else { 0 };
            if ip != expected {
                return Err(ActionError::Inconsistent(format!(
                    "character table rows {ni}, {nj}"
                )));
            }
        }
    }
    Ok(())
}

fn check_shape<F: Field>(n: usize, ms: &[&Matrix<F>]) -> Result<(), ActionError> {
    for m in ms {
        if m.rows != n || m.cols != n {
            return Err(ActionError::DimensionMismatch {
                expected: n,
                got: m.rows,
            });
        }
    }
    Ok(())
}

fn automorphism_failures<F: Field>(
    alg: &AlgebraSpec<F>,
    name: &str,
    g: &Matrix<F>,
) -> Vec<(String, usize, usize)> {
    let n = alg.dim;
    let images = g.columns();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = g.apply(&crate::linalg::to_dense(n, alg.bil.get(i, j)));
            let rhs = alg.product(&images[i], &images[j]);
            if lhs != rhs {
                bad.push((name.to_string(), i, j));
            }
        }
    }
    bad
}

/// Outcome of [`check_action`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub relation_failures: Vec<String>,
    /// `(generator, i, j)` with `g(e_i e_j) ≠ g(e_i) g(e_j)`.
    pub automorphism_failures: Vec<(String, usize, usize)>,
    /// Number of distinct matrices among the group elements.
    pub distinct_elements: usize,
    pub group_order: usize,
}

impl ActionReport {
    pub fn ok(&self) -> bool {
        self.relation_failures.is_empty() && self.automorphism_failures.is_empty()
    }

    pub fn faithful(&self) -> bool {
        self.distinct_elements == self.group_order
    }
}

impl<F: Field> S3Action<F> {
    pub fn identity(n: usize) -> Self {
        S3Action {
            phi: Matrix::identity(n),
            tau: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.rows
    }

    pub fn relation_failures(&self) -> Vec<String> {
        let n = self.dim();
        let id = Matrix::identity(n);
        let mut out = Vec::new();
        if check_shape(n, &[&self.phi, &self.tau]).is_err() {
            return vec!["shape".into()];
        }
        if self.phi.pow(3) != id {
            out.push("phi^3 = 1".into());
        }
        if self.tau.pow(2) != id {
            out.push("tau^2 = 1".into());
        }
        if self.tau.mul(&self.phi).mul(&self.tau) != self.phi.pow(2) {
            out.push("tau phi tau = phi^2".into());
        }
        out
    }

    /// The six group elements with their signs: 1, φ, φ², τ, τφ, τφ².
    pub fn elements(&self) -> Vec<(i64, Matrix<F>)> {
        let n = self.dim();
        let p0 = Matrix::identity(n);
        let p1 = self.phi.clone();
        let p2 = self.phi.mul(&self.phi);
        let t0 = self.tau.clone();
        let t1 = self.tau.mul(&p1);
        let t2 = self.tau.mul(&p2);
        vec![(1, p0), (1, p1), (1, p2), (-1, t0), (-1, t1), (-1, t2)]
    }

    pub fn generators(&self) -> Vec<(&'static str, &Matrix<F>)> {
        vec![("phi", &self.phi), ("tau", &self.tau)]
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> S3Action<G> {
        S3Action {
            phi: self.phi.map(f),
            tau: self.tau.map(f),
        }
    }
}

impl<F: Field> S4Action<F> {
    pub fn identity(n: usize) -> Self {
        S4Action {
            tau1: Matrix::identity(n),
            tau2: Matrix::identity(n),
            phi: Matrix::identity(n),
            tau: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.rows
    }

    pub fn generators(&self) -> Vec<(&'static str, &Matrix<F>)> {
        vec![
            ("tau1", &self.tau1),
            ("tau2", &self.tau2),
            ("phi", &self.phi),
            ("tau", &self.tau),
        ]
    }

    pub fn relation_failures(&self) -> Vec<String> {
        let n = self.dim();
        if check_shape(n, &[&self.tau1, &self.tau2, &self.phi, &self.tau]).is_err() {
            return vec!["shape".into()];
        }
        let id = Matrix::identity(n);
        let (t1, t2, p, t) = (&self.tau1, &self.tau2, &self.phi, &self.tau);
        let p2 = p.mul(p);
        let t1t2 = t1.mul(t2);
        let checks: Vec<(&str, bool)> = vec![
            ("tau1^2 = 1", t1.mul(t1) == id),
            ("tau2^2 = 1", t2.mul(t2) == id),
            ("tau1 tau2 = tau2 tau1", t1t2 == t2.mul(t1)),
            ("phi^3 = 1", p2.mul(p) == id),
            ("tau^2 = 1", t.mul(t) == id),
            ("tau phi tau = phi^2", t.mul(p).mul(t) == p2),
            ("phi tau1 phi^-1 = tau2", p.mul(t1).mul(&p2) == *t2),
            ("phi tau2 phi^-1 = tau1 tau2", p.mul(t2).mul(&p2) == t1t2),
            ("tau tau1 tau = tau1", t.mul(t1).mul(t) == *t1),
            ("tau tau2 tau = tau1 tau2", t.mul(t2).mul(t) == t1t2),
        ];
        checks
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name.to_string())
            .collect()
    }

    /// All 24 elements as `(permutation, matrix)`, generated from the four generators.
    pub fn elements(&self) -> Result<Vec<(Perm, Matrix<F>)>, ActionError> {
        let rel = self.relation_failures();
        if !rel.is_empty() {
            return Err(ActionError::Relations(rel));
        }
        let gens = [
            (PERM_TAU1, &self.tau1),
            (PERM_TAU2, &self.tau2),
            (PERM_PHI, &self.phi),
            (PERM_TAU, &self.tau),
        ];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        let mut elems: Vec<(Perm, Matrix<F>)> = vec![(ID, Matrix::identity(self.dim()))];
        index.insert(ID, 0);
        let mut i = 0;
        while i < elems.len() {
            for (gp, gm) in &gens {
                let p = compose(gp, &elems[i].0);
                match index.get(&p) {
                    Some(&k) => {
                        if elems[k].1 != gm.mul(&elems[i].1) {
                            return Err(ActionError::Relations(vec![
                                "not a homomorphism from S4".into()
                            ]));
                        }
                    }
                    None => {
                        let m = gm.mul(&elems[i].1);
                        index.insert(p, elems.len());
                        elems.push((p, m));
                    }
                }
            }
            i += 1;
        }
        debug_assert_eq!(elems.len(), 24);
        Ok(elems)
    }

    /// The S₃ = ⟨φ, τ⟩ part.
    pub fn s3(&self) -> S3Action<F> {
        S3Action {
            phi: self.phi.clone(),
            tau: self.tau.clone(),
        }
    }

    pub fn map_scalars<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> S4Action<G> {
        S4Action {
            tau1: self.tau1.map(f),
            tau2: self.tau2.map(f),
            phi: self.phi.map(f),
            tau: self.tau.map(f),
        }
    }

    /// Restriction to an invariant span, in the span's basis.
    pub fn restrict(&self, span: &Span<F>) -> Result<S4Action<F>, ActionError> {
        let r = |name: &str, m: &Matrix<F>| {
            restrict(m, span).map_err(|_| ActionError::NotInvariant(name.into()))
        };
        Ok(S4Action {
            tau1: r("tau1", &self.tau1)?,
            tau2: r("tau2", &self.tau2)?,
            phi: r("phi", &self.phi)?,
            tau: r("tau", &self.tau)?,
        })
    }
}

impl<F: Field> S3Action<F> {
    pub fn restrict(&self, span: &Span<F>) -> Result<S3Action<F>, ActionError> {
        let r = |name: &str, m: &Matrix<F>| {
            restrict(m, span).map_err(|_| ActionError::NotInvariant(name.into()))
        };
        Ok(S3Action {
            phi: r("phi", &self.phi)?,
            tau: r("tau", &self.tau)?,
        })
    }
}

/// Verifies the group relations and that every generator is an automorphism of `alg`.
pub fn check_action<F: Field>(
    alg: &AlgebraSpec<F>,
    act: &GroupAction<F>,
) -> Result<ActionReport, ActionError> {
    let n = alg.dim;
    let (relations, gens, order) = match act {
        GroupAction::S3(a) => (a.relation_failures(), a.generators(), 6),
        GroupAction::S4(a) => (a.relation_failures(), a.generators(), 24),
    };
    check_shape(n, &gens.iter().map(|(_, m)| *m).collect::<Vec<_>>())?;
    let mut report = ActionReport {
        relation_failures: relations,
        group_order: order,
        ..Default::default()
    };
    for (name, g) in &gens {
        report
            .automorphism_failures
            .extend(automorphism_failures(alg, name, g));
    }
    if report.relation_failures.is_empty() {
        let mats: Vec<Matrix<F>> = match act {
            GroupAction::S3(a) => a.elements().into_iter().map(|(_, m)| m).collect(),
            GroupAction::S4(a) => a.elements()?.into_iter().map(|(_, m)| m).collect(),
        };
        let mut distinct: Vec<&Matrix<F>> = Vec::new();
        for m in &mats {
            if !distinct.contains(&m) {
                distinct.push(m);
            }
        }
        report.distinct_elements = distinct.len();
    }
    Ok(report)
}

/// Joint eigenspaces of (τ₁, τ₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinGrading<F> {
    /// (+,+)
    pub t: Vec<Vec<F>>,
    /// (+,−)
    pub g0: Vec<Vec<F>>,
    /// (−,+)
    pub g1: Vec<Vec<F>>,
    /// (−,−)
    pub g2: Vec<Vec<F>>,
}

impl<F: Field> KleinGrading<F> {
    pub fn dims(&self) -> [usize; 4] {
        [self.t.len(), self.g0.len(), self.g1.len(), self.g2.len()]
    }
}

pub fn klein_grading<F: Field>(act: &S4Action<F>) -> Result<KleinGrading<F>, ActionError> {
    let rel = act.relation_failures();
    if !rel.is_empty() {
        return Err(ActionError::Relations(rel));
    }
    let n = act.dim();
    let id = Matrix::identity(n);
    let quarter = F::from_frac(1, 4);
    let proj = |s1: i64, s2: i64| {
        let a = id.add(&act.tau1.scale(&F::from_i64(s1)));
        let b = id.add(&act.tau2.scale(&F::from_i64(s2)));
        a.mul(&b).scale(&quarter).column_space()
    };
    let g = KleinGrading {
        t: proj(1, 1),
        g0: proj(1, -1),
        g1: proj(-1, 1),
        g2: proj(-1, -1),
    };
    if g.dims().iter().sum::<usize>() != n {
        return Err(ActionError::Inconsistent(
            "Klein components do not span".into(),
        ));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Group {
    S3,
    S4,
}

/// Multiplicities and component bases of an isotypic decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicReport<F> {
    pub group: Group,
    pub multiplicities: BTreeMap<String, usize>,
    /// Basis of each isotypic block, in ambient coordinates.
    pub components: BTreeMap<String, Vec<Vec<F>>>,
}

impl<F: Field> IsotypicReport<F> {
    pub fn multiplicity(&self, name: &str) -> usize {
        self.multiplicities.get(name).copied().unwrap_or(0)
    }

    /// `(m_U, m_U', m_W)`
    pub fn s3_triple(&self) -> (usize, usize, usize) {
        (
            self.multiplicity("U"),
            self.multiplicity("U'"),
            self.multiplicity("W"),
        )
    }

    pub fn total_dim(&self) -> usize {
        let deg = |n: &str| match n {
            "U" | "U'" => 1,
            "W" => 2,
            _ => 3,
        };
        self.multiplicities.iter().map(|(n, m)| deg(n) * m).sum()
    }
}

fn check_invariant<F: Field>(
    name: &str,
    comp: &[Vec<F>],
    gens: &[(&'static str, &Matrix<F>)],
) -> Result<(), ActionError> {
    if comp.is_empty() {
        return Ok(());
    }
    let span = Span::from_vectors(comp[0].len(), comp.to_vec());
    for (g, m) in gens {
        for v in comp {
            if !span.contains(&m.apply(v)) {
                return Err(ActionError::NotInvariant(format!(
                    "{name} component under {g}"
                )));
            }
        }
    }
    Ok(())
}

/// S₃ decomposition of an invariant subspace via the idempotents of the group algebra.
pub fn isotypic_s3<F: Field>(
    space: &[Vec<F>],
    act: &S3Action<F>,
) -> Result<IsotypicReport<F>, ActionError> {
    let rel = act.relation_failures();
    if !rel.is_empty() {
        return Err(ActionError::Relations(rel));
    }
    let n = act.dim();
    let span = Span::from_vectors(n, space.to_vec());
    let local = act.restrict(&span)?;
    let d = span.len();
    let sixth = F::from_frac(1, 6);
    let mut eu = Matrix::zeros(d, d);
    let mut eup = Matrix::zeros(d, d);
    for (sgn, g) in local.elements() {
        eu = eu.add(&g);
        eup = if sgn > 0 { eup.add(&g) } else { eup.sub(&g) };
    }
    let eu = eu.scale(&sixth);
    let eup = eup.scale(&sixth);
    let ew = Matrix::identity(d).sub(&eu).sub(&eup);
    if eu.mul(&eu) != eu || eup.mul(&eup) != eup || !eu.mul(&eup).is_zero() {
        return Err(ActionError::Inconsistent(
            "idempotent identities fail".into(),
        ));
    }
    let rank_w = ew.rank();
    if rank_w % 2 != 0 {
        return Err(ActionError::NonIntegerMultiplicity {
            irrep: "W".into(),
            value: format!("{rank_w}/2"),
        });
    }
    let lift = |m: &Matrix<F>| {
        m.column_space()
            .iter()
            .map(|c| span.combine(c))
            .collect::<Vec<_>>()
    };
    let mut report = IsotypicReport {
        group: Group::S3,
        multiplicities: BTreeMap::new(),
        components: BTreeMap::new(),
    };
    for (name, e) in [("U", &eu), ("U'", &eup), ("W", &ew)] {
        let comp = lift(e);
        check_invariant(name, &comp, &act.generators())?;
        let mult = if name == "W" {
            comp.len() / 2
        } else {
            comp.len()
        };
        report.multiplicities.insert(name.into(), mult);
        report.components.insert(name.into(), comp);
    }
    if report.total_dim() != d {
        return Err(ActionError::Inconsistent("dimension bookkeeping".into()));
    }
    Ok(report)
}

/// S₄ decomposition of an invariant subspace by characters, cross-checked against
/// the ranks of the central idempotents.
pub fn isotypic_s4<F: Field>(
    space: &[Vec<F>],
    act: &S4Action<F>,
) -> Result<IsotypicReport<F>, ActionError> {
    s4_table_self_test()?;
    let n = act.dim();
    let span = Span::from_vectors(n, space.to_vec());
    let local = act.restrict(&span)?;
    let d = span.len();
    let elems = local.elements()?;
    let mut report = IsotypicReport {
        group: Group::S4,
        multiplicities: BTreeMap::new(),
        components: BTreeMap::new(),
    };
    for (name, deg, chi) in S4_CHARACTERS {
        let mut acc = F::zero();
        let mut central = Matrix::zeros(d, d);
        for (p, g) in &elems {
            let c = F::from_i64(chi[s4_class(p)]);
            acc.add_mul(&c, &g.trace());
            central = central.add(&g.scale(&c));
        }
        let m = acc.mul_ref(&F::from_frac(1, 24));
        let value = m.to_rational();
        let mult = match &value {
            Some(r) if r.is_integer() && *r >= rat_int(0) => {
                r.to_integer().try_into().unwrap_or(usize::MAX)
            }
            _ => {
                return Err(ActionError::NonIntegerMultiplicity {
                    irrep: name.into(),
                    value: m.to_string(),
                });
            }
        };
        let central = central.scale(&F::from_frac(deg, 24));
        let comp: Vec<Vec<F>> = central
            .column_space()
            .iter()
            .map(|c| span.combine(c))
            .collect();
        if comp.len() != mult * deg as usize {
            return Err(ActionError::Inconsistent(format!(
                "{name}: character gives multiplicity {mult}, central idempotent rank {}",
                comp.len()
            )));
        }
        check_invariant(name, &comp, &act.generators())?;
        report.multiplicities.insert(name.into(), mult);
        report.components.insert(name.into(), comp);
    }
    if report.total_dim() != d {
        return Err(ActionError::Inconsistent("dimension bookkeeping".into()));
    }
    Ok(report)
}

/// Permutation matrix of `p` on ℚ⁴ (`e_i ↦ e_{p(i)}`).
pub fn perm_matrix<F: Field>(p: &Perm) -> Matrix<F> {
    let mut m = Matrix::zeros(4, 4);
    for i in 0..4 {
        m.set(p[i] as usize, i, F::one());
    }
    m
}

/// The permutation action of S₄ on ℚ⁴.
pub fn permutation_action<F: Field>() -> S4Action<F> {
    S4Action {
        tau1: perm_matrix(&PERM_TAU1),
        tau2: perm_matrix(&PERM_TAU2),
        phi: perm_matrix(&PERM_PHI),
        tau: perm_matrix(&PERM_TAU),
    }
}

/// The standard module V = {x ∈ ℚ⁴ : Σ x_i = 0} as a basis of ℚ⁴.
pub fn standard_module_basis<F: Field>() -> Vec<Vec<F>> {
    (0..3)
        .map(|i| {
            let mut v = crate::linalg::zeros(4);
            v[i] = F::one();
            v[3] = F::from_i64(-1);
            v
        })
        .collect()
}

pub fn is_zero_matrix<F: Field>(m: &Matrix<F>) -> bool {
    is_zero_vec(&m.data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{r, sl2};
    use crate::scalar::Rational;

    /// Regular representation of S₃ on ℚ⁶, basis indexed by the six elements.
    fn regular_s3() -> S3Action<Rational> {
        let perms: Vec<[u8; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let idx = |p: [u8; 3]| perms.iter().position(|q| *q == p).unwrap();
        let comp = |a: [u8; 3], b: [u8; 3]| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]];
        let left = |g: [u8; 3]| {
            let mut m = Matrix::zeros(6, 6);
            for (j, h) in perms.iter().enumerate() {
                m.set(idx(comp(g, *h)), j, r(1));
            }
            m
        };
        S3Action {
            phi: left([1, 2, 0]),
            tau: left([1, 0, 2]),
        }
    }

    #[test]
    fn character_table_is_orthogonal() {
        assert!(s4_table_self_test().is_ok());
    }

    #[test]
    fn regular_representation() {
        let act = regular_s3();
        assert!(act.relation_failures().is_empty());
        let space: Vec<Vec<Rational>> = (0..6).map(|i| crate::linalg::unit(6, i)).collect();
        let rep = isotypic_s3(&space, &act).unwrap();
        assert_eq!(rep.s3_triple(), (1, 1, 2));
        assert_eq!(rep.total_dim(), 6);
    }

    #[test]
    fn standard_module_is_v() {
        let act = permutation_action::<Rational>();
        let rep = isotypic_s4(&standard_module_basis(), &act).unwrap();
        assert_eq!(rep.multiplicity("V"), 1);
        assert_eq!(rep.total_dim(), 3);
        let all: Vec<Vec<Rational>> = (0..4).map(|i| crate::linalg::unit(4, i)).collect();
        let rep = isotypic_s4(&all, &act).unwrap();
        assert_eq!((rep.multiplicity("U"), rep.multiplicity("V")), (1, 1));
    }

    #[test]
    fn sign_twist_is_v_prime() {
        let a = permutation_action::<Rational>();
        let twisted = S4Action {
            tau1: a.tau1.clone(),
            tau2: a.tau2.clone(),
            phi: a.phi.clone(),
            tau: a.tau.neg(),
        };
        let rep = isotypic_s4(&standard_module_basis(), &twisted).unwrap();
        assert_eq!(rep.multiplicity("V'"), 1);
    }

    #[test]
    fn identity_action_is_valid() {
        let alg = sl2();
        let rep = check_action(&alg, &GroupAction::S3(S3Action::identity(3))).unwrap();
        assert!(rep.ok());
        assert!(!rep.faithful());
        let rep = check_action(&alg, &GroupAction::S4(S4Action::identity(3))).unwrap();
        assert!(rep.ok());
        let g = klein_grading(&S4Action::<Rational>::identity(3)).unwrap();
        assert_eq!(g.dims(), [3, 0, 0, 0]);
    }

    #[test]
    fn scaling_is_not_an_automorphism() {
        let alg = sl2();
        let bad = S3Action {
            phi: Matrix::scalar(3, r(2)),
            tau: Matrix::identity(3),
        };
        let rep = check_action(&alg, &GroupAction::S3(bad)).unwrap();
        assert!(!rep.ok());
        assert!(!rep.automorphism_failures.is_empty());
        assert!(rep.relation_failures.contains(&"phi^3 = 1".to_string()));
    }

    #[test]
    fn permutation_group_is_s4() {
        let act = permutation_action::<Rational>();
        let elems = act.elements().unwrap();
        assert_eq!(elems.len(), 24);
        let mut sizes = [0i64; 5];
        for (p, m) in &elems {
            sizes[s4_class(p)] += 1;
            assert_eq!(*m, perm_matrix(p));
        }
        assert_eq!(sizes, S4_CLASS_SIZES);
        let g = klein_grading(&act).unwrap();
        assert_eq!(g.dims(), [1, 1, 1, 1]);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let alg = sl2();
        let act = GroupAction::S3(S3Action::<Rational>::identity(2));
        assert!(matches!(
            check_action(&alg, &act),
            Err(ActionError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_invariant_space_rejected() {
        let act = permutation_action::<Rational>();
        let line = vec![crate::linalg::unit(4, 0)];
        assert!(matches!(
            isotypic_s4(&line, &act),
            Err(ActionError::NotInvariant(_))
        ));
    }
}
