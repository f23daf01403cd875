//! The Tetrahedron algebra realized as `sl₂ ⊗ 𝒜` on the 𝒜-basis `u₀, u₁, u₂`, with its
//! S₄ action and bounded-degree checks of its decomposition into irreducible modules.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::{Matrix, Span};
use crate::loopring::{in_s, LoopElem, LoopError, PfKey, Poly, RingAuto};
use crate::scalar::{rat_int, Rational};
use crate::symaction::{
    compose, isotypic_s4, ActionError, Perm, S4Action, PERM_PHI, PERM_TAU, PERM_TAU1, PERM_TAU2,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TetraError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("cannot parse element `{0}`")]
    Parse(String),
    #[error("span is not invariant: {0}")]
    NotInvariant(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// `u₀c[0] + u₁c[1] + u₂c[2]`
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TetraElem {
    pub c: [LoopElem; 3],
}

impl TetraElem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `uᵢ · a`
    pub fn basis(i: usize, a: LoopElem) -> Self {
        let mut x = Self::zero();
        x.c[i % 3] = a;
        x
    }

    pub fn u(i: usize) -> Self {
        Self::basis(i, LoopElem::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(LoopElem::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        TetraElem {
            c: [0, 1, 2].map(|i| self.c[i].add(&other.c[i])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TetraElem {
            c: [0, 1, 2].map(|i| self.c[i].sub(&other.c[i])),
        }
    }

    pub fn neg(&self) -> Self {
        TetraElem {
            c: [0, 1, 2].map(|i| self.c[i].neg()),
        }
    }

    /// `x · a` for `a ∈ 𝒜`.
    pub fn mul_ring(&self, a: &LoopElem) -> Self {
        TetraElem {
            c: [0, 1, 2].map(|i| self.c[i].mul(a)),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        TetraElem {
            c: [0, 1, 2].map(|i| self.c[i].scale(q)),
        }
    }

    /// Coordinates over ℚ in the partial-fraction basis of each component.
    pub fn coords(&self) -> BTreeMap<(usize, PfKey), Rational> {
        let mut out = BTreeMap::new();
        for (i, c) in self.c.iter().enumerate() {
            for (k, v) in c.partial_fractions() {
                out.insert((i, k), v);
            }
        }
        out
    }
}

impl fmt::Display for TetraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("u{i}*({c})"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FromStr for TetraElem {
    type Err = TetraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TetraError::Parse(s.to_string());
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = TetraElem::zero();
        if chars == ['0'] {
            return Ok(out);
        }
        let mut pos = 0;
        while pos < chars.len() {
            if pos > 0 {
                if chars[pos] != '+' {
                    return Err(err());
                }
                pos += 1;
            }
            if chars.get(pos) != Some(&'u')
                || chars.get(pos + 2) != Some(&'*')
                || chars.get(pos + 3) != Some(&'(')
            {
                return Err(err());
            }
            let i = chars[pos + 1]
                .to_digit(10)
                .filter(|d| *d < 3)
                .ok_or_else(err)? as usize;
            let start = pos + 4;
            let mut depth = 1;
            let mut end = start;
            while depth > 0 {
                match chars.get(end) {
                    Some('(') => depth += 1,
                    Some(')') => depth -= 1,
                    Some(_) => {}
                    None => return Err(err()),
                }
                end += 1;
            }
            let inner: String = chars[start..end - 1].iter().collect();
            out.c[i] = out.c[i].add(&inner.parse::<LoopElem>()?);
            pos = end;
        }
        Ok(out)
    }
}

impl Serialize for TetraElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `[u₁,u₂] = −u₀t′`, `[u₂,u₀] = −u₁t″`, `[u₀,u₁] = −u₂t`: the coefficient landing on `uₘ`.
fn structure_coeff(m: usize) -> LoopElem {
    match m {
        0 => LoopElem::t_prime(),
        1 => LoopElem::t_double_prime(),
        _ => LoopElem::t(),
    }
}

/// 𝒜-bilinear bracket.
pub fn tetra_bracket(x: &TetraElem, y: &TetraElem) -> TetraElem {
    let mut out = TetraElem::zero();
    for m in 0..3 {
        let (p, q) = ((m + 1) % 3, (m + 2) % 3);
        let minor = x.c[p].mul(&y.c[q]).sub(&x.c[q].mul(&y.c[p]));
        out.c[m] = minor.mul(&structure_coeff(m)).neg();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Gen {
    Tau1,
    Tau2,
    Phi,
    Tau,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::Tau1, Gen::Tau2, Gen::Phi, Gen::Tau];

    pub fn perm(self) -> Perm {
        match self {
            Gen::Tau1 => PERM_TAU1,
            Gen::Tau2 => PERM_TAU2,
            Gen::Phi => PERM_PHI,
            Gen::Tau => PERM_TAU,
        }
    }
}

/// The four generating automorphisms: `τ₁`, `τ₂` are 𝒜-linear, `φ` and `τ` are semilinear
/// over `φ_𝒜` and `τ_𝒜`.
#[derive(Clone, Debug)]
pub struct TetraAction {
    phi_ring: RingAuto,
    tau_ring: RingAuto,
}

pub fn tetra_s4() -> TetraAction {
    TetraAction {
        phi_ring: RingAuto::phi(),
        tau_ring: RingAuto::tau(),
    }
}

impl TetraAction {
    pub fn phi_ring(&self) -> &RingAuto {
        &self.phi_ring
    }

    pub fn tau_ring(&self) -> &RingAuto {
        &self.tau_ring
    }

    pub fn apply(&self, g: Gen, x: &TetraElem) -> TetraElem {
        let [a, b, c] = &x.c;
        match g {
            Gen::Tau1 => TetraElem {
                c: [a.clone(), b.neg(), c.neg()],
            },
            Gen::Tau2 => TetraElem {
                c: [a.neg(), b.clone(), c.neg()],
            },
            Gen::Phi => {
                let p = |y: &LoopElem| self.phi_ring.apply(y);
                TetraElem {
                    c: [p(c), p(a), p(b)],
                }
            }
            Gen::Tau => {
                let t = |y: &LoopElem| self.tau_ring.apply(y);
                TetraElem {
                    c: [
                        LoopElem::t_prime().mul(&t(a)),
                        LoopElem::t_double_prime().mul(&t(c)),
                        LoopElem::t().mul(&t(b)),
                    ],
                }
            }
        }
    }

    /// `g₁(g₂(⋯gₖ(x)))` for the word `[g₁, …, gₖ]`.
    pub fn apply_word(&self, word: &[Gen], x: &TetraElem) -> TetraElem {
        word.iter()
            .rev()
            .fold(x.clone(), |acc, g| self.apply(*g, &acc))
    }
}

pub fn word_perm(word: &[Gen]) -> Perm {
    word.iter()
        .fold([0, 1, 2, 3], |acc, g| compose(&acc, &g.perm()))
}

/// One shortest word for each of the 24 elements.
pub fn group_words() -> BTreeMap<Perm, Vec<Gen>> {
    let mut out = BTreeMap::new();
    out.insert([0, 1, 2, 3], Vec::new());
    let mut queue = VecDeque::from([Vec::<Gen>::new()]);
    while let Some(w) = queue.pop_front() {
        for g in Gen::ALL {
            let mut next = vec![g];
            next.extend(w.iter().copied());
            let p = word_perm(&next);
            if let std::collections::btree_map::Entry::Vacant(e) = out.entry(p) {
                e.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// `uᵢ · tᵃ(1−t)ᵇ` with `|a|, |b| ≤ bound`.
pub fn sample_elements(bound: i64) -> Vec<TetraElem> {
    let mut out = Vec::new();
    for i in 0..3 {
        for a in -bound..=bound {
            for b in -bound..=bound {
                out.push(TetraElem::basis(
                    i,
                    LoopElem::monomial(Rational::one(), a, b),
                ));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn relation_pairs() -> Vec<(Vec<Gen>, Vec<Gen>)> {
    use Gen::*;
    let mut rel = vec![
        (vec![Phi, Phi, Phi], vec![]),
        (vec![Tau, Tau], vec![]),
        (vec![Tau, Phi, Tau, Phi], vec![]),
        (vec![Tau1, Tau1], vec![]),
        (vec![Tau2, Tau2], vec![]),
        (vec![Tau1, Tau2], vec![Tau2, Tau1]),
    ];
    let klein = [vec![], vec![Tau1], vec![Tau2], vec![Tau1, Tau2]];
    for g in [Phi, Tau] {
        for k in [Tau1, Tau2] {
            let lhs = vec![g, k];
            let target = word_perm(&lhs);
            let mut rhs = klein
                .iter()
                .find(|x| compose(&word_perm(x), &g.perm()) == target)
                .expect("V4 is normal")
                .clone();
            rhs.push(g);
            rel.push((lhs, rhs));
        }
    }
    rel
}

/// Group relations of S₄ on `samples`, with the relations read off the permutations.
pub fn check_relations(act: &TetraAction, samples: &[TetraElem]) -> RelationReport {
    let mut rep = RelationReport::default();
    for (lhs, rhs) in relation_pairs() {
        if word_perm(&lhs) != word_perm(&rhs) {
            rep.failures
                .push(format!("{lhs:?} and {rhs:?} differ as permutations"));
            continue;
        }
        for x in samples {
            rep.checked += 1;
            if act.apply_word(&lhs, x) != act.apply_word(&rhs, x) {
                rep.failures.push(format!("{lhs:?} = {rhs:?} fails on {x}"));
            }
        }
    }
    rep
}

/// `g[x,y] = [gx,gy]` for every generator and every pair from `samples`.
pub fn check_homomorphisms(act: &TetraAction, samples: &[TetraElem]) -> RelationReport {
    let mut rep = RelationReport::default();
    for g in Gen::ALL {
        for x in samples {
            for y in samples {
                rep.checked += 1;
                let lhs = act.apply(g, &tetra_bracket(x, y));
                let rhs = tetra_bracket(&act.apply(g, x), &act.apply(g, y));
                if lhs != rhs {
                    rep.failures.push(format!("{g:?} on [{x}, {y}]"));
                }
            }
        }
    }
    rep
}

pub fn jacobi(x: &TetraElem, y: &TetraElem, z: &TetraElem) -> TetraElem {
    tetra_bracket(x, &tetra_bracket(y, z))
        .add(&tetra_bracket(y, &tetra_bracket(z, x)))
        .add(&tetra_bracket(z, &tetra_bracket(x, y)))
}

/// Product of the coordinate algebra on `g₀ = u₀𝒜`: `ι₀(\overline{a·b}) = [φ(u₀a), φ²(u₀b)]`.
pub fn coordinate_product(act: &TetraAction, a: &LoopElem, b: &LoopElem) -> LoopElem {
    let i0 = |x: &LoopElem| TetraElem::basis(0, x.clone());
    let i1 = act.apply(Gen::Phi, &i0(a));
    let i2 = act.apply_word(&[Gen::Phi, Gen::Phi], &i0(b));
    coordinate_bar(act, &tetra_bracket(&i1, &i2).c[0])
}

/// `τ(u₀a) = −u₀ā`
pub fn coordinate_bar(act: &TetraAction, a: &LoopElem) -> LoopElem {
    act.apply(Gen::Tau, &TetraElem::basis(0, a.clone())).c[0].neg()
}

/// Row echelon form over ℚ for sparse vectors indexed by ordered keys.
#[derive(Clone, Debug)]
pub struct KeyedEchelon<K> {
    rows: BTreeMap<K, BTreeMap<K, Rational>>,
}

impl<K: Ord + Clone> Default for KeyedEchelon<K> {
    fn default() -> Self {
        KeyedEchelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> KeyedEchelon<K> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, mut v: BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut floor: Option<K> = None;
        loop {
            let next = match &floor {
                None => v.keys().next().cloned(),
                Some(f) => v
                    .range((
                        std::ops::Bound::Excluded(f.clone()),
                        std::ops::Bound::Unbounded,
                    ))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { return v };
            if let Some(row) = self.rows.get(&k) {
                let c = v[&k].clone() / &row[&k];
                for (rk, rv) in row {
                    let e = v.entry(rk.clone()).or_insert_with(Rational::zero);
                    *e -= &c * rv;
                    if e.is_zero() {
                        v.remove(rk);
                    }
                }
            }
            floor = Some(k);
        }
    }

    pub fn contains(&self, v: BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; false when it was already in the span.
    pub fn insert(&mut self, v: BTreeMap<K, Rational>) -> bool {
        let r = self.reduce(v);
        match r.keys().next().cloned() {
            None => false,
            Some(k) => {
                self.rows.insert(k, r);
                true
            }
        }
    }
}

/// Dense coordinates of several sparse vectors over the union of their keys.
fn dense<K: Ord + Clone>(vs: &[BTreeMap<K, Rational>]) -> Vec<Vec<Rational>> {
    let keys: Vec<K> = vs
        .iter()
        .flat_map(|v| v.keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    vs.iter()
        .map(|v| {
            keys.iter()
                .map(|k| v.get(k).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: TetraElem,
    pub rhs: TetraElem,
}

impl IdentityCheck {
    pub fn ok(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn identity(name: &str, lhs: TetraElem, rhs: TetraElem) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        lhs,
        rhs,
    }
}

/// The three basis brackets and the action of the generators on the `uᵢ`.
pub fn uiuj_check() -> Vec<IdentityCheck> {
    let act = tetra_s4();
    let u = TetraElem::u;
    let (t, tp, tpp) = (
        LoopElem::t(),
        LoopElem::t_prime(),
        LoopElem::t_double_prime(),
    );
    vec![
        identity(
            "[u0,u1] = -u2 t",
            tetra_bracket(&u(0), &u(1)),
            u(2).mul_ring(&t).neg(),
        ),
        identity(
            "[u1,u2] = -u0 t'",
            tetra_bracket(&u(1), &u(2)),
            u(0).mul_ring(&tp).neg(),
        ),
        identity(
            "[u2,u0] = -u1 t''",
            tetra_bracket(&u(2), &u(0)),
            u(1).mul_ring(&tpp).neg(),
        ),
        identity(
            "tau(u1) = u2 t",
            act.apply(Gen::Tau, &u(1)),
            u(2).mul_ring(&t),
        ),
        identity(
            "tau(u2) = u1 t''",
            act.apply(Gen::Tau, &u(2)),
            u(1).mul_ring(&tpp),
        ),
        identity(
            "tau(u0) = u0 t'",
            act.apply(Gen::Tau, &u(0)),
            u(0).mul_ring(&tp),
        ),
        identity(
            "tau(u1) = -[u0,u1]",
            act.apply(Gen::Tau, &u(1)),
            tetra_bracket(&u(0), &u(1)).neg(),
        ),
        identity("phi(u0) = u1", act.apply(Gen::Phi, &u(0)), u(1)),
    ]
}

/// `v₀ = u₀t⁻¹`, `v₁ = u₁(t′)⁻¹`, `v₂ = u₂(t″)⁻¹`.
pub fn v_generators() -> [TetraElem; 3] {
    let inv = |x: LoopElem| x.inverse().expect("unit");
    [
        TetraElem::basis(0, inv(LoopElem::t())),
        TetraElem::basis(1, inv(LoopElem::t_prime())),
        TetraElem::basis(2, inv(LoopElem::t_double_prime())),
    ]
}

fn one_minus(x: &LoopElem) -> LoopElem {
    LoopElem::one().sub(x)
}

pub fn v_generators_check() -> Vec<IdentityCheck> {
    let [v0, v1, v2] = v_generators();
    let (t, tp, tpp) = (
        LoopElem::t(),
        LoopElem::t_prime(),
        LoopElem::t_double_prime(),
    );
    let s = |x: &LoopElem| x.mul(&one_minus(x));
    let sp_inv = s(&tp).inverse().expect("unit");
    vec![
        identity(
            "[v1,v2] = -v0 t(1-t)",
            tetra_bracket(&v1, &v2),
            v0.mul_ring(&s(&t)).neg(),
        ),
        identity(
            "[v2,v0] = -v1 t'(1-t')",
            tetra_bracket(&v2, &v0),
            v1.mul_ring(&s(&tp)).neg(),
        ),
        identity(
            "[v0,v1] = -v2 t''(1-t'')",
            tetra_bracket(&v0, &v1),
            v2.mul_ring(&s(&tpp)).neg(),
        ),
        identity(
            "[v1,[v1,v2]] = -v2/(t'(1-t'))",
            tetra_bracket(&v1, &tetra_bracket(&v1, &v2)),
            v2.mul_ring(&sp_inv).neg(),
        ),
    ]
}

/// A three-dimensional span `{uᵢ aᵢ}` with its S₄ matrices and character decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleCheck {
    pub s: i64,
    pub expected: &'static str,
    pub basis: Vec<TetraElem>,
    /// Invariance verified under all 24 group elements.
    pub invariant: bool,
    pub multiplicities: BTreeMap<String, usize>,
}

impl ModuleCheck {
    pub fn ok(&self) -> bool {
        self.invariant
            && self.multiplicities.get(self.expected) == Some(&1)
            && self.multiplicities.values().sum::<usize>() == 1
    }
}

/// Coordinates of `x` in the basis `{uᵢ aᵢ}`, if it lies in the span.
fn diagonal_coords(basis: &[TetraElem], x: &TetraElem) -> Option<Vec<Rational>> {
    (0..3).map(|i| x.c[i].ratio(&basis[i].c[i])).collect()
}

fn module_check(
    act: &TetraAction,
    s: i64,
    seed: LoopElem,
    expected: &'static str,
) -> Result<ModuleCheck, TetraError> {
    let phi = act.phi_ring();
    let basis: Vec<TetraElem> = vec![
        TetraElem::basis(0, seed.clone()),
        TetraElem::basis(1, phi.apply(&seed)),
        TetraElem::basis(2, phi.apply(&phi.apply(&seed))),
    ];
    let mut invariant = true;
    for word in group_words().values() {
        for b in &basis {
            invariant &= diagonal_coords(&basis, &act.apply_word(word, b)).is_some();
        }
    }
    let matrix = |g: Gen| -> Result<Matrix<Rational>, TetraError> {
        let cols: Option<Vec<Vec<Rational>>> = basis
            .iter()
            .map(|b| diagonal_coords(&basis, &act.apply(g, b)))
            .collect();
        cols.map(|c| Matrix::from_columns(3, &c))
            .ok_or_else(|| TetraError::NotInvariant(format!("{g:?}, s = {s}")))
    };
    let action = S4Action {
        tau1: matrix(Gen::Tau1)?,
        tau2: matrix(Gen::Tau2)?,
        phi: matrix(Gen::Phi)?,
        tau: matrix(Gen::Tau)?,
    };
    let space: Vec<Vec<Rational>> = (0..3).map(|i| crate::linalg::unit(3, i)).collect();
    let rep = isotypic_s4(&space, &action)?;
    let multiplicities = rep
        .multiplicities
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .collect();
    Ok(ModuleCheck {
        s,
        expected,
        basis,
        invariant,
        multiplicities,
    })
}

/// `2t − 1`
pub fn two_t_minus_one() -> LoopElem {
    LoopElem::poly(Poly::from_ints(&[-1, 2]))
}

/// `V′ₛ = ⟨u₀t⁻¹(t(1−t))ˢ, …⟩` and `Vₛ = ⟨u₀t⁻¹(2t−1)(t(1−t))ˢ, …⟩`, the other two basis
/// vectors obtained by `φ`.
pub fn vs_modules(s: i64) -> Result<(ModuleCheck, ModuleCheck), TetraError> {
    let act = tetra_s4();
    let seed = LoopElem::monomial(Rational::one(), s - 1, s);
    let v_prime = module_check(&act, s, seed.clone(), "V'")?;
    let v = module_check(&act, s, seed.mul(&two_t_minus_one()), "V")?;
    Ok((v_prime, v))
}

/// Bounded form of the decomposition of `sl₂ ⊗ 𝒜` into the `V′ₛ`, `Vₛ`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionWindow {
    pub bound: i64,
    /// `(V′ₛ ∪ Vₛ)` over `|s| ≤ bound` is linearly independent over ℚ.
    pub independent: bool,
    /// In each component the coefficients span `{p(t)/(t^(N+1)(1−t)^N) : deg p ≤ 4N+1}`,
    /// transported by `φ_𝒜`.
    pub spans_window: bool,
    pub window_dim: usize,
}

impl DecompositionWindow {
    pub fn ok(&self) -> bool {
        self.independent && self.spans_window
    }
}

pub fn decomposition_window(bound: i64) -> Result<DecompositionWindow, TetraError> {
    if bound < 0 {
        return Err(TetraError::Invalid("bound must be nonnegative".into()));
    }
    let act = tetra_s4();
    let mut all = KeyedEchelon::default();
    let mut independent = true;
    let mut per_comp: [KeyedEchelon<(usize, PfKey)>; 3] = Default::default();
    for s in -bound..=bound {
        let (vp, v) = vs_modules(s)?;
        for b in vp.basis.iter().chain(&v.basis) {
            independent &= all.insert(b.coords());
            let comp = b.c.iter().position(|c| !c.is_zero()).unwrap_or(0);
            per_comp[comp].insert(b.coords());
        }
    }
    let n = bound as u32;
    let window_dim = (4 * bound + 2) as usize;
    let mut spans_window = true;
    for (i, ech) in per_comp.iter().enumerate() {
        spans_window &= ech.len() == window_dim;
        for j in 0..window_dim {
            let mut a = LoopElem::new(Poly::monomial(j), n + 1, n);
            for _ in 0..i {
                a = act.phi_ring().apply(&a);
            }
            spans_window &= ech.contains(TetraElem::basis(i, a).coords());
        }
    }
    Ok(DecompositionWindow {
        bound,
        independent,
        spans_window,
        window_dim,
    })
}

/// The S₃-modules `Uₙ`, `U′ₙ`, `Wₙ` inside 𝒜 built from `(2t−1)ⁿ` and its `φ_𝒜`-images.
#[derive(Clone, Debug, Serialize)]
pub struct RingModuleCheck {
    pub n: u32,
    pub trivial: bool,
    pub alternating: bool,
    /// `Wₙ` is invariant with `tr φ = −1`, `tr τ = 0`.
    pub two_dimensional: bool,
}

impl RingModuleCheck {
    pub fn ok(&self) -> bool {
        self.trivial && self.alternating && self.two_dimensional
    }
}

pub fn ring_modules(n: u32) -> Result<RingModuleCheck, TetraError> {
    if n == 0 {
        return Err(TetraError::Invalid("n must be positive".into()));
    }
    let (phi, tau) = (RingAuto::phi(), RingAuto::tau());
    let orbit_sum = |e: u32| {
        let p = two_t_minus_one().pow(e as i64).expect("nonnegative power");
        p.add(&phi.apply(&p)).add(&phi.apply(&phi.apply(&p)))
    };
    let fixed = |x: &LoopElem, sign: i64| {
        phi.apply(x) == *x && tau.apply(x) == x.scale(&rat_int(sign)) && !x.is_zero()
    };
    let trivial = fixed(&orbit_sum(2 * (n - 1)), 1);
    let alternating = fixed(&orbit_sum(2 * n - 1), -1);

    let p = two_t_minus_one().pow(n as i64).expect("nonnegative power");
    let (p1, p2) = (phi.apply(&p), phi.apply(&phi.apply(&p)));
    let w = [p.sub(&p1), p1.sub(&p2)];
    let images = [
        phi.apply(&w[0]),
        phi.apply(&w[1]),
        tau.apply(&w[0]),
        tau.apply(&w[1]),
    ];
    let vecs: Vec<BTreeMap<PfKey, Rational>> = w
        .iter()
        .chain(images.iter())
        .map(LoopElem::partial_fractions)
        .collect();
    let d = dense(&vecs);
    let span = Span::from_vectors(d[0].len(), d[..2].to_vec());
    let coords: Option<Vec<Vec<Rational>>> = d[2..].iter().map(|v| span.coords(v)).collect();
    let two_dimensional = match coords {
        Some(c) if span.len() == 2 => {
            let trace_phi = &c[0][0] + &c[1][1];
            let trace_tau = &c[2][0] + &c[3][1];
            trace_phi == rat_int(-1) && trace_tau.is_zero()
        }
        _ => false,
    };
    Ok(RingModuleCheck {
        n,
        trivial,
        alternating,
        two_dimensional,
    })
}

/// Closure of `{v₀, v₁, v₂}` under brackets, depth by depth.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub depth: usize,
    /// Dimension of the span of brackets of length at most `k`, for `k = 1..=depth`.
    pub dims: Vec<usize>,
    /// Elements whose `vᵢ`-coefficient leaves `𝒮 = ℚ[t(1−t), t′(1−t′), t″(1−t″)]`.
    pub membership_failures: Vec<String>,
    pub elements: Vec<TetraElem>,
}

impl ClosureReport {
    pub fn ok(&self) -> bool {
        self.membership_failures.is_empty()
    }
}

/// Coefficients of `x` on `v₀, v₁, v₂`.
pub fn v_coefficients(x: &TetraElem) -> [LoopElem; 3] {
    let phi = RingAuto::phi();
    let t = LoopElem::t();
    let gens = [t.clone(), phi.apply(&t), phi.apply(&phi.apply(&t))];
    [0, 1, 2].map(|i| x.c[i].mul(&gens[i]))
}

pub fn v_closure(depth: usize) -> Result<ClosureReport, TetraError> {
    if depth < 1 {
        return Err(TetraError::Invalid("depth must be at least 1".into()));
    }
    let gens = v_generators();
    let mut ech = KeyedEchelon::default();
    let mut elements = Vec::new();
    let mut frontier = Vec::new();
    for g in &gens {
        if ech.insert(g.coords()) {
            frontier.push(g.clone());
            elements.push(g.clone());
        }
    }
    let mut dims = vec![ech.len()];
    for _ in 1..depth {
        let mut next = Vec::new();
        for g in &gens {
            for f in &frontier {
                let b = tetra_bracket(g, f);
                if ech.insert(b.coords()) {
                    next.push(b.clone());
                    elements.push(b);
                }
            }
        }
        dims.push(ech.len());
        frontier = next;
    }
    let mut membership_failures = Vec::new();
    for x in &elements {
        for (i, c) in v_coefficients(x).iter().enumerate() {
            if !in_s(c) {
                membership_failures.push(format!("v{i}-coefficient of {x}"));
            }
        }
    }
    Ok(ClosureReport {
        depth,
        dims,
        membership_failures,
        elements,
    })
}

/// Bounded evidence that `𝒮` has codimension one in `𝒜` with complement `2t − 1`.
#[derive(Clone, Debug, Serialize)]
pub struct CodimReport {
    pub degree: usize,
    /// `dim span{sᵏ, (2t−1)sᵏ : |k| ≤ degree}` with `s = t(1−t)`.
    pub window_dim: usize,
    /// Lower bound for `dim(𝒮 ∩ window)` from the monomials `tᵐ(1−t)ⁿ`, `m ≡ n mod 3`.
    pub s_slice_dim: usize,
    pub monomials_checked: usize,
    /// Every monomial used passes the `𝒮`-membership test.
    pub monomials_in_s: bool,
    pub complement_in_s: bool,
}

impl CodimReport {
    pub fn ok(&self) -> bool {
        self.monomials_in_s && !self.complement_in_s && self.s_slice_dim + 1 == self.window_dim
    }
}

/// `𝒮` is spanned by `±tᵐ(1−t)ⁿ` with `m ≡ n (mod 3)`, the monomials in `t(1−t)`,
/// `t′(1−t′) = −t⁻²(1−t)`, `t″(1−t″) = −t(1−t)⁻²`.
pub fn scodim(degree: usize) -> CodimReport {
    let n = degree as i64;
    let mut window = KeyedEchelon::default();
    let mut window_elems = Vec::new();
    for k in -n..=n {
        let sk = LoopElem::monomial(Rational::one(), k, k);
        window_elems.push(sk.clone());
        window_elems.push(sk.mul(&two_t_minus_one()));
    }
    for w in &window_elems {
        window.insert(w.partial_fractions());
    }
    let bound = n + 3;
    let mut box_span = KeyedEchelon::default();
    let mut sum = window.clone();
    let mut monomials_in_s = true;
    let mut monomials_checked = 0;
    for m in -bound..=bound {
        for k in -bound..=bound {
            if (m - k).rem_euclid(3) != 0 {
                continue;
            }
            let x = LoopElem::monomial(Rational::one(), m, k);
            monomials_checked += 1;
            monomials_in_s &= in_s(&x);
            let pf = x.partial_fractions();
            box_span.insert(pf.clone());
            sum.insert(pf);
        }
    }
    let s_slice_dim = box_span.len() + window.len() - sum.len();
    let complement_in_s =
        in_s(&two_t_minus_one()) || box_span.contains(two_t_minus_one().partial_fractions());
    CodimReport {
        degree,
        window_dim: window.len(),
        s_slice_dim,
        monomials_checked,
        monomials_in_s,
        complement_in_s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn mono(a: i64, b: i64) -> LoopElem {
        LoopElem::monomial(Rational::one(), a, b)
    }

    #[test]
    fn basis_brackets() {
        for c in uiuj_check() {
            assert!(c.ok(), "{}: {} vs {}", c.name, c.lhs, c.rhs);
        }
        let x = TetraElem::basis(0, LoopElem::t());
        let y = TetraElem::basis(1, LoopElem::t().inverse().unwrap());
        assert_eq!(
            tetra_bracket(&x, &y),
            TetraElem::basis(2, LoopElem::t().neg())
        );
        let u = TetraElem::u;
        assert!(jacobi(&u(0), &u(1), &u(2)).is_zero());
    }

    #[test]
    fn action_is_s4_by_automorphisms() {
        let act = tetra_s4();
        let samples = sample_elements(1);
        assert!(check_relations(&act, &samples).ok());
        assert!(check_homomorphisms(&act, &samples).ok());
        assert_eq!(group_words().len(), 24);
        let x = TetraElem::basis(0, LoopElem::t());
        assert_eq!(act.apply_word(&[Gen::Phi, Gen::Phi, Gen::Phi], &x), x);
    }

    #[test]
    fn klein_grading_has_no_fixed_part() {
        let act = tetra_s4();
        for x in sample_elements(1) {
            let both = x
                .add(&act.apply(Gen::Tau1, &x))
                .add(&act.apply(Gen::Tau2, &x))
                .add(&act.apply_word(&[Gen::Tau1, Gen::Tau2], &x));
            assert!(both.is_zero());
        }
    }

    #[test]
    fn coordinate_algebra() {
        let act = tetra_s4();
        let (phi, tau) = (RingAuto::phi(), RingAuto::tau());
        for (a, b) in [
            (mono(1, 0), mono(0, 1)),
            (mono(-2, 1), mono(3, -1)),
            (LoopElem::one(), mono(2, 2)),
        ] {
            let expected = tau
                .apply(&phi.apply(&a))
                .mul(&tau.apply(&phi.apply(&phi.apply(&b))));
            assert_eq!(coordinate_product(&act, &a, &b), expected);
            assert_eq!(
                coordinate_bar(&act, &a),
                LoopElem::t_prime().mul(&tau.apply(&a)).neg()
            );
        }
    }

    #[test]
    fn v_identities() {
        for c in v_generators_check() {
            assert!(c.ok(), "{}: {} vs {}", c.name, c.lhs, c.rhs);
        }
    }

    #[test]
    fn small_modules() {
        let (vp, v) = vs_modules(0).unwrap();
        assert!(vp.ok(), "{vp:?}");
        assert!(v.ok(), "{v:?}");
        assert_eq!(
            vp.basis[0],
            TetraElem::basis(0, LoopElem::t().inverse().unwrap())
        );
        assert_eq!(
            vp.basis[1],
            TetraElem::basis(1, LoopElem::t_prime().inverse().unwrap())
        );
        let act = tetra_s4();
        for (b, sign) in vp.basis.iter().zip([1, -1, -1]) {
            assert_eq!(act.apply(Gen::Tau1, b), b.scale(&rat_int(sign)));
        }
        for s in -3..=3 {
            let (vp, v) = vs_modules(s).unwrap();
            assert!(vp.ok() && v.ok(), "s = {s}");
        }
    }

    #[test]
    fn decomposition_in_a_window() {
        let w = decomposition_window(2).unwrap();
        assert!(w.ok(), "{w:?}");
        assert_eq!(w.window_dim, 10);
    }

    #[test]
    fn ring_decomposition() {
        for n in 1..=4 {
            assert!(ring_modules(n).unwrap().ok(), "n = {n}");
        }
    }

    #[test]
    fn closure_stays_in_s() {
        let r = v_closure(4).unwrap();
        assert!(r.ok(), "{:?}", r.membership_failures);
        assert_eq!(r.dims[0], 3);
        let [v0, _, _] = v_generators();
        let target = v0.mul_ring(&LoopElem::s());
        let mut ech = KeyedEchelon::default();
        for x in &r.elements[..r.dims[1]] {
            ech.insert(x.coords());
        }
        assert!(ech.contains(target.coords()));
    }

    #[test]
    fn codimension_one() {
        let r = scodim(4);
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.window_dim, 18);
        assert!(!in_s(&two_t_minus_one()));
        assert!(in_s(
            &two_t_minus_one().mul(&LoopElem::one().sub(&LoopElem::s()))
        ));
    }

    #[test]
    fn text_form() {
        let x = TetraElem {
            c: [
                mono(-1, 0),
                LoopElem::zero(),
                LoopElem::constant(rat(3, 2)).add(&LoopElem::t()),
            ],
        };
        let text = x.to_string();
        assert_eq!(text.parse::<TetraElem>().unwrap(), x, "{text}");
        assert_eq!("0".parse::<TetraElem>().unwrap(), TetraElem::zero());
        assert!("u3*(t)".parse::<TetraElem>().is_err());
        assert!("u0*(t".parse::<TetraElem>().is_err());
    }

    fn arb_tetra() -> impl Strategy<Value = TetraElem> {
        (0usize..3, -4i64..=4, -4i64..=4, -3i64..=3)
            .prop_map(|(i, a, b, c)| TetraElem::basis(i, LoopElem::monomial(rat_int(c), a, b)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn jacobi_holds(x in arb_tetra(), y in arb_tetra(), z in arb_tetra()) {
            prop_assert!(jacobi(&x, &y, &z).is_zero());
        }

        #[test]
        fn bracket_is_anticommutative(x in arb_tetra(), y in arb_tetra()) {
            prop_assert_eq!(tetra_bracket(&x, &y), tetra_bracket(&y, &x).neg());
        }

        #[test]
        fn generators_are_automorphisms(x in arb_tetra(), y in arb_tetra()) {
            let act = tetra_s4();
            for g in Gen::ALL {
                prop_assert_eq!(act.apply(g, &tetra_bracket(&x, &y)), tetra_bracket(&act.apply(g, &x), &act.apply(g, &y)));
            }
        }
    }
}
