//! Ready-made algebras, actions and coordinate structures, each rebuilt with its
//! expected facts checked on construction.

mod composition;
mod magic;
mod s3_examples;
mod s4_examples;

use std::collections::BTreeMap;

use serde::Serialize;

pub use composition::{
    check_hurwitz, check_symmetric_composition, hurwitz, model_w_constants, norm,
    octonions_trace_zero, para_hurwitz, polar, quadratic_k, restrict_algebra, sigma,
    split_octonions, t_triple, triality_tri, unit_element, w_omega_coords, CompositionReport,
    Triality, WConstants,
};
pub use magic::{
    k_action, k_omega, magic_square_extraction, magic_square_gm, magic_square_row2, MagicSquare,
};
pub use s3_examples::{
    conjugation_matrix, g2_action, g2_example, g2_gm_with, g2_lie, lift, matrix_lie_algebra,
    sl_example, sl_gm, so_example, so_jts, S3Example,
};
pub use s4_examples::{
    cube_example, graded_component, octonion_nlrta, octonion_s4, pauli_cube, pauli_sl2,
    same_operator_span, twisted_commutant, Cube,
};

use crate::algebra::AlgebraSpec;
use crate::coordinatize::{compute_lrt, lrt_isotypic, CoordError};
use crate::gmalcev::{check_gm_axioms, check_malcev, malcev_to_gm, GMAlgebra, GmError};
use crate::linalg::unit;
use crate::scalar::Scalar;
use crate::symaction::{isotypic_s3, klein_grading, ActionError, S3Action, S4Action};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown catalog entry: {0}")]
    Unknown(String),
    #[error("expected fact failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Gm(#[from] GmError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Gm,
    LieS3,
    LieS4,
    Jts,
    Composition,
    AlgebraWithInvolution,
}

#[derive(Clone, Debug)]
pub enum Payload {
    LieS3 {
        alg: AlgebraSpec<Scalar>,
        action: S3Action<Scalar>,
        gm: GMAlgebra<Scalar>,
    },
    LieS4 {
        alg: AlgebraSpec<Scalar>,
        action: S4Action<Scalar>,
    },
    Gm(GMAlgebra<Scalar>),
    Algebra(AlgebraSpec<Scalar>),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub param: Option<usize>,
    pub kind: Kind,
    pub payload: Payload,
    /// Facts recomputed on construction; construction fails if any differs.
    pub expected: BTreeMap<String, String>,
}

/// Name, parameter meaning and default, kind, description.
pub struct EntryInfo {
    pub name: &'static str,
    pub param: Option<(&'static str, usize)>,
    pub kind: Kind,
    pub about: &'static str,
}

pub const ENTRIES: &[EntryInfo] = &[
    EntryInfo {
        name: "g2",
        param: None,
        kind: Kind::LieS3,
        about: "E* + sl(E) + E, type G2",
    },
    EntryInfo {
        name: "g2-gm",
        param: None,
        kind: Kind::Gm,
        about: "xy = 2x*y, {x,y,z} = b(x,y)z - 3b(y,z)x on k^3",
    },
    EntryInfo {
        name: "so",
        param: Some(("n", 4)),
        kind: Kind::LieS3,
        about: "so(V), S3 permuting three basis vectors",
    },
    EntryInfo {
        name: "so-jts",
        param: Some(("n", 4)),
        kind: Kind::Jts,
        about: "Jordan triple on E read off so(V)",
    },
    EntryInfo {
        name: "sl",
        param: Some(("m", 2)),
        kind: Kind::LieS3,
        about: "gl(W + E) with dim E = m",
    },
    EntryInfo {
        name: "sl-gm",
        param: Some(("m", 2)),
        kind: Kind::Gm,
        about: "generalized Malcev algebra on ka + E + E*",
    },
    EntryInfo {
        name: "octonions",
        param: None,
        kind: Kind::AlgebraWithInvolution,
        about: "split octonions, Zorn model",
    },
    EntryInfo {
        name: "o0",
        param: None,
        kind: Kind::Gm,
        about: "trace-zero octonions with commutator, as a GM algebra",
    },
    EntryInfo {
        name: "hurwitz",
        param: Some(("d", 8)),
        kind: Kind::Composition,
        about: "unital Hurwitz algebra, d in 1,2,4,8",
    },
    EntryInfo {
        name: "para-hurwitz",
        param: Some(("d", 8)),
        kind: Kind::Composition,
        about: "x*y = conj(x)conj(y)",
    },
    EntryInfo {
        name: "magic-square",
        param: Some(("d", 4)),
        kind: Kind::LieS3,
        about: "g(K,S), dims 8, 16, 35, 78",
    },
    EntryInfo {
        name: "magic-square-gm",
        param: Some(("d", 4)),
        kind: Kind::Gm,
        about: "GM algebra on three copies of S",
    },
    EntryInfo {
        name: "cube",
        param: None,
        kind: Kind::LieS4,
        about: "sl2^3 with the Pauli grading",
    },
    EntryInfo {
        name: "octonion-s4",
        param: None,
        kind: Kind::LieS4,
        about: "Lie algebra rebuilt from the octonion NLRTA",
    },
];

fn full_space(n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| unit(n, i)).collect()
}

fn facts<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn s3_facts(
    ex: &S3Example,
    with_multiplicities: bool,
) -> Result<BTreeMap<String, String>, CatalogError> {
    let mut f = facts([
        ("dim", ex.alg.dim.to_string()),
        ("jacobi_violations", ex.alg.check_jacobi().len().to_string()),
        ("gm_axioms", check_gm_axioms(&ex.gm).ok().to_string()),
        ("gm_matches_table", ex.matches_expected().to_string()),
    ]);
    if with_multiplicities {
        let (u, up, w) = isotypic_s3(&full_space(ex.alg.dim), &ex.action)?.s3_triple();
        f.insert("s3_multiplicities".into(), format!("{u},{up},{w}"));
    }
    Ok(f)
}

fn check(
    name: &str,
    expected: &BTreeMap<String, String>,
    actual: &BTreeMap<String, String>,
) -> Result<(), CatalogError> {
    for (k, v) in expected {
        match actual.get(k) {
            Some(a) if a == v => {}
            other => {
                return Err(CatalogError::Failed(format!(
                    "{name}: {k} expected {v}, got {}",
                    other.map_or("nothing", |s| s.as_str())
                )))
            }
        }
    }
    Ok(())
}

fn lift_alg(a: &AlgebraSpec<crate::scalar::Rational>) -> AlgebraSpec<Scalar> {
    a.map_scalars(lift)
}

/// Builds a catalog entry and re-verifies its expected facts.
pub fn build_entry(name: &str, param: Option<usize>) -> Result<CatalogEntry, CatalogError> {
    let info = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
    let p = param.or(info.param.map(|(_, d)| d));
    let p_val = p.unwrap_or(0);
    let (payload, expected, actual) = match name {
        "g2" => {
            let ex = g2_example()?;
            let exp = facts([
                ("dim", "14".into()),
                ("jacobi_violations", "0".into()),
                ("gm_axioms", "true".into()),
                ("gm_matches_table", "true".into()),
                ("s3_multiplicities", "3,5,3".into()),
            ]);
            let act = s3_facts(&ex, true)?;
            (
                Payload::LieS3 {
                    alg: ex.alg,
                    action: ex.action,
                    gm: ex.gm,
                },
                exp,
                act,
            )
        }
        "g2-gm" => {
            let gm: GMAlgebra<Scalar> = g2_gm_with(3);
            let act = facts([
                ("dim", gm.dim.to_string()),
                ("gm_axioms", check_gm_axioms(&gm).ok().to_string()),
            ]);
            (
                Payload::Gm(gm),
                facts([("dim", "3".into()), ("gm_axioms", "true".into())]),
                act,
            )
        }
        "so" => {
            let ex = so_example(p_val)?;
            let n = p_val;
            let exp = facts([
                ("dim", (n * (n - 1) / 2).to_string()),
                ("jacobi_violations", "0".into()),
                ("gm_axioms", "true".into()),
                ("gm_matches_table", "true".into()),
                (
                    "s3_multiplicities",
                    format!("{},1,{}", (n - 2) * (n - 3) / 2, n - 2),
                ),
            ]);
            let act = s3_facts(&ex, true)?;
            (
                Payload::LieS3 {
                    alg: ex.alg,
                    action: ex.action,
                    gm: ex.gm,
                },
                exp,
                act,
            )
        }
        "so-jts" => {
            let ex = so_example(p_val)?;
            let act = facts([
                ("dim", ex.gm.dim.to_string()),
                ("gm_axioms", check_gm_axioms(&ex.gm).ok().to_string()),
                ("binary_zero", ex.gm.bil.is_zero().to_string()),
                ("gm_matches_table", ex.matches_expected().to_string()),
            ]);
            let exp = facts([
                ("dim", (p_val - 2).to_string()),
                ("gm_axioms", "true".into()),
                ("binary_zero", "true".into()),
                ("gm_matches_table", "true".into()),
            ]);
            (Payload::Gm(ex.gm), exp, act)
        }
        "sl" => {
            let ex = sl_example(p_val)?;
            let exp = facts([
                ("dim", ((p_val + 2) * (p_val + 2)).to_string()),
                ("jacobi_violations", "0".into()),
                ("gm_axioms", "true".into()),
                ("gm_matches_table", "true".into()),
            ]);
            let act = s3_facts(&ex, false)?;
            (
                Payload::LieS3 {
                    alg: ex.alg,
                    action: ex.action,
                    gm: ex.gm,
                },
                exp,
                act,
            )
        }
        "sl-gm" => {
            if p_val == 0 {
                return Err(CatalogError::Invalid("sl-gm needs m >= 1".into()));
            }
            let gm: GMAlgebra<Scalar> = sl_gm(p_val);
            let act = facts([
                ("dim", gm.dim.to_string()),
                ("gm_axioms", check_gm_axioms(&gm).ok().to_string()),
                ("malcev", check_malcev(&gm.binary_algebra()).to_string()),
            ]);
            let exp = facts([
                ("dim", (1 + 2 * p_val).to_string()),
                ("gm_axioms", "true".into()),
                ("malcev", (p_val < 2).to_string()),
            ]);
            (Payload::Gm(gm), exp, act)
        }
        "octonions" => {
            let o = split_octonions();
            let parts = lrt_isotypic(&o)?;
            let (der, sder, w) = parts.dims();
            let act = facts([
                ("dim", o.dim.to_string()),
                ("composition", check_hurwitz(&o).ok().to_string()),
                ("lrt_dim", parts.lrt_dim.to_string()),
                ("lrt_parts", format!("{der},{sder},{w}")),
                ("lrt_parts_consistent", parts.consistent.to_string()),
            ]);
            let exp = facts([
                ("dim", "8".into()),
                ("composition", "true".into()),
                ("lrt_dim", "28".into()),
                ("lrt_parts", "14,0,14".into()),
                ("lrt_parts_consistent", "true".into()),
            ]);
            (Payload::Algebra(lift_alg(&o)), exp, act)
        }
        "o0" => {
            let o0 = octonions_trace_zero();
            let gm = malcev_to_gm(&o0)?.map_scalars(lift);
            let act = facts([
                ("dim", gm.dim.to_string()),
                ("malcev", check_malcev(&o0).to_string()),
                ("lie", o0.is_lie().to_string()),
                ("gm_axioms", check_gm_axioms(&gm).ok().to_string()),
            ]);
            let exp = facts([
                ("dim", "7".into()),
                ("malcev", "true".into()),
                ("lie", "false".into()),
                ("gm_axioms", "true".into()),
            ]);
            (Payload::Gm(gm), exp, act)
        }
        "hurwitz" => {
            let h = hurwitz(p_val)?;
            let parts = lrt_isotypic(&h)?;
            let act = facts([
                ("dim", h.dim.to_string()),
                ("composition", check_hurwitz(&h).ok().to_string()),
                ("sder_dim", parts.sder.len().to_string()),
            ]);
            let exp = facts([
                ("dim", p_val.to_string()),
                ("composition", "true".into()),
                ("sder_dim", "0".into()),
            ]);
            (Payload::Algebra(lift_alg(&h)), exp, act)
        }
        "para-hurwitz" => {
            let s = para_hurwitz(p_val)?;
            let tri = triality_tri(&s).dim();
            let act = facts([
                ("dim", s.dim.to_string()),
                (
                    "symmetric_composition",
                    check_symmetric_composition(&s).ok().to_string(),
                ),
                ("tri_dim", tri.to_string()),
            ]);
            let tri_exp = match p_val {
                1 => 0,
                2 => 2,
                4 => 9,
                _ => 28,
            };
            let exp = facts([
                ("dim", p_val.to_string()),
                ("symmetric_composition", "true".into()),
                ("tri_dim", tri_exp.to_string()),
            ]);
            (Payload::Algebra(lift_alg(&s)), exp, act)
        }
        "magic-square" | "magic-square-gm" => {
            let ms = magic_square_row2(p_val)?;
            let gm = magic_square_extraction(&ms)?;
            let tri_exp = match p_val {
                1 => 0,
                2 => 2,
                4 => 9,
                _ => 28,
            };
            let mut exp = facts([
                ("gm_axioms", "true".into()),
                ("gm_dim", (3 * p_val).to_string()),
            ]);
            let mut act = facts([
                ("gm_axioms", check_gm_axioms(&gm).ok().to_string()),
                ("gm_dim", gm.dim.to_string()),
            ]);
            if name == "magic-square" {
                exp.insert("dim".into(), (2 + tri_exp + 6 * p_val).to_string());
                exp.insert("jacobi_violations".into(), "0".into());
                act.insert("dim".into(), ms.alg.dim.to_string());
                act.insert(
                    "jacobi_violations".into(),
                    ms.alg.check_jacobi().len().to_string(),
                );
                (
                    Payload::LieS3 {
                        alg: lift_alg(&ms.alg),
                        action: ms.action.map_scalars(lift),
                        gm,
                    },
                    exp,
                    act,
                )
            } else {
                (Payload::Gm(gm), exp, act)
            }
        }
        "cube" => {
            let cube = pauli_cube()?;
            let g = klein_grading(&cube.action)?;
            let d = g.dims();
            let act = facts([
                ("dim", cube.alg.dim.to_string()),
                (
                    "jacobi_violations",
                    cube.alg.check_jacobi().len().to_string(),
                ),
                ("klein_dims", format!("{},{},{},{}", d[0], d[1], d[2], d[3])),
            ]);
            let exp = facts([
                ("dim", "9".into()),
                ("jacobi_violations", "0".into()),
                ("klein_dims", "3,2,2,2".into()),
            ]);
            (
                Payload::LieS4 {
                    alg: lift_alg(&cube.alg),
                    action: cube.action.map_scalars(lift),
                },
                exp,
                act,
            )
        }
        "octonion-s4" => {
            let g = octonion_s4()?;
            let k = klein_grading(&g.action)?.dims();
            let act = facts([
                ("dim", g.alg.dim.to_string()),
                (
                    "lrt_dim",
                    compute_lrt(&split_octonions())?.dim().to_string(),
                ),
                ("klein_dims", format!("{},{},{},{}", k[0], k[1], k[2], k[3])),
            ]);
            let exp = facts([
                ("dim", "52".into()),
                ("lrt_dim", "28".into()),
                ("klein_dims", "28,8,8,8".into()),
            ]);
            (
                Payload::LieS4 {
                    alg: lift_alg(&g.alg),
                    action: g.action.map_scalars(lift),
                },
                exp,
                act,
            )
        }
        _ => return Err(CatalogError::Unknown(name.to_string())),
    };
    check(name, &expected, &actual)?;
    Ok(CatalogEntry {
        name: name.to_string(),
        param: p,
        kind: info.kind,
        payload,
        expected,
    })
}

/// All entries with their default parameters.
pub fn catalog_list() -> &'static [EntryInfo] {
    ENTRIES
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_with_defaults() {
        for e in catalog_list() {
            let built = build_entry(e.name, None).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(built.kind, e.kind);
            assert!(!built.expected.is_empty());
        }
    }

    #[test]
    fn parameters_are_validated() {
        assert!(matches!(
            build_entry("so", Some(2)),
            Err(CatalogError::Invalid(_))
        ));
        assert!(matches!(
            build_entry("hurwitz", Some(3)),
            Err(CatalogError::Invalid(_))
        ));
        assert!(matches!(
            build_entry("sl-gm", Some(0)),
            Err(CatalogError::Invalid(_))
        ));
        assert!(matches!(
            build_entry("nope", None),
            Err(CatalogError::Unknown(_))
        ));
    }

    #[test]
    fn parametrized_families() {
        for n in [3, 5] {
            build_entry("so", Some(n)).unwrap();
            build_entry("so-jts", Some(n)).unwrap();
        }
        for m in [1, 3] {
            build_entry("sl", Some(m)).unwrap();
            build_entry("sl-gm", Some(m)).unwrap();
        }
        for d in [1, 2, 4] {
            build_entry("hurwitz", Some(d)).unwrap();
            build_entry("para-hurwitz", Some(d)).unwrap();
            build_entry("magic-square-gm", Some(d)).unwrap();
        }
    }
}
