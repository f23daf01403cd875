//! JSON interchange for algebras, generalized Malcev algebras, actions and NLRTAs.
//!
//! Tensor entries are `[i, j, k, "scalar"]` and `[i, j, k, l, "scalar"]`; matrices are lists
//! of rows; scalars are text such as `"3/2"` or `"1/2-3/4w"`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Bilinear, Trilinear};
use crate::catalog::{CatalogEntry, Payload};
use crate::coordinatize::Nlrta;
use crate::gmalcev::GMAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symaction::{S3Action, S4Action};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document at {location}: {message}")]
    Invalid { location: String, message: String },
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Invalid {
        location: location.into(),
        message: message.into(),
    }
}

pub type BilEntry = (usize, usize, usize, String);
pub type TriEntry = (usize, usize, usize, usize, String);
/// `(i, x, y, k, l, c)`: `δᵢ(e_x, e_y)(e_k)` has coefficient `c` on `e_l`.
pub type DeltaEntry = (usize, usize, usize, usize, usize, String);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    /// `"S3"` or `"S4"`
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<Vec<Vec<String>>>,
    pub phi: Vec<Vec<String>>,
    pub tau: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Doc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bil: Vec<BilEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tri: Option<Vec<TriEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invol: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<DeltaEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<BTreeMap<String, String>>,
}

pub fn parse_doc(text: &str) -> Result<Doc, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty-printed, with each tensor entry and matrix row kept on one line.
pub fn to_json(doc: &Doc) -> String {
    let value = serde_json::to_value(doc).expect("documents always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!(
                    "{}{}: ",
                    pad(indent + 1),
                    Value::String(k.clone())
                ));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        other => out.push_str(&other.to_string()),
    }
}

fn parse_scalar(s: &str, location: &str) -> Result<Scalar, IoError> {
    s.parse()
        .map_err(|_| invalid(location, format!("cannot parse scalar `{s}`")))
}

fn check_index(i: usize, dim: usize, location: &str) -> Result<(), IoError> {
    if i < dim {
        Ok(())
    } else {
        Err(invalid(
            location,
            format!("index {i} out of range for dimension {dim}"),
        ))
    }
}

fn matrix_rows(m: &Matrix<Scalar>) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

fn parse_matrix(
    rows: &[Vec<String>],
    dim: usize,
    location: &str,
) -> Result<Matrix<Scalar>, IoError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(location, format!("expected a {dim}x{dim} matrix")));
    }
    let parsed: Result<Vec<Vec<Scalar>>, IoError> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, s)| parse_scalar(s, &format!("{location}[{i}][{j}]")))
                .collect()
        })
        .collect();
    Ok(Matrix::from_rows(parsed?))
}

fn bil_entries(b: &Bilinear<Scalar>) -> Vec<BilEntry> {
    b.nonzero_entries()
        .flat_map(|(i, j, v)| v.iter().map(move |(k, c)| (i, j, *k, c.to_string())))
        .collect()
}

fn tri_entries(t: &Trilinear<Scalar>) -> Vec<TriEntry> {
    t.nonzero_entries()
        .flat_map(|(i, j, k, v)| v.iter().map(move |(l, c)| (i, j, k, *l, c.to_string())))
        .collect()
}

impl Doc {
    pub fn from_algebra(a: &AlgebraSpec<Scalar>) -> Self {
        Doc {
            dim: a.dim,
            bil: bil_entries(&a.bil),
            tri: a.tri.as_ref().map(tri_entries),
            invol: a.invol.as_ref().map(matrix_rows),
            form: a.form.as_ref().map(matrix_rows),
            labels: a.labels.clone(),
            ..Doc::default()
        }
    }

    pub fn from_gm(m: &GMAlgebra<Scalar>) -> Self {
        Doc {
            dim: m.dim,
            bil: bil_entries(&m.bil),
            tri: Some(tri_entries(&m.tri)),
            labels: m.labels.clone(),
            ..Doc::default()
        }
    }

    pub fn from_nlrta(n: &Nlrta<Scalar>) -> Self {
        let mut doc = Doc::from_algebra(&n.algebra);
        let d = n.dim();
        let mut delta = Vec::new();
        for (i, ops) in n.delta.iter().enumerate() {
            for (xy, m) in ops.iter().enumerate() {
                for k in 0..d {
                    for l in 0..d {
                        let c = m.get(l, k);
                        if !c.is_zero() {
                            delta.push((i, xy / d, xy % d, k, l, c.to_string()));
                        }
                    }
                }
            }
        }
        doc.delta = Some(delta);
        doc
    }

    /// The entry's structure, action and expected facts.
    pub fn from_entry(e: &CatalogEntry) -> Self {
        let doc = match &e.payload {
            Payload::LieS3 { alg, action, .. } => Doc::from_algebra(alg).with_s3(action),
            Payload::LieS4 { alg, action } => Doc::from_algebra(alg).with_s4(action),
            Payload::Gm(m) => Doc::from_gm(m),
            Payload::Algebra(a) => Doc::from_algebra(a),
        };
        let name = match e.param {
            Some(p) => format!("{}({p})", e.name),
            None => e.name.clone(),
        };
        Doc {
            expected: Some(e.expected.clone()),
            ..doc.with_name(name)
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_s3(mut self, act: &S3Action<Scalar>) -> Self {
        self.action = Some(ActionDoc {
            group: "S3".into(),
            tau1: None,
            tau2: None,
            phi: matrix_rows(&act.phi),
            tau: matrix_rows(&act.tau),
        });
        self
    }

    pub fn with_s4(mut self, act: &S4Action<Scalar>) -> Self {
        self.action = Some(ActionDoc {
            group: "S4".into(),
            tau1: Some(matrix_rows(&act.tau1)),
            tau2: Some(matrix_rows(&act.tau2)),
            phi: matrix_rows(&act.phi),
            tau: matrix_rows(&act.tau),
        });
        self
    }

    fn bilinear(&self) -> Result<Bilinear<Scalar>, IoError> {
        let mut b = Bilinear::zero(self.dim);
        for (n, (i, j, k, c)) in self.bil.iter().enumerate() {
            let loc = format!("bil[{n}]");
            for x in [*i, *j, *k] {
                check_index(x, self.dim, &loc)?;
            }
            b.add_entry(*i, *j, *k, parse_scalar(c, &loc)?);
        }
        Ok(b)
    }

    fn trilinear(&self) -> Result<Option<Trilinear<Scalar>>, IoError> {
        let Some(entries) = &self.tri else {
            return Ok(None);
        };
        let mut t = Trilinear::zero(self.dim);
        for (n, (i, j, k, l, c)) in entries.iter().enumerate() {
            let loc = format!("tri[{n}]");
            for x in [*i, *j, *k, *l] {
                check_index(x, self.dim, &loc)?;
            }
            t.add_entry(*i, *j, *k, *l, parse_scalar(c, &loc)?);
        }
        Ok(Some(t))
    }

    pub fn algebra(&self) -> Result<AlgebraSpec<Scalar>, IoError> {
        let mut a = AlgebraSpec::new(self.bilinear()?);
        a.tri = self.trilinear()?;
        if let Some(rows) = &self.invol {
            a.invol = Some(parse_matrix(rows, self.dim, "invol")?);
        }
        if let Some(rows) = &self.form {
            a.form = Some(parse_matrix(rows, self.dim, "form")?);
        }
        a.labels = self.labels.clone();
        a.validate()
            .map_err(|e| invalid("document", e.to_string()))?;
        Ok(a)
    }

    /// The `tri` field is required; an absent `bil` is the zero product.
    pub fn gm(&self) -> Result<GMAlgebra<Scalar>, IoError> {
        let tri = self
            .trilinear()?
            .ok_or_else(|| invalid("tri", "a generalized Malcev algebra needs a triple product"))?;
        let mut m = GMAlgebra::new(self.bilinear()?, tri)
            .map_err(|e| invalid("document", e.to_string()))?;
        m.labels = self.labels.clone();
        Ok(m)
    }

    fn action_doc(&self, group: &str) -> Result<&ActionDoc, IoError> {
        let a = self
            .action
            .as_ref()
            .ok_or_else(|| invalid("action", "no action in document"))?;
        if a.group != group {
            return Err(invalid(
                "action.group",
                format!("expected {group}, found {}", a.group),
            ));
        }
        Ok(a)
    }

    pub fn s3_action(&self) -> Result<S3Action<Scalar>, IoError> {
        match self.action.as_ref().map(|a| a.group.as_str()) {
            Some("S4") => Ok(self.s4_action()?.s3()),
            _ => {
                let a = self.action_doc("S3")?;
                Ok(S3Action {
                    phi: parse_matrix(&a.phi, self.dim, "action.phi")?,
                    tau: parse_matrix(&a.tau, self.dim, "action.tau")?,
                })
            }
        }
    }

    pub fn s4_action(&self) -> Result<S4Action<Scalar>, IoError> {
        let a = self.action_doc("S4")?;
        let need = |m: &Option<Vec<Vec<String>>>, name: &str| -> Result<Matrix<Scalar>, IoError> {
            let rows = m
                .as_ref()
                .ok_or_else(|| invalid(format!("action.{name}"), "missing"))?;
            parse_matrix(rows, self.dim, &format!("action.{name}"))
        };
        Ok(S4Action {
            tau1: need(&a.tau1, "tau1")?,
            tau2: need(&a.tau2, "tau2")?,
            phi: parse_matrix(&a.phi, self.dim, "action.phi")?,
            tau: parse_matrix(&a.tau, self.dim, "action.tau")?,
        })
    }

    pub fn nlrta(&self) -> Result<Nlrta<Scalar>, IoError> {
        let algebra = self.algebra()?;
        if algebra.invol.is_none() {
            return Err(invalid("invol", "an NLRTA needs an involution"));
        }
        let d = self.dim;
        let entries = self
            .delta
            .as_ref()
            .ok_or_else(|| invalid("delta", "missing"))?;
        let mut delta: [Vec<Matrix<Scalar>>; 3] =
            std::array::from_fn(|_| vec![Matrix::zeros(d, d); d * d]);
        for (n, (i, x, y, k, l, c)) in entries.iter().enumerate() {
            let loc = format!("delta[{n}]");
            if *i > 2 {
                return Err(invalid(&loc, format!("component {i} is not 0, 1 or 2")));
            }
            for v in [*x, *y, *k, *l] {
                check_index(v, d, &loc)?;
            }
            *delta[*i][x * d + y].entry_mut(*l, *k) += &parse_scalar(c, &loc)?;
        }
        Ok(Nlrta { algebra, delta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{g2_example, octonion_nlrta, pauli_cube};
    use crate::scalar::{rat_int, Field, Rational};

    fn lift(x: &Rational) -> Scalar {
        Scalar::from_rational(x.clone())
    }

    #[test]
    fn algebra_round_trip_is_exact() {
        let ex = g2_example().unwrap();
        let doc = Doc::from_algebra(&ex.alg)
            .with_s3(&ex.action)
            .with_name("g2");
        let text = to_json(&doc);
        let back = parse_doc(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.algebra().unwrap(), ex.alg);
        assert_eq!(back.s3_action().unwrap(), ex.action);
        assert_eq!(
            to_json(
                &Doc::from_algebra(&back.algebra().unwrap())
                    .with_s3(&ex.action)
                    .with_name("g2")
            ),
            text
        );
    }

    #[test]
    fn gm_and_s4_round_trip() {
        let ex = g2_example().unwrap();
        let doc = Doc::from_gm(&ex.gm);
        assert_eq!(parse_doc(&to_json(&doc)).unwrap().gm().unwrap(), ex.gm);
        let cube = pauli_cube().unwrap();
        let act = cube.action.map_scalars(lift);
        let doc = Doc::from_algebra(&cube.alg.map_scalars(lift)).with_s4(&act);
        let back = parse_doc(&to_json(&doc)).unwrap();
        assert_eq!(back.s4_action().unwrap(), act);
        assert_eq!(back.s3_action().unwrap(), act.s3());
    }

    #[test]
    fn nlrta_round_trip() {
        let nl = octonion_nlrta();
        let nl = Nlrta {
            algebra: nl.algebra.map_scalars(lift),
            delta: nl.delta.map(|v| v.iter().map(|m| m.map(lift)).collect()),
        };
        let back = parse_doc(&to_json(&Doc::from_nlrta(&nl)))
            .unwrap()
            .nlrta()
            .unwrap();
        assert_eq!(back.algebra, nl.algebra);
        assert_eq!(back.delta, nl.delta);
    }

    #[test]
    fn input_errors_are_located() {
        match parse_doc("{\"dim\": 2,\n \"bil\": [[0, 1, 1, \"1\"],]}") {
            Err(IoError::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let doc = parse_doc(r#"{"dim": 2, "bil": [[0, 1, 5, "1"]]}"#).unwrap();
        assert!(
            matches!(doc.algebra(), Err(IoError::Invalid { location, .. }) if location == "bil[0]")
        );
        let doc = parse_doc(r#"{"dim": 1, "bil": [[0, 0, 0, "x"]]}"#).unwrap();
        assert!(doc.algebra().is_err());
        let doc = parse_doc(r#"{"dim": 1}"#).unwrap();
        assert!(doc.gm().is_err());
        assert!(doc.s3_action().is_err());
    }

    #[test]
    fn catalog_documents_round_trip() {
        for name in ["g2", "so-jts", "cube", "octonions"] {
            let e = crate::catalog::build_entry(name, None).unwrap();
            let doc = Doc::from_entry(&e);
            let text = to_json(&doc);
            let back = parse_doc(&text).unwrap();
            assert_eq!(to_json(&back), text, "{name}");
            match &e.payload {
                Payload::Gm(m) => assert_eq!(&back.gm().unwrap(), m),
                Payload::LieS3 { alg, .. } | Payload::LieS4 { alg, .. } | Payload::Algebra(alg) => {
                    assert_eq!(&back.algebra().unwrap(), alg)
                }
            }
        }
    }

    #[test]
    fn jordan_triple_documents_omit_the_product() {
        let mut t = Trilinear::zero(1);
        t.add_entry(0, 0, 0, 0, Scalar::from_rational(rat_int(2)));
        let m = GMAlgebra::jordan_triple(t);
        let text = to_json(&Doc::from_gm(&m));
        assert!(!text.contains("\"bil\""));
        assert_eq!(parse_doc(&text).unwrap().gm().unwrap(), m);
    }
}
