//! JSON documents for algebras, bimodules, operators and witnesses.
//! Scalars are written as strings (`"3"`, `"-2/5"`); integers are also
//! accepted on input.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algcore::{make_algebra, Algebra};
use crate::bimod::{make_bimodule_from_mats, Bimodule, LinMap};
use crate::error::{Error, Result};
use crate::exactla::{Certificate, Field, Mat, Scalar};
use crate::ncdiff::DerivationWitness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarText(pub String);

impl ScalarText {
    pub fn from_scalar(s: &Scalar) -> ScalarText {
        ScalarText(s.to_canonical_string())
    }

    pub fn parse(&self, field: Field) -> Result<Scalar> {
        field.parse(&self.0)
    }
}

impl Serialize for ScalarText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ScalarText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a scalar as an integer or a string \"a\" / \"a/b\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.trim().to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDoc {
    Q,
    Fp { p: u64 },
}

impl FieldDoc {
    pub fn to_field(self) -> Result<Field> {
        match self {
            FieldDoc::Q => Ok(Field::Rationals),
            FieldDoc::Fp { p } => Field::prime(p),
        }
    }

    pub fn from_field(f: Field) -> FieldDoc {
        match f {
            Field::Rationals => FieldDoc::Q,
            Field::Prime(p) => FieldDoc::Fp { p },
        }
    }
}

fn texts(v: &[Scalar]) -> Vec<ScalarText> {
    v.iter().map(ScalarText::from_scalar).collect()
}

fn parse_all(field: Field, v: &[ScalarText]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| s.parse(field)).collect()
}

fn mat_rows(m: &Mat) -> Vec<Vec<ScalarText>> {
    (0..m.rows()).map(|r| texts(m.row(r))).collect()
}

fn parse_mat(field: Field, rows: &[Vec<ScalarText>], what: &str) -> Result<Mat> {
    let parsed = rows.iter().map(|r| parse_all(field, r)).collect::<Result<Vec<_>>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(Error::Malformed(format!("{what}: rows of unequal length")));
    }
    Mat::from_rows(field, cols, parsed)
}

fn cube<T: Clone>(flat: &[T], n: usize, m: usize) -> Vec<Vec<Vec<T>>> {
    (0..n).map(|i| (0..m).map(|j| flat[(i * m + j) * m..(i * m + j + 1) * m].to_vec()).collect()).collect()
}

fn flatten_cube(c: &[Vec<Vec<ScalarText>>], n: usize, m: usize, what: &str) -> Result<Vec<ScalarText>> {
    if c.len() != n || c.iter().any(|s| s.len() != m || s.iter().any(|r| r.len() != m)) {
        return Err(Error::Malformed(format!("{what} must be a {n}×{m}×{m} array")));
    }
    Ok(c.iter().flatten().flatten().cloned().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<String>>,
    /// `structure[i][j][k]` is the coefficient of `e_k` in `e_i e_j`.
    pub structure: Vec<Vec<Vec<ScalarText>>>,
    pub unit: Vec<ScalarText>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &Algebra) -> AlgebraDoc {
        let n = a.dim();
        let flat: Vec<Scalar> =
            (0..n * n * n).map(|t| a.structure_constant(t / (n * n), (t / n) % n, t % n).clone()).collect();
        AlgebraDoc {
            field: FieldDoc::from_field(a.field()),
            dim: n,
            basis_names: Some(a.basis_names().to_vec()),
            structure: cube(&texts(&flat), n, n),
            unit: texts(&a.unit().0),
        }
    }

    pub fn to_algebra(&self) -> Result<Algebra> {
        let field = self.field.to_field()?;
        let n = self.dim;
        let flat = flatten_cube(&self.structure, n, n, "structure")?;
        make_algebra(field, n, parse_all(field, &flat)?, parse_all(field, &self.unit)?, self.basis_names.clone())
    }
}

/// Where a bimodule document finds its algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSource {
    Inline(AlgebraDoc),
    /// Path relative to the referring document.
    File(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSource>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<String>>,
    /// `left[i][j][k]`: coefficient of `f_k` in `e_i f_j`.
    pub left: Vec<Vec<Vec<ScalarText>>>,
    /// `right[i][j][k]`: coefficient of `f_k` in `f_j e_i`.
    pub right: Vec<Vec<Vec<ScalarText>>>,
    #[serde(default)]
    pub central: bool,
}

impl BimoduleDoc {
    pub fn from_bimodule(p: &Bimodule, algebra: Option<AlgebraSource>) -> BimoduleDoc {
        let (n, m) = (p.algebra().dim(), p.dim());
        let tensor = |mats: Vec<&Mat>| {
            let mut flat = Vec::with_capacity(n * m * m);
            for mat in mats {
                for j in 0..m {
                    for k in 0..m {
                        flat.push(ScalarText::from_scalar(mat.get(k, j)));
                    }
                }
            }
            cube(&flat, n, m)
        };
        BimoduleDoc {
            algebra,
            dim: m,
            basis_names: Some(p.basis_names().to_vec()),
            left: tensor((0..n).map(|i| p.left_basis_matrix(i)).collect()),
            right: tensor((0..n).map(|i| p.right_basis_matrix(i)).collect()),
            central: p.is_central(),
        }
    }

    /// Builds the bimodule over `algebra`; an embedded algebra must agree with it.
    pub fn to_bimodule(&self, algebra: &Arc<Algebra>, base_dir: &Path) -> Result<Bimodule> {
        if let Some(src) = &self.algebra {
            let own = match src {
                AlgebraSource::Inline(doc) => doc.to_algebra()?,
                AlgebraSource::File(f) => read_algebra(&base_dir.join(f))?,
            };
            if !same_algebra(&own, algebra) {
                return Err(Error::Malformed("bimodule refers to a different algebra".into()));
            }
        }
        let field = algebra.field();
        let (n, m) = (algebra.dim(), self.dim);
        let mats = |c: &[Vec<Vec<ScalarText>>], what: &str| -> Result<Vec<Mat>> {
            let flat = parse_all(field, &flatten_cube(c, n, m, what)?)?;
            Ok((0..n)
                .map(|i| {
                    let mut mat = Mat::zeros(field, m, m);
                    for j in 0..m {
                        for k in 0..m {
                            mat.set(k, j, flat[(i * m + j) * m + k].clone());
                        }
                    }
                    mat
                })
                .collect())
        };
        let p =
            make_bimodule_from_mats(algebra, m, mats(&self.left, "left")?, mats(&self.right, "right")?, self.central)?;
        Ok(match &self.basis_names {
            Some(names) if names.len() == m => p.with_names(names.clone()),
            Some(_) => return Err(Error::Malformed("basis_names length differs from dim".into())),
            None => p,
        })
    }
}

/// Algebras agree when field, structure constants and unit agree; basis names are labels only.
fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    let n = a.dim();
    a.field() == b.field()
        && n == b.dim()
        && a.unit() == b.unit()
        && (0..n * n * n).all(|t| {
            a.structure_constant(t / (n * n), (t / n) % n, t % n)
                == b.structure_constant(t / (n * n), (t / n) % n, t % n)
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDoc {
    /// Rows indexed by the codomain basis, columns by the domain basis.
    pub matrix: Vec<Vec<ScalarText>>,
}

impl OperatorDoc {
    pub fn from_map(f: &LinMap) -> OperatorDoc {
        OperatorDoc { matrix: mat_rows(f.matrix()) }
    }

    pub fn to_map(&self, field: Field, dom: usize, cod: usize) -> Result<LinMap> {
        if self.matrix.is_empty() && dom * cod == 0 {
            return Ok(LinMap::zero(field, dom, cod));
        }
        let m = parse_mat(field, &self.matrix, "operator")?;
        if m.rows() != cod || m.cols() != dom {
            return Err(Error::Dimension(format!("operator is {}x{}, expected {cod}x{dom}", m.rows(), m.cols())));
        }
        Ok(LinMap(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub d_right: Vec<Vec<Vec<ScalarText>>>,
    pub d_left: Vec<Vec<Vec<ScalarText>>>,
}

impl WitnessDoc {
    pub fn from_witness(w: &DerivationWitness) -> WitnessDoc {
        WitnessDoc {
            d_right: w.d_right.iter().map(|f| mat_rows(f.matrix())).collect(),
            d_left: w.d_left.iter().map(|f| mat_rows(f.matrix())).collect(),
        }
    }

    pub fn to_witness(&self, field: Field, dom: usize, cod: usize) -> Result<DerivationWitness> {
        let conv = |v: &[Vec<Vec<ScalarText>>]| -> Result<Vec<LinMap>> {
            v.iter().map(|rows| OperatorDoc { matrix: rows.clone() }.to_map(field, dom, cod)).collect()
        };
        Ok(DerivationWitness { d_right: conv(&self.d_right)?, d_left: conv(&self.d_left)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub equation: usize,
    pub coefficient: ScalarText,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meaning: Option<String>,
}

/// The weighted equations cancel on the left while their right sides sum to `residual ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub combination: Vec<CertificateTerm>,
    pub residual: ScalarText,
}

impl CertificateDoc {
    pub fn from_certificate(c: &Certificate, describe: impl Fn(usize) -> Option<String>) -> CertificateDoc {
        CertificateDoc {
            combination: c
                .combination
                .iter()
                .map(|(i, y)| CertificateTerm {
                    equation: *i,
                    coefficient: ScalarText::from_scalar(y),
                    meaning: describe(*i),
                })
                .collect(),
            residual: ScalarText::from_scalar(&c.residual),
        }
    }

    pub fn to_certificate(&self, field: Field) -> Result<Certificate> {
        Ok(Certificate {
            combination: self
                .combination
                .iter()
                .map(|t| Ok((t.equation, t.coefficient.parse(field)?)))
                .collect::<Result<_>>()?,
            residual: self.residual.parse(field)?,
        })
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Parses a JSON document, reporting the file and the line/column of any error.
pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{origin}: {e}")))
}

pub fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse_doc(&read_text(path)?, &path.display().to_string())
}

pub fn read_algebra(path: &Path) -> Result<Algebra> {
    read_doc::<AlgebraDoc>(path)?.to_algebra()
}

pub fn read_bimodule(path: &Path, algebra: &Arc<Algebra>) -> Result<Bimodule> {
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    read_doc::<BimoduleDoc>(path)?.to_bimodule(algebra, &base)
}

/// Pretty JSON with a trailing newline; field order follows the type definitions.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}
