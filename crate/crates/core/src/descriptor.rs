//! JSON code descriptors.
//!
//! Elements are stored as canonical encodings and matrices as
//! `{rows, cols, field, entries}` in row-major order. Reading re-checks every
//! invariant; derived data (assembled generators, sliding windows) is never
//! stored.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::error::Category;
use thiserror::Error;

use crate::convmdp::ConvCode;
use crate::gf::{Embedding, FieldSpec, GaloisField, GfError};
use crate::mrlrc::{LocalityProfile, MrLrcCode};
use crate::{Elem, GfMatrix, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for DescriptorError {
    fn from(e: serde_json::Error) -> Self {
        match e.classify() {
            Category::Syntax | Category::Eof => DescriptorError::Parse(e.to_string()),
            Category::Data => DescriptorError::SchemaViolation(e.to_string()),
            Category::Io => DescriptorError::Io(e.to_string()),
        }
    }
}

fn invariant(e: impl std::fmt::Display) -> DescriptorError {
    DescriptorError::InvariantViolation(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    pub entries: Vec<u64>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &GfMatrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            field: m.field().spec(),
            entries: m.entries().iter().map(|e| e.enc()).collect(),
        }
    }

    /// Rebuilds the matrix; the stored field must equal `field`.
    pub fn to_matrix(&self, field: &GaloisField) -> Result<GfMatrix, DescriptorError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(DescriptorError::SchemaViolation(format!(
                "{} entries for a {} x {} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if self.field != field.spec() {
            return Err(invariant(format!(
                "matrix over GF({}^{}) where GF({}^{}) was expected",
                self.field.p,
                self.field.m,
                field.p(),
                field.m()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|&e| field.elem(e).map_err(invariant))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(field.clone(), self.rows, self.cols, entries).map_err(invariant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MrLrcDoc {
    pub profile: LocalityProfile,
    pub base_field: FieldSpec,
    pub ext_field: FieldSpec,
    pub alpha: u64,
    pub locals: Vec<MatrixDoc>,
    pub parities: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvDoc {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub field: FieldSpec,
    pub coeffs: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Descriptor {
    #[serde(rename = "mr-lrc")]
    MrLrc(MrLrcDoc),
    #[serde(rename = "conv")]
    Conv(ConvDoc),
}

/// A validated code loaded from a descriptor.
#[derive(Debug, Clone)]
pub enum Code {
    MrLrc(MrLrcCode),
    Conv(ConvCode),
}

/// Field specs fail the schema when the modulus is malformed and the
/// invariants when it is well-formed but reducible.
fn load_field(spec: &FieldSpec) -> Result<GaloisField, DescriptorError> {
    GaloisField::from_spec(spec).map_err(|e| match e {
        GfError::ReducibleModulus(_) => invariant(e),
        other => DescriptorError::SchemaViolation(other.to_string()),
    })
}

impl Descriptor {
    pub fn from_mrlrc(code: &MrLrcCode) -> Self {
        Descriptor::MrLrc(MrLrcDoc {
            profile: code.profile().clone(),
            base_field: code.base_field().spec(),
            ext_field: code.ext_field().spec(),
            alpha: code.alpha().enc(),
            locals: code.locals().iter().map(MatrixDoc::from_matrix).collect(),
            parities: code.parities().iter().map(MatrixDoc::from_matrix).collect(),
        })
    }

    pub fn from_conv(code: &ConvCode) -> Self {
        Descriptor::Conv(ConvDoc {
            n: code.n(),
            k: code.k(),
            delta: code.declared_degree(),
            field: code.field().spec(),
            coeffs: code.coeffs().iter().map(MatrixDoc::from_matrix).collect(),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Descriptor::MrLrc(_) => "mr-lrc",
            Descriptor::Conv(_) => "conv",
        }
    }

    /// Rebuilds and validates the code. With `kind_specific` the MR-LRC
    /// parity blocks must have the diagonal construction shape and a
    /// convolutional code's declared degree must match its minors.
    pub fn to_code(&self, kind_specific: bool) -> Result<Code, DescriptorError> {
        match self {
            Descriptor::MrLrc(doc) => {
                doc.profile.validate().map_err(|e| DescriptorError::SchemaViolation(e.to_string()))?;
                let base = load_field(&doc.base_field)?;
                let ext = load_field(&doc.ext_field)?;
                let emb = Embedding::new(&base, &ext).map_err(invariant)?;
                let alpha = ext.elem(doc.alpha).map_err(invariant)?;
                let locals = doc.locals.iter().map(|m| m.to_matrix(&ext)).collect::<Result<Vec<_>, _>>()?;
                let parities = doc.parities.iter().map(|m| m.to_matrix(&ext)).collect::<Result<Vec<_>, _>>()?;
                for (i, g) in locals.iter().enumerate() {
                    if g.entries().iter().any(|&x| emb.preimage(x).is_none()) {
                        return Err(invariant(format!("local block {i} has entries outside the base field")));
                    }
                }
                let code = MrLrcCode::from_parts(doc.profile.clone(), base, ext, alpha, locals, parities)
                    .map_err(invariant)?;
                if kind_specific {
                    code.check_parity_shape().map_err(invariant)?;
                }
                Ok(Code::MrLrc(code))
            }
            Descriptor::Conv(doc) => {
                let field = load_field(&doc.field)?;
                let coeffs = doc.coeffs.iter().map(|m| m.to_matrix(&field)).collect::<Result<Vec<_>, _>>()?;
                if coeffs.iter().any(|c| c.shape() != (doc.k, doc.n)) {
                    return Err(invariant(format!("coefficients are not {} x {}", doc.k, doc.n)));
                }
                if coeffs.len() > 1 && coeffs.last().is_some_and(Matrix::is_zero) {
                    return Err(invariant("highest coefficient is zero"));
                }
                let code = ConvCode::new(field, coeffs, doc.delta).map_err(invariant)?;
                if kind_specific {
                    code.check_degree().map_err(invariant)?;
                }
                Ok(Code::Conv(code))
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DescriptorError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    /// Reads and validates a descriptor file.
    pub fn read(path: &Path, kind_specific: bool) -> Result<(Descriptor, Code), DescriptorError> {
        let text = fs::read_to_string(path).map_err(|e| DescriptorError::Io(format!("{}: {e}", path.display())))?;
        let doc = Descriptor::from_json(&text)?;
        let code = doc.to_code(kind_specific)?;
        Ok((doc, code))
    }

    /// Validates, then writes the descriptor as pretty JSON.
    pub fn write(&self, path: &Path) -> Result<(), DescriptorError> {
        self.to_code(false)?;
        fs::write(path, self.to_json() + "\n").map_err(|e| DescriptorError::Io(format!("{}: {e}", path.display())))
    }
}

/// Parses a comma-separated list of element encodings.
pub fn parse_elements(field: &GaloisField, text: &str) -> Result<Vec<Elem>, DescriptorError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v: u64 = s.parse().map_err(|_| DescriptorError::Parse(format!("not an element: {s:?}")))?;
            field.elem(v).map_err(invariant)
        })
        .collect()
}

pub fn format_elements(v: &[Elem]) -> String {
    v.iter().map(|e| e.enc().to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convmdp::build_vdm2;
    use crate::mrlrc::build_theorem3;

    fn reference() -> MrLrcCode {
        let profile = LocalityProfile::new(2, 2, vec![4, 4], vec![2, 2]).unwrap();
        build_theorem3(&profile, &GaloisField::new(7, 1, None).unwrap(), 2, false).unwrap()
    }

    #[test]
    fn mrlrc_round_trip() {
        let doc = Descriptor::from_mrlrc(&reference());
        let back = Descriptor::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let Code::MrLrc(code) = back.to_code(true).unwrap() else { panic!("kind") };
        assert_eq!(code.generator(), reference().generator());
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["kind"], "mr-lrc");
        assert_eq!(v["profile"]["ns"], serde_json::json!([4, 4]));
        assert_eq!(v["ext_field"]["modulus"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn conv_round_trip() {
        let code = build_vdm2(4, &GaloisField::new(5, 1, None).unwrap()).unwrap();
        let doc = Descriptor::from_conv(&code);
        let back = Descriptor::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let Code::Conv(c) = back.to_code(true).unwrap() else { panic!("kind") };
        assert_eq!(c, code);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(Descriptor::from_json("{not json"), Err(DescriptorError::Parse(_))));
        assert!(matches!(
            Descriptor::from_json(r#"{"kind": "mr-lrc", "profile": 3}"#),
            Err(DescriptorError::SchemaViolation(_))
        ));
        assert!(matches!(Descriptor::from_json(r#"{"kind": "turbo"}"#), Err(DescriptorError::SchemaViolation(_))));

        let Descriptor::MrLrc(mut doc) = Descriptor::from_mrlrc(&reference()) else { unreachable!() };
        doc.ext_field.modulus[2] = 2;
        assert!(matches!(
            Descriptor::MrLrc(doc.clone()).to_code(false),
            Err(DescriptorError::SchemaViolation(_))
        ));

        let Descriptor::MrLrc(mut doc) = Descriptor::from_mrlrc(&reference()) else { unreachable!() };
        doc.parities[1].entries.swap(0, 3);
        let bad = Descriptor::MrLrc(doc);
        assert!(bad.to_code(false).is_ok());
        assert!(matches!(bad.to_code(true), Err(DescriptorError::InvariantViolation(_))));

        let Descriptor::MrLrc(mut doc) = Descriptor::from_mrlrc(&reference()) else { unreachable!() };
        doc.locals[0].entries[0] = 48;
        assert!(matches!(Descriptor::MrLrc(doc).to_code(false), Err(DescriptorError::InvariantViolation(_))));
    }

    #[test]
    fn element_lists() {
        let f = GaloisField::new(7, 1, None).unwrap();
        let v = parse_elements(&f, "1, 2,6").unwrap();
        assert_eq!(format_elements(&v), "1,2,6");
        assert!(parse_elements(&f, "1,7").is_err());
        assert!(parse_elements(&f, "x").is_err());
    }
}
