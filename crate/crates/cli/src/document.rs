//! MSC documents: a JSON object with keys `field`, `n`, `entries` and `label`.
//!
//! ```json
//! { "field": "Q", "n": 2, "label": "seed",
//!   "entries": [[0, 0, 1, -1], [1, 0, "1/2", 0]] }
//! ```
//!
//! Scalars may be JSON integers or strings in the token grammar. `field` may
//! be omitted, in which case the caller's default applies.

use std::fmt;

use msc::{Field, Matrix, StructureMatrix};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

/// A scalar token as written in a document, before field validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Token(pub String);

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct TokenVisitor;

        impl Visitor<'_> for TokenVisitor {
            type Value = Token;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string scalar token")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Token, E> {
                Ok(Token(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Token, E> {
                Ok(Token(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Token, E> {
                Err(E::custom(format!(
                    "floating-point value {v} is not an exact scalar; write integers or \"a/b\" strings"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Token, E> {
                Ok(Token(v.trim().to_string()))
            }
        }

        d.deserialize_any(TokenVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MscDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub n: usize,
    pub entries: Vec<Vec<Token>>,
    #[serde(default)]
    pub label: Option<String>,
}

/// A validated document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub msc: StructureMatrix,
    pub label: Option<String>,
}

fn parse_error(source: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        input: source.to_string(),
        message: message.into(),
    }
}

/// Parse and validate `text`; `source` names the input in diagnostics.
pub fn parse_msc(text: &str, source: &str, default_field: Field) -> Result<Parsed, CliError> {
    let doc: MscDocument = serde_json::from_str(text).map_err(|e| parse_error(source, e.to_string()))?;
    let field = match &doc.field {
        Some(s) => s
            .parse::<Field>()
            .map_err(|e| parse_error(source, format!("field: {e}")))?,
        None => default_field,
    };
    let n = doc.n;
    if n == 0 {
        return Err(parse_error(source, "n: must be at least 1"));
    }
    if doc.entries.len() != n {
        return Err(parse_error(
            source,
            format!("entries: expected {n} rows, found {}", doc.entries.len()),
        ));
    }
    let mut values = Vec::with_capacity(n * n * n);
    for (r, row) in doc.entries.iter().enumerate() {
        if row.len() != n * n {
            return Err(parse_error(
                source,
                format!("entries[{r}]: expected {} columns, found {}", n * n, row.len()),
            ));
        }
        for (c, Token(tok)) in row.iter().enumerate() {
            let v = field.parse_scalar(tok).map_err(|e| CliError::Token {
                input: source.to_string(),
                location: format!("entries[{r}][{c}]"),
                error: e,
            })?;
            values.push(v);
        }
    }
    let data = Matrix::from_vec(field, n, n * n, values).map_err(|e| parse_error(source, e.to_string()))?;
    let msc = StructureMatrix::new(data).map_err(|e| parse_error(source, e.to_string()))?;
    Ok(Parsed { msc, label: doc.label })
}

/// The canonical document for an algebra: explicit field, string tokens in
/// lowest terms.
pub fn emit(msc: &StructureMatrix, label: Option<&str>) -> MscDocument {
    MscDocument {
        field: Some(msc.field().to_string()),
        n: msc.dim(),
        entries: msc
            .data()
            .to_tokens()
            .into_iter()
            .map(|row| row.into_iter().map(Token).collect())
            .collect(),
        label: label.map(str::to_string),
    }
}

/// `emit ∘ parse`: the normal form of a document.
pub fn normalize(text: &str, source: &str, default_field: Field) -> Result<MscDocument, CliError> {
    let parsed = parse_msc(text, source, default_field)?;
    Ok(emit(&parsed.msc, parsed.label.as_deref()))
}
