//! The JSON measure document.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "space": { "kind": "finite_labeled", "labels": ["a", "b"] },
//!   "atoms": [["a", "2"], ["b", "-3"]]
//! }
//! ```
//!
//! Point literals are integers on `integer_line`, strings on
//! `finite_labeled`, arrays of rationals on `rational_vector` and nested
//! `{"atoms": [...]}` objects on `measure_space`. Weights and coordinates
//! are `"p/q"` strings or integers. The serializer always writes strings.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::signed_measure::SignedMeasure;
use crate::spaces::{Point, Space};
use crate::Rational;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Model(#[from] Error),
}

impl DocumentError {
    pub fn is_kind_mismatch(&self) -> bool {
        matches!(self, DocumentError::Model(Error::KindMismatch { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDescriptor {
    FiniteLabeled { labels: Vec<String> },
    IntegerLine,
    RationalVector { dimension: usize },
    MeasureSpace { base: Box<SpaceDescriptor> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberLiteral {
    Integer(i64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointLiteral {
    Integer(i64),
    Label(String),
    Vector(Vec<NumberLiteral>),
    Measure { atoms: Vec<(PointLiteral, NumberLiteral)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDocument {
    pub format_version: u32,
    pub space: SpaceDescriptor,
    pub atoms: Vec<(PointLiteral, NumberLiteral)>,
}

pub fn parse_rational(literal: &NumberLiteral) -> Result<Rational, DocumentError> {
    match literal {
        NumberLiteral::Integer(n) => Ok(Rational::from_integer((*n).into())),
        NumberLiteral::Text(s) => {
            Rational::from_str(s).map_err(|_| DocumentError::MalformedRational(s.clone()))
        }
    }
}

fn rational_literal(r: &Rational) -> NumberLiteral {
    NumberLiteral::Text(r.to_string())
}

impl SpaceDescriptor {
    pub fn to_space(&self) -> Result<Space, DocumentError> {
        Ok(match self {
            SpaceDescriptor::FiniteLabeled { labels } => Space::finite_labeled(labels)?,
            SpaceDescriptor::IntegerLine => Space::integer_line(),
            SpaceDescriptor::RationalVector { dimension } => Space::rational_vector(*dimension)?,
            SpaceDescriptor::MeasureSpace { base } => Space::measures(base.to_space()?),
        })
    }

    pub fn from_space(space: &Space) -> Result<Self, DocumentError> {
        Ok(match space {
            Space::FiniteLabeled(labels) => SpaceDescriptor::FiniteLabeled {
                labels: labels.iter().cloned().collect(),
            },
            Space::IntegerLine => SpaceDescriptor::IntegerLine,
            Space::RationalVector(n) => SpaceDescriptor::RationalVector { dimension: *n },
            Space::MeasureSpace(base) => SpaceDescriptor::MeasureSpace {
                base: Box::new(SpaceDescriptor::from_space(base)?),
            },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "no document representation for points of {other}"
                ))
                .into())
            }
        })
    }
}

fn literal_kind(p: &PointLiteral) -> &'static str {
    match p {
        PointLiteral::Integer(_) => "integer literal",
        PointLiteral::Label(_) => "label literal",
        PointLiteral::Vector(_) => "vector literal",
        PointLiteral::Measure { .. } => "measure literal",
    }
}

fn to_point(space: &Space, literal: &PointLiteral) -> Result<Point, DocumentError> {
    let point = match (space, literal) {
        (Space::FiniteLabeled(_), PointLiteral::Label(l)) => Point::label(l.as_str()),
        (Space::IntegerLine, PointLiteral::Integer(n)) => Point::Int(*n),
        (Space::RationalVector(_), PointLiteral::Vector(v)) => {
            Point::Vector(v.iter().map(parse_rational).collect::<Result<_, _>>()?)
        }
        (Space::MeasureSpace(base), PointLiteral::Measure { atoms }) => {
            Point::Measure(to_measure(base, atoms)?)
        }
        _ => return Err(Error::kind(space, literal_kind(literal)).into()),
    };
    space.check_point(&point)?;
    Ok(point)
}

fn to_measure(
    space: &Space,
    atoms: &[(PointLiteral, NumberLiteral)],
) -> Result<SignedMeasure, DocumentError> {
    let pairs = atoms
        .iter()
        .map(|(p, w)| Ok((to_point(space, p)?, parse_rational(w)?)))
        .collect::<Result<Vec<_>, DocumentError>>()?;
    Ok(SignedMeasure::from_atoms(space.clone(), pairs)?)
}

fn to_literal(p: &Point) -> Result<PointLiteral, DocumentError> {
    Ok(match p {
        Point::Int(n) => PointLiteral::Integer(*n),
        Point::Label(l) => PointLiteral::Label(l.clone()),
        Point::Vector(v) => PointLiteral::Vector(v.iter().map(rational_literal).collect()),
        Point::Measure(m) => PointLiteral::Measure {
            atoms: atom_literals(m)?,
        },
        other => {
            return Err(Error::InvalidArgument(format!("no document literal for {other}")).into())
        }
    })
}

fn atom_literals(mu: &SignedMeasure) -> Result<Vec<(PointLiteral, NumberLiteral)>, DocumentError> {
    mu.atoms()
        .iter()
        .map(|(p, w)| Ok((to_literal(p)?, rational_literal(w))))
        .collect()
}

impl MeasureDocument {
    pub fn from_measure(mu: &SignedMeasure) -> Result<Self, DocumentError> {
        Ok(MeasureDocument {
            format_version: FORMAT_VERSION,
            space: SpaceDescriptor::from_space(mu.space())?,
            atoms: atom_literals(mu)?,
        })
    }

    /// The canonical measure described by the document.
    pub fn to_measure(&self) -> Result<SignedMeasure, DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(self.format_version));
        }
        to_measure(&self.space.to_space()?, &self.atoms)
    }
}

pub fn parse_measure_document(text: &str) -> Result<SignedMeasure, DocumentError> {
    let doc: MeasureDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_measure()
}

/// Pretty-printed canonical text, ending in a newline.
pub fn serialize_measure_document(mu: &SignedMeasure) -> Result<String, DocumentError> {
    let doc = MeasureDocument::from_measure(mu)?;
    let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
    text.push('\n');
    Ok(text)
}
