//! JSON interchange.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.
//! A channel document looks like
//!
//! ```json
//! {"repr": "kraus", "dim_in": 2, "dim_out": 2, "data": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}
//! ```
//!
//! where `data` is a list of Kraus operators (completely positive form) or
//! of `{"left": A, "right": B}` pairs for `X ↦ Σ A X B†`. A `"choi"`
//! document stores one matrix, and a `"stinespring"` document stores
//! `{"a": A, "b": B}` together with `"dim_env"`.
//!
//! Output documents carry `"schema_version": 1` and print every float with
//! 17 significant digits, so doubles survive a roundtrip exactly.

use crate::channel::{ChoiRep, KrausRep, Representation, StinespringRep, SuperOp};
use crate::error::{Error, Result};
use crate::numerics::{c64, ComplexMatrix, ComplexVector, DensityMatrix, DEFAULT_RANK_TOL};
use serde::{Deserialize, Serialize};
use std::io;

pub const SCHEMA_VERSION: u32 = 1;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausPair {
    pub left: JsonMatrix,
    pub right: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KrausData {
    CompletelyPositive(Vec<JsonMatrix>),
    Pairs(Vec<KrausPair>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StinespringData {
    pub a: JsonMatrix,
    pub b: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelDoc {
    Kraus {
        dim_in: usize,
        dim_out: usize,
        data: KrausData,
    },
    Choi {
        dim_in: usize,
        dim_out: usize,
        data: JsonMatrix,
    },
    Stinespring {
        dim_in: usize,
        dim_out: usize,
        dim_env: usize,
        data: StinespringData,
    },
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn vector_to_json(v: &ComplexVector) -> Vec<JsonComplex> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Reads a `rows × cols` matrix; `field` names it in error messages.
pub fn matrix_from_json(rows: &JsonMatrix, shape: (usize, usize), field: &str) -> Result<ComplexMatrix> {
    if rows.len() != shape.0 {
        return Err(Error::Json(format!(
            "{field} has {} rows, expected {}",
            rows.len(),
            shape.0
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(Error::Json(format!(
                "{field} row {i} has {} entries, expected {}",
                row.len(),
                shape.1
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::Json(format!("{field} entry ({i}, {j}) is not finite")));
            }
        }
    }
    Ok(ComplexMatrix::from_fn(shape.0, shape.1, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

/// A square matrix of any size.
pub fn square_matrix_from_json(rows: &JsonMatrix, field: &str) -> Result<ComplexMatrix> {
    matrix_from_json(rows, (rows.len(), rows.len()), field)
}

impl ChannelDoc {
    pub fn from_superop(op: &SuperOp, repr: Representation) -> Self {
        let (dim_in, dim_out) = (op.dim_in(), op.dim_out());
        match repr {
            Representation::Kraus => {
                let k = op.kraus();
                let data = if k.cp_symmetric() {
                    KrausData::CompletelyPositive(k.pairs().iter().map(|(a, _)| matrix_to_json(a)).collect())
                } else {
                    KrausData::Pairs(
                        k.pairs()
                            .iter()
                            .map(|(a, b)| KrausPair {
                                left: matrix_to_json(a),
                                right: matrix_to_json(b),
                            })
                            .collect(),
                    )
                };
                ChannelDoc::Kraus { dim_in, dim_out, data }
            }
            Representation::Choi => ChannelDoc::Choi {
                dim_in,
                dim_out,
                data: matrix_to_json(op.choi().matrix()),
            },
            Representation::Stinespring => {
                let s = op.stinespring();
                ChannelDoc::Stinespring {
                    dim_in,
                    dim_out,
                    dim_env: s.dim_env(),
                    data: StinespringData {
                        a: matrix_to_json(s.a()),
                        b: matrix_to_json(s.b()),
                    },
                }
            }
        }
    }

    pub fn to_superop(&self) -> Result<SuperOp> {
        match self {
            ChannelDoc::Kraus { dim_in, dim_out, data } => {
                let shape = (*dim_out, *dim_in);
                let pairs = match data {
                    KrausData::CompletelyPositive(ops) => ops
                        .iter()
                        .enumerate()
                        .map(|(j, a)| {
                            let m = matrix_from_json(a, shape, &format!("data[{j}]"))?;
                            Ok((m.clone(), m))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    KrausData::Pairs(ps) => ps
                        .iter()
                        .enumerate()
                        .map(|(j, p)| {
                            Ok((
                                matrix_from_json(&p.left, shape, &format!("data[{j}].left"))?,
                                matrix_from_json(&p.right, shape, &format!("data[{j}].right"))?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?,
                };
                Ok(SuperOp::from_kraus(KrausRep::new(*dim_in, *dim_out, pairs)?))
            }
            ChannelDoc::Choi { dim_in, dim_out, data } => {
                let d = dim_in * dim_out;
                let j = matrix_from_json(data, (d, d), "data")?;
                SuperOp::from_choi(ChoiRep::new(*dim_in, *dim_out, j)?, DEFAULT_RANK_TOL)
            }
            ChannelDoc::Stinespring {
                dim_in,
                dim_out,
                dim_env,
                data,
            } => {
                let shape = (dim_out * dim_env, *dim_in);
                let a = matrix_from_json(&data.a, shape, "data.a")?;
                let b = matrix_from_json(&data.b, shape, "data.b")?;
                Ok(SuperOp::from_stinespring(StinespringRep::new(
                    *dim_in, *dim_out, *dim_env, a, b,
                )?))
            }
        }
    }
}

/// Parses `text` as `T`, reporting the JSON path and line of any error.
pub fn from_str_with_path<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    parse_at(text, "", 0, 0)
}

/// Like [`from_str_with_path`] for a slice that starts at `line_offset`
/// lines and `column_offset` columns into the enclosing document, under
/// the JSON path `prefix`.
fn parse_at<'de, T: Deserialize<'de>>(
    text: &'de str,
    prefix: &str,
    line_offset: usize,
    column_offset: usize,
) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let line = inner.line() + line_offset;
        let column = if inner.line() <= 1 { inner.column() + column_offset } else { inner.column() };
        let path = match (prefix.is_empty(), path.as_str()) {
            (true, p) => p.to_string(),
            (false, ".") => prefix.to_string(),
            (false, p) if p.starts_with('[') => format!("{prefix}{p}"),
            (false, p) => format!("{prefix}.{p}"),
        };
        Error::Json(format!("at {path} (line {line}, column {column}): {inner}"))
    })
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum ReprTag {
    Kraus,
    Choi,
    Stinespring,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel<'a> {
    repr: ReprTag,
    dim_in: usize,
    dim_out: usize,
    #[serde(default)]
    dim_env: Option<usize>,
    #[serde(borrow)]
    data: &'a serde_json::value::RawValue,
    #[serde(default, rename = "schema_version")]
    _schema_version: Option<u32>,
}

/// Reads a channel document. The `data` field is parsed on its own so that
/// errors inside it still report their path and line.
pub fn parse_channel_doc(text: &str) -> Result<ChannelDoc> {
    let raw: RawChannel = from_str_with_path(text)?;
    let data = raw.data.get();
    let offset = data.as_ptr() as usize - text.as_ptr() as usize;
    let before = &text[..offset];
    let lines = before.matches('\n').count();
    let (lo, co) = (lines, before.len() - before.rfind('\n').map_or(0, |i| i + 1));
    Ok(match raw.repr {
        ReprTag::Kraus => {
            let pairs = data.trim_start().strip_prefix('[').is_some_and(|r| r.trim_start().starts_with('{'));
            let data = if pairs {
                KrausData::Pairs(parse_at(data, "data", lo, co)?)
            } else {
                KrausData::CompletelyPositive(parse_at(data, "data", lo, co)?)
            };
            ChannelDoc::Kraus { dim_in: raw.dim_in, dim_out: raw.dim_out, data }
        }
        ReprTag::Choi => ChannelDoc::Choi {
            dim_in: raw.dim_in,
            dim_out: raw.dim_out,
            data: parse_at(data, "data", lo, co)?,
        },
        ReprTag::Stinespring => ChannelDoc::Stinespring {
            dim_in: raw.dim_in,
            dim_out: raw.dim_out,
            dim_env: raw
                .dim_env
                .ok_or_else(|| Error::Json("stinespring document needs dim_env".into()))?,
            data: parse_at(data, "data", lo, co)?,
        },
    })
}

pub fn parse_channel(text: &str) -> Result<SuperOp> {
    parse_channel_doc(text)?.to_superop()
}

/// A density matrix document: a bare matrix or `{"data": matrix}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityDoc {
    Bare(JsonMatrix),
    Wrapped { data: JsonMatrix },
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    let rows = match from_str_with_path::<DensityDoc>(text)? {
        DensityDoc::Bare(m) | DensityDoc::Wrapped { data: m } => m,
    };
    DensityMatrix::new(square_matrix_from_json(&rows, "data")?)
}

/// Formats floats as `{:.16e}` (17 significant digits).
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactFloats;

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with [`ExactFloats`]. Non-finite floats are an error.
pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Json(e.to_string()))?;
    if has_null_float(&v) {
        return Err(Error::NonFinite);
    }
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser).map_err(|e| Error::Json(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| Error::Json(e.to_string()))
}

// serde_json turns NaN and ±∞ into null in a Value.
fn has_null_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null_float),
        serde_json::Value::Object(o) => o.values().any(has_null_float),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random::{random_map, random_channel};
    use crate::examples::werner_holevo_pair;
    use crate::numerics::max_abs;
    use crate::numerics::random::seeded_rng;

    #[test]
    fn roundtrip_every_representation() {
        let mut rng = seeded_rng(1);
        for op in [random_channel(2, 3, 2, &mut rng), random_map(3, 2, 2, &mut rng)] {
            for repr in [Representation::Kraus, Representation::Choi, Representation::Stinespring] {
                let text = to_string(&ChannelDoc::from_superop(&op, repr)).unwrap();
                let back = parse_channel(&text).unwrap();
                assert!(max_abs(&(back.choi().matrix() - op.choi().matrix())) < 1e-12, "{repr:?}");
            }
        }
    }

    #[test]
    fn floats_roundtrip_exactly() {
        let xs = [0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, -0.0, f64::MIN_POSITIVE, 123456789.12345679];
        let text = to_string(&xs.to_vec()).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        for (a, b) in xs.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(to_string(&vec![f64::NAN]), Err(Error::NonFinite)));
    }

    #[test]
    fn identity_kraus_document() {
        let text = r#"{"repr": "kraus", "dim_in": 2, "dim_out": 2, "data": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#;
        let op = parse_channel(text).unwrap();
        assert_eq!(op.choi_rank(1e-9), 1);
        assert!(op.is_admissible());
    }

    #[test]
    fn werner_holevo_choi_document_has_one_kraus_operator() {
        let (_, p1) = werner_holevo_pair(2).unwrap();
        let text = to_string(&ChannelDoc::from_superop(&p1, Representation::Choi)).unwrap();
        let op = parse_channel(&text).unwrap();
        assert_eq!(op.kraus().len(), 1);
    }

    #[test]
    fn ragged_row_is_named() {
        let text = r#"{"repr": "kraus", "dim_in": 2, "dim_out": 2, "data": [[[[1, 0], [0, 0]], [[0, 0]]]]}"#;
        let err = parse_channel(text).unwrap_err().to_string();
        assert!(err.contains("data[0] row 1"), "{err}");
    }

    #[test]
    fn type_errors_carry_path_and_line() {
        let text = "{\"repr\": \"choi\", \"dim_in\": 1, \"dim_out\": 1,\n \"data\": [[[1, \"x\"]]]}";
        let err = parse_channel(text).unwrap_err().to_string();
        assert!(err.contains("data[0][0][1]") && err.contains("line 2"), "{err}");
        let err = parse_channel(r#"{"repr": "other"}"#).unwrap_err().to_string();
        assert!(err.contains("malformed JSON"), "{err}");
    }

    #[test]
    fn density_documents() {
        let bare = "[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]";
        let wrapped = format!("{{\"data\": {bare}}}");
        assert_eq!(parse_density(bare).unwrap(), parse_density(&wrapped).unwrap());
        assert!(parse_density("[[[2, 0]]]").is_err());
    }
}
