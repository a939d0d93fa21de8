//! Binary field files.
//!
//! A file is one line of JSON (the [`FieldHeader`]) terminated by `\n`,
//! followed by the samples as little-endian `f64`. Nodes are stored in grid
//! order (time slowest, then x, y, z). Each node holds `re, im` for a scalar
//! field and `x.re, x.im, y.re, y.im, z.re, z.im` for a vector field. Nothing
//! may follow the last sample.

use std::io::{BufRead, BufReader, Read, Write};

use emcavity_core::{CVec3, Complex64, ScalarField, SpacetimeGrid, VectorField3};
use serde::{Deserialize, Serialize};

pub const MAGIC: &str = "emcavity-field";
pub const VERSION: u32 = 1;
const MAX_HEADER: u64 = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed header: {0}")]
    Header(#[from] serde_json::Error),
    #[error("not a field file (format tag {0:?})")]
    Magic(String),
    #[error("unsupported field file version {0}")]
    Version(u32),
    #[error("header line missing or longer than {MAX_HEADER} bytes")]
    HeaderLine,
    #[error("payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing bytes after payload")]
    Trailing,
    #[error("invalid field: {0}")]
    Field(#[from] emcavity_core::Error),
    #[error("expected a {expected} field, file holds a {found} field")]
    Kind { expected: &'static str, found: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Scalar,
    Vector,
}

impl FieldKind {
    pub fn label(self) -> &'static str {
        match self {
            FieldKind::Scalar => "scalar",
            FieldKind::Vector => "vector",
        }
    }

    fn doubles_per_node(self) -> usize {
        match self {
            FieldKind::Scalar => 2,
            FieldKind::Vector => 6,
        }
    }
}

/// Serialisable form of a [`SpacetimeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub origin: [f64; 3],
    pub n: [usize; 3],
    pub h: f64,
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "one")]
    pub dt: f64,
    #[serde(default = "one_usize")]
    pub nt: usize,
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

impl GridSpec {
    pub fn to_grid(&self) -> emcavity_core::Result<SpacetimeGrid> {
        SpacetimeGrid::new(self.origin, self.n, self.h, self.t0, self.dt, self.nt)
    }
}

impl From<&SpacetimeGrid> for GridSpec {
    fn from(g: &SpacetimeGrid) -> Self {
        Self { origin: g.origin(), n: g.n(), h: g.h(), t0: g.t0(), dt: g.dt(), nt: g.nt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub format: String,
    pub version: u32,
    pub kind: FieldKind,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Field {
    Scalar(ScalarField),
    Vector(VectorField3),
}

impl Field {
    pub fn grid(&self) -> &SpacetimeGrid {
        match self {
            Field::Scalar(f) => f.grid(),
            Field::Vector(f) => f.grid(),
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Field::Scalar(_) => FieldKind::Scalar,
            Field::Vector(_) => FieldKind::Vector,
        }
    }

    pub fn into_scalar(self) -> Result<ScalarField, FormatError> {
        match self {
            Field::Scalar(f) => Ok(f),
            Field::Vector(_) => Err(FormatError::Kind { expected: "scalar", found: "vector" }),
        }
    }

    pub fn into_vector(self) -> Result<VectorField3, FormatError> {
        match self {
            Field::Vector(f) => Ok(f),
            Field::Scalar(_) => Err(FormatError::Kind { expected: "vector", found: "scalar" }),
        }
    }
}

pub fn write_field<W: Write>(mut w: W, field: &Field, name: Option<&str>) -> Result<(), FormatError> {
    let header = FieldHeader {
        format: MAGIC.into(),
        version: VERSION,
        kind: field.kind(),
        grid: field.grid().into(),
        name: name.map(str::to_owned),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(field.grid().len() * field.kind().doubles_per_node() * 8);
    let mut push = |z: Complex64| {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    };
    match field {
        Field::Scalar(f) => f.values().iter().for_each(|&z| push(z)),
        Field::Vector(f) => f.values().iter().for_each(|v| v.0.iter().for_each(|&z| push(z))),
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_field<R: Read>(r: R) -> Result<(FieldHeader, Field), FormatError> {
    let mut r = BufReader::new(r);
    let mut line = Vec::new();
    (&mut r).take(MAX_HEADER).read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(FormatError::HeaderLine);
    }
    let header: FieldHeader = serde_json::from_slice(&line)?;
    if header.format != MAGIC {
        return Err(FormatError::Magic(header.format));
    }
    if header.version != VERSION {
        return Err(FormatError::Version(header.version));
    }
    let grid = header.grid.to_grid()?;
    let per = header.kind.doubles_per_node();
    let expected = grid.len() * per * 8;
    let mut payload = Vec::with_capacity(expected);
    (&mut r).take(expected as u64).read_to_end(&mut payload)?;
    if payload.len() != expected {
        return Err(FormatError::Truncated { expected, found: payload.len() });
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(FormatError::Trailing);
    }
    let doubles: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    let complex: Vec<Complex64> = doubles.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let field = match header.kind {
        FieldKind::Scalar => Field::Scalar(ScalarField::from_values(grid, complex)?),
        FieldKind::Vector => {
            let v = complex.chunks_exact(3).map(|c| CVec3([c[0], c[1], c[2]])).collect();
            Field::Vector(VectorField3::from_values(grid, v)?)
        }
    };
    Ok((header, field))
}

pub fn write_field_file(path: &std::path::Path, field: &Field, name: Option<&str>) -> Result<(), FormatError> {
    let f = std::fs::File::create(path)?;
    write_field(std::io::BufWriter::new(f), field, name)
}

pub fn read_field_file(path: &std::path::Path) -> Result<(FieldHeader, Field), FormatError> {
    read_field(std::fs::File::open(path)?)
}
