//! Reading measure files and parsing the textual flag formats.

use std::fs;
use std::path::{Path, PathBuf};

use bifree::schema::{Measure1DJson, PairJson, PlanarMeasureJson};
use bifree::{ComplexPoint, Measure1D, PlanarMeasure};
use serde::de::DeserializeOwned;

use crate::error::{usage, CliError, CliResult};

/// A measure file, recognised by its atom shape.
#[derive(Debug, Clone)]
pub enum AnyMeasure {
    Line(Measure1D),
    Plane(PlanarMeasure),
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn schema_err(path: &Path) -> impl Fn(bifree::Error) -> CliError + '_ {
    move |e| CliError::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn load_line(path: &Path, renormalize: bool) -> CliResult<Measure1D> {
    let json: Measure1DJson = parse(path, &read(path)?)?;
    json.to_measure(renormalize).map_err(schema_err(path))
}

pub fn load_plane(path: &Path, renormalize: bool) -> CliResult<PlanarMeasure> {
    let json: PlanarMeasureJson = parse(path, &read(path)?)?;
    json.to_measure(renormalize).map_err(schema_err(path))
}

/// Planar files carry `y` coordinates or a grid; anything else is read as a
/// measure on the line.
pub fn load_any(path: &Path, renormalize: bool) -> CliResult<AnyMeasure> {
    let text = read(path)?;
    if let Ok(json) = serde_json::from_str::<PlanarMeasureJson>(&text) {
        return json
            .to_measure(renormalize)
            .map(AnyMeasure::Plane)
            .map_err(schema_err(path));
    }
    let json: Measure1DJson = parse(path, &text)?;
    json.to_measure(renormalize)
        .map(AnyMeasure::Line)
        .map_err(schema_err(path))
}

pub fn load_line_pair(path: &Path, renormalize: bool) -> CliResult<bifree::CPair1D> {
    let json: PairJson<Measure1DJson> = parse(path, &read(path)?)?;
    Ok(bifree::CPair1D {
        sigma: json.phi.to_measure(renormalize).map_err(schema_err(path))?,
        mu: json.psi.to_measure(renormalize).map_err(schema_err(path))?,
    })
}

pub fn load_plane_pair(path: &Path, renormalize: bool) -> CliResult<bifree::CPair2D> {
    let json: PairJson<PlanarMeasureJson> = parse(path, &read(path)?)?;
    Ok(bifree::CPair2D {
        theta: json.phi.to_measure(renormalize).map_err(schema_err(path))?,
        eta: json.psi.to_measure(renormalize).map_err(schema_err(path))?,
    })
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: PathBuf::from(path),
        source,
    })
}

fn number(s: &str, what: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: cannot parse {s:?} as a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{what}: {s:?} is not finite")))
    }
}

/// `a:b:n` as `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(spec: &str, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(usage(format!(
            "{what}: expected start:end:count, got {spec:?}"
        )));
    };
    let (a, b) = (number(a, what)?, number(b, what)?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: count {n:?} is not a positive integer")))?;
    match n {
        0 => Err(usage(format!("{what}: count must be at least 1"))),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()),
    }
}

/// `--grid`: one axis `x0:x1:n` or two axes `x0:x1:n,y0:y1:m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
}

pub fn parse_grid(spec: &str) -> CliResult<Grid> {
    match spec.split_once(',') {
        None => Ok(Grid {
            x: linspace(spec, "--grid")?,
            y: None,
        }),
        Some((x, y)) => Ok(Grid {
            x: linspace(x, "--grid")?,
            y: Some(linspace(y, "--grid")?),
        }),
    }
}

fn complex(s: &str) -> CliResult<ComplexPoint> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("--at: expected re,im, got {s:?}")))?;
    Ok(ComplexPoint::new(number(re, "--at")?, number(im, "--at")?))
}

/// `--at re,im` for one variable.
pub fn parse_point(s: &str) -> CliResult<ComplexPoint> {
    complex(s)
}

/// `--at re,im;re,im` for two variables.
pub fn parse_point_pair(s: &str) -> CliResult<(ComplexPoint, ComplexPoint)> {
    let (z, w) = s
        .split_once(';')
        .ok_or_else(|| usage(format!("--at: expected re,im;re,im, got {s:?}")))?;
    Ok((complex(z)?, complex(w)?))
}
