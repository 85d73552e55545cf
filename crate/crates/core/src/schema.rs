//! JSON interchange formats for measures.
//!
//! One-variable: `{"atoms": [{"x", "m"}], "density": [{"x", "w"}]}`.
//! Planar: `{"atoms": [{"x", "y", "m"}], "grid": {"x": [...], "y": [...], "w": [[...]]}}`.
//! Pairs for the conditionally free convolutions: `{"phi": <measure>, "psi": <measure>}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measure::{Atom1D, DensityGrid, Measure1D, MeasureOptions, PlanarAtom, PlanarMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub x: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityNodeJson {
    pub x: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Measure1DJson {
    #[serde(default)]
    pub atoms: Vec<AtomJson>,
    #[serde(default)]
    pub density: Vec<DensityNodeJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarAtomJson {
    pub x: f64,
    pub y: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarMeasureJson {
    #[serde(default)]
    pub atoms: Vec<PlanarAtomJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<DensityGrid>,
}

/// A pair of distributions under the states `φ` and `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson<M> {
    pub phi: M,
    pub psi: M,
}

impl Measure1DJson {
    pub fn to_measure(&self, renormalize: bool) -> Result<Measure1D> {
        Measure1D::with_options(
            self.atoms.iter().map(|a| Atom1D::new(a.x, a.m)).collect(),
            self.density.iter().map(|d| (d.x, d.w)).collect(),
            MeasureOptions {
                renormalize,
                support: None,
            },
        )
    }
}

impl From<&Measure1D> for Measure1DJson {
    fn from(m: &Measure1D) -> Self {
        Self {
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    x: a.location,
                    m: a.mass,
                })
                .collect(),
            density: m
                .density()
                .iter()
                .map(|&(x, w)| DensityNodeJson { x, w })
                .collect(),
        }
    }
}

impl PlanarMeasureJson {
    pub fn to_measure(&self, renormalize: bool) -> Result<PlanarMeasure> {
        PlanarMeasure::with_options(
            self.atoms
                .iter()
                .map(|a| PlanarAtom::new(a.x, a.y, a.m))
                .collect(),
            self.grid.clone(),
            renormalize,
        )
    }
}

impl From<&PlanarMeasure> for PlanarMeasureJson {
    fn from(m: &PlanarMeasure) -> Self {
        Self {
            atoms: m
                .atoms()
                .iter()
                .map(|a| PlanarAtomJson {
                    x: a.x,
                    y: a.y,
                    m: a.mass,
                })
                .collect(),
            grid: m.grid().cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_round_trip() {
        let text = r#"{"atoms":[{"x":0,"m":0.125},{"x":1,"m":0.875}]}"#;
        let parsed: Measure1DJson = serde_json::from_str(text).unwrap();
        let mu = parsed.to_measure(false).unwrap();
        assert_eq!(mu.mass_at(1.0), 0.875);
        let back = Measure1DJson::from(&mu);
        let again: Measure1DJson =
            serde_json::from_str(&serde_json::to_string(&back).unwrap()).unwrap();
        assert_eq!(again.to_measure(false).unwrap(), mu);
    }

    #[test]
    fn planar_round_trip_with_grid() {
        let text = r#"{"atoms":[{"x":1,"y":1,"m":0.5}],
                       "grid":{"x":[0,1],"y":[0],"w":[[0.25],[0.25]]}}"#;
        let parsed: PlanarMeasureJson = serde_json::from_str(text).unwrap();
        let eta = parsed.to_measure(false).unwrap();
        let back = PlanarMeasureJson::from(&eta);
        let text = serde_json::to_string(&back).unwrap();
        let again: PlanarMeasureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(again.to_measure(false).unwrap(), eta);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<Measure1DJson>(r#"{"atoms":[{"x":0,"mass":1}]}"#).is_err());
    }

    #[test]
    fn pairs_parse() {
        let text = r#"{"phi":{"atoms":[{"x":0,"m":1}]},"psi":{"atoms":[{"x":1,"m":1}]}}"#;
        let p: PairJson<Measure1DJson> = serde_json::from_str(text).unwrap();
        assert_eq!(p.psi.to_measure(false).unwrap(), Measure1D::dirac(1.0));
    }
}
