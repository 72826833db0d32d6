//! JSON scene and mesh formats.
//!
//! Scene: `{"dimension": d, "terms": [{"coef": m, "type": "polytope", "points": [[…]]}
//! | {"coef": m, "type": "halfopen_box", "low": […], "high": […]}]}`; box bounds
//! may be the strings `"inf"` or `"-inf"`.
//!
//! Mesh: `{"vertices": [[…]], "cells": [[0,1,2], …], "values": […]}` with
//! optional per-vertex values; faces are closed on load.

use serde::{Deserialize, Serialize};

use crate::cf1d::Interval;
use crate::cfnd::{BoxCell, Cfnd, Generator};
use crate::complexes::{EmbeddedComplex, PlFunction};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Finite(f64),
    Named(NamedBound),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedBound {
    #[serde(rename = "inf", alias = "+inf")]
    Inf,
    #[serde(rename = "-inf")]
    NegInf,
}

impl Bound {
    fn value(self) -> f64 {
        match self {
            Bound::Finite(x) => x,
            Bound::Named(NamedBound::Inf) => f64::INFINITY,
            Bound::Named(NamedBound::NegInf) => f64::NEG_INFINITY,
        }
    }

    fn from_value(x: f64) -> Bound {
        if x == f64::INFINITY {
            Bound::Named(NamedBound::Inf)
        } else if x == f64::NEG_INFINITY {
            Bound::Named(NamedBound::NegInf)
        } else {
            Bound::Finite(x)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SceneTerm {
    #[serde(rename = "polytope")]
    Polytope { coef: i64, points: Vec<Vec<f64>> },
    #[serde(rename = "halfopen_box")]
    HalfOpenBox {
        coef: i64,
        low: Vec<Bound>,
        high: Vec<Bound>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub dimension: usize,
    pub terms: Vec<SceneTerm>,
}

impl SceneFile {
    pub fn to_cfnd(&self) -> Result<Cfnd> {
        let mut phi = Cfnd::zero(self.dimension);
        for term in &self.terms {
            match term {
                SceneTerm::Polytope { coef, points } => {
                    let pts = points.iter().map(|p| Vector::new(p.clone())).collect();
                    phi.push(*coef, Generator::Polytope(Polytope::new(pts)?))?;
                }
                SceneTerm::HalfOpenBox { coef, low, high } => {
                    let low: Vec<f64> = low.iter().map(|b| b.value()).collect();
                    let high: Vec<f64> = high.iter().map(|b| b.value()).collect();
                    phi.push(*coef, Generator::Box(BoxCell::half_open(&low, &high)?))?;
                }
            }
        }
        Ok(phi)
    }

    /// Inverse of [`SceneFile::to_cfnd`] for polytopes and half-open boxes.
    pub fn from_cfnd(phi: &Cfnd) -> Result<SceneFile> {
        let mut terms = Vec::new();
        for (coef, g) in phi.terms() {
            match g {
                Generator::Polytope(p) => terms.push(SceneTerm::Polytope {
                    coef: *coef,
                    points: p.points().iter().map(|v| v.coords().to_vec()).collect(),
                }),
                Generator::Box(b) => {
                    let half_open = |a: &Interval| a.lo_closed && !a.hi_closed && a.lo.is_finite();
                    if !b.axes().iter().all(half_open) {
                        return Err(Error::UnsupportedGenerator);
                    }
                    terms.push(SceneTerm::HalfOpenBox {
                        coef: *coef,
                        low: b.axes().iter().map(|a| Bound::from_value(a.lo)).collect(),
                        high: b.axes().iter().map(|a| Bound::from_value(a.hi)).collect(),
                    });
                }
            }
        }
        Ok(SceneFile {
            dimension: phi.dimension(),
            terms,
        })
    }
}

pub fn parse_scene(json: &str) -> Result<Cfnd> {
    let file: SceneFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("scene: {e}")))?;
    file.to_cfnd()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// A parsed mesh and its optional vertex filtration.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub complex: EmbeddedComplex,
    pub values: Option<PlFunction>,
}

pub fn parse_mesh(json: &str) -> Result<Mesh> {
    let file: MeshFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("mesh: {e}")))?;
    let complex = EmbeddedComplex::new(
        file.vertices.into_iter().map(Vector::new).collect(),
        file.cells,
    )?;
    let values = file
        .values
        .map(|v| PlFunction::new(&complex, v))
        .transpose()?;
    Ok(Mesh { complex, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_round_trip() {
        let json = r#"{"dimension": 2, "terms": [
            {"coef": 1, "type": "polytope", "points": [[0,0],[1,0],[0,2]]},
            {"coef": -1, "type": "polytope", "points": [[1,0],[0,2]]},
            {"coef": 2, "type": "halfopen_box", "low": [0, 0], "high": [1, "inf"]}
        ]}"#;
        let phi = parse_scene(json).unwrap();
        assert_eq!(phi.terms().len(), 3);
        assert_eq!(phi.evaluate(&Vector::new(vec![0.5, 100.0])), Ok(2));
        let back = SceneFile::from_cfnd(&phi).unwrap();
        let again = serde_json::to_string(&back).unwrap();
        assert_eq!(parse_scene(&again).unwrap(), phi);
    }

    #[test]
    fn scene_errors() {
        assert!(parse_scene("{").is_err());
        let bad = r#"{"dimension": 2, "terms": [{"coef": 1, "type": "polytope", "points": [[0,0,0]]}]}"#;
        assert!(matches!(parse_scene(bad), Err(Error::DimensionMismatch { .. })));
        let empty = r#"{"dimension": 3, "terms": []}"#;
        assert_eq!(parse_scene(empty).unwrap(), Cfnd::zero(3));
    }

    #[test]
    fn mesh_loading_closes_faces() {
        let json = r#"{"vertices": [[0,0],[1,0],[0,1]], "cells": [[0,1,2]], "values": [0, 1, 2]}"#;
        let mesh = parse_mesh(json).unwrap();
        assert_eq!(mesh.complex.cells().len(), 7);
        assert_eq!(mesh.values.unwrap().values(), &[0.0, 1.0, 2.0]);
        let no_values = r#"{"vertices": [[0,0]], "cells": [[0]]}"#;
        assert!(parse_mesh(no_values).unwrap().values.is_none());
    }
}
