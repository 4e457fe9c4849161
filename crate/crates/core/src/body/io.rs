//! Body files: one JSON object per file, tagged by `kind`.
//!
//! ```text
//! {"kind":"vpolytope","vertices":[[0,0],[1,0],[0,1]]}
//! {"kind":"hpolytope","normals":[[1,0],[-1,0]],"offsets":[1,1]}
//! {"kind":"ball","center":[0,0],"radius":1}
//! {"kind":"ellipsoid","center":[0,0],"matrix":[[4,0],[0,1]]}
//! ```

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ConvexBody, Shape};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyFile {
    Vpolytope {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Hpolytope {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Ellipsoid {
        center: Vec<f64>,
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

fn vector(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

impl BodyFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }

    pub fn into_body(self) -> Result<ConvexBody> {
        let (body, name) = match self {
            BodyFile::Vpolytope { vertices, name } => {
                (ConvexBody::v_polytope(vertices.iter().map(|v| vector(v)).collect())?, name)
            }
            BodyFile::Hpolytope { normals, offsets, name } => {
                (ConvexBody::h_polytope(normals.iter().map(|v| vector(v)).collect(), offsets)?, name)
            }
            BodyFile::Ball { center, radius, name } => (ConvexBody::ball(vector(&center), radius)?, name),
            BodyFile::Ellipsoid { center, matrix, name } => {
                let n = center.len();
                if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidBody("ellipsoid matrix must be n x n".into()));
                }
                let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j]);
                (ConvexBody::ellipsoid(vector(&center), m)?, name)
            }
        };
        Ok(match name {
            Some(n) => body.with_name(n),
            None => body,
        })
    }

    pub fn from_body(body: &ConvexBody) -> Self {
        let name = body.name().map(str::to_owned);
        let rows = |vs: &[DVector<f64>]| vs.iter().map(|v| v.iter().copied().collect()).collect();
        match body.shape() {
            Shape::HPolytope(p) => BodyFile::Hpolytope {
                normals: p.facets.iter().map(|h| h.normal.iter().copied().collect()).collect(),
                offsets: p.facets.iter().map(|h| h.offset).collect(),
                name,
            },
            Shape::VPolytope(p) => BodyFile::Vpolytope { vertices: rows(&p.vertices), name },
            Shape::Ball { center, radius } => {
                BodyFile::Ball { center: center.iter().copied().collect(), radius: *radius, name }
            }
            Shape::Ellipsoid { center, matrix, .. } => BodyFile::Ellipsoid {
                center: center.iter().copied().collect(),
                matrix: matrix.row_iter().map(|r| r.iter().copied().collect()).collect(),
                name,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body files always serialize")
    }
}

pub fn parse_body(text: &str) -> Result<ConvexBody> {
    BodyFile::parse(text)?.into_body()
}

pub fn read_body(path: impl AsRef<Path>) -> Result<ConvexBody> {
    parse_body(&std::fs::read_to_string(path)?)
}
