//! JSON documents for environments and routes.

use std::path::Path;

use circframe_core::env::{Bounds, Environment, Terminal, Violation};
use circframe_core::geom::{Point, Polyline};
use circframe_core::schema::CutForest;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid environment: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("{0}")]
    Shape(String),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsDoc {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Environment file. Nets are numbered from 1 in list order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvDoc {
    pub bounds: BoundsDoc,
    pub radius: f64,
    pub starts: Vec<[f64; 2]>,
    pub ends: Vec<[f64; 2]>,
    pub seed: u64,
    pub min_separation: f64,
    pub min_boundary_clearance: f64,
}

impl EnvDoc {
    pub fn from_env(env: &Environment) -> Self {
        let b = env.bounds;
        let radius = env.terminals().map(|t| t.radius).next().unwrap_or(0.0);
        let pts = |ts: &[Terminal]| ts.iter().map(|t| [t.center.x, t.center.y]).collect();
        EnvDoc {
            bounds: BoundsDoc {
                x_min: b.x_min,
                x_max: b.x_max,
                y_min: b.y_min,
                y_max: b.y_max,
            },
            radius,
            starts: pts(&env.starts),
            ends: pts(&env.ends),
            seed: env.seed,
            min_separation: env.min_separation,
            min_boundary_clearance: env.min_boundary_clearance,
        }
    }

    /// Builds the environment and checks every invariant.
    pub fn to_env(&self) -> Result<Environment, IoError> {
        let b = self.bounds;
        let bounds = Bounds {
            x_min: b.x_min,
            x_max: b.x_max,
            y_min: b.y_min,
            y_max: b.y_max,
        };
        let pts = |v: &[[f64; 2]]| v.iter().map(|&[x, y]| Point::new(x, y)).collect::<Vec<_>>();
        let mut env = Environment::from_centers(bounds, self.radius, &pts(&self.starts), &pts(&self.ends), self.seed);
        env.min_separation = self.min_separation;
        env.min_boundary_clearance = self.min_boundary_clearance;
        env.validate().map_err(IoError::Invalid)?;
        Ok(env)
    }
}

pub fn save_env(env: &Environment) -> String {
    serde_json::to_string_pretty(&EnvDoc::from_env(env)).expect("environment serializes")
}

pub fn load_env(text: &str) -> Result<Environment, IoError> {
    serde_json::from_str::<EnvDoc>(text)?.to_env()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteDoc {
    pub net: usize,
    pub points: Vec<[f64; 2]>,
}

/// Routes file written by `route` and read by `render`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutesDoc {
    pub algorithm: String,
    pub seed: u64,
    pub success: bool,
    pub routes: Vec<RouteDoc>,
    /// Cut edges as `[[x0, y0], [x1, y1]]`, present for circular-frame routes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cuts: Vec<[[f64; 2]; 2]>,
}

impl RouteDoc {
    pub fn new(net: usize, line: &Polyline) -> Self {
        RouteDoc {
            net,
            points: line.vertices().iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn polyline(&self) -> Result<Polyline, IoError> {
        Polyline::new(self.points.iter().map(|&[x, y]| Point::new(x, y)).collect())
            .map_err(|e| IoError::Shape(format!("route of net {}: {e}", self.net)))
    }
}

/// Cut edges in the `cuts` field layout.
pub fn cut_lines(forest: &CutForest) -> Vec<[[f64; 2]; 2]> {
    forest
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (e.segment.a(), e.segment.b());
            [[a.x, a.y], [b.x, b.y]]
        })
        .collect()
}

pub fn save_routes(doc: &RoutesDoc) -> String {
    serde_json::to_string_pretty(doc).expect("routes serialize")
}

pub fn load_routes(text: &str) -> Result<RoutesDoc, IoError> {
    let doc: RoutesDoc = serde_json::from_str(text)?;
    for r in &doc.routes {
        r.polyline()?;
    }
    Ok(doc)
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use circframe_core::env::{generate, GenParams};

    #[test]
    fn environments_round_trip() {
        for seed in 0..100 {
            let env = generate(&GenParams::default(), seed).unwrap();
            assert_eq!(load_env(&save_env(&env)).unwrap(), env);
        }
    }

    #[test]
    fn empty_document_is_a_parse_error() {
        assert!(matches!(load_env(""), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_error_reports_location() {
        let text = "{\n  \"bounds\": {\n    \"x_min\": oops\n";
        match load_env(text) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unequal_terminal_counts_fail_validation() {
        let env = generate(&GenParams::default(), 3).unwrap();
        let mut doc = EnvDoc::from_env(&env);
        doc.ends.pop();
        assert!(matches!(doc.to_env(), Err(IoError::Invalid(_))));
    }

    #[test]
    fn routes_round_trip() {
        let line = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 2.0)]).unwrap();
        let doc = RoutesDoc {
            algorithm: "cf".into(),
            seed: 4,
            success: true,
            routes: vec![RouteDoc::new(1, &line)],
            cuts: vec![[[0.0, 0.0], [50.0, 0.0]]],
        };
        let back = load_routes(&save_routes(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.routes[0].polyline().unwrap(), line);
    }
}
