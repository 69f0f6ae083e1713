//! Routing environments: a rectangle punctured by paired start/end terminals.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Point, EPS};

pub const DEFAULT_RADIUS: f64 = 0.5;
pub const DEFAULT_MIN_SEPARATION: f64 = 1.5;
pub const DEFAULT_MIN_BOUNDARY_CLEARANCE: f64 = 0.5;
/// Vertical spacing of fixed start pins on the right boundary.
pub const PIN_PITCH: f64 = 8.0;
/// Sampling budget for one environment.
pub const MAX_SAMPLING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(&'static str),
    #[error("rejection sampling gave up after {attempts} attempts with {placed} terminals placed")]
    GenerationFailed { attempts: usize, placed: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Bounds {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// The experiment's square, `[-50, 50] x [-50, 50]`.
    pub const fn square50() -> Self {
        Bounds::new(-50.0, 50.0, -50.0, 50.0)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.width() + self.height())
    }

    pub fn is_valid(&self) -> bool {
        [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min - EPS
            && p.x <= self.x_max + EPS
            && p.y >= self.y_min - EPS
            && p.y <= self.y_max + EPS
    }

    /// Distance from an inside point to the nearest side.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        (p.x - self.x_min)
            .min(self.x_max - p.x)
            .min(p.y - self.y_min)
            .min(self.y_max - p.y)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.contains(p) && self.distance_to_boundary(p).abs() < EPS
    }

    /// Arclength position of a boundary point, walking anticlockwise from the
    /// corner `(x_max, y_min)`: up the right side, left along the top, down the
    /// left side, right along the bottom.
    pub fn boundary_parameter(&self, p: Point) -> f64 {
        let (w, h) = (self.width(), self.height());
        let right = (self.x_max - p.x).abs();
        let top = (self.y_max - p.y).abs();
        let left = (p.x - self.x_min).abs();
        let bottom = (p.y - self.y_min).abs();
        let m = right.min(top).min(left).min(bottom);
        if m == right {
            p.y - self.y_min
        } else if m == top {
            h + (self.x_max - p.x)
        } else if m == left {
            h + w + (self.y_max - p.y)
        } else {
            2.0 * h + w + (p.x - self.x_min)
        }
    }

    /// Corners in anticlockwise order starting at `(x_max, y_min)`.
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_max, self.y_max),
            Point::new(self.x_min, self.y_max),
            Point::new(self.x_min, self.y_min),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TerminalKind {
    Start,
    End,
}

/// Identifies one terminal: net index (1-based) plus start or end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TerminalId {
    pub net: usize,
    pub kind: TerminalKind,
}

impl fmt::Display for TerminalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TerminalKind::Start => write!(f, "s{}", self.net),
            TerminalKind::End => write!(f, "t{}", self.net),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terminal {
    pub net: usize,
    pub kind: TerminalKind,
    pub center: Point,
    pub radius: f64,
}

impl Terminal {
    pub fn id(&self) -> TerminalId {
        TerminalId {
            net: self.net,
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub bounds: Bounds,
    pub starts: Vec<Terminal>,
    pub ends: Vec<Terminal>,
    pub seed: u64,
    pub min_separation: f64,
    pub min_boundary_clearance: f64,
}

impl Environment {
    /// Builds an environment from raw centers; nets are numbered from 1 in order.
    pub fn from_centers(
        bounds: Bounds,
        radius: f64,
        starts: &[Point],
        ends: &[Point],
        seed: u64,
    ) -> Self {
        let mk = |kind, pts: &[Point]| {
            pts.iter()
                .enumerate()
                .map(|(i, &center)| Terminal {
                    net: i + 1,
                    kind,
                    center,
                    radius,
                })
                .collect()
        };
        Environment {
            bounds,
            starts: mk(TerminalKind::Start, starts),
            ends: mk(TerminalKind::End, ends),
            seed,
            min_separation: DEFAULT_MIN_SEPARATION,
            min_boundary_clearance: DEFAULT_MIN_BOUNDARY_CLEARANCE,
        }
    }

    pub fn net_count(&self) -> usize {
        self.starts.len()
    }

    pub fn terminals(&self) -> impl Iterator<Item = &Terminal> + '_ {
        self.starts.iter().chain(self.ends.iter())
    }

    pub fn terminal(&self, id: TerminalId) -> Option<&Terminal> {
        let list = match id.kind {
            TerminalKind::Start => &self.starts,
            TerminalKind::End => &self.ends,
        };
        id.net.checked_sub(1).and_then(|i| list.get(i))
    }

    pub fn is_boundary_terminal(&self, t: &Terminal) -> bool {
        self.bounds.on_boundary(t.center)
    }

    pub fn interior_terminals(&self) -> impl Iterator<Item = &Terminal> + '_ {
        self.terminals()
            .filter(move |t| !self.is_boundary_terminal(t))
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = validate(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    InvalidBounds,
    CountMismatch {
        starts: usize,
        ends: usize,
    },
    NetNumbering {
        id: TerminalId,
        position: usize,
    },
    NonFinite {
        id: TerminalId,
    },
    BadRadius {
        id: TerminalId,
        radius: f64,
    },
    OutOfBounds {
        id: TerminalId,
    },
    TooClose {
        a: TerminalId,
        b: TerminalId,
        distance: f64,
        min: f64,
    },
    TooCloseToBoundary {
        id: TerminalId,
        distance: f64,
        min: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidBounds => write!(f, "bounds are empty or non-finite"),
            Violation::CountMismatch { starts, ends } => {
                write!(f, "{starts} start terminals but {ends} end terminals")
            }
            Violation::NetNumbering { id, position } => {
                write!(f, "{id} stored at position {position}")
            }
            Violation::NonFinite { id } => write!(f, "{id} has a non-finite center"),
            Violation::BadRadius { id, radius } => write!(f, "{id} has radius {radius}"),
            Violation::OutOfBounds { id } => write!(f, "{id} lies outside the bounds"),
            Violation::TooClose {
                a,
                b,
                distance,
                min,
            } => {
                write!(f, "{a} and {b} are {distance:.6} apart (min {min})")
            }
            Violation::TooCloseToBoundary { id, distance, min } => {
                write!(f, "{id} is {distance:.6} from the boundary (min {min})")
            }
        }
    }
}

/// Checks every environment invariant and lists all violations found.
///
/// Terminals lying exactly on the boundary are boundary terminals and are exempt
/// from the boundary-clearance rule.
pub fn validate(env: &Environment) -> Vec<Violation> {
    let mut out = Vec::new();
    if !env.bounds.is_valid() {
        out.push(Violation::InvalidBounds);
        return out;
    }
    if env.starts.len() != env.ends.len() {
        out.push(Violation::CountMismatch {
            starts: env.starts.len(),
            ends: env.ends.len(),
        });
    }
    for (kind, list) in [
        (TerminalKind::Start, &env.starts),
        (TerminalKind::End, &env.ends),
    ] {
        for (i, t) in list.iter().enumerate() {
            if t.net != i + 1 || t.kind != kind {
                out.push(Violation::NetNumbering {
                    id: t.id(),
                    position: i,
                });
            }
        }
    }
    let terms: Vec<&Terminal> = env.terminals().collect();
    let mut usable = Vec::with_capacity(terms.len());
    for t in &terms {
        if !t.center.is_finite() {
            out.push(Violation::NonFinite { id: t.id() });
            continue;
        }
        if !(t.radius > 0.0 && t.radius.is_finite()) {
            out.push(Violation::BadRadius {
                id: t.id(),
                radius: t.radius,
            });
        }
        if !env.bounds.contains(t.center) {
            out.push(Violation::OutOfBounds { id: t.id() });
            continue;
        }
        if !env.bounds.on_boundary(t.center) {
            let d = env.bounds.distance_to_boundary(t.center);
            if d < env.min_boundary_clearance - EPS {
                out.push(Violation::TooCloseToBoundary {
                    id: t.id(),
                    distance: d,
                    min: env.min_boundary_clearance,
                });
            }
        }
        usable.push(*t);
    }
    for (i, a) in usable.iter().enumerate() {
        for b in &usable[i + 1..] {
            let gap = a.center - b.center;
            if gap.x.abs() >= env.min_separation || gap.y.abs() >= env.min_separation {
                continue;
            }
            let d = gap.norm();
            if d < env.min_separation - EPS {
                out.push(Violation::TooClose {
                    a: a.id(),
                    b: b.id(),
                    distance: d,
                    min: env.min_separation,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPlacement {
    /// Pins on `x = x_max`, [`PIN_PITCH`] apart and centred vertically.
    RightBoundaryFixed,
    /// Starts are sampled like ends.
    RandomInterior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub bounds: Bounds,
    pub radius: f64,
    pub min_separation: f64,
    pub min_boundary_clearance: f64,
    pub start_placement: StartPlacement,
}

impl Default for GenParams {
    /// Eight nets in the 100 x 100 square with the experiment's separations.
    fn default() -> Self {
        GenParams {
            n: 8,
            bounds: Bounds::square50(),
            radius: DEFAULT_RADIUS,
            min_separation: DEFAULT_MIN_SEPARATION,
            min_boundary_clearance: DEFAULT_MIN_BOUNDARY_CLEARANCE,
            start_placement: StartPlacement::RightBoundaryFixed,
        }
    }
}

impl GenParams {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn check(&self) -> Result<(), EnvError> {
        if !self.bounds.is_valid() {
            return Err(EnvError::InvalidParams("bounds are empty or non-finite"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(EnvError::InvalidParams("radius must be positive"));
        }
        if !(self.min_separation > 2.0 * self.radius) {
            return Err(EnvError::InvalidParams(
                "min separation must exceed twice the radius",
            ));
        }
        if !(self.min_boundary_clearance >= 0.0) {
            return Err(EnvError::InvalidParams(
                "boundary clearance must be non-negative",
            ));
        }
        if 2.0 * self.min_boundary_clearance >= self.bounds.width().min(self.bounds.height()) {
            return Err(EnvError::InvalidParams(
                "boundary clearance leaves no interior",
            ));
        }
        if self.start_placement == StartPlacement::RightBoundaryFixed
            && self.n as f64 * PIN_PITCH > self.bounds.height() - 2.0 * self.min_boundary_clearance
        {
            return Err(EnvError::InvalidParams(
                "fixed start pins do not fit on the right boundary",
            ));
        }
        Ok(())
    }

    /// Fixed pin centers, top to bottom: `(x_max, c + 4(n-1) - 8k)`.
    pub fn fixed_start_pins(&self) -> Vec<Point> {
        let c = 0.5 * (self.bounds.y_min + self.bounds.y_max);
        let top = c + 0.5 * PIN_PITCH * (self.n as f64 - 1.0);
        (0..self.n)
            .map(|k| Point::new(self.bounds.x_max, top - PIN_PITCH * k as f64))
            .collect()
    }
}

/// Deterministically generates an environment from `(params, seed)`.
pub fn generate(params: &GenParams, seed: u64) -> Result<Environment, EnvError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = params.bounds;
    let mut placed: Vec<Point> = Vec::with_capacity(2 * params.n);
    let mut attempts = 0usize;

    let mut sample = |placed: &mut Vec<Point>, rng: &mut ChaCha8Rng| -> Result<Point, EnvError> {
        loop {
            if attempts >= MAX_SAMPLING_ATTEMPTS {
                return Err(EnvError::GenerationFailed {
                    attempts,
                    placed: placed.len(),
                });
            }
            attempts += 1;
            let p = Point::new(
                rng.gen_range(b.x_min..=b.x_max),
                rng.gen_range(b.y_min..=b.y_max),
            );
            if b.distance_to_boundary(p) < params.min_boundary_clearance {
                continue;
            }
            if placed.iter().all(|q| q.dist(p) >= params.min_separation) {
                placed.push(p);
                return Ok(p);
            }
        }
    };

    let starts = match params.start_placement {
        StartPlacement::RightBoundaryFixed => {
            let pins = params.fixed_start_pins();
            placed.extend_from_slice(&pins);
            pins
        }
        StartPlacement::RandomInterior => {
            let mut v = Vec::with_capacity(params.n);
            for _ in 0..params.n {
                v.push(sample(&mut placed, &mut rng)?);
            }
            v
        }
    };
    let mut ends = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        ends.push(sample(&mut placed, &mut rng)?);
    }
    let mut env = Environment::from_centers(b, params.radius, &starts, &ends, seed);
    env.min_separation = params.min_separation;
    env.min_boundary_clearance = params.min_boundary_clearance;
    Ok(env)
}
