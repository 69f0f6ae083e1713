//! The full circular-frame routing chain for one environment.

use thiserror::Error;

use crate::embed::{sew_and_realize, EmbedError, Embedding};
use crate::env::Environment;
use crate::frame::{CircularFrame, FrameError};
use crate::router::{route_all, RouterError, RoutingResult};
use crate::schema::{
    build_cut_forest, walk, CutForest, CutStrategy, EmstAttach, FrameBlueprint, SchemaError, WalkDirection,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("cut forest: {0}")]
    Schema(#[from] SchemaError),
    #[error("frame: {0}")]
    Frame(#[from] FrameError),
    #[error("routing: {0}")]
    Router(#[from] RouterError),
    #[error("embedding: {0}")]
    Embed(#[from] EmbedError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfOutcome {
    pub forest: CutForest,
    pub blueprint: FrameBlueprint,
    pub routing: RoutingResult,
    pub embedding: Embedding,
}

/// Cut forest, contour walk, chord routing and realization with the default
/// cut strategy.
pub fn route_circular_frame(env: &Environment, trace: bool) -> Result<CfOutcome, PipelineError> {
    route_circular_frame_with(env, &EmstAttach, trace)
}

pub fn route_circular_frame_with(
    env: &Environment,
    strategy: &dyn CutStrategy,
    trace: bool,
) -> Result<CfOutcome, PipelineError> {
    let forest = build_cut_forest(env, strategy)?;
    let blueprint = walk(env, &forest, WalkDirection::Anticlockwise)?;
    let frame = CircularFrame::from_blueprint(&blueprint)?;
    let routing = route_all(frame, trace)?;
    let embedding = sew_and_realize(&routing, &blueprint, env)?;
    Ok(CfOutcome {
        forest,
        blueprint,
        routing,
        embedding,
    })
}
