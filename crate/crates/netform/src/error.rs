use thiserror::Error;

use crate::graph::PlayerId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {0} is not part of the network")]
    InvalidNode(PlayerId),
    #[error("self-loops are not allowed (node {0})")]
    SelfLoop(PlayerId),
    #[error("edge ({0}, {1}) already present")]
    EdgeExists(PlayerId, PlayerId),
    #[error("edge ({0}, {1}) not present")]
    EdgeMissing(PlayerId, PlayerId),
    #[error("instance too large: {n} nodes exceeds guard of {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("degree sequence has odd stub total")]
    OddDegreeSum,
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty node set")]
    EmptySet,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config error: {0}")]
    Config(String),
}
