//! Isometric embeddings of finite graph metrics into constant-curvature
//! model spaces.
//!
//! The crate decides whether a graph's shortest-path metric can be realized
//! exactly on a sphere, in Euclidean space or in hyperbolic space, builds
//! witness embeddings when it can, and audits the structural classification
//! of embeddable graphs against independent spectral and optimization
//! oracles.

pub mod classifier;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod space;

pub use graph::{
    classify_shape, construct_family, distance_matrix, parse_graph6, write_graph6, Distance,
    DistanceMatrix, Family, Graph, GraphError, ShapeFlags,
};
pub use space::{ModelSpace, SpaceError, SpaceKind, SpacePoint};
pub use oracle::{
    euclidean_feasibility, hyperbolic_feasibility, procrustes_align, sphere_feasibility,
    stress_minimize, verify_isometric, EmbedCertificate, Embedding, InfeasibleReason, OracleError,
};
pub use classifier::{
    decide_hadamard, decide_sphere, necessary_form, Decision, Mode, NecessaryForm, RadiusConstraint,
    Rationale, SphereOptions, Verdict,
};
pub use harness::{
    audit_hadamard, audit_sphere, enumerate_connected_graphs, write_report, AuditReport, ReportFormat,
};
