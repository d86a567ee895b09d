//! Surfaces, their fundamental groupoid and exact path diagrams.

mod diagram;
mod intersect;
mod polygon;
mod spec;
mod split;
mod word;

pub use diagram::{
    based_loop_from_word, boundary_walk, diagram_from_word, word_of_diagram, End, PathDiagram,
    SideCrossing, Stubs,
};
pub use intersect::{
    algebraic_intersection, intersection_data, realize_pair, smoothing_diagram, Crossing,
    EndpointRelation, IntersectionData, PathLocation, Split,
};
pub use polygon::{cross, orient, polygon_model, q, q_from_str, q_to_string, PolygonModel, Point, Side, Q};
pub use spec::SurfaceSpec;
pub use split::{canonical_pieces, split_canonical, PieceKind, SplitPiece, Splitting};
pub use word::{Generator, GeneratorWord, Letter};
