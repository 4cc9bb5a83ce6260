//! Homogeneous points, lines, conics and projective maps over ℂ.

mod conic;
mod element;
mod map;

pub use conic::{
    are_collinear, conic_conic_intersect, conic_contains, conic_tangent_to_5, conic_through_5,
    line_conic_intersect, second_intersection, six_on_conic_test, tangent_line_at,
    tangents_from_point, Conic, ConicIntersection, Pair,
};
pub(crate) use conic::{pencil_cubic, rank2_quality};
pub use element::{collinearity, concurrency, join, meet, ProjLine, ProjPoint};
pub use map::{proj_map_from_4, ProjMap, Transform};
