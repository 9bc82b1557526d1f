//! 0/1 point-set algebra, exact facet enumeration, slack matrices and
//! extension-complexity brackets, composition certificates, and G(n,p)
//! experiments.

mod certificates;
mod formulation;
mod gnp;
mod hull;
mod linalg;
mod points;
mod slack;

pub use certificates::{
    affine_reencode, is_decomposable, is_pyramid, pyramid_with_apex, AffineMap, DecompositionCertificate,
    PyramidCertificate,
};
pub use formulation::{
    build_hard_family, canonical, coord_name, feasible_points, formulation_of_plus, points_formulation,
    product_formulation, stab_formulation, HardFamilyResult, DEFAULT_FORMULATION_CAP,
};
pub use gnp::{alpha, diestel_bound, gnp_experiment, sample_gnp, sample_gnp_stream, GnpRow, MAX_ALPHA_VERTICES};
pub use hull::{convex_hull_facets, HPolytope, Halfspace, DEFAULT_HULL_CAP};
pub use points::{
    cartesian_power, cartesian_product, fresh_label, graph_plus, plus_operator, stab_vertices, PointSet,
    DEFAULT_STAB_CAP, MAX_POINTS,
};
pub use slack::{
    nn_rank_ub, rectangle_cover_lb, slack_matrix, xc_bracket, SlackMatrix, SlackRow, XcBracket, XcReport,
    DEFAULT_COVER_CAP,
};
