//! Resolutions, cohomology groups and products.

pub mod carlson;
pub mod cohomology;
pub mod grmatrix;
pub mod modular;
pub mod products;
pub mod resolution;

pub use carlson::{carlson_module, syzygy_of_trivial};
pub use cohomology::{coboundary_matrix, cohomology, tate_cohomology, CohomologyGroup, CompleteResolution};
pub use grmatrix::GrMatrix;
pub use modular::ModularCohomology;
pub use products::{act_on_module_cocycle, cup_product, degree_one_value, restriction_map, CohomologyClass, ComparisonMap};
pub use resolution::{Resolution, Strategy};
