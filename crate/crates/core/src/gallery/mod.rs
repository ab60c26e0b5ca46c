//! Reproducible problem instances: the block-diagonal two-subspace family
//! with closed-form behaviour, its `m >= 3` extension by duplication, and
//! seeded random subspace/convex instances.

mod angle_block;
mod random_instances;

pub use angle_block::{make_angle_block, AngleBlockProblem, AngleRule, BlockLineSubspace};
pub use random_instances::{
    make_random_convex, make_random_subspaces, RandomConvexBundle, RandomSubspaceBundle,
};
