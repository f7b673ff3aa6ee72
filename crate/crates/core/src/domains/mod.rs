//! Benchmark problem models.

pub mod blocks;
pub mod grid;
pub mod pancake;
pub mod tiles;
pub mod tree;
pub mod vacuum;

pub use blocks::{BlocksDomain, BlocksInstance, BlocksVariant};
pub use grid::{GridCost, GridDomain, GridInstance, GridMap};
pub use pancake::{PancakeCost, PancakeDomain, PancakeInstance};
pub use tiles::{TileCost, TilesDomain, TilesInstance};
pub use vacuum::{VacuumCost, VacuumDomain, VacuumInstance};
