//! Star and RSO catalogues.

mod rso;
mod stars;
mod tle;

pub use rso::{parse_rso_catalog, RsoEntry, RsoPhysical};
pub use stars::{filter_visible, parse_star_catalog, write_star_catalog, StarEntry};
pub use tle::{checksum, parse_tle, parse_tle_file, TleRecord};
