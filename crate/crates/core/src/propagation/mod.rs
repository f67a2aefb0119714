//! Orbit propagation and observation geometry.
//!
//! Element sets are propagated as Keplerian two-body orbits of their mean
//! elements. The [`Propagator`] trait is the seam for a higher-fidelity
//! model.

mod geometry;
mod kepler;
mod sun;
mod two_body;

pub use geometry::{observation_geometry, radec_of, unit_vector, ObservationGeometry};
pub use kepler::solve_kepler;
pub use sun::sun_position;
pub use two_body::{propagate_two_body, Propagator, StateVector, TwoBody};

/// Earth gravitational parameter, km³/s².
pub const MU_EARTH_KM3_S2: f64 = 398_600.441_8;
/// Astronomical unit, km.
pub const AU_KM: f64 = 149_597_870.7;
/// Earth equatorial radius, km.
pub const EARTH_RADIUS_KM: f64 = 6378.137;
