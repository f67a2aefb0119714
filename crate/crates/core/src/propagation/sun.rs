use nalgebra::Vector3;

use super::AU_KM;
use crate::time::Epoch;

/// Geocentric equatorial position of the Sun in km.
///
/// Low-precision almanac series (mean longitude and mean anomaly with the
/// two leading equation-of-centre terms); direction good to about 0.01°
/// between 1950 and 2100.
pub fn sun_position(epoch: Epoch) -> Vector3<f64> {
    let n = epoch.julian_date() - 2_451_545.0;
    let mean_longitude = 280.460 + 0.985_647_4 * n;
    let g = (357.528 + 0.985_600_3 * n).to_radians();
    let lambda = (mean_longitude + 1.915 * g.sin() + 0.020 * (2.0 * g).sin()).to_radians();
    let distance_au = 1.000_14 - 0.016_71 * g.cos() - 0.000_14 * (2.0 * g).cos();
    let obliquity = (23.439 - 0.000_000_4 * n).to_radians();
    let (sl, cl) = lambda.sin_cos();
    let r = distance_au * AU_KM;
    Vector3::new(r * cl, r * obliquity.cos() * sl, r * obliquity.sin() * sl)
}
