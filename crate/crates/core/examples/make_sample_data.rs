//! Regenerates the bundled synthetic catalogues under `data/`.
//!
//! cargo run -p streakbench-core --example make_sample_data -- data

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use streakbench_core::catalog::write_star_catalog;
use streakbench_core::synthetic::{
    synthetic_rso_population, synthetic_star_catalog, synthetic_tle, write_tle_file, OrbitElements,
};
use streakbench_core::Epoch;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&out)?;
    let epoch: Epoch = "2019-06-01T00:00:00Z".parse()?;

    let stars = synthetic_star_catalog(20_000, 7.5, 2019);
    write_star_catalog(BufWriter::new(File::create(out.join("stars.txt"))?), &stars)?;

    let rsos = synthetic_rso_population(500, 60_000, epoch, 2019)?;
    write_tle_file(BufWriter::new(File::create(out.join("rsos.tle"))?), &rsos)?;

    // Retrograde in the observer's plane, 200 km higher: frequent fast passes.
    let single = synthetic_tle(
        61_000,
        "EASY TARGET",
        epoch,
        &OrbitElements {
            inclination_deg: 92.65,
            raan_deg: 210.0,
            eccentricity: 0.001,
            arg_perigee_deg: 0.0,
            mean_anomaly_deg: 10.0,
            mean_motion_rev_day: 14.74,
        },
    )?;
    write_tle_file(
        BufWriter::new(File::create(out.join("single_rso.tle"))?),
        &[single],
    )?;

    // Host orbit similar to a Swarm spacecraft: near-polar, about 460 km.
    let observer = synthetic_tle(
        39_452,
        "OBSERVER",
        epoch,
        &OrbitElements {
            inclination_deg: 87.35,
            raan_deg: 30.0,
            eccentricity: 0.0003,
            arg_perigee_deg: 90.0,
            mean_anomaly_deg: 0.0,
            mean_motion_rev_day: 15.42,
        },
    )?;
    let (l1, l2) = observer.to_lines();
    println!("observer_line1 = \"{l1}\"\nobserver_line2 = \"{l2}\"");
    Ok(())
}
