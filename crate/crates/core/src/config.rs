//! TOML scene configuration. Key names follow the simulator input list:
//! optics, image generation, sensor, boresight and catalogue sections.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::{
    parse_rso_catalog, parse_star_catalog, parse_tle, RsoEntry, RsoPhysical, StarEntry, TleRecord,
};
use crate::error::{Error, Result};
use crate::photometry::{RadiometryConfig, PLANCK_J_S, SUN_IRRADIANCE_W_M2, SUN_MAGNITUDE};
use crate::render::NoiseConfig;
use crate::sensor::{Attitude, CameraView, SensorModel};
use crate::time::Epoch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsSection {
    pub n_x: u32,
    pub n_y: u32,
    pub x_p_um: f64,
    pub y_p_um: f64,
    pub focal_length_um: f64,
    /// Defaults to the detector centre.
    pub principal_point_um: Option<[f64; 2]>,
}

const DEFAULT_ANCHOR: (f64, f64) = (6.5, 5_000.0);

fn one() -> f64 {
    1.0
}

fn unit_spread() -> [f64; 2] {
    [1.0, 1.0]
}

fn full_well() -> f64 {
    100_000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageGenerationSection {
    /// Gaussian PSF sigma in pixels, `[x, y]`.
    #[serde(default = "unit_spread")]
    pub pixel_spread_px: [f64; 2],
    pub t_int_s: f64,
    #[serde(default = "one")]
    pub lens_efficiency: f64,
    #[serde(default = "one")]
    pub quantum_efficiency: f64,
    #[serde(default = "full_well")]
    pub full_well_e: f64,
    /// Two half-exposures on alternating rows.
    #[serde(default)]
    pub interleaved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    pub star_magnitude_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AttitudeMode {
    /// The configured Euler angles for every frame.
    #[default]
    Fixed,
    /// Isotropic boresight, uniform roll.
    Random,
    /// Boresight near a randomly chosen RSO at mid-exposure, uniform roll.
    Target,
}

fn max_attempts() -> u32 {
    10_000
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoresightSection {
    #[serde(default)]
    pub mode: AttitudeMode,
    #[serde(default)]
    pub alpha0_deg: f64,
    #[serde(default)]
    pub delta0_deg: f64,
    #[serde(default)]
    pub phi0_deg: f64,
    /// Resample until at least one streak crosses the image.
    #[serde(default)]
    pub require_streak: bool,
    #[serde(default = "max_attempts")]
    pub max_attempts: u32,
    /// With `require_streak`, the qualifying streak's unclipped length must
    /// fall within these bounds.
    pub min_streak_px: Option<f64>,
    pub max_streak_px: Option<f64>,
    /// Target mode: maximum pointing offset as a fraction of the smaller half-FOV.
    #[serde(default = "half")]
    pub target_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub epoch: Epoch,
    /// Frame epochs are drawn uniformly from `[epoch, epoch + epoch_span_s]`.
    #[serde(default)]
    pub epoch_span_s: f64,
    /// Host satellite TLE; without it RSOs are not rendered.
    pub observer_line1: Option<String>,
    pub observer_line2: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiometrySection {
    pub sun_magnitude: f64,
    pub sun_irradiance_w_m2: f64,
    pub planck_j_s: f64,
    pub calibration_scale: Option<f64>,
    /// Magnitude/electron pair pinning the calibration scale. Without
    /// either form, magnitude 6.5 maps to 5000 e-.
    pub anchor_magnitude: Option<f64>,
    pub anchor_electrons: Option<f64>,
    pub albedo_area_term: bool,
}

impl Default for RadiometrySection {
    fn default() -> Self {
        RadiometrySection {
            sun_magnitude: SUN_MAGNITUDE,
            sun_irradiance_w_m2: SUN_IRRADIANCE_W_M2,
            planck_j_s: PLANCK_J_S,
            calibration_scale: None,
            anchor_magnitude: None,
            anchor_electrons: None,
            albedo_area_term: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CataloguesSection {
    /// Paths are relative to the configuration file.
    pub star_catalogue: Option<PathBuf>,
    pub rso_catalogue: Option<PathBuf>,
    pub radar_cross_section_m2: f64,
    pub rso_albedo: f64,
    pub rso_diffusion: f64,
}

impl Default for CataloguesSection {
    fn default() -> Self {
        let p = RsoPhysical::default();
        CataloguesSection {
            star_catalogue: None,
            rso_catalogue: None,
            radar_cross_section_m2: std::f64::consts::PI * p.radius_m * p.radius_m,
            rso_albedo: p.albedo,
            rso_diffusion: p.diffusion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub optics: OpticsSection,
    pub image_generation: ImageGenerationSection,
    pub sensor: SensorSection,
    pub boresight: BoresightSection,
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub radiometry: RadiometrySection,
    #[serde(default)]
    pub catalogues: CataloguesSection,
}

/// Mirror of [`NoiseConfig`] with per-key defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub sky_background_e: f64,
    pub read_noise_e: f64,
    pub dark_current_e_s: f64,
    pub gain_e_per_dn: f64,
    pub enable_shot_noise: bool,
}

impl Default for NoiseSection {
    fn default() -> Self {
        let n = NoiseConfig::default();
        NoiseSection {
            sky_background_e: n.sky_background_e,
            read_noise_e: n.read_noise_e,
            dark_current_e_s: n.dark_current_e_s,
            gain_e_per_dn: n.gain_e_per_dn,
            enable_shot_noise: n.enable_shot_noise,
        }
    }
}

impl SceneConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn noise(&self) -> NoiseConfig {
        let n = &self.noise;
        NoiseConfig {
            sky_background_e: n.sky_background_e,
            read_noise_e: n.read_noise_e,
            dark_current_e_s: n.dark_current_e_s,
            gain_e_per_dn: n.gain_e_per_dn,
            enable_shot_noise: n.enable_shot_noise,
        }
    }

    pub fn sensor_model(&self) -> Result<SensorModel> {
        let o = &self.optics;
        let g = &self.image_generation;
        for (what, v) in [
            ("lens efficiency", g.lens_efficiency),
            ("quantum efficiency", g.quantum_efficiency),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::range(what, v));
            }
        }
        let mut s = SensorModel {
            focal_length_um: o.focal_length_um,
            n_x: o.n_x,
            n_y: o.n_y,
            x_p_um: o.x_p_um,
            y_p_um: o.y_p_um,
            principal_point_um: (0.0, 0.0),
            t_int_s: g.t_int_s,
            psf_sigma_px: (g.pixel_spread_px[0], g.pixel_spread_px[1]),
            efficiency: g.lens_efficiency * g.quantum_efficiency,
            magnitude_limit: self.sensor.star_magnitude_limit,
            full_well_e: g.full_well_e,
            noise: self.noise(),
        };
        s.principal_point_um = match o.principal_point_um {
            Some([x, y]) => (x, y),
            None => s.detector_centre_um(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn radiometry(&self, sensor: &SensorModel) -> Result<RadiometryConfig> {
        let r = &self.radiometry;
        let base = RadiometryConfig {
            sun_magnitude: r.sun_magnitude,
            sun_irradiance_w_m2: r.sun_irradiance_w_m2,
            planck_j_s: r.planck_j_s,
            calibration_scale: r.calibration_scale.unwrap_or(1.0),
            albedo_area_term: r.albedo_area_term,
        };
        base.validate()?;
        match (r.calibration_scale, r.anchor_magnitude, r.anchor_electrons) {
            (Some(_), None, None) => Ok(base),
            (None, None, None) => base.anchored(sensor, DEFAULT_ANCHOR.0, DEFAULT_ANCHOR.1),
            (None, Some(m), Some(e)) => base.anchored(sensor, m, e),
            _ => Err(Error::Config(
                "radiometry: give either calibration_scale or both anchor_magnitude and anchor_electrons".into(),
            )),
        }
    }

    pub fn fixed_attitude(&self) -> Attitude {
        let b = &self.boresight;
        Attitude::from_degrees(b.alpha0_deg, b.delta0_deg, b.phi0_deg)
    }

    pub fn observer(&self) -> Result<Option<TleRecord>> {
        match (&self.scenario.observer_line1, &self.scenario.observer_line2) {
            (Some(l1), Some(l2)) => Ok(Some(parse_tle("observer", l1, l2)?)),
            (None, None) => Ok(None),
            _ => Err(Error::Config(
                "observer needs both observer_line1 and observer_line2".into(),
            )),
        }
    }

    pub fn rso_physical(&self) -> Result<RsoPhysical> {
        let c = &self.catalogues;
        if !(c.radar_cross_section_m2 > 0.0) {
            return Err(Error::range(
                "radar cross-section (m^2)",
                c.radar_cross_section_m2,
            ));
        }
        let p = RsoPhysical {
            radius_m: RsoPhysical::radius_from_cross_section(c.radar_cross_section_m2),
            albedo: c.rso_albedo,
            diffusion: c.rso_diffusion,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks every range and cross-field constraint without touching catalogues.
    pub fn validate(&self) -> Result<()> {
        let sensor = self.sensor_model()?;
        self.radiometry(&sensor)?;
        self.rso_physical()?;
        if let Some(tle) = self.observer()? {
            crate::propagation::TwoBody::new(&tle)?;
        }
        if !(self.scenario.epoch_span_s >= 0.0 && self.scenario.epoch_span_s.is_finite()) {
            return Err(Error::range("epoch span (s)", self.scenario.epoch_span_s));
        }
        let b = &self.boresight;
        if b.mode == AttitudeMode::Fixed {
            CameraView::new(&sensor, &self.fixed_attitude())?;
        }
        let (lo, hi) = (
            b.min_streak_px.unwrap_or(0.0),
            b.max_streak_px.unwrap_or(f64::INFINITY),
        );
        if !(lo >= 0.0 && hi >= lo) {
            return Err(Error::Config(format!(
                "invalid streak length bounds [{lo}, {hi}]"
            )));
        }
        if b.max_attempts == 0 {
            return Err(Error::Config("max_attempts must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&b.target_offset) {
            return Err(Error::range("target offset", b.target_offset));
        }
        if b.mode == AttitudeMode::Target && self.catalogues.rso_catalogue.is_none() {
            return Err(Error::Config("target mode needs an RSO catalogue".into()));
        }
        Ok(())
    }

    fn resolve(base_dir: &Path, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base_dir.join(p)
        }
    }

    pub fn load_stars(&self, base_dir: &Path) -> Result<Vec<StarEntry>> {
        let Some(rel) = &self.catalogues.star_catalogue else {
            return Ok(Vec::new());
        };
        let path = Self::resolve(base_dir, rel);
        let f = File::open(&path).map_err(|e| Error::io(&path, e))?;
        parse_star_catalog(BufReader::new(f))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn load_rsos(&self, base_dir: &Path) -> Result<Vec<RsoEntry>> {
        let Some(rel) = &self.catalogues.rso_catalogue else {
            return Ok(Vec::new());
        };
        let path = Self::resolve(base_dir, rel);
        let f = File::open(&path).map_err(|e| Error::io(&path, e))?;
        parse_rso_catalog(BufReader::new(f), self.rso_physical()?)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
