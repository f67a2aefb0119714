use std::f64::consts::SQRT_2;

use super::Frame;
use crate::sensor::Pixel;

/// Half-width of the rendered PSF support, in sigmas.
pub const PSF_SUPPORT_SIGMA: f64 = 5.0;
/// Annotation padding around streak endpoints, in sigmas.
const ANNOTATION_PAD_SIGMA: f64 = 3.0;

/// Fraction of a unit 1-D Gaussian centred at `centre` falling in `[lo, hi)`.
#[inline]
fn gaussian_mass(lo: f64, hi: f64, centre: f64, sigma: f64) -> f64 {
    let k = 1.0 / (SQRT_2 * sigma);
    0.5 * (libm::erf((hi - centre) * k) - libm::erf((lo - centre) * k))
}

/// Pixel index range overlapping `[centre - half, centre + half]`, clipped.
fn support(centre: f64, half: f64, len: u32) -> Option<(usize, usize)> {
    let lo = (centre - half).floor().max(0.0);
    let hi = ((centre + half).ceil() - 1.0).min(len as f64 - 1.0);
    if hi < lo || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some((lo as usize, hi as usize))
}

/// Adds a pixel-integrated Gaussian holding `n_e` electrons centred at
/// `centre`. Flux falling outside the frame is lost.
pub fn render_point(frame: &mut Frame, centre: Pixel, n_e: f64, sigma: (f64, f64)) {
    if n_e == 0.0 {
        return;
    }
    let (sx, sy) = sigma;
    let Some((c0, c1)) = support(centre.x, PSF_SUPPORT_SIGMA * sx, frame.width) else {
        return;
    };
    let Some((r0, r1)) = support(centre.y, PSF_SUPPORT_SIGMA * sy, frame.height) else {
        return;
    };
    let wx: Vec<f64> = (c0..=c1)
        .map(|c| gaussian_mass(c as f64, c as f64 + 1.0, centre.x, sx))
        .collect();
    let width = frame.width as usize;
    for r in r0..=r1 {
        let wy = n_e * gaussian_mass(r as f64, r as f64 + 1.0, centre.y, sy);
        let row = &mut frame.electrons[r * width + c0..=r * width + c1];
        for (px, w) in row.iter_mut().zip(&wx) {
            *px += wy * w;
        }
    }
}

/// Liang-Barsky clip of `a→b` against `[x0, x1] × [y0, y1]`. Returns the
/// parameter interval `(t0, t1) ⊆ [0, 1]` of the visible part.
pub fn clip_segment(a: Pixel, b: Pixel, x0: f64, y0: f64, x1: f64, y1: f64) -> Option<(f64, f64)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, a.x - x0),
        (dx, x1 - a.x),
        (-dy, a.y - y0),
        (dy, y1 - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

fn lerp(a: Pixel, b: Pixel, t: f64) -> Pixel {
    Pixel::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

/// Renders a straight streak from `a` to `b` convolved with the PSF.
///
/// The line carries `n_e_total / L` electrons per pixel of length; it is
/// sampled at sub-pixel steps (at most 0.25 px) after clipping to the frame
/// expanded by the PSF support.
pub fn render_streak(frame: &mut Frame, a: Pixel, b: Pixel, n_e_total: f64, sigma: (f64, f64)) {
    let length = a.distance(&b);
    if length < 1e-9 {
        render_point(frame, a, n_e_total, sigma);
        return;
    }
    let (mx, my) = (PSF_SUPPORT_SIGMA * sigma.0, PSF_SUPPORT_SIGMA * sigma.1);
    let Some((t0, t1)) = clip_segment(
        a,
        b,
        -mx,
        -my,
        frame.width as f64 + mx,
        frame.height as f64 + my,
    ) else {
        return;
    };
    let per_length = n_e_total / length;
    let visible = (t1 - t0) * length;
    if visible <= 0.0 {
        return;
    }
    let target_step = (length / 1000.0).min(0.25);
    let samples = (visible / target_step).ceil().max(1.0) as usize;
    let dt = (t1 - t0) / samples as f64;
    let flux = per_length * visible / samples as f64;
    for k in 0..samples {
        let t = t0 + (k as f64 + 0.5) * dt;
        render_point(frame, lerp(a, b, t), flux, sigma);
    }
}

/// Integer box `(x, y, w, h)` with top-left origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnotationBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

/// Hull of the two endpoints padded by 3σ, snapped outward to whole pixels
/// and intersected with the image. `None` when nothing is left.
pub fn auto_annotate(
    a: Pixel,
    b: Pixel,
    sigma: (f64, f64),
    image: (u32, u32),
) -> Option<AnnotationBox> {
    let (w, h) = (image.0 as f64, image.1 as f64);
    let pad_x = ANNOTATION_PAD_SIGMA * sigma.0;
    let pad_y = ANNOTATION_PAD_SIGMA * sigma.1;
    let xmin = a.x.min(b.x) - pad_x;
    let xmax = a.x.max(b.x) + pad_x;
    let ymin = a.y.min(b.y) - pad_y;
    let ymax = a.y.max(b.y) + pad_y;
    if !(xmax >= 0.0 && xmin < w && ymax >= 0.0 && ymin < h) {
        return None;
    }
    let x0 = xmin.floor().max(0.0);
    let y0 = ymin.floor().max(0.0);
    let x1 = xmax.ceil().min(w);
    let y1 = ymax.ceil().min(h);
    let bw = (x1 - x0).max(1.0).min(w - x0);
    let bh = (y1 - y0).max(1.0).min(h - y0);
    Some(AnnotationBox {
        x: x0 as u32,
        y: y0 as u32,
        w: bw as u32,
        h: bh as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensor::Attitude;
    use crate::time::Epoch;

    fn blank(w: u32, h: u32) -> Frame {
        Frame::new(w, h, 0, Epoch::J2000, Attitude::new(0.0, 0.0, 0.0))
    }

    #[test]
    fn point_mass_at_centre() {
        let mut f = blank(64, 64);
        render_point(&mut f, Pixel::new(32.0, 32.0), 1000.0, (1.0, 1.0));
        let total = f.total_electrons();
        assert!((990.0..=1000.0).contains(&total), "{total}");
        // Only the 5-sigma truncation is missing: 1 - erf(5/sqrt 2) is 5.7e-7 per axis.
        assert!(
            (total - 1000.0 * (1.0 - 5.733e-7f64).powi(2)).abs() < 1e-6,
            "{total}"
        );
    }

    #[test]
    fn zero_flux_is_noop() {
        let mut f = blank(16, 16);
        render_point(&mut f, Pixel::new(8.0, 8.0), 0.0, (1.0, 1.0));
        assert!(f.electrons.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pixel_centred_point_is_symmetric() {
        let mut f = blank(41, 41);
        render_point(&mut f, Pixel::new(20.5, 20.5), 5000.0, (1.7, 1.7));
        let at = |c: usize, r: usize| f.electrons[r * 41 + c];
        for r in 0..41 {
            for c in 0..41 {
                let v = at(c, r);
                assert!((v - at(40 - c, r)).abs() < 1e-12);
                assert!((v - at(c, 40 - r)).abs() < 1e-12);
                assert!((v - at(r, c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn off_image_point_deposits_partial_flux() {
        let mut f = blank(32, 32);
        render_point(&mut f, Pixel::new(0.0, 16.0), 1000.0, (1.0, 1.0));
        assert!((f.total_electrons() - 500.0).abs() < 1e-3);
        let mut g = blank(32, 32);
        render_point(&mut g, Pixel::new(-50.0, 16.0), 1000.0, (1.0, 1.0));
        assert_eq!(g.total_electrons(), 0.0);
    }

    #[test]
    fn degenerate_streak_equals_point() {
        let mut a = blank(40, 40);
        let mut b = blank(40, 40);
        let p = Pixel::new(17.3, 21.9);
        render_point(&mut a, p, 777.0, (1.2, 0.9));
        render_streak(&mut b, p, p, 777.0, (1.2, 0.9));
        assert_eq!(a.electrons, b.electrons);
    }

    #[test]
    fn horizontal_streak_conserves_flux() {
        let mut f = blank(100, 40);
        render_streak(
            &mut f,
            Pixel::new(25.0, 20.0),
            Pixel::new(75.0, 20.0),
            10_000.0,
            (1.0, 1.0),
        );
        let total = f.total_electrons();
        assert!((9_900.0..=10_000.0).contains(&total), "{total}");
    }

    #[test]
    fn streak_symmetric_about_bisector() {
        let mut f = blank(100, 41);
        render_streak(
            &mut f,
            Pixel::new(30.0, 20.5),
            Pixel::new(70.0, 20.5),
            10_000.0,
            (1.0, 1.0),
        );
        let peak = f.electrons.iter().cloned().fold(0.0, f64::max);
        for r in 0..41 {
            for c in 0..100 {
                let v = f.electrons[r * 100 + c];
                let m = f.electrons[r * 100 + (99 - c)];
                assert!((v - m).abs() <= 1e-9 * peak, "({c},{r}) {v} vs {m}");
            }
        }
    }

    #[test]
    fn streak_partially_outside() {
        let mut f = blank(50, 50);
        // Half the streak lies left of the frame.
        render_streak(
            &mut f,
            Pixel::new(-40.0, 25.0),
            Pixel::new(40.0, 25.0),
            8_000.0,
            (1.0, 1.0),
        );
        let total = f.total_electrons();
        assert!((total - 4_000.0).abs() < 10.0, "{total}");
    }

    #[test]
    fn clip_cases() {
        let (t0, t1) = clip_segment(
            Pixel::new(-10.0, 5.0),
            Pixel::new(10.0, 5.0),
            0.0,
            0.0,
            10.0,
            10.0,
        )
        .unwrap();
        assert!((t0 - 0.5).abs() < 1e-15 && (t1 - 1.0).abs() < 1e-15);
        assert!(clip_segment(
            Pixel::new(-10.0, -5.0),
            Pixel::new(-1.0, -1.0),
            0.0,
            0.0,
            10.0,
            10.0
        )
        .is_none());
        assert_eq!(
            clip_segment(
                Pixel::new(2.0, 2.0),
                Pixel::new(3.0, 3.0),
                0.0,
                0.0,
                10.0,
                10.0
            ),
            Some((0.0, 1.0))
        );
    }

    #[test]
    fn annotation_examples() {
        let b = auto_annotate(
            Pixel::new(10.0, 10.0),
            Pixel::new(30.0, 10.0),
            (1.0, 1.0),
            (100, 100),
        )
        .unwrap();
        assert_eq!(
            b,
            AnnotationBox {
                x: 7,
                y: 7,
                w: 26,
                h: 6
            }
        );
        let b = auto_annotate(
            Pixel::new(5.0, 5.0),
            Pixel::new(5.0, 5.0),
            (1.0, 1.0),
            (100, 100),
        )
        .unwrap();
        assert_eq!(
            b,
            AnnotationBox {
                x: 2,
                y: 2,
                w: 6,
                h: 6
            }
        );
        assert!(auto_annotate(
            Pixel::new(-20.0, -20.0),
            Pixel::new(-10.0, -30.0),
            (1.0, 1.0),
            (100, 100)
        )
        .is_none());
        assert!(auto_annotate(
            Pixel::new(120.0, 5.0),
            Pixel::new(140.0, 5.0),
            (1.0, 1.0),
            (100, 100)
        )
        .is_none());
    }

    #[test]
    fn annotation_clipped_to_image() {
        let b = auto_annotate(
            Pixel::new(-5.0, 50.0),
            Pixel::new(1.0, 50.0),
            (1.0, 1.0),
            (20, 60),
        )
        .unwrap();
        assert_eq!(
            b,
            AnnotationBox {
                x: 0,
                y: 47,
                w: 4,
                h: 6
            }
        );
        let b = auto_annotate(
            Pixel::new(18.0, 58.0),
            Pixel::new(25.0, 70.0),
            (1.0, 1.0),
            (20, 60),
        )
        .unwrap();
        assert_eq!((b.x + b.w, b.y + b.h), (20, 60));
    }
}
