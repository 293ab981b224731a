//! Noise models and procedurally generated test images.
//!
//! All generators are deterministic; the noise functions draw only from the
//! random stream they are given.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage};

/// Each background pixel independently becomes foreground with probability `p`.
/// One trial is drawn per background pixel in row-major order.
pub fn add_noise_points<R: Rng + ?Sized>(img: &BinaryImage, p: f64, rng: &mut R) -> Result<BinaryImage> {
    let trial = Bernoulli::new(p)
        .map_err(|_| Error::InvalidParameter(format!("noise probability must lie in [0, 1], got {p}")))?;
    let mut out = img.clone();
    for v in out.mask_mut() {
        if !*v {
            *v = trial.sample(rng);
        }
    }
    Ok(out)
}

/// Adds i.i.d. `N(0, sigma^2)` to every pixel and clamps to `[0, 1]`.
pub fn add_gaussian_noise<R: Rng + ?Sized>(img: &GrayImage, sigma: f64, rng: &mut R) -> Result<GrayImage> {
    if !(sigma >= 0.0) || sigma.is_infinite() {
        return Err(Error::InvalidParameter(format!("sigma must be non-negative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let values = img.values().iter().map(|&v| v + normal.sample(rng)).collect();
    GrayImage::from_values(img.width(), img.height(), values)
}

/// Gauss centre-point digitization of the union of two disks of radius `r`:
/// pixel `(i, j)` is foreground iff `(i + 0.5, j + 0.5)` lies within `r` of
/// `c1` or `c2`. Both disks must keep at least one pixel of margin.
pub fn digitize_disks(
    c1: (f64, f64),
    c2: (f64, f64),
    r: f64,
    width: usize,
    height: usize,
) -> Result<BinaryImage> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    for &(cx, cy) in &[c1, c2] {
        if cx - r < 1.0 || cy - r < 1.0 || cx + r > width as f64 - 1.0 || cy + r > height as f64 - 1.0 {
            return Err(Error::DomainTooSmall(format!(
                "disk at ({cx}, {cy}) with radius {r} needs a one-pixel margin in {width}x{height}"
            )));
        }
    }
    let r2 = r * r;
    let inside = |(cx, cy): (f64, f64), px: f64, py: f64| {
        let (dx, dy) = (px - cx, py - cy);
        dx * dx + dy * dy <= r2
    };
    let mut img = BinaryImage::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
            if inside(c1, px, py) || inside(c2, px, py) {
                img.set(x, y, true);
            }
        }
    }
    Ok(img)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Glyph {
    /// Solid letter A.
    A,
    /// Letter X drawn as isolated lattice points.
    XPointCloud,
}

impl Glyph {
    pub fn name(self) -> &'static str {
        match self {
            Glyph::A => "A",
            Glyph::XPointCloud => "X",
        }
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let t = ((wx * vx + wy * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
    let (dx, dy) = (wx - t * vx, wy - t * vy);
    (dx * dx + dy * dy).sqrt()
}

/// Strokes in unit coordinates, scaled to the domain.
fn stroke_image(
    strokes: &[((f64, f64), (f64, f64))],
    half_width: f64,
    width: usize,
    height: usize,
    accept: impl Fn(usize, usize) -> bool,
) -> BinaryImage {
    let (w, h) = (width as f64, height as f64);
    let scaled: Vec<_> = strokes
        .iter()
        .map(|&((ax, ay), (bx, by))| ((ax * w, ay * h), (bx * w, by * h)))
        .collect();
    let mut img = BinaryImage::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            if accept(x, y) && scaled.iter().any(|&(a, b)| segment_distance(p, a, b) <= half_width) {
                img.set(x, y, true);
            }
        }
    }
    img
}

/// Letter test objects.
///
/// * `A`: three strokes (apex `(0.5, 0.14)`, feet `(0.18, 0.86)` and
///   `(0.82, 0.86)`, crossbar at height 0.6) of half-width `0.055 * min(w, h)`.
/// * `XPointCloud`: two diagonal strokes from `(0.2, 0.2)` to `(0.8, 0.8)` and
///   `(0.8, 0.2)` to `(0.2, 0.8)`, half-width `0.06 * min(w, h)`, sampled only
///   at pixels whose coordinates are both multiples of 3.
///
/// Coordinates are fractions of the domain size.
pub fn synth_letter(glyph: Glyph, width: usize, height: usize) -> BinaryImage {
    let m = width.min(height) as f64;
    match glyph {
        Glyph::A => stroke_image(
            &[
                ((0.5, 0.14), (0.18, 0.86)),
                ((0.5, 0.14), (0.82, 0.86)),
                ((0.32, 0.6), (0.68, 0.6)),
            ],
            0.055 * m,
            width,
            height,
            |_, _| true,
        ),
        Glyph::XPointCloud => stroke_image(
            &[((0.2, 0.2), (0.8, 0.8)), ((0.8, 0.2), (0.2, 0.8))],
            0.06 * m,
            width,
            height,
            |x, y| x % 3 == 0 && y % 3 == 0,
        ),
    }
}

/// Grey-scale scene for template matching, with the known template placement.
#[derive(Clone, Debug)]
pub struct TemplateScene {
    pub image: GrayImage,
    /// Top-left corner of the template window.
    pub origin: (usize, usize),
    pub template_size: (usize, usize),
}

impl TemplateScene {
    /// The template, thresholded from the clean scene.
    pub fn template(&self, threshold: f64) -> BinaryImage {
        let (w, h) = self.template_size;
        self.image
            .crop(self.origin.0, self.origin.1, w, h)
            .expect("template window inside scene")
            .threshold(threshold)
    }
}

fn in_triangle(p: (f64, f64), a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    let cross = |o: (f64, f64), u: (f64, f64), v: (f64, f64)| (u.0 - o.0) * (v.1 - o.1) - (u.1 - o.1) * (v.0 - o.0);
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// 96x96 scene of mid-grey shapes on a grey background. Background is 0.3 and
/// shapes lie between 0.7 and 0.8, so Gaussian noise with `sigma = 0.1` flips a
/// few percent of pixels at threshold 0.5. The 32x32 template window at
/// `(34, 40)` holds a disk, a bar and a small square in an arrangement that
/// does not repeat elsewhere.
pub fn template_scene() -> TemplateScene {
    let dist = |p: (f64, f64), c: (f64, f64)| ((p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)).sqrt();
    let image = GrayImage::from_fn(96, 96, |x, y| {
        let p = (x as f64 + 0.5, y as f64 + 0.5);
        let (px, py) = p;
        // template content
        if dist(p, (46.0, 53.0)) <= 7.0 {
            return 0.8;
        }
        if (56.0..66.0).contains(&px) && (43.0..68.0).contains(&py) && !(58.0..61.0).contains(&px) {
            return 0.75;
        }
        if (38.0..45.0).contains(&px) && (63.0..69.0).contains(&py) {
            return 0.72;
        }
        // distractors
        if dist(p, (16.0, 16.0)) <= 9.0 {
            return 0.78;
        }
        if (40.0..88.0).contains(&px) && (8.0..16.0).contains(&py) {
            return 0.74;
        }
        if in_triangle(p, (8.0, 88.0), (30.0, 88.0), (12.0, 48.0)) {
            return 0.76;
        }
        let ring = dist(p, (80.0, 80.0));
        if (5.0..11.0).contains(&ring) {
            return 0.72;
        }
        if (76.0..90.0).contains(&px) && (26.0..60.0).contains(&py) && !(80.0..86.0).contains(&px) {
            return 0.78;
        }
        0.3
    });
    TemplateScene {
        image,
        origin: (34, 40),
        template_size: (32, 32),
    }
}

/// 72x72 scene of four bright rectangular blobs (intensity 0.55 to 0.6) on a
/// black background, together with the blob count.
///
/// The blobs tile the frame, separated by two-pixel gaps with a one-pixel
/// border, so nearly every background pixel touches a blob. A background
/// pixel that noise pushes over the threshold then joins a blob instead of
/// forming a separate speck.
pub fn blob_scene() -> (GrayImage, usize) {
    // (x range, y range, intensity)
    let blobs = [
        (1..39, 1..35, 0.58),
        (41..71, 1..35, 0.6),
        (1..31, 37..71, 0.55),
        (33..71, 37..71, 0.58),
    ];
    let image = GrayImage::from_fn(72, 72, |x, y| {
        blobs
            .iter()
            .find(|(xs, ys, _)| xs.contains(&x) && ys.contains(&y))
            .map_or(0.0, |blob| blob.2)
    });
    (image, blobs.len())
}

/// Connected components of the foreground (4- or 8-connectivity), as a label
/// per pixel (0 for background) and the component count.
pub fn connected_components(img: &BinaryImage, eight: bool) -> (Vec<u32>, u32) {
    let (w, h) = img.dims();
    let mut labels = vec![0u32; w * h];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !img.mask()[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (x, y) = ((p % w) as i64, (p / w) as i64);
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if img.mask()[q] && labels[q] == 0 {
                        labels[q] = next;
                        stack.push(q);
                    }
                }
            }
        }
    }
    (labels, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn noise_extremes() {
        let img = BinaryImage::from_points(8, 8, [(1, 1)]).unwrap();
        let mut r = rng::stream(1, 0);
        assert_eq!(add_noise_points(&img, 0.0, &mut r).unwrap(), img);
        assert_eq!(add_noise_points(&img, 1.0, &mut r).unwrap().count(), 64);
        assert!(add_noise_points(&img, 1.5, &mut r).is_err());
    }

    #[test]
    fn gaussian_noise_identity_and_clamp() {
        let img = GrayImage::new(16, 16, 0.0);
        let mut r = rng::stream(2, 0);
        assert_eq!(add_gaussian_noise(&img, 0.0, &mut r).unwrap(), img);
        let noisy = add_gaussian_noise(&img, 0.1, &mut r).unwrap();
        assert!(noisy.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!(noisy.values().iter().any(|&v| v > 0.0));
        assert!(add_gaussian_noise(&img, -1.0, &mut r).is_err());
    }

    #[test]
    fn tiny_disk_on_pixel_center() {
        let img = digitize_disks((5.5, 4.5), (5.5, 4.5), 0.4, 10, 10).unwrap();
        assert_eq!(img.points().collect::<Vec<_>>(), vec![(5, 4)]);
    }

    #[test]
    fn disks_need_margin() {
        assert!(matches!(
            digitize_disks((3.0, 3.0), (3.0, 3.0), 2.5, 10, 10),
            Err(Error::DomainTooSmall(_))
        ));
    }

    #[test]
    fn disks_are_symmetric_and_idempotent() {
        let a = digitize_disks((20.3, 30.1), (35.7, 28.2), 9.0, 64, 64).unwrap();
        let b = digitize_disks((35.7, 28.2), (20.3, 30.1), 9.0, 64, 64).unwrap();
        assert_eq!(a, b);
        let single = digitize_disks((20.3, 30.1), (20.3, 30.1), 9.0, 64, 64).unwrap();
        let count = single.count() as f64;
        assert!((count - std::f64::consts::PI * 81.0).abs() < 0.05 * count);
    }

    #[test]
    fn letters_have_their_shape() {
        for &size in &[64usize, 100, 128] {
            let a = synth_letter(Glyph::A, size, size);
            let (_, n) = connected_components(&a, true);
            assert_eq!(n, 1);

            let x = synth_letter(Glyph::XPointCloud, size, size);
            assert!(x.count() > 20);
            for (px, py) in x.points() {
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let (nx, ny) = (px as i64 + dx, py as i64 + dy);
                        assert!(!x.get(nx as usize, ny as usize));
                    }
                }
            }
            for img in [&a, &x] {
                assert!(img.count() > 0);
                for (px, py) in img.points() {
                    assert!(px >= 2 && py >= 2 && px < size - 2 && py < size - 2);
                }
            }
        }
    }

    #[test]
    fn scenes_threshold_cleanly() {
        let scene = template_scene();
        let t = scene.template(0.5);
        assert_eq!(t.dims(), (32, 32));
        assert!(t.count() > 100 && t.count() < 32 * 32 - 100);

        let (blobs, n) = blob_scene();
        let (_, components) = connected_components(&blobs.threshold(0.35), false);
        assert_eq!(components as usize, n);
    }
}
