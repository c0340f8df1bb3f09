//! Small synthetic test images.
//!
//! These generate the PGM files bundled under `data/synthetic/`
//! (see `examples/make_synthetic.rs`), so the test suite never depends on
//! downloading a benchmark set.

use crate::error::Result;
use crate::image::GrayImage;

/// Horizontal ramp from 0 at the left edge to 255 at the right edge.
pub fn gradient(side: usize) -> Result<GrayImage> {
    let span = (side.max(2) - 1) as f64;
    GrayImage::from_fn(side, side, |_, c| (255.0 * c as f64 / span).round())
}

/// Four by four checkerboard of 48 / 208 squares.
pub fn checkerboard(side: usize) -> Result<GrayImage> {
    let block = (side / 4).max(1);
    GrayImage::from_fn(side, side, |r, c| {
        if (r / block + c / block).is_multiple_of(2) {
            48.0
        } else {
            208.0
        }
    })
}

/// Bright centred disk of radius `side / 3` on a dark background.
pub fn disk(side: usize) -> Result<GrayImage> {
    let centre = (side as f64 - 1.0) / 2.0;
    let radius = side as f64 / 3.0;
    GrayImage::from_fn(side, side, |r, c| {
        let (dr, dc) = (r as f64 - centre, c as f64 - centre);
        if dr * dr + dc * dc <= radius * radius {
            200.0
        } else {
            40.0
        }
    })
}

/// The bundled set: every generator at 8x8 and 32x32, with file stems.
pub fn bundled_set() -> Result<Vec<(String, GrayImage)>> {
    let mut set = Vec::new();
    for side in [8, 32] {
        set.push((format!("gradient_{side}"), gradient(side)?));
        set.push((format!("checker_{side}"), checkerboard(side)?));
        set.push((format!("disk_{side}"), disk(side)?));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_stay_in_range() {
        for (name, img) in bundled_set().unwrap() {
            assert!(img.pixels().iter().all(|&v| (0.0..=255.0).contains(&v)), "{name}");
            assert!(img.pixels().iter().all(|&v| v.fract() == 0.0), "{name}");
        }
        let g = gradient(8).unwrap();
        assert_eq!(g.get(3, 0), 0.0);
        assert_eq!(g.get(3, 7), 255.0);
        let d = disk(32).unwrap();
        assert_eq!(d.get(16, 16), 200.0);
        assert_eq!(d.get(0, 0), 40.0);
    }
}
