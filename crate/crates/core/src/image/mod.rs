//! Grayscale images and their conversion to graph signals.
//!
//! Pixel `(r, c)` maps to vertex `r * cols + c`, the same row-major order
//! used by [`crate::graph::grid_graph`], so an image and its signal share a
//! buffer layout and conversion is a reinterpretation.

mod pgm;
mod resize;

pub use pgm::{quantize, read_pgm, write_pgm, PgmError, PgmMode};
pub use resize::resize;

use crate::error::{Error, Result};
use crate::graph::GridSpec;
use crate::signal::GraphSignal;

/// Row-major grayscale image with real-valued intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("image", format!("{rows}x{cols} has an empty axis")));
        }
        if pixels.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: pixels.len(),
            });
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { rows, cols, pixels })
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        Self { rows, cols, pixels }
    }

    /// Image of a single intensity.
    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    /// Builds an image by evaluating `f(r, c)` at every pixel.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let pixels = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
        Self::new(rows, cols, pixels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.rows, self.cols).expect("image dimensions are validated")
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.pixels[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.cols + c]
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }
}

/// Reinterprets the pixels as a signal on the image's grid graph.
pub fn image_to_signal(img: &GrayImage) -> GraphSignal {
    GraphSignal::from_finite(img.pixels.clone())
}

/// Reinterprets a signal on a `spec` grid as an image. Out-of-range values
/// are kept as they are.
pub fn signal_to_image(signal: &GraphSignal, spec: GridSpec) -> Result<GrayImage> {
    signal.check_len(spec.len())?;
    Ok(GrayImage::from_parts(
        spec.rows(),
        spec.cols(),
        signal.as_slice().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_conversion_examples() {
        let img = GrayImage::new(1, 2, vec![7.0, 9.0]).unwrap();
        let s = image_to_signal(&img);
        assert_eq!(s.as_slice(), &[7.0, 9.0]);
        assert_eq!(signal_to_image(&s, img.grid()).unwrap(), img);

        let wild = GraphSignal::new(vec![-12.5, 300.25, 4.0, 5.0]).unwrap();
        let back = signal_to_image(&wild, GridSpec::square(2).unwrap()).unwrap();
        assert_eq!(back.pixels(), wild.as_slice());

        assert!(signal_to_image(&wild, GridSpec::new(1, 3).unwrap()).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(0, 2, vec![]).is_err());
        assert!(GrayImage::new(1, 1, vec![f64::NAN]).is_err());
        let img = GrayImage::from_fn(2, 3, |r, c| (r * 10 + c) as f64).unwrap();
        assert_eq!(img.get(1, 2), 12.0);
    }
}
