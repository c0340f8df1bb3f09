//! Separable resampling: box filter when an axis shrinks, bilinear
//! interpolation when it grows, identity when it keeps its length.

use crate::error::{Error, Result};

use super::GrayImage;

/// Sparse interpolation weights: output index -> `(source index, weight)`.
type AxisWeights = Vec<Vec<(usize, f64)>>;

fn axis_weights(src: usize, dst: usize) -> AxisWeights {
    use std::cmp::Ordering::*;
    match dst.cmp(&src) {
        Equal => (0..dst).map(|i| vec![(i, 1.0)]).collect(),
        Less => {
            // output i covers [i*src, (i+1)*src) in units of 1/dst pixel;
            // overlaps are computed in those integer units
            (0..dst)
                .map(|i| {
                    let lo = i * src;
                    let hi = (i + 1) * src;
                    (lo / dst..hi.div_ceil(dst))
                        .filter_map(|j| {
                            let overlap = hi.min((j + 1) * dst).saturating_sub(lo.max(j * dst));
                            (overlap > 0).then(|| (j, overlap as f64 / src as f64))
                        })
                        .collect()
                })
                .collect()
        }
        Greater => (0..dst)
            .map(|i| {
                let x = ((i as f64 + 0.5) * src as f64 / dst as f64 - 0.5).clamp(0.0, (src - 1) as f64);
                let j0 = x.floor() as usize;
                let j1 = (j0 + 1).min(src - 1);
                let f = x - j0 as f64;
                if j1 == j0 || f == 0.0 {
                    vec![(j0, 1.0)]
                } else {
                    vec![(j0, 1.0 - f), (j1, f)]
                }
            })
            .collect(),
    }
}

/// Resizes to `rows x cols`.
///
/// Each axis is handled independently. Shrinking averages source pixels
/// weighted by their overlap with the output pixel, growing interpolates
/// between pixel centres. Resizing to the current size returns an exact copy.
pub fn resize(img: &GrayImage, rows: usize, cols: usize) -> Result<GrayImage> {
    if rows == 0 || cols == 0 {
        return Err(Error::param("size", format!("{rows}x{cols} has an empty axis")));
    }
    if rows == img.rows() && cols == img.cols() {
        return Ok(img.clone());
    }
    let wr = axis_weights(img.rows(), rows);
    let wc = axis_weights(img.cols(), cols);

    // rows first: rows x src_cols
    let src_cols = img.cols();
    let mut tmp = vec![0.0; rows * src_cols];
    for (i, weights) in wr.iter().enumerate() {
        let dst = &mut tmp[i * src_cols..(i + 1) * src_cols];
        for &(j, w) in weights {
            for (d, s) in dst.iter_mut().zip(img.row(j)) {
                *d += w * s;
            }
        }
    }
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        let src = &tmp[r * src_cols..(r + 1) * src_cols];
        for (c, weights) in wc.iter().enumerate() {
            out[r * cols + c] = weights.iter().map(|&(j, w)| w * src[j]).sum();
        }
    }
    GrayImage::new(rows, cols, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_images_stay_constant() {
        let img = GrayImage::filled(7, 5, 100.0).unwrap();
        for &(r, c) in &[(1, 1), (3, 2), (7, 5), (14, 10), (20, 3), (2, 11)] {
            let out = resize(&img, r, c).unwrap();
            assert!(out.pixels().iter().all(|&v| (v - 100.0).abs() < 1e-12), "{r}x{c}");
        }
    }

    #[test]
    fn two_by_two_to_one() {
        let img = GrayImage::new(2, 2, vec![0.0, 0.0, 255.0, 255.0]).unwrap();
        assert_eq!(resize(&img, 1, 1).unwrap().pixels(), &[127.5]);
    }

    #[test]
    fn same_size_is_exact() {
        let img = GrayImage::from_fn(3, 4, |r, c| (r * 7 + c * 13) as f64 * 0.37).unwrap();
        assert_eq!(resize(&img, 3, 4).unwrap(), img);
    }

    #[test]
    fn shrink_by_two_is_block_mean() {
        let img = GrayImage::from_fn(8, 6, |r, c| ((r * 31 + c * 17) % 256) as f64).unwrap();
        let out = resize(&img, 4, 3).unwrap();
        for r in 0..4 {
            for c in 0..3 {
                let block = img.get(2 * r, 2 * c)
                    + img.get(2 * r, 2 * c + 1)
                    + img.get(2 * r + 1, 2 * c)
                    + img.get(2 * r + 1, 2 * c + 1);
                assert!((out.get(r, c) - block / 4.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_integer_shrink_weights_sum_to_one() {
        for (src, dst) in [(5, 3), (7, 2), (10, 4), (255, 128)] {
            for w in axis_weights(src, dst) {
                let s: f64 = w.iter().map(|p| p.1).sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn enlarge_interpolates_between_centres() {
        let img = GrayImage::new(1, 2, vec![0.0, 100.0]).unwrap();
        let out = resize(&img, 1, 4).unwrap();
        assert_eq!(out.pixels(), &[0.0, 25.0, 75.0, 100.0]);
    }

    #[test]
    fn rejects_empty_target() {
        let img = GrayImage::filled(2, 2, 1.0).unwrap();
        assert!(resize(&img, 0, 2).is_err());
    }
}
