//! Reconstructing the initial state of heat diffusion on graphs.
//!
//! A grayscale image is a signal on the 4-neighbour grid graph of its
//! pixels. Running heat flow `dU/dt + L U = 0` forward blurs it; running it
//! backward sharpens it again, but amplifies every Laplacian mode `i` by
//! `e^{lambda_i T}`, so a little noise in the blurred image explodes in the
//! high frequencies. This crate implements the exact backward solution and a
//! spectral cut-off that keeps only the modes with `lambda_i <= M`, together
//! with the machinery around it:
//!
//! * [`graph`]: simple graphs, the grid builder and the Laplacian `D - A`.
//! * [`spectral`]: dense and closed-form grid eigenbases, analysis and
//!   synthesis.
//! * [`diffusion`]: explicit Euler and exact forward flow, naive and cut-off
//!   backward reconstruction, the choice of `M`.
//! * [`noise`] and [`metrics`]: seeded Gaussian noise, PSNR, l2 error.
//! * [`image`]: PGM files, resizing, image/signal conversion.
//! * [`bench`]: the end-to-end denoising pipeline, result tables and the
//!   randomized bound checks.
//!
//! ```
//! use heatgraph::prelude::*;
//!
//! let spec = GridSpec::square(16)?;
//! let basis = eigendecompose_grid(spec);
//! let truth = GraphSignal::new((0..256).map(|i| (i % 16) as f64 * 10.0).collect())?;
//!
//! let blurred = forward_spectral(&basis, &truth, 0.5)?;
//! let params = select_m_eps(0.1, 0.5, 0.5, basis.lambda_max())?;
//! let restored = backward_cutoff(&basis, &blurred, &params, 0.0)?;
//! assert!(l2_error(&restored, &truth)? < l2_error(&blurred, &truth)?);
//! # Ok::<(), heatgraph::Error>(())
//! ```
//!
//! The `book/` directory next to this crate explains the method chapter by
//! chapter; its code listings are compiled and run as doc-tests of this
//! crate.

pub mod bench;
pub mod diffusion;
mod error;
pub mod graph;
pub mod image;
pub mod matrix;
pub mod metrics;
pub mod noise;
mod signal;
pub mod spectral;

pub use error::{Error, Result};
pub use signal::GraphSignal;

pub mod prelude {
    pub use crate::diffusion::{
        backward_cutoff, backward_naive, count_admissible, forward_euler, forward_spectral, select_m_eps,
        EulerConfig, RegularizationParams,
    };
    pub use crate::graph::{grid_graph, GridSpec, LaplacianMatrix, SimpleGraph};
    pub use crate::image::{image_to_signal, read_pgm, resize, signal_to_image, write_pgm, GrayImage, PgmMode};
    pub use crate::metrics::{l2_error, psnr};
    pub use crate::noise::{add_awgn, NoiseSpec};
    pub use crate::spectral::{eigendecompose_dense, eigendecompose_grid, EigenBasis, SpectralCoefficients};
    pub use crate::{Error, GraphSignal};
}

/// The guide in `book/src`, compiled so its listings run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub mod graphs {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    pub mod spectra {}
    #[doc = include_str!("../../../book/src/backward.md")]
    pub mod backward {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/images.md")]
    pub mod images {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub mod pipeline {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
