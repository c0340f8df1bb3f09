//! Heat flow `dU/dt + L U = 0` on a graph, forward and backward in time.
//!
//! Forward evolution is available both as explicit Euler time stepping and
//! in closed form through an [`EigenBasis`]. Backward evolution is always
//! done in closed form, mode by mode:
//!
//! ```text
//! naive:    U(t) = sum_i            e^{lambda_i (T - t)} <U_T, phi_i> phi_i
//! cut-off:  U(t) = sum_{lambda_i <= M} e^{lambda_i (T - t)} <U_T, phi_i> phi_i
//! ```
//!
//! The naive sum amplifies high-frequency noise by up to `e^{lambda_max T}`.
//! The cut-off drops every mode above `M`, which bounds the amplification by
//! `e^{M T}`; [`select_m_eps`] picks `M = ln(eps^-gamma) / T` for a noise
//! level `eps`.

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::signal::GraphSignal;
use crate::spectral::EigenBasis;

/// Exponent above which a mode amplification `e^x` is refused.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// Cut-off level and the parameters it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    pub epsilon: f64,
    pub gamma: f64,
    /// Terminal time `T`.
    pub t_final: f64,
    /// Modes with `lambda <= m_eps` are kept.
    pub m_eps: f64,
    /// `m_eps` was clamped to the largest eigenvalue.
    pub capped: bool,
}

/// `M = ln(eps^-gamma) / T`, capped at `lambda_max`.
///
/// When the formula exceeds the largest eigenvalue every mode is already
/// admissible, so the cut-off degenerates to the naive reconstruction and
/// `M` is set to `lambda_max` with `capped = true`.
pub fn select_m_eps(epsilon: f64, gamma: f64, t_final: f64, lambda_max: f64) -> Result<RegularizationParams> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", format!("{epsilon} is not in (0, 1)")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param("gamma", format!("{gamma} is not in (0, 1)")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::param("T", format!("{t_final} is not positive")));
    }
    if !(lambda_max >= 0.0 && lambda_max.is_finite()) {
        return Err(Error::param("lambda_max", format!("{lambda_max} is not non-negative")));
    }
    let m = epsilon.powf(-gamma).ln() / t_final;
    let (m_eps, capped) = if m > lambda_max { (lambda_max, true) } else { (m, false) };
    Ok(RegularizationParams {
        epsilon,
        gamma,
        t_final,
        m_eps,
        capped,
    })
}

/// Step schedule for explicit Euler.
///
/// `steps - 1` steps of size `dt` are followed by one step of `dt_last`, so
/// the schedule always ends exactly at `t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    /// Nominal step, in units where the pixel spacing is 1.
    pub courant: f64,
    pub t_final: f64,
    pub steps: usize,
    pub dt: f64,
    pub dt_last: f64,
    /// Exact largest eigenvalue, if known. Otherwise the Gershgorin bound of
    /// the Laplacian is used for the stability check.
    pub lambda_max: Option<f64>,
}

impl EulerConfig {
    pub fn new(courant: f64, t_final: f64) -> Result<Self> {
        if !(courant > 0.0 && courant.is_finite()) {
            return Err(Error::param("courant", format!("{courant} is not positive")));
        }
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::param("T", format!("{t_final} is negative")));
        }
        if t_final == 0.0 {
            return Ok(Self {
                courant,
                t_final,
                steps: 0,
                dt: courant,
                dt_last: 0.0,
                lambda_max: None,
            });
        }
        let dt = courant;
        let mut steps = (t_final / dt).ceil().max(1.0) as usize;
        // T/dt a hair above an integer must not produce a vanishing last step
        if steps > 1 && (steps - 1) as f64 * dt >= t_final * (1.0 - 1e-12) {
            steps -= 1;
        }
        let dt_last = t_final - (steps - 1) as f64 * dt;
        Ok(Self {
            courant,
            t_final,
            steps,
            dt,
            dt_last,
            lambda_max: None,
        })
    }

    pub fn with_lambda_max(mut self, lambda_max: f64) -> Self {
        self.lambda_max = Some(lambda_max);
        self
    }

    fn step_sizes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |k| if k + 1 == self.steps { self.dt_last } else { self.dt })
    }
}

/// Explicit Euler for `dU/dt = -L U` from `0` to `cfg.t_final`.
///
/// Refuses to run when `dt * lambda_max > 2`, where the scheme amplifies the
/// top modes instead of damping them.
pub fn forward_euler(laplacian: &LaplacianMatrix, u0: &GraphSignal, cfg: &EulerConfig) -> Result<GraphSignal> {
    let n = laplacian.dim();
    u0.check_len(n)?;
    let lambda_max = cfg.lambda_max.unwrap_or_else(|| laplacian.gershgorin_bound());
    let dt_max = cfg.dt.max(cfg.dt_last);
    if dt_max * lambda_max > 2.0 {
        return Err(Error::UnstableStep(dt_max * lambda_max));
    }
    let mut u = u0.as_slice().to_vec();
    let mut lu = vec![0.0; n];
    for h in cfg.step_sizes() {
        laplacian.apply(&u, &mut lu)?;
        for (ui, li) in u.iter_mut().zip(&lu) {
            *ui -= h * li;
        }
    }
    GraphSignal::new(u)
}

/// Exact forward evolution: mode `i` decays by `e^{-lambda_i T}`.
pub fn forward_spectral(basis: &EigenBasis, u0: &GraphSignal, t: f64) -> Result<GraphSignal> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param("T", format!("forward time {t} must be non-negative")));
    }
    basis.filter(u0, None, |l| (-l * t).exp())
}

fn check_time(t: f64, t_final: f64) -> Result<()> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::param("T", format!("{t_final} is not non-negative")));
    }
    if !(0.0..=t_final).contains(&t) {
        return Err(Error::TimeOutOfRange { t, t_final });
    }
    Ok(())
}

fn check_amplification(lambda: f64, horizon: f64) -> Result<()> {
    let exponent = lambda * horizon;
    if exponent > OVERFLOW_EXPONENT {
        return Err(Error::Amplification { exponent });
    }
    Ok(())
}

/// Unregularized backward evolution from `U(T) = u_t` to time `t`.
pub fn backward_naive(basis: &EigenBasis, u_t: &GraphSignal, t_final: f64, t: f64) -> Result<GraphSignal> {
    check_time(t, t_final)?;
    let horizon = t_final - t;
    check_amplification(basis.lambda_max(), horizon)?;
    basis.filter(u_t, None, |l| (l * horizon).exp())
}

/// Cut-off backward evolution: only modes with `lambda <= params.m_eps` are
/// propagated back to time `t`, everything above is discarded.
pub fn backward_cutoff(
    basis: &EigenBasis,
    u_t: &GraphSignal,
    params: &RegularizationParams,
    t: f64,
) -> Result<GraphSignal> {
    check_time(t, params.t_final)?;
    let horizon = params.t_final - t;
    let kept = basis.count_admissible(params.m_eps);
    if kept > 0 {
        check_amplification(basis.eigenvalues()[kept - 1], horizon)?;
    }
    basis.filter(u_t, Some(params.m_eps), |l| (l * horizon).exp())
}

/// Number of eigenvalues `<= m_eps`, i.e. the size of the admissible set.
pub fn count_admissible(basis: &EigenBasis, m_eps: f64) -> usize {
    basis.count_admissible(m_eps)
}
