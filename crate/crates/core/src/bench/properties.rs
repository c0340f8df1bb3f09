//! Randomized checks of the error bounds satisfied by the cut-off
//! reconstruction `P U(t)`:
//!
//! ```text
//! boundedness   ||P U(t)||                 <= e^{M(T-t)} ||U_T||
//! stability     ||P U(t) - P V(t)||        <= e^{M(T-t)} eps       when ||U_T - V_T|| <= eps
//! convergence   ||U(t) - P U_eps(t)||      <= ||dU/dt|| / M + e^{M(T-t)} eps
//! ```
//!
//! plus a few degenerate cases (kernel-only cut-off, `t = T`), linearity and
//! a sweep showing that the reconstruction error shrinks with the noise
//! level.
//!
//! Trial `k` of a property draws from `ChaCha20Rng::seed_from_u64(seed + k)`
//! on the property's own stream, so a failure is replayed from the reported
//! trial seed and the property name alone.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::diffusion::{backward_cutoff, backward_naive, select_m_eps, RegularizationParams};
use crate::error::{Error, Result};
use crate::graph::GridSpec;
use crate::signal::GraphSignal;
use crate::spectral::{eigendecompose_grid, EigenBasis, SpectralCoefficients};

pub const DEFAULT_TRIALS: usize = 1000;

/// Absolute slack on the norm bounds.
const BOUND_TOL: f64 = 1e-9;
/// Absolute slack on the convergence bound.
const CONVERGENCE_TOL: f64 = 1e-8;
/// Relative slack on linearity.
const LINEARITY_TOL: f64 = 1e-10;
/// Truth signals live in this many lowest modes.
const BAND: usize = 10;
const SWEEP_EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
const SWEEP_SEEDS: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// 8x8 grid.
    Small,
    /// 32x32 grid.
    Medium,
}

impl Scale {
    pub fn grid(self) -> GridSpec {
        let side = match self {
            Scale::Small => 8,
            Scale::Medium => 32,
        };
        GridSpec::square(side).expect("valid grid")
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "medium" => Ok(Scale::Medium),
            _ => Err(Error::param("scale", format!("`{s}` is not one of small, medium"))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Small => "small",
            Scale::Medium => "medium",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyFailure {
    pub trial_seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    /// The check follows from a proven inequality. Otherwise it is a
    /// statistical expectation that an unlucky seed can break.
    pub guaranteed: bool,
    pub trials: usize,
    /// Largest `lhs / rhs` seen; at most 1 on success.
    pub max_ratio: f64,
    pub failure: Option<PropertyFailure>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub seed: u64,
    pub scale: Scale,
    pub outcomes: Vec<PropertyOutcome>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }
}

/// One `key=value` line per property, then a summary line.
impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            write!(
                f,
                "property={} kind={} status={} trials={} max_ratio={:.6e}",
                o.name,
                if o.guaranteed { "bound" } else { "statistical" },
                if o.passed() { "pass" } else { "fail" },
                o.trials,
                o.max_ratio
            )?;
            if let Some(fail) = &o.failure {
                write!(f, " seed={} detail={:?}", fail.trial_seed, fail.detail)?;
            }
            writeln!(f)?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed()).count();
        writeln!(
            f,
            "suite scale={} seed={} status={} passed={}/{}",
            self.scale,
            self.seed,
            if self.all_passed() { "pass" } else { "fail" },
            passed,
            self.outcomes.len()
        )
    }
}

/// Runs every property with [`DEFAULT_TRIALS`] trials.
pub fn run_property_suite(seed: u64, scale: Scale) -> PropertyReport {
    run_property_suite_with(seed, scale, DEFAULT_TRIALS)
}

pub fn run_property_suite_with(seed: u64, scale: Scale, trials: usize) -> PropertyReport {
    let basis = eigendecompose_grid(scale.grid());
    let ctx = Ctx { basis: &basis, seed };
    let outcomes = vec![
        ctx.run("boundedness", 0, trials, boundedness),
        ctx.run("stability", 1, trials, stability),
        ctx.run("convergence", 2, trials, convergence),
        ctx.run("kernel_only", 3, trials, kernel_only),
        ctx.run("terminal_time", 4, trials, terminal_time),
        ctx.run("linearity", 5, trials, linearity),
        ctx.run("monotone_sweep", 6, 1, monotone_sweep),
    ];
    PropertyReport { seed, scale, outcomes }
}

/// `(lhs, rhs, label)`: the check holds when `lhs <= rhs`.
type Check = (f64, f64, String);

struct Ctx<'a> {
    basis: &'a EigenBasis,
    seed: u64,
}

impl Ctx<'_> {
    fn run(
        &self,
        name: &'static str,
        stream: u64,
        trials: usize,
        trial: fn(&EigenBasis, &mut ChaCha20Rng) -> Result<Vec<Check>>,
    ) -> PropertyOutcome {
        let guaranteed = name != "monotone_sweep";
        let mut max_ratio: f64 = 0.0;
        for k in 0..trials {
            let trial_seed = self.seed.wrapping_add(k as u64);
            let mut rng = ChaCha20Rng::seed_from_u64(trial_seed);
            rng.set_stream(stream);
            let fail = |detail: String, max_ratio: f64| PropertyOutcome {
                name,
                guaranteed,
                trials: k + 1,
                max_ratio,
                failure: Some(PropertyFailure { trial_seed, detail }),
            };
            match trial(self.basis, &mut rng) {
                Err(e) => return fail(e.to_string(), max_ratio),
                Ok(checks) => {
                    for (lhs, rhs, label) in checks {
                        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
                        max_ratio = max_ratio.max(ratio);
                        if lhs > rhs || lhs.is_nan() {
                            return fail(format!("{label}: {lhs:.17e} > {rhs:.17e}"), max_ratio);
                        }
                    }
                }
            }
        }
        PropertyOutcome {
            name,
            guaranteed,
            trials,
            max_ratio,
            failure: None,
        }
    }
}

fn uniform_signal(n: usize, rng: &mut ChaCha20Rng) -> GraphSignal {
    GraphSignal::new((0..n).map(|_| rng.random_range(-255.0..=255.0)).collect()).expect("finite")
}

/// Random direction with norm exactly `radius` (up to rounding).
fn perturbation(n: usize, radius: f64, rng: &mut ChaCha20Rng) -> GraphSignal {
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    GraphSignal::new(z.into_iter().map(|v| v * radius / norm).collect()).expect("finite")
}

/// Random terminal time and cut-off, going through [`select_m_eps`]: a
/// target `M` in `(0, 1.1 lambda_max]` is turned into the `eps` that
/// produces it, so some draws land on the cap.
fn random_params(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<RegularizationParams> {
    let t_final = rng.random_range(0.1..=1.0);
    let gamma = rng.random_range(0.1..=0.9);
    let target = rng.random_range(0.0..=1.1 * basis.lambda_max()).max(1e-3);
    let epsilon = (-target * t_final / gamma).exp();
    select_m_eps(epsilon, gamma, t_final, basis.lambda_max())
}

fn times(t_final: f64) -> [f64; 3] {
    [0.0, t_final / 2.0, t_final]
}

fn diff_norm(a: &GraphSignal, b: &GraphSignal) -> Result<f64> {
    Ok(a.lin_comb(1.0, b, -1.0)?.norm())
}

fn boundedness(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let p = random_params(basis, rng)?;
    let u = uniform_signal(basis.dim(), rng);
    times(p.t_final)
        .into_iter()
        .map(|t| {
            let lhs = backward_cutoff(basis, &u, &p, t)?.norm();
            let rhs = (p.m_eps * (p.t_final - t)).exp() * u.norm() + BOUND_TOL;
            Ok((lhs, rhs, format!("t={t} M={}", p.m_eps)))
        })
        .collect()
}

fn stability(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let p = random_params(basis, rng)?;
    let u = uniform_signal(basis.dim(), rng);
    let radius = p.epsilon * rng.random_range(0.0..=1.0);
    let v = u.lin_comb(1.0, &perturbation(basis.dim(), radius, rng), 1.0)?;
    times(p.t_final)
        .into_iter()
        .map(|t| {
            let lhs = diff_norm(&backward_cutoff(basis, &u, &p, t)?, &backward_cutoff(basis, &v, &p, t)?)?;
            let rhs = (p.m_eps * (p.t_final - t)).exp() * p.epsilon + BOUND_TOL;
            Ok((lhs, rhs, format!("t={t} M={} eps={}", p.m_eps, p.epsilon)))
        })
        .collect()
}

/// Terminal data supported on the lowest [`BAND`] modes.
fn band_limited(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<(Vec<f64>, GraphSignal)> {
    let mut c = vec![0.0; basis.dim()];
    for ck in c.iter_mut().take(BAND) {
        *ck = rng.random_range(-100.0..=100.0);
    }
    let u = basis.synthesize(&SpectralCoefficients::new(c.clone()))?;
    Ok((c, u))
}

fn convergence(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let p = random_params(basis, rng)?;
    let (c, u_t) = band_limited(basis, rng)?;
    let radius = p.epsilon * rng.random_range(0.0..=1.0);
    let noisy = u_t.lin_comb(1.0, &perturbation(basis.dim(), radius, rng), 1.0)?;
    times(p.t_final)
        .into_iter()
        .map(|t| {
            let h = p.t_final - t;
            let exact = backward_naive(basis, &u_t, p.t_final, t)?;
            let approx = backward_cutoff(basis, &noisy, &p, t)?;
            let du_dt = c
                .iter()
                .zip(basis.eigenvalues())
                .map(|(ci, &l)| (l * (l * h).exp() * ci).powi(2))
                .sum::<f64>()
                .sqrt();
            let lhs = diff_norm(&exact, &approx)?;
            let rhs = du_dt / p.m_eps + (p.m_eps * h).exp() * p.epsilon + CONVERGENCE_TOL;
            Ok((lhs, rhs, format!("t={t} M={} eps={}", p.m_eps, p.epsilon)))
        })
        .collect()
}

/// `M = 0` keeps only the constant mode: the output is the mean, and its
/// norm `|mean| sqrt(n)` never exceeds `||U_T||`.
fn kernel_only(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let n = basis.dim();
    let offset = rng.random_range(-200.0..=200.0);
    let u = GraphSignal::new(uniform_signal(n, rng).as_slice().iter().map(|v| v * 0.2 + offset).collect())?;
    let t_final = rng.random_range(0.1..=1.0);
    let p = RegularizationParams {
        epsilon: 0.5,
        gamma: 0.5,
        t_final,
        m_eps: 0.0,
        capped: false,
    };
    let t = rng.random_range(0.0..=t_final);
    let out = backward_cutoff(basis, &u, &p, t)?;
    let mean = GraphSignal::constant(n, u.mean())?;
    Ok(vec![
        (out.norm(), u.norm() + BOUND_TOL, format!("norm at t={t}")),
        (diff_norm(&out, &mean)?, 1e-10 * u.norm(), "distance to the mean".to_string()),
    ])
}

/// At `t = T` nothing is amplified: `||P U_T - P V_T|| <= eps`.
fn terminal_time(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let p = random_params(basis, rng)?;
    let u = uniform_signal(basis.dim(), rng);
    let v = u.lin_comb(1.0, &perturbation(basis.dim(), p.epsilon, rng), 1.0)?;
    let lhs = diff_norm(
        &backward_cutoff(basis, &u, &p, p.t_final)?,
        &backward_cutoff(basis, &v, &p, p.t_final)?,
    )?;
    Ok(vec![(lhs, p.epsilon + BOUND_TOL, format!("M={} eps={}", p.m_eps, p.epsilon))])
}

fn linearity(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let p = random_params(basis, rng)?;
    let (u, v) = (uniform_signal(basis.dim(), rng), uniform_signal(basis.dim(), rng));
    let a = rng.random_range(-3.0..=3.0);
    let b = rng.random_range(-3.0..=3.0);
    let t = rng.random_range(0.0..=p.t_final);
    let pu = backward_cutoff(basis, &u, &p, t)?;
    let pv = backward_cutoff(basis, &v, &p, t)?;
    let lhs = backward_cutoff(basis, &u.lin_comb(a, &v, b)?, &p, t)?;
    let rhs = pu.lin_comb(a, &pv, b)?;
    let scale = (a.abs() * pu.norm() + b.abs() * pv.norm()).max(1.0);
    Ok(vec![(diff_norm(&lhs, &rhs)?, LINEARITY_TOL * scale, format!("a={a} b={b} t={t}"))])
}

/// Error of the reconstruction at `t = 0` for shrinking noise levels with the
/// default `gamma = 0.5`, `T = 0.5`. For each of 5 noise realizations at most
/// one step may go up, and the median over realizations must never go up.
///
/// This is an expectation, not an inequality: each smaller `eps` also admits
/// more modes, and on an 8x8 grid only a few dozen modes carry the noise, so
/// roughly one suite seed in ten sees two inversions in some realization.
fn monotone_sweep(basis: &EigenBasis, rng: &mut ChaCha20Rng) -> Result<Vec<Check>> {
    let (gamma, t_final) = (0.5, 0.5);
    let n = basis.dim();
    let (c, _) = band_limited(basis, rng)?;
    let truth = basis.synthesize(&SpectralCoefficients::new(c.clone()))?;
    let u_t = basis.filter(&truth, None, |l| (-l * t_final).exp())?;

    let mut errors = vec![[0.0; SWEEP_EPS.len()]; SWEEP_SEEDS as usize];
    for row in errors.iter_mut() {
        let direction = perturbation(n, 1.0, rng);
        for (e, &eps) in row.iter_mut().zip(&SWEEP_EPS) {
            let p = select_m_eps(eps, gamma, t_final, basis.lambda_max())?;
            let noisy = u_t.lin_comb(1.0, &direction, eps)?;
            *e = diff_norm(&backward_cutoff(basis, &noisy, &p, 0.0)?, &truth)?;
        }
    }

    let mut checks = Vec::new();
    for (s, row) in errors.iter().enumerate() {
        let inversions = row.windows(2).filter(|w| w[1] > w[0]).count();
        checks.push((inversions as f64, 1.0, format!("realization {s} errors {row:?}")));
    }
    let medians: Vec<f64> = (0..SWEEP_EPS.len())
        .map(|k| {
            let mut col: Vec<f64> = errors.iter().map(|r| r[k]).collect();
            col.sort_by(f64::total_cmp);
            col[col.len() / 2]
        })
        .collect();
    for (k, w) in medians.windows(2).enumerate() {
        checks.push((w[1], w[0], format!("median at eps={} vs {}", SWEEP_EPS[k + 1], SWEEP_EPS[k])));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_with_few_trials() {
        let report = run_property_suite_with(7, Scale::Small, 50);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.outcomes.len(), 7);
        let text = report.to_string();
        assert!(text.lines().last().unwrap().starts_with("suite scale=small seed=7 status=pass passed=7/7"));
    }

    #[test]
    fn a_broken_bound_names_the_trial_seed() {
        let basis = eigendecompose_grid(Scale::Small.grid());
        let ctx = Ctx { basis: &basis, seed: 100 };
        let out = ctx.run("always_wrong", 9, 10, |_, rng| Ok(vec![(rng.random_range(2.0..3.0), 1.0, "x".into())]));
        let fail = out.failure.unwrap();
        assert_eq!(fail.trial_seed, 100);
        assert_eq!(out.trials, 1);
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("medium".parse::<Scale>().unwrap(), Scale::Medium);
        assert_eq!(Scale::Medium.grid().len(), 1024);
        assert!("large".parse::<Scale>().is_err());
    }
}
