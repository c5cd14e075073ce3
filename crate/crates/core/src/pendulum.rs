//! Reference data generator: fixed-step RK4 integration of the damped
//! pendulum `θ̈ = −b θ̇ − λ sin θ`.
//!
//! Each output interval is subdivided into `substeps` RK4 steps, so the
//! ground truth is defined by self-convergence of the integrator rather
//! than by any external solver.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::reduced_basis::TrainingSet;

/// Configuration for the damped-pendulum family: damping, gravity
/// parameters, output time grid and initial conditions.
#[derive(Debug, Clone)]
pub struct PendulumConfig {
    b: f64,
    lambda_grid: Vec<f64>,
    t_grid: Vec<f64>,
    theta0: f64,
    omega0: f64,
    substeps: usize,
}

impl PendulumConfig {
    pub fn new(
        b: f64,
        lambda_grid: Vec<f64>,
        t_grid: Vec<f64>,
        theta0: f64,
        omega0: f64,
        substeps: usize,
    ) -> Result<Self> {
        if !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidData(format!(
                "damping must be finite and non-negative, got {b}"
            )));
        }
        if lambda_grid.is_empty() {
            return Err(Error::InvalidData("lambda grid is empty".into()));
        }
        if lambda_grid.iter().any(|&l| !l.is_finite() || l <= 0.0) {
            return Err(Error::InvalidData(
                "lambda values must be finite and positive".into(),
            ));
        }
        if lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidData(
                "lambda grid must be strictly increasing".into(),
            ));
        }
        if t_grid.len() < 2 {
            return Err(Error::InvalidGrid(
                "time grid needs at least 2 points".into(),
            ));
        }
        if t_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(
                "time grid contains non-finite values".into(),
            ));
        }
        let dt = (t_grid[t_grid.len() - 1] - t_grid[0]) / (t_grid.len() - 1) as f64;
        if dt <= 0.0 {
            return Err(Error::InvalidGrid("time grid must be increasing".into()));
        }
        for w in t_grid.windows(2) {
            let step = w[1] - w[0];
            if (step - dt).abs() > 1e-10 * dt {
                return Err(Error::InvalidGrid("time grid must be equispaced".into()));
            }
        }
        if !theta0.is_finite() || !omega0.is_finite() {
            return Err(Error::InvalidData(
                "initial conditions must be finite".into(),
            ));
        }
        if substeps < 1 {
            return Err(Error::InvalidData("substeps must be at least 1".into()));
        }
        Ok(PendulumConfig {
            b,
            lambda_grid,
            t_grid,
            theta0,
            omega0,
            substeps,
        })
    }

    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda_grid
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn damping(&self) -> f64 {
        self.b
    }
}

/// Right-hand side of the first-order system: `(θ̇, ω̇) = (ω, −b ω − λ sin θ)`.
pub fn pendulum_rhs(theta: f64, omega: f64, b: f64, lambda: f64) -> (f64, f64) {
    (omega, -b * omega - lambda * theta.sin())
}

fn rk4_step(theta: f64, omega: f64, b: f64, lambda: f64, dt: f64) -> (f64, f64) {
    let (k1t, k1w) = pendulum_rhs(theta, omega, b, lambda);
    let (k2t, k2w) = pendulum_rhs(theta + 0.5 * dt * k1t, omega + 0.5 * dt * k1w, b, lambda);
    let (k3t, k3w) = pendulum_rhs(theta + 0.5 * dt * k2t, omega + 0.5 * dt * k2w, b, lambda);
    let (k4t, k4w) = pendulum_rhs(theta + dt * k3t, omega + dt * k3w, b, lambda);
    (
        theta + dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t),
        omega + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
    )
}

/// Full `(θ, ω)` trajectory on the output grid.
pub fn simulate_pendulum_states(cfg: &PendulumConfig, lambda: f64) -> Result<Vec<(f64, f64)>> {
    let mut states = Vec::with_capacity(cfg.t_grid.len());
    let mut theta = cfg.theta0;
    let mut omega = cfg.omega0;
    states.push((theta, omega));
    for w in cfg.t_grid.windows(2) {
        let dt = (w[1] - w[0]) / cfg.substeps as f64;
        for _ in 0..cfg.substeps {
            (theta, omega) = rk4_step(theta, omega, cfg.b, lambda, dt);
        }
        if !theta.is_finite() || !omega.is_finite() {
            return Err(Error::IntegrationFailure(format!(
                "non-finite state at t = {} for lambda = {lambda}",
                w[1]
            )));
        }
        states.push((theta, omega));
    }
    Ok(states)
}

/// The angle `θ` sampled on the output grid; the first entry is the
/// initial condition exactly.
pub fn simulate_pendulum(cfg: &PendulumConfig, lambda: f64) -> Result<Array1<f64>> {
    Ok(simulate_pendulum_states(cfg, lambda)?
        .into_iter()
        .map(|(theta, _)| theta)
        .collect())
}

/// One solution per lambda, assembled into a training set.
pub fn generate_training(cfg: &PendulumConfig) -> Result<TrainingSet> {
    let n = cfg.lambda_grid.len();
    let l = cfg.t_grid.len();
    let mut values = Array2::zeros((n, l));
    for (i, &lambda) in cfg.lambda_grid.iter().enumerate() {
        let row = simulate_pendulum(cfg, lambda)?;
        values.row_mut(i).assign(&row);
    }
    TrainingSet::from_real(values, cfg.lambda_grid.clone(), cfg.t_grid.clone())
}
