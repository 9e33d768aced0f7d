//! Classical fourth-order Runge-Kutta with a fixed step.
//!
//! Fixed stepping keeps trajectory comparisons against closed-form
//! propagators reproducible; the systems integrated here are small and
//! smooth, so adaptive control would buy nothing.

use ndarray::{Array1, Array2};

use super::C64;
use crate::error::{Error, Result};

/// State vectors the integrator can advance.
pub trait OdeState: Clone {
    /// `self += coeff * other`.
    fn add_scaled(&mut self, coeff: f64, other: &Self);
    fn all_finite(&self) -> bool;
}

impl OdeState for Array1<f64> {
    fn add_scaled(&mut self, coeff: f64, other: &Self) {
        self.zip_mut_with(other, |a, b| *a += coeff * b);
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl OdeState for Array2<C64> {
    fn add_scaled(&mut self, coeff: f64, other: &Self) {
        self.zip_mut_with(other, |a, b| *a += b * coeff);
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> OdeState for [f64; N] {
    fn add_scaled(&mut self, coeff: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += coeff * b;
        }
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

/// Integration result: the state at every accepted step, `t0` included.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S: Clone> Trajectory<S> {
    pub fn final_state(&self) -> &S {
        self.states.last().expect("trajectory holds at least t0")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t0")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Integrates `dy/dt = rhs(y, t)` from `t0` to `t1` with fixed step `step`.
///
/// The last step is shortened so the trajectory lands exactly on `t1`.
/// Every accepted step is recorded in the returned [`Trajectory`].
pub fn rk4_integrate<S, F>(rhs: F, y0: S, t0: f64, t1: f64, step: f64) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: Fn(&S, f64) -> S,
{
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::NonPositiveStep { step });
    }
    if t1 < t0 {
        return Err(Error::ReversedTimeSpan { t0, t1 });
    }

    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![y0.clone()],
    };
    let mut y = y0;
    let mut k: u64 = 0;
    loop {
        // Accumulate time as t0 + k*step to avoid drift over long runs.
        let t = t0 + k as f64 * step;
        if t >= t1 - 1e-15 * t1.abs().max(1.0) {
            break;
        }
        let h = step.min(t1 - t);
        y = rk4_step(&rhs, &y, t, h)?;
        let t_next = if h < step { t1 } else { t0 + (k + 1) as f64 * step };
        traj.times.push(t_next);
        traj.states.push(y.clone());
        if h < step {
            break;
        }
        k += 1;
    }
    Ok(traj)
}

fn rk4_step<S, F>(rhs: &F, y: &S, t: f64, h: f64) -> Result<S>
where
    S: OdeState,
    F: Fn(&S, f64) -> S,
{
    let check = |k: S, t: f64| -> Result<S> {
        if k.all_finite() {
            Ok(k)
        } else {
            Err(Error::NonFiniteDerivative { t })
        }
    };

    let k1 = check(rhs(y, t), t)?;
    let mut y2 = y.clone();
    y2.add_scaled(0.5 * h, &k1);
    let k2 = check(rhs(&y2, t + 0.5 * h), t + 0.5 * h)?;
    let mut y3 = y.clone();
    y3.add_scaled(0.5 * h, &k2);
    let k3 = check(rhs(&y3, t + 0.5 * h), t + 0.5 * h)?;
    let mut y4 = y.clone();
    y4.add_scaled(h, &k3);
    let k4 = check(rhs(&y4, t + h), t + h)?;

    let mut out = y.clone();
    out.add_scaled(h / 6.0, &k1);
    out.add_scaled(h / 3.0, &k2);
    out.add_scaled(h / 3.0, &k3);
    out.add_scaled(h / 6.0, &k4);
    Ok(out)
}
