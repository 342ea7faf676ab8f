use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{LinearFlowModel, MorseError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowOptions {
    /// Largest tolerated `| |φ| - 1 |` after a step, before projection.
    pub drift_tolerance: f64,
    /// Keep every `record_every`-th step; the final state is always kept.
    pub record_every: usize,
    /// Stop once `|φ'|` stays below `convergence_threshold` for
    /// `convergence_window` consecutive steps.
    pub stop_on_convergence: bool,
    pub convergence_threshold: f64,
    pub convergence_window: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            drift_tolerance: 1e-6,
            record_every: 1,
            stop_on_convergence: true,
            convergence_threshold: 1e-8,
            convergence_window: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub t: f64,
    pub phi: Vec<f64>,
    pub s: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrajectory {
    pub samples: Vec<FlowSample>,
    pub steps: usize,
    pub converged: bool,
    /// 1-based index of the eigenvector closest to the terminal state.
    pub limit_index: usize,
    pub limit_eigenvalue: f64,
    /// Largest `| |φ| - 1 |` seen before projection.
    pub max_drift: f64,
}

impl FlowTrajectory {
    pub fn terminal(&self) -> &FlowSample {
        self.samples.last().expect("trajectory has at least one sample")
    }
}

fn rayleigh(l: &DMatrix<f64>, phi: &DVector<f64>) -> f64 {
    phi.dot(&(l * phi))
}

/// Right-hand side of `φ' = -Lφ + Λ(φ)φ`, `s' = -Λ(φ)s`.
fn field(l: &DMatrix<f64>, phi: &DVector<f64>, s: f64) -> (DVector<f64>, f64) {
    let lphi = l * phi;
    let lam = phi.dot(&lphi) / phi.norm_squared();
    (phi * lam - lphi, -lam * s)
}

/// Classical fourth-order scheme with projection back to the unit sphere
/// after every step.
pub fn integrate_blowup_flow(
    model: &LinearFlowModel,
    phi0: &[f64],
    s0: f64,
    t_max: f64,
    step: f64,
    opts: &FlowOptions,
) -> Result<FlowTrajectory, MorseError> {
    let l = model.matrix()?;
    let spectrum = model.spectrum()?;
    let n = l.nrows();
    if phi0.len() != n {
        return Err(MorseError::DimensionMismatch { expected: n, found: phi0.len() });
    }
    if !(step > 0.0 && step.is_finite() && t_max >= 0.0 && t_max.is_finite()) {
        return Err(MorseError::InvalidStep { step, t_max });
    }
    let mut phi = DVector::from_column_slice(phi0);
    let norm = phi.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(MorseError::NotUnitVector { norm });
    }
    if !(s0 >= 0.0) {
        return Err(MorseError::NegativeS(s0));
    }
    phi /= norm;
    let mut s = s0;
    let record_every = opts.record_every.max(1);
    let total_steps = (t_max / step).round() as usize;
    let mut samples = vec![FlowSample { t: 0.0, phi: phi.iter().copied().collect(), s, lambda: rayleigh(&l, &phi) }];
    let mut quiet = 0usize;
    let mut converged = false;
    let mut max_drift = 0.0f64;
    let mut k = 0usize;
    while k < total_steps {
        let (k1p, k1s) = field(&l, &phi, s);
        let (k2p, k2s) = field(&l, &(&phi + &k1p * (step / 2.0)), s + k1s * step / 2.0);
        let (k3p, k3s) = field(&l, &(&phi + &k2p * (step / 2.0)), s + k2s * step / 2.0);
        let (k4p, k4s) = field(&l, &(&phi + &k3p * step), s + k3s * step);
        let next = &phi + (k1p + &k2p * 2.0 + &k3p * 2.0 + k4p) * (step / 6.0);
        let s_next = s + (k1s + 2.0 * k2s + 2.0 * k3s + k4s) * step / 6.0;
        k += 1;
        let t = k as f64 * step;
        let nn = next.norm();
        let drift = (nn - 1.0).abs();
        if !drift.is_finite() || drift > opts.drift_tolerance || !s_next.is_finite() {
            return Err(MorseError::StepTooLarge { t, drift });
        }
        max_drift = max_drift.max(drift);
        phi = next / nn;
        s = s_next.max(0.0);

        let (vel, _) = field(&l, &phi, s);
        if vel.norm() < opts.convergence_threshold {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= opts.convergence_window {
            converged = true;
        }
        let stop = converged && opts.stop_on_convergence;
        if k % record_every == 0 || k == total_steps || stop {
            samples.push(FlowSample { t, phi: phi.iter().copied().collect(), s, lambda: rayleigh(&l, &phi) });
        }
        if stop {
            break;
        }
    }
    let (limit_index, _) = spectrum
        .vectors
        .iter()
        .enumerate()
        .map(|(i, w)| (i, w.iter().zip(phi.iter()).map(|(a, b)| a * b).sum::<f64>().abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    Ok(FlowTrajectory {
        samples,
        steps: k,
        converged,
        limit_index: limit_index + 1,
        limit_eigenvalue: spectrum.values[limit_index],
        max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvector_is_stationary() {
        let m = LinearFlowModel::diagonal(&[-1.0, 2.0, 3.5]);
        let tr = integrate_blowup_flow(&m, &[0.0, 0.0, 1.0], 1.0, 2.0, 1e-3, &FlowOptions::default()).unwrap();
        for smp in &tr.samples {
            assert_eq!(smp.phi, vec![0.0, 0.0, 1.0]);
            assert_eq!(smp.lambda, 3.5);
        }
        assert_eq!(tr.limit_index, 3);
    }

    #[test]
    fn generic_start_converges_to_lowest_eigenvector() {
        let m = LinearFlowModel::diagonal(&[-1.0, 2.0]);
        let a = 0.3f64;
        let phi0 = [a.cos(), a.sin()];
        let opts = FlowOptions { stop_on_convergence: false, ..FlowOptions::default() };
        let tr = integrate_blowup_flow(&m, &phi0, 0.5, 10.0, 1e-3, &opts).unwrap();
        let end = tr.terminal();
        assert!((end.lambda + 1.0).abs() < 1e-6);
        assert!((end.phi[0].abs() - 1.0).abs() < 1e-6);
        assert_eq!(tr.limit_index, 1);
        // s(t) = s0 |e^{-Lt} φ0|
        for smp in tr.samples.iter().step_by(500) {
            let t = smp.t;
            let exact = 0.5 * ((phi0[0] * t.exp()).powi(2) + (phi0[1] * (-2.0 * t).exp()).powi(2)).sqrt();
            assert!((smp.s / exact - 1.0).abs() < 1e-8, "t={t} {} vs {exact}", smp.s);
        }
        // s grows like e^t once Λ has settled.
        let last = tr.samples.len() - 1;
        let ratio = tr.samples[last].s / tr.samples[last - 1000].s;
        assert!((ratio / 1f64.exp() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn boundary_is_invariant() {
        let m = LinearFlowModel::diagonal(&[-1.0, 2.0]);
        let tr = integrate_blowup_flow(&m, &[0.6, 0.8], 0.0, 5.0, 1e-3, &FlowOptions::default()).unwrap();
        assert!(tr.samples.iter().all(|x| x.s == 0.0));
    }

    #[test]
    fn norm_stays_one() {
        let m = LinearFlowModel::new(vec![vec![1.0, 0.5, 0.0], vec![0.5, -2.0, 0.3], vec![0.0, 0.3, 4.0]]);
        let v = [0.5, 0.5, 0.5f64.sqrt()];
        let tr = integrate_blowup_flow(&m, &v, 1.0, 5.0, 1e-3, &FlowOptions::default()).unwrap();
        for smp in &tr.samples {
            let n: f64 = smp.phi.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn oversized_step_is_reported() {
        let m = LinearFlowModel::diagonal(&[-50.0, 40.0]);
        let r = integrate_blowup_flow(&m, &[0.6, 0.8], 1.0, 5.0, 0.5, &FlowOptions::default());
        assert!(matches!(r, Err(MorseError::StepTooLarge { .. })));
    }

    #[test]
    fn invalid_inputs() {
        let m = LinearFlowModel::diagonal(&[-1.0, 2.0]);
        let o = FlowOptions::default();
        assert!(matches!(integrate_blowup_flow(&m, &[1.0, 1.0], 1.0, 1.0, 1e-3, &o), Err(MorseError::NotUnitVector { .. })));
        assert!(matches!(integrate_blowup_flow(&m, &[1.0, 0.0], -1.0, 1.0, 1e-3, &o), Err(MorseError::NegativeS(_))));
        assert!(matches!(integrate_blowup_flow(&m, &[1.0], 1.0, 1.0, 1e-3, &o), Err(MorseError::DimensionMismatch { .. })));
        assert!(matches!(integrate_blowup_flow(&m, &[1.0, 0.0], 1.0, 1.0, 0.0, &o), Err(MorseError::InvalidStep { .. })));
    }
}
