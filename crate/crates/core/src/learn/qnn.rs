use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::ring_cnot_layer;
use crate::quantum::{apply_cnot, apply_ry, apply_rz, GateSpec, Pauli, PauliString, StateVector};
use crate::rng::SeededStream;
use crate::{Error, Result};

/// Variational classifier: one U3 column (`U3 = Rz(θc) Ry(θb) Rz(θa)` on
/// qubit `j` with `θa = θ[j]`, `θb = θ[n + j]`, `θc = θ[2n + j]`), then
/// `layers` blocks of ring CNOTs followed by an Ry column whose angle on
/// qubit `j` in block `l` is `θ[3n + l·n + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnnSpec {
    pub n: usize,
    pub layers: usize,
    pub theta: Vec<f64>,
    pub observables: Vec<PauliString>,
}

impl QnnSpec {
    /// All-zero parameters.
    pub fn new(n: usize, layers: usize, observables: Vec<PauliString>) -> Result<Self> {
        let spec = Self { n, layers, theta: vec![0.0; Self::param_count_for(n, layers)], observables };
        spec.validate()?;
        Ok(spec)
    }

    /// `layers = n + 2` and observables `Z`, `X` on wire 0.
    pub fn default_binary(n: usize) -> Result<Self> {
        Self::new(n, n + 2, vec![PauliString::single(n, 0, Pauli::Z), PauliString::single(n, 0, Pauli::X)])
    }

    pub fn param_count_for(n: usize, layers: usize) -> usize {
        3 * n + n * layers
    }

    pub fn param_count(&self) -> usize {
        Self::param_count_for(self.n, self.layers)
    }

    pub fn num_classes(&self) -> usize {
        self.observables.len()
    }

    pub fn with_theta(mut self, theta: Vec<f64>) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    /// Parameters drawn uniformly from `[0, 2π)`.
    pub fn random_theta(&self, rng: &mut SeededStream) -> Vec<f64> {
        (0..self.param_count()).map(|_| rng.uniform_range(0.0, TAU)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("QNN needs at least one qubit".into()));
        }
        if self.theta.len() != self.param_count() {
            return Err(Error::DimensionMismatch { expected: self.param_count(), got: self.theta.len() });
        }
        if self.observables.len() < 2 {
            return Err(Error::InvalidSpec(format!("need K ≥ 2 observables, got {}", self.observables.len())));
        }
        if let Some(o) = self.observables.iter().find(|o| o.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, got: o.len() });
        }
        Ok(())
    }

    /// Gate sequence in application order.
    pub fn gates(&self) -> Vec<GateSpec> {
        let c = Circuit::compile(self);
        c.ops
            .iter()
            .map(|op| match *op {
                Op::Ry { wire, param, .. } => GateSpec::ry(wire, self.theta[param]),
                Op::Rz { wire, param, .. } => GateSpec::rz(wire, self.theta[param]),
                Op::Cnot { control, target, .. } => GateSpec::cnot(control, target),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Ry { wire: usize, mask: usize, param: usize },
    Rz { wire: usize, mask: usize, param: usize },
    Cnot { control: usize, target: usize, cm: usize, tm: usize },
}

/// Ansatz lowered to bit masks, with observables pre-decoded.
pub(crate) struct Circuit {
    ops: Vec<Op>,
    observables: Vec<(usize, usize, Complex64)>,
}

impl Circuit {
    pub(crate) fn compile(q: &QnnSpec) -> Self {
        let n = q.n;
        let mask = |w: usize| 1usize << (n - 1 - w);
        let mut ops = Vec::with_capacity(q.param_count() + n * q.layers);
        for j in 0..n {
            ops.push(Op::Rz { wire: j, mask: mask(j), param: j });
            ops.push(Op::Ry { wire: j, mask: mask(j), param: n + j });
            ops.push(Op::Rz { wire: j, mask: mask(j), param: 2 * n + j });
        }
        for l in 0..q.layers {
            for e in ring_cnot_layer(n) {
                ops.push(Op::Cnot { control: e.control, target: e.target, cm: mask(e.control), tm: mask(e.target) });
            }
            for j in 0..n {
                ops.push(Op::Ry { wire: j, mask: mask(j), param: 3 * n + l * n + j });
            }
        }
        let observables = q
            .observables
            .iter()
            .map(|o| {
                let a = o.action();
                (a.flip, a.sign, a.y_phase)
            })
            .collect();
        Self { ops, observables }
    }

    fn apply(op: &Op, amps: &mut [Complex64], angle: impl Fn(usize) -> f64) {
        match *op {
            Op::Ry { mask, param, .. } => apply_ry(amps, mask, angle(param)),
            Op::Rz { mask, param, .. } => apply_rz(amps, mask, angle(param)),
            Op::Cnot { cm, tm, .. } => apply_cnot(amps, cm, tm),
        }
    }

    fn scores(&self, amps: &[Complex64]) -> Vec<f64> {
        self.observables
            .iter()
            .map(|&(flip, sign, phase)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, a) in amps.iter().enumerate() {
                    let p = if (k & sign).count_ones() % 2 == 1 { -phase } else { phase };
                    acc += amps[k ^ flip].conj() * p * a;
                }
                acc.re
            })
            .collect()
    }

    pub(crate) fn forward(&self, theta: &[f64], input: &[Complex64]) -> Vec<f64> {
        let mut amps = input.to_vec();
        for op in &self.ops {
            Self::apply(op, &mut amps, |p| theta[p]);
        }
        self.scores(&amps)
    }

    /// Scores and their parameter-shift Jacobian `jac[i][k] = ∂h_k/∂θ_i`.
    /// Each shifted circuit reuses the unshifted prefix.
    pub(crate) fn forward_with_jacobian(&self, theta: &[f64], input: &[Complex64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut jac = vec![Vec::new(); theta.len()];
        let mut prefix = input.to_vec();
        let mut scratch = vec![Complex64::new(0.0, 0.0); prefix.len()];
        for (idx, op) in self.ops.iter().enumerate() {
            let param = match *op {
                Op::Ry { param, .. } | Op::Rz { param, .. } => Some(param),
                Op::Cnot { .. } => None,
            };
            if let Some(p) = param {
                let mut shifted = [Vec::new(), Vec::new()];
                for (s, out) in [FRAC_PI_2, -FRAC_PI_2].into_iter().zip(shifted.iter_mut()) {
                    scratch.copy_from_slice(&prefix);
                    Self::apply(op, &mut scratch, |q| theta[q] + s);
                    for rest in &self.ops[idx + 1..] {
                        Self::apply(rest, &mut scratch, |q| theta[q]);
                    }
                    *out = self.scores(&scratch);
                }
                jac[p] = shifted[0].iter().zip(&shifted[1]).map(|(a, b)| 0.5 * (a - b)).collect();
            }
            Self::apply(op, &mut prefix, |q| theta[q]);
        }
        (self.scores(&prefix), jac)
    }
}

fn check_state(qnn: &QnnSpec, state: &StateVector) -> Result<()> {
    if state.num_qubits() != qnn.n {
        return Err(Error::DimensionMismatch { expected: qnn.n, got: state.num_qubits() });
    }
    Ok(())
}

/// Scores `h_k = ⟨ψ| U(θ)† H_k U(θ) |ψ⟩`.
pub fn qnn_forward(qnn: &QnnSpec, state: &StateVector) -> Result<Vec<f64>> {
    qnn.validate()?;
    check_state(qnn, state)?;
    Ok(Circuit::compile(qnn).forward(&qnn.theta, state.amplitudes()))
}

/// `∂h_k/∂θ_i` by the parameter-shift rule, indexed `[i][k]`.
pub fn score_jacobian(qnn: &QnnSpec, state: &StateVector) -> Result<Vec<Vec<f64>>> {
    qnn.validate()?;
    check_state(qnn, state)?;
    Ok(Circuit::compile(qnn).forward_with_jacobian(&qnn.theta, state.amplitudes()).1)
}
