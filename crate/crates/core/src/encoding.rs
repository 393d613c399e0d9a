//! Encoding circuits that map classical feature vectors to pure states, plus
//! Gaussian feature sampling and Monte-Carlo average states.
//!
//! Feature layout is qubit-major: the feature for qubit `j`, layer `d` and
//! rotation `k` sits at `(j * depth + d) * r + k`, where `r` is 1 for the
//! Ry families and 3 for U3 (angles in `Rz, Ry, Rz` application order).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quantum::{ComplexMatrix, DensityMatrix, GateSpec, StateVector};
use crate::rng::SeededStream;
use crate::{Error, Result};

/// Largest register the dense routines are sized for.
pub const MAX_QUBITS: usize = 10;

/// Samples per reduction chunk in Monte-Carlo averages.
pub const REDUCTION_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingFamily {
    /// Columns of `Ry` rotations, no entanglers.
    RyProduct,
    /// Columns of `U3` gates separated by entangler layers.
    U3Entangled,
    /// Columns of `Ry` rotations separated by ring-CNOT layers.
    StronglyEntanglingRy,
}

impl EncodingFamily {
    pub fn rotations_per_slot(self) -> usize {
        match self {
            EncodingFamily::U3Entangled => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EncodingFamily::RyProduct => "ry-product",
            EncodingFamily::U3Entangled => "u3-entangled",
            EncodingFamily::StronglyEntanglingRy => "strongly-entangling-ry",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglerKind {
    Cnot,
    Cz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entangler {
    pub kind: EntanglerKind,
    pub control: usize,
    pub target: usize,
}

impl Entangler {
    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: EntanglerKind::Cnot, control, target }
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self { kind: EntanglerKind::Cz, control, target }
    }

    pub fn gate(&self) -> GateSpec {
        match self.kind {
            EntanglerKind::Cnot => GateSpec::cnot(self.control, self.target),
            EntanglerKind::Cz => GateSpec::cz(self.control, self.target),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.gate().validate(n)
    }
}

/// Ordered two-qubit gates applied between two rotation columns.
pub type EntanglerLayer = Vec<Entangler>;

/// CNOTs `i → i+1 mod n`, applied in order of `i`. Empty for one qubit.
pub fn ring_cnot_layer(n: usize) -> EntanglerLayer {
    if n < 2 {
        return Vec::new();
    }
    (0..n).map(|i| Entangler::cnot(i, (i + 1) % n)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingCircuitSpec {
    pub family: EncodingFamily,
    pub n: usize,
    pub depth: usize,
    /// `depth − 1` layers for the entangled families, none for `RyProduct`.
    pub entanglers: Vec<EntanglerLayer>,
}

impl EncodingCircuitSpec {
    pub fn ry_product(n: usize, depth: usize) -> Result<Self> {
        let spec = Self { family: EncodingFamily::RyProduct, n, depth, entanglers: Vec::new() };
        spec.validate()?;
        Ok(spec)
    }

    /// U3 columns with ring-CNOT entanglers.
    pub fn u3_entangled(n: usize, depth: usize) -> Result<Self> {
        Self::u3_entangled_with(n, depth, vec![ring_cnot_layer(n); depth.saturating_sub(1)])
    }

    pub fn u3_entangled_with(n: usize, depth: usize, entanglers: Vec<EntanglerLayer>) -> Result<Self> {
        let spec = Self { family: EncodingFamily::U3Entangled, n, depth, entanglers };
        spec.validate()?;
        Ok(spec)
    }

    pub fn strongly_entangling_ry(n: usize, depth: usize) -> Result<Self> {
        let spec = Self {
            family: EncodingFamily::StronglyEntanglingRy,
            n,
            depth,
            entanglers: vec![ring_cnot_layer(n); depth.saturating_sub(1)],
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default layout for a family: ring CNOTs wherever entanglers go.
    pub fn for_family(family: EncodingFamily, n: usize, depth: usize) -> Result<Self> {
        match family {
            EncodingFamily::RyProduct => Self::ry_product(n, depth),
            EncodingFamily::U3Entangled => Self::u3_entangled(n, depth),
            EncodingFamily::StronglyEntanglingRy => Self::strongly_entangling_ry(n, depth),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::InvalidSpec(format!("qubit count {} outside 1..={MAX_QUBITS}", self.n)));
        }
        if self.depth == 0 {
            return Err(Error::InvalidSpec("depth must be at least 1".into()));
        }
        let expected_layers = match self.family {
            EncodingFamily::RyProduct => 0,
            _ => self.depth - 1,
        };
        if self.entanglers.len() != expected_layers {
            return Err(Error::InvalidSpec(format!(
                "{} with depth {} needs {expected_layers} entangler layer(s), got {}",
                self.family.name(),
                self.depth,
                self.entanglers.len()
            )));
        }
        for layer in &self.entanglers {
            for e in layer {
                e.validate(self.n)?;
            }
        }
        Ok(())
    }

    pub fn rotations_per_slot(&self) -> usize {
        self.family.rotations_per_slot()
    }

    /// Number of features the circuit consumes.
    pub fn feature_count(&self) -> usize {
        self.n * self.depth * self.rotations_per_slot()
    }

    pub fn feature_index(&self, qubit: usize, layer: usize, rotation: usize) -> usize {
        (qubit * self.depth + layer) * self.rotations_per_slot() + rotation
    }

    fn check_features(&self, len: usize) -> Result<()> {
        if len != self.feature_count() {
            return Err(Error::FeatureLength { expected: self.feature_count(), got: len });
        }
        Ok(())
    }

    /// Gate sequence for feature vector `x`, in application order.
    pub fn gates(&self, x: &[f64]) -> Result<Vec<GateSpec>> {
        self.validate()?;
        self.check_features(x.len())?;
        let mut gates = Vec::new();
        for d in 0..self.depth {
            for j in 0..self.n {
                match self.family {
                    EncodingFamily::U3Entangled => {
                        let i = self.feature_index(j, d, 0);
                        gates.push(GateSpec::u3(j, x[i], x[i + 1], x[i + 2]));
                    }
                    _ => gates.push(GateSpec::ry(j, x[self.feature_index(j, d, 0)])),
                }
            }
            if let Some(layer) = self.entanglers.get(d) {
                gates.extend(layer.iter().map(Entangler::gate));
            }
        }
        Ok(gates)
    }
}

/// Independent Gaussian per feature, in the encoder's feature layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianFeatureSpec {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl GaussianFeatureSpec {
    pub fn new(means: Vec<f64>, stds: Vec<f64>) -> Result<Self> {
        if means.len() != stds.len() {
            return Err(Error::DimensionMismatch { expected: means.len(), got: stds.len() });
        }
        if let Some(s) = stds.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::InvalidParameter(format!("standard deviation {s} must be finite and ≥ 0")));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidParameter("means must be finite".into()));
        }
        Ok(Self { means, stds })
    }

    pub fn with_uniform_std(means: Vec<f64>, std: f64) -> Result<Self> {
        let stds = vec![std; means.len()];
        Self::new(means, stds)
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    pub fn min_std(&self) -> f64 {
        self.stds.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Pure state obtained by running the encoder on `|0…0⟩`.
pub fn encode(spec: &EncodingCircuitSpec, x: &[f64]) -> Result<StateVector> {
    let gates = spec.gates(x)?;
    let mut state = StateVector::zero(spec.n);
    for g in &gates {
        state.apply_trusted(g);
    }
    Ok(state)
}

/// One draw per feature from `N(μ_i, σ_i²)`.
pub fn sample_features(g: &GaussianFeatureSpec, rng: &mut SeededStream) -> Vec<f64> {
    g.means
        .iter()
        .zip(&g.stds)
        .map(|(&m, &s)| if s == 0.0 { m } else { rng.normal(m, s) })
        .collect()
}

/// `(1/M) Σ_m |ψ(x_m)⟩⟨ψ(x_m)|` with sample `m` drawn from `rng.substream(m)`.
pub fn monte_carlo_average(
    spec: &EncodingCircuitSpec,
    g: &GaussianFeatureSpec,
    samples: usize,
    rng: &SeededStream,
) -> Result<DensityMatrix> {
    if samples == 0 {
        return Err(Error::Empty("Monte-Carlo sample set"));
    }
    spec.validate()?;
    spec.check_features(g.len())?;
    average_pure_states(spec.n, samples, |m| {
        let x = sample_features(g, &mut rng.substream(m as u64));
        encode(spec, &x)
    })
}

/// Mean of `count` pure-state projectors produced by `state_at`.
///
/// States are summed in fixed chunks of [`REDUCTION_CHUNK`] and the chunk sums
/// are combined in index order, so the result does not depend on the number
/// of worker threads.
pub(crate) fn average_pure_states<F>(n: usize, count: usize, state_at: F) -> Result<DensityMatrix>
where
    F: Fn(usize) -> Result<StateVector> + Sync,
{
    if count == 0 {
        return Err(Error::Empty("state collection"));
    }
    let dim = 1usize << n;
    let chunks = count.div_ceil(REDUCTION_CHUNK);
    let batch = (rayon::current_num_threads() * 2).max(1);
    let mut total = vec![Complex64::new(0.0, 0.0); dim * dim];
    let chunk_ids: Vec<usize> = (0..chunks).collect();
    for ids in chunk_ids.chunks(batch) {
        let partials: Vec<Vec<Complex64>> = ids
            .par_iter()
            .map(|&c| {
                let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
                let end = ((c + 1) * REDUCTION_CHUNK).min(count);
                for m in c * REDUCTION_CHUNK..end {
                    let psi = state_at(m)?;
                    if psi.num_qubits() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: psi.num_qubits() });
                    }
                    accumulate_projector(&mut acc, psi.amplitudes());
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }
    }
    // upper triangle holds the sums; mirror it
    let inv = 1.0 / count as f64;
    let mut m = ComplexMatrix::from_vec(dim, dim, total)?;
    for i in 0..dim {
        m[(i, i)] = Complex64::new(m[(i, i)].re * inv, 0.0);
        for j in i + 1..dim {
            let v = m[(i, j)] * inv;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(DensityMatrix::from_parts(n, m))
}

fn accumulate_projector(acc: &mut [Complex64], psi: &[Complex64]) {
    let dim = psi.len();
    for i in 0..dim {
        let a = psi[i];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let row = &mut acc[i * dim..(i + 1) * dim];
        for j in i..dim {
            row[j] += a * psi[j].conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::density_from_state;

    #[test]
    fn zero_rotation_is_ground_state() {
        let spec = EncodingCircuitSpec::ry_product(1, 1).unwrap();
        assert_eq!(encode(&spec, &[0.0]).unwrap(), StateVector::zero(1));
        let spec = EncodingCircuitSpec::u3_entangled(2, 1).unwrap();
        let s = encode(&spec, &[0.0; 6]).unwrap();
        assert!((s.inner(&StateVector::zero(2)).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ry_additivity_across_layers() {
        let two = EncodingCircuitSpec::ry_product(1, 2).unwrap();
        let one = EncodingCircuitSpec::ry_product(1, 1).unwrap();
        let a = encode(&two, &[0.4, 1.3]).unwrap();
        let b = encode(&one, &[1.7]).unwrap();
        assert!((a.inner(&b).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spec_validation() {
        assert!(EncodingCircuitSpec::ry_product(0, 1).is_err());
        assert!(EncodingCircuitSpec::ry_product(2, 0).is_err());
        assert!(EncodingCircuitSpec::u3_entangled_with(2, 3, vec![ring_cnot_layer(2)]).is_err());
        assert!(EncodingCircuitSpec::u3_entangled_with(2, 2, vec![vec![Entangler::cz(0, 2)]]).is_err());
        assert!(EncodingCircuitSpec::u3_entangled_with(2, 2, vec![vec![Entangler::cz(1, 1)]]).is_err());
        let s = EncodingCircuitSpec::u3_entangled(3, 4).unwrap();
        assert_eq!(s.feature_count(), 36);
        assert_eq!(s.entanglers.len(), 3);
        assert!(matches!(encode(&s, &[0.0; 35]), Err(Error::FeatureLength { expected: 36, got: 35 })));
        assert_eq!(EncodingCircuitSpec::strongly_entangling_ry(4, 3).unwrap().feature_count(), 12);
    }

    #[test]
    fn ring_layout() {
        assert!(ring_cnot_layer(1).is_empty());
        assert_eq!(ring_cnot_layer(3), vec![Entangler::cnot(0, 1), Entangler::cnot(1, 2), Entangler::cnot(2, 0)]);
    }

    #[test]
    fn zero_variance_sampling_returns_means() {
        let g = GaussianFeatureSpec::with_uniform_std(vec![0.1, -2.0, 3.0], 0.0).unwrap();
        assert_eq!(sample_features(&g, &mut SeededStream::new(5)), vec![0.1, -2.0, 3.0]);
        assert!(GaussianFeatureSpec::new(vec![0.0], vec![-1.0]).is_err());
        assert!(GaussianFeatureSpec::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = GaussianFeatureSpec::with_uniform_std(vec![0.0; 8], 1.0).unwrap();
        let root = SeededStream::new(11);
        assert_eq!(sample_features(&g, &mut root.substream(2)), sample_features(&g, &mut root.substream(2)));
    }

    #[test]
    fn sample_moments() {
        let g = GaussianFeatureSpec::with_uniform_std(vec![0.0], 1.0).unwrap();
        let mut s = SeededStream::new(2024);
        let m = 1_000_000;
        let draws: Vec<f64> = (0..m).map(|_| sample_features(&g, &mut s)[0]).collect();
        let mean = draws.iter().sum::<f64>() / m as f64;
        let std = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64).sqrt();
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((std - 1.0).abs() < 0.01, "std {std}");
    }

    #[test]
    fn monte_carlo_degenerate_cases() {
        let spec = EncodingCircuitSpec::u3_entangled(2, 2).unwrap();
        let means: Vec<f64> = (0..12).map(|i| 0.3 * i as f64).collect();
        let g = GaussianFeatureSpec::with_uniform_std(means.clone(), 0.0).unwrap();
        let rho = monte_carlo_average(&spec, &g, 50, &SeededStream::new(1)).unwrap();
        let expected = density_from_state(&encode(&spec, &means).unwrap());
        assert!(rho.frobenius_distance(&expected).unwrap() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-10);

        let g = GaussianFeatureSpec::with_uniform_std(means, 0.7).unwrap();
        let root = SeededStream::new(3);
        let one = monte_carlo_average(&spec, &g, 1, &root).unwrap();
        let x = sample_features(&g, &mut root.substream(0));
        let single = density_from_state(&encode(&spec, &x).unwrap());
        assert!(one.frobenius_distance(&single).unwrap() < 1e-14);
        assert!(monte_carlo_average(&spec, &g, 0, &root).is_err());
    }

    #[test]
    fn monte_carlo_is_valid_density() {
        let spec = EncodingCircuitSpec::strongly_entangling_ry(3, 2).unwrap();
        let g = GaussianFeatureSpec::with_uniform_std(vec![0.5; 6], 0.8).unwrap();
        let rho = monte_carlo_average(&spec, &g, 3000, &SeededStream::new(8)).unwrap();
        assert!(DensityMatrix::new(3, rho.matrix().clone()).is_ok());
    }
}
