//! Linear structural equation models with additive Gaussian noise.
//!
//! Each variable is a weighted sum of its parents plus independent zero-mean noise.
//! Variables are listed in a topological order, so every edge points forward.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::gaussian::LabeledCovariance;
use crate::rng::{self, Rng};

/// Solved noise variances in `[-STANDARDIZE_TOL, 0]` are treated as an exact zero-noise limit.
const STANDARDIZE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub parent: String,
    pub child: String,
    pub coefficient: f64,
}

impl Edge {
    pub fn new(parent: &str, child: &str, coefficient: f64) -> Self {
        Self {
            parent: parent.to_string(),
            child: child.to_string(),
            coefficient,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSem {
    variables: Vec<String>,
    edges: Vec<Edge>,
    noise_variances: Vec<f64>,
    standardized: bool,
    /// `(parent index, coefficient)` per variable.
    parents: Vec<Vec<(usize, f64)>>,
}

impl LinearSem {
    /// SEM with explicit noise variances.
    pub fn new(variables: Vec<String>, edges: Vec<Edge>, noise_variances: Vec<f64>) -> Result<Self> {
        if noise_variances.len() != variables.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} noise variances for {} variables",
                noise_variances.len(),
                variables.len()
            )));
        }
        if let Some((i, v)) = noise_variances
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "noise variance of `{}` must be positive, got {v}",
                variables[i]
            )));
        }
        let parents = resolve_parents(&variables, &edges)?;
        Ok(Self {
            variables,
            edges,
            noise_variances,
            standardized: false,
            parents,
        })
    }

    /// SEM whose noise variances are solved, in topological order, so that every
    /// variable has unit variance.
    pub fn standardized(variables: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let parents = resolve_parents(&variables, &edges)?;
        let d = variables.len();
        let mut cov = DMatrix::<f64>::zeros(d, d);
        let mut noise = vec![0.0; d];
        for j in 0..d {
            let explained = fill_row(&mut cov, &parents[j], j);
            let required = 1.0 - explained;
            if required < -STANDARDIZE_TOL || !required.is_finite() {
                return Err(Error::InfeasibleStandardization {
                    variable: variables[j].clone(),
                    required,
                });
            }
            noise[j] = required.max(0.0);
            cov[(j, j)] = explained + noise[j];
        }
        Ok(Self {
            variables,
            edges,
            noise_variances: noise,
            standardized: true,
            parents,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn noise_variances(&self) -> &[f64] {
        &self.noise_variances
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    /// Parent names of each variable, keyed by position.
    pub fn parent_names(&self, variable: usize) -> Vec<&str> {
        self.parents[variable]
            .iter()
            .map(|&(p, _)| self.variables[p].as_str())
            .collect()
    }

    /// Exact implied covariance `(I − B)⁻¹ D (I − B)⁻ᵀ`, built row by row in topological order.
    pub fn covariance(&self) -> LabeledCovariance {
        let d = self.variables.len();
        let mut cov = DMatrix::<f64>::zeros(d, d);
        for j in 0..d {
            let explained = fill_row(&mut cov, &self.parents[j], j);
            cov[(j, j)] = explained + self.noise_variances[j];
        }
        LabeledCovariance::from_parts_unchecked(self.variables.clone(), cov)
    }

    /// `n` i.i.d. draws by forward simulation.
    pub fn sample_with(&self, n: usize, rng: &mut Rng) -> Dataset {
        let d = self.variables.len();
        let sd: Vec<f64> = self.noise_variances.iter().map(|v| v.sqrt()).collect();
        let mut flat = vec![0.0; n * d];
        for row in flat.chunks_exact_mut(d) {
            for j in 0..d {
                let z: f64 = StandardNormal.sample(rng);
                let signal: f64 = self.parents[j].iter().map(|&(p, c)| c * row[p]).sum();
                row[j] = signal + sd[j] * z;
            }
        }
        Dataset::from_parts_unchecked(self.variables.clone(), DMatrix::from_row_slice(n, d, &flat))
    }

    /// `n` draws from stream 0 of `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::TooFewRows { needed: 1, got: 0 });
        }
        Ok(self.sample_with(n, &mut rng::stream_rng(seed, 0)))
    }
}

/// Fills `cov[j, k]` (and its mirror) for all `k < j`; returns the explained variance of `j`.
fn fill_row(cov: &mut DMatrix<f64>, parents: &[(usize, f64)], j: usize) -> f64 {
    for k in 0..j {
        let v: f64 = parents.iter().map(|&(p, c)| c * cov[(p, k)]).sum();
        cov[(j, k)] = v;
        cov[(k, j)] = v;
    }
    parents
        .iter()
        .map(|&(p, c)| c * parents.iter().map(|&(q, e)| e * cov[(p, q)]).sum::<f64>())
        .sum()
}

fn resolve_parents(variables: &[String], edges: &[Edge]) -> Result<Vec<Vec<(usize, f64)>>> {
    let pos = |name: &str| {
        variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    };
    for (i, v) in variables.iter().enumerate() {
        if variables[..i].contains(v) {
            return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
        }
    }
    let mut parents = vec![Vec::new(); variables.len()];
    for e in edges {
        let (p, c) = (pos(&e.parent)?, pos(&e.child)?);
        if p >= c {
            return Err(Error::CyclicGraph(format!(
                "{} -> {} points backwards in the variable order",
                e.parent, e.child
            )));
        }
        if !e.coefficient.is_finite() {
            return Err(Error::InvalidInput(format!(
                "edge {} -> {} has a non-finite coefficient",
                e.parent, e.child
            )));
        }
        if parents[c].iter().any(|&(q, _)| q == p) {
            return Err(Error::InvalidInput(format!(
                "duplicate edge {} -> {}",
                e.parent, e.child
            )));
        }
        parents[c].push((p, e.coefficient));
    }
    Ok(parents)
}

/// Exact covariance of `sem`.
pub fn sem_covariance(sem: &LinearSem) -> LabeledCovariance {
    sem.covariance()
}

/// `n` reproducible draws from `sem` under `seed`.
pub fn sample(sem: &LinearSem, n: usize, seed: u64) -> Result<Dataset> {
    sem.sample(n, seed)
}

/// Standardized `A → B → C`, `A → C` model:
/// `B = α₁A + N_B`, `C = α₂A + βB + N_C`.
///
/// `alpha2 = 0` is the Markov chain `A → B → C`; `alpha1 = 0` is the collider `A → C ← B`.
pub fn three_node_preset(alpha1: f64, alpha2: f64, beta: f64) -> Result<LinearSem> {
    LinearSem::standardized(
        vec!["A".into(), "B".into(), "C".into()],
        vec![
            Edge::new("A", "B", alpha1),
            Edge::new("A", "C", alpha2),
            Edge::new("B", "C", beta),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{partial_correlation, CiTest};

    #[test]
    fn worked_example_correlations() {
        let cov = three_node_preset(0.5, 0.3, -0.3).unwrap().covariance();
        assert!((cov.get("A", "C").unwrap() - 0.15).abs() < 1e-12);
        assert!((cov.get("B", "C").unwrap() + 0.15).abs() < 1e-12);
        assert!((cov.get("A", "B").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_coefficients_give_identity() {
        let cov = three_node_preset(0.0, 0.0, 0.0).unwrap().covariance();
        assert_eq!(cov.matrix(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn chain_and_collider() {
        let chain = three_node_preset(0.5, 0.0, 0.5).unwrap().covariance();
        let t = CiTest::new("A", "C", ["B"]).unwrap();
        assert!(partial_correlation(&chain, &t).unwrap().abs() < 1e-15);

        let collider = three_node_preset(0.0, 0.5, 0.5).unwrap().covariance();
        assert_eq!(collider.get("A", "B").unwrap(), 0.0);
        let t = CiTest::new("A", "B", ["C"]).unwrap();
        assert!(partial_correlation(&collider, &t).unwrap().abs() > 0.1);
    }

    #[test]
    fn unit_alpha1_boundary() {
        // Var(N_C) = 1 − (α₂ + β)² once B = A.
        assert!(matches!(
            three_node_preset(1.0, 0.8, 0.5),
            Err(Error::InfeasibleStandardization { ref variable, .. }) if variable == "C"
        ));
        assert!(three_node_preset(1.0, -0.6, -0.6).is_err());
        assert!(three_node_preset(1.0, -0.5, 1.2).is_ok());
        let ok = three_node_preset(1.0, 0.3, 0.4).unwrap();
        assert_eq!(ok.noise_variances()[1], 0.0);
        assert!(three_node_preset(1.01, 0.0, 0.0).is_err());
    }

    #[test]
    fn structure_errors() {
        let vars = vec!["A".to_string(), "B".to_string()];
        assert!(matches!(
            LinearSem::standardized(vars.clone(), vec![Edge::new("B", "A", 0.3)]),
            Err(Error::CyclicGraph(_))
        ));
        assert!(matches!(
            LinearSem::standardized(vars.clone(), vec![Edge::new("A", "Z", 0.3)]),
            Err(Error::UnknownVariable(_))
        ));
        assert!(LinearSem::new(vars, vec![], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn sample_shape_and_determinism() {
        let sem = three_node_preset(0.5, 0.0, 0.5).unwrap();
        let one = sem.sample(1, 3).unwrap();
        assert_eq!((one.n_rows(), one.n_cols()), (1, 3));
        assert_eq!(sem.sample(50, 9).unwrap(), sem.sample(50, 9).unwrap());
        assert_ne!(sem.sample(50, 9).unwrap(), sem.sample(50, 10).unwrap());
        assert!(sem.sample(0, 1).is_err());
    }

    #[test]
    fn raw_noise_covariance() {
        let sem = LinearSem::new(
            vec!["X".into(), "Y".into()],
            vec![Edge::new("X", "Y", 2.0)],
            vec![1.0, 3.0],
        )
        .unwrap();
        let cov = sem.covariance();
        assert_eq!(cov.get("Y", "Y").unwrap(), 7.0);
        assert_eq!(cov.get("X", "Y").unwrap(), 2.0);
        assert!(!sem.is_standardized());
    }
}
