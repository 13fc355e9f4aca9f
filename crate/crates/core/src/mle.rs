//! Information projection of an empirical distribution by composing per-variable
//! maximum-likelihood fits, for the linear-Gaussian function class.
//!
//! Each variable is regressed on its designated inputs by ordinary least squares with
//! the `1/n` residual variance. Composing the fitted factors gives the KL-closest
//! linear-Gaussian distribution that factorizes over the chosen DAG.

use nalgebra::{DMatrix, DVector};

use crate::citest::mle_covariance;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::gaussian::{CiTest, LabeledCovariance};
use crate::graph::Dag;
use crate::linalg;

/// Linear-Gaussian conditional `variable | inputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub variable: String,
    pub inputs: Vec<String>,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub residual_variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedModel {
    /// Column order of the source data; composed covariances use it.
    pub columns: Vec<String>,
    /// Factors listed in a topological order of the DAG.
    pub factors: Vec<Factor>,
}

impl FactorizedModel {
    /// Topological variable order.
    pub fn order(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.variable.as_str()).collect()
    }

    /// Covariance of the composed joint distribution.
    pub fn covariance(&self) -> Result<LabeledCovariance> {
        let d = self.columns.len();
        let pos = |n: &str| {
            self.columns
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| Error::UnknownVariable(n.to_string()))
        };
        let mut cov = DMatrix::<f64>::zeros(d, d);
        let mut done: Vec<usize> = Vec::with_capacity(d);
        for f in &self.factors {
            let v = pos(&f.variable)?;
            let inputs: Vec<usize> = f.inputs.iter().map(|n| pos(n)).collect::<Result<_>>()?;
            if inputs.iter().any(|i| !done.contains(i)) {
                return Err(Error::InvalidInput(format!(
                    "factor for `{}` uses an input that is not yet composed",
                    f.variable
                )));
            }
            for &k in &done {
                let s: f64 = inputs
                    .iter()
                    .zip(&f.coefficients)
                    .map(|(&p, c)| c * cov[(p, k)])
                    .sum();
                cov[(v, k)] = s;
                cov[(k, v)] = s;
            }
            let explained: f64 = inputs
                .iter()
                .zip(&f.coefficients)
                .map(|(&p, c)| {
                    c * inputs
                        .iter()
                        .zip(&f.coefficients)
                        .map(|(&q, e)| e * cov[(p, q)])
                        .sum::<f64>()
                })
                .sum();
            cov[(v, v)] = explained + f.residual_variance;
            done.push(v);
        }
        if done.len() != d {
            return Err(Error::InvalidInput("model does not cover every column".into()));
        }
        LabeledCovariance::new(self.columns.clone(), cov)
    }
}

/// Fits every variable of `data` on its parents in `dag`. Columns that are not DAG nodes
/// are fitted without inputs.
pub fn fit_factorized(data: &Dataset, dag: &Dag) -> Result<FactorizedModel> {
    let n = data.n_rows();
    let columns = data.columns().to_vec();
    for node in dag.nodes() {
        data.column_index(node)?;
    }
    let cov = mle_covariance(data)?;
    let means: Vec<f64> = (0..data.n_cols())
        .map(|j| data.rows().column(j).iter().sum::<f64>() / n as f64)
        .collect();

    let mut order: Vec<usize> = dag
        .topological_order()?
        .into_iter()
        .map(|i| data.column_index(&dag.nodes()[i]))
        .collect::<Result<_>>()?;
    for j in 0..columns.len() {
        if !order.contains(&j) {
            order.push(j);
        }
    }

    let m = cov.matrix();
    let mut factors = Vec::with_capacity(columns.len());
    for v in order {
        let name = &columns[v];
        let inputs: Vec<usize> = match dag.index_of(name) {
            Ok(node) => dag
                .parents_of(node)
                .iter()
                .map(|&p| data.column_index(&dag.nodes()[p]))
                .collect::<Result<_>>()?,
            Err(_) => Vec::new(),
        };
        if n <= inputs.len() + 1 {
            return Err(Error::RankDeficientParents(name.clone()));
        }
        let coefficients: DVector<f64> = if inputs.is_empty() {
            DVector::zeros(0)
        } else {
            let pp = linalg::select(m, &inputs, &inputs);
            let chol = linalg::spd_factor(&pp, String::new)
                .map_err(|_| Error::RankDeficientParents(name.clone()))?;
            chol.solve(&linalg::select_vec(m, &inputs, v))
        };
        let explained: f64 = inputs
            .iter()
            .zip(coefficients.iter())
            .map(|(&p, c)| c * m[(p, v)])
            .sum();
        let residual_variance = m[(v, v)] - explained;
        if !(residual_variance > 0.0) {
            return Err(Error::DegenerateVariance(name.clone()));
        }
        let intercept = means[v]
            - inputs
                .iter()
                .zip(coefficients.iter())
                .map(|(&p, c)| c * means[p])
                .sum::<f64>();
        factors.push(Factor {
            variable: name.clone(),
            inputs: inputs.iter().map(|&p| columns[p].clone()).collect(),
            intercept,
            coefficients: coefficients.iter().copied().collect(),
            residual_variance,
        });
    }
    Ok(FactorizedModel { columns, factors })
}

/// DAG whose Markov class is exactly `a ⊥ b | cond`: the conditioning block is saturated,
/// `a` and `b` each depend on it, and the remaining block depends on everything before it.
pub fn ci_structure(columns: &[String], test: &CiTest) -> Result<Dag> {
    for v in test.variables() {
        if !columns.iter().any(|c| c == v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
    }
    let cond: Vec<&String> = columns.iter().filter(|c| test.cond.contains(c)).collect();
    let rest: Vec<&String> = columns
        .iter()
        .filter(|c| **c != test.a && **c != test.b && !test.cond.contains(c))
        .collect();
    let mut edges: Vec<(&str, &str)> = Vec::new();
    for (i, c) in cond.iter().enumerate() {
        for earlier in &cond[..i] {
            edges.push((earlier.as_str(), c.as_str()));
        }
        edges.push((c.as_str(), test.a.as_str()));
        edges.push((c.as_str(), test.b.as_str()));
    }
    for (i, x) in rest.iter().enumerate() {
        for input in [test.a.as_str(), test.b.as_str()]
            .into_iter()
            .chain(cond.iter().map(|c| c.as_str()))
            .chain(rest[..i].iter().map(|c| c.as_str()))
        {
            edges.push((input, x.as_str()));
        }
    }
    Dag::from_named_edges(columns, &edges)
}

/// Projection of the empirical distribution onto `test`, via the composition
/// `P̂(c) P̂(a | c) P̂(b | c) P̂(x | a, b, c)` evaluated in closed form.
pub fn ci_projection_via_mle(data: &Dataset, test: &CiTest) -> Result<LabeledCovariance> {
    let dag = ci_structure(data.columns(), test)?;
    fit_factorized(data, &dag)?.covariance()
}
