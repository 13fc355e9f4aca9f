//! Parameter-grid and all-pairs experiments over the three-node model.
//!
//! Grids evaluate one measure at the cell centers of a 2-D parameter grid; pair matrices
//! evaluate a measure over every ordered pair of an enumerated test list. Both are
//! deterministic for a fixed spec and seed, including when cells run in parallel.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::citest::{empirical_covariance, DEFAULT_ALPHA};
use crate::dataset::format_value;
use crate::dependence::{cimd, cimd_lim, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::fscid::{evaluate_replicates, run_fs_cid, Origin, ReplicateSource};
use crate::gaussian::{partial_correlation, CiTest, LabeledCovariance};
use crate::rng::derive_seed;
use crate::sem::{three_node_preset, LinearSem};

/// A coefficient of the three-node model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Alpha1,
    Alpha2,
    Beta,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha1 => "alpha1",
            Param::Alpha2 => "alpha2",
            Param::Beta => "beta",
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha1" => Ok(Param::Alpha1),
            "alpha2" => Ok(Param::Alpha2),
            "beta" => Ok(Param::Beta),
            other => Err(Error::InvalidInput(format!("unknown parameter `{other}`"))),
        }
    }
}

/// `(α₁, α₂, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

impl Coefficients {
    pub fn set(&mut self, p: Param, v: f64) {
        match p {
            Param::Alpha1 => self.alpha1 = v,
            Param::Alpha2 => self.alpha2 = v,
            Param::Beta => self.beta = v,
        }
    }

    pub fn model(&self) -> Result<LinearSem> {
        three_node_preset(self.alpha1, self.alpha2, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, steps: usize) -> Self {
        Self {
            param,
            min,
            max,
            steps,
        }
    }

    /// Centers of `steps` equal-width cells spanning `[min, max]`.
    pub fn centers(&self) -> Vec<f64> {
        let width = (self.max - self.min) / self.steps as f64;
        (0..self.steps)
            .map(|i| self.min + (i as f64 + 0.5) * width)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// `ρ` of the first test.
    PartialCorrelation,
    /// `ρ_{t1} · ρ_{t2}`; its sign marks positive or negative dependence regions.
    CorrelationProduct,
    Cimd,
    CimdLim,
    FsCid,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::PartialCorrelation => "partial_correlation",
            Measure::CorrelationProduct => "correlation_product",
            Measure::Cimd => "cimd",
            Measure::CimdLim => "cimd_lim",
            Measure::FsCid => "fs_cid",
        }
    }

    fn needs_second_test(self) -> bool {
        !matches!(self, Measure::PartialCorrelation)
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial_correlation" => Ok(Measure::PartialCorrelation),
            "correlation_product" => Ok(Measure::CorrelationProduct),
            "cimd" => Ok(Measure::Cimd),
            "cimd_lim" => Ok(Measure::CimdLim),
            "fs_cid" => Ok(Measure::FsCid),
            other => Err(Error::InvalidInput(format!("unknown measure `{other}`"))),
        }
    }
}

/// Bootstrap settings for FS-CID cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replication {
    pub count: usize,
    pub size: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for Replication {
    fn default() -> Self {
        Self {
            count: crate::fscid::DEFAULT_REPLICATES,
            size: crate::fscid::DEFAULT_SYNTHETIC_SIZE,
            alpha: DEFAULT_ALPHA,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Values of the parameters not swept.
    pub fixed: Coefficients,
    pub axis1: Axis,
    pub axis2: Axis,
    pub measure: Measure,
    pub t1: CiTest,
    pub t2: Option<CiTest>,
    pub cutoff: f64,
    pub replication: Replication,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axis1.param == self.axis2.param {
            return Err(Error::InvalidInput("axes must sweep different parameters".into()));
        }
        for axis in [&self.axis1, &self.axis2] {
            if axis.steps < 2 || !(axis.min < axis.max) {
                return Err(Error::InvalidInput(format!(
                    "axis {} needs min < max and at least 2 steps",
                    axis.param.name()
                )));
            }
        }
        if self.measure.needs_second_test() && self.t2.is_none() {
            return Err(Error::InvalidInput(format!(
                "measure {} needs two tests",
                self.measure.name()
            )));
        }
        for v in self
            .t1
            .variables()
            .chain(self.t2.iter().flat_map(|t| t.variables()))
        {
            if !["A", "B", "C"].contains(&v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        Ok(())
    }

    /// α₁ = 0.5 grid over β (param1) and α₂ (param2) in [−0.5, 0.5].
    pub fn fig1(measure: Measure, steps: usize) -> Self {
        Self {
            fixed: Coefficients {
                alpha1: 0.5,
                alpha2: 0.0,
                beta: 0.0,
            },
            axis1: Axis::new(Param::Beta, -0.5, 0.5, steps),
            axis2: Axis::new(Param::Alpha2, -0.5, 0.5, steps),
            measure,
            t1: test("A", "C", &[]),
            t2: Some(test("B", "C", &[])),
            cutoff: DEFAULT_CUTOFF,
            replication: Replication::default(),
        }
    }

    /// Markov-chain surface: α₂ = 0, sweep α₁ and β, CIMD of `A ⊥ C | B` against `A ⊥ C`.
    pub fn markov_chain_surface(steps: usize) -> Self {
        Self {
            fixed: Coefficients {
                alpha1: 0.0,
                alpha2: 0.0,
                beta: 0.0,
            },
            axis1: Axis::new(Param::Alpha1, -0.9, 0.9, steps),
            axis2: Axis::new(Param::Beta, -0.9, 0.9, steps),
            measure: Measure::Cimd,
            t1: test("A", "C", &["B"]),
            t2: Some(test("A", "C", &[])),
            cutoff: DEFAULT_CUTOFF,
            replication: Replication::default(),
        }
    }

    /// Collider surface: α₁ = 0, sweep α₂ and β, CIMD of `A ⊥ B` against `A ⊥ B | C`.
    pub fn collider_surface(steps: usize) -> Self {
        Self {
            fixed: Coefficients {
                alpha1: 0.0,
                alpha2: 0.0,
                beta: 0.0,
            },
            axis1: Axis::new(Param::Alpha2, -0.9, 0.9, steps),
            axis2: Axis::new(Param::Beta, -0.9, 0.9, steps),
            measure: Measure::Cimd,
            t1: test("A", "B", &[]),
            t2: Some(test("A", "B", &["C"])),
            cutoff: DEFAULT_CUTOFF,
            replication: Replication::default(),
        }
    }
}

fn test(a: &str, b: &str, cond: &[&str]) -> CiTest {
    CiTest::new(a, b, cond.iter().copied()).expect("preset tests are well formed")
}

pub const FIG1_STEPS: usize = 41;
pub const SURFACE_STEPS: usize = 37;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    /// The standardized model does not exist at these parameters.
    Infeasible,
    /// The model exists but the measure could not be evaluated.
    Degenerate,
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellStatus::Ok => "ok",
            CellStatus::Infeasible => "infeasible",
            CellStatus::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub param1: f64,
    pub param2: f64,
    pub value: f64,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub spec: GridSpec,
    /// `axis1` outer, `axis2` inner.
    pub cells: Vec<Cell>,
}

impl Grid {
    /// `param1,param2,value,status`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["param1", "param2", "value", "status"])?;
        for c in &self.cells {
            w.write_record([
                format_value(c.param1),
                format_value(c.param2),
                format_value(c.value),
                c.status.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn ok_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Ok)
    }
}

fn evaluate_cell(spec: &GridSpec, coeffs: Coefficients, cell_index: usize) -> Result<f64> {
    let sem = coeffs.model()?;
    let t2 = spec.t2.as_ref();
    match spec.measure {
        Measure::PartialCorrelation => partial_correlation(&sem.covariance(), &spec.t1),
        Measure::CorrelationProduct => {
            let cov = sem.covariance();
            Ok(partial_correlation(&cov, &spec.t1)? * partial_correlation(&cov, t2.expect("validated"))?)
        }
        Measure::Cimd => Ok(cimd(&sem.covariance(), &spec.t1, t2.expect("validated"))?.raw),
        Measure::CimdLim => {
            Ok(cimd_lim(&sem.covariance(), &spec.t1, t2.expect("validated"), spec.cutoff)?.limited)
        }
        Measure::FsCid => {
            let r = &spec.replication;
            let source = ReplicateSource::from_sem(
                sem,
                r.size,
                r.count,
                derive_seed(r.seed, cell_index as u64),
            )?;
            Ok(run_fs_cid(&source, &spec.t1, t2.expect("validated"), r.alpha)?.fs_cid)
        }
    }
}

/// Evaluates the measure at every cell center. Per-cell failures become statuses.
pub fn run_grid(spec: &GridSpec) -> Result<Grid> {
    spec.validate()?;
    let c1 = spec.axis1.centers();
    let c2 = spec.axis2.centers();
    let points: Vec<(f64, f64)> = c1
        .iter()
        .flat_map(|&p| c2.iter().map(move |&q| (p, q)))
        .collect();
    let cells = points
        .par_iter()
        .enumerate()
        .map(|(idx, &(p1, p2))| {
            let mut coeffs = spec.fixed;
            coeffs.set(spec.axis1.param, p1);
            coeffs.set(spec.axis2.param, p2);
            let (value, status) = match evaluate_cell(spec, coeffs, idx) {
                Ok(v) if v.is_finite() => (v, CellStatus::Ok),
                Ok(_) => (f64::NAN, CellStatus::Degenerate),
                Err(Error::InfeasibleStandardization { .. }) => (f64::NAN, CellStatus::Infeasible),
                Err(_) => (f64::NAN, CellStatus::Degenerate),
            };
            Cell {
                param1: p1,
                param2: p2,
                value,
                status,
            }
        })
        .collect();
    Ok(Grid {
        spec: spec.clone(),
        cells,
    })
}

/// Measure evaluated over ordered test pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairMeasure {
    Cimd,
    CimdLim { cutoff: f64 },
    FsCid { alpha: f64 },
}

/// Input for a pair matrix: a covariance (CIMD only) or a replicate source (any measure;
/// CIMD then uses the exact SEM covariance or the empirical covariance of the data).
#[derive(Debug, Clone, PartialEq)]
pub enum PairInput {
    Covariance(LabeledCovariance),
    Replicates(ReplicateSource),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    pub tests: Vec<CiTest>,
    /// `values[(i, j)]` is the measure for `(tests[i], tests[j])`; NaN marks failures.
    pub values: DMatrix<f64>,
}

impl PairMatrix {
    /// Long form `test1,test2,value`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["test1", "test2", "value"])?;
        for (i, t1) in self.tests.iter().enumerate() {
            for (j, t2) in self.tests.iter().enumerate() {
                w.write_record([t1.to_string(), t2.to_string(), format_value(self.values[(i, j)])])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// CIMD (or CIMD-lim when `cutoff` is set) over all ordered pairs.
pub fn cimd_pair_matrix(cov: &LabeledCovariance, tests: &[CiTest], cutoff: Option<f64>) -> PairMatrix {
    let k = tests.len();
    let flat: Vec<f64> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            let v = match cutoff {
                Some(c) => cimd_lim(cov, &tests[i], &tests[j], c).map(|v| v.limited),
                None => cimd(cov, &tests[i], &tests[j]).map(|v| v.raw),
            };
            v.unwrap_or(f64::NAN)
        })
        .collect();
    PairMatrix {
        tests: tests.to_vec(),
        values: DMatrix::from_row_slice(k, k, &flat),
    }
}

/// FS-CID over all ordered pairs, from one shared set of replicate outcomes.
pub fn fscid_pair_matrix(source: &ReplicateSource, tests: &[CiTest], alpha: f64) -> Result<PairMatrix> {
    let outcomes = evaluate_replicates(source, tests, alpha)?;
    let k = tests.len();
    let values = DMatrix::from_fn(k, k, |i, j| {
        outcomes.report(i, j).map(|r| r.fs_cid).unwrap_or(f64::NAN)
    });
    Ok(PairMatrix {
        tests: tests.to_vec(),
        values,
    })
}

pub fn run_pair_matrix(input: &PairInput, tests: &[CiTest], measure: PairMeasure) -> Result<PairMatrix> {
    let covariance = || -> Result<LabeledCovariance> {
        match input {
            PairInput::Covariance(c) => Ok(c.clone()),
            PairInput::Replicates(src) => match &src.origin {
                Origin::Sem(sem) => Ok(sem.covariance()),
                Origin::Data(data) => empirical_covariance(data),
            },
        }
    };
    match measure {
        PairMeasure::Cimd => Ok(cimd_pair_matrix(&covariance()?, tests, None)),
        PairMeasure::CimdLim { cutoff } => Ok(cimd_pair_matrix(&covariance()?, tests, Some(cutoff))),
        PairMeasure::FsCid { alpha } => match input {
            PairInput::Replicates(src) => fscid_pair_matrix(src, tests, alpha),
            PairInput::Covariance(_) => Err(Error::InvalidInput(
                "FS-CID needs raw data or a generative model, not a covariance".into(),
            )),
        },
    }
}
