//! Plain-text configuration files for models, sweeps and graphs.
//!
//! All formats are line oriented: `#` starts a comment, blank lines are ignored, and
//! settings are `key = value`. Errors name the offending line.
//!
//! SEM:
//! ```text
//! variables = A, B, C
//! standardized = true
//! edge A -> B = 0.5
//! edge B -> C = 0.5
//! noise A = 1        # only when standardized = false
//! ```
//! or `preset = three_node` followed by `alpha1`, `alpha2`, `beta`.
//!
//! Sweep: either `bundle = fig1` / `bundle = appendix_a` with optional `steps`, or a
//! single grid:
//! ```text
//! alpha1 = 0.5
//! axis1 = beta -0.5 0.5 21
//! axis2 = alpha2 -0.5 0.5 21
//! measure = cimd
//! t1 = A,C|
//! t2 = B,C|
//! ```
//! Both accept `cutoff`, `replicates`, `size`, `alpha` and `seed`.
//!
//! DAG: optional `nodes = A, B, C`, then one `parent -> child` per line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gaussian::CiTest;
use crate::graph::Dag;
use crate::sem::{three_node_preset, Edge, LinearSem};
use crate::sweep::{Axis, GridSpec, Measure, FIG1_STEPS, SURFACE_STEPS};

/// Non-empty, comment-stripped lines with 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn key_value(line: usize, l: &str) -> Result<(&str, &str)> {
    let (k, v) = l
        .split_once('=')
        .ok_or_else(|| Error::parse(line, format!("expected `key = value`, found `{l}`")))?;
    Ok((k.trim(), v.trim()))
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(line, format!("`{key}`: cannot parse `{v}`")))
}

fn names(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn arrow(line: usize, s: &str) -> Result<(String, String)> {
    let (p, c) = s
        .split_once("->")
        .ok_or_else(|| Error::parse(line, format!("expected `parent -> child`, found `{s}`")))?;
    let (p, c) = (p.trim(), c.trim());
    if p.is_empty() || c.is_empty() {
        return Err(Error::parse(line, format!("empty endpoint in `{s}`")));
    }
    Ok((p.to_string(), c.to_string()))
}

pub fn parse_sem(text: &str) -> Result<LinearSem> {
    let mut variables: Option<Vec<String>> = None;
    let mut standardized = true;
    let mut preset: Option<String> = None;
    let (mut a1, mut a2, mut b) = (0.0, 0.0, 0.0);
    let mut edges = Vec::new();
    let mut noise: Vec<(usize, String, f64)> = Vec::new();
    for (n, l) in lines(text) {
        let (k, v) = key_value(n, l)?;
        if let Some(rest) = k.strip_prefix("edge ") {
            let (p, c) = arrow(n, rest)?;
            edges.push(Edge::new(&p, &c, number(n, k, v)?));
            continue;
        }
        if let Some(var) = k.strip_prefix("noise ") {
            noise.push((n, var.trim().to_string(), number(n, k, v)?));
            continue;
        }
        match k {
            "variables" => variables = Some(names(v)),
            "standardized" => standardized = number(n, k, v)?,
            "preset" => preset = Some(v.to_string()),
            "alpha1" => a1 = number(n, k, v)?,
            "alpha2" => a2 = number(n, k, v)?,
            "beta" => b = number(n, k, v)?,
            _ => return Err(Error::parse(n, format!("unknown key `{k}`"))),
        }
    }
    if let Some(p) = preset {
        return match p.as_str() {
            "three_node" => three_node_preset(a1, a2, b),
            other => Err(Error::InvalidInput(format!("unknown preset `{other}`"))),
        };
    }
    let variables = variables.ok_or_else(|| Error::InvalidInput("missing `variables`".into()))?;
    if standardized {
        if let Some((n, ..)) = noise.first() {
            return Err(Error::parse(*n, "noise variances are implied when standardized = true"));
        }
        return LinearSem::standardized(variables, edges);
    }
    let mut variances = vec![f64::NAN; variables.len()];
    for (n, var, value) in noise {
        let i = variables
            .iter()
            .position(|v| *v == var)
            .ok_or_else(|| Error::parse(n, format!("unknown variable `{var}`")))?;
        variances[i] = value;
    }
    if let Some(i) = variances.iter().position(|v| v.is_nan()) {
        return Err(Error::InvalidInput(format!("missing `noise {}`", variables[i])));
    }
    LinearSem::new(variables, edges, variances)
}

pub fn parse_dag(text: &str) -> Result<Dag> {
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let add = |nodes: &mut Vec<String>, name: &str| {
        if !nodes.iter().any(|x| x == name) {
            nodes.push(name.to_string());
        }
    };
    for (n, l) in lines(text) {
        if let Some((k, v)) = l.split_once('=') {
            if k.trim() != "nodes" {
                return Err(Error::parse(n, format!("unknown key `{}`", k.trim())));
            }
            for name in names(v) {
                add(&mut nodes, &name);
            }
            continue;
        }
        let (p, c) = arrow(n, l)?;
        add(&mut nodes, &p);
        add(&mut nodes, &c);
        edges.push((p, c));
    }
    let edges: Vec<(&str, &str)> = edges.iter().map(|(p, c)| (p.as_str(), c.as_str())).collect();
    let nodes: Vec<&str> = nodes.iter().map(String::as_str).collect();
    Dag::from_named_edges(&nodes, &edges)
}

/// Named grids to run; each becomes one CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub grids: Vec<(String, GridSpec)>,
}

impl SweepPlan {
    pub fn fig1(steps: usize) -> Self {
        Self {
            grids: vec![
                ("fig1a".into(), GridSpec::fig1(Measure::CorrelationProduct, steps)),
                ("fig1b".into(), GridSpec::fig1(Measure::Cimd, steps)),
                ("fig1c".into(), GridSpec::fig1(Measure::FsCid, steps)),
            ],
        }
    }

    pub fn appendix_a(steps: usize) -> Self {
        Self {
            grids: vec![
                ("markov_chain".into(), GridSpec::markov_chain_surface(steps)),
                ("collider".into(), GridSpec::collider_surface(steps)),
            ],
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        for (_, g) in &mut self.grids {
            g.replication.seed = seed;
        }
    }
}

fn axis(line: usize, key: &str, v: &str) -> Result<Axis> {
    let parts: Vec<&str> = v.split_whitespace().collect();
    let [p, lo, hi, steps] = parts[..] else {
        return Err(Error::parse(line, format!("`{key}` expects `param min max steps`")));
    };
    Ok(Axis::new(
        p.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?,
        number(line, key, lo)?,
        number(line, key, hi)?,
        number(line, key, steps)?,
    ))
}

pub fn parse_sweep(text: &str) -> Result<SweepPlan> {
    let mut bundle: Option<String> = None;
    let mut steps: Option<usize> = None;
    let mut spec = GridSpec::fig1(Measure::Cimd, FIG1_STEPS);
    let mut axes_seen = (false, false);
    let mut overrides: Vec<(usize, String, String)> = Vec::new();
    for (n, l) in lines(text) {
        let (k, v) = key_value(n, l)?;
        match k {
            "bundle" => bundle = Some(v.to_string()),
            "steps" => steps = Some(number(n, k, v)?),
            "alpha1" => spec.fixed.alpha1 = number(n, k, v)?,
            "alpha2" => spec.fixed.alpha2 = number(n, k, v)?,
            "beta" => spec.fixed.beta = number(n, k, v)?,
            "axis1" => {
                spec.axis1 = axis(n, k, v)?;
                axes_seen.0 = true;
            }
            "axis2" => {
                spec.axis2 = axis(n, k, v)?;
                axes_seen.1 = true;
            }
            "measure" => spec.measure = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?,
            "t1" => spec.t1 = CiTest::parse_cli(v).map_err(|e| Error::parse(n, e.to_string()))?,
            "t2" => {
                spec.t2 = if v.is_empty() {
                    None
                } else {
                    Some(CiTest::parse_cli(v).map_err(|e| Error::parse(n, e.to_string()))?)
                }
            }
            "cutoff" | "replicates" | "size" | "alpha" | "seed" => {
                overrides.push((n, k.to_string(), v.to_string()))
            }
            _ => return Err(Error::parse(n, format!("unknown key `{k}`"))),
        }
    }
    let mut plan = match bundle.as_deref() {
        Some("fig1") => SweepPlan::fig1(steps.unwrap_or(FIG1_STEPS)),
        Some("appendix_a") => SweepPlan::appendix_a(steps.unwrap_or(SURFACE_STEPS)),
        Some(other) => return Err(Error::InvalidInput(format!("unknown bundle `{other}`"))),
        None => {
            if !(axes_seen.0 && axes_seen.1) {
                return Err(Error::InvalidInput("a grid needs `axis1` and `axis2`".into()));
            }
            SweepPlan {
                grids: vec![("grid".into(), spec)],
            }
        }
    };
    for (n, k, v) in overrides {
        for (_, g) in &mut plan.grids {
            match k.as_str() {
                "cutoff" => g.cutoff = number(n, &k, &v)?,
                "replicates" => g.replication.count = number(n, &k, &v)?,
                "size" => g.replication.size = number(n, &k, &v)?,
                "alpha" => g.replication.alpha = number(n, &k, &v)?,
                _ => g.replication.seed = number(n, &k, &v)?,
            }
        }
    }
    for (_, g) in &plan.grids {
        g.validate()?;
    }
    Ok(plan)
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn load_sem(path: impl AsRef<Path>) -> Result<LinearSem> {
    parse_sem(&read(path.as_ref())?)
}

pub fn load_dag(path: impl AsRef<Path>) -> Result<Dag> {
    parse_dag(&read(path.as_ref())?)
}

pub fn load_sweep(path: impl AsRef<Path>) -> Result<SweepPlan> {
    parse_sweep(&read(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Param;

    #[test]
    fn sem_explicit_and_preset() {
        let sem = parse_sem(
            "variables = A, B, C\nedge A -> B = 0.5\n# chain\nedge B -> C = 0.5 # tail\n",
        )
        .unwrap();
        assert!(sem.is_standardized());
        assert_eq!(sem.covariance().get("A", "C").unwrap(), 0.25);

        let p = parse_sem("preset = three_node\nalpha1 = 0.5\nbeta = 0.5").unwrap();
        assert_eq!(p.covariance(), sem.covariance());

        let raw = parse_sem("variables = A, B\nstandardized = false\nedge A -> B = 2\nnoise A = 1\nnoise B = 3")
            .unwrap();
        assert_eq!(raw.covariance().get("B", "B").unwrap(), 7.0);
    }

    #[test]
    fn sem_errors_name_lines() {
        let e = parse_sem("variables = A, B\nedge A -> B = x").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_sem("variables = A\nbogus = 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_sem("variables = A, B\nstandardized = false\nnoise A = 1").unwrap_err();
        assert!(e.to_string().contains("noise B"));
    }

    #[test]
    fn dag_file() {
        let g = parse_dag("nodes = A, B, C\nA -> C\nB -> C\n").unwrap();
        assert!(g.d_separated("A", "B", &[]).unwrap());
        assert!(matches!(parse_dag("A -> B\nB C"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_dag("A -> B\nB -> A").is_err());
    }

    #[test]
    fn sweep_grid_and_bundles() {
        let plan = parse_sweep(
            "alpha1 = 0.5\naxis1 = beta -0.5 0.5 5\naxis2 = alpha2 -0.5 0.5 5\nmeasure = cimd_lim\nt1 = A,C|\nt2 = B,C|\ncutoff = 0.2\n",
        )
        .unwrap();
        let (_, g) = &plan.grids[0];
        assert_eq!(g.axis1.param, Param::Beta);
        assert_eq!(g.measure, Measure::CimdLim);
        assert_eq!(g.cutoff, 0.2);

        let fig = parse_sweep("bundle = fig1\nsteps = 7\nreplicates = 10\nseed = 3").unwrap();
        assert_eq!(fig.grids.len(), 3);
        assert!(fig.grids.iter().all(|(_, g)| g.axis1.steps == 7 && g.replication.seed == 3));
        assert_eq!(parse_sweep("bundle = appendix_a").unwrap().grids.len(), 2);

        assert!(matches!(
            parse_sweep("axis1 = beta -1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_sweep("measure = cimd").is_err());
    }
}
