//! Coordinate charts and deterministic sample plans.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::ScalarField;

const RESERVED: [&str; 6] = ["i", "exp", "sin", "cos", "sinh", "cosh"];

#[derive(Debug)]
struct ChartData {
    coords: Vec<String>,
    domain: Vec<(f64, f64)>,
    /// Predicates whose zero sets are avoided when sampling.
    excluded: Vec<ScalarField>,
}

/// A local model: named coordinates plus an axis-aligned sampling box.
///
/// Charts are cheap handles; two charts are compatible when their coordinate
/// lists agree.  `ScalarField`s and everything built from them hold a chart
/// handle and refuse to mix with fields from an incompatible chart.
#[derive(Clone, Debug)]
pub struct Chart(Arc<ChartData>);

impl Chart {
    pub fn new<S: AsRef<str>>(coords: &[S], domain: &[(f64, f64)]) -> Result<Chart> {
        if coords.is_empty() {
            return Err(Error::invalid("chart needs at least one coordinate"));
        }
        if coords.len() != domain.len() {
            return Err(Error::invalid("one domain interval per coordinate"));
        }
        let names: Vec<String> = coords.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, name) in names.iter().enumerate() {
            if RESERVED.contains(&name.as_str()) {
                return Err(Error::invalid(format!("`{}` is a reserved name", name)));
            }
            if names[..k].contains(name) {
                return Err(Error::invalid(format!("duplicate coordinate `{}`", name)));
            }
        }
        for (lo, hi) in domain {
            if !(hi > lo) {
                return Err(Error::invalid("sample domain must have positive volume"));
            }
        }
        Ok(Chart(Arc::new(ChartData {
            coords: names,
            domain: domain.to_vec(),
            excluded: Vec::new(),
        })))
    }

    /// Same coordinates and box, with extra zero-set exclusions for sampling.
    pub fn with_excluded(&self, predicates: Vec<ScalarField>) -> Result<Chart> {
        for p in &predicates {
            if !self.compatible(p.chart()) {
                return Err(Error::ChartMismatch(
                    self.describe(),
                    p.chart().describe(),
                ));
            }
        }
        Ok(Chart(Arc::new(ChartData {
            coords: self.0.coords.clone(),
            domain: self.0.domain.clone(),
            excluded: predicates,
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.0.coords
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.0.domain
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.0.coords.iter().position(|c| c == name)
    }

    pub fn excluded(&self) -> &[ScalarField] {
        &self.0.excluded
    }

    pub fn compatible(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.coords == other.0.coords
    }

    pub fn describe(&self) -> String {
        format!("({})", self.0.coords.join(","))
    }

    /// Deterministic sample points: identical (seed, count, chart) always
    /// yield the identical sequence.  Points near excluded zero sets are
    /// rejected and redrawn.
    pub fn sample_points(&self, plan: &SamplePlan) -> Result<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        let mut points = Vec::with_capacity(plan.count);
        let mut draws = 0usize;
        while points.len() < plan.count {
            draws += 1;
            if draws > 10_000 * plan.count.max(1) {
                return Err(Error::SamplingStalled);
            }
            let p: Vec<f64> = self
                .0
                .domain
                .iter()
                .map(|&(lo, hi)| rng.random_range(lo..hi))
                .collect();
            let mut ok = true;
            for pred in &self.0.excluded {
                match pred.evaluate(&p) {
                    Ok(v) if v.norm() > 1e-3 => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                points.push(p);
            }
        }
        Ok(points)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Reproducible evaluation plan: seed, point count, residual tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
}

impl SamplePlan {
    pub fn new(seed: u64, count: usize, tolerance: f64) -> SamplePlan {
        SamplePlan {
            seed,
            count,
            tolerance,
        }
    }
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            seed: 42,
            count: 20,
            tolerance: 1e-9,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_and_reserved_names() {
        assert!(Chart::new(&["x", "x"], &[(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(Chart::new(&["i"], &[(0.0, 1.0)]).is_err());
        assert!(Chart::new(&["x"], &[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let chart = Chart::new(&["x", "y"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let plan = SamplePlan::default();
        let a = chart.sample_points(&plan).unwrap();
        let b = chart.sample_points(&plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn exclusions_are_respected() {
        let chart = Chart::new(&["x"], &[(-1.0, 1.0)]).unwrap();
        let x = ScalarField::parse("x", &chart).unwrap();
        let chart = chart.with_excluded(vec![x]).unwrap();
        for p in chart.sample_points(&SamplePlan::default()).unwrap() {
            assert!(p[0].abs() > 1e-3);
        }
    }
}
