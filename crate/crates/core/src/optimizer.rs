//! Parameter search over protocol families: exhaustive grids, coordinate
//! descent refinement, and the bit-exact replay of the published square grid.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{critical_times, worst_case, SquareDetourScalars};
use crate::error::{EvacError, Result};
use crate::geometry::{make_shape, ShapeKind};
use crate::numeric::golden_min;
use crate::protocols::{
    build_early_meeting, build_square_detour, build_triangle_detour1, build_triangle_detour2,
    Protocol,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    #[serde(alias = "triangle_detour1")]
    Detour1,
    #[serde(alias = "triangle_detour2")]
    Detour2,
    #[serde(alias = "square_detour")]
    SquareDetour,
    #[serde(alias = "early_meeting")]
    Early { shape: ShapeKind, k: usize },
}

impl Family {
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::Detour1 => &["z"],
            Family::Detour2 => &["b1", "b2"],
            Family::SquareDetour => &["p", "q"],
            Family::Early { .. } => &["p1"],
        }
    }

    pub fn build(&self, x: &[f64]) -> Result<Protocol> {
        self.check_arity(x)?;
        match *self {
            Family::Detour1 => build_triangle_detour1(x[0]),
            Family::Detour2 => build_triangle_detour2(x[0], x[1]),
            Family::SquareDetour => build_square_detour(x[0], x[1]),
            Family::Early { shape, k } => build_early_meeting(&make_shape(shape), k, x[0]),
        }
    }

    fn check_arity(&self, x: &[f64]) -> Result<()> {
        let n = self.param_names().len();
        if x.len() != n {
            return Err(EvacError::Config(format!(
                "family {self} takes {n} parameter(s) ({}), got {}",
                self.param_names().join(", "),
                x.len()
            )));
        }
        Ok(())
    }

    /// Parameter vector in `param_names` order from a named map.
    pub fn vector(&self, named: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        self.param_names()
            .iter()
            .map(|n| {
                named
                    .get(*n)
                    .copied()
                    .ok_or_else(|| EvacError::Config(format!("missing parameter `{n}`")))
            })
            .collect()
    }

    fn named(&self, x: &[f64]) -> BTreeMap<String, f64> {
        self.param_names()
            .iter()
            .zip(x)
            .map(|(n, v)| (n.to_string(), *v))
            .collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Detour1 => write!(f, "detour1"),
            Family::Detour2 => write!(f, "detour2"),
            Family::SquareDetour => write!(f, "square-detour"),
            Family::Early { shape, k } => write!(f, "early({shape}, k={k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    /// Full boundary scan through the simulator.
    WorstCaseSim {
        samples_per_unit: usize,
        refine_tol: f64,
    },
    /// Maximum of the family's closed-form critical times.
    CriticalFormulaMax,
}

impl FromStr for Objective {
    type Err = EvacError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim" | "worst-case-sim" | "WorstCaseSim" => Ok(Objective::WorstCaseSim {
                samples_per_unit: 2000,
                refine_tol: 1e-7,
            }),
            "formula" | "critical-formula-max" | "CriticalFormulaMax" => {
                Ok(Objective::CriticalFormulaMax)
            }
            other => Err(EvacError::Config(format!("unknown objective `{other}`"))),
        }
    }
}

/// Objective value at parameter vector `x`.
pub fn evaluate(family: Family, objective: Objective, x: &[f64]) -> Result<f64> {
    match (objective, family) {
        (Objective::CriticalFormulaMax, Family::SquareDetour) => {
            family.check_arity(x)?;
            Ok(SquareDetourScalars::compute(x[0], x[1])?.max_time)
        }
        (Objective::CriticalFormulaMax, _) => {
            let p = family.build(x)?;
            Ok(critical_times(&p)
                .expect("families have closed forms")
                .max_time())
        }
        (
            Objective::WorstCaseSim {
                samples_per_unit,
                refine_tol,
            },
            _,
        ) => Ok(worst_case(&family.build(x)?, samples_per_unit, refine_tol).worst_time),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(name: &str, lo: f64, hi: f64, step: f64) -> Self {
        ParamRange {
            name: name.to_string(),
            lo,
            hi,
            step,
        }
    }

    /// Number of grid values, `lo + i·step` for `lo + i·step <= hi`.
    pub fn count(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    fn validate(&self) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo <= self.hi
            && self.step > 0.0
            && self.step.is_finite();
        if !ok {
            return Err(EvacError::Config(format!(
                "range for `{}` needs finite lo <= hi and step > 0",
                self.name
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub params: Vec<ParamRange>,
}

impl ParamSpace {
    pub fn cells(&self) -> usize {
        self.params.iter().map(ParamRange::count).product()
    }

    /// Parameters of cell `idx`; the first parameter varies slowest, so cell
    /// order is lexicographic order.
    fn cell(&self, mut idx: usize, out: &mut [f64]) {
        for (slot, r) in out.iter_mut().zip(&self.params).rev() {
            let n = r.count();
            *slot = r.value(idx % n);
            idx /= n;
        }
    }

    /// Reorders the ranges to the family's parameter order.
    fn aligned(&self, family: Family) -> Result<ParamSpace> {
        let mut params = Vec::new();
        for name in family.param_names() {
            let r = self
                .params
                .iter()
                .find(|r| r.name == *name)
                .ok_or_else(|| EvacError::Config(format!("no range for parameter `{name}`")))?;
            r.validate()?;
            params.push(r.clone());
        }
        if self.params.len() != params.len() {
            return Err(EvacError::Config(format!(
                "family {family} takes parameters {}",
                family.param_names().join(", ")
            )));
        }
        Ok(ParamSpace { params })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub family: String,
    pub best_params: BTreeMap<String, f64>,
    pub best_time: f64,
    pub evaluations: usize,
    pub infeasible: usize,
    pub trace: Vec<TraceStep>,
}

impl OptResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn param(&self, name: &str) -> f64 {
        self.best_params[name]
    }
}

/// Exhaustive grid evaluation. Infeasible cells are skipped and counted; ties
/// go to the lexicographically smallest parameter vector.
pub fn grid_search(space: &ParamSpace, family: Family, objective: Objective) -> Result<OptResult> {
    let space = space.aligned(family)?;
    let cells = space.cells();
    let dim = space.params.len();
    let (best, infeasible) = (0..cells)
        .into_par_iter()
        .map(|idx| {
            let mut x = vec![0.0; dim];
            space.cell(idx, &mut x);
            match evaluate(family, objective, &x) {
                Ok(v) if v.is_finite() => (Some((v, idx)), 0usize),
                _ => (None, 1usize),
            }
        })
        .reduce(
            || (None, 0),
            |a, b| {
                let best = match (a.0, b.0) {
                    (Some(x), Some(y)) => Some(if (y.0, y.1) < (x.0, x.1) { y } else { x }),
                    (x, None) => x,
                    (None, y) => y,
                };
                (best, a.1 + b.1)
            },
        );
    let (value, idx) =
        best.ok_or_else(|| EvacError::Config("no feasible cell in the grid".into()))?;
    let mut x = vec![0.0; dim];
    space.cell(idx, &mut x);
    Ok(OptResult {
        family: family.to_string(),
        best_params: family.named(&x),
        best_time: value,
        evaluations: cells,
        infeasible,
        trace: vec![TraceStep { params: x, value }],
    })
}

/// Coordinate descent with golden-section line searches.
///
/// Besides the coordinate axes, the pairwise diagonals are searched too so the
/// descent can follow ridges where two critical times are tied. The search
/// radius shrinks by 4 whenever a sweep moves less than `tol`, and the run
/// stops once the radius itself is below `tol`. Steps are accepted only if
/// they strictly improve the objective.
pub fn refine(family: Family, objective: Objective, start: &[f64], tol: f64) -> Result<OptResult> {
    family.check_arity(start)?;
    let evals = Cell::new(0usize);
    let infeasible = Cell::new(0usize);
    let f = |x: &[f64]| {
        evals.set(evals.get() + 1);
        evaluate(family, objective, x).unwrap_or_else(|_| {
            infeasible.set(infeasible.get() + 1);
            f64::INFINITY
        })
    };
    let mut x = start.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        // surface the builder's diagnostic
        evaluate(family, objective, &x)?;
    }
    let n = x.len();
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1.0, -1.0] {
                let mut d = vec![0.0; n];
                d[i] = s;
                d[j] = sign * s;
                dirs.push(d);
            }
        }
    }
    let mut trace = vec![TraceStep {
        params: x.clone(),
        value: fx,
    }];
    let mut radius = 0.05_f64.max(tol);
    for _ in 0..10_000 {
        let before = x.clone();
        for d in &dirs {
            let along = |l: f64| x.iter().zip(d).map(|(a, b)| a + l * b).collect::<Vec<_>>();
            let r = golden_min(|l| f(&along(l)), -radius, radius, tol * 0.25);
            if r.value < fx {
                x = along(r.x);
                fx = r.value;
                trace.push(TraceStep {
                    params: x.clone(),
                    value: fx,
                });
            }
        }
        let moved = x
            .iter()
            .zip(&before)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if moved < tol {
            if radius <= tol {
                break;
            }
            radius = (radius * 0.25).max(tol * 0.5);
        }
    }
    Ok(OptResult {
        family: family.to_string(),
        best_params: family.named(&x),
        best_time: fx,
        evaluations: evals.get(),
        infeasible: infeasible.get(),
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixAResult {
    pub minimum: f64,
    pub p: f64,
    pub q: f64,
    pub cells: usize,
}

impl AppendixAResult {
    /// The three result lines in the original script's print format.
    pub fn lines(&self) -> [String; 3] {
        [
            format!("The evacuation time is: {}", self.minimum),
            format!("The value of p is: {}", self.p),
            format!("The value of q is: {}", self.q),
        ]
    }
}

/// Replays the published square grid exactly: `p` from 0.1 and `q` from 0.2,
/// both advanced by repeated addition of 0.00005 while below 0.2 and 0.8,
/// keeping the first strict improvement on an initial best of 5. Rows run in
/// parallel and are merged in scan order, which gives the same winner.
pub fn appendix_a_replay() -> AppendixAResult {
    let step = 0.00005;
    let mut ps = Vec::new();
    let mut p = 0.1;
    while p < 0.2 {
        ps.push(p);
        p += step;
    }
    let rows: Vec<(f64, f64, usize)> = ps
        .par_iter()
        .map(|&p| {
            let (mut best, mut best_q, mut n) = (f64::INFINITY, f64::NAN, 0);
            let mut q = 0.2;
            while q < 0.8 {
                let m = SquareDetourScalars::compute_unchecked(p, q).max_time;
                if m < best {
                    best = m;
                    best_q = q;
                }
                n += 1;
                q += step;
            }
            (best, best_q, n)
        })
        .collect();
    let mut out = AppendixAResult {
        minimum: 5.0,
        p: 0.1,
        q: 0.2,
        cells: 0,
    };
    for (&p, &(m, q, n)) in ps.iter().zip(&rows) {
        out.cells += n;
        if m < out.minimum {
            out.minimum = m;
            out.p = p;
            out.q = q;
        }
    }
    out
}

/// Optimization run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    #[serde(flatten)]
    pub family: Family,
    pub space: Vec<ParamRange>,
    #[serde(default = "default_objective")]
    pub objective: Objective,
    /// Refine the grid optimum by coordinate descent.
    #[serde(default)]
    pub refine: bool,
    #[serde(default = "default_refine_tol")]
    pub refine_tol: f64,
    /// Parallelism hint; results do not depend on it.
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_objective() -> Objective {
    Objective::CriticalFormulaMax
}

fn default_refine_tol() -> f64 {
    1e-9
}

impl OptConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EvacError::Config(e.to_string()))
    }
}

/// Grid search, then (if asked) refinement from the grid optimum. The trace
/// of the result starts with the grid optimum.
pub fn run_config(cfg: &OptConfig) -> Result<OptResult> {
    let run = || -> Result<OptResult> {
        let space = ParamSpace {
            params: cfg.space.clone(),
        };
        let grid = grid_search(&space, cfg.family, cfg.objective)?;
        if !cfg.refine {
            return Ok(grid);
        }
        let start = cfg.family.vector(&grid.best_params)?;
        let mut r = refine(cfg.family, cfg.objective, &start, cfg.refine_tol)?;
        r.evaluations += grid.evaluations;
        r.infeasible += grid.infeasible;
        Ok(r)
    };
    with_threads(cfg.threads, run)
}

/// Runs `f` on a pool of `threads` workers (or the global pool for `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .unwrap_or_else(|_| panic!("cannot start {n} worker threads")),
        _ => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_counts() {
        assert_eq!(ParamRange::new("z", 0.6, 0.8, 1e-5).count(), 20001);
        assert_eq!(ParamRange::new("z", 0.7, 0.7, 0.1).count(), 1);
        assert_eq!(ParamRange::new("p", 0.1, 0.2, 5e-5).count(), 2001);
    }

    #[test]
    fn one_cell_grid() {
        let space = ParamSpace {
            params: vec![ParamRange::new("z", 0.7, 0.7, 0.01)],
        };
        let r = grid_search(&space, Family::Detour1, Objective::CriticalFormulaMax).unwrap();
        let direct = evaluate(Family::Detour1, Objective::CriticalFormulaMax, &[0.7]).unwrap();
        assert_eq!(r.best_time, direct);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn grid_skips_infeasible_and_breaks_ties_low() {
        let space = ParamSpace {
            params: vec![
                ParamRange::new("q", 0.3, 0.6, 0.1),
                ParamRange::new("p", 0.1, 0.3, 0.1),
            ],
        };
        let r = grid_search(&space, Family::SquareDetour, Objective::CriticalFormulaMax).unwrap();
        assert_eq!(r.infeasible, 4);
        assert_eq!(r.evaluations, 12);
        // order follows the family, not the config
        assert_eq!(r.trace[0].params.len(), 2);
        assert!(r.param("p") < 0.25);
    }

    #[test]
    fn empty_feasible_grid_errors() {
        let space = ParamSpace {
            params: vec![
                ParamRange::new("p", 0.3, 0.4, 0.1),
                ParamRange::new("q", 0.3, 0.4, 0.1),
            ],
        };
        assert!(grid_search(&space, Family::SquareDetour, Objective::CriticalFormulaMax).is_err());
    }

    #[test]
    fn parallel_partitioning_does_not_matter() {
        let space = ParamSpace {
            params: vec![
                ParamRange::new("p", 0.1, 0.2, 0.002),
                ParamRange::new("q", 0.3, 0.7, 0.002),
            ],
        };
        let run = |t| {
            with_threads(Some(t), || {
                grid_search(&space, Family::SquareDetour, Objective::CriticalFormulaMax).unwrap()
            })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn refine_is_monotone_and_stays_at_fixed_point() {
        let r = refine(
            Family::Early {
                shape: ShapeKind::Triangle,
                k: 3,
            },
            Objective::CriticalFormulaMax,
            &[0.40],
            1e-8,
        )
        .unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].value <= w[0].value));
        assert!((r.param("p1") - 0.38601).abs() < 1e-3);
        assert!((r.best_time - 2.0888).abs() < 5e-4);
        let again = refine(
            Family::Early {
                shape: ShapeKind::Triangle,
                k: 3,
            },
            Objective::CriticalFormulaMax,
            &[r.param("p1")],
            1e-8,
        )
        .unwrap();
        assert!((again.param("p1") - r.param("p1")).abs() < 1e-8);
    }

    #[test]
    fn config_parses() {
        let cfg = OptConfig::from_json(
            r#"{"family": "early", "shape": "triangle", "k": 3,
                "space": [{"name": "p1", "lo": 0.3, "hi": 0.45, "step": 0.01}],
                "objective": {"kind": "critical-formula-max"}, "refine": true}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.family,
            Family::Early {
                shape: ShapeKind::Triangle,
                k: 3
            }
        );
        let r = run_config(&cfg).unwrap();
        assert!((r.best_time - 2.0888).abs() < 5e-4);
        assert!(OptConfig::from_json(r#"{"family": "nope", "space": []}"#).is_err());
    }
}
