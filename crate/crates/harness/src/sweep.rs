//! Runs predictor, fast route and oracle over a grid of cells.

use std::collections::BTreeMap;
use std::time::Instant;

use congr_core::modarith::{PrimePowerModulus, Ratio};
use congr_core::theorems::{predict, Params, TheoremId};
use congr_core::Error;
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::record::{CongruenceRecord, Elapsed};

/// One `(theorem, p, a, params)` point of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub theorem: TheoremId,
    pub p: u64,
    pub a: u32,
    pub params: Params,
}

/// Symbols a theorem reads, with the grid used when none is configured.
/// An empty default means the theorem falls back to its own choice.
fn symbols(id: TheoremId) -> &'static [(&'static str, &'static [(i128, i128)])] {
    const C1: &[(i128, i128)] = &[(-2, 1), (-1, 2), (1, 1), (3, 1)];
    const C2: &[(i128, i128)] = &[(-3, 1), (-1, 2), (1, 1), (3, 1)];
    const T: &[(i128, i128)] = &[(-3, 1), (0, 1), (1, 1), (2, 1)];
    match id {
        TheoremId::T1_1 => &[("c", C1)],
        TheoremId::T3_2 => &[("c", C2), ("d", &[])],
        TheoremId::T1_3 => &[("t", T), ("m", &[])],
        TheoremId::T1_4 => &[("d", &[]), ("r", &[])],
        TheoremId::T1_8 | TheoremId::T3_1 | TheoremId::C3_1 => &[("d", &[])],
        TheoremId::L5_1 => &[("s", &[]), ("d", &[])],
        _ => &[],
    }
}

/// Parameter maps for one theorem, in lexicographic order.
pub fn param_grid(id: TheoremId, grids: &BTreeMap<String, Vec<Ratio>>) -> Vec<Params> {
    let mut out = vec![Params::new()];
    for &(key, default) in symbols(id) {
        let values: Vec<Ratio> = match grids.get(key) {
            Some(v) => v.clone(),
            None => default.iter().map(|&(n, d)| Ratio::new(n, d)).collect(),
        };
        if values.is_empty() {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|base| values.iter().map(move |&v| base.clone().with(key, v)))
            .collect();
    }
    out.sort();
    out.dedup();
    out
}

/// Cells ordered by theorem, then `p`, then `a`, then parameters.
pub fn cells(cfg: &SweepConfig) -> Vec<Cell> {
    let primes = cfg.primes();
    let mut out = Vec::new();
    for &theorem in &cfg.theorems {
        let grid = param_grid(theorem, &cfg.grids);
        for &p in &primes {
            for a in cfg.amin..=cfg.amax {
                for params in &grid {
                    out.push(Cell {
                        theorem,
                        p,
                        a,
                        params: params.clone(),
                    });
                }
            }
        }
    }
    out
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Records for one cell. Prediction errors (e.g. a missing parameter)
/// become a single non-applicable row naming the error.
pub fn run_cell(cell: &Cell, budget: u64, timings: bool) -> Vec<CongruenceRecord> {
    let pp = PrimePowerModulus::new(cell.p, cell.a).expect("cells hold primes");
    let params: BTreeMap<String, String> = cell
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let base = |target: String| CongruenceRecord {
        theorem: cell.theorem.to_string(),
        p: cell.p,
        a: cell.a,
        params: params.clone(),
        target,
        predicted: None,
        fast: None,
        oracle: None,
        match_pf: None,
        match_po: None,
        applicable: false,
        reason: None,
        elapsed_ms: None,
    };
    let start = Instant::now();
    let predictions = match predict(cell.theorem, &pp, &cell.params) {
        Ok(p) => p,
        Err(e) => {
            let mut rec = base(String::new());
            rec.reason = Some(e.to_string());
            return vec![rec];
        }
    };
    let predict_ms = ms(start);
    predictions
        .into_iter()
        .map(|pred| {
            let mut rec = base(pred.target.to_string());
            rec.applicable = pred.applicable();
            rec.reason = pred.reason.clone();
            rec.predicted = pred.value.map(|v| v.value().to_string());

            let start = Instant::now();
            let fast = pred.target.fast(&pp).ok();
            let fast_ms = ms(start);
            let start = Instant::now();
            let oracle = match pred.target.oracle(&pp, budget) {
                Ok(v) => Some(v),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(_) => None,
            };
            let oracle_ms = ms(start);

            rec.fast = fast.map(|v| v.value().to_string());
            rec.oracle = oracle.map(|v| v.value().to_string());
            if let Some(v) = pred.value {
                rec.match_pf = fast.map(|f| f == v);
                rec.match_po = oracle.map(|o| o == v);
            }
            if timings {
                rec.elapsed_ms = Some(Elapsed {
                    predict: predict_ms,
                    fast: fast_ms,
                    oracle: oracle_ms,
                });
            }
            rec
        })
        .collect()
}

/// Every cell's records, in cell order regardless of completion order.
pub fn run(cfg: &SweepConfig) -> Vec<CongruenceRecord> {
    let cells = cells(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    let per_cell: Vec<Vec<CongruenceRecord>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| run_cell(c, cfg.budget, cfg.timings))
            .collect()
    });
    per_cell.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub records: usize,
    pub applicable: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub oracle_skipped: usize,
}

impl Summary {
    pub fn of(records: &[CongruenceRecord]) -> Self {
        let mut s = Summary {
            records: records.len(),
            ..Default::default()
        };
        for r in records.iter().filter(|r| r.applicable) {
            s.applicable += 1;
            if r.mismatch() {
                s.mismatched += 1;
            } else if r.match_pf == Some(true) || r.match_po == Some(true) {
                s.matched += 1;
            }
            if r.oracle.is_none() {
                s.oracle_skipped += 1;
            }
        }
        s
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} records, {} applicable, {} matched, {} mismatched, {} without oracle",
            self.records, self.applicable, self.matched, self.mismatched, self.oracle_skipped
        )
    }
}
