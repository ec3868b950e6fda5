use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::batch::{Aggregate, BatchResults, Stat};
use crate::policies::PolicyKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    /// Cumulative-average backlog and penalty per slot for each omega.
    Fig1,
    /// Delay fraction per (topology, policy).
    Fig3a,
    /// Tier-1 hit share and total hits per (topology, policy).
    Fig3b,
    /// (penalty, delay) points per omega for each (topology, policy).
    Fig4,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig1, FigureId::Fig3a, FigureId::Fig3b, FigureId::Fig4];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "figure",
                name: s.to_string(),
            })
    }
}

/// A plot-ready table.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl FigureTable {
    pub fn write_csv(&self, w: impl std::io::Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush().map_err(|e| Error::io("figure csv", e))?;
        Ok(())
    }
}

fn cap(c: Option<usize>) -> String {
    c.map_or(String::new(), |c| c.to_string())
}

fn distinct<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// Every (topology, policy) pair present in `results` that has no aggregate
/// passing `keep`.
fn missing(results: &BatchResults, aggs: &[Aggregate], keep: impl Fn(&Aggregate) -> bool) -> Vec<String> {
    let topologies = distinct(results.runs.iter().map(|r| r.topology.clone()));
    let policies = distinct(results.runs.iter().map(|r| r.policy));
    let mut out = Vec::new();
    for t in &topologies {
        for &p in &policies {
            if !aggs.iter().any(|a| &a.topology == t && a.policy == p && keep(a)) {
                out.push(format!("{t}/{p}"));
            }
        }
    }
    out
}

/// Builds the table for `figure` from batch results.
///
/// Figures 3a and 3b use the runs at zero penalty weight and need one for every
/// (topology, policy) pair present; figure 1 needs virtual-plane runs.
pub fn figure_data(results: &BatchResults, figure: FigureId) -> Result<FigureTable> {
    let aggs = results.aggregates();
    match figure {
        FigureId::Fig1 => {
            if results.virtual_runs.is_empty() {
                return Err(Error::MissingCells(vec!["virtual-plane runs".into()]));
            }
            let mut rows = Vec::new();
            let keys = distinct(
                results
                    .virtual_runs
                    .iter()
                    .map(|r| (r.topology.clone(), r.omega.to_bits(), r.tier2_capacity)),
            );
            for (topo, omega, c) in keys {
                let group: Vec<_> = results
                    .virtual_runs
                    .iter()
                    .filter(|r| r.topology == topo && r.omega.to_bits() == omega && r.tier2_capacity == c)
                    .collect();
                let slots = group.iter().map(|r| r.rows.len()).min().unwrap_or(0);
                for i in 0..slots {
                    let b = Stat::of(&group.iter().map(|r| r.rows[i].cumavg_backlog).collect::<Vec<_>>());
                    let p = Stat::of(&group.iter().map(|r| r.rows[i].cumavg_penalty).collect::<Vec<_>>());
                    rows.push(vec![
                        topo.clone(),
                        f64::from_bits(omega).to_string(),
                        cap(c),
                        group[0].rows[i].slot.to_string(),
                        b.mean.to_string(),
                        p.mean.to_string(),
                    ]);
                }
            }
            Ok(FigureTable {
                header: vec!["topology", "omega", "tier2_capacity", "slot", "cumavg_backlog", "cumavg_penalty"],
                rows,
            })
        }
        FigureId::Fig3a | FigureId::Fig3b => {
            let gaps = missing(results, &aggs, |a| a.omega == 0.0);
            if !gaps.is_empty() || results.runs.is_empty() {
                return Err(Error::MissingCells(if gaps.is_empty() { vec!["runs".into()] } else { gaps }));
            }
            let zero = aggs.iter().filter(|a| a.omega == 0.0);
            if figure == FigureId::Fig3a {
                Ok(FigureTable {
                    header: vec!["topology", "policy", "tier2_capacity", "seeds", "delay_fraction_mean", "delay_fraction_std"],
                    rows: zero
                        .map(|a| {
                            vec![
                                a.topology.clone(),
                                a.policy.to_string(),
                                cap(a.tier2_capacity),
                                a.seeds.to_string(),
                                a.delay_fraction.mean.to_string(),
                                a.delay_fraction.std.to_string(),
                            ]
                        })
                        .collect(),
                })
            } else {
                Ok(FigureTable {
                    header: vec![
                        "topology",
                        "policy",
                        "tier2_capacity",
                        "seeds",
                        "tier1_share_mean",
                        "total_hits_mean",
                        "hits_t1_mean",
                        "hits_t2_mean",
                    ],
                    rows: zero
                        .map(|a| {
                            vec![
                                a.topology.clone(),
                                a.policy.to_string(),
                                cap(a.tier2_capacity),
                                a.seeds.to_string(),
                                a.tier1_share.mean.to_string(),
                                a.total_hits.mean.to_string(),
                                a.hits_t1.mean.to_string(),
                                a.hits_t2.mean.to_string(),
                            ]
                        })
                        .collect(),
                })
            }
        }
        FigureId::Fig4 => {
            let gaps = missing(results, &aggs, |_| true);
            if !gaps.is_empty() || results.runs.is_empty() {
                return Err(Error::MissingCells(if gaps.is_empty() { vec!["runs".into()] } else { gaps }));
            }
            Ok(FigureTable {
                header: vec!["topology", "policy", "tier2_capacity", "omega", "total_penalty_mean", "total_delay_mean"],
                rows: aggs
                    .iter()
                    .map(|a| {
                        vec![
                            a.topology.clone(),
                            a.policy.to_string(),
                            cap(a.tier2_capacity),
                            a.omega.to_string(),
                            a.total_penalty.mean.to_string(),
                            a.total_delay.mean.to_string(),
                        ]
                    })
                    .collect(),
            })
        }
    }
}

/// Seed-averaged (penalty, delay) points of `policy` on `topology`.
pub fn tradeoff_points(results: &BatchResults, topology: &str, policy: PolicyKind) -> Vec<(f64, f64)> {
    results
        .find(topology, policy)
        .map(|a| (a.total_penalty.mean, a.total_delay.mean))
        .collect()
}

/// Lower-left Pareto frontier sorted by increasing penalty.
pub fn pareto_frontier(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        if out.last().is_none_or(|l| p.1 < l.1) {
            out.push(p);
        }
    }
    out
}

/// Frontier delay at `penalty`, interpolated linearly between frontier points and
/// flat beyond the last one; `None` below the cheapest point.
pub fn frontier_delay(frontier: &[(f64, f64)], penalty: f64) -> Option<f64> {
    let first = frontier.first()?;
    if penalty < first.0 {
        return None;
    }
    for w in frontier.windows(2) {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if penalty <= p1 {
            return Some(d0 + (d1 - d0) * (penalty - p0) / (p1 - p0));
        }
    }
    frontier.last().map(|l| l.1)
}

/// Share of penalty levels (the union of both frontiers' penalties) at which the
/// frontier of `a` has delay no larger than the frontier of `b`.
pub fn dominance_share(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let fa = pareto_frontier(a);
    let fb = pareto_frontier(b);
    let mut levels: Vec<f64> = fa.iter().chain(&fb).map(|p| p.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    if levels.is_empty() {
        return 0.0;
    }
    let wins = levels
        .iter()
        .filter(|&&p| match (frontier_delay(&fa, p), frontier_delay(&fb, p)) {
            (Some(da), Some(db)) => da <= db,
            (Some(_), None) => true,
            (None, _) => false,
        })
        .count();
    wins as f64 / levels.len() as f64
}
