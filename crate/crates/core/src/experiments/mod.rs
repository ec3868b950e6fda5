mod batch;
mod figure;
mod scenario;

pub use batch::{
    run_batch, Aggregate, BatchResults, PolicyAxis, RunRecord, Stat, SummaryRow, SweepSpec, VirtualRecord,
};
pub use figure::{
    dominance_share, figure_data, frontier_delay, pareto_frontier, tradeoff_points, FigureId, FigureTable,
};
pub use scenario::{preset_paper_defaults, run_scenario, Instance, ScenarioConfig};
