//! CSV renderings of experiment results.

use std::fmt::Write;

use super::{CellSummary, GridResult, TrialRow};

pub const RAW_CSV_HEADER: &str = "cell,trial,final_R_frac,max_I_frac,n_quarantines,second_wave,reseed_shortfall";

pub const AGGREGATE_CSV_HEADER: &str =
    "label,trials,mean_total,se_total,mean_max,se_max,p_second_wave,p_quarantined,mean_total_outbreaks,p_outbreak,failures";

pub fn raw_trials_csv(rows: &[TrialRow]) -> String {
    let mut s = String::from(RAW_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.cell,
            r.trial,
            r.final_removed,
            r.max_infected,
            r.n_quarantines,
            r.second_wave as u8,
            r.reseed_shortfall as u8
        );
    }
    s
}

pub fn aggregate_csv(cells: &[CellSummary]) -> String {
    let mut s = String::from(AGGREGATE_CSV_HEADER);
    s.push('\n');
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.label,
            c.trials,
            c.mean_total,
            c.se_total,
            c.mean_max,
            c.se_max,
            c.p_second_wave,
            c.p_quarantined,
            c.mean_total_outbreaks,
            c.p_outbreak,
            c.failures
        );
    }
    s
}

/// Long-format heatmap: `q1,q2,metric,value` with the mean total and mean
/// peak of each cell.
pub fn grid_heatmap_csv(grid: &GridResult) -> String {
    let mut s = String::from("q1,q2,metric,value\n");
    for (i, q1) in grid.q1.iter().enumerate() {
        for (j, q2) in grid.q2.iter().enumerate() {
            let c = &grid.cells[i][j];
            let _ = writeln!(s, "{q1},{q2},total,{}", c.mean_total);
            let _ = writeln!(s, "{q1},{q2},max_infected,{}", c.mean_max);
        }
    }
    s
}
