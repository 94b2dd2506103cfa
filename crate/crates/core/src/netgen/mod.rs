//! Contact graphs: representation, random generators, edge-list ingestion
//! and summary statistics.

mod degseq;
mod generators;
mod graph;
mod io;
mod ops;
mod stats;

pub use degseq::{sample_degree_sequence, DegreeSequence, SAMPLING_TAIL};
pub use generators::{
    config_graph_from_dist, gen_ba, gen_config_model, gen_nn, gen_plc, gen_rw, gen_ws, generate, ConfigGraph,
    GeneratorParams,
};
pub use graph::{DropReport, Graph};
pub use io::{format_edge_list, load_edge_list, parse_edge_list, write_edge_list, LoadSummary, LoadedGraph};
pub use ops::{immunize, induced_subgraph, induced_susceptible_subgraph, ImmunizationStrategy};
pub use stats::{
    avg_clustering, bfs_distances, graph_stats, local_clustering, powerlaw_exponent, GraphStats, STATS_CSV_HEADER,
};
