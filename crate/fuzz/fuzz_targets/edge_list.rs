#![no_main]

use herdq::netgen::{format_edge_list, parse_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(loaded) = parse_edge_list(text) else { return };
    loaded.graph.validate().expect("parsed graph is simple");
    assert_eq!(loaded.original_ids.len(), loaded.graph.n());
    let again = parse_edge_list(&format_edge_list(&loaded.graph)).expect("formatted list parses");
    assert_eq!(again.graph.edge_count(), loaded.graph.edge_count());
});
