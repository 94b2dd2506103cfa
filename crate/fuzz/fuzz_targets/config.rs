#![no_main]

use herdq_cli::config::{parse_config, to_flags};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(entries) = parse_config(text) else { return };
    let cmd = herdq_cli::command();
    for sub in cmd.get_subcommands() {
        let _ = to_flags(sub, &entries);
    }
});
