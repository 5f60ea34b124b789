#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::bench::{parse_degree_range, parse_reference};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_degree_range(s);
    let _ = parse_reference(s);
});
