#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::compare::{relation_set_from_json, relation_set_to_json};
use seqrel::field::Rationals;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let q = Rationals::new();
    if let Ok(set) = relation_set_from_json(&q, &v) {
        let back = relation_set_from_json(&q, &relation_set_to_json(&q, &set)).expect("printed set parses");
        assert_eq!(back, set);
    }
});
