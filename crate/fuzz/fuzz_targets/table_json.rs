#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::field::PrimeField;
use seqrel::sequence::{parse_table, SequenceOracle};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let k = PrimeField::new(65537).unwrap();
    if let Ok((shape, entries)) = parse_table(&k, &v) {
        if shape.len() > 4 {
            return;
        }
        if let Ok(t) = SequenceOracle::table(&k, shape.clone(), entries) {
            // every in-range index answers, the first out-of-range one does not
            let idx: Vec<u32> = shape.iter().map(|&d| d.saturating_sub(1) as u32).collect();
            if shape.iter().all(|&d| d > 0) {
                assert!(t.query(&idx).is_ok());
            }
            let out: Vec<u32> = shape.iter().map(|&d| d as u32).collect();
            if !shape.is_empty() {
                assert!(t.query(&out).is_err());
            }
        }
    }
});
