#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::field::PrimeField;
use seqrel::sequence::parse_sequence_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let k = PrimeField::new(65537).unwrap();
    if let Ok(spec) = parse_sequence_spec(&k, &v) {
        if let Ok(oracle) = spec.into_oracle(&k) {
            let dim = oracle.dim();
            if dim <= 4 {
                let _ = oracle.query(&vec![1; dim]);
            }
        }
    }
});
