#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::field::{Field, FieldSpec, PrimeField, Rationals};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = s.parse::<FieldSpec>() {
        // a parsed spec prints back to itself
        assert_eq!(spec.to_string().parse::<FieldSpec>().unwrap(), spec);
        if let FieldSpec::Prime(p) = spec {
            assert!(PrimeField::new(p).is_ok());
        }
    }
    // element parsing in both fields
    let q = Rationals::new();
    if let Ok(a) = q.parse_elem(s) {
        assert_eq!(q.parse_elem(&q.format(&a)).unwrap(), a);
    }
    let f = PrimeField::new(65537).unwrap();
    let _ = f.parse_elem(s);
});
