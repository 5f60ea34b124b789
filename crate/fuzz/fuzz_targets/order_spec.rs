#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::order::MonomialOrder;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(ord) = s.parse::<MonomialOrder>() {
        let again: MonomialOrder = ord.to_string().parse().expect("printed order parses");
        assert_eq!(again.to_string(), ord.to_string());
    }
});
