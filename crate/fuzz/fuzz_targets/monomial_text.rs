#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::order::MonomialOrder;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for ord in [MonomialOrder::drl_n(2), MonomialOrder::drl_n(3), MonomialOrder::drl_n(5)] {
        if let Ok(m) = ord.parse_monomial(s) {
            assert_eq!(ord.parse_monomial(&ord.format_monomial(&m)).unwrap(), m);
        }
    }
});
