#![no_main]

use libfuzzer_sys::fuzz_target;
use seqrel::field::{PrimeField, Rationals};
use seqrel::order::MonomialOrder;
use seqrel::poly::Poly;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let ord = MonomialOrder::drl_n(3);
    let q = Rationals::new();
    if let Ok(p) = Poly::parse(&q, &ord, s) {
        assert_eq!(Poly::parse(&q, &ord, &p.to_text(&q, &ord)).unwrap(), p);
    }
    let f = PrimeField::new(7).unwrap();
    if let Ok(p) = Poly::parse(&f, &ord, s) {
        assert_eq!(Poly::parse(&f, &ord, &p.to_text(&f, &ord)).unwrap(), p);
    }
});
