#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::cost::{be_toffoli, BeVariant};

fuzz_target!(|data: &str| {
    if let Ok(v) = data.parse::<BeVariant>() {
        assert_eq!(v.to_string().parse::<BeVariant>().unwrap(), v);
        let _ = be_toffoli(8, 4, v);
    }
});
