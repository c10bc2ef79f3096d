#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::parse::parse_samples_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(samples) = parse_samples_csv(data) {
        assert!(!samples.is_empty());
        assert!(samples.iter().all(|v| v.is_finite()));
    }
});
