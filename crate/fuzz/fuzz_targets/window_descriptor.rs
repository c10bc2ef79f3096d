#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::parse::parse_window;
use pqsvt::window::tail_report;

fuzz_target!(|data: &str| {
    if let Ok(w) = parse_window(data) {
        if let Ok(r) = tail_report(&w, 6, 0.25, 2.0) {
            assert!((0.0..=1.0).contains(&r.delta));
        }
    }
});
