#![no_main]

use libfuzzer_sys::fuzz_target;
use pqsvt::parse::TargetDescriptor;

fuzz_target!(|data: &str| {
    if let Ok(desc) = data.parse::<TargetDescriptor>() {
        // custom targets would touch the filesystem
        if !matches!(desc, TargetDescriptor::Custom(_)) {
            if let Ok(spec) = desc.resolve(4) {
                let _ = pqsvt::sample_target(&spec);
            }
        }
    }
});
