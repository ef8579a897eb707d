#![no_main]
use libfuzzer_sys::fuzz_target;
use posmap::states::{Ensemble, EnsembleJson};

fuzz_target!(|data: &[u8]| {
    if let Ok(json) = serde_json::from_slice::<EnsembleJson>(data) {
        if let Ok(ens) = Ensemble::from_json(&json) {
            // weights were validated, so the barycenter is a unit-trace matrix
            let tr = ens.barycenter().trace().re;
            assert!((tr - 1.0).abs() < 1e-6);
        }
    }
});
