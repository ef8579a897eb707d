#![no_main]
use libfuzzer_sys::fuzz_target;
use posmap::states::DensityMatrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(state) = DensityMatrix::from_json_str(s) {
            let again = DensityMatrix::from_json_str(&state.to_json_string()).expect("re-decodes");
            assert_eq!(again.to_json(), state.to_json());
        }
    }
});
