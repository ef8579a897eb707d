#![no_main]
use libfuzzer_sys::fuzz_target;
use posmap::maps::ChoiMatrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(choi) = ChoiMatrix::from_json_str(s) {
            let again = ChoiMatrix::from_json_str(&choi.to_json_string()).expect("re-decodes");
            assert_eq!(again.to_json(), choi.to_json());
        }
    }
});
