#![no_main]
use libfuzzer_sys::fuzz_target;
use posmap::measures::MeasureReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(report) = MeasureReport::from_json_str(s) {
            let again = MeasureReport::from_json_str(&report.to_json_string()).expect("re-decodes");
            assert_eq!(again.to_json(), report.to_json());
        }
    }
});
