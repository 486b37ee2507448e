#![no_main]

use laddermod_cli::format::{parse_module, print_module};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_module(text, None) {
        let printed = print_module(&m);
        let again = parse_module(&printed, None).expect("printed module parses");
        assert_eq!(again, m);
        assert_eq!(print_module(&again), printed);
    }
});
