#![no_main]

use laddermod_cli::format::{parse_morphism, print_morphism};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_morphism(text, None) {
        let printed = print_morphism(&f);
        let again = parse_morphism(&printed, None).expect("printed morphism parses");
        assert_eq!(print_morphism(&again), printed);
    }
});
