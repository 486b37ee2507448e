#![no_main]

use laddermod::algebra::Field;
use laddermod_cli::format::{field_line, parse_field};
use libfuzzer_sys::fuzz_target;

// First line names the field, the rest are scalars.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut lines = text.lines();
    let field = match lines.next().map(parse_field) {
        Some(Ok(f)) => {
            let line = field_line(f);
            assert_eq!(parse_field(line.trim_start_matches("field ")), Ok(f));
            f
        }
        _ => Field::Rational,
    };
    for token in lines {
        if let Ok(s) = field.parse_scalar(token) {
            assert_eq!(field.parse_scalar(&s.to_string()).ok(), Some(s));
        }
    }
});
