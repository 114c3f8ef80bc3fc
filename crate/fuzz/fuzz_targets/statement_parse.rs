//! Statement text parser: anything that parses must survive the
//! render → reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::Statement;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for slot_count in [5usize, 15] {
        if let Ok(statement) = Statement::parse_positional(text, slot_count) {
            let canonical = statement.render();
            let reparsed = Statement::parse_positional(&canonical, slot_count)
                .expect("canonical form must reparse");
            assert_eq!(reparsed, statement, "render/reparse is not the identity");
        }
    }
});
