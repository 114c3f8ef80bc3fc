#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::ZklaimsContext;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(context) = ZklaimsContext::from_json(text) {
        let json = context.to_json();
        let reparsed = ZklaimsContext::from_json(&json).expect("emitted JSON must reparse");
        assert_eq!(reparsed, context);
        assert_eq!(reparsed.to_json(), json, "serialize/parse is not the identity");
    }
});
