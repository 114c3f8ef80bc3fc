#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::CredentialSchema;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(schema) = CredentialSchema::from_json(text) {
        let json = schema.to_json();
        let reparsed = CredentialSchema::from_json(&json).expect("emitted JSON must reparse");
        assert_eq!(reparsed, schema);
        assert_eq!(reparsed.to_json(), json, "serialize/parse is not the identity");
    }
});
