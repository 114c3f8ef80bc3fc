#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::Credential;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(credential) = Credential::from_json(text) {
        let json = credential.to_json();
        let reparsed = Credential::from_json(&json).expect("emitted JSON must reparse");
        assert_eq!(reparsed, credential);
        assert_eq!(reparsed.to_json(), json, "serialize/parse is not the identity");
    }
});
