//! Both key-file formats share this target: the secret keypair file and
//! the public key file.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::{IssuerKeypair, IssuerPublicKey};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(keypair) = IssuerKeypair::from_json(text) {
        let json = keypair.to_json();
        let reparsed = IssuerKeypair::from_json(&json).expect("emitted JSON must reparse");
        assert_eq!(reparsed.secret_bytes(), keypair.secret_bytes());
        assert_eq!(reparsed.issuer_id(), keypair.issuer_id());
        assert_eq!(reparsed.to_json(), json);
    }
    if let Ok(public) = IssuerPublicKey::from_json(text) {
        let json = public.to_json();
        let reparsed = IssuerPublicKey::from_json(&json).expect("emitted JSON must reparse");
        assert_eq!(reparsed.to_bytes(), public.to_bytes());
        assert_eq!(reparsed.to_json(), json);
    }
});
