//! Binary proving/verification key files. These decoders handle
//! attacker-length-prefixed point vectors, which is exactly the spot where
//! a missing bound becomes an allocation bomb — the fuzzer's favourite
//! food. Compressed point encodings are canonical, so a successful decode
//! must re-encode byte-identically.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::{ProvingKey, VerificationKey};

fuzz_target!(|data: &[u8]| {
    if let Ok(pk) = ProvingKey::from_bytes(data) {
        assert_eq!(pk.to_bytes(), data, "pk decode/encode is not the identity");
    }
    if let Ok(vk) = VerificationKey::from_bytes(data) {
        assert_eq!(vk.to_bytes(), data, "vk decode/encode is not the identity");
    }
});
