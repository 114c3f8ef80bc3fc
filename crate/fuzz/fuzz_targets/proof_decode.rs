#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::Proof;

fuzz_target!(|data: &[u8]| {
    if let Ok(proof) = Proof::from_bytes(data) {
        assert_eq!(proof.to_bytes(), data, "decode/encode is not the identity");
    }
});
