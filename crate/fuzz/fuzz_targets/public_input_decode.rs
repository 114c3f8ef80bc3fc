#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::encoding::PublicInput;

fuzz_target!(|data: &[u8]| {
    if let Ok(public) = PublicInput::from_bytes(data) {
        assert_eq!(public.to_bytes(), data, "decode/encode is not the identity");
    }
});
