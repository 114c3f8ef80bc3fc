#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::ConstraintSystemDescriptor;

fuzz_target!(|data: &[u8]| {
    if let Ok(descriptor) = ConstraintSystemDescriptor::from_bytes(data) {
        assert_eq!(
            descriptor.to_bytes(),
            data,
            "decode/encode is not the identity"
        );
    }
});
