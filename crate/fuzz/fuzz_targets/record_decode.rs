//! Namespace record wire format. The encoding has no optional or
//! variable-representation fields, so a successful decode must re-encode
//! to exactly the input bytes.

#![no_main]

use libfuzzer_sys::fuzz_target;
use zklaims::directory::NamespaceRecord;

const NAMESPACE: &str = "0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcdef";

fuzz_target!(|data: &[u8]| {
    if let Ok(record) = NamespaceRecord::decode(NAMESPACE, data) {
        assert_eq!(record.encode(), data, "decode/encode is not the identity");
    }
});
