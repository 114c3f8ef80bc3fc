//! Fixed-point encoding of attributes, predicates and public inputs.
//!
//! Everything that must agree bit-for-bit between native code and the
//! constraint system lives here: the 50-bit attribute packing, the 3-bit
//! predicate masks, the digest-to-field-element split and the public input
//! vector layout. The circuit and the issuer both call into this module
//! rather than carrying their own copies of the layout rules.

use crate::error::{Error, Result};
use ark_ff::{BigInteger, PrimeField};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Scalar field of the proving curve (BN254).
pub type Scalar = ark_bn254::Fr;

/// Width of one attribute slot in bits.
pub const ATTRIBUTE_BITS: usize = 50;
/// Attribute slots per 256-bit payload; the last slot of the last payload of
/// a credential holds the blinding nonce.
pub const SLOTS_PER_PAYLOAD: usize = 5;
/// Packed payload size in bytes.
pub const PAYLOAD_BYTES: usize = 32;
/// Payload digest size in bytes (SHA-256).
pub const DIGEST_BYTES: usize = 32;
/// Largest representable attribute value, `2^50 - 1`.
pub const MAX_ATTRIBUTE: u64 = (1u64 << ATTRIBUTE_BITS) - 1;
/// Inclusive bounds on the number of payloads per credential.
pub const MIN_PAYLOADS: u16 = 1;
pub const MAX_PAYLOADS: u16 = 64;

/// Field elements contributed to the public input by each payload:
/// two digest halves, five predicate masks, five reference values.
pub const ELEMENTS_PER_PAYLOAD: usize = 2 + 2 * SLOTS_PER_PAYLOAD;

fn check_range(v: u64, what: &str) -> Result<()> {
    if v > MAX_ATTRIBUTE {
        return Err(Error::Range(format!(
            "{what} {v} exceeds 2^{ATTRIBUTE_BITS} - 1"
        )));
    }
    Ok(())
}

/// An attribute value, guaranteed to fit in [`ATTRIBUTE_BITS`] bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeValue(u64);

impl AttributeValue {
    pub fn new(v: u64) -> Result<Self> {
        check_range(v, "attribute value")?;
        Ok(Self(v))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

/// A predicate reference value, range-checked like an attribute.
///
/// Kept as a distinct type: attributes are witness data, references are
/// public statement data, and conflating them is how disclosure bugs happen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReferenceValue(u64);

impl ReferenceValue {
    pub fn new(v: u64) -> Result<Self> {
        check_range(v, "reference value")?;
        Ok(Self(v))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

// Attribute and reference values travel as decimal strings in JSON so that
// 50-bit values survive JSON implementations that parse numbers as f64.
macro_rules! decimal_string_serde {
    ($ty:ident) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.0.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let raw = String::deserialize(d)?;
                let v: u64 = raw
                    .parse()
                    .map_err(|_| D::Error::custom(format!("not a decimal integer: {raw:?}")))?;
                $ty::new(v).map_err(D::Error::custom)
            }
        }
    };
}

decimal_string_serde!(AttributeValue);
decimal_string_serde!(ReferenceValue);

/// A 3-bit predicate mask: bit 0 selects `<`, bit 1 selects `=`, bit 2
/// selects `>`. The predicate holds when the bit for the actual comparison
/// outcome is set. `0b111` accepts anything (NOOP); `0b000` would reject
/// everything and is not constructible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PredicateMask(u8);

impl PredicateMask {
    pub fn new(bits: u8) -> Result<Self> {
        if bits == 0 || bits > 0b111 {
            return Err(Error::Range(format!(
                "predicate mask must be a non-zero 3-bit value, got {bits:#05b}"
            )));
        }
        Ok(Self(bits))
    }

    /// The mask that accepts any value.
    pub fn noop() -> Self {
        Self(0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_noop(self) -> bool {
        self.0 == 0b111
    }

    pub fn lt(self) -> bool {
        self.0 & 0b001 != 0
    }

    pub fn eq(self) -> bool {
        self.0 & 0b010 != 0
    }

    pub fn gt(self) -> bool {
        self.0 & 0b100 != 0
    }

    /// Bitwise complement within the 3-bit alphabet. Defined for every mask
    /// except NOOP, whose complement would reject everything.
    pub fn complement(self) -> Result<Self> {
        Self::new(!self.0 & 0b111)
    }

    /// Canonical comparison-operator spelling for this mask.
    pub fn symbol(self) -> &'static str {
        match self.0 {
            0b001 => "<",
            0b010 => "=",
            0b011 => "<=",
            0b100 => ">",
            0b101 => "!=",
            0b110 => ">=",
            _ => "any",
        }
    }
}

impl Serialize for PredicateMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for PredicateMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = u8::deserialize(d)?;
        PredicateMask::new(bits).map_err(D::Error::custom)
    }
}

/// Map a comparison-operator spelling to its mask.
pub fn encode_predicate(symbol: &str) -> Result<PredicateMask> {
    let bits = match symbol {
        "<" => 0b001,
        "=" => 0b010,
        "<=" => 0b011,
        ">" => 0b100,
        "!=" => 0b101,
        ">=" => 0b110,
        "any" => 0b111,
        other => {
            return Err(Error::Parse(format!(
                "unknown predicate operator {other:?} (expected <, <=, =, !=, >=, > or any)"
            )))
        }
    };
    Ok(PredicateMask(bits))
}

/// Native predicate semantics: does `attribute ? reference` hold under
/// `mask`? This is the oracle the circuit must agree with exactly.
pub fn evaluate_predicate(
    mask: PredicateMask,
    attribute: AttributeValue,
    reference: ReferenceValue,
) -> bool {
    let (a, r) = (attribute.value(), reference.value());
    (mask.lt() && a < r) || (mask.eq() && a == r) || (mask.gt() && a > r)
}

/// Five attribute slots packed into one 256-bit payload.
///
/// Slot `i` occupies bit positions `[50*i, 50*i + 50)` counted from the most
/// significant bit of the payload, each slot big-endian, and the final six
/// bits are zero padding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayloadPreimage {
    slots: [AttributeValue; SLOTS_PER_PAYLOAD],
}

impl PayloadPreimage {
    pub fn new(slots: [AttributeValue; SLOTS_PER_PAYLOAD]) -> Self {
        Self { slots }
    }

    pub fn slots(&self) -> &[AttributeValue; SLOTS_PER_PAYLOAD] {
        &self.slots
    }

    /// The packed 32-byte payload, the exact SHA-256 preimage.
    pub fn packed(&self) -> [u8; PAYLOAD_BYTES] {
        let mut out = [0u8; PAYLOAD_BYTES];
        for (i, slot) in self.slots.iter().enumerate() {
            let v = slot.value();
            for b in 0..ATTRIBUTE_BITS {
                if (v >> (ATTRIBUTE_BITS - 1 - b)) & 1 == 1 {
                    let pos = ATTRIBUTE_BITS * i + b;
                    out[pos / 8] |= 1 << (7 - pos % 8);
                }
            }
        }
        out
    }

    /// Inverse of [`packed`](Self::packed); rejects payloads whose six
    /// padding bits are not zero.
    pub fn from_packed(packed: &[u8; PAYLOAD_BYTES]) -> Result<Self> {
        let bit = |pos: usize| (packed[pos / 8] >> (7 - pos % 8)) & 1;
        for pos in SLOTS_PER_PAYLOAD * ATTRIBUTE_BITS..8 * PAYLOAD_BYTES {
            if bit(pos) != 0 {
                return Err(Error::Malformed(
                    "payload padding bits are not zero".into(),
                ));
            }
        }
        let mut slots = [AttributeValue(0); SLOTS_PER_PAYLOAD];
        for (i, slot) in slots.iter_mut().enumerate() {
            let mut v = 0u64;
            for b in 0..ATTRIBUTE_BITS {
                v = v << 1 | u64::from(bit(ATTRIBUTE_BITS * i + b));
            }
            *slot = AttributeValue(v);
        }
        Ok(Self { slots })
    }
}

/// Pack five range-checked raw values into a payload preimage.
pub fn pack_payload(slots: &[u64; SLOTS_PER_PAYLOAD]) -> Result<PayloadPreimage> {
    let mut checked = [AttributeValue(0); SLOTS_PER_PAYLOAD];
    for (out, &v) in checked.iter_mut().zip(slots) {
        *out = AttributeValue::new(v)?;
    }
    Ok(PayloadPreimage::new(checked))
}

/// A SHA-256 payload digest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PayloadDigest(pub [u8; DIGEST_BYTES]);

impl PayloadDigest {
    pub fn as_bytes(&self) -> &[u8; DIGEST_BYTES] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Parse(format!("digest hex: {e}")))?;
        let arr: [u8; DIGEST_BYTES] = bytes
            .try_into()
            .map_err(|_| Error::Parse("digest must be 32 bytes of hex".into()))?;
        Ok(Self(arr))
    }
}

impl Serialize for PayloadDigest {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for PayloadDigest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        PayloadDigest::from_hex(&raw).map_err(D::Error::custom)
    }
}

/// Split a digest into two 128-bit field elements: the first sixteen bytes
/// big-endian become the high element, the remaining sixteen the low one.
/// Both fit the 254-bit scalar field without reduction.
pub fn digest_to_field_elements(digest: &PayloadDigest) -> (Scalar, Scalar) {
    let hi = Scalar::from_be_bytes_mod_order(&digest.0[..16]);
    let lo = Scalar::from_be_bytes_mod_order(&digest.0[16..]);
    (hi, lo)
}

/// The verifier-visible instance `x = (y, p, r)`: payload digests, predicate
/// masks and reference values, in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicInput {
    digests: Vec<PayloadDigest>,
    masks: Vec<PredicateMask>,
    references: Vec<ReferenceValue>,
}

impl PublicInput {
    pub fn payload_count(&self) -> usize {
        self.digests.len()
    }

    pub fn slot_count(&self) -> usize {
        self.masks.len()
    }

    pub fn digests(&self) -> &[PayloadDigest] {
        &self.digests
    }

    pub fn masks(&self) -> &[PredicateMask] {
        &self.masks
    }

    pub fn references(&self) -> &[ReferenceValue] {
        &self.references
    }

    /// Flatten into the field-element vector fed to the proof system:
    /// `[hi_0, lo_0, .., hi_{m-1}, lo_{m-1}, p_0, .., p_{5m-1}, r_0, .., r_{5m-1}]`.
    pub fn field_elements(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(ELEMENTS_PER_PAYLOAD * self.digests.len());
        for d in &self.digests {
            let (hi, lo) = digest_to_field_elements(d);
            out.push(hi);
            out.push(lo);
        }
        out.extend(self.masks.iter().map(|m| Scalar::from(m.bits())));
        out.extend(self.references.iter().map(|r| Scalar::from(r.value())));
        out
    }

    /// Compact binary form: payload count (u16 LE), digests, mask bytes,
    /// reference values (u64 LE).
    pub fn to_bytes(&self) -> Vec<u8> {
        let m = self.digests.len();
        let mut out = Vec::with_capacity(2 + m * (DIGEST_BYTES + 9 * SLOTS_PER_PAYLOAD));
        out.extend_from_slice(&(m as u16).to_le_bytes());
        for d in &self.digests {
            out.extend_from_slice(&d.0);
        }
        out.extend(self.masks.iter().map(|p| p.bits()));
        for r in &self.references {
            out.extend_from_slice(&r.value().to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let too_short = || Error::Parse("public input truncated".into());
        let count = u16::from_le_bytes(
            bytes
                .get(..2)
                .ok_or_else(too_short)?
                .try_into()
                .unwrap(),
        );
        if !(MIN_PAYLOADS..=MAX_PAYLOADS).contains(&count) {
            return Err(Error::Shape(format!(
                "payload count {count} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
            )));
        }
        let m = count as usize;
        let s = m * SLOTS_PER_PAYLOAD;
        let expected = 2 + m * DIGEST_BYTES + s + 8 * s;
        if bytes.len() != expected {
            return Err(Error::Parse(format!(
                "public input for {m} payloads must be {expected} bytes, got {}",
                bytes.len()
            )));
        }
        let mut at = 2;
        let mut digests = Vec::with_capacity(m);
        for _ in 0..m {
            digests.push(PayloadDigest(
                bytes[at..at + DIGEST_BYTES].try_into().unwrap(),
            ));
            at += DIGEST_BYTES;
        }
        let mut masks = Vec::with_capacity(s);
        for _ in 0..s {
            masks.push(PredicateMask::new(bytes[at])?);
            at += 1;
        }
        let mut references = Vec::with_capacity(s);
        for _ in 0..s {
            let v = u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
            references.push(ReferenceValue::new(v)?);
            at += 8;
        }
        assemble_public_input(digests, masks, references)
    }
}

/// Check the instance shape and assemble a [`PublicInput`].
pub fn assemble_public_input(
    digests: Vec<PayloadDigest>,
    masks: Vec<PredicateMask>,
    references: Vec<ReferenceValue>,
) -> Result<PublicInput> {
    let m = digests.len();
    if !(MIN_PAYLOADS as usize..=MAX_PAYLOADS as usize).contains(&m) {
        return Err(Error::Shape(format!(
            "payload count {m} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
        )));
    }
    let slots = m * SLOTS_PER_PAYLOAD;
    if masks.len() != slots {
        return Err(Error::Shape(format!(
            "expected {slots} predicate masks for {m} payloads, got {}",
            masks.len()
        )));
    }
    if references.len() != slots {
        return Err(Error::Shape(format!(
            "expected {slots} reference values for {m} payloads, got {}",
            references.len()
        )));
    }
    Ok(PublicInput {
        digests,
        masks,
        references,
    })
}

/// Render a scalar back into a fixed-width big-endian byte string.
/// Used to reassemble digest bytes from the two public-input halves.
pub fn scalar_to_be_bytes(s: &Scalar, width: usize) -> Vec<u8> {
    let bytes = s.into_bigint().to_bytes_be();
    assert!(width >= bytes.len() - bytes.iter().take_while(|b| **b == 0).count());
    let mut out = vec![0u8; width];
    let skip = bytes.len().saturating_sub(width);
    out[width.saturating_sub(bytes.len())..].copy_from_slice(&bytes[skip..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent packer: builds the explicit 256-entry bit vector and
    /// folds it into bytes. Deliberately shares no code with `packed()`.
    fn pack_oracle(slots: &[u64; 5]) -> [u8; 32] {
        let mut bits = vec![false; 256];
        for (i, &v) in slots.iter().enumerate() {
            for b in 0..50 {
                bits[50 * i + b] = (v >> (49 - b)) & 1 == 1;
            }
        }
        let mut out = [0u8; 32];
        for (pos, bit) in bits.iter().enumerate() {
            if *bit {
                out[pos / 8] |= 0x80 >> (pos % 8);
            }
        }
        out
    }

    #[test]
    fn pack_frozen_vectors() {
        // [3, 7, 0, 0, 0]: slot 0 sets bits 48-49, slot 1 sets bits 97-99.
        let mut expected = [0u8; 32];
        expected[6] = 0xC0;
        expected[12] = 0x70;
        assert_eq!(pack_payload(&[3, 7, 0, 0, 0]).unwrap().packed(), expected);

        // All-max slots: first 250 bits set, 6 padding bits clear.
        let mut expected = [0xFFu8; 32];
        expected[31] = 0xC0;
        let max = [MAX_ATTRIBUTE; 5];
        assert_eq!(pack_payload(&max).unwrap().packed(), expected);

        assert_eq!(pack_payload(&[0; 5]).unwrap().packed(), [0u8; 32]);
    }

    #[test]
    fn pack_rejects_out_of_range() {
        let e = pack_payload(&[0, 0, 1 << 50, 0, 0]).unwrap_err();
        assert!(matches!(e, Error::Range(_)), "got {e:?}");
    }

    #[test]
    fn unpack_rejects_dirty_padding() {
        let mut packed = [0u8; 32];
        packed[31] = 0x01;
        assert!(matches!(
            PayloadPreimage::from_packed(&packed),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn predicate_symbols_round_trip() {
        for sym in ["<", "<=", "=", "!=", ">=", ">", "any"] {
            let mask = encode_predicate(sym).unwrap();
            assert_eq!(mask.symbol(), sym);
        }
        assert!(encode_predicate("==").is_err());
        assert!(encode_predicate("").is_err());
        assert!(PredicateMask::new(0).is_err());
        assert!(PredicateMask::new(8).is_err());
    }

    #[test]
    fn predicate_truth_table_spot_checks() {
        let cases = [
            ("<", 3, 5, true),
            ("<", 5, 5, false),
            ("<=", 5, 5, true),
            ("=", 5, 5, true),
            ("=", 6, 5, false),
            ("!=", 6, 5, true),
            (">=", 5, 5, true),
            (">=", 4, 5, false),
            (">", 6, 5, true),
            (">", 5, 5, false),
            ("any", 0, MAX_ATTRIBUTE, true),
        ];
        for (sym, a, r, expect) in cases {
            let mask = encode_predicate(sym).unwrap();
            let a = AttributeValue::new(a).unwrap();
            let r = ReferenceValue::new(r).unwrap();
            assert_eq!(evaluate_predicate(mask, a, r), expect, "{a:?} {sym} {r:?}");
        }
    }

    #[test]
    fn digest_split_is_lossless() {
        let digest = PayloadDigest(std::array::from_fn(|i| (i as u8).wrapping_mul(37)));
        let (hi, lo) = digest_to_field_elements(&digest);
        let mut rebuilt = scalar_to_be_bytes(&hi, 16);
        rebuilt.extend(scalar_to_be_bytes(&lo, 16));
        assert_eq!(rebuilt, digest.0);
    }

    #[test]
    fn public_input_arity() {
        for m in [1usize, 2, 64] {
            let digests = vec![PayloadDigest([7u8; 32]); m];
            let masks = vec![PredicateMask::noop(); 5 * m];
            let refs = vec![ReferenceValue::new(0).unwrap(); 5 * m];
            let x = assemble_public_input(digests, masks, refs).unwrap();
            assert_eq!(x.field_elements().len(), 12 * m);
        }
        // Shape violations.
        assert!(assemble_public_input(vec![], vec![], vec![]).is_err());
        assert!(assemble_public_input(
            vec![PayloadDigest([0; 32])],
            vec![PredicateMask::noop(); 4],
            vec![ReferenceValue::new(0).unwrap(); 5],
        )
        .is_err());
    }

    #[test]
    fn attribute_value_json_is_decimal_string() {
        let v = AttributeValue::new(MAX_ATTRIBUTE).unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            format!("\"{MAX_ATTRIBUTE}\"")
        );
        let back: AttributeValue = serde_json::from_str("\"42\"").unwrap();
        assert_eq!(back.value(), 42);
        assert!(serde_json::from_str::<AttributeValue>("42").is_err());
        assert!(serde_json::from_str::<AttributeValue>("\"1125899906842624\"").is_err());
    }

    proptest! {
        #[test]
        fn pack_matches_oracle(slots in proptest::array::uniform5(0u64..=MAX_ATTRIBUTE)) {
            let packed = pack_payload(&slots).unwrap().packed();
            prop_assert_eq!(packed, pack_oracle(&slots));
        }

        #[test]
        fn pack_round_trips(slots in proptest::array::uniform5(0u64..=MAX_ATTRIBUTE)) {
            let preimage = pack_payload(&slots).unwrap();
            let back = PayloadPreimage::from_packed(&preimage.packed()).unwrap();
            prop_assert_eq!(&preimage, &back);
            // Packing is pure: same slots, same bytes.
            prop_assert_eq!(preimage.packed(), pack_payload(&slots).unwrap().packed());
        }

        #[test]
        fn noop_accepts_everything(a in 0u64..=MAX_ATTRIBUTE, r in 0u64..=MAX_ATTRIBUTE) {
            let a = AttributeValue::new(a).unwrap();
            let r = ReferenceValue::new(r).unwrap();
            prop_assert!(evaluate_predicate(PredicateMask::noop(), a, r));
        }

        #[test]
        fn complement_flips_outcome(
            bits in 1u8..=6,
            a in 0u64..=MAX_ATTRIBUTE,
            r in 0u64..=MAX_ATTRIBUTE,
        ) {
            let mask = PredicateMask::new(bits).unwrap();
            let comp = mask.complement().unwrap();
            let a = AttributeValue::new(a).unwrap();
            let r = ReferenceValue::new(r).unwrap();
            prop_assert_ne!(
                evaluate_predicate(mask, a, r),
                evaluate_predicate(comp, a, r)
            );
        }

        #[test]
        fn public_input_bytes_round_trip(
            m in 1usize..=4,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let digests = (0..m).map(|_| PayloadDigest(rng.gen())).collect::<Vec<_>>();
            let masks = (0..5 * m)
                .map(|_| PredicateMask::new(rng.gen_range(1..=7)).unwrap())
                .collect::<Vec<_>>();
            let refs = (0..5 * m)
                .map(|_| ReferenceValue::new(rng.gen_range(0..=MAX_ATTRIBUTE)).unwrap())
                .collect::<Vec<_>>();
            let x = assemble_public_input(digests, masks, refs).unwrap();
            let bytes = x.to_bytes();
            let back = PublicInput::from_bytes(&bytes).unwrap();
            prop_assert_eq!(&x, &back);
            prop_assert_eq!(back.to_bytes(), bytes);
        }
    }
}
