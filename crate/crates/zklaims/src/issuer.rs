//! Issuer side: attribute schemas, credential issuance and the one-time
//! circuit bootstrap.
//!
//! A credential binds `5m - 1` caller-chosen attributes plus one issuer-
//! sampled blinding nonce into `m` packed payloads, hashes each payload,
//! and signs the digest list with the issuer's Ed25519 key. Holders later
//! prove statements against the digests without revealing the attributes;
//! the nonce stops anyone from confirming a guessed attribute vector by
//! recomputing digests.

use crate::circuit::{self, ConstraintSystemDescriptor, HashAlgorithm};
use crate::encoding::{
    pack_payload, AttributeValue, PayloadDigest, MAX_ATTRIBUTE, MAX_PAYLOADS, MIN_PAYLOADS,
    SLOTS_PER_PAYLOAD,
};
use crate::error::{Error, Result};
use crate::snark::{self, ProvingKey, VerificationKey};
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use ed25519_dalek::{Signer, SigningKey, Verifier, VerifyingKey};
use rand::rngs::OsRng;
use rand::{CryptoRng, Rng, RngCore};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Domain separator for credential signatures.
const CRED_DOMAIN: &[u8] = b"ZKLAIMS-CRED-v1";

/// The slot label reserved for the issuer-sampled nonce.
pub const NONCE_LABEL: &str = "nonce";

/// Signature schemes credentials can be issued under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureAlgorithm {
    Ed25519,
}

impl SignatureAlgorithm {
    pub fn id(self) -> u8 {
        match self {
            SignatureAlgorithm::Ed25519 => 1,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(SignatureAlgorithm::Ed25519),
            other => Err(Error::UnsupportedSignature(other)),
        }
    }
}

fn label_char_ok(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

fn is_reserved_label(label: &str) -> bool {
    label
        .strip_prefix("slot")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Declares the slot layout of a credential family: how many payloads, what
/// each slot means, and which algorithms bind and sign them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CredentialSchema {
    pub schema_id: String,
    pub issuer_id: String,
    pub payload_count: u16,
    pub slot_labels: Vec<String>,
    pub hash_id: u8,
    pub sig_id: u8,
}

impl CredentialSchema {
    /// Build a schema from the non-nonce attribute labels; the nonce slot is
    /// appended automatically.
    pub fn new(
        schema_id: impl Into<String>,
        issuer_id: impl Into<String>,
        payload_count: u16,
        attribute_labels: Vec<String>,
    ) -> Result<Self> {
        let mut slot_labels = attribute_labels;
        slot_labels.push(NONCE_LABEL.to_string());
        let schema = Self {
            schema_id: schema_id.into(),
            issuer_id: issuer_id.into(),
            payload_count,
            slot_labels,
            hash_id: HashAlgorithm::Sha256.id(),
            sig_id: SignatureAlgorithm::Ed25519.id(),
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn hash(&self) -> Result<HashAlgorithm> {
        HashAlgorithm::from_id(self.hash_id)
    }

    pub fn signature(&self) -> Result<SignatureAlgorithm> {
        SignatureAlgorithm::from_id(self.sig_id)
    }

    pub fn slot_count(&self) -> usize {
        self.payload_count as usize * SLOTS_PER_PAYLOAD
    }

    /// Index of the nonce slot: the last slot of the last payload.
    pub fn nonce_slot(&self) -> usize {
        self.slot_count() - 1
    }

    /// Find a slot index by its label.
    pub fn slot_index(&self, label: &str) -> Option<usize> {
        self.slot_labels.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_PAYLOADS..=MAX_PAYLOADS).contains(&self.payload_count) {
            return Err(Error::Range(format!(
                "payload count {} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]",
                self.payload_count
            )));
        }
        self.hash()?;
        self.signature()?;
        if self.schema_id.is_empty() {
            return Err(Error::Malformed("schema_id must not be empty".into()));
        }
        let slots = self.slot_count();
        if self.slot_labels.len() != slots {
            return Err(Error::Shape(format!(
                "{} slot labels for {} payloads, expected {slots}",
                self.slot_labels.len(),
                self.payload_count
            )));
        }
        for label in &self.slot_labels {
            if label.is_empty() || !label.chars().all(label_char_ok) {
                return Err(Error::Malformed(format!(
                    "slot label {label:?} must be non-empty [A-Za-z0-9_.-]"
                )));
            }
            if is_reserved_label(label) {
                return Err(Error::Malformed(format!(
                    "slot label {label:?} is reserved for positional references"
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &self.slot_labels {
            if !seen.insert(label) {
                return Err(Error::Malformed(format!("duplicate slot label {label:?}")));
            }
        }
        if self.slot_labels.last().map(String::as_str) != Some(NONCE_LABEL) {
            return Err(Error::Malformed(format!(
                "last slot label must be {NONCE_LABEL:?}"
            )));
        }
        if self.slot_labels[..slots - 1]
            .iter()
            .any(|l| l == NONCE_LABEL)
        {
            return Err(Error::Malformed(format!(
                "only the final slot may be labelled {NONCE_LABEL:?}"
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let schema: Self = serde_json::from_str(json)?;
        schema.validate()?;
        Ok(schema)
    }
}

fn issuer_id_of(verifying: &VerifyingKey) -> String {
    hex::encode(Sha256::digest(verifying.as_bytes()))
}

/// An issuer's Ed25519 signing keypair. The issuer identity is the SHA-256
/// digest of the public key, hex-encoded.
#[derive(Clone)]
pub struct IssuerKeypair {
    signing: SigningKey,
}

impl IssuerKeypair {
    pub fn generate() -> Self {
        Self {
            signing: SigningKey::generate(&mut OsRng),
        }
    }

    pub fn from_secret_bytes(secret: &[u8; 32]) -> Self {
        Self {
            signing: SigningKey::from_bytes(secret),
        }
    }

    pub fn secret_bytes(&self) -> [u8; 32] {
        self.signing.to_bytes()
    }

    pub fn issuer_id(&self) -> String {
        issuer_id_of(&self.signing.verifying_key())
    }

    pub fn public(&self) -> IssuerPublicKey {
        IssuerPublicKey {
            verifying: self.signing.verifying_key(),
        }
    }

    /// Sign arbitrary bytes. Used for credentials and directory records.
    pub(crate) fn sign_raw(&self, message: &[u8]) -> [u8; 64] {
        self.signing.sign(message).to_bytes()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&KeypairFile {
            issuer_id: self.issuer_id(),
            secret_key: BASE64.encode(self.secret_bytes()),
        })
        .expect("keypair serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: KeypairFile = serde_json::from_str(json)?;
        let raw = BASE64
            .decode(&file.secret_key)
            .map_err(|e| Error::Parse(format!("secret key base64: {e}")))?;
        let secret: [u8; 32] = raw
            .try_into()
            .map_err(|_| Error::Parse("secret key must be 32 bytes".into()))?;
        let keypair = Self::from_secret_bytes(&secret);
        if keypair.issuer_id() != file.issuer_id {
            return Err(Error::Malformed(
                "issuer_id does not match the secret key".into(),
            ));
        }
        Ok(keypair)
    }
}

#[derive(Serialize, Deserialize)]
struct KeypairFile {
    issuer_id: String,
    secret_key: String,
}

#[derive(Serialize, Deserialize)]
struct PublicKeyFile {
    issuer_id: String,
    public_key: String,
}

/// An issuer's public verification identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssuerPublicKey {
    verifying: VerifyingKey,
}

impl IssuerPublicKey {
    pub fn issuer_id(&self) -> String {
        issuer_id_of(&self.verifying)
    }

    pub fn to_bytes(&self) -> [u8; 32] {
        *self.verifying.as_bytes()
    }

    pub fn from_bytes(bytes: &[u8; 32]) -> Result<Self> {
        let verifying = VerifyingKey::from_bytes(bytes)
            .map_err(|e| Error::Parse(format!("issuer public key: {e}")))?;
        Ok(Self { verifying })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PublicKeyFile {
            issuer_id: self.issuer_id(),
            public_key: BASE64.encode(self.to_bytes()),
        })
        .expect("public key serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: PublicKeyFile = serde_json::from_str(json)?;
        let raw = BASE64
            .decode(&file.public_key)
            .map_err(|e| Error::Parse(format!("public key base64: {e}")))?;
        let bytes: [u8; 32] = raw
            .try_into()
            .map_err(|_| Error::Parse("public key must be 32 bytes".into()))?;
        let key = Self::from_bytes(&bytes)?;
        if key.issuer_id() != file.issuer_id {
            return Err(Error::Malformed(
                "issuer_id does not match the public key".into(),
            ));
        }
        Ok(key)
    }
}

/// A credential signature: 64 Ed25519 signature bytes, base64 in JSON.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct CredentialSignature(pub [u8; 64]);

impl std::fmt::Debug for CredentialSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CredentialSignature({})", BASE64.encode(self.0))
    }
}

impl Serialize for CredentialSignature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&BASE64.encode(self.0))
    }
}

impl<'de> Deserialize<'de> for CredentialSignature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let bytes = BASE64
            .decode(&raw)
            .map_err(|e| D::Error::custom(format!("signature base64: {e}")))?;
        let arr: [u8; 64] = bytes
            .try_into()
            .map_err(|_| D::Error::custom("signature must be 64 bytes"))?;
        Ok(Self(arr))
    }
}

/// A signed credential: the holder's attribute values (nonce included),
/// the payload digests `y`, and the issuer's signature `S` over them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Credential {
    pub schema_id: String,
    pub issuer_id: String,
    attributes: Vec<AttributeValue>,
    #[serde(rename = "y")]
    payload_digests: Vec<PayloadDigest>,
    #[serde(rename = "S")]
    signature: CredentialSignature,
}

impl Credential {
    pub fn attributes(&self) -> &[AttributeValue] {
        &self.attributes
    }

    pub fn payload_digests(&self) -> &[PayloadDigest] {
        &self.payload_digests
    }

    pub fn signature(&self) -> &CredentialSignature {
        &self.signature
    }

    pub fn payload_count(&self) -> usize {
        self.payload_digests.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("credential serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let cred: Self = serde_json::from_str(json)?;
        cred.validate_shape()?;
        Ok(cred)
    }

    fn validate_shape(&self) -> Result<()> {
        let m = self.payload_digests.len();
        if !(MIN_PAYLOADS as usize..=MAX_PAYLOADS as usize).contains(&m) {
            return Err(Error::Shape(format!(
                "credential has {m} payload digests, expected [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
            )));
        }
        if self.attributes.len() != m * SLOTS_PER_PAYLOAD {
            return Err(Error::Shape(format!(
                "credential has {} attributes for {m} payloads, expected {}",
                self.attributes.len(),
                m * SLOTS_PER_PAYLOAD
            )));
        }
        Ok(())
    }

    /// Recompute the payload digests from the attributes and compare them
    /// with the stored `y`. A mismatch means the credential file was
    /// corrupted or hand-edited.
    pub fn digests_consistent(&self) -> Result<bool> {
        Ok(compute_digests(&self.attributes)? == self.payload_digests)
    }

    #[cfg(any(test, feature = "testkit"))]
    pub(crate) fn from_parts_unchecked(
        schema_id: String,
        issuer_id: String,
        attributes: Vec<AttributeValue>,
        payload_digests: Vec<PayloadDigest>,
        signature: CredentialSignature,
    ) -> Self {
        Self {
            schema_id,
            issuer_id,
            attributes,
            payload_digests,
            signature,
        }
    }
}

/// SHA-256 each packed payload of an attribute vector.
pub fn compute_digests(attributes: &[AttributeValue]) -> Result<Vec<PayloadDigest>> {
    if attributes.is_empty() || attributes.len() % SLOTS_PER_PAYLOAD != 0 {
        return Err(Error::Shape(format!(
            "attribute count {} is not a positive multiple of {SLOTS_PER_PAYLOAD}",
            attributes.len()
        )));
    }
    Ok(attributes
        .chunks_exact(SLOTS_PER_PAYLOAD)
        .map(|chunk| {
            let slots: [u64; SLOTS_PER_PAYLOAD] =
                std::array::from_fn(|i| chunk[i].value());
            let packed = pack_payload(&slots).expect("values already range-checked").packed();
            PayloadDigest(Sha256::digest(packed).into())
        })
        .collect())
}

/// The exact byte string a credential signature covers.
fn credential_message(issuer_id: &str, schema_id: &str, digests: &[PayloadDigest]) -> Vec<u8> {
    let mut msg = Vec::with_capacity(
        CRED_DOMAIN.len() + issuer_id.len() + schema_id.len() + 32 * digests.len(),
    );
    msg.extend_from_slice(CRED_DOMAIN);
    msg.extend_from_slice(issuer_id.as_bytes());
    msg.extend_from_slice(schema_id.as_bytes());
    for d in digests {
        msg.extend_from_slice(d.as_bytes());
    }
    msg
}

/// Sign a digest list under a schema. Ed25519 is deterministic: the same
/// key and digests always produce the same signature.
pub fn sign_credential(
    keypair: &IssuerKeypair,
    schema_id: &str,
    digests: &[PayloadDigest],
) -> CredentialSignature {
    CredentialSignature(keypair.sign_raw(&credential_message(
        &keypair.issuer_id(),
        schema_id,
        digests,
    )))
}

/// Check a credential signature. Returns `Ok(false)` for a signature that
/// does not verify; malformed inputs never reach here because
/// [`CredentialSignature`] is length-checked at parse time.
pub fn verify_credential_signature(
    public: &IssuerPublicKey,
    schema_id: &str,
    issuer_id: &str,
    digests: &[PayloadDigest],
    signature: &CredentialSignature,
) -> Result<bool> {
    if public.issuer_id() != issuer_id {
        return Ok(false);
    }
    let message = credential_message(issuer_id, schema_id, digests);
    let sig = ed25519_dalek::Signature::from_bytes(&signature.0);
    Ok(public.verifying.verify(&message, &sig).is_ok())
}

/// Issue a credential over the labelled attribute values.
///
/// `values` must contain exactly the schema's non-nonce labels; the nonce
/// is sampled uniformly from the full 50-bit range by the issuer.
pub fn issue_credential(
    keypair: &IssuerKeypair,
    schema: &CredentialSchema,
    values: &BTreeMap<String, u64>,
) -> Result<Credential> {
    issue_credential_with_rng(keypair, schema, values, &mut OsRng)
}

/// [`issue_credential`] with a caller-supplied nonce source, for
/// reproducible tests.
pub fn issue_credential_with_rng<R: RngCore + CryptoRng>(
    keypair: &IssuerKeypair,
    schema: &CredentialSchema,
    values: &BTreeMap<String, u64>,
    rng: &mut R,
) -> Result<Credential> {
    schema.validate()?;
    if schema.issuer_id != keypair.issuer_id() {
        return Err(Error::KeyMismatch(format!(
            "schema names issuer {}, keypair is {}",
            schema.issuer_id,
            keypair.issuer_id()
        )));
    }
    for label in values.keys() {
        match schema.slot_index(label) {
            None => return Err(Error::UnknownSlot(label.clone())),
            Some(slot) if slot == schema.nonce_slot() => {
                return Err(Error::UnknownSlot(format!(
                    "{label} (the nonce is issuer-sampled, not caller-supplied)"
                )))
            }
            Some(_) => {}
        }
    }
    let mut attributes = Vec::with_capacity(schema.slot_count());
    for label in &schema.slot_labels[..schema.nonce_slot()] {
        let &raw = values
            .get(label)
            .ok_or_else(|| Error::MissingAttribute(label.clone()))?;
        attributes.push(AttributeValue::new(raw)?);
    }
    let nonce = rng.gen_range(0..=MAX_ATTRIBUTE);
    attributes.push(AttributeValue::new(nonce).expect("nonce sampled in range"));

    let payload_digests = compute_digests(&attributes)?;
    let signature = sign_credential(keypair, &schema.schema_id, &payload_digests);
    Ok(Credential {
        schema_id: schema.schema_id.clone(),
        issuer_id: schema.issuer_id.clone(),
        attributes,
        payload_digests,
        signature,
    })
}

/// One-time issuer bootstrap: generate the constraint system for the
/// schema's shape and run the trusted setup over it.
pub fn bootstrap_issuer(
    schema: &CredentialSchema,
    seed: Option<[u8; 32]>,
) -> Result<(ConstraintSystemDescriptor, ProvingKey, VerificationKey)> {
    schema.validate()?;
    let descriptor = circuit::build_constraint_system(schema.payload_count, schema.hash()?)?;
    let (pk, vk) = snark::setup(&descriptor, seed)?;
    Ok((descriptor, pk, vk))
}
