//! A filesystem directory of signed, self-certifying records.
//!
//! Namespaces are named by the SHA-256 digest of their owner's Ed25519
//! public key, so possession of the key is the only admission ticket: no
//! registry, no accounts. Every record is signed by the owner, and
//! `resolve` re-checks both the signature and the key-to-namespace binding,
//! which makes the store safe to host on untrusted infrastructure — a
//! tampered file simply stops resolving.

use crate::error::{Error, Result};
use crate::issuer::{IssuerKeypair, IssuerPublicKey};
use ed25519_dalek::Verifier;
use std::fs;
use std::path::{Path, PathBuf};

/// Maximum record blob size.
pub const BLOB_CAP: usize = 1 << 20;

const RECORD_MAGIC: &[u8; 4] = b"ZKNR";
const RECORD_VERSION: u8 = 1;
/// Name of the per-namespace file holding the owner's raw public key.
const OWNER_FILE: &str = "_owner";

/// What a record stores. The numeric ids are part of the wire format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Descriptor,
    VerificationKey,
    Context,
    Schema,
}

impl RecordKind {
    pub fn id(self) -> u8 {
        match self {
            RecordKind::Descriptor => 0,
            RecordKind::VerificationKey => 1,
            RecordKind::Context => 2,
            RecordKind::Schema => 3,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            0 => Ok(RecordKind::Descriptor),
            1 => Ok(RecordKind::VerificationKey),
            2 => Ok(RecordKind::Context),
            3 => Ok(RecordKind::Schema),
            other => Err(Error::Parse(format!("unknown record kind id {other}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Descriptor => "descriptor",
            RecordKind::VerificationKey => "verification-key",
            RecordKind::Context => "context",
            RecordKind::Schema => "schema",
        }
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label.len() <= 255
        && !label.starts_with('_')
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && label != "."
        && label != ".."
}

fn valid_namespace(namespace_id: &str) -> bool {
    namespace_id.len() == 64
        && namespace_id
            .bytes()
            .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

/// The bytes a record signature covers.
fn record_message(label: &str, kind: RecordKind, blob: &[u8]) -> Vec<u8> {
    let mut msg = Vec::with_capacity(label.len() + 1 + blob.len());
    msg.extend_from_slice(label.as_bytes());
    msg.push(kind.id());
    msg.extend_from_slice(blob);
    msg
}

/// One signed record inside a namespace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamespaceRecord {
    pub namespace_id: String,
    pub label: String,
    pub kind: RecordKind,
    pub blob: Vec<u8>,
    pub signature: [u8; 64],
}

impl NamespaceRecord {
    /// Wire encoding: magic, version, kind, label (u16-length-prefixed),
    /// blob (u32-length-prefixed), signature.
    pub fn encode(&self) -> Vec<u8> {
        let mut out =
            Vec::with_capacity(4 + 1 + 1 + 2 + self.label.len() + 4 + self.blob.len() + 64);
        out.extend_from_slice(RECORD_MAGIC);
        out.push(RECORD_VERSION);
        out.push(self.kind.id());
        out.extend_from_slice(&(self.label.len() as u16).to_le_bytes());
        out.extend_from_slice(self.label.as_bytes());
        out.extend_from_slice(&(self.blob.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.blob);
        out.extend_from_slice(&self.signature);
        out
    }

    /// Parse a record's structure. Signature verification is separate
    /// ([`verify`](Self::verify)); decoding never trusts anything.
    pub fn decode(namespace_id: &str, bytes: &[u8]) -> Result<Self> {
        if !valid_namespace(namespace_id) {
            return Err(Error::Malformed(format!(
                "namespace id {namespace_id:?} is not 64 hex characters"
            )));
        }
        let too_short = || Error::Parse("record truncated".into());
        if bytes.len() < 4 + 1 + 1 + 2 {
            return Err(too_short());
        }
        if &bytes[..4] != RECORD_MAGIC {
            return Err(Error::Parse("bad record magic".into()));
        }
        if bytes[4] != RECORD_VERSION {
            return Err(Error::Parse(format!(
                "unsupported record version {}",
                bytes[4]
            )));
        }
        let kind = RecordKind::from_id(bytes[5])?;
        let label_len = u16::from_le_bytes(bytes[6..8].try_into().unwrap()) as usize;
        let label_end = 8 + label_len;
        let label_bytes = bytes.get(8..label_end).ok_or_else(too_short)?;
        let label = std::str::from_utf8(label_bytes)
            .map_err(|_| Error::Parse("record label is not UTF-8".into()))?;
        if !valid_label(label) {
            return Err(Error::Malformed(format!("invalid record label {label:?}")));
        }
        let blob_len = u32::from_le_bytes(
            bytes
                .get(label_end..label_end + 4)
                .ok_or_else(too_short)?
                .try_into()
                .unwrap(),
        ) as usize;
        if blob_len > BLOB_CAP {
            return Err(Error::OversizeBlob {
                size: blob_len,
                cap: BLOB_CAP,
            });
        }
        let blob_end = label_end + 4 + blob_len;
        let blob = bytes.get(label_end + 4..blob_end).ok_or_else(too_short)?;
        let signature: [u8; 64] = bytes
            .get(blob_end..blob_end + 64)
            .ok_or_else(too_short)?
            .try_into()
            .unwrap();
        if bytes.len() != blob_end + 64 {
            return Err(Error::Parse(format!(
                "record has {} trailing bytes",
                bytes.len() - blob_end - 64
            )));
        }
        Ok(Self {
            namespace_id: namespace_id.to_string(),
            label: label.to_string(),
            kind,
            blob: blob.to_vec(),
            signature,
        })
    }

    /// Check the record signature and the owner's binding to the namespace.
    pub fn verify(&self, owner: &IssuerPublicKey) -> Result<()> {
        if owner.issuer_id() != self.namespace_id {
            return Err(Error::InvalidRecordSignature(format!(
                "owner key digests to {}, record lives in namespace {}",
                owner.issuer_id(),
                self.namespace_id
            )));
        }
        let verifying = ed25519_dalek::VerifyingKey::from_bytes(&owner.to_bytes())
            .map_err(|e| Error::InvalidRecordSignature(format!("owner key: {e}")))?;
        let message = record_message(&self.label, self.kind, &self.blob);
        let sig = ed25519_dalek::Signature::from_bytes(&self.signature);
        verifying.verify(&message, &sig).map_err(|_| {
            Error::InvalidRecordSignature(format!(
                "record {}/{} signature check failed",
                self.namespace_id, self.label
            ))
        })
    }
}

/// A record store rooted at a directory. The layout is one subdirectory per
/// namespace containing the records by label, plus an `_owner` file with
/// the owner's raw 32-byte public key.
#[derive(Clone, Debug)]
pub struct DirectoryStore {
    root: PathBuf,
}

impl DirectoryStore {
    pub fn open(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn namespace_dir(&self, namespace_id: &str) -> Result<PathBuf> {
        if !valid_namespace(namespace_id) {
            return Err(Error::Malformed(format!(
                "namespace id {namespace_id:?} is not 64 hex characters"
            )));
        }
        Ok(self.root.join(namespace_id))
    }

    /// Sign `blob` and write it into the owner's namespace under `label`,
    /// creating the namespace on first use. Re-publishing a label
    /// overwrites it atomically.
    pub fn publish(
        &self,
        owner: &IssuerKeypair,
        label: &str,
        kind: RecordKind,
        blob: &[u8],
    ) -> Result<NamespaceRecord> {
        if !valid_label(label) {
            return Err(Error::Malformed(format!(
                "label {label:?} must be 1-255 characters of [A-Za-z0-9_.-] \
                 and must not start with an underscore"
            )));
        }
        if blob.len() > BLOB_CAP {
            return Err(Error::OversizeBlob {
                size: blob.len(),
                cap: BLOB_CAP,
            });
        }
        let namespace_id = owner.issuer_id();
        let dir = self.namespace_dir(&namespace_id)?;
        fs::create_dir_all(&dir)?;

        let owner_bytes = owner.public().to_bytes();
        let owner_path = dir.join(OWNER_FILE);
        match fs::read(&owner_path) {
            Ok(existing) if existing != owner_bytes => {
                return Err(Error::KeyMismatch(format!(
                    "namespace {namespace_id} is already bound to a different key"
                )))
            }
            Ok(_) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                write_atomic(&owner_path, &owner_bytes)?;
            }
            Err(e) => return Err(e.into()),
        }

        let record = NamespaceRecord {
            namespace_id,
            label: label.to_string(),
            kind,
            blob: blob.to_vec(),
            signature: owner.sign_raw(&record_message(label, kind, blob)),
        };
        write_atomic(&dir.join(label), &record.encode())?;
        Ok(record)
    }

    /// The public key owning a namespace, checked against the namespace id.
    pub fn owner_key(&self, namespace_id: &str) -> Result<IssuerPublicKey> {
        let dir = self.namespace_dir(namespace_id)?;
        let raw = match fs::read(dir.join(OWNER_FILE)) {
            Ok(raw) => raw,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::NotFound(format!("namespace {namespace_id}")))
            }
            Err(e) => return Err(e.into()),
        };
        let bytes: [u8; 32] = raw
            .try_into()
            .map_err(|_| Error::Malformed("owner key file must be 32 bytes".into()))?;
        let key = IssuerPublicKey::from_bytes(&bytes)?;
        if key.issuer_id() != namespace_id {
            return Err(Error::InvalidRecordSignature(format!(
                "owner key does not digest to namespace {namespace_id}"
            )));
        }
        Ok(key)
    }

    /// Fetch a record and verify it against the namespace owner's key.
    pub fn resolve(&self, namespace_id: &str, label: &str) -> Result<NamespaceRecord> {
        if !valid_label(label) {
            return Err(Error::Malformed(format!("invalid label {label:?}")));
        }
        let owner = self.owner_key(namespace_id)?;
        let dir = self.namespace_dir(namespace_id)?;
        let raw = match fs::read(dir.join(label)) {
            Ok(raw) => raw,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::NotFound(format!("record {namespace_id}/{label}")))
            }
            Err(e) => return Err(e.into()),
        };
        let record = NamespaceRecord::decode(namespace_id, &raw)?;
        if record.label != label {
            return Err(Error::InvalidRecordSignature(format!(
                "record file {label} contains a record labelled {}",
                record.label
            )));
        }
        record.verify(&owner)?;
        Ok(record)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| {
        Error::Io(std::io::Error::other("record path has no parent directory"))
    })?;
    let tmp = dir.join(format!(
        ".tmp.{}.{}",
        std::process::id(),
        path.file_name().and_then(|n| n.to_str()).unwrap_or("record")
    ));
    fs::write(&tmp, bytes)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keypair() -> IssuerKeypair {
        IssuerKeypair::from_secret_bytes(&[77u8; 32])
    }

    #[test]
    fn publish_then_resolve_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let store = DirectoryStore::open(dir.path());
        let owner = keypair();

        let published = store
            .publish(&owner, "vk-v1", RecordKind::VerificationKey, b"key bytes")
            .unwrap();
        assert_eq!(published.namespace_id, owner.issuer_id());

        // A fresh store handle over the same root resolves it.
        let store2 = DirectoryStore::open(dir.path());
        let resolved = store2.resolve(&owner.issuer_id(), "vk-v1").unwrap();
        assert_eq!(resolved, published);
        assert_eq!(resolved.blob, b"key bytes");
        assert_eq!(resolved.kind, RecordKind::VerificationKey);

        // Republishing overwrites.
        store
            .publish(&owner, "vk-v1", RecordKind::VerificationKey, b"rotated")
            .unwrap();
        assert_eq!(store.resolve(&owner.issuer_id(), "vk-v1").unwrap().blob, b"rotated");
    }

    #[test]
    fn resolve_rejects_tampered_records() {
        let dir = tempfile::tempdir().unwrap();
        let store = DirectoryStore::open(dir.path());
        let owner = keypair();
        store
            .publish(&owner, "ctx", RecordKind::Context, b"claim context")
            .unwrap();

        let path = dir.path().join(owner.issuer_id()).join("ctx");
        let mut raw = fs::read(&path).unwrap();
        let flip_at = raw.len() - 70; // inside the blob
        raw[flip_at] ^= 0x20;
        fs::write(&path, &raw).unwrap();

        assert!(matches!(
            store.resolve(&owner.issuer_id(), "ctx"),
            Err(Error::InvalidRecordSignature(_))
        ));
    }

    #[test]
    fn resolve_rejects_forged_owner() {
        let dir = tempfile::tempdir().unwrap();
        let store = DirectoryStore::open(dir.path());
        let owner = keypair();
        store
            .publish(&owner, "ctx", RecordKind::Context, b"payload")
            .unwrap();

        // Swap the owner key for another valid key: the namespace binding
        // check must catch it even though the file parses.
        let impostor = IssuerKeypair::from_secret_bytes(&[78u8; 32]);
        let owner_path = dir.path().join(owner.issuer_id()).join(OWNER_FILE);
        fs::write(&owner_path, impostor.public().to_bytes()).unwrap();
        assert!(matches!(
            store.resolve(&owner.issuer_id(), "ctx"),
            Err(Error::InvalidRecordSignature(_))
        ));
    }

    #[test]
    fn publish_guards() {
        let dir = tempfile::tempdir().unwrap();
        let store = DirectoryStore::open(dir.path());
        let owner = keypair();

        assert!(matches!(
            store.publish(&owner, "big", RecordKind::Context, &vec![0u8; BLOB_CAP + 1]),
            Err(Error::OversizeBlob { .. })
        ));
        // The cap is inclusive.
        assert!(store
            .publish(&owner, "exactly", RecordKind::Context, &vec![0u8; BLOB_CAP])
            .is_ok());

        for label in ["", "_owner", "_hidden", "a/b", "..", "label with spaces"] {
            assert!(
                matches!(
                    store.publish(&owner, label, RecordKind::Context, b"x"),
                    Err(Error::Malformed(_))
                ),
                "label {label:?} should be rejected"
            );
        }

        // A namespace directory pre-bound to someone else's key refuses
        // publishes, even though the directory name matches the publisher.
        let hijacked = dir.path().join(owner.issuer_id());
        fs::create_dir_all(&hijacked).unwrap();
        let other = IssuerKeypair::from_secret_bytes(&[79u8; 32]);
        fs::write(hijacked.join(OWNER_FILE), other.public().to_bytes()).unwrap();
        assert!(matches!(
            store.publish(&owner, "ctx", RecordKind::Context, b"x"),
            Err(Error::KeyMismatch(_))
        ));
    }

    #[test]
    fn resolve_not_found_and_bad_names() {
        let dir = tempfile::tempdir().unwrap();
        let store = DirectoryStore::open(dir.path());
        let owner = keypair();

        assert!(matches!(
            store.resolve(&owner.issuer_id(), "nothing"),
            Err(Error::NotFound(_))
        ));
        store
            .publish(&owner, "here", RecordKind::Schema, b"{}")
            .unwrap();
        assert!(matches!(
            store.resolve(&owner.issuer_id(), "absent"),
            Err(Error::NotFound(_))
        ));
        assert!(store.resolve("zz", "here").is_err());
        assert!(store.resolve(&owner.issuer_id(), "../escape").is_err());
    }

    #[test]
    fn record_codec_round_trips_and_rejects() {
        let owner = keypair();
        let ns = owner.issuer_id();
        let record = NamespaceRecord {
            namespace_id: ns.clone(),
            label: "schema.v2".into(),
            kind: RecordKind::Schema,
            blob: vec![1, 2, 3, 250],
            signature: [9u8; 64],
        };
        let bytes = record.encode();
        let back = NamespaceRecord::decode(&ns, &bytes).unwrap();
        assert_eq!(back, record);
        assert_eq!(back.encode(), bytes);

        let mut bad = bytes.clone();
        bad[0] = b'A';
        assert!(NamespaceRecord::decode(&ns, &bad).is_err());

        let mut bad = bytes.clone();
        bad[4] = 3; // version
        assert!(NamespaceRecord::decode(&ns, &bad).is_err());

        let mut bad = bytes.clone();
        bad[5] = 200; // kind
        assert!(NamespaceRecord::decode(&ns, &bad).is_err());

        assert!(NamespaceRecord::decode(&ns, &bytes[..bytes.len() - 1]).is_err());

        let mut trailing = bytes.clone();
        trailing.push(0);
        assert!(NamespaceRecord::decode(&ns, &trailing).is_err());

        // Kind ids are pinned.
        assert_eq!(RecordKind::Descriptor.id(), 0);
        assert_eq!(RecordKind::VerificationKey.id(), 1);
        assert_eq!(RecordKind::Context.id(), 2);
        assert_eq!(RecordKind::Schema.id(), 3);
        assert!(RecordKind::from_id(4).is_err());
    }
}
