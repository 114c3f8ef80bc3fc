//! Privacy-preserving attribute credentials with non-interactive zkSNARK
//! predicate proofs.
//!
//! An **issuer** packs a holder's attributes (50-bit values, five per
//! 256-bit payload) into hashed payloads and signs the digests. The
//! **holder** later proves comparison predicates — `age >= 18`,
//! `zip = 10115` — about those attributes by producing a Groth16 proof
//! that the hash preimages satisfy the predicates, without revealing any
//! attribute value. A **verifier** checks the issuer signature, the
//! statement semantics and the proof entirely offline; no interaction
//! with the issuer or holder is needed once the claim context exists.
//!
//! ```no_run
//! use std::collections::BTreeMap;
//! use zklaims::issuer::{self, CredentialSchema, IssuerKeypair};
//! use zklaims::prover::{create_context, Statement};
//! use zklaims::verifier::verify_context;
//!
//! # fn main() -> zklaims::Result<()> {
//! let keypair = IssuerKeypair::generate();
//! let schema = CredentialSchema::new(
//!     "example/person",
//!     keypair.issuer_id(),
//!     1,
//!     vec!["age".into(), "zip".into(), "a".into(), "b".into()],
//! )?;
//! let (_descriptor, pk, vk) = issuer::bootstrap_issuer(&schema, None)?;
//!
//! let mut values = BTreeMap::new();
//! values.insert("age".to_string(), 41);
//! values.insert("zip".to_string(), 10115);
//! values.insert("a".to_string(), 0);
//! values.insert("b".to_string(), 0);
//! let credential = issuer::issue_credential(&keypair, &schema, &values)?;
//!
//! let statement = Statement::parse("age >= 18", &schema)?;
//! let context = create_context(&pk, &credential, &statement)?;
//!
//! let report = verify_context(&vk, &keypair.public(), &context, &statement)?;
//! assert!(report.overall());
//! # Ok(())
//! # }
//! ```
//!
//! Module map: [`encoding`] owns the bit-level layout shared by native code
//! and the circuit; [`circuit`] builds the constraint system; [`snark`]
//! wraps the proof backend and the key formats; [`issuer`], [`prover`] and
//! [`verifier`] implement the three roles; [`directory`] is a signed
//! record store for exchanging keys and contexts; [`bench`] measures
//! scaling behaviour.

pub mod bench;
pub mod circuit;
pub mod directory;
pub mod encoding;
mod error;
pub mod issuer;
pub mod prover;
pub mod snark;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod verifier;

pub use error::{Error, Result};

pub use circuit::ConstraintSystemDescriptor;
pub use directory::DirectoryStore;
pub use issuer::{Credential, CredentialSchema, IssuerKeypair, IssuerPublicKey};
pub use prover::{Statement, ZklaimsContext};
pub use snark::{Proof, ProvingKey, VerificationKey};
pub use verifier::VerificationReport;
