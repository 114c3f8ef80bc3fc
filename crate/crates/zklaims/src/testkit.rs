//! Structurally-random instance generators for round-trip tests, fuzz
//! corpus seeding and serialization audits.
//!
//! Everything here is *shape-valid but cryptographically meaningless*:
//! random curve points instead of real key material, random bytes instead
//! of real signatures. That is exactly what format tests want — exercising
//! parsers over the full value space costs microseconds per instance,
//! where a real trusted setup would cost seconds.

use crate::circuit::{ConstraintSystemDescriptor, HashAlgorithm};
use crate::directory::{NamespaceRecord, RecordKind};
use crate::encoding::{
    assemble_public_input, AttributeValue, PayloadDigest, PredicateMask, PublicInput,
    ReferenceValue, MAX_ATTRIBUTE, SLOTS_PER_PAYLOAD,
};
use crate::issuer::{compute_digests, Credential, CredentialSchema, CredentialSignature};
use crate::prover::{Statement, ZklaimsContext};
use crate::snark::{Proof, ProvingKey, VerificationKey};
use ark_bn254::{G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::CurveGroup;
use ark_std::UniformRand;
use rand::{CryptoRng, Rng, RngCore};

fn hex_id<R: RngCore>(rng: &mut R) -> String {
    let mut raw = [0u8; 32];
    rng.fill_bytes(&mut raw);
    hex::encode(raw)
}

fn g1<R: RngCore>(rng: &mut R) -> G1Affine {
    G1Projective::rand(rng).into_affine()
}

fn g2<R: RngCore>(rng: &mut R) -> G2Affine {
    G2Projective::rand(rng).into_affine()
}

pub fn random_payload_count<R: RngCore>(rng: &mut R) -> u16 {
    rng.gen_range(1..=4)
}

pub fn random_schema<R: RngCore>(rng: &mut R, payload_count: u16) -> CredentialSchema {
    let labels = (0..payload_count as usize * SLOTS_PER_PAYLOAD - 1)
        .map(|i| format!("field{i}-{}", rng.gen_range(0..1000)))
        .collect();
    CredentialSchema::new(
        format!("test.schema/{}", rng.gen_range(0..u32::MAX)),
        hex_id(rng),
        payload_count,
        labels,
    )
    .expect("generated schema is valid")
}

pub fn random_signature<R: RngCore>(rng: &mut R) -> CredentialSignature {
    let mut raw = [0u8; 64];
    rng.fill_bytes(&mut raw);
    CredentialSignature(raw)
}

/// A credential whose digests are consistent with its attributes but whose
/// signature is random bytes.
pub fn random_credential<R: RngCore>(rng: &mut R, payload_count: u16) -> Credential {
    let attributes: Vec<AttributeValue> = (0..payload_count as usize * SLOTS_PER_PAYLOAD)
        .map(|_| AttributeValue::new(rng.gen_range(0..=MAX_ATTRIBUTE)).unwrap())
        .collect();
    let digests = compute_digests(&attributes).expect("shape is valid");
    Credential::from_parts_unchecked(
        format!("test.schema/{}", rng.gen_range(0..u32::MAX)),
        hex_id(rng),
        attributes,
        digests,
        random_signature(rng),
    )
}

/// Assemble a credential from explicit parts, skipping issuance checks.
/// For tests that need full control over attribute values and signatures.
pub fn credential_from_parts(
    schema_id: impl Into<String>,
    issuer_id: impl Into<String>,
    attributes: Vec<AttributeValue>,
    payload_digests: Vec<PayloadDigest>,
    signature: CredentialSignature,
) -> Credential {
    Credential::from_parts_unchecked(
        schema_id.into(),
        issuer_id.into(),
        attributes,
        payload_digests,
        signature,
    )
}

/// A statement with random predicates; the nonce slot stays NOOP so the
/// result could also have come from the parser.
pub fn random_statement<R: RngCore>(rng: &mut R, slot_count: usize) -> Statement {
    let mut masks: Vec<PredicateMask> = (0..slot_count)
        .map(|_| PredicateMask::new(rng.gen_range(1..=7)).unwrap())
        .collect();
    masks[slot_count - 1] = PredicateMask::noop();
    let references = (0..slot_count)
        .map(|_| ReferenceValue::new(rng.gen_range(0..=MAX_ATTRIBUTE)).unwrap())
        .collect();
    Statement::from_parts(masks, references).expect("generated statement is valid")
}

pub fn random_public_input<R: RngCore>(rng: &mut R, payload_count: u16) -> PublicInput {
    let m = payload_count as usize;
    let digests = (0..m)
        .map(|_| {
            let mut raw = [0u8; 32];
            rng.fill_bytes(&mut raw);
            PayloadDigest(raw)
        })
        .collect();
    let masks = (0..m * SLOTS_PER_PAYLOAD)
        .map(|_| PredicateMask::new(rng.gen_range(1..=7)).unwrap())
        .collect();
    let references = (0..m * SLOTS_PER_PAYLOAD)
        .map(|_| ReferenceValue::new(rng.gen_range(0..=MAX_ATTRIBUTE)).unwrap())
        .collect();
    assemble_public_input(digests, masks, references).expect("generated input is valid")
}

pub fn random_proof<R: RngCore + CryptoRng>(rng: &mut R) -> Proof {
    Proof {
        inner: ark_groth16::Proof {
            a: g1(rng),
            b: g2(rng),
            c: g1(rng),
        },
    }
}

pub fn random_context<R: RngCore + CryptoRng>(rng: &mut R, payload_count: u16) -> ZklaimsContext {
    ZklaimsContext::from_parts(
        format!("test.schema/{}", rng.gen_range(0..u32::MAX)),
        hex_id(rng),
        random_proof(rng),
        random_public_input(rng, payload_count),
        random_signature(rng),
    )
}

pub fn random_descriptor<R: RngCore>(rng: &mut R) -> ConstraintSystemDescriptor {
    ConstraintSystemDescriptor::from_parts(
        rng.gen_range(1..=64),
        HashAlgorithm::Sha256,
        rng.gen_range(10_000..10_000_000),
    )
}

fn random_vk_inner<R: RngCore + CryptoRng>(
    rng: &mut R,
    payload_count: u16,
) -> ark_groth16::VerifyingKey<ark_bn254::Bn254> {
    let arity = crate::encoding::ELEMENTS_PER_PAYLOAD * payload_count as usize;
    ark_groth16::VerifyingKey {
        alpha_g1: g1(rng),
        beta_g2: g2(rng),
        gamma_g2: g2(rng),
        delta_g2: g2(rng),
        gamma_abc_g1: (0..=arity).map(|_| g1(rng)).collect(),
    }
}

pub fn random_verification_key<R: RngCore + CryptoRng>(
    rng: &mut R,
    payload_count: u16,
) -> VerificationKey {
    VerificationKey::from_parts_unchecked(
        HashAlgorithm::Sha256,
        payload_count,
        rng.gen_bool(0.5),
        random_vk_inner(rng, payload_count),
    )
}

/// A proving key with deliberately tiny query vectors. The file format
/// carries explicit lengths, so nothing requires them to match a real
/// circuit's dimensions.
pub fn random_proving_key<R: RngCore + CryptoRng>(
    rng: &mut R,
    payload_count: u16,
) -> ProvingKey {
    let vec_len = rng.gen_range(0..4usize);
    ProvingKey::from_parts_unchecked(
        HashAlgorithm::Sha256,
        payload_count,
        rng.gen_bool(0.5),
        ark_groth16::ProvingKey {
            vk: random_vk_inner(rng, payload_count),
            beta_g1: g1(rng),
            delta_g1: g1(rng),
            a_query: (0..vec_len).map(|_| g1(rng)).collect(),
            b_g1_query: (0..vec_len).map(|_| g1(rng)).collect(),
            b_g2_query: (0..vec_len).map(|_| g2(rng)).collect(),
            h_query: (0..vec_len).map(|_| g1(rng)).collect(),
            l_query: (0..vec_len).map(|_| g1(rng)).collect(),
        },
    )
}

pub fn random_record<R: RngCore>(rng: &mut R) -> NamespaceRecord {
    let kinds = [
        RecordKind::Descriptor,
        RecordKind::VerificationKey,
        RecordKind::Context,
        RecordKind::Schema,
    ];
    let mut blob = vec![0u8; rng.gen_range(0..512)];
    rng.fill_bytes(&mut blob);
    let mut signature = [0u8; 64];
    rng.fill_bytes(&mut signature);
    NamespaceRecord {
        namespace_id: hex_id(rng),
        label: format!("record-{}", rng.gen_range(0..10_000)),
        kind: kinds[rng.gen_range(0..kinds.len())],
        blob,
        signature,
    }
}
