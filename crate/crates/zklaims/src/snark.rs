//! Proof-system adapter: Groth16 over BN254.
//!
//! Keys and proofs are wrapped in typed containers that remember the circuit
//! shape they belong to, so a key for the wrong payload count is rejected
//! before any pairing work happens. Key files carry a small header followed
//! by the backend's canonical compressed encoding; the decoders bound every
//! length field against the remaining input, so a corrupt file fails with a
//! parse error instead of a giant allocation.

use crate::circuit::{
    check_satisfaction_raw, ConstraintSystemDescriptor, HashAlgorithm, WitnessAssignment,
    ZklaimCircuit,
};
use crate::encoding::{PublicInput, MAX_PAYLOADS, MIN_PAYLOADS};
use crate::error::{Error, Result};
use ark_bn254::{Bn254, G1Affine, G2Affine};
use ark_ec::AffineRepr;
use ark_groth16::Groth16;
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize, Compress, Validate};
use ark_snark::SNARK;
use rand::rngs::OsRng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const PK_MAGIC: &[u8; 4] = b"ZKPK";
const VK_MAGIC: &[u8; 4] = b"ZKVK";
const KEY_VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 2 + 1;
const FLAG_SEEDED: u8 = 0b0000_0001;

/// Compressed Groth16 proof size on BN254: one G1 + one G2 + one G1 point.
pub const PROOF_BYTES: usize = 128;

fn g1_size() -> usize {
    G1Affine::generator().compressed_size()
}

fn g2_size() -> usize {
    G2Affine::generator().compressed_size()
}

fn write_header(out: &mut Vec<u8>, magic: &[u8; 4], hash: HashAlgorithm, count: u16, seeded: bool) {
    out.extend_from_slice(magic);
    out.push(KEY_VERSION);
    out.push(hash.id());
    out.extend_from_slice(&count.to_le_bytes());
    out.push(if seeded { FLAG_SEEDED } else { 0 });
}

fn read_header<'a>(
    bytes: &'a [u8],
    magic: &[u8; 4],
    what: &str,
) -> Result<(HashAlgorithm, u16, bool, &'a [u8])> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Parse(format!("{what} truncated before header end")));
    }
    if &bytes[..4] != magic {
        return Err(Error::Parse(format!("bad {what} magic")));
    }
    if bytes[4] != KEY_VERSION {
        return Err(Error::Parse(format!(
            "unsupported {what} version {}",
            bytes[4]
        )));
    }
    let hash = HashAlgorithm::from_id(bytes[5])?;
    let count = u16::from_le_bytes(bytes[6..8].try_into().unwrap());
    if !(MIN_PAYLOADS..=MAX_PAYLOADS).contains(&count) {
        return Err(Error::Range(format!(
            "{what} payload count {count} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
        )));
    }
    let flags = bytes[8];
    if flags & !FLAG_SEEDED != 0 {
        return Err(Error::Parse(format!("unknown {what} flag bits {flags:#04x}")));
    }
    Ok((hash, count, flags & FLAG_SEEDED != 0, &bytes[HEADER_LEN..]))
}

fn read_point<P: CanonicalDeserialize>(
    reader: &mut &[u8],
    validate: Validate,
    what: &str,
) -> Result<P> {
    P::deserialize_with_mode(reader, Compress::Yes, validate)
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Read a `u64`-length-prefixed point vector, refusing any length claim the
/// remaining bytes cannot possibly back.
fn read_point_vec<P: CanonicalDeserialize>(
    reader: &mut &[u8],
    min_element: usize,
    validate: Validate,
    what: &str,
) -> Result<Vec<P>> {
    if reader.len() < 8 {
        return Err(Error::Parse(format!("{what}: truncated length prefix")));
    }
    let len = u64::from_le_bytes(reader[..8].try_into().unwrap());
    *reader = &reader[8..];
    let max = (reader.len() / min_element) as u64;
    if len > max {
        return Err(Error::Parse(format!(
            "{what}: claims {len} elements but at most {max} fit the remaining bytes"
        )));
    }
    let mut out = Vec::with_capacity(len as usize);
    for i in 0..len {
        out.push(read_point(reader, validate, &format!("{what}[{i}]"))?);
    }
    Ok(out)
}

fn expect_consumed(reader: &[u8], what: &str) -> Result<()> {
    if reader.is_empty() {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "{what}: {} trailing bytes after encoded data",
            reader.len()
        )))
    }
}

fn read_vk_body(reader: &mut &[u8], validate: Validate) -> Result<ark_groth16::VerifyingKey<Bn254>> {
    let alpha_g1 = read_point(reader, validate, "vk.alpha_g1")?;
    let beta_g2 = read_point(reader, validate, "vk.beta_g2")?;
    let gamma_g2 = read_point(reader, validate, "vk.gamma_g2")?;
    let delta_g2 = read_point(reader, validate, "vk.delta_g2")?;
    let gamma_abc_g1 = read_point_vec(reader, g1_size(), validate, "vk.gamma_abc_g1")?;
    Ok(ark_groth16::VerifyingKey {
        alpha_g1,
        beta_g2,
        gamma_g2,
        delta_g2,
        gamma_abc_g1,
    })
}

/// Groth16 proving key bound to a circuit shape.
#[derive(Clone, Debug, PartialEq)]
pub struct ProvingKey {
    hash: HashAlgorithm,
    payload_count: u16,
    seeded: bool,
    pub(crate) inner: ark_groth16::ProvingKey<Bn254>,
}

/// Groth16 verification key bound to a circuit shape.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationKey {
    hash: HashAlgorithm,
    payload_count: u16,
    seeded: bool,
    pub(crate) inner: ark_groth16::VerifyingKey<Bn254>,
}

/// A succinct proof; constant [`PROOF_BYTES`] bytes regardless of circuit size.
#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub(crate) inner: ark_groth16::Proof<Bn254>,
}

impl ProvingKey {
    #[cfg(any(test, feature = "testkit"))]
    pub(crate) fn from_parts_unchecked(
        hash: HashAlgorithm,
        payload_count: u16,
        seeded: bool,
        inner: ark_groth16::ProvingKey<Bn254>,
    ) -> Self {
        Self {
            hash,
            payload_count,
            seeded,
            inner,
        }
    }

    pub fn hash(&self) -> HashAlgorithm {
        self.hash
    }

    pub fn payload_count(&self) -> u16 {
        self.payload_count
    }

    /// True when the key came from a deterministic seed and must not be
    /// trusted outside tests.
    pub fn seeded(&self) -> bool {
        self.seeded
    }

    /// The verification key embedded in this proving key.
    pub fn verification_key(&self) -> VerificationKey {
        VerificationKey {
            hash: self.hash,
            payload_count: self.payload_count,
            seeded: self.seeded,
            inner: self.inner.vk.clone(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.inner.compressed_size());
        write_header(&mut out, PK_MAGIC, self.hash, self.payload_count, self.seeded);
        self.inner
            .serialize_compressed(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    /// Parse a proving key. Points are not subgroup-checked: the proving key
    /// is the prover's own local material, and checking its hundreds of
    /// thousands of points would dwarf proving itself.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (hash, payload_count, seeded, body) = read_header(bytes, PK_MAGIC, "proving key")?;
        let mut r = body;
        let vk = read_vk_body(&mut r, Validate::No)?;
        let beta_g1 = read_point(&mut r, Validate::No, "pk.beta_g1")?;
        let delta_g1 = read_point(&mut r, Validate::No, "pk.delta_g1")?;
        let a_query = read_point_vec(&mut r, g1_size(), Validate::No, "pk.a_query")?;
        let b_g1_query = read_point_vec(&mut r, g1_size(), Validate::No, "pk.b_g1_query")?;
        let b_g2_query = read_point_vec(&mut r, g2_size(), Validate::No, "pk.b_g2_query")?;
        let h_query = read_point_vec(&mut r, g1_size(), Validate::No, "pk.h_query")?;
        let l_query = read_point_vec(&mut r, g1_size(), Validate::No, "pk.l_query")?;
        expect_consumed(r, "proving key")?;
        Ok(Self {
            hash,
            payload_count,
            seeded,
            inner: ark_groth16::ProvingKey {
                vk,
                beta_g1,
                delta_g1,
                a_query,
                b_g1_query,
                b_g2_query,
                h_query,
                l_query,
            },
        })
    }
}

impl VerificationKey {
    #[cfg(any(test, feature = "testkit"))]
    pub(crate) fn from_parts_unchecked(
        hash: HashAlgorithm,
        payload_count: u16,
        seeded: bool,
        inner: ark_groth16::VerifyingKey<Bn254>,
    ) -> Self {
        Self {
            hash,
            payload_count,
            seeded,
            inner,
        }
    }

    pub fn hash(&self) -> HashAlgorithm {
        self.hash
    }

    pub fn payload_count(&self) -> u16 {
        self.payload_count
    }

    pub fn seeded(&self) -> bool {
        self.seeded
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.inner.compressed_size());
        write_header(&mut out, VK_MAGIC, self.hash, self.payload_count, self.seeded);
        self.inner
            .serialize_compressed(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    /// Parse a verification key with full point validation; verification
    /// keys arrive from directories and peers, never trust their points.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (hash, payload_count, seeded, body) = read_header(bytes, VK_MAGIC, "verification key")?;
        let mut r = body;
        let inner = read_vk_body(&mut r, Validate::Yes)?;
        expect_consumed(r, "verification key")?;
        let expected = crate::encoding::ELEMENTS_PER_PAYLOAD * payload_count as usize + 1;
        if inner.gamma_abc_g1.len() != expected {
            return Err(Error::Malformed(format!(
                "verification key carries {} input points, {payload_count} payloads need {expected}",
                inner.gamma_abc_g1.len()
            )));
        }
        Ok(Self {
            hash,
            payload_count,
            seeded,
            inner,
        })
    }
}

impl Proof {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(PROOF_BYTES);
        self.inner
            .serialize_compressed(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != PROOF_BYTES {
            return Err(Error::Parse(format!(
                "proof must be exactly {PROOF_BYTES} bytes, got {}",
                bytes.len()
            )));
        }
        let inner = ark_groth16::Proof::deserialize_compressed(bytes)
            .map_err(|e| Error::Parse(format!("proof: {e}")))?;
        Ok(Self { inner })
    }
}

/// Run the trusted setup for the circuit described by `descriptor`.
///
/// With `seed = Some(..)` the sampling is deterministic (ChaCha20 keyed by
/// the seed) and the keys are marked as seeded: anyone knowing the seed can
/// forge proofs, so seeded keys are strictly test material. With `None`,
/// randomness comes from the operating system.
pub fn setup(
    descriptor: &ConstraintSystemDescriptor,
    seed: Option<[u8; 32]>,
) -> Result<(ProvingKey, VerificationKey)> {
    let circuit = ZklaimCircuit::blank(descriptor.payload_count(), descriptor.hash());
    let keys = match seed {
        Some(seed) => {
            Groth16::<Bn254>::circuit_specific_setup(circuit, &mut ChaCha20Rng::from_seed(seed))
        }
        None => Groth16::<Bn254>::circuit_specific_setup(circuit, &mut OsRng),
    };
    let (pk, vk) = keys.map_err(|e| Error::Backend(format!("setup: {e}")))?;
    let seeded = seed.is_some();
    Ok((
        ProvingKey {
            hash: descriptor.hash(),
            payload_count: descriptor.payload_count(),
            seeded,
            inner: pk,
        },
        VerificationKey {
            hash: descriptor.hash(),
            payload_count: descriptor.payload_count(),
            seeded,
            inner: vk,
        },
    ))
}

/// Produce a proof for `witness` against `public`.
///
/// The assignment is first evaluated natively against every constraint;
/// an unsatisfied system aborts with [`Error::UnsatisfiedConstraints`]
/// naming the first failing constraint instead of yielding a proof that
/// can never verify.
pub fn prove(pk: &ProvingKey, witness: &WitnessAssignment, public: &PublicInput) -> Result<Proof> {
    if witness.payload_count() != pk.payload_count as usize
        || public.payload_count() != pk.payload_count as usize
    {
        return Err(Error::KeyMismatch(format!(
            "proving key is for {} payloads, witness has {}, public input has {}",
            pk.payload_count,
            witness.payload_count(),
            public.payload_count()
        )));
    }
    let report = check_satisfaction_raw(pk.payload_count, pk.hash, witness, public)?;
    if !report.satisfied {
        return Err(Error::UnsatisfiedConstraints(
            report
                .first_unsatisfied
                .unwrap_or_else(|| "unknown".into()),
        ));
    }
    let circuit =
        ZklaimCircuit::with_assignment_raw(pk.payload_count, pk.hash, witness.clone(), public.clone());
    let proof = Groth16::<Bn254>::prove(&pk.inner, circuit, &mut OsRng)
        .map_err(|e| Error::Backend(format!("prove: {e}")))?;
    Ok(Proof { inner: proof })
}

/// Check a proof against a public input. `Ok(false)` means the pairing
/// check failed; errors are reserved for shape mismatches and backend
/// failures.
pub fn verify(vk: &VerificationKey, proof: &Proof, public: &PublicInput) -> Result<bool> {
    let elements = public.field_elements();
    if elements.len() + 1 != vk.inner.gamma_abc_g1.len()
        || public.payload_count() != vk.payload_count as usize
    {
        return Err(Error::Shape(format!(
            "verification key expects {} public elements for {} payloads, instance has {} for {}",
            vk.inner.gamma_abc_g1.len() - 1,
            vk.payload_count,
            elements.len(),
            public.payload_count()
        )));
    }
    Groth16::<Bn254>::verify(&vk.inner, &elements, &proof.inner)
        .map_err(|e| Error::Backend(format!("verify: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_assignment, build_constraint_system};
    use crate::encoding::{
        assemble_public_input, pack_payload, AttributeValue, PayloadDigest, PredicateMask,
        PublicInput, ReferenceValue,
    };
    use sha2::{Digest, Sha256};

    fn descriptor() -> ConstraintSystemDescriptor {
        build_constraint_system(1, HashAlgorithm::Sha256).unwrap()
    }

    fn witness_and_public(
        slots: &[u64; 5],
        masks: [u8; 5],
        refs: &[u64; 5],
    ) -> (WitnessAssignment, PublicInput) {
        let attrs: Vec<AttributeValue> = slots
            .iter()
            .map(|&v| AttributeValue::new(v).unwrap())
            .collect();
        let references: Vec<ReferenceValue> = refs
            .iter()
            .map(|&v| ReferenceValue::new(v).unwrap())
            .collect();
        let witness = build_assignment(&attrs, &references).unwrap();
        let packed = pack_payload(slots).unwrap().packed();
        let public = assemble_public_input(
            vec![PayloadDigest(Sha256::digest(packed).into())],
            masks
                .iter()
                .map(|&b| PredicateMask::new(b).unwrap())
                .collect(),
            references,
        )
        .unwrap();
        (witness, public)
    }

    #[test]
    fn seeded_setup_is_deterministic() {
        let d = descriptor();
        let (pk1, vk1) = setup(&d, Some([7u8; 32])).unwrap();
        let (pk2, vk2) = setup(&d, Some([7u8; 32])).unwrap();
        assert_eq!(pk1.to_bytes(), pk2.to_bytes());
        assert_eq!(vk1.to_bytes(), vk2.to_bytes());
        assert!(pk1.seeded() && vk1.seeded());

        let (_, vk3) = setup(&d, Some([8u8; 32])).unwrap();
        assert_ne!(vk1.to_bytes(), vk3.to_bytes());
    }

    #[test]
    fn prove_verify_round_trip_and_tamper() {
        let d = descriptor();
        let (pk, vk) = setup(&d, Some([1u8; 32])).unwrap();
        let slots = [21, 5, 0, 1, 77];
        let refs = [18, 5, 1, 0, 0];
        let masks = [0b100, 0b010, 0b001, 0b100, 0b111];
        let (witness, public) = witness_and_public(&slots, masks, &refs);

        let proof = prove(&pk, &witness, &public).unwrap();
        assert_eq!(proof.to_bytes().len(), PROOF_BYTES);
        assert!(verify(&vk, &proof, &public).unwrap());

        // Same sizes, different instance: verification must fail cleanly.
        let mut wrong_refs = refs;
        wrong_refs[0] = 25;
        let (_, wrong_public) = witness_and_public(&slots, masks, &wrong_refs);
        assert!(!verify(&vk, &proof, &wrong_public).unwrap());

        // vk derived from pk behaves identically.
        let vk2 = pk.verification_key();
        assert_eq!(vk.to_bytes(), vk2.to_bytes());
        assert!(verify(&vk2, &proof, &public).unwrap());
    }

    #[test]
    fn prove_refuses_unsatisfied_assignment() {
        let d = descriptor();
        let (pk, _) = setup(&d, Some([2u8; 32])).unwrap();
        let slots = [21, 5, 0, 1, 77];
        let refs = [30, 0, 0, 0, 0];
        // Slot 0 claims "> 30" but the attribute is 21.
        let masks = [0b100, 0b111, 0b111, 0b111, 0b111];
        let (witness, public) = witness_and_public(&slots, masks, &refs);
        let err = prove(&pk, &witness, &public).unwrap_err();
        assert!(matches!(err, Error::UnsatisfiedConstraints(_)), "got {err:?}");
    }

    #[test]
    fn key_serialization_round_trips() {
        let d = descriptor();
        let (pk, vk) = setup(&d, Some([3u8; 32])).unwrap();

        let pk_bytes = pk.to_bytes();
        let pk_back = ProvingKey::from_bytes(&pk_bytes).unwrap();
        assert_eq!(pk_back.to_bytes(), pk_bytes);
        assert_eq!(pk_back.payload_count(), 1);
        assert!(pk_back.seeded());

        let vk_bytes = vk.to_bytes();
        let vk_back = VerificationKey::from_bytes(&vk_bytes).unwrap();
        assert_eq!(vk_back.to_bytes(), vk_bytes);
    }

    #[test]
    fn decoders_reject_malformed_inputs() {
        let d = descriptor();
        let (pk, vk) = setup(&d, Some([4u8; 32])).unwrap();
        let vk_bytes = vk.to_bytes();

        let mut bad = vk_bytes.clone();
        bad[0] = b'Q';
        assert!(VerificationKey::from_bytes(&bad).is_err());

        let mut bad = vk_bytes.clone();
        bad[8] = 0b1000_0000; // unknown flag bit
        assert!(VerificationKey::from_bytes(&bad).is_err());

        assert!(VerificationKey::from_bytes(&vk_bytes[..40]).is_err());

        let mut trailing = vk_bytes.clone();
        trailing.push(0);
        assert!(VerificationKey::from_bytes(&trailing).is_err());

        // An absurd vector length must be rejected up front, not allocated.
        // gamma_abc_g1's length prefix sits after the header, one G1 and
        // three G2 points.
        let len_at = HEADER_LEN + g1_size() + 3 * g2_size();
        let mut bad = vk_bytes.clone();
        bad[len_at..len_at + 8].copy_from_slice(&u64::MAX.to_le_bytes());
        let err = VerificationKey::from_bytes(&bad).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "got {err:?}");

        let pk_bytes = pk.to_bytes();
        let mut bad = pk_bytes.clone();
        bad[3] = b'V';
        assert!(ProvingKey::from_bytes(&bad).is_err());
        assert!(ProvingKey::from_bytes(&pk_bytes[..100]).is_err());

        assert!(Proof::from_bytes(&[0u8; 12]).is_err());
        assert!(Proof::from_bytes(&[0u8; PROOF_BYTES + 1]).is_err());
    }
}
