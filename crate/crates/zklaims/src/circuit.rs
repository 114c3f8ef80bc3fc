//! The claim circuit: SHA-256 hash binding plus per-slot predicate
//! comparisons over the packed attribute payloads.
//!
//! For each payload the circuit recomputes the digest of the witnessed
//! 256-bit preimage inside the constraint system and binds it to the public
//! digest halves. For each 50-bit slot it derives the comparison outcome
//! (`lt`, `eq`, `gt`) against the public reference value through a 51-bit
//! borrow decomposition and an is-zero check, then requires the public
//! predicate mask to accept that outcome. Satisfiability therefore holds
//! exactly when every digest matches and every predicate evaluates true.

use crate::encoding::{
    self, evaluate_predicate, AttributeValue, PredicateMask, PublicInput, ReferenceValue, Scalar,
    ATTRIBUTE_BITS, MAX_PAYLOADS, MIN_PAYLOADS, SLOTS_PER_PAYLOAD,
};
use crate::error::{Error, Result};
use crate::issuer::Credential;
use crate::prover::Statement;
use ark_crypto_primitives::crh::sha256::constraints::Sha256Gadget;
use ark_r1cs_std::boolean::Boolean;
use ark_r1cs_std::convert::ToBitsGadget;
use ark_r1cs_std::eq::EqGadget;
use ark_r1cs_std::fields::fp::FpVar;
use ark_r1cs_std::fields::FieldVar;
use ark_r1cs_std::prelude::AllocVar;
use ark_r1cs_std::uint8::UInt8;
use ark_relations::r1cs::{
    ConstraintSynthesizer, ConstraintSystem, ConstraintSystemRef, OptimizationGoal,
    SynthesisError, SynthesisMode,
};

/// Hash algorithms the circuit can bind payloads with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HashAlgorithm {
    Sha256,
}

impl HashAlgorithm {
    pub fn id(self) -> u8 {
        match self {
            HashAlgorithm::Sha256 => 1,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(HashAlgorithm::Sha256),
            other => Err(Error::UnsupportedHash(other)),
        }
    }
}

const DESCRIPTOR_MAGIC: &[u8; 4] = b"ZKCS";
const DESCRIPTOR_VERSION: u8 = 1;
const DESCRIPTOR_LEN: usize = 4 + 1 + 1 + 2 + 8 + 4;

/// Shape summary of a generated constraint system. The descriptor is what
/// issuers publish so that provers and verifiers can agree on the circuit
/// before any key material changes hands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystemDescriptor {
    payload_count: u16,
    hash: HashAlgorithm,
    constraint_count: u64,
    public_input_arity: u32,
}

impl ConstraintSystemDescriptor {
    pub fn payload_count(&self) -> u16 {
        self.payload_count
    }

    pub fn hash(&self) -> HashAlgorithm {
        self.hash
    }

    pub fn constraint_count(&self) -> u64 {
        self.constraint_count
    }

    pub fn public_input_arity(&self) -> u32 {
        self.public_input_arity
    }

    pub fn slot_count(&self) -> usize {
        self.payload_count as usize * SLOTS_PER_PAYLOAD
    }

    /// Assemble a descriptor from already-known counts, without running a
    /// synthesis. The arity is derived from the payload count.
    #[cfg(any(test, feature = "testkit"))]
    pub(crate) fn from_parts(payload_count: u16, hash: HashAlgorithm, constraint_count: u64) -> Self {
        Self {
            payload_count,
            hash,
            constraint_count,
            public_input_arity: encoding::ELEMENTS_PER_PAYLOAD as u32 * u32::from(payload_count),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(DESCRIPTOR_LEN);
        out.extend_from_slice(DESCRIPTOR_MAGIC);
        out.push(DESCRIPTOR_VERSION);
        out.push(self.hash.id());
        out.extend_from_slice(&self.payload_count.to_le_bytes());
        out.extend_from_slice(&self.constraint_count.to_le_bytes());
        out.extend_from_slice(&self.public_input_arity.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != DESCRIPTOR_LEN {
            return Err(Error::Parse(format!(
                "descriptor must be {DESCRIPTOR_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        if &bytes[..4] != DESCRIPTOR_MAGIC {
            return Err(Error::Parse("bad descriptor magic".into()));
        }
        if bytes[4] != DESCRIPTOR_VERSION {
            return Err(Error::Parse(format!(
                "unsupported descriptor version {}",
                bytes[4]
            )));
        }
        let hash = HashAlgorithm::from_id(bytes[5])?;
        let payload_count = u16::from_le_bytes(bytes[6..8].try_into().unwrap());
        if !(MIN_PAYLOADS..=MAX_PAYLOADS).contains(&payload_count) {
            return Err(Error::Range(format!(
                "payload count {payload_count} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
            )));
        }
        let constraint_count = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let public_input_arity = u32::from_le_bytes(bytes[16..20].try_into().unwrap());
        let expected_arity = encoding::ELEMENTS_PER_PAYLOAD as u32 * u32::from(payload_count);
        if public_input_arity != expected_arity {
            return Err(Error::Malformed(format!(
                "descriptor arity {public_input_arity} does not match payload count \
                 (expected {expected_arity})"
            )));
        }
        Ok(Self {
            payload_count,
            hash,
            constraint_count,
            public_input_arity,
        })
    }
}

/// Generate the constraint system for `payload_count` payloads and report
/// its shape. Runs a setup-mode synthesis, so cost is proportional to the
/// circuit size but no keys are produced.
pub fn build_constraint_system(
    payload_count: u16,
    hash: HashAlgorithm,
) -> Result<ConstraintSystemDescriptor> {
    if !(MIN_PAYLOADS..=MAX_PAYLOADS).contains(&payload_count) {
        return Err(Error::Range(format!(
            "payload count {payload_count} outside [{MIN_PAYLOADS}, {MAX_PAYLOADS}]"
        )));
    }
    let cs = ConstraintSystem::<Scalar>::new_ref();
    cs.set_optimization_goal(OptimizationGoal::Constraints);
    cs.set_mode(SynthesisMode::Setup);
    ZklaimCircuit::blank(payload_count, hash).generate_constraints(cs.clone())?;
    cs.finalize();
    let arity = (cs.num_instance_variables() - 1) as u32;
    debug_assert_eq!(
        arity as usize,
        encoding::ELEMENTS_PER_PAYLOAD * payload_count as usize
    );
    Ok(ConstraintSystemDescriptor {
        payload_count,
        hash,
        constraint_count: cs.num_constraints() as u64,
        public_input_arity: arity,
    })
}

/// Comparison outcome of one slot against its reference value. Exactly one
/// flag is set in an honest assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotOutcome {
    pub lt: bool,
    pub eq: bool,
    pub gt: bool,
}

impl SlotOutcome {
    fn compare(a: u64, r: u64) -> Self {
        Self {
            lt: a < r,
            eq: a == r,
            gt: a > r,
        }
    }
}

/// A full witness for the claim circuit: payload bit decompositions, the
/// per-slot attribute values, and the comparison outcome flags.
#[derive(Clone, Debug)]
pub struct WitnessAssignment {
    payload_bits: Vec<[bool; 256]>,
    slot_values: Vec<u64>,
    outcomes: Vec<SlotOutcome>,
}

impl WitnessAssignment {
    pub fn payload_count(&self) -> usize {
        self.payload_bits.len()
    }

    pub fn slot_values(&self) -> &[u64] {
        &self.slot_values
    }

    pub fn outcomes(&self) -> &[SlotOutcome] {
        &self.outcomes
    }

    /// Overwrite one slot's outcome flags. Diagnostic hook: lets tests
    /// demonstrate that a lying assignment cannot satisfy the system.
    pub fn set_outcome(&mut self, slot: usize, outcome: SlotOutcome) {
        self.outcomes[slot] = outcome;
    }

    /// Flip a single payload bit. Diagnostic hook, like [`set_outcome`](Self::set_outcome).
    pub fn flip_payload_bit(&mut self, payload: usize, bit: usize) {
        self.payload_bits[payload][bit] = !self.payload_bits[payload][bit];
    }
}

/// Build an assignment straight from attribute and reference values.
pub(crate) fn build_assignment(
    attributes: &[AttributeValue],
    references: &[ReferenceValue],
) -> Result<WitnessAssignment> {
    if attributes.is_empty() || attributes.len() % SLOTS_PER_PAYLOAD != 0 {
        return Err(Error::Shape(format!(
            "attribute count {} is not a positive multiple of {SLOTS_PER_PAYLOAD}",
            attributes.len()
        )));
    }
    if references.len() != attributes.len() {
        return Err(Error::Shape(format!(
            "{} references for {} attributes",
            references.len(),
            attributes.len()
        )));
    }
    let payload_count = attributes.len() / SLOTS_PER_PAYLOAD;
    if payload_count > MAX_PAYLOADS as usize {
        return Err(Error::Shape(format!(
            "payload count {payload_count} exceeds {MAX_PAYLOADS}"
        )));
    }
    let mut payload_bits = Vec::with_capacity(payload_count);
    for chunk in attributes.chunks_exact(SLOTS_PER_PAYLOAD) {
        let preimage = encoding::PayloadPreimage::new(chunk.try_into().unwrap());
        let packed = preimage.packed();
        let mut bits = [false; 256];
        for (pos, bit) in bits.iter_mut().enumerate() {
            *bit = (packed[pos / 8] >> (7 - pos % 8)) & 1 == 1;
        }
        payload_bits.push(bits);
    }
    let slot_values: Vec<u64> = attributes.iter().map(|a| a.value()).collect();
    let outcomes = slot_values
        .iter()
        .zip(references)
        .map(|(&a, r)| SlotOutcome::compare(a, r.value()))
        .collect();
    Ok(WitnessAssignment {
        payload_bits,
        slot_values,
        outcomes,
    })
}

fn check_witness_shapes(slots: usize, credential: &Credential, statement: &Statement) -> Result<()> {
    if credential.attributes().len() != slots {
        return Err(Error::Shape(format!(
            "credential carries {} attributes, circuit expects {slots}",
            credential.attributes().len()
        )));
    }
    if statement.slot_count() != slots {
        return Err(Error::Shape(format!(
            "statement covers {} slots, circuit expects {slots}",
            statement.slot_count()
        )));
    }
    Ok(())
}

pub(crate) fn synthesize_checked_raw(
    slots: usize,
    credential: &Credential,
    statement: &Statement,
) -> Result<WitnessAssignment> {
    check_witness_shapes(slots, credential, statement)?;
    for (slot, (&a, (&mask, &r))) in credential
        .attributes()
        .iter()
        .zip(statement.masks().iter().zip(statement.references()))
        .enumerate()
    {
        if !evaluate_predicate(mask, a, r) {
            return Err(Error::UnsatisfiableStatement {
                slot,
                detail: format!(
                    "attribute {} does not satisfy \"{} {}\"",
                    a.value(),
                    mask.symbol(),
                    r.value()
                ),
            });
        }
    }
    build_assignment(credential.attributes(), statement.references())
}

/// Derive the witness for proving `statement` about `credential`.
///
/// Every predicate is evaluated natively first; a false one aborts with
/// [`Error::UnsatisfiableStatement`] naming the earliest failing slot, so an
/// impossible claim is reported before any proving work starts.
pub fn synthesize_witness(
    descriptor: &ConstraintSystemDescriptor,
    credential: &Credential,
    statement: &Statement,
) -> Result<WitnessAssignment> {
    synthesize_checked_raw(descriptor.slot_count(), credential, statement)
}

/// Like [`synthesize_witness`] but without the native predicate pre-check.
/// The returned assignment is honest; if the statement is false the circuit
/// is simply unsatisfiable. Used by differential and soundness tests.
pub fn synthesize_witness_unchecked(
    descriptor: &ConstraintSystemDescriptor,
    credential: &Credential,
    statement: &Statement,
) -> Result<WitnessAssignment> {
    check_witness_shapes(descriptor.slot_count(), credential, statement)?;
    build_assignment(credential.attributes(), statement.references())
}

/// Result of evaluating an assignment against the constraint system.
#[derive(Clone, Debug)]
pub struct SatisfactionReport {
    pub satisfied: bool,
    /// Index (or trace name) of the first unsatisfied constraint.
    pub first_unsatisfied: Option<String>,
}

/// Run a prove-mode synthesis and evaluate every constraint natively.
pub fn check_satisfaction(
    descriptor: &ConstraintSystemDescriptor,
    witness: &WitnessAssignment,
    public: &PublicInput,
) -> Result<SatisfactionReport> {
    check_satisfaction_raw(
        descriptor.payload_count(),
        descriptor.hash(),
        witness,
        public,
    )
}

pub(crate) fn check_satisfaction_raw(
    payload_count: u16,
    hash: HashAlgorithm,
    witness: &WitnessAssignment,
    public: &PublicInput,
) -> Result<SatisfactionReport> {
    if witness.payload_count() != payload_count as usize
        || public.payload_count() != payload_count as usize
    {
        return Err(Error::Shape(format!(
            "circuit expects {payload_count} payloads, witness has {}, public input has {}",
            witness.payload_count(),
            public.payload_count()
        )));
    }
    let cs = ConstraintSystem::<Scalar>::new_ref();
    cs.set_optimization_goal(OptimizationGoal::Constraints);
    cs.set_mode(SynthesisMode::Prove {
        construct_matrices: true,
    });
    ZklaimCircuit::with_assignment_raw(payload_count, hash, witness.clone(), public.clone())
        .generate_constraints(cs.clone())?;
    cs.finalize();
    let satisfied = cs.is_satisfied()?;
    let first_unsatisfied = if satisfied {
        None
    } else {
        cs.which_is_unsatisfied()?
    };
    Ok(SatisfactionReport {
        satisfied,
        first_unsatisfied,
    })
}

/// Native values a slot needs when the circuit is synthesized with a
/// concrete assignment.
#[derive(Clone, Copy)]
struct SlotNative {
    attribute: u64,
    reference: u64,
    mask: u8,
    outcome: SlotOutcome,
}

/// The claim circuit as handed to the proof system. `witness` and `public`
/// are both `None` during key generation.
pub(crate) struct ZklaimCircuit {
    payload_count: usize,
    hash: HashAlgorithm,
    witness: Option<WitnessAssignment>,
    public: Option<PublicInput>,
}

impl ZklaimCircuit {
    pub(crate) fn blank(payload_count: u16, hash: HashAlgorithm) -> Self {
        Self {
            payload_count: payload_count as usize,
            hash,
            witness: None,
            public: None,
        }
    }

    pub(crate) fn with_assignment_raw(
        payload_count: u16,
        hash: HashAlgorithm,
        witness: WitnessAssignment,
        public: PublicInput,
    ) -> Self {
        Self {
            payload_count: payload_count as usize,
            hash,
            witness: Some(witness),
            public: Some(public),
        }
    }

    fn slot_native(&self, slot: usize) -> Option<SlotNative> {
        let (witness, public) = (self.witness.as_ref()?, self.public.as_ref()?);
        Some(SlotNative {
            attribute: witness.slot_values()[slot],
            reference: public.references()[slot].value(),
            mask: public.masks()[slot].bits(),
            outcome: witness.outcomes()[slot],
        })
    }
}

/// Assemble big-endian bytes into one field element (at most 31 bytes).
fn bytes_be_to_fp(chunk: &[UInt8<Scalar>]) -> std::result::Result<FpVar<Scalar>, SynthesisError> {
    let mut le_bits = Vec::with_capacity(chunk.len() * 8);
    for byte in chunk.iter().rev() {
        le_bits.extend(byte.to_bits_le()?);
    }
    Boolean::le_bits_to_fp(&le_bits)
}

/// Enforce one slot's predicate against its public mask and reference.
///
/// `slot_bits` are the 50 payload bits of the slot, most significant first.
/// The gadget allocates the outcome flags from `native` and ties them down:
/// `lt` through the top bit of the 51-bit decomposition of
/// `a - r + 2^50`, `eq` through the inverse trick, and `gt` through the
/// one-hot sum. The public mask is decomposed into its three bits and must
/// accept the outcome.
fn enforce_slot_predicate(
    cs: ConstraintSystemRef<Scalar>,
    slot_bits: &[Boolean<Scalar>],
    mask_input: &FpVar<Scalar>,
    ref_input: &FpVar<Scalar>,
    native: Option<SlotNative>,
) -> std::result::Result<(), SynthesisError> {
    assert_eq!(slot_bits.len(), ATTRIBUTE_BITS);
    let value = |f: fn(SlotNative) -> bool| {
        let native = native;
        move || native.map(f).ok_or(SynthesisError::AssignmentMissing)
    };

    // a as a field element, from the already-boolean payload bits.
    let a_le: Vec<Boolean<Scalar>> = slot_bits.iter().rev().cloned().collect();
    let a = Boolean::le_bits_to_fp(&a_le)?;

    // Range-check the public reference: 50 fresh witness bits must recompose
    // to it, so any out-of-range instance is unsatisfiable.
    let mut r_bits = Vec::with_capacity(ATTRIBUTE_BITS);
    for k in 0..ATTRIBUTE_BITS {
        r_bits.push(Boolean::new_witness(cs.clone(), || {
            native
                .map(|n| (n.reference >> k) & 1 == 1)
                .ok_or(SynthesisError::AssignmentMissing)
        })?);
    }
    Boolean::le_bits_to_fp(&r_bits)?.enforce_equal(ref_input)?;

    // Outcome flags, allocated from the assignment, then pinned down below.
    let lt = Boolean::new_witness(cs.clone(), value(|n| n.outcome.lt))?;
    let eq = Boolean::new_witness(cs.clone(), value(|n| n.outcome.eq))?;
    let gt = Boolean::new_witness(cs.clone(), value(|n| n.outcome.gt))?;

    // d = a - r + 2^50 lies in [1, 2^51); its unique 51-bit decomposition
    // has top bit 1 exactly when a >= r. Reusing !lt as that top bit forces
    // lt to be the true borrow.
    let d = &a - ref_input + FpVar::constant(Scalar::from(1u64 << ATTRIBUTE_BITS));
    let mut d_bits = Vec::with_capacity(ATTRIBUTE_BITS + 1);
    for k in 0..ATTRIBUTE_BITS {
        d_bits.push(Boolean::new_witness(cs.clone(), || {
            native
                .map(|n| {
                    let d = n.attribute + (1u64 << ATTRIBUTE_BITS) - n.reference;
                    (d >> k) & 1 == 1
                })
                .ok_or(SynthesisError::AssignmentMissing)
        })?);
    }
    d_bits.push(!lt.clone());
    Boolean::le_bits_to_fp(&d_bits)?.enforce_equal(&d)?;

    // eq == (a == r): diff * eq = 0 kills eq when diff != 0, and
    // diff * inv = 1 - eq forces eq when diff = 0.
    let diff = &a - ref_input;
    let inv = FpVar::new_witness(cs.clone(), || {
        use ark_ff::Field;
        native
            .map(|n| {
                (Scalar::from(n.attribute) - Scalar::from(n.reference))
                    .inverse()
                    .unwrap_or(Scalar::from(0u64))
            })
            .ok_or(SynthesisError::AssignmentMissing)
    })?;
    let eq_fp = FpVar::from(eq.clone());
    (&diff * &inv).enforce_equal(&(FpVar::one() - &eq_fp))?;
    (&diff * &eq_fp).enforce_equal(&FpVar::zero())?;

    // One-hot: with lt and eq already sound, this pins gt.
    let lt_fp = FpVar::from(lt.clone());
    let gt_fp = FpVar::from(gt.clone());
    (&lt_fp + &eq_fp + &gt_fp).enforce_equal(&FpVar::one())?;

    // Decompose the public mask and require it to accept the outcome.
    let m_lt = Boolean::new_witness(cs.clone(), value(|n| n.mask & 0b001 != 0))?;
    let m_eq = Boolean::new_witness(cs.clone(), value(|n| n.mask & 0b010 != 0))?;
    let m_gt = Boolean::new_witness(cs, value(|n| n.mask & 0b100 != 0))?;
    let m_lt_fp = FpVar::from(m_lt);
    let m_eq_fp = FpVar::from(m_eq);
    let m_gt_fp = FpVar::from(m_gt);
    (&m_lt_fp + &m_eq_fp * Scalar::from(2u64) + &m_gt_fp * Scalar::from(4u64))
        .enforce_equal(mask_input)?;
    (&m_lt_fp * &lt_fp + &m_eq_fp * &eq_fp + &m_gt_fp * &gt_fp).enforce_equal(&FpVar::one())?;
    Ok(())
}

impl ConstraintSynthesizer<Scalar> for ZklaimCircuit {
    fn generate_constraints(
        self,
        cs: ConstraintSystemRef<Scalar>,
    ) -> std::result::Result<(), SynthesisError> {
        let m = self.payload_count;
        let slots = m * SLOTS_PER_PAYLOAD;
        let HashAlgorithm::Sha256 = self.hash;

        // Public inputs, in encoding order: digest halves, masks, references.
        let mut digest_inputs = Vec::with_capacity(m);
        for j in 0..m {
            let halves = self.public.as_ref().map(|p| {
                encoding::digest_to_field_elements(&p.digests()[j])
            });
            let hi = FpVar::new_input(cs.clone(), || {
                halves.map(|h| h.0).ok_or(SynthesisError::AssignmentMissing)
            })?;
            let lo = FpVar::new_input(cs.clone(), || {
                halves.map(|h| h.1).ok_or(SynthesisError::AssignmentMissing)
            })?;
            digest_inputs.push((hi, lo));
        }
        let mut mask_inputs = Vec::with_capacity(slots);
        for s in 0..slots {
            let v = self
                .public
                .as_ref()
                .map(|p| Scalar::from(p.masks()[s].bits()));
            mask_inputs.push(FpVar::new_input(cs.clone(), || {
                v.ok_or(SynthesisError::AssignmentMissing)
            })?);
        }
        let mut ref_inputs = Vec::with_capacity(slots);
        for s in 0..slots {
            let v = self
                .public
                .as_ref()
                .map(|p| Scalar::from(p.references()[s].value()));
            ref_inputs.push(FpVar::new_input(cs.clone(), || {
                v.ok_or(SynthesisError::AssignmentMissing)
            })?);
        }

        for j in 0..m {
            // Payload bits, most significant first, as in the packed layout.
            let mut bits = Vec::with_capacity(256);
            for pos in 0..256 {
                bits.push(Boolean::new_witness(cs.clone(), || {
                    self.witness
                        .as_ref()
                        .map(|w| w.payload_bits[j][pos])
                        .ok_or(SynthesisError::AssignmentMissing)
                })?);
            }

            // Hash binding: SHA-256 over the packed bytes must equal the
            // public digest halves.
            let mut bytes = Vec::with_capacity(32);
            for chunk in bits.chunks(8) {
                let le: Vec<Boolean<Scalar>> = chunk.iter().rev().cloned().collect();
                bytes.push(UInt8::from_bits_le(&le));
            }
            let mut hasher = Sha256Gadget::default();
            hasher.update(&bytes)?;
            let digest = hasher.finalize()?.0;
            bytes_be_to_fp(&digest[..16])?.enforce_equal(&digest_inputs[j].0)?;
            bytes_be_to_fp(&digest[16..])?.enforce_equal(&digest_inputs[j].1)?;

            // Predicates over the five slots of this payload.
            for i in 0..SLOTS_PER_PAYLOAD {
                let s = j * SLOTS_PER_PAYLOAD + i;
                enforce_slot_predicate(
                    cs.clone(),
                    &bits[i * ATTRIBUTE_BITS..(i + 1) * ATTRIBUTE_BITS],
                    &mask_inputs[s],
                    &ref_inputs[s],
                    self.slot_native(s),
                )?;
            }
        }
        Ok(())
    }
}

/// Run the slot-predicate gadget standalone and report whether an honest
/// assignment satisfies it. Exists so differential tests can sweep the
/// comparison logic exhaustively without paying for the hash circuit.
pub fn probe_predicate_gadget(a: u64, r: u64, mask: PredicateMask) -> Result<bool> {
    let a_val = AttributeValue::new(a)?;
    let r_val = ReferenceValue::new(r)?;
    let native = SlotNative {
        attribute: a,
        reference: r,
        mask: mask.bits(),
        outcome: SlotOutcome::compare(a, r),
    };
    let cs = ConstraintSystem::<Scalar>::new_ref();
    cs.set_mode(SynthesisMode::Prove {
        construct_matrices: true,
    });
    let mut slot_bits = Vec::with_capacity(ATTRIBUTE_BITS);
    for b in 0..ATTRIBUTE_BITS {
        let bit = (a_val.value() >> (ATTRIBUTE_BITS - 1 - b)) & 1 == 1;
        slot_bits.push(Boolean::new_witness(cs.clone(), || Ok(bit))?);
    }
    let mask_input = FpVar::new_input(cs.clone(), || Ok(Scalar::from(mask.bits())))?;
    let ref_input = FpVar::new_input(cs.clone(), || Ok(Scalar::from(r_val.value())))?;
    enforce_slot_predicate(cs.clone(), &slot_bits, &mask_input, &ref_input, Some(native))?;
    cs.finalize();
    Ok(cs.is_satisfied()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{assemble_public_input, pack_payload, PayloadDigest, MAX_ATTRIBUTE};
    use sha2::{Digest, Sha256};

    fn digest_of(slots: &[u64; 5]) -> PayloadDigest {
        let packed = pack_payload(slots).unwrap().packed();
        PayloadDigest(Sha256::digest(packed).into())
    }

    fn assignment_for(slots: &[u64; 5], refs: &[u64; 5]) -> WitnessAssignment {
        let attrs: Vec<AttributeValue> = slots
            .iter()
            .map(|&v| AttributeValue::new(v).unwrap())
            .collect();
        let references: Vec<ReferenceValue> = refs
            .iter()
            .map(|&v| ReferenceValue::new(v).unwrap())
            .collect();
        build_assignment(&attrs, &references).unwrap()
    }

    fn public_for(slots: &[u64; 5], masks: [u8; 5], refs: &[u64; 5]) -> PublicInput {
        assemble_public_input(
            vec![digest_of(slots)],
            masks
                .iter()
                .map(|&b| PredicateMask::new(b).unwrap())
                .collect(),
            refs.iter()
                .map(|&v| ReferenceValue::new(v).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn descriptor_shape_and_round_trip() {
        let d = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        assert_eq!(d.public_input_arity(), 12);
        assert_eq!(d.slot_count(), 5);
        assert!(d.constraint_count() > 25_000, "sha256 circuit ought to dominate");

        let bytes = d.to_bytes();
        let back = ConstraintSystemDescriptor::from_bytes(&bytes).unwrap();
        assert_eq!(d, back);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn descriptor_rejects_malformed() {
        let d = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let good = d.to_bytes();

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(
            ConstraintSystemDescriptor::from_bytes(&bad),
            Err(Error::Parse(_))
        ));

        let mut bad = good.clone();
        bad[4] = 9;
        assert!(ConstraintSystemDescriptor::from_bytes(&bad).is_err());

        let mut bad = good.clone();
        bad[5] = 2;
        assert!(matches!(
            ConstraintSystemDescriptor::from_bytes(&bad),
            Err(Error::UnsupportedHash(2))
        ));

        let mut bad = good.clone();
        bad[6] = 0;
        bad[7] = 0;
        assert!(ConstraintSystemDescriptor::from_bytes(&bad).is_err());

        assert!(ConstraintSystemDescriptor::from_bytes(&good[..10]).is_err());

        // Arity inconsistent with payload count.
        let mut bad = good;
        bad[16] = 0xFF;
        assert!(matches!(
            ConstraintSystemDescriptor::from_bytes(&bad),
            Err(Error::Malformed(_))
        ));

        assert!(build_constraint_system(0, HashAlgorithm::Sha256).is_err());
        assert!(build_constraint_system(65, HashAlgorithm::Sha256).is_err());
    }

    #[test]
    fn setup_and_prove_synthesis_agree() {
        let slots = [12, 0, MAX_ATTRIBUTE, 7, 9];
        let refs = [13, 0, 5, 7, 9];
        let masks = [0b001, 0b111, 0b100, 0b010, 0b110];

        let setup_cs = ConstraintSystem::<Scalar>::new_ref();
        setup_cs.set_optimization_goal(OptimizationGoal::Constraints);
        setup_cs.set_mode(SynthesisMode::Setup);
        ZklaimCircuit::blank(1, HashAlgorithm::Sha256)
            .generate_constraints(setup_cs.clone())
            .unwrap();
        setup_cs.finalize();

        let descriptor = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let prove_cs = ConstraintSystem::<Scalar>::new_ref();
        prove_cs.set_optimization_goal(OptimizationGoal::Constraints);
        prove_cs.set_mode(SynthesisMode::Prove {
            construct_matrices: true,
        });
        ZklaimCircuit::with_assignment_raw(
            descriptor.payload_count(),
            descriptor.hash(),
            assignment_for(&slots, &refs),
            public_for(&slots, masks, &refs),
        )
        .generate_constraints(prove_cs.clone())
        .unwrap();
        prove_cs.finalize();

        assert_eq!(setup_cs.num_constraints(), prove_cs.num_constraints());
        assert_eq!(
            setup_cs.num_witness_variables(),
            prove_cs.num_witness_variables()
        );
        assert_eq!(
            setup_cs.num_instance_variables(),
            prove_cs.num_instance_variables()
        );
        assert!(prove_cs.is_satisfied().unwrap());
    }

    #[test]
    fn honest_assignment_satisfies() {
        let descriptor = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let slots = [30, 1, 2, 3, 999];
        let refs = [18, 0, 2, 9, 0];
        let masks = [0b100, 0b100, 0b010, 0b001, 0b111];
        let report = check_satisfaction(
            &descriptor,
            &assignment_for(&slots, &refs),
            &public_for(&slots, masks, &refs),
        )
        .unwrap();
        assert!(report.satisfied, "failing at {:?}", report.first_unsatisfied);
    }

    #[test]
    fn flipped_payload_bit_breaks_hash_binding() {
        let descriptor = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let slots = [30, 1, 2, 3, 999];
        let refs = [0; 5];
        let masks = [0b111; 5];
        let mut witness = assignment_for(&slots, &refs);
        witness.flip_payload_bit(0, 17);
        let report =
            check_satisfaction(&descriptor, &witness, &public_for(&slots, masks, &refs)).unwrap();
        assert!(!report.satisfied);
        assert!(report.first_unsatisfied.is_some());
    }

    #[test]
    fn wrong_public_digest_is_unsatisfiable() {
        let descriptor = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let slots = [30, 1, 2, 3, 999];
        let refs = [0; 5];
        let mut x = public_for(&slots, [0b111; 5], &refs);
        let mut mangled = x.digests()[0].0;
        mangled[0] ^= 0x01;
        x = assemble_public_input(
            vec![PayloadDigest(mangled)],
            x.masks().to_vec(),
            x.references().to_vec(),
        )
        .unwrap();
        let report = check_satisfaction(&descriptor, &assignment_for(&slots, &refs), &x).unwrap();
        assert!(!report.satisfied);
    }

    #[test]
    fn lying_outcome_is_unsatisfiable() {
        let descriptor = build_constraint_system(1, HashAlgorithm::Sha256).unwrap();
        let slots = [30, 1, 2, 3, 999];
        let refs = [40, 0, 0, 0, 0];
        // Claim slot 0 is greater when it's actually less.
        let masks = [0b100, 0b111, 0b111, 0b111, 0b111];
        let mut witness = assignment_for(&slots, &refs);
        witness.set_outcome(
            0,
            SlotOutcome {
                lt: false,
                eq: false,
                gt: true,
            },
        );
        let report =
            check_satisfaction(&descriptor, &witness, &public_for(&slots, masks, &refs)).unwrap();
        assert!(!report.satisfied);
    }

    #[test]
    fn predicate_gadget_matches_oracle_on_sample() {
        // The acceptance suite sweeps the full 6-bit space; keep a coarse
        // grid here so plain `cargo test` still exercises the gadget.
        for mask_bits in 1u8..=7 {
            let mask = PredicateMask::new(mask_bits).unwrap();
            for &a in &[0u64, 1, 31, 32, 63, MAX_ATTRIBUTE] {
                for &r in &[0u64, 1, 31, 32, 63, MAX_ATTRIBUTE] {
                    let expected = evaluate_predicate(
                        mask,
                        AttributeValue::new(a).unwrap(),
                        ReferenceValue::new(r).unwrap(),
                    );
                    let got = probe_predicate_gadget(a, r, mask).unwrap();
                    assert_eq!(got, expected, "a={a} r={r} mask={mask_bits:#05b}");
                }
            }
        }
    }
}
