//! Holder side: statement parsing and proof-context creation.
//!
//! A statement assigns one predicate clause to each credential slot;
//! unmentioned slots default to the always-true mask so nothing about them
//! is claimed — or leaked. `create_context` turns a credential plus a true
//! statement into a self-contained context: the proof, the instance it
//! speaks about, and the issuer's signature over the digests. The context
//! deliberately contains no attribute values.

use crate::circuit::synthesize_checked_raw;
use crate::encoding::{
    assemble_public_input, encode_predicate, PredicateMask, PublicInput, ReferenceValue,
    SLOTS_PER_PAYLOAD,
};
use crate::error::{Error, Result};
use crate::issuer::{Credential, CredentialSchema, CredentialSignature, NONCE_LABEL};
use crate::snark::{self, Proof, ProvingKey};
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};

/// A normalized predicate statement: one `(mask, reference)` pair per slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    masks: Vec<PredicateMask>,
    references: Vec<ReferenceValue>,
}

impl Statement {
    /// The statement that claims nothing about any slot.
    pub fn all_noop(slot_count: usize) -> Result<Self> {
        if slot_count == 0 || slot_count % SLOTS_PER_PAYLOAD != 0 {
            return Err(Error::Shape(format!(
                "slot count {slot_count} is not a positive multiple of {SLOTS_PER_PAYLOAD}"
            )));
        }
        Ok(Self {
            masks: vec![PredicateMask::noop(); slot_count],
            references: vec![ReferenceValue::new(0).expect("0 is in range"); slot_count],
        })
    }

    /// Assemble from explicit per-slot vectors.
    pub fn from_parts(masks: Vec<PredicateMask>, references: Vec<ReferenceValue>) -> Result<Self> {
        if masks.len() != references.len() {
            return Err(Error::Shape(format!(
                "{} masks but {} references",
                masks.len(),
                references.len()
            )));
        }
        if masks.is_empty() || masks.len() % SLOTS_PER_PAYLOAD != 0 {
            return Err(Error::Shape(format!(
                "slot count {} is not a positive multiple of {SLOTS_PER_PAYLOAD}",
                masks.len()
            )));
        }
        Ok(Self { masks, references })
    }

    /// Parse statement text against a schema; clauses may address slots by
    /// schema label or positionally as `slotN`.
    pub fn parse(text: &str, schema: &CredentialSchema) -> Result<Self> {
        schema.validate()?;
        parse_clauses(text, schema.slot_count(), Some(schema))
    }

    /// Parse with positional `slotN` targets only, for callers that know
    /// the slot count but hold no schema.
    pub fn parse_positional(text: &str, slot_count: usize) -> Result<Self> {
        if slot_count == 0 || slot_count % SLOTS_PER_PAYLOAD != 0 {
            return Err(Error::Shape(format!(
                "slot count {slot_count} is not a positive multiple of {SLOTS_PER_PAYLOAD}"
            )));
        }
        parse_clauses(text, slot_count, None)
    }

    pub fn slot_count(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[PredicateMask] {
        &self.masks
    }

    pub fn references(&self) -> &[ReferenceValue] {
        &self.references
    }

    /// The non-NOOP clauses as `(slot, mask, reference)` triples.
    pub fn clauses(&self) -> Vec<(usize, PredicateMask, ReferenceValue)> {
        self.masks
            .iter()
            .zip(&self.references)
            .enumerate()
            .filter(|(_, (m, _))| !m.is_noop())
            .map(|(i, (&m, &r))| (i, m, r))
            .collect()
    }

    /// Canonical positional text form; `parse_positional` of the result
    /// reproduces this statement.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (slot, mask, reference) in self.clauses() {
            out.push_str(&format!("slot{slot} {} {}\n", mask.symbol(), reference.value()));
        }
        out
    }
}

/// The comparison operators, longest spelling first so `<=` wins over `<`.
const OPERATORS: [&str; 6] = ["<=", ">=", "!=", "<", ">", "="];

fn split_clause(line: &str) -> Option<(&str, &str, &str)> {
    let at = line.find(['<', '>', '=', '!'])?;
    let op = OPERATORS
        .iter()
        .find(|op| line[at..].starts_with(*op))?;
    Some((line[..at].trim(), op, line[at + op.len()..].trim()))
}

fn parse_clauses(
    text: &str,
    slot_count: usize,
    schema: Option<&CredentialSchema>,
) -> Result<Statement> {
    let mut masks = vec![PredicateMask::noop(); slot_count];
    let mut references = vec![ReferenceValue::new(0).expect("0 is in range"); slot_count];
    let mut claimed = vec![false; slot_count];

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = lineno + 1;
        let (target, op, value) = split_clause(line).ok_or_else(|| {
            Error::Parse(format!(
                "line {n}: expected \"<target> <op> <value>\", got {line:?}"
            ))
        })?;
        if target.is_empty() {
            return Err(Error::Parse(format!("line {n}: missing target before {op:?}")));
        }
        if value.is_empty() {
            return Err(Error::Parse(format!("line {n}: missing value after {op:?}")));
        }

        let slot = resolve_target(target, slot_count, schema)?;
        if slot == slot_count - 1 {
            // Predicates on the blinding nonce would let a verifier narrow
            // it down and eventually brute-force the attributes.
            return Err(Error::NoncePredicateForbidden);
        }
        if claimed[slot] {
            return Err(Error::DuplicateClause(slot));
        }
        claimed[slot] = true;

        let raw_value: u64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("line {n}: {value:?} is not a decimal integer")))?;
        masks[slot] = encode_predicate(op)?;
        references[slot] = ReferenceValue::new(raw_value)?;
    }
    Ok(Statement { masks, references })
}

fn resolve_target(
    target: &str,
    slot_count: usize,
    schema: Option<&CredentialSchema>,
) -> Result<usize> {
    if let Some(rest) = target.strip_prefix("slot") {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            let idx: usize = rest
                .parse()
                .map_err(|_| Error::UnknownSlot(target.to_string()))?;
            if idx >= slot_count {
                return Err(Error::UnknownSlot(format!(
                    "{target} (credential has {slot_count} slots)"
                )));
            }
            return Ok(idx);
        }
    }
    if target == NONCE_LABEL {
        return Err(Error::NoncePredicateForbidden);
    }
    match schema.and_then(|s| s.slot_index(target)) {
        Some(idx) => Ok(idx),
        None => Err(Error::UnknownSlot(target.to_string())),
    }
}

/// A self-contained, non-interactively verifiable claim: which schema and
/// issuer it speaks about, the proof, the public instance `(y, p, r)`, and
/// the issuer's signature over the digests.
#[derive(Clone, Debug, PartialEq)]
pub struct ZklaimsContext {
    pub schema_id: String,
    pub issuer_id: String,
    proof: Proof,
    public: PublicInput,
    signature: CredentialSignature,
}

#[derive(Serialize, Deserialize)]
struct ContextFile {
    schema_id: String,
    issuer_id: String,
    proof: String,
    y: Vec<crate::encoding::PayloadDigest>,
    p: Vec<PredicateMask>,
    r: Vec<ReferenceValue>,
    #[serde(rename = "S")]
    signature: CredentialSignature,
}

impl ZklaimsContext {
    pub fn from_parts(
        schema_id: String,
        issuer_id: String,
        proof: Proof,
        public: PublicInput,
        signature: CredentialSignature,
    ) -> Self {
        Self {
            schema_id,
            issuer_id,
            proof,
            public,
            signature,
        }
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn public_input(&self) -> &PublicInput {
        &self.public
    }

    pub fn signature(&self) -> &CredentialSignature {
        &self.signature
    }

    /// The statement this context proves, reconstructed from `(p, r)`.
    pub fn statement(&self) -> Statement {
        Statement {
            masks: self.public.masks().to_vec(),
            references: self.public.references().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ContextFile {
            schema_id: self.schema_id.clone(),
            issuer_id: self.issuer_id.clone(),
            proof: BASE64.encode(self.proof.to_bytes()),
            y: self.public.digests().to_vec(),
            p: self.public.masks().to_vec(),
            r: self.public.references().to_vec(),
            signature: self.signature,
        })
        .expect("context serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ContextFile = serde_json::from_str(json)?;
        let proof_bytes = BASE64
            .decode(&file.proof)
            .map_err(|e| Error::Parse(format!("proof base64: {e}")))?;
        let proof = Proof::from_bytes(&proof_bytes)?;
        let public = assemble_public_input(file.y, file.p, file.r)?;
        Ok(Self {
            schema_id: file.schema_id,
            issuer_id: file.issuer_id,
            proof,
            public,
            signature: file.signature,
        })
    }
}

/// Prove `statement` about `credential` and assemble the claim context.
///
/// Fails with [`Error::UnsatisfiableStatement`] before any proving work if
/// one of the predicates is false for the credential's attributes, and with
/// [`Error::KeyMismatch`] if the proving key's shape does not match.
pub fn create_context(
    pk: &ProvingKey,
    credential: &Credential,
    statement: &Statement,
) -> Result<ZklaimsContext> {
    let slots = pk.payload_count() as usize * SLOTS_PER_PAYLOAD;
    if credential.payload_count() != pk.payload_count() as usize {
        return Err(Error::KeyMismatch(format!(
            "proving key is for {} payloads, credential has {}",
            pk.payload_count(),
            credential.payload_count()
        )));
    }
    let witness = synthesize_checked_raw(slots, credential, statement)?;
    let public = assemble_public_input(
        credential.payload_digests().to_vec(),
        statement.masks().to_vec(),
        statement.references().to_vec(),
    )?;
    let proof = snark::prove(pk, &witness, &public)?;
    Ok(ZklaimsContext {
        schema_id: credential.schema_id.clone(),
        issuer_id: credential.issuer_id.clone(),
        proof,
        public,
        signature: *credential.signature(),
    })
}
