//! Verifier side: offline, non-interactive context checking.
//!
//! Accepting a context takes three independent checks, all local:
//!
//! 1. **Signature** — the digests in the instance really were signed by the
//!    issuer the context names, so the proof speaks about issued data.
//! 2. **Semantics** — the masks and references in the instance equal the
//!    statement the verifier meant to require. A proof is only ever valid
//!    *for its own instance*; skipping this check lets a holder prove some
//!    other, weaker statement and still pass.
//! 3. **Proof** — the pairing equation holds for the instance.
//!
//! All three always run; the report carries each flag plus a detail string
//! for the first failure in the order above.

use crate::error::{Error, Result};
use crate::issuer::{verify_credential_signature, IssuerPublicKey};
use crate::prover::{Statement, ZklaimsContext};
use crate::snark::{self, VerificationKey};

/// Outcome of the three verification checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub signature_ok: bool,
    pub semantics_ok: bool,
    pub proof_ok: bool,
    /// Which check failed first (signature, then semantics, then proof),
    /// and why.
    pub failure_detail: Option<String>,
}

impl VerificationReport {
    pub fn overall(&self) -> bool {
        self.signature_ok && self.semantics_ok && self.proof_ok
    }
}

/// Check a context against the verifier's own expectations: the issuer key
/// it trusts, the verification key for the circuit, and the statement it
/// requires the context to prove.
pub fn verify_context(
    vk: &VerificationKey,
    issuer: &IssuerPublicKey,
    context: &ZklaimsContext,
    expected: &Statement,
) -> Result<VerificationReport> {
    let public = context.public_input();
    if public.payload_count() != vk.payload_count() as usize {
        return Err(Error::Shape(format!(
            "verification key is for {} payloads, context carries {}",
            vk.payload_count(),
            public.payload_count()
        )));
    }

    let signature_ok = verify_credential_signature(
        issuer,
        &context.schema_id,
        &context.issuer_id,
        public.digests(),
        context.signature(),
    )?;

    let (semantics_ok, semantic_detail) = check_semantics(context, expected);
    let proof_ok = snark::verify(vk, context.proof(), public)?;

    let failure_detail = if !signature_ok {
        Some("issuer signature over the payload digests does not verify".into())
    } else if !semantics_ok {
        semantic_detail
    } else if !proof_ok {
        Some("proof does not verify for the claimed instance".into())
    } else {
        None
    };

    Ok(VerificationReport {
        signature_ok,
        semantics_ok,
        proof_ok,
        failure_detail,
    })
}

fn check_semantics(context: &ZklaimsContext, expected: &Statement) -> (bool, Option<String>) {
    let public = context.public_input();
    if expected.slot_count() != public.slot_count() {
        return (
            false,
            Some(format!(
                "expected statement covers {} slots, context covers {}",
                expected.slot_count(),
                public.slot_count()
            )),
        );
    }
    for slot in 0..public.slot_count() {
        let (mask, reference) = (public.masks()[slot], public.references()[slot]);
        let (want_mask, want_ref) = (expected.masks()[slot], expected.references()[slot]);
        if mask != want_mask {
            return (
                false,
                Some(format!(
                    "slot {slot}: context proves \"{}\", expected \"{}\"",
                    mask.symbol(),
                    want_mask.symbol()
                )),
            );
        }
        // References on NOOP slots are irrelevant to the claim; comparing
        // them anyway keeps the accepted instance byte-exact.
        if reference != want_ref {
            return (
                false,
                Some(format!(
                    "slot {slot}: context reference {} differs from expected {}",
                    reference.value(),
                    want_ref.value()
                )),
            );
        }
    }
    (true, None)
}
