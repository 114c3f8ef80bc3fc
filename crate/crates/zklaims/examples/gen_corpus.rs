//! Regenerate the fuzz corpus seeds:
//!
//! ```text
//! cargo run -p zklaims --features testkit --example gen_corpus [fuzz/corpus]
//! ```
//!
//! One directory per fuzz target, a handful of valid instances each, plus
//! truncated variants so the fuzzer starts with both sides of every length
//! check. Deterministic so regeneration doesn't churn the checked-in seeds.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use zklaims::testkit;

fn main() -> std::io::Result<()> {
    let root = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fuzz/corpus".into());
    let root = Path::new(&root);
    let mut rng = ChaCha20Rng::seed_from_u64(0x5EED);

    let mut write = |target: &str, name: &str, bytes: &[u8]| -> std::io::Result<()> {
        let dir = root.join(target);
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(name), bytes)
    };

    for i in 0..6u32 {
        let m = testkit::random_payload_count(&mut rng);
        let slots = m as usize * 5;

        let statement = testkit::random_statement(&mut rng, slots).render();
        write("statement_parse", &format!("rendered-{i}"), statement.as_bytes())?;

        let schema = testkit::random_schema(&mut rng, m).to_json();
        write("schema_json", &format!("schema-{i}"), schema.as_bytes())?;

        let credential = testkit::random_credential(&mut rng, m).to_json();
        write("credential_json", &format!("credential-{i}"), credential.as_bytes())?;

        let context = testkit::random_context(&mut rng, m).to_json();
        write("context_json", &format!("context-{i}"), context.as_bytes())?;

        let record = testkit::random_record(&mut rng).encode();
        write("record_decode", &format!("record-{i}"), &record)?;
        if i == 0 {
            write("record_decode", "record-truncated", &record[..record.len() / 2])?;
        }

        let descriptor = testkit::random_descriptor(&mut rng).to_bytes();
        write("descriptor_decode", &format!("descriptor-{i}"), &descriptor)?;

        let pk = testkit::random_proving_key(&mut rng, m).to_bytes();
        write("key_decode", &format!("pk-{i}"), &pk)?;
        let vk = testkit::random_verification_key(&mut rng, m).to_bytes();
        write("key_decode", &format!("vk-{i}"), &vk)?;
        if i == 0 {
            write("key_decode", "vk-truncated", &vk[..vk.len() / 2])?;
        }

        let proof = testkit::random_proof(&mut rng).to_bytes();
        write("proof_decode", &format!("proof-{i}"), &proof)?;

        let public = testkit::random_public_input(&mut rng, m).to_bytes();
        write("public_input_decode", &format!("public-{i}"), &public)?;
        if i == 0 {
            write("public_input_decode", "public-truncated", &public[..public.len() - 3])?;
        }
    }

    // Key files: both halves of the pair, derived from fixed secrets.
    let keypair = zklaims::IssuerKeypair::from_secret_bytes(&[7u8; 32]);
    write("issuer_key_json", "keypair", keypair.to_json().as_bytes())?;
    write("issuer_key_json", "public", keypair.public().to_json().as_bytes())?;

    // A statement exercising comments, blank lines and every operator.
    let hand_written = "\
# residency check
slot0 >= 18
slot1 = 10115

slot2 < 100000
slot3 != 4
slot4<=99
";
    write("statement_parse", "hand-written", hand_written.as_bytes())?;

    println!("corpus written under {}", root.display());
    Ok(())
}
