//! `zklaims` — issue credentials, prove statements about them, and verify
//! the resulting claim contexts, entirely offline.
//!
//! Exit codes are part of the interface so scripts can branch on the
//! verification verdict:
//!
//! * `0` success / claim accepted
//! * `1` operational failure (I/O, missing record, internal error)
//! * `2` signature failure (credential or namespace record)
//! * `3` semantic mismatch (statement, schema or key shape disagreement)
//! * `4` proof invalid
//! * `5` malformed input (unparsable file, bad argument, out-of-range value)
//!
//! Every subcommand honours the global `--format json` flag with a single
//! parseable JSON object on stdout.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zklaims::bench;
use zklaims::directory::RecordKind;
use zklaims::issuer::{bootstrap_issuer, issue_credential};
use zklaims::prover::create_context;
use zklaims::verifier::verify_context;
use zklaims::{
    Credential, CredentialSchema, DirectoryStore, Error, IssuerKeypair, IssuerPublicKey,
    ProvingKey, Statement, VerificationKey, ZklaimsContext,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_SIGNATURE: u8 = 2;
const EXIT_SEMANTICS: u8 = 3;
const EXIT_PROOF: u8 = 4;
const EXIT_MALFORMED: u8 = 5;

#[derive(Parser)]
#[command(name = "zklaims", version, about = "Privacy-preserving attribute claims")]
struct Cli {
    /// Report format on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an issuer signing keypair
    Keygen(KeygenArgs),
    /// Work with credential schemas
    #[command(subcommand)]
    Schema(SchemaCmd),
    /// Run the trusted setup for a schema's circuit shape
    Setup(SetupArgs),
    /// Issue a signed credential over attribute values
    Issue(IssueArgs),
    /// Prove a statement about a credential, producing a claim context
    Prove(ProveArgs),
    /// Verify a claim context against a statement you choose
    Verify(VerifyArgs),
    /// Publish a record into a directory namespace
    Publish(PublishArgs),
    /// Fetch and authenticate a record from a directory
    Resolve(ResolveArgs),
    /// Measure setup/prove/verify cost as payload count grows
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum SchemaCmd {
    /// Author and validate a new schema
    New(SchemaArgs),
}

#[derive(Args)]
struct KeygenArgs {
    /// Where to write the secret keypair (JSON)
    #[arg(long, default_value = "issuer.json")]
    out: PathBuf,
    /// Also write the shareable public key here (JSON)
    #[arg(long)]
    public_out: Option<PathBuf>,
}

#[derive(Args)]
struct SchemaArgs {
    /// Schema identifier, e.g. "city.example/residents-v1"
    #[arg(long)]
    schema_id: String,
    /// Issuer keypair or public key file (JSON); fixes the issuer id
    #[arg(long)]
    issuer: PathBuf,
    /// Number of 256-bit payloads (1..=64); 5 slots each, last slot is the nonce
    #[arg(long)]
    payloads: u16,
    /// Comma-separated attribute labels, one per non-nonce slot
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
    /// Where to write the schema (JSON)
    #[arg(long, default_value = "schema.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SetupArgs {
    /// Schema file (JSON)
    #[arg(long)]
    schema: PathBuf,
    /// Where to write the proving key
    #[arg(long, default_value = "pk.bin")]
    pk_out: PathBuf,
    /// Where to write the verification key
    #[arg(long, default_value = "vk.bin")]
    vk_out: PathBuf,
    /// Where to write the constraint-system descriptor
    #[arg(long, default_value = "descriptor.bin")]
    descriptor_out: PathBuf,
    /// 64 hex chars; makes the setup deterministic (testing only, the seed
    /// reconstructs the toxic waste)
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct IssueArgs {
    /// Issuer secret keypair (JSON)
    #[arg(long)]
    key: PathBuf,
    /// Schema file (JSON)
    #[arg(long)]
    schema: PathBuf,
    /// Attribute values as a JSON object {label: integer-or-decimal-string}
    #[arg(long)]
    values: Option<PathBuf>,
    /// Single attribute as label=value, repeatable; overrides --values entries
    #[arg(long)]
    attr: Vec<String>,
    /// Where to write the credential (JSON)
    #[arg(long, default_value = "cred.json")]
    out: PathBuf,
}

#[derive(Args)]
struct ProveArgs {
    /// Proving key file
    #[arg(long)]
    pk: PathBuf,
    /// Credential file (JSON)
    #[arg(long)]
    credential: PathBuf,
    /// The statement: inline text like 'slot0 >= 18', or a file of clauses
    #[arg(long, conflicts_with = "claim")]
    statement: Option<String>,
    /// Single statement clause, repeatable (e.g. --claim "age >= 18")
    #[arg(long)]
    claim: Vec<String>,
    /// Schema file; enables label targets (otherwise use slot0, slot1, ...)
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Where to write the claim context (JSON)
    #[arg(long, default_value = "ctx.json")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verification key file
    #[arg(long)]
    vk: PathBuf,
    /// Issuer public key (JSON); the trust anchor
    #[arg(long, visible_alias = "issuer-pub")]
    issuer: PathBuf,
    /// Claim context file (JSON)
    #[arg(long)]
    context: PathBuf,
    /// The statement the context must prove: inline text or a file
    #[arg(long, visible_alias = "expect", conflicts_with = "claim")]
    statement: Option<String>,
    /// Single expected clause, repeatable
    #[arg(long)]
    claim: Vec<String>,
    /// Schema file; enables label targets and is cross-checked against the
    /// context's schema id
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct PublishArgs {
    /// Directory store root
    #[arg(long, env = "ZKLAIMS_STORE")]
    store: PathBuf,
    /// Issuer secret keypair (JSON); its id is the namespace
    #[arg(long)]
    key: PathBuf,
    /// Record label within the namespace
    #[arg(long)]
    label: String,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// File whose bytes become the record blob
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args)]
struct ResolveArgs {
    /// Directory store root
    #[arg(long, env = "ZKLAIMS_STORE")]
    store: PathBuf,
    /// 64-hex namespace id (the owner's issuer id)
    #[arg(long)]
    namespace: String,
    #[arg(long)]
    label: String,
    /// Where to write the record blob; omit to print metadata only
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the authenticated namespace owner key (JSON), usable as
    /// `verify --issuer`
    #[arg(long)]
    owner_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Payload counts: "1,2,3,4" or a range like "1..4" (inclusive)
    #[arg(long, visible_alias = "payloads", default_value = "1,2,3,4")]
    counts: String,
    /// Timed repetitions per data point (median is reported)
    #[arg(long, default_value_t = 3)]
    reps: u32,
    /// Where to write the CSV report; omit for stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Human,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum KindArg {
    Descriptor,
    #[value(alias = "vk")]
    VerificationKey,
    Context,
    Schema,
}

impl From<KindArg> for RecordKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Descriptor => RecordKind::Descriptor,
            KindArg::VerificationKey => RecordKind::VerificationKey,
            KindArg::Context => RecordKind::Context,
            KindArg::Schema => RecordKind::Schema,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_MALFORMED);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            match format {
                Format::Human => eprintln!("error: {e}"),
                Format::Json => {
                    eprintln!("{}", serde_json::json!({ "error": e.to_string() }))
                }
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let f = cli.format;
    match cli.command {
        Command::Keygen(a) => cmd_keygen(a, f),
        Command::Schema(SchemaCmd::New(a)) => cmd_schema(a, f),
        Command::Setup(a) => cmd_setup(a, f),
        Command::Issue(a) => cmd_issue(a, f),
        Command::Prove(a) => cmd_prove(a, f),
        Command::Verify(a) => cmd_verify(a, f),
        Command::Publish(a) => cmd_publish(a, f),
        Command::Resolve(a) => cmd_resolve(a, f),
        Command::Bench(a) => cmd_bench(a, f),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidRecordSignature(_) => EXIT_SIGNATURE,
        Error::KeyMismatch(_)
        | Error::UnsatisfiableStatement { .. }
        | Error::UnsatisfiedConstraints(_) => EXIT_SEMANTICS,
        Error::Parse(_)
        | Error::Range(_)
        | Error::Shape(_)
        | Error::Malformed(_)
        | Error::UnsupportedHash(_)
        | Error::UnsupportedSignature(_)
        | Error::UnknownSlot(_)
        | Error::MissingAttribute(_)
        | Error::DuplicateClause(_)
        | Error::NoncePredicateForbidden
        | Error::OversizeBlob { .. } => EXIT_MALFORMED,
        _ => EXIT_FAILURE,
    }
}

/// Print either the human lines or the JSON object, per `--format`.
fn emit(format: Format, human: impl FnOnce(), json: serde_json::Value) {
    match format {
        Format::Human => human(),
        Format::Json => println!("{json}"),
    }
}

// --- file helpers, with the path in the error message ---

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| io_ctx(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| io_ctx(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| io_ctx(path, e))
}

fn io_ctx(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

/// `--statement` accepts a file path or inline clause text; a real file
/// wins, otherwise the argument must look like clauses (contain an
/// operator) to guard against typo'd filenames parsing as garbage.
fn statement_text(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_text(path);
    }
    if arg.contains(['<', '>', '=', '!', '\n', '#']) {
        return Ok(arg.to_string());
    }
    Err(Error::NotFound(format!(
        "statement file {arg:?} does not exist (inline statements must contain an operator)"
    )))
}

fn load_statement(
    statement: Option<&str>,
    inline: &[String],
    schema: Option<&CredentialSchema>,
    slot_count: usize,
) -> Result<Statement, Error> {
    let text = match statement {
        Some(arg) => statement_text(arg)?,
        None if !inline.is_empty() => inline.join("\n"),
        None => {
            return Err(Error::Parse(
                "no statement given; pass --statement FILE_OR_TEXT or --claim CLAUSE".into(),
            ))
        }
    };
    match schema {
        Some(schema) => Statement::parse(&text, schema),
        None => Statement::parse_positional(&text, slot_count),
    }
}

fn load_schema(path: &Path) -> Result<CredentialSchema, Error> {
    CredentialSchema::from_json(&read_text(path)?)
}

fn cmd_keygen(a: KeygenArgs, format: Format) -> Result<ExitCode, Error> {
    let keypair = IssuerKeypair::generate();
    write_file(a.out.as_path(), keypair.to_json().as_bytes())?;
    if let Some(public_out) = &a.public_out {
        write_file(public_out, keypair.public().to_json().as_bytes())?;
    }
    emit(
        format,
        || {
            println!("issuer id: {}", keypair.issuer_id());
            println!("secret keypair written to {}", a.out.display());
        },
        serde_json::json!({
            "issuer_id": keypair.issuer_id(),
            "secret_path": a.out,
            "public_path": a.public_out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_schema(a: SchemaArgs, format: Format) -> Result<ExitCode, Error> {
    // Accept either key file; only the public half matters here.
    let text = read_text(a.issuer.as_path())?;
    let issuer_id = match IssuerKeypair::from_json(&text) {
        Ok(kp) => kp.issuer_id(),
        Err(_) => IssuerPublicKey::from_json(&text)?.issuer_id(),
    };
    let labels = a.labels.into_iter().filter(|l| !l.is_empty()).collect();
    let schema = CredentialSchema::new(a.schema_id, issuer_id, a.payloads, labels)?;
    write_file(a.out.as_path(), schema.to_json().as_bytes())?;
    emit(
        format,
        || {
            println!(
                "schema {} ({} payloads, {} attribute slots) written to {}",
                schema.schema_id,
                schema.payload_count,
                schema.nonce_slot(),
                a.out.display()
            )
        },
        serde_json::json!({
            "schema_id": schema.schema_id,
            "issuer_id": schema.issuer_id,
            "payloads": schema.payload_count,
            "attribute_slots": schema.nonce_slot(),
            "path": a.out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_setup(a: SetupArgs, format: Format) -> Result<ExitCode, Error> {
    let schema = load_schema(a.schema.as_path())?;
    let seed = a.seed.as_deref().map(parse_seed).transpose()?;
    let (descriptor, pk, vk) = bootstrap_issuer(&schema, seed)?;
    let pk_bytes = pk.to_bytes();
    let vk_bytes = vk.to_bytes();
    write_file(a.pk_out.as_path(), &pk_bytes)?;
    write_file(a.vk_out.as_path(), &vk_bytes)?;
    write_file(a.descriptor_out.as_path(), &descriptor.to_bytes())?;
    emit(
        format,
        || {
            println!(
                "circuit: {} payloads, {} constraints",
                descriptor.payload_count(),
                descriptor.constraint_count()
            );
            println!("proving key: {} bytes -> {}", pk_bytes.len(), a.pk_out.display());
            println!("verification key: {} bytes -> {}", vk_bytes.len(), a.vk_out.display());
            println!("descriptor -> {}", a.descriptor_out.display());
        },
        serde_json::json!({
            "payloads": descriptor.payload_count(),
            "constraints": descriptor.constraint_count(),
            "seeded": seed.is_some(),
            "pk_bytes": pk_bytes.len(),
            "vk_bytes": vk_bytes.len(),
            "pk_path": a.pk_out,
            "vk_path": a.vk_out,
            "descriptor_path": a.descriptor_out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_seed(s: &str) -> Result<[u8; 32], Error> {
    let bytes = hex::decode(s).map_err(|e| Error::Parse(format!("--seed: {e}")))?;
    bytes
        .try_into()
        .map_err(|_| Error::Parse("--seed must be 64 hex characters (32 bytes)".into()))
}

fn cmd_issue(a: IssueArgs, format: Format) -> Result<ExitCode, Error> {
    let keypair = IssuerKeypair::from_json(&read_text(a.key.as_path())?)?;
    let schema = load_schema(a.schema.as_path())?;
    let mut values = match &a.values {
        Some(path) => parse_values(&read_text(path)?)?,
        None => BTreeMap::new(),
    };
    for pair in &a.attr {
        let (label, raw) = pair.split_once('=').ok_or_else(|| {
            Error::Parse(format!("--attr {pair:?}: expected label=value"))
        })?;
        let value = raw
            .parse()
            .map_err(|_| Error::Parse(format!("--attr {label}: {raw:?} is not a decimal integer")))?;
        values.insert(label.to_string(), value);
    }
    if values.is_empty() {
        return Err(Error::Parse(
            "no attribute values given; pass --values FILE and/or --attr label=value".into(),
        ));
    }
    let credential = issue_credential(&keypair, &schema, &values)?;
    write_file(a.out.as_path(), credential.to_json().as_bytes())?;
    emit(
        format,
        || {
            println!(
                "credential for schema {} ({} payloads) written to {}",
                credential.schema_id,
                credential.payload_count(),
                a.out.display()
            )
        },
        serde_json::json!({
            "schema_id": credential.schema_id,
            "issuer_id": credential.issuer_id,
            "payloads": credential.payload_count(),
            "path": a.out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

/// `{"age": 41, "zip": "10115"}` — numbers or decimal strings, so values
/// near 2^50 survive JSON readers that round large integers.
fn parse_values(json: &str) -> Result<BTreeMap<String, u64>, Error> {
    let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(json)?;
    let mut out = BTreeMap::new();
    for (label, value) in map {
        let raw = match &value {
            serde_json::Value::Number(n) => n
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("attribute {label}: not a u64")))?,
            serde_json::Value::String(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("attribute {label}: {s:?} is not a decimal integer")))?,
            _ => {
                return Err(Error::Parse(format!(
                    "attribute {label}: expected an integer or decimal string"
                )))
            }
        };
        out.insert(label, raw);
    }
    Ok(out)
}

fn cmd_prove(a: ProveArgs, format: Format) -> Result<ExitCode, Error> {
    let pk = ProvingKey::from_bytes(&read_bytes(a.pk.as_path())?)?;
    let credential = Credential::from_json(&read_text(a.credential.as_path())?)?;
    let schema = a.schema.as_deref().map(load_schema).transpose()?;
    if let Some(schema) = &schema {
        if schema.schema_id != credential.schema_id {
            return Err(Error::KeyMismatch(format!(
                "--schema is {} but the credential was issued under {}",
                schema.schema_id, credential.schema_id
            )));
        }
    }
    let statement = load_statement(
        a.statement.as_deref(),
        &a.claim,
        schema.as_ref(),
        credential.attributes().len(),
    )?;
    let context = create_context(&pk, &credential, &statement)?;
    write_file(a.out.as_path(), context.to_json().as_bytes())?;
    emit(
        format,
        || {
            println!("proved:");
            for line in statement.render().lines() {
                println!("  {line}");
            }
            println!("claim context written to {}", a.out.display());
        },
        serde_json::json!({
            "statement": statement.render(),
            "proof_bytes": context.proof().to_bytes().len(),
            "path": a.out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs, format: Format) -> Result<ExitCode, Error> {
    let vk = VerificationKey::from_bytes(&read_bytes(a.vk.as_path())?)?;
    let issuer = IssuerPublicKey::from_json(&read_text(a.issuer.as_path())?)?;
    let context = ZklaimsContext::from_json(&read_text(a.context.as_path())?)?;
    let schema = a.schema.as_deref().map(load_schema).transpose()?;
    if let Some(schema) = &schema {
        if schema.schema_id != context.schema_id {
            return Err(Error::KeyMismatch(format!(
                "--schema is {} but the context claims schema {}",
                schema.schema_id, context.schema_id
            )));
        }
    }
    let expected = load_statement(
        a.statement.as_deref(),
        &a.claim,
        schema.as_ref(),
        context.public_input().slot_count(),
    )?;
    let report = verify_context(&vk, &issuer, &context, &expected)?;

    emit(
        format,
        || {
            let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
            println!("signature  {}", mark(report.signature_ok));
            println!("semantics  {}", mark(report.semantics_ok));
            println!("proof      {}", mark(report.proof_ok));
            match &report.failure_detail {
                None => println!("verdict    accept"),
                Some(detail) => println!("verdict    reject: {detail}"),
            }
        },
        serde_json::json!({
            "signature_ok": report.signature_ok,
            "semantics_ok": report.semantics_ok,
            "proof_ok": report.proof_ok,
            "overall": report.overall(),
            "failure_detail": report.failure_detail,
        }),
    );

    Ok(ExitCode::from(if !report.signature_ok {
        EXIT_SIGNATURE
    } else if !report.semantics_ok {
        EXIT_SEMANTICS
    } else if !report.proof_ok {
        EXIT_PROOF
    } else {
        0
    }))
}

fn cmd_publish(a: PublishArgs, format: Format) -> Result<ExitCode, Error> {
    let keypair = IssuerKeypair::from_json(&read_text(a.key.as_path())?)?;
    let blob = read_bytes(a.file.as_path())?;
    let store = DirectoryStore::open(&a.store);
    let record = store.publish(&keypair, &a.label, a.kind.into(), &blob)?;
    emit(
        format,
        || {
            println!(
                "published {} ({} bytes) as {}/{}",
                record.kind.as_str(),
                record.blob.len(),
                record.namespace_id,
                record.label
            )
        },
        serde_json::json!({
            "namespace": record.namespace_id,
            "label": record.label,
            "kind": record.kind.as_str(),
            "bytes": record.blob.len(),
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_resolve(a: ResolveArgs, format: Format) -> Result<ExitCode, Error> {
    let store = DirectoryStore::open(&a.store);
    let record = store.resolve(&a.namespace, &a.label)?;
    if let Some(owner_out) = &a.owner_out {
        let owner = store.owner_key(&a.namespace)?;
        write_file(owner_out, owner.to_json().as_bytes())?;
    }
    if let Some(path) = &a.out {
        write_file(path, &record.blob)?;
    }
    emit(
        format,
        || match &a.out {
            Some(path) => println!(
                "{}/{}: {} ({} bytes) -> {}",
                record.namespace_id,
                record.label,
                record.kind.as_str(),
                record.blob.len(),
                path.display()
            ),
            None => println!(
                "{}/{}: {} ({} bytes), signature ok",
                record.namespace_id,
                record.label,
                record.kind.as_str(),
                record.blob.len()
            ),
        },
        serde_json::json!({
            "namespace": record.namespace_id,
            "label": record.label,
            "kind": record.kind.as_str(),
            "bytes": record.blob.len(),
            "path": a.out,
            "owner_path": a.owner_out,
        }),
    );
    Ok(ExitCode::SUCCESS)
}

/// "1,2,3" or "1..4" / "1..=4" (both inclusive).
fn parse_counts(s: &str) -> Result<Vec<u16>, Error> {
    let bad = |what: &str| Error::Parse(format!("--counts: {what:?} is not a payload count"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u16 = lo.trim().parse().map_err(|_| bad(lo))?;
        let hi = hi.trim().strip_prefix('=').unwrap_or(hi).trim();
        let hi: u16 = hi.parse().map_err(|_| bad(hi))?;
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u16>().map_err(|_| bad(t)))
        .collect()
}

fn cmd_bench(a: BenchArgs, format: Format) -> Result<ExitCode, Error> {
    let counts = parse_counts(&a.counts)?;
    let report = bench::run_scaling(&counts, a.reps)?;
    let mut csv = Vec::new();
    bench::write_csv(&report, &mut csv)?;
    if let Some(path) = &a.out {
        write_file(path, &csv)?;
        eprintln!("bench report written to {}", path.display());
    }
    match format {
        Format::Human => {
            if a.out.is_none() {
                std::io::stdout().write_all(&csv)?;
            }
        }
        Format::Json => {
            let records: Vec<serde_json::Value> = report
                .records
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "payloads": r.payloads,
                        "setup_ms": r.setup_ms,
                        "prove_ms": r.prove_ms,
                        "verify_ms": r.verify_ms,
                        "pk_bytes": r.pk_bytes,
                        "vk_bytes": r.vk_bytes,
                        "proof_bytes": r.proof_bytes,
                        "reps": r.reps,
                    })
                })
                .collect();
            let linearity: Vec<serde_json::Value> = bench::linearity(&report)
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "metric": l.metric,
                        "per_payload_increments": l.increments,
                        "mean_increment": l.mean_increment,
                        "max_rel_deviation": l.max_rel_deviation,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "records": records,
                    "linearity": linearity,
                    "host": report.host,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
