//! `dtsconv`: construct LDPC convolutional codes from difference triangle
//! sets, analyse their degrees and distances, enumerate cycles against the
//! full rank condition, certify field-size bounds, search for collections,
//! and export parity-check matrices in alist format.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dtsconv_core::analysis::{self, FreeDistanceStatus};
use dtsconv_core::bounds;
use dtsconv_core::construction::{
    CodeDescriptor, ConstructionError, ExplicitValue, SupportAssignment, Variant,
};
use dtsconv_core::cycles;
use dtsconv_core::dts::{self, DifferenceTriangleSet, DtsMode};
use dtsconv_core::field::FiniteField;
use dtsconv_core::matrix::FieldMatrix;
use dtsconv_core::{Budget, BudgetMeter};

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "dtsconv",
    version,
    about = "LDPC convolutional codes from difference triangle sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the base, sliding-window, and polynomial parity-check matrices.
    Construct(ConstructArgs),
    /// Degree, distance, and density report for one code.
    Analyze(AnalyzeArgs),
    /// Enumerate window cycles and check the full rank condition.
    Cycles(CyclesArgs),
    /// Certify which field-size bounds the code satisfies.
    Bounds(BoundsArgs),
    /// Search for a minimal-scope difference triangle set.
    SearchDts(SearchDtsArgs),
    /// Export the sliding window as an alist file plus a value sidecar.
    Export(ExportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Alist,
}

#[derive(Args)]
struct ConstructArgs {
    /// Descriptor JSON file.
    #[arg(long)]
    descriptor: PathBuf,
    /// Output directory for the matrix dumps.
    #[arg(long)]
    out: PathBuf,
    /// Truncation index for the sliding window (defaults to the memory).
    #[arg(long)]
    j: Option<usize>,
    /// Seed override for the seeded value assignment.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    descriptor: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest truncation index for the column-distance profile.
    #[arg(long)]
    j: Option<usize>,
    /// Step budget for the distance searches (overrides DTSCONV_BUDGET).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CyclesArgs {
    #[arg(long)]
    descriptor: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest half-length to enumerate (defaults to the structural bound).
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    descriptor: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SearchDtsArgs {
    /// Number of sets.
    #[arg(long)]
    k: usize,
    /// Elements per set.
    #[arg(long)]
    w: usize,
    /// Validation mode: weak, strict, or relaxed.
    #[arg(long)]
    mode: String,
    /// Modulus for relaxed mode.
    #[arg(long)]
    d: Option<u64>,
    /// Give up beyond this scope.
    #[arg(long)]
    max_scope: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    descriptor: PathBuf,
    /// Output directory for matrix.alist and matrix.values.
    #[arg(long)]
    out: PathBuf,
    /// Truncation index of the exported window (defaults to the memory).
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Alist)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
}

// ---------------------------------------------------------------------------
// Descriptor JSON schema
// ---------------------------------------------------------------------------

fn default_extension() -> u32 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DtsSpec {
    sets: Vec<Vec<u64>>,
    /// "weak", "strict", or "relaxed".
    mode: String,
    /// Modulus, required for relaxed mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueSpec {
    /// 1-based row in the base matrix.
    row: usize,
    /// 1-based information column.
    col: usize,
    /// Field element in polynomial-basis encoding.
    value: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorSpec {
    n: usize,
    k: usize,
    /// Field characteristic.
    p: u64,
    /// Extension degree; the field is GF(p^N).
    #[serde(rename = "N", default = "default_extension")]
    extension: u32,
    /// "ones", "seeded", "alpha", "shifted-alpha", or "explicit".
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Shift base for the shifted-alpha variant.
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    shift_base: Option<u64>,
    /// Explicit entry values for the explicit variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<ValueSpec>>,
    dts: DtsSpec,
}

impl DtsSpec {
    fn mode(&self) -> Result<DtsMode> {
        match (self.mode.as_str(), self.d) {
            ("weak", None) => Ok(DtsMode::Weak),
            ("strict", None) => Ok(DtsMode::Strict),
            ("relaxed", Some(d)) => Ok(DtsMode::Relaxed { d }),
            ("relaxed", None) => bail!("relaxed mode requires the modulus field \"d\""),
            ("weak" | "strict", Some(_)) => {
                bail!("the modulus field \"d\" only applies to relaxed mode")
            }
            (other, _) => bail!("unknown mode {other:?} (expected weak, strict, or relaxed)"),
        }
    }

    fn from_collection(dts: &DifferenceTriangleSet) -> Self {
        let (mode, d) = match dts.mode() {
            DtsMode::Weak => ("weak", None),
            DtsMode::Strict => ("strict", None),
            DtsMode::Relaxed { d } => ("relaxed", Some(d)),
        };
        DtsSpec {
            sets: dts.sets().to_vec(),
            mode: mode.to_string(),
            d,
        }
    }
}

fn load_spec(path: &Path) -> Result<DescriptorSpec> {
    let raw = fs::read_to_string(path)
        .with_context(|| format!("cannot read descriptor {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| {
        format!(
            "descriptor {} is not valid JSON for the schema",
            path.display()
        )
    })
}

/// Builds the code descriptor, with the command-line seed taking precedence
/// over the descriptor's own seed field.
fn build_descriptor(spec: &DescriptorSpec, cli_seed: Option<u64>) -> Result<CodeDescriptor> {
    let mode = spec.dts.mode()?;
    let dts = DifferenceTriangleSet::new(spec.dts.sets.clone(), mode)
        .context("invalid difference triangle sets")?;
    let field = FiniteField::new(spec.p, spec.extension)
        .with_context(|| format!("invalid field GF({}^{})", spec.p, spec.extension))?;

    let forbid = |field: &str, ok: bool| -> Result<()> {
        if ok {
            Ok(())
        } else {
            bail!(
                "field {field:?} does not apply to variant {:?}",
                spec.variant
            )
        }
    };
    let variant = match spec.variant.as_str() {
        "ones" => {
            forbid("seed", spec.seed.is_none())?;
            forbid("P", spec.shift_base.is_none())?;
            forbid("values", spec.values.is_none())?;
            Variant::Support(SupportAssignment::Ones)
        }
        "seeded" => {
            forbid("P", spec.shift_base.is_none())?;
            forbid("values", spec.values.is_none())?;
            Variant::Support(SupportAssignment::Seeded(
                cli_seed.or(spec.seed).unwrap_or(0),
            ))
        }
        "alpha" => {
            forbid("seed", spec.seed.is_none())?;
            forbid("P", spec.shift_base.is_none())?;
            forbid("values", spec.values.is_none())?;
            Variant::AlphaPowers
        }
        "shifted-alpha" => {
            forbid("seed", spec.seed.is_none())?;
            forbid("values", spec.values.is_none())?;
            let base = spec
                .shift_base
                .ok_or_else(|| anyhow!("variant \"shifted-alpha\" requires the field \"P\""))?;
            Variant::ShiftedAlphaPowers { shift_base: base }
        }
        "explicit" => {
            forbid("seed", spec.seed.is_none())?;
            forbid("P", spec.shift_base.is_none())?;
            let values = spec
                .values
                .as_ref()
                .ok_or_else(|| anyhow!("variant \"explicit\" requires the field \"values\""))?;
            Variant::Support(SupportAssignment::Explicit(
                values
                    .iter()
                    .map(|v| ExplicitValue {
                        row: v.row,
                        col: v.col,
                        value: v.value,
                    })
                    .collect(),
            ))
        }
        other => bail!(
            "unknown variant {other:?} (expected ones, seeded, alpha, shifted-alpha, or explicit)"
        ),
    };

    let descriptor =
        CodeDescriptor::new(spec.n, spec.k, field, variant, dts).map_err(|e| match e {
            ConstructionError::BadRate { n, k } => {
                anyhow!("n > k required (got n = {n}, k = {k})")
            }
            other => anyhow!(other),
        })?;

    let report = descriptor.dts().validate();
    if !report.is_valid() {
        eprintln!(
            "warning: collection violates its declared {} mode ({} repeated difference{})",
            descriptor.dts().mode(),
            report.violations.len(),
            if report.violations.len() == 1 {
                ""
            } else {
                "s"
            }
        );
    }
    Ok(descriptor)
}

fn budget(cli: Option<u64>) -> Budget {
    cli.map(Budget::new).unwrap_or_else(Budget::from_env)
}

fn meter_for(cli: Option<u64>) -> BudgetMeter {
    budget(cli).meter()
}

/// Prints to stdout or writes to a file, always newline-terminated.
fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    let text = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(args: &ConstructArgs) -> Result<()> {
    let spec = load_spec(&args.descriptor)?;
    let descriptor = build_descriptor(&spec, args.seed)?;
    let base = descriptor.build()?;
    let j = args.j.unwrap_or(descriptor.mu());
    let window = base.truncated(j);

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;

    let hz = {
        let mut out = String::new();
        for i in 0..=descriptor.mu() {
            out.push_str(&format!("# z^{i}\n"));
            out.push_str(&base.coefficient(i).text_dump());
        }
        out
    };
    // Canonical descriptor echo: stable field order and spacing, so the
    // hash only depends on the mathematical content.
    let canonical = format!("{}\n", serde_json::to_string_pretty(&spec)?);
    let digest = hex_digest(canonical.as_bytes());

    let files = [
        ("hbar.txt", base.matrix().text_dump()),
        ("sliding.txt", window.matrix().text_dump()),
        ("hz.txt", hz),
        ("descriptor.json", canonical),
        ("descriptor.sha256", format!("{digest}\n")),
    ];
    for (name, content) in files {
        fs::write(args.out.join(name), content).with_context(|| format!("cannot write {name}"))?;
    }

    println!(
        "constructed (n, k) = ({}, {}) over GF({}^{}): memory {}, window {}x{}",
        descriptor.n(),
        descriptor.k(),
        spec.p,
        spec.extension,
        descriptor.mu(),
        window.matrix().rows(),
        window.matrix().cols(),
    );
    println!("descriptor sha256 {digest}");
    Ok(())
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DegreeFacts {
    delta: usize,
    reduced: bool,
    basic: bool,
    top_block_full_rank: bool,
    row_degrees: Vec<usize>,
}

#[derive(Serialize)]
struct FreeDistanceFacts {
    lower: usize,
    upper: usize,
    status: String,
}

#[derive(Serialize)]
struct DensityFacts {
    n_total: u64,
    numerator: u64,
    denominator: u64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    k: usize,
    p: u64,
    extension: u32,
    q: u64,
    mu: usize,
    degree: DegreeFacts,
    column_distances: Vec<usize>,
    free_distance: FreeDistanceFacts,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<DensityFacts>,
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let spec = load_spec(&args.descriptor)?;
    let descriptor = build_descriptor(&spec, args.seed)?;
    let base = descriptor.build()?;
    let mu = descriptor.mu();
    let j = args.j.unwrap_or(mu);

    let degree = analysis::degree_report(&base)?;
    let profile = analysis::column_distances(&base, j, &mut meter_for(args.budget))?;
    let free = analysis::free_distance(&base, &mut meter_for(args.budget))?;
    // Density defaults to the canonical window length (mu + 1 blocks).
    let density = descriptor.dts().uniform_weight().map(|w| {
        let n_total = ((mu + 1) * descriptor.n()) as u64;
        let ratio = analysis::density(
            descriptor.n() as u64,
            descriptor.k() as u64,
            w as u64,
            mu as u64,
            n_total,
        )
        .expect("window length is a positive multiple of n");
        DensityFacts {
            n_total,
            numerator: *ratio.numer(),
            denominator: *ratio.denom(),
        }
    });

    let report = AnalyzeReport {
        n: descriptor.n(),
        k: descriptor.k(),
        p: spec.p,
        extension: spec.extension,
        q: descriptor.field().order(),
        mu,
        degree: DegreeFacts {
            delta: degree.delta,
            reduced: degree.reduced,
            basic: degree.basic,
            top_block_full_rank: degree.top_block_full_rank,
            row_degrees: degree.row_degrees,
        },
        column_distances: profile,
        free_distance: FreeDistanceFacts {
            lower: free.lower,
            upper: free.upper,
            status: match free.status {
                FreeDistanceStatus::Exact => "exact".to_string(),
                FreeDistanceStatus::LowerBounded => "lower-bounded".to_string(),
            },
        },
        density,
    };

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "(n, k) = ({}, {}) over GF({}^{}), memory {}\n",
                report.n, report.k, report.p, report.extension, report.mu
            ));
            s.push_str(&format!(
                "degree {} (reduced: {}, basic: {}, top block full rank: {})\n",
                report.degree.delta,
                report.degree.reduced,
                report.degree.basic,
                report.degree.top_block_full_rank
            ));
            let profile: Vec<String> = report
                .column_distances
                .iter()
                .map(|d| d.to_string())
                .collect();
            s.push_str(&format!("column distances: {}\n", profile.join(", ")));
            s.push_str(&format!(
                "free distance: {} ({})\n",
                report.free_distance.lower, report.free_distance.status
            ));
            if let Some(d) = &report.density {
                s.push_str(&format!(
                    "density at length {}: {}/{}\n",
                    d.n_total, d.numerator, d.denominator
                ));
            }
            s
        }
        Format::Alist => bail!("analyze does not produce alist output"),
    };
    emit(&args.out, &text)
}

// ---------------------------------------------------------------------------
// cycles
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(untagged)]
enum GirthValue {
    Length(usize),
    Unbounded(&'static str),
}

#[derive(Serialize)]
struct CycleCmdReport {
    lmax: usize,
    total_cycles: usize,
    girth: GirthValue,
    /// Cycle counts keyed by full cycle length.
    cycles_per_length: BTreeMap<usize, usize>,
    /// Full-rank-condition violations keyed by full cycle length.
    violations_per_length: BTreeMap<usize, usize>,
    frc_satisfied: bool,
}

fn structural_half_length_bound(descriptor: &CodeDescriptor) -> usize {
    let nk = descriptor.n() - descriptor.k();
    ((descriptor.mu() + 1) * nk).min((descriptor.mu() + 1) * descriptor.k())
}

fn cmd_cycles(args: &CyclesArgs) -> Result<()> {
    let spec = load_spec(&args.descriptor)?;
    let descriptor = build_descriptor(&spec, args.seed)?;
    let base = descriptor.build()?;
    let window = base.sliding_window();
    let lmax = args
        .lmax
        .unwrap_or_else(|| structural_half_length_bound(&descriptor));

    let mut meter = meter_for(args.budget);
    let all = cycles::enumerate_cycles(window.matrix(), lmax, &mut meter)?;
    let frc = cycles::frc_report(window.matrix(), lmax, &mut meter)?;

    let mut cycles_per_length = BTreeMap::new();
    for c in &all {
        *cycles_per_length.entry(c.length()).or_insert(0usize) += 1;
    }
    let mut violations_per_length = BTreeMap::new();
    for c in &frc.violations {
        *violations_per_length.entry(c.length()).or_insert(0usize) += 1;
    }
    let girth = match all.iter().map(cycles::Cycle::length).min() {
        Some(g) => GirthValue::Length(g),
        None => GirthValue::Unbounded("infinity"),
    };
    let report = CycleCmdReport {
        lmax,
        total_cycles: frc.total_cycles,
        girth,
        cycles_per_length,
        violations_per_length,
        frc_satisfied: frc.violations.is_empty(),
    };

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("half-lengths up to {}\n", report.lmax));
            s.push_str(&format!("total cycles: {}\n", report.total_cycles));
            match report.girth {
                GirthValue::Length(g) => s.push_str(&format!("girth: {g}\n")),
                GirthValue::Unbounded(w) => s.push_str(&format!("girth: {w}\n")),
            }
            for (len, count) in &report.cycles_per_length {
                let violations = report.violations_per_length.get(len).copied().unwrap_or(0);
                s.push_str(&format!(
                    "length {len}: {count} cycles, {violations} full-rank-condition violations\n"
                ));
            }
            s.push_str(&format!(
                "full rank condition satisfied: {}\n",
                report.frc_satisfied
            ));
            s
        }
        Format::Alist => bail!("cycles does not produce alist output"),
    };
    emit(&args.out, &text)
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let spec = load_spec(&args.descriptor)?;
    let descriptor = build_descriptor(&spec, args.seed)?;
    let report = bounds::certify(&descriptor, &mut meter_for(args.budget))?;

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "q = {} (characteristic {}, extension degree {})\n",
                report.q, report.p, report.extension
            ));
            for entry in &report.entries {
                let threshold = match entry.threshold {
                    Some(t) => format!("threshold {t}"),
                    None => "structural".to_string(),
                };
                s.push_str(&format!(
                    "{}: {}, {} -> {}\n",
                    entry.id,
                    threshold,
                    if entry.satisfied {
                        "satisfied"
                    } else {
                        "not satisfied"
                    },
                    entry.guarantee
                ));
                for side in &entry.side_conditions {
                    s.push_str(&format!(
                        "  [{}] {}\n",
                        if side.holds { "ok" } else { "unmet" },
                        side.description
                    ));
                }
            }
            s
        }
        Format::Alist => bail!("bounds does not produce alist output"),
    };
    emit(&args.out, &text)
}

// ---------------------------------------------------------------------------
// search-dts
// ---------------------------------------------------------------------------

/// Search result; when found, the flattened collection fields (`sets`,
/// `mode`, `d`) can be pasted verbatim as a descriptor's `dts` object.
#[derive(Serialize)]
struct SearchOutcome {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    scope: Option<u64>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    dts: Option<DtsSpec>,
}

fn cmd_search_dts(args: &SearchDtsArgs) -> Result<()> {
    let mode = DtsSpec {
        sets: Vec::new(),
        mode: args.mode.clone(),
        d: args.d,
    }
    .mode()?;
    let found = dts::search_min_scope(
        args.k,
        args.w,
        mode,
        args.max_scope,
        &mut meter_for(args.budget),
    )?;

    let outcome = match &found {
        Some(dts) => SearchOutcome {
            found: true,
            scope: Some(dts.scope()),
            dts: Some(DtsSpec::from_collection(dts)),
        },
        None => SearchOutcome {
            found: false,
            scope: None,
            dts: None,
        },
    };

    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&outcome)?,
        Format::Text => match &found {
            Some(dts) => {
                let sets: Vec<String> = dts
                    .sets()
                    .iter()
                    .map(|s| {
                        let elements: Vec<String> = s.iter().map(|e| e.to_string()).collect();
                        format!("{{{}}}", elements.join(", "))
                    })
                    .collect();
                format!("found scope {}: {}\n", dts.scope(), sets.join(" "))
            }
            None => "no collection within the scope cap\n".to_string(),
        },
        Format::Alist => bail!("search-dts does not produce alist output"),
    };
    emit(&args.out, &text)
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

/// MacKay alist of the nonzero pattern: `cols rows`, largest column/row
/// weights, per-column weights, per-row weights, then 1-based row indices
/// per column and column indices per row. Unpadded, single spaces,
/// newline-terminated.
fn alist(m: &FieldMatrix) -> String {
    let (rows, cols) = (m.rows(), m.cols());
    let col_supports: Vec<Vec<usize>> = (0..cols).map(|c| m.column_support(c)).collect();
    let mut row_supports: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for (c, support) in col_supports.iter().enumerate() {
        for &r in support {
            row_supports[r].push(c);
        }
    }
    let join = |values: &[usize], offset: usize| -> String {
        values
            .iter()
            .map(|v| (v + offset).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("{cols} {rows}\n"));
    out.push_str(&format!(
        "{} {}\n",
        col_supports.iter().map(Vec::len).max().unwrap_or(0),
        row_supports.iter().map(Vec::len).max().unwrap_or(0)
    ));
    let col_weights: Vec<usize> = col_supports.iter().map(Vec::len).collect();
    let row_weights: Vec<usize> = row_supports.iter().map(Vec::len).collect();
    out.push_str(&format!("{}\n", join(&col_weights, 0)));
    out.push_str(&format!("{}\n", join(&row_weights, 0)));
    for support in &col_supports {
        out.push_str(&format!("{}\n", join(support, 1)));
    }
    for support in &row_supports {
        out.push_str(&format!("{}\n", join(support, 1)));
    }
    out
}

/// Value sidecar: header `p N`, then one line per row holding the discrete
/// logs of that row's nonzero entries in ascending column order.
fn value_sidecar(m: &FieldMatrix) -> String {
    let mut out = format!("{} {}\n", m.field().p(), m.field().extension_degree());
    for r in 0..m.rows() {
        let logs: Vec<String> = (0..m.cols())
            .filter_map(|c| m.get(r, c).log().map(|l| l.to_string()))
            .collect();
        out.push_str(&logs.join(" "));
        out.push('\n');
    }
    out
}

fn cmd_export(args: &ExportArgs) -> Result<()> {
    let spec = load_spec(&args.descriptor)?;
    let descriptor = build_descriptor(&spec, args.seed)?;
    let base = descriptor.build()?;
    let j = args.j.unwrap_or(descriptor.mu());
    let window = base.truncated(j);
    let m = window.matrix();

    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    match args.format {
        Format::Alist => {
            fs::write(args.out.join("matrix.alist"), alist(m)).context("cannot write alist")?;
            fs::write(args.out.join("matrix.values"), value_sidecar(m))
                .context("cannot write value sidecar")?;
            println!(
                "exported {}x{} window to {}",
                m.rows(),
                m.cols(),
                args.out.join("matrix.alist").display()
            );
        }
        Format::Text => {
            fs::write(args.out.join("matrix.txt"), m.support_dump())
                .context("cannot write support dump")?;
            println!(
                "exported {}x{} support pattern to {}",
                m.rows(),
                m.cols(),
                args.out.join("matrix.txt").display()
            );
        }
        Format::Json => bail!("export produces alist or text, not json"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Cycles(args) => cmd_cycles(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::SearchDts(args) => cmd_search_dts(args),
        Command::Export(args) => cmd_export(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
