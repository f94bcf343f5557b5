use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use grpiso::centrad::{check_central_radical, iso_centrad_witness, CentradError, FactorKind};
use grpiso::code::{code_equivalence, CodeError, LinearCode};
use grpiso::cohom::{iso_coset_central_elemab, CohomError};
use grpiso::coprime::{coprime_class, iso_hae, CoprimeClass, CoprimeError};
use grpiso::corpus::{central_corpus, coprime_corpus, family_pairs, named_coprime, oracle_cost, CorpusEntry};
use grpiso::exec;
use grpiso::group::{
    build_group, oracle_aut_guarded, oracle_iso, parse_descriptor, CayleyTable, GroupError, GroupHom, ORACLE_GUARD,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{parse_cayley, write_cayley, CayleyFileError};
use crate::report::{RunReport, Timings, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] CayleyFileError),
    #[error("not in any supported class\n{0}")]
    NotInAnyClass(String),
    #[error("order {order} exceeds the oracle guard {guard}")]
    Guard { order: usize, guard: usize },
    #[error(transparent)]
    Coprime(#[from] CoprimeError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Centrad(#[from] CentradError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("witness returned by {0} failed validation")]
    BadWitness(String),
    #[error("corpus spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Auto,
    Coprime,
    Central,
    Centrad,
    Oracle,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Coprime => "coprime",
            Strategy::Central => "central",
            Strategy::Centrad => "centrad",
            Strategy::Oracle => "oracle",
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn echo(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Class tags of a group.
pub fn classify(g: &CayleyTable) -> Vec<String> {
    let mut tags = Vec::new();
    if let Ok(c) = coprime_class(g) {
        if c <= CoprimeClass::Elementary {
            tags.push("HEE".to_string());
        }
        if c <= CoprimeClass::ProductOfElementary {
            tags.push("HprodE".to_string());
        }
        tags.push("HAE".to_string());
    }
    if let Ok(d) = check_central_radical(g) {
        tags.push(
            match d.kind {
                FactorKind::Simple => "CentralRadicalSimple",
                FactorKind::PerfectBounded => "CentralRadicalPerfectBounded",
            }
            .to_string(),
        );
    }
    tags
}

fn run_oracle(g1: &CayleyTable, g2: &CayleyTable, guard: usize) -> Result<Option<GroupHom>, CliError> {
    let order = g1.order().max(g2.order());
    if order > guard {
        return Err(CliError::Guard { order, guard });
    }
    Ok(oracle_iso(g1, g2))
}

/// Pick a strategy by class membership. Membership in either class is an
/// isomorphism invariant, so a pair split by a class is decided on the spot.
fn auto_decide(g1: &CayleyTable, g2: &CayleyTable) -> Result<(Option<GroupHom>, bool, String), CliError> {
    let (c1, c2) = (coprime_class(g1), coprime_class(g2));
    match (&c1, &c2) {
        (Ok(_), Ok(_)) => {
            let w = iso_hae(g1, g2)?;
            return Ok((w.clone(), w.is_some(), "coprime".into()));
        }
        (Ok(_), Err(_)) | (Err(_), Ok(_)) => return Ok((None, false, "coprime (class differs)".into())),
        _ => {}
    }
    let (r1, r2) = (check_central_radical(g1), check_central_radical(g2));
    match (&r1, &r2) {
        (Ok(_), Ok(_)) => {
            let w = iso_centrad_witness(g1, g2)?;
            Ok((w.clone(), w.is_some(), "centrad".into()))
        }
        (Ok(_), Err(_)) | (Err(_), Ok(_)) => Ok((None, false, "centrad (class differs)".into())),
        (Err(e1), Err(e2)) => Err(CliError::NotInAnyClass(format!(
            "G1: coprime: {}; central-radical: {}\nG2: coprime: {}; central-radical: {}",
            c1.unwrap_err(),
            e1,
            c2.unwrap_err(),
            e2
        ))),
    }
}

fn decide(
    g1: &CayleyTable,
    g2: &CayleyTable,
    strategy: Strategy,
    guard: usize,
) -> Result<(Option<GroupHom>, bool, String), CliError> {
    let w = match strategy {
        Strategy::Auto => return auto_decide(g1, g2),
        Strategy::Coprime => iso_hae(g1, g2)?,
        Strategy::Central => iso_coset_central_elemab(g1, g2)?.isomorphism,
        Strategy::Centrad => iso_centrad_witness(g1, g2)?,
        Strategy::Oracle => run_oracle(g1, g2, guard)?,
    };
    let found = w.is_some();
    Ok((w, found, strategy.name().into()))
}

/// Decide isomorphism of two tables and validate any witness.
pub fn iso_tables(
    g1: &CayleyTable,
    g2: &CayleyTable,
    strategy: Strategy,
    guard: usize,
    command: Vec<String>,
) -> Result<RunReport, CliError> {
    let t = Instant::now();
    let (res, cost) = exec::measure(|| decide(g1, g2, strategy, guard));
    let decide_ms = ms(t);
    let (witness, verdict, used) = res?;
    if let Some(w) = &witness {
        if !w.is_isomorphism(g1, g2) {
            return Err(CliError::BadWitness(used));
        }
    }
    Ok(RunReport {
        command,
        verdict: Verdict::Decision(verdict),
        witness: witness.map(|w| w.image),
        strategy: used,
        timings: Timings { parse_ms: 0.0, decide_ms },
        work: cost.work,
        span: cost.span,
    })
}

pub fn cmd_iso(path1: &Path, path2: &Path, strategy: Strategy, guard: usize) -> Result<RunReport, CliError> {
    let t = Instant::now();
    let g1 = parse_cayley(path1)?;
    let g2 = parse_cayley(path2)?;
    let parse_ms = ms(t);
    let command = echo(&["iso", &path_str(path1), &path_str(path2), "--strategy", strategy.name()]);
    let mut r = iso_tables(&g1, &g2, strategy, guard, command)?;
    r.timings.parse_ms = parse_ms;
    Ok(r)
}

pub fn cmd_classify(path: &Path) -> Result<RunReport, CliError> {
    let t = Instant::now();
    let g = parse_cayley(path)?;
    let parse_ms = ms(t);
    let t = Instant::now();
    let (tags, cost) = exec::measure(|| classify(&g));
    Ok(RunReport {
        command: echo(&["classify", &path_str(path)]),
        verdict: Verdict::Tags(tags),
        witness: None,
        strategy: "classify".into(),
        timings: Timings { parse_ms, decide_ms: ms(t) },
        work: cost.work,
        span: cost.span,
    })
}

fn guard_error(e: GroupError) -> CliError {
    match e {
        GroupError::TooLarge { order, guard } => CliError::Guard { order, guard },
        e => e.into(),
    }
}

/// Oracle isomorphism of two tables, or the automorphism count of one.
pub fn cmd_oracle(path1: &Path, path2: Option<&Path>, guard: usize) -> Result<RunReport, CliError> {
    let Some(path2) = path2 else {
        let t = Instant::now();
        let g = parse_cayley(path1)?;
        let parse_ms = ms(t);
        let t = Instant::now();
        let (auts, cost) = exec::measure(|| oracle_aut_guarded(&g, guard));
        return Ok(RunReport {
            command: echo(&["oracle", &path_str(path1)]),
            verdict: Verdict::Count(auts.map_err(guard_error)?.len() as u128),
            witness: None,
            strategy: "oracle".into(),
            timings: Timings { parse_ms, decide_ms: ms(t) },
            work: cost.work,
            span: cost.span,
        });
    };
    let mut r = cmd_iso(path1, path2, Strategy::Oracle, guard)?;
    r.command[0] = "oracle".into();
    r.command.truncate(3);
    Ok(r)
}

pub fn cmd_codeq(path1: &Path, path2: &Path) -> Result<RunReport, CliError> {
    let t = Instant::now();
    let c1 = LinearCode::parse(&std::fs::read_to_string(path1)?)?;
    let c2 = LinearCode::parse(&std::fs::read_to_string(path2)?)?;
    let parse_ms = ms(t);
    let t = Instant::now();
    let (eq, cost) = exec::measure(|| code_equivalence(&c1, &c2));
    let eq = eq?;
    Ok(RunReport {
        command: echo(&["codeq", &path_str(path1), &path_str(path2)]),
        verdict: Verdict::Coset { size: eq.size(), representative: eq.rep.as_ref().map(|p| p.images()) },
        witness: None,
        strategy: "code_equivalence".into(),
        timings: Timings { parse_ms, decide_ms: ms(t) },
        work: cost.work,
        span: cost.span,
    })
}

/// Build a table from a descriptor, relabelled when a seed is given.
pub fn cmd_build(descriptor: &str, seed: Option<u64>) -> Result<CayleyTable, CliError> {
    let mut d = parse_descriptor(descriptor)?;
    if let Some(s) = seed {
        d = d.relabel(s);
    }
    Ok(build_group(&d)?)
}

/// Corpus generation settings, read from a TOML file. Missing keys take the
/// defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSpec {
    pub max_order: usize,
    /// Every n-th sweep group gets a conjugated copy; 0 disables copies.
    pub duplicate_every: usize,
    pub seed: u64,
    pub named: bool,
    pub central: bool,
    /// Pairs whose oracle search bound exceeds this get no expected verdict.
    pub oracle_budget: f64,
    pub guard_order: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_order: 200,
            duplicate_every: 5,
            seed: 0,
            named: true,
            central: true,
            oracle_budget: 1e5,
            guard_order: ORACLE_GUARD,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestGroup {
    pub file: String,
    pub name: String,
    pub descriptor: String,
    pub family: String,
    pub order: usize,
    pub duplicate_of: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestPair {
    pub first: usize,
    pub second: usize,
    /// Oracle verdict, or `None` when the oracle was out of budget.
    pub expected: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub spec: CorpusSpec,
    pub groups: Vec<ManifestGroup>,
    pub pairs: Vec<ManifestPair>,
}

pub fn read_corpus_spec(path: Option<&Path>) -> Result<CorpusSpec, CliError> {
    match path {
        None => Ok(CorpusSpec::default()),
        Some(p) => toml::from_str(&std::fs::read_to_string(p)?).map_err(|e| CliError::Spec(e.to_string())),
    }
}

/// Write every corpus group as `<name>.cayley` under `out` plus `manifest.json`.
pub fn cmd_corpus(spec: &CorpusSpec, out: &Path) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(out)?;
    let mut entries: Vec<CorpusEntry> = coprime_corpus(spec.max_order, spec.duplicate_every, spec.seed);
    if spec.named {
        entries.extend(named_coprime());
    }
    if spec.central {
        entries.extend(central_corpus());
    }
    let tables = entries.iter().map(|e| build_group(&e.descriptor)).collect::<Result<Vec<_>, _>>()?;
    let mut groups = Vec::with_capacity(entries.len());
    for (e, t) in entries.iter().zip(&tables) {
        let file = format!("{}.cayley", e.name);
        write_cayley(t, &out.join(&file))?;
        groups.push(ManifestGroup {
            file,
            name: e.name.clone(),
            descriptor: e.descriptor.to_string(),
            family: e.family.clone(),
            order: t.order(),
            duplicate_of: e.duplicate_of,
        });
    }
    let pairs = family_pairs(&entries)
        .into_iter()
        .map(|(i, j)| {
            let (a, b) = (&tables[i], &tables[j]);
            let feasible = a.order() <= spec.guard_order && oracle_cost(a, b) <= spec.oracle_budget;
            ManifestPair { first: i, second: j, expected: feasible.then(|| oracle_iso(a, b).is_some()) }
        })
        .collect();
    let manifest = Manifest { spec: spec.clone(), groups, pairs };
    std::fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
    Ok(manifest)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRun {
    pub workers: usize,
    pub report: RunReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub runs: Vec<ProfileRun>,
    /// Verdict, witness, work and span agree across all worker counts.
    pub deterministic: bool,
}

/// Run the same isomorphism test under several worker counts.
pub fn cmd_profile(
    path1: &Path,
    path2: &Path,
    strategy: Strategy,
    guard: usize,
    workers: &[usize],
) -> Result<ProfileReport, CliError> {
    let g1 = parse_cayley(path1)?;
    let g2 = parse_cayley(path2)?;
    let mut runs = Vec::new();
    for &w in workers {
        let command = echo(&["profile", &path_str(path1), &path_str(path2), "--workers", &w.to_string()]);
        let report = exec::with_workers(w, || iso_tables(&g1, &g2, strategy, guard, command))?;
        runs.push(ProfileRun { workers: w, report });
    }
    let deterministic = runs.windows(2).all(|p| p[0].report.deterministic_part() == p[1].report.deterministic_part());
    Ok(ProfileReport { runs, deterministic })
}

