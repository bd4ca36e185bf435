//! Command-line driver: computations and named verification suites, with
//! JSON-lines reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cohomring::GradedRingPresentation;
use crate::error::{Error, Result};
use crate::exactalg::CoeffRing;
use crate::groups::FiniteGroup;
use crate::homalg::{carlson_module, CohomologyClass};
use crate::lattices::{random_lattice, Lattice};
use crate::spectrum::{quillen_check, stmod_spectrum, Inclusion, SpecHModel};
use crate::stmod::{
    check_split_exact, chouinard_check, classify, free_cover, is_weakly_projective, localize_lattice, syzygy,
    tate_unit_pair, transfer, verify_elab_suite, ElabConfig,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

const MAX_RANDOM_RANK: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "stmod", version, about = "Group cohomology, supports and stable module checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Presentation of H*(G; R) up to the degree cap.
    Cohomology(RunArgs),
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Cohomological support of a lattice.
    Support {
        /// trivial, regular, omega[:n], Lzeta:<poly>, perm:<g,h,...>, or @file.json
        #[arg(long)]
        module: String,
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Maschke,
    Chouinard,
    TensorFormula,
    Quillen,
    Elab,
    Fracture,
    Frobenius,
    TateUnit,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Maschke => "maschke",
            Suite::Chouinard => "chouinard",
            Suite::TensorFormula => "tensor-formula",
            Suite::Quillen => "quillen",
            Suite::Elab => "elab",
            Suite::Fracture => "fracture",
            Suite::Frobenius => "frobenius",
            Suite::TateUnit => "tate-unit",
        }
    }

    fn default_groups(self) -> &'static [&'static str] {
        match self {
            Suite::Maschke => &["C6", "S3"],
            Suite::Chouinard => &["S3", "Q8", "D4", "C6"],
            Suite::TensorFormula => &["V4", "C6"],
            Suite::Quillen => &["S3", "D4"],
            Suite::Elab => &["C2", "C3", "V4", "E9"],
            Suite::Fracture => &["C6"],
            Suite::Frobenius => &["C2", "S3", "V4"],
            Suite::TateUnit => &["C2", "C3", "C4"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Builtin name (C2, C3, C4, C6, V4, E9, S3, D4, Q8) or a group JSON file; repeatable.
    #[arg(long)]
    pub group: Vec<String>,
    /// Z, Q, Fp:p (or F2, F3, ...), Zp:p, Fq:p,n
    #[arg(long)]
    pub ring: Option<String>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub tate_range: Option<i64>,
    #[arg(long)]
    pub nil_bound: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// One line of a report.
#[derive(Clone, Debug)]
pub struct Record {
    pub check: String,
    pub inputs: Value,
    pub passed: bool,
    /// Certificate on success, counterexample on failure.
    pub evidence: Value,
}

impl Record {
    fn new(check: &str, inputs: Value, passed: bool, evidence: Value) -> Self {
        Record { check: check.to_string(), inputs, passed, evidence }
    }

    pub fn to_json(&self) -> Value {
        let key = if self.passed { "certificate" } else { "counterexample" };
        let mut v = json!({ "check": self.check, "inputs": self.inputs, "passed": self.passed });
        v[key] = self.evidence.clone();
        v
    }

    fn to_text(&self) -> String {
        format!("{} {} {}", if self.passed { "PASS" } else { "FAIL" }, self.check, self.inputs)
    }
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    if let Ok(g) = FiniteGroup::builtin(spec) {
        return Ok(Arc::new(g));
    }
    let path = std::path::Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return Ok(Arc::new(FiniteGroup::from_json(&serde_json::from_str(&text)?)?));
    }
    Err(config_error(format!("unknown group {spec}")))
}

fn groups_for(args: &RunArgs, defaults: &[&str]) -> Result<Vec<Arc<FiniteGroup>>> {
    if args.group.is_empty() {
        defaults.iter().map(|g| load_group(g)).collect()
    } else {
        args.group.iter().map(|g| load_group(g)).collect()
    }
}

fn ring_arg(args: &RunArgs) -> Result<Option<CoeffRing>> {
    args.ring.as_deref().map(CoeffRing::parse).transpose()
}

fn rng_for(seed: u64, group: &FiniteGroup, ring: CoeffRing) -> ChaCha8Rng {
    // Streams depend on the seed and the (group, ring) pair only.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in format!("{}|{}", group.name(), ring.descriptor()).bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn check_positive(args: &RunArgs) -> Result<()> {
    if args.cap == Some(0) || args.count == Some(0) || args.nil_bound == Some(0) {
        return Err(config_error("bounds must be positive"));
    }
    if args.tate_range.is_some_and(|t| t <= 0) {
        return Err(config_error("--tate-range must be positive"));
    }
    Ok(())
}

/// Runs the CLI; returns the exit code. Reports go to `stdout` or `--out`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
            } else {
                let _ = write!(stdout, "{e}");
            }
            return code;
        }
    };
    let args = match &cli.command {
        Command::Cohomology(a) | Command::Verify { args: a, .. } | Command::Support { args: a, .. } => a.clone(),
    };
    let records = match check_positive(&args).and_then(|_| dispatch(&cli.command)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let mut text = String::new();
    for r in &records {
        match args.format {
            Format::Json => text.push_str(&serde_json::to_string(&r.to_json()).expect("json")),
            Format::Text => text.push_str(&r.to_text()),
        }
        text.push('\n');
    }
    let written = match &args.out {
        Some(path) => std::fs::write(path, &text).map_err(Error::from),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_CONFIG;
    }
    if records.iter().all(|r| r.passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn dispatch(cmd: &Command) -> Result<Vec<Record>> {
    match cmd {
        Command::Cohomology(args) => cmd_cohomology(args),
        Command::Support { module, args } => cmd_support(args, module),
        Command::Verify { suite, args } => cmd_verify(*suite, args),
    }
}

fn single_group(args: &RunArgs) -> Result<Arc<FiniteGroup>> {
    match args.group.as_slice() {
        [g] => load_group(g),
        [] => Err(config_error("--group is required")),
        _ => Err(config_error("this command takes a single --group")),
    }
}

pub fn cmd_cohomology(args: &RunArgs) -> Result<Vec<Record>> {
    let g = single_group(args)?;
    let ring = ring_arg(args)?.ok_or_else(|| config_error("--ring is required"))?;
    let cap = args.cap.unwrap_or(6);
    let pres = GradedRingPresentation::build(&g, ring, cap)?;
    let hilbert: Vec<Value> = pres.hilbert().iter().map(|h| json!(h.to_string())).collect();
    let gens: Vec<Value> = pres.generators().iter().map(|x| json!({"name": x.name, "degree": x.degree})).collect();
    let rels: Vec<String> = pres.relations().iter().map(|r| pres.poly_ring().format(r)).collect();
    let verified = pres.verify_relations()? && pres.verify_generation()?;
    Ok(vec![Record::new(
        "cohomology",
        json!({"group": g.name(), "ring": ring.descriptor(), "cap": cap}),
        verified,
        json!({"generators": gens, "relations": rels, "hilbert": hilbert, "presentation": pres.to_json()}),
    )])
}

/// Parses a module description over `ring`.
pub fn parse_module(g: &Arc<FiniteGroup>, ring: CoeffRing, spec: &str, cap: usize) -> Result<Lattice> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)?;
        let m = Lattice::from_json(g, &serde_json::from_str(&text)?)?;
        return if m.ring() == ring { Ok(m) } else { m.change_ring(ring) };
    }
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    match (head, arg) {
        ("trivial", None) => Ok(Lattice::trivial(g, ring)),
        ("regular", None) => Ok(Lattice::regular(g, ring)),
        ("omega", n) => {
            let n: i64 = match n {
                Some(s) => s.trim().parse().map_err(|_| config_error(format!("bad syzygy degree {s}")))?,
                None => 1,
            };
            syzygy(&Lattice::trivial(g, ring), n)
        }
        ("perm", Some(list)) => {
            let gens: Vec<usize> = list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| config_error(format!("bad element {s}"))))
                .collect::<Result<_>>()?;
            if gens.iter().any(|&x| x >= g.order()) {
                return Err(config_error("element out of range"));
            }
            let sub = g.subgroup(g.generated(&gens))?;
            Ok(Lattice::permutation(&sub, ring))
        }
        ("Lzeta", Some(poly)) => {
            let pres = GradedRingPresentation::build(g, ring, cap.max(2))?;
            let f = pres.poly_ring().parse(poly)?;
            let (d, cocycle) = pres.evaluate(&f)?;
            let class = CohomologyClass::new(pres.resolution(), d, cocycle)?;
            carlson_module(&class)
        }
        _ => Err(config_error(format!("unknown module {spec}"))),
    }
}

/// Model used for supports of lattices over `ring`.
fn model_for(g: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize) -> Result<SpecHModel> {
    stmod_spectrum(g, ring, cap)
}

pub fn cmd_support(args: &RunArgs, module: &str) -> Result<Vec<Record>> {
    let g = single_group(args)?;
    let ring = ring_arg(args)?.ok_or_else(|| config_error("--ring is required"))?;
    let cap = args.cap.unwrap_or(4);
    let m = parse_module(&g, ring, module, cap)?;
    let model = model_for(&g, ring, cap)?;
    let s = classify(&m, &model, cap)?;
    let wp = is_weakly_projective(&m)?.weakly_projective;
    let consistent = s.is_empty() == wp;
    Ok(vec![Record::new(
        "support",
        json!({"group": g.name(), "ring": ring.descriptor(), "module": module, "cap": cap}),
        consistent,
        json!({"classify": s.to_json(), "weakly_projective": wp, "empty": s.is_empty()}),
    )])
}

pub fn cmd_verify(suite: Suite, args: &RunArgs) -> Result<Vec<Record>> {
    let groups = groups_for(args, suite.default_groups())?;
    let ring = ring_arg(args)?;
    let mut out = Vec::new();
    for g in &groups {
        let recs = match suite {
            Suite::Maschke => suite_maschke(g, ring.unwrap_or(CoeffRing::Rationals), args),
            Suite::Chouinard => suite_chouinard(g, ring, args),
            Suite::TensorFormula => suite_tensor_formula(g, ring, args),
            Suite::Quillen => suite_quillen(g, ring, args),
            Suite::Elab => suite_elab(g, args),
            Suite::Fracture => suite_fracture(g, args),
            Suite::Frobenius => suite_frobenius(g, ring, args),
            Suite::TateUnit => suite_tate_unit(g, ring.unwrap_or(CoeffRing::Integers), args),
        }?;
        out.extend(recs);
    }
    for r in &mut out {
        r.check = format!("{}/{}", suite.name(), r.check);
    }
    Ok(out)
}

/// A check that errored is reported as failed, not as a configuration error.
fn guarded(check: &str, inputs: Value, f: impl FnOnce() -> Result<(bool, Value)>) -> Record {
    match f() {
        Ok((passed, ev)) => Record::new(check, inputs, passed, ev),
        Err(e) => Record::new(check, inputs, false, json!({"error": e.to_string()})),
    }
}

fn suite_maschke(g: &Arc<FiniteGroup>, ring: CoeffRing, args: &RunArgs) -> Result<Vec<Record>> {
    let count = args.count.unwrap_or(25);
    let mut rng = rng_for(args.seed, g, ring);
    let mut out = Vec::new();
    for i in 0..count {
        let m = random_lattice(g, ring, MAX_RANDOM_RANK, &mut rng);
        let inputs = json!({"group": g.name(), "ring": ring.descriptor(), "seed": args.seed, "index": i, "lattice": m.to_json()});
        out.push(guarded("higman_certificate", inputs, || {
            let w = is_weakly_projective(&m)?;
            let sound = match &w.certificate {
                Some(f) => transfer(&m, &m, f)?.is_identity(),
                None => false,
            };
            Ok((w.weakly_projective && sound, w.to_json(ring)))
        }));
    }
    Ok(out)
}

fn fiber_rings(g: &FiniteGroup, ring: Option<CoeffRing>) -> Vec<CoeffRing> {
    match ring {
        Some(r) => vec![r],
        None => {
            let mut v = vec![CoeffRing::Integers];
            v.extend(g.prime_divisors().into_iter().map(CoeffRing::PrimeField));
            v
        }
    }
}

fn suite_chouinard(g: &Arc<FiniteGroup>, ring: Option<CoeffRing>, args: &RunArgs) -> Result<Vec<Record>> {
    let count = args.count.unwrap_or(20);
    let mut out = Vec::new();
    for r in fiber_rings(g, ring) {
        let mut rng = rng_for(args.seed, g, r);
        let mut lattices: Vec<(String, Lattice)> =
            vec![("regular".into(), Lattice::regular(g, r)), ("trivial".into(), Lattice::trivial(g, r))];
        for i in 0..count {
            lattices.push((format!("random{i}"), random_lattice(g, r, MAX_RANDOM_RANK, &mut rng)));
        }
        for (name, m) in lattices {
            let inputs = json!({"group": g.name(), "ring": r.descriptor(), "seed": args.seed, "module": name, "rank": m.rank()});
            out.push(guarded("detection", inputs, || {
                let rep = chouinard_check(&m)?;
                let mut ev = rep.to_json();
                if !rep.passed() {
                    ev["lattice"] = m.to_json();
                }
                Ok((rep.passed(), ev))
            }));
        }
    }
    Ok(out)
}

/// Small list of modules for support computations: trivial, regular, kernel
/// modules of degree-one classes and `Ω` over a field; permutation lattices
/// of nontrivial proper subgroups otherwise.
pub fn standard_modules(g: &Arc<FiniteGroup>, ring: CoeffRing, cap: usize) -> Result<Vec<(String, Lattice)>> {
    let mut out = vec![("trivial".to_string(), Lattice::trivial(g, ring)), ("regular".to_string(), Lattice::regular(g, ring))];
    if ring.is_field() && ring.characteristic() > 0 {
        let pres = GradedRingPresentation::build(g, ring, cap.max(2))?;
        let low: Vec<&str> = pres.generators().iter().filter(|x| x.degree == 1).map(|x| x.name.as_str()).collect();
        let mut specs: Vec<String> = low.iter().map(|s| s.to_string()).collect();
        if low.len() >= 2 {
            specs.push(format!("{}+{}", low[0], low[1]));
        }
        for s in specs {
            let f = pres.poly_ring().parse(&s)?;
            let (d, c) = pres.evaluate(&f)?;
            let class = CohomologyClass::new(pres.resolution(), d, c)?;
            out.push((format!("L({s})"), carlson_module(&class)?));
        }
        out.push(("omega".to_string(), syzygy(&Lattice::trivial(g, ring), 1)?));
    } else {
        for h in g.all_subgroups() {
            if h.order() > 1 && h.index() > 1 {
                out.push((format!("perm{:?}", h.elements()), Lattice::permutation(&h, ring)));
            }
        }
    }
    Ok(out)
}

fn default_support_ring(g: &FiniteGroup) -> CoeffRing {
    match g.whole_p_group_prime() {
        Some(p) => CoeffRing::PrimeField(p),
        None => CoeffRing::Integers,
    }
}

fn suite_tensor_formula(g: &Arc<FiniteGroup>, ring: Option<CoeffRing>, args: &RunArgs) -> Result<Vec<Record>> {
    let ring = ring.unwrap_or_else(|| default_support_ring(g));
    let cap = args.cap.unwrap_or(4);
    let model = model_for(g, ring, cap)?;
    let mods = standard_modules(g, ring, cap)?;
    let mut supports = BTreeMap::new();
    for (i, (_, m)) in mods.iter().enumerate() {
        supports.insert(i, classify(m, &model, cap)?.subset);
    }
    let mut out = Vec::new();
    for i in 0..mods.len() {
        for j in i..mods.len() {
            let inputs = json!({"group": g.name(), "ring": ring.descriptor(), "cap": cap, "left": mods[i].0, "right": mods[j].0});
            out.push(guarded("support_of_tensor", inputs, || {
                let t = mods[i].1.tensor(&mods[j].1)?;
                let lhs = classify(&t, &model, cap)?.subset;
                let rhs = supports[&i].intersection(&supports[&j])?;
                let same = lhs.same_as(&rhs)?;
                Ok((same == Inclusion::Yes, json!({"tensor": lhs.to_json(), "intersection": rhs.to_json(), "agreement": format!("{same:?}")})))
            }));
        }
    }
    Ok(out)
}

fn suite_quillen(g: &Arc<FiniteGroup>, ring: Option<CoeffRing>, args: &RunArgs) -> Result<Vec<Record>> {
    let primes = match ring {
        Some(CoeffRing::PrimeField(p)) => vec![p],
        Some(other) => return Err(config_error(format!("quillen runs over prime fields, not {other}"))),
        None => g.prime_divisors(),
    };
    let cap = args.cap.unwrap_or(8);
    let nil = args.nil_bound.unwrap_or(8);
    Ok(primes
        .into_iter()
        .map(|p| {
            let inputs = json!({"group": g.name(), "prime": p, "cap": cap, "nil_bound": nil});
            guarded("stratification", inputs, || {
                let rep = quillen_check(g, p, cap, nil)?;
                Ok((rep.passed(), rep.to_json()))
            })
        })
        .collect())
}

fn suite_elab(g: &Arc<FiniteGroup>, args: &RunArgs) -> Result<Vec<Record>> {
    let (p, _) = g.whole().elementary_abelian_type().ok_or(Error::NotElementaryAbelian)?;
    let mut cfg = ElabConfig::for_prime(p);
    if let Some(c) = args.cap {
        cfg.cap = c;
        cfg.reduction_degree = c.min(6);
    }
    if let Some(t) = args.tate_range {
        cfg.tate_range = t;
    }
    if let Some(b) = args.nil_bound {
        cfg.nil_bound = b;
    }
    let inputs = json!({"group": g.name(), "prime": p, "cap": cfg.cap, "tate_range": cfg.tate_range, "reduction_degree": cfg.reduction_degree, "nil_bound": cfg.nil_bound});
    match verify_elab_suite(g, &cfg) {
        Ok(rep) => Ok(rep.checks.into_iter().map(|c| Record::new(&c.name, inputs.clone(), c.passed, c.detail)).collect()),
        Err(e) => Ok(vec![Record::new("suite", inputs, false, json!({"error": e.to_string()}))]),
    }
}

fn primes_not_dividing(n: usize, k: usize) -> Vec<u64> {
    (2u64..).filter(|&q| crate::exactalg::ring::is_prime(q) && n as u64 % q != 0).take(k).collect()
}

fn suite_fracture(g: &Arc<FiniteGroup>, args: &RunArgs) -> Result<Vec<Record>> {
    let z = CoeffRing::Integers;
    let count = args.count.unwrap_or(20);
    let mut rng = rng_for(args.seed, g, z);
    let mut lattices: Vec<(String, Lattice)> = vec![("regular".into(), Lattice::regular(g, z)), ("trivial".into(), Lattice::trivial(g, z))];
    for i in 0..count {
        lattices.push((format!("random{i}"), random_lattice(g, z, MAX_RANDOM_RANK, &mut rng)));
    }
    let divisors = g.prime_divisors();
    let others = primes_not_dividing(g.order(), 2);
    let mut out = Vec::new();
    for (name, m) in lattices {
        let inputs = json!({"group": g.name(), "seed": args.seed, "module": name, "rank": m.rank()});
        out.push(guarded("local_detection", inputs, || {
            let whole = is_weakly_projective(&m)?.weakly_projective;
            let mut local = BTreeMap::new();
            for &p in divisors.iter().chain(&others) {
                local.insert(p.to_string(), is_weakly_projective(&localize_lattice(&m, p)?)?.weakly_projective);
            }
            let at_divisors = divisors.iter().all(|p| local[&p.to_string()]);
            let elsewhere = others.iter().all(|p| local[&p.to_string()]);
            let mut ev = json!({"integral": whole, "local": local});
            if whole != at_divisors || !elsewhere {
                ev["lattice"] = m.to_json();
            }
            Ok((whole == at_divisors && elsewhere, ev))
        }));
    }
    Ok(out)
}

fn suite_frobenius(g: &Arc<FiniteGroup>, ring: Option<CoeffRing>, args: &RunArgs) -> Result<Vec<Record>> {
    let count = args.count.unwrap_or(10);
    let mut out = Vec::new();
    for r in fiber_rings(g, ring) {
        let mut rng = rng_for(args.seed, g, r);
        let reg = Lattice::regular(g, r);
        for i in 0..count {
            let m = random_lattice(g, r, MAX_RANDOM_RANK, &mut rng);
            let inputs = json!({"group": g.name(), "ring": r.descriptor(), "seed": args.seed, "index": i, "rank": m.rank()});
            out.push(guarded("projectives_are_injectives", inputs, || {
                // Weakly projective and weakly injective agree: M vs M*.
                let wp = is_weakly_projective(&m)?.weakly_projective;
                let wi = is_weakly_projective(&m.dual())?.weakly_projective;
                // Enough projectives: the free cover is an R-split epimorphism.
                let cover = free_cover(&m)?;
                let k = crate::exactalg::kernel_basis(&cover.matrix)?;
                let omega = crate::lattices::EquivariantMapBuilder::sublattice(&cover.source, &k)?;
                let inc = crate::lattices::EquivariantMap::new(omega, cover.source.clone(), k)?;
                let seq = check_split_exact(&inc, &cover)?;
                // R[G] ⊗ M is weakly projective.
                let induced = is_weakly_projective(&reg.tensor(&m)?)?.weakly_projective;
                let ok = wp == wi && seq.exact && seq.split && induced;
                Ok((ok, json!({"weakly_projective": wp, "dual_weakly_projective": wi, "cover_split_exact": seq.exact && seq.split, "free_tensor_projective": induced})))
            }));
        }
    }
    Ok(out)
}

fn suite_tate_unit(g: &Arc<FiniteGroup>, ring: CoeffRing, args: &RunArgs) -> Result<Vec<Record>> {
    let range = args.tate_range.unwrap_or(3);
    Ok((-range..=range)
        .map(|n| {
            let inputs = json!({"group": g.name(), "ring": ring.descriptor(), "degree": n});
            guarded("stable_endomorphisms", inputs, || {
                let (s, t) = tate_unit_pair(g, ring, n)?;
                Ok((s == t, json!({"stable_hom": s.to_string(), "tate": t.to_string()})))
            })
        })
        .collect())
}

trait PGroupPrime {
    fn whole_p_group_prime(&self) -> Option<u64>;
}

impl PGroupPrime for FiniteGroup {
    fn whole_p_group_prime(&self) -> Option<u64> {
        match self.prime_divisors().as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("stmod").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cohomology_command() {
        let (code, out, _) = run_str(&["cohomology", "--group", "V4", "--ring", "F2", "--cap", "6"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert_eq!(v["certificate"]["generators"].as_array().unwrap().len(), 2);
        assert!(v["certificate"]["relations"].as_array().unwrap().is_empty());
    }

    #[test]
    fn config_errors_exit_two() {
        assert_eq!(run_str(&["cohomology", "--group", "Nope", "--ring", "Z"]).0, 2);
        assert_eq!(run_str(&["verify", "nonsense"]).0, 2);
        assert_eq!(run_str(&["verify", "elab", "--group", "S3"]).0, 2);
        assert_eq!(run_str(&["support", "--group", "C2", "--ring", "Z", "--module", "wat"]).0, 2);
        assert_eq!(run_str(&["verify", "maschke", "--count", "0"]).0, 2);
    }

    #[test]
    fn failing_suite_exits_one() {
        // Integral lattices are not all weakly projective.
        let (code, out, _) = run_str(&["verify", "maschke", "--group", "C2", "--ring", "Z", "--count", "3"]);
        assert_eq!(code, 1);
        assert!(out.contains("\"counterexample\""));
    }
}
