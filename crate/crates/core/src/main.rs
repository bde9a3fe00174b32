use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use syntop::chain::encode_chain;
use syntop::cover::{cover_at, cover_count, find_covers, uncovered_nodes, SyntaxCover};
use syntop::diagram::{validate_diagram, Diagram, DiagramFile};
use syntop::dot::{cover_to_dot, diagram_to_dot};
use syntop::grammar::Grammar;
use syntop::io::{self, GrammarFile, InputError, LoadedWorkspace, WorkspaceManifest};
use syntop::semantics::{
    presheaf_skeleton, sheaf_check_equalizer_all, sheaf_check_local, terminal_presheaf,
    validate_presheaf, validate_subpresheaf, verify_classifier, Presheaf, SubPresheaf,
};
use syntop::site::{
    cover_sieve, enumerate_sieves, in_topology, is_closed, maximal_sieve, verify_base,
    verify_category, verify_topology_axioms, AxiomReport, CoverCompat, Obj, TopologyCheck,
    TopologyVariant, Workspace,
};

/// Syntactic diagrams: recognition, the site of correct diagrams, sheaf checks.
///
/// Exit status: 0 when the checked property holds, 1 when it fails, 2 on
/// unreadable or invalid input.
#[derive(Parser)]
#[command(name = "syntop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Only require neighbourhood names to agree on correct-to-correct arrows.
    #[arg(long, global = true)]
    lax_cover_compat: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a grammar and optionally a diagram, workspace or presheaf.
    Validate(ValidateArgs),
    /// List the syntax covers of a diagram.
    Covers(CoversArgs),
    /// Decide whether a diagram or word is correct.
    Recognize(Target),
    /// List the arrows of a workspace, optionally between two objects.
    Hom(HomArgs),
    /// List the sieves on an object.
    Sieves(SievesArgs),
    /// Check the category laws and the base axioms.
    CheckBase(WorkspaceArg),
    /// Check the topology axioms.
    CheckTopology(TopologyArgs),
    /// Check the sheaf condition on every cover sieve.
    SheafCheck(SheafArgs),
    /// Classify every sense of a presheaf by a subpresheaf.
    Classify(ClassifyArgs),
    /// Emit a presheaf template with every object and morphism slot.
    PresheafSkeleton(WorkspaceArg),
    /// Render a diagram, or one of its covers, in DOT.
    ExportDot(DotArgs),
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    grammar: PathBuf,
    /// Diagram file.
    #[arg(long, conflicts_with = "string", required_unless_present = "string")]
    diagram: Option<PathBuf>,
    /// A word, encoded as a chain.
    #[arg(long)]
    string: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    grammar: Option<PathBuf>,
    /// Diagram file, checked against `--grammar`.
    #[arg(long, requires = "grammar")]
    diagram: Option<PathBuf>,
    /// Workspace manifest or directory holding `workspace.json`.
    #[arg(long)]
    workspace: Option<PathBuf>,
    #[arg(long, requires = "workspace")]
    presheaf: Option<PathBuf>,
    #[arg(long, requires = "presheaf")]
    subpresheaf: Option<PathBuf>,
}

#[derive(Args)]
struct CoversArgs {
    #[command(flatten)]
    target: Target,
    /// List at most this many covers (the count is always exact).
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct WorkspaceArg {
    /// Workspace manifest or directory holding `workspace.json`.
    #[arg(long)]
    workspace: PathBuf,
}

#[derive(Args)]
struct HomArgs {
    #[command(flatten)]
    ws: WorkspaceArg,
    /// Source object id.
    #[arg(long, requires = "to")]
    from: Option<String>,
    /// Target object id.
    #[arg(long, requires = "from")]
    to: Option<String>,
}

#[derive(Args)]
struct SievesArgs {
    #[command(flatten)]
    ws: WorkspaceArg,
    #[arg(long)]
    object: String,
    /// Refuse objects receiving more arrows than this.
    #[arg(long, default_value_t = 16)]
    max_arrows: usize,
    #[arg(long)]
    literal_paper: bool,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(flatten)]
    ws: WorkspaceArg,
    /// Random sieves per object for the transitivity check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use exactly the maximal and cover sieves as covering sieves.
    #[arg(long)]
    literal_paper: bool,
    /// Objects receiving more arrows are sampled rather than enumerated.
    #[arg(long, default_value_t = 16)]
    max_arrows: usize,
}

#[derive(Args)]
struct PresheafArg {
    #[command(flatten)]
    ws: WorkspaceArg,
    /// Presheaf file.
    #[arg(
        long,
        conflicts_with = "terminal",
        required_unless_present = "terminal"
    )]
    presheaf: Option<PathBuf>,
    /// Use the terminal presheaf instead of a file.
    #[arg(long)]
    terminal: bool,
}

#[derive(Args)]
struct SheafArgs {
    #[command(flatten)]
    input: PresheafArg,
    /// Also run the equalizer form of the check.
    #[arg(long)]
    equalizer: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: PresheafArg,
    #[arg(long)]
    subpresheaf: PathBuf,
    /// Only print entries for this object.
    #[arg(long)]
    object: Option<String>,
}

#[derive(Args)]
struct DotArgs {
    #[command(flatten)]
    target: Target,
    /// Render this cover (by index) instead of the bare diagram.
    #[arg(long)]
    cover: Option<usize>,
}

/// What a command prints and whether its property held.
struct Outcome {
    text: String,
    json: Value,
    holds: bool,
}

impl Outcome {
    fn new(text: String, json: impl Serialize, holds: bool) -> Result<Self> {
        Ok(Outcome {
            text,
            json: serde_json::to_value(json)?,
            holds,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let compat = if cli.lax_cover_compat {
        CoverCompat::Lax
    } else {
        CoverCompat::Strict
    };
    match run(&cli.command, compat) {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("values serialize")
                );
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, compat: CoverCompat) -> Result<Outcome> {
    match command {
        Command::Validate(a) => cmd_validate(a, compat),
        Command::Covers(a) => cmd_covers(a),
        Command::Recognize(a) => cmd_recognize(a),
        Command::Hom(a) => cmd_hom(a, compat),
        Command::Sieves(a) => cmd_sieves(a, compat),
        Command::CheckBase(a) => cmd_check_base(a, compat),
        Command::CheckTopology(a) => cmd_check_topology(a, compat),
        Command::SheafCheck(a) => cmd_sheaf_check(a, compat),
        Command::Classify(a) => cmd_classify(a, compat),
        Command::PresheafSkeleton(a) => cmd_presheaf_skeleton(a, compat),
        Command::ExportDot(a) => cmd_export_dot(a),
    }
}

fn load_workspace(path: &Path, compat: CoverCompat) -> Result<LoadedWorkspace> {
    Ok(io::load_workspace(path, compat)?)
}

/// The diagram named by `--diagram` or `--string`, checked against the grammar.
fn load_target(t: &Target) -> Result<(Grammar, Diagram, String)> {
    let g = io::load_grammar(&t.grammar)?;
    let (d, name) = match (&t.diagram, &t.string) {
        (Some(path), _) => (io::load_diagram(path)?, path.display().to_string()),
        (None, Some(s)) => {
            if let Some(c) = s.chars().find(|c| !g.alphabet.contains(&c.to_string())) {
                bail!(
                    "--string: symbol `{c}` is not in the alphabet of {}",
                    t.grammar.display()
                );
            }
            (encode_chain(s)?, s.clone())
        }
        (None, None) => bail!("give --diagram or --string"),
    };
    let report = validate_diagram(&d, &g.alphabet, &g.sorts, &g.shape);
    if !report.is_ok() {
        return Err(InputError::from_report(name, &report).into());
    }
    Ok((g, d, name))
}

fn load_presheaf(input: &PresheafArg, w: &Workspace) -> Result<Presheaf> {
    let f = match &input.presheaf {
        Some(path) => Presheaf::from_json(w, &io::read_file(path)?, &path.display().to_string())?,
        None => terminal_presheaf(w),
    };
    let report = validate_presheaf(&f, w);
    if !report.is_ok() {
        let name = input
            .presheaf
            .as_ref()
            .map_or("terminal".to_string(), |p| p.display().to_string());
        return Err(InputError::from_report(name, &report).into());
    }
    Ok(f)
}

fn find(w: &Workspace, id: &str) -> Result<Obj> {
    w.find_object(id).map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize)]
struct Section {
    input: String,
    ok: bool,
    problems: Vec<String>,
}

fn cmd_validate(a: &ValidateArgs, compat: CoverCompat) -> Result<Outcome> {
    if a.grammar.is_none() && a.workspace.is_none() {
        bail!("give --grammar or --workspace");
    }
    let mut sections = Vec::new();
    let mut push = |input: &Path, r: std::result::Result<(), InputError>| {
        sections.push(Section {
            input: input.display().to_string(),
            ok: r.is_ok(),
            problems: r.err().map(|e| e.problems).unwrap_or_default(),
        })
    };
    // unparseable JSON is an input error; invariant violations are a failed check
    let mut grammar = None;
    if let Some(path) = &a.grammar {
        let text = io::read_file(path)?;
        let file = path.display().to_string();
        io::parse_json::<GrammarFile>(&text, &file)?;
        let g = io::grammar_from_str(&text, &file);
        push(path, g.as_ref().map(|_| ()).map_err(Clone::clone));
        grammar = g.ok();
    }
    if let Some(path) = &a.diagram {
        let text = io::read_file(path)?;
        let file = path.display().to_string();
        let raw: DiagramFile = io::parse_json(&text, &file)?;
        let r = Diagram::from_file(raw)
            .map_err(|r| InputError::from_report(&file, &r))
            .and_then(|d| match &grammar {
                Some(g) => {
                    let report = validate_diagram(&d, &g.alphabet, &g.sorts, &g.shape);
                    if report.is_ok() {
                        Ok(())
                    } else {
                        Err(InputError::from_report(&file, &report))
                    }
                }
                None => Err(InputError::new(
                    &file,
                    "cannot check against an invalid grammar",
                )),
            });
        push(path, r);
    }
    if let Some(path) = &a.workspace {
        let manifest = io::manifest_path(path);
        io::parse_json::<WorkspaceManifest>(
            &io::read_file(&manifest)?,
            &manifest.display().to_string(),
        )?;
        let loaded = io::load_workspace(path, compat);
        push(&manifest, loaded.as_ref().map(|_| ()).map_err(Clone::clone));
        if let (Ok(l), Some(p)) = (&loaded, &a.presheaf) {
            let file = p.display().to_string();
            let w = &l.workspace;
            let f = Presheaf::from_json(w, &io::read_file(p)?, &file)?;
            let report = validate_presheaf(&f, w);
            push(
                p,
                if report.is_ok() {
                    Ok(())
                } else {
                    Err(InputError::from_report(&file, &report))
                },
            );
            if let (true, Some(s)) = (report.is_ok(), &a.subpresheaf) {
                let file = s.display().to_string();
                let sub = SubPresheaf::from_json(w, &f, &io::read_file(s)?, &file)?;
                let report = validate_subpresheaf(&sub, &f, w);
                push(
                    s,
                    if report.is_ok() {
                        Ok(())
                    } else {
                        Err(InputError::from_report(&file, &report))
                    },
                );
            }
        }
    }
    let holds = sections.iter().all(|s| s.ok);
    let mut text = String::new();
    for s in &sections {
        if s.ok {
            text.push_str(&format!("{}: ok\n", s.input));
        }
        for p in &s.problems {
            text.push_str(&format!("{}: {p}\n", s.input));
        }
    }
    Outcome::new(text, json!({ "valid": holds, "inputs": sections }), holds)
}

#[derive(Serialize)]
struct EntryJson {
    node: String,
    neighbourhood: String,
    embedding: String,
}

fn cover_json(d: &Diagram, g: &Grammar, c: &SyntaxCover) -> Vec<EntryJson> {
    c.entries()
        .iter()
        .map(|e| {
            let n = g.neighbourhood(e.neighbourhood);
            EntryJson {
                node: d.nodes()[e.node].id.clone(),
                neighbourhood: n.name.clone(),
                embedding: e.embedding.describe(&n.diagram, d),
            }
        })
        .collect()
}

fn cmd_covers(a: &CoversArgs) -> Result<Outcome> {
    let (g, d, name) = load_target(&a.target)?;
    let count = cover_count(&d, &g);
    let covers = find_covers(&d, &g, a.limit);
    let mut text = format!("{name}: covers={count}\n");
    let mut listed = Vec::new();
    for (k, c) in covers.iter().enumerate() {
        let entries = cover_json(&d, &g, c);
        let parts: Vec<String> = entries
            .iter()
            .map(|e| format!("{}={}", e.node, e.neighbourhood))
            .collect();
        text.push_str(&format!("cover {k}: {}\n", parts.join(" ")));
        listed.push(json!({ "index": k, "entries": entries }));
    }
    if (covers.len() as u128) < count {
        text.push_str(&format!("({} not listed)\n", count - covers.len() as u128));
    }
    let uncovered = uncovered_nodes(&d, &g);
    if !uncovered.is_empty() {
        text.push_str(&format!("uncoverable nodes: {}\n", uncovered.join(", ")));
    }
    Outcome::new(
        text,
        json!({ "input": name, "covers": count.to_string(), "listed": listed, "uncovered": uncovered }),
        count > 0,
    )
}

fn cmd_recognize(t: &Target) -> Result<Outcome> {
    let (g, d, name) = load_target(t)?;
    let count = cover_count(&d, &g);
    let uncovered = uncovered_nodes(&d, &g);
    let text = if count > 0 {
        format!("correct, covers={count}\n")
    } else {
        format!(
            "not correct, covers=0, uncoverable nodes: {}\n",
            uncovered.join(", ")
        )
    };
    Outcome::new(
        text,
        json!({ "input": name, "correct": count > 0, "covers": count.to_string(), "uncovered": uncovered }),
        count > 0,
    )
}

fn cmd_hom(a: &HomArgs, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.ws.workspace, compat)?.workspace;
    let arrows: Vec<_> = match (&a.from, &a.to) {
        (Some(x), Some(y)) => w.hom(find(&w, x)?, find(&w, y)?).to_vec(),
        _ => w.arrows().collect(),
    };
    let ids: Vec<&str> = arrows.iter().map(|&f| w.arrow_id(f)).collect();
    let mut text = String::new();
    for id in &ids {
        text.push_str(id);
        text.push('\n');
    }
    let objects: Vec<&str> = w.objects().map(|o| w.object_id(o)).collect();
    Outcome::new(text, json!({ "objects": objects, "arrows": ids }), true)
}

fn variant(literal: bool) -> TopologyVariant {
    if literal {
        TopologyVariant::Literal
    } else {
        TopologyVariant::Generated
    }
}

fn cmd_sieves(a: &SievesArgs, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.ws.workspace, compat)?.workspace;
    let d = find(&w, &a.object)?;
    let v = variant(a.literal_paper);
    let sieves = enumerate_sieves(d, &w, a.max_arrows)?;
    let maximal = maximal_sieve(d, &w);
    let cover = cover_sieve(d, &w);
    let mut text = format!(
        "{}: {} arrows in, {} sieves\n",
        a.object,
        maximal.len(),
        sieves.len()
    );
    let mut rows = Vec::new();
    for s in &sieves {
        let covering = in_topology(s, &w, v);
        let closed = is_closed(s, &w, v);
        let mut tags = Vec::new();
        if *s == maximal {
            tags.push("maximal");
        }
        if cover.as_ref() == Some(s) {
            tags.push("cover");
        }
        if covering {
            tags.push("covering");
        }
        if closed {
            tags.push("closed");
        }
        text.push_str(&format!(
            "{{{}}} {}\n",
            s.ids(&w).join(", "),
            tags.join(" ")
        ));
        rows.push(json!({ "arrows": s.ids(&w), "maximal": *s == maximal, "cover": cover.as_ref() == Some(s), "covering": covering, "closed": closed }));
    }
    Outcome::new(
        text,
        json!({ "object": a.object, "arrows_in": maximal.ids(&w), "cover_sieve": cover.map(|c| c.ids(&w).into_iter().map(str::to_string).collect::<Vec<_>>()), "sieves": rows }),
        true,
    )
}

fn axiom_text(title: &str, r: &AxiomReport) -> String {
    let mut text = String::new();
    for (axiom, n) in &r.checked {
        text.push_str(&format!(
            "{axiom}: {n} checked, {} failed\n",
            r.failures(axiom)
        ));
    }
    for c in &r.counterexamples {
        text.push_str(&format!(
            "counterexample {} at {}: {}\n",
            c.axiom, c.object, c.detail
        ));
        for a in &c.arrows {
            text.push_str(&format!("  {a}\n"));
        }
    }
    for n in &r.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push_str(&format!(
        "{title}: {}\n",
        if r.passed() { "pass" } else { "FAIL" }
    ));
    text
}

fn cmd_check_base(a: &WorkspaceArg, compat: CoverCompat) -> Result<Outcome> {
    let loaded = load_workspace(&a.workspace, compat)?;
    let mut report = verify_category(&loaded.workspace);
    let base = verify_base(&loaded.workspace, &loaded.base);
    for (k, n) in base.checked {
        *report.checked.entry(k).or_default() += n;
    }
    report.counterexamples.extend(base.counterexamples);
    report.notes.extend(base.notes);
    Outcome::new(axiom_text("base", &report), &report, report.passed())
}

fn cmd_check_topology(a: &TopologyArgs, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.ws.workspace, compat)?.workspace;
    let check = TopologyCheck {
        samples: a.samples,
        seed: a.seed,
        variant: variant(a.literal_paper),
        max_arrows: a.max_arrows,
    };
    let report = verify_topology_axioms(&w, &check);
    Outcome::new(axiom_text("topology", &report), &report, report.passed())
}

fn cmd_sheaf_check(a: &SheafArgs, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.input.ws.workspace, compat)?.workspace;
    let f = load_presheaf(&a.input, &w)?;
    let local = sheaf_check_local(&f, &w);
    let mut text = String::new();
    for v in &local.verdicts {
        text.push_str(&format!(
            "{}: {} senses, {} matching families, {}\n",
            v.object,
            v.senses,
            v.matching_families,
            if v.passed() { "glues" } else { "FAIL" }
        ));
        for wit in &v.witnesses {
            text.push_str(&format!("  {wit}\n"));
        }
    }
    let mut holds = local.is_sheaf();
    let equalizer = if a.equalizer {
        let eq = sheaf_check_equalizer_all(&f, &w).context("equalizer check")?;
        for v in &eq {
            text.push_str(&format!(
                "{} equalizer: product {}, equalizer {}, {}\n",
                v.object,
                v.product_size,
                v.equalizer_size,
                if v.passed() { "exact" } else { "FAIL" }
            ));
        }
        let agree = eq
            .iter()
            .map(|v| v.passed())
            .eq(local.verdicts.iter().map(|v| v.passed()));
        if !agree {
            text.push_str("local and equalizer checks disagree\n");
        }
        holds &= agree;
        Some(eq)
    } else {
        None
    };
    text.push_str(if local.is_sheaf() {
        "sheaf\n"
    } else {
        "not a sheaf\n"
    });
    Outcome::new(
        text,
        json!({ "sheaf": local.is_sheaf(), "verdicts": local.verdicts, "equalizer": equalizer }),
        holds,
    )
}

fn cmd_classify(a: &ClassifyArgs, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.input.ws.workspace, compat)?.workspace;
    let f = load_presheaf(&a.input, &w)?;
    let file = a.subpresheaf.display().to_string();
    let s = SubPresheaf::from_json(&w, &f, &io::read_file(&a.subpresheaf)?, &file)?;
    if let Some(o) = &a.object {
        find(&w, o)?;
    }
    let mut report = verify_classifier(&f, &s, &w);
    if let Some(o) = &a.object {
        report.entries.retain(|e| &e.object == o);
    }
    let mut text = String::new();
    for e in &report.entries {
        let mut tags = Vec::new();
        if e.in_subpresheaf {
            tags.push("member");
        }
        if e.maximal {
            tags.push("maximal");
        }
        if e.closed {
            tags.push("closed");
        }
        if e.principal {
            tags.push("principal");
        }
        text.push_str(&format!(
            "{}@{}: {{{}}} {}\n",
            e.sense,
            e.object,
            e.arrows.join(", "),
            tags.join(" ")
        ));
    }
    for (label, list) in [
        ("not a sieve", &report.sieve_failures),
        ("naturality fails", &report.naturality_failures),
        ("maximality fails", &report.maximality_failures),
        ("not closed", &report.non_closed),
    ] {
        for item in list {
            text.push_str(&format!("{label}: {item}\n"));
        }
    }
    for n in &report.hypothesis_notes {
        text.push_str(&format!("note: {n}\n"));
    }
    if !report.closedness_required() && !report.non_closed.is_empty() {
        text.push_str("closedness not required: F or S is not a sheaf\n");
    }
    text.push_str(if report.passed() {
        "classifier: pass\n"
    } else {
        "classifier: FAIL\n"
    });
    let holds = report.passed();
    Outcome::new(text, &report, holds)
}

fn cmd_presheaf_skeleton(a: &WorkspaceArg, compat: CoverCompat) -> Result<Outcome> {
    let w = load_workspace(&a.workspace, compat)?.workspace;
    let skeleton = presheaf_skeleton(&w);
    // the skeleton is JSON either way
    let text = serde_json::to_string_pretty(&skeleton)? + "\n";
    Outcome::new(text, &skeleton, true)
}

fn cmd_export_dot(a: &DotArgs) -> Result<Outcome> {
    let (g, d, name) = load_target(&a.target)?;
    let (dot, holds) = match a.cover {
        None => (diagram_to_dot(&d, &name), true),
        Some(k) => match cover_at(&d, &g, k) {
            Some(c) => (cover_to_dot(&d, &c, &g, &name), true),
            None => {
                eprintln!(
                    "{name}: no cover with index {k} (covers={})",
                    cover_count(&d, &g)
                );
                (String::new(), false)
            }
        },
    };
    Outcome::new(dot.clone(), json!({ "input": name, "dot": dot }), holds)
}
