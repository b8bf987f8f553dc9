//! Subcommand definitions and execution. Every command reads its inputs,
//! produces one deterministic text or JSON report on standard output, and
//! maps failures onto the documented exit codes.

use crate::format::{self, EvidenceFile};
use crate::output::{self, complexity_json, diagram_json, trace_json};
use crate::pipeline::{self, run_pipeline};
use crate::CliError;
use clap::{Args, Parser, Subcommand};
use dredge::graph::{
    fill_in, is_chordal, is_perfect, max_cardinality_search, moral_graph, NodeOrder,
    UndirectedGraph,
};
use dredge::infer::{
    complexity_report, evidence_probability, joint_oracle, posterior_marginal, JointTable,
};
use dredge::pid::{Pid, Severity, ValidationReport};
use dredge::random::{random_pipeline_check, seeded_rng};
use dredge::reduce::{ReversalTrace, TraceStep};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Absolute tolerance used by the checking commands.
const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "dredge",
    version,
    about = "Exact inference on discrete belief networks by directed reduction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Default)]
pub struct CommonArgs {
    /// Network file (JSON).
    #[arg(long)]
    pub net: Option<PathBuf>,
    /// Evidence file (JSON).
    #[arg(long)]
    pub evidence: Option<PathBuf>,
    /// Comma-separated node order. Target for reduction commands,
    /// tiebreak for mcs, elimination order for fillin.
    #[arg(long)]
    pub order: Option<String>,
    /// Node id for marginal queries.
    #[arg(long)]
    pub node: Option<String>,
    /// Seed for random-test.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random-test pipelines.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a network file and print its validation report.
    Validate(CommonArgs),
    /// Print the moral graph of the network.
    Moralize(CommonArgs),
    /// Test whether the network's moral graph is chordal.
    Chordal(CommonArgs),
    /// Maximum cardinality search on the moral graph.
    Mcs(CommonArgs),
    /// Add the edges that make an order perfect for the moral graph.
    Fillin(CommonArgs),
    /// Reverse arcs until the target order is an ordered list.
    Prereverse(CommonArgs),
    /// Absorb an evidence file without propagating it.
    Absorb(CommonArgs),
    /// Full pipeline: pre-reverse, absorb, propagate.
    Propagate(CommonArgs),
    /// Posterior marginal of one node after the pipeline.
    Marginal(CommonArgs),
    /// Probability of the evidence after the pipeline.
    Evprob(CommonArgs),
    /// Compare pipeline results against brute-force joint enumeration.
    OracleCheck(CommonArgs),
    /// Table scopes, added arcs and the clique bound of a pipeline run.
    Report(CommonArgs),
    /// Run seeded random pipelines against the oracle and clique bound.
    RandomTest(CommonArgs),
}

/// A command's standard output plus its exit code.
pub struct CmdOutput {
    pub text: String,
    pub code: i32,
}

impl CmdOutput {
    fn ok(text: String) -> Self {
        CmdOutput { text, code: 0 }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_network(args: &CommonArgs) -> Result<(Pid, ValidationReport), CliError> {
    let path = args
        .net
        .as_ref()
        .ok_or_else(|| CliError::Usage("--net <file> is required".into()))?;
    format::parse_network(&read_file(path)?)
}

fn load_network_strict(args: &CommonArgs) -> Result<Pid, CliError> {
    let path = args
        .net
        .as_ref()
        .ok_or_else(|| CliError::Usage("--net <file> is required".into()))?;
    format::parse_network_strict(&read_file(path)?)
}

fn load_evidence(args: &CommonArgs) -> Result<Option<EvidenceFile>, CliError> {
    match &args.evidence {
        Some(path) => Ok(Some(format::parse_evidence(&read_file(path)?)?)),
        None => Ok(None),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn order_labels(p: &Pid, order: &NodeOrder) -> String {
    order
        .iter()
        .map(|v| p.name(v).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn edge_lines(p: &Pid, u: &UndirectedGraph) -> String {
    let mut out = String::new();
    for (a, b) in u.edges() {
        writeln!(out, "  {} -- {}", p.name(a), p.name(b)).unwrap();
    }
    out
}

fn arc_lines(p: &Pid) -> String {
    let mut out = String::new();
    for (a, b) in p.graph().arcs() {
        writeln!(out, "  {} -> {}", p.name(a), p.name(b)).unwrap();
    }
    out
}

fn step_counts(trace: &ReversalTrace) -> (usize, usize, usize, usize) {
    let mut arc = 0;
    let mut ev = 0;
    let mut abs = 0;
    let mut comb = 0;
    for step in &trace.steps {
        match step {
            TraceStep::ArcReversal { .. } => arc += 1,
            TraceStep::EvidenceReversal { .. } => ev += 1,
            TraceStep::Absorption { .. } => abs += 1,
            TraceStep::Combination { .. } => comb += 1,
        }
    }
    (arc, ev, abs, comb)
}

#[derive(Serialize)]
struct FindingJson {
    severity: String,
    subject: String,
    message: String,
}

fn findings_json(report: &ValidationReport) -> Vec<FindingJson> {
    report
        .findings
        .iter()
        .map(|f| FindingJson {
            severity: match f.severity {
                Severity::Error => "error".into(),
                Severity::Warning => "warning".into(),
            },
            subject: f.subject.clone(),
            message: f.message.clone(),
        })
        .collect()
}

pub fn execute(cli: &Cli) -> Result<CmdOutput, CliError> {
    match &cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Moralize(args) => cmd_moralize(args),
        Command::Chordal(args) => cmd_chordal(args),
        Command::Mcs(args) => cmd_mcs(args),
        Command::Fillin(args) => cmd_fillin(args),
        Command::Prereverse(args) => cmd_prereverse(args),
        Command::Absorb(args) => cmd_absorb(args),
        Command::Propagate(args) => cmd_propagate(args),
        Command::Marginal(args) => cmd_marginal(args),
        Command::Evprob(args) => cmd_evprob(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Report(args) => cmd_report(args),
        Command::RandomTest(args) => cmd_random_test(args),
    }
}

fn cmd_validate(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let (pid, report) = load_network(args)?;
    let ok = report.ok();
    let text = if args.json {
        #[derive(Serialize)]
        struct ValidateJson {
            command: &'static str,
            ok: bool,
            findings: Vec<FindingJson>,
        }
        json_line(&ValidateJson {
            command: "validate",
            ok,
            findings: findings_json(&report),
        })
    } else {
        let mut out = format!("ok: {ok}\n");
        let rendered = crate::render_findings(&pid, &report);
        if !rendered.is_empty() {
            out.push_str(&rendered);
            out.push('\n');
        }
        out
    };
    Ok(CmdOutput {
        text,
        code: i32::from(!ok),
    })
}

fn cmd_moralize(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let moral = moral_graph(pid.graph());
    let text = if args.json {
        #[derive(Serialize)]
        struct MoralJson {
            command: &'static str,
            nodes: Vec<String>,
            edges: Vec<[String; 2]>,
        }
        json_line(&MoralJson {
            command: "moralize",
            nodes: pid
                .live_nodes()
                .iter()
                .map(|&v| pid.name(v).into())
                .collect(),
            edges: moral
                .edges()
                .into_iter()
                .map(|(a, b)| [pid.name(a).into(), pid.name(b).into()])
                .collect(),
        })
    } else {
        format!(
            "moral graph: {} nodes, {} edges\n{}",
            moral.node_count(),
            moral.edge_count(),
            edge_lines(&pid, &moral)
        )
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_chordal(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let moral = moral_graph(pid.graph());
    let chordal = is_chordal(&moral);
    let perfect = chordal.then(|| {
        max_cardinality_search(&moral, &NodeOrder::identity(pid.slot_count()))
            .expect("identity tiebreak covers the graph")
    });
    let text = if args.json {
        #[derive(Serialize)]
        struct ChordalJson {
            command: &'static str,
            chordal: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            perfect_list: Option<Vec<String>>,
        }
        json_line(&ChordalJson {
            command: "chordal",
            chordal,
            perfect_list: perfect
                .as_ref()
                .map(|o| o.iter().map(|v| pid.name(v).to_string()).collect()),
        })
    } else {
        let mut out = format!("chordal: {chordal}\n");
        if let Some(o) = &perfect {
            writeln!(out, "perfect list: {}", order_labels(&pid, o)).unwrap();
        }
        out
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_mcs(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let moral = moral_graph(pid.graph());
    let tiebreak = match &args.order {
        Some(text) => pipeline::parse_order_arg(&pid, text)?,
        None => NodeOrder::identity(pid.slot_count()),
    };
    let order = max_cardinality_search(&moral, &tiebreak)?;
    let perfect = is_perfect(&moral, &order)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct McsJson {
            command: &'static str,
            order: Vec<String>,
            perfect: bool,
        }
        json_line(&McsJson {
            command: "mcs",
            order: order.iter().map(|v| pid.name(v).to_string()).collect(),
            perfect,
        })
    } else {
        format!(
            "order: {}\nperfect: {perfect}\n",
            order_labels(&pid, &order)
        )
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_fillin(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let moral = moral_graph(pid.graph());
    let order = match &args.order {
        Some(text) => pipeline::parse_order_arg(&pid, text)?,
        None => NodeOrder::identity(pid.slot_count()),
    };
    let filled = fill_in(&moral, &order)?;
    let added: Vec<_> = filled
        .edges()
        .into_iter()
        .filter(|&(a, b)| !moral.has_edge(a, b))
        .collect();
    let text = if args.json {
        #[derive(Serialize)]
        struct FillinJson {
            command: &'static str,
            order: Vec<String>,
            added_edges: Vec<[String; 2]>,
            total_edges: usize,
        }
        json_line(&FillinJson {
            command: "fillin",
            order: order.iter().map(|v| pid.name(v).to_string()).collect(),
            added_edges: added
                .iter()
                .map(|&(a, b)| [pid.name(a).into(), pid.name(b).into()])
                .collect(),
            total_edges: filled.edge_count(),
        })
    } else {
        let mut out = format!("order: {}\n", order_labels(&pid, &order));
        writeln!(out, "added edges: {}", added.len()).unwrap();
        for (a, b) in &added {
            writeln!(out, "  {} -- {}", pid.name(*a), pid.name(*b)).unwrap();
        }
        writeln!(out, "total edges: {}", filled.edge_count()).unwrap();
        out
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_prereverse(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
    let mut diagram = pid.clone();
    let mut trace = ReversalTrace::new();
    dredge::reduce::pre_reverse_to_target(&mut diagram, &target, &mut trace)?;
    let ordered = diagram.is_ordered_for(&target)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct PrereverseJson {
            command: &'static str,
            target: Vec<String>,
            reversals: usize,
            arcs: Vec<[String; 2]>,
            ordered_for_target: bool,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&PrereverseJson {
            command: "prereverse",
            target: target.iter().map(|v| diagram.name(v).to_string()).collect(),
            reversals: trace.len(),
            arcs: diagram
                .graph()
                .arcs()
                .into_iter()
                .map(|(a, b)| [diagram.name(a).into(), diagram.name(b).into()])
                .collect(),
            ordered_for_target: ordered,
            trace: trace_json(&diagram, &trace),
        })
    } else {
        format!(
            "target: {}\nreversals: {}\narcs:\n{}ordered for target: {ordered}\n",
            order_labels(&diagram, &target),
            trace.len(),
            arc_lines(&diagram)
        )
    };
    Ok(CmdOutput::ok(text))
}

fn diagram_text(p: &Pid) -> String {
    let mut out = String::from("nodes:\n");
    for v in p.live_nodes() {
        let t = p.table(v);
        let parents = t
            .parents
            .iter()
            .map(|&q| p.name(q).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let state = match p.status(v) {
            dredge::pid::Status::Latent => "conditional".to_string(),
            dredge::pid::Status::Evidence(Some(x)) => {
                format!("likelihood, observed {}", p.outcomes(v)[x])
            }
            dredge::pid::Status::Evidence(None) => "likelihood, virtual".to_string(),
        };
        writeln!(out, "  {}: {} | parents [{}]", p.name(v), state, parents).unwrap();
    }
    out
}

fn cmd_absorb(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let evidence = load_evidence(args)?
        .ok_or_else(|| CliError::Usage("--evidence <file> is required".into()))?;
    let mut diagram = pid;
    let mut trace = ReversalTrace::new();
    format::apply_evidence(&mut diagram, &evidence, &mut trace)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct AbsorbJson {
            command: &'static str,
            diagram: output::DiagramJson,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&AbsorbJson {
            command: "absorb",
            diagram: diagram_json(&diagram),
            trace: trace_json(&diagram, &trace),
        })
    } else {
        format!(
            "absorbed: {} steps\n{}",
            trace.len(),
            diagram_text(&diagram)
        )
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_propagate(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let evidence = load_evidence(args)?;
    let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
    let run = run_pipeline(&pid, evidence.as_ref(), &target)?;
    let prob = evidence_probability(&run.diagram)?;
    let (arc, ev, abs, comb) = step_counts(&run.trace);
    let text = if args.json {
        #[derive(Serialize)]
        struct PropagateJson {
            command: &'static str,
            target: Vec<String>,
            evidence_probability: f64,
            diagram: output::DiagramJson,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&PropagateJson {
            command: "propagate",
            target: target
                .iter()
                .map(|v| run.diagram.name(v).to_string())
                .collect(),
            evidence_probability: prob,
            diagram: diagram_json(&run.diagram),
            trace: trace_json(&run.diagram, &run.trace),
        })
    } else {
        format!(
            "target: {}\nsteps: {} ({arc} arc reversals, {abs} absorptions, {ev} evidence reversals, {comb} combinations)\nevidence probability: {prob}\n{}",
            order_labels(&run.diagram, &target),
            run.trace.len(),
            diagram_text(&run.diagram)
        )
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_marginal(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let node_label = args
        .node
        .as_ref()
        .ok_or_else(|| CliError::Usage("--node <id> is required".into()))?;
    let evidence = load_evidence(args)?;
    let (diagram, trace) = match &evidence {
        Some(ev) => {
            let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
            let run = run_pipeline(&pid, Some(ev), &target)?;
            (run.diagram, run.trace)
        }
        None => (pid, ReversalTrace::new()),
    };
    let v = diagram
        .node_by_name(node_label)
        .ok_or_else(|| CliError::Usage(format!("unknown node {node_label:?}")))?;
    let marginal = posterior_marginal(&diagram, v)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct OutcomeJson {
            outcome: String,
            probability: f64,
        }
        #[derive(Serialize)]
        struct MarginalJson {
            command: &'static str,
            node: String,
            posterior: Vec<OutcomeJson>,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&MarginalJson {
            command: "marginal",
            node: node_label.clone(),
            posterior: diagram
                .outcomes(v)
                .iter()
                .zip(marginal.iter())
                .map(|(o, p)| OutcomeJson {
                    outcome: o.clone(),
                    probability: *p,
                })
                .collect(),
            trace: trace_json(&diagram, &trace),
        })
    } else {
        let mut out = String::new();
        for (o, p) in diagram.outcomes(v).iter().zip(marginal.iter()) {
            writeln!(out, "P({node_label} = {o}) = {p}").unwrap();
        }
        out
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_evprob(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let evidence = load_evidence(args)?;
    let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
    let run = run_pipeline(&pid, evidence.as_ref(), &target)?;
    let prob = evidence_probability(&run.diagram)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct EvprobJson {
            command: &'static str,
            evidence_probability: f64,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&EvprobJson {
            command: "evprob",
            evidence_probability: prob,
            trace: trace_json(&run.diagram, &run.trace),
        })
    } else {
        format!("evidence probability: {prob}\n")
    };
    Ok(CmdOutput::ok(text))
}

/// Oracle for a check run: the parsed network with the evidence file
/// applied and nothing else; its joint enumeration is the ground truth.
fn oracle_joint(pid: &Pid, evidence: Option<&EvidenceFile>) -> Result<(Pid, JointTable), CliError> {
    let mut absorbed = pid.clone();
    let mut scratch = ReversalTrace::new();
    if let Some(ev) = evidence {
        format::apply_evidence(&mut absorbed, ev, &mut scratch)?;
    }
    let joint = joint_oracle(&absorbed)?;
    Ok((absorbed, joint))
}

fn cmd_oracle_check(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let evidence = load_evidence(args)?;
    let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
    let (_, oracle) = oracle_joint(&pid, evidence.as_ref())?;
    let run = run_pipeline(&pid, evidence.as_ref(), &target)?;

    let prob = evidence_probability(&run.diagram)?;
    let oracle_prob = oracle.sum();
    let mut max_dev = (prob - oracle_prob).abs();
    if oracle_prob > 0.0 {
        for v in run.diagram.latent_nodes() {
            let got = posterior_marginal(&run.diagram, v)?;
            let want = oracle.normalized_marginal(v)?;
            for (a, b) in got.iter().zip(want.iter()) {
                max_dev = max_dev.max((a - b).abs());
            }
        }
    }
    max_dev = max_dev.max(joint_oracle(&run.diagram)?.max_abs_diff(&oracle)?);
    let within = max_dev <= CHECK_TOLERANCE;

    let text = if args.json {
        #[derive(Serialize)]
        struct OracleCheckJson {
            command: &'static str,
            evidence_probability: f64,
            oracle_evidence_probability: f64,
            max_deviation: f64,
            within_tolerance: bool,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&OracleCheckJson {
            command: "oracle-check",
            evidence_probability: prob,
            oracle_evidence_probability: oracle_prob,
            max_deviation: max_dev,
            within_tolerance: within,
            trace: trace_json(&run.diagram, &run.trace),
        })
    } else {
        format!(
            "evidence probability: {prob}\noracle evidence probability: {oracle_prob}\nmax deviation: {max_dev:e}\nwithin {CHECK_TOLERANCE:e}: {within}\n"
        )
    };
    Ok(CmdOutput {
        text,
        code: i32::from(!within),
    })
}

fn cmd_report(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let pid = load_network_strict(args)?;
    let evidence = load_evidence(args)?;
    let target = pipeline::resolve_target(&pid, args.order.as_deref())?;
    let run = run_pipeline(&pid, evidence.as_ref(), &target)?;
    let report = complexity_report(&run.trace, &pid, &target)?;
    let text = if args.json {
        #[derive(Serialize)]
        struct ReportJson {
            command: &'static str,
            target: Vec<String>,
            steps: usize,
            complexity: output::ComplexityJson,
            trace: Vec<output::TraceStepJson>,
        }
        json_line(&ReportJson {
            command: "report",
            target: target
                .iter()
                .map(|v| run.diagram.name(v).to_string())
                .collect(),
            steps: run.trace.len(),
            complexity: complexity_json(&run.diagram, &report),
            trace: trace_json(&run.diagram, &run.trace),
        })
    } else {
        let scope = report
            .max_table_scope
            .iter()
            .map(|&v| run.diagram.name(v).to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "target: {}\nsteps: {}\nadded arcs: {}\nmax table scope: [{scope}] ({} cells)\nmax clique cells: {}\nclique containment: {}\n",
            order_labels(&run.diagram, &target),
            run.trace.len(),
            report.added_arc_count,
            report.max_table_cells,
            report.max_clique_cells,
            report.clique_containment
        )
    };
    Ok(CmdOutput::ok(text))
}

fn cmd_random_test(args: &CommonArgs) -> Result<CmdOutput, CliError> {
    let mut rng = seeded_rng(args.seed);
    let mut max_evprob_dev: f64 = 0.0;
    let mut max_marginal_dev: f64 = 0.0;
    let mut max_joint_dev: f64 = 0.0;
    let mut containment_failures = 0usize;
    for _ in 0..args.count {
        let check = random_pipeline_check(&mut rng)?;
        max_evprob_dev = max_evprob_dev.max(check.evidence_probability_dev);
        max_marginal_dev = max_marginal_dev.max(check.max_marginal_dev);
        max_joint_dev = max_joint_dev.max(check.joint_dev);
        if !check.clique_containment {
            containment_failures += 1;
        }
    }
    let ok = max_evprob_dev <= CHECK_TOLERANCE
        && max_marginal_dev <= CHECK_TOLERANCE
        && max_joint_dev <= CHECK_TOLERANCE
        && containment_failures == 0;
    let text = if args.json {
        #[derive(Serialize)]
        struct RandomTestJson {
            command: &'static str,
            seed: u64,
            pipelines: usize,
            max_evidence_probability_deviation: f64,
            max_marginal_deviation: f64,
            max_joint_deviation: f64,
            containment_failures: usize,
            ok: bool,
        }
        json_line(&RandomTestJson {
            command: "random-test",
            seed: args.seed,
            pipelines: args.count,
            max_evidence_probability_deviation: max_evprob_dev,
            max_marginal_deviation: max_marginal_dev,
            max_joint_deviation: max_joint_dev,
            containment_failures,
            ok,
        })
    } else {
        format!(
            "seed: {}\npipelines: {}\nmax evidence probability deviation: {max_evprob_dev:e}\nmax marginal deviation: {max_marginal_dev:e}\nmax joint deviation: {max_joint_dev:e}\ncontainment failures: {containment_failures}\nok: {ok}\n",
            args.seed, args.count
        )
    };
    Ok(CmdOutput {
        text,
        code: i32::from(!ok),
    })
}
