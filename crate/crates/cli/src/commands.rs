use std::fs;
use std::path::Path;

use degchain::chains::{chain_rng, preprocess as relabel, replica_seed, sample_from, ChainConfig, ChainKind};
use degchain::exact::{
    self, binomial_family, check_lumpability, iso_partition, mixing_time, mixing_time_lifted, quadratic_family,
    spectral, stationary, transition_matrix, Distribution, StateSpace, TransitionMatrix, VerifyOptions,
};
use degchain::graph::{is_connected, realize, triangle_count, validate, BinaryMatrix, DegreeSequence, GraphKind};
use degchain::Error;
use serde_json::{json, Value};

use crate::{CliError, Common, Family, Report, Table, SCHEMA};

const DEFAULT_STEPS: u64 = 1000;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn kind_flag(c: &Common) -> Option<GraphKind> {
    c.kind.map(GraphKind::from)
}

fn check_kind_flag(c: &Common, found: GraphKind) -> Result<(), CliError> {
    match kind_flag(c) {
        Some(k) if k != found => Err(CliError::Usage(format!("--kind {k} does not match the input kind {found}"))),
        _ => Ok(()),
    }
}

fn parse_degrees(text: &str, c: &Common) -> Result<DegreeSequence, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("degree JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Parse("degree JSON must be an object".into()))?;
    if !obj.contains_key("kind") {
        let kind = kind_flag(c).ok_or_else(|| CliError::Usage("degree JSON has no \"kind\"; pass --kind".into()))?;
        obj.insert("kind".into(), json!(kind.as_str()));
    }
    let k: DegreeSequence = serde_json::from_value(value).map_err(|e| Error::Parse(format!("degree JSON: {e}")))?;
    check_kind_flag(c, k.kind())?;
    Ok(k)
}

fn load_matrix(c: &Common) -> Result<Option<(BinaryMatrix, GraphKind)>, CliError> {
    let Some(path) = &c.matrix else { return Ok(None) };
    let (a, kind) = BinaryMatrix::parse_text(&read(path)?)?;
    check_kind_flag(c, kind)?;
    Ok(Some((a, kind)))
}

/// The degree sequence named by `--degrees`, or the margins of `--matrix`.
fn load_degrees(c: &Common) -> Result<DegreeSequence, CliError> {
    let k = match (&c.degrees, load_matrix(c)?) {
        (Some(path), _) => parse_degrees(&read(path)?, c)?,
        (None, Some((a, kind))) => DegreeSequence::of_matrix(&a, kind)?,
        (None, None) => return Err(CliError::Usage("one of --degrees or --matrix is required".into())),
    };
    validate(&k).map_err(Error::Infeasible)?;
    Ok(k)
}

/// The `--matrix` state, or the deterministic realization of `--degrees`.
fn load_start(c: &Common) -> Result<(BinaryMatrix, GraphKind), CliError> {
    if let Some(found) = load_matrix(c)? {
        return Ok(found);
    }
    let k = load_degrees(c)?;
    Ok((realize(&k)?, k.kind()))
}

fn load_space(c: &Common) -> Result<StateSpace, CliError> {
    Ok(exact::enumerate(&load_degrees(c)?, c.cap)?)
}

fn chain(c: &Common) -> ChainKind {
    c.chain.map(ChainKind::from).unwrap_or(ChainKind::Switch)
}

fn state_json(a: &BinaryMatrix) -> Value {
    json!((0..a.n_rows()).map(|i| a.row_string(i)).collect::<Vec<_>>())
}

fn state_cell(a: &BinaryMatrix) -> String {
    (0..a.n_rows()).map(|i| a.row_string(i)).collect::<Vec<_>>().join("/")
}

fn degrees_json(k: &DegreeSequence) -> Value {
    json!({ "kind": k.kind().as_str(), "rows": k.rows(), "cols": k.cols() })
}

fn document(command: &str, mut fields: Value) -> Value {
    let obj = fields.as_object_mut().expect("command output is an object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    fields
}

fn insert(doc: &mut Value, key: &str, value: Value) {
    doc.as_object_mut().expect("command output is an object").insert(key.into(), value);
}

pub fn enumerate(c: &Common) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let mut doc = document(
        "enumerate",
        json!({ "degrees": degrees_json(space.degrees()), "num_states": space.len() }),
    );
    if c.full {
        insert(&mut doc, "states", json!(space.states().iter().map(state_json).collect::<Vec<_>>()));
    }
    Ok(Report::json(doc))
}

pub fn classes(c: &Common) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let part = iso_partition(&space)?;
    let kind = space.kind();
    let representatives: Vec<Value> = part
        .representatives()
        .iter()
        .map(|&r| {
            let s = space.state(r);
            let mut v = json!({ "index": r, "state": state_json(s), "connected": is_connected(s, kind) });
            if kind == GraphKind::Undirected {
                insert(&mut v, "triangles", json!(triangle_count(s, kind)?));
            }
            Ok(v)
        })
        .collect::<Result<_, Error>>()?;
    let mut doc = document(
        "classes",
        json!({
            "degrees": degrees_json(space.degrees()),
            "num_states": space.len(),
            "num_classes": part.len(),
            "class_sizes": part.class_sizes(),
            "representatives": representatives,
        }),
    );
    if c.full {
        insert(&mut doc, "class_of", json!(part.class_of()));
    }
    Ok(Report::json(doc))
}

fn dense(p: &TransitionMatrix) -> Value {
    json!(p.to_rows())
}

pub fn matrix(c: &Common) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let chain = chain(c);
    let p = transition_matrix(&space, chain)?;
    let nonzeros: usize = (0..p.dim()).map(|i| p.row_nonzeros(i).len()).sum();
    let mut doc = document(
        "matrix",
        json!({
            "chain": chain,
            "dim": p.dim(),
            "nonzeros": nonzeros,
            "asymmetry": p.asymmetry(),
            "column_sum_deviation": p.column_sum_deviation(),
        }),
    );
    if c.full {
        insert(&mut doc, "matrix", dense(&p));
        insert(&mut doc, "states", json!(space.states().iter().map(state_json).collect::<Vec<_>>()));
    }
    Ok(Report::json(doc))
}

pub fn project(c: &Common) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let chain = chain(c);
    let p = transition_matrix(&space, chain)?;
    let part = iso_partition(&space)?;
    let deviation = check_lumpability(&p, &part)?;
    let q = exact::project(&p, &part)?;
    let pi_bar = stationary(&q, Some(&part))?;
    Ok(Report::json(document(
        "project",
        json!({
            "chain": chain,
            "num_states": space.len(),
            "num_classes": part.len(),
            "class_sizes": part.class_sizes(),
            "lumpability_deviation": deviation,
            "projected_matrix": dense(&q),
            "stationary": pi_bar.weights(),
        }),
    )))
}

pub fn mixing(c: &Common, projected: bool, lifted: bool) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let chain = chain(c);
    let p = transition_matrix(&space, chain)?;
    let pi = stationary(&p, None)?;
    let (mode, report) = if projected || lifted {
        let part = iso_partition(&space)?;
        if projected {
            let q = exact::project(&p, &part)?;
            let pi_bar = stationary(&q, Some(&part))?;
            ("projected", mixing_time(&q, &pi_bar, c.eps)?)
        } else {
            ("lifted", mixing_time_lifted(&p, &part, &pi, c.eps)?)
        }
    } else {
        ("original", mixing_time(&p, &pi, c.eps)?)
    };
    let mut doc = document(
        "mixing",
        json!({ "chain": chain, "mode": mode, "eps": c.eps, "tau": report.tau, "starts": report.per_start.len() }),
    );
    if c.full {
        insert(&mut doc, "per_start", json!(report.per_start));
        insert(&mut doc, "trace", json!(report.distances));
    }
    let rows = report
        .distances
        .iter()
        .enumerate()
        .map(|(t, d)| vec![t.to_string(), d.to_string()])
        .collect();
    Ok(Report {
        json: doc,
        table: Some(Table {
            header: vec!["t", "distance"],
            rows,
        }),
        failed: false,
    })
}

pub fn spectrum(c: &Common, projected: bool) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let chain = chain(c);
    let p = transition_matrix(&space, chain)?;
    let summary = if projected {
        let part = iso_partition(&space)?;
        let q = exact::project(&p, &part)?;
        let pi_bar = stationary(&q, Some(&part))?;
        spectral(&q, &pi_bar)?
    } else {
        spectral(&p, &Distribution::uniform(p.dim()))?
    };
    let rows = summary
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), v.to_string()])
        .collect();
    Ok(Report {
        json: document(
            "spectrum",
            json!({
                "chain": chain,
                "projected": projected,
                "eigenvalues": summary.eigenvalues,
                "lambda_star": summary.lambda_star,
                "gap": summary.gap,
            }),
        ),
        table: Some(Table {
            header: vec!["index", "eigenvalue"],
            rows,
        }),
        failed: false,
    })
}

pub fn sample(c: &Common) -> Result<Report, CliError> {
    let (start, kind) = load_start(c)?;
    let cfg = ChainConfig {
        chain: chain(c),
        steps: c.steps.unwrap_or(DEFAULT_STEPS),
        preprocess: c.preprocess,
        seed: c.seed,
    };
    let replicas = c.samples.unwrap_or(1);
    let states = sample_from(start.clone(), kind, replicas, &cfg)?.collect_parallel();
    let undirected = kind == GraphKind::Undirected;
    let mut samples = Vec::with_capacity(states.len());
    let mut rows = Vec::with_capacity(states.len());
    for (r, s) in states.iter().enumerate() {
        let connected = is_connected(s, kind);
        let mut v = json!({ "replica": r, "state": state_json(s), "connected": connected });
        let mut row = vec![r.to_string(), state_cell(s), connected.to_string()];
        if undirected {
            let t = triangle_count(s, kind)?;
            insert(&mut v, "triangles", json!(t));
            row.push(t.to_string());
        }
        samples.push(v);
        rows.push(row);
    }
    let mut header = vec!["replica", "state", "connected"];
    if undirected {
        header.push("triangles");
    }
    Ok(Report {
        json: document(
            "sample",
            json!({
                "kind": kind.as_str(),
                "chain": cfg.chain,
                "steps": cfg.steps,
                "preprocess": cfg.preprocess,
                "seed": cfg.seed,
                "start": state_json(&start),
                "samples": samples,
            }),
        ),
        table: Some(Table { header, rows }),
        failed: false,
    })
}

pub fn preprocess(c: &Common) -> Result<Report, CliError> {
    let (start, kind) = load_start(c)?;
    let count = c.samples.unwrap_or(1);
    let states = (0..count)
        .map(|r| relabel(&start, kind, &mut chain_rng(replica_seed(c.seed, r))).map(|s| state_json(&s)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Report::json(document(
        "preprocess",
        json!({ "kind": kind.as_str(), "seed": c.seed, "start": state_json(&start), "states": states }),
    )))
}

pub fn verify(c: &Common) -> Result<Report, CliError> {
    let space = load_space(c)?;
    let chains = match c.chain {
        Some(ch) => vec![ChainKind::from(ch)],
        None => vec![ChainKind::Switch, ChainKind::Curveball],
    };
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: c.seed,
        monte_carlo_trials: c.samples.unwrap_or(defaults.monte_carlo_trials),
        ..defaults
    };
    let reports = chains
        .iter()
        .map(|&ch| exact::verify(&space, ch, &opts))
        .collect::<Result<Vec<_>, Error>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let doc = document(
        "verify",
        json!({ "degrees": degrees_json(space.degrees()), "passed": passed, "reports": reports }),
    );
    Ok(Report {
        json: doc,
        table: None,
        failed: !passed,
    })
}

pub fn family(family: Family, param: usize) -> Result<Report, CliError> {
    let (name, k) = match family {
        Family::Quadratic => ("quadratic", quadratic_family(param)?),
        Family::Binomial => ("binomial", binomial_family(param)?),
    };
    // the kind/rows/cols keys sit at the top level so the output is itself
    // a valid --degrees file
    let mut doc = document("family", degrees_json(&k));
    insert(&mut doc, "family", json!(name));
    insert(&mut doc, "param", json!(param));
    Ok(Report::json(doc))
}
