use std::collections::BTreeMap;

use serde::Serialize;
use spreadlab::badpairs::{count_bad_pairs, expected_s, expected_s_oracle, BadPairParams};
use spreadlab::bounds::{evaluate_bounds, BoundParams, BoundSet};
use spreadlab::exact::{to_f64, JsonRational};
use spreadlab::fragmentation::{audit_trace, run_fragmentation, FragmentationConfig, FragmentationTrace, TraceAudit};
use spreadlab::generators::{
    complete_uniform, copies_of, hamilton_cycles, hamilton_squares, perfect_matchings, random_hypergraph,
};
use spreadlab::rng::derive_seed;
use spreadlab::spread::{
    certify_multilevel, certify_q_spread, certify_tiered, min_q_spread, min_q_tiered, vertex_bound_holds,
    CertMode, CertOptions, CertResult, MinSpread, MinSpreadJson, SpreadProfile, Verdict,
};
use spreadlab::suite::{run_criterion, Profile, CRITERIA};
use spreadlab::threshold::{endgame_sample, estimate_containment_at, exact_containment, ThresholdEstimate};
use spreadlab::{parse_rational, Error, Rational, Result, VertexSet};

use crate::output::{read_hypergraph, read_json, to_pretty, write_text, Envelope, RunConfig};
use crate::*;

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Certify(a) => certify(cli, a),
        Command::MinSpread(a) => min_spread(cli, a),
        Command::Fragment(a) => fragment(cli, a),
        Command::Badpairs(a) => badpairs(cli, a),
        Command::Expectation(a) => expectation(cli, a),
        Command::Threshold(a) => threshold(cli, a),
        Command::Bounds(a) => bounds(cli, a),
        Command::Suite(a) => suite(cli, a),
    }
}

fn usize_list(text: &str, what: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Input(format!("{what}: `{t}` is not a non-negative integer")))
        })
        .collect()
}

fn rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// A float or an `a/b` rational, for the floating-point bound formulas.
fn number(text: &str) -> Result<f64> {
    if text.contains('/') {
        return parse_rational(text).map(|r| to_f64(&r));
    }
    text.trim()
        .parse()
        .map_err(|_| Error::Input(format!("`{text}` is not a number")))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Input(format!("missing --{flag}")))
}

fn emit<A: Serialize, T: Serialize>(run: &RunConfig<A>, path: Option<&std::path::Path>, result: T) -> Result<()> {
    write_text(path, &to_pretty(&Envelope { run, result })?)
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Result<i32> {
    let n = a.n;
    let h = match a.family {
        Family::Complete => complete_uniform(n, *need(&a.r, "r")?)?,
        Family::Matchings => perfect_matchings(n)?,
        Family::Hamilton => hamilton_cycles(n)?,
        Family::HamiltonSq => hamilton_squares(n)?,
        Family::Copies => {
            let f = read_hypergraph(need(&a.f, "f")?)?;
            copies_of(&f, n, &cli.budget())?
        }
        Family::Random => random_hypergraph(n, *need(&a.r, "r")?, *need(&a.m, "m")?, a.seed)?,
    };
    emit(&RunConfig::new(cli, "generate", a), a.output.as_deref(), &h)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CertifyOutput {
    #[serde(flatten)]
    result: CertResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_q: Option<MinSpreadJson>,
}

fn certify(cli: &Cli, a: &CertifyArgs) -> Result<i32> {
    let h = read_hypergraph(&a.input)?;
    let budget = cli.budget();
    let opts = CertOptions {
        mode: match a.samples {
            Some(samples) => CertMode::Sampled { samples, seed: a.seed },
            None => CertMode::Exact,
        },
        budget,
    };
    let exact = a.samples.is_none();
    let r_seq = || -> Result<Vec<usize>> { usize_list(need(&a.r_seq, "r-seq")?, "r-seq") };
    let (result, min_q) = match a.mode {
        CertifyMode::Q => {
            let q = parse_rational(need(&a.q, "q")?)?;
            let res = certify_q_spread(&h, &q, &opts)?;
            let min = if exact { Some(min_q_spread(&h, &budget)?) } else { None };
            (res, min)
        }
        CertifyMode::Tiered => {
            let r = r_seq()?;
            let profile = SpreadProfile::tiered(parse_rational(need(&a.q, "q")?)?, r.clone())?;
            let res = certify_tiered(&h, &profile, &opts)?;
            let min = if exact { Some(min_q_tiered(&h, &r, &budget)?) } else { None };
            (res, min)
        }
        CertifyMode::Multilevel => {
            let qs = rational_list(need(&a.q_list, "q-list")?)?;
            let profile = SpreadProfile::multilevel(qs, r_seq()?)?;
            (certify_multilevel(&h, &profile, &opts)?, None)
        }
    };
    let code = if result.verdict == Verdict::Fail { EXIT_FAIL } else { EXIT_OK };
    let out = CertifyOutput {
        result,
        min_q: min_q.as_ref().map(MinSpreadJson::from),
    };
    emit(&RunConfig::new(cli, "certify", a), a.output.as_deref(), &out)?;
    Ok(code)
}

#[derive(Serialize)]
struct MinSpreadOutput {
    #[serde(flatten)]
    min: MinSpreadJson,
    /// `r_1 <= e q n` for uniform hypergraphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex_bound_holds: Option<bool>,
}

fn min_spread(cli: &Cli, a: &MinSpreadArgs) -> Result<i32> {
    let h = read_hypergraph(&a.input)?;
    let budget = cli.budget();
    let m: MinSpread = match &a.r_seq {
        Some(r) => min_q_tiered(&h, &usize_list(r, "r-seq")?, &budget)?,
        None => min_q_spread(&h, &budget)?,
    };
    let uniform = h.uniformity()?.is_uniform();
    let out = MinSpreadOutput {
        min: (&m).into(),
        vertex_bound_holds: uniform.then(|| vertex_bound_holds(h.max_edge_size(), &m.value, h.n())),
    };
    emit(&RunConfig::new(cli, "min-spread", a), a.output.as_deref(), &out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    trial: Option<u64>,
    #[serde(flatten)]
    trace: &'a FragmentationTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<TraceAudit>,
}

fn fragment(cli: &Cli, a: &FragmentArgs) -> Result<i32> {
    let h = read_hypergraph(&a.input)?;
    let config = FragmentationConfig::new(
        usize_list(&a.r_seq, "r-seq")?,
        parse_rational(&a.q)?,
        parse_rational(&a.c)?,
        a.seed,
    )?;
    let run = RunConfig::new(cli, "fragment", a);
    let audit = |t: &FragmentationTrace| a.audit.then(|| audit_trace(&h, t));
    let mut failed = false;
    match a.trials {
        None => {
            let trace = run_fragmentation(&h, &config)?;
            let audit = audit(&trace);
            failed = audit.as_ref().is_some_and(|x| !x.ok());
            let record = TraceRecord {
                trial: None,
                trace: &trace,
                audit,
            };
            emit(&run, a.output.as_deref(), &record)?;
        }
        Some(trials) => {
            let mut text = serde_json::to_string(&Envelope { run: &run, result: () })
                .map_err(crate::output::json_error)?;
            text.push('\n');
            for t in 0..trials {
                let trace = run_fragmentation(&h, &config.with_seed(derive_seed(a.seed, t)))?;
                let audit = audit(&trace);
                failed |= audit.as_ref().is_some_and(|x| !x.ok());
                let record = TraceRecord {
                    trial: Some(t),
                    trace: &trace,
                    audit,
                };
                text.push_str(&serde_json::to_string(&record).map_err(crate::output::json_error)?);
                text.push('\n');
            }
            write_text(a.output.as_deref(), &text)?;
        }
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}

fn badpairs(cli: &Cli, a: &BadpairsArgs) -> Result<i32> {
    let h = read_hypergraph(&a.input)?;
    let params = BadPairParams {
        c: parse_rational(&a.c)?,
        q: parse_rational(&a.q)?,
        k: a.k,
        pn: a.pn,
    };
    let report = count_bad_pairs(&h, &params, &cli.budget())?;
    emit(&RunConfig::new(cli, "badpairs", a), a.output.as_deref(), &report)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExpectationOutput {
    s: VertexSet,
    value: JsonRational,
    approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<JsonRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn expectation(cli: &Cli, a: &ExpectationArgs) -> Result<i32> {
    let h = read_hypergraph(&a.input)?;
    let s = match (&a.edge, &a.s) {
        (Some(i), _) => h
            .edges()
            .get(*i)
            .cloned()
            .ok_or_else(|| Error::Input(format!("no edge {i}")))?,
        (None, Some(text)) => VertexSet::new(usize_list(text, "s")?),
        (None, None) => return Err(Error::Input("give --edge or --s".into())),
    };
    let value = expected_s(&h, &s, a.w, a.k)?;
    let oracle = if a.oracle {
        Some(expected_s_oracle(&h, &s, a.w, a.k, &cli.budget())?)
    } else {
        None
    };
    let agree = oracle.as_ref().map(|o| *o == value);
    let out = ExpectationOutput {
        s,
        approx: to_f64(&value),
        value: (&value).into(),
        oracle: oracle.as_ref().map(JsonRational::from),
        agree,
    };
    emit(&RunConfig::new(cli, "expectation", a), a.output.as_deref(), &out)?;
    Ok(if agree == Some(false) { EXIT_FAIL } else { EXIT_OK })
}

fn sizes(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo = usize_list(lo, "sizes")?[0];
                let hi = usize_list(hi, "sizes")?[0];
                out.extend(lo..=hi);
            }
            None => out.extend(usize_list(part, "sizes")?),
        }
    }
    Ok(out)
}

/// Parses `C=8,q=1/10,rseq=3,1,alpha=1/2,K0=5,qlist=..,l=2`. Values of
/// list-valued keys run until the next `key=`.
fn bound_params(text: &str, n: usize) -> Result<BoundParams> {
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    let mut last: Option<String> = None;
    for token in text.split(',') {
        match token.split_once('=') {
            Some((k, v)) => {
                let k = k.trim().to_string();
                if fields.insert(k.clone(), v.trim().to_string()).is_some() {
                    return Err(Error::Input(format!("--bounds repeats {k}")));
                }
                last = Some(k);
            }
            None => {
                let k = last.as_ref().ok_or_else(|| Error::Input(format!("--bounds: `{token}` has no key")))?;
                let v = fields.get_mut(k).unwrap();
                v.push(',');
                v.push_str(token.trim());
            }
        }
    }
    let get = |k: &str| fields.get(k).map(String::as_str);
    let req = |k: &str| get(k).ok_or_else(|| Error::Input(format!("--bounds needs {k}=")));
    let r_sequence = usize_list(req("rseq")?, "rseq")?;
    if let Some(l) = get("l") {
        if usize_list(l, "l")? != [r_sequence.len()] {
            return Err(Error::Input(format!("l={l} disagrees with rseq of length {}", r_sequence.len())));
        }
    }
    for k in fields.keys() {
        if !["C", "q", "rseq", "l", "alpha", "K0", "qlist"].contains(&k.as_str()) {
            return Err(Error::Input(format!("--bounds: unknown key {k}")));
        }
    }
    Ok(BoundParams {
        c: number(req("C")?)?,
        q: number(req("q")?)?,
        r_sequence,
        n,
        alpha: get("alpha").map(number).transpose()?,
        k0: get("K0").map(number).transpose()?,
        q_values: get("qlist")
            .map(|t| t.split(',').map(number).collect::<Result<Vec<_>>>())
            .transpose()?,
    })
}

#[derive(Serialize)]
struct ThresholdRow {
    #[serde(flatten)]
    estimate: ThresholdEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<JsonRational>,
    /// Each applicable bound whose set size is at most this row's size.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    bounds: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct ThresholdOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    extinct: Option<bool>,
    rows: Vec<ThresholdRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<BoundSet>,
}

fn threshold(cli: &Cli, a: &ThresholdArgs) -> Result<i32> {
    let sizes = sizes(&a.sizes)?;
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input("--sizes must be strictly increasing".into()));
    }
    let (h, trace) = match (&a.input, &a.trace) {
        (Some(p), _) => (read_hypergraph(p)?, None),
        (None, Some(p)) => {
            let t: FragmentationTrace = read_json(p)?;
            (t.final_hypergraph.clone(), Some(t))
        }
        (None, None) => return Err(Error::Input("give --input or --trace".into())),
    };
    let bound_set = a
        .bounds
        .as_deref()
        .map(|b| bound_params(b, h.n()).and_then(|p| evaluate_bounds(&p)))
        .transpose()?;
    let budget = cli.budget();
    let mut extinct = None;
    let mut rows = Vec::new();
    for &s in &sizes {
        let seed = derive_seed(a.seed, s as u64);
        let estimate = match &trace {
            Some(t) => {
                let e = endgame_sample(t, s, a.trials, seed)?;
                extinct = Some(e.extinct);
                e.estimate
            }
            None => estimate_containment_at(&h, s, a.trials, seed, a.confidence)?,
        };
        let exact = if a.exact {
            match exact_containment(&h, s, &budget) {
                Ok(p) => Some(JsonRational::from(&p)),
                Err(Error::Resource { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let mut bounds = BTreeMap::new();
        for e in bound_set.iter().flat_map(|b| &b.entries) {
            if let Some(v) = e.value.filter(|_| e.set_size <= s as f64) {
                bounds.insert(e.label(), v);
            }
        }
        rows.push(ThresholdRow { estimate, exact, bounds });
    }
    let run = RunConfig::new(cli, "threshold", a);
    match a.format {
        Format::Json => emit(
            &run,
            a.output.as_deref(),
            &ThresholdOutput {
                extinct,
                rows,
                bounds: bound_set,
            },
        )?,
        Format::Csv => {
            let mut text = run.comment_lines()?;
            if let Some(x) = extinct {
                text.push_str(&format!("# extinct={x}\n"));
            }
            let labels: Vec<String> = bound_set
                .iter()
                .flat_map(|b| &b.entries)
                .filter(|e| e.applicable)
                .map(|e| {
                    text.push_str(&format!("# bound.{}.set_size={}\n", e.label(), e.set_size));
                    e.label()
                })
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<String> = ["size", "trials", "successes", "p_hat", "lo", "hi"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            if a.exact {
                header.push("exact".into());
            }
            header.extend(labels.iter().cloned());
            w.write_record(&header).map_err(csv_error)?;
            for row in &rows {
                let e = &row.estimate;
                let mut rec = vec![
                    e.set_size.to_string(),
                    e.trials.to_string(),
                    e.successes.to_string(),
                    e.p_hat.to_string(),
                    e.lo.to_string(),
                    e.hi.to_string(),
                ];
                if a.exact {
                    rec.push(row.exact.as_ref().map_or(String::new(), |j| format!("{}/{}", j.num, j.den)));
                }
                for l in &labels {
                    rec.push(row.bounds.get(l).map_or(String::new(), |v| v.to_string()));
                }
                w.write_record(&rec).map_err(csv_error)?;
            }
            let body = w.into_inner().map_err(|e| Error::Input(format!("CSV: {e}")))?;
            text.push_str(&String::from_utf8_lossy(&body));
            write_text(a.output.as_deref(), &text)?;
        }
    }
    Ok(EXIT_OK)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Input(format!("CSV: {e}"))
}

fn bounds(cli: &Cli, a: &BoundsArgs) -> Result<i32> {
    let params = BoundParams {
        c: number(&a.c)?,
        q: number(&a.q)?,
        r_sequence: usize_list(&a.r_seq, "r-seq")?,
        n: a.n,
        alpha: a.alpha.as_deref().map(number).transpose()?,
        k0: a.k0.as_deref().map(number).transpose()?,
        q_values: a
            .q_list
            .as_deref()
            .map(|t| t.split(',').map(number).collect::<Result<Vec<_>>>())
            .transpose()?,
    };
    let set = evaluate_bounds(&params)?;
    emit(&RunConfig::new(cli, "bounds", a), a.output.as_deref(), &set)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SuiteOutput {
    passed: bool,
    criteria: Vec<spreadlab::suite::CriterionReport>,
}

fn suite(cli: &Cli, a: &SuiteArgs) -> Result<i32> {
    let profile = match a.profile {
        SuiteProfile::Quick => Profile::Quick,
        SuiteProfile::Full => Profile::Full,
    };
    let ids = match &a.criteria {
        Some(t) => usize_list(t, "criteria")?.into_iter().map(|i| i as u32).collect(),
        None => CRITERIA.iter().map(|c| c.0).collect::<Vec<_>>(),
    };
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id, profile)?;
        eprintln!(
            "criterion {:>2} {} {} ({} ms): {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.elapsed_ms,
            r.detail
        );
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    emit(
        &RunConfig::new(cli, "suite", a),
        a.output.as_deref(),
        &SuiteOutput {
            passed,
            criteria: reports,
        },
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}
