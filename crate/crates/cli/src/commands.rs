use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use maintkit::dataset::{
    augment_with_jobs, load_records, render_prompt, render_template, split, AugmentedRecord, DatasetError,
    LoadOptions, PromptMode, PromptValues, Schema, SplitSpec,
};
use maintkit::evaluation::{
    compare, corpus_stats, group_distributions, render, summarize_similarity, token_similarity, BoxPlotSummary,
    Report, ReportFormat, SimilarityScores,
};
use maintkit::metrics::{snippet_report, MaintainabilityReport};
use maintkit::refactor::{refactor_records, HttpCompleter};
use maintkit::SourceUnit;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::ToolConfig;
use crate::{Cli, Command, Failure, Global, ModeArg};

struct Ctx {
    global: Global,
    config: ToolConfig,
}

impl Ctx {
    fn jobs(&self) -> usize {
        self.global
            .jobs
            .or(self.config.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    fn seed(&self) -> u64 {
        self.global.seed.or(self.config.seed).unwrap_or(0)
    }

    fn format(&self, default: ReportFormat) -> ReportFormat {
        self.global.format.or(self.config.format).unwrap_or(default)
    }

    fn schema(&self, flag: Option<Schema>) -> Result<Schema, Failure> {
        flag.or(self.config.dataset.schema)
            .ok_or_else(|| Failure::Usage("no dataset schema: pass --schema or set dataset.schema".into()))
    }

    fn load_options(&self, schema: Schema, max_malformed: Option<usize>) -> LoadOptions {
        let mut options = LoadOptions::for_schema(schema);
        if let Some(fields) = &self.config.dataset.fields {
            options.fields = fields.clone();
        }
        if let Some(m) = max_malformed.or(self.config.dataset.max_malformed) {
            options.max_malformed = m;
        }
        options
    }

    fn pool<T: Send>(&self, work: impl FnOnce() -> T + Send) -> T {
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs()).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    }

    /// Loads and augments a dataset, reporting skipped lines on stderr.
    fn augmented(
        &self,
        input: &Path,
        schema: Schema,
        max_malformed: Option<usize>,
    ) -> Result<(Vec<AugmentedRecord>, usize), Failure> {
        require_file(input)?;
        let options = self.load_options(schema, max_malformed);
        let loaded = load_records(input, schema, &options).map_err(|e| match e {
            DatasetError::Io { .. } => Failure::Usage(e.to_string()),
            DatasetError::TooManyMalformed { .. } => Failure::Data(format!("{}: {e}", input.display())),
        })?;
        for err in &loaded.errors {
            eprintln!("warning: {}:{}: {}", input.display(), err.line, err.message);
        }
        let malformed = loaded.errors.len();
        Ok((augment_with_jobs(loaded.records, self.jobs()), malformed))
    }
}

pub fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let config = match &cli.global.config {
        Some(path) => ToolConfig::load(path)?,
        None => ToolConfig::default(),
    };
    let ctx = Ctx {
        global: cli.global,
        config,
    };
    match cli.command {
        Command::Metrics { paths } => metrics(&ctx, &paths),
        Command::Augment {
            input,
            schema,
            output,
            max_malformed,
        } => augment(&ctx, &input, schema, output.as_deref(), max_malformed),
        Command::Split {
            input,
            out_dir,
            ratios,
            sizes,
        } => split_cmd(&ctx, &input, &out_dir, ratios, sizes),
        Command::Prompt {
            path,
            refactored,
            records,
            schema,
            mode,
            output,
        } => match records {
            Some(records) => prompt_records(&ctx, &records, schema, mode, output.as_deref()),
            None => prompt_snippet(&ctx, path.as_deref(), refactored.as_deref(), output.as_deref()),
        },
        Command::Refactor {
            input,
            schema,
            output,
            endpoint,
            model,
        } => refactor(&ctx, &input, schema, output.as_deref(), endpoint, model),
        Command::Evaluate {
            baseline,
            candidate,
            dataset,
            similarity,
            boxplots,
            output,
        } => evaluate(&ctx, &baseline, &candidate, dataset.as_deref(), similarity, boxplots, output.as_deref()),
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such file", path.display())))
    }
}

fn is_stdin(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure::Data(format!("<stdin>: {e}")))?;
    Ok(text)
}

/// Writes `text` to `path` or stdout, unless this is a dry run.
fn emit(ctx: &Ctx, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    if ctx.global.dry_run {
        return Ok(());
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Data(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Data(format!("<stdout>: {e}")))
        }
    }
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("serializable"));
        out.push('\n');
    }
    out
}

fn summary(ctx: &Ctx, line: String) {
    if ctx.global.dry_run {
        eprintln!("{line} (dry run)");
    } else {
        eprintln!("{line}");
    }
}

fn dp2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

// ---- metrics ----

fn metric_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    if paths.is_empty() {
        return Ok(vec![PathBuf::from("-")]);
    }
    let mut out = Vec::new();
    for p in paths {
        if is_stdin(p) || p.is_file() {
            out.push(p.clone());
        } else if p.is_dir() {
            let mut found: Vec<PathBuf> = walkdir::WalkDir::new(p)
                .sort_by_file_name()
                .into_iter()
                .filter_map(Result::ok)
                .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "py"))
                .map(|e| e.into_path())
                .collect();
            out.append(&mut found);
        } else {
            return Err(Failure::Usage(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(out)
}

fn metrics(ctx: &Ctx, paths: &[PathBuf]) -> Result<ExitCode, Failure> {
    let inputs = metric_inputs(paths)?;
    let stdin_text = if inputs.iter().any(|p| is_stdin(p)) {
        Some(read_stdin()?)
    } else {
        None
    };
    let results: Vec<(String, Result<MaintainabilityReport, String>)> = ctx.pool(|| {
        inputs
            .par_iter()
            .map(|p| {
                let name = if is_stdin(p) {
                    "<stdin>".to_string()
                } else {
                    p.display().to_string()
                };
                let text = match &stdin_text {
                    Some(t) if is_stdin(p) => Ok(t.clone()),
                    _ => fs::read_to_string(p).map_err(|e| e.to_string()),
                };
                let report = text.and_then(|t| {
                    snippet_report(&SourceUnit::new(t, name.clone())).map_err(|e| e.source.to_string())
                });
                (name, report)
            })
            .collect()
    });
    let ok: Vec<(&str, &MaintainabilityReport)> =
        results.iter().filter_map(|(n, r)| r.as_ref().ok().map(|r| (n.as_str(), r))).collect();
    let text = match ctx.format(ReportFormat::Json) {
        ReportFormat::Json => {
            let mut out = String::new();
            for (name, r) in &ok {
                let mut obj = Map::new();
                obj.insert("path".into(), Value::String(name.to_string()));
                if let Value::Object(fields) = serde_json::to_value(r).expect("serializable") {
                    obj.extend(fields);
                }
                out.push_str(&serde_json::to_string(&obj).expect("serializable"));
                out.push('\n');
            }
            out
        }
        ReportFormat::Csv => {
            let mut out = String::from("path,sloc,cc,halstead_effort,maintainability_index,comment_ratio,degenerate\n");
            for (name, r) in &ok {
                let quoted = if name.contains([',', '"', '\n']) {
                    format!("\"{}\"", name.replace('"', "\"\""))
                } else {
                    name.to_string()
                };
                out.push_str(&format!(
                    "{quoted},{},{},{},{},{},{}\n",
                    r.sloc, r.cc, r.halstead_effort, r.maintainability_index, r.comment_ratio, r.degenerate
                ));
            }
            out
        }
        ReportFormat::Markdown => {
            let mut out = String::from("| path | SLOC | CC | HE | MI |\n|---|---:|---:|---:|---:|\n");
            for (name, r) in &ok {
                out.push_str(&format!(
                    "| {name} | {} | {} | {} | {} |\n",
                    r.sloc,
                    dp2(r.cc),
                    dp2(r.halstead_effort),
                    dp2(r.maintainability_index)
                ));
            }
            out
        }
    };
    emit(ctx, None, &text)?;
    let mut failed = 0;
    for (name, r) in &results {
        if let Err(e) = r {
            failed += 1;
            eprintln!("error: {name}: {e}");
        }
    }
    let degenerate = ok.iter().filter(|(_, r)| r.degenerate).count();
    summary(
        ctx,
        format!(
            "metrics: {} inputs, {} analyzed, {} degenerate, {} failed",
            results.len(),
            ok.len() - degenerate,
            degenerate,
            failed
        ),
    );
    Ok(ExitCode::from(u8::from(failed > 0)))
}

// ---- augment ----

fn augment(
    ctx: &Ctx,
    input: &Path,
    schema: Option<Schema>,
    output: Option<&Path>,
    max_malformed: Option<usize>,
) -> Result<ExitCode, Failure> {
    let schema = ctx.schema(schema)?;
    let (records, malformed) = ctx.augmented(input, schema, max_malformed)?;
    emit(ctx, output, &jsonl(&records))?;
    let count = |s: &str| {
        records
            .iter()
            .filter(|r| match &r.status {
                maintkit::dataset::AnalysisStatus::Analyzed => s == "analyzed",
                maintkit::dataset::AnalysisStatus::Degenerate => s == "degenerate",
                maintkit::dataset::AnalysisStatus::Unanalyzable(_) => s == "unanalyzable",
            })
            .count()
    };
    summary(
        ctx,
        format!(
            "augment: {} records, {} malformed lines skipped, {} analyzed, {} degenerate, {} unanalyzable",
            records.len(),
            malformed,
            count("analyzed"),
            count("degenerate"),
            count("unanalyzable")
        ),
    );
    Ok(ExitCode::SUCCESS)
}

// ---- split ----

fn split_cmd(
    ctx: &Ctx,
    input: &Path,
    out_dir: &Path,
    ratios: Option<[f64; 3]>,
    sizes: Option<[usize; 3]>,
) -> Result<ExitCode, Failure> {
    require_file(input)?;
    let seed = ctx.seed();
    let spec = match (ratios, sizes) {
        (Some(r), _) => SplitSpec::ratios(r[0], r[1], r[2], seed).map_err(|e| Failure::Usage(e.to_string()))?,
        (None, Some(s)) => SplitSpec::sizes(s[0], s[1], s[2], seed),
        (None, None) => ctx.config.split_spec(seed)?,
    };
    let file = fs::File::open(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let mut lines = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        serde_json::from_str::<Value>(&line)
            .map_err(|e| Failure::Data(format!("{}:{}: invalid JSON: {e}", input.display(), i + 1)))?;
        lines.push(line);
    }
    let n = lines.len();
    let parts = split(lines, &spec).map_err(|e| Failure::Usage(e.to_string()))?;
    if !ctx.global.dry_run {
        fs::create_dir_all(out_dir).map_err(|e| Failure::Data(format!("{}: {e}", out_dir.display())))?;
        for (name, part) in [("train", &parts.train), ("validation", &parts.validation), ("test", &parts.test)] {
            let mut text = part.join("\n");
            if !part.is_empty() {
                text.push('\n');
            }
            let path = out_dir.join(format!("{name}.jsonl"));
            fs::write(&path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        }
    }
    summary(
        ctx,
        format!(
            "split: {n} records -> {}/{}/{} (seed {seed})",
            parts.train.len(),
            parts.validation.len(),
            parts.test.len()
        ),
    );
    Ok(ExitCode::SUCCESS)
}

// ---- prompt ----

fn read_code(path: Option<&Path>) -> Result<(String, String), Failure> {
    match path {
        None => Ok(("<stdin>".into(), read_stdin()?)),
        Some(p) if is_stdin(p) => Ok(("<stdin>".into(), read_stdin()?)),
        Some(p) => {
            require_file(p)?;
            let text = fs::read_to_string(p).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), text))
        }
    }
}

fn prompt_snippet(
    ctx: &Ctx,
    path: Option<&Path>,
    refactored: Option<&Path>,
    output: Option<&Path>,
) -> Result<ExitCode, Failure> {
    if let Some(r) = refactored {
        require_file(r)?;
    }
    let (name, code) = read_code(path)?;
    let refactored_code = refactored
        .map(|r| fs::read_to_string(r).map_err(|e| Failure::Data(format!("{}: {e}", r.display()))))
        .transpose()?;
    let report = snippet_report(&SourceUnit::new(code.clone(), name.clone()))
        .map_err(|e| Failure::Data(e.to_string()))?;
    let text = render_template(&PromptValues {
        original_code: code.trim_end_matches('\n'),
        sloc: report.sloc,
        maintainability_index: report.maintainability_index,
        effort: report.halstead_effort,
        refactored_code: refactored_code.as_deref().map(|c| c.trim_end_matches('\n')),
    });
    emit(ctx, output, &text)?;
    let mode = if refactored_code.is_some() { "training" } else { "inference" };
    summary(ctx, format!("prompt: 1 snippet, 1 rendered ({mode})"));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PromptLine<'a> {
    id: &'a str,
    text: String,
}

fn prompt_records(
    ctx: &Ctx,
    input: &Path,
    schema: Option<Schema>,
    mode: ModeArg,
    output: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let schema = ctx.schema(schema)?;
    let (records, malformed) = ctx.augmented(input, schema, None)?;
    let mode = match mode {
        ModeArg::Training => PromptMode::Training,
        ModeArg::Inference => PromptMode::Inference,
    };
    let lines: Vec<PromptLine> = records
        .iter()
        .filter(|r| r.is_usable())
        .filter_map(|r| {
            render_prompt(r, mode).ok().map(|text| PromptLine {
                id: &r.record.id,
                text,
            })
        })
        .collect();
    emit(ctx, output, &jsonl(&lines))?;
    summary(
        ctx,
        format!(
            "prompt: {} records, {} malformed lines skipped, {} rendered ({}), {} skipped",
            records.len(),
            malformed,
            lines.len(),
            if mode == PromptMode::Training { "training" } else { "inference" },
            records.len() - lines.len()
        ),
    );
    Ok(ExitCode::SUCCESS)
}

// ---- refactor ----

#[derive(Serialize)]
struct RefactorLine<'a> {
    id: &'a str,
    original_code: &'a str,
    /// Refactored code shipped with the dataset, if any.
    reference_code: Option<&'a str>,
    /// Code extracted from the completion.
    candidate_code: Option<&'a str>,
    /// The candidate when accepted, else the original.
    final_code: &'a str,
    accepted: bool,
    skipped: Option<&'a maintkit::refactor::SkipReason>,
    detail: Option<&'a str>,
    attempts: u32,
    decision: Option<&'a maintkit::refactor::GateDecision>,
    original_metrics: Option<&'a MaintainabilityReport>,
    candidate_metrics: Option<&'a MaintainabilityReport>,
}

fn refactor(
    ctx: &Ctx,
    input: &Path,
    schema: Option<Schema>,
    output: Option<&Path>,
    endpoint: Option<String>,
    model: Option<String>,
) -> Result<ExitCode, Failure> {
    let schema = ctx.schema(schema)?;
    let mut config = match (ctx.config.completion.clone(), &endpoint, &model) {
        (Some(c), _, _) => c,
        (None, Some(e), Some(m)) => maintkit::refactor::CompletionConfig::new(e.clone(), m.clone()),
        (None, _, _) => {
            return Err(Failure::Usage(
                "no completion service: add a [completion] section or pass --endpoint and --model".into(),
            ))
        }
    };
    if let Some(e) = endpoint {
        config.endpoint = e;
    }
    if let Some(m) = model {
        config.model = m;
    }
    let concurrency = config.max_concurrency.min(ctx.jobs()).max(1);
    let completer = HttpCompleter::new(config).map_err(|e| Failure::Usage(e.to_string()))?;
    let (records, malformed) = ctx.augmented(input, schema, None)?;
    let eligible = records.iter().filter(|r| r.is_usable()).count();
    if ctx.global.dry_run {
        summary(
            ctx,
            format!("refactor: {} records, {malformed} malformed lines skipped, {eligible} eligible", records.len()),
        );
        return Ok(ExitCode::SUCCESS);
    }
    let outcomes = refactor_records(records, &completer, &ctx.config.gate, concurrency);
    let rows: Vec<RefactorLine> = outcomes
        .iter()
        .map(|o| RefactorLine {
            id: &o.record.record.id,
            original_code: &o.record.record.original_code,
            reference_code: o.record.record.refactored_code.as_deref(),
            candidate_code: o.candidate_code.as_deref(),
            final_code: o.final_code(),
            accepted: o.accepted(),
            skipped: o.skipped.as_ref(),
            detail: o.detail.as_deref(),
            attempts: o.attempts,
            decision: o.decision.as_ref(),
            original_metrics: o.record.original_metrics.as_ref(),
            candidate_metrics: o.candidate_metrics.as_ref(),
        })
        .collect();
    emit(ctx, output, &jsonl(&rows))?;
    let accepted = rows.iter().filter(|r| r.accepted).count();
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    let client_errors = outcomes
        .iter()
        .filter(|o| o.skipped == Some(maintkit::refactor::SkipReason::ClientError))
        .count();
    for o in outcomes.iter().filter(|o| o.skipped.is_some()) {
        eprintln!(
            "warning: {}: skipped ({:?}): {}",
            o.record.record.id,
            o.skipped.as_ref().expect("filtered"),
            o.detail.as_deref().unwrap_or("")
        );
    }
    summary(
        ctx,
        format!(
            "refactor: {} records, {malformed} malformed lines skipped, {accepted} accepted, {} rejected, {skipped} skipped",
            rows.len(),
            rows.len() - accepted - skipped
        ),
    );
    Ok(ExitCode::from(u8::from(client_errors > 0)))
}

// ---- evaluate ----

struct GroupInput {
    name: String,
    codes: Vec<Option<String>>,
}

fn lookup<'a>(obj: &'a Value, field: &str) -> Option<&'a Value> {
    if field.starts_with('/') {
        obj.pointer(field)
    } else {
        obj.get(field)
    }
}

/// Splits `[NAME=]PATH[#FIELD]`. A prefix counts as a name only when it
/// holds no path separator or `#`, so paths containing `=` still work.
fn group_spec(spec: &str) -> (Option<&str>, &str, &str) {
    let (name, rest) = match spec.split_once('=') {
        Some((n, rest)) if !n.is_empty() && !n.contains(['/', '\\', '#']) => (Some(n), rest),
        _ => (None, spec),
    };
    let (path, field) = rest.split_once('#').unwrap_or((rest, "code"));
    (name, path, field)
}

fn load_group(spec: &str) -> Result<GroupInput, Failure> {
    let (name, path, field) = group_spec(spec);
    let path = Path::new(path);
    require_file(path)?;
    let name = match name {
        Some(n) => n.to_string(),
        None => {
            let stem = path
                .file_stem()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
            if field == "code" {
                stem
            } else {
                format!("{stem}#{field}")
            }
        }
    };
    let file = fs::File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut codes = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| Failure::Data(format!("{}:{}: invalid JSON: {e}", path.display(), i + 1)))?;
        codes.push(lookup(&value, field).and_then(Value::as_str).map(str::to_owned));
    }
    Ok(GroupInput { name, codes })
}

fn reports(ctx: &Ctx, group: &GroupInput) -> Vec<Option<MaintainabilityReport>> {
    ctx.pool(|| {
        group
            .codes
            .par_iter()
            .map(|c| {
                c.as_ref()
                    .and_then(|c| snippet_report(&SourceUnit::new(c.clone(), group.name.clone())).ok())
            })
            .collect()
    })
}

fn evaluate(
    ctx: &Ctx,
    baseline: &str,
    candidate: &str,
    dataset: Option<&str>,
    with_similarity: bool,
    with_boxplots: bool,
    output: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let mut groups = vec![load_group(baseline)?, load_group(candidate)?];
    if let Some(d) = dataset {
        groups.push(load_group(d)?);
    }
    let mut seen = std::collections::HashSet::new();
    for g in &mut groups {
        let base = g.name.clone();
        let mut k = 2;
        while !seen.insert(g.name.clone()) {
            g.name = format!("{base} ({k})");
            k += 1;
        }
    }
    if with_similarity && groups[0].codes.len() != groups[1].codes.len() {
        return Err(Failure::Usage(format!(
            "--similarity pairs records by line but baseline has {} and candidate {}",
            groups[0].codes.len(),
            groups[1].codes.len()
        )));
    }
    let all: Vec<Vec<Option<MaintainabilityReport>>> = groups.iter().map(|g| reports(ctx, g)).collect();
    let stats = groups
        .iter()
        .zip(&all)
        .map(|(g, r)| corpus_stats(&g.name, r.iter().map(Option::as_ref)).map_err(|e| Failure::Data(format!("{}: {e}", g.name))))
        .collect::<Result<Vec<_>, _>>()?;
    let table = compare(stats.get(2), &stats[0], &stats[1]);
    let plots: Option<Vec<BoxPlotSummary>> = if with_boxplots {
        let mut v = Vec::new();
        let order: Vec<usize> = if groups.len() == 3 { vec![2, 0, 1] } else { vec![0, 1] };
        for i in order {
            v.extend(
                group_distributions(&groups[i].name, all[i].iter().map(Option::as_ref))
                    .map_err(|e| Failure::Data(format!("{}: {e}", groups[i].name)))?,
            );
        }
        Some(v)
    } else {
        None
    };
    let similarity = if with_similarity {
        let scores: Vec<SimilarityScores> = groups[0]
            .codes
            .iter()
            .zip(&groups[1].codes)
            .filter_map(|(b, c)| {
                let (b, c) = (b.as_ref()?, c.as_ref()?);
                token_similarity(&SourceUnit::inline(b.clone()), &SourceUnit::inline(c.clone())).ok()
            })
            .collect();
        Some(summarize_similarity("token-overlap", &scores).map_err(|e| Failure::Data(format!("similarity: {e}")))?)
    } else {
        None
    };
    let format = ctx.format(ReportFormat::Markdown);
    let text = if format == ReportFormat::Json && (plots.is_some() || similarity.is_some()) {
        let mut obj = Map::new();
        obj.insert("comparison".into(), serde_json::to_value(&table).expect("serializable"));
        if let Some(p) = &plots {
            obj.insert("distributions".into(), serde_json::to_value(p).expect("serializable"));
        }
        if let Some(s) = &similarity {
            obj.insert("similarity".into(), serde_json::to_value(s).expect("serializable"));
        }
        serde_json::to_string_pretty(&obj).expect("serializable") + "\n"
    } else {
        let mut parts = vec![render(Report::Table(&table), format)];
        if let Some(p) = &plots {
            parts.push(render(Report::BoxPlots(p), format));
        }
        if let Some(s) = &similarity {
            parts.push(render(Report::Similarity(s), format));
        }
        parts.join("\n")
    };
    emit(ctx, output, &text)?;
    let described: Vec<String> = stats
        .iter()
        .map(|s| {
            format!(
                "{} {} ({} excluded)",
                s.group,
                s.included,
                s.excluded_degenerate + s.excluded_unanalyzable
            )
        })
        .collect();
    summary(ctx, format!("evaluate: {}", described.join(", ")));
    Ok(ExitCode::SUCCESS)
}
