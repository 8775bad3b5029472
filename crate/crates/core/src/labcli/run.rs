//! `froglab run`: task planning, cached execution and CSV assembly.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{ExperimentConfig, FieldKind, Kind};
use super::format::{csv_line, format_real};
use super::{unix_now, write_file, LabError};
use crate::frogcore::FrogError;
use crate::percpath::{
    gen_frog_indicator_field, gen_independent_field, gen_m_dependent_field, tessellation_bound_check,
    xl_animal_check, PercError, SiteField,
};
use crate::sched::{parallel_map, resolve_workers};
use crate::statkit::{
    fm_gap_report, fm_gap_sample, path_record_stats, sample_passage, scaling_row, FmGapSample,
    PathRecord,
};
use crate::walkfield::keyed::derive_seed;
use crate::walkfield::{Site, WalkField};

const PERC_TAG: u64 = 0x5045_5243_4649_454c;

#[derive(Debug, Clone, PartialEq)]
enum TaskSpec {
    Passage {
        d: usize,
        n: u32,
        x: Site,
        replicas: Range<u64>,
    },
    Perc {
        l: u32,
        m: u32,
        p: f64,
        instances: Range<u64>,
    },
    Fm {
        x: Site,
        replicas: Range<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PassageRow {
    replica: u64,
    /// `None` when the horizon cap was exhausted.
    value: Option<u64>,
    path_len: usize,
    max_jump: u32,
    frontier_radius: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PercRow {
    instance: u64,
    density: f64,
    x_l: u32,
    n_bound: u32,
    tess_bound: u64,
    violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FmRow {
    replica: u64,
    /// `(T, F_m sum, m, terms)`, or `None` when censored.
    value: Option<(u64, u64, u32, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum TaskOutput {
    Passages(Vec<PassageRow>),
    Perc(Vec<PercRow>),
    Fm(Vec<FmRow>),
}

impl TaskOutput {
    fn censored(&self) -> usize {
        match self {
            TaskOutput::Passages(rows) => rows.iter().filter(|r| r.value.is_none()).count(),
            TaskOutput::Fm(rows) => rows.iter().filter(|r| r.value.is_none()).count(),
            TaskOutput::Perc(_) => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TaskRecord {
    task: usize,
    fingerprint: String,
    output: TaskOutput,
}

/// What a finished run did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub kind: Kind,
    pub output: PathBuf,
    pub tasks: usize,
    /// Tasks computed in this invocation; the rest came from the cache.
    pub computed: usize,
    pub censored: usize,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    /// 0, or 3 when some passage times hit the horizon cap.
    pub fn exit_code(&self) -> i32 {
        if self.censored > 0 {
            3
        } else {
            0
        }
    }
}

fn blocks(total: u64, block: u64) -> impl Iterator<Item = Range<u64>> {
    (0..total.div_ceil(block)).map(move |b| b * block..((b + 1) * block).min(total))
}

fn scaled(direction: &[i32], n: u32) -> Site {
    Site::new(&direction.iter().map(|c| c * n as i32).collect::<Vec<_>>())
}

fn plan(config: &ExperimentConfig, kind: Kind) -> Vec<TaskSpec> {
    let mut tasks = Vec::new();
    match kind {
        Kind::Sim => {
            for &n in &config.sim.n {
                for replicas in blocks(config.sim.replicas, config.block) {
                    tasks.push(TaskSpec::Passage {
                        d: config.dim(),
                        n,
                        x: scaled(&config.sim.direction, n),
                        replicas,
                    });
                }
            }
        }
        Kind::Scaling => {
            for &d in &config.dims {
                for &n in &config.scaling.n {
                    for replicas in blocks(config.scaling.replicas, config.block) {
                        tasks.push(TaskSpec::Passage {
                            d,
                            n,
                            x: Site::along_first_axis(d, n as i32),
                            replicas,
                        });
                    }
                }
            }
        }
        Kind::Perc => {
            let per = config.perc.instances;
            let mut first = 0;
            for &l in &config.perc.l {
                for &m in &config.perc.m {
                    for &p in &config.perc.p {
                        for r in blocks(per, config.block) {
                            tasks.push(TaskSpec::Perc {
                                l,
                                m,
                                p,
                                instances: first + r.start..first + r.end,
                            });
                        }
                        first += per;
                    }
                }
            }
        }
        Kind::FmGap => {
            let x = Site::new(&config.fmgap.x);
            for replicas in blocks(config.fmgap.replicas, config.block) {
                tasks.push(TaskSpec::Fm { x, replicas });
            }
        }
    }
    tasks
}

fn failed<E: std::fmt::Display>(e: E) -> LabError {
    LabError::Failed(e.to_string())
}

/// Field of one `perc` instance; it covers `B((d+1)L)` when the animal side
/// is computed exactly, otherwise `B(L)`.
fn perc_field(config: &ExperimentConfig, l: u32, m: u32, p: f64, instance: u64) -> Result<SiteField, PercError> {
    let d = config.dim();
    let big = (d as u32 + 1) * l;
    let radius = if config.caps.check_animal_cells(big + 1).is_ok() {
        big
    } else {
        l
    };
    let seed = derive_seed(PERC_TAG, config.master_seed, instance);
    match config.perc.field {
        FieldKind::Independent => gen_independent_field(seed, d, radius, p),
        FieldKind::MDependent => gen_m_dependent_field(seed, d, radius, m, p),
        FieldKind::Frog => {
            let walks = WalkField::new(config.master_seed, instance, d).map_err(FrogError::from)?;
            let f = gen_frog_indicator_field(&walks, radius, m)?;
            let q = f.count_open() as f64 / f.region().len() as f64;
            Ok(f.with_density(Some(q)))
        }
    }
}

fn execute(config: &ExperimentConfig, spec: &TaskSpec) -> Result<TaskOutput, LabError> {
    let policy = config.policy();
    match spec {
        TaskSpec::Passage { x, replicas, .. } => {
            let mut rows = Vec::new();
            for r in replicas.clone() {
                rows.push(match sample_passage(config.master_seed, r, *x, &policy) {
                    Ok(s) => PassageRow {
                        replica: r,
                        value: Some(s.value),
                        path_len: s.hops(),
                        max_jump: s.max_jump,
                        frontier_radius: s.frontier_radius,
                    },
                    Err(e) if e.is_not_reached() => PassageRow {
                        replica: r,
                        value: None,
                        path_len: 0,
                        max_jump: 0,
                        frontier_radius: 0,
                    },
                    Err(e) => return Err(failed(e)),
                });
            }
            Ok(TaskOutput::Passages(rows))
        }
        TaskSpec::Perc { l, m, p, instances } => {
            let mut rows = Vec::new();
            for i in instances.clone() {
                let field = perc_field(config, *l, *m, *p, i).map_err(failed)?;
                let animal = xl_animal_check(&field, *l, &config.caps).map_err(failed)?;
                let tess = tessellation_bound_check(&field, *l, (*m).max(1), &config.caps).map_err(failed)?;
                rows.push(PercRow {
                    instance: i,
                    density: field.density().unwrap_or(*p),
                    x_l: animal.x_l,
                    n_bound: animal.n_value,
                    tess_bound: tess.bound,
                    violation: !(animal.holds && tess.holds),
                });
            }
            Ok(TaskOutput::Perc(rows))
        }
        TaskSpec::Fm { x, replicas } => {
            let mut rows = Vec::new();
            for r in replicas.clone() {
                let value = match fm_gap_sample(config.master_seed, r, *x, &policy) {
                    Ok(s) => Some((s.t, s.f_sum, s.m, s.terms)),
                    Err(e) if e.is_not_reached() => None,
                    Err(e) => return Err(failed(e)),
                };
                rows.push(FmRow { replica: r, value });
            }
            Ok(TaskOutput::Fm(rows))
        }
    }
}

struct Cache {
    dir: PathBuf,
    fingerprint: String,
}

impl Cache {
    /// Opens the task cache, discarding it when the config changed.
    fn open(output: &Path, fingerprint: u64) -> Result<Cache, LabError> {
        let dir = output.join("cache");
        let fingerprint = format!("{fingerprint:016x}");
        let stamp = dir.join("fingerprint");
        let current = std::fs::read_to_string(&stamp).ok();
        if current.as_deref().map(str::trim) != Some(fingerprint.as_str()) && dir.exists() {
            std::fs::remove_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
        }
        std::fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
        write_file(&stamp, &format!("{fingerprint}\n"))?;
        Ok(Cache { dir, fingerprint })
    }

    fn path(&self, task: usize) -> PathBuf {
        self.dir.join(format!("task-{task:06}.json"))
    }

    fn load(&self, task: usize) -> Option<TaskOutput> {
        let text = std::fs::read_to_string(self.path(task)).ok()?;
        let rec: TaskRecord = serde_json::from_str(&text).ok()?;
        (rec.task == task && rec.fingerprint == self.fingerprint).then_some(rec.output)
    }

    fn store(&self, task: usize, output: &TaskOutput) -> Result<(), LabError> {
        let rec = TaskRecord {
            task,
            fingerprint: self.fingerprint.clone(),
            output: output.clone(),
        };
        let text = serde_json::to_string(&rec).map_err(failed)?;
        write_file(&self.path(task), &text)
    }
}

/// Executes the configured experiment and writes its CSVs and manifest.
///
/// Tasks already present in `<output>/cache` under the same config
/// fingerprint are reused, so an interrupted run resumes where it stopped.
pub fn run(config: &ExperimentConfig) -> Result<RunSummary, LabError> {
    let kind = config
        .kind
        .ok_or_else(|| LabError::config(0, "kind is required for run"))?;
    let started = unix_now();
    let out = config.output.clone();
    std::fs::create_dir_all(&out).map_err(|e| LabError::io(&out, e))?;
    let cache = Cache::open(&out, config.fingerprint())?;
    let specs = plan(config, kind);
    let cached: Vec<Option<TaskOutput>> = (0..specs.len()).map(|t| cache.load(t)).collect();
    let missing: Vec<usize> = (0..specs.len()).filter(|&t| cached[t].is_none()).collect();
    let workers = resolve_workers(config.workers);
    let fresh = parallel_map(missing.len(), workers, |i| {
        let t = missing[i];
        let output = execute(config, &specs[t])?;
        cache.store(t, &output)?;
        Ok::<_, LabError>(output)
    });
    let mut outputs = cached;
    for (i, r) in fresh.into_iter().enumerate() {
        outputs[missing[i]] = Some(r?);
    }
    let outputs: Vec<TaskOutput> = outputs.into_iter().map(|o| o.expect("every task filled")).collect();

    let files = match kind {
        Kind::Sim => write_samples(config, &out, &specs, &outputs)?,
        Kind::Scaling => write_scaling(config, &out, &specs, &outputs)?,
        Kind::Perc => write_perc(&out, &specs, &outputs)?,
        Kind::FmGap => write_fmgap(config, &out, &outputs)?,
    };
    let censored: usize = outputs.iter().map(TaskOutput::censored).sum();
    write_manifest(config, kind, &out, &specs, &outputs, started, &files)?;
    Ok(RunSummary {
        kind,
        output: out,
        tasks: specs.len(),
        computed: missing.len(),
        censored,
        files,
    })
}

fn passage_rows<'a>(spec: &'a TaskSpec, output: &'a TaskOutput) -> (usize, u32, Site, &'a [PassageRow]) {
    match (spec, output) {
        (TaskSpec::Passage { d, n, x, .. }, TaskOutput::Passages(rows)) => (*d, *n, *x, rows),
        _ => unreachable!("passage task with another output"),
    }
}

fn write_samples(
    config: &ExperimentConfig,
    out: &Path,
    specs: &[TaskSpec],
    outputs: &[TaskOutput],
) -> Result<Vec<PathBuf>, LabError> {
    let d = config.dim();
    let mut header = vec!["task".to_string(), "replica".into(), "n".into()];
    header.extend((1..=d).map(|i| format!("dx{i}")));
    header.extend(["T", "path_len", "max_jump", "frontier_radius"].map(String::from));
    let mut text = csv_line(&header);
    for (t, (spec, output)) in specs.iter().zip(outputs).enumerate() {
        let (_, n, x, rows) = passage_rows(spec, output);
        for r in rows {
            let mut f = vec![t.to_string(), r.replica.to_string(), n.to_string()];
            f.extend(x.coords().iter().map(|c| c.to_string()));
            match r.value {
                Some(v) => f.extend([
                    v.to_string(),
                    r.path_len.to_string(),
                    r.max_jump.to_string(),
                    r.frontier_radius.to_string(),
                ]),
                None => f.extend(["NA", "NA", "NA", "NA"].map(String::from)),
            }
            text.push_str(&csv_line(&f));
        }
    }
    let path = out.join("samples.csv");
    write_file(&path, &text)?;
    Ok(vec![path])
}

fn write_scaling(
    config: &ExperimentConfig,
    out: &Path,
    specs: &[TaskSpec],
    outputs: &[TaskOutput],
) -> Result<Vec<PathBuf>, LabError> {
    // Group consecutive tasks by (d, n); the plan emits them contiguously.
    let mut groups: Vec<(usize, u32, Vec<&PassageRow>)> = Vec::new();
    for (spec, output) in specs.iter().zip(outputs) {
        let (d, n, _, rows) = passage_rows(spec, output);
        match groups.last_mut() {
            Some((gd, gn, g)) if *gd == d && *gn == n => g.extend(rows),
            _ => groups.push((d, n, rows.iter().collect())),
        }
    }
    let mut scaling = csv_line([
        "d", "n", "replicas", "mean", "var", "var_over_n", "var_logn_over_n", "kappa_hat", "ci_mean",
        "ci_var",
    ]);
    let mut paths = csv_line([
        "d", "n", "count", "min_l_over_n", "mean_l_over_n", "max_l_over_n", "max_t_over_n",
    ]);
    let mut jumps = csv_line(["d", "n", "L", "count", "survival"]);
    for (d, n, rows) in &groups {
        let values: Vec<u64> = rows.iter().filter_map(|r| r.value).collect();
        let censored = rows.len() - values.len();
        match scaling_row(*d, *n, &values, censored, config.master_seed) {
            Ok(row) => scaling.push_str(&csv_line([
                d.to_string(),
                n.to_string(),
                row.replicas.to_string(),
                format_real(row.mean),
                format_real(row.var),
                format_real(row.var_over_n),
                format_real(row.var_logn_over_n),
                format_real(row.kappa_hat),
                format_real(row.ci_mean()),
                format_real(row.ci_var()),
            ])),
            Err(_) => {
                let mut f = vec![d.to_string(), n.to_string(), values.len().to_string()];
                f.extend(std::iter::repeat_n("NA".to_string(), 7));
                scaling.push_str(&csv_line(f));
            }
        }
        let records: Vec<PathRecord> = rows
            .iter()
            .filter_map(|r| {
                r.value.map(|value| PathRecord {
                    value,
                    hops: r.path_len,
                    max_jump: r.max_jump,
                })
            })
            .collect();
        if let Ok(st) = path_record_stats(&records, *n) {
            paths.push_str(&csv_line([
                d.to_string(),
                n.to_string(),
                st.count.to_string(),
                format_real(st.min_ratio),
                format_real(st.mean_ratio),
                format_real(st.max_ratio),
                format_real(st.max_time_ratio),
            ]));
            for (l, (&c, &s)) in st.jump_histogram.iter().zip(&st.jump_survival).enumerate() {
                jumps.push_str(&csv_line([
                    d.to_string(),
                    n.to_string(),
                    l.to_string(),
                    c.to_string(),
                    format_real(s),
                ]));
            }
        }
    }
    let mut files = Vec::new();
    for (name, text) in [("scaling.csv", scaling), ("paths.csv", paths), ("jumps.csv", jumps)] {
        let path = out.join(name);
        write_file(&path, &text)?;
        files.push(path);
    }
    Ok(files)
}

fn write_perc(out: &Path, specs: &[TaskSpec], outputs: &[TaskOutput]) -> Result<Vec<PathBuf>, LabError> {
    let mut text = csv_line(["instance", "L", "M", "p_or_qM", "X_L", "N_bound", "tess_bound", "violation"]);
    for (spec, output) in specs.iter().zip(outputs) {
        let (TaskSpec::Perc { l, m, .. }, TaskOutput::Perc(rows)) = (spec, output) else {
            unreachable!("perc task with another output");
        };
        for r in rows {
            text.push_str(&csv_line([
                r.instance.to_string(),
                l.to_string(),
                m.to_string(),
                format_real(r.density),
                r.x_l.to_string(),
                r.n_bound.to_string(),
                r.tess_bound.to_string(),
                (r.violation as u8).to_string(),
            ]));
        }
    }
    let path = out.join("perc.csv");
    write_file(&path, &text)?;
    Ok(vec![path])
}

fn write_fmgap(config: &ExperimentConfig, out: &Path, outputs: &[TaskOutput]) -> Result<Vec<PathBuf>, LabError> {
    let x = Site::new(&config.fmgap.x);
    let mut samples = Vec::new();
    let mut text = csv_line(["replica", "T", "F"]);
    for output in outputs {
        let TaskOutput::Fm(rows) = output else {
            unreachable!("fmgap task with another output");
        };
        for r in rows {
            match r.value {
                Some((t, f_sum, m, terms)) => {
                    let s = FmGapSample {
                        replica: r.replica,
                        t,
                        f_sum,
                        m,
                        terms,
                    };
                    text.push_str(&csv_line([r.replica.to_string(), t.to_string(), format_real(s.f())]));
                    samples.push(s);
                }
                None => text.push_str(&csv_line([r.replica.to_string(), "NA".into(), "NA".into()])),
            }
        }
    }
    let d = x.dim();
    let mut header = vec!["d".to_string()];
    header.extend((1..=d).map(|i| format!("dx{i}")));
    header.extend(
        [
            "m", "terms", "replicas", "var_T", "var_F", "gap", "gap_lo", "gap_hi", "gap_over_x34", "sd_T",
            "sd_F", "sd_check",
        ]
        .map(String::from),
    );
    let mut report = csv_line(&header);
    let mut f = vec![d.to_string()];
    f.extend(x.coords().iter().map(|c| c.to_string()));
    match fm_gap_report(x, config.master_seed, samples) {
        Ok(r) => f.extend([
            r.m.to_string(),
            r.terms.to_string(),
            r.replicas.to_string(),
            format_real(r.var_t),
            format_real(r.var_f),
            format_real(r.gap),
            format_real(r.gap_ci.lo),
            format_real(r.gap_ci.hi),
            format_real(r.gap_normalized),
            format_real(r.sd_t),
            format_real(r.sd_f),
            (r.sd_check as u8).to_string(),
        ]),
        Err(_) => f.extend(std::iter::repeat_n("NA".to_string(), 12)),
    }
    report.push_str(&csv_line(f));
    let (a, b) = (out.join("fmgap.csv"), out.join("fm_samples.csv"));
    write_file(&a, &report)?;
    write_file(&b, &text)?;
    Ok(vec![a, b])
}

fn write_manifest(
    config: &ExperimentConfig,
    kind: Kind,
    out: &Path,
    specs: &[TaskSpec],
    outputs: &[TaskOutput],
    started: f64,
    files: &[PathBuf],
) -> Result<(), LabError> {
    let tasks: Vec<serde_json::Value> = specs
        .iter()
        .zip(outputs)
        .enumerate()
        .map(|(t, (spec, output))| match spec {
            TaskSpec::Passage { d, n, x, replicas } => json!({
                "task": t, "d": d, "n": n, "x": x.coords(),
                "master_seed": config.master_seed,
                "replica_start": replicas.start, "replica_end": replicas.end,
                "censored": output.censored(),
            }),
            TaskSpec::Perc { l, m, p, instances } => json!({
                "task": t, "L": l, "M": m, "p": p, "field": config.perc.field.name(),
                "instance_start": instances.start, "instance_end": instances.end,
                "field_seeds": instances.clone()
                    .map(|i| derive_seed(PERC_TAG, config.master_seed, i))
                    .collect::<Vec<_>>(),
            }),
            TaskSpec::Fm { x, replicas } => json!({
                "task": t, "x": x.coords(),
                "master_seed": config.master_seed,
                "replica_start": replicas.start, "replica_end": replicas.end,
                "censored": output.censored(),
            }),
        })
        .collect();
    let censored: usize = outputs.iter().map(TaskOutput::censored).sum();
    let manifest = json!({
        "tool": "froglab",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": kind.name(),
        "config": config.echo,
        "fingerprint": format!("{:016x}", config.fingerprint()),
        "started_unix": started,
        "finished_unix": unix_now(),
        "tasks": tasks,
        "censored": censored,
        "partial": censored > 0,
        "outputs": files.iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(failed)?;
    write_file(&out.join("manifest.json"), &(text + "\n"))
}
