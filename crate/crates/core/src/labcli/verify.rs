//! `froglab verify`: the invariant and oracle battery.

use std::path::PathBuf;

use serde_json::json;

use super::config::{ExperimentConfig, Suite};
use super::format::csv_line;
use super::{unix_now, write_file, LabError};
use crate::frogcore::{
    activation_table, dijkstra_oracle, passage_time_adaptive, removed_passage_time,
    subadditivity_check, t1, t2, t2_by_sweep, FrogError, FrogMask, HorizonPolicy, PassageSample,
};
use crate::percpath::{
    gen_independent_field, gen_m_dependent_field, max_path_weight, tessellation_bound_check,
    xl_animal_check, ExactnessCaps, SiteField,
};
use crate::sched::{parallel_map, resolve_workers};
use crate::walkfield::keyed::{derive_seed, KeyedRng};
use crate::walkfield::{FaultHook, LatticeBox, Site, WalkField};

const FIELD_TAG: u64 = 0x5645_5249_4659_0001;
const RNG_TAG: u64 = 0x5645_5249_4659_0002;
/// Replica index used for walks that get fresh keys inside a check.
const RESAMPLE_REPLICA: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: u64,
    pub checks: u64,
    pub violations: u64,
    /// Replayable descriptions of each violation.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub master_seed: u64,
    pub suites: Vec<SuiteReport>,
    pub files: Vec<PathBuf>,
}

impl VerifyReport {
    pub fn violations(&self) -> u64 {
        self.suites.iter().map(|s| s.violations).sum()
    }

    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.violations() == 0 {
            0
        } else {
            1
        }
    }

    /// `verify.csv` contents.
    pub fn table(&self) -> String {
        let mut out = csv_line(["suite", "instances", "checks", "violations"]);
        for s in &self.suites {
            out.push_str(&csv_line([
                s.suite.name().to_string(),
                s.instances.to_string(),
                s.checks.to_string(),
                s.violations.to_string(),
            ]));
        }
        out
    }
}

struct Ctx {
    master_seed: u64,
    corrupt: bool,
    policy: HorizonPolicy,
    caps: ExactnessCaps,
}

impl Ctx {
    fn field_seed(&self, suite: Suite) -> u64 {
        derive_seed(FIELD_TAG, self.master_seed, suite as u64)
    }

    fn field(&self, suite: Suite, i: u64, dim: usize) -> WalkField {
        let f = WalkField::new(self.field_seed(suite), i, dim).expect("dimension in range");
        if self.corrupt {
            f.with_fault(FaultHook::CorruptHittingKeys)
        } else {
            f
        }
    }

    fn rng(&self, suite: Suite, i: u64) -> KeyedRng {
        KeyedRng::from_parts(RNG_TAG ^ suite as u64, self.master_seed, i)
    }
}

#[derive(Default)]
struct Outcome {
    checks: u64,
    witnesses: Vec<String>,
    parity_checks: u64,
    parity_witnesses: Vec<String>,
}

struct Instance<'a> {
    ctx: &'a Ctx,
    suite: Suite,
    index: u64,
    dim: usize,
    out: Outcome,
}

impl Instance<'_> {
    fn prefix(&self) -> String {
        format!(
            "suite={} instance={} field_seed={} replica={} d={} corrupt_rng_key={}",
            self.suite.name(),
            self.index,
            self.ctx.field_seed(self.suite),
            self.index,
            self.dim,
            self.ctx.corrupt
        )
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.out.checks += 1;
        if !ok {
            let w = format!("{} {}", self.prefix(), detail());
            self.out.witnesses.push(w);
        }
    }

    fn fail(&mut self, e: impl std::fmt::Display) {
        self.check(false, || format!("error=\"{e}\""));
    }

    /// `T >= |x|_1` and `T = |x|_1 mod 2`.
    fn parity(&mut self, source: Site, destination: Site, t: u64) {
        self.out.parity_checks += 1;
        let dist = source.l1_dist(&destination) as u64;
        if t < dist || !(t - dist).is_multiple_of(2) {
            let w = format!(
                "{} parity source={source} destination={destination} T={t}",
                self.prefix()
            );
            self.out.parity_witnesses.push(w);
        }
    }

    fn sample(&mut self, s: &PassageSample) {
        self.parity(s.source, s.destination, s.value);
    }
}

fn rand_site(rng: &mut KeyedRng, dim: usize, r: u32) -> Site {
    let coords: Vec<i32> = (0..dim)
        .map(|_| rng.below(2 * r as u64 + 1) as i32 - r as i32)
        .collect();
    Site::new(&coords)
}

fn rand_nonzero(rng: &mut KeyedRng, dim: usize, r: u32, max_l1: u32) -> Site {
    loop {
        let s = rand_site(rng, dim, r);
        if s.l1() > 0 && s.l1() <= max_l1 {
            return s;
        }
    }
}

fn engine_oracle(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let s = rand_site(rng, 2, 8);
    let t = rand_site(rng, 2, 8);
    let mut mask = FrogMask::empty();
    for _ in 0..rng.below(3) {
        let z = rand_site(rng, 2, 8);
        if z != s {
            mask.insert(z);
        }
    }
    let sample = passage_time_adaptive(f, s, t, &mask, &inst.ctx.policy)?;
    inst.sample(&sample);
    let radius = sample.frontier_radius.max(s.sup_dist(&t));
    let oracle = dijkstra_oracle(f, s, t, &mask, radius, sample.value);
    inst.check(oracle == Ok(sample.value), || {
        format!(
            "source={s} destination={t} mask={:?} engine={} oracle={oracle:?}",
            mask.sites().iter().map(|z| z.to_string()).collect::<Vec<_>>(),
            sample.value
        )
    });
    Ok(())
}

fn genealogy(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let o = Site::origin(2);
    let x = rand_nonzero(rng, 2, 16, 32);
    let s = passage_time_adaptive(f, o, x, &FrogMask::empty(), &inst.ctx.policy)?;
    inst.sample(&s);
    let total: u64 = s.hop_times.iter().sum();
    inst.check(total == s.value, || format!("x={x} T={} sum_hops={total}", s.value));
    let mut distinct = s.genealogy.clone();
    distinct.sort();
    distinct.dedup();
    let shape_ok = s.genealogy.first() == Some(&o)
        && s.genealogy.last() == Some(&x)
        && s.genealogy.len() == s.hop_times.len() + 1
        && distinct.len() == s.genealogy.len();
    inst.check(shape_ok, || format!("x={x} malformed genealogy {:?}", s.genealogy));
    for (k, w) in s.genealogy.windows(2).enumerate() {
        let t = f.hitting_time(w[0], w[1], s.value).time();
        let want = s.hop_times.get(k).copied();
        inst.check(t == want, || {
            format!("x={x} hop {}->{} recorded={want:?} hitting={t:?}", w[0], w[1])
        });
    }
    let jump = s.genealogy.windows(2).map(|w| w[0].l1_dist(&w[1])).max().unwrap_or(0);
    inst.check(jump == s.max_jump, || format!("x={x} max_jump={} recomputed={jump}", s.max_jump));
    if inst.index.is_multiple_of(16) {
        let table = activation_table(f, o, &FrogMask::empty(), s.value)?;
        let mut sites: Vec<&Site> = table.records.keys().collect();
        sites.sort();
        for site in sites {
            let rec = table.records[site];
            let ok = match rec.parent {
                None => rec.site == o && rec.time == 0,
                Some(p) => {
                    let pt = table.records[&p].time;
                    let hop = f.hitting_time(p, rec.site, rec.time).time();
                    pt < rec.time && hop == Some(rec.time - pt)
                }
            };
            inst.check(ok, || {
                format!("activation site={} time={} parent={:?}", rec.site, rec.time, rec.parent)
            });
        }
    }
    Ok(())
}

fn subadditivity(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let x = rand_site(rng, 2, 12);
    let y = rand_site(rng, 2, 12);
    let w = subadditivity_check(f, x, y, &inst.ctx.policy)?;
    let o = Site::origin(2);
    inst.parity(o, x + y, w.direct);
    inst.parity(o, x, w.first_leg);
    inst.parity(x, x + y, w.second_leg);
    inst.check(w.holds, || {
        format!(
            "x={x} y={y} T(0,x+y)={} T(0,x)={} T(x,x+y)={}",
            w.direct, w.first_leg, w.second_leg
        )
    });
    Ok(())
}

fn mask_locality(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let policy = inst.ctx.policy;
    let o = Site::origin(2);
    let x = rand_nonzero(rng, 2, 8, 16);
    let base = passage_time_adaptive(f, o, x, &FrogMask::empty(), &policy)?;
    inst.sample(&base);
    let z = rand_site(rng, 2, 8);
    let tz = removed_passage_time(f, o, x, z, &policy)?;
    inst.sample(&tz);
    inst.check(tz.value >= base.value, || {
        format!("x={x} z={z} T={} T^[z]={}", base.value, tz.value)
    });
    let interior = base.intermediates();
    if !interior.is_empty() {
        let z = interior[rng.below(interior.len() as u64) as usize];
        let tz = removed_passage_time(f, o, x, z, &policy)?;
        inst.sample(&tz);
        inst.check(tz.value >= base.value, || {
            format!("x={x} genealogy z={z} T={} T^[z]={}", base.value, tz.value)
        });
    }
    let reach = base.value.min(16) as u32;
    for _ in 0..32 {
        let z = rand_site(rng, 2, reach);
        if base.genealogy.contains(&z) {
            continue;
        }
        let tz = removed_passage_time(f, o, x, z, &policy)?;
        inst.check(tz.value == base.value, || {
            format!("x={x} off-path z={z} T={} T^[z]={}", base.value, tz.value)
        });
        break;
    }
    let radius = base.value as u32 + 1;
    let g = f.resampled_outside(o, radius, RESAMPLE_REPLICA);
    let again = passage_time_adaptive(&g, o, x, &FrogMask::empty(), &policy)?;
    inst.check(again == base, || {
        format!(
            "x={x} rekey outside B({radius}) changed T {} -> {} or genealogy",
            base.value, again.value
        )
    });
    Ok(())
}

fn t2_reduction(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let policy = inst.ctx.policy;
    let u = Site::origin(2);
    let v = rand_nonzero(rng, 2, 4, 4);
    let base = passage_time_adaptive(f, u, v, &FrogMask::empty(), &policy)?;
    inst.sample(&base);
    let fast = t2(f, u, v, &policy)?;
    let sweep = t2_by_sweep(f, u, v, base.value as u32 + 2, &policy)?;
    inst.check(fast.value == sweep.value, || {
        format!(
            "v={v} T={} reduction={} sweep={} sweep_z={:?}",
            base.value, fast.value, sweep.value, sweep.maximizer
        )
    });
    Ok(())
}

fn coupling(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let policy = inst.ctx.policy;
    let u = rand_site(rng, 2, 3);
    let v = u + rand_site(rng, 2, 6);
    let bound = t1(f, u, v, &policy)?;
    let g = f.resampled_at([u], RESAMPLE_REPLICA);
    let tilde = passage_time_adaptive(&g, u, v, &FrogMask::empty(), &policy)?;
    inst.sample(&tilde);
    inst.check(tilde.value <= bound, || {
        format!("u={u} v={v} resampled_T={} T1={bound}", tilde.value)
    });
    Ok(())
}

/// Maximum of `sum I_x` over every distinct-vertex sequence in `B(radius)`
/// with total l1 jump at most `radius`, by plain depth-first enumeration.
pub fn exhaustive_path_weight(field: &SiteField, radius: u32) -> u32 {
    fn go(sites: &[Site], field: &SiteField, used: &mut Vec<bool>, cur: usize, budget: u32, w: u32) -> u32 {
        let mut best = w;
        for j in 0..sites.len() {
            let d = sites[cur].l1_dist(&sites[j]);
            if used[j] || d > budget {
                continue;
            }
            used[j] = true;
            let next = w + field.get(&sites[j]) as u32;
            best = best.max(go(sites, field, used, j, budget - d, next));
            used[j] = false;
        }
        best
    }
    let sites: Vec<Site> = LatticeBox::ball(field.dim(), radius).iter().collect();
    let mut used = vec![false; sites.len()];
    let mut best = 0;
    for s in 0..sites.len() {
        used[s] = true;
        best = best.max(go(&sites, field, &mut used, s, radius, field.get(&sites[s]) as u32));
        used[s] = false;
    }
    best
}

fn percolation(inst: &mut Instance, rng: &mut KeyedRng, tiny: bool) -> Result<(), String> {
    let caps = inst.ctx.caps;
    let seed = derive_seed(FIELD_TAG ^ 0x50, inst.ctx.master_seed, inst.index);
    let l = 1 + rng.below(6) as u32;
    let m = 1 + rng.below(2) as u32;
    let p = 0.05 + 0.45 * rng.next_f64();
    let big = 3 * l;
    let radius = if caps.check_animal_cells(big + 1).is_ok() { big } else { l };
    let field = gen_m_dependent_field(seed, 2, radius, m, p).map_err(|e| e.to_string())?;
    let animal = xl_animal_check(&field, l, &caps).map_err(|e| e.to_string())?;
    inst.check(animal.holds, || {
        format!(
            "field_seed={seed} L={l} M={m} p={p} X_L={} N={} exact={} path={:?}",
            animal.x_l, animal.n_value, animal.exact, animal.path.vertices
        )
    });
    let tess = tessellation_bound_check(&field, l, m, &caps).map_err(|e| e.to_string())?;
    inst.check(tess.holds, || {
        format!(
            "field_seed={seed} L={l} M={m} p={p} X_L={} tess_bound={}",
            tess.x_l, tess.bound
        )
    });
    if tiny {
        let l = 1 + rng.below(3) as u32;
        let p = rng.next_f64();
        let f = gen_independent_field(seed ^ 1, 2, l, p).map_err(|e| e.to_string())?;
        let fast = max_path_weight(&f, l, &caps).map_err(|e| e.to_string())?;
        let slow = exhaustive_path_weight(&f, l);
        inst.check(fast.weight == slow, || {
            format!("tiny field_seed={} L={l} p={p} pruned={} exhaustive={slow}", seed ^ 1, fast.weight)
        });
        inst.check(fast.path.is_member(l) && fast.path.weight(&f) == fast.weight, || {
            format!("tiny field_seed={} L={l} bad argmax {:?}", seed ^ 1, fast.path.vertices)
        });
    }
    Ok(())
}

fn parity_suite(inst: &mut Instance, rng: &mut KeyedRng, f: &WalkField) -> Result<(), FrogError> {
    let x = rand_site(rng, f.dim(), 6);
    let s = passage_time_adaptive(f, Site::origin(f.dim()), x, &FrogMask::empty(), &inst.ctx.policy)?;
    inst.sample(&s);
    Ok(())
}

fn run_instance(ctx: &Ctx, suite: Suite, index: u64, count: u64) -> Outcome {
    let mut rng = ctx.rng(suite, index);
    let dim = match suite {
        Suite::Parity => 1 + rng.below(3) as usize,
        _ => 2,
    };
    let mut inst = Instance {
        ctx,
        suite,
        index,
        dim,
        out: Outcome::default(),
    };
    let f = ctx.field(suite, index, dim);
    let result = match suite {
        Suite::EngineOracle => engine_oracle(&mut inst, &mut rng, &f),
        Suite::Genealogy => genealogy(&mut inst, &mut rng, &f),
        Suite::Subadditivity => subadditivity(&mut inst, &mut rng, &f),
        Suite::MaskLocality => mask_locality(&mut inst, &mut rng, &f),
        Suite::T2Reduction => t2_reduction(&mut inst, &mut rng, &f),
        Suite::Coupling => coupling(&mut inst, &mut rng, &f),
        Suite::Percolation => {
            let tiny = index < count.div_ceil(10);
            if let Err(e) = percolation(&mut inst, &mut rng, tiny) {
                inst.fail(e);
            }
            Ok(())
        }
        Suite::Parity => parity_suite(&mut inst, &mut rng, &f),
    };
    if let Err(e) = result {
        inst.fail(e);
    }
    inst.out
}

/// Runs the selected suites, writes `verify.csv`, `witnesses.txt` and
/// `manifest.json` under the output directory, and returns the tallies.
pub fn verify(config: &ExperimentConfig) -> Result<VerifyReport, LabError> {
    if config.verify.suites.is_empty() {
        return Err(LabError::config(0, "empty verification battery"));
    }
    let started = unix_now();
    let ctx = Ctx {
        master_seed: config.master_seed,
        corrupt: config.verify.corrupt_rng_key,
        policy: config.policy(),
        caps: config.caps,
    };
    let workers = resolve_workers(config.workers);
    let has_parity = config.verify.suites.iter().any(|(s, _)| *s == Suite::Parity);
    let mut reports = Vec::new();
    let mut parity_checks = 0;
    let mut parity_witnesses = Vec::new();
    for &(suite, count) in &config.verify.suites {
        let outcomes = parallel_map(count as usize, workers, |i| run_instance(&ctx, suite, i as u64, count));
        let mut rep = SuiteReport {
            suite,
            instances: count,
            checks: 0,
            violations: 0,
            witnesses: Vec::new(),
        };
        for o in outcomes {
            rep.checks += o.checks;
            rep.witnesses.extend(o.witnesses);
            if has_parity {
                parity_checks += o.parity_checks;
                parity_witnesses.extend(o.parity_witnesses);
            } else {
                rep.checks += o.parity_checks;
                rep.witnesses.extend(o.parity_witnesses);
            }
        }
        rep.violations = rep.witnesses.len() as u64;
        reports.push(rep);
    }
    if let Some(rep) = reports.iter_mut().find(|r| r.suite == Suite::Parity) {
        rep.checks = parity_checks;
        rep.witnesses = parity_witnesses;
        rep.violations = rep.witnesses.len() as u64;
    }
    let out = config.output.clone();
    std::fs::create_dir_all(&out).map_err(|e| LabError::io(&out, e))?;
    let mut report = VerifyReport {
        master_seed: config.master_seed,
        suites: reports,
        files: Vec::new(),
    };
    let table = out.join("verify.csv");
    write_file(&table, &report.table())?;
    let mut dump = String::new();
    for s in &report.suites {
        for w in &s.witnesses {
            dump.push_str(w);
            dump.push('\n');
        }
    }
    let witnesses = out.join("witnesses.txt");
    write_file(&witnesses, &dump)?;
    let manifest = json!({
        "tool": "froglab",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": "verify",
        "config": config.echo,
        "fingerprint": format!("{:016x}", config.fingerprint()),
        "started_unix": started,
        "finished_unix": unix_now(),
        "suites": report.suites.iter().map(|s| json!({
            "suite": s.suite.name(),
            "instances": s.instances,
            "field_seed": derive_seed(FIELD_TAG, config.master_seed, s.suite as u64),
            "checks": s.checks,
            "violations": s.violations,
        })).collect::<Vec<_>>(),
        "violations": report.violations(),
        "outputs": ["verify.csv", "witnesses.txt"],
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| LabError::Failed(e.to_string()))?;
    write_file(&out.join("manifest.json"), &(text + "\n"))?;
    report.files = vec![table, witnesses];
    Ok(report)
}
