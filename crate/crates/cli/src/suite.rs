//! The verification suite: every property the library is expected to
//! satisfy, run at desk scale and reported as one JSON record per check.
//!
//! Each check draws its randomness from `stream_seed(seed, name)`, so adding
//! or removing checks never changes the numbers of the others. Checks run on
//! a small thread pool (capped by `CSTAR_NORMS_THREADS`) and the report lists
//! them sorted by name.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use cstar_core::certify::{certify_normal_rigidity, check_projection_compression, search_violation, Property};
use cstar_core::extremal::{n_omega_extremality, trace_additivity_check, u_norm_lower_bound};
use cstar_core::lmi::{
    cstar_convexity_probe, jensen_check, joint_convexity_check, nr_crosscheck, registry, ConcaveFn,
};
use cstar_core::matcore::eigh;
use cstar_core::norms::{numerical_radius, omega_star, op_norm, pairing, trace_norm, NormSpec};
use cstar_core::rng::{self, Rng};
use cstar_core::tuples::random_tuple;
use cstar_core::{ComplexMatrix, Result};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const THREADS_ENV: &str = "CSTAR_NORMS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Inconclusive outcome worth a look; does not fail the suite.
    Flagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub norms: Vec<String>,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// Seconds since the Unix epoch; the only field that varies between runs.
    pub generated_at: u64,
    pub seed: u64,
    pub n: usize,
    pub budget: usize,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

struct Ctx<'a> {
    config: &'a RunConfig,
    seed: u64,
}

impl Ctx<'_> {
    fn tol(&self, name: &str) -> f64 {
        self.config.tolerance(name)
    }

    fn rng(&self) -> rng::SeededRng {
        rng::seeded(self.seed)
    }
}

struct Measurement {
    measured: f64,
    tolerance: f64,
    comparison: Comparison,
    detail: String,
    /// Report `Flagged` instead of `Fail` when the comparison does not hold.
    soft: bool,
}

impl Measurement {
    fn at_most(measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            measured,
            tolerance,
            comparison: Comparison::AtMost,
            detail: detail.into(),
            soft: false,
        }
    }

    fn at_least(measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            comparison: Comparison::AtLeast,
            ..Self::at_most(measured, tolerance, detail)
        }
    }

    fn holds(&self) -> bool {
        match self.comparison {
            Comparison::AtMost => self.measured <= self.tolerance,
            Comparison::AtLeast => self.measured >= self.tolerance,
        }
    }
}

struct Check {
    name: &'static str,
    anchor: &'static str,
    norms: &'static [&'static str],
    run: fn(&Ctx) -> Result<Measurement>,
}

const CHECKS: &[Check] = &[
    Check {
        name: "00-eigh-residual",
        anchor: "spectral decomposition of Hermitian matrices",
        norms: &["op"],
        run: eigh_residual,
    },
    Check {
        name: "01-operator-norm-m-type",
        anchor: "operator norm unit ball is C*-convex",
        norms: &["op"],
        run: op_m_type,
    },
    Check {
        name: "02-trace-norm-l-type",
        anchor: "trace norm is an L-norm",
        norms: &["trace"],
        run: trace_l_type,
    },
    Check {
        name: "03a-polar-pinching-trace",
        anchor: "trace norm through polar pinching compressions",
        norms: &["op", "trace"],
        run: polar_pinching_trace,
    },
    Check {
        name: "03b-u-norm-above-operator-norm",
        anchor: "trace norm is the least L-norm above the operator norm",
        norms: &["op", "trace"],
        run: u_norm_operator,
    },
    Check {
        name: "04-u-norm-above-numerical-radius",
        anchor: "trace norm is the least L-norm above the numerical radius",
        norms: &["omega", "trace"],
        run: u_norm_radius,
    },
    Check {
        name: "05-trace-additivity",
        anchor: "trace norm additivity over complementary projections",
        norms: &["trace"],
        run: additivity,
    },
    Check {
        name: "06-n-omega-minimality",
        anchor: "n times numerical radius is the least M-norm above the trace norm",
        norms: &["n-omega", "trace"],
        run: n_omega,
    },
    Check {
        name: "07-numerical-radius-lmi",
        anchor: "numerical radius at most one iff a 2x2 block LMI is feasible",
        norms: &["omega"],
        run: radius_lmi,
    },
    Check {
        name: "08-jensen-operator-inequality",
        anchor: "Jensen operator inequality for matrix concave functions",
        norms: &[],
        run: jensen,
    },
    Check {
        name: "09-joint-convexity",
        anchor: "joint convexity of X psi(Y)^-1 X*",
        norms: &[],
        run: joint_convexity,
    },
    Check {
        name: "10a-schatten2-not-m",
        anchor: "Schatten-2 fails the M-norm inequality at a pinching",
        norms: &["schatten:2"],
        run: schatten2_m,
    },
    Check {
        name: "10b-schatten2-not-l",
        anchor: "Schatten-2 fails the L-norm inequality at a pinching",
        norms: &["schatten:2"],
        run: schatten2_l,
    },
    Check {
        name: "11-norm-sandwiches",
        anchor: "numerical radius and its dual sandwich the operator and trace norms",
        norms: &["omega", "omega-star", "op", "trace"],
        run: sandwiches,
    },
    Check {
        name: "12-pairing-adjoint-shift",
        anchor: "trace pairing moves congruences to the other argument",
        norms: &[],
        run: pairing_identity,
    },
    Check {
        name: "13-search-determinism",
        anchor: "seeded searches are reproducible",
        norms: &["schatten:2"],
        run: determinism,
    },
    Check {
        name: "14-projection-compression",
        anchor: "compressions by projections do not increase M- or L-norms",
        norms: &["op", "trace", "omega", "n-omega"],
        run: projection_compression,
    },
    Check {
        name: "15-normal-rigidity",
        anchor: "on normal matrices M-norms are multiples of the operator norm and L-norms of the trace norm",
        norms: &["op", "trace"],
        run: normal_rigidity,
    },
    Check {
        name: "16-lmi-set-cstar-convex",
        anchor: "block LMI sets are closed under C*-convex combinations",
        norms: &["omega"],
        run: lmi_probe,
    },
];

/// `(name, anchor)` of every check in report order.
pub fn check_catalog() -> Vec<(&'static str, &'static str)> {
    let mut v: Vec<_> = CHECKS.iter().map(|c| (c.name, c.anchor)).collect();
    v.sort();
    v
}

fn selected(check: &Check, norms: &Option<Vec<String>>) -> bool {
    match norms {
        None => true,
        Some(list) => check.norms.iter().any(|tag| {
            list.iter()
                .any(|name| name.parse::<NormSpec>().map(|spec| spec.name()).as_deref() == Ok(*tag))
        }),
    }
}

fn thread_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .map_or(available, |t| t.min(available.max(1)))
}

fn run_check(check: &Check, config: &RunConfig) -> CheckRecord {
    let ctx = Ctx {
        config,
        seed: rng::stream_seed(config.seed, check.name),
    };
    let base = CheckRecord {
        name: check.name.into(),
        anchor: check.anchor.into(),
        norms: check.norms.iter().map(|s| s.to_string()).collect(),
        status: Status::Fail,
        measured: f64::NAN,
        tolerance: f64::NAN,
        comparison: Comparison::AtMost,
        detail: String::new(),
    };
    match (check.run)(&ctx) {
        Ok(m) => CheckRecord {
            status: if m.holds() {
                Status::Pass
            } else if m.soft {
                Status::Flagged
            } else {
                Status::Fail
            },
            measured: m.measured,
            tolerance: m.tolerance,
            comparison: m.comparison,
            detail: m.detail,
            ..base
        },
        Err(e) => CheckRecord {
            detail: format!("error: {e}"),
            ..base
        },
    }
}

/// Runs the selected checks; `generated_at` is the current time.
pub fn run_suite(config: &RunConfig) -> SuiteReport {
    let chosen: Vec<&Check> = CHECKS.iter().filter(|c| selected(c, &config.norms)).collect();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(chosen.len()));
    let workers = thread_count().min(chosen.len()).max(1);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(check) = chosen.get(i) else { break };
                let record = run_check(check, config);
                results.lock().expect("no worker panics while holding the lock").push(record);
            });
        }
    });
    let mut checks = results.into_inner().expect("workers finished");
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        total: checks.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        flagged: count(Status::Flagged),
    };
    SuiteReport {
        generated_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        seed: config.seed,
        n: config.n,
        budget: config.budget,
        checks,
        summary,
    }
}

/// Plain-text table of a report.
pub fn render(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Flagged => "flag",
        };
        let op = match c.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        out.push_str(&format!(
            "{status}  {:<34} {:>12.4e} {op} {:<10.3e} {}\n",
            c.name, c.measured, c.tolerance, c.detail
        ));
    }
    let s = report.summary;
    out.push_str(&format!(
        "{} checks: {} passed, {} failed, {} flagged\n",
        s.total, s.passed, s.failed, s.flagged
    ));
    out
}

fn eigh_residual(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let h = rng::hermitian_matrix(&mut r, 1 + i % 6);
        let e = eigh(&h)?;
        let residual = op_norm(&(&e.reconstruct() - &h))? / op_norm(&h)?.max(1.0);
        worst = worst.max(residual);
    }
    Ok(Measurement::at_most(worst, ctx.tol("eig_residual"), "max relative reconstruction residual, 200 samples"))
}

fn max_defect(ctx: &Ctx, norm: NormSpec, property: Property) -> Result<Measurement> {
    let n = ctx.config.n;
    let mut worst = f64::NEG_INFINITY;
    for s in 0..2 {
        let c = search_violation(&norm, property, n, n, ctx.config.budget, rng::substream(ctx.seed, s))?;
        worst = worst.max(c.defect);
    }
    Ok(Measurement::at_most(
        worst,
        ctx.tol("defect"),
        format!("best {property}-defect over 2 searches, n = k = {n}"),
    ))
}

fn op_m_type(ctx: &Ctx) -> Result<Measurement> {
    max_defect(ctx, NormSpec::op(), Property::M)
}

fn trace_l_type(ctx: &Ctx) -> Result<Measurement> {
    max_defect(ctx, NormSpec::trace(), Property::L)
}

fn polar_pinching_trace(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let a = rng::gaussian_matrix(&mut r, 2 + i % 4, 2 + i % 4);
        let res = u_norm_lower_bound(&NormSpec::op(), &a, 1, 0)?;
        worst = worst.max((res.constructive_value - trace_norm(&a)?).abs());
    }
    Ok(Measurement::at_most(worst, ctx.tol("constructive"), "|polar pinching value - trace norm|, 20 samples"))
}

fn u_norm_window(ctx: &Ctx, base: NormSpec, samples: usize, max_n: usize, budget: usize) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = 0.0f64;
    for i in 0..samples {
        let n = 2 + i % (max_n - 1);
        let a = rng::gaussian_matrix(&mut r, n, n);
        let res = u_norm_lower_bound(&base, &a, budget, rng::substream(ctx.seed, i as u64))?;
        worst = worst.max((res.lower_bound - trace_norm(&a)?).abs());
    }
    Ok(Measurement::at_most(
        worst,
        ctx.tol("window"),
        format!("|u-norm lower bound - trace norm|, {samples} samples"),
    ))
}

fn u_norm_operator(ctx: &Ctx) -> Result<Measurement> {
    u_norm_window(ctx, NormSpec::op(), 10, 5, ctx.config.budget)
}

fn u_norm_radius(ctx: &Ctx) -> Result<Measurement> {
    u_norm_window(ctx, NormSpec::NumericalRadius, 5, 3, ctx.config.budget.min(100))
}

fn additivity(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + i % 6;
        let p = rng::orthoprojection(&mut r, n)?;
        let x = rng::gaussian_matrix(&mut r, n, n);
        let y = rng::gaussian_matrix(&mut r, n, n);
        worst = worst.max(trace_additivity_check(&x, &y, &p)?);
    }
    Ok(Measurement::at_most(worst, ctx.tol("additivity"), "max additivity residual, 100 triples"))
}

fn n_omega(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = n_omega_extremality(&ComplexMatrix::identity(ctx.config.n))?.gap.abs();
    for i in 0..100 {
        let n = 1 + i % 6;
        let rep = n_omega_extremality(&rng::gaussian_matrix(&mut r, n, n))?;
        worst = worst.max(-rep.gap);
    }
    Ok(Measurement::at_most(
        worst,
        ctx.tol("gap"),
        "max(trace norm - n*omega) over 100 samples and |gap| at I",
    ))
}

fn radius_lmi(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut disagreements = 0;
    let samples = 20;
    for i in 0..samples {
        let n = 1 + i % 4;
        let x = rng::gaussian_matrix(&mut r, n, n);
        let mut target = r.random_range(0.5..1.5);
        if (target - 1.0f64).abs() <= 1e-3 {
            target = 1.0 + 2e-3_f64.copysign(target - 1.0);
        }
        let x = x.scale_real(target / numerical_radius(&x)?);
        if !nr_crosscheck(&x, 2000, rng::substream(ctx.seed, i as u64))?.consistent {
            disagreements += 1;
        }
    }
    Ok(Measurement::at_most(
        disagreements as f64,
        0.0,
        format!("disagreements with omega <= 1 over {samples} matrices"),
    ))
}

fn jensen(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = f64::INFINITY;
    for i in 0..20 {
        let n = 1 + i % 4;
        let k = 1 + i % 3;
        let t = random_tuple(n, k, r.random())?;
        let a_list: Vec<_> = (0..k).map(|_| rng::hermitian_with_spectrum_in(&mut r, n, 0.0, 1.0)).collect();
        for f in registry() {
            worst = worst.min(jensen_check(*f, &t, &a_list)?);
        }
    }
    Ok(Measurement::at_most(-worst, ctx.tol("jensen"), "-min Jensen residual, registry x 20"))
}

fn joint_convexity(ctx: &Ctx) -> Result<Measurement> {
    let mut worst = f64::INFINITY;
    for (i, f) in registry().iter().enumerate() {
        worst = worst.min(joint_convexity_check(*f, 3, 20, rng::substream(ctx.seed, i as u64))?);
    }
    Ok(Measurement::at_most(-worst, ctx.tol("joint_convexity"), "-min midpoint residual, registry x 20"))
}

fn schatten2(ctx: &Ctx, property: Property, threshold: f64) -> Result<Measurement> {
    let c = search_violation(&NormSpec::schatten(2.0)?, property, 2, 2, ctx.config.budget, ctx.seed)?;
    Ok(Measurement::at_least(c.defect, threshold, format!("{property}-defect found, n = k = 2")))
}

fn schatten2_m(ctx: &Ctx) -> Result<Measurement> {
    schatten2(ctx, Property::M, 0.41)
}

fn schatten2_l(ctx: &Ctx) -> Result<Measurement> {
    schatten2(ctx, Property::L, 0.58)
}

fn sandwiches(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..30 {
        let a = rng::gaussian_matrix(&mut r, 3, 3);
        let trace = trace_norm(&a)?;
        let star = omega_star(&a, 64, 0)?;
        worst = worst
            .max(numerical_radius(&a)? - op_norm(&a)?)
            .max(trace - star)
            .max(star - 2.0 * trace);
    }
    Ok(Measurement::at_most(worst, ctx.tol("sandwich"), "largest sandwich violation, 30 samples"))
}

fn pairing_identity(ctx: &Ctx) -> Result<Measurement> {
    let mut r = ctx.rng();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 1 + i % 5;
        let x = rng::gaussian_matrix(&mut r, n, n);
        let y = rng::gaussian_matrix(&mut r, n, n);
        let z = rng::gaussian_matrix(&mut r, n, n);
        let lhs = pairing(&y, &x.congruence(&z))?;
        let rhs = pairing(&(&(&z * &y) * &z.adjoint()), &x)?;
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0));
    }
    Ok(Measurement::at_most(worst, ctx.tol("pairing"), "max relative residual, 200 triples"))
}

fn determinism(ctx: &Ctx) -> Result<Measurement> {
    let norm = NormSpec::schatten(2.0)?;
    let a = search_violation(&norm, Property::L, 2, 2, 150, ctx.seed)?;
    let b = search_violation(&norm, Property::L, 2, 2, 150, ctx.seed)?;
    let differ = serde_json::to_string(&a).ok() != serde_json::to_string(&b).ok();
    Ok(Measurement::at_most(f64::from(u8::from(differ)), 0.0, "certificates of two identical searches differ"))
}

fn projection_compression(ctx: &Ctx) -> Result<Measurement> {
    let mut worst = f64::NEG_INFINITY;
    for (i, name) in ["op", "trace", "omega", "n-omega"].iter().enumerate() {
        let norm: NormSpec = name.parse()?;
        worst = worst.max(check_projection_compression(&norm, 4, 30, rng::substream(ctx.seed, i as u64))?);
    }
    Ok(Measurement::at_most(worst, ctx.tol("gap"), "max ||EAE|| - ||A|| over op, trace, omega, n-omega"))
}

fn normal_rigidity(ctx: &Ctx) -> Result<Measurement> {
    let m = certify_normal_rigidity(&NormSpec::op(), Property::M, 4, 30, ctx.seed, false)?;
    let l = certify_normal_rigidity(&NormSpec::trace(), Property::L, 4, 30, ctx.seed, false)?;
    Ok(Measurement::at_most(
        m.max_residual.max(l.max_residual),
        ctx.tol("defect"),
        "max |norm - chi * reference| on normal samples",
    ))
}

fn lmi_probe(ctx: &Ctx) -> Result<Measurement> {
    let (phi, psi) = (ConcaveFn::lookup("2t")?, ConcaveFn::lookup("2(1-t)")?);
    let mut r = ctx.rng();
    let members: Vec<_> = (0..3)
        .map(|_| {
            let x = rng::gaussian_matrix(&mut r, 3, 3);
            numerical_radius(&x).map(|w| x.scale_real(0.9 / w))
        })
        .collect::<Result<_>>()?;
    let t = random_tuple(3, 3, r.random())?;
    let rep = cstar_convexity_probe(phi, psi, &members, &t, 2000, ctx.seed)?;
    let mut m = Measurement::at_least(
        rep.constructive_min_eig.max(rep.search.as_ref().map_or(f64::NEG_INFINITY, |s| s.achieved_min_eig)),
        -cstar_core::lmi::FEAS_TOL,
        "min eigenvalue of the block at the combined witness",
    );
    m.soft = true;
    Ok(m)
}
