//! The identity and invariant suites behind `fcq verify`.

use fcq_core::bounds::{bound_b1, bound_b1_axis, bound_b1_with_fallback, trig_moment};
use fcq_core::ellipse::cosh_coeff;
use fcq_core::exact::binom;
use fcq_core::kernel::{default_grid, kernel_max_on_ellipse};
use fcq_core::quadrature::adaptive_integral;
use fcq_core::series::{binomial_identity_sides, epsilon_paper, epsilon_true, f_closed, f_partial};
use fcq_core::{
    build_rule, BoundOptions, CoeffIndex, Error, ExpSquare, Float, Polynomial, PrecisionContext, Rational, RuleParams,
};
use rayon::prelude::*;
use rug::ops::Pow;

/// Outcome of one suite: every failed check and any informational lines.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

/// Extra working bits for the evaluations behind each identity; tolerances
/// stay tied to the requested precision.
pub const GUARD_BITS: u32 = 128;

/// The working context for a requested one.
pub fn guarded(ctx: &PrecisionContext) -> PrecisionContext {
    PrecisionContext::new(ctx.bits() + GUARD_BITS).expect("above the minimum")
}

pub const SUITE_NAMES: [&str; 6] = [
    "exactness",
    "epsilon",
    "binomial",
    "f-series",
    "trig-moments",
    "theorem1-scan",
];

/// All six suites, run concurrently and returned in [`SUITE_NAMES`] order.
pub fn run_all(ctx: &PrecisionContext) -> Vec<SuiteReport> {
    let suites: [fn(&PrecisionContext) -> SuiteReport; 6] = [
        exactness,
        epsilon,
        |_| binomial(),
        f_series,
        trig_moments,
        theorem1_scan,
    ];
    suites.par_iter().map(|suite| suite(ctx)).collect()
}

fn rel(a: &Float, b: &Float, ctx: &PrecisionContext) -> Float {
    let d = ctx.real(a - b).abs();
    if b.is_zero() {
        d
    } else {
        d / ctx.real(b.abs_ref())
    }
}

/// `∫ t^k T_n(t) (1−t²)^{−1/2} dt = π 2^{−k} C(k, (k−n)/2)` when `k ≥ n` and
/// `k − n` is even, zero otherwise.
pub fn monomial_moment(k: usize, n: usize, ctx: &PrecisionContext) -> Float {
    if k < n || (k - n) % 2 == 1 {
        return ctx.zero();
    }
    ctx.pi() * ctx.real(&binom(k as i64, ((k - n) / 2) as i64)) * ctx.pow2(-(k as i32))
}

/// `Q(t^k)` is exact for `k ≤ n(2s+1)−1`, and at `k = n(2s+1)` the remainder
/// equals `2^{1−k} ε_0`.
pub fn exactness(ctx: &PrecisionContext) -> SuiteReport {
    exactness_grid(ctx, 8, 3)
}

pub fn exactness_grid(ctx: &PrecisionContext, n_max: usize, s_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("exactness");
    let tol = ctx.half_epsilon();
    let ctx = &guarded(ctx);
    let cases: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (1..=s_max).map(move |s| (n, s))).collect();
    let results: Vec<SuiteReport> = cases
        .par_iter()
        .map(|&(n, s)| {
            let mut r = SuiteReport::new("exactness");
            let params = RuleParams::new(n, s).expect("positive");
            let rule = build_rule(params, ctx);
            let degree = params.exactness_degree();
            for k in 0..=degree + 1 {
                let q = match rule.apply(&Polynomial::monomial(k)) {
                    Ok(q) => q,
                    Err(e) => {
                        r.fail(format!("n={n} s={s} k={k}: {e}"));
                        continue;
                    }
                };
                let residual = ctx.real(monomial_moment(k, n, ctx) - &q);
                if k <= degree {
                    r.check(residual.clone().abs() < tol, || {
                        format!("n={n} s={s} k={k}: residual {:.3e}", residual.to_f64())
                    });
                } else {
                    let predicted =
                        epsilon_true(CoeffIndex::block_start(params, 0)).to_float(ctx) * ctx.pow2(1 - k as i32);
                    r.check(residual.clone().abs() > tol, || {
                        format!("n={n} s={s} k={k}: rule unexpectedly exact")
                    });
                    let err = rel(&residual, &predicted, ctx);
                    r.check(err < tol, || {
                        format!(
                            "n={n} s={s}: first remainder {:.6e} vs predicted {:.6e}",
                            residual.to_f64(),
                            predicted.to_f64()
                        )
                    });
                }
            }
            r
        })
        .collect();
    for r in results {
        report.checks += r.checks;
        report.failures.extend(r.failures);
    }
    report.notes.push(format!(
        "n <= {n_max}, s <= {s_max}: exact through degree n(2s+1)-1, first remainder = 2^(1-k) eps_0"
    ));
    report
}

/// `ε_true` against the rule's remainder on `T_{(2s+1)n+2nm}` (as multiples
/// of π) and `ε_paper = 2 ε_true` in exact arithmetic.
pub fn epsilon(ctx: &PrecisionContext) -> SuiteReport {
    let mut report = SuiteReport::new("epsilon");
    let tol = ctx.half_epsilon();
    let ctx = &guarded(ctx);
    for n in 1..=3 {
        for s in 1..=3 {
            let params = RuleParams::new(n, s).expect("positive");
            let rule = build_rule(params, ctx);
            for m in 0..=2 {
                let degree = (2 * s + 1) * n + 2 * n * m;
                let expected = epsilon_true(CoeffIndex::block_start(params, m));
                match rule.remainder(&Polynomial::chebyshev(degree), &ctx.zero()) {
                    Ok(r) => {
                        let q = ctx.real(&r / ctx.pi());
                        let err = ctx.real(&q - ctx.real(expected.coefficient())).abs();
                        let scale = ctx.real(expected.coefficient().clone().abs()).max(&ctx.real(1));
                        report.check(err <= ctx.real(&tol * &scale), || {
                            format!(
                                "n={n} s={s} m={m}: remainder/pi {:.6e} vs eps_true {}",
                                q.to_f64(),
                                expected.coefficient()
                            )
                        });
                    }
                    Err(e) => report.fail(format!("n={n} s={s} m={m}: {e}")),
                }
            }
        }
    }
    for n in 1..=3 {
        for s in 1..=5 {
            let params = RuleParams::new(n, s).expect("positive");
            for m in 0..=30 {
                let idx = CoeffIndex::block_start(params, m);
                let t = epsilon_true(idx);
                let p = epsilon_paper(idx);
                let twice = Rational::from(t.coefficient() * 2u32);
                report.check(*p.coefficient() == twice, || {
                    format!(
                        "n={n} s={s} m={m}: eps_paper {} != 2 * {}",
                        p.coefficient(),
                        t.coefficient()
                    )
                });
            }
        }
    }
    report.notes.push("eps_paper / eps_true (n = 1):".into());
    let params_row = |s| RuleParams::new(1, s).expect("positive");
    let header: Vec<String> = (0..=5).map(|m| format!("m={m}")).collect();
    report.notes.push(format!("       {}", header.join("  ")));
    for s in 1..=3 {
        let ratios: Vec<String> = (0..=5)
            .map(|m| {
                let idx = CoeffIndex::block_start(params_row(s), m);
                let t = epsilon_true(idx);
                if t.is_zero() {
                    "  - ".into()
                } else {
                    let r = Rational::from(epsilon_paper(idx).coefficient() / t.coefficient());
                    format!("{:>3}", r.to_string())
                }
            })
            .collect();
        report.notes.push(format!("  s={s}   {}", ratios.join("  ")));
    }
    report
}

/// The binomial identity for `t ≤ 2s`, `s ≤ 6`, `m ≤ 20`.
pub fn binomial() -> SuiteReport {
    let mut report = SuiteReport::new("binomial");
    for s in 1..=6 {
        for m in 0..=20 {
            for t in 0..=2 * s {
                match binomial_identity_sides(t, m, s) {
                    Ok((l, r)) => report.check(l == r, || format!("t={t} m={m} s={s}: {l} != {r}")),
                    Err(e) => report.fail(format!("t={t} m={m} s={s}: {e}")),
                }
            }
        }
    }
    report
}

/// Relative error of the `terms`-term partial sum against the closed form.
pub fn f_series_error(x: f64, s: usize, terms: usize, ctx: &PrecisionContext) -> Result<Float, Error> {
    let x = ctx.real(x);
    let closed = f_closed(&x, s, ctx)?;
    let partial = f_partial(&x, s, terms, ctx)?;
    Ok(rel(&partial, &closed, ctx))
}

pub const F_SERIES_POINTS: [f64; 3] = [0.1, 0.5, 0.9];

/// Geometric convergence of the F-series: the error at 300 terms is below
/// `10⁻³` times the error at 150 terms (or at the rounding floor).
pub fn f_series(ctx: &PrecisionContext) -> SuiteReport {
    let mut report = SuiteReport::new("f-series");
    let floor = ctx.half_epsilon();
    let ctx = &guarded(ctx);
    for x in F_SERIES_POINTS {
        for s in 1..=4 {
            match (f_series_error(x, s, 150, ctx), f_series_error(x, s, 300, ctx)) {
                (Ok(e150), Ok(e300)) => {
                    let limit = ctx.real(&e150 / 1000u32).max(&floor);
                    report.check(e300 <= limit, || {
                        format!(
                            "x={x} s={s}: error {:.3e} at 300 terms vs {:.3e} at 150",
                            e300.to_f64(),
                            e150.to_f64()
                        )
                    });
                    report.notes.push(format!(
                        "x={x} s={s}: relative error at 300 terms {:.3e}",
                        e300.to_f64()
                    ));
                }
                (Err(e), _) | (_, Err(e)) => report.fail(format!("x={x} s={s}: {e}")),
            }
        }
    }
    report
}

/// `∫_0^π cos(2nlθ) / (a_{2n} + cos 2nθ)^{2s} dθ` by adaptive quadrature.
pub fn trig_moment_quadrature(rho: &Float, params: RuleParams, l: usize, ctx: &PrecisionContext) -> Float {
    let n2 = 2 * params.n() as u32;
    let a = cosh_coeff(rho, n2, ctx);
    let f = |t: &Float| {
        let num = ctx.real(t * (n2 * l as u32)).cos();
        let den = ctx.real(&a + ctx.real(t * n2).cos()).pow(2 * params.s() as u32);
        num / den
    };
    let breaks: Vec<Float> = (0..=n2).map(|j| ctx.pi() * j / n2).collect();
    let tol = ctx.real(1e-40).max(&ctx.epsilon(16));
    adaptive_integral(f, &breaks, &tol, ctx).unwrap_or_else(|_| ctx.real(rug::float::Special::Nan))
}

pub const MOMENT_RHOS: [f64; 4] = [1.1, 1.5, 3.0, 10.0];

/// Closed-form `I_l` against quadrature for `ρ ∈ {1.1, 1.5, 3, 10}`,
/// `n ≤ 4`, `s ≤ 3`, `l ≤ s`, to `max(10⁻³⁰, 2^{16−bits})` relative.
pub fn trig_moments(ctx: &PrecisionContext) -> SuiteReport {
    let mut report = SuiteReport::new("trig-moments");
    let tol = ctx.real(1e-30).max(&ctx.epsilon(16));
    let ctx = &guarded(ctx);
    let mut cases = Vec::new();
    for &rho in &MOMENT_RHOS {
        for n in 1..=4 {
            for s in 1..=3 {
                for l in 0..=s {
                    cases.push((rho, n, s, l));
                }
            }
        }
    }
    let results: Vec<Option<String>> = cases
        .par_iter()
        .map(|&(rho, n, s, l)| {
            let params = RuleParams::new(n, s).expect("positive");
            let r = ctx.real(rho);
            match trig_moment(&r, params, l, ctx) {
                Ok(closed) => {
                    let quad = trig_moment_quadrature(&r, params, l, ctx);
                    let err = rel(&closed, &quad, ctx);
                    (err.is_nan() || err >= tol)
                        .then(|| format!("rho={rho} n={n} s={s} l={l}: relative error {:.3e}", err.to_f64()))
                }
                Err(e) => Some(format!("rho={rho} n={n} s={s} l={l}: {e}")),
            }
        })
        .collect();
    for r in results {
        match r {
            Some(f) => report.fail(f),
            None => report.checks += 1,
        }
    }
    report
}

/// One point where `|K|` does not peak on the real axis.
#[derive(Debug, Clone)]
pub struct OffAxisCase {
    pub n: usize,
    pub s: usize,
    pub rho: f64,
    pub theta: f64,
    /// `max|K| / |K(a₁)| − 1`.
    pub excess: f64,
    /// The checked `B1` refused the point and the fallback raised the bound.
    pub fallback_engaged: bool,
}

pub const SCAN_N: [usize; 3] = [2, 4, 8];
pub const SCAN_RHO: (f64, f64) = (1.05, 16.0);
pub const SCAN_POINTS: usize = 40;

/// Log-spaced `ρ` grid over [`SCAN_RHO`].
pub fn scan_rhos(points: usize) -> Vec<f64> {
    let (lo, hi) = (SCAN_RHO.0.ln(), SCAN_RHO.1.ln());
    (0..points)
        .map(|j| (lo + (hi - lo) * j as f64 / (points - 1) as f64).exp())
        .collect()
}

/// `θ*` at every grid point; off-axis cases with the fallback outcome.
pub fn theorem1_cases(ctx: &PrecisionContext) -> Result<(usize, Vec<OffAxisCase>), Error> {
    let f = ExpSquare::new(1.0)?;
    let opts = BoundOptions::default();
    let mut grid = Vec::new();
    for n in SCAN_N {
        for s in 1..=3 {
            for rho in scan_rhos(SCAN_POINTS) {
                grid.push((n, s, rho));
            }
        }
    }
    let found: Vec<Option<OffAxisCase>> = grid
        .par_iter()
        .map(|&(n, s, rho)| -> Result<Option<OffAxisCase>, Error> {
            let params = RuleParams::new(n, s)?;
            let r = ctx.real(rho);
            let m = kernel_max_on_ellipse(&r, params, default_grid(params), ctx)?;
            if m.on_axis {
                return Ok(None);
            }
            let refused = matches!(bound_b1(&r, params, &f, &opts, ctx), Err(Error::OffAxisMaximum { .. }));
            let axis = bound_b1_axis(&r, params, &f, opts.max_modulus_form, ctx)?;
            let (value, engaged) = bound_b1_with_fallback(&r, params, &f, &opts, ctx)?;
            let axis_abs = fcq_core::kernel::kernel_abs_on_axis(&r, params, ctx)?;
            Ok(Some(OffAxisCase {
                n,
                s,
                rho,
                theta: m.theta_star.to_f64(),
                excess: ctx.real(&m.max_abs / &axis_abs).to_f64() - 1.0,
                fallback_engaged: refused && engaged && value > axis,
            }))
        })
        .collect::<Result<_, _>>()?;
    Ok((grid.len(), found.into_iter().flatten().collect()))
}

/// Off-axis maxima are reported, not asserted away; the suite passes when
/// every one of them makes the checked `B1` refuse and the fallback engage.
pub fn theorem1_scan(ctx: &PrecisionContext) -> SuiteReport {
    let mut report = SuiteReport::new("theorem1-scan");
    match theorem1_cases(ctx) {
        Ok((total, cases)) => {
            report.checks += total;
            report.notes.push(format!(
                "{} of {total} grid points have an off-axis maximum",
                cases.len()
            ));
            for c in &cases {
                report.notes.push(format!(
                    "n={} s={} rho={:.4}: theta*={:.4}, max|K|/|K(a1)| - 1 = {:.3e}, fallback {}",
                    c.n,
                    c.s,
                    c.rho,
                    c.theta,
                    c.excess,
                    if c.fallback_engaged { "engaged" } else { "NOT engaged" }
                ));
                if !c.fallback_engaged {
                    report
                        .failures
                        .push(format!("n={} s={} rho={}: fallback did not engage", c.n, c.s, c.rho));
                }
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}
