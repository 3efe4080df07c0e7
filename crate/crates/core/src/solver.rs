//! Truncated power-series fundamental matrices over `ℚ[[t]] ⊗ Λ(θ₁..θ_r)`
//! for `∂ = d/dt` alone or for the model `δ = ∂_{θ₁} + θ₁∂`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::dalgebra::{DAction, DModule, LieSuperSpec, SuperAction};
use crate::error::{Error, Result};
use crate::pvkit::{even_reduction, gl_primitive_check};
use crate::report::Report;
use crate::supercore::{Mono, SuperElem, SuperRingSpec};
use crate::supermatrix::{Format, SuperMatrix};

/// Body variable `t`, odd `th1..thr`, and either `{d}` or `{d, delta}`.
#[derive(Clone, Debug)]
pub struct SeriesModel {
    action: DAction,
    delta: bool,
}

impl SeriesModel {
    pub fn new(num_odd: usize, delta: bool) -> Result<Self> {
        if delta && num_odd == 0 {
            return Err(Error::InvalidSpec("the delta model needs at least one odd generator".into()));
        }
        let mut b = SuperRingSpec::builder().body("t");
        for i in 1..=num_odd {
            b = b.odd(format!("th{i}"));
        }
        let ring = b.build()?;
        let action = if delta { DAction::delta_model(&ring, "t", "th1")? } else { DAction::derivative(&ring, "t")? };
        Ok(SeriesModel { action, delta })
    }

    pub fn ring(&self) -> &Arc<SuperRingSpec> {
        self.action.ring()
    }

    pub fn action(&self) -> &DAction {
        &self.action
    }

    pub fn spec(&self) -> &Arc<LieSuperSpec> {
        self.action.spec()
    }

    pub fn is_delta(&self) -> bool {
        self.delta
    }

    /// The module with `F(delta)` given (delta model) or `F(d)` given.
    pub fn module(&self, f: SuperMatrix) -> Result<DModule> {
        if self.delta {
            DModule::from_delta(self.action.clone(), f)
        } else {
            DModule::new(self.action.clone(), f.format(), vec![f])
        }
    }

    /// Recognizes a module already posed over a ring `t | th1..thr` with
    /// the `{d}` or `{d, delta}` action, returning the model and the module
    /// re-attached to it.
    pub fn for_module(m: &DModule) -> Result<(Self, DModule)> {
        let ring = m.ring();
        let odd_ok = ring.odd_gens().iter().enumerate().all(|(i, n)| *n == format!("th{}", i + 1));
        if ring.body_vars() != ["t"] || !ring.poly_gens().is_empty() || ring.num_dens() != 0 || !odd_ok {
            return Err(Error::SpecMismatch("series solving needs the ring t | th1..thr with no other generators".into()));
        }
        let delta = if **m.spec() == *LieSuperSpec::delta_model() {
            true
        } else if **m.spec() == *LieSuperSpec::even_line("d") {
            false
        } else {
            return Err(Error::SpecMismatch("series solving needs the Lie spec {d} or {d, delta}".into()));
        };
        let model = SeriesModel::new(ring.odd_gens().len(), delta)?;
        let moved = m.embed(model.action.clone())?;
        let mut probe = m.action().clone();
        probe = probe.embed(model.ring())?;
        for g in 0..model.spec().len() {
            for atom in model.ring().all_atoms() {
                if probe.derivation(g).image(atom) != model.action.derivation(g).image(atom) {
                    return Err(Error::SpecMismatch(format!(
                        "action of {} on {} differs from the model",
                        model.spec().name(g),
                        model.ring().atom_name(atom)
                    )));
                }
            }
        }
        Ok((model, moved))
    }

    fn check_module(&self, m: &DModule) -> Result<()> {
        if !SuperRingSpec::same(m.ring(), self.ring()) || **m.spec() != **self.spec() {
            return Err(Error::SpecMismatch("module is not over the series model".into()));
        }
        for g in 0..self.spec().len() {
            for atom in self.ring().all_atoms() {
                if m.action().derivation(g).image(atom) != self.action.derivation(g).image(atom) {
                    return Err(Error::SpecMismatch(format!(
                        "action of {} on {} differs from the model",
                        self.spec().name(g),
                        self.ring().atom_name(atom)
                    )));
                }
            }
        }
        if !m.is_consistent() {
            return Err(Error::InconsistentModule(m.consistency().failure.clone().unwrap_or_default()));
        }
        Ok(())
    }
}

/// A fundamental matrix truncated mod `t^order`; `dX - F(d)X` vanishes to
/// order `trusted` for every generator.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub x: SuperMatrix,
    pub order: u32,
    pub trusted: u32,
}

impl SeriesSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "matrix": self.x.to_json(),
            "mod": format!("t^{}", self.order),
        })
    }
}

type Series = Vec<SuperMatrix>;

/// Coefficients of `t^k` of a polynomial element; each coefficient is
/// free of `t`.
fn t_coeffs(e: &SuperElem) -> Result<Vec<SuperElem>> {
    let ring = e.ring();
    if e.has_denominator() {
        return Err(Error::NonPolynomial(e.to_string()));
    }
    let mut out: Vec<SuperElem> = Vec::new();
    for (m, c) in e.terms() {
        if !c.is_polynomial() {
            return Err(Error::NonPolynomial(e.to_string()));
        }
        for (exp, q) in c.numer().terms() {
            let k = exp[0] as usize;
            if out.len() <= k {
                out.resize(k + 1, SuperElem::zero(ring));
            }
            out[k] = &out[k] + &SuperElem::from_mono(ring, m.clone()).scale_q(q);
        }
    }
    Ok(out)
}

fn matrix_coeffs(x: &SuperMatrix) -> Result<Series> {
    let per_entry: Vec<((usize, usize), Vec<SuperElem>)> =
        x.entries().map(|(ij, e)| t_coeffs(e).map(|c| (ij, c))).collect::<Result<_>>()?;
    let len = per_entry.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let mut out = vec![SuperMatrix::zero(x.ring(), x.format()); len];
    for ((i, j), cs) in per_entry {
        for (k, c) in cs.into_iter().enumerate() {
            out[k].set(i, j, c);
        }
    }
    Ok(out)
}

fn assemble(ring: &Arc<SuperRingSpec>, fmt: Format, s: &Series) -> Result<SuperMatrix> {
    let t = SuperElem::gen(ring, "t")?;
    let mut x = SuperMatrix::zero(ring, fmt);
    for (k, c) in s.iter().enumerate() {
        x = &x + &c.scale_left(&t.pow(k as u32));
    }
    Ok(x)
}

/// `P' = M P`, `P(0) = I`, by `(k+1) P_{k+1} = Σ_{i+j=k} M_i P_j`.
fn solve_linear(m: &Series, ring: &Arc<SuperRingSpec>, fmt: Format, n: u32) -> Series {
    let mut p: Series = vec![SuperMatrix::identity(ring, fmt)];
    for k in 0..n.saturating_sub(1) as usize {
        let mut acc = SuperMatrix::zero(ring, fmt);
        for (i, mi) in m.iter().enumerate().take(k + 1) {
            acc = &acc + &(mi * &p[k - i]);
        }
        let inv = BigRational::new(BigInt::from(1), BigInt::from(k as u64 + 1));
        p.push(acc.map(|e| e.scale_q(&inv)));
    }
    p
}

fn truncated_product(a: &Series, b: &Series, ring: &Arc<SuperRingSpec>, fmt: Format, n: u32) -> Series {
    let mut out = vec![SuperMatrix::zero(ring, fmt); n as usize];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n as usize {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Splits `a = a₀ + θ₁a₁` with `a₀, a₁` free of `θ₁` (slot 0).
fn split_theta1(a: &SuperElem) -> (SuperElem, SuperElem) {
    let ring = a.ring();
    let (mut a0, mut a1) = (SuperElem::zero(ring), SuperElem::zero(ring));
    for (m, c) in a.terms() {
        let term = SuperElem::from_mono(ring, Mono { odd: m.odd & !1, even: m.even.clone() }).scale(c);
        if m.odd & 1 == 1 {
            a1 = &a1 + &term;
        } else {
            a0 = &a0 + &term;
        }
    }
    (a0, a1)
}

/// Fundamental matrix `X` with `X(0) = I` and `dX ≡ F(d)X mod t^{n-1}`.
pub fn series_solve(m: &DModule, model: &SeriesModel, n: u32) -> Result<SeriesSolution> {
    model.check_module(m)?;
    if n == 0 {
        return Err(Error::Validation("truncation order must be positive".into()));
    }
    let ring = model.ring().clone();
    let fmt = m.format();
    let x = if model.delta {
        let fd = m.map(1);
        for (_, e) in fd.entries() {
            t_coeffs(e)?;
        }
        let g = fd.map(|e| split_theta1(e).0);
        let h = fd.map(|e| split_theta1(e).1);
        let mm = &h + &(&g.sigma() * &g);
        let p = solve_linear(&matrix_coeffs(&mm)?, &ring, fmt, n);
        let q = truncated_product(&matrix_coeffs(&g)?, &p, &ring, fmt, n);
        let th = SuperElem::gen(&ring, "th1")?;
        &assemble(&ring, fmt, &p)? + &assemble(&ring, fmt, &q)?.scale_left(&th)
    } else {
        let p = solve_linear(&matrix_coeffs(m.map(0))?, &ring, fmt, n);
        assemble(&ring, fmt, &p)?
    };
    Ok(SeriesSolution { x, order: n, trusted: n.saturating_sub(1) })
}

fn t_order(e: &SuperElem) -> u32 {
    e.body_order(0).unwrap_or(0)
}

/// `dX - F(d)X ≡ 0 mod t^{trusted}` for each generator, and in the delta
/// model `δ(δX) ≡ ∂X`.
pub fn residual_report(m: &DModule, sol: &SeriesSolution) -> Report {
    let mut rep = Report::new("residual");
    let spec = m.spec().clone();
    for g in 0..spec.len() {
        let r = &m.act_matrix(g, &sol.x) - &(m.map(g) * &sol.x);
        for ((i, j), e) in r.entries() {
            rep.record(t_order(e) >= sol.trusted, || {
                format!("{}X - F({})X at ({}, {}) is {}", spec.name(g), spec.name(g), i + 1, j + 1, e)
            });
        }
    }
    if spec.len() == 2 {
        let twice = m.act_matrix(1, &m.act_matrix(1, &sol.x));
        let once = m.act_matrix(0, &sol.x);
        let diff = &twice - &once;
        rep.record(diff.entries().all(|(_, e)| t_order(e) >= sol.trusted), || format!("delta(delta X) - dX = {diff}"));
    }
    rep
}

/// `gl_primitive_check(X)` agrees with `F` mod `t^{trusted}`.
pub fn round_trip_report(m: &DModule, sol: &SeriesSolution) -> Result<Report> {
    let mut rep = Report::new("round_trip");
    let back = gl_primitive_check(&sol.x, m.action(), m.ring())?;
    for (g, f) in back.iter().enumerate() {
        let diff = f - m.map(g);
        for ((i, j), e) in diff.entries() {
            rep.record(t_order(e) >= sol.trusted, || {
                format!("recovered F({}) differs at ({}, {}) by {}", m.spec().name(g), i + 1, j + 1, e)
            });
        }
    }
    Ok(rep)
}

/// Classical Picard iteration `Y ← I + ∫₀ᵗ A Y` mod `t^n` over the body
/// field, one order gained per pass.
pub fn picard_fundamental_matrix(a: &SuperMatrix, n: u32) -> Result<SuperMatrix> {
    let ring = a.ring().clone();
    let fmt = a.format();
    let id = SuperMatrix::identity(&ring, fmt);
    let mut y = id.clone();
    for _ in 0..n {
        let ay = (a * &y).try_map(|e| e.truncate(0, n))?;
        let integral = ay.try_map(integrate_t)?;
        y = (&id + &integral).try_map(|e| e.truncate(0, n))?;
    }
    Ok(y)
}

fn integrate_t(e: &SuperElem) -> Result<SuperElem> {
    let ring = e.ring();
    let t = SuperElem::gen(ring, "t")?;
    let mut out = SuperElem::zero(ring);
    for (k, c) in t_coeffs(e)?.into_iter().enumerate() {
        let inv = BigRational::new(BigInt::from(1), BigInt::from(k as u64 + 1));
        out = &out + &(&c * &t.pow(k as u32 + 1)).scale_q(&inv);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub report: Report,
    /// Dimension `m|n` of the solution space realized by the columns of `X`.
    pub count: String,
    pub full: bool,
    pub body: serde_json::Value,
}

/// Counts the invariant functionals `f_j(v_i) = X_ij` (columns of `X`
/// that solve the system to the trusted order, homogeneous, and
/// independent at `t = 0`) and checks the body of `X` against a Picard
/// solution of the even reduction.
pub fn splitting_report(m: &DModule, model: &SeriesModel, n: u32) -> Result<SplittingReport> {
    let sol = series_solve(m, model, n)?;
    let fmt = m.format();
    let mut rep = residual_report(m, &sol);
    let (mut even, mut odd) = (0, 0);
    let at_zero = sol.x.body().try_map(|e| e.truncate(0, 1))?;
    let independent = at_zero.is_gl();
    let solves = rep.passed;
    for j in 0..fmt.size() {
        let homogeneous = (0..fmt.size()).all(|i| sol.x.get(i, j).has_parity(fmt.entry_parity(i, j)));
        if homogeneous && independent && solves {
            if fmt.parity(j).is_odd() {
                odd += 1;
            } else {
                even += 1;
            }
        }
    }
    let full = even == fmt.m && odd == fmt.n;
    rep.record(full, || format!("only {even}|{odd} independent solutions"));
    let red = even_reduction(m)?;
    let kbar = red.module.ring().clone();
    let body = SuperMatrix::from_fn(&kbar, fmt, |i, j| sol.x.get(i, j).substitute_odd_zero());
    let d = red.module.spec().index("d")?;
    let classical = picard_fundamental_matrix(red.module.map(d), n)?;
    rep.record(body == classical, || format!("body(X) = {body} but the reduced system gives {classical}"));
    let res = &red.module.act_matrix(d, &body) - &(red.module.map(d) * &body);
    rep.record(res.entries().all(|(_, e)| t_order(e) >= sol.trusted), || format!("body(X) misses the reduced system: {res}"));
    Ok(SplittingReport { report: rep, count: format!("{even}|{odd}"), full, body: body.to_json() })
}

/// `1/k!` as an exact rational.
pub fn inverse_factorial(k: u32) -> BigRational {
    let mut f = BigInt::from(1);
    for i in 2..=k {
        f *= i;
    }
    BigRational::new(BigInt::from(1), f)
}

/// Coefficient of `t^k` in a `t`-polynomial scalar, zero if absent.
pub fn scalar_coefficient(e: &SuperElem, k: u32) -> Option<BigRational> {
    let cs = t_coeffs(e).ok()?;
    match cs.get(k as usize) {
        Some(c) => c.as_rational(),
        None => Some(BigRational::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_system_gives_identity() {
        let model = SeriesModel::new(1, true).unwrap();
        let m = model.module(SuperMatrix::zero(model.ring(), Format { m: 1, n: 1 })).unwrap();
        let sol = series_solve(&m, &model, 6).unwrap();
        assert!(sol.x.is_identity());
        let sr = splitting_report(&m, &model, 6).unwrap();
        assert!(sr.full && sr.report.passed, "{:?}", sr.report.failure);
    }

    #[test]
    fn exponential() {
        let model = SeriesModel::new(0, false).unwrap();
        let m = model.module(SuperMatrix::identity(model.ring(), Format { m: 1, n: 0 })).unwrap();
        let sol = series_solve(&m, &model, 10).unwrap();
        for k in 0..10 {
            assert_eq!(scalar_coefficient(sol.x.get(0, 0), k).unwrap(), inverse_factorial(k));
        }
        assert_eq!(scalar_coefficient(sol.x.get(0, 0), 10).unwrap(), BigRational::zero());
        let sr = splitting_report(&m, &model, 10).unwrap();
        assert_eq!(sr.count, "1|0");
        assert!(sr.report.passed);
    }

    #[test]
    fn delta_swap_model() {
        let model = SeriesModel::new(1, true).unwrap();
        let f = SuperMatrix::parse(model.ring(), Format { m: 1, n: 1 }, &[vec!["0", "1"], vec!["1", "0"]]).unwrap();
        let m = model.module(f).unwrap();
        let sol = series_solve(&m, &model, 8).unwrap();
        assert!(sol.x.has_class(crate::supercore::Parity::Even));
        let r = residual_report(&m, &sol);
        assert!(r.passed, "{:?}", r.failure);
        let r = round_trip_report(&m, &sol).unwrap();
        assert!(r.passed, "{:?}", r.failure);
        let sr = splitting_report(&m, &model, 8).unwrap();
        assert_eq!(sr.count, "1|1");
        assert!(sr.report.passed, "{:?}", sr.report.failure);
    }

    #[test]
    fn delta_model_with_theta_entries() {
        let model = SeriesModel::new(2, true).unwrap();
        let f = SuperMatrix::parse(
            model.ring(),
            Format { m: 2, n: 1 },
            &[vec!["th1", "t*th2", "1+t"], vec!["th2", "0", "t"], vec!["2", "t^2", "th1*th2*th1 + th2"]],
        )
        .unwrap();
        let m = model.module(f).unwrap();
        let sol = series_solve(&m, &model, 7).unwrap();
        let r = residual_report(&m, &sol);
        assert!(r.passed, "{:?}", r.failure);
        let r = round_trip_report(&m, &sol).unwrap();
        assert!(r.passed, "{:?}", r.failure);
        let sr = splitting_report(&m, &model, 7).unwrap();
        assert!(sr.report.passed, "{:?}", sr.report.failure);
    }

    #[test]
    fn rejects_rational_entries() {
        let model = SeriesModel::new(0, false).unwrap();
        let f = SuperMatrix::parse(model.ring(), Format { m: 1, n: 0 }, &[vec!["1/(1+t)"]]).unwrap();
        let m = model.module(f).unwrap();
        assert!(matches!(series_solve(&m, &model, 4), Err(Error::NonPolynomial(_))));
    }
}
