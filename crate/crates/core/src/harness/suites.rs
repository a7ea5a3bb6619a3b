//! Named verification suites behind `verify`: batches of exact-identity
//! checks and budgeted inequality sweeps, each reported as one pass/fail
//! line.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dissociation::SetMask;
use crate::error::{Error, Result};
use crate::fourier::{
    conjugate, convolve, convolve_direct, dft, dft_naive, idft, inner, pointwise, reflect, FuncC,
    Side,
};
use crate::group::GroupSpec;
use crate::linalg::{eigh, matmul, spectra_deviation, top_eig, MatC};
use crate::operators::{Chain, OperatorSpec, RestrictedOperator, SubspaceBasis};

use super::inequalities::eig_stats;
use super::reports::{random_complex_func, random_real_func, InequalityReport};
use super::sweep::{mix_seed, random_dissociated, standard_sweep};
use super::zp::{
    chebotarev_scan, constructive_eigenbasis, min_support_basis, modulated_dimension,
    sparsify_cover, uncertainty_check, EigenbasisCase,
};

/// One named check with its worst observed error.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn render(&self) -> String {
        format!(
            "{} {} ({})",
            if self.pass { "ok  " } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub checks: Vec<CheckLine>,
    pub reports: Vec<InequalityReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Spectra,
    Chebotarev,
    Uncertainty,
    Inequalities,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "identities" => Ok(Suite::Identities),
            "spectra" => Ok(Suite::Spectra),
            "chebotarev" => Ok(Suite::Chebotarev),
            "uncertainty" => Ok(Suite::Uncertainty),
            "inequalities" => Ok(Suite::Inequalities),
            "all" => Ok(Suite::All),
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Restrict group-driven suites to one group instead of the standard
    /// list.
    pub group: Option<GroupSpec>,
    /// Restrict prime-driven suites to one prime.
    pub prime: Option<usize>,
    pub seed: u64,
    pub budget: f64,
    /// Random repetitions per group for identity batteries.
    pub reps: usize,
    /// Multiplier on the identity-check tolerances; 1.0 keeps the pinned
    /// defaults.
    pub tol_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            group: None,
            prime: None,
            seed: 0,
            budget: super::reports::DEFAULT_BUDGET,
            reps: 50,
            tol_scale: 1.0,
        }
    }
}

/// Standard group family up to order `max_n`: every cyclic group, the
/// boolean cubes, and the squarefree product 2x3x5.
pub fn standard_groups(max_n: usize) -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (2..=max_n)
        .map(|n| GroupSpec::cyclic(n).expect("n >= 2"))
        .collect();
    let mut k = 2;
    while (1usize << k) <= max_n {
        out.push(GroupSpec::parse(&format!("2^{k}")).expect("valid"));
        k += 1;
    }
    if max_n >= 30 {
        out.push(GroupSpec::parse("2,3,5").expect("valid"));
    }
    out
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    match suite {
        Suite::Identities => identities_suite(cfg, &mut checks)?,
        Suite::Spectra => spectra_suite(cfg, &mut checks)?,
        Suite::Chebotarev => chebotarev_suite(cfg, &mut checks)?,
        Suite::Uncertainty => uncertainty_suite(cfg, &mut checks)?,
        Suite::Inequalities => inequalities_suite(cfg, &mut checks, &mut reports)?,
        Suite::All => {
            identities_suite(cfg, &mut checks)?;
            spectra_suite(cfg, &mut checks)?;
            chebotarev_suite(cfg, &mut checks)?;
            uncertainty_suite(cfg, &mut checks)?;
            inequalities_suite(cfg, &mut checks, &mut reports)?;
        }
    }
    let pass = checks.iter().all(|c| c.pass) && reports.iter().all(|r| r.pass);
    Ok(SuiteOutcome {
        checks,
        reports,
        pass,
    })
}

struct Worst(f64);

impl Worst {
    fn new() -> Self {
        Worst(0.0)
    }
    fn see(&mut self, err: f64) {
        if err > self.0 {
            self.0 = err;
        }
    }
    fn line(&self, name: &str, tol: f64) -> CheckLine {
        CheckLine {
            name: name.to_string(),
            pass: self.0 <= tol,
            detail: format!("max_err={:.3e} tol={:.1e}", self.0, tol),
        }
    }
}

fn rel_s(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn rel_f(a: &FuncC, b: &FuncC) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

fn rel_m(a: &MatC, b: &MatC) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.sub(b).map(|d| d.max_abs()).unwrap_or(f64::INFINITY) / scale
}

fn groups_for(cfg: &SuiteConfig, max_n: usize) -> Vec<GroupSpec> {
    match &cfg.group {
        Some(g) => vec![g.clone()],
        None => standard_groups(max_n),
    }
}

/// Transform algebra identities on random functions over the standard
/// groups, plus the operator chain factorizations and the restricted-form
/// and trace identities.
fn identities_suite(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let groups = groups_for(cfg, 64);

    let mut parseval = Worst::new();
    let mut plancherel = Worst::new();
    let mut conv_sq = Worst::new();
    let mut conv_thm = Worst::new();
    let mut double_transform = Worst::new();
    let mut reflect_conv = Worst::new();
    let mut inner_conv = Worst::new();
    let mut conj_commute = Worst::new();
    let mut conj_transform = Worst::new();
    let mut pointwise_compose = Worst::new();
    let mut roundtrip = Worst::new();
    let mut fast_naive = Worst::new();
    let mut conv_routes = Worst::new();
    let mut gram = Worst::new();
    let mut reflect_pointwise = Worst::new();
    let mut t_form = Worst::new();
    let mut s_form = Worst::new();
    let mut t_chains = Worst::new();
    let mut s_chains = Worst::new();
    let mut t_adjoint = Worst::new();
    let mut s_adjoint = Worst::new();
    let mut restricted_form = Worst::new();
    let mut restricted_trace = Worst::new();
    let mut restricted_trace_sq = Worst::new();

    for (gi, g) in groups.iter().enumerate() {
        let n = g.order() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, gi as u64));
        for _ in 0..cfg.reps {
            let f = random_complex_func(g, &mut rng);
            let h = random_complex_func(g, &mut rng);
            let fh = dft(&f);
            let hh = dft(&h);

            parseval.see(rel_s(f.norm2_sq(), fh.norm2_sq() / n));
            plancherel.see(rel_c(inner(&f, &h)?, inner(&fh, &hh)? / n));

            let conv = convolve(&f, &h)?;
            let spec_prod = pointwise(&fh, &hh)?;
            conv_thm.see(rel_f(&dft(&conv), &spec_prod));
            conv_sq.see(rel_s(conv.norm2_sq(), spec_prod.norm2_sq() / n));

            double_transform.see(rel_f(&dft(&fh), &reflect(&f).scale(n.into())));
            reflect_conv.see(rel_f(
                &reflect(&conv),
                &convolve(&reflect(&f), &reflect(&h))?,
            ));

            let c = random_complex_func(g, &mut rng);
            let lhs = inner(&f, &convolve(&conjugate(&h), &c)?)?;
            let rhs = inner(&h, &convolve(&conjugate(&f), &reflect(&c))?)?;
            inner_conv.see(rel_c(lhs, rhs));

            conj_commute.see(rel_f(&conjugate(&reflect(&f)), &reflect(&conjugate(&f))));
            conj_transform.see(rel_f(&conjugate(&fh), &dft(&conjugate(&reflect(&f)))));

            let rho = random_complex_func(g, &mut rng);
            let sigma = random_complex_func(g, &mut rng);
            pointwise_compose.see(rel_f(
                &pointwise(&rho, &pointwise(&sigma, &f)?)?,
                &pointwise(&pointwise(&rho, &sigma)?, &f)?,
            ));

            roundtrip.see(rel_f(&idft(&fh), &f));

            // operator chains and adjoints
            let phi = random_complex_func(g, &mut rng);
            let psi = random_complex_func(g, &mut rng);
            let t = OperatorSpec::t(phi.clone(), psi.clone())?;
            let s = OperatorSpec::s(phi.clone(), psi.clone())?;
            let ta = t.apply_via(Chain::ReflectFirst, &f)?;
            t_chains.see(rel_f(&ta, &t.apply_via(Chain::ReflectLast, &f)?));
            t_chains.see(rel_f(&ta, &t.apply_via(Chain::ReflectMiddle, &f)?));
            let sa = s.apply_via(Chain::ReflectFirst, &f)?;
            s_chains.see(rel_f(&sa, &s.apply_via(Chain::ReflectLast, &f)?));
            s_chains.see(rel_f(&sa, &s.apply_via(Chain::ReflectMiddle, &f)?));
            t_adjoint.see(rel_c(inner(&ta, &h)?, inner(&f, &t.apply_adjoint(&h)?)?));
            s_adjoint.see(rel_c(inner(&sa, &h)?, inner(&f, &s.apply_adjoint(&h)?)?));

            // reflection conjugates pointwise multiplication
            reflect_pointwise.see(rel_f(
                &reflect(&pointwise(&rho, &f)?),
                &pointwise(&reflect(&rho), &reflect(&f))?,
            ));

            // full quadratic forms:
            // <T u, v> = sum_x phi(x) u^(x) conj((conj(psi) v)^(x))
            // <S u, v> = sum_x phi(x) (conj(psi) u)^(x) conj((conj(psi) v)^(x))
            let wv = dft(&pointwise(&conjugate(&psi), &h)?);
            let uh = dft(&f);
            let t_rhs: Complex64 = g
                .elements()
                .map(|x| phi.at(x) * uh.at(x) * wv.at(x).conj())
                .sum();
            t_form.see(rel_c(inner(&ta, &h)?, t_rhs));
            let wu = dft(&pointwise(&conjugate(&psi), &f)?);
            let s_rhs: Complex64 = g
                .elements()
                .map(|x| phi.at(x) * wu.at(x) * wv.at(x).conj())
                .sum();
            s_form.see(rel_c(inner(&sa, &h)?, s_rhs));
        }

        // one fast-vs-naive and one convolution dual-route check per group
        let f = random_complex_func(g, &mut rng);
        let h = random_complex_func(g, &mut rng);
        fast_naive.see(rel_f(&dft(&f), &dft_naive(&f)));
        conv_routes.see(rel_f(&convolve(&f, &h)?, &convolve_direct(&f, &h)?));

        // the character matrix has orthogonal rows: Gram = N * identity
        let character_matrix = MatC::from_fn(g.order(), |i, j| {
            g.pairing(crate::group::Element(i), crate::group::Element(j))
        });
        let gram_matrix = matmul(&character_matrix, &character_matrix.adjoint())?;
        let expect = MatC::identity(g.order()).scale(Complex64::new(n, 0.0));
        gram.see(gram_matrix.sub(&expect)?.max_abs() / n);

        // restricted operator identities on a random support
        for _ in 0..cfg.reps.min(10) {
            let size = 1 + rng.random_range(0..g.order());
            let s_mask = SetMask::random(g.clone(), size.min(g.order()), rng.random::<u64>())?;
            let phi = random_complex_func(g, &mut rng);
            let restricted = RestrictedOperator::new(&s_mask, &phi)?;

            // quadratic form route: <Tbar u, v> = sum phi(x) u^(x) conj(v^(x))
            let mut u = FuncC::zeros(g.clone(), Side::Time);
            let mut v = FuncC::zeros(g.clone(), Side::Time);
            for e in s_mask.elements() {
                u.set(
                    e,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                );
                v.set(
                    e,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                );
            }
            let mu = restricted.matrix().mat_vec(&restricted.compress(&u)?)?;
            let lhs: Complex64 = mu
                .iter()
                .zip(&restricted.compress(&v)?)
                .map(|(a, b)| a * b.conj())
                .sum();
            let uh = dft(&u);
            let vh = dft(&v);
            let rhs: Complex64 = g
                .elements()
                .map(|x| phi.at(x) * uh.at(x) * vh.at(x).conj())
                .sum();
            restricted_form.see(rel_c(lhs, rhs));

            // trace identities; eigenvalue routes need a real multiplier
            let phi_re = random_real_func(g, &mut rng);
            let restricted_re = RestrictedOperator::new(&s_mask, &phi_re)?;
            let card = s_mask.cardinality() as f64;
            let trace_expect = dft(&phi_re).at(g.zero()) * card;
            restricted_trace.see(rel_c(restricted_re.trace(), trace_expect));

            let evs = restricted_re.eigh()?.eigenvalues;
            restricted_trace.see(rel_s(evs.iter().sum::<f64>(), trace_expect.re));

            let phihat = dft(&phi_re);
            let s_ind = s_mask.indicator();
            let auto_s = convolve(&s_ind, &reflect(&s_ind))?;
            let closed_a: f64 = g
                .elements()
                .map(|z| phihat.at(z).norm_sqr() * auto_s.at(z).re)
                .sum::<f64>();
            let auto_phi = convolve(&phi_re, &reflect(&phi_re))?;
            let sh = dft(&s_ind);
            let closed_b: f64 = g
                .elements()
                .map(|z| auto_phi.at(z).re * sh.at(z).norm_sqr())
                .sum::<f64>();
            let sum_sq: f64 = evs.iter().map(|x| x * x).sum();
            restricted_trace_sq.see(rel_s(closed_a, sum_sq));
            restricted_trace_sq.see(rel_s(closed_b, sum_sq));
        }
    }

    checks.push(parseval.line("fourier/parseval", 1e-9 * cfg.tol_scale));
    checks.push(plancherel.line("fourier/plancherel", 1e-9 * cfg.tol_scale));
    checks.push(conv_sq.line("fourier/convolution-energy", 1e-9 * cfg.tol_scale));
    checks.push(conv_thm.line("fourier/convolution-theorem", 1e-9 * cfg.tol_scale));
    checks.push(double_transform.line("fourier/double-transform-reflect", 1e-9 * cfg.tol_scale));
    checks.push(reflect_conv.line("fourier/reflect-convolution", 1e-9 * cfg.tol_scale));
    checks.push(inner_conv.line("fourier/inner-convolution-swap", 1e-9 * cfg.tol_scale));
    checks.push(conj_commute.line("fourier/conjugation-reflection", 1e-12 * cfg.tol_scale));
    checks.push(conj_transform.line("fourier/conjugation-transform", 1e-9 * cfg.tol_scale));
    checks.push(pointwise_compose.line("fourier/pointwise-composition", 1e-12 * cfg.tol_scale));
    checks.push(roundtrip.line("fourier/inversion-roundtrip", 1e-10 * cfg.tol_scale));
    checks.push(fast_naive.line("fourier/fast-path-vs-naive", 1e-10 * cfg.tol_scale));
    checks.push(conv_routes.line("fourier/convolution-dual-route", 1e-10 * cfg.tol_scale));
    checks.push(gram.line("group/character-gram", 1e-10 * cfg.tol_scale));
    checks.push(reflect_pointwise.line("fourier/reflect-pointwise", 1e-12 * cfg.tol_scale));
    checks.push(t_chains.line("operators/t-chain-factorizations", 1e-9 * cfg.tol_scale));
    checks.push(s_chains.line("operators/s-chain-factorizations", 1e-9 * cfg.tol_scale));
    checks.push(t_adjoint.line("operators/t-adjoint-pairing", 1e-9 * cfg.tol_scale));
    checks.push(s_adjoint.line("operators/s-adjoint-pairing", 1e-9 * cfg.tol_scale));
    checks.push(t_form.line("operators/t-quadratic-form", 1e-9 * cfg.tol_scale));
    checks.push(s_form.line("operators/s-quadratic-form", 1e-9 * cfg.tol_scale));
    checks.push(restricted_form.line("operators/restricted-quadratic-form", 1e-9 * cfg.tol_scale));
    checks.push(restricted_trace.line("operators/restricted-trace", 1e-8 * cfg.tol_scale));
    checks.push(restricted_trace_sq.line("operators/restricted-square-trace", 1e-8 * cfg.tol_scale));
    Ok(())
}

/// Spectrum equalities for the operator family: the duality permutations,
/// the product identity, zero-padding of restrictions, definiteness, and
/// the nested-pair example.
fn spectra_suite(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    if let Some(g) = &cfg.group {
        if g.order() > 64 {
            return Err(Error::Precondition(format!(
                "spectrum battery materializes dense operators; {g} exceeds order 64"
            )));
        }
    }
    let groups: Vec<GroupSpec> = groups_for(cfg, 16);

    let mut dual_window = Worst::new();
    let mut dual_multiplier = Worst::new();
    let mut product_entrywise = Worst::new();
    let mut product_spec = Worst::new();
    let mut s_as_t = Worst::new();
    let mut zero_pad = Worst::new();
    let mut asym_witness = false;

    for (gi, g) in groups.iter().enumerate() {
        let n = g.order();
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 1000 + gi as u64));
        for rep in 0..cfg.reps {
            // half the reps use real pairs, half complex
            let (phi, psi) = if rep % 2 == 0 {
                (random_complex_func(g, &mut rng), random_complex_func(g, &mut rng))
            } else {
                (random_real_func(g, &mut rng), random_real_func(g, &mut rng))
            };
            let t = OperatorSpec::t(phi.clone(), psi.clone())?.full_matrix()?;
            let t_reflected =
                OperatorSpec::t(reflect(&phi), reflect(&psi))?.full_matrix()?;
            let t_co = OperatorSpec::t(reflect(&phi), psi.clone())?.full_matrix()?;
            dual_window.see(spectra_deviation(&t, &t_reflected));
            dual_multiplier.see(spectra_deviation(&t, &t_co));

            // T T* = N S_psi^{|phi|^2}, and Spec(TT*) = N Spec(T_{|psi|^2}^{|phi|^2})
            let abs_sq = |f: &FuncC| {
                FuncC::from_values(
                    g.clone(),
                    f.values()
                        .iter()
                        .map(|v| Complex64::new(v.norm_sqr(), 0.0))
                        .collect(),
                    Side::Time,
                )
                .expect("same length")
            };
            let tt = matmul(&t, &t.adjoint())?;
            let s_abs = OperatorSpec::s(abs_sq(&phi), psi.clone())?.full_matrix()?;
            product_entrywise.see(rel_m(&tt, &s_abs.scale(Complex64::new(n as f64, 0.0))));
            let t_abs =
                OperatorSpec::t(abs_sq(&phi), abs_sq(&psi))?.full_matrix()?;
            product_spec.see(spectra_deviation(
                &tt,
                &t_abs.scale(Complex64::new(n as f64, 0.0)),
            ));

            // Spec(S_psi^phi) = Spec(T_{|psi|^2}^phi)
            let s_mat = OperatorSpec::s(phi.clone(), psi.clone())?.full_matrix()?;
            let t_sq = OperatorSpec::t(phi.clone(), abs_sq(&psi))?.full_matrix()?;
            s_as_t.see(spectra_deviation(&s_mat, &t_sq));

            // witness that swapping window and multiplier changes the
            // spectrum of S in general
            if !asym_witness {
                let s_swapped = OperatorSpec::s(psi.clone(), phi.clone())?.full_matrix()?;
                if spectra_deviation(&s_mat, &s_swapped) > 1e-3 {
                    asym_witness = true;
                }
            }

            // zero-padding: Spec(T with indicator window) is the restricted
            // spectrum plus zeros
            if rep % 5 == 0 {
                let size = 1 + rng.random_range(0..n);
                let mask = SetMask::random(g.clone(), size, rng.random::<u64>())?;
                let full = OperatorSpec::t(phi.clone(), mask.indicator())?.full_matrix()?;
                let padded = RestrictedOperator::new(&mask, &phi)?.matrix().pad_to(n)?;
                zero_pad.see(spectra_deviation(&full, &padded));
            }
        }
    }

    checks.push(dual_window.line("spectra/reflect-both-spectrum", 1e-8 * cfg.tol_scale));
    checks.push(dual_multiplier.line("spectra/reflect-multiplier-spectrum", 1e-8 * cfg.tol_scale));
    checks.push(product_entrywise.line("spectra/product-symmetrized-entrywise", 1e-9 * cfg.tol_scale));
    checks.push(product_spec.line("spectra/product-spectrum", 1e-8 * cfg.tol_scale));
    checks.push(s_as_t.line("spectra/s-as-t-spectrum", 1e-8 * cfg.tol_scale));
    checks.push(CheckLine {
        name: "spectra/window-multiplier-asymmetry-witness".into(),
        pass: asym_witness,
        detail: if asym_witness {
            "found instance with distinct spectra".into()
        } else {
            "no witness found".into()
        },
    });
    checks.push(zero_pad.line("spectra/restriction-zero-padding", 1e-8 * cfg.tol_scale));

    definiteness_checks(cfg, checks)?;
    nested_pair_checks(cfg, checks)?;
    modulated_restriction_checks(cfg, checks)?;
    eigensolver_checks(cfg, checks)?;
    Ok(())
}

/// Nonnegative multipliers give PSD restrictions; over Z_p positive
/// definiteness holds exactly when the multiplier support is at least |S|.
fn definiteness_checks(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 2000));
    let mut psd_worst = Worst::new();
    for i in 0..100 {
        let g = GroupSpec::cyclic(7 + (i % 6))?;
        let size = 1 + rng.random_range(0..g.order());
        let mask = SetMask::random(g.clone(), size, rng.random::<u64>())?;
        let values: Vec<Complex64> = (0..g.order())
            .map(|_| Complex64::new(rng.random_range(0.0..1.0), 0.0))
            .collect();
        let phi = FuncC::from_values(g.clone(), values, Side::Time)?;
        let restricted = RestrictedOperator::new(&mask, &phi)?;
        let scale = restricted.matrix().max_abs().max(1.0);
        let min_ev = restricted.eigh()?.eigenvalues.last().copied().unwrap_or(0.0);
        psd_worst.see((-min_ev / scale).max(0.0));
    }
    checks.push(psd_worst.line("spectra/nonnegative-multiplier-psd", 1e-8 * cfg.tol_scale));

    let mut split_ok = true;
    let mut detail = String::new();
    for p in [5usize, 7] {
        let g = GroupSpec::cyclic(p)?;
        for s_bits in 1usize..(1 << p) {
            let idx: Vec<usize> = (0..p).filter(|i| s_bits >> i & 1 == 1).collect();
            let mask = SetMask::from_indices(g.clone(), &idx)?;
            for supp_size in 1..=p {
                let supp = SetMask::random(g.clone(), supp_size, rng.random::<u64>())?;
                let mut phi = FuncC::zeros(g.clone(), Side::Time);
                for e in supp.elements() {
                    phi.set(e, Complex64::new(rng.random_range(0.5..1.5), 0.0));
                }
                let restricted = RestrictedOperator::new(&mask, &phi)?;
                let scale = restricted.matrix().max_abs().max(1.0);
                let min_ev = restricted.eigh()?.eigenvalues.last().copied().unwrap();
                let definite = min_ev > 1e-8 * scale;
                let expected = supp_size >= mask.cardinality();
                if definite != expected {
                    split_ok = false;
                    detail = format!(
                        "p={p} S={} supp={supp_size}: min_ev={min_ev:.3e}",
                        mask.descriptor()
                    );
                }
            }
        }
    }
    checks.push(CheckLine {
        name: "spectra/definiteness-support-threshold".into(),
        pass: split_ok,
        detail: if split_ok {
            "exhaustive over p=5,7".into()
        } else {
            detail
        },
    });
    Ok(())
}

/// Nested pair of sets in Z_11: indicator of the larger set keeps the
/// restriction positive definite, the smaller one forces the expected
/// nullity.
fn nested_pair_checks(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let g = GroupSpec::cyclic(11)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 3000));
    let mut ok = true;
    let mut detail = String::new();
    for _ in 0..20 {
        let c1 = 1 + rng.random_range(0..5usize);
        let c2 = (c1 + 1 + rng.random_range(0..(10 - c1))).min(10);
        let s1 = SetMask::random(g.clone(), c1, rng.random::<u64>())?;
        let s2 = SetMask::random(g.clone(), c2, rng.random::<u64>())?;

        let pd = RestrictedOperator::new(&s1, &s2.indicator())?;
        let scale_pd = pd.matrix().max_abs().max(1.0);
        let min_pd = pd.eigh()?.eigenvalues.last().copied().unwrap();

        let sing = RestrictedOperator::new(&s2, &s1.indicator())?;
        let scale_s = sing.matrix().max_abs().max(1.0);
        let nullity = sing
            .eigh()?
            .eigenvalues
            .iter()
            .filter(|&&ev| ev.abs() <= 1e-8 * scale_s)
            .count();

        if min_pd <= 1e-8 * scale_pd || nullity < c2 - c1 {
            ok = false;
            detail = format!("|S1|={c1} |S2|={c2} min_pd={min_pd:.3e} nullity={nullity}");
        }
    }
    checks.push(CheckLine {
        name: "spectra/nested-pair-definite-vs-singular".into(),
        pass: ok,
        detail: if ok { "20 random nested pairs".into() } else { detail },
    });
    Ok(())
}

/// The modulated family of the larger set spans exactly the functions on
/// the smaller support, and the operator acts there as the restricted
/// matrix: the two ways of restricting agree.
fn modulated_restriction_checks(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let g = GroupSpec::cyclic(7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 4000));
    let mut worst = Worst::new();
    let mut span_ok = true;
    for _ in 0..10 {
        let c1 = 1 + rng.random_range(0..4usize);
        let c2 = (c1 + rng.random_range(0..(6 - c1))).min(6).max(c1);
        let s1 = SetMask::random(g.clone(), c1, rng.random::<u64>())?;
        let s2 = SetMask::random(g.clone(), c2, rng.random::<u64>())?;

        let op = OperatorSpec::t(s2.indicator(), s1.indicator())?;
        let restricted = RestrictedOperator::new(&s1, &s2.indicator())?;
        let generators = SubspaceBasis::modulated(&s1.indicator(), &s2)?;
        // the generator family spans the functions supported on S1
        if generators.rank() != c1 {
            span_ok = false;
        }
        for gen in &generators.basis {
            let applied = op.apply(gen)?;
            // stays inside the support
            for x in g.elements() {
                if !s1.contains(x) {
                    worst.see(applied.at(x).norm());
                }
            }
            // and matches the restricted matrix action
            let coords = restricted.compress(gen)?;
            let via_matrix = restricted.matrix().mat_vec(&coords)?;
            let direct = restricted.compress(&applied)?;
            let scale = direct
                .iter()
                .map(|v| v.norm())
                .fold(1.0f64, f64::max);
            for (a, b) in via_matrix.iter().zip(&direct) {
                worst.see((a - b).norm() / scale);
            }
        }
    }
    let mut line = worst.line("spectra/modulated-restriction-agreement", 1e-9);
    if !span_ok {
        line.pass = false;
        line.detail = format!("{} (span dimension mismatch)", line.detail);
    }
    checks.push(line);
    Ok(())
}

/// Eigensolver contracts: reconstruction, unitarity, the bilinear-form
/// ceiling, and the power-iteration route.
fn eigensolver_checks(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 5000));
    let mut recon = Worst::new();
    let mut unitary = Worst::new();
    let mut form_bound = Worst::new();
    let mut power_route = Worst::new();
    for &n in &[4usize, 8, 16, 32, 64] {
        let a = {
            let b = MatC::from_fn(n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            b.add(&b.adjoint())?.scale(Complex64::new(0.5, 0.0))
        };
        let r = eigh(&a)?;
        let scale = a.max_abs().max(1.0);
        let av = matmul(&a, &r.vectors)?;
        let vd = MatC::from_fn(n, |i, j| r.vectors.at(i, j) * r.eigenvalues[j]);
        recon.see(av.sub(&vd)?.max_abs() / scale);
        let vtv = matmul(&r.vectors.adjoint(), &r.vectors)?;
        unitary.see(vtv.sub(&MatC::identity(n))?.max_abs());

        let mu_abs = r.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for _ in 0..100 {
            let unit = |rng: &mut ChaCha8Rng| {
                let mut v: Vec<Complex64> = (0..n)
                    .map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .collect();
                let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
                v
            };
            let u = unit(&mut rng);
            let v = unit(&mut rng);
            let au = a.mat_vec(&u)?;
            let form: Complex64 = au.iter().zip(&v).map(|(x, y)| x * y.conj()).sum();
            form_bound.see(((form.norm() - mu_abs) / mu_abs.max(1.0)).max(0.0));
        }

        // PSD route for power iteration
        let b = MatC::from_fn(n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let psd = matmul(&b, &b.adjoint())?;
        let top = top_eig(&psd)?;
        let top_eigh = eigh(&psd)?.eigenvalues[0];
        power_route.see(rel_s(top, top_eigh));
    }
    checks.push(recon.line("linalg/eigh-reconstruction", 1e-8 * cfg.tol_scale));
    checks.push(unitary.line("linalg/eigh-unitarity", 1e-8 * cfg.tol_scale));
    checks.push(form_bound.line("linalg/bilinear-form-ceiling", 1e-8 * cfg.tol_scale));
    checks.push(power_route.line("linalg/power-iteration-top-eig", 1e-8 * cfg.tol_scale));
    Ok(())
}

/// Character-submatrix nonsingularity: exhaustive for p in {3,5,7}, sampled
/// for p in {11,13}.
fn chebotarev_suite(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let plans: Vec<(usize, Option<(usize, u64)>)> = match cfg.prime {
        Some(p) if p <= 7 => vec![(p, None)],
        Some(p) => vec![(p, Some((10_000, cfg.seed)))],
        None => vec![
            (3, None),
            (5, None),
            (7, None),
            (11, Some((10_000, cfg.seed))),
            (13, Some((10_000, mix_seed(cfg.seed, 13)))),
        ],
    };
    for (p, sample) in plans {
        let rep = chebotarev_scan(p, p, sample)?;
        checks.push(CheckLine {
            name: format!("chebotarev/p{p}"),
            pass: rep.pass,
            detail: format!(
                "{} submatrices, min |det| = {:.3e}",
                rep.checked, rep.min_abs_det
            ),
        });
    }
    checks.push(CheckLine {
        name: "chebotarev/composite-rejected".into(),
        pass: chebotarev_scan(9, 3, None).is_err(),
        detail: "p = 9 refused".into(),
    });
    Ok(())
}

/// Support uncertainty, the modulated-subspace dimension formula, minimal
/// support bases, and the constructive eigenbases.
fn uncertainty_suite(cfg: &SuiteConfig, checks: &mut Vec<CheckLine>) -> Result<()> {
    let primes: Vec<usize> = match cfg.prime {
        Some(p) => vec![p],
        None => vec![5, 7, 11],
    };

    let mut bound_ok = true;
    let mut detail = String::new();
    let mut checked = 0usize;
    for &p in &primes {
        if !crate::group::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = GroupSpec::cyclic(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 6000 + p as u64));
        for i in 0..500 {
            let size = 1 + (i % (p - 1));
            let mask = SetMask::random(g.clone(), size, rng.random::<u64>())?;
            let mut f = FuncC::zeros(g.clone(), Side::Time);
            for e in mask.elements() {
                f.set(
                    e,
                    Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0)),
                );
            }
            let rep = uncertainty_check(&f)?;
            checked += 1;
            if !rep.pass {
                bound_ok = false;
                detail = format!("p={p} sparse instance {i}");
            }
        }
        // structured instances: deltas, constants, characters, intervals
        let mut structured: Vec<FuncC> = Vec::new();
        for a in 0..3.min(p) {
            structured.push(g.delta(g.element(a)?));
        }
        structured.push(FuncC::constant(g.clone(), Complex64::new(1.0, 0.0), Side::Time));
        structured.push(g.character(g.element(1)?));
        structured.push(g.character(g.element(p - 1)?));
        let interval: Vec<usize> = (0..p / 2).collect();
        structured.push(SetMask::from_indices(g.clone(), &interval)?.indicator());
        let decay: Vec<Complex64> = (0..p)
            .map(|i| Complex64::new(0.5f64.powi(i as i32), 0.0))
            .collect();
        structured.push(FuncC::from_values(g.clone(), decay, Side::Time)?);
        structured.push(g.delta(g.element(p - 1)?));
        structured.push({
            let mut f = g.delta(g.element(0)?);
            f.set(g.element(1)?, Complex64::new(-1.0, 0.0));
            f
        });
        for (i, f) in structured.iter().enumerate() {
            let rep = uncertainty_check(f)?;
            checked += 1;
            if !rep.pass {
                bound_ok = false;
                detail = format!("p={p} structured instance {i}");
            }
        }
    }
    checks.push(CheckLine {
        name: "uncertainty/support-bound".into(),
        pass: bound_ok,
        detail: if bound_ok {
            format!("{checked} instances")
        } else {
            detail
        },
    });

    // modulated dimension formula, exhaustive over Z_7 subsets
    let g7 = GroupSpec::cyclic(7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 7000));
    let mut dim_ok = true;
    let mut dim_detail = String::new();
    let mut dim_checked = 0usize;
    for supp_size in 1..=7usize {
        for _ in 0..20 {
            let supp = SetMask::random(g7.clone(), supp_size, rng.random::<u64>())?;
            let mut psi = FuncC::zeros(g7.clone(), Side::Time);
            for e in supp.elements() {
                psi.set(
                    e,
                    Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0)),
                );
            }
            for s_bits in 1usize..(1 << 7) {
                let idx: Vec<usize> = (0..7).filter(|i| s_bits >> i & 1 == 1).collect();
                let mask = SetMask::from_indices(g7.clone(), &idx)?;
                let (rank, expected) = modulated_dimension(&psi, &mask)?;
                dim_checked += 1;
                if rank != expected {
                    dim_ok = false;
                    dim_detail =
                        format!("supp={supp_size} S={}: rank {rank} != {expected}", mask.descriptor());
                }
            }
        }
    }
    checks.push(CheckLine {
        name: "uncertainty/modulated-dimension".into(),
        pass: dim_ok,
        detail: if dim_ok {
            format!("{dim_checked} instances over Z_7")
        } else {
            dim_detail
        },
    });

    // minimal-support bases from random families
    let mut basis_ok = true;
    let mut basis_detail = String::new();
    for rep in 0..20 {
        let card = 2 + rep % 5;
        let mask = SetMask::random(g7.clone(), card, rng.random::<u64>())?;
        let fam_size = 1 + rng.random_range(0..card);
        let family: Vec<FuncC> = (0..fam_size)
            .map(|_| {
                let mut f = FuncC::zeros(g7.clone(), Side::Time);
                for e in mask.elements() {
                    f.set(
                        e,
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    );
                }
                f
            })
            .collect();
        match min_support_basis(&mask, &family) {
            Ok(basis) => {
                if basis.rank == card {
                    // full rank must return the delta basis
                    for (f, e) in basis.functions.iter().zip(mask.elements()) {
                        if (f.at(e) - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
                            basis_ok = false;
                            basis_detail = format!("rep {rep}: delta basis expected");
                        }
                    }
                }
            }
            Err(e) => {
                basis_ok = false;
                basis_detail = format!("rep {rep}: {e}");
            }
        }
    }
    checks.push(CheckLine {
        name: "uncertainty/min-support-basis".into(),
        pass: basis_ok,
        detail: if basis_ok {
            "20 random families over Z_7".into()
        } else {
            basis_detail
        },
    });

    // constructive eigenbases over Z_5 and Z_7
    let mut eig_ok = true;
    let mut eig_detail = String::new();
    let mut worst_residual = 0.0f64;
    for p in [5usize, 7] {
        let g = GroupSpec::cyclic(p)?;
        for i in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 8000 + p as u64 * 100 + i));
            let s = SetMask::random(g.clone(), 1 + (i as usize % (p - 1)), rng.random::<u64>())?;
            let weight = FuncC::from_values(
                g.clone(),
                (0..p)
                    .map(|_| Complex64::new(rng.random_range(0.2..1.5), 0.0))
                    .collect(),
                Side::Time,
            )?;
            for case in [EigenbasisCase::WindowNonneg, EigenbasisCase::MultiplierPositive] {
                let rep = constructive_eigenbasis(case, &s, &weight)?;
                worst_residual = worst_residual.max(rep.max_residual);
                if !rep.pass {
                    eig_ok = false;
                    eig_detail = format!("p={p} i={i} {case:?}: rank {}", rep.rank);
                }
            }
        }
    }
    checks.push(CheckLine {
        name: "uncertainty/constructive-eigenbasis".into(),
        pass: eig_ok,
        detail: if eig_ok {
            format!("80 instances, max residual {worst_residual:.3e}")
        } else {
            eig_detail
        },
    });
    Ok(())
}

/// The standard budgeted sweep plus the eigenvalue-statistics battery and a
/// sparsification run (report-only).
fn inequalities_suite(
    cfg: &SuiteConfig,
    checks: &mut Vec<CheckLine>,
    reports: &mut Vec<InequalityReport>,
) -> Result<()> {
    let swept = standard_sweep(cfg.seed, cfg.budget)?;
    let violations = swept.iter().filter(|r| !r.pass).count();
    let max_ratio = swept.iter().map(|r| r.ratio).fold(0.0, f64::max);
    checks.push(CheckLine {
        name: "inequalities/standard-sweep-budget".into(),
        pass: violations == 0,
        detail: format!(
            "{} records, max ratio {:.4}, budget {}",
            swept.len(),
            max_ratio,
            cfg.budget
        ),
    });
    reports.extend(swept);

    // eigenvalue statistics over Z_13 and Z_64
    let mut stats_ok = true;
    let mut stats_detail = String::new();
    let mut count = 0usize;
    for (spec, instances) in [("13", 50usize), ("64", 50)] {
        let g = GroupSpec::parse(spec)?;
        for i in 0..instances {
            let mut rng =
                ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 9000 + g.order() as u64 + i as u64));
            let size = 2 + rng.random_range(0..g.order() / 2);
            let s = SetMask::random(g.clone(), size, rng.random::<u64>())?;
            let lambda = random_dissociated(&g, &mut rng);
            match eig_stats(&lambda, &s, 1.0) {
                Ok(_) => count += 1,
                Err(e) => {
                    stats_ok = false;
                    stats_detail = format!("{spec} instance {i}: {e}");
                }
            }
        }
    }
    checks.push(CheckLine {
        name: "inequalities/eig-stats-trace-identities".into(),
        pass: stats_ok,
        detail: if stats_ok {
            format!("{count} instances")
        } else {
            stats_detail
        },
    });

    // sparsification experiment, report-only
    let g = GroupSpec::parse("2^6")?;
    let gens = [
        g.from_digits(&[1, 0, 0, 0, 0, 0])?,
        g.from_digits(&[0, 1, 0, 0, 0, 0])?,
        g.from_digits(&[0, 0, 1, 0, 0, 0])?,
        g.from_digits(&[0, 0, 0, 1, 0, 0])?,
    ];
    let p = crate::dissociation::subspace(&g, &gens)?;
    let lam = SetMask::from_elements(g.clone(), &gens);
    let rep = sparsify_cover(&p, &lam, p.cardinality() as u32, 1.0, 200, cfg.seed)?;
    checks.push(CheckLine {
        name: "inequalities/sparsify-cover-report".into(),
        pass: true,
        detail: format!(
            "p_keep={:.3}, coverage {:.2} [{:.2},{:.2}], mean |S'|/(p|S|)={:.2}",
            rep.p_keep, rep.frequency, rep.ci_low, rep.ci_high, rep.mean_size_ratio
        ),
    });
    Ok(())
}
