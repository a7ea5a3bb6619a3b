//! Per-inequality evaluators. Each takes a concrete instance, computes the
//! left side and the constant-stripped right side, and returns a report (or
//! a bundle, when an inequality has several variants/branches). Exact
//! cross-checks embedded in an evaluator are hard assertions: a mismatch is
//! an error, not a failed report.
//!
//! `log` is base two throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dissociation::{greedy_dissociated, is_dissociated, ScanOrder, SetMask};
use crate::error::{Error, Result};
use crate::fourier::{convolve, convolve_power, dft, idft, inner, reflect, FuncC, Side};
use crate::operators::{OperatorSpec, RestrictedOperator};

use super::reports::InequalityReport;

fn require_dissociated(lambda: &SetMask) -> Result<()> {
    if !is_dissociated(lambda)?.is_dissociated() {
        return Err(Error::Precondition(format!(
            "set {} is not dissociated",
            lambda.descriptor()
        )));
    }
    Ok(())
}

fn require_supported(f: &FuncC, s: &SetMask, what: &str) -> Result<()> {
    let scale = f.max_abs().max(1.0);
    for x in f.group().elements() {
        if !s.contains(x) && f.at(x).norm() > 1e-12 * scale {
            return Err(Error::Precondition(format!(
                "{what} must be supported on {}",
                s.descriptor()
            )));
        }
    }
    Ok(())
}

fn identity_check(name: &str, err: f64, tol: f64) -> Result<()> {
    if err <= tol {
        Ok(())
    } else {
        Err(Error::IdentityCheck {
            name: name.to_string(),
            err,
            tol,
        })
    }
}

/// Rudin's moment inequality for coefficients on a dissociated set:
/// `(1/N) sum_x |sum_{xi in L} a_xi e(xi.x)|^p <= (C sqrt p)^p (sum |a|^2)^(p/2)`.
///
/// `rhs_core` is `p^(p/2) (sum |a|^2)^(p/2)`; the empirical constant for one
/// instance is `ratio^(1/p)`.
pub fn rudin_moment(
    lambda: &SetMask,
    coeffs: &FuncC,
    p: u32,
    budget: f64,
    seed: u64,
) -> Result<InequalityReport> {
    if p < 2 {
        return Err(Error::Precondition("moment order p must be >= 2".into()));
    }
    require_dissociated(lambda)?;
    require_supported(coeffs, lambda, "coefficient function")?;
    let n = lambda.group().order() as f64;

    // g(x) = sum_xi a(xi) e(xi.x) is the reflected forward transform
    let g = reflect(&dft(coeffs));
    let lhs: f64 = g
        .values()
        .iter()
        .map(|v| {
            let m = v.norm_sqr();
            if p.is_multiple_of(2) {
                m.powi((p / 2) as i32)
            } else {
                m.powf(p as f64 / 2.0)
            }
        })
        .sum::<f64>()
        / n;

    let energy: f64 = coeffs.norm2_sq();
    let rhs_core = (p as f64).powi(p as i32 / 2)
        * if p.is_multiple_of(2) {
            energy.powi((p / 2) as i32)
        } else {
            (p as f64).sqrt() * energy.powf(p as f64 / 2.0)
        };

    let instance = format!(
        "group={};lam={};a={};p={}",
        lambda.group().spec_string(),
        lambda.descriptor(),
        coeffs.descriptor(),
        p
    );
    Ok(InequalityReport::build(
        "rudin", instance, lhs, rhs_core, None, budget, seed,
    ))
}

/// Chang-type spectral energy bound: for `f` supported on `S` and a
/// dissociated `L`, `sum_{xi in L} |f^(xi)|^2 <= C |S| ||f||^2 log(1/delta)`.
/// `f` defaults to the characteristic function of `S`.
pub fn chang(
    lambda: &SetMask,
    s: &SetMask,
    f: Option<&FuncC>,
    budget: f64,
    seed: u64,
) -> Result<InequalityReport> {
    require_dissociated(lambda)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let default_f;
    let fv = match f {
        Some(f) => {
            require_supported(f, s, "f")?;
            f
        }
        None => {
            default_f = s.indicator();
            &default_f
        }
    };
    let fh = dft(fv);
    let lhs: f64 = lambda.elements().iter().map(|&x| fh.at(x).norm_sqr()).sum();
    let delta = s.density();
    let rhs_core = s.cardinality() as f64 * fv.norm2_sq() * (1.0 / delta).log2();
    let instance = format!(
        "group={};lam={};S={};f={}",
        s.group().spec_string(),
        lambda.descriptor(),
        s.descriptor(),
        f.map(|f| f.descriptor()).unwrap_or_else(|| "S".into())
    );
    Ok(InequalityReport::build(
        "chang", instance, lhs, rhs_core, None, budget, seed,
    ))
}

/// Top-eigenvalue bounds for the restriction of a real multiplier `phi` to a
/// dissociated support: up to three variants.
///
/// - `norm1` (always): `|mu_1| <= C ||phi||_1 (log(N ||phi||_inf / ||phi||_1) + 1)`,
/// - `peak` (when `|phi(0)| = ||phi||_inf >= ||phi_0||_1`): `C |phi(0)| log N`,
/// - `punctured` (when `|phi(0)| = ||phi||_inf < ||phi_0||_1`):
///   `C ||phi_0||_1 (log(N ||phi||_inf / ||phi_0||_1) + 1)`,
///
/// where `phi_0` is `phi` with the value at zero removed. Exactly one of
/// `peak`/`punctured` applies whenever zero attains the max.
pub fn mu1_bound(
    lambda: &SetMask,
    phi: &FuncC,
    budget: f64,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    require_dissociated(lambda)?;
    let scale = phi.max_abs();
    if scale == 0.0 {
        return Err(Error::Precondition("phi must be non-zero".into()));
    }
    let im_max = phi.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if im_max > 1e-12 * scale {
        return Err(Error::Precondition("phi must be real-valued".into()));
    }

    let group = phi.group();
    let n = group.order() as f64;
    let restricted = RestrictedOperator::new(lambda, phi)?;
    let evs = restricted.eigh()?.eigenvalues;
    let lhs = evs[0].abs();

    let l1 = phi.norm1();
    let linf = phi.norm_inf();
    let at0 = phi.at(group.zero()).norm();
    let l1_punctured = (l1 - at0).max(0.0);

    let instance = format!(
        "group={};lam={};phi={}",
        group.spec_string(),
        lambda.descriptor(),
        phi.descriptor()
    );

    let mut out = Vec::new();
    let rhs30 = l1 * ((n * linf / l1).log2() + 1.0);
    out.push(InequalityReport::build(
        "mu1",
        instance.clone(),
        lhs,
        rhs30,
        Some("norm1"),
        budget,
        seed,
    ));

    if at0 >= linf {
        if at0 >= l1_punctured {
            let rhs31 = at0 * n.log2();
            out.push(InequalityReport::build(
                "mu1",
                instance,
                lhs,
                rhs31,
                Some("peak"),
                budget,
                seed,
            ));
        } else {
            let rhs32 = l1_punctured * ((n * linf / l1_punctured).log2() + 1.0);
            out.push(InequalityReport::build(
                "mu1",
                instance,
                lhs,
                rhs32,
                Some("punctured"),
                budget,
                seed,
            ));
        }
    }
    Ok(out)
}

/// Higher-moment generalization of the Chang bound:
/// `sum_{xi in L} |S^(xi)|^(l+1) <= C |S| (sum_{xi != 0} |S^(xi)|^(2l))^(1/2) log^(1/2)(1/delta)`.
///
/// The left side is recomputed through the proof's bilinear-form route
/// (convolution preimages paired against the windowed multiplier operator)
/// and the two routes must agree to 1e-8 relative.
pub fn higher_moment(
    lambda: &SetMask,
    s: &SetMask,
    l: usize,
    budget: f64,
    seed: u64,
) -> Result<InequalityReport> {
    if l < 2 {
        return Err(Error::Precondition("l must be >= 2".into()));
    }
    require_dissociated(lambda)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = s.group().clone();
    let sh = dft(&s.indicator());
    let lhs: f64 = lambda
        .elements()
        .iter()
        .map(|&x| sh.at(x).norm().powi(l as i32 + 1))
        .sum();

    let offzero: f64 = group
        .elements()
        .skip(1)
        .map(|x| sh.at(x).norm_sqr().powi(l as i32))
        .sum();
    let delta = s.density();
    let rhs_core = s.cardinality() as f64 * offzero.sqrt() * (1.0 / delta).log2().sqrt();

    // independent route: sigma = <T u, v> with the proof's preimage u
    let sigma = higher_moment_form(lambda, s, l)?;
    identity_check(
        "higher-moment bilinear route",
        (sigma - Complex64::new(lhs, 0.0)).norm(),
        1e-8 * lhs.max(1.0),
    )?;

    let instance = format!(
        "group={};lam={};S={};l={}",
        group.spec_string(),
        lambda.descriptor(),
        s.descriptor(),
        l
    );
    Ok(InequalityReport::build(
        "higher-moment",
        instance,
        lhs,
        rhs_core,
        None,
        budget,
        seed,
    ))
}

/// The bilinear form `<T u, S>` with window `S` and multiplier `L`, where
/// `u` is built so the form telescopes to `sum_{xi in L} |S^(xi)|^(l+1)`:
/// with `f = S - delta` (mean-removed indicator) and `F` the function whose
/// transform is `|S^|`,
///
/// - `l = 2`:          `u = F * f`,
/// - `l = 2k, k >= 2`: `u = F * f^{*k} * (f^c)^{*(k-1)}`,
/// - `l = 2k + 1`:     `u = f^{*(k+1)} * (f^c)^{*k}`.
fn higher_moment_form(lambda: &SetMask, s: &SetMask, l: usize) -> Result<Complex64> {
    let group = s.group().clone();
    let delta = s.density();
    let ind = s.indicator();
    let f = ind.sub(&FuncC::constant(
        group.clone(),
        Complex64::new(delta, 0.0),
        Side::Time,
    ))?;
    let sh = dft(&ind);
    let abs_sh = FuncC::from_values(
        group.clone(),
        sh.values()
            .iter()
            .map(|v| Complex64::new(v.norm(), 0.0))
            .collect(),
        Side::Frequency,
    )?;
    let cap_f = idft(&abs_sh);

    let u = if l == 2 {
        convolve(&cap_f, &f)?
    } else if l.is_multiple_of(2) {
        let k = l / 2;
        let left = convolve(&cap_f, &convolve_power(&f, k)?)?;
        convolve(&left, &convolve_power(&reflect(&f), k - 1)?)?
    } else {
        let k = (l - 1) / 2;
        convolve(
            &convolve_power(&f, k + 1)?,
            &convolve_power(&reflect(&f), k)?,
        )?
    };

    let op = OperatorSpec::t(lambda.indicator(), ind.clone())?;
    inner(&op.apply(&u)?, &ind)
}

/// Branch names for [`conv_energy`].
const CONV_BRANCHES: [&str; 5] = ["all-freq", "product", "offzero", "iterated", "pair"];

/// Convolution-energy bounds on a dissociated set: for sets `S_1..S_l`,
/// `sum_{x in L} (S_1 * ... * S_l)^2(x)` against five constant-stripped right
/// sides. A branch whose precondition fails is skipped, not failed.
///
/// - `all-freq`: `(|S_l|/N) (sum_x prod_{j<l} |S_j^(x)|^2) log N`,
/// - `product` (when `prod |S_j|^2 >= sum_{x!=0} prod |S_j^|^2`):
///   `(|S_l|/N) (prod_{j<l} |S_j|^2) log N`,
/// - `offzero` (reverse comparison): `(|S_l|/N) (sum_{x!=0} prod |S_j^|^2) log N`,
/// - `iterated` (equal leading sets `S`, `|S| <= N/2`,
///   `|S|^(2l-2) <= sum_{x!=0} |S^|^(2l-2)`):
///   `(l |S_l|/N) (sum_{x!=0} |S^(x)|^(2l-2)) log |S|`,
/// - `pair` (`l = 2`): `|S_1||S_2| log(min(|S_1|, |S_2|))`.
pub fn conv_energy(
    lambda: &SetMask,
    sets: &[SetMask],
    budget: f64,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let l = sets.len();
    if l < 2 {
        return Err(Error::Precondition("need at least two sets".into()));
    }
    require_dissociated(lambda)?;
    for s in sets {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    let group = sets[0].group().clone();
    let n = group.order() as f64;

    let mut conv = sets[0].indicator();
    for s in &sets[1..] {
        conv = convolve(&conv, &s.indicator())?;
    }
    let lhs: f64 = lambda
        .elements()
        .iter()
        .map(|&x| conv.at(x).re.powi(2))
        .sum();

    let hats: Vec<FuncC> = sets.iter().map(|s| dft(&s.indicator())).collect();
    let prod_hat: Vec<f64> = group
        .elements()
        .map(|x| hats[..l - 1].iter().map(|h| h.at(x).norm_sqr()).product())
        .collect();
    let sum_all: f64 = prod_hat.iter().sum();
    let sum_offzero: f64 = prod_hat.iter().skip(1).sum();
    let prod_cards: f64 = sets[..l - 1]
        .iter()
        .map(|s| (s.cardinality() as f64).powi(2))
        .product();
    let last_card = sets[l - 1].cardinality() as f64;

    let sizes: Vec<String> = sets.iter().map(|s| s.descriptor()).collect();
    let instance = format!(
        "group={};lam={};sets=[{}];l={}",
        group.spec_string(),
        lambda.descriptor(),
        sizes.join("|"),
        l
    );

    let push = |out: &mut Vec<InequalityReport>, variant: &str, rhs: f64| {
        out.push(InequalityReport::build(
            "conv-energy",
            instance.clone(),
            lhs,
            rhs,
            Some(variant),
            budget,
            seed,
        ));
    };

    // branch comparisons carry numeric slack so exact spectral ties (e.g.
    // half-group intervals) fire both sides
    let slack = 1e-9 * prod_cards.max(sum_offzero).max(1.0);
    let mut out = Vec::new();
    push(&mut out, CONV_BRANCHES[0], (last_card / n) * sum_all * n.log2());
    if prod_cards >= sum_offzero - slack {
        push(
            &mut out,
            CONV_BRANCHES[1],
            (last_card / n) * prod_cards * n.log2(),
        );
    }
    if prod_cards <= sum_offzero + slack {
        push(
            &mut out,
            CONV_BRANCHES[2],
            (last_card / n) * sum_offzero * n.log2(),
        );
    }
    let leading_equal = sets[..l - 1].windows(2).all(|w| w[0] == w[1]);
    if leading_equal {
        let s = &sets[0];
        let card = s.cardinality() as f64;
        let pow_sum: f64 = group
            .elements()
            .skip(1)
            .map(|x| hats[0].at(x).norm_sqr().powi(l as i32 - 1))
            .sum();
        let mslack = 1e-9 * pow_sum.max(1.0);
        if 2.0 * card <= n && card.powi(2 * l as i32 - 2) <= pow_sum + mslack {
            push(
                &mut out,
                CONV_BRANCHES[3],
                (l as f64 * last_card / n) * pow_sum * card.log2(),
            );
        }
    }
    if l == 2 {
        let min_card = sets[0].cardinality().min(sets[1].cardinality()) as f64;
        push(
            &mut out,
            CONV_BRANCHES[4],
            sets[0].cardinality() as f64 * sets[1].cardinality() as f64 * min_card.log2(),
        );
    }
    Ok(out)
}

/// Level-set form of the pair bound: the largest greedy dissociated subset of
/// `{x : (S_1 * S_2)(x) >= r}` against
/// `r^{-2} |S_1||S_2| log(min(|S_1|, |S_2|))`.
pub fn level_set_bound(
    s1: &SetMask,
    s2: &SetMask,
    r: u32,
    budget: f64,
    seed: u64,
) -> Result<InequalityReport> {
    if r < 1 {
        return Err(Error::Precondition("level r must be >= 1".into()));
    }
    let conv = convolve(&s1.indicator(), &s2.indicator())?;
    let group = s1.group().clone();
    let level: Vec<usize> = group
        .elements()
        .filter(|&x| conv.at(x).re >= r as f64 - 1e-6)
        .map(|x| x.0)
        .collect();
    let level_mask = SetMask::from_indices(group.clone(), &level)?;
    let lambda = greedy_dissociated(&level_mask, ScanOrder::Ascending);
    let lhs = lambda.cardinality() as f64;
    let min_card = s1.cardinality().min(s2.cardinality()) as f64;
    let rhs_core = (s1.cardinality() as f64) * (s2.cardinality() as f64) * min_card.log2()
        / (r as f64).powi(2);
    let instance = format!(
        "group={};S1={};S2={};r={};level={};lam={}",
        group.spec_string(),
        s1.descriptor(),
        s2.descriptor(),
        r,
        level_mask.cardinality(),
        lambda.descriptor()
    );
    Ok(InequalityReport::build(
        "level-set",
        instance,
        lhs,
        rhs_core,
        None,
        budget,
        seed,
    ))
}

/// Bilinear frequency-side bound
/// `|sum_{z in L} conj(S^(z)) (S^ * (S^ . L))(z)| <= C |S|^3 log^2(1/delta)`.
///
/// The left side is recomputed as the quadratic form `<M^2 1_S, 1_S>` of the
/// restricted operator `M` with support `S` and multiplier `L`; the two
/// routes must agree to 1e-8 relative.
pub fn bilinear_bound(
    lambda: &SetMask,
    s: &SetMask,
    budget: f64,
    seed: u64,
) -> Result<InequalityReport> {
    require_dissociated(lambda)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = s.group().clone();
    let sh = dft(&s.indicator());
    let masked = crate::fourier::pointwise(&lambda.indicator(), &sh)?;
    let conv = convolve(&sh, &masked)?;
    let form: Complex64 = lambda
        .elements()
        .iter()
        .map(|&z| sh.at(z).conj() * conv.at(z))
        .sum();
    let lhs = form.norm();

    // quadratic-form route through the restricted operator
    let restricted = RestrictedOperator::new(s, &lambda.indicator())?;
    let ones = vec![Complex64::new(1.0, 0.0); restricted.dim()];
    let mv = restricted.matrix().mat_vec(&ones)?;
    let mmv = restricted.matrix().mat_vec(&mv)?;
    let form2: Complex64 = mmv.iter().sum();
    identity_check(
        "bilinear quadratic-form route",
        (form - form2).norm(),
        1e-8 * lhs.max(1.0),
    )?;

    let delta = s.density();
    let rhs_core = (s.cardinality() as f64).powi(3) * (1.0 / delta).log2().powi(2);
    let instance = format!(
        "group={};lam={};S={}",
        group.spec_string(),
        lambda.descriptor(),
        s.descriptor()
    );
    Ok(InequalityReport::build(
        "bilinear",
        instance,
        lhs,
        rhs_core,
        None,
        budget,
        seed,
    ))
}

/// Eigenvalue statistics of the restriction with support `L` and multiplier
/// `S(x)`. The two trace identities
/// `sum mu_j = |L||S|` and
/// `sum mu_j^2 = |S|^2 |L| + sum_{l1 != l2} |S^(l1 - l2)|^2`
/// are asserted to 1e-7 relative; the centered square sum and the count of
/// eigenvalues above `tau |S| log(1/delta)` are reported, not asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigStats {
    pub instance: String,
    pub eigenvalues: Vec<f64>,
    pub sum: f64,
    pub sum_sq: f64,
    pub centered_sum_sq: f64,
    pub count_large: usize,
    pub threshold: f64,
}

pub fn eig_stats(lambda: &SetMask, s: &SetMask, tau: f64) -> Result<EigStats> {
    require_dissociated(lambda)?;
    if s.is_empty() || lambda.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = s.group().clone();
    let restricted = RestrictedOperator::new(lambda, &s.indicator())?;
    let evs = restricted.eigh()?.eigenvalues;
    let card_l = lambda.cardinality() as f64;
    let card_s = s.cardinality() as f64;

    let sum: f64 = evs.iter().sum();
    let sum_sq: f64 = evs.iter().map(|v| v * v).sum();
    identity_check(
        "eig-stats trace",
        (sum - card_l * card_s).abs(),
        1e-7 * (card_l * card_s).max(1.0),
    )?;

    let sh = dft(&s.indicator());
    let elems = lambda.elements();
    let mut pair_sum = 0.0f64;
    for &a in &elems {
        for &b in &elems {
            if a != b {
                pair_sum += sh.at(group.sub(a, b)).norm_sqr();
            }
        }
    }
    let closed = card_s * card_s * card_l + pair_sum;
    identity_check(
        "eig-stats square trace",
        (sum_sq - closed).abs(),
        1e-7 * closed.max(1.0),
    )?;

    let delta = s.density();
    let threshold = tau * card_s * (1.0 / delta).log2();
    let centered_sum_sq = evs.iter().map(|v| (v - card_s).powi(2)).sum();
    let count_large = evs.iter().filter(|&&v| v >= threshold).count();
    Ok(EigStats {
        instance: format!(
            "group={};lam={};S={}",
            group.spec_string(),
            lambda.descriptor(),
            s.descriptor()
        ),
        eigenvalues: evs,
        sum,
        sum_sq,
        centered_sum_sq,
        count_large,
        threshold,
    })
}
