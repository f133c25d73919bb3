//! Poset weight distributions `A_{r,P}(C)`.
//!
//! Direct enumeration, the alternating sum over `Λ(I)` for the number of
//! codewords whose support closure is exactly `I`, classification into MDS
//! and Near-MDS poset codes, and the closed forms for those two classes.

use std::collections::HashMap;

use serde::Serialize;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hierarchy::{full_hierarchy, Method};
use crate::matroid::RankProfile;
use crate::poset::{Ideal, Poset};
use crate::{popcount, Mask};

/// Above this many codewords the `A_J(C)` terms switch to the rank formula.
pub const ENUMERATE_DEFAULT_CAP: u128 = 1 << 12;
/// Lengths for which the literal column conditions are evaluated.
const LITERAL_CHECK_MAX_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Enumerate,
    Moebius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistMethod {
    Enumerate,
    Moebius,
    ClosedForm,
}

impl std::str::FromStr for DistMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(DistMethod::Enumerate),
            "moebius" => Ok(DistMethod::Moebius),
            "closed-form" => Ok(DistMethod::ClosedForm),
            _ => Err(Error::Invalid(format!("unknown distribution method '{s}'"))),
        }
    }
}

impl DistMethod {
    pub fn name(self) -> &'static str {
        match self {
            DistMethod::Enumerate => "enumerate",
            DistMethod::Moebius => "moebius",
            DistMethod::ClosedForm => "closed-form",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CodeClass {
    #[serde(rename = "MDS")]
    Mds,
    #[serde(rename = "NMDS")]
    Nmds,
    #[serde(rename = "other")]
    Other,
}

impl std::fmt::Display for CodeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CodeClass::Mds => "MDS",
            CodeClass::Nmds => "NMDS",
            CodeClass::Other => "other",
        })
    }
}

/// The column conditions on `H` that characterize Near-MDS codes in the
/// Hamming case, evaluated over all column sets (not just ideals).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnConditions {
    /// Any `n-k-1` columns of `H` are independent.
    pub any_n_minus_k_minus_1_independent: bool,
    /// Some `n-k` columns of `H` are dependent.
    pub some_n_minus_k_dependent: bool,
    /// Any `n-k+1` columns of `H` have rank `n-k`.
    pub any_n_minus_k_plus_1_full_rank: bool,
}

impl ColumnConditions {
    pub fn all(&self) -> bool {
        self.any_n_minus_k_minus_1_independent && self.some_n_minus_k_dependent && self.any_n_minus_k_plus_1_full_rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: CodeClass,
    pub d1: usize,
    pub d2: Option<usize>,
    /// For MDS/NMDS: whether the rank profile on ideals has the piecewise
    /// shape the closed forms are derived from. `None` for other codes.
    pub profile_facts: Option<bool>,
    /// Reported only; Near-MDS-ness under a poset does not require these.
    pub column_conditions: Option<ColumnConditions>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealCount {
    pub ideal: Ideal,
    /// `|C ∩ S_I|`: codewords whose support closure is exactly `I`.
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistributionReport {
    /// `A_{0,P} .. A_{n,P}`.
    pub counts: Vec<u64>,
    pub method: DistMethod,
    pub classification: Option<ClassReport>,
}

impl DistributionReport {
    /// `Σ A_r = q^k`, `A_0 = 1`, and `A_r = 0` for `0 < r < d_1` when `d_1` is known.
    pub fn check(&self, code_size: u128) -> Result<()> {
        let total: u128 = self.counts.iter().map(|&c| u128::from(c)).sum();
        if total != code_size {
            return Err(Error::TheoremViolation(format!(
                "counts sum to {total}, expected q^k = {code_size}"
            )));
        }
        if self.counts.first() != Some(&1) {
            return Err(Error::TheoremViolation(format!(
                "A_0 = {:?}, expected 1",
                self.counts.first()
            )));
        }
        if let Some(c) = &self.classification {
            if let Some(r) = (1..c.d1.min(self.counts.len())).find(|&r| self.counts[r] != 0) {
                return Err(Error::TheoremViolation(format!(
                    "A_{r} = {} below d_1 = {}",
                    self.counts[r], c.d1
                )));
            }
        }
        Ok(())
    }
}

fn check_sizes(n: usize, poset: &Poset) -> Result<()> {
    if poset.n() != n {
        return Err(Error::Dimension(format!("poset size {} ≠ code length {n}", poset.n())));
    }
    Ok(())
}

fn pow_i128(q: u32, e: usize) -> i128 {
    i128::from(q).pow(e as u32)
}

/// Pascal's triangle up to row `n`.
pub fn binomials(n: usize) -> Vec<Vec<i128>> {
    let mut t = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
    }
    t
}

/// `Σ_{J ∈ Λ(I)} (-1)^{|I| - |J|}`; zero whenever `I` is nonempty.
pub fn lambda_alternating_sum(poset: &Poset, ideal: Ideal) -> Result<i64> {
    let r = ideal.size() as i64;
    Ok(poset
        .lambda_interval(ideal)?
        .iter()
        .map(|j| if (r - j.size() as i64) % 2 == 0 { 1 } else { -1 })
        .sum())
}

/// `|C ∩ S_I|` by enumeration or by
/// `Σ_{J ∈ Λ(I)} (-1)^{|I|-|J|} q^{k - ρ([n] \ J)}`.
pub fn count_exact_support<F: Field>(
    profile: &RankProfile<'_, F>,
    poset: &Poset,
    ideal: Ideal,
    method: CountMethod,
) -> Result<IdealCount> {
    let code = profile.code();
    check_sizes(code.n(), poset)?;
    let ideal = poset.ideal(ideal.mask())?;
    let count = match method {
        CountMethod::Enumerate => code
            .codewords()?
            .filter(|u| poset.closure_mask(u.support()) == ideal.mask())
            .count() as u64,
        CountMethod::Moebius => {
            let k = code.k();
            let mut sum: i128 = 0;
            for j in poset.lambda_interval(ideal)? {
                let rho = profile.rho_complement(j.mask());
                if rho > k {
                    return Err(Error::TheoremViolation(format!("ρ = {rho} exceeds k = {k}")));
                }
                let term = pow_i128(code.q(), k - rho);
                sum += if (ideal.size() - j.size()) % 2 == 0 {
                    term
                } else {
                    -term
                };
            }
            u64::try_from(sum)
                .map_err(|_| Error::TheoremViolation(format!("negative count {sum} for ideal {:#b}", ideal.mask())))?
        }
    };
    Ok(IdealCount { ideal, count })
}

fn default_count_method<F: Field>(code: &LinearCode<F>) -> CountMethod {
    if code.size() <= ENUMERATE_DEFAULT_CAP {
        CountMethod::Enumerate
    } else {
        CountMethod::Moebius
    }
}

/// `A_{r,P}(C)` for every r, by enumeration or as `Σ_{I ∈ Λ^r(P)} |C ∩ S_I|`.
///
/// `ClosedForm` dispatches on the classification and fails for codes that
/// are neither MDS nor Near-MDS.
pub fn distribution<F: Field>(
    profile: &RankProfile<'_, F>,
    poset: &Poset,
    method: DistMethod,
) -> Result<DistributionReport> {
    let code = profile.code();
    check_sizes(code.n(), poset)?;
    let mut counts = vec![0u64; code.n() + 1];
    match method {
        DistMethod::Enumerate => {
            for u in code.codewords()? {
                counts[popcount(poset.closure_mask(u.support()))] += 1;
            }
        }
        DistMethod::Moebius => {
            for ideal in poset.enumerate_ideals(None) {
                counts[ideal.size()] += count_exact_support(profile, poset, ideal, CountMethod::Moebius)?.count;
            }
        }
        DistMethod::ClosedForm => {
            let class = classify(profile, poset)?;
            return match class.class {
                CodeClass::Mds => mds_closed_form(profile, poset),
                CodeClass::Nmds => nmds_closed_form(profile, poset),
                CodeClass::Other => Err(Error::Invalid(format!(
                    "no closed form: code is neither MDS nor NMDS (d1 = {}, d2 = {:?})",
                    class.d1, class.d2
                ))),
            };
        }
    }
    Ok(DistributionReport {
        counts,
        method,
        classification: None,
    })
}

fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = Mask> {
    (0..=crate::poset::full_mask(n)).filter(move |&m| popcount(m) == size)
}

fn column_conditions<F: Field>(profile: &RankProfile<'_, F>) -> Option<ColumnConditions> {
    let (n, k) = (profile.n(), profile.k());
    if n > LITERAL_CHECK_MAX_N || k >= n {
        return None;
    }
    let r = n - k;
    Some(ColumnConditions {
        any_n_minus_k_minus_1_independent: masks_of_size(n, r - 1).all(|a| profile.rho_perp(a) == r - 1),
        some_n_minus_k_dependent: masks_of_size(n, r).any(|a| profile.rho_perp(a) < r),
        any_n_minus_k_plus_1_full_rank: r + 1 > n || masks_of_size(n, r + 1).all(|a| profile.rho_perp(a) == r),
    })
}

/// MDS iff `d_1 = n-k+1`; NMDS iff `d_1 = n-k` and `d_2 = n-k+2`.
///
/// Also evaluates, on every ideal, the rank-profile shape each class implies:
/// `k - ρ(J̄)` piecewise in `|J|` for MDS, and for NMDS both `ρ⊥(J) = |J|`
/// below `n-k`, `ρ⊥(J) = n-k` above it, and the matching `k - ρ(J̄)` shape.
pub fn classify<F: Field>(profile: &RankProfile<'_, F>, poset: &Poset) -> Result<ClassReport> {
    let h = full_hierarchy(profile, poset, Method::Theorem2)?;
    let (n, k) = (profile.n(), profile.k());
    let d1 = h.weights[0];
    let d2 = h.weights.get(1).copied();
    let class = if d1 == n - k + 1 {
        CodeClass::Mds
    } else if n > k && d1 == n - k && d2 == Some(n - k + 2) {
        CodeClass::Nmds
    } else {
        CodeClass::Other
    };

    let profile_facts = match class {
        CodeClass::Other => None,
        CodeClass::Mds => {
            let d = d1;
            Some(poset.enumerate_ideals(None).iter().all(|j| {
                let dim = k - profile.rho_complement(j.mask());
                let want = if j.size() < d { 0 } else { j.size() - d + 1 };
                dim == want
            }))
        }
        CodeClass::Nmds => {
            let d = d1;
            Some(poset.enumerate_ideals(None).iter().all(|j| {
                let s = j.size();
                let rp = profile.rho_perp(j.mask());
                let dim = k - profile.rho_complement(j.mask());
                let rank_ok = (s >= n - k || rp == s) && (s <= n - k || rp == n - k);
                let dim_ok = (s >= d || dim == 0) && (s <= d || dim == s - d);
                rank_ok && dim_ok
            }))
        }
    };

    Ok(ClassReport {
        class,
        d1,
        d2,
        profile_facts,
        column_conditions: column_conditions(profile),
    })
}

fn require(report: &ClassReport, class: CodeClass, n: usize, k: usize) -> Result<()> {
    if report.class == class {
        return Ok(());
    }
    Err(Error::Invalid(match class {
        CodeClass::Mds => format!("code is not MDS: d1 = {} but n-k+1 = {}", report.d1, n - k + 1),
        _ => format!(
            "code is not NMDS: (d1, d2) = ({}, {:?}) but (n-k, n-k+2) = ({}, {})",
            report.d1,
            report.d2,
            n - k,
            n - k + 2
        ),
    }))
}

fn finish(counts: Vec<i128>, class: ClassReport) -> Result<DistributionReport> {
    let counts = counts
        .into_iter()
        .enumerate()
        .map(|(r, c)| u64::try_from(c).map_err(|_| Error::TheoremViolation(format!("closed form gives A_{r} = {c}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistributionReport {
        counts,
        method: DistMethod::ClosedForm,
        classification: Some(class),
    })
}

/// `Σ_{s=0}^{top} (-1)^s C(m, s) (q^{shift-s} - 1)`, empty when `top < 0`.
fn alternating_binomial_sum(binom: &[Vec<i128>], m: usize, top: i64, q: u32, shift: i64) -> i128 {
    (0..=top)
        .map(|s| {
            let c = binom[m].get(s as usize).copied().unwrap_or(0);
            let sign = if s % 2 == 0 { 1 } else { -1 };
            sign * c * (pow_i128(q, (shift - s) as usize) - 1)
        })
        .sum()
}

/// MDS poset codes: `A_{r,P} = Σ_{I ∈ Λ^r} Σ_{s=0}^{r-d} (-1)^s C(|M(I)|, s)(q^{r-d+1-s} - 1)`
/// for `d <= r <= n`.
pub fn mds_closed_form<F: Field>(profile: &RankProfile<'_, F>, poset: &Poset) -> Result<DistributionReport> {
    let (n, k, q) = (profile.n(), profile.k(), profile.code().q());
    let class = classify(profile, poset)?;
    require(&class, CodeClass::Mds, n, k)?;
    let d = class.d1;
    let binom = binomials(n);
    let mut counts = vec![0i128; n + 1];
    counts[0] = 1;
    for (r, slot) in counts.iter_mut().enumerate().skip(d) {
        for ideal in poset.enumerate_ideals(Some(r)) {
            let m = popcount(poset.maximal_elements(ideal)?);
            let span = (r - d) as i64;
            *slot += alternating_binomial_sum(&binom, m, span, q, span + 1);
        }
    }
    finish(counts, class)
}

/// Near-MDS poset codes:
/// `A_{r,P} = Σ_{I ∈ Λ^r} Σ_{s=0}^{r-d-1} (-1)^s C(|M(I)|, s)(q^{r-d-s} - 1)
///          + (-1)^{r-d} Σ_{I ∈ Λ^r} Σ_{J ∈ Λ(I), |J| = d} A_J(C)`
/// for `d <= r <= n`, with `A_J(C) = |C ∩ S_J|` counted directly.
pub fn nmds_closed_form<F: Field>(profile: &RankProfile<'_, F>, poset: &Poset) -> Result<DistributionReport> {
    let (n, k, q) = (profile.n(), profile.k(), profile.code().q());
    let class = classify(profile, poset)?;
    require(&class, CodeClass::Nmds, n, k)?;
    let d = class.d1;
    let method = default_count_method(profile.code());
    let binom = binomials(n);
    let mut a_j: HashMap<Mask, i128> = HashMap::new();
    let mut counts = vec![0i128; n + 1];
    counts[0] = 1;
    for (r, slot) in counts.iter_mut().enumerate().skip(d) {
        let span = (r - d) as i64;
        let sign = if span % 2 == 0 { 1 } else { -1 };
        for ideal in poset.enumerate_ideals(Some(r)) {
            let m = popcount(poset.maximal_elements(ideal)?);
            *slot += alternating_binomial_sum(&binom, m, span - 1, q, span);
            for j in poset.lambda_interval(ideal)?.into_iter().filter(|j| j.size() == d) {
                let term = match a_j.get(&j.mask()) {
                    Some(&t) => t,
                    None => {
                        let t = i128::from(count_exact_support(profile, poset, j, method)?.count);
                        a_j.insert(j.mask(), t);
                        t
                    }
                };
                *slot += sign * term;
            }
        }
    }
    finish(counts, class)
}

/// Hamming special case of the Near-MDS formula:
/// `A_r = C(n,r) Σ_{s=0}^{r-d-1} (-1)^s C(r,s)(q^{r-d-s} - 1) + (-1)^{r-d} C(n-d, r-d) A_d`.
pub fn hamming_nmds_closed_form<F: Field>(profile: &RankProfile<'_, F>) -> Result<DistributionReport> {
    let (n, k, q) = (profile.n(), profile.k(), profile.code().q());
    let anti = Poset::antichain(n)?;
    let class = classify(profile, &anti)?;
    require(&class, CodeClass::Nmds, n, k)?;
    let d = class.d1;
    let method = default_count_method(profile.code());
    let mut a_d: i128 = 0;
    for j in anti.enumerate_ideals(Some(d)) {
        a_d += i128::from(count_exact_support(profile, &anti, j, method)?.count);
    }
    let binom = binomials(n);
    let mut counts = vec![0i128; n + 1];
    counts[0] = 1;
    for (r, slot) in counts.iter_mut().enumerate().skip(d) {
        let span = (r - d) as i64;
        let sign = if span % 2 == 0 { 1 } else { -1 };
        *slot = binom[n][r] * alternating_binomial_sum(&binom, r, span - 1, q, span) + sign * binom[n - d][r - d] * a_d;
    }
    finish(counts, class)
}
