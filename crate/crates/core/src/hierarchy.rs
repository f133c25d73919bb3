//! Generalized minimum poset weights `d_r^P(C)`.
//!
//! Two independent routes: [`d_r_oracle`] minimizes `wt_P(D)` over every
//! r-dimensional subcode `D`, and [`d_r_theorem2`] minimizes `|J|` over the
//! ideals `J` with `|J| - ρ⊥(J) >= r`. The test suite checks that they agree.

use serde::Serialize;

use crate::code::{Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matroid::RankProfile;
use crate::poset::{mask_elements, Ideal, Poset};
use crate::subspace::{for_each_rref, gaussian_binomial};
use crate::{popcount, Mask};

/// Oracle caps: `q^k` and the number of r-dimensional subspaces.
pub const ORACLE_SPACE_CAP: u128 = 1 << 16;
pub const ORACLE_SUBSPACE_CAP: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Theorem2,
    Bruteforce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Theorem2 => "theorem2",
            Method::Bruteforce => "bruteforce",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem2" => Ok(Method::Theorem2),
            "bruteforce" | "oracle" => Ok(Method::Bruteforce),
            _ => Err(Error::Invalid(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult<E> {
    pub weight: usize,
    /// Basis of a minimizing subcode.
    pub basis: Vec<Codeword<E>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem2Result {
    pub weight: usize,
    /// Smallest-mask ideal attaining the minimum.
    pub witness: Ideal,
    /// Whether the witness has `|J| - ρ⊥(J) = r` exactly.
    pub equality: bool,
    /// Minimum of `|J|` over ideals with `|J| - ρ⊥(J) = r`, if any.
    pub weight_eq: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// 1-indexed elements of a minimizing ideal.
    Ideal { elements: Vec<usize> },
    /// Encoded basis rows of a minimizing subcode.
    Subcode { basis: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightHierarchy {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub poset_id: String,
    /// `d_1, ..., d_k`.
    pub weights: Vec<usize>,
    pub method: Method,
    pub witnesses: Vec<Witness>,
}

/// Minimum of `weight(supp(D))` over r-dimensional subcodes `D`.
///
/// Shared by the poset oracle and its Hamming specialization.
pub fn min_over_subcodes<F: Field>(
    code: &LinearCode<F>,
    r: usize,
    weight: impl Fn(Mask) -> usize,
) -> Result<OracleResult<F::Elem>> {
    let k = code.k();
    if r == 0 || r > k {
        return Err(Error::Invalid(format!("r = {r} outside 1..={k}")));
    }
    let space = code.size();
    if space > ORACLE_SPACE_CAP {
        return Err(Error::CapExceeded {
            what: "oracle q^k",
            value: space,
            cap: ORACLE_SPACE_CAP,
        });
    }
    let subspaces = gaussian_binomial(k, r, code.q());
    if subspaces > ORACLE_SUBSPACE_CAP {
        return Err(Error::CapExceeded {
            what: "oracle subspace count",
            value: subspaces,
            cap: ORACLE_SUBSPACE_CAP,
        });
    }

    // support of m·G for every message m, indexed by base-q value
    // (first symbol least significant, as in `LinearCode::codewords`)
    let f = code.field();
    let q = code.q() as usize;
    let supports: Vec<Mask> = code.codewords()?.map(|u| u.support()).collect();
    let index = |m: &[F::Elem]| m.iter().rev().fold(0usize, |acc, &e| acc * q + f.value(e) as usize);

    let mut best: Option<(usize, Vec<Vec<F::Elem>>)> = None;
    for_each_rref(f, k, r, |rows| {
        let supp = rows.iter().fold(0, |acc, m| acc | supports[index(m)]);
        let w = weight(supp);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, rows.to_vec()));
        }
    });
    let (weight, rows) = best.expect("at least one subspace for 1 <= r <= k");
    Ok(OracleResult {
        weight,
        basis: rows.iter().map(|m| code.encode(m)).collect(),
    })
}

/// `d_r^P(C)` straight from the definition.
pub fn d_r_oracle<F: Field>(code: &LinearCode<F>, poset: &Poset, r: usize) -> Result<OracleResult<F::Elem>> {
    check_sizes(code.n(), poset)?;
    min_over_subcodes(code, r, |supp| popcount(poset.closure_mask(supp)))
}

/// Wei's r-th generalized Hamming weight, from the definition with `|supp(D)|`.
pub fn generalized_hamming_weight<F: Field>(code: &LinearCode<F>, r: usize) -> Result<usize> {
    Ok(min_over_subcodes(code, r, popcount)?.weight)
}

fn check_sizes(n: usize, poset: &Poset) -> Result<()> {
    if poset.n() != n {
        return Err(Error::Dimension(format!("poset size {} ≠ code length {n}", poset.n())));
    }
    Ok(())
}

/// `(ideal, |J| - ρ⊥(J))` for every ideal, ascending by mask.
fn ideal_dimensions<F: Field>(profile: &RankProfile<'_, F>, poset: &Poset) -> Vec<(Ideal, usize)> {
    poset
        .enumerate_ideals(None)
        .into_iter()
        .map(|j| (j, j.size().saturating_sub(profile.rho_perp(j.mask()))))
        .collect()
}

fn theorem2_from(dims: &[(Ideal, usize)], r: usize) -> Option<Theorem2Result> {
    let mut best: Option<(Ideal, usize)> = None;
    let mut best_eq: Option<usize> = None;
    for &(j, dim) in dims {
        if dim >= r && best.is_none_or(|(b, _)| j.size() < b.size()) {
            best = Some((j, dim));
        }
        if dim == r && best_eq.is_none_or(|b| j.size() < b) {
            best_eq = Some(j.size());
        }
    }
    best.map(|(witness, dim)| Theorem2Result {
        weight: witness.size(),
        witness,
        equality: dim == r,
        weight_eq: best_eq,
    })
}

/// `d_r^P(C) = min { |J| : J ideal, |J| - ρ⊥(J) >= r }`.
///
/// Only ideals are scanned: `<J>` is an ideal of the same closure size whose
/// shortened code contains `C^J`. Ties go to the smallest mask.
pub fn d_r_theorem2<F: Field>(profile: &RankProfile<'_, F>, poset: &Poset, r: usize) -> Result<Theorem2Result> {
    check_sizes(profile.n(), poset)?;
    let k = profile.k();
    if r == 0 || r > k {
        return Err(Error::Invalid(format!("r = {r} outside 1..={k}")));
    }
    theorem2_from(&ideal_dimensions(profile, poset), r)
        .ok_or_else(|| Error::TheoremViolation(format!("no ideal J with |J| - ρ⊥(J) >= {r}")))
}

/// `d_1 .. d_k`, checked for strict monotonicity and `r <= d_r <= n - k + r`.
pub fn full_hierarchy<F: Field>(
    profile: &RankProfile<'_, F>,
    poset: &Poset,
    method: Method,
) -> Result<WeightHierarchy> {
    let code = profile.code();
    check_sizes(code.n(), poset)?;
    let (n, k) = (code.n(), code.k());
    let mut weights = Vec::with_capacity(k);
    let mut witnesses = Vec::with_capacity(k);
    match method {
        Method::Theorem2 => {
            let dims = ideal_dimensions(profile, poset);
            for r in 1..=k {
                let t = theorem2_from(&dims, r)
                    .ok_or_else(|| Error::TheoremViolation(format!("no ideal J with |J| - ρ⊥(J) >= {r}")))?;
                if !t.equality || t.weight_eq != Some(t.weight) {
                    return Err(Error::TheoremViolation(format!(
                        "r = {r}: minimum over |J| - ρ⊥(J) >= r is {} but over = r is {:?}",
                        t.weight, t.weight_eq
                    )));
                }
                weights.push(t.weight);
                witnesses.push(Witness::Ideal {
                    elements: mask_elements(t.witness.mask()),
                });
            }
        }
        Method::Bruteforce => {
            for r in 1..=k {
                let o = d_r_oracle(code, poset, r)?;
                weights.push(o.weight);
                let f = code.field();
                witnesses.push(Witness::Subcode {
                    basis: o
                        .basis
                        .iter()
                        .map(|u| u.coords().iter().map(|&e| f.value(e)).collect())
                        .collect(),
                });
            }
        }
    }
    let h = WeightHierarchy {
        n,
        k,
        q: code.q(),
        poset_id: poset.digest(),
        weights,
        method,
        witnesses,
    };
    h.check()?;
    Ok(h)
}

impl WeightHierarchy {
    /// Strictly increasing, and `r <= d_r <= n - k + r` for each r.
    pub fn check(&self) -> Result<()> {
        for (i, &d) in self.weights.iter().enumerate() {
            let r = i + 1;
            if d < r || d > self.n - self.k + r {
                return Err(Error::TheoremViolation(format!(
                    "d_{r} = {d} outside [{r}, {}]",
                    self.n - self.k + r
                )));
            }
            if i > 0 && self.weights[i - 1] >= d {
                return Err(Error::TheoremViolation(format!(
                    "hierarchy not strictly increasing: d_{} = {} >= d_{r} = {d}",
                    r - 1,
                    self.weights[i - 1]
                )));
            }
        }
        Ok(())
    }
}

/// `A = {d_r^P(C)}` and `B = {n + 1 - d_s^{P~}(C⊥)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityPartition {
    pub n: usize,
    pub k: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl DualityPartition {
    /// `A ∩ B = ∅`, `A ∪ B = [n]`, `|A| = k`, `|B| = n - k`.
    pub fn check(&self) -> Result<()> {
        let mut hits = vec![0u32; self.n + 1];
        for &x in self.a.iter().chain(&self.b) {
            if x == 0 || x > self.n {
                return Err(Error::TheoremViolation(format!("{x} outside [1, {}]", self.n)));
            }
            hits[x] += 1;
        }
        if self.a.len() != self.k || self.b.len() != self.n - self.k {
            return Err(Error::TheoremViolation(format!(
                "|A| = {}, |B| = {} for n = {}, k = {}",
                self.a.len(),
                self.b.len(),
                self.n,
                self.k
            )));
        }
        if let Some(x) = (1..=self.n).find(|&x| hits[x] != 1) {
            return Err(Error::TheoremViolation(format!(
                "{x} appears {} times in A ∪ B",
                hits[x]
            )));
        }
        Ok(())
    }

    pub fn holds(&self) -> bool {
        self.check().is_ok()
    }
}

/// Hierarchies of `C` under `P` and of `C⊥` under the dual poset.
///
/// The partition itself is returned unchecked so callers can report it;
/// use [`DualityPartition::check`].
pub fn duality_partition<F: Field>(code: &LinearCode<F>, poset: &Poset, method: Method) -> Result<DualityPartition> {
    check_sizes(code.n(), poset)?;
    let (n, k) = (code.n(), code.k());
    if k >= n {
        return Err(Error::Invalid(format!(
            "duality needs 1 <= k <= n - 1, got k = {k}, n = {n}"
        )));
    }
    let dual = code.dualize()?;
    let a = full_hierarchy(&RankProfile::new(code), poset, method)?.weights;
    let b = full_hierarchy(&RankProfile::new(&dual), &poset.dual(), method)?
        .weights
        .iter()
        .map(|d| n + 1 - d)
        .collect();
    Ok(DualityPartition { n, k, a, b })
}
