//! Randomized cross-checks of every formula against its brute-force oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{poset_weight, LinearCode};
use crate::distribution::{
    classify, distribution, hamming_nmds_closed_form, mds_closed_form, nmds_closed_form, CodeClass, CountMethod,
    DistMethod,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::hierarchy::{duality_partition, full_hierarchy, generalized_hamming_weight, Method};
use crate::matroid::{RankKind, RankProfile};
use crate::poset::Poset;
use crate::{count_exact_support, Code};

pub const FIELD_ORDERS: [u32; 4] = [2, 3, 4, 5];
pub const MAX_N: usize = 10;
pub const MAX_K: usize = 5;

/// Names of the individual checks, in report order. The three closed-form
/// checks only run on instances of the matching class.
pub const CHECKS: [&str; 12] = [
    "theorem2_vs_oracle",
    "monotonicity_bounds",
    "duality_partition",
    "corank_identity",
    "lemma1g",
    "rank_axioms",
    "exact_support_counts",
    "distribution_methods",
    "hamming_specialization",
    "mds_closed_form",
    "nmds_closed_form",
    "hamming_nmds_closed_form",
];

#[derive(Clone, Debug)]
pub struct Instance {
    pub code: Code,
    pub poset: Poset,
}

impl Instance {
    /// Code file text followed by poset file text.
    pub fn reproducer(&self) -> String {
        format!("# code\n{}# poset\n{}", self.code.to_text(), self.poset.to_text())
    }
}

/// A random instance: q from [`FIELD_ORDERS`], `2 <= n <= 10`,
/// `1 <= k <= min(5, n-1)`, and a random poset.
///
/// Half of the generator matrices are drawn sparse (each entry nonzero with
/// probability 1/3), which pushes `d_1` below the Singleton bound often
/// enough to produce Near-MDS instances alongside the MDS ones.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> Instance {
    loop {
        let q = FIELD_ORDERS[rng.random_range(0..FIELD_ORDERS.len())];
        let n = rng.random_range(2..=MAX_N);
        let k = rng.random_range(1..=MAX_K.min(n - 1));
        let sparse = rng.random_bool(0.5);
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if sparse && !rng.random_ratio(1, 3) {
                            0
                        } else {
                            rng.random_range(0..q)
                        }
                    })
                    .collect()
            })
            .collect();
        let field = FieldSpec::with_order(q).expect("supported order");
        let Ok(code) = LinearCode::from_values(&field, &rows) else {
            continue;
        };
        let poset = Poset::random(n, rng).expect("n within cap");
        return Instance { code, poset };
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub check: &'static str,
    pub detail: String,
    pub reproducer: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub class: CodeClass,
    pub hamming_class: CodeClass,
    pub results: Vec<(&'static str, std::result::Result<(), String>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: BTreeMap<&'static str, Tally>,
    pub mds_instances: usize,
    /// Distinct instances classified Near-MDS.
    pub nmds_instances: usize,
    /// Distinct instances that are Near-MDS in the Hamming metric.
    pub hamming_nmds_instances: usize,
    pub failures: Vec<Failure>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn ok_if(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn flatten<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Run every check on one instance. With `corrupt_rank`, one memoized `ρ⊥`
/// value is falsified first, so at least the corank identity must fail.
pub fn check_instance(inst: &Instance, corrupt_rank: bool) -> InstanceOutcome {
    let code = &inst.code;
    let poset = &inst.poset;
    let (n, k) = (code.n(), code.k());
    let profile = RankProfile::new(code);
    if corrupt_rank {
        let full = code.full();
        profile.poison(RankKind::RhoPerp, full, profile.rho_perp(full) + 1);
    }
    let mut results: Vec<(&'static str, std::result::Result<(), String>)> = Vec::new();

    // hierarchies by both routes
    let h_thm = flatten(full_hierarchy(&profile, poset, Method::Theorem2));
    let h_brute = flatten(full_hierarchy(&profile, poset, Method::Bruteforce));
    results.push((
        "theorem2_vs_oracle",
        match (&h_thm, &h_brute) {
            (Ok(a), Ok(b)) => ok_if(a.weights == b.weights, || {
                format!("theorem2 {:?} vs oracle {:?}", a.weights, b.weights)
            }),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        },
    ));
    results.push((
        "monotonicity_bounds",
        match (&h_thm, &h_brute) {
            (Ok(a), Ok(b)) => flatten(a.check().and_then(|_| b.check())),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        },
    ));

    let dual_check = flatten(duality_partition(code, poset, Method::Theorem2).and_then(|p| p.check()));
    results.push(("duality_partition", dual_check));

    let corank = profile.check_corank_identity();
    results.push((
        "corank_identity",
        ok_if(corank.passed(), || {
            format!(
                "ρ⊥ identity fails at {:?}",
                corank.violation.map(crate::poset::mask_elements)
            )
        }),
    ));

    let lemma = (0..=code.full()).find(|&j| {
        let (a, b, c) = profile.lemma1g(j);
        a != b || b != c
    });
    results.push((
        "lemma1g",
        ok_if(lemma.is_none(), || {
            let j = lemma.unwrap();
            format!("J = {:?}: {:?}", crate::poset::mask_elements(j), profile.lemma1g(j))
        }),
    ));

    let axioms: Vec<_> = [RankKind::Rho, RankKind::RhoPerp]
        .into_iter()
        .map(|kind| profile.check_rank_axioms(kind))
        .filter(|r| !r.passed())
        .collect();
    results.push(("rank_axioms", ok_if(axioms.is_empty(), || format!("{axioms:?}"))));

    // exact-support counts: enumeration tallied once per closure
    let exact = (|| -> std::result::Result<(), String> {
        let mut by_closure: HashMap<u32, u64> = HashMap::new();
        for u in flatten(code.codewords())? {
            *by_closure.entry(poset.closure_mask(u.support())).or_default() += 1;
        }
        for ideal in poset.enumerate_ideals(None) {
            let m = flatten(count_exact_support(&profile, poset, ideal, CountMethod::Moebius))?.count;
            let e = by_closure.get(&ideal.mask()).copied().unwrap_or(0);
            if m != e {
                return Err(format!(
                    "I = {:?}: alternating sum {m}, enumeration {e}",
                    crate::poset::mask_elements(ideal.mask())
                ));
            }
        }
        Ok(())
    })();
    results.push(("exact_support_counts", exact));

    let enumerated = flatten(distribution(&profile, poset, DistMethod::Enumerate));
    let cross = (|| -> std::result::Result<(), String> {
        let e = enumerated.clone()?;
        let m = flatten(distribution(&profile, poset, DistMethod::Moebius))?;
        flatten(e.check(code.size()))?;
        flatten(m.check(code.size()))?;
        ok_if(e.counts == m.counts, || {
            format!("enumerate {:?} vs moebius {:?}", e.counts, m.counts)
        })
    })();
    results.push(("distribution_methods", cross));

    let hamming = (|| -> std::result::Result<(), String> {
        let anti = flatten(Poset::antichain(n))?;
        let h = flatten(full_hierarchy(&profile, &anti, Method::Theorem2))?;
        for r in 1..=k {
            let g = flatten(generalized_hamming_weight(code, r))?;
            if g != h.weights[r - 1] {
                return Err(format!(
                    "r = {r}: antichain hierarchy {} vs Hamming oracle {g}",
                    h.weights[r - 1]
                ));
            }
        }
        for u in flatten(code.codewords())? {
            if flatten(poset_weight(&anti, &u))? != u.hamming_weight() {
                return Err("antichain weight differs from Hamming weight".into());
            }
        }
        Ok(())
    })();
    results.push(("hamming_specialization", hamming));

    let class = classify(&profile, poset);
    let class_kind = class.as_ref().map(|c| c.class).unwrap_or(CodeClass::Other);
    // closed forms are only checked where the classification admits them
    let closed = |expect: CodeClass,
                  f: &dyn Fn() -> Result<crate::DistributionReport>|
     -> Option<std::result::Result<(), String>> {
        let c = match class.clone() {
            Ok(c) if c.class != expect => return None,
            Ok(c) => c,
            Err(e) => return Some(Err(e.to_string())),
        };
        Some((|| {
            ok_if(c.profile_facts == Some(true), || {
                format!("{expect} rank profile facts fail on ideals")
            })?;
            let got = flatten(f())?;
            let want = enumerated.clone()?;
            ok_if(got.counts == want.counts, || {
                format!("closed form {:?} vs enumeration {:?}", got.counts, want.counts)
            })
        })())
    };
    if let Some(r) = closed(CodeClass::Mds, &|| mds_closed_form(&profile, poset)) {
        results.push(("mds_closed_form", r));
    }
    if let Some(r) = closed(CodeClass::Nmds, &|| nmds_closed_form(&profile, poset)) {
        results.push(("nmds_closed_form", r));
    }

    let anti = Poset::antichain(n).expect("n within cap");
    let hclass = classify(&profile, &anti);
    let hamming_class = hclass.as_ref().map(|c| c.class).unwrap_or(CodeClass::Other);
    if hamming_class == CodeClass::Nmds {
        let hnmds = (|| -> std::result::Result<(), String> {
            let got = flatten(hamming_nmds_closed_form(&profile))?;
            let via_poset = flatten(nmds_closed_form(&profile, &anti))?;
            let want = flatten(distribution(&profile, &anti, DistMethod::Enumerate))?;
            ok_if(got.counts == want.counts && via_poset.counts == want.counts, || {
                format!(
                    "Hamming form {:?}, poset form {:?}, enumeration {:?}",
                    got.counts, via_poset.counts, want.counts
                )
            })
        })();
        results.push(("hamming_nmds_closed_form", hnmds));
    }

    InstanceOutcome {
        class: class_kind,
        hamming_class,
        results,
    }
}

pub struct SelftestConfig {
    pub seed: u64,
    pub trials: usize,
    pub corrupt_rank: bool,
}

pub fn run_selftest(cfg: &SelftestConfig) -> Result<SelftestReport> {
    if cfg.trials == 0 {
        return Err(Error::Invalid("selftest needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks: BTreeMap<&'static str, Tally> = CHECKS.iter().map(|&c| (c, Tally::default())).collect();
    let mut failures = Vec::new();
    let mut mds = 0;
    let mut nmds = BTreeSet::new();
    let mut hamming_nmds = BTreeSet::new();
    for trial in 0..cfg.trials {
        let inst = random_instance(&mut rng);
        let outcome = check_instance(&inst, cfg.corrupt_rank);
        match outcome.class {
            CodeClass::Mds => mds += 1,
            CodeClass::Nmds => {
                nmds.insert(inst.reproducer());
            }
            CodeClass::Other => {}
        }
        if outcome.hamming_class == CodeClass::Nmds {
            hamming_nmds.insert(inst.code.to_text());
        }
        for (name, res) in outcome.results {
            let t = checks.entry(name).or_default();
            match res {
                Ok(()) => t.passed += 1,
                Err(detail) => {
                    t.failed += 1;
                    failures.push(Failure {
                        trial,
                        check: name,
                        detail,
                        reproducer: inst.reproducer(),
                    });
                }
            }
        }
    }
    Ok(SelftestReport {
        seed: cfg.seed,
        trials: cfg.trials,
        checks,
        mds_instances: mds,
        nmds_instances: nmds.len(),
        hamming_nmds_instances: hamming_nmds.len(),
        failures,
    })
}
