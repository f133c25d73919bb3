//! Rank and corank functions of the matroid of a linear code.
//!
//! `ρ(A)` is the rank of the generator columns in `A` and `ρ⊥(A)` the rank of
//! the parity-check columns in `A`. Both are computed from matrices; the
//! identity `ρ⊥(A) = |A| - k + ρ([n] \ A)` is checked, never assumed.

use std::collections::HashMap;
use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::LinearCode;
use crate::field::Field;
use crate::{popcount, Mask};

/// Largest length for which the checks visit every subset (and pair).
pub const EXHAUSTIVE_MAX_N: usize = 12;
const SAMPLES: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RankKind {
    /// Generator columns.
    Rho,
    /// Parity-check columns.
    RhoPerp,
}

/// Memoized `ρ` and `ρ⊥` for one code. Safe to share between threads;
/// concurrent misses on the same set just compute the same value twice.
pub struct RankProfile<'a, F: Field> {
    code: &'a LinearCode<F>,
    rho: RwLock<HashMap<Mask, u8>>,
    rho_perp: RwLock<HashMap<Mask, u8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    /// `ρ(A) < 0` or `ρ(A) > |A|`.
    R1 { set: Mask, rank: usize },
    /// `A ⊆ B` but `ρ(A) > ρ(B)`.
    R2 { a: Mask, b: Mask },
    /// `ρ(A∪B) + ρ(A∩B) > ρ(A) + ρ(B)`.
    R3 { a: Mask, b: Mask },
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub kind: RankKind,
    pub exhaustive: bool,
    pub checked: u64,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorankReport {
    pub exhaustive: bool,
    pub checked: u64,
    /// First set where `ρ⊥(A) != |A| - k + ρ(Ā)`.
    pub violation: Option<Mask>,
}

impl CorankReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl<'a, F: Field> RankProfile<'a, F> {
    pub fn new(code: &'a LinearCode<F>) -> Self {
        RankProfile {
            code,
            rho: RwLock::new(HashMap::new()),
            rho_perp: RwLock::new(HashMap::new()),
        }
    }

    pub fn code(&self) -> &'a LinearCode<F> {
        self.code
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn rank(&self, kind: RankKind, set: Mask) -> usize {
        assert!(set & !self.code.full() == 0, "set {set:#b} outside [n]");
        let (memo, matrix) = match kind {
            RankKind::Rho => (&self.rho, self.code.generator()),
            RankKind::RhoPerp => (&self.rho_perp, self.code.parity()),
        };
        if let Some(&r) = memo.read().unwrap().get(&set) {
            return usize::from(r);
        }
        let r = matrix.column_submatrix_rank(set).expect("mask checked above");
        *memo.write().unwrap().entry(set).or_insert(r as u8) as usize
    }

    /// `ρ(A)`.
    pub fn rho(&self, set: Mask) -> usize {
        self.rank(RankKind::Rho, set)
    }

    /// `ρ⊥(A)`.
    pub fn rho_perp(&self, set: Mask) -> usize {
        self.rank(RankKind::RhoPerp, set)
    }

    /// `ρ` of the complement `[n] \ A`.
    pub fn rho_complement(&self, set: Mask) -> usize {
        self.rho(self.code.full() & !set)
    }

    /// Overwrite a memo entry. Only for negative-control tests.
    #[doc(hidden)]
    pub fn poison(&self, kind: RankKind, set: Mask, value: usize) {
        let memo = match kind {
            RankKind::Rho => &self.rho,
            RankKind::RhoPerp => &self.rho_perp,
        };
        memo.write().unwrap().insert(set, value as u8);
    }

    /// The rank function on every subset, indexed by mask.
    pub fn table(&self, kind: RankKind) -> Vec<usize> {
        assert!(self.n() <= 20, "dense rank table needs n <= 20");
        (0..=self.code.full()).map(|a| self.rank(kind, a)).collect()
    }

    fn sampler(&self) -> (ChaCha8Rng, Mask) {
        (ChaCha8Rng::seed_from_u64(0), self.code.full())
    }

    /// Rank axioms R1-R3. Every subset and every pair when
    /// `n <= EXHAUSTIVE_MAX_N`, a fixed-seed sample otherwise.
    pub fn check_rank_axioms(&self, kind: RankKind) -> AxiomReport {
        let exhaustive = self.n() <= EXHAUSTIVE_MAX_N;
        let mut checked = 0u64;
        let violation = if exhaustive {
            let t = self.table(kind);
            let full = self.code.full();
            let r1 = (0..=full)
                .find(|&a| t[a as usize] > popcount(a))
                .map(|a| AxiomViolation::R1 {
                    set: a,
                    rank: t[a as usize],
                });
            checked += u64::from(full) + 1;
            r1.or_else(|| {
                for b in 0..=full {
                    // every submask a of b
                    let mut a = b;
                    loop {
                        checked += 1;
                        if t[a as usize] > t[b as usize] {
                            return Some(AxiomViolation::R2 { a, b });
                        }
                        if a == 0 {
                            break;
                        }
                        a = (a - 1) & b;
                    }
                }
                None
            })
            .or_else(|| {
                for a in 0..=full {
                    for b in a..=full {
                        checked += 1;
                        if t[(a | b) as usize] + t[(a & b) as usize] > t[a as usize] + t[b as usize] {
                            return Some(AxiomViolation::R3 { a, b });
                        }
                    }
                }
                None
            })
        } else {
            let (mut rng, full) = self.sampler();
            let mut found = None;
            for _ in 0..SAMPLES {
                checked += 1;
                let a = rng.random::<Mask>() & full;
                let b = rng.random::<Mask>() & full;
                let (ra, rb) = (self.rank(kind, a), self.rank(kind, b));
                if ra > popcount(a) {
                    found = Some(AxiomViolation::R1 { set: a, rank: ra });
                } else if ra > self.rank(kind, a | b) {
                    found = Some(AxiomViolation::R2 { a, b: a | b });
                } else if self.rank(kind, a | b) + self.rank(kind, a & b) > ra + rb {
                    found = Some(AxiomViolation::R3 { a, b });
                }
                if found.is_some() {
                    break;
                }
            }
            found
        };
        AxiomReport {
            kind,
            exhaustive,
            checked,
            violation,
        }
    }

    /// `ρ⊥(A) = |A| - k + ρ([n] \ A)`: `ρ⊥` is the corank function of the
    /// code's matroid.
    pub fn check_corank_identity(&self) -> CorankReport {
        let exhaustive = self.n() <= EXHAUSTIVE_MAX_N;
        let k = self.k();
        let holds = |a: Mask| self.rho_perp(a) + k == popcount(a) + self.rho_complement(a);
        let (checked, violation) = if exhaustive {
            let full = self.code.full();
            (u64::from(full) + 1, (0..=full).find(|&a| !holds(a)))
        } else {
            let (mut rng, full) = self.sampler();
            let sets: Vec<Mask> = (0..SAMPLES).map(|_| rng.random::<Mask>() & full).collect();
            (SAMPLES as u64, sets.into_iter().find(|&a| !holds(a)))
        };
        CorankReport {
            exhaustive,
            checked,
            violation,
        }
    }

    /// `(|J| - ρ⊥(J), k - ρ(J̄), dim C^J)`; all three agree for a correct profile.
    pub fn lemma1g(&self, set: Mask) -> (i64, i64, i64) {
        let lhs = popcount(set) as i64 - self.rho_perp(set) as i64;
        let mid = self.k() as i64 - self.rho_complement(set) as i64;
        let rhs = self.code.shorten(set).dimension as i64;
        (lhs, mid, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn code(q: u32, rows: &[&[u32]]) -> LinearCode<FieldSpec> {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        LinearCode::from_values(&FieldSpec::with_order(q).unwrap(), &rows).unwrap()
    }

    fn c42() -> LinearCode<FieldSpec> {
        code(2, &[&[1, 1, 0, 0], &[0, 0, 1, 1]])
    }

    #[test]
    fn rho_examples() {
        let c = c42();
        let p = RankProfile::new(&c);
        assert_eq!(p.rho(0), 0);
        assert_eq!(p.rho(0b0011), 1);
        assert_eq!(p.rho(0b1111), 2);
        assert_eq!(p.rho_perp(0), 0);
        assert_eq!(p.rho_perp(0b1111), 2);
        assert_eq!(p.rho_perp(0b0101), 2);
        // H = G for this code: ranks of H|A computed directly
        assert_eq!(p.rho_perp(0b0101), c.generator().column_submatrix_rank(0b0101).unwrap());
    }

    #[test]
    fn axioms_hold_and_negative_control() {
        let c = code(3, &[&[1, 0, 2, 1, 1], &[0, 1, 1, 2, 0]]);
        let p = RankProfile::new(&c);
        for kind in [RankKind::Rho, RankKind::RhoPerp] {
            let r = p.check_rank_axioms(kind);
            assert!(r.passed() && r.exhaustive, "{r:?}");
        }
        p.poison(RankKind::Rho, 0b00011, 0);
        let r = p.check_rank_axioms(RankKind::Rho);
        assert!(
            matches!(r.violation, Some(AxiomViolation::R2 { b: 0b00011, .. })),
            "{r:?}"
        );
        p.poison(RankKind::RhoPerp, 0b00001, 2);
        let r = p.check_rank_axioms(RankKind::RhoPerp);
        assert_eq!(r.violation, Some(AxiomViolation::R1 { set: 0b00001, rank: 2 }));
    }

    #[test]
    fn submodularity_negative_control() {
        // ρ({1,2}) = 1 stays monotone but ρ({1,2}) + ρ({3}) < ρ({1,2,3})
        let c = code(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let p = RankProfile::new(&c);
        p.poison(RankKind::Rho, 0b011, 1);
        let r = p.check_rank_axioms(RankKind::Rho);
        assert!(matches!(r.violation, Some(AxiomViolation::R3 { .. })), "{r:?}");
    }

    #[test]
    fn corank_identity_examples() {
        let c = c42();
        let p = RankProfile::new(&c);
        let k = p.k();
        assert_eq!(p.rho_perp(0b1111), 4 - k + p.rho(0));
        assert_eq!(p.rho_perp(0) + k, p.rho(0b1111));
        assert_eq!(p.rho_perp(0b0011), 1);
        assert_eq!(2 - k + p.rho(0b1100), 1);
        let report = p.check_corank_identity();
        assert!(report.passed() && report.checked == 16);
        p.poison(RankKind::RhoPerp, 0b0110, 1);
        assert_eq!(p.check_corank_identity().violation, Some(0b0110));
    }

    #[test]
    fn lemma1g_examples() {
        let c = c42();
        let p = RankProfile::new(&c);
        assert_eq!(p.lemma1g(0b1111), (2, 2, 2));
        assert_eq!(p.lemma1g(0), (0, 0, 0));
        assert_eq!(p.lemma1g(0b0011), (1, 1, 1));
    }

    #[test]
    fn large_length_uses_sampling() {
        let rows: Vec<Vec<u32>> = (0..3)
            .map(|i| (0..14).map(|j| ((i * 7 + j * 3) % 5) as u32).collect())
            .collect();
        let c = LinearCode::from_values(&FieldSpec::with_order(5).unwrap(), &rows).unwrap();
        let p = RankProfile::new(&c);
        let r = p.check_rank_axioms(RankKind::Rho);
        assert!(!r.exhaustive && r.passed());
        assert!(p.check_corank_identity().passed());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_code() -> impl Strategy<Value = LinearCode<FieldSpec>> {
            (prop::sample::select(vec![2u32, 3, 4, 5]), 2usize..=8, 1usize..=4)
                .prop_flat_map(|(q, n, k)| {
                    prop::collection::vec(prop::collection::vec(0..q, n), k)
                        .prop_map(move |rows| LinearCode::from_values(&FieldSpec::with_order(q).unwrap(), &rows))
                })
                .prop_filter_map("zero generator", |c| c.ok())
        }

        proptest! {
            #[test]
            fn corank_and_lemma1g_hold(c in arb_code()) {
                let p = RankProfile::new(&c);
                prop_assert!(p.check_corank_identity().passed());
                for j in 0..=c.full() {
                    let (a, b, d) = p.lemma1g(j);
                    prop_assert!(a == b && b == d);
                }
            }

            #[test]
            fn dual_rho_is_rho_perp(c in arb_code()) {
                prop_assume!(c.k() < c.n());
                let d = c.dualize().unwrap();
                let (p, pd) = (RankProfile::new(&c), RankProfile::new(&d));
                for a in 0..=c.full() {
                    prop_assert_eq!(p.rho_perp(a), pd.rho(a));
                }
            }

            #[test]
            fn subcode_support_bounds_complement_rank(c in arb_code(), picks in prop::collection::vec(any::<u32>(), 1..4)) {
                // any r-dim subcode D with supp(D) ⊆ J has ρ(J̄) <= k - r
                prop_assume!(c.size() <= 1024);
                let p = RankProfile::new(&c);
                let all: Vec<_> = c.codewords().unwrap().collect();
                let rows: Vec<_> = picks.iter().map(|&i| all[i as usize % all.len()].coords().to_vec()).collect();
                let d = crate::matrix::Matrix::from_rows(c.field(), c.n(), rows.clone()).unwrap();
                let r = d.rank();
                let supp = picks.iter().fold(0, |acc, &i| acc | all[i as usize % all.len()].support());
                for j in 0..=c.full() {
                    if supp & !j == 0 {
                        prop_assert!(p.rho_complement(j) + r <= c.k());
                    }
                }
            }
        }
    }
}
