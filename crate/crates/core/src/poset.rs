//! Partial orders on `[n]` and their ideals (down-sets).
//!
//! Elements are 0-indexed internally and 1-indexed in text formats. Subsets
//! of the ground set are `Mask` bitmasks, bit `i` standing for element `i+1`.

use std::fmt::Write as _;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::{popcount, Mask};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// `below[j]` = `{i : i <= j}`, always containing `j`.
    below: Vec<Mask>,
}

/// A down-closed subset of a poset's ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal(Mask);

impl Ideal {
    pub fn mask(self) -> Mask {
        self.0
    }

    pub fn size(self) -> usize {
        popcount(self.0)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::CapExceeded {
            what: "poset ground set size",
            value: n as u128,
            cap: MAX_GROUND as u128,
        });
    }
    Ok(())
}

impl Poset {
    /// Reflexive-transitive closure of 1-indexed cover pairs `(i, j)`, `i < j`.
    pub fn from_cover_relations(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        check_n(n)?;
        let mut lower = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(i, j) in covers {
            for x in [i, j] {
                if x == 0 || x > n {
                    return Err(Error::IndexRange { index: x, n });
                }
            }
            if i == j {
                return Err(Error::Cycle(i));
            }
            lower[j - 1].push(i - 1);
            indegree[j - 1] += 1;
        }

        // Kahn's algorithm from the minimal elements upward.
        let mut upper = vec![Vec::new(); n];
        for (j, ls) in lower.iter().enumerate() {
            for &i in ls {
                upper[i].push(j);
            }
        }
        let mut below: Vec<Mask> = (0..n).map(|j| 1 << j).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut done = vec![false; n];
        while let Some(i) = ready.pop() {
            done[i] = true;
            for &j in &upper[i] {
                below[j] |= below[i];
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        if let Some(start) = (0..n).find(|&j| !done[j]) {
            // Walk down through unfinished lower covers until an element repeats.
            let mut seen = vec![false; n];
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = *lower[cur]
                    .iter()
                    .find(|&&i| !done[i])
                    .expect("stuck element has a stuck lower cover");
            }
            return Err(Error::Cycle(cur + 1));
        }
        Ok(Poset { n, below })
    }

    pub fn chain(n: usize) -> Result<Self> {
        let covers: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_cover_relations(n, &covers)
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Self::from_cover_relations(n, &[])
    }

    /// Random order: each pair `i < j` becomes a cover with probability 1/3,
    /// then the relation is closed transitively.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut covers = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if rng.random_ratio(1, 3) {
                    covers.push((i, j));
                }
            }
        }
        Self::from_cover_relations(n, &covers)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n)
    }

    /// Downset of 0-indexed element `j`.
    pub fn below(&self, j: usize) -> Mask {
        self.below[j]
    }

    /// `i <= j` for 0-indexed elements.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    fn check_mask(&self, set: Mask) -> Result<()> {
        if set & !self.full() != 0 {
            return Err(Error::IndexRange {
                index: (Mask::BITS - set.leading_zeros()) as usize,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Smallest ideal containing `set`.
    pub fn ideal_closure(&self, set: Mask) -> Ideal {
        Ideal(self.closure_mask(set))
    }

    #[inline]
    pub fn closure_mask(&self, mut set: Mask) -> Mask {
        let mut out = 0;
        while set != 0 {
            let j = set.trailing_zeros() as usize;
            out |= self.below[j];
            set &= set - 1;
        }
        out
    }

    pub fn is_ideal(&self, set: Mask) -> bool {
        set & !self.full() == 0 && self.closure_mask(set) == set
    }

    pub fn ideal(&self, set: Mask) -> Result<Ideal> {
        self.check_mask(set)?;
        if self.is_ideal(set) {
            Ok(Ideal(set))
        } else {
            Err(Error::NotAnIdeal { mask: set })
        }
    }

    /// A linear extension: every element appears after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&j| (popcount(self.below[j]), j));
        order
    }

    /// All ideals, or those of size `size` only, in ascending mask order.
    ///
    /// Works by depth-first extension along a linear extension, so the cost
    /// is proportional to the number of ideals rather than `2^n`.
    pub fn enumerate_ideals(&self, size: Option<usize>) -> Vec<Ideal> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let target = size.unwrap_or(usize::MAX);
        if size.is_some_and(|r| r > self.n) {
            return out;
        }
        self.extend(&order, 0, 0, 0, target, &mut out);
        out.sort_unstable();
        out
    }

    fn extend(&self, order: &[usize], pos: usize, cur: Mask, len: usize, target: usize, out: &mut Vec<Ideal>) {
        if target != usize::MAX && (len > target || len + order.len() - pos < target) {
            return;
        }
        if pos == order.len() {
            if target == usize::MAX || len == target {
                out.push(Ideal(cur));
            }
            return;
        }
        let e = order[pos];
        self.extend(order, pos + 1, cur, len, target, out);
        let strict = self.below[e] & !(1 << e);
        if strict & !cur == 0 {
            self.extend(order, pos + 1, cur | 1 << e, len + 1, target, out);
        }
    }

    /// Maximal elements `M(I)` of an ideal.
    pub fn maximal_elements(&self, ideal: Ideal) -> Result<Mask> {
        let i = self.ideal(ideal.0)?.0;
        let mut strictly_below = 0;
        let mut rest = i;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            strictly_below |= self.below[j] & !(1 << j);
            rest &= rest - 1;
        }
        Ok(i & !strictly_below)
    }

    /// `I_M = I \ M(I)`.
    pub fn ideal_without_maximal(&self, ideal: Ideal) -> Result<Ideal> {
        Ok(Ideal(ideal.0 & !self.maximal_elements(ideal)?))
    }

    /// `Λ(I)`: the ideals `J` with `I_M ⊆ J ⊆ I`, ordered by size then mask.
    ///
    /// Generated as `I_M ∪ T` over all `T ⊆ M(I)`.
    pub fn lambda_interval(&self, ideal: Ideal) -> Result<Vec<Ideal>> {
        let max = self.maximal_elements(ideal)?;
        let base = ideal.0 & !max;
        let mut out = Vec::with_capacity(1 << popcount(max));
        let mut t: Mask = 0;
        loop {
            let j = base | t;
            debug_assert!(self.is_ideal(j));
            out.push(Ideal(j));
            if t == max {
                break;
            }
            t = (t.wrapping_sub(max)) & max;
        }
        out.sort_by_key(|j| (j.size(), j.0));
        Ok(out)
    }

    /// The order-reversed poset.
    pub fn dual(&self) -> Poset {
        let mut below = vec![0; self.n];
        for j in 0..self.n {
            for (i, b) in below.iter_mut().enumerate() {
                if self.le(i, j) {
                    *b |= 1 << j;
                }
            }
        }
        Poset { n: self.n, below }
    }

    pub fn is_antichain(&self) -> bool {
        self.below.iter().enumerate().all(|(j, &b)| b == 1 << j)
    }

    /// Cover relations (Hasse diagram edges) as 1-indexed pairs, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.n {
            let strict = self.below[j] & !(1 << j);
            for i in 0..self.n {
                if strict >> i & 1 == 0 {
                    continue;
                }
                // i < j is a cover iff nothing lies strictly between
                let between = strict & !(1 << i);
                let has_mid = (0..self.n).any(|m| between >> m & 1 == 1 && self.le(i, m));
                if !has_mid {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Short hex digest of the order relation.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u32).to_le_bytes());
        for b in &self.below {
            h.update(b.to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }

    /// Text form: `n <count>` followed by one `i < j` line per cover.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (i, j) in self.covers() {
            writeln!(s, "{i} < {j}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut covers = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| Error::Parse { line: line_no, msg };
            match (n, toks.as_slice()) {
                (None, ["n", count]) => {
                    let c: usize = count.parse().map_err(|_| bad(format!("bad size '{count}'")))?;
                    check_n(c).map_err(|e| bad(e.to_string()))?;
                    n = Some(c);
                }
                (None, _) => return Err(bad("expected 'n <count>' header".into())),
                (Some(size), [i, "<", j]) => {
                    let parse = |t: &str| -> Result<usize> {
                        let v: usize = t.parse().map_err(|_| bad(format!("bad element '{t}'")))?;
                        if v == 0 || v > size {
                            return Err(bad(format!("element {v} outside 1..={size}")));
                        }
                        Ok(v)
                    };
                    covers.push((parse(i)?, parse(j)?));
                }
                (Some(_), _) => return Err(bad(format!("expected '<i> < <j>', got '{line}'"))),
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing 'n <count>' header".into(),
        })?;
        Self::from_cover_relations(n, &covers)
    }

    /// `chain:<n>` / `antichain:<n>` presets.
    pub fn from_preset(spec: &str) -> Option<Result<Self>> {
        let (kind, count) = spec.split_once(':')?;
        let n: usize = match count.parse() {
            Ok(n) => n,
            Err(_) => return Some(Err(Error::Invalid(format!("bad poset size in '{spec}'")))),
        };
        match kind {
            "chain" => Some(Self::chain(n)),
            "antichain" => Some(Self::antichain(n)),
            _ => None,
        }
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n >= Mask::BITS as usize {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// 1-indexed element list of a mask.
pub fn mask_elements(set: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize)
        .filter(|&i| set >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Mask from 1-indexed elements.
pub fn mask_from_elements(elems: &[usize], n: usize) -> Result<Mask> {
    elems.iter().try_fold(0, |acc, &e| {
        if e == 0 || e > n {
            Err(Error::IndexRange { index: e, n })
        } else {
            Ok(acc | 1 << (e - 1))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v_poset() -> Poset {
        Poset::from_cover_relations(3, &[(1, 3), (2, 3)]).unwrap()
    }

    /// Ideals by filtering the whole power set.
    fn ideals_by_filter(p: &Poset) -> Vec<Mask> {
        (0..=p.full())
            .filter(|&s| (0..p.n()).all(|j| s >> j & 1 == 0 || p.below(j) & !s == 0))
            .collect()
    }

    #[test]
    fn construction() {
        let c = Poset::from_cover_relations(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(c.le(0, 2) && !c.le(2, 0));
        assert_eq!(c, Poset::chain(3).unwrap());
        assert!(Poset::from_cover_relations(3, &[]).unwrap().is_antichain());
        assert_eq!(Poset::from_cover_relations(2, &[(1, 2), (2, 1)]), Err(Error::Cycle(1)));
        assert!(matches!(
            Poset::from_cover_relations(2, &[(1, 3)]),
            Err(Error::IndexRange { index: 3, n: 2 })
        ));
        assert!(Poset::from_cover_relations(25, &[]).is_err());
        assert!(matches!(
            Poset::from_cover_relations(4, &[(1, 2), (2, 3), (3, 4), (4, 2)]),
            Err(Error::Cycle(c)) if [2, 3, 4].contains(&c)
        ));
    }

    #[test]
    fn closure_examples() {
        let chain = Poset::chain(3).unwrap();
        assert_eq!(chain.ideal_closure(0b100).mask(), 0b111);
        let anti = Poset::antichain(3).unwrap();
        for s in 0..8 {
            assert_eq!(anti.ideal_closure(s).mask(), s);
        }
        assert_eq!(v_poset().ideal_closure(0b100).mask(), 0b111);
        assert_eq!(chain.ideal_closure(0).mask(), 0);
    }

    #[test]
    fn is_ideal_examples() {
        let chain = Poset::chain(3).unwrap();
        assert!(chain.is_ideal(0b011));
        assert!(!chain.is_ideal(0b010));
        assert!(chain.is_ideal(0));
    }

    #[test]
    fn enumeration_examples() {
        for n in 1..8 {
            let chain = Poset::chain(n).unwrap();
            let ideals = chain.enumerate_ideals(None);
            assert_eq!(ideals.len(), n + 1);
            assert!(ideals.iter().all(|i| i.mask() & (i.mask() + 1) == 0));
            assert_eq!(Poset::antichain(n).unwrap().enumerate_ideals(None).len(), 1 << n);
        }
        let v = v_poset();
        let got: Vec<Mask> = v.enumerate_ideals(None).iter().map(|i| i.mask()).collect();
        assert_eq!(got, ideals_by_filter(&v));
        assert_eq!(got, vec![0b000, 0b001, 0b010, 0b011, 0b111]);
        let size2: Vec<Mask> = v.enumerate_ideals(Some(2)).iter().map(|i| i.mask()).collect();
        assert_eq!(size2, vec![0b011]);
        assert!(v.enumerate_ideals(Some(4)).is_empty());
    }

    #[test]
    fn maximal_examples() {
        let chain = Poset::chain(3).unwrap();
        let top = chain.ideal(0b111).unwrap();
        assert_eq!(chain.maximal_elements(top).unwrap(), 0b100);
        assert_eq!(chain.ideal_without_maximal(top).unwrap().mask(), 0b011);
        let anti = Poset::antichain(3).unwrap();
        let i = anti.ideal(0b011).unwrap();
        assert_eq!(anti.maximal_elements(i).unwrap(), 0b011);
        assert_eq!(anti.ideal_without_maximal(i).unwrap().mask(), 0);
        let v = v_poset();
        // pairwise comparability scan
        let scan = |i: Mask| -> Mask {
            (0..3)
                .filter(|&j| i >> j & 1 == 1 && (0..3).all(|k| k == j || i >> k & 1 == 0 || !v.le(j, k)))
                .fold(0, |acc, j| acc | 1 << j)
        };
        assert_eq!(v.maximal_elements(v.ideal(0b011).unwrap()).unwrap(), scan(0b011));
        assert_eq!(scan(0b011), 0b011);
        assert!(matches!(
            chain.maximal_elements(Ideal(0b010)),
            Err(Error::NotAnIdeal { .. })
        ));
    }

    #[test]
    fn lambda_examples() {
        let masks = |v: Vec<Ideal>| v.iter().map(|i| i.mask()).collect::<Vec<_>>();
        let chain = Poset::chain(3).unwrap();
        assert_eq!(masks(chain.lambda_interval(Ideal(0b111)).unwrap()), vec![0b011, 0b111]);
        let anti = Poset::antichain(3).unwrap();
        assert_eq!(
            masks(anti.lambda_interval(Ideal(0b011)).unwrap()),
            vec![0, 0b001, 0b010, 0b011]
        );
        let v = v_poset();
        let top = Ideal(0b111);
        let im = v.ideal_without_maximal(top).unwrap().mask();
        let oracle: Vec<Mask> = v
            .enumerate_ideals(None)
            .iter()
            .map(|j| j.mask())
            .filter(|&j| im & !j == 0 && j & !0b111 == 0)
            .collect();
        assert_eq!(masks(v.lambda_interval(top).unwrap()), oracle);
        assert_eq!(oracle, vec![0b011, 0b111]);
    }

    #[test]
    fn dual_examples() {
        let chain = Poset::chain(3).unwrap();
        let rev = Poset::from_cover_relations(3, &[(3, 2), (2, 1)]).unwrap();
        assert_eq!(chain.dual(), rev);
        let anti = Poset::antichain(4).unwrap();
        assert_eq!(anti.dual(), anti);
    }

    #[test]
    fn text_round_trip_and_presets() {
        let v = v_poset();
        assert_eq!(v.to_text(), "n 3\n1 < 3\n2 < 3\n");
        assert_eq!(Poset::parse("# V shape\nn 3\n\n1 < 3 # left\n2 < 3\n").unwrap(), v);
        assert!(matches!(
            Poset::parse("n 3\n1 < 4\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Poset::parse("1 < 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Poset::parse("n 2\n1 < 2\n2 < 1\n"), Err(Error::Cycle(_))));
        assert_eq!(
            Poset::from_preset("chain:4").unwrap().unwrap(),
            Poset::chain(4).unwrap()
        );
        assert_eq!(
            Poset::from_preset("antichain:2").unwrap().unwrap(),
            Poset::antichain(2).unwrap()
        );
        assert!(Poset::from_preset("chain:x").unwrap().is_err());
        assert!(Poset::from_preset("file.txt").is_none());
        assert_ne!(v.digest(), v.dual().digest());
    }

    #[test]
    fn covers_are_transitive_reduction() {
        let p = Poset::from_cover_relations(4, &[(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        assert_eq!(p.covers(), vec![(1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn element_mask_helpers() {
        assert_eq!(mask_elements(0b101), vec![1, 3]);
        assert_eq!(mask_from_elements(&[1, 3], 4).unwrap(), 0b101);
        assert!(mask_from_elements(&[5], 4).is_err());
    }

    fn arb_poset() -> impl Strategy<Value = Poset> {
        (1usize..=10, any::<u64>())
            .prop_map(|(n, seed)| Poset::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
    }

    proptest! {
        #[test]
        fn complement_of_ideal_is_dual_ideal(p in arb_poset()) {
            let d = p.dual();
            for s in 0..=p.full() {
                prop_assert_eq!(p.is_ideal(s), d.is_ideal(p.full() & !s));
            }
        }

        #[test]
        fn closure_is_a_closure_operator(p in arb_poset(), a in any::<u32>(), b in any::<u32>()) {
            let (a, b) = (a & p.full(), b & p.full());
            let ca = p.closure_mask(a);
            prop_assert_eq!(a & !ca, 0);
            prop_assert_eq!(p.closure_mask(ca), ca);
            prop_assert!(p.is_ideal(ca));
            prop_assert_eq!(ca & !p.closure_mask(a | b), 0);
        }

        #[test]
        fn enumeration_matches_filter(p in arb_poset()) {
            let got: Vec<Mask> = p.enumerate_ideals(None).iter().map(|i| i.mask()).collect();
            prop_assert_eq!(&got, &ideals_by_filter(&p));
            for r in 0..=p.n() {
                let sized: Vec<Mask> = p.enumerate_ideals(Some(r)).iter().map(|i| i.mask()).collect();
                let want: Vec<Mask> = got.iter().copied().filter(|&m| popcount(m) == r).collect();
                prop_assert_eq!(sized, want);
            }
        }

        #[test]
        fn lambda_interval_shape(p in arb_poset()) {
            for i in p.enumerate_ideals(None) {
                let max = p.maximal_elements(i).unwrap();
                let lam = p.lambda_interval(i).unwrap();
                prop_assert_eq!(lam.len(), 1 << popcount(max));
                prop_assert!(lam.iter().all(|j| p.is_ideal(j.mask())));
            }
        }

        #[test]
        fn dual_is_involution(p in arb_poset()) {
            prop_assert_eq!(p.dual().dual(), p.clone());
            prop_assert_eq!(Poset::parse(&p.to_text()).unwrap(), p);
        }
    }
}
