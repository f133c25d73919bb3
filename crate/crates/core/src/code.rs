//! Linear codes over GF(q) and the poset weights of their words and subcodes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::matrix::Matrix;
use crate::poset::{full_mask, Poset, MAX_GROUND};
use crate::{popcount, Mask};

/// Largest number of codewords any enumeration will visit.
pub const CODEWORD_CAP: u64 = 1 << 20;

/// A vector of the ambient space together with its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword<E> {
    coords: Vec<E>,
    support: Mask,
}

impl<E: Copy> Codeword<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, coords: Vec<E>) -> Self {
        let support = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| !field.is_zero(c))
            .fold(0, |acc, (i, _)| acc | 1 << i);
        Codeword { coords, support }
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `supp(u)` as a mask.
    pub fn support(&self) -> Mask {
        self.support
    }

    pub fn hamming_weight(&self) -> usize {
        popcount(self.support)
    }
}

/// `wt_P(u) = |<supp(u)>|`.
pub fn poset_weight<E: Copy>(poset: &Poset, word: &Codeword<E>) -> Result<usize> {
    check_len(poset, word.len())?;
    Ok(popcount(poset.closure_mask(word.support)))
}

/// `wt_P(D)`: closure size of the union of supports.
pub fn poset_weight_of_set<E: Copy>(poset: &Poset, words: &[Codeword<E>]) -> Result<usize> {
    let mut support = 0;
    for w in words {
        check_len(poset, w.len())?;
        support |= w.support;
    }
    Ok(popcount(poset.closure_mask(support)))
}

fn check_len(poset: &Poset, len: usize) -> Result<()> {
    if len != poset.n() {
        return Err(Error::Dimension(format!(
            "word length {len} does not match poset size {}",
            poset.n()
        )));
    }
    Ok(())
}

/// `C^J`: the subcode of words supported inside `J`, kept in ambient coordinates.
#[derive(Clone, Debug)]
pub struct ShortenedCode<E> {
    pub dimension: usize,
    pub basis: Vec<Codeword<E>>,
}

#[derive(Clone, Debug)]
pub struct LinearCode<F: Field> {
    field: F,
    generator: Matrix<F>,
    parity: Matrix<F>,
    dropped_rows: usize,
}

impl<F: Field> PartialEq for LinearCode<F> {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl<F: Field> LinearCode<F> {
    /// Code spanned by the rows of `generator`.
    ///
    /// Dependent rows are dropped (first occurrences win) and counted in
    /// [`dropped_rows`](Self::dropped_rows); an all-zero generator is rejected.
    pub fn from_generator(generator: Matrix<F>) -> Result<Self> {
        let field = generator.field().clone();
        let n = generator.cols();
        if n == 0 || n > MAX_GROUND {
            return Err(Error::Invalid(format!("code length {n} outside 1..={MAX_GROUND}")));
        }
        if generator.rows() == 0 || generator.is_zero() {
            return Err(Error::Invalid("generator matrix is zero (k = 0)".into()));
        }
        let mut keep = Vec::new();
        for i in 0..generator.rows() {
            keep.push(i);
            if generator.select_rows(&keep).rank() < keep.len() {
                keep.pop();
            }
        }
        let dropped_rows = generator.rows() - keep.len();
        let generator = generator.select_rows(&keep);
        let parity = generator.null_space_basis();
        Ok(LinearCode {
            field,
            generator,
            parity,
            dropped_rows,
        })
    }

    pub fn from_values(field: &F, rows: &[Vec<u32>]) -> Result<Self> {
        Self::from_generator(Matrix::from_values(field, rows)?)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn generator(&self) -> &Matrix<F> {
        &self.generator
    }

    pub fn parity(&self) -> &Matrix<F> {
        &self.parity
    }

    /// Generator rows discarded as linearly dependent at construction.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n())
    }

    /// `q^k`, saturating.
    pub fn size(&self) -> u128 {
        u128::from(self.q()).saturating_pow(self.k() as u32)
    }

    /// `supp(C)`.
    pub fn support(&self) -> Mask {
        (0..self.k())
            .map(|i| Codeword::new(&self.field, self.generator.row(i).to_vec()).support())
            .fold(0, |a, b| a | b)
    }

    pub fn encode(&self, message: &[F::Elem]) -> Codeword<F::Elem> {
        Codeword::new(&self.field, self.generator.left_mul_vec(message))
    }

    /// Wrap `coords` as a codeword after checking it against the parity matrix.
    pub fn word(&self, coords: Vec<F::Elem>) -> Result<Codeword<F::Elem>> {
        if coords.len() != self.n() {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.n(),
                coords.len()
            )));
        }
        if !self.contains(&coords) {
            return Err(Error::Invalid("vector is not a codeword".into()));
        }
        Ok(Codeword::new(&self.field, coords))
    }

    pub fn contains(&self, coords: &[F::Elem]) -> bool {
        self.parity.mul_vec(coords).iter().all(|&s| self.field.is_zero(s))
    }

    /// Every codeword once, messages in ascending base-q order with the
    /// first message symbol varying fastest.
    pub fn codewords(&self) -> Result<Codewords<'_, F>> {
        let total = self.size();
        if total > u128::from(CODEWORD_CAP) {
            return Err(Error::CapExceeded {
                what: "codeword count q^k",
                value: total,
                cap: u128::from(CODEWORD_CAP),
            });
        }
        Ok(Codewords {
            code: self,
            elems: self.field.elements(),
            next: 0,
            total: total as u64,
        })
    }

    /// `C^J` with basis obtained from the linear constraints `u_j = 0`, `j ∉ J`.
    pub fn shorten(&self, set: Mask) -> ShortenedCode<F::Elem> {
        let outside = self.full() & !set;
        let constraints = self
            .generator
            .select_columns(outside)
            .expect("mask within length")
            .transpose();
        let messages = constraints.null_space_basis();
        let basis: Vec<_> = (0..messages.rows()).map(|i| self.encode(messages.row(i))).collect();
        ShortenedCode {
            dimension: basis.len(),
            basis,
        }
    }

    /// Generator of the punctured code `C|J`, reduced to a basis.
    pub fn puncture(&self, set: Mask) -> Result<Matrix<F>> {
        if set == 0 {
            return Err(Error::Invalid("cannot puncture to an empty coordinate set".into()));
        }
        Ok(self.generator.select_columns(set)?.row_space_basis())
    }

    /// `C⊥`, generated by this code's parity-check matrix.
    pub fn dualize(&self) -> Result<Self> {
        if self.k() == self.n() {
            return Err(Error::Invalid("the dual of the full space is the zero code".into()));
        }
        Self::from_generator(self.parity.clone())
    }

    /// Text form accepted by [`LinearCode::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("q {} n {} k {}\n", self.q(), self.n(), self.k());
        for row in self.generator.values() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }
}

impl LinearCode<FieldSpec> {
    /// Parse `q <q> n <len> k <dim>` followed by k rows of n entries.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize, usize)> = None;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = line_no;
            let bad = |msg: String| Error::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    let ["q", q, "n", n, "k", k] = toks.as_slice() else {
                        return Err(bad("expected header 'q <q> n <len> k <dim>'".into()));
                    };
                    let num = |t: &str| t.parse::<usize>().map_err(|_| bad(format!("bad number '{t}'")));
                    let (q, n, k) = (num(q)? as u32, num(n)?, num(k)?);
                    FieldSpec::with_order(q).map_err(|e| bad(e.to_string()))?;
                    if k == 0 || n == 0 || k > n {
                        return Err(bad(format!("need 1 <= k <= n, got n={n} k={k}")));
                    }
                    header = Some((q, n, k));
                }
                Some((q, n, k)) => {
                    if rows.len() == k {
                        return Err(bad(format!("more than k={k} generator rows")));
                    }
                    if toks.len() != n {
                        return Err(bad(format!("expected {n} entries, got {}", toks.len())));
                    }
                    let row = toks
                        .iter()
                        .map(|t| match t.parse::<u32>() {
                            Ok(v) if v < q => Ok(v),
                            _ => Err(bad(format!("entry '{t}' is not in [0, {q})"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
            }
        }
        let (q, _, k) = header.ok_or(Error::Parse {
            line: 0,
            msg: "empty code file".into(),
        })?;
        if rows.len() != k {
            return Err(Error::Parse {
                line: last_line,
                msg: format!("expected {k} generator rows, got {}", rows.len()),
            });
        }
        Self::from_values(&FieldSpec::with_order(q)?, &rows)
    }
}

/// Iterator over all codewords; see [`LinearCode::codewords`].
pub struct Codewords<'a, F: Field> {
    code: &'a LinearCode<F>,
    elems: Vec<F::Elem>,
    next: u64,
    total: u64,
}

impl<F: Field> Iterator for Codewords<'_, F> {
    type Item = Codeword<F::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next == self.total {
            return None;
        }
        let q = u64::from(self.code.q());
        let mut t = self.next;
        let message: Vec<F::Elem> = (0..self.code.k())
            .map(|_| {
                let d = self.elems[(t % q) as usize];
                t /= q;
                d
            })
            .collect();
        self.next += 1;
        Some(self.code.encode(&message))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl<F: Field> ExactSizeIterator for Codewords<'_, F> {}
