//! The quantum matrix algebra `O_q(M_N)`.
//!
//! Elements are kept in PBW normal form: linear combinations of words in the
//! generators `x_ij` whose letters are nondecreasing in the lexicographic
//! order on `(i, j)`. A product of two normal words is brought back to normal
//! form by the rewrite rules obtained from the defining relations, for
//! `i < k` and `j < l`:
//!
//! ```text
//! x_il x_ij -> q^-1 x_ij x_il
//! x_kj x_ij -> q^-1 x_ij x_kj
//! x_kj x_il -> x_il x_kj
//! x_kl x_ij -> x_ij x_kl - (q - q^-1) x_il x_kj
//! ```
//!
//! Products of a normal word with a single generator are memoized per
//! matrix size behind a lock; the results do not depend on evaluation order.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap as HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::scalar::{Notation, QScalar};

/// Largest supported matrix size.
pub const MAX_N: usize = 8;

/// Generator `x_ij`, stored with zero-based indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub row: u8,
    pub col: u8,
}

impl Gen {
    /// From one-based indices.
    pub fn new(n: usize, i: usize, j: usize) -> Result<Gen> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange(i, j, n));
        }
        Ok(Gen { row: (i - 1) as u8, col: (j - 1) as u8 })
    }

    pub fn is_diagonal(self) -> bool {
        self.row == self.col
    }

    /// One-based `(i, j)`.
    pub fn indices(self) -> (usize, usize) {
        (self.row as usize + 1, self.col as usize + 1)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices();
        write!(f, "x[{},{}]", i, j)
    }
}

/// A word in normal order. The empty word is the unit.
///
/// Ordered by length first, then lexicographically, so that maps keyed by
/// monomials list terms in graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Gen>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Wraps a word that is already in normal order.
    pub fn from_sorted(word: Vec<Gen>) -> Self {
        debug_assert!(word.windows(2).all(|w| w[0] <= w[1]));
        Monomial(word)
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Counit of the word: 1 if every letter is diagonal.
    pub fn counit(&self) -> bool {
        self.0.iter().all(|g| g.is_diagonal())
    }

    /// Row-minus-column multiplicity vector, the weight for the diagonal torus.
    pub fn torus_weight(&self, n: usize) -> Vec<i32> {
        let mut w = vec![0i32; n];
        for g in &self.0 {
            w[g.row as usize] += 1;
            w[g.col as usize] -= 1;
        }
        w
    }

    pub fn row_counts(&self, n: usize) -> Vec<usize> {
        let mut w = vec![0; n];
        for g in &self.0 {
            w[g.row as usize] += 1;
        }
        w
    }

    pub fn col_counts(&self, n: usize) -> Vec<usize> {
        let mut w = vec![0; n];
        for g in &self.0 {
            w[g.col as usize] += 1;
        }
        w
    }

    fn pushed(&self, g: Gen) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(g);
        Monomial(v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

type Terms = BTreeMap<Monomial, QScalar>;

/// One rewrite step for an adjacent pair `x_h x_g` with `h > g`.
fn swap_rule(n: usize, h: Gen, g: Gen) -> Vec<(QScalar, Gen, Gen)> {
    debug_assert!(h > g);
    let (i, j, k, l) = (g.row, g.col, h.row, h.col);
    if i == k || j == l {
        vec![(QScalar::q_pow(n, -1), g, h)]
    } else if j > l {
        vec![(QScalar::one(), g, h)]
    } else {
        vec![(QScalar::one(), g, h), (-QScalar::q_minus_qinv(n), Gen { row: i, col: l }, Gen { row: k, col: j })]
    }
}

/// Memo of `normal word * generator` products for one matrix size.
type Rewritten = Vec<(Monomial, QScalar)>;

struct Rewriter {
    n: usize,
    memo: RwLock<HashMap<(Monomial, Gen), Arc<Rewritten>>>,
}

impl Rewriter {
    fn mul_gen(&self, m: &Monomial, g: Gen) -> Arc<Rewritten> {
        match m.0.last() {
            None => return Arc::new(vec![(m.pushed(g), QScalar::one())]),
            Some(&h) if h <= g => return Arc::new(vec![(m.pushed(g), QScalar::one())]),
            _ => {}
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let h = *m.0.last().unwrap();
        let prefix = Monomial(m.0[..m.0.len() - 1].to_vec());
        let mut acc: HashMap<Monomial, QScalar> = HashMap::default();
        for (c, u, v) in swap_rule(self.n, h, g) {
            for (pm, pc) in self.mul_gen(&prefix, u).iter() {
                let pc = &c * pc;
                for (rm, rc) in self.mul_gen(pm, v).iter() {
                    *acc.entry(rm.clone()).or_default() += &(&pc * rc);
                }
            }
        }
        let mut out: Vec<(Monomial, QScalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(key, out.clone());
        out
    }

    /// Normal form of `m1 * m2` for normal words.
    fn mul_mono(&self, m1: &Monomial, m2: &Monomial) -> Vec<(Monomial, QScalar)> {
        match (m1.0.last(), m2.0.first()) {
            (None, _) => return vec![(m2.clone(), QScalar::one())],
            (_, None) => return vec![(m1.clone(), QScalar::one())],
            (Some(a), Some(b)) if a <= b => {
                let mut v = m1.0.clone();
                v.extend_from_slice(&m2.0);
                return vec![(Monomial(v), QScalar::one())];
            }
            _ => {}
        }
        let mut cur: HashMap<Monomial, QScalar> = HashMap::default();
        cur.insert(m1.clone(), QScalar::one());
        for &g in &m2.0 {
            let mut next: HashMap<Monomial, QScalar> =
                HashMap::with_capacity_and_hasher(cur.len() * 2, Default::default());
            for (m, c) in &cur {
                for (rm, rc) in self.mul_gen(m, g).iter() {
                    *next.entry(rm.clone()).or_default() += &(c * rc);
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur.into_iter().collect()
    }
}

fn rewriter(n: usize) -> &'static Rewriter {
    static TABLE: OnceLock<Vec<Rewriter>> = OnceLock::new();
    let t = TABLE.get_or_init(|| (0..=MAX_N).map(|n| Rewriter { n, memo: RwLock::new(HashMap::default()) }).collect());
    assert!((1..=MAX_N).contains(&n), "matrix size {} unsupported", n);
    &t[n]
}

/// Element of `O_q(M_N)` in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem {
    n: usize,
    terms: Terms,
}

impl AlgElem {
    pub fn zero(n: usize) -> Self {
        AlgElem { n, terms: Terms::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, QScalar::one())
    }

    pub fn scalar(n: usize, c: QScalar) -> Self {
        Self::monomial(n, Monomial::one(), c)
    }

    pub fn monomial(n: usize, m: Monomial, c: QScalar) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgElem { n, terms }
    }

    /// The generator `x_ij`, one-based.
    pub fn generator(n: usize, i: usize, j: usize) -> Result<Self> {
        let g = Gen::new(n, i, j)?;
        Ok(Self::monomial(n, Monomial(vec![g]), QScalar::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, QScalar)>>(n: usize, it: I) -> Self {
        let mut terms = Terms::new();
        for (m, c) in it {
            add_term(&mut terms, m, &c);
        }
        AlgElem { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, QScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, QScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> QScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn check(&self, other: &AlgElem) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &AlgElem) -> Result<AlgElem> {
        self.check(o)?;
        Ok(self.add(o))
    }

    pub fn try_sub(&self, o: &AlgElem) -> Result<AlgElem> {
        self.check(o)?;
        Ok(self.sub(o))
    }

    pub fn try_mul(&self, o: &AlgElem) -> Result<AlgElem> {
        self.check(o)?;
        Ok(self.mul(o))
    }

    pub fn add(&self, o: &AlgElem) -> AlgElem {
        debug_assert_eq!(self.n, o.n);
        let mut t = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut t, m.clone(), c);
        }
        AlgElem { n: self.n, terms: t }
    }

    pub fn sub(&self, o: &AlgElem) -> AlgElem {
        self.add(&o.neg())
    }

    /// `self += c * o` in place.
    pub fn add_scaled(&mut self, o: &AlgElem, c: &QScalar) {
        debug_assert_eq!(self.n, o.n);
        for (m, x) in &o.terms {
            add_term(&mut self.terms, m.clone(), &(x * c));
        }
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &QScalar) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero(self.n);
        }
        AlgElem { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &AlgElem) -> AlgElem {
        debug_assert_eq!(self.n, o.n);
        let rw = rewriter(self.n);
        let mut acc: HashMap<Monomial, QScalar> = HashMap::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1 * c2;
                for (m, x) in rw.mul_mono(m1, m2) {
                    *acc.entry(m).or_default() += &(&c * &x);
                }
            }
        }
        AlgElem::from_terms(self.n, acc.into_iter().filter(|(_, c)| !c.is_zero()))
    }

    pub fn pow(&self, k: u32) -> AlgElem {
        let mut acc = AlgElem::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Normal form of a raw word, given with one-based indices.
    pub fn normal_form(n: usize, word: &[(usize, usize)]) -> Result<AlgElem> {
        let gens = word.iter().map(|&(i, j)| Gen::new(n, i, j)).collect::<Result<Vec<_>>>()?;
        Ok(Self::normal_form_gens(n, &gens))
    }

    pub fn normal_form_gens(n: usize, gens: &[Gen]) -> AlgElem {
        let mut acc = AlgElem::one(n);
        for &g in gens {
            acc = acc.mul(&AlgElem::monomial(n, Monomial(vec![g]), QScalar::one()));
        }
        acc
    }

    /// Splits by word length.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, AlgElem> {
        let mut out: BTreeMap<usize, AlgElem> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_insert_with(|| AlgElem::zero(self.n)).terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// The degree if all terms share one word length.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn counit(&self) -> QScalar {
        let mut acc = QScalar::zero();
        for (m, c) in &self.terms {
            if m.counit() {
                acc += c;
            }
        }
        acc
    }

    /// Leading monomial for the lexicographic order on exponent vectors in
    /// which `x_11` is the most significant letter. It is multiplicative:
    /// `lm(a b) = lm(a) lm(b)` as multisets, since every rewrite step keeps
    /// the multiset or replaces it by a smaller one.
    pub fn leading(&self) -> Option<(&Monomial, &QScalar)> {
        self.terms.iter().max_by(|a, b| lex_exponent_cmp(a.0, b.0))
    }

    /// Renders in the expression syntax accepted by the parser.
    pub fn to_expr(&self) -> String {
        self.to_expr_in(Notation::Q)
    }

    pub fn to_expr_in(&self, notation: Notation) -> String {
        render_terms(self.n, notation, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

/// Compares two normal words as exponent vectors, `x_11` most significant.
pub fn lex_exponent_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    // normal words list letters in increasing order, so the exponent vector
    // comparison is the comparison of the sorted letter sequences where a
    // smaller letter earlier wins
    let (x, y) = (&a.0, &b.0);
    let mut i = 0;
    loop {
        match (x.get(i), y.get(i)) {
            (None, None) => return std::cmp::Ordering::Equal,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (Some(p), Some(r)) if p != r => {
                return if p < r { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
            }
            _ => i += 1,
        }
    }
}

pub(crate) fn render_terms<'a>(
    n: usize,
    notation: Notation,
    it: impl Iterator<Item = (String, &'a QScalar)>,
) -> String {
    let mut out = String::new();
    for (mono, c) in it {
        let cs = c.render_in(n, notation);
        let body = if mono == "1" {
            if c.len() > 1 {
                format!("({})", cs)
            } else {
                cs.clone()
            }
        } else if c.is_one() {
            mono.clone()
        } else if c.len() == 1 && cs.starts_with('-') && &cs[1..] == "1" {
            format!("-{}", mono)
        } else if c.len() == 1 {
            format!("{}*{}", cs, mono)
        } else {
            format!("({})*{}", cs, mono)
        };
        if out.is_empty() {
            out = body;
        } else if let Some(rest) = body.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

pub(crate) fn add_term(t: &mut Terms, m: Monomial, c: &QScalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c.clone());
        }
    }
}

/// Normal form of `m1 * m2`.
pub fn mul_monomials(n: usize, m1: &Monomial, m2: &Monomial) -> Vec<(Monomial, QScalar)> {
    rewriter(n).mul_mono(m1, m2)
}

/// All normal words of length `d` in `n^2` letters, in increasing order.
pub fn pbw_basis(n: usize, d: usize) -> Vec<Monomial> {
    let letters: Vec<Gen> = (0..n).flat_map(|i| (0..n).map(move |j| Gen { row: i as u8, col: j as u8 })).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(letters: &[Gen], start: usize, d: usize, cur: &mut Vec<Gen>, out: &mut Vec<Monomial>) {
        if cur.len() == d {
            out.push(Monomial(cur.clone()));
            return;
        }
        for k in start..letters.len() {
            cur.push(letters[k]);
            rec(letters, k, d, cur, out);
            cur.pop();
        }
    }
    rec(&letters, 0, d, &mut cur, &mut out);
    out
}

/// Number of inversions of a permutation.
fn inversions(p: &[usize]) -> usize {
    let mut c = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                c += 1;
            }
        }
    }
    c
}

pub(crate) fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..t).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k.is_multiple_of(2) {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(t, &mut p, &mut out);
    out.sort();
    out
}

fn check_index_set(n: usize, s: &[usize]) -> Result<Vec<usize>> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != s.len() {
        return Err(Error::Invalid(format!("repeated index in {:?}", s)));
    }
    for &i in &v {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(i, i, n));
        }
    }
    Ok(v)
}

/// The quantum minor `[I|J]` with one-based row set `rows` and column set
/// `cols`: `sum over sigma of (-q)^{l(sigma)} x_{i1, j_sigma(1)} ... x_{it, j_sigma(t)}`.
pub fn quantum_minor(n: usize, rows: &[usize], cols: &[usize]) -> Result<AlgElem> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(format!("|I| = {} but |J| = {}", rows.len(), cols.len())));
    }
    if rows.is_empty() || rows.len() > n {
        return Err(Error::SizeMismatch(format!("minor size {} not in 1..={}", rows.len(), n)));
    }
    let rows = check_index_set(n, rows)?;
    let cols = check_index_set(n, cols)?;
    let t = rows.len();
    let mq = -QScalar::q_pow(n, 1);
    let mut acc = AlgElem::zero(n);
    for p in permutations(t) {
        let word: Vec<Gen> = (0..t).map(|a| Gen { row: (rows[a] - 1) as u8, col: (cols[p[a]] - 1) as u8 }).collect();
        let c = mq.pow(inversions(&p) as u32);
        acc = acc.add(&AlgElem::normal_form_gens(n, &word).scale(&c));
    }
    Ok(acc)
}

/// `det_q`.
pub fn quantum_det(n: usize) -> AlgElem {
    let all: Vec<usize> = (1..=n).collect();
    quantum_minor(n, &all, &all).expect("full index set is valid")
}

/// Subsets of `{1..n}` of size `k`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// Sum of the principal quantum minors of size `i`.
pub fn sigma(n: usize, i: usize) -> Result<AlgElem> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange(i, i, n));
    }
    let mut acc = AlgElem::zero(n);
    for s in subsets(n, i) {
        acc = acc.add(&quantum_minor(n, &s, &s)?);
    }
    Ok(acc)
}

/// Principal minors of size `i` weighted by `q^{-2 w(I)}`, `w(I)` the sum of `I`.
pub fn tau(n: usize, i: usize) -> Result<AlgElem> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange(i, i, n));
    }
    let mut acc = AlgElem::zero(n);
    for s in subsets(n, i) {
        let w: usize = s.iter().sum();
        acc = acc.add(&quantum_minor(n, &s, &s)?.scale(&QScalar::q_pow(n, -2 * w as i32)));
    }
    Ok(acc)
}

/// Binomial coefficient, used for PBW dimension counts.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Reference rewriter working on raw words, applying the rules at
/// positions chosen by `pick`. Used to test that normal forms do not
/// depend on the order of rule application.
pub fn reduce_word_with<F: FnMut(usize) -> usize>(n: usize, word: &[Gen], mut pick: F) -> AlgElem {
    let mut pending: Vec<(Vec<Gen>, QScalar)> = vec![(word.to_vec(), QScalar::one())];
    let mut done: Vec<(Monomial, QScalar)> = Vec::new();
    while let Some((w, c)) = pending.pop() {
        let inv: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
        if inv.is_empty() {
            done.push((Monomial(w), c));
            continue;
        }
        let p = inv[pick(inv.len()) % inv.len()];
        for (rc, u, v) in swap_rule(n, w[p], w[p + 1]) {
            let mut nw = w.clone();
            nw[p] = u;
            nw[p + 1] = v;
            pending.push((nw, &c * &rc));
        }
    }
    AlgElem::from_terms(n, done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize, j: usize) -> AlgElem {
        AlgElem::generator(n, i, j).unwrap()
    }

    fn q(n: usize, k: i32) -> QScalar {
        QScalar::q_pow(n, k)
    }

    #[test]
    fn same_row_swap() {
        let nf = AlgElem::normal_form(2, &[(1, 2), (1, 1)]).unwrap();
        assert_eq!(nf, x(2, 1, 1).mul(&x(2, 1, 2)).scale(&q(2, -1)));
    }

    #[test]
    fn antidiagonal_pair_commutes() {
        let nf = AlgElem::normal_form(2, &[(2, 1), (1, 2)]).unwrap();
        assert_eq!(nf, x(2, 1, 2).mul(&x(2, 2, 1)));
        assert_eq!(nf.len(), 1);
    }

    #[test]
    fn diagonal_pair_rule() {
        let nf = AlgElem::normal_form(2, &[(2, 2), (1, 1)]).unwrap();
        let expect = x(2, 1, 1).mul(&x(2, 2, 2)).sub(&x(2, 1, 2).mul(&x(2, 2, 1)).scale(&QScalar::q_minus_qinv(2)));
        assert_eq!(nf, expect);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(AlgElem::normal_form(2, &[(3, 1)]), Err(Error::IndexOutOfRange(3, 1, 2))));
    }

    #[test]
    fn ordered_product_is_concatenation() {
        let p = x(2, 1, 1).mul(&x(2, 2, 2));
        assert_eq!(p.len(), 1);
        assert!(p.coeff(&Monomial(vec![Gen { row: 0, col: 0 }, Gen { row: 1, col: 1 }])).is_one());
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(quantum_det(1), x(1, 1, 1));
        let d2 = x(2, 1, 1).mul(&x(2, 2, 2)).sub(&x(2, 1, 2).mul(&x(2, 2, 1)).scale(&q(2, 1)));
        assert_eq!(quantum_det(2), d2);
        assert_eq!(quantum_det(3).len(), 6);
    }

    #[test]
    fn determinant_is_central() {
        for n in 2..=3 {
            let d = quantum_det(n);
            for i in 1..=n {
                for j in 1..=n {
                    let g = x(n, i, j);
                    assert_eq!(d.mul(&g), g.mul(&d), "n={} x{}{}", n, i, j);
                }
            }
        }
    }

    #[test]
    fn minors() {
        assert_eq!(quantum_minor(3, &[1], &[2]).unwrap(), x(3, 1, 2));
        let m = quantum_minor(3, &[1, 2], &[1, 3]).unwrap();
        let expect = x(3, 1, 1).mul(&x(3, 2, 3)).sub(&x(3, 1, 3).mul(&x(3, 2, 1)).scale(&q(3, 1)));
        assert_eq!(m, expect);
        assert!(matches!(quantum_minor(3, &[1, 2], &[1]), Err(Error::SizeMismatch(_))));
        assert!(matches!(quantum_minor(2, &[1, 3], &[1, 2]), Err(Error::IndexOutOfRange(..))));
    }

    #[test]
    fn sigma_tau() {
        assert_eq!(sigma(2, 1).unwrap(), x(2, 1, 1).add(&x(2, 2, 2)));
        assert_eq!(sigma(2, 2).unwrap(), quantum_det(2));
        assert_eq!(sigma(3, 3).unwrap(), quantum_det(3));
        let s2 = [[1, 2], [1, 3], [2, 3]]
            .iter()
            .map(|s| quantum_minor(3, s, s).unwrap())
            .fold(AlgElem::zero(3), |a, b| a.add(&b));
        assert_eq!(sigma(3, 2).unwrap(), s2);

        let t1 = x(2, 1, 1).scale(&q(2, -2)).add(&x(2, 2, 2).scale(&q(2, -4)));
        assert_eq!(tau(2, 1).unwrap(), t1);
        assert_eq!(tau(2, 2).unwrap(), quantum_det(2).scale(&q(2, -6)));
        let t2 = [([1, 2], -6), ([1, 3], -8), ([2, 3], -10)]
            .iter()
            .map(|(s, k)| quantum_minor(3, s, s).unwrap().scale(&q(3, *k)))
            .fold(AlgElem::zero(3), |a, b| a.add(&b));
        assert_eq!(tau(3, 2).unwrap(), t2);
        assert!(sigma(2, 3).is_err());
        assert!(tau(2, 0).is_err());
    }

    #[test]
    fn components() {
        let a = x(2, 1, 1).add(&x(2, 1, 1).mul(&x(2, 2, 2)));
        let c = a.homogeneous_components();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&1], x(2, 1, 1));
        assert!(AlgElem::zero(2).homogeneous_components().is_empty());
        assert_eq!(quantum_det(2).homogeneous_components().keys().copied().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn pbw_counts() {
        for n in 1..=3 {
            for d in 0..=4 {
                assert_eq!(pbw_basis(n, d).len() as u64, binomial((n * n + d - 1) as u64, d as u64));
            }
        }
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(x(2, 1, 1).try_mul(&x(3, 1, 1)), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn reference_rewriter_agrees_on_a_long_word() {
        let w: Vec<Gen> =
            [(2, 2), (2, 1), (1, 2), (1, 1), (2, 2)].iter().map(|&(i, j)| Gen::new(2, i, j).unwrap()).collect();
        let mut k = 0usize;
        let a = reduce_word_with(2, &w, |len| {
            k += 1;
            k % len
        });
        assert_eq!(a, AlgElem::normal_form_gens(2, &w));
    }
}
