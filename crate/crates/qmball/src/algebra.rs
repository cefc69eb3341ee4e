//! The quantized function algebras: polynomial generators `z[a,α]`, their
//! stars, and the delta element `f0`, presented by normal-ordering rewrites.
//!
//! A word in the letters is brought to the canonical basis form
//! `z-word (ascending) · f0? · z*-word (descending)` by oriented versions of
//! the defining relations: the quasi-commutation rules between `z` letters,
//! the mixed rule that moves a starred letter past an unstarred one (with
//! its `R`-coefficient tables and a Kronecker contraction term), and the
//! delta rules `f0^2 = f0`, `f0·z = 0`, `z*·f0 = 0`. Rewriting terminates:
//! a lexicographic measure (star/plain crossings, word length, row
//! inversions, column inversions) strictly decreases at every step, which
//! is asserted in debug builds.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("shape requires m ≥ 1 and n ≥ 1, got m={m}, n={n}")]
    InvalidShape { m: u8, n: u8 },
    #[error("letter index ({a},{alpha}) out of range for shape m={m}, n={n}")]
    IndexOutOfRange { a: u8, alpha: u8, m: u8, n: u8 },
}

/// The rectangle: `n` rows (subscripts) by `m` columns (superscripts).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Shape {
    m: u8,
    n: u8,
}

impl Shape {
    pub fn new(m: u8, n: u8) -> Result<Shape, AlgebraError> {
        if m == 0 || n == 0 {
            return Err(AlgebraError::InvalidShape { m, n });
        }
        Ok(Shape { m, n })
    }

    /// Column count (superscript range).
    pub fn m(&self) -> u8 {
        self.m
    }

    /// Row count (subscript range).
    pub fn n(&self) -> u8 {
        self.n
    }

    /// `N = m + n`; generators are indexed `1..N`.
    pub fn size(&self) -> u8 {
        self.m + self.n
    }

    pub fn contains(&self, z: ZIndex) -> bool {
        (1..=self.n).contains(&z.a) && (1..=self.m).contains(&z.alpha)
    }

    /// All letter indices, ascending in `(a, alpha)`.
    pub fn letters(&self) -> Vec<ZIndex> {
        let mut out = Vec::with_capacity(self.m as usize * self.n as usize);
        for a in 1..=self.n {
            for alpha in 1..=self.m {
                out.push(ZIndex { a, alpha });
            }
        }
        out
    }

    /// All ascending words of the given degree (multisets of letters).
    pub fn z_words(&self, degree: usize) -> Vec<Vec<ZIndex>> {
        let mut out = Vec::new();
        let letters = self.letters();
        let mut word = Vec::with_capacity(degree);
        fn rec(
            letters: &[ZIndex],
            start: usize,
            left: usize,
            word: &mut Vec<ZIndex>,
            out: &mut Vec<Vec<ZIndex>>,
        ) {
            if left == 0 {
                out.push(word.clone());
                return;
            }
            for i in start..letters.len() {
                word.push(letters[i]);
                rec(letters, i, left - 1, word, out);
                word.pop();
            }
        }
        rec(&letters, 0, degree, &mut word, &mut out);
        out
    }

    /// Every normal monomial with `z`-degree plus `z*`-degree at most
    /// `max_degree`, with and without `f0`.
    pub fn monomials_up_to(&self, max_degree: usize) -> Vec<NormalMonomial> {
        let mut out = Vec::new();
        for dz in 0..=max_degree {
            for ds in 0..=(max_degree - dz) {
                for zw in self.z_words(dz) {
                    for sw in self.z_words(ds) {
                        let mut zsword: Vec<ZIndex> = sw.clone();
                        zsword.reverse();
                        for has_f0 in [false, true] {
                            out.push(NormalMonomial {
                                zword: zw.clone(),
                                has_f0,
                                zsword: zsword.clone(),
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Position of a generator in the rectangle: row `a`, column `alpha`.
/// The derived order is lexicographic in `(a, alpha)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ZIndex {
    pub a: u8,
    pub alpha: u8,
}

impl ZIndex {
    pub fn new(a: u8, alpha: u8) -> ZIndex {
        ZIndex { a, alpha }
    }
}

/// A free-word letter: a generator, its star, or the delta element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    Z(ZIndex),
    ZStar(ZIndex),
    F0,
}

impl Letter {
    pub fn z(a: u8, alpha: u8) -> Letter {
        Letter::Z(ZIndex::new(a, alpha))
    }

    pub fn zs(a: u8, alpha: u8) -> Letter {
        Letter::ZStar(ZIndex::new(a, alpha))
    }

    pub fn star(&self) -> Letter {
        match *self {
            Letter::Z(i) => Letter::ZStar(i),
            Letter::ZStar(i) => Letter::Z(i),
            Letter::F0 => Letter::F0,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Z(i) => write!(f, "z[{},{}]", i.a, i.alpha),
            Letter::ZStar(i) => write!(f, "zs[{},{}]", i.a, i.alpha),
            Letter::F0 => write!(f, "f0"),
        }
    }
}

/// A canonically ordered basis monomial: ascending `z`-word, optional `f0`,
/// descending `z*`-word (so that its star is again normal).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NormalMonomial {
    zword: Vec<ZIndex>,
    has_f0: bool,
    zsword: Vec<ZIndex>,
}

impl NormalMonomial {
    pub fn one() -> NormalMonomial {
        NormalMonomial {
            zword: Vec::new(),
            has_f0: false,
            zsword: Vec::new(),
        }
    }

    pub fn f0() -> NormalMonomial {
        NormalMonomial {
            zword: Vec::new(),
            has_f0: true,
            zsword: Vec::new(),
        }
    }

    pub fn single_z(i: ZIndex) -> NormalMonomial {
        NormalMonomial {
            zword: vec![i],
            has_f0: false,
            zsword: Vec::new(),
        }
    }

    pub fn single_zstar(i: ZIndex) -> NormalMonomial {
        NormalMonomial {
            zword: Vec::new(),
            has_f0: false,
            zsword: vec![i],
        }
    }

    /// Assemble from parts, checking the ordering invariants.
    pub fn from_parts(zword: Vec<ZIndex>, has_f0: bool, zsword: Vec<ZIndex>) -> NormalMonomial {
        assert!(
            zword.windows(2).all(|w| w[0] <= w[1]),
            "z-word must be ascending"
        );
        assert!(
            zsword.windows(2).all(|w| w[0] >= w[1]),
            "z*-word must be descending"
        );
        NormalMonomial {
            zword,
            has_f0,
            zsword,
        }
    }

    fn from_normal_word(word: &[Letter]) -> NormalMonomial {
        let mut zword = Vec::new();
        let mut zsword = Vec::new();
        let mut has_f0 = false;
        for l in word {
            match *l {
                Letter::Z(i) => zword.push(i),
                Letter::ZStar(i) => zsword.push(i),
                Letter::F0 => has_f0 = true,
            }
        }
        debug_assert!(zword.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(zsword.windows(2).all(|w| w[0] >= w[1]));
        NormalMonomial {
            zword,
            has_f0,
            zsword,
        }
    }

    pub fn zword(&self) -> &[ZIndex] {
        &self.zword
    }

    pub fn has_f0(&self) -> bool {
        self.has_f0
    }

    pub fn zsword(&self) -> &[ZIndex] {
        &self.zsword
    }

    /// `(z-degree, z*-degree, has_f0)`.
    pub fn bidegree(&self) -> (usize, usize, bool) {
        (self.zword.len(), self.zsword.len(), self.has_f0)
    }

    pub fn total_degree(&self) -> usize {
        self.zword.len() + self.zsword.len()
    }

    /// The underlying free word.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.total_degree() + usize::from(self.has_f0));
        out.extend(self.zword.iter().map(|&i| Letter::Z(i)));
        if self.has_f0 {
            out.push(Letter::F0);
        }
        out.extend(self.zsword.iter().map(|&i| Letter::ZStar(i)));
        out
    }

    /// The star reverses the word and stars each letter. With the chosen
    /// ordering this maps normal monomials to normal monomials directly.
    pub fn star(&self) -> NormalMonomial {
        let mut zword: Vec<ZIndex> = self.zsword.clone();
        zword.reverse();
        let mut zsword: Vec<ZIndex> = self.zword.clone();
        zsword.reverse();
        NormalMonomial {
            zword,
            has_f0: self.has_f0,
            zsword,
        }
    }

    pub fn is_one(&self) -> bool {
        self.zword.is_empty() && self.zsword.is_empty() && !self.has_f0
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A finite linear combination of normal monomials over the ground field.
/// No zero coefficients are stored; the zero element is the empty sum.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Element {
    terms: BTreeMap<NormalMonomial, Scalar>,
}

impl Element {
    pub fn zero() -> Element {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Element {
        Element::from_monomial(NormalMonomial::one(), Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Element {
        Element::from_monomial(NormalMonomial::one(), c)
    }

    pub fn from_monomial(mono: NormalMonomial, coeff: Scalar) -> Element {
        let mut e = Element::zero();
        e.add_term(mono, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &NormalMonomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Add `coeff · mono`, pruning a cancelled term.
    pub fn add_term(&mut self, mono: NormalMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (m, a) in self.terms() {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// The involution: antilinear over the reals of the ground field (so
    /// coefficients pass through unchanged), anti-multiplicative on words.
    pub fn star(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in self.terms() {
            out.add_term(m.star(), c.clone());
        }
        out
    }

    /// Projection onto the ideal of finite functions: the sub-sum of terms
    /// carrying `f0`. An element is finite iff this is the identity on it.
    pub fn project_finite(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in self.terms() {
            if m.has_f0() {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.terms.keys().all(|m| m.has_f0())
    }

    /// Terms in display order: total degree descending, then monomial order.
    pub fn sorted_terms(&self) -> Vec<(&NormalMonomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.total_degree()
                .cmp(&a.total_degree())
                .then_with(|| a.cmp(b))
        });
        v
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in self.sorted_terms() {
            let (neg, body) = term_display(mono, coeff);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

fn term_display(mono: &NormalMonomial, coeff: &Scalar) -> (bool, String) {
    if mono.is_one() {
        if coeff.is_compound() {
            return (false, format!("({coeff})"));
        }
        let (neg, mag) = coeff.signed_display();
        return (neg, mag);
    }
    let mono_str = mono.to_string();
    if coeff.is_one() {
        return (false, mono_str);
    }
    if coeff.is_compound() {
        return (false, format!("({coeff}) * {mono_str}"));
    }
    let (neg, mag) = coeff.signed_display();
    if mag == "1" {
        return (neg, mono_str);
    }
    (neg, format!("{mag} * {mono_str}"))
}

/// One defining relation, both sides as formal words with coefficients.
pub struct Relation {
    pub name: String,
    pub lhs: Vec<(Scalar, Vec<Letter>)>,
    pub rhs: Vec<(Scalar, Vec<Letter>)>,
}

/// Strictly decreasing along every rewrite: `(star/plain crossings, word
/// length, row inversions, column inversions)`, compared lexicographically.
pub fn rewrite_measure(word: &[Letter]) -> [u64; 4] {
    let mut crossings = 0u64;
    let mut row_inv = 0u64;
    let mut col_inv = 0u64;
    for i in 0..word.len() {
        for j in (i + 1)..word.len() {
            match (word[i], word[j]) {
                (Letter::ZStar(_), Letter::Z(_)) | (Letter::ZStar(_), Letter::F0) => {
                    crossings += 1;
                }
                (Letter::Z(x), Letter::Z(y)) => {
                    row_inv += u64::from(x.a > y.a);
                    col_inv += u64::from(x.alpha > y.alpha);
                }
                (Letter::ZStar(x), Letter::ZStar(y)) => {
                    row_inv += u64::from(x.a < y.a);
                    col_inv += u64::from(x.alpha < y.alpha);
                }
                _ => {}
            }
        }
    }
    [crossings, word.len() as u64, row_inv, col_inv]
}

enum Violation {
    F0F0,
    Annihilate, // f0·z or z*·f0
    Mixed,
    ZSwap,
    ZStarSwap,
}

fn find_violation(word: &[Letter]) -> Option<(usize, Violation)> {
    for i in 0..word.len().saturating_sub(1) {
        let v = match (word[i], word[i + 1]) {
            (Letter::F0, Letter::F0) => Some(Violation::F0F0),
            (Letter::F0, Letter::Z(_)) | (Letter::ZStar(_), Letter::F0) => {
                Some(Violation::Annihilate)
            }
            (Letter::ZStar(_), Letter::Z(_)) => Some(Violation::Mixed),
            (Letter::Z(x), Letter::Z(y)) if x > y => Some(Violation::ZSwap),
            (Letter::ZStar(x), Letter::ZStar(y)) if x < y => Some(Violation::ZStarSwap),
            _ => None,
        };
        if let Some(v) = v {
            return Some((i, v));
        }
    }
    None
}

/// The rewriting context for one shape: the coefficient tables of the
/// defining relations and the normal-ordering engine built on them.
#[derive(Clone, Debug)]
pub struct Algebra {
    shape: Shape,
    // cached scalars
    q2: Scalar,
    one_minus_q2: Scalar,
    r_diag_one: Scalar,        // the diagonal R' entry; 1 unless sabotaged
    r_diag_tail: Scalar,       // -(q^-2 - 1)
    neg_q_minus_q_inv: Scalar, // -(q - q^-1)
    rprime_defect: bool,
}

impl Algebra {
    pub fn new(shape: Shape) -> Algebra {
        Algebra::build(shape, false)
    }

    /// A deliberately corrupted relation table: the diagonal `R'` entry is
    /// `q` instead of `1`, which falsifies the corner relation in every
    /// shape. Only for exercising failure paths of the verification suites.
    pub fn with_rprime_defect(shape: Shape) -> Algebra {
        Algebra::build(shape, true)
    }

    fn build(shape: Shape, rprime_defect: bool) -> Algebra {
        let one = Scalar::one();
        let q_sq = Scalar::q_pow(2);
        Algebra {
            shape,
            q2: q_sq.clone(),
            one_minus_q2: &one - &q_sq,
            r_diag_one: if rprime_defect { Scalar::q_pow(1) } else { one },
            r_diag_tail: -&(&Scalar::q_pow(-2) - &Scalar::one()),
            neg_q_minus_q_inv: -&(&Scalar::q_pow(1) - &Scalar::q_pow(-1)),
            rprime_defect,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn has_rprime_defect(&self) -> bool {
        self.rprime_defect
    }

    /// Row coefficient table of the mixed relation.
    pub fn r_prime(&self, b: u8, a: u8, b_prime: u8, a_prime: u8) -> Scalar {
        let n = self.shape.n;
        assert!(
            (1..=n).contains(&a)
                && (1..=n).contains(&b)
                && (1..=n).contains(&a_prime)
                && (1..=n).contains(&b_prime),
            "row index out of range 1..={n}"
        );
        if a != b && b == b_prime && a == a_prime {
            Scalar::q_pow(-1)
        } else if a == b && a == a_prime && a == b_prime {
            self.r_diag_one.clone()
        } else if a == b && a_prime == b_prime && a_prime > a {
            self.r_diag_tail.clone()
        } else {
            Scalar::zero()
        }
    }

    /// Column coefficient table of the mixed relation (mirror of `r_prime`).
    pub fn r_double_prime(&self, beta_prime: u8, alpha_prime: u8, beta: u8, alpha: u8) -> Scalar {
        let m = self.shape.m;
        assert!(
            (1..=m).contains(&alpha)
                && (1..=m).contains(&beta)
                && (1..=m).contains(&alpha_prime)
                && (1..=m).contains(&beta_prime),
            "column index out of range 1..={m}"
        );
        if alpha != beta && beta == beta_prime && alpha == alpha_prime {
            Scalar::q_pow(-1)
        } else if alpha == beta && alpha == alpha_prime && alpha == beta_prime {
            Scalar::one()
        } else if alpha == beta && alpha_prime == beta_prime && alpha_prime > alpha {
            self.r_diag_tail.clone()
        } else {
            Scalar::zero()
        }
    }

    /// Nonzero `(b', a', value)` entries of `r_prime` for fixed `(b, a)`.
    fn r_prime_support(&self, b: u8, a: u8) -> Vec<(u8, u8, Scalar)> {
        if a != b {
            vec![(b, a, Scalar::q_pow(-1))]
        } else {
            let mut v = vec![(a, a, self.r_diag_one.clone())];
            for t in (a + 1)..=self.shape.n {
                v.push((t, t, self.r_diag_tail.clone()));
            }
            v
        }
    }

    /// Nonzero `(β', α', value)` entries of `r_double_prime` for fixed `(β, α)`.
    fn r_double_prime_support(&self, beta: u8, alpha: u8) -> Vec<(u8, u8, Scalar)> {
        if alpha != beta {
            vec![(beta, alpha, Scalar::q_pow(-1))]
        } else {
            let mut v = vec![(alpha, alpha, Scalar::one())];
            for t in (alpha + 1)..=self.shape.m {
                v.push((t, t, self.r_diag_tail.clone()));
            }
            v
        }
    }

    /// Normal-order a coefficient-word pair into the canonical basis.
    pub fn normal_form(&self, coeff: Scalar, word: &[Letter]) -> Element {
        let mut out = Element::zero();
        if coeff.is_zero() {
            return out;
        }
        let mut work: Vec<(Scalar, Vec<Letter>)> = vec![(coeff, word.to_vec())];
        while let Some((c, w)) = work.pop() {
            match find_violation(&w) {
                None => out.add_term(NormalMonomial::from_normal_word(&w), c),
                Some((i, v)) => {
                    #[cfg(debug_assertions)]
                    let before = rewrite_measure(&w);
                    let branches = self.rewrite_at(&c, &w, i, v);
                    #[cfg(debug_assertions)]
                    for (_, bw) in &branches {
                        debug_assert!(
                            rewrite_measure(bw) < before,
                            "rewrite measure failed to decrease"
                        );
                    }
                    work.extend(branches);
                }
            }
        }
        out
    }

    fn rewrite_at(
        &self,
        coeff: &Scalar,
        word: &[Letter],
        i: usize,
        violation: Violation,
    ) -> Vec<(Scalar, Vec<Letter>)> {
        let mut branches = Vec::new();
        match violation {
            Violation::F0F0 => {
                let mut w = word.to_vec();
                w.remove(i + 1);
                branches.push((coeff.clone(), w));
            }
            Violation::Annihilate => {}
            Violation::Mixed => {
                let (Letter::ZStar(bs), Letter::Z(az)) = (word[i], word[i + 1]) else {
                    unreachable!()
                };
                let (b, beta) = (bs.a, bs.alpha);
                let (a, alpha) = (az.a, az.alpha);
                for (bp, ap, rv) in self.r_prime_support(b, a) {
                    for (betap, alphap, rw) in self.r_double_prime_support(beta, alpha) {
                        let c = &(&(coeff * &self.q2) * &rv) * &rw;
                        let mut w = word.to_vec();
                        w[i] = Letter::z(ap, alphap);
                        w[i + 1] = Letter::zs(bp, betap);
                        branches.push((c, w));
                    }
                }
                if a == b && alpha == beta {
                    let mut w = word.to_vec();
                    w.remove(i + 1);
                    w.remove(i);
                    branches.push((coeff * &self.one_minus_q2, w));
                }
            }
            Violation::ZSwap => {
                let (Letter::Z(x), Letter::Z(y)) = (word[i], word[i + 1]) else {
                    unreachable!()
                };
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                if x.a == y.a || x.alpha == y.alpha {
                    // same row or same column: z_x z_y = q^-1 z_y z_x
                    branches.push((coeff * &Scalar::q_pow(-1), swapped));
                } else if x.alpha < y.alpha {
                    // decreasing row, increasing column: plain commutation
                    branches.push((coeff.clone(), swapped));
                } else {
                    // both decreasing: swap plus the exchange correction
                    branches.push((coeff.clone(), swapped));
                    let mut ex = word.to_vec();
                    ex[i] = Letter::z(y.a, x.alpha);
                    ex[i + 1] = Letter::z(x.a, y.alpha);
                    branches.push((coeff * &self.neg_q_minus_q_inv, ex));
                }
            }
            Violation::ZStarSwap => {
                let (Letter::ZStar(x), Letter::ZStar(y)) = (word[i], word[i + 1]) else {
                    unreachable!()
                };
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                if x.a == y.a || x.alpha == y.alpha {
                    branches.push((coeff * &Scalar::q_pow(-1), swapped));
                } else if x.alpha > y.alpha {
                    branches.push((coeff.clone(), swapped));
                } else {
                    branches.push((coeff.clone(), swapped));
                    let mut ex = word.to_vec();
                    ex[i] = Letter::zs(y.a, x.alpha);
                    ex[i + 1] = Letter::zs(x.a, y.alpha);
                    branches.push((coeff * &self.neg_q_minus_q_inv, ex));
                }
            }
        }
        branches
    }

    /// Bilinear product: concatenate words, then normal-order.
    pub fn multiply(&self, f: &Element, g: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in f.terms() {
            let w1 = m1.letters();
            for (m2, c2) in g.terms() {
                let mut w = w1.clone();
                w.extend(m2.letters());
                let prod = self.normal_form(c1 * c2, &w);
                out = out.add(&prod);
            }
        }
        out
    }

    /// The complete list of defining relations as formal word identities.
    pub fn defining_relations(&self) -> Vec<Relation> {
        let mut rels = Vec::new();
        let letters = self.shape.letters();
        let one = Scalar::one();
        // z-z relations, in the printed orientation
        for &x in &letters {
            for &y in &letters {
                let (a, alpha) = (x.a, x.alpha);
                let (b, beta) = (y.a, y.alpha);
                let lhs = vec![(one.clone(), vec![Letter::Z(x), Letter::Z(y)])];
                if (a == b && alpha < beta) || (a < b && alpha == beta) {
                    rels.push(Relation {
                        name: format!("zz q-commute z[{a},{alpha}] z[{b},{beta}]"),
                        lhs,
                        rhs: vec![(Scalar::q_pow(1), vec![Letter::Z(y), Letter::Z(x)])],
                    });
                } else if a < b && alpha > beta {
                    rels.push(Relation {
                        name: format!("zz commute z[{a},{alpha}] z[{b},{beta}]"),
                        lhs,
                        rhs: vec![(one.clone(), vec![Letter::Z(y), Letter::Z(x)])],
                    });
                } else if a < b && alpha < beta {
                    rels.push(Relation {
                        name: format!("zz exchange z[{a},{alpha}] z[{b},{beta}]"),
                        lhs,
                        rhs: vec![
                            (one.clone(), vec![Letter::Z(y), Letter::Z(x)]),
                            (
                                &Scalar::q_pow(1) - &Scalar::q_pow(-1),
                                vec![Letter::z(a, beta), Letter::z(b, alpha)],
                            ),
                        ],
                    });
                }
            }
        }
        // mixed relations for every pair of letters
        for &y in &letters {
            for &x in &letters {
                let (b, beta) = (y.a, y.alpha);
                let (a, alpha) = (x.a, x.alpha);
                let mut rhs = Vec::new();
                for (bp, ap, rv) in self.r_prime_support(b, a) {
                    for (betap, alphap, rw) in self.r_double_prime_support(beta, alpha) {
                        rhs.push((
                            &(&self.q2 * &rv) * &rw,
                            vec![Letter::z(ap, alphap), Letter::zs(bp, betap)],
                        ));
                    }
                }
                if a == b && alpha == beta {
                    rhs.push((self.one_minus_q2.clone(), vec![]));
                }
                rels.push(Relation {
                    name: format!("mixed zs[{b},{beta}] z[{a},{alpha}]"),
                    lhs: vec![(one.clone(), vec![Letter::ZStar(y), Letter::Z(x)])],
                    rhs,
                });
            }
        }
        // delta relations
        for &x in &letters {
            rels.push(Relation {
                name: format!("f0 annihilates z[{},{}]", x.a, x.alpha),
                lhs: vec![(one.clone(), vec![Letter::F0, Letter::Z(x)])],
                rhs: vec![],
            });
            rels.push(Relation {
                name: format!("zs[{},{}] annihilates f0", x.a, x.alpha),
                lhs: vec![(one.clone(), vec![Letter::ZStar(x), Letter::F0])],
                rhs: vec![],
            });
        }
        rels.push(Relation {
            name: "f0 idempotent".to_string(),
            lhs: vec![(one.clone(), vec![Letter::F0, Letter::F0])],
            rhs: vec![(one, vec![Letter::F0])],
        });
        rels
    }

    /// Normal form of a formal combination of words.
    pub fn normal_form_combination(&self, combo: &[(Scalar, Vec<Letter>)]) -> Element {
        let mut out = Element::zero();
        for (c, w) in combo {
            out = out.add(&self.normal_form(c.clone(), w));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: u8, n: u8) -> Shape {
        Shape::new(m, n).unwrap()
    }

    fn q_pow(k: i64) -> Scalar {
        Scalar::q_pow(k)
    }

    #[test]
    fn r_prime_table_entries() {
        let alg = Algebra::new(shape(2, 2));
        assert_eq!(alg.r_prime(1, 2, 1, 2), q_pow(-1));
        assert_eq!(alg.r_prime(1, 1, 1, 1), Scalar::one());
        assert_eq!(alg.r_prime(1, 1, 2, 2), -&(&q_pow(-2) - &Scalar::one()));
        assert_eq!(alg.r_prime(1, 2, 2, 1), Scalar::zero());
    }

    #[test]
    fn r_double_prime_table_entries() {
        let alg = Algebra::new(shape(2, 2));
        assert_eq!(alg.r_double_prime(2, 1, 2, 1), q_pow(-1));
        assert_eq!(alg.r_double_prime(1, 1, 1, 1), Scalar::one());
        assert_eq!(
            alg.r_double_prime(2, 2, 1, 1),
            -&(&q_pow(-2) - &Scalar::one())
        );
    }

    #[test]
    fn corner_relation_all_shapes() {
        // zs[n,m]*z[n,m] -> q^2 z[n,m]*zs[n,m] + (1 - q^2)
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let alg = Algebra::new(shape(m, n));
            let corner = ZIndex::new(n, m);
            let got = alg.normal_form(Scalar::one(), &[Letter::ZStar(corner), Letter::Z(corner)]);
            let mut want = Element::from_monomial(
                NormalMonomial::from_parts(vec![corner], false, vec![corner]),
                q_pow(2),
            );
            want.add_term(NormalMonomial::one(), &Scalar::one() - &q_pow(2));
            assert_eq!(got, want, "shape ({m},{n})");
        }
    }

    #[test]
    fn z_swap_same_row() {
        // z[1,2] z[1,1] = q^-1 z[1,1] z[1,2]   (m = n = 2)
        let alg = Algebra::new(shape(2, 2));
        let got = alg.normal_form(Scalar::one(), &[Letter::z(1, 2), Letter::z(1, 1)]);
        let want = Element::from_monomial(
            NormalMonomial::from_parts(vec![ZIndex::new(1, 1), ZIndex::new(1, 2)], false, vec![]),
            q_pow(-1),
        );
        assert_eq!(got, want);
        // and the printed identity z[1,1] z[1,2] = q * (z[1,2] z[1,1])
        let x = alg.normal_form(Scalar::one(), &[Letter::z(1, 1), Letter::z(1, 2)]);
        let y = alg.normal_form(q_pow(1), &[Letter::z(1, 2), Letter::z(1, 1)]);
        assert_eq!(x, y);
    }

    #[test]
    fn f0_annihilation() {
        let alg = Algebra::new(shape(1, 1));
        let z = ZIndex::new(1, 1);
        assert!(alg
            .normal_form(Scalar::one(), &[Letter::F0, Letter::Z(z)])
            .is_zero());
        assert!(alg
            .normal_form(Scalar::one(), &[Letter::ZStar(z), Letter::F0])
            .is_zero());
        let f0f0 = alg.normal_form(Scalar::one(), &[Letter::F0, Letter::F0]);
        assert_eq!(
            f0f0,
            Element::from_monomial(NormalMonomial::f0(), Scalar::one())
        );
    }

    #[test]
    fn f0_contraction() {
        // One mixed step, then the delta rules:
        // f0 · (z* z f0) = f0 (q^2 z z* + (1 - q^2)) f0 = (1 - q^2) f0.
        let alg = Algebra::new(shape(1, 1));
        let z = ZIndex::new(1, 1);
        let f0 = Element::from_monomial(NormalMonomial::f0(), Scalar::one());
        let zszf0 = alg.normal_form(Scalar::one(), &[Letter::ZStar(z), Letter::Z(z), Letter::F0]);
        let got = alg.multiply(&f0, &zszf0);
        let want = Element::from_monomial(NormalMonomial::f0(), &Scalar::one() - &q_pow(2));
        assert_eq!(got, want);
        // while z z* f0 itself dies on the right delta rule
        assert!(alg
            .normal_form(Scalar::one(), &[Letter::Z(z), Letter::ZStar(z), Letter::F0])
            .is_zero());
    }

    #[test]
    fn multiply_unit_and_normal_monomial() {
        let alg = Algebra::new(shape(1, 1));
        let z = ZIndex::new(1, 1);
        let f = alg.normal_form(
            Scalar::q_pow(3),
            &[Letter::Z(z), Letter::F0, Letter::ZStar(z)],
        );
        assert_eq!(alg.multiply(&Element::one(), &f), f);
        // z f0 · z* is already normal
        let zf0 = alg.normal_form(Scalar::one(), &[Letter::Z(z), Letter::F0]);
        let zs = Element::from_monomial(NormalMonomial::single_zstar(z), Scalar::one());
        let got = alg.multiply(&zf0, &zs);
        assert_eq!(
            got,
            Element::from_monomial(
                NormalMonomial::from_parts(vec![z], true, vec![z]),
                Scalar::one()
            )
        );
    }

    #[test]
    fn star_is_involutive_and_fixes_f0() {
        let alg = Algebra::new(shape(2, 2));
        let w = [
            Letter::z(1, 2),
            Letter::z(2, 1),
            Letter::F0,
            Letter::zs(1, 1),
        ];
        let f = alg.normal_form(Scalar::q_pow(-1), &w);
        assert_eq!(f.star().star(), f);
        let f0 = Element::from_monomial(NormalMonomial::f0(), Scalar::one());
        assert_eq!(f0.star(), f0);
        let z = Element::from_monomial(NormalMonomial::single_z(ZIndex::new(1, 2)), Scalar::one());
        assert_eq!(
            z.star(),
            Element::from_monomial(
                NormalMonomial::single_zstar(ZIndex::new(1, 2)),
                Scalar::one()
            )
        );
    }

    #[test]
    fn bidegree_and_projection() {
        let m = NormalMonomial::from_parts(vec![ZIndex::new(2, 2)], true, vec![ZIndex::new(2, 2)]);
        assert_eq!(m.bidegree(), (1, 1, true));
        assert_eq!(NormalMonomial::f0().bidegree(), (0, 0, true));
        let two_z =
            NormalMonomial::from_parts(vec![ZIndex::new(1, 1), ZIndex::new(2, 1)], false, vec![]);
        assert_eq!(two_z.bidegree(), (2, 0, false));

        let mut e = Element::from_monomial(NormalMonomial::f0(), Scalar::one());
        e.add_term(NormalMonomial::single_z(ZIndex::new(1, 1)), Scalar::one());
        assert_eq!(
            e.project_finite(),
            Element::from_monomial(NormalMonomial::f0(), Scalar::one())
        );
        assert_eq!(Element::one().project_finite(), Element::zero());
        assert!(!e.is_finite());
    }

    #[test]
    fn relations_hold_under_own_rewriting() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let alg = Algebra::new(shape(m, n));
            for rel in alg.defining_relations() {
                let lhs = alg.normal_form_combination(&rel.lhs);
                let rhs = alg.normal_form_combination(&rel.rhs);
                assert_eq!(lhs, rhs, "{} in shape ({m},{n})", rel.name);
            }
        }
    }

    #[test]
    fn ideal_is_two_sided() {
        let alg = Algebra::new(shape(2, 2));
        let f = alg.normal_form(
            Scalar::one(),
            &[Letter::z(1, 2), Letter::F0, Letter::zs(2, 1)],
        );
        let g = alg.normal_form(Scalar::one(), &[Letter::z(2, 2), Letter::zs(1, 1)]);
        let left = alg.multiply(&g, &f);
        let right = alg.multiply(&f, &g);
        assert_eq!(left.project_finite(), left);
        assert_eq!(right.project_finite(), right);
    }

    #[test]
    fn display_matches_grammar() {
        let alg = Algebra::new(shape(1, 1));
        let z = ZIndex::new(1, 1);
        let e = alg.normal_form(Scalar::one(), &[Letter::ZStar(z), Letter::Z(z)]);
        assert_eq!(e.to_string(), "q^2 * z[1,1]*zs[1,1] + (1 - q^2)");
        assert_eq!(Element::zero().to_string(), "0");
        let neg = Element::from_monomial(NormalMonomial::single_z(z), -&Scalar::q_pow(1));
        assert_eq!(neg.to_string(), "-q * z[1,1]");
    }
}
