//! Chevalley generator actions on the quantized function algebras.
//!
//! The base cases are transcriptions of the defining action tables: `E_k`,
//! `F_k` and the weight tables on the letters `z[a,α]`, and the extension
//! to `f0`. `K_k^(±1)` acts as `q^(±weight)` since every monomial is a
//! weight vector. Products are handled by the coproduct Leibniz rule of a
//! configurable [`HopfConvention`]; starred letters are never transcribed
//! by hand but derived through the antipode-star identity
//! `g·(f*) = (S^(-1)(g*)·f)*` and cached.
//!
//! Nothing here is taken on trust: [`validate_covariance`] mechanically
//! checks that every generator maps every defining relation to zero, that
//! the star identity holds, and that the operator relations
//! (`K_i E_j K_i^(-1)` scaling and `[E_i, F_j]`) hold degree by degree.
//! [`Action::new`] refuses a convention that fails the relation checks.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, Element, Letter, NormalMonomial, Shape, ZIndex};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone)]
pub enum ActionError {
    #[error("convention failed the covariance gate: {0}")]
    Unvalidated(CovarianceFailure),
}

/// Which Chevalley generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GenKind {
    E,
    F,
    KPlus,
    KMinus,
}

/// A generator `E_k`, `F_k` or `K_k^(±1)`, `k` in `1..N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QGen {
    pub kind: GenKind,
    pub k: u8,
}

impl QGen {
    pub fn e(k: u8) -> QGen {
        QGen {
            kind: GenKind::E,
            k,
        }
    }

    pub fn f(k: u8) -> QGen {
        QGen {
            kind: GenKind::F,
            k,
        }
    }

    pub fn k_plus(k: u8) -> QGen {
        QGen {
            kind: GenKind::KPlus,
            k,
        }
    }

    pub fn k_minus(k: u8) -> QGen {
        QGen {
            kind: GenKind::KMinus,
            k,
        }
    }

    /// All generators for the shape: `E_k, F_k, K_k^(±1)` for each node.
    pub fn all(shape: Shape) -> Vec<QGen> {
        let mut v = Vec::new();
        for k in 1..shape.size() {
            v.push(QGen::e(k));
            v.push(QGen::f(k));
            v.push(QGen::k_plus(k));
            v.push(QGen::k_minus(k));
        }
        v
    }
}

impl fmt::Display for QGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::E => write!(f, "E{}", self.k),
            GenKind::F => write!(f, "F{}", self.k),
            GenKind::KPlus => write!(f, "K{}", self.k),
            GenKind::KMinus => write!(f, "Ki{}", self.k),
        }
    }
}

/// Eigenvalues of the weight operators `H_1 .. H_(N-1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    /// Component for node `k` (1-based).
    pub fn component(&self, k: u8) -> i64 {
        self.0[(k - 1) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Weight of the letter `z[a,α]` at node `k`.
pub(crate) fn letter_weight_component(shape: Shape, z: ZIndex, k: u8) -> i64 {
    let n = shape.n();
    let m = shape.m();
    let nn = shape.size();
    debug_assert!((1..nn).contains(&k));
    if k < n {
        i64::from(z.a == k) - i64::from(z.a == k + 1)
    } else if k == n {
        i64::from(z.a == n) + i64::from(z.alpha == m)
    } else {
        i64::from(z.alpha == nn - k) - i64::from(z.alpha == nn - k + 1)
    }
}

fn word_weight_component(shape: Shape, word: &[Letter], k: u8) -> i64 {
    word.iter()
        .map(|l| match *l {
            Letter::Z(i) => letter_weight_component(shape, i, k),
            Letter::ZStar(i) => -letter_weight_component(shape, i, k),
            Letter::F0 => 0,
        })
        .sum()
}

/// Weight of a basis monomial: additive over letters, with starred letters
/// contributing negated weights and `f0` contributing zero.
pub fn weight_of(shape: Shape, mono: &NormalMonomial) -> Weight {
    let word = mono.letters();
    Weight(
        (1..shape.size())
            .map(|k| word_weight_component(shape, &word, k))
            .collect(),
    )
}

/// A scalar multiple of a product of generators, used for antipode and
/// star images. The word acts left to right as operator composition:
/// `[g1, g2]` applied to `f` is `g1·(g2·f)`.
#[derive(Clone, Debug)]
pub struct GenWord {
    pub coeff: Scalar,
    pub gens: Vec<QGen>,
}

/// The coproduct Leibniz rule variants.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoproductStyle {
    /// `Δ(E) = E⊗1 + K⊗E`, `Δ(F) = F⊗K^(-1) + 1⊗F`.
    Standard,
    /// `Δ(E) = E⊗K + 1⊗E`, `Δ(F) = F⊗1 + K^(-1)⊗F`. Ships as a negative
    /// control: it does not preserve the defining relations.
    Swapped,
}

/// The full Hopf structure choice: coproduct style, antipode table and
/// counit. The star table on generators is part of the real form and does
/// not vary with the convention.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HopfConvention {
    pub style: CoproductStyle,
}

impl HopfConvention {
    pub fn standard() -> HopfConvention {
        HopfConvention {
            style: CoproductStyle::Standard,
        }
    }

    pub fn swapped() -> HopfConvention {
        HopfConvention {
            style: CoproductStyle::Swapped,
        }
    }

    /// Power of `K_k` applied to letters left of the acting position.
    fn left_twist(&self, kind: GenKind) -> i64 {
        match (self.style, kind) {
            (CoproductStyle::Standard, GenKind::E) => 1,
            (CoproductStyle::Standard, GenKind::F) => 0,
            (CoproductStyle::Swapped, GenKind::E) => 0,
            (CoproductStyle::Swapped, GenKind::F) => -1,
            _ => 0,
        }
    }

    /// Power of `K_k` applied to letters right of the acting position.
    fn right_twist(&self, kind: GenKind) -> i64 {
        match (self.style, kind) {
            (CoproductStyle::Standard, GenKind::E) => 0,
            (CoproductStyle::Standard, GenKind::F) => -1,
            (CoproductStyle::Swapped, GenKind::E) => 1,
            (CoproductStyle::Swapped, GenKind::F) => 0,
            _ => 0,
        }
    }

    /// Inverse antipode on generators, as a generator word.
    pub fn antipode_inv(&self, g: QGen) -> GenWord {
        let minus_one = -&Scalar::one();
        match (self.style, g.kind) {
            (_, GenKind::KPlus) => GenWord {
                coeff: Scalar::one(),
                gens: vec![QGen::k_minus(g.k)],
            },
            (_, GenKind::KMinus) => GenWord {
                coeff: Scalar::one(),
                gens: vec![QGen::k_plus(g.k)],
            },
            (CoproductStyle::Standard, GenKind::E) => GenWord {
                coeff: minus_one,
                gens: vec![QGen::e(g.k), QGen::k_minus(g.k)],
            },
            (CoproductStyle::Standard, GenKind::F) => GenWord {
                coeff: minus_one,
                gens: vec![QGen::k_plus(g.k), QGen::f(g.k)],
            },
            (CoproductStyle::Swapped, GenKind::E) => GenWord {
                coeff: minus_one,
                gens: vec![QGen::k_minus(g.k), QGen::e(g.k)],
            },
            (CoproductStyle::Swapped, GenKind::F) => GenWord {
                coeff: minus_one,
                gens: vec![QGen::f(g.k), QGen::k_plus(g.k)],
            },
        }
    }

    /// The counit: zero on `E` and `F`, one on `K^(±1)`.
    pub fn counit(&self, g: QGen) -> Scalar {
        match g.kind {
            GenKind::E | GenKind::F => Scalar::zero(),
            GenKind::KPlus | GenKind::KMinus => Scalar::one(),
        }
    }
}

/// The involution on generators for the real form with distinguished node
/// `n`: `E_j^* = ±K_j F_j`, `F_j^* = ±E_j K_j^(-1)` (minus exactly at
/// `j = n`), `(K_j^(±1))^* = K_j^(±1)`.
pub fn star_gen(n: u8, g: QGen) -> GenWord {
    let sign = if g.k == n {
        -&Scalar::one()
    } else {
        Scalar::one()
    };
    match g.kind {
        GenKind::E => GenWord {
            coeff: sign,
            gens: vec![QGen::k_plus(g.k), QGen::f(g.k)],
        },
        GenKind::F => GenWord {
            coeff: sign,
            gens: vec![QGen::e(g.k), QGen::k_minus(g.k)],
        },
        GenKind::KPlus => GenWord {
            coeff: Scalar::one(),
            gens: vec![QGen::k_plus(g.k)],
        },
        GenKind::KMinus => GenWord {
            coeff: Scalar::one(),
            gens: vec![QGen::k_minus(g.k)],
        },
    }
}

/// `S^(-1)(g^*)`, the operator whose starred action reproduces `g` on
/// starred arguments.
pub fn star_antipode_inv(conv: &HopfConvention, n: u8, g: QGen) -> GenWord {
    let starred = star_gen(n, g);
    let mut coeff = starred.coeff;
    let mut gens = Vec::new();
    for h in starred.gens.iter().rev() {
        let aw = conv.antipode_inv(*h);
        coeff = &coeff * &aw.coeff;
        gens.extend(aw.gens);
    }
    GenWord { coeff, gens }
}

/// Uncached action engine. Base values on starred letters are derived from
/// the antipode-star identity on every call; [`Action`] freezes them.
struct RawAction<'a> {
    alg: &'a Algebra,
    conv: &'a HopfConvention,
}

impl<'a> RawAction<'a> {
    fn shape(&self) -> Shape {
        self.alg.shape()
    }

    fn base_z(&self, g: QGen, z: ZIndex) -> Element {
        base_on_z(self.alg, g, z)
    }

    fn base_f0(&self, g: QGen) -> Element {
        base_on_f0(self.alg, g)
    }

    fn base_zstar(&self, g: QGen, z: ZIndex) -> Element {
        let gw = star_antipode_inv(self.conv, self.shape().n(), g);
        let plain = Element::from_monomial(NormalMonomial::single_z(z), Scalar::one());
        self.act_genword(&gw, &plain).star()
    }

    fn base_letter(&self, g: QGen, l: Letter) -> Element {
        match l {
            Letter::Z(i) => self.base_z(g, i),
            Letter::ZStar(i) => self.base_zstar(g, i),
            Letter::F0 => self.base_f0(g),
        }
    }

    fn act_word(&self, g: QGen, coeff: &Scalar, word: &[Letter]) -> Element {
        act_word_with(self.alg, self.conv, g, coeff, word, &|g, l| {
            self.base_letter(g, l)
        })
    }

    fn act_element(&self, g: QGen, f: &Element) -> Element {
        let mut out = Element::zero();
        for (mono, c) in f.terms() {
            out = out.add(&self.act_word(g, c, &mono.letters()));
        }
        out
    }

    fn act_genword(&self, gw: &GenWord, f: &Element) -> Element {
        let mut cur = f.scale(&gw.coeff);
        for g in gw.gens.iter().rev() {
            cur = self.act_element(*g, &cur);
        }
        cur
    }
}

/// Action tables on the plain letters, transcribed from the defining
/// action of the generators on `z[a,α]`.
fn base_on_z(alg: &Algebra, g: QGen, z: ZIndex) -> Element {
    let shape = alg.shape();
    let (n, m, nn) = (shape.n(), shape.m(), shape.size());
    let (a, alpha) = (z.a, z.alpha);
    let k = g.k;
    let s = Scalar::s_pow(1);
    match g.kind {
        GenKind::KPlus | GenKind::KMinus => {
            let sign = if g.kind == GenKind::KPlus { 1 } else { -1 };
            let w = letter_weight_component(shape, z, k);
            Element::from_monomial(NormalMonomial::single_z(z), Scalar::q_pow(sign * w))
        }
        GenKind::F => {
            if k == n {
                if a == n && alpha == m {
                    Element::scalar(s)
                } else {
                    Element::zero()
                }
            } else if k < n && a == k {
                alg.normal_form(s, &[Letter::z(a + 1, alpha)])
            } else if k > n && alpha == nn - k {
                alg.normal_form(s, &[Letter::z(a, alpha + 1)])
            } else {
                Element::zero()
            }
        }
        GenKind::E => {
            if k == n {
                let c = -&s;
                match (a == n, alpha == m) {
                    (false, false) => alg.normal_form(
                        &c * &Scalar::q_pow(-1),
                        &[Letter::z(a, m), Letter::z(n, alpha)],
                    ),
                    (true, true) => alg.normal_form(c, &[Letter::z(n, m), Letter::z(n, m)]),
                    _ => alg.normal_form(c, &[Letter::z(n, m), Letter::z(a, alpha)]),
                }
            } else {
                let c = Scalar::s_pow(-1);
                if k < n && a == k + 1 {
                    alg.normal_form(c, &[Letter::z(a - 1, alpha)])
                } else if k > n && alpha == nn - k + 1 {
                    alg.normal_form(c, &[Letter::z(a, alpha - 1)])
                } else {
                    Element::zero()
                }
            }
        }
    }
}

/// Action tables on the delta element.
fn base_on_f0(alg: &Algebra, g: QGen) -> Element {
    let shape = alg.shape();
    let (n, m) = (shape.n(), shape.m());
    let corner = ZIndex::new(n, m);
    match g.kind {
        GenKind::KPlus | GenKind::KMinus => {
            Element::from_monomial(NormalMonomial::f0(), Scalar::one())
        }
        GenKind::E => {
            if g.k == n {
                // -(q^(1/2)/(1 - q^2)) z[n,m] f0
                let c = (-&Scalar::s_pow(1))
                    .checked_div(&(&Scalar::one() - &Scalar::q_pow(2)))
                    .expect("1 - q^2 is nonzero");
                Element::from_monomial(NormalMonomial::from_parts(vec![corner], true, vec![]), c)
            } else {
                Element::zero()
            }
        }
        GenKind::F => {
            if g.k == n {
                // -(q^(1/2)/(q^-2 - 1)) f0 zs[n,m]
                let c = (-&Scalar::s_pow(1))
                    .checked_div(&(&Scalar::q_pow(-2) - &Scalar::one()))
                    .expect("q^-2 - 1 is nonzero");
                Element::from_monomial(NormalMonomial::from_parts(vec![], true, vec![corner]), c)
            } else {
                Element::zero()
            }
        }
    }
}

/// The coproduct Leibniz recursion over a free word: `K^(±1)` scales by the
/// total weight, `E`/`F` visit each position with `K`-twists from the
/// convention on the flanks.
fn act_word_with(
    alg: &Algebra,
    conv: &HopfConvention,
    g: QGen,
    coeff: &Scalar,
    word: &[Letter],
    base: &dyn Fn(QGen, Letter) -> Element,
) -> Element {
    let shape = alg.shape();
    match g.kind {
        GenKind::KPlus | GenKind::KMinus => {
            let sign = if g.kind == GenKind::KPlus { 1 } else { -1 };
            let w = word_weight_component(shape, word, g.k);
            alg.normal_form(coeff * &Scalar::q_pow(sign * w), word)
        }
        GenKind::E | GenKind::F => {
            let lt = conv.left_twist(g.kind);
            let rt = conv.right_twist(g.kind);
            let mut out = Element::zero();
            for i in 0..word.len() {
                let hit = base(g, word[i]);
                if hit.is_zero() {
                    continue;
                }
                let mut twist = 0i64;
                if lt != 0 {
                    twist += lt * word_weight_component(shape, &word[..i], g.k);
                }
                if rt != 0 {
                    twist += rt * word_weight_component(shape, &word[i + 1..], g.k);
                }
                let c = coeff * &Scalar::q_pow(twist);
                for (bm, bc) in hit.terms() {
                    let mut w: Vec<Letter> = word[..i].to_vec();
                    w.extend(bm.letters());
                    w.extend_from_slice(&word[i + 1..]);
                    out = out.add(&alg.normal_form(&c * bc, &w));
                }
            }
            out
        }
    }
}

/// A validated, table-backed module action for one shape and convention.
pub struct Action {
    alg: Algebra,
    conv: HopfConvention,
    z_table: HashMap<(QGen, ZIndex), Element>,
    zstar_table: HashMap<(QGen, ZIndex), Element>,
    f0_table: HashMap<QGen, Element>,
}

impl Action {
    /// Build the action tables and run the covariance gate: every generator
    /// must annihilate every defining relation and satisfy the star
    /// identity on letters. A convention that fails is refused.
    pub fn new(alg: &Algebra, conv: HopfConvention) -> Result<Action, ActionError> {
        let action = Action::new_unchecked(alg, conv);
        let raw = RawAction { alg, conv: &conv };
        if let Some(failure) = relation_preservation_failure(alg, &raw) {
            return Err(ActionError::Unvalidated(failure));
        }
        if let Some(failure) = star_compat_failure(alg, &raw, 1) {
            return Err(ActionError::Unvalidated(failure));
        }
        Ok(action)
    }

    /// Standard convention; panics only if the algebra tables are corrupt.
    pub fn standard(alg: &Algebra) -> Action {
        Action::new(alg, HopfConvention::standard())
            .expect("standard convention passes the covariance gate")
    }

    fn new_unchecked(alg: &Algebra, conv: HopfConvention) -> Action {
        let raw = RawAction { alg, conv: &conv };
        let mut z_table = HashMap::new();
        let mut zstar_table = HashMap::new();
        let mut f0_table = HashMap::new();
        for g in QGen::all(alg.shape()) {
            f0_table.insert(g, raw.base_f0(g));
            for z in alg.shape().letters() {
                z_table.insert((g, z), raw.base_z(g, z));
                zstar_table.insert((g, z), raw.base_zstar(g, z));
            }
        }
        Action {
            alg: alg.clone(),
            conv,
            z_table,
            zstar_table,
            f0_table,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn shape(&self) -> Shape {
        self.alg.shape()
    }

    pub fn convention(&self) -> &HopfConvention {
        &self.conv
    }

    /// Action on a single letter `z[a,α]`.
    pub fn act_on_z(&self, g: QGen, a: u8, alpha: u8) -> Element {
        self.z_table[&(g, ZIndex::new(a, alpha))].clone()
    }

    /// Action on the delta element.
    pub fn act_on_f0(&self, g: QGen) -> Element {
        self.f0_table[&g].clone()
    }

    /// Action on a starred letter, from the cached antipode-derived table.
    pub fn act_on_zstar(&self, g: QGen, a: u8, alpha: u8) -> Element {
        self.zstar_table[&(g, ZIndex::new(a, alpha))].clone()
    }

    fn base(&self, g: QGen, l: Letter) -> Element {
        match l {
            Letter::Z(i) => self.z_table[&(g, i)].clone(),
            Letter::ZStar(i) => self.zstar_table[&(g, i)].clone(),
            Letter::F0 => self.f0_table[&g].clone(),
        }
    }

    /// Linear extension of the generator action to any element.
    pub fn act(&self, g: QGen, f: &Element) -> Element {
        let mut out = Element::zero();
        for (mono, c) in f.terms() {
            out = out.add(&act_word_with(
                &self.alg,
                &self.conv,
                g,
                c,
                &mono.letters(),
                &|g, l| self.base(g, l),
            ));
        }
        out
    }

    /// Apply a product of generators, rightmost first.
    pub fn act_word(&self, gens: &[QGen], f: &Element) -> Element {
        let mut cur = f.clone();
        for g in gens.iter().rev() {
            cur = self.act(*g, &cur);
        }
        cur
    }

    pub fn counit(&self, g: QGen) -> Scalar {
        self.conv.counit(g)
    }

    pub fn weight_of(&self, mono: &NormalMonomial) -> Weight {
        weight_of(self.alg.shape(), mono)
    }
}

/// One concrete broken identity found by the audit.
#[derive(Debug, Clone)]
pub struct CovarianceFailure {
    pub check: String,
    pub item: String,
    pub generator: String,
    pub detail: String,
}

impl fmt::Display for CovarianceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} broken by {} on {}: {}",
            self.check, self.generator, self.item, self.detail
        )
    }
}

/// Outcome of the covariance audit: what was checked, and the first
/// counterexample if anything failed.
#[derive(Debug)]
pub struct CovarianceReport {
    pub shape: Shape,
    pub relation_checks: usize,
    pub star_checks: usize,
    pub operator_checks: usize,
    pub failure: Option<CovarianceFailure>,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CovarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "covariance ok for shape ({},{}): {} relation, {} star, {} operator checks",
                self.shape.m(),
                self.shape.n(),
                self.relation_checks,
                self.star_checks,
                self.operator_checks
            ),
            Some(fail) => write!(f, "covariance FAILED: {fail}"),
        }
    }
}

fn relation_preservation_failure(alg: &Algebra, raw: &RawAction) -> Option<CovarianceFailure> {
    for rel in alg.defining_relations() {
        for g in QGen::all(alg.shape()) {
            let mut lhs = Element::zero();
            for (c, w) in &rel.lhs {
                lhs = lhs.add(&raw.act_word(g, c, w));
            }
            let mut rhs = Element::zero();
            for (c, w) in &rel.rhs {
                rhs = rhs.add(&raw.act_word(g, c, w));
            }
            if lhs != rhs {
                return Some(CovarianceFailure {
                    check: "relation preservation".to_string(),
                    item: rel.name.clone(),
                    generator: g.to_string(),
                    detail: format!("acted lhs = {lhs}, acted rhs = {rhs}"),
                });
            }
        }
    }
    None
}

fn star_compat_failure(
    alg: &Algebra,
    raw: &RawAction,
    max_degree: usize,
) -> Option<CovarianceFailure> {
    let n = alg.shape().n();
    for mono in alg.shape().monomials_up_to(max_degree) {
        let f = Element::from_monomial(mono.clone(), Scalar::one());
        for g in QGen::all(alg.shape()) {
            let lhs = raw.act_element(g, &f.star());
            let rhs = raw
                .act_genword(&star_antipode_inv(raw.conv, n, g), &f)
                .star();
            if lhs != rhs {
                return Some(CovarianceFailure {
                    check: "star compatibility".to_string(),
                    item: mono.to_string(),
                    generator: g.to_string(),
                    detail: format!("g(f*) = {lhs}, (S^-1(g*)f)* = {rhs}"),
                });
            }
        }
    }
    None
}

fn cartan(i: u8, j: u8) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Quantum integer `(q^w - q^-w)/(q - q^-1)` as an exact scalar.
fn q_bracket(w: i64) -> Scalar {
    (&Scalar::q_pow(w) - &Scalar::q_pow(-w))
        .checked_div(&(&Scalar::q_pow(1) - &Scalar::q_pow(-1)))
        .expect("q - q^-1 is nonzero")
}

fn operator_relation_failure(
    alg: &Algebra,
    raw: &RawAction,
    max_degree: usize,
) -> Option<CovarianceFailure> {
    let shape = alg.shape();
    let monos = shape.monomials_up_to(max_degree);
    for i in 1..shape.size() {
        for j in 1..shape.size() {
            let a = cartan(i, j);
            for mono in &monos {
                let v = Element::from_monomial(mono.clone(), Scalar::one());
                // K_i X_j K_i^-1 = q^(±a_ij) X_j for X = E, F
                for (g, sign) in [(QGen::e(j), 1i64), (QGen::f(j), -1i64)] {
                    let conj = raw.act_element(
                        QGen::k_plus(i),
                        &raw.act_element(g, &raw.act_element(QGen::k_minus(i), &v)),
                    );
                    let scaled = raw.act_element(g, &v).scale(&Scalar::q_pow(sign * a));
                    if conj != scaled {
                        return Some(CovarianceFailure {
                            check: "K-conjugation scaling".to_string(),
                            item: mono.to_string(),
                            generator: format!("K{i} {g} Ki{i}"),
                            detail: format!("conjugated = {conj}, scaled = {scaled}"),
                        });
                    }
                }
                // [E_i, F_j] = δ_ij (K_i - K_i^-1)/(q - q^-1)
                let ef = raw.act_element(QGen::e(i), &raw.act_element(QGen::f(j), &v));
                let fe = raw.act_element(QGen::f(j), &raw.act_element(QGen::e(i), &v));
                let lhs = ef.sub(&fe);
                let rhs = if i == j {
                    let w = word_weight_component(shape, &mono.letters(), i);
                    v.scale(&q_bracket(w))
                } else {
                    Element::zero()
                };
                if lhs != rhs {
                    return Some(CovarianceFailure {
                        check: "EF commutator".to_string(),
                        item: mono.to_string(),
                        generator: format!("[E{i},F{j}]"),
                        detail: format!("commutator = {lhs}, expected = {rhs}"),
                    });
                }
            }
        }
    }
    None
}

/// The full mechanical audit for a shape and convention: relation
/// preservation for every generator, the antipode-star identity on
/// monomials of degree ≤ 2, and the operator relations on all monomials of
/// degree ≤ 3. Returns the first counterexample on failure.
pub fn validate_covariance(alg: &Algebra, conv: &HopfConvention) -> CovarianceReport {
    let raw = RawAction { alg, conv };
    let shape = alg.shape();
    let gens = QGen::all(shape).len();
    let relation_checks = alg.defining_relations().len() * gens;
    let star_checks = shape.monomials_up_to(2).len() * gens;
    let n_monos = shape.monomials_up_to(3).len();
    let nodes = (shape.size() - 1) as usize;
    let operator_checks = nodes * nodes * n_monos * 3;
    let failure = relation_preservation_failure(alg, &raw)
        .or_else(|| star_compat_failure(alg, &raw, 2))
        .or_else(|| operator_relation_failure(alg, &raw, 3));
    CovarianceReport {
        shape,
        relation_checks,
        star_checks,
        operator_checks,
        failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc() -> (Algebra, Action) {
        let alg = Algebra::new(Shape::new(1, 1).unwrap());
        let act = Action::standard(&alg);
        (alg, act)
    }

    fn z_el(a: u8, alpha: u8) -> Element {
        Element::from_monomial(
            NormalMonomial::single_z(ZIndex::new(a, alpha)),
            Scalar::one(),
        )
    }

    fn zpow(alg: &Algebra, k: usize) -> Element {
        let word = vec![Letter::z(alg.shape().n(), alg.shape().m()); k];
        alg.normal_form(Scalar::one(), &word)
    }

    #[test]
    fn base_actions_on_corner_letter() {
        let (alg, act) = disc();
        // F_n z[n,m] = q^(1/2)
        assert_eq!(
            act.act_on_z(QGen::f(1), 1, 1),
            Element::scalar(Scalar::s_pow(1))
        );
        // E_n z[n,m] = -q^(1/2) z^2
        assert_eq!(
            act.act_on_z(QGen::e(1), 1, 1),
            zpow(&alg, 2).scale(&-&Scalar::s_pow(1))
        );
        // K_n z[n,m] = q^2 z[n,m]
        assert_eq!(
            act.act_on_z(QGen::k_plus(1), 1, 1),
            z_el(1, 1).scale(&Scalar::q_pow(2))
        );
    }

    #[test]
    fn e_n_off_corner_case() {
        // shape (2,2): E_2 z[1,1] = -q^(1/2) q^-1 z[1,2] z[2,1]
        let alg = Algebra::new(Shape::new(2, 2).unwrap());
        let act = Action::standard(&alg);
        let want = alg.normal_form(
            &(-&Scalar::s_pow(1)) * &Scalar::q_pow(-1),
            &[Letter::z(1, 2), Letter::z(2, 1)],
        );
        assert_eq!(act.act_on_z(QGen::e(2), 1, 1), want);
    }

    #[test]
    fn f0_actions() {
        let (_, act) = disc();
        let corner = ZIndex::new(1, 1);
        let e_want = Element::from_monomial(
            NormalMonomial::from_parts(vec![corner], true, vec![]),
            (-&Scalar::s_pow(1))
                .checked_div(&(&Scalar::one() - &Scalar::q_pow(2)))
                .unwrap(),
        );
        assert_eq!(act.act_on_f0(QGen::e(1)), e_want);
        let f_want = Element::from_monomial(
            NormalMonomial::from_parts(vec![], true, vec![corner]),
            (-&Scalar::s_pow(1))
                .checked_div(&(&Scalar::q_pow(-2) - &Scalar::one()))
                .unwrap(),
        );
        assert_eq!(act.act_on_f0(QGen::f(1)), f_want);
        assert_eq!(
            act.act_on_f0(QGen::k_plus(1)),
            Element::from_monomial(NormalMonomial::f0(), Scalar::one())
        );
        // k ≠ n: everything vanishes
        let alg2 = Algebra::new(Shape::new(1, 2).unwrap());
        let act2 = Action::standard(&alg2);
        assert!(act2.act_on_f0(QGen::f(1)).is_zero());
        assert!(act2.act_on_f0(QGen::e(1)).is_zero());
    }

    #[test]
    fn zstar_actions_derived_from_antipode() {
        let (_, act) = disc();
        // K z* = q^-2 z*
        assert_eq!(
            act.act_on_zstar(QGen::k_plus(1), 1, 1),
            Element::from_monomial(
                NormalMonomial::single_zstar(ZIndex::new(1, 1)),
                Scalar::q_pow(-2)
            )
        );
        // E z* = q^(-3/2), F z* = -q^(5/2) (z*)^2
        assert_eq!(
            act.act_on_zstar(QGen::e(1), 1, 1),
            Element::scalar(Scalar::s_pow(-3))
        );
        let zs2 = NormalMonomial::from_parts(vec![], false, vec![ZIndex::new(1, 1); 2]);
        assert_eq!(
            act.act_on_zstar(QGen::f(1), 1, 1),
            Element::from_monomial(zs2, -&Scalar::s_pow(5))
        );
    }

    #[test]
    fn leibniz_on_products() {
        let (alg, act) = disc();
        let z2 = zpow(&alg, 2);
        // E(z^2) = -q^(1/2)(1 + q^2) z^3
        let want_e =
            zpow(&alg, 3).scale(&-&(&Scalar::s_pow(1) * &(&Scalar::one() + &Scalar::q_pow(2))));
        assert_eq!(act.act(QGen::e(1), &z2), want_e);
        // F(z^2) = q^(1/2)(q^-2 + 1) z
        let want_f =
            zpow(&alg, 1).scale(&(&Scalar::s_pow(1) * &(&Scalar::q_pow(-2) + &Scalar::one())));
        assert_eq!(act.act(QGen::f(1), &z2), want_f);
    }

    #[test]
    fn ef_commutator_is_quantum_weight() {
        let (_, act) = disc();
        let z = z_el(1, 1);
        let ef = act.act(QGen::e(1), &act.act(QGen::f(1), &z));
        let fe = act.act(QGen::f(1), &act.act(QGen::e(1), &z));
        let got = ef.sub(&fe);
        // (K - K^-1)/(q - q^-1) on weight 2: q + q^-1
        let want = z.scale(&(&Scalar::q_pow(1) + &Scalar::q_pow(-1)));
        assert_eq!(got, want);
    }

    #[test]
    fn counit_values() {
        let conv = HopfConvention::standard();
        assert!(conv.counit(QGen::e(1)).is_zero());
        assert!(conv.counit(QGen::f(2)).is_zero());
        assert!(conv.counit(QGen::k_plus(1)).is_one());
        assert!(conv.counit(QGen::k_minus(3)).is_one());
    }

    #[test]
    fn weights() {
        let shape = Shape::new(1, 1).unwrap();
        let w = weight_of(shape, &NormalMonomial::single_z(ZIndex::new(1, 1)));
        assert_eq!(w, Weight(vec![2]));
        assert!(weight_of(shape, &NormalMonomial::f0()).is_zero());
        let sandwich =
            NormalMonomial::from_parts(vec![ZIndex::new(1, 1)], true, vec![ZIndex::new(1, 1)]);
        assert!(weight_of(shape, &sandwich).is_zero());
        // act(K_k, mono) = q^(weight_k) mono on a bigger shape
        let shape22 = Shape::new(2, 2).unwrap();
        let alg = Algebra::new(shape22);
        let act = Action::standard(&alg);
        for z in shape22.letters() {
            let mono = NormalMonomial::single_z(z);
            let w = weight_of(shape22, &mono);
            for k in 1..shape22.size() {
                assert_eq!(
                    act.act(
                        QGen::k_plus(k),
                        &Element::from_monomial(mono.clone(), Scalar::one())
                    ),
                    Element::from_monomial(mono.clone(), Scalar::q_pow(w.component(k)))
                );
            }
        }
    }

    #[test]
    fn covariance_standard_passes_disc() {
        let alg = Algebra::new(Shape::new(1, 1).unwrap());
        let report = validate_covariance(&alg, &HopfConvention::standard());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn covariance_swapped_fails() {
        let alg = Algebra::new(Shape::new(1, 1).unwrap());
        let report = validate_covariance(&alg, &HopfConvention::swapped());
        assert!(!report.passed());
        let failure = report.failure.unwrap();
        assert_eq!(failure.check, "relation preservation");
        // and the gated constructor refuses it
        assert!(Action::new(&alg, HopfConvention::swapped()).is_err());
    }

    #[test]
    fn covariance_catches_rprime_defect() {
        for (m, n) in [(1u8, 1u8), (1, 2)] {
            let alg = Algebra::with_rprime_defect(Shape::new(m, n).unwrap());
            let report = validate_covariance(&alg, &HopfConvention::standard());
            assert!(!report.passed(), "defect invisible in shape ({m},{n})");
        }
    }

    #[test]
    fn rewriting_preserves_weight() {
        // the defining relations are weight-homogeneous, so every term of a
        // normal form carries the weight of the input word
        let shape = Shape::new(2, 2).unwrap();
        let alg = Algebra::new(shape);
        let letters: Vec<Letter> = shape
            .letters()
            .into_iter()
            .flat_map(|i| [Letter::Z(i), Letter::ZStar(i)])
            .chain([Letter::F0])
            .collect();
        let mut pick = 0usize;
        for len in 0..=4 {
            for trial in 0..40 {
                let word: Vec<Letter> = (0..len)
                    .map(|i| {
                        pick = pick.wrapping_mul(2654435761).wrapping_add(trial + i);
                        letters[pick % letters.len()]
                    })
                    .collect();
                let input_weight: Vec<i64> = (1..shape.size())
                    .map(|k| word_weight_component(shape, &word, k))
                    .collect();
                for (mono, _) in alg.normal_form(Scalar::one(), &word).terms() {
                    assert_eq!(
                        weight_of(shape, mono).0,
                        input_weight,
                        "weight drift rewriting {word:?}"
                    );
                }
            }
        }
    }

    fn arb_monomial(shape: Shape, max_deg: usize) -> impl Strategy<Value = NormalMonomial> {
        let monos = shape.monomials_up_to(max_deg);
        proptest::sample::select(monos)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn module_algebra_law(
            u in arb_monomial(Shape::new(1, 2).unwrap(), 2),
            v in arb_monomial(Shape::new(1, 2).unwrap(), 2),
        ) {
            let alg = Algebra::new(Shape::new(1, 2).unwrap());
            let act = Action::standard(&alg);
            let ue = Element::from_monomial(u, Scalar::one());
            let ve = Element::from_monomial(v, Scalar::one());
            let prod = alg.multiply(&ue, &ve);
            for k in 1..alg.shape().size() {
                // E(uv) = E(u)v + K(u)E(v)
                let e = QGen::e(k);
                let lhs = act.act(e, &prod);
                let rhs = alg
                    .multiply(&act.act(e, &ue), &ve)
                    .add(&alg.multiply(&act.act(QGen::k_plus(k), &ue), &act.act(e, &ve)));
                prop_assert_eq!(&lhs, &rhs);
                // F(uv) = F(u)K^-1(v) + uF(v)
                let f = QGen::f(k);
                let lhs = act.act(f, &prod);
                let rhs = alg
                    .multiply(&act.act(f, &ue), &act.act(QGen::k_minus(k), &ve))
                    .add(&alg.multiply(&ue, &act.act(f, &ve)));
                prop_assert_eq!(&lhs, &rhs);
            }
        }
    }
}
