//! The graded module of finite functions and the invariant integral.
//!
//! `H` is the span of the monomials `w·f0` with `w` a plain `z`-word,
//! graded by word length (equivalently by the `H_0` eigenvalue). Left
//! multiplication by a finite function is a finite-rank operator on `H`;
//! the integral is the trace of that operator twisted by the diagonal
//! operator `Γ = Π_k K_k^(-k(N-k))`. Everything is computed blockwise over
//! the per-degree monomial bases, exactly.
//!
//! Per-degree bases, Gram matrices and twist diagonals are cached behind
//! read-mostly locks; all computations are deterministic and pure.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use thiserror::Error;

use crate::action::{weight_of, Action, QGen};
use crate::algebra::{Element, Letter, NormalMonomial, Shape};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum HarmonicError {
    #[error("element is not a finite function (a term lacks f0)")]
    NotFinite,
    #[error("monomial {0} does not lie in the graded module (needs f0 and no starred letters)")]
    NotHarmonic(String),
}

/// A block of a finite-rank operator between two graded components, in the
/// monomial bases. `matrix[row][col]` is the coefficient of the `row`-th
/// target basis vector in the image of the `col`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorBlock {
    pub source_degree: usize,
    pub target_degree: usize,
    pub matrix: Vec<Vec<Scalar>>,
}

impl OperatorBlock {
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|e| e.is_zero())
    }
}

/// The matrix of the canonical scalar product on one graded component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub degree: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Exact evaluation at rational `q`. Entries are Laurent polynomials in
    /// `q`; an odd power of `s` would be an engine defect.
    pub fn evaluate_at(&self, q_value: &Rational) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.evaluate_at(q_value)
                            .expect("Gram entries are Laurent polynomials in q")
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact positive-definiteness test by Sylvester's criterion: eliminate
/// without pivoting; the leading principal minors are the running pivot
/// products, so all pivots positive is equivalent to all minors positive.
pub fn positive_definite(matrix: &[Vec<Rational>]) -> bool {
    let dim = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    for k in 0..dim {
        let pivot = a[k][k].clone();
        if pivot <= Rational::zero() {
            return false;
        }
        let pivot_row: Vec<Rational> = a[k][k..].to_vec();
        for row in a.iter_mut().skip(k + 1) {
            let factor = &row[k] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for (offset, pv) in pivot_row.iter().enumerate() {
                let delta = &factor * pv;
                row[k + offset] -= delta;
            }
        }
    }
    true
}

/// The graded module `H`, its scalar product, and the invariant integral.
pub struct Harmonic {
    action: Action,
    bases: RwLock<HashMap<usize, Arc<Vec<NormalMonomial>>>>,
    grams: RwLock<HashMap<usize, Arc<GramMatrix>>>,
    gammas: RwLock<HashMap<usize, Arc<Vec<Scalar>>>>,
}

impl Harmonic {
    pub fn new(action: Action) -> Harmonic {
        Harmonic {
            action,
            bases: RwLock::new(HashMap::new()),
            grams: RwLock::new(HashMap::new()),
            gammas: RwLock::new(HashMap::new()),
        }
    }

    pub fn standard(shape: Shape) -> Harmonic {
        let alg = crate::algebra::Algebra::new(shape);
        Harmonic::new(Action::standard(&alg))
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn algebra(&self) -> &crate::algebra::Algebra {
        self.action.algebra()
    }

    pub fn shape(&self) -> Shape {
        self.action.shape()
    }

    /// The degree-`j` monomial basis of `H`: ascending `z`-words of length
    /// `j` times `f0`, in canonical order.
    pub fn basis(&self, degree: usize) -> Arc<Vec<NormalMonomial>> {
        if let Some(b) = self.bases.read().unwrap().get(&degree) {
            return Arc::clone(b);
        }
        let basis: Vec<NormalMonomial> = self
            .shape()
            .z_words(degree)
            .into_iter()
            .map(|w| NormalMonomial::from_parts(w, true, vec![]))
            .collect();
        let arc = Arc::new(basis);
        self.bases
            .write()
            .unwrap()
            .entry(degree)
            .or_insert_with(|| Arc::clone(&arc));
        arc
    }

    /// The grading degree read off the `H_0` eigenvalue
    /// `H_0 = (2/N)(m Σ k H_k + n Σ k H_(N-k) + mn H_n)`, which doubles the
    /// degree on `H`.
    pub fn h0_degree(&self, mono: &NormalMonomial) -> Result<usize, HarmonicError> {
        if !mono.has_f0() || !mono.zsword().is_empty() {
            return Err(HarmonicError::NotHarmonic(mono.to_string()));
        }
        let shape = self.shape();
        let (m, n, nn) = (
            i64::from(shape.m()),
            i64::from(shape.n()),
            i64::from(shape.size()),
        );
        let w = weight_of(shape, mono);
        let mut acc = 0i64;
        for k in 1..n {
            acc += m * k * w.component(k as u8);
        }
        for k in 1..m {
            acc += n * k * w.component((nn - k) as u8);
        }
        acc += m * n * w.component(n as u8);
        let doubled = 2 * acc;
        debug_assert_eq!(
            doubled % (2 * nn),
            0,
            "H_0 eigenvalue must be an even integer"
        );
        Ok((doubled / (2 * nn)) as usize)
    }

    /// The sharp truncation degree `M(f) = 1 + max deg φ` over the terms
    /// `ψ f0 φ*`: left multiplication by `f` kills every `H_j`, `j ≥ M(f)`.
    pub fn degree_bound(&self, f: &Element) -> Result<usize, HarmonicError> {
        if !f.is_finite() {
            return Err(HarmonicError::NotFinite);
        }
        Ok(f.terms()
            .map(|(mono, _)| mono.zsword().len() + 1)
            .max()
            .unwrap_or(0))
    }

    /// Blocks of left multiplication by `f` out of degree `j`, one per
    /// target degree that occurs.
    pub fn t_matrix(&self, f: &Element, degree: usize) -> Vec<OperatorBlock> {
        let source = self.basis(degree);
        let alg = self.algebra();
        // images per column, grouped by target degree
        let mut blocks: HashMap<usize, Vec<Vec<Scalar>>> = HashMap::new();
        for (col, psi) in source.iter().enumerate() {
            let image = alg.multiply(f, &Element::from_monomial(psi.clone(), Scalar::one()));
            for (mono, c) in image.terms() {
                debug_assert!(
                    mono.has_f0() && mono.zsword().is_empty(),
                    "products f·H must land in H"
                );
                let target_degree = mono.zword().len();
                let target = self.basis(target_degree);
                let row = target
                    .iter()
                    .position(|b| b == mono)
                    .expect("image monomial lies in the target basis");
                let block = blocks
                    .entry(target_degree)
                    .or_insert_with(|| vec![vec![Scalar::zero(); source.len()]; target.len()]);
                block[row][col] = c.clone();
            }
        }
        let mut out: Vec<OperatorBlock> = blocks
            .into_iter()
            .map(|(target_degree, matrix)| OperatorBlock {
                source_degree: degree,
                target_degree,
                matrix,
            })
            .collect();
        out.sort_by_key(|b| b.target_degree);
        out
    }

    /// The Gram matrix of the canonical scalar product on degree `j`,
    /// normalized by `(f0, f0) = 1`: entry `(w, w')` is the coefficient of
    /// the bare `f0` in the normal form of `f0 · w* · w' · f0`. Entries of
    /// different weight vanish (rewriting is weight-homogeneous), so only
    /// matching-weight sandwiches are expanded.
    pub fn gram(&self, degree: usize) -> Arc<GramMatrix> {
        if let Some(g) = self.grams.read().unwrap().get(&degree) {
            return Arc::clone(g);
        }
        let basis = self.basis(degree);
        let shape = self.shape();
        let alg = self.algebra();
        let weights: Vec<_> = basis.iter().map(|b| weight_of(shape, b)).collect();
        let dim = basis.len();
        let bare_f0 = NormalMonomial::f0();
        let mut entries = vec![vec![Scalar::zero(); dim]; dim];
        for r in 0..dim {
            for c in 0..dim {
                if weights[r] != weights[c] {
                    continue;
                }
                let mut word: Vec<Letter> = vec![Letter::F0];
                word.extend(basis[r].zword().iter().rev().map(|&i| Letter::ZStar(i)));
                word.extend(basis[c].zword().iter().map(|&i| Letter::Z(i)));
                word.push(Letter::F0);
                let sandwich = alg.normal_form(Scalar::one(), &word);
                entries[r][c] = sandwich.coeff(&bare_f0);
            }
        }
        let arc = Arc::new(GramMatrix { degree, entries });
        self.grams
            .write()
            .unwrap()
            .entry(degree)
            .or_insert_with(|| Arc::clone(&arc));
        arc
    }

    /// Diagonal of the twist `Γ = Π_k K_k^(-k(N-k))` on the degree-`j`
    /// basis: the vector of `q^(-Σ_k k(N-k) λ_k)` over basis weights `λ`.
    pub fn gamma_diag(&self, degree: usize) -> Arc<Vec<Scalar>> {
        if let Some(g) = self.gammas.read().unwrap().get(&degree) {
            return Arc::clone(g);
        }
        let shape = self.shape();
        let nn = i64::from(shape.size());
        let diag: Vec<Scalar> = self
            .basis(degree)
            .iter()
            .map(|b| {
                let w = weight_of(shape, b);
                let exponent: i64 = (1..shape.size())
                    .map(|k| i64::from(k) * (nn - i64::from(k)) * w.component(k))
                    .sum();
                Scalar::q_pow(-exponent)
            })
            .collect();
        let arc = Arc::new(diag);
        self.gammas
            .write()
            .unwrap()
            .entry(degree)
            .or_insert_with(|| Arc::clone(&arc));
        arc
    }

    /// The twist as a diagonal operator block on degree `j`.
    pub fn gamma_rho(&self, degree: usize) -> OperatorBlock {
        let diag = self.gamma_diag(degree);
        let dim = diag.len();
        let mut matrix = vec![vec![Scalar::zero(); dim]; dim];
        for (i, d) in diag.iter().enumerate() {
            matrix[i][i] = d.clone();
        }
        OperatorBlock {
            source_degree: degree,
            target_degree: degree,
            matrix,
        }
    }

    /// The invariant integral: the trace of `T_f Γ`, summed over the
    /// finitely many degrees below the truncation bound of `f`.
    pub fn integrate(&self, f: &Element) -> Result<Scalar, HarmonicError> {
        let bound = self.degree_bound(f)?;
        let alg = self.algebra();
        let mut total = Scalar::zero();
        for degree in 0..bound {
            let basis = self.basis(degree);
            let gamma = self.gamma_diag(degree);
            for (i, psi) in basis.iter().enumerate() {
                let image = alg.multiply(f, &Element::from_monomial(psi.clone(), Scalar::one()));
                let diag = image.coeff(psi);
                if !diag.is_zero() {
                    total = &total + &(&diag * &gamma[i]);
                }
            }
        }
        Ok(total)
    }

    /// Evaluate the degree-`j` Gram matrix at `q` and test positive
    /// definiteness exactly through leading principal minors.
    pub fn check_positive(&self, degree: usize, q_value: &Rational) -> bool {
        positive_definite(&self.gram(degree).evaluate_at(q_value))
    }

    /// The invariance residual `∫(g·f) - ε(g)·∫f`, identically zero for the
    /// shipped convention.
    pub fn check_invariance(&self, g: QGen, f: &Element) -> Result<Scalar, HarmonicError> {
        let acted = self.action.act(g, f);
        let lhs = self.integrate(&acted)?;
        let rhs = &self.action.counit(g) * &self.integrate(f)?;
        Ok(&lhs - &rhs)
    }
}
