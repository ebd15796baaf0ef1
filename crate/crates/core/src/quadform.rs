//! Quadratic functions f(x) = sum_i Tr(a_i x^(p^i + 1)) on GF(p^m).

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::linalg::{CosetReducer, FpMatrix, LinearSolver};
use crate::prime::PrimeField;

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticFunction {
    field: ExtField,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for QuadraticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticFunction[{}]", self.coeffs_text())
    }
}

impl QuadraticFunction {
    pub fn new(field: &ExtField, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != field.m() {
            return Err(Error::CoefficientCount {
                expected: field.m(),
                got: coeffs.len(),
            });
        }
        Ok(QuadraticFunction {
            field: field.clone(),
            coeffs,
        })
    }

    /// Parse "a_0,a_1,...,a_{m-1}" where each entry is an element encoding or `g^k`.
    pub fn parse_coeffs(field: &ExtField, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| field.parse_element(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeffs_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|a| self.field.encode(a).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn evaluate(&self, x: &FieldElement) -> u32 {
        let f = &self.field;
        let fp = f.prime_field();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .fold(0, |acc, (i, a)| {
                let t = f.mul(a, &f.mul(&f.frobenius(x, i), x));
                fp.add(acc, f.trace(&t))
            })
    }

    /// f(x) for every x, indexed by encoding.
    pub fn value_table(&self) -> Result<Vec<u32>> {
        self.field.check_enumerable()?;
        Ok((0..self.field.q())
            .into_par_iter()
            .map(|v| self.evaluate(&self.field.decode_unchecked(v)))
            .collect())
    }

    /// h_jk = 1/2 sum_i Tr(a_i (v_j^(p^i) v_k + v_j v_k^(p^i))) on the polynomial basis.
    pub fn gram_matrix(&self) -> FpMatrix {
        let f = &self.field;
        let fp = *f.prime_field();
        let m = f.m();
        let basis: Vec<FieldElement> = (0..m).map(|j| f.basis(j)).collect();
        let half = fp.half();
        FpMatrix::from_fn(fp, m, m, |j, k| {
            let mut s = 0;
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let t1 = f.mul(&f.frobenius(&basis[j], i), &basis[k]);
                let t2 = f.mul(&basis[j], &f.frobenius(&basis[k], i));
                s = fp.add(s, f.trace(&f.mul(a, &f.add(&t1, &t2))));
            }
            fp.mul(s, half)
        })
    }

    /// c_i = 1/2 (a_i + a_{(m-i) mod m}^(p^i)), so that L_f(x) = sum_i c_i x^(p^i).
    pub fn lf_coefficients(&self) -> Vec<FieldElement> {
        let f = &self.field;
        let m = f.m();
        let half = f.prime_field().half();
        (0..m)
            .map(|i| {
                let partner = f.frobenius(&self.coeffs[(m - i) % m], i);
                f.scale(half, &f.add(&self.coeffs[i], &partner))
            })
            .collect()
    }

    pub fn lf_apply(&self, x: &FieldElement) -> FieldElement {
        lf_apply_with(&self.field, &self.lf_coefficients(), x)
    }

    /// Matrix of L_f acting on digit column vectors: column j holds L_f(x^j).
    pub fn lf_matrix(&self) -> FpMatrix {
        let f = &self.field;
        let m = f.m();
        let c = self.lf_coefficients();
        let cols: Vec<FieldElement> = (0..m).map(|j| lf_apply_with(f, &c, &f.basis(j))).collect();
        FpMatrix::from_fn(*f.prime_field(), m, m, |i, j| cols[j].digit(i))
    }

    pub fn analyze(&self) -> FormAnalysis {
        FormAnalysis::new(self.clone())
    }
}

fn lf_apply_with(field: &ExtField, c: &[FieldElement], x: &FieldElement) -> FieldElement {
    c.iter()
        .enumerate()
        .filter(|(_, ci)| !ci.is_zero())
        .fold(field.zero(), |acc, (i, ci)| {
            field.add(&acc, &field.mul(ci, &field.frobenius(x, i)))
        })
}

/// Result of congruence diagonalization M H M^T = diag(d).
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub rank: usize,
    /// Product of the nonzero diagonal entries; 1 for the zero matrix.
    pub delta: u32,
    pub sign: i8,
    pub diagonal: Vec<u32>,
    pub transform: FpMatrix,
}

/// Symmetric elimination. A zero pivot with a nonzero entry later in its row is
/// repaired by adding c times that row and column (smallest c giving a nonzero pivot).
pub fn congruence_diagonalize(h: &FpMatrix) -> Diagonalization {
    assert!(h.is_symmetric(), "congruence diagonalization needs a symmetric matrix");
    let fp = *h.field();
    let n = h.rows();
    let mut a = h.clone();
    let mut mt = FpMatrix::identity(fp, n);
    for k in 0..n {
        if a.get(k, k) == 0 {
            let Some(j) = (k + 1..n).find(|&j| a.get(k, j) != 0) else {
                continue;
            };
            let c = (1..fp.p())
                .find(|&c| {
                    // new pivot: a_kk + 2c a_kj + c^2 a_jj
                    let v = fp.add(
                        fp.mul(fp.mul(2, c), a.get(k, j)),
                        fp.mul(fp.mul(c, c), a.get(j, j)),
                    );
                    v != 0
                })
                .expect("p odd guarantees a usable multiplier");
            a.add_row_multiple(k, j, c);
            a.add_col_multiple(k, j, c);
            mt.add_row_multiple(k, j, c);
        }
        let d = a.get(k, k);
        let dinv = fp.inv(d).expect("pivot nonzero");
        for i in k + 1..n {
            let v = a.get(i, k);
            if v == 0 {
                continue;
            }
            let c = fp.neg(fp.mul(v, dinv));
            a.add_row_multiple(i, k, c);
            a.add_col_multiple(i, k, c);
            mt.add_row_multiple(i, k, c);
        }
    }
    let diagonal: Vec<u32> = (0..n).map(|i| a.get(i, i)).collect();
    let rank = diagonal.iter().filter(|&&d| d != 0).count();
    let delta = diagonal
        .iter()
        .filter(|&&d| d != 0)
        .fold(1, |acc, &d| fp.mul(acc, d));
    Diagonalization {
        rank,
        delta,
        sign: fp.eta_bar(delta),
        diagonal,
        transform: mt,
    }
}

/// Everything the counting formulas need about a quadratic function.
#[derive(Clone, Debug)]
pub struct FormAnalysis {
    func: QuadraticFunction,
    pub gram: FpMatrix,
    pub rank: usize,
    pub delta: u32,
    /// eta_bar(delta), the invariant read off the diagonalization.
    pub delta_sign: i8,
    /// The sign with sum_x z^f(x) = sign * p^m * (p*)^(-rank/2); equals
    /// eta_bar((-1)^rank * delta), which differs from `delta_sign` when p = 3 mod 4 and the rank is odd.
    pub sign: i8,
    pub lf: FpMatrix,
    pub ker_basis: Vec<FieldElement>,
    pub im_basis: Vec<FieldElement>,
    solver: LinearSolver,
    reducer: CosetReducer,
}

impl FormAnalysis {
    pub fn new(func: QuadraticFunction) -> Self {
        let field = func.field().clone();
        let fp = *field.prime_field();
        let gram = func.gram_matrix();
        let diag = congruence_diagonalize(&gram);
        let lf = func.lf_matrix();
        let ker = lf.kernel();
        let to_elem = |v: &Vec<u32>| field.from_digits(v).expect("digits are reduced");
        let ker_basis = ker.iter().map(to_elem).collect();
        let im_basis = lf.column_space().iter().map(to_elem).collect();
        let reducer = CosetReducer::new(fp, field.m(), &ker);
        let solver = LinearSolver::new(&lf);
        debug_assert_eq!(solver.rank(), diag.rank);
        let odd_flip = if diag.rank % 2 == 1 { fp.eta_bar(fp.neg(1)) } else { 1 };
        FormAnalysis {
            func,
            gram,
            rank: diag.rank,
            delta: diag.delta,
            delta_sign: diag.sign,
            sign: diag.sign * odd_flip,
            lf,
            ker_basis,
            im_basis,
            solver,
            reducer,
        }
    }

    pub fn func(&self) -> &QuadraticFunction {
        &self.func
    }

    pub fn field(&self) -> &ExtField {
        self.func.field()
    }

    pub fn prime_field(&self) -> &PrimeField {
        self.func.field().prime_field()
    }

    pub fn p(&self) -> u64 {
        self.field().p()
    }

    pub fn m(&self) -> usize {
        self.field().m()
    }

    pub fn lf_rank(&self) -> usize {
        self.solver.rank()
    }

    pub fn evaluate(&self, x: &FieldElement) -> u32 {
        self.func.evaluate(x)
    }

    pub fn in_image(&self, b: &FieldElement) -> bool {
        self.solver
            .is_consistent(&self.field().to_digits(b))
    }

    /// The solution of L_f(x) = -b/2 with the smallest encoding, if b is in the image.
    pub fn solve_xb(&self, b: &FieldElement) -> Option<FieldElement> {
        let f = self.field();
        let fp = f.prime_field();
        let target = f.scale(fp.neg(fp.half()), b);
        let x = self.solver.solve(&f.to_digits(&target))?;
        let x = self.reducer.reduce(&x);
        Some(f.from_digits(&x).expect("digits are reduced"))
    }

    /// For alpha outside Im(L_f) and beta != 0: the unique z0 in GF(p)* with
    /// alpha - z0 beta in Im(L_f), when beta lies in some z' alpha + Im(L_f) (z0 = 1/z').
    pub fn in_shifted_image(&self, alpha: &FieldElement, beta: &FieldElement) -> Result<Option<u32>> {
        if self.in_image(alpha) {
            return Err(Error::AlphaInImage);
        }
        if beta.is_zero() {
            return Err(Error::ZeroBeta);
        }
        let f = self.field();
        let fp = f.prime_field();
        for zp in fp.units() {
            let diff = f.sub(beta, &f.scale(zp, alpha));
            if self.in_image(&diff) {
                return Ok(Some(fp.inv(zp).expect("unit")));
            }
        }
        Ok(None)
    }

    /// Every element of Ker(L_f), ascending by encoding.
    pub fn kernel_elements(&self) -> Vec<FieldElement> {
        let f = self.field();
        let p = self.p() as u32;
        let k = self.ker_basis.len();
        let mut out: Vec<FieldElement> = (0..(p as u64).pow(k as u32))
            .map(|mut v| {
                let mut acc = f.zero();
                for b in &self.ker_basis {
                    acc = f.add(&acc, &f.scale((v % p as u64) as u32, b));
                    v /= p as u64;
                }
                acc
            })
            .collect();
        out.sort();
        out
    }
}

/// Named constructions of quadratic functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Tr(u x^2)
    TraceScaledSquare { u: FieldElement },
    /// Tr(x^2) - Tr(v x)^2 / Tr(v^2)
    TraceSquareMinus { v: FieldElement },
}

impl Preset {
    /// Parse `square:u=<elem>` or `square-minus:v=<elem>`.
    pub fn parse(field: &ExtField, s: &str) -> Result<Self> {
        let (name, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("preset `{s}` needs the form name:key=value")))?;
        let (key, val) = arg
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("preset argument `{arg}` needs key=value")))?;
        let elem = field.parse_element(val)?;
        match (name.trim(), key.trim()) {
            ("square", "u") => Ok(Preset::TraceScaledSquare { u: elem }),
            ("square-minus", "v") => Ok(Preset::TraceSquareMinus { v: elem }),
            _ => Err(Error::Parse(format!("unknown preset `{s}`"))),
        }
    }

    pub fn build(&self, field: &ExtField) -> Result<QuadraticFunction> {
        match self {
            Preset::TraceScaledSquare { u } => preset_trace_square(field, u),
            Preset::TraceSquareMinus { v } => preset_trace_square_minus(field, v),
        }
    }

    /// Closed-form (rank, sign) of the preset, for cross-checking an analysis.
    pub fn expected_rank_sign(&self, field: &ExtField) -> (usize, i8) {
        let m = field.m();
        let parity: i8 = if m % 2 == 1 { 1 } else { -1 };
        let minus_one = field.neg(&field.one());
        match self {
            Preset::TraceScaledSquare { u } => (m, parity * field.eta(&field.neg(u))),
            Preset::TraceSquareMinus { v } => {
                let fp = field.prime_field();
                let t = field.trace(&field.square(v));
                (
                    m - 1,
                    parity * field.eta(&minus_one) * fp.eta_bar(fp.neg(t)),
                )
            }
        }
    }

    pub fn text(&self, field: &ExtField) -> String {
        match self {
            Preset::TraceScaledSquare { u } => format!("square:u={}", field.encode(u)),
            Preset::TraceSquareMinus { v } => format!("square-minus:v={}", field.encode(v)),
        }
    }
}

/// f(x) = Tr(u x^2).
pub fn preset_trace_square(field: &ExtField, u: &FieldElement) -> Result<QuadraticFunction> {
    if u.is_zero() {
        return Err(Error::ZeroU);
    }
    let mut coeffs = vec![field.zero(); field.m()];
    coeffs[0] = *u;
    QuadraticFunction::new(field, coeffs)
}

/// f(x) = Tr(x^2) - Tr(v x)^2 / Tr(v^2), using Tr(vx)^2 = sum_j Tr(v^(p^j+1) x^(p^j+1)).
pub fn preset_trace_square_minus(field: &ExtField, v: &FieldElement) -> Result<QuadraticFunction> {
    let fp = field.prime_field();
    let t = field.trace(&field.square(v));
    if t == 0 {
        return Err(Error::ZeroTraceVSquared);
    }
    let neg_tinv = fp.neg(fp.inv(t)?);
    let coeffs = (0..field.m())
        .map(|j| {
            let w = field.scale(neg_tinv, &field.mul(&field.frobenius(v, j), v));
            if j == 0 {
                field.add(&field.one(), &w)
            } else {
                w
            }
        })
        .collect();
    QuadraticFunction::new(field, coeffs)
}

/// f(x) = sum_k c_k Tr(w_k x)^2. With independent w_k and nonzero c_k the rank is
/// the number of terms, which makes it a convenient way to get forms of any rank.
pub fn sum_of_trace_squares(
    field: &ExtField,
    terms: &[(u32, FieldElement)],
) -> Result<QuadraticFunction> {
    let m = field.m();
    let mut coeffs = vec![field.zero(); m];
    for (c, w) in terms {
        for (j, a) in coeffs.iter_mut().enumerate() {
            let t = field.scale(*c, &field.mul(&field.frobenius(w, j), w));
            *a = field.add(a, &t);
        }
    }
    QuadraticFunction::new(field, coeffs)
}
