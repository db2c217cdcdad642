//! The sixteen printed closed forms `p_ij(t)` of the population propagator,
//! kept as expression trees so they can be evaluated literally and searched
//! for single-site typos.
//!
//! This is a validation path only; production code uses
//! [`super::population_propagator`].

use std::fmt;

use crate::dissipator::{BathParams, RateSet};
use crate::error::Result;
use crate::model::ValidatedParams;
use crate::RealMat4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    X1p,
    X1m,
    Y2p,
    Y2m,
    X1,
    Y2,
    /// `Y_1^-`, which only appears in the printed `p_21` prefactor.
    Y1m,
    Gamma0,
    T,
}

impl Sym {
    fn name(self) -> &'static str {
        match self {
            Sym::X1p => "X1+",
            Sym::X1m => "X1-",
            Sym::Y2p => "Y2+",
            Sym::Y2m => "Y2-",
            Sym::X1 => "X1",
            Sym::Y2 => "Y2",
            Sym::Y1m => "Y1-",
            Sym::Gamma0 => "g0",
            Sym::T => "t",
        }
    }

    /// Candidate replacements for a subscript or superscript slip.
    fn alternatives(self) -> &'static [Sym] {
        match self {
            Sym::X1p => &[Sym::X1m, Sym::Y2p],
            Sym::X1m => &[Sym::X1p, Sym::Y2m],
            Sym::Y2p => &[Sym::Y2m, Sym::X1p],
            Sym::Y2m => &[Sym::Y2p, Sym::X1m],
            Sym::X1 => &[Sym::Y2],
            Sym::Y2 => &[Sym::X1],
            Sym::Y1m => &[Sym::Y2m, Sym::X1m],
            Sym::Gamma0 | Sym::T => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Sym(Sym),
    Num(f64),
    Sum(Vec<(Sign, Expr)>),
    Prod(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    /// Two factors printed side by side where an operator may have been lost.
    Juxt(Box<Expr>, Box<Expr>),
}

/// Values substituted for the symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inputs {
    pub rates: RateSet,
    /// Literal value for `Y_1^-`.
    pub y1m: f64,
    pub gamma0: f64,
    pub t: f64,
}

impl Inputs {
    fn sym(&self, s: Sym) -> f64 {
        let r = &self.rates;
        match s {
            Sym::X1p => r.x1p,
            Sym::X1m => r.x1m,
            Sym::Y2p => r.y2p,
            Sym::Y2m => r.y2m,
            Sym::X1 => r.x1(),
            Sym::Y2 => r.y2(),
            Sym::Y1m => self.y1m,
            Sym::Gamma0 => self.gamma0,
            Sym::T => self.t,
        }
    }
}

impl Expr {
    pub fn eval(&self, v: &Inputs) -> f64 {
        match self {
            Expr::Sym(s) => v.sym(*s),
            Expr::Num(x) => *x,
            Expr::Sum(terms) => terms.iter().map(|(s, e)| s.value() * e.eval(v)).sum(),
            Expr::Prod(fs) => fs.iter().map(|e| e.eval(v)).product(),
            Expr::Div(a, b) => a.eval(v) / b.eval(v),
            Expr::Exp(a) => a.eval(v).exp(),
            Expr::Juxt(a, b) => a.eval(v) * b.eval(v),
        }
    }

    /// Every expression reachable by one edit: flipping the sign of a summand,
    /// turning a juxtaposition into a difference or sum, or replacing one
    /// symbol by a sibling.
    pub fn single_edits(&self) -> Vec<(String, Expr)> {
        let mut out = Vec::new();
        match self {
            Expr::Sym(s) => {
                for &alt in s.alternatives() {
                    out.push((format!("replace {} by {}", s.name(), alt.name()), Expr::Sym(alt)));
                }
            }
            Expr::Num(_) => {}
            Expr::Sum(terms) => {
                for (i, (sign, term)) in terms.iter().enumerate() {
                    let mut flipped = terms.clone();
                    flipped[i].0 = sign.flipped();
                    out.push((format!("flip the sign of `{term}`"), Expr::Sum(flipped)));
                    for (desc, edited) in term.single_edits() {
                        let mut t = terms.clone();
                        t[i].1 = edited;
                        out.push((desc, Expr::Sum(t)));
                    }
                }
            }
            Expr::Prod(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    for (desc, edited) in f.single_edits() {
                        let mut t = fs.clone();
                        t[i] = edited;
                        out.push((desc, Expr::Prod(t)));
                    }
                }
            }
            Expr::Div(a, b) => {
                for (desc, edited) in a.single_edits() {
                    out.push((desc, Expr::Div(Box::new(edited), b.clone())));
                }
                for (desc, edited) in b.single_edits() {
                    out.push((desc, Expr::Div(a.clone(), Box::new(edited))));
                }
            }
            Expr::Exp(a) => {
                for (desc, edited) in a.single_edits() {
                    out.push((desc, Expr::Exp(Box::new(edited))));
                }
            }
            Expr::Juxt(a, b) => {
                for sign in [Sign::Minus, Sign::Plus] {
                    let op = if sign == Sign::Minus { '-' } else { '+' };
                    out.push((
                        format!("insert `{op}` between `{a}` and `{b}`"),
                        Expr::Sum(vec![(Sign::Plus, (**a).clone()), (sign, (**b).clone())]),
                    ));
                }
                for (desc, edited) in a.single_edits() {
                    out.push((desc, Expr::Juxt(Box::new(edited), b.clone())));
                }
                for (desc, edited) in b.single_edits() {
                    out.push((desc, Expr::Juxt(a.clone(), Box::new(edited))));
                }
            }
        }
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sym(s) => f.write_str(s.name()),
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Sum(terms) => {
                f.write_str("(")?;
                for (i, (s, e)) in terms.iter().enumerate() {
                    match (i, s) {
                        (0, Sign::Plus) => {}
                        (0, Sign::Minus) => f.write_str("-")?,
                        (_, Sign::Plus) => f.write_str(" + ")?,
                        (_, Sign::Minus) => f.write_str(" - ")?,
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
            Expr::Prod(fs) => {
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            Expr::Div(a, b) => write!(f, "{a}/[{b}]"),
            Expr::Exp(a) => write!(f, "e^{a}"),
            Expr::Juxt(a, b) => write!(f, "{a} {b}"),
        }
    }
}

fn s(sym: Sym) -> Expr {
    Expr::Sym(sym)
}

fn plus(e: Expr) -> (Sign, Expr) {
    (Sign::Plus, e)
}

fn minus(e: Expr) -> (Sign, Expr) {
    (Sign::Minus, e)
}

fn sum(terms: Vec<(Sign, Expr)>) -> Expr {
    Expr::Sum(terms)
}

fn prod(fs: Vec<Expr>) -> Expr {
    Expr::Prod(fs)
}

fn div(a: Expr, b: Expr) -> Expr {
    Expr::Div(Box::new(a), Box::new(b))
}

/// `e^{-t (arg)}`
fn decay(arg: Expr) -> Expr {
    Expr::Exp(Box::new(sum(vec![minus(prod(vec![s(Sym::T), arg]))])))
}

use Sym::{Gamma0 as G0, X1m, X1p, Y1m, Y2m, Y2p, X1, Y2};

fn e_g() -> Expr {
    decay(s(G0))
}
fn e_x() -> Expr {
    decay(s(X1))
}
fn e_y() -> Expr {
    decay(s(Y2))
}
fn e_xy() -> Expr {
    decay(sum(vec![plus(s(X1)), plus(s(Y2))]))
}
fn e_xyg() -> Expr {
    decay(sum(vec![plus(s(X1)), plus(s(Y2)), minus(s(G0))]))
}
/// `a - b`
fn diff(a: Sym, b: Sym) -> Expr {
    sum(vec![plus(s(a)), minus(s(b))])
}
/// `X1 + Y2 - g0`
fn xy_minus_g() -> Expr {
    sum(vec![plus(s(X1)), plus(s(Y2)), minus(s(G0))])
}
/// `-X1 - Y2 + g0`
fn g_minus_xy() -> Expr {
    sum(vec![minus(s(X1)), minus(s(Y2)), plus(s(G0))])
}
/// `X1 + Y2 - e^{-t(X1+Y2-g0)} g0`
fn xy_tail() -> Expr {
    sum(vec![plus(s(X1)), plus(s(Y2)), minus(prod(vec![e_xyg(), s(G0)]))])
}
/// `e^{-t g0} X1 - e^{-t X1} g0`
fn gx_pair() -> Expr {
    sum(vec![plus(prod(vec![e_g(), s(X1)])), minus(prod(vec![e_x(), s(G0)]))])
}
/// `e^{-t g0} Y2 - e^{-t Y2} g0`
fn gy_pair() -> Expr {
    sum(vec![plus(prod(vec![e_g(), s(Y2)])), minus(prod(vec![e_y(), s(G0)]))])
}
/// `e^{-t X1} g0 - e^{-t g0} X1`
fn xg_pair() -> Expr {
    sum(vec![plus(prod(vec![e_x(), s(G0)])), minus(prod(vec![e_g(), s(X1)]))])
}
/// `e^{-t Y2} g0 - e^{-t g0} Y2`
fn yg_pair() -> Expr {
    sum(vec![plus(prod(vec![e_y(), s(G0)])), minus(prod(vec![e_g(), s(Y2)]))])
}

fn over_rates(prefactor: Vec<Expr>, bracket: Vec<(Sign, Expr)>) -> Expr {
    let p = if prefactor.is_empty() {
        Expr::Num(1.0)
    } else {
        prod(prefactor)
    };
    prod(vec![div(p, prod(vec![s(X1), s(Y2)])), sum(bracket)])
}

/// `p_11`, `p_22`, `p_33`, `p_44`: `[a (gx)/(X1-g0) + b (gy)/(Y2-g0) + e^{-tg0} c (tail)/(X1+Y2-g0) + d]`
fn diagonal(a: [Sym; 2], b: [Sym; 2], cc: [Sym; 2], d: [Sym; 2]) -> Expr {
    over_rates(
        vec![],
        vec![
            plus(div(prod(vec![s(a[0]), s(a[1]), gx_pair()]), diff(X1, G0))),
            plus(div(prod(vec![s(b[0]), s(b[1]), gy_pair()]), diff(Y2, G0))),
            plus(div(prod(vec![e_g(), s(cc[0]), s(cc[1]), xy_tail()]), xy_minus_g())),
            plus(prod(vec![s(d[0]), s(d[1])])),
        ],
    )
}

/// `p_12`, `p_21`, `p_34`, `p_43`.
fn cross(prefactor: [Sym; 2]) -> Expr {
    let first = div(
        prod(vec![
            e_g(),
            s(X1),
            s(Y2),
            sum(vec![plus(s(X1)), plus(s(Y2)), minus(prod(vec![Expr::Num(2.0), s(G0)]))]),
        ]),
        prod(vec![diff(X1, G0), xy_minus_g(), diff(G0, Y2)]),
    );
    over_rates(
        vec![s(prefactor[0]), s(prefactor[1])],
        vec![
            plus(first),
            plus(div(prod(vec![e_x(), s(G0)]), diff(X1, G0))),
            plus(div(prod(vec![e_y(), s(G0)]), diff(Y2, G0))),
            minus(div(prod(vec![e_xy(), s(G0)]), xy_minus_g())),
            plus(Expr::Num(1.0)),
        ],
    )
}

/// `p_13` and `p_31` share this bracket.
fn bracket_13(prefactor: Sym) -> Expr {
    over_rates(
        vec![s(prefactor)],
        vec![
            minus(div(prod(vec![xg_pair(), s(Y2p)]), diff(G0, X1))),
            plus(div(prod(vec![s(Y2m), yg_pair()]), diff(G0, Y2))),
            plus(div(prod(vec![e_g(), s(Y2m), xy_tail()]), g_minus_xy())),
            plus(s(Y2p)),
        ],
    )
}

/// `p_14` and `p_41`.
fn bracket_14(prefactor: Sym) -> Expr {
    over_rates(
        vec![s(prefactor)],
        vec![
            minus(div(prod(vec![yg_pair(), s(X1p)]), diff(G0, Y2))),
            plus(div(prod(vec![s(X1m), xg_pair()]), diff(G0, X1))),
            plus(div(prod(vec![e_g(), s(X1m), xy_tail()]), g_minus_xy())),
            plus(s(X1p)),
        ],
    )
}

/// `p_23` and `p_32`.
fn bracket_23(prefactor: Sym) -> Expr {
    over_rates(
        vec![s(prefactor)],
        vec![
            plus(div(prod(vec![s(X1p), xg_pair()]), diff(G0, X1))),
            minus(div(prod(vec![yg_pair(), s(X1m)]), diff(G0, Y2))),
            plus(div(prod(vec![e_g(), s(X1p), xy_tail()]), g_minus_xy())),
            plus(s(X1m)),
        ],
    )
}

/// `p_24` and `p_42`, including the printed `e^{-tY2} g0 e^{-tg0} Y2`.
fn bracket_24(prefactor: Sym) -> Expr {
    let juxt = Expr::Juxt(Box::new(prod(vec![e_y(), s(G0)])), Box::new(prod(vec![e_g(), s(Y2)])));
    over_rates(
        vec![s(prefactor)],
        vec![
            minus(div(prod(vec![xg_pair(), s(Y2m)]), diff(G0, X1))),
            plus(div(prod(vec![s(Y2p), juxt]), diff(G0, Y2))),
            plus(div(prod(vec![e_g(), s(Y2p), xy_tail()]), g_minus_xy())),
            plus(s(Y2m)),
        ],
    )
}

/// The printed elements, `[row][col]` zero-based.
pub fn printed_elements() -> [[Expr; 4]; 4] {
    [
        [
            diagonal([X1m, Y2p], [X1p, Y2m], [X1m, Y2m], [X1p, Y2p]),
            cross([X1p, Y2p]),
            bracket_13(X1p),
            bracket_14(Y2p),
        ],
        [
            cross([X1m, Y1m]),
            diagonal([X1p, Y2m], [X1m, Y2p], [X1p, Y2p], [X1m, Y2m]),
            bracket_23(Y2m),
            bracket_24(X1m),
        ],
        [
            bracket_13(X1m),
            bracket_23(Y2p),
            diagonal([X1p, Y2p], [X1m, Y2m], [X1p, Y2m], [X1m, Y2p]),
            cross([X1m, Y2p]),
        ],
        [
            bracket_14(Y2m),
            bracket_24(X1p),
            cross([X1p, Y2m]),
            diagonal([X1m, Y2m], [X1p, Y2p], [X1m, Y2p], [X1p, Y2m]),
        ],
    ]
}

/// The printed `P(t)` evaluated literally.
pub fn appendix_propagator(inputs: &Inputs) -> RealMat4 {
    let els = printed_elements();
    RealMat4::from_fn(|i, j| els[i][j].eval(inputs))
}

/// `Y_1^- = 2 sum_j J_j(-w1) |c_{j,2}|^2`, the value the printed `p_21`
/// symbol takes when read literally.
pub fn y1_minus(p: &ValidatedParams, baths: &BathParams) -> Result<f64> {
    let coeffs = crate::dissipator::transition_coeffs(p)?;
    let w1 = p.xi() - p.eta();
    let mut acc = 0.0;
    for bath in 1..=2 {
        acc += 2.0 * baths.spectral_density(bath, -w1)? * coeffs.get(bath, 2);
    }
    Ok(acc)
}

/// A single-site edit that makes one printed element agree with the
/// reference path.
#[derive(Debug, Clone, PartialEq)]
pub struct Repair {
    pub description: String,
    pub max_deviation: f64,
}

/// Deviation of one printed element from the reference, and the edits that
/// repair it.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementReport {
    pub row: usize,
    pub col: usize,
    pub max_deviation: f64,
    pub repairs: Vec<Repair>,
}

impl ElementReport {
    /// Human-readable `p_ij` label (one-based).
    pub fn label(&self) -> String {
        format!("p{}{}", self.row + 1, self.col + 1)
    }

    pub fn agrees(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Compares every printed element with `reference` over the sample set and,
/// for elements off by more than `tol`, searches all single-site edits.
pub fn arbitrate(samples: &[Inputs], reference: impl Fn(&Inputs) -> RealMat4, tol: f64) -> Vec<ElementReport> {
    let refs: Vec<RealMat4> = samples.iter().map(&reference).collect();
    let els = printed_elements();
    let mut reports = Vec::with_capacity(16);
    for (i, row) in els.iter().enumerate() {
        for (j, el) in row.iter().enumerate() {
            let dev_of = |e: &Expr| {
                samples
                    .iter()
                    .zip(&refs)
                    .map(|(v, r)| (e.eval(v) - r[(i, j)]).abs())
                    .fold(0.0f64, |a, d| if d.is_nan() { f64::INFINITY } else { a.max(d) })
            };
            let max_deviation = dev_of(el);
            let mut repairs = Vec::new();
            if max_deviation > tol {
                for (description, edited) in el.single_edits() {
                    let d = dev_of(&edited);
                    if d <= tol {
                        repairs.push(Repair {
                            description,
                            max_deviation: d,
                        });
                    }
                }
            }
            reports.push(ElementReport {
                row: i,
                col: j,
                max_deviation,
                repairs,
            });
        }
    }
    reports
}
