//! Sparse bivariate polynomials with interval coefficients, rigorous range
//! bounds over boxes, and restriction to line segments.
//!
//! Coefficients are intervals so that decimal config literals (and products
//! like `3 * (1/60)` arising in differentiation) stay enclosed; an exactly
//! representable coefficient is a point interval and costs nothing.

use crate::decimal;
use crate::interval::{Interval, SignClass};
use std::fmt;

/// Exponent pair of a monomial `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct MonoIndex {
    pub i: u32,
    pub j: u32,
}

impl MonoIndex {
    pub fn new(i: u32, j: u32) -> MonoIndex {
        MonoIndex { i, j }
    }
}

impl fmt::Display for MonoIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}*y^{}", self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Point2 {
        Point2 { x, y }
    }
}

/// Oriented segment between two distinct points.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub start: Point2,
    pub end: Point2,
}

impl Segment {
    pub fn new(start: Point2, end: Point2) -> Segment {
        assert!(
            start != end,
            "degenerate segment at ({}, {})",
            start.x,
            start.y
        );
        Segment { start, end }
    }

    /// Point at parameter `t` (non-rigorous, for geometry construction).
    pub fn point_at(&self, t: f64) -> Point2 {
        Point2 {
            x: self.start.x + t * (self.end.x - self.start.x),
            y: self.start.y + t * (self.end.y - self.start.y),
        }
    }
}

/// Differentiation variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum PolyParseError {
    #[error("empty polynomial text")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
}

/// Sparse bivariate polynomial, canonical form: one term per index, exact-zero
/// coefficients dropped, terms sorted by index.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly {
    terms: Vec<(MonoIndex, Interval)>,
}

impl BivarPoly {
    pub fn zero() -> BivarPoly {
        BivarPoly { terms: Vec::new() }
    }

    pub fn constant(c: Interval) -> BivarPoly {
        BivarPoly::from_terms([(MonoIndex::new(0, 0), c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MonoIndex, Interval)>) -> BivarPoly {
        let mut map: std::collections::BTreeMap<MonoIndex, Interval> =
            std::collections::BTreeMap::new();
        for (idx, c) in terms {
            map.entry(idx)
                .and_modify(|acc| *acc = acc.add(&c))
                .or_insert(c);
        }
        map.retain(|_, c| !(c.lo() == 0.0 && c.hi() == 0.0));
        BivarPoly {
            terms: map.into_iter().collect(),
        }
    }

    pub fn terms(&self) -> &[(MonoIndex, Interval)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.i + m.j).max().unwrap_or(0)
    }

    pub fn coefficient(&self, idx: MonoIndex) -> Interval {
        self.terms
            .iter()
            .find(|(m, _)| *m == idx)
            .map(|(_, c)| *c)
            .unwrap_or(Interval::ZERO)
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        BivarPoly::from_terms(self.terms.iter().chain(other.terms.iter()).copied())
    }

    /// Subtracts a constant, shifting the `(0,0)` coefficient.
    pub fn sub_const(&self, c: Interval) -> BivarPoly {
        self.add(&BivarPoly::constant(c.neg()))
    }

    /// Exact symbolic partial derivative. Coefficient products `k * c` are
    /// interval multiplications, so they stay exact for integer-representable
    /// inputs and remain enclosures otherwise.
    pub fn partial(&self, var: Var) -> BivarPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| match var {
            Var::X if m.i > 0 => Some((
                MonoIndex::new(m.i - 1, m.j),
                c.scale(m.i as f64),
            )),
            Var::Y if m.j > 0 => Some((
                MonoIndex::new(m.i, m.j - 1),
                c.scale(m.j as f64),
            )),
            _ => None,
        });
        BivarPoly::from_terms(terms)
    }

    /// Interval evaluation at interval arguments: the sum of
    /// `c * x^i * y^j` over all terms, with `pow_int` powers.
    pub fn eval_iv(&self, x: &Interval, y: &Interval) -> Interval {
        let (xp, yp) = self.power_tables(x, y);
        let mut acc = Interval::ZERO;
        for (m, c) in &self.terms {
            acc = acc.add(&c.mul(&xp[m.i as usize]).mul(&yp[m.j as usize]));
        }
        acc
    }

    /// Interval containing the exact value at a point (coefficient and
    /// arithmetic rounding still make this an interval).
    pub fn eval_point(&self, pt: Point2) -> Interval {
        self.eval_iv(&Interval::point(pt.x), &Interval::point(pt.y))
    }

    fn power_tables(&self, x: &Interval, y: &Interval) -> (Vec<Interval>, Vec<Interval>) {
        let degx = self.terms.iter().map(|(m, _)| m.i).max().unwrap_or(0) as usize;
        let degy = self.terms.iter().map(|(m, _)| m.j).max().unwrap_or(0) as usize;
        let xp: Vec<Interval> = (0..=degx as u32).map(|k| x.pow_int(k)).collect();
        let yp: Vec<Interval> = (0..=degy as u32).map(|k| y.pow_int(k)).collect();
        (xp, yp)
    }

    /// Horner-scheme interval evaluation (x-major, inner Horner in y).
    fn eval_horner(&self, x: &Interval, y: &Interval) -> Interval {
        let degx = self.terms.iter().map(|(m, _)| m.i).max().unwrap_or(0);
        let mut acc = Interval::ZERO;
        for i in (0..=degx).rev() {
            let mut inner = Interval::ZERO;
            let degy = self
                .terms
                .iter()
                .filter(|(m, _)| m.i == i)
                .map(|(m, _)| m.j)
                .max();
            if let Some(degy) = degy {
                for j in (0..=degy).rev() {
                    inner = inner.mul(y).add(&self.coefficient(MonoIndex::new(i, j)));
                }
            }
            acc = acc.mul(x).add(&inner);
        }
        acc
    }

    /// Rigorous enclosure of the range over the box `x × y`: the intersection
    /// of the Horner bound, the natural (power-form) bound, the central form
    /// at the midpoint, and monotonicity refinements (a coordinate whose
    /// partial has certified sign is collapsed to the extremal edges, one
    /// collapse per variable).
    pub fn range_on_box(&self, x: &Interval, y: &Interval) -> Interval {
        let mut bound = self.eval_iv(x, y);
        if let Some(r) = bound.intersect(&self.eval_horner(x, y)) {
            bound = r;
        }
        if x.width() == 0.0 && y.width() == 0.0 {
            return bound;
        }
        let px = self.partial(Var::X);
        let py = self.partial(Var::Y);
        let rx = px.eval_iv(x, y);
        let ry = py.eval_iv(x, y);

        // Central form: p(m) + ∇p(B)·(B - m).
        let mx = Interval::point(x.midpoint());
        let my = Interval::point(y.midpoint());
        let central = self
            .eval_iv(&mx, &my)
            .add(&rx.mul(&x.sub(&mx)))
            .add(&ry.mul(&y.sub(&my)));
        if let Some(r) = bound.intersect(&central) {
            bound = r;
        }

        // Monotone in x: the extremes live on the x-edges.
        match rx.sign() {
            SignClass::ContainsZero => {}
            s => {
                let (at_min, at_max) = if s == SignClass::StrictlyPositive {
                    (x.lo(), x.hi())
                } else {
                    (x.hi(), x.lo())
                };
                let lo_r = self.restrict_x(at_min).range_on(y);
                let hi_r = self.restrict_x(at_max).range_on(y);
                if let Some(r) = bound.intersect(&Interval::new(lo_r.lo(), hi_r.hi())) {
                    bound = r;
                }
            }
        }
        match ry.sign() {
            SignClass::ContainsZero => {}
            s => {
                let (at_min, at_max) = if s == SignClass::StrictlyPositive {
                    (y.lo(), y.hi())
                } else {
                    (y.hi(), y.lo())
                };
                let lo_r = self.restrict_y(at_min).range_on(x);
                let hi_r = self.restrict_y(at_max).range_on(x);
                if let Some(r) = bound.intersect(&Interval::new(lo_r.lo(), hi_r.hi())) {
                    bound = r;
                }
            }
        }
        bound
    }

    /// Substitutes `x = c`, collapsing to a univariate polynomial in `y`.
    pub fn restrict_x(&self, c: f64) -> UnivarPoly {
        let ci = Interval::point(c);
        let degy = self.terms.iter().map(|(m, _)| m.j).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Interval::ZERO; degy + 1];
        for (m, coef) in &self.terms {
            let v = coef.mul(&ci.pow_int(m.i));
            coeffs[m.j as usize] = coeffs[m.j as usize].add(&v);
        }
        UnivarPoly::new(coeffs)
    }

    /// Substitutes `y = c`, collapsing to a univariate polynomial in `x`.
    pub fn restrict_y(&self, c: f64) -> UnivarPoly {
        let ci = Interval::point(c);
        let degx = self.terms.iter().map(|(m, _)| m.i).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Interval::ZERO; degx + 1];
        for (m, coef) in &self.terms {
            let v = coef.mul(&ci.pow_int(m.j));
            coeffs[m.i as usize] = coeffs[m.i as usize].add(&v);
        }
        UnivarPoly::new(coeffs)
    }

    /// Composition with the affine parametrization of a segment:
    /// `q(t) ⊇ p(start + t·(end - start))` for `t ∈ [0, 1]`. Axis-parallel
    /// segments reduce to direct substitution because the zero component
    /// contributes exact point coefficients.
    pub fn restrict_to_segment(&self, s: &Segment) -> UnivarPoly {
        let x0 = Interval::point(s.start.x);
        let y0 = Interval::point(s.start.y);
        let dx = Interval::point(s.end.x).sub(&x0);
        let dy = Interval::point(s.end.y).sub(&y0);
        let xt = UnivarPoly::new(vec![x0, dx]);
        let yt = UnivarPoly::new(vec![y0, dy]);
        let mut acc = UnivarPoly::zero();
        for (m, c) in &self.terms {
            let term = xt.pow(m.i).mul(&yt.pow(m.j)).scale(*c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Parses whitespace-separated terms `c*x^i*y^j`. Coefficients may be
    /// decimals (`-0.475`, `1.5e-3`) or fractions (`1/60`); `x`/`y` factors
    /// are optional, as are explicit `+`/`-` separators between terms.
    pub fn parse(text: &str) -> Result<BivarPoly, PolyParseError> {
        let mut terms: Vec<(MonoIndex, Interval)> = Vec::new();
        let mut pending_sign = 1.0;
        let mut seen_any = false;
        for tok in text.split_whitespace() {
            match tok {
                "+" => continue,
                "-" => {
                    pending_sign = -pending_sign;
                    continue;
                }
                _ => {}
            }
            let (idx, coef) = parse_term(tok)
                .ok_or_else(|| PolyParseError::BadTerm(tok.to_string()))?;
            terms.push((idx, coef.scale(pending_sign)));
            pending_sign = 1.0;
            seen_any = true;
        }
        if !seen_any {
            return Err(PolyParseError::Empty);
        }
        Ok(BivarPoly::from_terms(terms))
    }
}

fn parse_term(tok: &str) -> Option<(MonoIndex, Interval)> {
    let mut coef = Interval::ONE;
    let mut i = 0u32;
    let mut j = 0u32;
    let mut rest = tok;
    if let Some(stripped) = rest.strip_prefix('-') {
        coef = coef.neg();
        rest = stripped;
    } else if let Some(stripped) = rest.strip_prefix('+') {
        rest = stripped;
    }
    for factor in rest.split('*') {
        if factor.is_empty() {
            return None;
        }
        if let Some(exp) = parse_var_power(factor, 'x') {
            i = i.checked_add(exp)?;
        } else if let Some(exp) = parse_var_power(factor, 'y') {
            j = j.checked_add(exp)?;
        } else {
            coef = coef.mul(&decimal::parse_interval(factor)?);
        }
    }
    Some((MonoIndex::new(i, j), coef))
}

fn parse_var_power(factor: &str, var: char) -> Option<u32> {
    let body = factor.strip_prefix(var)?;
    if body.is_empty() {
        return Some(1);
    }
    let exp = body.strip_prefix('^')?;
    exp.parse().ok()
}

/// Univariate polynomial with interval coefficients, ascending degree order,
/// no trailing exact-zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivarPoly {
    coeffs: Vec<Interval>,
}

impl UnivarPoly {
    pub fn zero() -> UnivarPoly {
        UnivarPoly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<Interval>) -> UnivarPoly {
        while coeffs
            .last()
            .is_some_and(|c| c.lo() == 0.0 && c.hi() == 0.0)
        {
            coeffs.pop();
        }
        UnivarPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &UnivarPoly) -> UnivarPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(Interval::ZERO);
                let b = other.coeffs.get(k).copied().unwrap_or(Interval::ZERO);
                a.add(&b)
            })
            .collect();
        UnivarPoly::new(coeffs)
    }

    pub fn scale(&self, c: Interval) -> UnivarPoly {
        UnivarPoly::new(self.coeffs.iter().map(|a| a.mul(&c)).collect())
    }

    pub fn mul(&self, other: &UnivarPoly) -> UnivarPoly {
        if self.is_zero() || other.is_zero() {
            return UnivarPoly::zero();
        }
        let mut coeffs = vec![Interval::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                coeffs[a + b] = coeffs[a + b].add(&ca.mul(cb));
            }
        }
        UnivarPoly::new(coeffs)
    }

    pub fn pow(&self, n: u32) -> UnivarPoly {
        let mut acc = UnivarPoly::new(vec![Interval::ONE]);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sub_const(&self, c: Interval) -> UnivarPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.neg());
        } else {
            coeffs[0] = coeffs[0].sub(&c);
        }
        UnivarPoly::new(coeffs)
    }

    pub fn derivative(&self) -> UnivarPoly {
        if self.coeffs.len() <= 1 {
            return UnivarPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(k as f64))
            .collect();
        UnivarPoly::new(coeffs)
    }

    /// Horner evaluation at an interval argument.
    pub fn eval(&self, t: &Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Power-form evaluation, tighter than Horner when `0 ∈ t` and the
    /// polynomial has even-degree structure.
    fn eval_powers(&self, t: &Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&t.pow_int(k as u32)));
        }
        acc
    }

    /// Enclosure of the range over `t`, refined by derivative monotonicity.
    pub fn range_on(&self, t: &Interval) -> Interval {
        let mut bound = self.eval(t);
        if let Some(r) = bound.intersect(&self.eval_powers(t)) {
            bound = r;
        }
        if t.width() == 0.0 {
            return bound;
        }
        let d = self.derivative().eval(t);
        if d.sign() != SignClass::ContainsZero {
            let at_lo = self.eval(&Interval::point(t.lo()));
            let at_hi = self.eval(&Interval::point(t.hi()));
            if let Some(r) = bound.intersect(&at_lo.hull(&at_hi)) {
                bound = r;
            }
        }
        bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::{parse_rational, rational_of_f64};

    /// Figure-eight Hamiltonian: y^2/2 + x^4/4 + (1-λ)/3 x^3 - λ/2 x^2 at λ = 0.95.
    pub fn ham_095() -> BivarPoly {
        BivarPoly::parse("1/2*y^2 + 1/4*x^4 + 1/60*x^3 - 19/40*x^2").unwrap()
    }

    fn contains_rational(iv: &Interval, r: &num_rational::BigRational) -> bool {
        rational_of_f64(iv.lo()) <= *r && *r <= rational_of_f64(iv.hi())
    }

    #[test]
    fn eval_vanishes_at_origin() {
        let h = ham_095();
        let v = h.eval_point(Point2::new(0.0, 0.0));
        assert!(v.contains(0.0) && v.width() < 1e-15);
    }

    #[test]
    fn eval_monomial_tight() {
        let p = BivarPoly::from_terms([(MonoIndex::new(2, 1), Interval::ONE)]);
        let v = p.eval_point(Point2::new(2.0, 3.0));
        assert!(v.contains(12.0));
        assert!(v.width() <= 4.0 * f64::EPSILON * 12.0);
    }

    #[test]
    fn eval_at_right_centre() {
        // H(λ, 0) = -(1/12)λ³(λ+2) ≈ -0.210771, exactly -404681/1920000.
        let h = ham_095();
        let v = h.eval_point(Point2::new(0.95, 0.0));
        let exact = parse_rational("-404681/1920000").unwrap();
        assert!(contains_rational(&v, &exact));
        assert!(v.width() < 1e-14);
        // And the left centre H(-1, 0) = -(1/12)(2λ+1) = -29/120.
        let v = h.eval_point(Point2::new(-1.0, 0.0));
        let exact = parse_rational("-29/120").unwrap();
        assert!(contains_rational(&v, &exact));
    }

    #[test]
    fn partials_match_hand_derivative() {
        // H_x = x³ + (1-λ)x² - λx, H_y = y.
        let h = ham_095();
        let hx = h.partial(Var::X);
        assert!(contains_rational(
            &hx.coefficient(MonoIndex::new(3, 0)),
            &parse_rational("1").unwrap()
        ));
        assert!(contains_rational(
            &hx.coefficient(MonoIndex::new(2, 0)),
            &parse_rational("1/20").unwrap()
        ));
        assert!(contains_rational(
            &hx.coefficient(MonoIndex::new(1, 0)),
            &parse_rational("-19/20").unwrap()
        ));
        let hy = h.partial(Var::Y);
        assert_eq!(hy.terms().len(), 1);
        assert!(contains_rational(
            &hy.coefficient(MonoIndex::new(0, 1)),
            &parse_rational("1").unwrap()
        ));
        // Derivative of a constant.
        let c = BivarPoly::constant(Interval::point(7.0));
        assert!(c.partial(Var::X).is_zero());
    }

    #[test]
    fn range_square_on_symmetric_box() {
        let p = BivarPoly::from_terms([(MonoIndex::new(2, 0), Interval::ONE)]);
        let r = p.range_on_box(&Interval::new(-1.0, 1.0), &Interval::new(-1.0, 1.0));
        assert!(r.lo() <= 0.0 && r.hi() >= 1.0);
        assert!(r.lo() >= -1e-15 && r.hi() <= 1.0 + 1e-15);
    }

    #[test]
    fn range_constant() {
        let p = BivarPoly::constant(Interval::point(7.0));
        let r = p.range_on_box(&Interval::new(-5.0, 3.0), &Interval::new(0.0, 1.0));
        assert!(r.contains(7.0));
        assert!(r.width() <= 2.0 * f64::EPSILON * 7.0);
    }

    #[test]
    fn range_ham_small_box() {
        // Dense-grid true range of H on [-0.01, 0.01]² is about
        // [-4.752e-5, 5.0e-5]; the bound must cover it and stay tight.
        let h = ham_095();
        let b = Interval::new(-0.01, 0.01);
        let r = h.range_on_box(&b, &b);
        assert!(r.contains(0.0));
        assert!(r.width() <= 2e-4, "width {}", r.width());
        let mut true_lo = f64::INFINITY;
        let mut true_hi = f64::NEG_INFINITY;
        for ix in 0..=40 {
            for iy in 0..=40 {
                let x = -0.01 + 0.02 * ix as f64 / 40.0;
                let y = -0.01 + 0.02 * iy as f64 / 40.0;
                let v = h.eval_point(Point2::new(x, y)).midpoint();
                true_lo = true_lo.min(v);
                true_hi = true_hi.max(v);
            }
        }
        assert!(r.lo() <= true_lo && true_hi <= r.hi());
    }

    #[test]
    fn range_soundness_random_samples() {
        let h = ham_095();
        let bx = Interval::new(-1.3, -0.4);
        let by = Interval::new(-0.2, 0.7);
        let r = h.range_on_box(&bx, &by);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = bx.lo() + bx.width() * next();
            let y = by.lo() + by.width() * next();
            let v = h.eval_point(Point2::new(x, y));
            assert!(v.is_subset(&r), "sample ({x}, {y}) escapes range bound");
        }
    }

    #[test]
    fn range_refinement_inside_horner() {
        let h = ham_095();
        let bx = Interval::new(-1.3, -0.4);
        let by = Interval::new(-0.2, 0.7);
        let refined = h.range_on_box(&bx, &by);
        let naive = h.eval_horner(&bx, &by);
        assert!(refined.is_subset(&naive));
    }

    #[test]
    fn restrict_segment_diagonal() {
        // x + y along (0,0) -> (1,1) is 2t.
        let p = BivarPoly::from_terms([
            (MonoIndex::new(1, 0), Interval::ONE),
            (MonoIndex::new(0, 1), Interval::ONE),
        ]);
        let s = Segment::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        let q = p.restrict_to_segment(&s);
        assert_eq!(q.degree(), 1);
        assert!(q.coeffs()[1].contains(2.0));
        assert!(q.eval(&Interval::point(0.5)).contains(1.0));
    }

    #[test]
    fn restrict_segment_horizontal() {
        // x² along (0,0) -> (2,0) is 4t².
        let p = BivarPoly::from_terms([(MonoIndex::new(2, 0), Interval::ONE)]);
        let s = Segment::new(Point2::new(0.0, 0.0), Point2::new(2.0, 0.0));
        let q = p.restrict_to_segment(&s);
        assert_eq!(q.degree(), 2);
        assert!(q.coeffs()[2].contains(4.0));
        assert!(q.coeffs()[0].width() == 0.0 && q.coeffs()[0].contains(0.0));
    }

    #[test]
    fn restrict_segment_matches_pointwise() {
        // H on a vertical box side: quadratic in t, agreeing with eval_point.
        let h = ham_095();
        let s = Segment::new(Point2::new(-0.7, -0.3), Point2::new(-0.7, 0.4));
        let q = h.restrict_to_segment(&s);
        assert_eq!(q.degree(), 2);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let direct = h.eval_point(s.point_at(t));
            let via = q.eval(&Interval::point(t));
            assert!(via.intersect(&direct).is_some());
            assert!(direct.midpoint() >= via.lo() - 1e-12 && direct.midpoint() <= via.hi() + 1e-12);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BivarPoly::parse("").is_err());
        assert!(BivarPoly::parse("3*z^2").is_err());
        assert!(BivarPoly::parse("x^").is_err());
    }

    #[test]
    fn parse_plain_and_signed_styles() {
        let a = BivarPoly::parse("1*x^1*y^0 -0.5*x^0*y^2").unwrap();
        let b = BivarPoly::parse("x - 0.5*y^2").unwrap();
        assert_eq!(a.terms().len(), b.terms().len());
        for ((ma, ca), (mb, cb)) in a.terms().iter().zip(b.terms()) {
            assert_eq!(ma, mb);
            assert_eq!((ca.lo(), ca.hi()), (cb.lo(), cb.hi()));
        }
    }

    #[test]
    fn univar_range_monotone_refinement() {
        // t² - t on [2, 3] is monotone: exact range [2, 6].
        let q = UnivarPoly::new(vec![
            Interval::ZERO,
            Interval::point(-1.0),
            Interval::ONE,
        ]);
        let r = q.range_on(&Interval::new(2.0, 3.0));
        assert!(r.lo() <= 2.0 && 6.0 <= r.hi());
        assert!(r.width() <= 4.0 + 1e-12);
    }
}
