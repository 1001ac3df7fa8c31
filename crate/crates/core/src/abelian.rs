//! Assembly of full Abelian integrals from monomial enclosures, certified
//! sign changes, and the non-rigorous linear solve used to pick candidate
//! perturbation coefficients.
//!
//! A strict sign change of the enclosed integral between two sampled levels
//! proves a zero of `I` between them, hence at least one limit cycle
//! bifurcating from an oval in that gap. Pairs whose enclosure touches zero
//! are recorded as inconclusive, never as absence of a zero.

use crate::cover::{self, Box2, CoverError, CoverStats, Hamiltonian, OvalCover};
use crate::decimal;
use crate::interval::{Interval, SignClass};
use crate::poly::{BivarPoly, MonoIndex, Point2, Var};
use crate::quad::{self, MonomialIntegralResult};
use std::time::Duration;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum AbelianError {
    #[error("no monomial enclosure for index {0} in the sample table")]
    MissingMonomial(MonoIndex),
    #[error("linear system is singular (pivot below threshold)")]
    SingularSystem,
}

/// The 2-form density `Σ c_ij x^i y^j dx∧dy` of a polynomial perturbation.
/// Coefficients are point intervals when given as numbers; building the form
/// from a 1-form by exterior differentiation keeps interval coefficients so
/// rounding in the conversion stays enclosed.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationForm {
    terms: Vec<(MonoIndex, Interval)>,
}

impl PerturbationForm {
    pub fn from_coefficients(coeffs: impl IntoIterator<Item = (MonoIndex, f64)>) -> Self {
        let mut terms: Vec<(MonoIndex, Interval)> = coeffs
            .into_iter()
            .map(|(m, c)| (m, Interval::point(c)))
            .collect();
        terms.sort_by_key(|(m, _)| *m);
        PerturbationForm { terms }
    }

    /// Directly from a polynomial density `dω = p(x,y) dx∧dy`.
    pub fn from_two_form(p: &BivarPoly) -> Self {
        PerturbationForm {
            terms: p.terms().to_vec(),
        }
    }

    /// From the 1-form `ω = f dy - g dx`: `dω = (f_x + g_y) dx∧dy`.
    pub fn from_one_form(f: &BivarPoly, g: &BivarPoly) -> Self {
        let density = f.partial(Var::X).add(&g.partial(Var::Y));
        PerturbationForm {
            terms: density.terms().to_vec(),
        }
    }

    pub fn terms(&self) -> &[(MonoIndex, Interval)] {
        &self.terms
    }

    pub fn indices(&self) -> Vec<MonoIndex> {
        self.terms.iter().map(|(m, _)| *m).collect()
    }
}

/// Enclosure of `I(h) = Σ c_ij I_ij(h)` from one level's monomial table.
pub fn combine(
    table: &[MonomialIntegralResult],
    form: &PerturbationForm,
) -> Result<Interval, AbelianError> {
    let mut acc = Interval::ZERO;
    for (idx, c) in &form.terms {
        let entry = table
            .iter()
            .find(|r| r.index == *idx)
            .ok_or(AbelianError::MissingMonomial(*idx))?;
        acc = acc.add(&c.mul(&entry.value));
    }
    Ok(acc)
}

/// One sampled level in a branch certificate.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SampleRecord {
    pub h: f64,
    /// Outward-rounded decimal endpoints of the enclosure of `I(h)`.
    pub enclosure: [String; 2],
    pub sign: SignClass,
}

/// Certified conclusions for one family of ovals: every listed zero interval
/// carries a strict sign change of the enclosed integral, so each contains a
/// zero of `I` and yields at least one bifurcating limit cycle.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Certificate {
    pub branch: String,
    pub samples: Vec<SampleRecord>,
    pub zero_intervals: Vec<[f64; 2]>,
    pub inconclusive_pairs: Vec<[f64; 2]>,
    pub limit_cycles: usize,
}

/// Decimal digits used for enclosure endpoints in certificates.
pub const CERT_DIGITS: usize = 17;

/// Walks adjacent sample pairs and certifies sign changes. `samples` must be
/// sorted by `h` and belong to one oval family.
pub fn certify_signs(branch: &str, samples: &[(f64, Interval)]) -> Certificate {
    assert!(
        samples.windows(2).all(|w| w[0].0 < w[1].0),
        "samples must be strictly sorted by h"
    );
    let records: Vec<SampleRecord> = samples
        .iter()
        .map(|(h, iv)| {
            let (lo, hi) = decimal::format_outward(iv, CERT_DIGITS);
            SampleRecord {
                h: *h,
                enclosure: [lo, hi],
                sign: iv.sign(),
            }
        })
        .collect();
    let mut zero_intervals = Vec::new();
    let mut inconclusive = Vec::new();
    for w in samples.windows(2) {
        let (h1, s1) = (w[0].0, w[0].1.sign());
        let (h2, s2) = (w[1].0, w[1].1.sign());
        if s1 == SignClass::ContainsZero || s2 == SignClass::ContainsZero {
            inconclusive.push([h1, h2]);
        } else if s1 != s2 {
            zero_intervals.push([h1, h2]);
        }
    }
    Certificate {
        branch: branch.to_string(),
        limit_cycles: zero_intervals.len(),
        samples: records,
        zero_intervals,
        inconclusive_pairs: inconclusive,
    }
}

/// Re-checks a certificate's sign logic from its serialized content alone:
/// signs must match the decimal enclosures, zero intervals must carry strict
/// opposite signs, and the cycle count must equal the zero-interval count.
pub fn verify_certificate(cert: &Certificate) -> bool {
    let sign_of = |rec: &SampleRecord| -> Option<SignClass> {
        let lo = decimal::parse_rational(&rec.enclosure[0])?;
        let hi = decimal::parse_rational(&rec.enclosure[1])?;
        if lo > hi {
            return None;
        }
        Some(if lo > num_rational::BigRational::from_integer(0.into()) {
            SignClass::StrictlyPositive
        } else if hi < num_rational::BigRational::from_integer(0.into()) {
            SignClass::StrictlyNegative
        } else {
            SignClass::ContainsZero
        })
    };
    for rec in &cert.samples {
        match sign_of(rec) {
            Some(s) if s == rec.sign => {}
            _ => return false,
        }
    }
    let lookup = |h: f64| -> Option<SignClass> {
        cert.samples.iter().find(|r| r.h == h).map(|r| r.sign)
    };
    for z in &cert.zero_intervals {
        match (lookup(z[0]), lookup(z[1])) {
            (Some(a), Some(b))
                if a != SignClass::ContainsZero
                    && b != SignClass::ContainsZero
                    && a != b => {}
            _ => return false,
        }
    }
    cert.limit_cycles == cert.zero_intervals.len()
}

/// Non-rigorous Gaussian elimination with partial pivoting on enclosure
/// midpoints. Returns approximate coefficients for a subsequent rigorous
/// verification pass; no containment claim is made here.
pub fn solve_coefficients(
    indices: &[MonoIndex],
    rows: &[Vec<f64>],
    targets: &[f64],
) -> Result<PerturbationForm, AbelianError> {
    let sol = solve_linear(rows, targets)?;
    Ok(PerturbationForm::from_coefficients(
        indices.iter().copied().zip(sol),
    ))
}

pub fn solve_linear(rows: &[Vec<f64>], targets: &[f64]) -> Result<Vec<f64>, AbelianError> {
    let n = rows.len();
    assert!(
        n > 0 && targets.len() == n && rows.iter().all(|r| r.len() == n),
        "square system required"
    );
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut b: Vec<f64> = targets.to_vec();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        let row_norm: f64 = a[pivot_row].iter().map(|v| v.abs()).sum();
        if pivot < 1e-12 * row_norm.max(1.0) {
            return Err(AbelianError::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Monomial table for one level: integrals over one shared cover.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub h: f64,
    pub outcome: Result<RowData, CoverError>,
}

#[derive(Clone, Debug)]
pub struct RowData {
    pub integrals: Vec<MonomialIntegralResult>,
    pub stats: CoverStats,
    pub domain: Box2,
    pub wall: Duration,
    pub cover: OvalCover,
}

impl SampleRow {
    pub fn integral(&self, idx: MonoIndex) -> Option<&MonomialIntegralResult> {
        self.outcome
            .as_ref()
            .ok()
            .and_then(|d| d.integrals.iter().find(|r| r.index == idx))
    }
}

/// For each level: one trapping box, one cover, all requested monomials over
/// that cover. A cover failure on one level is recorded in its row and does
/// not abort the others.
pub fn sample_monomials(
    ham: &Hamiltonian,
    seed: Point2,
    h_list: &[f64],
    index_list: &[MonoIndex],
    minsize: f64,
) -> Vec<SampleRow> {
    h_list
        .iter()
        .map(|&h| {
            let start = std::time::Instant::now();
            let outcome = cover::trapping_box(ham, h, seed).map(|domain| {
                let cov = cover::build_cover(ham, h, &domain, minsize, seed);
                let integrals = index_list
                    .iter()
                    .map(|&m| quad::monomial_abelian_integral(&cov, m))
                    .collect();
                RowData {
                    integrals,
                    stats: cov.stats,
                    domain,
                    wall: start.elapsed(),
                    cover: cov,
                }
            });
            SampleRow { h, outcome }
        })
        .collect()
}
