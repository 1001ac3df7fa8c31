//! Batch pipeline behind the CLI subcommands: sampling tables, the
//! coefficient solve, certification, and trapping-box inspection.
//!
//! Output layout, given `--out DIR`:
//!   - `sample`:  one `DIR/<family>.csv` per family; with `--dump-covers`
//!     also `DIR/<family>_h<k>_cover.csv` per level.
//!   - `certify`: `DIR/certificate.json` plus a human summary on stdout.
//!
//! Sample CSV columns: `h`, then a `I_<i>_<j>_lo, I_<i>_<j>_hi` pair per
//! monomial (outward-rounded decimals), then
//! `inside_boxes,inside_triangles,on_pieces,fail_boxes,outside_dropped,pruned_pieces,wall_ms`.
//! Everything is deterministic except `wall_ms`, which is why certificates
//! carry box counts but no timings.
//!
//! Cover dump CSV columns: `kind,label,x0,y0,x1,y1,x2,y2,x3,y3` — boxes list
//! their four corners counter-clockwise from the lower-left, triangles leave
//! the last pair empty, tubes list their perimeter vertices.

use crate::abelian::{self, Certificate, PerturbationForm, SampleRow};
use crate::config::ProblemConfig;
use crate::cover::{self, Box2, CoverError, CoverStats, Hamiltonian, OvalCover};
use crate::decimal;
use crate::interval::Interval;
use crate::poly::MonoIndex;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(#[from] crate::config::ConfigError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("family `{family}`, h = {h}: {source}")]
    Cover {
        family: String,
        h: f64,
        source: CoverError,
    },
    #[error("the command needs a perturbation form in the config")]
    MissingForm,
    #[error("the command needs a [solve] section in the config")]
    MissingSolve,
    #[error("solve: {0}")]
    Solve(#[from] crate::abelian::AbelianError),
    #[error("family `{0}` not found")]
    UnknownFamily(String),
}

/// Command-line overrides applied on top of the config.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub minsize: Option<f64>,
    pub digits: Option<usize>,
    pub out_dir: PathBuf,
    pub dump_covers: bool,
}

impl RunOptions {
    fn minsize(&self, cfg: &ProblemConfig) -> f64 {
        self.minsize.unwrap_or(cfg.minsize)
    }

    fn digits(&self, cfg: &ProblemConfig) -> usize {
        self.digits.unwrap_or(cfg.digits)
    }
}

pub struct SampleOutcome {
    /// (family, csv path) in config order.
    pub files: Vec<(String, PathBuf)>,
    pub report: String,
}

/// Integrates the configured monomials for every family and writes one CSV
/// per family. A cover failure is fatal and names the family, but only after
/// the remaining levels were attempted.
pub fn cmd_sample(cfg: &ProblemConfig, opts: &RunOptions) -> Result<SampleOutcome, RunError> {
    let ham = Hamiltonian::new(cfg.hamiltonian.clone());
    let minsize = opts.minsize(cfg);
    let digits = opts.digits(cfg);
    let monomials = cfg.effective_monomials();
    std::fs::create_dir_all(&opts.out_dir)?;

    let mut files = Vec::new();
    let mut report = String::new();
    let mut first_failure: Option<RunError> = None;
    for fam in &cfg.families {
        let rows = abelian::sample_monomials(&ham, fam.seed, &fam.h_values, &monomials, minsize);
        let mut csv = String::new();
        write_sample_header(&mut csv, &monomials);
        for (k, row) in rows.iter().enumerate() {
            match &row.outcome {
                Ok(data) => {
                    write_sample_row(&mut csv, row.h, data, digits);
                    if opts.dump_covers {
                        let path = opts
                            .out_dir
                            .join(format!("{}_h{}_cover.csv", fam.name, k));
                        std::fs::write(&path, dump_cover(&data.cover))?;
                    }
                }
                Err(e) => {
                    if first_failure.is_none() {
                        first_failure = Some(RunError::Cover {
                            family: fam.name.clone(),
                            h: row.h,
                            source: e.clone(),
                        });
                    }
                }
            }
        }
        let path = opts.out_dir.join(format!("{}.csv", fam.name));
        std::fs::write(&path, csv)?;
        let total_wall: u128 = rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok())
            .map(|d| d.wall.as_millis())
            .sum();
        let boxes: usize = rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok())
            .map(|d| d.stats.inside_boxes + d.stats.on_pieces + d.stats.fail_boxes)
            .sum();
        writeln!(
            report,
            "{}: {} levels, {} boxes, {} ms -> {}",
            fam.name,
            fam.h_values.len(),
            boxes,
            total_wall,
            path.display()
        )
        .unwrap();
        files.push((fam.name.clone(), path));
    }
    match first_failure {
        Some(e) => Err(e),
        None => Ok(SampleOutcome { files, report }),
    }
}

fn write_sample_header(csv: &mut String, monomials: &[MonoIndex]) {
    csv.push('h');
    for m in monomials {
        write!(csv, ",I_{}_{}_lo,I_{}_{}_hi", m.i, m.j, m.i, m.j).unwrap();
    }
    csv.push_str(
        ",inside_boxes,inside_triangles,on_pieces,fail_boxes,outside_dropped,pruned_pieces,wall_ms\n",
    );
}

fn write_sample_row(csv: &mut String, h: f64, data: &abelian::RowData, digits: usize) {
    write!(csv, "{h}").unwrap();
    for r in &data.integrals {
        let (lo, hi) = decimal::format_outward(&r.value, digits);
        write!(csv, ",{lo},{hi}").unwrap();
    }
    let s = &data.stats;
    writeln!(
        csv,
        ",{},{},{},{},{},{},{}",
        s.inside_boxes,
        s.inside_triangles,
        s.on_pieces,
        s.fail_boxes,
        s.outside_dropped,
        s.pruned_pieces,
        data.wall.as_millis()
    )
    .unwrap();
}

/// One record per cover piece: kind, label, vertices.
fn dump_cover(cover: &OvalCover) -> String {
    let mut out = String::from("kind,label,x0,y0,x1,y1,x2,y2,x3,y3\n");
    let box_row = |out: &mut String, kind: &str, label: &str, b: &Box2| {
        writeln!(
            out,
            "{kind},{label},{},{},{},{},{},{},{},{}",
            b.x.lo(),
            b.y.lo(),
            b.x.hi(),
            b.y.lo(),
            b.x.hi(),
            b.y.hi(),
            b.x.lo(),
            b.y.hi()
        )
        .unwrap();
    };
    for b in &cover.inside_boxes {
        box_row(&mut out, "box", "inside", b);
    }
    for t in &cover.inside_triangles {
        writeln!(
            out,
            "triangle,inside,{},{},{},{},{},{},,",
            t.v[0].x, t.v[0].y, t.v[1].x, t.v[1].y, t.v[2].x, t.v[2].y
        )
        .unwrap();
    }
    for b in &cover.fail_boxes {
        box_row(&mut out, "box", "fail", b);
    }
    for d in &cover.on_pieces {
        let p = &d.tube;
        writeln!(
            out,
            "tube,on,{},{},{},{},{},{},{},{}",
            p.v[0].x, p.v[0].y, p.v[1].x, p.v[1].y, p.v[2].x, p.v[2].y, p.v[3].x, p.v[3].y
        )
        .unwrap();
    }
    out
}

pub struct SolveOutcome {
    pub coefficients: Vec<(MonoIndex, f64)>,
    pub report: String,
}

/// Builds the linear system from enclosure midpoints at the configured
/// (family, h) samples and solves for the perturbation coefficients.
pub fn cmd_solve(cfg: &ProblemConfig, opts: &RunOptions) -> Result<SolveOutcome, RunError> {
    let solve = cfg.solve.as_ref().ok_or(RunError::MissingSolve)?;
    let monomials = cfg.effective_monomials();
    assert!(
        monomials.len() == solve.rows.len(),
        "square system: {} monomials vs {} rows",
        monomials.len(),
        solve.rows.len()
    );
    let ham = Hamiltonian::new(cfg.hamiltonian.clone());
    let minsize = opts.minsize(cfg);

    let mut matrix = Vec::new();
    for (fam_name, h) in &solve.rows {
        let fam = cfg
            .family(fam_name)
            .ok_or_else(|| RunError::UnknownFamily(fam_name.clone()))?;
        let rows = abelian::sample_monomials(&ham, fam.seed, &[*h], &monomials, minsize);
        let data = match &rows[0].outcome {
            Ok(d) => d,
            Err(e) => {
                return Err(RunError::Cover {
                    family: fam_name.clone(),
                    h: *h,
                    source: e.clone(),
                })
            }
        };
        matrix.push(data.integrals.iter().map(|r| r.value.midpoint()).collect());
    }
    let form = abelian::solve_coefficients(&monomials, &matrix, &solve.targets)?;
    let coefficients: Vec<(MonoIndex, f64)> = form
        .terms()
        .iter()
        .map(|(m, c)| (*m, c.midpoint()))
        .collect();

    let mut report = String::new();
    writeln!(report, "coefficients (full precision / 4 decimals):").unwrap();
    for (m, c) in &coefficients {
        writeln!(report, "  c[{},{}] = {c:e} / {c:.4}", m.i, m.j).unwrap();
    }
    Ok(SolveOutcome {
        coefficients,
        report,
    })
}

/// Per-branch certificate plus the cover statistics backing it.
#[derive(Debug, serde::Serialize)]
pub struct BranchReport {
    #[serde(flatten)]
    pub certificate: Certificate,
    pub expected_changes: Option<usize>,
    pub cover_stats: Vec<LevelStats>,
}

#[derive(Debug, serde::Serialize)]
pub struct LevelStats {
    pub h: f64,
    pub domain: [String; 4],
    #[serde(flatten)]
    pub stats: CoverStats,
}

/// The serialized certificate document. Deterministic: two runs on the same
/// config produce byte-identical files (timings are reported on stdout only).
#[derive(Debug, serde::Serialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub generator: String,
    pub hamiltonian: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub form: String,
    pub form_coefficients: Vec<FormCoefficient>,
    pub minsize: f64,
    pub branches: Vec<BranchReport>,
    pub total_limit_cycles: usize,
    pub all_pairs_conclusive: bool,
    pub expectations_met: bool,
}

#[derive(Debug, serde::Serialize)]
pub struct FormCoefficient {
    pub i: u32,
    pub j: u32,
    /// Exact decimal endpoints of the binary coefficient interval.
    pub lo: String,
    pub hi: String,
}

pub struct CertifyOutcome {
    pub document_path: PathBuf,
    pub summary: String,
    /// Every adjacent pair conclusive and every expectation met.
    pub certified: bool,
    pub total_limit_cycles: usize,
}

/// Runs the full pipeline per family, certifies sign changes of the combined
/// integral, and writes the certificate document.
pub fn cmd_certify(cfg: &ProblemConfig, opts: &RunOptions) -> Result<CertifyOutcome, RunError> {
    let form = cfg.form.as_ref().ok_or(RunError::MissingForm)?;
    let ham = Hamiltonian::new(cfg.hamiltonian.clone());
    let minsize = opts.minsize(cfg);
    std::fs::create_dir_all(&opts.out_dir)?;

    let mut branches = Vec::new();
    let mut summary = String::new();
    let mut total = 0usize;
    let mut all_conclusive = true;
    let mut expectations_met = true;
    for fam in &cfg.families {
        let indices = form.indices();
        let rows = abelian::sample_monomials(&ham, fam.seed, &fam.h_values, &indices, minsize);
        let mut samples: Vec<(f64, Interval)> = Vec::new();
        let mut level_stats = Vec::new();
        let mut wall_ms = 0u128;
        for row in &rows {
            let data = match &row.outcome {
                Ok(d) => d,
                Err(e) => {
                    return Err(RunError::Cover {
                        family: fam.name.clone(),
                        h: row.h,
                        source: e.clone(),
                    })
                }
            };
            let combined = combine_row(row, form)?;
            samples.push((row.h, combined));
            wall_ms += data.wall.as_millis();
            level_stats.push(LevelStats {
                h: row.h,
                domain: domain_strings(&data.domain),
                stats: data.stats,
            });
        }
        let cert = abelian::certify_signs(&fam.name, &samples);
        let conclusive = cert.inconclusive_pairs.is_empty();
        let expected_ok = fam
            .expect_changes
            .map(|n| n == cert.limit_cycles)
            .unwrap_or(true);
        write!(
            summary,
            "{}: {} limit cycle{} certified",
            fam.name,
            cert.limit_cycles,
            if cert.limit_cycles == 1 { "" } else { "s" }
        )
        .unwrap();
        if !conclusive {
            write!(
                summary,
                " ({} inconclusive pair{})",
                cert.inconclusive_pairs.len(),
                if cert.inconclusive_pairs.len() == 1 {
                    ""
                } else {
                    "s"
                }
            )
            .unwrap();
        }
        if !expected_ok {
            write!(summary, " [expected {}]", fam.expect_changes.unwrap()).unwrap();
        }
        writeln!(summary, " ({} ms)", wall_ms).unwrap();
        total += cert.limit_cycles;
        all_conclusive &= conclusive;
        expectations_met &= expected_ok;
        branches.push(BranchReport {
            certificate: cert,
            expected_changes: fam.expect_changes,
            cover_stats: level_stats,
        });
    }
    writeln!(summary, "total: {total} limit cycles certified").unwrap();

    let doc = CertificateDocument {
        schema_version: 1,
        generator: format!("abelint {}", env!("CARGO_PKG_VERSION")),
        hamiltonian: cfg.hamiltonian_text.clone(),
        lambda: cfg.lambda,
        form: cfg.form_text.clone().unwrap_or_default(),
        form_coefficients: form
            .terms()
            .iter()
            .map(|(m, c)| FormCoefficient {
                i: m.i,
                j: m.j,
                lo: decimal::format_down(c.lo(), abelian::CERT_DIGITS as u32),
                hi: decimal::format_up(c.hi(), abelian::CERT_DIGITS as u32),
            })
            .collect(),
        minsize,
        branches,
        total_limit_cycles: total,
        all_pairs_conclusive: all_conclusive,
        expectations_met,
    };
    let path = opts.out_dir.join("certificate.json");
    let json = serde_json::to_string_pretty(&doc).expect("serializable document");
    std::fs::write(&path, json)?;

    Ok(CertifyOutcome {
        document_path: path,
        summary,
        certified: all_conclusive && expectations_met,
        total_limit_cycles: total,
    })
}

fn combine_row(row: &SampleRow, form: &PerturbationForm) -> Result<Interval, RunError> {
    let data = row.outcome.as_ref().expect("checked by caller");
    Ok(abelian::combine(&data.integrals, form)?)
}

fn domain_strings(b: &Box2) -> [String; 4] {
    [
        decimal::format_down(b.x.lo(), 6),
        decimal::format_up(b.x.hi(), 6),
        decimal::format_down(b.y.lo(), 6),
        decimal::format_up(b.y.hi(), 6),
    ]
}

/// Re-checks a serialized certificate document without rerunning quadrature:
/// parses the decimal enclosures and re-validates the sign logic and counts.
pub fn verify_certificate_document(json: &str) -> Result<bool, serde_json::Error> {
    #[derive(serde::Deserialize)]
    struct Doc {
        branches: Vec<Certificate>,
        total_limit_cycles: usize,
    }
    let doc: Doc = serde_json::from_str(json)?;
    let ok = doc.branches.iter().all(abelian::verify_certificate)
        && doc.total_limit_cycles == doc.branches.iter().map(|b| b.limit_cycles).sum::<usize>();
    Ok(ok)
}

pub struct TrapOutcome {
    pub boxes: Vec<(String, f64, Box2)>,
    pub report: String,
}

/// Prints the trapping box for every configured (family, h).
pub fn cmd_trap(cfg: &ProblemConfig, opts: &RunOptions) -> Result<TrapOutcome, RunError> {
    let ham = Hamiltonian::new(cfg.hamiltonian.clone());
    let digits = opts.digits(cfg);
    let mut boxes = Vec::new();
    let mut report = String::new();
    for fam in &cfg.families {
        for &h in &fam.h_values {
            let b = cover::trapping_box(&ham, h, fam.seed).map_err(|e| RunError::Cover {
                family: fam.name.clone(),
                h,
                source: e,
            })?;
            writeln!(
                report,
                "{} h={}: [{}, {}] x [{}, {}]",
                fam.name,
                h,
                decimal::format_down(b.x.lo(), digits as u32),
                decimal::format_up(b.x.hi(), digits as u32),
                decimal::format_down(b.y.lo(), digits as u32),
                decimal::format_up(b.y.hi(), digits as u32),
            )
            .unwrap();
            boxes.push((fam.name.clone(), h, b));
        }
    }
    Ok(TrapOutcome { boxes, report })
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ProblemConfig, RunError> {
    let text = std::fs::read_to_string(path)?;
    Ok(crate::config::parse_config(&text)?)
}
