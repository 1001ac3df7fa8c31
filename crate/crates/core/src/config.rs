//! Problem configuration: flat key-value text with sectioned families.
//!
//! ```text
//! hamiltonian = 1/2*y^2 + 1/4*x^4 + 1/60*x^3 - 19/40*x^2
//! lambda = 0.95
//! minsize = 1/512
//! digits = 4
//! monomials = 0,0 1,0 2,0 0,2
//! form = 438.4905 - 25.2469*x - 452.7899*x^2 - 741.0341*y^2
//!
//! [family left]
//! seed = -1.0 0.0
//! h = -0.1933 -0.0846 -0.0121
//! expect_changes = 2
//!
//! [solve]
//! rows = left:-0.0362 left:-0.1208 left:-0.1812 right:-0.1054
//! targets = 1 -1 1 -1
//! ```
//!
//! Decimal literals parse into containing intervals wherever they feed
//! rigorous arithmetic. A perturbation may be given directly as the 2-form
//! density (`form = ...`) or as a 1-form via `perturbation_f` /
//! `perturbation_g`, converted by exterior differentiation.

use crate::abelian::PerturbationForm;
use crate::poly::{BivarPoly, MonoIndex, Point2};
use num_traits::Signed;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("invalid value for `{key}`: {message}")]
    BadValue { key: String, message: String },
}

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub name: String,
    pub seed: Point2,
    /// Level values, sorted ascending.
    pub h_values: Vec<f64>,
    /// Number of sign changes the certificate is expected to prove.
    pub expect_changes: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// (family name, h) per matrix row.
    pub rows: Vec<(String, f64)>,
    pub targets: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ProblemConfig {
    pub hamiltonian_text: String,
    pub hamiltonian: BivarPoly,
    /// Optional parameter echoed into certificates.
    pub lambda: Option<f64>,
    pub minsize: f64,
    pub digits: usize,
    pub monomials: Vec<MonoIndex>,
    pub form: Option<PerturbationForm>,
    pub form_text: Option<String>,
    pub families: Vec<FamilyConfig>,
    pub solve: Option<SolveConfig>,
}

impl ProblemConfig {
    pub fn family(&self, name: &str) -> Option<&FamilyConfig> {
        self.families.iter().find(|f| f.name == name)
    }

    /// Monomial indices to integrate: the explicit list when given, else the
    /// form's indices.
    pub fn effective_monomials(&self) -> Vec<MonoIndex> {
        if !self.monomials.is_empty() {
            self.monomials.clone()
        } else if let Some(form) = &self.form {
            form.indices()
        } else {
            Vec::new()
        }
    }
}

enum Section {
    Global,
    Family(usize),
    Solve,
}

pub fn parse_config(text: &str) -> Result<ProblemConfig, ConfigError> {
    let mut globals: Vec<(usize, String, String)> = Vec::new();
    let mut families: Vec<(String, Vec<(usize, String, String)>)> = Vec::new();
    let mut solve_keys: Vec<(usize, String, String)> = Vec::new();
    let mut section = Section::Global;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let header = header.trim();
            if header == "solve" {
                section = Section::Solve;
            } else if let Some(name) = header.strip_prefix("family") {
                let name = name.trim();
                if name.is_empty() {
                    return Err(ConfigError::Line(lineno, "family needs a name".into()));
                }
                if families.iter().any(|(n, _)| n == name) {
                    return Err(ConfigError::Line(
                        lineno,
                        format!("duplicate family `{name}`"),
                    ));
                }
                families.push((name.to_string(), Vec::new()));
                section = Section::Family(families.len() - 1);
            } else {
                return Err(ConfigError::Line(
                    lineno,
                    format!("unknown section `[{header}]`"),
                ));
            }
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::Line(lineno, format!("expected `key = value`, got `{line}`"))
        })?;
        let entry = (lineno, key.trim().to_string(), value.trim().to_string());
        match section {
            Section::Global => globals.push(entry),
            Section::Family(k) => families[k].1.push(entry),
            Section::Solve => solve_keys.push(entry),
        }
    }

    let get = |keys: &[(usize, String, String)], name: &str| -> Option<String> {
        keys.iter()
            .rev()
            .find(|(_, k, _)| k == name)
            .map(|(_, _, v)| v.clone())
    };

    for (lineno, key, _) in &globals {
        match key.as_str() {
            "hamiltonian" | "lambda" | "minsize" | "digits" | "monomials" | "form"
            | "perturbation_f" | "perturbation_g" => {}
            other => {
                return Err(ConfigError::Line(*lineno, format!("unknown key `{other}`")));
            }
        }
    }

    let ham_text = get(&globals, "hamiltonian")
        .ok_or_else(|| ConfigError::MissingKey("hamiltonian".into()))?;
    let hamiltonian = BivarPoly::parse(&ham_text).map_err(|e| ConfigError::BadValue {
        key: "hamiltonian".into(),
        message: e.to_string(),
    })?;

    let lambda = match get(&globals, "lambda") {
        Some(v) => Some(parse_number("lambda", &v)?),
        None => None,
    };
    let minsize = match get(&globals, "minsize") {
        Some(v) => parse_number("minsize", &v)?,
        None => 1.0 / 512.0,
    };
    if !(minsize > 0.0) || !minsize.is_finite() {
        return Err(ConfigError::BadValue {
            key: "minsize".into(),
            message: "must be a positive finite number".into(),
        });
    }
    let digits = match get(&globals, "digits") {
        Some(v) => v.parse::<usize>().map_err(|_| ConfigError::BadValue {
            key: "digits".into(),
            message: "must be a positive integer".into(),
        })?,
        None => 4,
    }
    .max(1);

    let monomials = match get(&globals, "monomials") {
        Some(v) => parse_monomials(&v)?,
        None => Vec::new(),
    };

    let form_text = get(&globals, "form");
    let pert_f = get(&globals, "perturbation_f");
    let pert_g = get(&globals, "perturbation_g");
    if form_text.is_some() && (pert_f.is_some() || pert_g.is_some()) {
        return Err(ConfigError::BadValue {
            key: "form".into(),
            message: "give either `form` or `perturbation_f`/`perturbation_g`, not both".into(),
        });
    }
    let (form, form_text) = if let Some(text) = form_text {
        let p = BivarPoly::parse(&text).map_err(|e| ConfigError::BadValue {
            key: "form".into(),
            message: e.to_string(),
        })?;
        (Some(PerturbationForm::from_two_form(&p)), Some(text))
    } else if pert_f.is_some() || pert_g.is_some() {
        let parse = |key: &str, v: Option<String>| -> Result<BivarPoly, ConfigError> {
            match v {
                None => Ok(BivarPoly::zero()),
                Some(t) => BivarPoly::parse(&t).map_err(|e| ConfigError::BadValue {
                    key: key.into(),
                    message: e.to_string(),
                }),
            }
        };
        let f = parse("perturbation_f", pert_f.clone())?;
        let g = parse("perturbation_g", pert_g.clone())?;
        let text = format!(
            "d(f dy - g dx) with f = {}, g = {}",
            pert_f.unwrap_or_else(|| "0".into()),
            pert_g.unwrap_or_else(|| "0".into())
        );
        (Some(PerturbationForm::from_one_form(&f, &g)), Some(text))
    } else {
        (None, None)
    };

    let mut family_configs = Vec::new();
    for (name, keys) in &families {
        for (lineno, key, _) in keys {
            match key.as_str() {
                "seed" | "h" | "h_linspace" | "expect_changes" => {}
                other => {
                    return Err(ConfigError::Line(*lineno, format!("unknown key `{other}`")));
                }
            }
        }
        let seed_text = get(keys, "seed").ok_or_else(|| {
            ConfigError::MissingKey(format!("seed (family `{name}`)"))
        })?;
        let seed_parts: Vec<&str> = seed_text.split_whitespace().collect();
        if seed_parts.len() != 2 {
            return Err(ConfigError::BadValue {
                key: format!("seed (family `{name}`)"),
                message: "expected two numbers".into(),
            });
        }
        let seed = Point2::new(
            parse_number("seed", seed_parts[0])?,
            parse_number("seed", seed_parts[1])?,
        );
        let mut h_values: Vec<f64> = Vec::new();
        if let Some(v) = get(keys, "h") {
            for tok in v.split_whitespace() {
                h_values.push(parse_number("h", tok)?);
            }
        }
        if let Some(v) = get(keys, "h_linspace") {
            let parts: Vec<&str> = v.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(ConfigError::BadValue {
                    key: "h_linspace".into(),
                    message: "expected `start end count`".into(),
                });
            }
            let a = parse_number("h_linspace", parts[0])?;
            let b = parse_number("h_linspace", parts[1])?;
            let n: usize = parts[2].parse().map_err(|_| ConfigError::BadValue {
                key: "h_linspace".into(),
                message: "count must be an integer".into(),
            })?;
            if n < 2 {
                return Err(ConfigError::BadValue {
                    key: "h_linspace".into(),
                    message: "count must be at least 2".into(),
                });
            }
            for k in 0..n {
                h_values.push(a + (b - a) * k as f64 / (n - 1) as f64);
            }
        }
        if h_values.iter().any(|h| !h.is_finite()) {
            return Err(ConfigError::BadValue {
                key: format!("h (family `{name}`)"),
                message: "level values must be finite".into(),
            });
        }
        h_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        h_values.dedup();
        let expect_changes = match get(keys, "expect_changes") {
            Some(v) => Some(v.parse::<usize>().map_err(|_| ConfigError::BadValue {
                key: "expect_changes".into(),
                message: "must be a non-negative integer".into(),
            })?),
            None => None,
        };
        family_configs.push(FamilyConfig {
            name: name.clone(),
            seed,
            h_values,
            expect_changes,
        });
    }

    let solve = if solve_keys.is_empty() {
        None
    } else {
        let rows_text =
            get(&solve_keys, "rows").ok_or_else(|| ConfigError::MissingKey("rows".into()))?;
        let mut rows = Vec::new();
        for tok in rows_text.split_whitespace() {
            let (fam, h) = tok.split_once(':').ok_or_else(|| ConfigError::BadValue {
                key: "rows".into(),
                message: format!("expected `family:h`, got `{tok}`"),
            })?;
            if !family_configs.iter().any(|f| f.name == fam) {
                return Err(ConfigError::BadValue {
                    key: "rows".into(),
                    message: format!("unknown family `{fam}`"),
                });
            }
            rows.push((fam.to_string(), parse_number("rows", h)?));
        }
        let targets_text = get(&solve_keys, "targets")
            .ok_or_else(|| ConfigError::MissingKey("targets".into()))?;
        let targets: Vec<f64> = targets_text
            .split_whitespace()
            .map(|t| parse_number("targets", t))
            .collect::<Result<_, _>>()?;
        if targets.len() != rows.len() {
            return Err(ConfigError::BadValue {
                key: "targets".into(),
                message: "one target per row required".into(),
            });
        }
        Some(SolveConfig { rows, targets })
    };

    Ok(ProblemConfig {
        hamiltonian_text: ham_text,
        hamiltonian,
        lambda,
        minsize,
        digits,
        monomials,
        form,
        form_text,
        families: family_configs,
        solve,
    })
}

fn parse_number(key: &str, text: &str) -> Result<f64, ConfigError> {
    // Fractions are allowed anywhere a number is (e.g. `minsize = 1/512`).
    if text.contains('/') {
        if let Some(r) = crate::decimal::parse_rational(text) {
            let iv = crate::decimal::interval_containing(&r);
            // Nearest endpoint of the tightest containing interval.
            let lo_err = (&r - crate::decimal::rational_of_f64(iv.lo())).abs();
            let hi_err = (crate::decimal::rational_of_f64(iv.hi()) - &r).abs();
            return Ok(if lo_err <= hi_err { iv.lo() } else { iv.hi() });
        }
    }
    text.parse::<f64>().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        message: format!("not a number: `{text}`"),
    })
}

fn parse_monomials(text: &str) -> Result<Vec<MonoIndex>, ConfigError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (i, j) = tok.split_once(',').ok_or_else(|| ConfigError::BadValue {
            key: "monomials".into(),
            message: format!("expected `i,j`, got `{tok}`"),
        })?;
        let parse = |s: &str| -> Result<u32, ConfigError> {
            s.parse().map_err(|_| ConfigError::BadValue {
                key: "monomials".into(),
                message: format!("bad exponent in `{tok}`"),
            })
        };
        out.push(MonoIndex::new(parse(i)?, parse(j)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# figure-eight demo
hamiltonian = 1/2*y^2 + 1/4*x^4 + 1/60*x^3 - 19/40*x^2
lambda = 0.95
minsize = 1/512
monomials = 0,0 1,0 2,0 0,2
form = 438.4905 - 25.2469*x - 452.7899*x^2 - 741.0341*y^2

[family left]
seed = -1.0 0.0
h = -0.0121 -0.1933 -0.0846
expect_changes = 2

[solve]
rows = left:-0.0362 left:-0.1208
targets = 1 -1
"#;

    #[test]
    fn parses_full_config() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.lambda, Some(0.95));
        assert_eq!(cfg.minsize, 1.0 / 512.0);
        assert_eq!(cfg.digits, 4);
        assert_eq!(cfg.monomials.len(), 4);
        let fam = cfg.family("left").unwrap();
        // h values sorted ascending.
        assert_eq!(fam.h_values, vec![-0.1933, -0.0846, -0.0121]);
        assert_eq!(fam.expect_changes, Some(2));
        let solve = cfg.solve.as_ref().unwrap();
        assert_eq!(solve.rows.len(), 2);
        assert_eq!(solve.targets, vec![1.0, -1.0]);
        assert!(cfg.form.is_some());
    }

    #[test]
    fn one_form_input() {
        let text = "hamiltonian = x^2 + y^2\nperturbation_g = 2*y\n[family a]\nseed = 0 0\nh = 0.5\n";
        let cfg = parse_config(text).unwrap();
        let form = cfg.form.unwrap();
        // d(-g dx) = g_y dx∧dy = 2 dx∧dy.
        assert_eq!(form.terms().len(), 1);
        assert!(form.terms()[0].1.contains(2.0));
    }

    #[test]
    fn linspace_families() {
        let text =
            "hamiltonian = x^2 + y^2\n[family a]\nseed = 0 0\nh_linspace = 0.1 0.5 5\n";
        let cfg = parse_config(text).unwrap();
        let fam = cfg.family("a").unwrap();
        assert_eq!(fam.h_values.len(), 5);
        assert_eq!(fam.h_values[0], 0.1);
        assert_eq!(fam.h_values[4], 0.5);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(parse_config("hamiltonia = x\n").is_err());
        assert!(parse_config("hamiltonian = x\nminsize = -1\n").is_err());
        assert!(parse_config("hamiltonian = 3*z\n").is_err());
        let e = parse_config("hamiltonian = x\n[family a]\nseed = 0\nh = 0.1\n");
        assert!(e.is_err());
    }

    #[test]
    fn monomials_default_to_form_indices() {
        let text = "hamiltonian = x^2 + y^2\nform = 1 - 2*x^2\n[family a]\nseed = 0 0\nh = 0.5\n";
        let cfg = parse_config(text).unwrap();
        let idx = cfg.effective_monomials();
        assert_eq!(idx, vec![MonoIndex::new(0, 0), MonoIndex::new(2, 0)]);
    }
}
