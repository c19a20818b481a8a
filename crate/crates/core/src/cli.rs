//! Reports and commands behind the `graphfold` binary.
//!
//! Every command returns an [`Outcome`] instead of printing, so the binary is
//! a thin shell and the commands can be tested in-process. Exit codes: 0 on
//! success, 1 on bad input, 2 when an internal invariant check fails.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cupring::{
    cup_form, cup_image, integrally_trivial, rational_rings_isomorphic, CupForm, RingComparison,
};
use crate::homology::{derived_groups, homology, homology_closed_form, homology_mv};
use crate::intlat::{coefficients, CoefficientGroup, CoefficientRing, FgAbelianGroup};
use crate::manifold::{lower_bundle, parse, ManifoldExpr};
use crate::roundmap::{classify, verify_verdict, AuditCheck, Verdict};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse {
        path: String,
        source: crate::manifold::ParseError,
    },
    #[error("invalid coefficient ring `{0}` (expected z, q or mod:<prime>)")]
    Coefficients(String),
    #[error("degenerate family index {0}: need k >= 2")]
    DegenerateFamily(i64),
}

impl FromStr for CoefficientRing {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Coefficients(s.to_string());
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Self::Integers),
            "q" => Ok(Self::Rationals),
            other => {
                let p = other
                    .strip_prefix("mod:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(bad)?;
                Self::mod_p(p).map_err(|_| bad())
            }
        }
    }
}

/// Captured result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(e: &CliError) -> Self {
        Self {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CupTable {
    Present { form: CupForm },
    Unsupported { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub manifold: String,
    pub coefficients: CoefficientRing,
    pub homology: [FgAbelianGroup; 4],
    /// Homology with the requested coefficients.
    pub homology_coefficients: Vec<CoefficientGroup>,
    pub cohomology: [FgAbelianGroup; 4],
    pub cup_table: CupTable,
    pub cup_image: Option<FgAbelianGroup>,
    pub verdict: Verdict,
    pub checks: Vec<AuditCheck>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> AuditCheck {
    AuditCheck {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Closed form against Mayer–Vietoris on the plumbed form of each bundle;
/// `None` when the description contains a plumbing.
fn oracle_agrees(m: &ManifoldExpr) -> Option<bool> {
    match m {
        ManifoldExpr::Bundle { genus, euler } => {
            let mv = homology_mv(&lower_bundle(*genus, *euler)).ok()?;
            let closed = homology_closed_form(m).ok()?;
            Some(mv.groups == closed.groups)
        }
        ManifoldExpr::Sum { parts } => parts
            .iter()
            .map(oracle_agrees)
            .try_fold(true, |acc, r| r.map(|ok| acc && ok)),
        ManifoldExpr::Plumbed(_) => None,
    }
}

pub fn build_report(m: &ManifoldExpr, ring: CoefficientRing) -> Report {
    let profile = homology(m);
    let homology_coefficients =
        coefficients(&profile.groups, ring).expect("ring validated when parsed");
    let verdict = classify(m);
    let mut checks = Vec::new();

    let violations = profile.violations();
    checks.push(check(
        "homology invariants",
        violations.is_empty(),
        if violations.is_empty() {
            "H0 = H3 = Z, rank H1 = rank H2, H2 free".to_string()
        } else {
            format!("violated: {}", violations.join(", "))
        },
    ));
    if let Some(agrees) = oracle_agrees(m) {
        checks.push(check(
            "closed form = Mayer-Vietoris",
            agrees,
            "bundle closed forms against their plumbed realizations",
        ));
    }

    let (cup_table, image) = match cup_form(m, ring) {
        Ok(form) => {
            checks.push(check(
                "cup form antisymmetric",
                form.is_antisymmetric(),
                format!("{} basis classes", form.basis.len()),
            ));
            let image = cup_image(&form);
            (CupTable::Present { form }, Some(image))
        }
        Err(e) => (
            CupTable::Unsupported {
                reason: e.to_string(),
            },
            None,
        ),
    };

    checks.push(check(
        "verdict re-verifies",
        verify_verdict(m, &verdict),
        verdict.to_string(),
    ));
    if let (Verdict::AdmitsDirected { .. }, Ok(integral)) =
        (&verdict, cup_form(m, CoefficientRing::Integers))
    {
        checks.push(check(
            "witness implies vanishing integral cup products",
            integrally_trivial(&integral),
            "directed round fold map present",
        ));
    }

    Report {
        manifold: m.render(),
        coefficients: ring,
        homology: profile.groups.clone(),
        homology_coefficients,
        cohomology: derived_groups(&profile),
        cup_table,
        cup_image: image,
        verdict,
        checks,
    }
}

fn join_groups<T: std::fmt::Display>(gs: &[T]) -> String {
    gs.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn checks_text(out: &mut String, checks: &[AuditCheck]) {
    out.push_str("checks:\n");
    for c in checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
    }
}

pub fn render_report(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {}", r.manifold);
    let _ = writeln!(out, "homology H0..H3: {}", join_groups(&r.homology));
    if r.coefficients != CoefficientRing::Integers {
        let _ = writeln!(
            out,
            "homology over {}: {}",
            r.coefficients,
            join_groups(&r.homology_coefficients)
        );
    }
    let _ = writeln!(out, "cohomology H^0..H^3: {}", join_groups(&r.cohomology));
    match &r.cup_table {
        CupTable::Present { form } => {
            let _ = writeln!(
                out,
                "cup products over {} (H^2 = {}):",
                form.ring, form.ambient
            );
            for line in form.to_string().lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        CupTable::Unsupported { reason } => {
            let _ = writeln!(out, "cup products: unsupported ({reason})");
        }
    }
    if let Some(img) = &r.cup_image {
        let _ = writeln!(out, "cup image: {img}");
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    checks_text(&mut out, &r.checks);
    out
}

fn load(path: &Path) -> Result<ManifoldExpr, CliError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display.clone(),
        source,
    })?;
    parse(&text).map_err(|source| CliError::Parse {
        path: display,
        source,
    })
}

pub fn cmd_compute(path: &Path, ring: CoefficientRing, json: bool) -> Outcome {
    let m = match load(path) {
        Ok(m) => m,
        Err(e) => return Outcome::input_error(&e),
    };
    let report = build_report(&m, ring);
    let stdout = if json {
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        render_report(&report)
    };
    let mut out = Outcome::ok(stdout);
    if !report.passed() {
        out.code = EXIT_INVARIANT;
        out.stderr = "error: internal invariant check failed\n".into();
    }
    out
}

pub fn cmd_classify(path: &Path) -> Outcome {
    match load(path) {
        Ok(m) => Outcome::ok(format!("{}\n", classify(&m))),
        Err(e) => Outcome::input_error(&e),
    }
}

/// `M_k = bundle(1,k)` against `M_k,0 = S²×S¹ # S²×S¹ # bundle(0,k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub k: i64,
    pub m: String,
    pub m0: String,
    pub homology_m: [FgAbelianGroup; 4],
    pub homology_m0: [FgAbelianGroup; 4],
    pub rational_rings: RingComparison,
    pub cup_image_m: FgAbelianGroup,
    pub cup_image_m0: FgAbelianGroup,
    pub verdict_m: Verdict,
    pub verdict_m0: Verdict,
    pub checks: Vec<AuditCheck>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn family_pair(k: i64) -> Result<(ManifoldExpr, ManifoldExpr), CliError> {
    if k < 2 {
        return Err(CliError::DegenerateFamily(k));
    }
    let m = ManifoldExpr::bundle(1, k);
    let m0 = ManifoldExpr::sum(vec![
        ManifoldExpr::bundle(0, 0),
        ManifoldExpr::bundle(0, 0),
        ManifoldExpr::bundle(0, k),
    ])
    .expect("three parts");
    Ok((m, m0))
}

pub fn family(k: i64) -> Result<FamilyReport, CliError> {
    let (m, m0) = family_pair(k)?;
    let integral = |x: &ManifoldExpr| cup_form(x, CoefficientRing::Integers).expect("closed form");
    let (hm, hm0) = (homology(&m).groups, homology(&m0).groups);
    let rational_rings = rational_rings_isomorphic(&m, &m0).expect("closed form");
    let (img, img0) = (cup_image(&integral(&m)), cup_image(&integral(&m0)));
    let (v, v0) = (classify(&m), classify(&m0));
    let expected_image = FgAbelianGroup::from_cyclic(0, [k]);
    let checks = vec![
        check(
            "(a) integral homology agrees",
            hm == hm0,
            format!("{} vs {}", join_groups(&hm), join_groups(&hm0)),
        ),
        check(
            "(b) rational cohomology rings isomorphic",
            rational_rings == RingComparison::Yes,
            format!("{rational_rings:?}"),
        ),
        check(
            "(c) integral cohomology rings distinguished",
            img != img0 && img == expected_image && img0.is_trivial(),
            format!("cup image {img} vs {img0}"),
        ),
        check(
            "(d) only M0 admits a directed round fold map",
            matches!(v0, Verdict::AdmitsDirected { .. })
                && matches!(v, Verdict::NoDirected { .. })
                && verify_verdict(&m, &v)
                && verify_verdict(&m0, &v0),
            format!("M: {v}; M0: {v0}"),
        ),
    ];
    Ok(FamilyReport {
        k,
        m: m.render(),
        m0: m0.render(),
        homology_m: hm,
        homology_m0: hm0,
        rational_rings,
        cup_image_m: img,
        cup_image_m0: img0,
        verdict_m: v,
        verdict_m0: v0,
        checks,
    })
}

pub fn render_family(r: &FamilyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k = {}", r.k);
    let _ = writeln!(out, "M  = {}", r.m);
    let _ = writeln!(out, "M0 = {}", r.m0);
    checks_text(&mut out, &r.checks);
    let verdict = if r.passed() {
        "all checks pass"
    } else {
        "some checks FAIL"
    };
    let _ = writeln!(out, "{verdict}");
    out
}

pub fn cmd_family(k: i64, json: bool) -> Outcome {
    match family(k) {
        Ok(r) => {
            let stdout = if json {
                serde_json::to_string_pretty(&r).expect("serializable") + "\n"
            } else {
                render_family(&r)
            };
            let mut out = Outcome::ok(stdout);
            if !r.passed() {
                out.code = EXIT_INVARIANT;
            }
            out
        }
        Err(e) => Outcome::input_error(&e),
    }
}

pub fn cmd_selftest(quick: bool, seed: u64) -> Outcome {
    let results = selftest::run(seed, quick);
    let mut out = String::new();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    let all = results.iter().all(|r| r.passed);
    out.push_str(if all {
        "all suites pass\n"
    } else {
        "some suites FAIL\n"
    });
    Outcome {
        code: if all { EXIT_OK } else { EXIT_INVARIANT },
        stdout: out,
        stderr: String::new(),
    }
}
