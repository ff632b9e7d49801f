//! Text and structured renderings of an analysis run.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crease_subdiv::analysis::{
    self, AnalysisError, CharacteristicMapSample, ConditionCheck, Eigenvalue, LocalConfiguration, SpectrumReport,
};
use crease_subdiv::stencil::{self, ValenceKind};
use crease_subdiv::SchemeKind;

pub struct AnalyzeContext<'a> {
    pub scheme: SchemeKind,
    pub valence: usize,
    pub steps: usize,
    pub config: &'a LocalConfiguration,
    pub spectrum: &'a SpectrumReport,
    pub char_map: Option<&'a CharacteristicMapSample>,
}

/// Closed-form values to compare against, when there are any.
struct Reference {
    alpha: f64,
    expected: Option<Vec<f64>>,
    subdominant: Option<f64>,
}

fn reference(ctx: &AnalyzeContext) -> Result<Reference, AnalysisError> {
    let n = ctx.valence;
    let plain = ctx.config.creases.is_empty() && ctx.config.rings == 1;
    Ok(match ctx.scheme {
        SchemeKind::Sqrt3 | SchemeKind::Hybrid => {
            let alpha = stencil::sqrt3_alpha(n)?;
            let expected = (plain && ctx.steps == 2)
                .then(|| analysis::expected_sqrt3_spectrum(n, alpha))
                .transpose()?;
            let subdominant = expected.as_ref().map(|_| (2.0 + 2.0 * (std::f64::consts::TAU / n as f64).cos()) / 9.0);
            Reference {
                alpha,
                expected,
                subdominant,
            }
        }
        SchemeKind::Loop => Reference {
            alpha: stencil::alpha(n, ValenceKind::Interior)?,
            expected: None,
            subdominant: (ctx.config.creases.is_empty() && ctx.steps == 1)
                .then(|| analysis::loop_subdominant(n))
                .transpose()?,
        },
    })
}

// Prints values that are zero up to round-off as 0.
fn num(x: f64) -> f64 {
    if x.abs() < 5e-13 {
        0.0
    } else {
        x
    }
}

fn eig_text(e: &Eigenvalue) -> String {
    if e.is_complex() {
        format!("{:.12} {:+.12}i  (complex pair)", num(e.re), e.im)
    } else {
        format!("{:.12}", num(e.re))
    }
}

fn verdict(c: &ConditionCheck) -> String {
    let head = if c.passed { "PASS" } else { "FAIL" };
    format!("{head} ({})", c.report.join("; "))
}

pub fn analyze_text(ctx: &AnalyzeContext) -> Result<String, AnalysisError> {
    let r = reference(ctx)?;
    let mut out = String::new();
    let _ = writeln!(out, "scheme: {}", ctx.scheme);
    let _ = writeln!(out, "valence: {}", ctx.valence);
    let _ = writeln!(out, "steps: {}", ctx.steps);
    let _ = writeln!(out, "rings: {}", ctx.config.rings);
    if !ctx.config.creases.is_empty() {
        let spokes: Vec<String> = ctx.config.creases.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "creases: {}", spokes.join(","));
    }
    let _ = writeln!(out, "alpha: {:.12}", r.alpha);
    let _ = writeln!(out, "eigenvalues:");
    for e in &ctx.spectrum.eigenvalues {
        let _ = writeln!(out, "  {}", eig_text(e));
    }
    if let Some(expected) = &r.expected {
        let mut sorted = expected.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let vals: Vec<String> = sorted.iter().map(|x| format!("{:.12}", num(*x))).collect();
        let _ = writeln!(out, "expected: {}", vals.join(" "));
    }
    if let Some(s) = &ctx.spectrum.subdominant {
        let _ = writeln!(out, "subdominant: {}", eig_text(s));
    }
    if let Some(s) = r.subdominant {
        let _ = writeln!(out, "closed-form subdominant: {s:.12}");
    }
    let _ = writeln!(out, "condition_eq8: {}", verdict(&ctx.spectrum.sqrt3_condition));
    let _ = writeln!(out, "condition_eq9: {}", verdict(&ctx.spectrum.tangent_plane_condition));
    if !ctx.config.creases.is_empty() {
        let _ = writeln!(out, "note: conditions are reported without a verdict next to creases");
    }
    if let Some(m) = ctx.char_map {
        let _ = writeln!(out, "characteristic map: {}", m.verdict());
        let _ = writeln!(out, "  segments: {}", m.segments);
        let _ = writeln!(out, "  sampled triangles: {}", m.orientation.len());
        let _ = writeln!(out, "  smallest area: {:e}", m.min_area);
        let _ = writeln!(out, "  largest angle defect: {:e}", m.max_angle_defect);
    }
    Ok(out)
}

fn condition_json(c: &ConditionCheck) -> Value {
    json!({ "passed": c.passed, "report": c.report })
}

pub fn analyze_json(ctx: &AnalyzeContext) -> Result<String, AnalysisError> {
    let r = reference(ctx)?;
    let eigenvalues: Vec<Value> = ctx
        .spectrum
        .eigenvalues
        .iter()
        .map(|e| json!({ "re": num(e.re), "im": e.im, "modulus": e.modulus(), "complex": e.is_complex() }))
        .collect();
    let mut root = json!({
        "scheme": ctx.scheme.to_string(),
        "valence": ctx.valence,
        "steps": ctx.steps,
        "rings": ctx.config.rings,
        "creases": ctx.config.creases.iter().collect::<Vec<_>>(),
        "alpha": r.alpha,
        "eigenvalues": eigenvalues,
        "subdominant": ctx.spectrum.subdominant.map(|e| num(e.re)),
        "condition_eq8": condition_json(&ctx.spectrum.sqrt3_condition),
        "condition_eq9": condition_json(&ctx.spectrum.tangent_plane_condition),
    });
    if let Some(expected) = r.expected {
        root["expected"] = json!(expected);
    }
    if let Some(s) = r.subdominant {
        root["closed_form_subdominant"] = json!(s);
    }
    if let Some(m) = ctx.char_map {
        root["characteristic_map"] = json!({
            "resolution": m.resolution,
            "segments": m.segments,
            "regular": m.regular,
            "injective": m.injective,
            "boundary_simple": m.boundary_simple,
            "min_area": m.min_area,
            "max_angle_defect": m.max_angle_defect,
            "verdict": m.verdict(),
        });
    }
    let mut text = serde_json::to_string_pretty(&root).expect("plain values");
    text.push('\n');
    Ok(text)
}
