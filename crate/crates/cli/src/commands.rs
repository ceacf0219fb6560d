use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Value};
use splint_core::affine::{self, BranchingSeries, GradedCharacter};
use splint_core::character::{self, FormalCharacter};
use splint_core::qseries::{self, AlternatingThetaOptions, IdentityReport};
use splint_core::splint::{self, BranchingTable, Splint, SplintBranching};
use splint_core::{Rational, RootSystem, Weight};

use crate::cache;
use crate::config::JobConfig;
use crate::output::{self, Emitter};

/// Whether every check a command ran agreed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Mismatch
        }
    }

    fn and(self, other: Status) -> Status {
        if self == Status::Ok && other == Status::Ok {
            Status::Ok
        } else {
            Status::Mismatch
        }
    }
}

type CmdResult = anyhow::Result<Status>;

/// Sub labels, ambient labels, multiplicity and dimension of one branching term.
type BranchRow = (Vec<i64>, Vec<i64>, i64, u64);

fn labels_of(rs: &RootSystem, w: &Weight) -> anyhow::Result<Vec<i64>> {
    Ok(rs.dynkin_labels(w)?)
}

fn root_coords_int(rs: &RootSystem, w: &Weight) -> Vec<i64> {
    rs.root_coords(w).iter().map(|c| c.to_integer()).collect()
}

/// Sort key shared by all weight tables: `(ρ, ξ)` ascending, then labels.
fn order_key(rs: &RootSystem, w: &Weight) -> (Rational, Vec<Rational>) {
    (
        rs.inner_product(rs.rho(), w).expect("same space"),
        rs.labels(w),
    )
}

pub fn roots(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let g = cfg.algebra();
    let positive: Vec<Vec<i64>> = g.positive_root_coords().to_vec();
    let rho = labels_of(g, g.rho())?;
    out.line(format!("algebra     {}", g.descriptor()))?;
    out.line(format!("rank        {}", g.rank()))?;
    out.line(format!("dimension   {}", g.dimension()))?;
    out.line(format!(
        "h∨          {}",
        g.dual_coxeter()
            .iter()
            .map(|h| h.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ))?;
    out.line(format!("|W|         {}", g.weyl_order()))?;
    out.line(format!("ρ           {}", output::labels(&rho)))?;
    out.line("cartan matrix")?;
    for row in g.cartan_matrix() {
        out.line(format!("  {}", output::labels(row)))?;
    }
    out.line(format!(
        "positive roots ({}), simple-root coordinates",
        positive.len()
    ))?;
    let rows: Vec<Vec<String>> = g
        .positive_roots()
        .iter()
        .zip(&positive)
        .map(|(r, c)| {
            vec![
                output::labels(c),
                g.height(r).to_string(),
                output::labels(&labels_of(g, r).unwrap_or_default()),
            ]
        })
        .collect();
    out.table(&["root", "height", "labels"], &rows)?;
    out.record(json!({
        "record": "roots",
        "algebra": g.descriptor(),
        "rank": g.rank(),
        "dimension": g.dimension(),
        "dual_coxeter": g.dual_coxeter(),
        "weyl_order": g.weyl_order(),
        "cartan_matrix": g.cartan_matrix(),
        "positive_roots": positive,
        "rho": rho,
    }))?;
    Ok(Status::Ok)
}

fn branching_json(status: &SplintBranching) -> Value {
    match status {
        SplintBranching::Verified { probes } => json!({"status": "verified", "probes": probes}),
        SplintBranching::NotApplicable { labels } => {
            json!({"status": "not-applicable", "differs_at": labels})
        }
    }
}

fn describe_splint(s: &Splint) -> String {
    format!(
        "{} = φ₁({}) ⊔ φ₂({})",
        s.ambient().descriptor(),
        s.phi1().source().descriptor(),
        s.stem().descriptor()
    )
}

pub fn splint_list(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let mut rows = Vec::new();
    for entry in splint::catalog_entries() {
        let s = &entry.splint;
        if let Some(g) = &cfg.algebra {
            if g.descriptor() != s.ambient().descriptor() {
                continue;
            }
        }
        rows.push(vec![
            s.qualified_name(),
            describe_splint(s),
            entry.branching.to_string(),
        ]);
        out.record(json!({
            "record": "splint",
            "name": s.qualified_name(),
            "ambient": s.ambient().descriptor(),
            "subalgebra": s.phi1().source().descriptor(),
            "stem": s.stem().descriptor(),
            "branching": branching_json(&entry.branching),
        }))?;
    }
    out.table(&["name", "roots", "branching"], &rows)?;
    Ok(Status::Ok)
}

pub fn load_splint_file(path: &Path) -> anyhow::Result<Vec<Splint>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    splint::parse_splints(&text).with_context(|| format!("parsing {}", path.display()))
}

fn chosen_splints(cfg: &JobConfig, file: Option<&Path>) -> anyhow::Result<Vec<Splint>> {
    if let Some(path) = file {
        return load_splint_file(path);
    }
    if let Some(entry) = cfg.splint {
        return Ok(vec![entry.splint.clone()]);
    }
    Ok(splint::catalog_entries()
        .iter()
        .filter(|e| {
            cfg.algebra
                .as_ref()
                .is_none_or(|g| g.descriptor() == e.splint.ambient().descriptor())
        })
        .map(|e| e.splint.clone())
        .collect())
}

pub fn splint_check(cfg: &JobConfig, file: Option<&Path>, out: &mut Emitter) -> CmdResult {
    let mut status = Status::Ok;
    for s in chosen_splints(cfg, file)? {
        let report = splint::check_splint(&s);
        let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        let branching = if report.passed() {
            Some(splint::probe_splint_branching(&s, 1)?)
        } else {
            None
        };
        status = status.and(Status::from_bool(report.passed()));
        if report.passed() {
            out.line(format!(
                "PASS {}  {}",
                s.qualified_name(),
                describe_splint(&s)
            ))?;
        } else {
            out.line(format!(
                "FAIL {}  {}",
                s.qualified_name(),
                describe_splint(&s)
            ))?;
        }
        for v in &violations {
            out.line(format!("  {v}"))?;
        }
        if let Some(e) = &branching {
            out.line(format!("  {e}"))?;
        }
        out.record(json!({
            "record": "splint-check",
            "name": s.qualified_name(),
            "passed": report.passed(),
            "violations": violations,
            "branching": branching.as_ref().map(branching_json),
        }))?;
    }
    Ok(status)
}

pub fn fan(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let s = &cfg.entry().splint;
    let g = s.ambient();
    let f = splint::fan_coefficients(s);
    let mut entries: Vec<(&Weight, &i64)> = f.coefficients.iter().collect();
    entries.sort_by_cached_key(|(w, _)| (g.height(w), root_coords_int(g, w)));
    out.line(format!(
        "injection fan of {}  ({})",
        s.qualified_name(),
        describe_splint(s)
    ))?;
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|(w, c)| {
            vec![
                output::labels(&root_coords_int(g, w)),
                g.height(w).to_string(),
                c.to_string(),
            ]
        })
        .collect();
    out.table(&["γ", "height", "s(γ)"], &rows)?;
    for (w, c) in entries {
        out.record(json!({
            "record": "fan",
            "splint": s.qualified_name(),
            "gamma": root_coords_int(g, w),
            "coefficient": c,
        }))?;
    }
    Ok(Status::Ok)
}

fn branching_rows(
    g: &RootSystem,
    sub: &RootSystem,
    table: &BranchingTable,
) -> anyhow::Result<Vec<BranchRow>> {
    table
        .sorted(g, sub)
        .into_iter()
        .map(|(nu, c)| {
            Ok((
                labels_of(sub, &nu)?,
                labels_of(g, &nu)?,
                c,
                character::weyl_dimension(sub, &nu)?,
            ))
        })
        .collect()
}

pub fn branch(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let entry = cfg.entry();
    let s = &entry.splint;
    let g = s.ambient();
    let sub = s.subalgebra()?;
    let mu = cfg.weight();
    let dim = character::weyl_dimension(g, mu)?;
    let applicable = matches!(entry.branching, SplintBranching::Verified { .. });
    let (route, table) = if applicable {
        ("splint", splint::branch_via_splint(s, mu)?)
    } else {
        log::warn!(
            "{}: {}; using direct decomposition",
            s.qualified_name(),
            entry.branching
        );
        ("direct", splint::branch_direct(g, &sub, mu)?)
    };
    let rows = branching_rows(g, &sub, &table)?;
    let total = table.total_dimension(&sub)?;
    let oracle = if cfg.oracle {
        Some(splint::branch_direct(g, &sub, mu)? == table)
    } else {
        None
    };

    out.line(format!(
        "branch {} {} (dim {dim}) to {} via {} ({route} route)",
        g.descriptor(),
        output::labels(cfg.labels()),
        sub.descriptor(),
        s.qualified_name()
    ))?;
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(a, gl, c, d)| {
            vec![
                output::labels(a),
                output::labels(gl),
                c.to_string(),
                d.to_string(),
            ]
        })
        .collect();
    out.table(&["labels", "ambient labels", "mult", "dim"], &text_rows)?;
    out.line(format!("total dimension {total}"))?;
    if let Some(m) = oracle {
        out.line(format!("oracle: direct decomposition match={m}"))?;
    }
    for (a, gl, c, d) in &rows {
        out.record(json!({
            "record": "branch-term",
            "splint": s.qualified_name(),
            "weight": cfg.labels(),
            "labels": a,
            "ambient_labels": gl,
            "multiplicity": c,
            "dimension": d,
        }))?;
    }
    out.record(json!({
        "record": "branch-summary",
        "splint": s.qualified_name(),
        "weight": cfg.labels(),
        "dimension": dim,
        "total_dimension": total,
        "route": route,
        "match": oracle,
    }))?;
    let consistent = total == dim && oracle.unwrap_or(true);
    Ok(Status::from_bool(consistent))
}

fn character_for(cfg: &JobConfig) -> anyhow::Result<std::sync::Arc<GradedCharacter>> {
    cache::affine_character(
        cfg.cache.as_ref(),
        cfg.algebra(),
        &cfg.affine_weight(),
        cfg.grade_max,
    )
}

fn emit_series_table(
    out: &mut Emitter,
    record: &str,
    target: &RootSystem,
    ambient: &RootSystem,
    series: &BranchingSeries,
    extra: &[(&str, Value)],
) -> anyhow::Result<()> {
    let mut rows: Vec<(&Weight, &Vec<i64>)> = series.entries.iter().collect();
    rows.sort_by_cached_key(|(w, _)| (order_key(target, w), ambient.labels(w)));
    let same = target.descriptor() == ambient.descriptor();
    let mut text = Vec::new();
    for (w, coeffs) in rows {
        let l = labels_of(target, w)?;
        let gl = labels_of(ambient, w)?;
        let mut row = vec![output::labels(&l)];
        if !same {
            row.push(output::labels(&gl));
        }
        row.push(output::series(coeffs));
        text.push(row);
        let mut v = json!({
            "record": record,
            "labels": l,
            "ambient_labels": gl,
            "coefficients": coeffs,
        });
        for (k, x) in extra {
            v[*k] = x.clone();
        }
        out.record(v)?;
    }
    if same {
        out.table(&["labels", "series"], &text)?;
    } else {
        out.table(&["labels", "ambient labels", "series"], &text)?;
    }
    Ok(())
}

fn module_header(cfg: &JobConfig) -> String {
    format!(
        "L({} level {} {}), grades 0..={}",
        cfg.algebra().descriptor(),
        cfg.level,
        output::labels(cfg.labels()),
        cfg.grade_max
    )
}

fn module_json(cfg: &JobConfig) -> Vec<(&'static str, Value)> {
    vec![
        ("algebra", json!(cfg.algebra().descriptor())),
        ("weight", json!(cfg.labels())),
        ("level", json!(cfg.level)),
        ("grade_max", json!(cfg.grade_max)),
    ]
}

pub fn affine_branch(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let g = cfg.algebra();
    let mu = cfg.affine_weight();
    let n = cfg.grade_max;
    let ch = character_for(cfg)?;
    let mut extra = module_json(cfg);
    match cfg.splint {
        None => {
            let b = affine::graded_branch_to_g(g, &mu, n)?;
            out.line(format!("{} to {}", module_header(cfg), g.descriptor()))?;
            emit_series_table(out, "affine-branch", g, g, &b, &extra)?;
            if !cfg.oracle {
                return Ok(Status::Ok);
            }
            // Σ_ν b_ν(n) dim L^ν must count every weight of grade n.
            let mut ok = true;
            for (grade, layer) in ch.layers.iter().enumerate() {
                let mut total = 0i64;
                for (nu, row) in &b.entries {
                    total += row[grade] * character::weyl_dimension(g, nu)? as i64;
                }
                ok &= total == layer.total();
            }
            out.line(format!("oracle: layer dimensions match={ok}"))?;
            out.record(
                json!({"record": "affine-branch-oracle", "check": "layer-dimensions", "match": ok}),
            )?;
            Ok(Status::from_bool(ok))
        }
        Some(entry) => {
            let s = &entry.splint;
            let sub = s.subalgebra()?;
            let applicable = matches!(entry.branching, SplintBranching::Verified { .. });
            let (route, b) = if applicable {
                ("composed", affine::branch_affine_to_subalgebra(s, &mu, n)?)
            } else {
                log::warn!(
                    "{}: {}; using direct decomposition",
                    s.qualified_name(),
                    entry.branching
                );
                (
                    "direct",
                    affine::branch_affine_to_subalgebra_direct(s, &mu, n)?,
                )
            };
            out.line(format!(
                "{} to {} via {} ({route} route)",
                module_header(cfg),
                sub.descriptor(),
                s.qualified_name()
            ))?;
            extra.push(("splint", json!(s.qualified_name())));
            extra.push(("route", json!(route)));
            emit_series_table(out, "affine-branch", &sub, g, &b, &extra)?;
            if !cfg.oracle {
                return Ok(Status::Ok);
            }
            let direct = affine::branch_affine_to_subalgebra_direct(s, &mu, n)?;
            let direct_ok = direct == b;
            let matrix_ok = if applicable {
                Some(affine::branch_affine_to_subalgebra_matrix(s, &mu, n)? == direct)
            } else {
                None
            };
            out.line(format!("oracle: direct route match={direct_ok}"))?;
            if let Some(m) = matrix_ok {
                out.line(format!("oracle: matrix route match={m}"))?;
            }
            out.record(json!({
                "record": "affine-branch-oracle",
                "check": "routes",
                "direct_match": direct_ok,
                "matrix_match": matrix_ok,
                "match": direct_ok && matrix_ok.unwrap_or(true),
            }))?;
            Ok(Status::from_bool(direct_ok && matrix_ok.unwrap_or(true)))
        }
    }
}

/// Dominant weights occurring in any grade, in matrix order.
fn dominant_support(g: &RootSystem, ch: &GradedCharacter) -> Vec<Weight> {
    let mut set: BTreeMap<Weight, ()> = BTreeMap::new();
    for layer in &ch.layers {
        for (w, _) in layer.iter() {
            if g.is_dominant(w) {
                set.insert(w.clone(), ());
            }
        }
    }
    let mut v: Vec<Weight> = set.into_keys().collect();
    v.sort_by_cached_key(|w| order_key(g, w));
    v
}

pub fn strings(cfg: &JobConfig, emit_matrix: bool, out: &mut Emitter) -> CmdResult {
    let g = cfg.algebra();
    let ch = character_for(cfg)?;
    let support = dominant_support(g, &ch);
    let mut sigma = BranchingSeries::new(cfg.grade_max);
    for nu in &support {
        for (n, layer) in ch.layers.iter().enumerate() {
            sigma.add(nu, n, layer.get(nu));
        }
    }
    out.line(format!("string functions of {}", module_header(cfg)))?;
    emit_series_table(out, "string-function", g, g, &sigma, &module_json(cfg))?;
    if !emit_matrix {
        return Ok(Status::Ok);
    }

    let bound = support
        .iter()
        .map(|w| g.inner_product(g.rho(), w).expect("same space"))
        .max()
        .unwrap_or_default();
    let m = affine::multiplicity_matrix(g, bound)?;
    let inv = affine::invert_multiplicity_matrix(&m)?;
    let direct = affine::graded_branch_to_g(g, &cfg.affine_weight(), cfg.grade_max)?;
    let mut b_rows = vec![vec![0i64; cfg.grade_max + 1]; m.size()];
    let mut consistent = true;
    for n in 0..=cfg.grade_max {
        let s: Vec<i64> = m.basis.iter().map(|nu| sigma.get(nu, n)).collect();
        let b: Vec<i64> = inv
            .iter()
            .map(|row| row.iter().zip(&s).map(|(x, y)| x * y).sum())
            .collect();
        consistent &= m.apply(&b) == s;
        for ((xi, row), &bi) in m.basis.iter().zip(&mut b_rows).zip(&b) {
            row[n] = bi;
            consistent &= bi == direct.get(xi, n);
        }
    }
    let identity = (0..m.size()).all(|i| {
        (0..m.size()).all(|j| {
            (0..m.size())
                .map(|k| inv[i][k] * m.entries[k][j])
                .sum::<i64>()
                == i64::from(i == j)
        })
    });
    consistent &= identity;

    let basis_labels: Vec<String> = m.labels.iter().map(|l| output::labels(l)).collect();
    let matrix_rows = |mat: &[Vec<i64>]| -> Vec<Vec<String>> {
        mat.iter()
            .zip(&basis_labels)
            .map(|(row, l)| {
                std::iter::once(l.clone())
                    .chain(row.iter().map(|x| x.to_string()))
                    .collect()
            })
            .collect()
    };
    let mut header: Vec<&str> = vec!["ν \\ ξ"];
    header.extend(basis_labels.iter().map(String::as_str));
    out.line(format!(
        "multiplicity matrix M[ν][ξ] over {} dominant weights with (ρ,ξ) ≤ {bound}",
        m.size()
    ))?;
    out.table(&header, &matrix_rows(&m.entries))?;
    out.line("inverse M⁻¹")?;
    out.table(&header, &matrix_rows(&inv))?;
    out.line("branching functions b = M⁻¹σ")?;
    let b_text: Vec<Vec<String>> = b_rows
        .iter()
        .zip(&basis_labels)
        .map(|(row, l)| vec![l.clone(), output::series(row)])
        .collect();
    out.table(&["labels", "series"], &b_text)?;
    out.line(format!("consistent={consistent}"))?;
    out.record(json!({
        "record": "multiplicity-matrix",
        "algebra": g.descriptor(),
        "weight": cfg.labels(),
        "level": cfg.level,
        "grade_max": cfg.grade_max,
        "basis": m.labels,
        "matrix": m.entries,
        "inverse": inv,
        "branching": b_rows,
        "consistent": consistent,
    }))?;
    Ok(Status::from_bool(consistent))
}

pub fn qdim(cfg: &JobConfig, out: &mut Emitter) -> CmdResult {
    let g = cfg.algebra();
    let mu = cfg.affine_weight();
    let ch = character_for(cfg)?;
    let q = affine::q_dimension(g, &mu, cfg.grade_max)?;
    let weyl = character::weyl_dimension(g, &mu.finite)?;
    out.line(format!("q-dimension of {}", module_header(cfg)))?;
    out.line(format!("  {}", output::series(&q.coefficients)))?;
    let oracle = if cfg.oracle {
        let totals: Vec<i64> = ch.layers.iter().map(FormalCharacter::total).collect();
        Some(totals == q.coefficients && q.get(0) == weyl as i64)
    } else {
        None
    };
    if let Some(m) = oracle {
        out.line(format!(
            "oracle: layer totals and Weyl dimension {weyl} match={m}"
        ))?;
    }
    let mut v = json!({
        "record": "qdim",
        "coefficients": q.coefficients,
        "weyl_dimension": weyl,
        "match": oracle,
    });
    for (k, x) in module_json(cfg) {
        v[k] = x;
    }
    out.record(v)?;
    Ok(Status::from_bool(oracle.unwrap_or(true)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Identity {
    /// Affine denominator identity of the splint.
    Denominator,
    /// Theta relation in product form.
    #[value(name = "eq5", alias = "theta-product")]
    ThetaProduct,
    /// Alternating theta relation.
    #[value(name = "eq6", alias = "theta-alternating")]
    ThetaAlternating,
    All,
}

fn character_json(g: &RootSystem, ch: &FormalCharacter) -> Value {
    Value::Array(
        ch.iter()
            .map(|(w, c)| json!({"labels": output::rational_strings(&g.labels(w)), "coefficient": c}))
            .collect(),
    )
}

fn character_text(g: &RootSystem, ch: &FormalCharacter) -> String {
    if ch.is_empty() {
        return "0".into();
    }
    ch.iter()
        .map(|(w, c)| format!("{c}·e{}", output::rational_labels(&g.labels(w))))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn emit_identity(out: &mut Emitter, g: &RootSystem, r: &IdentityReport) -> anyhow::Result<()> {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    out.line(format!(
        "{verdict} {} {} to grade {} (normalization q^{})",
        r.identity, r.splint, r.grades, r.normalization_shift
    ))?;
    if let Some(m) = &r.mismatch {
        out.line(format!(
            "  first mismatch at relative grade {}",
            m.relative_grade
        ))?;
        out.line(format!("  lhs: {}", character_text(g, &m.lhs)))?;
        out.line(format!("  rhs: {}", character_text(g, &m.rhs)))?;
    }
    out.record(json!({
        "record": "identity",
        "identity": r.identity,
        "splint": r.splint,
        "grades": r.grades.to_string(),
        "passed": r.passed,
        "normalization_shift": r.normalization_shift.to_string(),
        "mismatch": r.mismatch.as_ref().map(|m| json!({
            "relative_grade": m.relative_grade.to_string(),
            "lhs": character_json(g, &m.lhs),
            "rhs": character_json(g, &m.rhs),
        })),
    }))?;
    Ok(())
}

pub fn verify(
    cfg: &JobConfig,
    identity: Identity,
    file: Option<&Path>,
    out: &mut Emitter,
) -> CmdResult {
    let splints = chosen_splints(cfg, file)?;
    if splints.is_empty() {
        anyhow::bail!("no splints selected");
    }
    let n = cfg.grade_max as i64;
    let mut status = Status::Ok;
    for s in &splints {
        let mut reports = Vec::new();
        if matches!(identity, Identity::Denominator | Identity::All) {
            reports.push(qseries::verify_denominator_splint(s, n));
        }
        if matches!(identity, Identity::ThetaProduct | Identity::All) {
            reports.push(qseries::verify_theta_product(s, n)?);
        }
        if matches!(identity, Identity::ThetaAlternating | Identity::All) {
            reports.push(qseries::verify_theta_alternating(
                s,
                n,
                AlternatingThetaOptions::default(),
            )?);
        }
        for r in &reports {
            emit_identity(out, s.ambient(), r)?;
            status = status.and(Status::from_bool(r.passed));
        }
    }
    Ok(status)
}
