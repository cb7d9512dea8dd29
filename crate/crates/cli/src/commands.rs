use std::fmt::Write;

use serde::Serialize;
use torograd::brion::{verify_brion, BrionReport};
use torograd::exactnum::Rational;
use torograd::fixedpoints::{f_table, is_generic, FixedPointTable, GenericityReport, TableDocument};
use torograd::graded::{
    graded_report, gr_structure, morse_grading_witness, verify_relations, GrBasis, GradedReport,
    MorseGradingWitness, RelationReport,
};
use torograd::polytope::{is_smooth, validate, Polytope, SmoothnessReport, ValidationReport};

use crate::input::{degree_cap, load_data, load_polytope, GammaInfo, GammaSpec, InputError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Table,
    Betti,
    Gr,
    Brion,
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Table => "table",
            Command::Betti => "betti",
            Command::Gr => "gr",
            Command::Brion => "brion",
            Command::Report => "report",
        }
    }
}

pub struct RunConfig {
    pub command: Command,
    pub polytope: String,
    pub gamma: Option<String>,
    pub format: Format,
}

/// The emitted document and whether every verification passed.
pub struct Output {
    pub ok: bool,
    pub document: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    command: &'static str,
    polytope: &'a str,
    gamma: Option<&'a GammaInfo>,
    degree_cap: Option<usize>,
    ok: bool,
    #[serde(flatten)]
    body: &'a T,
}

struct Header {
    command: Command,
    polytope: String,
    gamma: Option<GammaInfo>,
    degree_cap: Option<usize>,
}

impl Header {
    fn json<T: Serialize>(&self, ok: bool, body: &T) -> String {
        let env = Envelope {
            command: self.command.name(),
            polytope: &self.polytope,
            gamma: self.gamma.as_ref(),
            degree_cap: self.degree_cap,
            ok,
            body,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("documents always serialize");
        s.push('\n');
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command.name());
        let _ = writeln!(s, "polytope: {}", self.polytope);
        if let Some(g) = &self.gamma {
            let _ = writeln!(s, "gamma: {} ({})", g.value, g.source);
        }
        if let Some(cap) = self.degree_cap {
            let _ = writeln!(s, "degree cap: {cap}");
        }
        s
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cfg: &RunConfig) -> Result<Output, InputError> {
    if cfg.format == Format::Csv && cfg.command != Command::Table {
        return Err(InputError(format!(
            "csv output is only available for `table`, not `{}`",
            cfg.command.name()
        )));
    }
    let gamma = cfg.gamma.as_deref().map(GammaSpec::parse).transpose()?;
    if cfg.command == Command::Check {
        return check(cfg, gamma.as_ref());
    }
    let gamma = gamma.ok_or_else(|| {
        InputError(format!("`{}` needs --gamma", cfg.command.name()))
    })?;
    let p = load_polytope(&cfg.polytope)?;
    let g = gamma.resolve(&p)?;
    let cap = degree_cap()?;
    let header = Header {
        command: cfg.command,
        polytope: cfg.polytope.clone(),
        gamma: Some(GammaInfo {
            value: g.vector().clone(),
            source: gamma.source(),
        }),
        degree_cap: Some(cap.unwrap_or(p.dim() + 1)),
    };
    let t = f_table(&p, &g)?;
    match cfg.command {
        Command::Check => unreachable!("handled above"),
        Command::Table => Ok(table(&header, &t, cfg.format)),
        Command::Betti => {
            let r = graded_report(&t, cap)?;
            Ok(betti(&header, &r, cfg.format))
        }
        Command::Gr => {
            let r = graded_report(&t, cap)?;
            let basis = gr_structure(&t, cap)?;
            Ok(gr(&header, &r, &basis, cfg.format))
        }
        Command::Brion => {
            let r = verify_brion(&p, &g, cap)?;
            Ok(brion(&header, &r, cfg.format))
        }
        Command::Report => report(&header, &p, &t, cap, cfg.format),
    }
}

#[derive(Serialize)]
struct CheckBody {
    validation: ValidationReport,
    smoothness: Option<SmoothnessReport>,
    genericity: Option<GenericityReport>,
}

impl CheckBody {
    fn ok(&self) -> bool {
        self.validation.is_valid()
            && self.smoothness.as_ref().is_some_and(|s| s.smooth)
            && self.genericity.as_ref().is_none_or(|g| g.generic)
    }

    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "validation: {}", self.validation);
        match &self.smoothness {
            Some(s) => match &s.witness {
                None => {
                    let _ = writeln!(out, "smoothness: ok");
                }
                Some(w) => {
                    let _ = writeln!(
                        out,
                        "smoothness: FAIL: cone at vertex {} has determinant {}",
                        w.vertex, w.determinant
                    );
                }
            },
            None => {
                let _ = writeln!(out, "smoothness: skipped");
            }
        }
        match &self.genericity {
            Some(g) if g.generic => {
                let _ = writeln!(out, "genericity: ok");
            }
            Some(g) => match &g.witness {
                Some(e) => {
                    let _ = writeln!(
                        out,
                        "genericity: FAIL: edge {}-{} with direction {} pairs to zero",
                        e.endpoints.0, e.endpoints.1, e.direction
                    );
                }
                None => {
                    let _ = writeln!(out, "genericity: FAIL: gamma is zero");
                }
            },
            None => {
                let _ = writeln!(out, "genericity: skipped");
            }
        }
    }
}

fn check_body(p: &Polytope, gamma: Option<&GammaInfo>) -> CheckBody {
    CheckBody {
        validation: p.validate(),
        smoothness: Some(is_smooth(&p.normal_fan())),
        genericity: gamma.map(|g| is_generic(p, &g.value)),
    }
}

fn check(cfg: &RunConfig, gamma: Option<&GammaSpec>) -> Result<Output, InputError> {
    let data = load_data(&cfg.polytope)?;
    let validation = validate(&data);
    let mut header = Header {
        command: Command::Check,
        polytope: cfg.polytope.clone(),
        gamma: None,
        degree_cap: None,
    };
    let body = if validation.is_valid() {
        let p = Polytope::new(data)?;
        if let Some(spec) = gamma {
            let value = spec.raw(&p);
            if value.len() != p.dim() {
                return Err(InputError(format!(
                    "gamma has {} coordinates, polytope has dimension {}",
                    value.len(),
                    p.dim()
                )));
            }
            header.gamma = Some(GammaInfo {
                value,
                source: spec.source(),
            });
        }
        check_body(&p, header.gamma.as_ref())
    } else {
        CheckBody {
            validation,
            smoothness: None,
            genericity: None,
        }
    };
    let ok = body.ok();
    let document = match cfg.format {
        Format::Json => header.json(ok, &body),
        _ => {
            let mut s = header.text();
            body.text(&mut s);
            let _ = writeln!(s, "result: {}", verdict(ok));
            s
        }
    };
    Ok(Output { ok, document })
}

#[derive(Serialize)]
struct TableBody {
    table: TableDocument,
    theta_injective: bool,
}

fn table_text(out: &mut String, doc: &TableDocument) {
    let cell = |q: &Rational| q.to_string();
    let _ = writeln!(out, "rays:");
    for (i, r) in doc.rays.iter().enumerate() {
        let _ = writeln!(out, "  r{i} {r}");
    }
    let _ = writeln!(out, "fixed points:");
    for (i, v) in doc.vertices.iter().enumerate() {
        let _ = writeln!(out, "  z{i} {v}");
    }
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut head = vec![String::new()];
    head.extend((0..doc.vertices.len()).map(|z| format!("z{z}")));
    grid.push(head);
    for (i, row) in doc.f.iter().enumerate() {
        let mut line = vec![format!("f_r{i}")];
        line.extend(row.iter().map(cell));
        grid.push(line);
    }
    let mut line = vec!["f_delta".to_string()];
    line.extend(doc.f_delta.iter().map(cell));
    grid.push(line);
    let mut line = vec!["morse".to_string()];
    line.extend(doc.morse.iter().map(ToString::to_string));
    grid.push(line);
    let label = grid.iter().map(|l| l[0].len()).max().unwrap_or(0);
    let width = grid.iter().flat_map(|l| &l[1..]).map(String::len).max().unwrap_or(0);
    for line in grid {
        let cells: Vec<String> = line[1..].iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {:<label$}  {}", line[0], cells.join("  "));
    }
}

fn table(header: &Header, t: &FixedPointTable, format: Format) -> Output {
    let body = TableBody {
        table: t.document(),
        theta_injective: t.theta().is_injective(),
    };
    let ok = body.theta_injective;
    let document = match format {
        Format::Csv => t.to_csv(),
        Format::Json => header.json(ok, &body),
        Format::Text => {
            let mut s = header.text();
            table_text(&mut s, &body.table);
            let _ = writeln!(s, "theta injective: {}", verdict(ok));
            s
        }
    };
    Output { ok, document }
}

fn graded_text(out: &mut String, r: &GradedReport) {
    let _ = writeln!(out, "filtration ranks: {}", join(&r.ranks));
    let _ = writeln!(out, "gr dims:          {}", join(&r.gr_dims));
    let _ = writeln!(out, "morse betti:      {}", join(&r.betti_morse));
    let _ = writeln!(out, "h-vector:         {}", join(&r.h_vector));
    let _ = writeln!(out, "sr hilbert:       {}", join(&r.sr_hilbert));
    let _ = writeln!(out, "four-way agreement: {}", verdict(r.four_way_agree));
    let _ = writeln!(out, "palindromic: {}", verdict(r.palindromic));
}

fn betti(header: &Header, r: &GradedReport, format: Format) -> Output {
    let ok = r.four_way_agree;
    let document = match format {
        Format::Json => header.json(ok, r),
        _ => {
            let mut s = header.text();
            graded_text(&mut s, r);
            s
        }
    };
    Output { ok, document }
}

#[derive(Serialize)]
struct GrBody<'a> {
    graded: &'a GradedReport,
    basis: &'a GrBasis,
}

fn exp_monomial(exp: &[u32]) -> String {
    let factors: Vec<String> = exp
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(r, &e)| if e == 1 { format!("f{r}") } else { format!("f{r}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

fn basis_text(out: &mut String, b: &GrBasis) {
    for (deg, monos) in b.basis.iter().enumerate() {
        let names: Vec<String> = monos.iter().map(|m| exp_monomial(m)).collect();
        let _ = writeln!(out, "Gr_{deg} basis: {}", names.join(", "));
    }
    for p in &b.products {
        let value = if p.is_zero() {
            "0".to_string()
        } else {
            format!("[{}]", join(&p.coords))
        };
        let _ = writeln!(
            out,
            "  {} * {} = {} in Gr_{}",
            exp_monomial(&p.lhs),
            exp_monomial(&p.rhs),
            value,
            p.degree
        );
    }
}

fn gr(header: &Header, r: &GradedReport, basis: &GrBasis, format: Format) -> Output {
    let ok = r.four_way_agree;
    let document = match format {
        Format::Json => header.json(ok, &GrBody { graded: r, basis }),
        _ => {
            let mut s = header.text();
            graded_text(&mut s, r);
            basis_text(&mut s, basis);
            s
        }
    };
    Output { ok, document }
}

fn brion_text(out: &mut String, r: &BrionReport) {
    let _ = writeln!(out, "generators continuous: {}", verdict(r.generators_continuous));
    if !r.generators_continuous {
        let _ = writeln!(out, "  discontinuous: {}", join(&r.discontinuous_generators));
    }
    let _ = writeln!(out, "phi(g_r) = f_r: {}", verdict(r.phi_g_matches_f));
    if !r.phi_g_matches_f {
        let _ = writeln!(out, "  mismatched rays: {}", join(&r.phi_g_mismatches));
    }
    let _ = writeln!(out, "linear forms constant: {}", verdict(r.linear_forms_constant));
    let _ = writeln!(
        out,
        "multiplicative on {} pairs: {}",
        r.products_checked,
        verdict(r.multiplicative)
    );
    for w in &r.product_failures {
        let _ = writeln!(out, "  fails on {} * {}", exp_monomial(&w.lhs), exp_monomial(&w.rhs));
    }
    let _ = writeln!(out, "image ranks:      {}", join(&r.surjectivity_ranks));
    let _ = writeln!(out, "filtration ranks: {}", join(&r.filtration_ranks));
    let _ = writeln!(out, "ranks match: {}", verdict(r.ranks_match));
}

fn brion(header: &Header, r: &BrionReport, format: Format) -> Output {
    let ok = r.all_ok();
    let document = match format {
        Format::Json => header.json(ok, r),
        _ => {
            let mut s = header.text();
            brion_text(&mut s, r);
            let _ = writeln!(s, "result: {}", verdict(ok));
            s
        }
    };
    Output { ok, document }
}

#[derive(Serialize)]
struct ReportBody {
    check: CheckBody,
    table: TableBody,
    relations: RelationReport,
    graded: GradedReport,
    gr: GrBasis,
    morse_grading_witness: Option<MorseGradingWitness>,
    brion: BrionReport,
}

fn relations_text(out: &mut String, r: &RelationReport) {
    let _ = writeln!(
        out,
        "non-face products vanish: {}",
        verdict(r.squarefree_nonface_products_zero)
    );
    for w in r.witnesses() {
        let rays: Vec<usize> = w.rays.iter().copied().collect();
        let _ = writeln!(out, "  nonzero product over rays {}", join(&rays));
    }
    let _ = writeln!(out, "linear relations constant: {}", verdict(r.linear_relations_constant));
    let _ = writeln!(out, "chern identity: {}", verdict(r.chern_identity_ok));
}

fn report(
    header: &Header,
    p: &Polytope,
    t: &FixedPointTable,
    cap: Option<usize>,
    format: Format,
) -> Result<Output, InputError> {
    let body = ReportBody {
        check: check_body(p, header.gamma.as_ref()),
        table: TableBody {
            table: t.document(),
            theta_injective: t.theta().is_injective(),
        },
        relations: verify_relations(t),
        graded: graded_report(t, cap)?,
        gr: gr_structure(t, cap)?,
        morse_grading_witness: morse_grading_witness(t),
        brion: verify_brion(p, &t.gamma, cap)?,
    };
    let ok = body.check.ok()
        && body.table.theta_injective
        && body.relations.all_ok()
        && body.graded.four_way_agree
        && body.brion.all_ok();
    let document = match format {
        Format::Json => header.json(ok, &body),
        _ => {
            let mut s = header.text();
            body.check.text(&mut s);
            table_text(&mut s, &body.table.table);
            let _ = writeln!(s, "theta injective: {}", verdict(body.table.theta_injective));
            relations_text(&mut s, &body.relations);
            graded_text(&mut s, &body.graded);
            basis_text(&mut s, &body.gr);
            match &body.morse_grading_witness {
                Some(w) => {
                    let _ = writeln!(
                        s,
                        "morse grading differs: f_r{} is {} at z{} (index 0) and {} at z{} (top index)",
                        w.ray, w.bottom_value, w.bottom_point, w.top_value, w.top_point
                    );
                }
                None => {
                    let _ = writeln!(s, "morse grading differs: no witness");
                }
            }
            brion_text(&mut s, &body.brion);
            let _ = writeln!(s, "result: {}", verdict(ok));
            s
        }
    };
    Ok(Output { ok, document })
}
