//! Command line surface: configuration parsing, orchestration of the library
//! pipelines, and deterministic report emission.
//!
//! Exit codes: `0` success, `2` configuration errors, `3` enumeration-oracle
//! bound exceeded, `4` geometric degeneracy.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hermcount::analytic::{
    bianchi_volumes, congruence_closed_form_constant, congruence_data, corollary_gaussian,
    covolume_gaussian, dedekind_zeta2, iota_f, predicted_constant, AnalyticError, CongruenceData,
    GroupDescriptor, GroupKind,
};
use hermcount::automorphs::{
    find_automorphs_cached, intersect_congruence, AutomorphSet, FuchsianData, FuchsianParams,
    OrbitError,
};
use hermcount::counting::{count_orbits, fit_and_compare, CountError, CountRequest, Filter};
use hermcount::forms::{normalizing_transform, FormClass, HermitianForm, UniMatRepr};
use hermcount::hyperbolic::{
    dirichlet_domain_area, dirichlet_domain_area_stable, DirichletPolygon, DomainQuality,
    GeomError,
};
use hermcount::ring::{Field, QuadIdeal, QuadInt, RingError};

#[derive(Debug)]
enum CmdError {
    Config(String),
    Ring(RingError),
    Analytic(AnalyticError),
    Geom(GeomError),
    Count(CountError),
    Io(std::io::Error),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(m) => write!(f, "configuration error: {m}"),
            CmdError::Ring(e) => write!(f, "{e}"),
            CmdError::Analytic(e) => write!(f, "{e}"),
            CmdError::Geom(e) => write!(f, "{e}"),
            CmdError::Count(e) => write!(f, "{e}"),
            CmdError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Ring(RingError::OracleBound { .. }) => 3,
            CmdError::Ring(_) => 2,
            CmdError::Analytic(AnalyticError::Ring(RingError::OracleBound { .. })) => 3,
            CmdError::Analytic(_) => 2,
            CmdError::Geom(_) => 4,
            CmdError::Count(CountError::InvalidRequest(_)) => 2,
            CmdError::Count(CountError::DegenerateForm) => 4,
            CmdError::Count(CountError::Geom(_)) => 4,
            CmdError::Count(CountError::Orbit(OrbitError::Geom(_))) => 4,
            CmdError::Count(_) => 2,
            CmdError::Io(_) => 1,
        }
    }
}

impl From<RingError> for CmdError {
    fn from(e: RingError) -> CmdError {
        CmdError::Ring(e)
    }
}
impl From<AnalyticError> for CmdError {
    fn from(e: AnalyticError) -> CmdError {
        CmdError::Analytic(e)
    }
}
impl From<GeomError> for CmdError {
    fn from(e: GeomError) -> CmdError {
        CmdError::Geom(e)
    }
}
impl From<CountError> for CmdError {
    fn from(e: CountError) -> CmdError {
        CmdError::Count(e)
    }
}
impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> CmdError {
        CmdError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "hermcount",
    version,
    about = "Counts nonequivalent representations of integers by indefinite binary Hermitian forms over imaginary quadratic fields and checks them against closed-form constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted asymptotic constant with a full audit trail
    Predict(PredictArgs),
    /// Enumerate and count orbits, producing a convergence report
    Count(CountArgs),
    /// Count, predict, and summarize the gap
    Compare(CountArgs),
    /// Search automorph generators and verify them exactly
    Automorphs(AutomorphsArgs),
    /// Dirichlet fundamental polygon and Gauss-Bonnet area
    Domain(DomainArgs),
    /// Dedekind zeta value at 2 with a certified error bound
    Zeta(ZetaArgs),
    /// Congruence-subgroup indices: enumeration oracle vs closed forms
    Index(IndexArgs),
}

#[derive(Args)]
struct FieldArg {
    /// Field discriminant D_K (a negative fundamental discriminant)
    #[arg(long = "DK", visible_alias = "dk", allow_hyphen_values = true)]
    dk: i64,
}

#[derive(Args)]
struct FormArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Form `a,b,c` with `b` like `2`, `1+2*w`, `1+i` (over Q(i)), or `a,bx,by,c`
    #[arg(long, allow_hyphen_values = true)]
    form: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupChoice {
    Full,
    Level,
    Hecke,
}

#[derive(Args)]
struct GroupArgs {
    /// Which subgroup of SL2(O_K) the counting is taken over
    #[arg(long, value_enum, default_value_t = GroupChoice::Full)]
    group: GroupChoice,
    /// Ideal generators, comma separated (for example `1+i` or `2,1+w`)
    #[arg(long, allow_hyphen_values = true)]
    ideal: Option<String>,
    /// Norm cap of the finite-quotient enumeration oracle
    #[arg(long, default_value_t = 4096)]
    oracle_bound: i64,
}

#[derive(Args)]
struct GeometryKnobs {
    /// Entry-norm bound of the automorph generator search
    #[arg(long, default_value_t = 24)]
    generator_height: i64,
    /// Word depth when intersecting with a congruence subgroup
    #[arg(long, default_value_t = 8)]
    word_length: usize,
    /// Hyperbolic radius of the Dirichlet element ball
    #[arg(long, default_value_t = 7.0)]
    domain_radius: f64,
    /// Word depth of the Dirichlet element ball
    #[arg(long, default_value_t = 28)]
    domain_depth: usize,
    /// Re-run the polygon with a doubled ball radius and report the change
    #[arg(long)]
    stability: bool,
    /// Generator cache directory (keyed by form and search height)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Seed of the deterministic base-point jitter
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    knobs: GeometryKnobs,
    /// Tail tolerance of the zeta computation
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    knobs: GeometryKnobs,
    /// Ascending value thresholds, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    s_grid: Vec<i64>,
    /// Norm bound on pair entries (at least 4 * max s)
    #[arg(long)]
    height: i64,
    /// Count orbits of pairs representing zero as a separate diagnostic
    #[arg(long)]
    include_null: bool,
    /// Worker threads for the enumeration/canonicalization
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Reduction tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Zeta tail tolerance for the prediction
    #[arg(long, default_value_t = 1e-10)]
    zeta_tol: f64,
    /// Skip the doubled-height stability re-run
    #[arg(long)]
    no_stability: bool,
    /// Output directory for report.csv / report.json / summary.json
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AutomorphsArgs {
    #[command(flatten)]
    form: FormArgs,
    /// Entry-norm bound of the search
    #[arg(long, default_value_t = 24)]
    height: i64,
    /// Generator cache directory
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DomainArgs {
    #[command(flatten)]
    form: FormArgs,
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    knobs: GeometryKnobs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Ideal generators, comma separated
    #[arg(long, allow_hyphen_values = true)]
    ideal: String,
    #[arg(long, value_enum)]
    kind: IndexKind,
    #[arg(long, default_value_t = 4096)]
    bound: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IndexKind {
    Level,
    Hecke,
}

/// Parses `x + y*w` style element expressions; `i` doubles for `w` over Q(i).
fn parse_element(s: &str, field: Field) -> Result<QuadInt, CmdError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(CmdError::Config("empty element expression".into()));
    }
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (k, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && k > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let (mut x, mut y) = (0i64, 0i64);
    for term in &terms {
        let term = term.strip_prefix('+').unwrap_or(term);
        let last = term.chars().last().unwrap_or(' ');
        if last == 'w' || last == 'i' {
            if last == 'i' && field.discriminant() != -4 {
                return Err(CmdError::Config(format!(
                    "'i' denotes the basis element only over Q(i); use 'w' for D_K = {}",
                    field.discriminant()
                )));
            }
            let coeff_str = term[..term.len() - 1].trim_end_matches('*');
            let coeff = match coeff_str {
                "" => 1,
                "-" => -1,
                s => s
                    .parse::<i64>()
                    .map_err(|_| CmdError::Config(format!("bad coefficient in '{term}'")))?,
            };
            y += coeff;
        } else {
            x += term
                .parse::<i64>()
                .map_err(|_| CmdError::Config(format!("bad integer term '{term}'")))?;
        }
    }
    Ok(field.int(x, y))
}

fn parse_form(s: &str, field: Field) -> Result<HermitianForm, CmdError> {
    let parts: Vec<&str> = s.split(',').collect();
    let int = |p: &str| {
        p.trim()
            .parse::<i64>()
            .map_err(|_| CmdError::Config(format!("bad integer '{p}' in form")))
    };
    match parts.as_slice() {
        [a, b, c] => Ok(HermitianForm::new(
            int(a)?,
            parse_element(b, field)?,
            int(c)?,
        )),
        [a, bx, by, c] => Ok(HermitianForm::new(
            int(a)?,
            field.int(int(bx)?, int(by)?),
            int(c)?,
        )),
        _ => Err(CmdError::Config(
            "form must be 'a,b,c' or 'a,bx,by,c'".into(),
        )),
    }
}

fn parse_ideal(s: &str, field: Field) -> Result<QuadIdeal, CmdError> {
    let gens: Result<Vec<QuadInt>, CmdError> = s
        .split(',')
        .map(|part| parse_element(part, field))
        .collect();
    QuadIdeal::from_gens(&gens?).map_err(CmdError::from)
}

fn parse_field(dk: i64) -> Result<Field, CmdError> {
    Field::new(dk).map_err(CmdError::from)
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), CmdError> {
    let text = format!("{}\n", serde_json::to_string_pretty(value).unwrap());
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

struct GroupSetup {
    kind: GroupKind,
    ideal: Option<QuadIdeal>,
    descriptor: GroupDescriptor,
    congruence: Option<CongruenceData>,
}

fn resolve_group(field: Field, args: &GroupArgs) -> Result<GroupSetup, CmdError> {
    let kind = match args.group {
        GroupChoice::Full => GroupKind::Full,
        GroupChoice::Level => GroupKind::Level,
        GroupChoice::Hecke => GroupKind::Hecke,
    };
    if kind == GroupKind::Full {
        return Ok(GroupSetup {
            kind,
            ideal: None,
            descriptor: GroupDescriptor::full(field),
            congruence: None,
        });
    }
    let ideal_str = args
        .ideal
        .as_deref()
        .ok_or_else(|| CmdError::Config("congruence groups need --ideal".into()))?;
    let ideal = parse_ideal(ideal_str, field)?;
    let data = congruence_data(&ideal, kind, args.oracle_bound)?;
    Ok(GroupSetup {
        kind,
        ideal: Some(ideal),
        descriptor: data.descriptor.clone(),
        congruence: Some(data),
    })
}

fn group_json(setup: &GroupSetup) -> Value {
    let mut value = json!({
        "kind": setup.descriptor.kind,
        "index_in_bianchi": setup.descriptor.index_in_bianchi,
        "stabilizer_index": setup.descriptor.stabilizer_index,
        "iota_G": setup.descriptor.iota_g,
    });
    if let Some(ideal) = &setup.ideal {
        value["ideal_hnf"] = json!(ideal.hnf_rows());
        value["ideal_norm"] = json!(ideal.norm());
    }
    if let Some(data) = &setup.congruence {
        value["oracle_index"] = json!(data.descriptor.index_in_bianchi);
        value["classical_index"] = json!(data.classical_index);
        value["paper_printed_index"] = ratio_json(&data.printed_index);
        value["oracle_matches_classical"] = json!(data.oracle_matches_classical);
        value["index_warning"] = json!(!data.printed_matches_oracle);
    }
    value
}

fn ratio_json(r: &num_rational::Ratio<i64>) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(*r.numer() as f64 / *r.denom() as f64)
    }
}

struct CovolumeResult {
    value: f64,
    source: &'static str,
    stability: Option<f64>,
    polygon: Option<DirichletPolygon<f64>>,
    generator_count: usize,
}

/// Covolume of `SU_f (O_K) ∩ G`: the Gaussian closed form when available for
/// the full group, otherwise the numerical Dirichlet area (flagged as such).
fn resolve_covolume(
    form: &HermitianForm,
    setup: &GroupSetup,
    knobs: &GeometryKnobs,
) -> Result<CovolumeResult, CmdError> {
    let field = form.field();
    if setup.kind == GroupKind::Full && field.discriminant() == -4 {
        let value = covolume_gaussian::<f64>(&form.primitive_part())?;
        return Ok(CovolumeResult {
            value,
            source: "gaussian_closed_form",
            stability: None,
            polygon: None,
            generator_count: 0,
        });
    }
    let (aset, _work) = automorph_setup(form, setup, knobs)?;
    let generator_count = aset.gens.len();
    let fdata = FuchsianData::new(
        &aset,
        FuchsianParams {
            seed: knobs.seed,
            ..FuchsianParams::default()
        },
    )?;
    let quality = DomainQuality {
        ball_radius: knobs.domain_radius,
        word_depth: knobs.domain_depth,
        ..DomainQuality::default()
    };
    let (polygon, stability) = if knobs.stability {
        let (poly, rel) = dirichlet_domain_area_stable(
            fdata.plane_isometries(),
            &fdata.base(),
            &quality,
        )?;
        (poly, Some(rel))
    } else {
        (
            dirichlet_domain_area(fdata.plane_isometries(), &fdata.base(), &quality)?,
            None,
        )
    };
    Ok(CovolumeResult {
        value: polygon.area,
        source: "dirichlet_numeric",
        stability,
        polygon: Some(polygon),
        generator_count,
    })
}

/// Automorph set of the group acting for this run (full or intersected),
/// on a form normalized to a positive leading coefficient.
fn automorph_setup(
    form: &HermitianForm,
    setup: &GroupSetup,
    knobs: &GeometryKnobs,
) -> Result<(AutomorphSet, HermitianForm), CmdError> {
    let work = match setup.kind {
        GroupKind::Full => {
            let g0 = normalizing_transform(form);
            form.compose(&g0)
        }
        _ => {
            if form.a() == 0 {
                return Err(CmdError::Geom(GeomError::DegenerateLeadingCoefficient));
            }
            if form.a() > 0 {
                *form
            } else {
                -*form
            }
        }
    };
    let full = find_automorphs_cached(&work, knobs.generator_height, knobs.cache_dir.as_deref());
    let aset = match (setup.kind, &setup.ideal) {
        (GroupKind::Full, _) => full,
        (GroupKind::Level, Some(ideal)) => intersect_congruence(&full, ideal, false),
        (GroupKind::Hecke, Some(ideal)) => intersect_congruence(&full, ideal, true),
        _ => unreachable!("congruence group without ideal"),
    };
    Ok((aset, work))
}

struct Prediction {
    constant: f64,
    audit: Value,
}

fn build_prediction(
    form: &HermitianForm,
    setup: &GroupSetup,
    knobs: &GeometryKnobs,
    zeta_tol: f64,
) -> Result<Prediction, CmdError> {
    let field = form.field();
    if form.classify() != FormClass::Indefinite {
        return Err(CmdError::Config(format!(
            "form {form} is not indefinite (discriminant {})",
            form.discriminant()
        )));
    }
    let zeta = dedekind_zeta2::<f64>(field, zeta_tol);
    let covol = resolve_covolume(form, setup, knobs)?;
    let constant = predicted_constant(form, covol.value, &setup.descriptor, zeta.value)?;
    let mut audit = json!({
        "field": {"D_K": field.discriminant(), "omega_K": field.omega_k()},
        "form": form,
        "delta": form.discriminant(),
        "primitive": form.is_primitive(),
        "content": form.content(),
        "zeta_K_2": {"value": zeta.value, "tail_bound": zeta.tail_bound, "terms": zeta.terms},
        "group": group_json(setup),
        "covolume": {
            "value": covol.value,
            "source": covol.source,
            "stability_rel_change": covol.stability,
        },
        "constant": constant,
        "orbit_basepoint": "(1,0)",
    });
    if field.discriminant() == -4 {
        audit["iota_f"] = json!(iota_f(form)?);
        if setup.kind == GroupKind::Full && form.is_primitive() {
            let closed = corollary_gaussian::<f64>(form, zeta.value)?;
            let rel = (closed.value - constant.value).abs() / closed.value;
            audit["gaussian_closed_form"] = json!({
                "value": closed.value,
                "relative_difference_vs_formula": rel,
            });
        }
    }
    if let Some(data) = &setup.congruence {
        let variant = congruence_closed_form_constant(form, covol.value, data, zeta.value)?;
        audit["congruence_closed_form_variant"] = json!({
            "value": variant.value,
            "uses_paper_printed_products": true,
            "warning_mismatch_with_oracle_route": !data.printed_matches_oracle,
        });
    }
    Ok(Prediction {
        constant: constant.value,
        audit,
    })
}

fn cmd_predict(args: &PredictArgs) -> Result<(), CmdError> {
    let field = parse_field(args.form.field.dk)?;
    let form = parse_form(&args.form.form, field)?;
    let setup = resolve_group(field, &args.group)?;
    let prediction = build_prediction(&form, &setup, &args.knobs, args.tol)?;
    let mut out = prediction.audit;
    out["config"] = json!({
        "D_K": field.discriminant(),
        "form": form,
        "group": format!("{:?}", setup.kind).to_lowercase(),
        "tol": args.tol,
        "generator_height": args.knobs.generator_height,
        "word_length": args.knobs.word_length,
        "domain_radius": args.knobs.domain_radius,
        "domain_depth": args.knobs.domain_depth,
        "seed": args.knobs.seed,
    });
    emit(&out, args.out.as_deref())
}

fn run_count(args: &CountArgs) -> Result<(Prediction, hermcount::counting::ConvergenceReport), CmdError> {
    let field = parse_field(args.form.field.dk)?;
    let form = parse_form(&args.form.form, field)?;
    let setup = resolve_group(field, &args.group)?;
    let prediction = build_prediction(&form, &setup, &args.knobs, args.zeta_tol)?;
    let filter = match (setup.kind, setup.ideal) {
        (GroupKind::Full, _) => Filter::None,
        (GroupKind::Level, Some(ideal)) => Filter::Level(ideal),
        (GroupKind::Hecke, Some(ideal)) => Filter::Hecke(ideal),
        _ => unreachable!(),
    };
    let mut req = CountRequest::new(form, args.s_grid.clone(), args.height);
    req.generator_height = args.knobs.generator_height;
    req.word_length = args.knobs.word_length;
    req.include_null = args.include_null;
    req.seed = args.knobs.seed;
    req.tol = args.tol;
    req.threads = args.threads;
    req.cache_dir = args.knobs.cache_dir.clone();
    req.stability_check = !args.no_stability;
    let report = count_orbits(&req, &filter, Some(prediction.constant))?;
    Ok((prediction, report))
}

fn write_count_outputs(
    prediction: &Prediction,
    report: &hermcount::counting::ConvergenceReport,
    fit: Option<Value>,
    out_dir: Option<&Path>,
) -> Result<(), CmdError> {
    let mut bundle = json!({
        "prediction": prediction.audit,
        "report": report,
    });
    if let Some(fit) = fit {
        bundle["fit"] = fit;
    }
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.csv"), report.to_csv())?;
            std::fs::write(
                dir.join("report.json"),
                format!("{}\n", serde_json::to_string_pretty(&bundle).unwrap()),
            )?;
        }
        None => emit(&bundle, None)?,
    }
    Ok(())
}

fn cmd_count(args: &CountArgs) -> Result<(), CmdError> {
    let (prediction, report) = run_count(args)?;
    write_count_outputs(&prediction, &report, None, args.out_dir.as_deref())
}

fn cmd_compare(args: &CountArgs) -> Result<(), CmdError> {
    let (prediction, report) = run_count(args)?;
    let fit = fit_and_compare(&report, prediction.constant)
        .map(|f| serde_json::to_value(f).unwrap())
        .unwrap_or_else(|e| json!({ "unavailable": e.to_string() }));
    write_count_outputs(&prediction, &report, Some(fit), args.out_dir.as_deref())
}

fn cmd_automorphs(args: &AutomorphsArgs) -> Result<(), CmdError> {
    let field = parse_field(args.form.field.dk)?;
    let form = parse_form(&args.form.form, field)?;
    if form.classify() != FormClass::Indefinite {
        return Err(CmdError::Config("form is not indefinite".into()));
    }
    let aset = find_automorphs_cached(&form, args.height, args.cache_dir.as_deref());
    let generators: Vec<Value> = aset
        .gens
        .iter()
        .map(|g| {
            json!({
                "matrix": UniMatRepr::of(g),
                "verified": form.compose(g) == form,
                "max_entry_norm": g.max_entry_norm(),
            })
        })
        .collect();
    let out = json!({
        "form": form,
        "search_height": args.height,
        "generator_count": aset.gens.len(),
        "contains_minus_id": aset.contains_minus_id(),
        "all_verified": aset.verify(),
        "generators": generators,
    });
    emit(&out, args.out.as_deref())
}

fn cmd_domain(args: &DomainArgs) -> Result<(), CmdError> {
    let field = parse_field(args.form.field.dk)?;
    let form = parse_form(&args.form.form, field)?;
    let setup = resolve_group(field, &args.group)?;
    let covol = resolve_covolume_numeric(&form, &setup, &args.knobs)?;
    let polygon = covol.polygon.as_ref().expect("numeric route builds one");
    let mut out = json!({
        "form": form,
        "group": group_json(&setup),
        "generator_count": covol.generator_count,
        "area": polygon.area,
        "area_over_pi": polygon.area / std::f64::consts::PI,
        "sides": polygon.sides,
        "ball_size": polygon.ball_size,
        "stability_rel_change": covol.stability,
        "vertices": polygon.vertices,
    });
    if field.discriminant() == -4 && setup.kind == GroupKind::Full && form.is_primitive() {
        let reference = covolume_gaussian::<f64>(&form)?;
        out["closed_form_reference"] = json!({
            "value": reference,
            "relative_gap": (polygon.area - reference).abs() / reference,
        });
    }
    emit(&out, args.out.as_deref())
}

/// Like [`resolve_covolume`] but always through the Dirichlet polygon.
fn resolve_covolume_numeric(
    form: &HermitianForm,
    setup: &GroupSetup,
    knobs: &GeometryKnobs,
) -> Result<CovolumeResult, CmdError> {
    let (aset, _) = automorph_setup(form, setup, knobs)?;
    let generator_count = aset.gens.len();
    let fdata = FuchsianData::new(
        &aset,
        FuchsianParams {
            seed: knobs.seed,
            ..FuchsianParams::default()
        },
    )?;
    let quality = DomainQuality {
        ball_radius: knobs.domain_radius,
        word_depth: knobs.domain_depth,
        ..DomainQuality::default()
    };
    let (polygon, stability) = if knobs.stability {
        let (p, rel) =
            dirichlet_domain_area_stable(fdata.plane_isometries(), &fdata.base(), &quality)?;
        (p, Some(rel))
    } else {
        (
            dirichlet_domain_area(fdata.plane_isometries(), &fdata.base(), &quality)?,
            None,
        )
    };
    Ok(CovolumeResult {
        value: polygon.area,
        source: "dirichlet_numeric",
        stability,
        polygon: Some(polygon),
        generator_count,
    })
}

fn cmd_zeta(args: &ZetaArgs) -> Result<(), CmdError> {
    let field = parse_field(args.field.dk)?;
    if args.tol < 1e-12 {
        return Err(CmdError::Config("tol must be at least 1e-12".into()));
    }
    let z = dedekind_zeta2::<f64>(field, args.tol);
    let volumes = bianchi_volumes::<f64>(field, args.tol);
    let out = json!({
        "D_K": field.discriminant(),
        "tol": args.tol,
        "zeta_K_2": z.value,
        "tail_bound": z.tail_bound,
        "terms": z.terms,
        "bianchi_covolume": volumes.covolume_h3,
        "cusp_volume": volumes.cusp_volume,
    });
    emit(&out, args.out.as_deref())
}

fn cmd_index(args: &IndexArgs) -> Result<(), CmdError> {
    let field = parse_field(args.field.dk)?;
    let ideal = parse_ideal(&args.ideal, field)?;
    let kind = match args.kind {
        IndexKind::Level => GroupKind::Level,
        IndexKind::Hecke => GroupKind::Hecke,
    };
    let data = congruence_data(&ideal, kind, args.bound)?;
    let out = json!({
        "D_K": field.discriminant(),
        "ideal_hnf": ideal.hnf_rows(),
        "norm": ideal.norm(),
        "kind": format!("{:?}", kind).to_lowercase(),
        "oracle": data.descriptor.index_in_bianchi,
        "classical": data.classical_index,
        "paper_printed": ratio_json(&data.printed_index),
        "warning": !data.printed_matches_oracle,
        "stabilizer_index": data.descriptor.stabilizer_index,
        "iota_G": data.descriptor.iota_g,
    });
    emit(&out, args.out.as_deref())
}

/// Entry point shared by the binary and the tests.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Predict(args) => cmd_predict(args),
        Command::Count(args) => cmd_count(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Automorphs(args) => cmd_automorphs(args),
        Command::Domain(args) => cmd_domain(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::Index(args) => cmd_index(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::gaussian()
    }

    #[test]
    fn element_parsing() {
        let f = field();
        assert_eq!(parse_element("1+i", f).unwrap(), f.int(1, 1));
        assert_eq!(parse_element("-2+3*w", f).unwrap(), f.int(-2, 3));
        assert_eq!(parse_element("w", f).unwrap(), f.int(0, 1));
        assert_eq!(parse_element("-w", f).unwrap(), f.int(0, -1));
        assert_eq!(parse_element("7", f).unwrap(), f.int(7, 0));
        assert_eq!(parse_element("1 - 2w", f).unwrap(), f.int(1, -2));
        let f3 = Field::new(-3).unwrap();
        assert!(parse_element("i", f3).is_err());
        assert_eq!(parse_element("2+w", f3).unwrap(), f3.int(2, 1));
    }

    #[test]
    fn form_parsing_both_spellings() {
        let f = field();
        let three = parse_form("1,0,-2", f).unwrap();
        let four = parse_form("1,0,0,-2", f).unwrap();
        assert_eq!(three, four);
        assert_eq!(three, HermitianForm::reference(f, 2));
        let with_b = parse_form("2,1+i,-2", f).unwrap();
        assert_eq!(with_b, HermitianForm::new(2, f.int(1, 1), -2));
        assert!(parse_form("1,2", f).is_err());
    }

    #[test]
    fn ideal_parsing() {
        let f = field();
        let ideal = parse_ideal("1+i", f).unwrap();
        assert_eq!(ideal.norm(), 2);
        let ideal2 = parse_ideal("2,1+i", f).unwrap();
        assert_eq!(ideal2.norm(), 2);
    }

    #[test]
    fn exit_codes() {
        // Config error: bad discriminant.
        assert_eq!(
            run_command(["hermcount", "zeta", "--DK", "-5"]),
            2
        );
        // Oracle bound.
        assert_eq!(
            run_command([
                "hermcount", "index", "--DK", "-4", "--ideal", "100", "--kind", "level",
                "--bound", "16"
            ]),
            3
        );
        // Help goes to stdout with success.
        assert_eq!(run_command(["hermcount", "--help"]), 0);
    }
}
