use serde_json::{json, Value};
use squeeze_core::catalog::{self, DomainId};
use squeeze_core::comparisons::{self, Relation};
use squeeze_core::embedding::{self, InclusionStatus};
use squeeze_core::metrics::{self, BallPair};
use squeeze_core::pinching::{self, EnclosingOptions, ScanOptions};
use squeeze_core::sampling;
use squeeze_core::squeeze::{self, Provenance, SqueezeBound};
use squeeze_core::{DomainSpec, Error, RealPoint, Strategy};

use crate::cli::{CatalogAction, Cli, Command, DomainArgs, EnclosingArgs, Family};
use crate::output::Record;

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum Failure {
    Validation { message: String, hint: String },
    Numerical { message: String, hint: String },
}

impl Failure {
    pub fn validation(message: impl Into<String>, hint: impl Into<String>) -> Self {
        Failure::Validation { message: message.into(), hint: hint.into() }
    }
}

fn hint_for(e: &Error) -> &'static str {
    match e {
        Error::UnknownDomain(_) => "run `squeeze-lab catalog list` for the available identifiers",
        Error::UnknownEmbedding(_) => "run `squeeze-lab catalog list` for the available embeddings",
        Error::NotOnBoundary(_) => "pass a boundary point with --point, or omit it to use the reference point",
        Error::NotGsc => "choose a strongly convex boundary point, or a sheared or rescaled model",
        Error::OutsideDomain => "the point must lie inside the domain",
        Error::NoBoundaryFound(_) | Error::NoInteriorFound(_) => "check the bounding box of the domain",
        Error::DegenerateGradient(_) => "the defining function is singular there; move the point",
        Error::ImageEscapesBall(_) => "the map does not send the domain into the unit ball",
        Error::NotDecreasing(_) => "pinching functions must be positive and decreasing",
        Error::ShapeMismatch(_) => "check the number of coordinates (2 real numbers per complex dimension)",
        _ => "check the flag values; see --help",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let hint = hint_for(&e).to_string();
        if e.is_validation() {
            Failure::Validation { message: e.to_string(), hint }
        } else {
            Failure::Numerical { message: e.to_string(), hint }
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn parse_list(flag: &str, s: &str) -> Outcome<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<_>>>()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| Failure::validation(format!("--{flag} expects comma-separated numbers, got `{s}`"), "e.g. 1,0,0,0"))
}

fn parse_grid(flag: &str, s: &str) -> Outcome<Vec<f64>> {
    let bad = || Failure::validation(format!("--{flag} expects a:b:n, got `{s}`"), "e.g. 0.55:0.99:45");
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn point(coords: Vec<f64>) -> Outcome<RealPoint> {
    Ok(RealPoint::new(coords)?)
}

fn resolve(args: &DomainArgs) -> Outcome<(DomainSpec, RealPoint)> {
    resolve_parts(&args.domain, args.point.as_deref())
}

fn resolve_parts(id: &str, pt: Option<&str>) -> Outcome<(DomainSpec, RealPoint)> {
    let parsed: DomainId = id.parse()?;
    let domain = parsed.build()?;
    let p = match pt {
        Some(s) => point(parse_list("point", s)?)?,
        None => parsed
            .reference_point()
            .ok_or_else(|| Failure::validation(format!("`{id}` has no reference point"), "pass --point"))?,
    };
    if p.dim_real() != domain.dim_real() {
        return Err(Failure::validation(
            format!("point has {} real coordinates, `{id}` needs {}", p.dim_real(), domain.dim_real()),
            "give 2 real numbers per complex dimension",
        ));
    }
    Ok((domain, p))
}

fn enclosing_options(a: &EnclosingArgs) -> EnclosingOptions {
    EnclosingOptions {
        refine_candidates: a.refine_candidates,
        refine_iterations: a.refine_iterations,
        local_limit: !a.no_local_limit,
        curvature_floor: a.curvature_floor,
        ..EnclosingOptions::default()
    }
}

fn interior(domain: &DomainSpec, cli: &Cli) -> Outcome<Vec<RealPoint>> {
    Ok(sampling::sample_interior(domain, cli.samples, cli.seed)?)
}

fn with_provenance(mut v: Value, p: Provenance) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("provenance".into(), to_value(&p));
    }
    v
}

fn bound_row(b: &SqueezeBound) -> Value {
    json!({ "lower": b.lower, "upper": b.upper, "provenance": b.provenance })
}

pub fn run(cli: &Cli) -> Outcome<Record> {
    let mut rec = Record::new(cli.command.name(), cli.seed, cli.samples);
    match &cli.command {
        Command::Pinch { domain, enclosing } => {
            let (d, p) = resolve(domain)?;
            let opts = enclosing_options(enclosing);
            rec.inputs = json!({ "domain": d.name, "point": p, "options": opts });
            let samples = interior(&d, cli)?;
            let r = pinching::pinching_radius_with(&d, &p, &samples, &opts, Strategy::default())?;
            rec.rows.push(with_provenance(to_value(&r), Provenance::Heuristic));
            rec.notes.push("sampled estimate: the enclosing radius is a lower bound, so pinching may be overestimated".into());
        }
        Command::Enclosing { domain, enclosing } => {
            let (d, p) = resolve(domain)?;
            let opts = enclosing_options(enclosing);
            rec.inputs = json!({ "domain": d.name, "point": p, "options": opts });
            let samples = interior(&d, cli)?;
            let e = pinching::enclosing_radius_with(&d, &p, &samples, &opts)?;
            rec.rows.push(with_provenance(json!({ "point": p, "enclosing_radius": e }), Provenance::Heuristic));
        }
        Command::Semicontinuity { domain, radii, ring_samples, tolerance } => {
            let (d, p) = resolve(domain)?;
            let radii = parse_list("radii", radii)?;
            rec.inputs = json!({ "domain": d.name, "point": p, "radii": radii, "ring_samples": ring_samples, "tolerance": tolerance });
            let samples = interior(&d, cli)?;
            let opts = ScanOptions { samples_per_ring: *ring_samples, tolerance: *tolerance, seed: cli.seed, strategy: Strategy::default() };
            let rep = pinching::semicontinuity_scan(&d, &p, &radii, &samples, &opts)?;
            for ring in &rep.rings {
                let mut row = to_value(ring);
                row["base_pinching"] = json!(rep.base_pinching);
                rec.rows.push(with_provenance(row, Provenance::Heuristic));
            }
            rec.notes.push(format!(
                "liminf estimate {} against base {}; passed = {}",
                rep.liminf_estimate, rep.base_pinching, rep.passed
            ));
        }
        Command::Geodesic { r_grid, r, rho, oracle, oracle_grid, n } => {
            let rs = match (r_grid, r) {
                (Some(g), _) => parse_grid("r-grid", g)?,
                (None, Some(r)) => vec![*r],
                (None, None) => return Err(Failure::validation("geodesic needs --r or --r-grid", "e.g. --r-grid 0.55:0.99:45")),
            };
            rec.inputs = json!({ "r": rs, "rho": rho, "oracle": oracle, "oracle_grid": oracle_grid, "n": n });
            for &r in &rs {
                let inside = metrics::in_closed_form_region(r, *rho);
                let feasible = metrics::interior_critical_point_feasible(r, *rho);
                let closed = if inside && feasible { Some(metrics::geodesic_ball_boundary_distance(r, *rho)?) } else { None };
                let orc = if *oracle || closed.is_none() {
                    Some(metrics::numerical_boundary_distance_oracle(r, *rho, *n, *oracle_grid)?)
                } else {
                    None
                };
                let (value, source, provenance) = match (closed, &orc) {
                    (Some(c), _) => (c, "closed-form", Provenance::Exact),
                    (None, Some(o)) => (o.distance, "oracle", Provenance::Heuristic),
                    (None, None) => unreachable!("oracle runs outside the region"),
                };
                rec.rows.push(json!({
                    "r": r,
                    "rho": rho,
                    "in_closed_form_region": inside,
                    "interior_critical_point_feasible": feasible,
                    "closed_form": closed,
                    "oracle": orc.as_ref().map(|o| o.distance),
                    "abs_diff": closed.zip(orc.as_ref().map(|o| o.distance)).map(|(c, o)| (c - o).abs()),
                    "value": value,
                    "value_source": source,
                    "provenance": provenance,
                }));
            }
        }
        Command::Kobayashi { z, w } => {
            let pair = BallPair::new(point(parse_list("z", z)?)?, point(parse_list("w", w)?)?)?;
            rec.inputs = json!({ "z": pair.z, "w": pair.w });
            let d = metrics::kobayashi_distance_ball(&pair);
            rec.rows.push(json!({ "distance": d, "provenance": Provenance::Exact }));
        }
        Command::Bounds { domain, point: pt, e, rho, depths, depth_grid, max_depth } => {
            let depths = match (depths, depth_grid) {
                (Some(s), _) => parse_list("depths", s)?,
                (None, Some(g)) => parse_grid("depth-grid", g)?,
                (None, None) => return Err(Failure::validation("bounds needs --depths or --depth-grid", "e.g. --depth-grid 1e-4:0.1:20")),
            };
            match (domain, e, rho) {
                (Some(id), None, None) => {
                    let (d, p) = resolve_parts(id, pt.as_deref())?;
                    rec.inputs = json!({ "domain": d.name, "point": p, "depths": depths, "max_depth": max_depth });
                    let samples = interior(&d, cli)?;
                    let est = squeeze::boundary_estimate_at_point(&d, &p, &depths, &samples, *max_depth)?;
                    for b in &est.bounds {
                        let mut row = bound_row(&b.bound);
                        row["depth"] = json!(b.depth);
                        row["point"] = to_value(&b.point);
                        row["pinching"] = json!(est.pinching);
                        row["enclosing_radius"] = json!(est.enclosing_radius);
                        row["limit"] = json!(est.limit);
                        rec.rows.push(row);
                    }
                    rec.notes.push(format!("depths beyond {} are reported as vacuous", est.max_depth));
                }
                (None, Some(e), Some(rho)) => {
                    rec.inputs = json!({ "e": e, "rho": rho, "depths": depths });
                    for &delta in &depths {
                        let b = squeeze::boundary_estimate(delta, *e, *rho)?;
                        let mut row = bound_row(&b);
                        row["depth"] = json!(delta);
                        row["limit"] = json!(rho.sqrt());
                        rec.rows.push(row);
                    }
                }
                _ => {
                    return Err(Failure::validation(
                        "bounds needs either --domain or both --e and --rho",
                        "e.g. bounds --domain thullen:k=0.5 --depth-grid 1e-4:0.1:20",
                    ))
                }
            }
        }
        Command::Product { factors } => {
            let f = parse_list("factors", factors)?;
            rec.inputs = json!({ "factors": f });
            let v = squeeze::product_lower_bound(&f)?;
            rec.rows.push(json!({ "lower": v, "upper": 1.0, "provenance": Provenance::ProductBound }));
        }
        Command::Limit { family, z, count } => {
            if *count == 0 {
                return Err(Failure::validation("--count must be positive", "e.g. --count 20"));
            }
            let z = point(parse_list("z", z)?)?;
            let (domains, limit) = family_domains(*family, &z, *count)?;
            rec.inputs = json!({ "family": format!("{family:?}"), "z": z, "count": count });
            let eval = squeeze::exact_evaluator;
            let rep = match family {
                Family::PuncturedShrinking => squeeze::decreasing_sequence_eval(&domains, &limit, &z, &eval)?,
                _ => squeeze::increasing_sequence_eval(&domains, &limit, &z, &eval)?,
            };
            for s in &rep.steps {
                let mut row = bound_row(&s.value);
                row["index"] = json!(s.index);
                row["domain"] = json!(s.domain);
                row["gap"] = json!(s.gap);
                rec.rows.push(row);
            }
            let mut lim = bound_row(&rep.limit_value);
            lim["domain"] = json!(rep.limit_domain);
            lim["role"] = json!("limit");
            rec.rows.push(lim);
            let mut imp = bound_row(&rep.implied_bound);
            imp["domain"] = json!(rep.limit_domain);
            imp["role"] = json!("implied");
            rec.rows.push(imp);
            rec.notes.push(format!("{}; assertion holds = {}", rep.note, rep.assertion_holds));
        }
        Command::Envelope { relation, s, n } => {
            let rel = Relation::parse(relation)?;
            let ss = parse_list("s", s)?;
            rec.inputs = json!({ "relation": rel, "s": ss, "n": n });
            for &s in &ss {
                let env = comparisons::envelope(rel, s, *n)?;
                rec.rows.push(with_provenance(to_value(&env), Provenance::Exact));
                if !env.consistent {
                    rec.notes.push(format!("s = {s}: low exceeds high, the pair of constants is not a usable envelope"));
                }
            }
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for e in catalog::catalog_entries() {
                    let mut row = to_value(&e);
                    row["kind"] = json!("domain");
                    rec.rows.push(row);
                }
                for e in embedding::embedding_entries() {
                    let mut row = to_value(&e);
                    row["kind"] = json!("embedding");
                    rec.rows.push(row);
                }
            }
            CatalogAction::Describe { id } => {
                rec.inputs = json!({ "id": id });
                if let Ok(parsed) = id.parse::<DomainId>() {
                    let d = parsed.build()?;
                    rec.rows.push(json!({
                        "kind": "domain",
                        "name": d.name,
                        "n": d.n,
                        "bbox_lo": d.bbox.lo,
                        "bbox_hi": d.bbox.hi,
                        "excluded": d.excluded.as_ref().map(|x| x.description.clone()),
                        "exact_model": d.model.map(|m| format!("{m:?}")),
                        "reference_point": parsed.reference_point(),
                    }));
                } else {
                    let e = embedding::parse_embedding(id).map_err(|_| Error::UnknownDomain(id.clone()))?;
                    rec.rows.push(json!({
                        "kind": "embedding",
                        "name": e.name,
                        "domain": e.domain.name,
                        "basepoint": e.basepoint,
                        "boundary_extension": e.boundary_extension,
                    }));
                }
            }
        },
        Command::VerifyEmbedding { embedding: id, r, grid, boundary_samples } => {
            let spec = embedding::parse_embedding(id)?;
            let radii = r.as_deref().map(|s| parse_list("r", s)).transpose()?.unwrap_or_default();
            rec.inputs = json!({ "embedding": spec.name, "r": radii, "grid": grid, "boundary_samples": boundary_samples });
            let samples = interior(&spec.domain, cli)?;
            let boundary = sampling::sample_boundary(&spec.domain, *boundary_samples, cli.seed ^ 0xB0B)?;
            let w = embedding::witness_radius(&spec, &boundary, &samples)?;
            let mut row = bound_row(&w.bound);
            row["check"] = json!("witness");
            row["min_boundary_image"] = json!(w.min_boundary_image);
            row["min_excluded_image"] = json!(w.min_excluded_image);
            row["argmin"] = to_value(&w.argmin);
            rec.rows.push(row);
            for &r in &radii {
                let inc = embedding::verify_inclusion(&spec, r, *grid, &samples, cli.seed)?;
                let mut row = to_value(&inc);
                row["check"] = json!("inclusion");
                rec.rows.push(row);
                if inc.status == InclusionStatus::Heuristic {
                    rec.notes.push(format!("r = {r}: preimage search stalled on {} targets", inc.stalled_targets));
                }
            }
        }
        Command::SupportScan { eps, grid } => {
            rec.inputs = json!({ "eps": eps, "grid": grid });
            let rep = catalog::reinhardt_support_scan(*eps, *grid)?;
            rec.rows.push(with_provenance(to_value(&rep), Provenance::Heuristic));
        }
    }
    Ok(rec)
}

/// Exhaustions use radii `1 - (1 - |z|) / (k + 2)`, so every member contains `z`.
fn family_domains(family: Family, z: &RealPoint, count: usize) -> Outcome<(Vec<DomainSpec>, DomainSpec)> {
    let gap = 1.0 - z.norm();
    if !(gap > 0.0) {
        return Err(Failure::validation("z must lie in the unit ball", "pick |z| < 1"));
    }
    let n = z.n();
    let out = match family {
        Family::PuncturedExhaustion => {
            let ds = (0..count)
                .map(|k| catalog::scaled_punctured_disc(1.0 - gap / (k as f64 + 2.0)))
                .collect::<Result<Vec<_>, _>>()?;
            (ds, catalog::punctured_disc())
        }
        Family::PuncturedShrinking => {
            let ds = (1..=count)
                .map(|k| catalog::scaled_punctured_disc(1.0 + 1.0 / k as f64))
                .collect::<Result<Vec<_>, _>>()?;
            (ds, catalog::punctured_disc())
        }
        Family::BallExhaustion => {
            let ds = (0..count)
                .map(|k| catalog::ball_radius(n, 1.0 - gap / (k as f64 + 2.0)))
                .collect::<Result<Vec<_>, _>>()?;
            (ds, catalog::ball(n)?)
        }
    };
    Ok(out)
}
