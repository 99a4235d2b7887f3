//! Builders for the analyze and focal reports and the locus sample tables.
//!
//! Exact rationals are emitted as strings like "3/4" so nothing is lost to
//! binary floating point; derived floats (kappa values, sampled directions,
//! plot coordinates) use the shortest decimal that round-trips.

use std::f64::consts::{PI, TAU};

use curvloci::dirs::{DirTag, DirectionSet};
use curvloci::height::SffMatrix;
use curvloci::jet::{AffineSubspace, MapGerm};
use curvloci::locus::{ConicLocus, Kappa};
use curvloci::poly::Poly;
use curvloci::scalar::{rint, Sign};
use curvloci::surf_r4_sing::UmbilicalLocus;
use curvloci::surf_r5::UmbilicalFocusR5;
use curvloci::{mfld3, surf_r4, surf_r4_sing, surf_r5, GeomError, GeomResult, Rat, Scalar};
use serde_json::{json, Map, Value};

/// Which of the four supported local models a jet file describes.
pub enum Setting {
    RegularR4,
    RegularR5,
    Corank1R4,
    Manifold3R6,
}

impl Setting {
    pub fn label(&self) -> &'static str {
        match self {
            Setting::RegularR4 => "surface_r4_regular",
            Setting::RegularR5 => "surface_r5_regular",
            Setting::Corank1R4 => "surface_r4_corank1",
            Setting::Manifold3R6 => "manifold3_r6",
        }
    }
}

/// Pick the setting from the jet dimensions and the rank of its differential.
pub fn detect_setting(g: &MapGerm<Rat>) -> GeomResult<Setting> {
    let rank = g.linear_part().rank();
    match (g.domain(), g.codomain()) {
        (2, 5) if rank == 2 => Ok(Setting::RegularR5),
        (2, 4) if rank == 2 => Ok(Setting::RegularR4),
        (2, 4) if rank == 1 => Ok(Setting::Corank1R4),
        (3, 6) if rank == 3 => Ok(Setting::Manifold3R6),
        (2, 4) | (2, 5) => Err(GeomError::RankMismatch {
            expected: 2,
            found: rank,
        }),
        (3, 6) => Err(GeomError::RankMismatch {
            expected: 3,
            found: rank,
        }),
        (d, c) => Err(GeomError::UnsupportedDimensions {
            domain: d,
            codomain: c,
        }),
    }
}

fn require_graph(g: &MapGerm<Rat>) -> GeomResult<()> {
    if g.in_graph_position() {
        Ok(())
    } else {
        Err(GeomError::NotAdapted(
            "analysis needs the germ in graph form, with the first components equal to the \
             source coordinates"
                .into(),
        ))
    }
}

pub fn analyze_report(g: &MapGerm<Rat>) -> GeomResult<Value> {
    let setting = detect_setting(g)?;
    let mut doc = Map::new();
    doc.insert("setting".into(), json!(setting.label()));
    doc.insert("domain".into(), json!(g.domain()));
    doc.insert("codomain".into(), json!(g.codomain()));
    doc.insert("jet_degree".into(), json!(g.degree()));
    match setting {
        Setting::RegularR4 => fill_regular_r4(g, &mut doc)?,
        Setting::RegularR5 => fill_regular_r5(g, &mut doc)?,
        Setting::Corank1R4 => fill_corank1(g, &mut doc)?,
        Setting::Manifold3R6 => fill_mfld3(g, &mut doc)?,
    }
    Ok(Value::Object(doc))
}

fn fill_regular_r4(g: &MapGerm<Rat>, doc: &mut Map<String, Value>) -> GeomResult<()> {
    require_graph(g)?;
    let alpha = SffMatrix::from_monge(g);
    let locus = surf_r4::ellipse(&alpha);
    doc.insert("alpha".into(), jrows(alpha.rows()));
    doc.insert(
        "classification".into(),
        json!({
            "point_type": surf_r4::classify_little(&alpha).to_string(),
            "stratum": locus.mstratum().to_string(),
            "locus_kind": locus.kind().to_string(),
            "radial": locus.radial(),
            "semiumbilic": locus.is_semiumbilic(),
        }),
    );
    doc.insert("locus".into(), jconic(&locus));
    doc.insert(
        "asymptotic".into(),
        jdirs(&surf_r4::asymptotic_dirs_r4(&alpha)?),
    );
    Ok(())
}

fn fill_regular_r5(g: &MapGerm<Rat>, doc: &mut Map<String, Value>) -> GeomResult<()> {
    require_graph(g)?;
    let alpha = SffMatrix::from_monge(g);
    let class = surf_r5::classify_r5(&alpha)?;
    let locus = surf_r4::ellipse(&alpha);
    doc.insert("alpha".into(), jrows(alpha.rows()));
    doc.insert(
        "classification".into(),
        json!({
            "stratum": class.stratum.to_string(),
            "subtype": class.subtype.map(|s| s.to_string()),
            "locus_kind": locus.kind().to_string(),
            "radial": locus.radial(),
            "semiumbilic": class.semiumbilic,
        }),
    );
    doc.insert("kappa_reg".into(), jkappa(&class.kappa));
    doc.insert(
        "flat_umbilic".into(),
        class
            .flat_umbilic
            .as_deref()
            .map(jvec)
            .unwrap_or(Value::Null),
    );
    doc.insert("locus".into(), jconic(&locus));
    insert_or_note(
        doc,
        "umbilical_focus",
        surf_r5::umbilical_focus_r5(&class, &locus).map(|f| jfocus_r5(&f)),
    );
    let stratum = class.stratum;
    insert_or_note(
        doc,
        "asymptotic",
        match stratum.rank() {
            3 => surf_r5::ak_asymptotic_m3(g).map(|d| jdirs(&d)),
            2 => surf_r5::ak_asymptotic_m2(&alpha).map(|d| jdirs(&d)),
            _ => Err(GeomError::WrongStratum(format!(
                "asymptotic directions are classified at M2 and M3 points, found {stratum}"
            ))),
        },
    );
    if stratum.rank() == 2 {
        insert_or_note(
            doc,
            "dk_asymptotic",
            surf_r5::dk_asymptotic_m2(g).map(|d| jdirs(&d)),
        );
    }
    Ok(())
}

fn fill_corank1(g: &MapGerm<Rat>, doc: &mut Map<String, Value>) -> GeomResult<()> {
    let cls = surf_r4_sing::classify_sing(g)?;
    let locus = surf_r4_sing::curvature_parabola(g)?;
    let (e_space, aff) = surf_r4_sing::ep_aff_sing(&locus);
    let alpha = SffMatrix::from_corank1(g);
    doc.insert("alpha".into(), jrows(alpha.rows()));
    doc.insert(
        "classification".into(),
        json!({
            "stratum": cls.stratum.to_string(),
            "point_type": cls.point_type.to_string(),
            "locus_kind": cls.parabola_kind.to_string(),
            "radial": cls.radial,
            "semiumbilic": cls.semiumbilic,
        }),
    );
    doc.insert(
        "kappa_sing".into(),
        jkappa(&surf_r4_sing::kappa_sing(&locus)),
    );
    let mut conic = jconic(&locus);
    if let Value::Object(map) = &mut conic {
        map.insert("e_space".into(), jrows(&e_space.basis));
        map.insert("aff".into(), jaff(&aff));
    }
    doc.insert("locus".into(), conic);
    doc.insert(
        "asymptotic".into(),
        jdirs(&surf_r4_sing::asymptotic_dirs_sing(g)?),
    );
    Ok(())
}

fn fill_mfld3(g: &MapGerm<Rat>, doc: &mut Map<String, Value>) -> GeomResult<()> {
    require_graph(g)?;
    let alpha = mfld3::alpha3(g)?;
    let locus = mfld3::hb_vectors(&alpha);
    doc.insert("alpha".into(), jrows(alpha.rows()));
    doc.insert(
        "locus".into(),
        json!({
            "h": jvec(&locus.h),
            "b": jrows(&locus.b),
            "ep_dim": locus.ep_dim,
            "aff": jaff(&locus.aff),
        }),
    );
    insert_or_note(doc, "kappa6", mfld3::kappa6(&locus).map(|k| jkappa(&k)));
    let cone = mfld3::asymptotic_det(&alpha);
    doc.insert(
        "asymptotic".into(),
        json!({
            "everywhere": cone.is_negligible(),
            "cone": jpoly(&cone, &["u1", "u2", "u3"]),
        }),
    );
    doc.insert(
        "asymptotic_note".into(),
        json!(
            "asymptotic directions of a 3-manifold form the zero cone of this cubic in the \
             tangent coordinates, not a finite list"
        ),
    );
    insert_or_note(
        doc,
        "umbilical_focus",
        mfld3::umbilical_focus_6(g, &locus).map(|f| jfocus6(&f)),
    );
    Ok(())
}

pub fn focal_report(g: &MapGerm<Rat>) -> GeomResult<Value> {
    let desc = surf_r4_sing::focal_set(g)?;
    Ok(json!({
        "kind": desc.kind.to_string(),
        "equation": jpoly(&desc.equation, &["v2", "v3", "v4"]),
        "kappa_sing": jkappa(&desc.kappa),
        "umbilical": jumbilical(&desc.umbilical),
    }))
}

/// Sampled locus points with named columns, printable as CSV or JSON.
pub struct LocusTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl LocusTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({"columns": self.columns, "rows": self.rows})
    }
}

pub fn locus_table(g: &MapGerm<Rat>, samples: usize) -> GeomResult<LocusTable> {
    match detect_setting(g)? {
        Setting::RegularR4 | Setting::RegularR5 => {
            require_graph(g)?;
            let locus = surf_r4::ellipse(&SffMatrix::from_monge(g));
            let rows = (0..samples)
                .map(|i| {
                    let t = TAU * (i as f64) / (samples as f64);
                    let mut row = vec![t];
                    row.extend(locus.sample_f64(t));
                    row
                })
                .collect();
            Ok(LocusTable {
                columns: normal_columns("t", 2, locus.normal_dim()),
                rows,
            })
        }
        Setting::Corank1R4 => {
            let locus = surf_r4_sing::curvature_parabola(g)?;
            let rows = (0..samples)
                .map(|i| {
                    let t = -1.0 + 2.0 * (i as f64) / ((samples - 1) as f64);
                    let mut row = vec![t];
                    row.extend(locus.sample_f64(t));
                    row
                })
                .collect();
            Ok(LocusTable {
                columns: normal_columns("t", 1, locus.normal_dim()),
                rows,
            })
        }
        Setting::Manifold3R6 => {
            require_graph(g)?;
            let locus = mfld3::hb_vectors(&mfld3::alpha3(g)?);
            let k_theta = (samples as f64).sqrt().ceil() as usize;
            let k_phi = samples.div_ceil(k_theta).max(2);
            let mut rows = Vec::with_capacity(k_theta * k_phi);
            for i in 0..k_theta {
                let theta = TAU * (i as f64) / (k_theta as f64);
                for j in 0..k_phi {
                    let phi = PI * (j as f64) / ((k_phi - 1) as f64);
                    let mut row = vec![theta, phi];
                    row.extend(mfld3::locus_sample(&locus, theta, phi));
                    rows.push(row);
                }
            }
            let mut columns = vec!["theta".to_string(), "phi".to_string()];
            columns.extend((4..=6).map(|k| format!("y{k}")));
            Ok(LocusTable { columns, rows })
        }
    }
}

/// Header names "t,y{first+1},..." for a locus in the normal coordinates
/// starting at target index `first` (0-based).
fn normal_columns(param: &str, first: usize, normal_dim: usize) -> Vec<String> {
    let mut columns = vec![param.to_string()];
    columns.extend((first..first + normal_dim).map(|k| format!("y{}", k + 1)));
    columns
}

fn insert_or_note(doc: &mut Map<String, Value>, key: &str, r: GeomResult<Value>) {
    match r {
        Ok(v) => {
            doc.insert(key.into(), v);
        }
        Err(e) => {
            doc.insert(key.into(), Value::Null);
            doc.insert(format!("{key}_note"), json!(e.to_string()));
        }
    }
}

fn jrat(x: &Rat) -> Value {
    Value::String(x.to_string())
}

fn jvec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(jrat).collect())
}

fn jrows(rows: &[Vec<Rat>]) -> Value {
    Value::Array(rows.iter().map(|r| jvec(r)).collect())
}

fn jaff(a: &AffineSubspace<Rat>) -> Value {
    json!({"base": jvec(&a.base), "basis": jrows(&a.basis), "dim": a.dim()})
}

fn jkappa(k: &Kappa<Rat>) -> Value {
    json!({
        "sq": jrat(k.sq()),
        "exact": k.exact().as_ref().map(jrat).unwrap_or(Value::Null),
        "value": k.value(),
    })
}

fn jconic(locus: &ConicLocus<Rat>) -> Value {
    json!({
        "kind": locus.kind().to_string(),
        "aff": jaff(&locus.aff()),
        "first_normal_space": jrows(&locus.first_normal_space()),
        "e_space": jrows(&locus.e_space()),
        "coefficients": {
            "l": jvec(locus.l()),
            "m": jvec(locus.m()),
            "n": jvec(locus.n()),
        },
    })
}

fn jdirs(d: &DirectionSet) -> Value {
    let entries: Vec<Value> = d
        .entries
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("dir".into(), json!(e.dir));
            m.insert("multiplicity".into(), json!(e.multiplicity));
            if !matches!(e.tag, DirTag::Plain) {
                m.insert("tag".into(), json!(e.tag.to_string()));
            }
            if let Some(nu) = &e.dual_normal {
                m.insert("dual_normal".into(), json!(nu));
            }
            Value::Object(m)
        })
        .collect();
    json!({"infinite": d.infinite, "directions": entries})
}

fn jfocus_r5(f: &UmbilicalFocusR5<Rat>) -> Value {
    match f {
        UmbilicalFocusR5::Point { center } => {
            json!({"shape": "POINT", "center": jvec(center)})
        }
        UmbilicalFocusR5::Line { base, direction } => {
            json!({"shape": "LINE", "base": jvec(base), "direction": jvec(direction)})
        }
        UmbilicalFocusR5::AtInfinity { hyperplane_normal } => {
            json!({"shape": "AT_INFINITY", "hyperplane_normal": jvec(hyperplane_normal)})
        }
    }
}

fn jfocus6(f: &mfld3::UmbilicalFocus6<Rat>) -> Value {
    match f {
        mfld3::UmbilicalFocus6::Point { center, kappa } => {
            json!({"shape": "POINT", "center": jvec(center), "kappa": jkappa(kappa)})
        }
        mfld3::UmbilicalFocus6::AtInfinity { direction } => {
            json!({"shape": "AT_INFINITY", "direction": jvec(direction)})
        }
    }
}

fn jumbilical(u: &UmbilicalLocus<Rat>) -> Value {
    match u {
        UmbilicalLocus::None => json!({"shape": "NONE"}),
        UmbilicalLocus::Point { center } => {
            json!({"shape": "POINT", "center": jvec(center)})
        }
        UmbilicalLocus::Line { base, direction } => {
            json!({"shape": "LINE", "base": jvec(base), "direction": jvec(direction)})
        }
        UmbilicalLocus::Plane { base, basis } => {
            json!({
                "shape": "PLANE",
                "base": jvec(base),
                "basis": [jvec(&basis[0]), jvec(&basis[1])],
            })
        }
        UmbilicalLocus::AtInfinity { hyperplane_normal } => {
            json!({"shape": "AT_INFINITY", "hyperplane_normal": jvec(hyperplane_normal)})
        }
    }
}

fn jpoly(p: &Poly<Rat>, vars: &[&str]) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(mono, c)| {
            let exps: Vec<u32> = mono.0.iter().map(|&e| e as u32).collect();
            json!({"exponents": exps, "coeff": jrat(c)})
        })
        .collect();
    json!({
        "variables": vars,
        "terms": terms,
        "rendered": render_poly(p, vars),
    })
}

fn render_poly(p: &Poly<Rat>, vars: &[&str]) -> String {
    let mut out = String::new();
    for (mono, c) in p.terms() {
        let neg = c.sign() == Sign::Negative;
        let mag = if neg { -c.clone() } else { c.clone() };
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in mono.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[i].to_string()),
                _ => factors.push(format!("{}^{}", vars[i], e)),
            }
        }
        let body = if factors.is_empty() {
            mag.to_string()
        } else if mag == rint(1) {
            factors.join("*")
        } else {
            format!("{}*{}", mag, factors.join("*"))
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
