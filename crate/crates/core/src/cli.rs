//! The `arr` command line: arrangement files, command dispatch and reports.
//!
//! Every command builds one JSON report. `--format json` prints it as is and
//! `--format text` renders the same values for reading.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{IntPolynomial, ZetaFactorization};
use crate::arrangement::{
    generate_k_equal, good_prime, projectivize, reduce_mod_p, Ambient, Arrangement, KEqualFamily, LinearForm, Ring,
    DEFAULT_SUBSET_CAP,
};
use crate::enumerative::{
    beta_triangle, char_poly, check_mod_m_vanishing, check_sign_alternation, complex_betti,
    frobenius_affine_complement, frobenius_central_punctured, frobenius_projective_complement,
    frobenius_projective_union, local_beta_table, reduced_char_poly, truncation_betti, zeta_affine_complement,
    zeta_affine_union, zeta_projective_complement, zeta_projective_union, FrobeniusProfile, TruncationBetti,
};
use crate::lattice::{build_lattice, Semilattice};
use crate::oracle::{
    ambient_point_count, count_points, count_table, verify_lefschetz, verify_zeta, CountMode, DEFAULT_POINT_CAP,
};
use crate::topology::is_rationally_cm;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RingSpec {
    Named(String),
    Prime { prime: u64 },
}

#[derive(Serialize, Deserialize)]
struct SpaceSpec {
    kind: String,
    n: usize,
}

/// On-disk arrangement: forms are `[c0, a1, ..., an]`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    ring: RingSpec,
    space: SpaceSpec,
    subspaces: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// Line (1-based) of the `index`-th entry of the top-level `subspaces` array.
fn subspace_line(text: &str, index: usize) -> Option<usize> {
    let start = text.find("\"subspaces\"")?;
    let mut depth = 0usize;
    let mut seen = 0usize;
    for (offset, ch) in text[start..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        return Some(text[..start + offset].matches('\n').count() + 1);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses and validates an arrangement file.
pub fn parse_arrangement_file(bytes: &[u8]) -> Result<Arrangement> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("not UTF-8: {e}")))?;
    let file: ArrangementFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let ring = match file.ring {
        RingSpec::Named(s) if s == "Z" => Ring::Integers,
        RingSpec::Named(s) => return Err(Error::Parse(format!("unknown ring {s:?}"))),
        RingSpec::Prime { prime } => Ring::Prime(prime),
    };
    let ambient = match file.space.kind.as_str() {
        "affine" => Ambient::Affine(file.space.n),
        "projective" => Ambient::Projective(file.space.n),
        other => return Err(Error::Parse(format!("unknown space kind {other:?}"))),
    };
    let n = file.space.n;
    let mut groups = Vec::with_capacity(file.subspaces.len());
    for (i, group) in file.subspaces.iter().enumerate() {
        let mut forms = Vec::with_capacity(group.len());
        for (j, row) in group.iter().enumerate() {
            if row.len() != n + 1 {
                let line = subspace_line(text, i).map_or(String::new(), |l| format!(" (line {l})"));
                return Err(Error::Parse(format!(
                    "subspace {i}{line}: form {j} has {} entries, expected n + 1 = {}",
                    row.len(),
                    n + 1
                )));
            }
            forms.push(LinearForm::from_row(row));
        }
        groups.push(forms);
    }
    let arrangement = Arrangement::new(ring, ambient, groups).map_err(|e| match e {
        Error::InvalidSubspace { index, reason } => {
            let line = subspace_line(text, index).map_or(String::new(), |l| format!(" (line {l})"));
            Error::Parse(format!("subspace {index}{line}: {reason}"))
        }
        Error::DuplicateSubspace { first, second } => {
            let line = subspace_line(text, second).map_or(String::new(), |l| format!(" (line {l})"));
            Error::Parse(format!("subspace {second}{line} repeats subspace {first}"))
        }
        other => other,
    })?;
    Ok(match file.name {
        Some(name) => arrangement.with_name(name),
        None => arrangement,
    })
}

fn ring_json(ring: Ring) -> Value {
    match ring {
        Ring::Integers => json!("Z"),
        Ring::Prime(p) => json!({ "prime": p }),
    }
}

fn ambient_json(ambient: Ambient) -> Value {
    let kind = if ambient.is_projective() { "projective" } else { "affine" };
    json!({ "kind": kind, "n": ambient.n() })
}

/// The file form of an arrangement, as a JSON value.
pub fn arrangement_json(a: &Arrangement) -> Value {
    let mut v = json!({
        "ring": ring_json(a.ring()),
        "space": ambient_json(a.ambient()),
        "subspaces": a.subspaces().iter().map(|g| g.iter().map(LinearForm::to_row).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if let Some(name) = a.name() {
        v["name"] = json!(name);
    }
    v
}

/// Arrangement file text with one subspace per line.
pub fn serialize_arrangement(a: &Arrangement) -> String {
    let compact =
        |v: &Value| serde_json::to_string(v).expect("JSON values serialize").replace(',', ", ").replace("\":", "\": ");
    let mut out = String::from("{\n");
    if let Some(name) = a.name() {
        out.push_str(&format!("  \"name\": {},\n", json!(name)));
    }
    out.push_str(&format!("  \"ring\": {},\n", compact(&ring_json(a.ring()))));
    out.push_str(&format!("  \"space\": {},\n", compact(&ambient_json(a.ambient()))));
    let rows: Vec<String> = a
        .subspaces()
        .iter()
        .map(|g| format!("    {}", compact(&json!(g.iter().map(LinearForm::to_row).collect::<Vec<_>>()))))
        .collect();
    if rows.is_empty() {
        out.push_str("  \"subspaces\": []\n}\n");
    } else {
        out.push_str(&format!("  \"subspaces\": [\n{}\n  ]\n}}\n", rows.join(",\n")));
    }
    out
}

#[derive(Parser, Debug)]
#[command(name = "arr", version, about = "Invariants of subspace arrangements over finite fields and the integers")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Limit on enumerated points and on subsets examined by --good-prime.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Union,
    Complement,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Union => CountMode::Union,
            ModeArg::Complement => CountMode::Complement,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FrobeniusMode {
    ProjUnion,
    AffComplement,
    CentralPunctured,
    ProjComplement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    A,
    B,
    D,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Arrangement file.
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Intersection semilattice: elements, Hasse diagram, Möbius row of the bottom.
    Lattice(Input),
    /// Characteristic polynomial (affine) or reduced characteristic polynomial (projective).
    Charpoly(Input),
    /// Zeta function of the union or complement over F_q.
    Zeta {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Union)]
        mode: ModeArg,
    },
    /// Beta triangle and complex Betti numbers, or the local beta table.
    Betti(Input),
    /// Frobenius eigenvalue polynomials P_i(t).
    Frobenius {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        mode: FrobeniusMode,
    },
    /// Brute-force point count over F_{q^s}.
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Complement)]
        mode: ModeArg,
    },
    /// Cross-checks every formula against point counts for s = 1..=smax.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        smax: usize,
    },
    /// Structural checks; with no flags runs --hereditary, --cm and --sign-alternation.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        hereditary: bool,
        #[arg(long, value_name = "M")]
        mod_pure: Option<usize>,
        #[arg(long)]
        cm: bool,
        #[arg(long, value_name = "P")]
        good_prime: Option<u64>,
        #[arg(long)]
        sign_alternation: bool,
        #[arg(long, value_name = "M")]
        mod_m_vanishing: Option<usize>,
    },
    /// Writes a k-equal arrangement file.
    Generate {
        #[arg(long, value_enum, ignore_case = true)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Projectivize the (central) arrangement.
        #[arg(long)]
        projective: bool,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { stdout: text, stderr: String::new(), code: 0 }
                }
                _ => Outcome { stdout: String::new(), stderr: text, code: 2 },
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = match (cli.format, report.file_output) {
                (_, Some(file)) => file,
                (Format::Json, None) => {
                    format!("{}\n", serde_json::to_string_pretty(&report.json).expect("JSON values serialize"))
                }
                (Format::Text, None) => render_text(&report.json),
            };
            Outcome { stdout, stderr: String::new(), code: if report.ok { 0 } else { 1 } }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}

struct Report {
    json: Value,
    ok: bool,
    /// Arrangement file text printed in either format instead of a report.
    file_output: Option<String>,
}

fn load(input: &Input) -> Result<Arrangement> {
    let bytes = std::fs::read(&input.file)?;
    parse_arrangement_file(&bytes)
}

fn input_json(a: &Arrangement) -> Value {
    json!({
        "name": a.name(),
        "ring": ring_json(a.ring()),
        "space": ambient_json(a.ambient()),
        "subspaces": a.len(),
    })
}

fn poly_json(p: &IntPolynomial) -> Value {
    json!({
        "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

fn zeta_json(z: &ZetaFactorization) -> Value {
    json!({
        "exponents": z.exponents().iter().map(|(j, e)| (j.to_string(), json!(e))).collect::<serde_json::Map<_, _>>(),
        "text": z.to_string(),
    })
}

fn profile_json(f: &FrobeniusProfile, q: u64) -> Value {
    let degrees: Vec<Value> = f
        .entries()
        .iter()
        .map(|(&i, row)| {
            json!({
                "degree": i,
                "polynomial": f.polynomial(i).to_string(),
                "weights": row.iter().map(|(&j, &m)| json!({
                    "weight": j,
                    "eigenvalue": num_traits::pow(BigInt::from(q), j).to_string(),
                    "multiplicity": m,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "kind": f.kind(), "degrees": degrees, "zeta": zeta_json(&f.zeta()) })
}

/// The arrangement to analyse over `F_q` together with its lattice. Integer
/// arrangements are reduced mod the characteristic; subspaces that become
/// empty drop out, and one that becomes the whole space is an error.
fn field_lattice(a: &Arrangement, q: u64) -> Result<(Arrangement, Semilattice, Value)> {
    let (p, _) = crate::algebra::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    match a.ring() {
        Ring::Integers => {
            let (red, report) = reduce_mod_p(a, p)?;
            if let Some(&index) = report.degenerate.first() {
                return Err(Error::InvalidSubspace { index, reason: format!("becomes the whole space mod {p}") });
            }
            let l = build_lattice(&red);
            let info = json!({
                "prime": p,
                "inconsistent": report.inconsistent,
                "coincident": report.coincident,
            });
            Ok((red, l, info))
        }
        Ring::Prime(r) if r == p => Ok((a.clone(), build_lattice(a), Value::Null)),
        Ring::Prime(r) => Err(Error::CharacteristicMismatch { q, p: r }),
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let point_cap = cli.cap.unwrap_or(DEFAULT_POINT_CAP);
    let subset_cap = cli.cap.unwrap_or(DEFAULT_SUBSET_CAP);
    let done = |command: &str, a: &Arrangement, result: Value| Report {
        json: json!({ "command": command, "input": input_json(a), "ok": true, "result": result }),
        ok: true,
        file_output: None,
    };
    match &cli.command {
        Command::Lattice(input) => {
            let a = load(input)?;
            let l = build_lattice(&a);
            let mu = l.mobius();
            let elements: Vec<Value> = (0..l.len())
                .map(|x| json!({ "index": x, "dim": l.dim(x), "equations": l.elements()[x].to_string() }))
                .collect();
            let hasse: Vec<[usize; 2]> = l.hasse_edges().into_iter().map(|(i, j)| [i, j]).collect();
            Ok(done(
                "lattice",
                &a,
                json!({
                    "elements": elements,
                    "atoms": l.atoms(),
                    "hasse": hasse,
                    "mobius_bottom": mu.bottom_row(),
                }),
            ))
        }
        Command::Charpoly(input) => {
            let a = load(input)?;
            let l = build_lattice(&a);
            let (kind, p) =
                if l.is_projective() { ("reduced", reduced_char_poly(&l)?) } else { ("affine", char_poly(&l)?) };
            Ok(done("charpoly", &a, json!({ "kind": kind, "polynomial": poly_json(&p) })))
        }
        Command::Zeta { input, q, mode } => {
            let a = load(input)?;
            let (_, l, reduction) = field_lattice(&a, *q)?;
            let mode = CountMode::from(*mode);
            let z = if l.is_projective() {
                let pstar = reduced_char_poly(&l)?;
                match mode {
                    CountMode::Union => zeta_projective_union(&pstar, l.max_dim()),
                    CountMode::Complement => zeta_projective_complement(&pstar),
                }
            } else {
                let p = char_poly(&l)?;
                match mode {
                    CountMode::Union => zeta_affine_union(&p),
                    CountMode::Complement => zeta_affine_complement(&p),
                }
            };
            let predicted: Vec<String> = z.point_counts(*q, 3).iter().map(|c| c.to_string()).collect();
            Ok(done(
                "zeta",
                &a,
                json!({ "q": q, "mode": mode, "zeta": zeta_json(&z), "predicted_counts": predicted, "reduction": reduction }),
            ))
        }
        Command::Betti(input) => {
            let a = load(input)?;
            let l = build_lattice(&a);
            let result = if l.is_projective() {
                let t = truncation_betti(&l)?;
                let b = crate::enumerative::BetaTriangle::from_truncations(&t);
                json!({
                    "kind": "projective",
                    "beta_triangle": b.rows(),
                    "reduced_truncations": reduced_rows(&t),
                    "complex_betti": complex_betti(&b),
                })
            } else {
                json!({ "kind": "affine", "local_beta_table": local_beta_table(&l)?.rows() })
            };
            Ok(done("betti", &a, result))
        }
        Command::Frobenius { input, q, mode } => {
            let a = load(input)?;
            let (_, l, reduction) = field_lattice(&a, *q)?;
            let n = l.ambient_dim();
            let (profile, dual) = match mode {
                FrobeniusMode::ProjUnion => (frobenius_projective_union(&beta_triangle(&l)?, n), None),
                FrobeniusMode::AffComplement => (frobenius_affine_complement(&local_beta_table(&l)?, n), None),
                FrobeniusMode::CentralPunctured => (frobenius_central_punctured(&l)?, None),
                FrobeniusMode::ProjComplement => {
                    let (f, d) = frobenius_projective_complement(&truncation_betti(&l)?);
                    (f, Some(d))
                }
            };
            let mut result = json!({
                "q": q,
                "mode": mode_name(*mode),
                "profile": profile_json(&profile, *q),
                "reduction": reduction,
            });
            if let Some(d) = dual {
                result["ordinary"] = profile_json(&d, *q);
            }
            Ok(done("frobenius", &a, result))
        }
        Command::Count { input, q, s, mode } => {
            let a = load(input)?;
            let mode = CountMode::from(*mode);
            let count = count_points(&a, *q, *s, mode, point_cap)?;
            let total = ambient_point_count(*q, *s, a.ambient().n(), a.ambient().is_projective())
                .expect("the enumeration fit in the cap");
            Ok(done("count", &a, json!({ "q": q, "s": s, "mode": mode, "count": count, "total": total })))
        }
        Command::Verify { input, q, smax } => {
            let a = load(input)?;
            let checks = verify_all(&a, *q, *smax, point_cap)?;
            let ok = checks.iter().all(|c| c["ok"] == json!(true));
            let mut report = done("verify", &a, json!({ "q": q, "smax": smax, "checks": checks }));
            report.json["ok"] = json!(ok);
            report.ok = ok;
            Ok(report)
        }
        Command::Check { input, hereditary, mod_pure, cm, good_prime: gp, sign_alternation, mod_m_vanishing } => {
            let a = load(input)?;
            let l = build_lattice(&a);
            let none = !*hereditary
                && mod_pure.is_none()
                && !*cm
                && gp.is_none()
                && !*sign_alternation
                && mod_m_vanishing.is_none();
            let mut checks = Vec::new();
            if *hereditary || none {
                let ok = l.is_hereditary();
                checks.push(check("hereditary", ok, if ok { "hereditary" } else { "not hereditary" }.into()));
            }
            if let Some(m) = *mod_pure {
                if m == 0 {
                    return Err(Error::Parse("--mod-pure needs M >= 1".into()));
                }
                let ok = l.is_mod_m_pure(m);
                let lengths: Vec<String> = l.maximal_chain_lengths().iter().map(|x| x.to_string()).collect();
                let verdict = if ok { format!("mod-{m}-pure") } else { format!("not mod-{m}-pure") };
                checks.push(check(
                    &format!("mod-{m}-pure"),
                    ok,
                    format!("{verdict}; maximal chain lengths {}", lengths.join(", ")),
                ));
            }
            if *cm || none {
                let r = is_rationally_cm(&l);
                let detail = match r.failing {
                    None => "rationally Cohen-Macaulay".to_string(),
                    Some(iv) => format!(
                        "not Cohen-Macaulay: interval ({}, {}) has homology below its top dimension",
                        iv.lower,
                        iv.upper.map_or("top".to_string(), |u| u.to_string())
                    ),
                };
                checks.push(check("cohen-macaulay", r.cohen_macaulay, detail));
            }
            if let Some(p) = *gp {
                let r = good_prime(&a, p, subset_cap)?;
                let detail = match &r.witness {
                    None => format!("{p} is a good prime ({} subsets checked)", r.subsets_checked),
                    Some(w) => format!("{p} is a bad prime: rank drops on subspaces {w:?}"),
                };
                let mut c = check(&format!("good-prime-{p}"), r.good, detail);
                if let Some(w) = &r.witness {
                    c["witness"] = json!(w);
                }
                checks.push(c);
            }
            if *sign_alternation || none {
                let p = if l.is_projective() { reduced_char_poly(&l)? } else { char_poly(&l)? };
                let (ok, detail) = match l.max_dim() {
                    None => (true, "empty arrangement".to_string()),
                    Some(d) => {
                        let ok = check_sign_alternation(&p, d);
                        (ok, format!("(-1)^(d-j) c_j {} 0 for j <= d = {d} in {p}", if ok { "<=" } else { "not <=" }))
                    }
                };
                checks.push(check("sign-alternation", ok, detail));
            }
            if let Some(m) = *mod_m_vanishing {
                if m == 0 {
                    return Err(Error::Parse("--mod-m-vanishing needs M >= 1".into()));
                }
                let t = truncation_betti(&l)?;
                let ok = check_mod_m_vanishing(&t, m);
                let detail = if ok {
                    format!("reduced truncation Betti numbers vanish unless i + j = d mod {m}")
                } else {
                    format!("some reduced truncation Betti number has i + j != d mod {m}")
                };
                checks.push(check(&format!("mod-{m}-vanishing"), ok, detail));
            }
            let ok = checks.iter().all(|c| c["ok"] == json!(true));
            let mut report = done("check", &a, json!({ "checks": checks }));
            report.json["ok"] = json!(ok);
            report.ok = ok;
            Ok(report)
        }
        Command::Generate { family, n, k, projective } => {
            let family = match family {
                FamilyArg::A => KEqualFamily::A,
                FamilyArg::B => KEqualFamily::B,
                FamilyArg::D => KEqualFamily::D,
            };
            let mut a = generate_k_equal(family, *n, *k)?;
            if *projective {
                let name = a.name().map(|s| format!("{s}-proj"));
                a = projectivize(&a)?;
                if let Some(name) = name {
                    a = a.with_name(name);
                }
            }
            Ok(Report { json: arrangement_json(&a), ok: true, file_output: Some(serialize_arrangement(&a)) })
        }
    }
}

fn mode_name(m: FrobeniusMode) -> &'static str {
    match m {
        FrobeniusMode::ProjUnion => "proj-union",
        FrobeniusMode::AffComplement => "aff-complement",
        FrobeniusMode::CentralPunctured => "central-punctured",
        FrobeniusMode::ProjComplement => "proj-complement",
    }
}

fn reduced_rows(t: &TruncationBetti) -> Vec<Vec<u64>> {
    (0..=t.ambient_dim())
        .map(|j| {
            let b = t.get(j);
            (-1..=b.top_degree().max(-1)).map(|k| b.reduced(k)).collect()
        })
        .collect()
}

fn check(name: &str, ok: bool, detail: String) -> Value {
    json!({ "name": name, "ok": ok, "detail": detail })
}

/// Every oracle cross-check that applies to the arrangement's kind.
fn verify_all(a: &Arrangement, q: u64, smax: usize, cap: u64) -> Result<Vec<Value>> {
    let (red, l, _) = field_lattice(a, q)?;
    let table = count_table(&red, q, smax, cap)?;
    let mut checks = Vec::new();
    let poly_vs_counts = |name: &str, p: &IntPolynomial| {
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|r| {
                let predicted = p.eval(&num_traits::pow(BigInt::from(q), r.s));
                json!({ "s": r.s, "predicted": predicted.to_string(), "counted": r.complement.to_string() })
            })
            .collect();
        let ok = rows.iter().all(|r| r["predicted"] == r["counted"]);
        json!({ "name": name, "ok": ok, "detail": rows })
    };
    let zeta_check = |name: &str, z: &ZetaFactorization, mode: CountMode| -> Result<Value> {
        let r = verify_zeta(&red, q, smax, z, mode, cap)?;
        let detail = match r.first_failing {
            None => format!("series agree through t^{smax}"),
            Some(j) => format!("series differ at t^{j}"),
        };
        Ok(json!({ "name": name, "ok": r.ok, "detail": detail }))
    };
    let lefschetz = |name: &str, f: &FrobeniusProfile| -> Result<Value> {
        let r = verify_lefschetz(&red, q, smax, f, cap)?;
        let rows: Vec<Value> = r
            .rows
            .iter()
            .map(|row| json!({ "s": row.s, "predicted": row.predicted, "counted": row.counted.to_string() }))
            .collect();
        Ok(json!({ "name": name, "ok": r.ok, "detail": rows }))
    };
    if l.is_projective() {
        let pstar = reduced_char_poly(&l)?;
        checks.push(poly_vs_counts("reduced-charpoly-vs-complement", &pstar));
        checks.push(zeta_check("zeta-union", &zeta_projective_union(&pstar, l.max_dim()), CountMode::Union)?);
        checks.push(zeta_check("zeta-complement", &zeta_projective_complement(&pstar), CountMode::Complement)?);
        let t = truncation_betti(&l)?;
        let b = crate::enumerative::BetaTriangle::from_truncations(&t);
        checks.push(lefschetz("lefschetz-proj-union", &frobenius_projective_union(&b, l.ambient_dim()))?);
        let (fc, dual) = frobenius_projective_complement(&t);
        checks.push(lefschetz("lefschetz-proj-complement", &fc)?);
        checks.push(lefschetz("lefschetz-proj-complement-ordinary", &dual)?);
    } else {
        let p = char_poly(&l)?;
        checks.push(poly_vs_counts("charpoly-vs-complement", &p));
        checks.push(zeta_check("zeta-union", &zeta_affine_union(&p), CountMode::Union)?);
        checks.push(zeta_check("zeta-complement", &zeta_affine_complement(&p), CountMode::Complement)?);
        let n = l.ambient_dim();
        checks.push(lefschetz("lefschetz-aff-complement", &frobenius_affine_complement(&local_beta_table(&l)?, n))?);
        if l.is_central() {
            checks.push(lefschetz("lefschetz-central-punctured", &frobenius_central_punctured(&l)?)?);
        }
    }
    Ok(checks)
}

fn value_str(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn join_numbers(v: &Value) -> String {
    v.as_array().map_or(String::new(), |a| a.iter().map(value_str).collect::<Vec<_>>().join(" "))
}

/// Human-readable rendering of a report.
fn render_text(report: &Value) -> String {
    let mut out = Vec::new();
    let r = &report["result"];
    match report["command"].as_str().unwrap_or_default() {
        "lattice" => {
            for e in r["elements"].as_array().into_iter().flatten() {
                out.push(format!("{:>4}  dim {}  {}", e["index"], e["dim"], value_str(&e["equations"])));
            }
            let edges: Vec<String> =
                r["hasse"].as_array().into_iter().flatten().map(|e| format!("{}<{}", e[0], e[1])).collect();
            out.push(format!("atoms: {}", join_numbers(&r["atoms"])));
            out.push(format!("hasse: {}", edges.join(" ")));
            out.push(format!("mobius(0, x): {}", join_numbers(&r["mobius_bottom"])));
        }
        "charpoly" => out.push(value_str(&r["polynomial"]["text"])),
        "zeta" => {
            out.push(value_str(&r["zeta"]["text"]));
            let n = r["predicted_counts"].as_array().map_or(0, Vec::len);
            out.push(format!("N_1..N_{n} at q = {}: {}", r["q"], join_numbers(&r["predicted_counts"])));
        }
        "betti" => {
            if r["kind"] == "projective" {
                out.push("beta triangle (row j, unreduced b_i for i = 0..d-j):".into());
                for (j, row) in r["beta_triangle"].as_array().into_iter().flatten().enumerate() {
                    out.push(format!("  j={j}: {}", join_numbers(row)));
                }
                out.push("truncations (row j, reduced b_k for k = -1, 0, 1, ...):".into());
                for (j, row) in r["reduced_truncations"].as_array().into_iter().flatten().enumerate() {
                    out.push(format!("  j={j}: {}", join_numbers(row)));
                }
                out.push(format!("complex Betti numbers: {}", join_numbers(&r["complex_betti"])));
            } else {
                out.push("local beta table (row j, reduced b_k for k = -1, 0, 1, ...):".into());
                for (j, row) in r["local_beta_table"].as_array().into_iter().flatten().enumerate() {
                    out.push(format!("  j={j}: {}", join_numbers(row)));
                }
            }
        }
        "frobenius" => {
            let mut render = |title: &str, p: &Value| {
                out.push(format!("{title}:"));
                for d in p["degrees"].as_array().into_iter().flatten() {
                    out.push(format!("  P_{} = {}", d["degree"], value_str(&d["polynomial"])));
                }
                out.push(format!("  zeta: {}", value_str(&p["zeta"]["text"])));
            };
            render(&value_str(&r["mode"]), &r["profile"]);
            if !r["ordinary"].is_null() {
                render("ordinary cohomology", &r["ordinary"]);
            }
        }
        "count" => out.push(format!(
            "{} points at q = {}, s = {}: {} of {}",
            value_str(&r["mode"]),
            r["q"],
            r["s"],
            r["count"],
            r["total"]
        )),
        "verify" | "check" => {
            for c in r["checks"].as_array().into_iter().flatten() {
                let status = if c["ok"] == json!(true) { "PASS" } else { "FAIL" };
                let detail = match &c["detail"] {
                    Value::Array(rows) => rows
                        .iter()
                        .map(|row| {
                            format!(
                                "s={}: {} vs {}",
                                row["s"],
                                value_str(&row["predicted"]),
                                value_str(&row["counted"])
                            )
                        })
                        .collect::<Vec<_>>()
                        .join(", "),
                    other => value_str(other),
                };
                out.push(format!("{status}  {}  {detail}", value_str(&c["name"])));
            }
        }
        _ => out.push(report.to_string()),
    }
    out.push(String::new());
    out.join("\n")
}
