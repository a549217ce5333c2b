//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use subarr::algebra::{series_exp_of_counts, series_expand_factorization, IntPolynomial, ZetaFactorization};
use subarr::arrangement::{
    form_ranks, good_prime, projectivize, specialize, Arrangement, LinearForm, Ring, DEFAULT_SUBSET_CAP,
};
use subarr::enumerative::{
    beta_triangle, char_poly, check_mod_m_vanishing, check_sign_alternation, complex_betti,
    frobenius_affine_complement, frobenius_central_punctured, frobenius_projective_complement,
    frobenius_projective_union, local_beta_table, reduced_char_poly, truncation_betti, zeta_from_cm,
    zeta_projective_union, FrobeniusProfile, ProfileKind,
};
use subarr::lattice::{build_lattice, Semilattice};
use subarr::oracle::{count_points, count_table, max_s_within_cap, CountMode, CountTable, DEFAULT_POINT_CAP};
use subarr::topology::{is_rationally_cm, order_complex};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Cache) -> Outcome);

/// Lattices and point counts shared between criteria.
struct Cache {
    arrangements: HashMap<String, Arrangement>,
    lattices: HashMap<String, Semilattice>,
    field_lattices: HashMap<(String, u64), Semilattice>,
    counts: HashMap<(String, u64), CountTable>,
}

impl Cache {
    fn new() -> Self {
        let arrangements = common::corpus_names().into_iter().map(|n| (n.clone(), common::load(&n))).collect();
        Cache { arrangements, lattices: HashMap::new(), field_lattices: HashMap::new(), counts: HashMap::new() }
    }

    fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.arrangements.keys().cloned().collect();
        names.sort();
        names
    }

    fn arrangement(&self, name: &str) -> &Arrangement {
        &self.arrangements[name]
    }

    fn lattice(&mut self, name: &str) -> &Semilattice {
        if !self.lattices.contains_key(name) {
            let l = build_lattice(&self.arrangements[name]);
            self.lattices.insert(name.to_string(), l);
        }
        &self.lattices[name]
    }

    /// Lattice of the arrangement as it lives over `F_q`.
    fn field_lattice(&mut self, name: &str, q: u64) -> &Semilattice {
        let key = (name.to_string(), q);
        if !self.field_lattices.contains_key(&key) {
            let a = specialize(&self.arrangements[name], q).expect("corpus specializes");
            self.field_lattices.insert(key.clone(), build_lattice(&a));
        }
        &self.field_lattices[&key]
    }

    /// Counts over `F_{q^s}` for `s = 1..=min(3, largest s within the cap)`.
    fn counts(&mut self, name: &str, q: u64) -> &CountTable {
        let key = (name.to_string(), q);
        if !self.counts.contains_key(&key) {
            let a = &self.arrangements[name];
            let s_max = max_s_within_cap(a, q, 3, DEFAULT_POINT_CAP);
            let t = count_table(a, q, s_max, DEFAULT_POINT_CAP).expect("within cap");
            self.counts.insert(key.clone(), t);
        }
        &self.counts[&key]
    }

    /// Field sizes the arrangement can be counted over, from `{2, 3}`.
    fn fields(&self, name: &str) -> Vec<u64> {
        match self.arrangements[name].ring() {
            Ring::Integers => vec![2, 3],
            Ring::Prime(p) => vec![p],
        }
    }
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

/// Reduced Euler characteristic from the face counts, `-1 + Σ (-1)^k f_k`.
fn euler_from_faces(p: &subarr::lattice::Poset) -> i64 {
    let f = order_complex(p).f_vector();
    -1 + f.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum::<i64>()
}

fn a63_regression(c: &mut Cache) -> Outcome {
    let affine = char_poly(c.lattice("a63")).map_err(|e| e.to_string())?;
    check(affine == poly(&[0, 0, -26, 45, -20, 0, 1]), format!("affine P = {affine}"))?;
    let l = c.lattice("a63-proj").clone();
    let pstar = reduced_char_poly(&l).map_err(|e| e.to_string())?;
    check(pstar == poly(&[0, 0, 26, -19, 1, 1]), format!("P* = {pstar}"))?;
    let b = beta_triangle(&l).map_err(|e| e.to_string())?;
    check(
        b.rows() == [vec![1, 0, 0, 0], vec![1, 10, 10], vec![1, 26], vec![20]],
        format!("beta triangle {:?}", b.rows()),
    )?;
    let betti = complex_betti(&b);
    check(betti == [1, 0, 1, 10, 11, 26, 20], format!("complex Betti {betti:?}"))?;
    let z = zeta_projective_union(&pstar, l.max_dim());
    let want = ZetaFactorization::from_pairs([(0, -1), (1, -1), (2, 25), (3, -20)]);
    check(z == want, format!("zeta {z}"))?;
    let f = frobenius_projective_union(&b, l.ambient_dim());
    let expected: [&[(usize, i64)]; 7] =
        [&[(0, 1)], &[], &[(1, 1)], &[(1, 10)], &[(1, 10), (2, 1)], &[(2, 26)], &[(3, 20)]];
    for (i, factors) in expected.iter().enumerate() {
        let got = f.polynomial(i as i32);
        check(got == ZetaFactorization::from_pairs(factors.iter().copied()), format!("P_{i} = {got}"))?;
    }
    check(f.degree_range() == Some((0, 6)), "Frobenius degrees outside 0..6")?;
    Ok(format!("P = {affine}; P* = {pstar}; Z = {z}"))
}

fn counting_oracle(c: &mut Cache) -> Outcome {
    let mut checked = 0;
    for name in c.names() {
        let n = c.arrangement(&name).ambient().n();
        if n > 4 && !name.starts_with("a63") {
            continue;
        }
        for q in c.fields(&name) {
            let l = c.field_lattice(&name, q).clone();
            let p = if l.is_projective() { reduced_char_poly(&l) } else { char_poly(&l) }.map_err(|e| e.to_string())?;
            let table = c.counts(&name, q).clone();
            for row in table.rows.iter().filter(|r| r.s <= 2) {
                let qs = BigInt::from(q).pow(row.s as u32);
                let predicted = p.eval(&qs);
                check(
                    predicted == BigInt::from(row.complement),
                    format!("{name} q={q} s={}: P(q^s) = {predicted}, counted {}", row.s, row.complement),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (arrangement, q, s) cases"))
}

fn zeta_round_trip(c: &mut Cache) -> Outcome {
    let mut checked = 0;
    for name in c.names() {
        for q in c.fields(&name) {
            let l = c.field_lattice(&name, q).clone();
            let table = c.counts(&name, q).clone();
            let order = table.rows.len();
            let zetas = if l.is_projective() {
                let pstar = reduced_char_poly(&l).map_err(|e| e.to_string())?;
                vec![
                    (CountMode::Union, zeta_projective_union(&pstar, l.max_dim())),
                    (CountMode::Complement, subarr::enumerative::zeta_projective_complement(&pstar)),
                ]
            } else {
                let p = char_poly(&l).map_err(|e| e.to_string())?;
                vec![
                    (CountMode::Union, subarr::enumerative::zeta_affine_union(&p)),
                    (CountMode::Complement, subarr::enumerative::zeta_affine_complement(&p)),
                ]
            };
            for (mode, z) in zetas {
                let counts: Vec<BigInt> = table.counts(mode).into_iter().map(BigInt::from).collect();
                let from_counts = series_exp_of_counts(&counts, order);
                let from_z = series_expand_factorization(&z, q, order);
                check(
                    from_counts.coeffs() == from_z.coeffs(),
                    format!("{name} q={q} {mode}: series differ through t^{order}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} series compared"))
}

/// `Σ(-1)^i Σ_j m_{i,j} q^{js}` straight from the multiplicities.
fn lefschetz_trace(f: &FrobeniusProfile, q: u64, s: usize) -> BigInt {
    let mut total = BigInt::from(0);
    for (&i, row) in f.entries() {
        for (&j, &m) in row {
            let term = BigInt::from(m) * BigInt::from(q).pow((j * s) as u32);
            total += if i % 2 == 0 { term } else { -term };
        }
    }
    total
}

fn lefschetz_traces(c: &mut Cache) -> Outcome {
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    for name in c.names() {
        for q in c.fields(&name) {
            let l = c.field_lattice(&name, q).clone();
            let table = c.counts(&name, q).clone();
            let mut profiles = Vec::new();
            if l.is_projective() {
                let b = beta_triangle(&l).map_err(|e| e.to_string())?;
                profiles.push(frobenius_projective_union(&b, l.ambient_dim()));
                let (compact, ordinary) =
                    frobenius_projective_complement(&truncation_betti(&l).map_err(|e| e.to_string())?);
                check(ordinary.poincare_dual() == compact, format!("{name}: ordinary profile is not the dual"))?;
                profiles.push(compact);
            } else {
                let t = local_beta_table(&l).map_err(|e| e.to_string())?;
                profiles.push(frobenius_affine_complement(&t, l.ambient_dim()));
                if l.is_central() {
                    profiles.push(frobenius_central_punctured(&l).map_err(|e| e.to_string())?);
                }
            }
            for f in &profiles {
                for row in table.rows.iter().filter(|r| r.s <= 2) {
                    let trace = lefschetz_trace(f, q, row.s);
                    let (label, ok) = match f.kind() {
                        ProfileKind::ProjectiveUnion => ("projective union", trace == BigInt::from(row.union)),
                        ProfileKind::AffineComplement => ("affine complement", trace == BigInt::from(row.complement)),
                        ProfileKind::CentralPunctured => ("central punctured", -&trace == BigInt::from(row.union)),
                        ProfileKind::ProjectiveComplement => {
                            ("projective complement", trace == BigInt::from(row.complement))
                        }
                        ProfileKind::ProjectiveComplementOrdinary => unreachable!(),
                    };
                    check(ok, format!("{name} q={q} s={} {label}: trace {trace}, counts {:?}", row.s, row))?;
                    *seen.entry(label).or_default() += 1;
                }
            }
        }
    }
    check(seen.len() == 4, format!("only {} profile kinds exercised", seen.len()))?;
    let mut parts: Vec<String> = seen.iter().map(|(k, v)| format!("{k} {v}")).collect();
    parts.sort();
    Ok(parts.join(", "))
}

fn halls_theorem(c: &mut Cache) -> Outcome {
    let mut intervals = 0;
    for name in c.names() {
        let l = c.lattice(&name).clone();
        let mu = l.mobius();
        for x in 0..l.len() {
            for y in 0..l.len() {
                if !l.less(x, y) {
                    continue;
                }
                let chi = euler_from_faces(&l.open_interval(x, y));
                check(mu.get(x, y) == chi, format!("{name}: mu({x}, {y}) = {} but reduced Euler {chi}", mu.get(x, y)))?;
                intervals += 1;
            }
        }
    }
    Ok(format!("{intervals} intervals"))
}

fn truncation_euler(c: &mut Cache) -> Outcome {
    let mut lattices = 0;
    let mut pairs = 0;
    for name in c.names() {
        let a = c.arrangement(&name).clone();
        let projective = if a.ambient().is_projective() {
            Some((None, a))
        } else if a.is_central() {
            Some((Some(name.clone()), projectivize(&a).map_err(|e| e.to_string())?))
        } else {
            None
        };
        let Some((central, proj)) = projective else { continue };
        let lp = build_lattice(&proj);
        let pstar = reduced_char_poly(&lp).map_err(|e| e.to_string())?;
        for j in 0..=lp.ambient_dim() {
            let chi = euler_from_faces(&lp.truncation(j as i64));
            check(
                pstar.coeff(j) == BigInt::from(-chi),
                format!("{name}: c_{j} = {} but -chi = {}", pstar.coeff(j), -chi),
            )?;
        }
        lattices += 1;
        if let Some(central) = central {
            let p = char_poly(c.lattice(&central)).map_err(|e| e.to_string())?;
            let shifted = &poly(&[-1, 1]) * &pstar;
            check(shifted == p, format!("{central}: (t-1)P* = {shifted} but P = {p}"))?;
            pairs += 1;
        }
    }
    for (central, proj) in [("a63", "a63-proj"), ("a42", "a42-proj"), ("boolean-3", "boolean-3-proj")] {
        let p = char_poly(c.lattice(central)).map_err(|e| e.to_string())?;
        let pstar = reduced_char_poly(c.lattice(proj)).map_err(|e| e.to_string())?;
        check(&poly(&[-1, 1]) * &pstar == p, format!("{central}/{proj}: (t-1)P* != P"))?;
    }
    Ok(format!("{lattices} projective lattices, {pairs} central/projective pairs"))
}

/// Exact rank of an integer matrix over Q (`p = None`) or over F_p.
fn exact_rank(rows: &[Vec<i64>], p: Option<i64>) -> usize {
    let mut m: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&v| p.map_or(v as i128, |p| v.rem_euclid(p) as i128)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[rank][col], m[r][col]);
            let pivot_row = m[rank].clone();
            for (v, &w) in m[r].iter_mut().zip(&pivot_row) {
                let next = a * *v - b * w;
                *v = match p {
                    Some(p) => next.rem_euclid(p as i128),
                    None => next,
                };
            }
            if p.is_none() {
                let g = m[r].iter().fold(0i128, |g, &v| num_integer::gcd(g, v));
                if g > 1 {
                    m[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn bad_primes(c: &mut Cache) -> Outcome {
    let mut notes = Vec::new();
    for (name, p, expect_good) in
        [("d43", 2, false), ("b43", 2, false), ("a53", 2, true), ("a53", 3, true), ("a53", 5, true)]
    {
        let a = c.arrangement(name).clone();
        let res = good_prime(&a, p, DEFAULT_SUBSET_CAP).map_err(|e| e.to_string())?;
        check(res.good == expect_good, format!("{name} p={p}: good = {}", res.good))?;
        match (&res.witness, expect_good) {
            (None, true) => notes.push(format!("{name} good at {p}")),
            (Some(w), false) => {
                let forms: Vec<&LinearForm> = w.iter().flat_map(|&i| a.subspaces()[i].iter()).collect();
                let full: Vec<Vec<i64>> = forms.iter().map(|f| f.to_row()).collect();
                let linear: Vec<Vec<i64>> = forms.iter().map(|f| f.coeffs.clone()).collect();
                let ours = [
                    (exact_rank(&full, None), exact_rank(&full, Some(p as i64))),
                    (exact_rank(&linear, None), exact_rank(&linear, Some(p as i64))),
                ];
                check(
                    ours == form_ranks(&forms, a.ambient().n(), p),
                    format!("{name}: rank routines disagree on {w:?}"),
                )?;
                check(ours.iter().any(|(q, r)| q != r), format!("{name}: witness {w:?} keeps its rank mod {p}"))?;
                notes.push(format!("{name} bad at {p}, witness {w:?} ranks {:?}", ours));
            }
            _ => return Err(format!("{name} p={p}: witness inconsistent with verdict")),
        }
    }
    Ok(notes.join("; "))
}

fn cm_zeta(c: &mut Cache) -> Outcome {
    let mut notes = Vec::new();
    for name in ["boolean-3-proj", "a42-proj"] {
        let l = c.lattice(name).clone();
        check(l.is_hereditary(), format!("{name} is not hereditary"))?;
        let cm = is_rationally_cm(&l);
        check(cm.cohen_macaulay, format!("{name} is not Cohen-Macaulay: {:?}", cm.failing))?;
        let d = l.max_dim().ok_or("empty arrangement")?;
        let via_cm = zeta_from_cm(&complex_betti(&beta_triangle(&l).map_err(|e| e.to_string())?), d);
        let via_poly = zeta_projective_union(&reduced_char_poly(&l).map_err(|e| e.to_string())?, Some(d));
        check(via_cm == via_poly, format!("{name}: {via_cm} vs {via_poly}"))?;
        notes.push(format!("{name}: {via_cm}"));
    }
    Ok(notes.join("; "))
}

fn mod_2_vanishing(c: &mut Cache) -> Outcome {
    let l = c.lattice("a64-proj").clone();
    let t = truncation_betti(&l).map_err(|e| e.to_string())?;
    let d = l.max_dim().ok_or("empty arrangement")?;
    let mut nonzero = Vec::new();
    for j in 0..=d {
        for (i, b) in t.get(j).nonzero() {
            check((i + j as i64 - d as i64) % 2 == 0, format!("reduced beta^(>={j})_{i} = {b} breaks the parity"))?;
            nonzero.push(format!("({i},{j})={b}"));
        }
    }
    check(check_mod_m_vanishing(&t, 2), "library check disagrees")?;
    Ok(format!("d = {d}, nonzero entries {}", nonzero.join(" ")))
}

fn sign_alternation(c: &mut Cache) -> Outcome {
    let mut hyperplane = Vec::new();
    for name in c.names() {
        let a = c.arrangement(&name).clone();
        let l = c.lattice(&name).clone();
        let is_hyperplane = l.atoms().iter().all(|&x| l.dim(x) + 1 == a.ambient().dim());
        if !(is_hyperplane || name.starts_with("a63")) {
            continue;
        }
        let p = if l.is_projective() { reduced_char_poly(&l) } else { char_poly(&l) }.map_err(|e| e.to_string())?;
        let d = l.max_dim().ok_or("empty arrangement")?;
        check(check_sign_alternation(&p, d), format!("{name}: {p} does not alternate"))?;
        if is_hyperplane {
            hyperplane.push(name);
        }
    }
    check(hyperplane.len() >= 5, "too few hyperplane arrangements in the corpus")?;
    let l = c.lattice("planar").clone();
    let p = char_poly(&l).map_err(|e| e.to_string())?;
    check(!check_sign_alternation(&p, l.max_dim().unwrap()), format!("planar {p} alternates"))?;
    Ok(format!("holds for a63, a63-proj and {} hyperplane arrangements; fails for planar ({p})", hyperplane.len()))
}

fn planar_projective(c: &mut Cache) -> Outcome {
    let a = c.arrangement("planar-proj").clone();
    let pstar = reduced_char_poly(c.lattice("planar-proj")).map_err(|e| e.to_string())?;
    check(pstar == poly(&[-2, -1, 1]), format!("P* = {pstar}"))?;
    let mut counts = Vec::new();
    for q in [2u64, 3, 5] {
        let counted = count_points(&a, q, 1, CountMode::Complement, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
        let predicted = pstar.eval(&BigInt::from(q));
        check(predicted == BigInt::from(counted), format!("q={q}: P*(q) = {predicted}, counted {counted}"))?;
        counts.push(format!("q={q}: {counted}"));
    }
    Ok(format!("P* = {pstar}; {}", counts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("A(6,3) regression", a63_regression),
        ("counting oracle equivalence", counting_oracle),
        ("zeta round trip", zeta_round_trip),
        ("Lefschetz traces", lefschetz_traces),
        ("Hall's theorem", halls_theorem),
        ("truncation Euler characteristics", truncation_euler),
        ("bad primes", bad_primes),
        ("Cohen-Macaulay zeta", cm_zeta),
        ("mod-2 vanishing for projective A(6,4)", mod_2_vanishing),
        ("sign alternation", sign_alternation),
        ("projective planar example", planar_projective),
    ];
    let mut cache = Cache::new();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut cache)))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
