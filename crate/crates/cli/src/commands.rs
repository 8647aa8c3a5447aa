use std::env;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use num_traits::{One, Signed, Zero};
use num_rational::BigRational;
use riordan::index::{self, Classification, Family, JCase, Verdict};
use riordan::quotients::{self, QuotientGroup, DEFAULT_MAX_ELEMS};
use riordan::riordan::{RiordanElem, RiordanMatrix};
use riordan::series::{CoeffRing, NottSeries, TruncSeries, UnitSeries};

use super::{input, Cmd, Output, PairOpts, QuotientOpts, SeriesOpts};

const CAP_VAR: &str = "RIORDAN_MAX_ELEMS";

fn group(q: &QuotientOpts) -> Result<QuotientGroup> {
    let cap = match env::var(CAP_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{CAP_VAR}={v} is not a number"))?,
        Err(_) => DEFAULT_MAX_ELEMS,
    };
    Ok(QuotientGroup::with_cap(q.p, q.level, cap)?)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `k=v` pairs on one line, or one aligned `k  v` per line.
fn kv(human: bool, pairs: &[(&str, String)]) -> String {
    if human {
        let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    } else {
        let fields: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        fields.join(" ") + "\n"
    }
}

fn rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `1 + 2x - x^3 + O(x^5)`.
fn pretty(s: &TruncSeries) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if !mag.is_one() || k == 0 {
            out += &mag.to_string();
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => write!(out, "x^{k}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} + O(x^{})  over {}", s.trunc() + 1, s.ring())
}

fn show_series(s: &TruncSeries, human: bool) -> String {
    if human {
        pretty(s) + "\n"
    } else {
        format!("{s}\n")
    }
}

fn show_element(e: &RiordanElem, human: bool) -> String {
    if human {
        format!("h = {}\ng = {}\n", pretty(e.h()), pretty(e.g()))
    } else {
        format!("{e}\n")
    }
}

fn show_matrix(a: &RiordanMatrix, human: bool) -> String {
    if !human {
        return a.to_csv();
    }
    let w = a.rows().iter().flatten().map(|c| c.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for (i, row) in a.rows().iter().enumerate() {
        let cells: Vec<String> = row[..=i].iter().map(|c| format!("{c:>w$}")).collect();
        out.push_str(cells.join(" ").trim_end());
        out.push('\n');
    }
    out
}

fn ok(text: String) -> Result<Output> {
    Ok(Output { text, pass: true })
}

fn pascal(ring: CoeffRing, m: usize) -> Result<RiordanElem> {
    let trunc = m.saturating_sub(1);
    let h = UnitSeries::new(TruncSeries::from_i64_padded(ring, trunc, &[1, -1]))?.inv();
    let g = NottSeries::new(TruncSeries::monomial(ring, trunc, 1, 1).mul(h.as_series())?)?;
    Ok(RiordanElem::new(h, g)?)
}

fn default_generators(group: &QuotientGroup, with_pair: bool) -> Result<Vec<RiordanElem>> {
    let n = group.level();
    let mut h = vec![0i64; n + 1];
    let mut g = vec![0i64; n + 1];
    h[..2].copy_from_slice(&[1, 1]);
    g[1] = 1;
    let mut gens = vec![RiordanElem::from_i64(group.ring(), &h, &g)?];
    if with_pair {
        let (a, b) = quotients::nottingham_generating_pair(group)?
            .context("no Nottingham generating pair at this level")?;
        gens.extend([a, b]);
    }
    Ok(gens)
}

fn pairs(p: &PairOpts) -> Result<(index::IndexSet, index::IndexSet)> {
    Ok((input::index_set(&p.i_set)?, input::index_set(&p.j_set)?))
}

pub fn run(cmd: Cmd, human: bool) -> Result<Output> {
    match cmd {
        Cmd::SeriesMul { opts, f, g } => {
            let (f, g) = series_pair(&opts, &f, &g)?;
            ok(show_series(&f.mul(&g)?, human))
        }
        Cmd::SeriesInv { opts, f } => {
            let f = UnitSeries::new(input::series(&f, opts.ring, opts.trunc)?)?;
            ok(show_series(&f.inv(), human))
        }
        Cmd::SeriesCompose { opts, f, g } => {
            let (f, g) = series_pair(&opts, &f, &g)?;
            ok(show_series(&f.compose(&g)?, human))
        }
        Cmd::SeriesCompinv { opts, g } => {
            let g = NottSeries::new(input::series(&g, opts.ring, opts.trunc)?)?;
            ok(show_series(&g.comp_inverse(), human))
        }
        Cmd::RiordanMul { opts, a, b } => {
            let a = input::element(&a, opts.ring, opts.trunc)?;
            let b = input::element(&b, opts.ring, opts.trunc)?;
            ok(show_element(&a.rmul(&b)?, human))
        }
        Cmd::RiordanInv { opts, a } => {
            let a = input::element(&a, opts.ring, opts.trunc)?;
            ok(show_element(&a.rinv(), human))
        }
        Cmd::RiordanArray { opts, a, preset, p, m } => {
            let ring = match (opts.ring, p) {
                (Some(_), Some(_)) => bail!("give either --ring or --p"),
                (Some(r), None) => Some(r),
                (None, Some(p)) => Some(CoeffRing::prime_field(p)?),
                (None, None) => None,
            };
            let elem = match (preset.as_deref(), a) {
                (Some("pascal"), _) => pascal(ring.context("--preset needs --ring or --p")?, m)?,
                (Some(other), _) => bail!("unknown preset `{other}` (known: pascal)"),
                (None, Some(a)) => input::element(&a, ring, opts.trunc.or(Some(m.saturating_sub(1))))?,
                (None, None) => unreachable!("clap requires --a or --preset"),
            };
            ok(show_matrix(&elem.to_matrix(m)?, human))
        }
        Cmd::LcsVerify { q, depth } => {
            let g = group(&q)?;
            let rows = quotients::verify_lcs_formula(&g, depth)?;
            let mut text = String::new();
            for r in &rows {
                text += &kv(
                    human,
                    &[
                        ("i", r.i.to_string()),
                        ("tau", r.tau.to_string()),
                        ("brute_order", r.brute_order.to_string()),
                        ("formula_order", r.formula_order.to_string()),
                        ("verdict", verdict(r.pass).into()),
                    ],
                );
            }
            Ok(Output { text, pass: rows.iter().all(|r| r.pass) })
        }
        Cmd::Width { q, depth } => {
            let g = group(&q)?;
            let rows = quotients::width_report(&g, depth)?;
            let mut text = String::from(if human { "" } else { "i,gamma_order,width,boundary,over_bound\n" });
            for r in &rows {
                if human {
                    let flag = if r.boundary { "  (boundary)" } else { "" };
                    writeln!(text, "i={:<3} |γ_i|={:<10} width={}{flag}", r.i, r.gamma_order, r.width)?;
                } else {
                    writeln!(text, "{},{},{},{},{}", r.i, r.gamma_order, r.width, r.boundary, r.over_bound)?;
                }
            }
            Ok(Output { text, pass: rows.iter().all(|r| r.boundary || !r.over_bound) })
        }
        Cmd::GensCheck { q, gens, no_pair } => {
            let g = group(&q)?;
            let elems = if gens.is_empty() {
                default_generators(&g, !no_pair)?
            } else {
                if no_pair {
                    bail!("--no-pair only applies to the default generators");
                }
                let trunc = Some(g.level());
                gens.iter().map(|s| input::element(s, Some(g.ring()), trunc)).collect::<Result<_>>()?
            };
            let r = quotients::generation_check(&g, &elems)?;
            let mut text = String::new();
            for e in &elems {
                let h: Vec<String> = e.h().coeffs().iter().map(|c| c.to_string()).collect();
                let gg: Vec<String> = e.g().coeffs().iter().map(|c| c.to_string()).collect();
                text += &kv(human, &[("generator", format!("{}/{}", h.join(","), gg.join(",")))]);
            }
            text += &kv(
                human,
                &[
                    ("closure_order", r.closure_order.to_string()),
                    ("group_order", r.group_order.to_string()),
                    ("generates", r.generates.to_string()),
                ],
            );
            Ok(Output { text, pass: r.generates })
        }
        Cmd::HmCheck { q, m } => {
            let r = quotients::hm_generation_check(&group(&q)?, m)?;
            let text = kv(
                human,
                &[
                    ("closure_order", r.closure_order.to_string()),
                    ("image_order", r.image_order.to_string()),
                    ("verdict", verdict(r.equal).into()),
                ],
            );
            Ok(Output { text, pass: r.equal })
        }
        Cmd::TowerCheck { q, samples, seed } => {
            let r = quotients::tower_consistency(&group(&q)?, samples, seed)?;
            let text = kv(
                human,
                &[
                    ("pairs", r.pairs_checked.to_string()),
                    ("failures", r.failures.to_string()),
                    ("exhaustive", r.exhaustive.to_string()),
                    ("surjective", r.surjective.to_string()),
                    ("verdict", verdict(r.pass()).into()),
                ],
            );
            Ok(Output { text, pass: r.pass() })
        }
        Cmd::SigmaCheck { q, filtration, i, j } => {
            let g = group(&q)?;
            let sigma = input::filtration(&filtration)?;
            let todo: Vec<(usize, usize)> = match (i, j) {
                (Some(i), Some(j)) => vec![(i, j)],
                _ => (1..g.level()).flat_map(|i| (1..g.level() - i).map(move |j| (i, j))).collect(),
            };
            let (mut text, mut pass) = (String::new(), true);
            for (i, j) in todo {
                let r = quotients::sigma_filtration_check(&g, &sigma, i, j)?;
                pass &= r.contained;
                text += &kv(
                    human,
                    &[
                        ("i", i.to_string()),
                        ("j", j.to_string()),
                        ("commutator_order", r.commutator_order.to_string()),
                        ("target_order", r.target_order.to_string()),
                        ("verdict", verdict(r.contained).into()),
                    ],
                );
            }
            Ok(Output { text, pass })
        }
        Cmd::Admissible { pair, bound, crosscheck, trunc, samples, seed } => {
            let (i, j) = pairs(&pair)?;
            let r = index::admissible_check(&i, &j, pair.p, bound)?;
            let mut fields = match &r.verdict {
                Verdict::PassUpTo(b) => vec![
                    ("verdict", "pass".to_string()),
                    ("bound", b.to_string()),
                    ("sums_checked_to", r.sumset_checked_to.to_string()),
                ],
                Verdict::Violation(w) => witness_fields(w),
            };
            let mut pass = r.passed();
            if crosscheck {
                let c = index::group_closure_crosscheck(&i, &j, pair.p, trunc, samples, seed)?;
                fields.push(("crosscheck", if c.closed() { "closed".into() } else { "escape".into() }));
                if let Some(e) = &c.escape {
                    fields.push(("escape", format!("{}:{}:x^{}", e.operation, e.part, e.degree)));
                }
                pass &= c.closed();
            }
            Ok(Output { text: kv(human, &fields), pass })
        }
        Cmd::Density { p, s, xi, max_n } => {
            let r = index::density_convergence(p, s, &input::rational(&xi)?, max_n)?;
            let mut text = r.to_csv();
            text += &kv(
                human,
                &[
                    ("limit", rat(&r.limit)),
                    ("error", format!("{:.3e}", r.final_error())),
                    ("bound", format!("{:.3e}", r.error_bound)),
                ],
            );
            Ok(Output { text, pass: r.within_bound() })
        }
        Cmd::Jxi { p, xi, check_to } => {
            let xi = input::rational(&xi)?;
            let set = index::jxi(&xi, p)?;
            let mut text = format!("{set}\n");
            let mut pass = true;
            if let Some(m) = check_to {
                let miss = index::jxi_scan_mismatch(&set, &xi, p, m)?;
                pass = miss.is_none();
                text += &kv(human, &[("scan_mismatch", miss.map_or("none".into(), |j| j.to_string()))]);
            }
            if human {
                text += &kv(true, &[("density", rat(&set.density()))]);
            }
            Ok(Output { text, pass })
        }
        Cmd::Hdim { i_set, j_set, filtration, max_n, p, bound, no_check } => {
            let (i, j) = (input::index_set(&i_set)?, input::index_set(&j_set)?);
            let sigma = input::filtration(&filtration)?;
            let r = match (no_check, p) {
                (true, _) => index::hausdorff_dim(&i, &j, &sigma, max_n)?,
                (false, Some(p)) => index::hausdorff_dim_checked(&i, &j, p, &sigma, max_n, bound)?,
                (false, None) => unreachable!("clap requires --p without --no-check"),
            };
            Ok(Output { text: r.to_csv(), pass: r.agrees().unwrap_or(true) })
        }
        Cmd::Spectrum { p, family, bound, seed } => {
            let family: Family = family.parse()?;
            let r = index::spectrum_sample(p, &family, bound, seed)?;
            let text = kv(
                human,
                &[
                    ("family", r.family.to_string()),
                    ("I", format!("[{}]", r.i_set)),
                    ("J", format!("[{}]", r.j_set)),
                    ("closed_form", rat(&r.closed_form)),
                    ("dimension", rat(&r.dimension)),
                    ("admissible", if r.admissibility.passed() { "pass".into() } else { r.admissibility.to_string() }),
                    ("crosscheck", if r.crosscheck.closed() { "closed".into() } else { "escape".into() }),
                    ("verdict", verdict(r.pass()).into()),
                ],
            );
            Ok(Output { text, pass: r.pass() })
        }
        Cmd::Classify { pair } => {
            let (i, j) = pairs(&pair)?;
            let c = index::classify_pair(&i, &j, pair.p)?;
            let mut fields = vec![("case", c.label().to_string())];
            if let Classification::Periodic { s, r, case } = &c {
                fields.extend([("s", s.to_string()), ("r", r.to_string())]);
                match case {
                    JCase::I => {}
                    JCase::II { s0, u } => fields.extend([("s0", s0.to_string()), ("u", u.to_string())]),
                    JCase::III { s0, s1, v, u, t } => fields.extend([
                        ("s0", s0.to_string()),
                        ("s1", s1.to_string()),
                        ("v", v.to_string()),
                        ("u", u.to_string()),
                        ("t", t.to_string()),
                    ]),
                }
            }
            fields.push(("density_j", rat(&j.density())));
            ok(kv(human, &fields))
        }
    }
}

fn series_pair(opts: &SeriesOpts, f: &str, g: &str) -> Result<(TruncSeries, TruncSeries)> {
    let f = input::series(f, opts.ring, opts.trunc)?;
    let g = input::series(g, opts.ring.or(Some(f.ring())), opts.trunc.or(Some(f.trunc())))?;
    Ok((f, g))
}

fn witness_fields(w: &index::Witness) -> Vec<(&'static str, String)> {
    use index::Witness::*;
    let mut v = vec![("verdict", "violation".to_string()), ("condition", w.condition().to_string())];
    match *w {
        J { j, n, j2, target } => v.extend([("j", j), ("n", n), ("j2", j2), ("target", target)].map(|(k, x)| (k, x.to_string()))),
        Sum { i, i2, target } => v.extend([("i", i), ("i2", i2), ("target", target)].map(|(k, x)| (k, x.to_string()))),
        I { i, n, j, target } => v.extend([("i", i), ("n", n), ("j", j), ("target", target)].map(|(k, x)| (k, x.to_string()))),
    }
    v
}
