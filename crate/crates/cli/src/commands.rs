use std::fmt::Write;
use std::path::Path;

use laddermod::algebra::Field;
use laddermod::coarse::{coarse_decompose, refine_morphism, CoarseVariant};
use laddermod::ladder::{
    check_nestedness_precondition, decompose, DecomposeError, LadderDecomposition,
};
use laddermod::matching::{bl_matching, induced_matching, matching_cost, PartialMatching};
use laddermod::morphism::{triangle_report, LadderModule};
use laddermod::persistence::{nestedness, reduce_to_barcode_basis, Barcode, PersistenceModule};

use crate::diagram::{svg_diagram, text_diagram};
use crate::format::{parse_module, parse_morphism, MorphismFile, MORPHISM_HEADER};
use crate::{Cli, CliError, Command, Method};

/// Whether the command reached its goal. Exit codes: 0 for success, 2 for
/// an algorithmic failure; input errors are `Err` and exit with 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub status: Status,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Success => 0,
            Status::Failure => 2,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let field = cli.field;
    match &cli.command {
        Command::Barcode { input, text, svg } => barcode(input, field, *text, svg.as_deref()),
        Command::Decompose {
            input,
            delta,
            inverse,
            q,
            variant,
            refine,
        } => {
            let f = load_morphism(input, field)?;
            let inv = load_inverse(&f, inverse.as_deref(), field)?;
            decompose_cmd(&f, inv, *delta, *q, *variant, *refine)
        }
        Command::Match {
            inputs,
            method,
            compare,
        } => {
            let files = inputs
                .iter()
                .map(|p| Ok((p.display().to_string(), load_morphism(p, field)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            match_cmd(&files, *method, *compare)
        }
        Command::Verify {
            input,
            delta,
            scan_delta_max,
            inverse,
        } => {
            let f = load_morphism(input, field)?;
            let inv = load_inverse(&f, inverse.as_deref(), field)?;
            verify_cmd(&f, inv, *delta, *scan_delta_max)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_morphism(path: &Path, field: Option<Field>) -> Result<MorphismFile, CliError> {
    parse_morphism(&read(path)?, field).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_module(path: &Path, field: Option<Field>) -> Result<PersistenceModule, CliError> {
    parse_module(&read(path)?, field).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

/// The inverse from `--inverse` (forward part of that file) or from the
/// file's own inverse section.
fn load_inverse(
    f: &MorphismFile,
    path: Option<&Path>,
    field: Option<Field>,
) -> Result<Option<(i64, LadderModule)>, CliError> {
    let Some(p) = path else {
        return Ok(f.inverse.clone());
    };
    let g = load_morphism(p, field.or(Some(f.field)))?;
    if g.domain != f.codomain || g.codomain != f.domain {
        return Err(CliError::Usage(format!(
            "{}: inverse must map the codomain back to the domain",
            p.display()
        )));
    }
    Ok(Some((g.forward_shift, g.forward)))
}

fn barcode_of(m: &PersistenceModule) -> Barcode {
    reduce_to_barcode_basis(m).barcode().clone()
}

fn barcode(
    input: &Path,
    field: Option<Field>,
    text: bool,
    svg: Option<&Path>,
) -> Result<Report, CliError> {
    let raw = read(input)?;
    let modules: Vec<(&str, PersistenceModule)> = if raw.trim_start().starts_with(MORPHISM_HEADER) {
        let f = load_morphism(input, field)?;
        vec![("domain", f.domain), ("codomain", f.codomain)]
    } else {
        vec![("module", load_module(input, field)?)]
    };
    let mut out = String::new();
    for (name, m) in &modules {
        let b = barcode_of(m);
        if modules.len() > 1 {
            writeln!(out, "{name}: {b}").unwrap();
        } else {
            writeln!(out, "{b}").unwrap();
        }
        if text {
            out.push_str(&text_diagram(&b));
        }
        if let Some(path) = svg {
            let target = if modules.len() > 1 {
                path.with_extension(format!("{name}.svg"))
            } else {
                path.to_path_buf()
            };
            std::fs::write(
                &target,
                svg_diagram(&b, &format!("{} {name}", input.display())),
            )
            .map_err(|source| CliError::Io {
                path: target.display().to_string(),
                source,
            })?;
        }
    }
    Ok(Report {
        text: out,
        status: Status::Success,
    })
}

/// `Ψ: W -> V(b)` as a candidate δ-inverse of `Φ: V -> W(a)`:
/// `[2δ - a - b] ∘ Ψ(a): W(a) -> V(2δ)`. `None` when `a + b > 2δ`.
fn inverse_at(f: &MorphismFile, inverse: &(i64, LadderModule), delta: i64) -> Option<LadderModule> {
    let (b, psi) = inverse;
    let a = f.forward_shift;
    let pad = 2 * delta - a - b;
    if pad < 0 {
        return None;
    }
    let shifted = psi.shift(a);
    let inner = LadderModule::inner_morphism(shifted.cod(), pad);
    Some(
        inner
            .compose(&shifted)
            .expect("inner morphism starts at the inverse codomain"),
    )
}

fn certification_lines(
    out: &mut String,
    f: &MorphismFile,
    inverse: &(i64, LadderModule),
    delta: i64,
) -> Result<bool, CliError> {
    let Some(psi) = inverse_at(f, inverse, delta) else {
        writeln!(
            out,
            "delta {delta}: not certified (shifts of the pair total {}, more than 2*delta = {})",
            f.forward_shift + inverse.0,
            2 * delta
        )
        .unwrap();
        return Ok(false);
    };
    let r = triangle_report(&f.forward, &psi, delta)?;
    let verdict = if r.holds() {
        "certified"
    } else {
        "not certified"
    };
    writeln!(out, "delta {delta}: {verdict}").unwrap();
    let family = |first: Option<i64>| {
        first.map_or("ok".to_string(), |t| format!("fails first at index {t}"))
    };
    writeln!(
        out,
        "  domain triangles psi*phi = [2*delta]: {}",
        family(r.domain)
    )
    .unwrap();
    writeln!(
        out,
        "  codomain triangles phi*psi = [2*delta]: {}",
        family(r.codomain)
    )
    .unwrap();
    Ok(r.holds())
}

fn verify_cmd(
    f: &MorphismFile,
    inverse: Option<(i64, LadderModule)>,
    delta: Option<i64>,
    scan: Option<i64>,
) -> Result<Report, CliError> {
    let inverse =
        inverse.ok_or_else(|| CliError::Usage("verify needs a candidate inverse".into()))?;
    let mut out = String::new();
    let mut ok = true;
    let delta = delta.or(if scan.is_none() { f.delta } else { None });
    if delta.is_none() && scan.is_none() {
        return Err(CliError::Usage(
            "give --delta, --scan-delta-max or a `delta` line".into(),
        ));
    }
    if let Some(d) = delta {
        if d < 0 {
            return Err(CliError::Usage("delta must be non-negative".into()));
        }
        ok &= certification_lines(&mut out, f, &inverse, d)?;
    }
    if let Some(n) = scan {
        let found = (0..=n).find(|&d| {
            inverse_at(f, &inverse, d)
                .and_then(|psi| triangle_report(&f.forward, &psi, d).ok())
                .is_some_and(|r| r.holds())
        });
        match found {
            Some(d) => writeln!(out, "smallest certified delta: {d}").unwrap(),
            None => {
                ok = false;
                writeln!(out, "no delta <= {n} certifies this pair").unwrap();
            }
        }
    }
    Ok(Report {
        text: out,
        status: if ok { Status::Success } else { Status::Failure },
    })
}

fn summary_line(
    out: &mut String,
    d: &Result<LadderDecomposition, DecomposeError>,
) -> Result<bool, CliError> {
    match d {
        Ok(d) => {
            writeln!(out, "decomposition: {d}").unwrap();
            Ok(true)
        }
        Err(DecomposeError::Reduction(f)) => {
            writeln!(out, "reduction failed: {f}").unwrap();
            Ok(false)
        }
        Err(DecomposeError::Invalid(e)) => Err(CliError::Morphism(e.clone())),
    }
}

fn decompose_cmd(
    f: &MorphismFile,
    inverse: Option<(i64, LadderModule)>,
    delta_flag: Option<i64>,
    q: Option<i64>,
    variant: CoarseVariant,
    refine: bool,
) -> Result<Report, CliError> {
    let phi = &f.forward;
    let mut out = String::new();
    let (bv, bw) = (barcode_of(phi.dom()), barcode_of(phi.cod()));
    writeln!(out, "domain: {bv}").unwrap();
    writeln!(out, "codomain: {bw}").unwrap();
    writeln!(
        out,
        "nestedness: domain {}, codomain {}",
        nestedness(&bv),
        nestedness(&bw)
    )
    .unwrap();
    if delta_flag.is_some_and(|d| d < 0) {
        return Err(CliError::Usage("delta must be non-negative".into()));
    }
    let delta = delta_flag.or(f.delta);
    let mut ok = true;
    if let Some(d) = delta {
        let check = check_nestedness_precondition(phi, d);
        let status = if check.holds() {
            "holds"
        } else {
            "fails (decomposition not guaranteed)"
        };
        writeln!(
            out,
            "precondition 2*delta < min nestedness: {status} for delta {d}"
        )
        .unwrap();
        match &inverse {
            Some(inv) => ok &= certification_lines(&mut out, f, inv, d)?,
            None if delta_flag.is_some() => {
                return Err(CliError::Usage("--delta needs a candidate inverse".into()));
            }
            None => writeln!(out, "delta {d}: no inverse given, pair not certified").unwrap(),
        }
    }
    if let Some(q) = q {
        let (Some(d), Some(inv)) = (delta, &inverse) else {
            return Err(CliError::Usage(
                "--q needs a delta and a candidate inverse".into(),
            ));
        };
        let psi = inverse_at(f, inv, d)
            .ok_or_else(|| CliError::Usage(format!("the pair cannot be certified at delta {d}")))?;
        let (phi, psi, d, q) = if refine {
            writeln!(
                out,
                "grid refined: delta {} and q {} become {} and {}",
                d,
                q,
                2 * d,
                2 * q
            )
            .unwrap();
            (refine_morphism(phi), refine_morphism(&psi), 2 * d, 2 * q)
        } else {
            (phi.clone(), psi, d, q)
        };
        let c = coarse_decompose(&phi, &psi, d, q, variant)?;
        writeln!(
            out,
            "coarse variant {variant}, q {q}: induced delta {}",
            c.induced.delta
        )
        .unwrap();
        let status = if c.precondition.holds() {
            "holds"
        } else {
            "fails (decomposition not guaranteed)"
        };
        writeln!(
            out,
            "coarse precondition: {status} (nestedness domain {}, codomain {})",
            c.precondition.dom, c.precondition.cod
        )
        .unwrap();
        ok &= summary_line(&mut out, &c.result)?;
        if let Some(m) = c.matching() {
            write_matching(&mut out, "coarse matching", &m);
        }
    } else {
        ok &= summary_line(&mut out, &decompose(phi))?;
    }
    Ok(Report {
        text: out,
        status: if ok { Status::Success } else { Status::Failure },
    })
}

fn write_matching(out: &mut String, label: &str, m: &PartialMatching) {
    writeln!(out, "{label}: {m}").unwrap();
    writeln!(out, "  unmatched domain: {}", m.unmatched_source).unwrap();
    writeln!(out, "  unmatched codomain: {}", m.unmatched_target).unwrap();
    writeln!(out, "  cost: {}", matching_cost(m)).unwrap();
}

fn ladder_matching(
    phi: &LadderModule,
    shift: i64,
) -> Result<Result<PartialMatching, String>, CliError> {
    match decompose(phi) {
        Ok(d) => Ok(Ok(induced_matching(&d, shift))),
        Err(DecomposeError::Reduction(f)) => Ok(Err(f.to_string())),
        Err(DecomposeError::Invalid(e)) => Err(CliError::Morphism(e)),
    }
}

fn match_cmd(
    files: &[(String, MorphismFile)],
    method: Method,
    compare: bool,
) -> Result<Report, CliError> {
    let mut out = String::new();
    let mut ok = true;
    let mut ladder_all = Vec::new();
    let mut bl_all = Vec::new();
    for (name, f) in files {
        if files.len() > 1 {
            writeln!(out, "== {name}").unwrap();
        }
        let mut parts = vec![("forward", f.forward_shift, &f.forward)];
        if let Some((s, psi)) = &f.inverse {
            parts.push(("inverse", *s, psi));
        }
        for (label, shift, m) in parts {
            if compare || method == Method::Ladder {
                match ladder_matching(m, shift)? {
                    Ok(chi) => {
                        write_matching(&mut out, &format!("ladder matching ({label})"), &chi);
                        if label == "forward" {
                            ladder_all.push(chi);
                        }
                    }
                    Err(reason) => {
                        ok = false;
                        writeln!(out, "ladder matching ({label}): reduction failed: {reason}")
                            .unwrap();
                    }
                }
            }
            if compare || method == Method::Bl {
                let chi = bl_matching(m, shift);
                write_matching(&mut out, &format!("bl matching ({label})"), &chi);
                if label == "forward" {
                    bl_all.push(chi);
                }
            }
        }
    }
    if compare && files.len() > 1 {
        let same = |v: &[PartialMatching]| v.windows(2).all(|w| w[0] == w[1]);
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            out,
            "bl matchings identical across inputs: {}",
            yes(same(&bl_all))
        )
        .unwrap();
        if ladder_all.len() == files.len() {
            writeln!(
                out,
                "ladder matchings identical across inputs: {}",
                yes(same(&ladder_all))
            )
            .unwrap();
        }
    }
    Ok(Report {
        text: out,
        status: if ok { Status::Success } else { Status::Failure },
    })
}
