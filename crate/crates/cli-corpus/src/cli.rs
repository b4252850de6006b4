//! The `pcsp` command line.
//!
//! Exit status: 0 on success, 1 on a negative verdict (REJECT, a
//! counterexample, a violated clause), 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use exact_linalg::LinearSystem;
use exact_rings::rational::format_rational;
use exact_rings::{parse_rational, QuadRing, Rational, Scalar};
use lp_core::{ring_feasible_point, ring_maximize, InequalitySystem, RingMaximum};
use pcsp_model::{
    check_polymorphism, plant_satisfiable_instance, verify_assignment, AssignmentDoc, PolymorphismVerdict, PromiseTemplate,
    TemplateDoc, Verdict,
};
use rayon::prelude::*;
use rounding_pipelines::{affine_relaxation, basic_lp, solve, AffineSystem, Family, FamilyDoc, Outcome};
use serde_json::{json, Value as Json};

use crate::corpus;
use crate::error::CliError;
use crate::io::{compact, load_assignment, load_family, load_instance, load_template, pretty, read_json, write_file, Planted};

#[derive(Debug, Parser)]
#[command(name = "pcsp", version, about = "Relax-and-round solver for promise CSPs")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve instances; prints a Q-side assignment or REJECT.
    Solve {
        template: String,
        family: String,
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        /// Solve several instances in parallel, one output line each, in
        /// argument order.
        #[arg(long)]
        batch: bool,
    },
    /// Brute-force check that the family's arity-L member is a polymorphism.
    CheckPol {
        template: String,
        family: String,
        #[arg(long)]
        arity: usize,
    },
    /// Check an assignment (P or Q side) against an instance.
    Verify { template: String, instance: PathBuf, assignment: PathBuf },
    /// Emit a random instance together with a P-side witness.
    Gen {
        template: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write `<template>-n<n>-m<m>-s<seed>.instance.json` here instead
        /// of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Dump the exact relaxation the family would solve.
    Relax {
        template: String,
        family: String,
        instance: PathBuf,
        #[arg(long, value_enum)]
        dump: Dump,
    },
    /// Find a point of `Mx ≤ b` with coordinates in `Z[√q]`.
    Lp {
        system: PathBuf,
        /// `zsqrt:q`
        #[arg(long, default_value = "zsqrt:2")]
        ring: String,
        /// Objective coefficients, comma-separated rationals; binary search
        /// on the objective level.
        #[arg(long)]
        maximize: Option<String>,
        #[arg(long, default_value_t = 64)]
        steps: u32,
    },
    /// Print a built-in template or family as JSON.
    Show { name: String },
    /// List the built-in corpus.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dump {
    /// Basic LP, as an inequality system over Q
    Lp,
    /// affine relaxation, over Z/M or Z^b/J
    Le,
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(args.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut text = String::new();
    let code = match cmd {
        Cmd::Solve { template, family, instances, batch } => solve_cmd(&template, &family, &instances, batch, &mut text)?,
        Cmd::CheckPol { template, family, arity } => check_pol(&template, &family, arity, &mut text)?,
        Cmd::Verify { template, instance, assignment } => {
            let tmpl = load_template(&template)?;
            let inst = load_instance(&instance, &tmpl)?;
            let asg = load_assignment(&assignment, &tmpl)?;
            match verify_assignment(&tmpl, &inst, &asg)? {
                Verdict::Satisfied => {
                    text.push_str("SATISFIED\n");
                    0
                }
                Verdict::Violated { clause } => {
                    let name = &tmpl.constraint(inst.clauses()[clause].constraint).name;
                    text.push_str(&format!("VIOLATED: clause {} ({name})\n", clause + 1));
                    1
                }
            }
        }
        Cmd::Gen { template, n, m, seed, out_dir } => {
            let tmpl = load_template(&template)?;
            let (inst, witness) = plant_satisfiable_instance(&tmpl, n, m, seed)?;
            let doc = pretty(&Planted { instance: inst.to_doc(&tmpl), witness: witness.to_doc(&tmpl) });
            match out_dir {
                Some(dir) => {
                    let stem = Path::new(&template).file_stem().map_or(template.clone(), |s| s.to_string_lossy().into_owned());
                    let stem = stem.trim_end_matches(".template").to_string();
                    let path = dir.join(format!("{stem}-n{n}-m{m}-s{seed}.instance.json"));
                    write_file(&path, &doc)?;
                    text.push_str(&format!("{}\n", path.display()));
                }
                None => text.push_str(&doc),
            }
            0
        }
        Cmd::Relax { template, family, instance, dump } => {
            let tmpl = load_template(&template)?;
            let fam = load_family(&family)?;
            let inst = load_instance(&instance, &tmpl)?;
            let doc = match dump {
                Dump::Lp => match basic_lp(&tmpl, &inst, &fam)? {
                    Some(lp) => serde_json::to_value(&lp.system).expect("systems serialize"),
                    None => return Err(CliError::Usage(format!("a {} family has no Basic LP", fam.kind()))),
                },
                Dump::Le => match affine_relaxation(&tmpl, &inst, &fam)? {
                    Some(system) => affine_json(&system),
                    None => return Err(CliError::Usage(format!("a {} family has no affine relaxation", fam.kind()))),
                },
            };
            text.push_str(&pretty(&doc));
            0
        }
        Cmd::Lp { system, ring, maximize, steps } => lp_cmd(&system, &ring, maximize.as_deref(), steps, &mut text)?,
        Cmd::Show { name } => {
            if let Some(t) = corpus::template(&name) {
                text.push_str(&pretty(&TemplateDoc::from(&t)));
            } else if let Some(f) = corpus::family(&name) {
                text.push_str(&pretty(&FamilyDoc::from(&f)));
            } else {
                return Err(CliError::Usage(format!("no built-in template or family named {name:?}")));
            }
            0
        }
        Cmd::List => {
            let entries = corpus::entries().map_err(|e| CliError::Usage(e.to_string()))?;
            for e in entries {
                let mark = if e.sound { "" } else { "  [unsound]" };
                text.push_str(&format!("{:<18} {:<16} {}{mark}\n", e.template, e.family, e.notes));
            }
            0
        }
    };
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    Ok(code)
}

fn solve_one(tmpl: &PromiseTemplate, fam: &Family, path: &Path) -> Result<(i32, Option<AssignmentDoc>, String), CliError> {
    let inst = load_instance(path, tmpl)?;
    Ok(match solve(tmpl, &inst, fam)? {
        Outcome::Solved(s) => (0, Some(s.assignment.to_doc(tmpl)), String::new()),
        Outcome::Rejected(r) => (1, None, format!("REJECT: {r}")),
    })
}

fn solve_cmd(template: &str, family: &str, instances: &[PathBuf], batch: bool, text: &mut String) -> Result<i32, CliError> {
    let tmpl = load_template(template)?;
    let fam = load_family(family)?;
    fam.check_template(&tmpl)?;
    if !batch {
        let [path] = instances else {
            return Err(CliError::Usage("several instances need --batch".into()));
        };
        let (code, asg, reject) = solve_one(&tmpl, &fam, path)?;
        match asg {
            Some(a) => text.push_str(&pretty(&a)),
            None => text.push_str(&format!("{reject}\n")),
        }
        return Ok(code);
    }
    let results: Vec<_> = instances.par_iter().map(|p| solve_one(&tmpl, &fam, p)).collect();
    let mut worst = 0;
    for r in results {
        let (code, line) = match r {
            Ok((code, Some(a), _)) => (code, compact(&a)),
            Ok((code, None, reject)) => (code, reject),
            Err(e) => (2, format!("ERROR: {e}")),
        };
        worst = worst.max(code);
        text.push_str(&line);
        text.push('\n');
    }
    Ok(worst)
}

fn check_pol(template: &str, family: &str, arity: usize, text: &mut String) -> Result<i32, CliError> {
    let tmpl = load_template(template)?;
    let fam = load_family(family)?;
    fam.check_template(&tmpl)?;
    let arities = fam.arities();
    if !arities.contains(arity as u64) {
        let res: Vec<String> = arities.residues.iter().map(u64::to_string).collect();
        text.push_str(&format!(
            "note: L = {arity} is outside the family's arities (L mod {} in {{{}}})\n",
            arities.modulus,
            res.join(", ")
        ));
    }
    let f = match fam.member(arity) {
        Ok(f) => f,
        Err(e @ rounding_pipelines::PipelineError::PartitionUndefined(_)) => {
            text.push_str(&format!("UNDEFINED: {e}\n"));
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    Ok(match check_polymorphism(&tmpl, &f, &fam.blocks(arity))? {
        PolymorphismVerdict::Verified => {
            text.push_str("VERIFIED\n");
            0
        }
        PolymorphismVerdict::Counterexample { constraint, rows, output } => {
            let dom = tmpl.domain();
            let c = tmpl.constraint(constraint);
            let doc = json!({
                "constraint": c.name,
                "rows": rows.iter().map(|r| r.iter().map(|&v| dom.d_labels()[v].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "output": output.iter().map(|&v| dom.e_labels()[v].clone()).collect::<Vec<_>>(),
            });
            text.push_str("COUNTEREXAMPLE\n");
            text.push_str(&pretty(&doc));
            1
        }
    })
}

fn parse_ring(s: &str) -> Result<QuadRing, CliError> {
    let q = s
        .strip_prefix("zsqrt:")
        .and_then(|q| q.parse::<u64>().ok())
        .ok_or_else(|| CliError::Usage(format!("ring must be zsqrt:<q>, got {s:?}")))?;
    Ok(QuadRing::new(q)?)
}

fn lp_cmd(path: &Path, ring: &str, maximize: Option<&str>, steps: u32, text: &mut String) -> Result<i32, CliError> {
    let sys: InequalitySystem = read_json(path)?;
    let ring = parse_ring(ring)?;
    let strings = |p: &[exact_rings::QuadElem]| p.iter().map(ToString::to_string).collect::<Vec<_>>();
    let ring_name = format!("Z[√{}]", ring.q());
    let Some(obj) = maximize else {
        return Ok(match ring_feasible_point(&sys, &ring) {
            Ok(p) => {
                text.push_str(&pretty(&json!({ "ring": ring_name, "point": strings(&p.point) })));
                0
            }
            Err(r) => {
                text.push_str(&format!("REJECT: {r}\n"));
                1
            }
        });
    };
    let c: Vec<Rational> = obj.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    if c.len() != sys.cols() {
        return Err(CliError::Usage(format!("objective has {} coefficients, system has {} columns", c.len(), sys.cols())));
    }
    Ok(match ring_maximize(&sys, &c, &ring, steps) {
        Ok(RingMaximum::Unbounded) => {
            text.push_str("UNBOUNDED\n");
            0
        }
        Ok(RingMaximum::Found { point, value, supremum }) => {
            let doc = json!({
                "ring": ring_name,
                "point": strings(&point.point),
                "value": value.to_string(),
                "supremum": format_rational(&supremum),
            });
            text.push_str(&pretty(&doc));
            0
        }
        Err(r) => {
            text.push_str(&format!("REJECT: {r}\n"));
            1
        }
    })
}

fn affine_json(system: &AffineSystem) -> Json {
    fn body<T: Scalar>(sys: &LinearSystem<T>, entry: impl Fn(&T) -> Json) -> (Json, Json, Json) {
        let matrix = sys.matrix().iter().map(|r| Json::Array(r.iter().map(&entry).collect())).collect();
        let rhs = sys.rhs().iter().map(&entry).collect();
        (Json::Array(matrix), Json::Array(rhs), json!(sys.domains()))
    }
    match system {
        AffineSystem::Modular { relaxation, zero } => {
            let (matrix, rhs, domains) = body(&relaxation.system, |x| json!(x.value()));
            json!({
                "ring": { "modulus": zero.modulus() },
                "cols": relaxation.system.cols(),
                "domains": domains,
                "matrix": matrix,
                "rhs": rhs,
            })
        }
        AffineSystem::Lattice { relaxation, zero } => {
            let vector = |x: &exact_rings::LatticeQuotientElem| json!(x.vector().iter().map(ToString::to_string).collect::<Vec<_>>());
            let (matrix, rhs, domains) = body(&relaxation.system, vector);
            json!({
                "ring": { "lattice": zero.lattice().as_ref() },
                "cols": relaxation.system.cols(),
                "domains": domains,
                "matrix": matrix,
                "rhs": rhs,
            })
        }
    }
}
