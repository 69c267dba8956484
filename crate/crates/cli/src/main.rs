//! `pfister-lab`: certification, enumeration and form queries from the shell.
//!
//! Exit codes: 0 decisive answer (or certified), 2 inconclusive, unknown or a
//! rejected certificate, 3 hypothesis failure, 1 usage or parse error.

mod report;

use std::io::{Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pfister_core::certifier::{
    self, audit_certificate, audit_quotient, verify_certificate, Certificate, CertifyOptions,
    Conclusion, QuotientReport,
};
use pfister_core::involution::build_involution_algebra;
use pfister_core::quadform::{self, QuadraticForm, DEFAULT_HEIGHT};
use pfister_core::{Element, Field, TriState};

#[derive(Parser)]
#[command(
    name = "pfister-lab",
    version,
    about = "Certify non-trivial classes in G+(A,s)/H(A,s) and query quadratic forms"
)]
struct Cli {
    /// Search height for bounded searches in function-field deciders.
    #[arg(long, global = true, env = "PFISTER_LAB_HEIGHT", default_value_t = DEFAULT_HEIGHT)]
    height: u64,
    /// Emit JSON on standard output (the human report goes to standard error).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Triple {
    /// Field spec: Q, Q(t), Qp(t):p=3, Qp:p=5, Fq:q=9, Fq-tower:q=3,vars=s,t, Q-tower:vars=s,t.
    #[arg(long)]
    field: String,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the hypotheses for (a, b, c) and certify the class of c.
    Certify {
        #[command(flatten)]
        t: Triple,
        /// Replay the certificate and re-derive its verdicts by enumeration.
        #[arg(long)]
        audit: bool,
    },
    /// Valuation criterion at a place v: a, b units, v(t) odd, residue algebra non-split.
    Corollary {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Place: t-adic, 1/t, p=N, or a tower variable.
        #[arg(long)]
        v: String,
        #[arg(long)]
        audit: bool,
    },
    /// Compute G+ and H exhaustively over a field with finitely many square classes.
    Enumerate {
        #[command(flatten)]
        t: Triple,
        #[arg(long)]
        audit: bool,
    },
    /// Hilbert symbols (a, b)_v over Q.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// One place (real or p=N); all relevant places when omitted.
        #[arg(long)]
        place: Option<String>,
    },
    /// Decide isotropy of a diagonal form.
    Isotropy {
        #[arg(long)]
        field: String,
        /// Comma-separated diagonal entries.
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        form: Vec<String>,
    },
    /// Decide whether a diagonal form represents x.
    Represents {
        #[arg(long)]
        field: String,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        form: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// The family over Q_p(t): certify the class of -pt.
    Example {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        audit: bool,
    },
    /// Certify every candidate triple up to a bound; JSONL on standard output.
    Search {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        /// Worker threads (all cores when omitted).
        #[arg(long)]
        jobs: Option<usize>,
        /// Emit a record for every candidate, not only certified ones.
        #[arg(long)]
        all: bool,
    },
    /// Replay a certificate or an enumeration report (`-` reads standard input).
    Verify {
        file: String,
        #[arg(long)]
        audit: bool,
    },
}

fn parse_field(spec: &str) -> Result<Field> {
    Field::parse_spec(spec).with_context(|| format!("--field `{spec}`"))
}

fn parse_el(f: &Field, name: &str, s: &str) -> Result<Element> {
    f.parse_nonzero(s)
        .with_context(|| format!("--{name} `{s}`"))
}

fn parse_form(f: &Field, lits: &[String]) -> Result<QuadraticForm> {
    let coeffs = lits
        .iter()
        .enumerate()
        .map(|(i, s)| {
            f.parse_nonzero(s.trim())
                .with_context(|| format!("--form entry {} `{s}`", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadraticForm::new(f, coeffs)?)
}

fn conclusion_code(c: Conclusion) -> u8 {
    match c {
        Conclusion::CertifiedNontrivial => 0,
        Conclusion::Inconclusive => 2,
        Conclusion::HypothesisFailed => 3,
    }
}

fn tri_code<W>(t: &TriState<W>) -> u8 {
    if t.is_unknown() {
        2
    } else {
        0
    }
}

struct Out {
    json: bool,
}

impl Out {
    /// Human text goes to stdout, or stderr when JSON owns stdout.
    fn text(&self, s: &str) {
        if self.json {
            eprint!("{s}");
        } else {
            print!("{s}");
        }
    }

    fn json(&self, v: &str) {
        if self.json {
            println!("{v}");
        }
    }
}

fn emit_certificate(out: &Out, cert: &Certificate, audit: bool) -> Result<u8> {
    out.text(&report::certificate(cert));
    let mut code = conclusion_code(cert.conclusion);
    if audit {
        let r = audit_certificate(cert)?;
        out.text(&report::verification(&r));
        if !r.ok {
            code = code.max(2);
        }
    }
    out.json(&cert.to_json());
    Ok(code)
}

fn run(cli: Cli) -> Result<u8> {
    let out = Out { json: cli.json };
    let opts = CertifyOptions { height: cli.height };
    match cli.cmd {
        Cmd::Certify { t, audit } => {
            let f = parse_field(&t.field)?;
            let (a, b, c) = (
                parse_el(&f, "a", &t.a)?,
                parse_el(&f, "b", &t.b)?,
                parse_el(&f, "c", &t.c)?,
            );
            let cert = certifier::certify_witness_with(&a, &b, &c, &f, opts)?;
            emit_certificate(&out, &cert, audit)
        }
        Cmd::Corollary {
            field,
            a,
            b,
            t,
            v,
            audit,
        } => {
            let f = parse_field(&field)?;
            let (a, b, t) = (
                parse_el(&f, "a", &a)?,
                parse_el(&f, "b", &b)?,
                parse_el(&f, "t", &t)?,
            );
            let place = f.parse_place(&v).with_context(|| format!("--v `{v}`"))?;
            let cert = certifier::corollary_certify_with(&a, &b, &t, &place, &f, opts)?;
            emit_certificate(&out, &cert, audit)
        }
        Cmd::Enumerate { t, audit } => {
            let f = parse_field(&t.field)?;
            if !f.has_finite_square_classes() {
                bail!(
                    "enumerate needs a field with finitely many square classes, got {}",
                    f.spec()
                );
            }
            let (a, b, c) = (
                parse_el(&f, "a", &t.a)?,
                parse_el(&f, "b", &t.b)?,
                parse_el(&f, "c", &t.c)?,
            );
            let alg = build_involution_algebra(&a, &b, &c, &f)?;
            let rep = certifier::enumerate_quotient_with(&alg, opts)?;
            out.text(&report::quotient(&rep));
            let mut code = 0;
            if audit {
                let r = audit_quotient(&rep)?;
                out.text(&report::verification(&r));
                if !r.ok {
                    code = 2;
                }
            }
            out.json(&serde_json::to_string_pretty(&rep)?);
            Ok(code)
        }
        Cmd::Hilbert { a, b, place } => {
            let f = Field::rationals();
            let (ae, be) = (parse_el(&f, "a", &a)?, parse_el(&f, "b", &b)?);
            let (ar, br) = (
                f.as_rational(&ae).expect("rational"),
                f.as_rational(&be).expect("rational"),
            );
            let places = match place {
                Some(p) => vec![f
                    .parse_place(&p)
                    .with_context(|| format!("--place `{p}`"))?],
                None => quadform::hilbert::relevant_places(&[ar.clone(), br.clone()])?,
            };
            let mut rows = serde_json::Map::new();
            let mut product = 1i8;
            for v in &places {
                let s = quadform::hilbert_symbol(&ar, &br, v)?;
                product *= s;
                rows.insert(f.fmt_place(v), s.into());
            }
            let mut text = format!("({a}, {b}) over Q\n");
            for (k, v) in &rows {
                text.push_str(&format!("  {k:<8} {v:>2}\n"));
            }
            if places.len() > 1 {
                text.push_str(&format!("  product  {product:>2}\n"));
            }
            out.text(&text);
            out.json(&serde_json::to_string_pretty(
                &serde_json::json!({ "a": a, "b": b, "symbols": rows, "product": product }),
            )?);
            Ok(0)
        }
        Cmd::Isotropy { field, form } => {
            let f = parse_field(&field)?;
            let q = parse_form(&f, &form)?;
            let r = quadform::isotropy_with(&q, opts.height)?;
            out.text(&report::tri(
                &format!("{q} is isotropic over {}", f.spec()),
                &r,
            ));
            out.json(&serde_json::to_string_pretty(&r)?);
            Ok(tri_code(&r))
        }
        Cmd::Represents { field, form, x } => {
            let f = parse_field(&field)?;
            let q = parse_form(&f, &form)?;
            let xe = parse_el(&f, "x", &x)?;
            let r = quadform::represents_with(&q, &xe, opts.height)?;
            out.text(&report::tri(
                &format!("{q} represents {x} over {}", f.spec()),
                &r,
            ));
            out.json(&serde_json::to_string_pretty(&r)?);
            Ok(tri_code(&r))
        }
        Cmd::Example { p, audit } => {
            let cert = certifier::reproduce_example_qpt_with(p, opts)?;
            emit_certificate(&out, &cert, audit)
        }
        Cmd::Search {
            field,
            bound,
            jobs,
            all,
        } => {
            if bound == 0 {
                bail!("--bound must be at least 1");
            }
            let f = parse_field(&field)?;
            let rep = certifier::search(&f, bound, jobs, opts)?;
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for r in rep
                .records
                .iter()
                .filter(|r| all || r.conclusion == Some(Conclusion::CertifiedNontrivial))
            {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
            w.flush()?;
            eprint!("{}", report::search(&rep));
            Ok(0)
        }
        Cmd::Verify { file, audit } => {
            let src = if file == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&file).with_context(|| format!("reading {file}"))?
            };
            let v: serde_json::Value = serde_json::from_str(&src).context("not JSON")?;
            let r = if v.get("rows").is_some() {
                let rep: QuotientReport =
                    serde_json::from_value(v).context("enumeration report")?;
                audit_quotient(&rep)?
            } else {
                let cert: Certificate = serde_json::from_value(v).context("certificate")?;
                if audit {
                    audit_certificate(&cert)?
                } else {
                    verify_certificate(&cert)?
                }
            };
            out.text(&report::verification(&r));
            out.json(&serde_json::to_string_pretty(&r)?);
            Ok(if r.ok { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", chain(&e));
            ExitCode::from(1)
        }
    }
}

fn chain(e: &anyhow::Error) -> String {
    e.chain()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(": ")
}
