use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use posetcode_core::poset::{mask_elements, mask_from_elements};
use posetcode_core::selftest::{run_selftest, SelftestConfig, SelftestReport};
use posetcode_core::{
    classify, distribution, duality_partition, full_hierarchy, ClassReport, Code, DistMethod, Error, Method, Poset,
    Profile, WeightHierarchy,
};

/// Generalized poset weights, duality and weight distributions of linear codes.
#[derive(Parser)]
#[command(name = "posetcode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized minimum poset weights d_1..d_k.
    Hierarchy {
        #[command(flatten)]
        input: Input,
        /// theorem2 or bruteforce
        #[arg(long, default_value = "theorem2")]
        method: Method,
    },
    /// Partition of [n] by the hierarchies of C and its dual under the dual poset.
    Duality {
        #[command(flatten)]
        input: Input,
        /// theorem2 or bruteforce
        #[arg(long, default_value = "theorem2")]
        method: Method,
    },
    /// Poset weight distribution A_0..A_n.
    Distribution {
        #[command(flatten)]
        input: Input,
        /// enumerate, moebius or closed-form
        #[arg(long, default_value = "enumerate")]
        method: DistMethod,
    },
    /// MDS / NMDS / other, with d_1 and d_2.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Ranks of a coordinate set in the code matroid and its dual (JSON).
    Rank {
        #[arg(long)]
        code: PathBuf,
        /// Comma-separated 1-indexed coordinates, e.g. 1,3,5 (empty for the empty set).
        #[arg(long)]
        set: String,
    },
    /// Cross-check every formula against brute force on random instances.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        json: bool,
        /// Falsify one rank value per instance (negative control).
        #[arg(long, hide = true)]
        corrupt_rank: bool,
    },
}

#[derive(Args)]
struct Input {
    /// Code file: "q Q n N k K" followed by K generator rows.
    #[arg(long)]
    code: PathBuf,
    /// Poset file, or chain:N / antichain:N.
    #[arg(long)]
    poset: String,
    #[arg(long)]
    json: bool,
}

/// A theorem check failed; reported with exit code 2.
#[derive(Debug)]
struct TheoremFailure(String);

impl std::fmt::Display for TheoremFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for TheoremFailure {}

fn load_code(path: &Path) -> anyhow::Result<Code> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let code = Code::parse(&text).with_context(|| format!("{}", path.display()))?;
    if code.dropped_rows() > 0 {
        eprintln!(
            "warning: {}: {} dependent generator row(s) dropped, k = {}",
            path.display(),
            code.dropped_rows(),
            code.k()
        );
    }
    Ok(code)
}

fn load_poset(spec: &str) -> anyhow::Result<Poset> {
    if let Some(p) = Poset::from_preset(spec) {
        return p.with_context(|| format!("poset preset {spec}"));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("cannot read {spec}"))?;
    Poset::parse(&text).with_context(|| spec.to_string())
}

fn load(input: &Input) -> anyhow::Result<(Code, Poset)> {
    let code = load_code(&input.code)?;
    let poset = load_poset(&input.poset)?;
    if poset.n() != code.n() {
        bail!("poset size {} ≠ code length {}", poset.n(), code.n());
    }
    Ok((code, poset))
}

fn set_text(elems: &[usize]) -> String {
    let parts: Vec<String> = elems.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable") + "\n"
}

fn hierarchy_text(h: &WeightHierarchy) -> String {
    let mut s = format!("[{}, {}] code over GF({}), method {}\n", h.n, h.k, h.q, h.method.name());
    s.push_str("r\td_r\twitness\n");
    for (i, (d, w)) in h.weights.iter().zip(&h.witnesses).enumerate() {
        let witness = match w {
            posetcode_core::hierarchy::Witness::Ideal { elements } => format!("ideal {}", set_text(elements)),
            posetcode_core::hierarchy::Witness::Subcode { basis } => {
                let rows: Vec<String> = basis
                    .iter()
                    .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(""))
                    .collect();
                format!("subcode <{}>", rows.join(", "))
            }
        };
        writeln!(s, "{}\t{d}\t{witness}", i + 1).unwrap();
    }
    s
}

#[derive(Serialize)]
struct DualityOut {
    n: usize,
    k: usize,
    a: Vec<usize>,
    b: Vec<usize>,
    pass: bool,
}

#[derive(Serialize)]
struct DistributionOut<'a> {
    counts: &'a [u64],
    method: DistMethod,
    classification: String,
    d1: usize,
    d2: Option<usize>,
}

#[derive(Serialize)]
struct RankOut {
    set: Vec<usize>,
    rho: usize,
    rho_perp: usize,
    /// `(|J| - ρ⊥(J), k - ρ(J̄), dim C^J)`
    lemma1g: [i64; 3],
}

fn classify_line(c: &ClassReport) -> String {
    match c.d2 {
        Some(d2) => format!("{} d1={} d2={}", c.class, c.d1, d2),
        None => format!("{} d1={}", c.class, c.d1),
    }
}

fn selftest_text(r: &SelftestReport) -> String {
    let mut s = format!("seed {} trials {}\n", r.seed, r.trials);
    for (name, t) in &r.checks {
        writeln!(s, "{name:<26}{:>6} passed{:>6} failed", t.passed, t.failed).unwrap();
    }
    writeln!(
        s,
        "MDS instances {}, distinct NMDS instances {}, Hamming NMDS codes {}",
        r.mds_instances, r.nmds_instances, r.hamming_nmds_instances
    )
    .unwrap();
    for f in &r.failures {
        writeln!(
            s,
            "\nFAIL trial {} {}: {}\n{}",
            f.trial, f.check, f.detail, f.reproducer
        )
        .unwrap();
    }
    s
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Hierarchy { input, method } => {
            let (code, poset) = load(&input)?;
            let h = full_hierarchy(&Profile::new(&code), &poset, method)?;
            print!("{}", if input.json { to_json(&h) } else { hierarchy_text(&h) });
        }
        Command::Duality { input, method } => {
            let (code, poset) = load(&input)?;
            let mut part = duality_partition(&code, &poset, method)?;
            part.b.sort_unstable();
            let check = part.check();
            if input.json {
                print!(
                    "{}",
                    to_json(&DualityOut {
                        n: part.n,
                        k: part.k,
                        a: part.a.clone(),
                        b: part.b.clone(),
                        pass: check.is_ok(),
                    })
                );
            } else {
                println!("A: {}", set_text(&part.a));
                println!("B: {}", set_text(&part.b));
                println!("{}", if check.is_ok() { "PASS" } else { "FAIL" });
            }
            check?;
        }
        Command::Distribution { input, method } => {
            let (code, poset) = load(&input)?;
            let profile = Profile::new(&code);
            let report = distribution(&profile, &poset, method)?;
            report.check(code.size())?;
            let class = match &report.classification {
                Some(c) => c.clone(),
                None => classify(&profile, &poset)?,
            };
            if input.json {
                print!(
                    "{}",
                    to_json(&DistributionOut {
                        counts: &report.counts,
                        method,
                        classification: class.class.to_string(),
                        d1: class.d1,
                        d2: class.d2,
                    })
                );
            } else {
                println!("{} ({})", classify_line(&class), method.name());
                println!("r\tA_r");
                for (r, a) in report.counts.iter().enumerate() {
                    println!("{r}\t{a}");
                }
            }
        }
        Command::Classify { input } => {
            let (code, poset) = load(&input)?;
            let c = classify(&Profile::new(&code), &poset)?;
            if input.json {
                print!("{}", to_json(&c));
            } else {
                println!("{}", classify_line(&c));
            }
        }
        Command::Rank { code, set } => {
            let code = load_code(&code)?;
            let elems = set
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .with_context(|| format!("bad coordinate '{t}' in --set"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let mask = mask_from_elements(&elems, code.n()).context("--set")?;
            let profile = Profile::new(&code);
            let (a, b, c) = profile.lemma1g(mask);
            print!(
                "{}",
                to_json(&RankOut {
                    set: mask_elements(mask),
                    rho: profile.rho(mask),
                    rho_perp: profile.rho_perp(mask),
                    lemma1g: [a, b, c],
                })
            );
            if a != b || b != c {
                return Err(TheoremFailure(format!("shortening triple differs: {a}, {b}, {c}")).into());
            }
        }
        Command::Selftest {
            seed,
            trials,
            json,
            corrupt_rank,
        } => {
            let report = run_selftest(&SelftestConfig {
                seed,
                trials,
                corrupt_rank,
            })?;
            print!("{}", if json { to_json(&report) } else { selftest_text(&report) });
            if !report.passed() {
                return Err(TheoremFailure(format!("{} check(s) failed", report.failures.len())).into());
            }
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let theorem = err.chain().any(|e| {
        e.downcast_ref::<TheoremFailure>().is_some()
            || e.downcast_ref::<Error>().is_some_and(Error::is_theorem_violation)
    });
    if theorem {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
