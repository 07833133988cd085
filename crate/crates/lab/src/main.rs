//! Command line surface: run configured experiments, print closed-form
//! bounds, generate codes, and walk through a reconstruction demo.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use saec::codes::LinearCode;
use saec::reconstruction::{
    describe, ledger_for, random_syndrome_distinct_table, LookupCoder, LookupConfirmCoder,
    OracleEnumCoder, TracedCoder, DEFAULT_EPS,
};
use saec::seeding::derive_seed;
use saec_lab::{converse_max_rate, rand_bound, run_experiment, ExperimentConfig, LabError};

#[derive(Parser)]
#[command(name = "saec", version, about = "Additive-error channel coding lab")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Experiments and bound calculators
    Lab {
        #[command(subcommand)]
        cmd: LabCmd,
    },
    /// Linear code utilities
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Mapper reconstruction walkthrough
    Recon {
        #[command(subcommand)]
        cmd: ReconCmd,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    /// Run a `key = value` config file and print the JSON report
    Run { config: PathBuf },
    /// Print the closed-form bounds for one parameter point
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    /// Error tolerance used for the converse rate
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Sample a random code and write its text form
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; `-` prints to stdout
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReconCmd {
    /// Describe one random table with three decoder shapes and print the
    /// counting ledger for each
    Demo {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct BoundsOut {
    n: usize,
    k: usize,
    m: usize,
    eps: f64,
    rand_bound: f64,
    converse_max_rate: f64,
    rate: f64,
}

fn lab_bounds(a: &BoundsArgs) -> Result<(), LabError> {
    let out = BoundsOut {
        n: a.n,
        k: a.k,
        m: a.m,
        eps: a.eps,
        rand_bound: rand_bound(a.n, a.k, a.m)?,
        converse_max_rate: converse_max_rate(a.n, a.m, a.eps)?,
        rate: a.k as f64 / a.n as f64,
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("bounds serialize"));
    Ok(())
}

fn lab_run(path: &PathBuf) -> Result<bool, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let cfg = ExperimentConfig::from_text(&text).map_err(|e| e.to_string())?;
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    print!("{}", report.to_json());
    Ok(report.all_pass())
}

fn code_gen(n: usize, k: usize, seed: u64, out: &PathBuf) -> Result<(), String> {
    if k == 0 || k >= n || n > 64 {
        return Err(format!("need 0 < k < n <= 64, got n={n}, k={k}"));
    }
    let code = LinearCode::random(n, k, seed);
    let text = code.to_text();
    if out.as_os_str() == "-" {
        print!("{text}");
    } else {
        std::fs::write(out, &text).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
        println!("wrote [{n},{k}] code to {}", out.display());
    }
    Ok(())
}

fn recon_demo(m: usize, n: usize, k: usize, seed: u64) -> Result<(), String> {
    if m == 0 || m > 8 || k == 0 || k >= n || n > 16 || n - k < m {
        return Err(format!(
            "demo needs 0 < m <= 8, 0 < k < n <= 16 and n - k >= m; got m={m}, n={n}, k={k}"
        ));
    }
    let code = LinearCode::random(n, k, derive_seed(seed, &[0x7263_6f64]));
    let table = random_syndrome_distinct_table(&code, m, derive_seed(seed, &[0x7274_626c]));
    println!("random mapper table: 2^{m} seeds -> {n}-bit images, code [{n},{k}]");

    let enum_coder = OracleEnumCoder::new(code.clone(), m).map_err(|e| e.to_string())?;
    let confirm = LookupConfirmCoder::new(code.clone(), &table).map_err(|e| e.to_string())?;
    let lookup = LookupCoder::new(code.clone(), &table).map_err(|e| e.to_string())?;
    let coders: [(&str, &dyn TracedCoder); 3] = [
        ("sample-enumerating decoder", &enum_coder),
        ("lookup + confirming sample", &confirm),
        ("lookup + membership check", &lookup),
    ];
    for (label, coder) in coders {
        let desc = describe(coder, &table, DEFAULT_EPS).map_err(|e| e.to_string())?;
        let ledger = ledger_for(&desc);
        println!("\n== {label} (query budget {}) ==", coder.query_budget());
        println!("verdict: {}, omitted entries: {}", desc.verdict_name(), ledger.omitted);
        for (name, count) in &ledger.components {
            println!("  {:<24} {:>10.3} bits", name, saec::reconstruction::log2_biguint(count));
        }
        println!("  {:<24} {:>10} bits", "rank/index advice", ledger.advice_bits);
        println!("  {:<24} {:>10.3} bits", "description total", ledger.description_bits());
        println!("  {:<24} {:>10.3} bits", "store-it-all baseline", ledger.baseline_bits());
        println!(
            "  beats baseline: {} (saves {:.3} bits)",
            ledger.beats_baseline(),
            ledger.savings_bits()
        );
        println!("description:\n{}", desc.to_text());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, String> = match &cli.cmd {
        Cmd::Lab { cmd: LabCmd::Run { config } } => lab_run(config),
        Cmd::Lab { cmd: LabCmd::Bounds(args) } => {
            lab_bounds(args).map(|()| true).map_err(|e| e.to_string())
        }
        Cmd::Code { cmd: CodeCmd::Gen { n, k, seed, out } } => {
            code_gen(*n, *k, *seed, out).map(|()| true)
        }
        Cmd::Recon { cmd: ReconCmd::Demo { m, n, k, seed } } => {
            recon_demo(*m, *n, *k, *seed).map(|()| true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
