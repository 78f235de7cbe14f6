use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use matroidal::decomposition::{degree2_partition, minimal_primes, recognize_var_block_product};
use matroidal::explorer::{conjecture_scan, enumerate_matroidal, ScanOptions};
use matroidal::poly::{verify_radical_cert, DEFAULT_POWER_CAP};
use matroidal::quotients::analyze;
use matroidal::report::{CertificateJson, DecompositionJson, IdealJson};
use matroidal::sv_rank::{
    block_product_cert, degree2_cert, search_cert, sv_sums, veronese_cert, verify_sv, SearchOutcome,
};
use matroidal::{check_matroidal, Error, Ideal, MatroidalIdeal, RationalCertificate};

const OK: u8 = 0;
const CHECK_FAILED: u8 = 1;
const INCONCLUSIVE: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "matroidal", version, about = "Explore square-free matroidal monomial ideals")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test the exchange property.
    Check { file: PathBuf },
    /// q, pd, depth, height and Cohen–Macaulayness.
    Analyze { file: PathBuf },
    /// Minimal primes, height and unmixedness.
    Decompose { file: PathBuf },
    /// Multipartite partition of a degree-2 matroidal ideal.
    Partition { file: PathBuf },
    /// Build a radical certificate.
    Cert {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        construction: ConstructionArg,
        /// Target size for search; defaults to n - d + 1.
        #[arg(long)]
        size: Option<usize>,
        /// Node budget for search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Verify a certificate against an ideal.
    VerifyCert {
        ideal: PathBuf,
        cert: PathBuf,
        /// Also run the Gröbner basis oracle.
        #[arg(long)]
        oracle: bool,
        /// Largest power tried by the oracle.
        #[arg(long, default_value_t = DEFAULT_POWER_CAP)]
        cap: u32,
    },
    /// List matroidal ideals with full support.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// One representative per relabeling class.
        #[arg(long)]
        sym: bool,
    },
    /// Run the theorem battery and the certificate search over an enumeration.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Auto,
    Veronese,
    Product,
    Degree2,
    Search,
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::TooManyVariables(_)
            | Error::VariableOutOfRange { .. }
            | Error::EnumerationTooLarge { .. }
            | Error::NonSquareFree(_) => USAGE,
            _ => CHECK_FAILED,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: message.into() }
}

type Outcome = std::result::Result<u8, Failure>;

fn read_ideal(path: &Path) -> std::result::Result<Ideal, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ideal::parse_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_matroidal(path: &Path) -> std::result::Result<MatroidalIdeal, Failure> {
    Ok(check_matroidal(&read_ideal(path)?)?)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn check(file: &Path, json: bool) -> Outcome {
    let ideal = read_ideal(file)?;
    let result = check_matroidal(&ideal);
    let violation = match &result {
        Err(Error::NotMatroidal(v)) => Some(*v),
        _ => None,
    };
    let value = json!({
        "matroidal": result.is_ok(),
        "degree": ideal.uniform_degree(),
        "full_support": ideal.has_full_support(),
        "violation": violation,
        "reason": result.as_ref().err().map(|e| e.to_string()),
    });
    emit(json, &value, || match &result {
        Ok(m) => format!("matroidal, degree {}", m.degree()),
        Err(e) => format!("not matroidal: {e}"),
    });
    Ok(if result.is_ok() { OK } else { CHECK_FAILED })
}

fn analyze_cmd(file: &Path, json: bool) -> Outcome {
    let ideal = read_matroidal(file)?;
    let a = analyze(&ideal)?;
    emit(json, &a, || {
        format!(
            "n = {}\nd = {}\nq = {}\npd = {}\ndepth = {}\nheight = {}\ncohen_macaulay = {}",
            a.n, a.d, a.q, a.pd, a.depth, a.height, a.cohen_macaulay
        )
    });
    Ok(OK)
}

fn decompose(file: &Path, json: bool) -> Outcome {
    let ideal = read_ideal(file)?;
    let dec = minimal_primes(&ideal)?;
    let signature = match check_matroidal(&ideal) {
        Ok(m) if m.degree() == 2 && m.support() == ideal.support() => {
            Some(degree2_partition(&m)?.signature)
        }
        _ => None,
    };
    let out = DecompositionJson::new(&dec, signature);
    emit(json, &out, || {
        let mut s: Vec<String> = dec
            .primes
            .iter()
            .map(|p| {
                let vars: Vec<String> = p.vars().map(|v| format!("x{v}")).collect();
                format!("({})", vars.join(", "))
            })
            .collect();
        s.push(format!("height = {}\nunmixed = {}", dec.height, dec.unmixed));
        if let Some(sig) = &out.signature {
            s.push(format!("signature = {sig:?}"));
        }
        s.join("\n")
    });
    Ok(OK)
}

fn partition(file: &Path, json: bool) -> Outcome {
    let ideal = read_matroidal(file)?;
    if ideal.degree() != 2 {
        return Err(Failure { code: CHECK_FAILED, message: format!("degree {} is not 2", ideal.degree()) });
    }
    let p = degree2_partition(&ideal)?;
    let parts: Vec<Vec<usize>> = p.parts.iter().map(|b| b.vars().collect()).collect();
    let value = json!({ "parts": parts, "signature": p.signature });
    emit(json, &value, || {
        let rendered: Vec<String> = parts
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("{}\nsignature = {:?}", rendered.join(" "), p.signature)
    });
    Ok(OK)
}

fn print_cert(json: bool, cert: &CertificateJson) {
    emit(json, cert, || {
        let mut lines = Vec::new();
        for (k, layer) in cert.layers.iter().enumerate() {
            let ms: Vec<String> = layer.iter().map(|m| m.to_string()).collect();
            lines.push(format!("P{k}: {}", ms.join(", ")));
        }
        for (k, s) in cert.sums.iter().enumerate() {
            lines.push(format!("q{k} = {s}"));
        }
        lines.push(format!("size = {}", cert.sums.len()));
        lines.join("\n")
    });
}

fn partition_cert(p: &matroidal::sv_rank::SvPartition) -> std::result::Result<CertificateJson, Failure> {
    let verified = verify_sv(p).is_ok();
    if !verified {
        return Err(Failure {
            code: CHECK_FAILED,
            message: format!("constructed partition fails: {}", verify_sv(p).unwrap_err()),
        });
    }
    let sums: RationalCertificate = sv_sums(p)?;
    Ok(CertificateJson::from_partition(p, &sums, verified))
}

fn not_applicable(what: &str) -> Failure {
    Failure { code: CHECK_FAILED, message: format!("{what} construction does not apply") }
}

fn cert(file: &Path, construction: ConstructionArg, size: Option<usize>, budget: u64, json: bool) -> Outcome {
    let ideal = read_matroidal(file)?;
    let veronese = || -> std::result::Result<CertificateJson, Failure> {
        if !matroidal::decomposition::recognize_veronese(ideal.ideal()) {
            return Err(not_applicable("veronese"));
        }
        partition_cert(&veronese_cert(ideal.n(), ideal.degree())?)
    };
    let product = || -> std::result::Result<CertificateJson, Failure> {
        let blocks = recognize_var_block_product(ideal.ideal()).ok_or_else(|| not_applicable("product"))?;
        let c: RationalCertificate = block_product_cert(ideal.n(), &blocks)?;
        Ok(CertificateJson::from_certificate(&c))
    };
    let degree2 = || -> std::result::Result<CertificateJson, Failure> {
        if ideal.degree() != 2 {
            return Err(not_applicable("degree2"));
        }
        partition_cert(&degree2_cert(&ideal)?)
    };
    let search = || -> std::result::Result<CertificateJson, Failure> {
        let target = size.unwrap_or(ideal.n() + 1 - ideal.degree());
        match search_cert(&ideal, target, budget) {
            SearchOutcome::Found(p) => partition_cert(&p),
            SearchOutcome::Exhausted { nodes } => Err(Failure {
                code: INCONCLUSIVE,
                message: format!("no SV certificate of size {target} ({nodes} nodes)"),
            }),
            SearchOutcome::BudgetExceeded { nodes } => Err(Failure {
                code: INCONCLUSIVE,
                message: format!("search budget exceeded after {nodes} nodes"),
            }),
            SearchOutcome::TooLarge => Err(Failure {
                code: INCONCLUSIVE,
                message: "too many generators for search".into(),
            }),
        }
    };
    let out = match construction {
        ConstructionArg::Veronese => veronese()?,
        ConstructionArg::Product => product()?,
        ConstructionArg::Degree2 => degree2()?,
        ConstructionArg::Search => search()?,
        ConstructionArg::Auto => {
            let built = [veronese(), degree2(), product()]
                .into_iter()
                .filter_map(|r| r.ok())
                .min_by_key(|c| c.sums.len());
            match built {
                Some(c) => c,
                None => search()?,
            }
        }
    };
    print_cert(json, &out);
    Ok(OK)
}

fn verify_cert(ideal_path: &Path, cert_path: &Path, oracle: bool, cap: u32, json: bool) -> Outcome {
    let ideal = read_ideal(ideal_path)?;
    let text = fs::read_to_string(cert_path).map_err(|e| usage(format!("{}: {e}", cert_path.display())))?;
    let mut cert: CertificateJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", cert_path.display())))?;
    let target = cert.target_ideal.to_ideal()?;
    if target != ideal {
        return Err(Failure { code: CHECK_FAILED, message: "certificate targets a different ideal".into() });
    }
    cert.check_sums_match_layers()?;
    let mut problems: Vec<String> = Vec::new();
    cert.verified_sv = match cert.partition()? {
        Some(p) => match verify_sv(&p) {
            Ok(()) => true,
            Err(v) => {
                problems.push(v.to_string());
                false
            }
        },
        None => false,
    };
    cert.oracle_checked = false;
    let mut oracle_result = None;
    if oracle {
        let polys = cert.certificate()?;
        let v = verify_radical_cert(&polys, cap)?;
        cert.oracle_checked = v.verified;
        oracle_result = Some(v);
    }
    let code = if !problems.is_empty() {
        CHECK_FAILED
    } else if cert.verified_sv || cert.oracle_checked {
        OK
    } else {
        INCONCLUSIVE
    };
    let value = json!({
        "verified_sv": cert.verified_sv,
        "oracle_checked": cert.oracle_checked,
        "oracle": oracle_result,
        "problems": problems,
        "size": cert.sums.len(),
    });
    emit(json, &value, || {
        let mut lines = vec![
            format!("size = {}", cert.sums.len()),
            format!("verified_sv = {}", cert.verified_sv),
        ];
        lines.extend(problems.iter().cloned());
        if let Some(v) = &oracle_result {
            lines.push(format!("oracle verified = {}", v.verified));
            for (u, p) in &v.powers {
                lines.push(format!("  ({u})^{p} in ideal"));
            }
            for u in &v.failures {
                lines.push(format!("  {u}: no power up to {cap}"));
            }
        }
        lines.join("\n")
    });
    Ok(code)
}

fn enumerate(n: usize, d: usize, sym: bool, json: bool) -> Outcome {
    let all = enumerate_matroidal(n, d, sym)?;
    let ideals: Vec<IdealJson> = all.iter().map(|m| m.ideal().into()).collect();
    let value = json!({ "n": n, "d": d, "up_to_symmetry": sym, "count": all.len(), "ideals": ideals });
    emit(json, &value, || {
        let mut lines: Vec<String> = all.iter().map(|m| m.ideal().to_string()).collect();
        lines.push(format!("count = {}", all.len()));
        lines.join("\n")
    });
    Ok(OK)
}

fn scan(n: usize, d: usize, budget: u64, json: bool) -> Outcome {
    let opts = ScanOptions { budget, ..ScanOptions::default() };
    let r = conjecture_scan(n, d, &opts)?;
    emit(json, &r, || {
        let mut lines = vec![format!("(n, d) = ({n}, {d}), {} ideals up to relabeling", r.total_ideals)];
        for t in &r.theorems {
            let name = t.check.map(|c| format!("{c:?}")).unwrap_or_default();
            lines.push(format!("  {name:<22} pass {:>4}  fail {:>4}  skipped {:>4}", t.pass, t.fail, t.skipped));
        }
        lines.push(format!("certified by construction: {}", r.certified_by_construction));
        lines.push(format!("certified by search:       {}", r.certified_by_search));
        lines.push(format!("no certificate (exhausted): {}", r.inconclusive_exhausted));
        lines.push(format!("budget exceeded:           {}", r.inconclusive_budget));
        lines.push(format!("wall time: {} ms", r.wall_time_ms));
        lines.join("\n")
    });
    let failed = r.reverify_failures > 0 || r.theorems.iter().any(|t| t.fail > 0);
    Ok(if failed { CHECK_FAILED } else { OK })
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Check { file } => check(&file, json),
        Command::Analyze { file } => analyze_cmd(&file, json),
        Command::Decompose { file } => decompose(&file, json),
        Command::Partition { file } => partition(&file, json),
        Command::Cert { file, construction, size, budget } => cert(&file, construction, size, budget, json),
        Command::VerifyCert { ideal, cert, oracle, cap } => verify_cert(&ideal, &cert, oracle, cap, json),
        Command::Enumerate { n, d, sym } => enumerate(n, d, sym, json),
        Command::Scan { n, d, budget } => scan(n, d, budget, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
