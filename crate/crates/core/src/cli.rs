//! Command-line front end. [`run`] returns the process exit status:
//! 0 success or verified, 1 bad or falsified, 2 parameter error,
//! 3 inconclusive or out of budget.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    c_t_upper_bound, diamond_bounds, lll_threshold_check, recurrence_table, strong_lower_bound, LLLParameters,
    LllVerdict, StrongLowerBoundInput,
};
use crate::certificate::{emit_certificate, load_certificate, parse_certificate, Certificate, CertificateCheck, CertificatePayload};
use crate::coloring::{ChainColoring, RamseyInstance};
use crate::constructions::{diamond_lower_coloring, level_block_coloring, lll_random_coloring, matching_lower_coloring};
use crate::diamond::{extract_monochromatic_diamond, extraction_dimension, verify_extraction};
use crate::embedding::EmbeddingMode;
use crate::error::{Error, Result};
use crate::lattice::{chain_count_formula, enumerate_t_chains, BooleanLattice, SubsetMask};
use crate::lubell::{
    lubell, matching_excluded, max_lubell_p_free, ramsey_upper_by_lubell, trivial_excluded, yblm_check,
};
use crate::poset::{level_of_embedding_bound_e, parse_target, parse_targets};
use crate::search::{compute_ramsey_number, verify_coloring, Budget, ColoringVerdict, RamseyNumber, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD: i32 = 1;
pub const EXIT_PARAM: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "poset-ramsey", version, about = "Ramsey numbers of posets in Boolean lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of t-chains of B_n.
    Chains {
        n: u32,
        t: usize,
        /// Also list the chains.
        #[arg(long)]
        enumerate: bool,
    },
    /// Lubell function tools.
    #[command(subcommand)]
    Lubell(LubellCmd),
    /// Smallest n such that every coloring of B_n has a monochromatic copy.
    Search(SearchArgs),
    /// Re-verify a certificate file.
    Verify { cert: PathBuf },
    /// Explicit colorings, written as certificates.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Bound calculators.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Find a monochromatic induced diamond.
    ExtractDiamond(ExtractArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Excluded {
    None,
    Trivial,
    Matching,
}

impl Excluded {
    fn sets(self, n: u32) -> Vec<SubsetMask> {
        match self {
            Excluded::None => Vec::new(),
            Excluded::Trivial => trivial_excluded(n),
            Excluded::Matching => matching_excluded(n),
        }
    }
}

#[derive(Subcommand, Debug)]
enum LubellCmd {
    /// lu_N of a family given as masks.
    Eval {
        n: u32,
        /// Comma-separated base-10 masks; empty for the whole lattice.
        #[arg(long, default_value = "")]
        masks: String,
    },
    /// Maximum Lubell value of a P-free family avoiding the excluded sets.
    Max {
        n: u32,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "trivial")]
        excluded: Excluded,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Checks k·L < N + 1 − lu_N(Q).
    Condition {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// Upper bound on L as "p/q" or an integer.
        #[arg(long)]
        l: String,
        #[arg(long, value_enum, default_value = "trivial")]
        excluded: Excluded,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    k: u8,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value = "weak")]
    mode: EmbeddingMode,
    /// `family:params` per color; a single target is repeated k times.
    #[arg(long)]
    targets: String,
    #[arg(long, default_value_t = 6)]
    n_max: u32,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_secs: Option<f64>,
    /// Directory for the lower and upper certificates.
    #[arg(long)]
    emit_cert: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Level blocks of widths e(P_1), …, e(P_k).
    LevelBlock {
        #[arg(long)]
        targets: String,
        #[arg(long, default_value = "weak")]
        mode: EmbeddingMode,
        #[arg(long, default_value_t = 5)]
        probe_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coloring of B_{k+1} with no monochromatic M_s.
    Matching {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coloring of B_{2k−1} with no monochromatic induced r-diamond.
    Diamond {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Biased random t-chain coloring.
    Lll {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        targets: String,
        #[arg(long)]
        host_n: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "weak")]
        mode: EmbeddingMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// Local-lemma threshold check for host sizes n..=n_to.
    Lll {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        targets: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        n_to: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Strong lower bound for B_{m_1}, …, B_{m_k}.
    StrongLower {
        #[arg(long)]
        t: u32,
        /// Comma-separated non-decreasing dimensions.
        #[arg(long)]
        dims: String,
    },
    /// Halving recurrence against the iterated linear one.
    Recurrence {
        #[arg(long)]
        m: u32,
        /// Known bound on the two-color value.
        #[arg(long)]
        r2: BigUint,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Lower and upper diamond bounds for k = 1..=k_max.
    Diamond {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k_to: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The c_t ratio.
    Ct {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "big-n")]
        big_n: u32,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["cert", "seed"])))]
struct ExtractArgs {
    #[arg(long)]
    k: u8,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    cert: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Accept hosts larger than required.
    #[arg(long)]
    relaxed: bool,
}

/// Parses `args` (program name first), runs the command and writes its
/// output to `out`. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_PARAM;
        }
    };
    let mut text = String::new();
    let status = dispatch(cli.command, &mut text);
    let _ = out.write_all(text.as_bytes());
    match status {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Verification(_) => EXIT_BAD,
                _ => EXIT_PARAM,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Result<i32> {
    match cmd {
        Command::Chains { n, t, enumerate } => chains(n, t, enumerate, out),
        Command::Lubell(c) => lubell_cmd(c, out),
        Command::Search(a) => search(a, out),
        Command::Verify { cert } => verify(&cert, out),
        Command::Construct(c) => construct(c, out),
        Command::Bounds(c) => bounds(c, out),
        Command::ExtractDiamond(a) => extract(a, out),
    }
}

fn chains(n: u32, t: usize, enumerate: bool, out: &mut String) -> Result<i32> {
    if t == 0 {
        return Err(Error::param("need t ≥ 1"));
    }
    writeln!(out, "{}", chain_count_formula(n, t as u32)?).unwrap();
    if enumerate {
        for c in enumerate_t_chains(&BooleanLattice::new(n)?, t)? {
            writeln!(out, "{}: {c}", c.id).unwrap();
        }
    }
    Ok(EXIT_OK)
}

fn parse_masks(n: u32, s: &str) -> Result<Vec<SubsetMask>> {
    if s.trim().is_empty() {
        return Ok(BooleanLattice::new(n)?.elements().collect());
    }
    s.split(',')
        .map(|m| {
            let bits: u32 = m.trim().parse().map_err(|_| Error::param(format!("bad mask `{m}`")))?;
            SubsetMask::new(bits, n)
        })
        .collect()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse().map_err(|_| Error::param(format!("bad rational `{s}`")))
}

fn family_string(family: &[SubsetMask]) -> String {
    family.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn lubell_cmd(cmd: LubellCmd, out: &mut String) -> Result<i32> {
    match cmd {
        LubellCmd::Eval { n, masks } => {
            let family = parse_masks(n, &masks)?;
            let y = yblm_check(n, &family)?;
            writeln!(out, "lu = {}", lubell(n, &family)?).unwrap();
            writeln!(out, "antichain: {}", y.is_antichain).unwrap();
            Ok(EXIT_OK)
        }
        LubellCmd::Max {
            n,
            target,
            excluded,
            max_nodes,
        } => {
            let p = parse_target(&target)?;
            let r = max_lubell_p_free(n, &p, &excluded.sets(n), max_nodes)?;
            writeln!(out, "max = {}", r.value).unwrap();
            writeln!(out, "upper = {}", r.upper_bound).unwrap();
            writeln!(out, "complete: {}", r.complete).unwrap();
            writeln!(out, "nodes: {}", r.nodes).unwrap();
            writeln!(out, "witness: {}", family_string(&r.witness)).unwrap();
            Ok(if r.complete { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        LubellCmd::Condition { k, n, l, excluded } => {
            let c = ramsey_upper_by_lubell(k, n, &parse_rational(&l)?, &excluded.sets(n))?;
            writeln!(out, "lhs = {}", c.lhs).unwrap();
            writeln!(out, "rhs = {}", c.rhs).unwrap();
            if c.certified() {
                writeln!(out, "certified: R <= {n}").unwrap();
                Ok(EXIT_OK)
            } else {
                writeln!(out, "condition fails").unwrap();
                Ok(EXIT_BAD)
            }
        }
    }
}

fn instance(k: u8, t: usize, mode: EmbeddingMode, targets: &str) -> Result<RamseyInstance> {
    let mut ts = parse_targets(targets)?;
    if ts.len() == 1 && k > 1 {
        ts = vec![ts[0].clone(); k as usize];
    }
    if ts.len() != k as usize {
        return Err(Error::param(format!("--k {k} but {} targets given", ts.len())));
    }
    RamseyInstance::new(t, ts, mode)
}

fn write_cert(cert: &Certificate, path: &Path, out: &mut String) -> Result<()> {
    emit_certificate(cert, path)?;
    writeln!(out, "certificate ({}): {}", cert.kind(), path.display()).unwrap();
    Ok(())
}

fn search(a: SearchArgs, out: &mut String) -> Result<i32> {
    let inst = instance(a.k, a.t, a.mode, &a.targets)?;
    let budget = Budget {
        max_nodes: a.budget_nodes,
        max_time: match a.budget_secs {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Error::param(format!("bad --budget-secs {s}"))),
            None => None,
        },
    };
    if a.jobs == 0 {
        return Err(Error::param("need --jobs ≥ 1"));
    }
    let opts = SearchOptions {
        budget,
        symmetry: !a.no_symmetry,
        jobs: a.jobs,
    };
    if let Some(dir) = &a.emit_cert {
        std::fs::create_dir_all(dir)?;
    }
    let emit_lower = |lower: &Option<ChainColoring>, out: &mut String| -> Result<()> {
        if let (Some(dir), Some(c)) = (&a.emit_cert, lower) {
            let path = dir.join(format!("lower-B{}.cert", c.host_n()));
            write_cert(&Certificate::good_coloring(inst.clone(), c.clone()), &path, out)?;
        }
        Ok(())
    };
    match compute_ramsey_number(&inst, a.n_max, &opts)? {
        RamseyNumber::Exact { value, lower, upper } => {
            writeln!(out, "R = {value}").unwrap();
            writeln!(out, "nodes: {} group: {}", upper.nodes, upper.group).unwrap();
            emit_lower(&lower, out)?;
            if let Some(dir) = &a.emit_cert {
                let path = dir.join(format!("upper-B{value}.cert"));
                write_cert(&Certificate::exhaustion(inst.clone(), value, &upper), &path, out)?;
            }
            Ok(EXIT_OK)
        }
        RamseyNumber::AboveCap { n_max, lower } => {
            writeln!(out, "R > {n_max}").unwrap();
            emit_lower(&lower, out)?;
            Ok(EXIT_OK)
        }
        RamseyNumber::Inconclusive { host_n, lower, stats } => {
            writeln!(out, "inconclusive at B_{host_n}: R >= {host_n}").unwrap();
            writeln!(
                out,
                "budget exhausted after {} nodes in {:.3} s",
                stats.nodes,
                stats.elapsed.as_secs_f64()
            )
            .unwrap();
            emit_lower(&lower, out)?;
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn verify(path: &Path, out: &mut String) -> Result<i32> {
    let cert = parse_certificate(&std::fs::read_to_string(path)?)?;
    writeln!(out, "kind: {}", cert.kind()).unwrap();
    writeln!(out, "host: B_{}", cert.host_n).unwrap();
    match cert.check()? {
        CertificateCheck::Verified => {
            writeln!(out, "verified").unwrap();
            Ok(EXIT_OK)
        }
        CertificateCheck::Falsified(why) => {
            writeln!(out, "falsified: {why}").unwrap();
            Ok(EXIT_BAD)
        }
        CertificateCheck::Inconclusive => {
            writeln!(out, "inconclusive: replay ran out of budget").unwrap();
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

/// Checks a generated coloring, reports it and writes it when good.
fn finish_construction(inst: RamseyInstance, coloring: ChainColoring, path: Option<PathBuf>, out: &mut String) -> Result<i32> {
    let host_n = coloring.host_n();
    writeln!(out, "host: B_{host_n}").unwrap();
    writeln!(out, "histogram: {:?}", coloring.histogram()).unwrap();
    match verify_coloring(&inst, host_n, &coloring)? {
        ColoringVerdict::Good => {
            writeln!(out, "good").unwrap();
            let cert = Certificate::good_coloring(inst, coloring);
            match path {
                Some(p) => write_cert(&cert, &p, out)?,
                None => out.push_str(&cert.to_text()?),
            }
            Ok(EXIT_OK)
        }
        ColoringVerdict::Bad { color, witness } => {
            writeln!(out, "bad: color {color} contains {witness}").unwrap();
            Ok(EXIT_BAD)
        }
    }
}

fn construct(cmd: ConstructCmd, out: &mut String) -> Result<i32> {
    match cmd {
        ConstructCmd::LevelBlock {
            targets,
            mode,
            probe_cap,
            out: path,
        } => {
            let ts = parse_targets(&targets)?;
            let mut e = Vec::new();
            for p in &ts {
                let b = level_of_embedding_bound_e(p, probe_cap);
                let flag = if b.verified { "verified" } else { "heuristic" };
                writeln!(out, "e({p}) = {} ({flag})", b.value).unwrap();
                e.push(b.value);
            }
            let coloring = level_block_coloring(&e)?;
            let inst = RamseyInstance::new(1, ts, mode)?;
            finish_construction(inst, coloring, path, out)
        }
        ConstructCmd::Matching { k, s, out: path } => {
            let coloring = matching_lower_coloring(k, s)?;
            let inst = instance(k, 1, EmbeddingMode::Weak, &format!("matching:{s}"))?;
            finish_construction(inst, coloring, path, out)
        }
        ConstructCmd::Diamond { k, r, out: path } => {
            let coloring = diamond_lower_coloring(k, r)?;
            let inst = instance(k, 1, EmbeddingMode::Strong, &format!("diamond:{r}"))?;
            finish_construction(inst, coloring, path, out)
        }
        ConstructCmd::Lll {
            t,
            targets,
            host_n,
            seed,
            mode,
            out: path,
        } => {
            let ts = parse_targets(&targets)?;
            let params = LLLParameters::new(t, &ts)?;
            let coloring = lll_random_coloring(&params, host_n, seed)?;
            let inst = RamseyInstance::new(t, ts, mode)?;
            writeln!(out, "seed: {seed}").unwrap();
            finish_construction(inst, coloring, path, out)
        }
    }
}

fn bounds(cmd: BoundsCmd, out: &mut String) -> Result<i32> {
    match cmd {
        BoundsCmd::Lll {
            t,
            targets,
            n,
            n_to,
            format,
        } => {
            let params = LLLParameters::new(t, &parse_targets(&targets)?)?;
            let last = n_to.unwrap_or(n);
            if last < n {
                return Err(Error::param("--n-to must be at least --n"));
            }
            writeln!(out, "threshold = {}", params.threshold()).unwrap();
            let mut rows = vec![vec![
                "n".to_string(),
                "verdict".into(),
                "first".into(),
                "second".into(),
                "ln_n".into(),
                "lhs".into(),
                "rhs".into(),
                "precision".into(),
            ]];
            let mut any_indeterminate = false;
            for size in n..=last {
                let c = lll_threshold_check(&params, &BigUint::from(size))?;
                any_indeterminate |= c.verdict() == LllVerdict::Indeterminate;
                rows.push(vec![
                    size.to_string(),
                    c.verdict().to_string(),
                    format!("{:?}", c.first),
                    format!("{:?}", c.second),
                    c.ln_n.to_string(),
                    c.lhs.to_string(),
                    c.rhs.to_string(),
                    c.precision.to_string(),
                ]);
            }
            table(&rows, format, out);
            Ok(if any_indeterminate { EXIT_INCONCLUSIVE } else { EXIT_OK })
        }
        BoundsCmd::StrongLower { t, dims } => {
            let dims: Vec<u32> = dims
                .split(',')
                .map(|d| d.trim().parse().map_err(|_| Error::param(format!("bad dimension `{d}`"))))
                .collect::<Result<_>>()?;
            let b = strong_lower_bound(&StrongLowerBoundInput::new(t, dims)?)?;
            writeln!(out, "arm1 = {}", b.arm1).unwrap();
            writeln!(out, "arm2 = {}", b.arm2).unwrap();
            match b.exact() {
                Some(v) => writeln!(out, "bound = {v}").unwrap(),
                None => writeln!(out, "bound = {}", b.value).unwrap(),
            }
            writeln!(out, "attained by: {:?}", b.attained_by).unwrap();
            Ok(if b.attained_by.is_some() { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        BoundsCmd::Recurrence { m, r2, k_max, format } => {
            let mut rows = vec![vec!["k".to_string(), "halving".into(), "linear".into(), "best".into()]];
            for row in recurrence_table(m, &r2, k_max)? {
                rows.push(vec![
                    row.k.to_string(),
                    row.halving.map_or("-".into(), |v| v.to_string()),
                    row.walzer.to_string(),
                    row.best.to_string(),
                ]);
            }
            table(&rows, format, out);
            Ok(EXIT_OK)
        }
        BoundsCmd::Diamond { k, r, k_to, format } => {
            let last = k_to.unwrap_or(k);
            if last < k {
                return Err(Error::param("--k-to must be at least --k"));
            }
            let mut rows = vec![vec!["k".to_string(), "r".into(), "lower".into(), "upper".into()]];
            for kk in k..=last {
                let (lo, hi) = diamond_bounds(kk, r)?;
                rows.push(vec![kk.to_string(), r.to_string(), lo.to_string(), hi.to_string()]);
            }
            table(&rows, format, out);
            Ok(EXIT_OK)
        }
        BoundsCmd::Ct { m, n, big_n, t } => {
            let c = c_t_upper_bound(m, n, big_n, t)?;
            writeln!(out, "e(m,N) = {} ({:?})", c.e_m.0, c.e_m.1).unwrap();
            writeln!(out, "e(n,N) = {} ({:?})", c.e_n.0, c.e_n.1).unwrap();
            writeln!(out, "h_m = {}, h_n = {}", c.h_m, c.h_n).unwrap();
            match &c.value {
                Some(v) => writeln!(out, "c_t <= {v}").unwrap(),
                None => writeln!(out, "c_t: vacuous (denominator not positive)").unwrap(),
            }
            if !c.hypotheses_hold {
                writeln!(out, "note: outside t ≥ 3, m, n ≥ 2").unwrap();
            }
            Ok(EXIT_OK)
        }
    }
}

fn table(rows: &[Vec<String>], format: Format, out: &mut String) {
    match format {
        Format::Csv => {
            for r in rows {
                writeln!(out, "{}", r.join(",")).unwrap();
            }
        }
        Format::Text => {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            let widths: Vec<usize> = (0..cols)
                .map(|i| rows.iter().filter_map(|r| r.get(i)).map(|s| s.chars().count()).max().unwrap_or(0))
                .collect();
            for r in rows {
                let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
                writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
            }
        }
    }
}

/// Uniform random element coloring, reproducible from `seed`.
pub fn seeded_element_coloring(n: u32, k: u8, seed: u64) -> Result<ChainColoring> {
    if k == 0 {
        return Err(Error::param("need k ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = BooleanLattice::new(n)?.size();
    let colors = (0..size).map(|_| rng.random_range(1..=k)).collect();
    ChainColoring::new(n, 1, k, colors)
}

fn extract(a: ExtractArgs, out: &mut String) -> Result<i32> {
    if a.r < 2 || a.k == 0 {
        return Err(Error::param("need k ≥ 1 and r ≥ 2"));
    }
    let coloring = match (&a.cert, a.seed) {
        (Some(path), _) => match load_certificate(path)?.payload {
            CertificatePayload::GoodColoring(c) => c,
            CertificatePayload::Exhaustion { .. } => {
                return Err(Error::param("the certificate holds no coloring"))
            }
        },
        (None, Some(seed)) => {
            writeln!(out, "seed: {seed}").unwrap();
            seeded_element_coloring(extraction_dimension(u32::from(a.k), a.r), a.k, seed)?
        }
        (None, None) => return Err(Error::param("need --cert or --seed")),
    };
    let found = extract_monochromatic_diamond(a.k, a.r, &coloring, !a.relaxed)?;
    if !verify_extraction(&found.embedding, &coloring, found.color) {
        return Err(Error::Verification("extracted diamond failed re-verification".into()));
    }
    writeln!(out, "host: B_{}", coloring.host_n()).unwrap();
    writeln!(out, "color: {}", found.color).unwrap();
    let (i1, i2, i3) = found.trace.indices;
    writeln!(out, "levels: {i1} {i2} {i3}").unwrap();
    let names = std::iter::once("x".to_string())
        .chain((1..=a.r).map(|j| format!("y{j}")))
        .chain(std::iter::once("z".to_string()));
    for (name, s) in names.zip(&found.embedding.images) {
        writeln!(out, "{name}: {} {s}", s.bits()).unwrap();
    }
    Ok(EXIT_OK)
}
