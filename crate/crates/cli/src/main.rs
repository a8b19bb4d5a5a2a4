use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use moduli_core::characters::{character_of, zext_characters, PrincipalCharacter, SlicePoint};
use moduli_core::complex::{parse_complex, Complex};
use moduli_core::config::{self, Config};
use moduli_core::dynamics::{iterate, scan_slice, OrbitParams, Window, Word};
use moduli_core::families::{dehn_sweep, realize};
use moduli_core::filter::discreteness_filter;
use moduli_core::io::{render_tables, write_dehn_csv, write_pgm, write_raster_csv};
use moduli_core::moebius::{classify, complex_distance, MoebiusMap};
use moduli_core::tables::exceptional_tables;

const THREADS_ENV: &str = "MODULI_THREADS";

#[derive(Parser, Debug)]
#[command(name = "moduli", version, about = "Principal characters and discreteness tests for two-generator Moebius groups")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Absolute tolerance for identity, parabolic and character matching
    #[arg(long, global = true, default_value_t = config::DEFAULT_TOL)]
    tol: f64,
    /// Largest elliptic order recognized
    #[arg(long, global = true, default_value_t = config::DEFAULT_P_MAX)]
    p_max: u32,
    /// Letters applied per orbit
    #[arg(long, global = true, default_value_t = config::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Longest word tried by the orbit search
    #[arg(long, global = true, default_value_t = config::DEFAULT_SEARCH_DEPTH)]
    search_depth: usize,
    /// Magnitude counted as converged to zero
    #[arg(long, global = true, default_value_t = config::DEFAULT_ZERO_EPS)]
    zero_eps: f64,
    /// Orbit values kept for cycle detection
    #[arg(long, global = true, default_value_t = config::DEFAULT_CYCLE_WINDOW)]
    cycle_window: usize,
    /// Worker threads; MODULI_THREADS takes precedence [default: available parallelism]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip the orbit-certificate stage of the filter
    #[arg(long, global = true)]
    no_dynamics: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a matrix as identity, parabolic, elliptic or loxodromic
    Classify {
        /// Entries a,b,c,d (row-major), each a complex number
        #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
        matrix: MoebiusMap,
    },
    /// Principal character of a pair of matrices
    Char {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
        f: MoebiusMap,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
        g: MoebiusMap,
    },
    /// Characters of the two order-two extensions of (gamma, beta)
    Zext(Slice),
    /// Run the discreteness filter
    Filter {
        #[command(flatten)]
        slice: Slice,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg, default_value = "-4")]
        beta_tilde: Complex,
    },
    /// Iterate a word in the polynomial semigroup
    Orbit {
        #[command(flatten)]
        slice: Slice,
        /// Word over P and Q, repeated cyclically
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
    /// Classify a grid of gamma values on a fixed-beta slice
    Scan {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
        beta: Complex,
        /// re_min,re_max,im_min,im_max
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
        /// WIDTHxHEIGHT
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List the exceptional characters
    Tables {
        #[arg(long)]
        json: bool,
    },
    /// Sweep the (p, 0) surgery family
    Dehn {
        #[arg(long, default_value_t = 7)]
        pmin: u32,
        #[arg(long, default_value_t = 200)]
        pmax: u32,
        /// CSV destination; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrices realizing (gamma, beta, -4)
    Realize(Slice),
    /// Complex distance between the generator axes
    Distance {
        #[command(flatten)]
        slice: Slice,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
        beta_tilde: Complex,
    },
}

#[derive(Args, Debug)]
struct Slice {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
    gamma: Complex,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
    beta: Complex,
}

impl Slice {
    fn point(&self) -> SlicePoint {
        SlicePoint::new(self.gamma, self.beta)
    }
}

fn parse_complex_arg(s: &str) -> Result<Complex, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_list<const N: usize>(s: &str) -> Result<[Complex; N], String> {
    let parts = s.split(',').map(parse_complex_arg).collect::<Result<Vec<_>, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<_>| format!("expected {N} comma-separated values, got {}", v.len()))
}

/// Entries are checked for shape only; singular matrices are a domain error reported later.
fn parse_matrix(s: &str) -> Result<MoebiusMap, String> {
    let [a, b, c, d] = parse_list::<4>(s)?;
    Ok(MoebiusMap { a, b, c, d })
}

fn parse_window(s: &str) -> Result<Window, String> {
    let vals = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d]: [f64; 4] = vals.try_into().map_err(|_| "window needs re_min,re_max,im_min,im_max".to_string())?;
    Window::new(a, b, c, d).map_err(|e| e.to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("size must look like WIDTHxHEIGHT")?;
    let w = w.parse().map_err(|e| format!("width: {e}"))?;
    let h = h.parse().map_err(|e| format!("height: {e}"))?;
    Ok((w, h))
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: moduli_core::Error| e.to_string())
}

fn build_config(args: &ConfigArgs) -> Result<Config, String> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{THREADS_ENV}={v:?} is not a thread count"))?,
        Err(_) => args.threads.unwrap_or_else(config::default_threads),
    };
    let cfg = Config {
        tol: args.tol,
        p_max: args.p_max,
        max_iter: args.max_iter,
        search_depth: args.search_depth,
        zero_eps: args.zero_eps,
        cycle_window: args.cycle_window,
        threads,
        use_dynamics: !args.no_dynamics,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn print_json<T: serde::Serialize>(value: &T) -> moduli_core::Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| moduli_core::Error::Io(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn create(path: &PathBuf) -> moduli_core::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Renormalizes a parsed matrix to unit determinant.
fn unimodular(m: &MoebiusMap) -> moduli_core::Result<MoebiusMap> {
    MoebiusMap::new(m.a, m.b, m.c, m.d)
}

fn run(cmd: Command, cfg: &Config) -> moduli_core::Result<()> {
    match cmd {
        Command::Classify { matrix } => print_json(&classify(&unimodular(&matrix)?, cfg.tol, cfg.p_max)),
        Command::Char { f, g } => print_json(&character_of(&unimodular(&f)?, &unimodular(&g)?)),
        Command::Zext(slice) => {
            let (a, b) = zext_characters(&slice.point());
            print_json(&[a, b])
        }
        Command::Filter { slice, beta_tilde } => {
            let ch = PrincipalCharacter::new(slice.gamma, slice.beta, beta_tilde);
            print_json(&discreteness_filter(&ch, cfg))
        }
        Command::Orbit { slice, word } => {
            let params = OrbitParams::from_config(slice.beta, cfg);
            print_json(&iterate(slice.beta, slice.gamma, &word, &params))
        }
        Command::Scan {
            beta,
            window,
            size: (w, h),
            out,
            csv,
        } => {
            let raster = scan_slice(beta, window, w, h, cfg)?;
            let mut pgm = create(&out)?;
            write_pgm(&raster, &mut pgm)?;
            pgm.flush()?;
            if let Some(path) = csv {
                let mut f = create(&path)?;
                write_raster_csv(&raster, &mut f)?;
                f.flush()?;
            }
            Ok(())
        }
        Command::Tables { json } => {
            let entries = exceptional_tables(cfg.p_max);
            if json {
                print_json(&entries)
            } else {
                quiet_pipe(io::stdout().lock().write_all(render_tables(&entries).as_bytes()))
            }
        }
        Command::Dehn { pmin, pmax, out } => {
            if pmin > pmax {
                return Err(moduli_core::Error::InvalidConfig(format!("pmin {pmin} exceeds pmax {pmax}")));
            }
            let pool = rayon_pool(cfg)?;
            let pts = pool.install(|| dehn_sweep(pmin, pmax))?;
            match out {
                Some(path) => {
                    let mut f = create(&path)?;
                    write_dehn_csv(&pts, &mut f)?;
                    f.flush()?;
                }
                None => {
                    let mut buf = Vec::new();
                    write_dehn_csv(&pts, &mut buf)?;
                    quiet_pipe(io::stdout().lock().write_all(&buf))?;
                }
            }
            Ok(())
        }
        Command::Realize(slice) => print_json(&realize(&slice.point(), cfg.tol)),
        Command::Distance { slice, beta_tilde } => {
            let ch = PrincipalCharacter::new(slice.gamma, slice.beta, beta_tilde);
            print_json(&complex_distance(&ch, cfg.tol)?)
        }
    }
}

/// A closed downstream pipe (e.g. `| head`) is not an error.
fn quiet_pipe(r: io::Result<()>) -> moduli_core::Result<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn rayon_pool(cfg: &Config) -> moduli_core::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| moduli_core::Error::InvalidConfig(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match build_config(&cli.config) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
