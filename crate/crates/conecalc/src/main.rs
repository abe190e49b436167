//! Command-line front end: one structured JSON record per computation on
//! stdout, diagnostics on stderr. Exit status 0 on success, 2 on bad input
//! or precondition violations, 1 on internal errors.

use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::Rational64;
use serde_json::{json, Value};

use conecalc::cache::{norm_key, NormCache};
use conecalc::checks;
use conecalc::combinatorics::{find_interval_collision, IntervalPartition};
use conecalc::cone::{
    aligned_grid, cone_canonicalize, cone_curve_sample, cone_norm_bracket,
    ConeBase,
};
use conecalc::decimal_render;
use conecalc::error::Error;
use conecalc::norm::cancellation_norm_capped;
use conecalc::parse::{
    parse_alphabet_file, parse_alphabet_inline, parse_cone_desc, parse_rational, parse_real_word,
    parse_word,
};
use conecalc::realword::{geodesic_sample, rational_norm_exact_capped};
use conecalc::stable::{abelianization_lower_bound, stable_length_bounds};
use conecalc::word::primitive_root;
use conecalc::WeightedAlphabet;

#[derive(Parser)]
#[command(name = "conecalc", version, about = "Conjugation-invariant word norms and cone brackets")]
struct Cli {
    /// Inline alphabet, e.g. `a=1,b=1/2` (weights default to 1)
    #[arg(long, global = true)]
    alphabet: Option<String>,

    /// Alphabet file with one `name weight` pair per line
    #[arg(long, global = true)]
    alphabet_file: Option<PathBuf>,

    /// Disable the on-disk norm cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// DP length cap in letters
    #[arg(long, global = true, default_value_t = 3000)]
    max_len: usize,

    /// Worker threads for independent samples
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Include the cancellation witness in the output record
    #[arg(long, global = true)]
    witness: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cancellation norm of a word, e.g. `a b a' b'`
    Norm { word: String },
    /// Exact norm of a rational word, e.g. `a(1/2) b(-2)`
    Rnorm { word: String },
    /// Stable length bracket from a power schedule
    Stable {
        word: String,
        #[arg(long, default_value = "1,2,4,8,16")]
        schedule: String,
        /// Externally certified positive lower bound on the stable length
        #[arg(long)]
        tau_lower: Option<String>,
    },
    /// Canonical pure root of a word
    Root { word: String },
    /// Sample the scaled norm curve of a cone description
    ConeCurve {
        desc: String,
        /// Comma-separated t grid; defaults to a denominator-aligned
        /// doubling grid
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 5)]
        steps: u32,
    },
    /// Bracket the cone norm of a free-group description
    ConeBracket {
        desc: String,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 5)]
        steps: u32,
        /// Power schedule for the per-root stable length brackets
        #[arg(long, default_value = "1,2,4,8")]
        schedule: String,
    },
    /// Sample the geodesic from a rational word to the identity
    Geodesic {
        word: String,
        #[arg(long, default_value = "0,1/4,1/2,3/4,1")]
        t: String,
    },
    /// Find an interval collision of two partitions given by sizes
    Collide {
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
        #[arg(long)]
        ell: usize,
    },
    /// Run every property suite; nonzero exit on any violation
    CheckLemmas {
        #[arg(long, default_value_t = 0xC0CA)]
        seed: u64,
    },
    /// Time the norm DP on a pseudorandom reduced word
    Bench {
        #[arg(long, default_value_t = 600)]
        len: usize,
    },
}

fn resolve_alphabet(cli: &Cli) -> Result<WeightedAlphabet, Error> {
    if let Some(inline) = &cli.alphabet {
        return parse_alphabet_inline(inline);
    }
    if let Some(path) = &cli.alphabet_file {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::PreconditionViolated(format!("cannot read {}: {e}", path.display()))
        })?;
        return parse_alphabet_file(&text);
    }
    Ok(WeightedAlphabet::unit(["a", "b"]))
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(f)
        .collect()
}

fn rational_field(x: Rational64) -> Value {
    json!({ "value": format!("{}/{}", x.numer(), x.denom()), "decimal": decimal_render(x) })
}

/// Evaluate `f` over the items on up to `jobs` threads, preserving order.
fn parallel_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let queue = Mutex::new(items.into_iter().enumerate().collect::<Vec<_>>());
    let results = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(8) {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop();
                match next {
                    Some((i, item)) => {
                        let r = f(item);
                        results.lock().unwrap().push((i, r));
                    }
                    None => break,
                }
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|&(i, _)| i);
    results.into_iter().map(|(_, r)| r).collect()
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let cap = cli.max_len;
    let cache = if cli.no_cache { NormCache::disabled() } else { NormCache::from_env() };
    let started = Instant::now();

    let mut record = match &cli.cmd {
        Cmd::Norm { word } => {
            let alphabet = resolve_alphabet(cli)?;
            let w = parse_word(word, &alphabet)?;
            let key = norm_key(&alphabet, &w);
            let mut witness_field = Value::Null;
            let (value, hit) = cache.get_or_compute(&key, || {
                Ok(cancellation_norm_capped(&w, &alphabet, cap)?.value)
            })?;
            if cli.witness {
                let cert = cancellation_norm_capped(&w, &alphabet, cap)?;
                witness_field = json!({ "removed_positions": cert.removed });
            }
            let mut rec = json!({
                "cmd": "norm",
                "input": word,
                "cache_hit": hit,
            });
            merge(&mut rec, rational_field(value));
            if cli.witness {
                rec["witness"] = witness_field;
            }
            rec
        }
        Cmd::Rnorm { word } => {
            let alphabet = resolve_alphabet(cli)?;
            let w = parse_real_word(word, &alphabet)?;
            let cert = rational_norm_exact_capped(&w, &alphabet, cap)?;
            let mut rec = json!({ "cmd": "rnorm", "input": word });
            merge(&mut rec, rational_field(cert.value));
            if cli.witness {
                rec["witness"] = json!({
                    "amounts": cert
                        .witness
                        .amounts
                        .iter()
                        .map(|s| format!("{}/{}", s.numer(), s.denom()))
                        .collect::<Vec<_>>(),
                });
            }
            rec
        }
        Cmd::Stable { word, schedule, tau_lower } => {
            let alphabet = resolve_alphabet(cli)?;
            let g = parse_word(word, &alphabet)?.reduce();
            let schedule: Vec<u32> = parse_list(schedule, |p| {
                p.parse()
                    .map_err(|_| Error::PreconditionViolated(format!("bad power `{p}`")))
            })?;
            if schedule.is_empty()
                || schedule[0] == 0
                || schedule.windows(2).any(|p| p[0] >= p[1])
            {
                return Err(Error::PreconditionViolated(
                    "power schedule must be increasing and start at n >= 1".into(),
                ));
            }
            // powers are independent DP calls; cache each one
            let hits = Mutex::new(0usize);
            let samples = parallel_map(cli.jobs, schedule.clone(), |n| {
                let power = g.pow(n as i64);
                let key = norm_key(&alphabet, &power);
                cache
                    .get_or_compute(&key, || {
                        Ok(cancellation_norm_capped(&power, &alphabet, cap)?.value)
                    })
                    .map(|(v, hit)| {
                        if hit {
                            *hits.lock().unwrap() += 1;
                        }
                        (n, v / Rational64::from_integer(n as i64))
                    })
            });
            let mut upper_sequence = Vec::with_capacity(samples.len());
            for s in samples {
                upper_sequence.push(s?);
            }
            let upper = upper_sequence.iter().map(|&(_, v)| v).min().unwrap();
            let (lower, method) = match tau_lower {
                Some(t) => {
                    let t = parse_rational(t)?;
                    if t <= Rational64::from_integer(0) {
                        return Err(Error::PreconditionViolated(
                            "injected tau lower bound must be positive".into(),
                        ));
                    }
                    (t, "injected")
                }
                None => (abelianization_lower_bound(&g, &alphabet), "abelianization"),
            };
            if lower > upper {
                return Err(Error::InvalidBracket);
            }
            json!({
                "cmd": "stable",
                "input": word,
                "upper_sequence": upper_sequence
                    .iter()
                    .map(|&(n, v)| json!({ "n": n, "value": format!("{}/{}", v.numer(), v.denom()) }))
                    .collect::<Vec<_>>(),
                "upper": format!("{}/{}", upper.numer(), upper.denom()),
                "lower": format!("{}/{}", lower.numer(), lower.denom()),
                "lower_method": method,
                "upper_decimal": decimal_render(upper),
                "lower_decimal": decimal_render(lower),
                "cache_hits": *hits.lock().unwrap(),
            })
        }
        Cmd::Root { word } => {
            let alphabet = resolve_alphabet(cli)?;
            let w = parse_word(word, &alphabet)?;
            let (theta, k) = primitive_root(&w)?;
            json!({
                "cmd": "root",
                "input": word,
                "theta": theta.word().display(&alphabet),
                "k": k,
            })
        }
        Cmd::ConeCurve { desc, grid, steps } => {
            let d = parse_cone_desc(desc)?;
            let grid = match grid {
                Some(g) => parse_list(g, parse_rational)?,
                None => aligned_grid(&d, *steps),
            };
            let samples = parallel_map(cli.jobs, grid, |t| {
                cone_curve_sample(&d, &[t], cap).map(|s| s[0])
            });
            let mut rows = Vec::with_capacity(samples.len());
            for s in samples {
                let (t, v) = s?;
                rows.push(json!({
                    "t": format!("{}/{}", t.numer(), t.denom()),
                    "value": format!("{}/{}", v.numer(), v.denom()),
                    "decimal": decimal_render(v),
                }));
            }
            json!({ "cmd": "cone-curve", "input": desc, "samples": rows })
        }
        Cmd::ConeBracket { desc, grid, steps, schedule } => {
            let d = parse_cone_desc(desc)?;
            let ConeBase::FreeGroup(alphabet) = d.base().clone() else {
                return Err(Error::UnsupportedBase(
                    "cone-bracket requires a free-group base".into(),
                ));
            };
            let d = cone_canonicalize(&d)?;
            let schedule: Vec<u32> = parse_list(schedule, |p| {
                p.parse()
                    .map_err(|_| Error::PreconditionViolated(format!("bad power `{p}`")))
            })?;
            let mut tau_brackets = Vec::with_capacity(d.syllables().len());
            for (elem, _) in d.syllables() {
                let conecalc::cone::BaseElement::Free(theta) = elem else {
                    return Err(Error::UnsupportedBase("mixed base elements".into()));
                };
                let est = stable_length_bounds(theta, &alphabet, &schedule, cap)?;
                tau_brackets.push((est.lower, est.upper));
            }
            let grid = match grid {
                Some(g) => parse_list(g, parse_rational)?,
                None => aligned_grid(&d, *steps),
            };
            let bracket = cone_norm_bracket(&d, &grid, &tau_brackets, cap)?;
            json!({
                "cmd": "cone-bracket",
                "input": desc,
                "lower": format!("{}/{}", bracket.lower.numer(), bracket.lower.denom()),
                "upper": format!("{}/{}", bracket.upper.numer(), bracket.upper.denom()),
                "lower_decimal": decimal_render(bracket.lower),
                "upper_decimal": decimal_render(bracket.upper),
                "gap_decimal": decimal_render(bracket.upper - bracket.lower),
                "samples": bracket
                    .samples
                    .iter()
                    .map(|&(t, v)| json!({
                        "t": format!("{}/{}", t.numer(), t.denom()),
                        "value": format!("{}/{}", v.numer(), v.denom()),
                    }))
                    .collect::<Vec<_>>(),
            })
        }
        Cmd::Geodesic { word, t } => {
            let alphabet = resolve_alphabet(cli)?;
            let w = parse_real_word(word, &alphabet)?;
            let ts = parse_list(t, parse_rational)?;
            let cert = rational_norm_exact_capped(&w, &alphabet, cap)?;
            let points = geodesic_sample(&cert.word, &cert.witness, &ts)?;
            json!({
                "cmd": "geodesic",
                "input": word,
                "norm": format!("{}/{}", cert.value.numer(), cert.value.denom()),
                "points": ts
                    .iter()
                    .zip(&points)
                    .map(|(t, p)| json!({
                        "t": format!("{}/{}", t.numer(), t.denom()),
                        "point": p.display(&alphabet),
                    }))
                    .collect::<Vec<_>>(),
            })
        }
        Cmd::Collide { p1, p2, ell } => {
            let sizes = |s: &str| -> Result<Vec<usize>, Error> {
                parse_list(s, |p| {
                    p.parse()
                        .map_err(|_| Error::PreconditionViolated(format!("bad size `{p}`")))
                })
            };
            let p1 = IntervalPartition::from_sizes(&sizes(p1)?)?;
            let p2 = IntervalPartition::from_sizes(&sizes(p2)?)?;
            let (i, j, (lo, hi)) = find_interval_collision(&p1, &p2, *ell)?;
            json!({
                "cmd": "collide",
                "i": i,
                "j": j,
                "interval": [lo, hi],
                "length": hi - lo + 1,
            })
        }
        Cmd::CheckLemmas { seed } => {
            let mut failures = 0;
            for (name, result) in checks::run_all(*seed) {
                match result {
                    Ok(()) => println!("PASS {name}"),
                    Err(msg) => {
                        failures += 1;
                        println!("FAIL {name}: {msg}");
                    }
                }
            }
            if failures > 0 {
                eprintln!("{failures} property suite(s) failed");
                return Ok(1);
            }
            return Ok(0);
        }
        Cmd::Bench { len } => {
            use rand::SeedableRng;
            let alphabet = WeightedAlphabet::unit(["a", "b"]);
            let mut rng = rand::rngs::StdRng::seed_from_u64(0);
            let w = checks::random_reduced_word(&mut rng, 2, *len);
            let t0 = Instant::now();
            let cert = cancellation_norm_capped(&w, &alphabet, cap.max(*len))?;
            let elapsed = t0.elapsed();
            json!({
                "cmd": "bench",
                "len": len,
                "value": format!("{}/{}", cert.value.numer(), cert.value.denom()),
                "dp_ms": elapsed.as_millis() as u64,
            })
        }
    };

    record["time_ms"] = json!(started.elapsed().as_millis() as u64);
    println!("{record}");
    Ok(0)
}

fn merge(rec: &mut Value, extra: Value) {
    if let (Value::Object(dst), Value::Object(src)) = (rec, extra) {
        for (k, v) in src {
            dst.insert(k, v);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
