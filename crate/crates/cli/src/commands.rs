use std::error::Error;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use trine_qkd::channel::sample_record;
use trine_qkd::curves::{
    fmt_sig, rate_curve, round_sig, security_curve, write_curve_csv, write_rates_csv, CurveRow, RateRow,
    ThresholdReport,
};
use trine_qkd::keygen::{case_probabilities, generate_keys, mutual_information, symbol_error_rates, KeyStatistics};
use trine_qkd::security::threshold;
use trine_qkd::trine::{joint_probabilities, TrineLetter};
use trine_qkd::{verify, KeyCase};

use crate::{Cli, Command, Format};

type CmdResult = Result<(), Box<dyn Error>>;

pub fn run(cli: &Cli) -> CmdResult {
    match cli.command {
        Command::Probs => probs(cli),
        Command::Simulate => simulate(cli),
        Command::Curves => curves(cli),
        Command::Thresholds => thresholds(cli),
        Command::Verify { rff_samples } => verify(cli, rff_samples),
    }
}

/// Writes to `--out` if given, else to stdout.
fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn r6(x: f64) -> Value {
    json!(round_sig(x, 6))
}

fn r6_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, r6)
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn probs(cli: &Cli) -> CmdResult {
    let table = joint_probabilities(cli.epsilon)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("alice,A,B,C\n");
            for (a, row) in TrineLetter::ALL.iter().zip(&table) {
                let cells: Vec<String> = row.iter().map(|&p| fmt_sig(p)).collect();
                writeln!(s, "{a},{}", cells.join(","))?;
            }
            s
        }
        Format::Json => to_json(&json!({
            "epsilon": r6(cli.epsilon),
            "letters": ["A", "B", "C"],
            "table": table.iter().map(|row| row.iter().map(|&p| r6(p)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
    };
    emit(cli.out.as_deref(), &text)
}

/// One reported quantity: simulated value next to its analytic value.
struct Stat {
    name: String,
    empirical: Option<f64>,
    analytic: Option<f64>,
}

fn stat(name: impl Into<String>, empirical: Option<f64>, analytic: Option<f64>) -> Stat {
    Stat { name: name.into(), empirical, analytic }
}

fn ratio(k: usize, n: usize) -> Option<f64> {
    (n > 0).then(|| k as f64 / n as f64)
}

fn simulate(cli: &Cli) -> CmdResult {
    let eps = cli.epsilon;
    let rounds = usize::try_from(cli.rounds)?;
    let record = sample_record(eps, rounds, cli.seed)?;
    let keys = generate_keys(&record);
    let stats = KeyStatistics::from_keys(&keys);

    let table = joint_probabilities(eps)?;
    let mut counts = [[0usize; 3]; 3];
    for (a, b) in record.slots() {
        counts[a.index()][b.index()] += 1;
    }
    let mut rows = Vec::new();
    for a in TrineLetter::ALL {
        for b in TrineLetter::ALL {
            let (i, j) = (a.index(), b.index());
            rows.push(stat(format!("p_{a}{b}"), ratio(counts[i][j], rounds), Some(table[i][j])));
        }
    }
    let (p_trit, p_bit) = case_probabilities(eps)?;
    let rates = symbol_error_rates(eps)?;
    rows.push(stat("p_trit", ratio(stats.trit_total(), stats.pairs), Some(p_trit)));
    rows.push(stat("p_bit", ratio(stats.bit_total(), stats.pairs), Some(p_bit)));
    rows.push(stat("trit_error_rate", ratio(stats.trit_errors(), stats.trit_total()), Some(6.0 * rates.trit_wrong)));
    rows.push(stat("bit_error_rate", ratio(stats.bit_errors(), stats.bit_total()), Some(2.0 * rates.bit_wrong)));
    for case in [KeyCase::Trit, KeyCase::Bit] {
        let total = match case {
            KeyCase::Trit => stats.trit_total(),
            KeyCase::Bit => stats.bit_total(),
        };
        let empirical = (total > 0).then(|| stats.empirical_mutual_information(case));
        rows.push(stat(format!("i_{}", case.as_str()), empirical, Some(mutual_information(eps, case)?)));
    }
    let n = |k: usize| Some(k as f64);
    rows.push(stat("pairs", n(stats.pairs), None));
    rows.push(stat("trit_key_length", n(keys.alice.trit_key.len()), None));
    rows.push(stat("bit_key_length", n(keys.alice.bit_key.len()), None));
    rows.push(stat("trit_key_errors", n(stats.trit_errors()), None));
    rows.push(stat("bit_key_errors", n(stats.bit_errors()), None));

    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("quantity,empirical,analytic\n");
            let cell = |x: Option<f64>| x.map(fmt_sig).unwrap_or_default();
            for r in &rows {
                writeln!(s, "{},{},{}", r.name, cell(r.empirical), cell(r.analytic))?;
            }
            s
        }
        Format::Json => {
            let quantities: serde_json::Map<String, Value> = rows
                .iter()
                .map(|r| (r.name.clone(), json!({ "empirical": r6_opt(r.empirical), "analytic": r6_opt(r.analytic) })))
                .collect();
            to_json(&json!({
                "epsilon": r6(eps),
                "rounds": rounds,
                "seed": cli.seed,
                "quantities": quantities,
            }))
        }
    };

    // With --out the record and keys go to a directory and the summary to stdout.
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        record.write_csv(BufWriter::new(File::create(dir.join("record.csv"))?))?;
        let key_file = |name: &str, write: &dyn Fn(&mut BufWriter<File>) -> std::io::Result<()>| -> CmdResult {
            let mut w = BufWriter::new(File::create(dir.join(name))?);
            write(&mut w)?;
            writeln!(w)?;
            w.flush()?;
            Ok(())
        };
        key_file("alice_bits.txt", &|w| keys.alice.write_bits(w))?;
        key_file("bob_bits.txt", &|w| keys.bob.write_bits(w))?;
        key_file("alice_trits.txt", &|w| keys.alice.write_trits(w))?;
        key_file("bob_trits.txt", &|w| keys.bob.write_trits(w))?;
        let mut w = BufWriter::new(File::create(dir.join("announcements.jsonl"))?);
        keys.write_announcements(&mut w)?;
        w.flush()?;
    }
    emit(None, &text)
}

fn curve_json(rows: &[CurveRow]) -> Value {
    rows.iter()
        .map(|r| {
            json!({
                "epsilon": r6(r.epsilon),
                "i_key": r6(r.i_key),
                "chi_alice": r6_opt(r.chi_alice),
                "chi_bob": r6_opt(r.chi_bob),
                "c_star_alice": r6_opt(r.c_star_alice),
                "c_star_bob": r6_opt(r.c_star_bob),
            })
        })
        .collect()
}

fn rates_json(rows: &[RateRow]) -> Value {
    rows.iter()
        .map(|r| {
            json!({
                "epsilon": r6(r.epsilon),
                "i_bit": r6(r.i_bit),
                "i_trit": r6(r.i_trit),
                "key_rate": r6(r.key_rate),
                "shannon_limit": r6(r.shannon_limit),
            })
        })
        .collect()
}

fn curves(cli: &Cli) -> CmdResult {
    let grid = cli.grid.points();
    let sides = cli.side.sides();
    let per_case = cli
        .case
        .cases()
        .into_iter()
        .map(|case| Ok((case, security_curve(case, &sides, &grid)?)))
        .collect::<trine_qkd::Result<Vec<_>>>()?;
    let rates = rate_curve(&grid)?;

    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut files: Vec<(String, Vec<u8>)> = Vec::new();
            for (case, rows) in &per_case {
                let mut buf = Vec::new();
                write_curve_csv(&mut buf, rows)?;
                files.push((format!("curves_{}.csv", case.as_str()), buf));
            }
            let mut buf = Vec::new();
            write_rates_csv(&mut buf, &rates)?;
            files.push(("rates.csv".into(), buf));

            match &cli.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    for (name, buf) in &files {
                        fs::write(dir.join(name), buf)?;
                    }
                }
                None => {
                    let mut out = std::io::stdout().lock();
                    for (i, (name, buf)) in files.iter().enumerate() {
                        if i > 0 {
                            writeln!(out)?;
                        }
                        writeln!(out, "# {name}")?;
                        out.write_all(buf)?;
                    }
                }
            }
        }
        Format::Json => {
            let mut doc = serde_json::Map::new();
            for (case, rows) in &per_case {
                doc.insert(case.as_str().into(), curve_json(rows));
            }
            doc.insert("rates".into(), rates_json(&rates));
            let text = to_json(&Value::Object(doc));
            match &cli.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join("curves.json"), text)?;
                }
                None => emit(None, &text)?,
            }
        }
    }
    Ok(())
}

fn thresholds(cli: &Cli) -> CmdResult {
    let jobs: Vec<_> = cli
        .case
        .cases()
        .into_iter()
        .flat_map(|case| cli.side.sides().into_iter().map(move |side| (case, side)))
        .collect();
    let results =
        jobs.par_iter().map(|&(case, side)| threshold::<f64>(case, side)).collect::<trine_qkd::Result<Vec<_>>>()?;
    let report = ThresholdReport::new(results);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = report.to_json()?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("case,side,epsilon_star,info,c_star\n");
            for r in &report.results {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.case.as_str(),
                    r.side.as_str(),
                    fmt_sig(r.epsilon_star),
                    fmt_sig(r.info),
                    fmt_sig(r.c_star)
                )?;
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn verify(cli: &Cli, rff_samples: usize) -> CmdResult {
    let outcomes = verify::run_all(rff_samples, cli.seed)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&serde_json::to_value(&outcomes)?),
        Format::Csv => {
            let mut s = String::new();
            for o in &outcomes {
                writeln!(s, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(format!("{failed} of {} checks failed", outcomes.len()).into());
    }
    Ok(())
}
