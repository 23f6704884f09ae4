//! One line per acceptance criterion. Runtime limits are checked here since
//! the report itself carries no timings.

use std::process::ExitCode;
use std::time::Instant;

use coarse_geom::verify::{verify_paper, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::default().with_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let report = match verify_paper(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let mut all = true;
    for c in &report.criteria {
        let timely = c.within_time_limit();
        let ok = c.passed && timely;
        all &= ok;
        let measured: Vec<String> = c.measured.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
        let limit = c.time_limit.map_or(String::new(), |l| format!(" limit {}s", l.as_secs()));
        println!(
            "criterion {:>2} {:<26} {} [{:.2}s{limit}] {}{}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            c.elapsed.as_secs_f64(),
            measured.join(" "),
            if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) },
        );
        if !timely {
            println!("             over the runtime limit");
        }
    }
    let total = start.elapsed().as_secs_f64();
    let in_budget = total < 180.0;
    println!("total {total:.1}s (limit 180s) {}", if in_budget { "PASS" } else { "FAIL" });
    if all && in_budget {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
