use dyadic_ns::harness::{run_suite, HarnessConfig};

fn main() {
    dyadic_ns::harness::init_thread_pool();
    let cfg = HarnessConfig::default();
    for name in std::env::args().skip(1) {
        match run_suite(&name, &cfg) {
            Ok(report) => {
                println!("== {name}: {} ({:.2}s)", if report.passed() { "PASS" } else { "FAIL" }, report.wall_time_s);
                for a in &report.assertions {
                    println!("  [{}] {} measured={:?} tol={:?} {}",
                        if matches!(a.status, dyadic_ns::harness::Status::Pass) { "ok" } else { "FAIL" },
                        a.id, a.measured, a.tolerance, a.note.as_deref().unwrap_or(""));
                }
            }
            Err(e) => println!("== {name}: ERROR {e}"),
        }
    }
}
