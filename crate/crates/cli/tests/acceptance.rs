//! Runs every reproduction criterion and prints one line per criterion.
//! Exits non-zero if any criterion fails.

use lyness_cli::repro;

fn main() {
    // Criteria with a runtime budget run alone; the rest share the machine.
    let (timed, rest): (Vec<u8>, Vec<u8>) = repro::ALL.iter().partition(|&&id| repro::budget(id).is_some());
    let mut reports: Vec<repro::CriterionReport> = timed.iter().map(|&id| repro::run(id)).collect();
    reports.extend(std::thread::scope(|s| {
        let handles: Vec<_> = rest.iter().map(|&id| s.spawn(move || repro::run(id))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect::<Vec<_>>()
    }));
    reports.sort_by_key(|r| r.id);
    for r in &reports {
        println!("{}", repro::summary_line(r));
        for l in &r.lines {
            println!("    {l}");
        }
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("acceptance: {} of {} criteria passed", reports.len() - failed.len(), reports.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
