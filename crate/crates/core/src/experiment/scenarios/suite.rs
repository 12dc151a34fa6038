use crate::counting::suites::{run_suite, Check, SuiteOptions};
use crate::error::Result;
use crate::experiment::config::LemmaSuiteScenario;
use crate::experiment::output::{Findings, Sink, Table};

pub fn run(s: &LemmaSuiteScenario, seed: u64, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let opts = SuiteOptions { seed, cases: s.cases, xi: s.xi, beta: s.beta };
    let mut table = Table::new(&["suite", "check", "measured", "limit", "passed"]);
    for &suite in &s.suites {
        let report = run_suite(suite, &opts)?;
        let name = suite.cli_name();
        sink.json(&format!("{name}.json"), &report)?;
        for c in &report.checks {
            table.text_row(&[
                name.to_string(),
                c.name.clone(),
                c.measured.to_string(),
                c.limit.to_string(),
                c.passed.to_string(),
            ]);
            found.check(Check { name: format!("{name}/{}", c.name), ..c.clone() });
        }
        for (k, v) in &report.constants {
            found.constant(format!("{name}/{k}"), *v);
        }
        sink.csv("checks.csv", &table)?;
    }
    Ok(())
}
