use std::io::Write;

use irn_seeding::SimulationEstimate;

/// Agreement threshold in standard errors.
pub const AGREEMENT_SIGMAS: f64 = 3.0;

/// One analytic quantity paired with its Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub quantity: String,
    pub analytic: f64,
    pub simulated: SimulationEstimate,
}

impl ReportRow {
    pub fn agrees(&self) -> bool {
        (self.analytic - self.simulated.mean).abs() <= AGREEMENT_SIGMAS * self.simulated.std_error
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(ReportRow::agrees)
    }

    pub fn row(&self, quantity: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "analytic", "simulated_mean", "std_error", "trials", "agree"])?;
        for r in &self.rows {
            w.write_record([
                r.quantity.clone(),
                r.analytic.to_string(),
                r.simulated.mean.to_string(),
                r.simulated.std_error.to_string(),
                r.simulated.trials.to_string(),
                r.agrees().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Two-column `quantity,value` table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueTable {
    pub rows: Vec<(String, String)>,
}

impl KeyValueTable {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.rows.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "value"])?;
        for (k, v) in &self.rows {
            w.write_record([k, v])?;
        }
        w.flush()?;
        Ok(())
    }
}
