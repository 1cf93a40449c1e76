use std::io::Write;

use avgtime::measure::{format_float, Rational, BOUND_CSV_HEADER};

use crate::Result;

/// Verdict of one reported row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known deviation that failed as recorded.
    ExpectedFail,
    /// A known deviation that unexpectedly passed.
    UnexpectedPass,
    /// Reported for reference, not asserted.
    Info,
}

impl Status {
    pub fn judge(pass: bool, expected_fail: bool) -> Self {
        match (pass, expected_fail) {
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
            (false, true) => Status::ExpectedFail,
            (true, true) => Status::UnexpectedPass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "true",
            Status::Fail => "false",
            Status::ExpectedFail => "expected_fail",
            Status::UnexpectedPass => "unexpected_pass",
            Status::Info => "info",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::UnexpectedPass)
    }
}

/// A CSV result with an overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            ok: true,
        }
    }

    /// The bound schema with a leading `report` column.
    pub fn bounds() -> Self {
        let mut header = vec!["report"];
        header.extend(BOUND_CSV_HEADER.split(','));
        Self::new(&header)
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn fail(&mut self) {
        self.ok = false;
    }

    /// Appends a bound-schema row.
    pub fn bound(&mut self, report: &str, n: impl ToString, lhs: &Rational, rhs: &Rational, status: Status) {
        if status.is_failure() {
            self.ok = false;
        }
        self.push(vec![
            report.to_string(),
            n.to_string(),
            lhs.numer().to_string(),
            lhs.denom().to_string(),
            rhs.numer().to_string(),
            rhs.denom().to_string(),
            format_float(lhs),
            format_float(rhs),
            status.as_str().to_string(),
        ]);
    }

    /// Rows whose `report` column equals `report`.
    pub fn select<'a>(&'a self, report: &'a str) -> impl Iterator<Item = &'a Vec<String>> + 'a {
        self.rows.iter().filter(move |r| r[0] == report)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

pub fn fraction(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn float(x: f64) -> String {
    format!("{x:e}")
}
