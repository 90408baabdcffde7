//! Machine-readable check records: `PASS|FAIL <check> <judgement-id> <groupoid>`.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Record {
    pub check: String,
    pub judgement: String,
    pub groupoid: String,
    pub pass: bool,
    /// Free-form explanation, kept out of the line format.
    pub detail: Option<String>,
}

fn token(s: &str) -> String {
    if s.is_empty() {
        return "-".into();
    }
    s.split_whitespace().collect::<Vec<_>>().join("_")
}

impl Record {
    pub fn new(check: &str, judgement: &str, groupoid: &str, pass: bool) -> Self {
        Record {
            check: token(check),
            judgement: token(judgement),
            groupoid: token(groupoid),
            pass,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn from_result<E: fmt::Display>(
        check: &str,
        judgement: &str,
        groupoid: &str,
        r: Result<(), E>,
    ) -> Self {
        match r {
            Ok(()) => Record::new(check, judgement, groupoid, true),
            Err(e) => Record::new(check, judgement, groupoid, false).with_detail(e.to_string()),
        }
    }

    fn key(&self) -> (&str, &str, &str) {
        (&self.check, &self.judgement, &self.groupoid)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.judgement,
            self.groupoid
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    records: Vec<Record>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    /// Records in canonical order: by check, judgement, then groupoid.
    pub fn records(&self) -> Vec<&Record> {
        let mut v: Vec<&Record> = self.records.iter().collect();
        v.sort_by(|a, b| a.key().cmp(&b.key()).then(a.pass.cmp(&b.pass)));
        v
    }

    pub fn failures(&self) -> Vec<&Record> {
        self.records().into_iter().filter(|r| !r.pass).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn count(&self, check: &str) -> (usize, usize) {
        let rs = self.records.iter().filter(|r| r.check == check);
        let (mut pass, mut fail) = (0, 0);
        for r in rs {
            if r.pass {
                pass += 1
            } else {
                fail += 1
            }
        }
        (pass, fail)
    }

    /// One line per record, sorted.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for r in self.records() {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_are_sorted_and_tokenized() {
        let mut r = Report::new();
        r.push(Record::new("truncation", "-", "z2", true));
        r.push(Record::new("interpret", "stdlib/inv", "interval", false));
        r.push(Record::new("interpret", "a b", "", true));
        assert_eq!(
            r.to_lines(),
            "PASS interpret a_b -\nFAIL interpret stdlib/inv interval\nPASS truncation - z2\n"
        );
        assert_eq!(r.failures().len(), 1);
        assert_eq!(r.count("interpret"), (1, 1));
    }
}
