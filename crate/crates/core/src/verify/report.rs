use serde::Serialize;

/// Failures stored per record; further failures are only counted.
pub const MAX_STORED_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub vector: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            instances: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn pass_instance(&mut self) {
        self.instances += 1;
    }

    pub fn fail(&mut self, f: Failure) {
        self.instances += 1;
        self.failure_count += 1;
        self.pass = false;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(f);
        }
    }

    /// Records one comparison.
    pub fn check(&mut self, ok: bool, make: impl FnOnce() -> Failure) {
        if ok {
            self.pass_instance();
        } else {
            self.fail(make());
        }
    }

    /// Folds another record with the same id into this one, keeping order.
    pub fn merge(&mut self, other: CheckRecord) {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        self.pass &= other.pass;
        for f in other.failures {
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(f);
            }
        }
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn extend(&mut self, records: Vec<CheckRecord>) {
        self.records.extend(records);
        self.pass = self.records.iter().all(|r| r.pass);
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn total_failures(&self) -> u64 {
        self.records.iter().map(|r| r.failure_count).sum()
    }

    pub fn total_instances(&self) -> u64 {
        self.records.iter().map(|r| r.instances).sum()
    }
}

/// Merges per-vector record lists (same ids, same order) into one list.
pub fn merge_lists(parts: Vec<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    let mut it = parts.into_iter();
    let Some(mut acc) = it.next() else {
        return Vec::new();
    };
    for part in it {
        for (a, b) in acc.iter_mut().zip(part) {
            debug_assert_eq!(a.id, b.id);
            a.merge(b);
        }
    }
    acc
}
