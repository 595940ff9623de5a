//! JSON-lines inference traces.

use std::io::Write;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub stage: String,
    pub id: usize,
    /// `input`, `BR`, `PF`, `delete` or `store`.
    pub rule: String,
    pub premises: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unifier: Option<String>,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub types: Vec<u8>,
}

/// A trace sink. The default discards events.
#[derive(Clone, Default)]
pub struct Trace {
    inner: Option<Arc<Mutex<Sink>>>,
}

enum Sink {
    Memory(Vec<Event>),
    Writer(Box<dyn Write + Send>),
}

impl Trace {
    pub fn off() -> Trace {
        Trace::default()
    }

    pub fn memory() -> Trace {
        Trace { inner: Some(Arc::new(Mutex::new(Sink::Memory(Vec::new())))) }
    }

    pub fn writer(w: impl Write + Send + 'static) -> Trace {
        Trace { inner: Some(Arc::new(Mutex::new(Sink::Writer(Box::new(w))))) }
    }

    pub fn is_on(&self) -> bool {
        self.inner.is_some()
    }

    pub fn record(&self, e: Event) {
        let Some(inner) = &self.inner else { return };
        let mut sink = inner.lock().expect("trace lock");
        match &mut *sink {
            Sink::Memory(v) => v.push(e),
            Sink::Writer(w) => {
                // trace output is best effort
                let _ = serde_json::to_writer(&mut *w, &e);
                let _ = w.write_all(b"\n");
            }
        }
    }

    /// Events held by a memory trace.
    pub fn events(&self) -> Vec<Event> {
        match &self.inner {
            Some(inner) => match &*inner.lock().expect("trace lock") {
                Sink::Memory(v) => v.clone(),
                Sink::Writer(_) => Vec::new(),
            },
            None => Vec::new(),
        }
    }

    pub fn flush(&self) {
        if let Some(inner) = &self.inner {
            if let Sink::Writer(w) = &mut *inner.lock().expect("trace lock") {
                let _ = w.flush();
            }
        }
    }
}

impl std::fmt::Debug for Trace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Trace({})", if self.is_on() { "on" } else { "off" })
    }
}
