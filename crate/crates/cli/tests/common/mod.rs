#![allow(dead_code)]

use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn cswud(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cswud"))
        .args(args)
        .env("CSWUD_TEST_KEY", "test-key")
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

/// Local endpoint that counts and immediately drops every connection.
pub struct Tripwire {
    pub url: String,
    hits: Arc<AtomicUsize>,
}

impl Tripwire {
    pub fn start() -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let hits = Arc::new(AtomicUsize::new(0));
        let counter = Arc::clone(&hits);
        std::thread::spawn(move || {
            for conn in listener.incoming() {
                counter.fetch_add(1, Ordering::SeqCst);
                drop(conn);
            }
        });
        Tripwire { url, hits }
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }

    /// Model settings pointing at this endpoint.
    pub fn write_config(&self, dir: &Path) -> PathBuf {
        let path = dir.join("llm.toml");
        let text = format!("endpoint = \"{}\"\napi_key_env = \"CSWUD_TEST_KEY\"\n", self.url);
        std::fs::write(&path, text).unwrap();
        path
    }
}
