//! Scripted chat-completions server on a local port.
//!
//! Each request is matched to a record by the code between the prompt's
//! input and context headings, then answered with that record's next
//! scripted exchange.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use serde_json::Value;

#[derive(Debug, Clone)]
pub struct Exchange {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: String,
}

impl Exchange {
    pub fn from_json(v: &Value) -> Self {
        let headers = v
            .get("headers")
            .and_then(Value::as_object)
            .map(|h| {
                h.iter()
                    .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
                    .collect()
            })
            .unwrap_or_default();
        let body = match &v["body"] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        Exchange {
            status: v["status"].as_u64().expect("status") as u16,
            headers,
            body,
        }
    }

    pub fn completion(text: &str) -> Self {
        let body = serde_json::json!({"choices": [{"message": {"role": "assistant", "content": text}}]});
        Exchange {
            status: 200,
            headers: Vec::new(),
            body: body.to_string(),
        }
    }
}

#[derive(Default)]
struct State {
    by_code: HashMap<String, String>,
    script: Mutex<HashMap<String, VecDeque<Exchange>>>,
    /// Fallback when the prompt matches no record.
    default: Mutex<VecDeque<Exchange>>,
    requests: Mutex<Vec<String>>,
    in_flight: AtomicUsize,
    peak: AtomicUsize,
    delay: Duration,
}

pub struct StubServer {
    pub url: String,
    state: Arc<State>,
}

fn prompt_code(prompt: &str) -> Option<&str> {
    let start = prompt.find("### Input:\n")? + "### Input:\n".len();
    let end = prompt[start..].find("\n### Context:\n")? + start;
    Some(&prompt[start..end])
}

fn read_request(stream: &mut TcpStream) -> Option<Value> {
    let mut reader = BufReader::new(stream.try_clone().ok()?);
    let mut length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                length = v.trim().parse().ok()?;
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).ok()?;
    serde_json::from_slice(&body).ok()
}

fn respond(stream: &mut TcpStream, ex: &Exchange) {
    let mut head = format!(
        "HTTP/1.1 {} Stub\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n",
        ex.status,
        ex.body.len()
    );
    for (k, v) in &ex.headers {
        head.push_str(&format!("{k}: {v}\r\n"));
    }
    head.push_str("\r\n");
    let _ = stream.write_all(head.as_bytes());
    let _ = stream.write_all(ex.body.as_bytes());
    let _ = stream.flush();
}

fn handle(state: &State, mut stream: TcpStream) {
    let now = state.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
    state.peak.fetch_max(now, Ordering::SeqCst);
    let exchange = read_request(&mut stream).and_then(|req| {
        let prompt = req.pointer("/messages/0/content")?.as_str()?.to_string();
        let id = prompt_code(&prompt).and_then(|c| state.by_code.get(c)).cloned();
        state.requests.lock().unwrap().push(id.clone().unwrap_or_default());
        match id {
            Some(id) => state.script.lock().unwrap().get_mut(&id)?.pop_front(),
            None => state.default.lock().unwrap().pop_front(),
        }
    });
    if !state.delay.is_zero() {
        thread::sleep(state.delay);
    }
    let exchange = exchange.unwrap_or(Exchange {
        status: 404,
        headers: Vec::new(),
        body: r#"{"error": "no scripted exchange"}"#.into(),
    });
    state.in_flight.fetch_sub(1, Ordering::SeqCst);
    respond(&mut stream, &exchange);
}

impl StubServer {
    /// `script` maps record ids to exchanges; `codes` maps each record's
    /// original code to its id.
    pub fn start(script: HashMap<String, Vec<Exchange>>, codes: HashMap<String, String>, delay: Duration) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub port");
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let state = Arc::new(State {
            by_code: codes,
            script: Mutex::new(script.into_iter().map(|(k, v)| (k, v.into())).collect()),
            delay,
            ..State::default()
        });
        let shared = Arc::clone(&state);
        thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                let s = Arc::clone(&shared);
                thread::spawn(move || handle(&s, stream));
            }
        });
        StubServer { url, state }
    }

    /// Answers every request from one queue, whatever the prompt.
    pub fn sequence(responses: Vec<Exchange>, delay: Duration) -> Self {
        let server = Self::start(HashMap::new(), HashMap::new(), delay);
        *server.state.default.lock().unwrap() = responses.into();
        server
    }

    /// Loads `exchanges.json` and the records file of a fixture directory.
    pub fn from_fixture(exchanges: &str, records_jsonl: &str) -> Self {
        let raw: HashMap<String, Vec<Value>> = serde_json::from_str(exchanges).expect("exchanges parse");
        let script = raw
            .into_iter()
            .map(|(id, v)| (id, v.iter().map(Exchange::from_json).collect()))
            .collect();
        let codes = records_jsonl
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let v: Value = serde_json::from_str(l).expect("record parses");
                (v["output"].as_str().unwrap().to_string(), v["id"].as_str().unwrap().to_string())
            })
            .collect();
        Self::start(script, codes, Duration::ZERO)
    }

    pub fn requests(&self) -> Vec<String> {
        self.state.requests.lock().unwrap().clone()
    }

    pub fn peak_in_flight(&self) -> usize {
        self.state.peak.load(Ordering::SeqCst)
    }
}
