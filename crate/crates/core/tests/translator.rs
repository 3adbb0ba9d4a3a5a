use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use dualproof::engine::{solve, EngineConfig};
use dualproof::parser::{parse_formula, render};
use dualproof::translator::{
    split_sentences, translate_remote, translate_templated, Dialect, RemoteError, RemoteTranslatorEndpoint,
};
use dualproof::Answer;

const DAVE_NL: [&str; 3] =
    ["If someone is green then they are nice.", "If someone is smart then they are green.", "Dave is smart."];

const DAVE_JSON: &str = r#"{
    "facts": ["Smart(Dave, True)"],
    "rules": ["∀x (Green(x, False) ∨ Nice(x, True))", "∀x (Smart(x, False) ∨ Green(x, True)) ::: smart people are green"],
    "query": "Nice(Dave, False)"
}"#;

struct Seen {
    headers: Vec<String>,
    body: String,
}

/// Answers one scripted `(status, body)` per connection, recording each request.
struct Stub {
    url: String,
    seen: Arc<Mutex<Vec<Seen>>>,
    handle: JoinHandle<()>,
}

impl Stub {
    fn start(script: Vec<(u16, String)>) -> Stub {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/translate", listener.local_addr().unwrap());
        let seen = Arc::new(Mutex::new(Vec::new()));
        let log = Arc::clone(&seen);
        let handle = std::thread::spawn(move || {
            for (status, body) in script {
                let (stream, _) = listener.accept().unwrap();
                let request = read_request(&stream);
                log.lock().unwrap().push(request);
                respond(stream, status, &body);
            }
        });
        Stub { url, seen, handle }
    }

    fn finish(self) -> Vec<Seen> {
        self.handle.join().unwrap();
        Arc::try_unwrap(self.seen).ok().unwrap().into_inner().unwrap()
    }
}

fn read_request(stream: &TcpStream) -> Seen {
    let mut reader = BufReader::new(stream);
    let mut headers = Vec::new();
    loop {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        let line = line.trim_end().to_string();
        if line.is_empty() {
            break;
        }
        headers.push(line);
    }
    let len = headers
        .iter()
        .find_map(|h| h.to_ascii_lowercase().strip_prefix("content-length:").map(|v| v.trim().parse::<usize>().unwrap()))
        .unwrap_or(0);
    let mut body = vec![0; len];
    reader.read_exact(&mut body).unwrap();
    Seen { headers, body: String::from_utf8(body).unwrap() }
}

fn respond(mut stream: TcpStream, status: u16, body: &str) {
    let reply = format!(
        "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(reply.as_bytes()).unwrap();
}

fn endpoint(stub: &Stub, retries: u32) -> RemoteTranslatorEndpoint {
    let mut ep = RemoteTranslatorEndpoint::new(&stub.url).with_retries(retries).with_timeout(Duration::from_secs(5));
    ep.bearer_token = None;
    ep
}

fn premises() -> Vec<String> {
    DAVE_NL.iter().map(|s| s.to_string()).collect()
}

#[test]
fn successful_translation() {
    let stub = Stub::start(vec![(200, DAVE_JSON.into())]);
    let mut ep = endpoint(&stub, 0);
    ep.bearer_token = Some("s3cret".into());
    let out = translate_remote(&premises(), "Dave is not nice.", &ep).unwrap();
    assert_eq!(out.attempts, 1);
    let rendered: Vec<String> = out.translation.premises.iter().map(render).collect();
    assert_eq!(
        rendered,
        ["Smart(Dave, True)", "∀x (Green(x, False) ∨ Nice(x, True))", "∀x (Smart(x, False) ∨ Green(x, True))"]
    );
    assert_eq!(render(&out.translation.query), "Nice(Dave, False)");

    let seen = stub.finish();
    let req = &seen[0];
    assert!(req.headers[0].starts_with("POST /translate"));
    let has = |h: &str| req.headers.iter().any(|l| l.eq_ignore_ascii_case(h));
    assert!(has("X-Schema-Version: 1"), "{:?}", req.headers);
    assert!(has("Authorization: Bearer s3cret"), "{:?}", req.headers);
    let body: serde_json::Value = serde_json::from_str(&req.body).unwrap();
    assert_eq!(body["statement"], "Dave is not nice.");
    assert_eq!(body["premises"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_field_is_schema_error() {
    let stub = Stub::start(vec![(200, r#"{"facts": [], "rules": [], "query": "A(True)", "confidence": 0.9}"#.into())]);
    let err = translate_remote(&premises(), "Dave is not nice.", &endpoint(&stub, 0)).unwrap_err();
    assert!(matches!(err, RemoteError::SchemaError(_)), "{err:?}");
    stub.finish();
}

#[test]
fn missing_field_is_schema_error() {
    let stub = Stub::start(vec![(200, r#"{"facts": [], "query": "A(True)"}"#.into())]);
    let err = translate_remote(&premises(), "q", &endpoint(&stub, 0)).unwrap_err();
    assert!(matches!(err, RemoteError::SchemaError(_)), "{err:?}");
    stub.finish();
}

#[test]
fn unparsable_formula_is_parse_error() {
    let stub = Stub::start(vec![(200, r#"{"facts": ["Smart(Dave"], "rules": [], "query": "A(True)"}"#.into())]);
    let err = translate_remote(&premises(), "q", &endpoint(&stub, 0)).unwrap_err();
    match err {
        RemoteError::ParseError { text, .. } => assert_eq!(text, "Smart(Dave"),
        other => panic!("{other:?}"),
    }
    stub.finish();
}

#[test]
fn server_error_is_retried() {
    let stub = Stub::start(vec![(500, "{}".into()), (200, DAVE_JSON.into())]);
    let out = translate_remote(&premises(), "Dave is not nice.", &endpoint(&stub, 1)).unwrap();
    assert_eq!(out.attempts, 2);
    assert_eq!(stub.finish().len(), 2);
}

#[test]
fn retries_run_out() {
    let stub = Stub::start(vec![(503, "{}".into()), (503, "{}".into())]);
    let err = translate_remote(&premises(), "q", &endpoint(&stub, 1)).unwrap_err();
    assert!(matches!(err, RemoteError::TransportError(_)), "{err:?}");
    stub.finish();
}

#[test]
fn refused_connection_is_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let ep = RemoteTranslatorEndpoint::new(format!("http://127.0.0.1:{port}/")).with_retries(0);
    let err = translate_remote(&premises(), "q", &ep).unwrap_err();
    assert!(matches!(err, RemoteError::TransportError(_)), "{err:?}");
}

#[test]
fn remote_and_templated_reach_the_same_answer() {
    let stub = Stub::start(vec![(200, DAVE_JSON.into())]);
    let remote = translate_remote(&premises(), "Dave is not nice.", &endpoint(&stub, 0)).unwrap().translation;
    stub.finish();
    let templated = translate_templated(&premises(), "Dave is not nice.", Dialect::Proofwriter).unwrap();
    let cfg = EngineConfig::default();
    let a = solve(&remote.premises, &remote.query, &cfg).unwrap();
    let b = solve(&templated.premises, &templated.query, &cfg).unwrap();
    assert_eq!((a.answer, b.answer), (Answer::False, Answer::False));
}

#[test]
fn templated_translation_is_deterministic_and_reparses() {
    let text = "The bear is big. The bear is not cold. If something is big then it is rough. \
                Big, rough things are kind. All kind things are young.";
    let sentences = split_sentences(text);
    let first = translate_templated(&sentences, "The bear is young.", Dialect::Proofwriter).unwrap();
    let second = translate_templated(&sentences, "The bear is young.", Dialect::Proofwriter).unwrap();
    assert_eq!(first, second);
    for f in first.premises.iter().chain([&first.query]) {
        let text = render(f);
        assert_eq!(&parse_formula(&text).unwrap(), f, "{text}");
    }
    let v = solve(&first.premises, &first.query, &EngineConfig::default()).unwrap();
    assert_eq!(v.answer, Answer::True);
}
