use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread::sleep;
use std::time::Duration;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_squarewar"));
    cmd.env_remove("SQUAREWAR_BOOK");
    cmd
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn solve_into(dir: &Path) -> String {
    let book = dir.join("out/book.json");
    let report = dir.join("out/report.json");
    let (code, stdout) = run(&["solve", "--mode", "paper", "--book", book.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("C_e=842 C_w=842 W_a=true"), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(report["c_e"], 842);
    assert_eq!(report["w_a"], true);
    assert!(report["max_win_stone"].as_u64().unwrap() <= 30);
    book.to_str().unwrap().to_string()
}

#[test]
fn solve_then_verify_book_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let book = solve_into(dir.path());
    let (code, stdout) = run(&["verify", "book", "--book", &book]);
    assert_eq!(code, 0);
    assert!(stdout.contains("842/842 valid"));

    let (code, stdout) = run(&["verify", "replay", "--book", &book, "--games", "200", "--seed", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("games=200 black_wins=200"), "{stdout}");
    let (_, again) = run(&["verify", "replay", "--book", &book, "--games", "200", "--seed", "3"]);
    assert_eq!(stdout, again);

    // the book path can come from the environment
    let out = bin().env("SQUAREWAR_BOOK", &book).args(["verify", "book"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn shallow_search_fails_with_exit_1() {
    let (code, stdout) = run(&["solve", "--max-stone", "9"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("W_a=false"));
}

#[test]
fn corrupted_or_missing_book_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("corrupted.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["verify", "book", "--book", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["verify", "book", "--book", "/nonexistent/book.json"]).0, 2);
    assert_eq!(run(&["serve", "--port", "0", "--book", "/nonexistent/book.json"]).0, 2);
}

#[test]
fn tampered_book_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let book = solve_into(dir.path());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&book).unwrap()).unwrap();
    v["cases"][0]["root"]["black"] = serde_json::json!("A1");
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let (code, stdout) = run(&["verify", "book", "--book", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("841/842 valid"), "{stdout}");
}

#[test]
fn verify_script_reports_zero_failures() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("verify.json");
    let (code, stdout) = run(&["verify", "script", "--report", report.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("failures=0"), "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["script_cases"], 31378);
    assert_eq!(v["script_failures"], serde_json::json!([]));
}

#[test]
fn play_in_terminal() {
    let mut child = bin()
        .arg("play")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Q5\nZ9\nC3\nJ11\nH11\nJ9\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0));
    let black: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim_start_matches("white> ").strip_prefix("black="))
        .collect();
    assert_eq!(black, ["J10", "I10", "I11", "H10", "I9", "H9"]);
    assert!(text.contains("invalid column `Z`"));
    assert!(text.contains("BLACK WINS with square I10 H10 I9 H9"));
}

#[test]
fn play_exits_cleanly_on_eof() {
    let out = bin().arg("play").stdin(Stdio::null()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("black=J10"));
}

fn http(port: u16, request: &str) -> Option<String> {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).ok()?;
    stream.write_all(request.as_bytes()).ok()?;
    let mut buf = String::new();
    stream.read_to_string(&mut buf).ok()?;
    Some(buf)
}

#[test]
fn serve_answers_health_and_games() {
    let dir = tempfile::tempdir().unwrap();
    let book = solve_into(dir.path());
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = bin()
        .args(["serve", "--port", &port.to_string(), "--book", &book])
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let mut health = None;
    for _ in 0..100 {
        health = http(port, "GET /health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n");
        if health.is_some() {
            break;
        }
        sleep(Duration::from_millis(100));
    }
    let created = http(port, "POST /games HTTP/1.1\r\nHost: x\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    child.kill().ok();
    child.wait().ok();
    let health = health.expect("server came up");
    assert!(health.contains(r#""status":"ok""#), "{health}");
    assert!(health.contains(r#""book_cases":842"#));
    let created = created.unwrap();
    assert!(created.starts_with("HTTP/1.1 201"), "{created}");
    assert!(created.contains(r#""history":["J10"]"#));
}
