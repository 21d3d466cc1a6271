//! Terminal game: the engine plays Black, the user types White's moves.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use squarewar::board::GameStatus;
use squarewar::engine::EngineSession;
use squarewar::{Color, Coord, StrategyBook};

pub fn run_play<R: BufRead, W: Write>(book: Arc<StrategyBook>, mut input: R, out: &mut W) -> io::Result<i32> {
    let mut session = match EngineSession::new(book) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "error={e}")?;
            return Ok(2);
        }
    };
    let n = session.board().size();
    loop {
        match session.play_black() {
            Ok(m) => writeln!(out, "black={m}")?,
            Err(e) => {
                writeln!(out, "error={e}")?;
                return Ok(1);
            }
        }
        write!(out, "{}", session.board().render())?;
        if let Some((color, win)) = session.board().status().winner() {
            let mut v = win.square.vertices();
            v.sort_by_key(|&p| std::cmp::Reverse(p));
            let names: Vec<String> = v.iter().map(Coord::to_string).collect();
            let who = if color == Color::Black { "BLACK" } else { "WHITE" };
            writeln!(out, "{who} WINS with square {} at stone {}", names.join(" "), win.stone)?;
            return Ok(0);
        }
        let threats: Vec<String> = session.board().winning_points(Color::Black).iter().map(Coord::to_string).collect();
        if !threats.is_empty() {
            writeln!(out, "black_threats={}", threats.join(","))?;
        }
        loop {
            write!(out, "white> ")?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(0);
            }
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let at = match Coord::parse(text, n) {
                Ok(at) => at,
                Err(e) => {
                    writeln!(out, "error={e}")?;
                    continue;
                }
            };
            match session.play_white(at) {
                Ok(()) => break,
                Err(e) => writeln!(out, "error={e}")?,
            }
        }
        if matches!(session.board().status(), GameStatus::WhiteWin(_)) {
            write!(out, "{}", session.board().render())?;
            writeln!(out, "WHITE WINS")?;
            return Ok(0);
        }
    }
}
