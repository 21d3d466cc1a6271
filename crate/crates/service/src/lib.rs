//! HTTP API over engine sessions. The engine plays Black; clients submit
//! White's moves and receive the engine's reply in the same response.

use std::collections::{HashMap, VecDeque};
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Mutex;
use tower_http::cors::CorsLayer;

use squarewar::board::GameStatus;
use squarewar::coord::CoordError;
use squarewar::engine::{EngineError, EngineSession};
use squarewar::tactic::CaseClass;
use squarewar::{Color, Coord, MoveError, StrategyBook};

pub const DEFAULT_GAME_CAP: usize = 1024;

pub struct GameResource {
    pub id: String,
    pub session: EngineSession,
    pub created_ms: u64,
    pub updated_ms: u64,
}

/// Games by id, least recently used first.
struct GameTable {
    games: HashMap<String, Arc<Mutex<GameResource>>>,
    lru: VecDeque<String>,
    cap: usize,
}

impl GameTable {
    fn touch(&mut self, id: &str) {
        if let Some(pos) = self.lru.iter().position(|g| g == id) {
            self.lru.remove(pos);
        }
        self.lru.push_back(id.to_string());
    }

    fn insert(&mut self, game: GameResource) -> Arc<Mutex<GameResource>> {
        while self.games.len() >= self.cap {
            match self.lru.pop_front() {
                Some(old) => {
                    self.games.remove(&old);
                }
                None => break,
            }
        }
        let id = game.id.clone();
        let slot = Arc::new(Mutex::new(game));
        self.games.insert(id.clone(), slot.clone());
        self.touch(&id);
        slot
    }

    fn get(&mut self, id: &str) -> Option<Arc<Mutex<GameResource>>> {
        let slot = self.games.get(id).cloned()?;
        self.touch(id);
        Some(slot)
    }

    fn remove(&mut self, id: &str) -> bool {
        self.lru.retain(|g| g != id);
        self.games.remove(id).is_some()
    }
}

#[derive(Clone)]
pub struct AppState {
    book: Arc<StrategyBook>,
    table: Arc<std::sync::Mutex<GameTable>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    pub fn new(book: StrategyBook, cap: usize) -> Self {
        AppState {
            book: Arc::new(book),
            table: Arc::new(std::sync::Mutex::new(GameTable {
                games: HashMap::new(),
                lru: VecDeque::new(),
                cap: cap.max(1),
            })),
            next_id: Arc::new(AtomicU64::new(1)),
        }
    }

    pub fn book(&self) -> &Arc<StrategyBook> {
        &self.book
    }

    fn table(&self) -> std::sync::MutexGuard<'_, GameTable> {
        self.table.lock().expect("game table lock")
    }

    fn lookup(&self, id: &str) -> Result<Arc<Mutex<GameResource>>, ApiError> {
        self.table().get(id).ok_or(ApiError::NotFound)
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug)]
pub enum ApiError {
    NotFound,
    Conflict(&'static str),
    Illegal { reason: &'static str, message: String },
    BadRequest(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, reason, message) = match self {
            ApiError::NotFound => (StatusCode::NOT_FOUND, "not_found", "unknown game".to_string()),
            ApiError::Conflict(reason) => (StatusCode::CONFLICT, reason, reason.replace('_', " ")),
            ApiError::Illegal { reason, message } => (StatusCode::UNPROCESSABLE_ENTITY, reason, message),
            ApiError::BadRequest(message) => (StatusCode::BAD_REQUEST, "malformed_body", message),
            ApiError::Internal(message) => (StatusCode::INTERNAL_SERVER_ERROR, "engine_error", message),
        };
        (status, Json(json!({ "error": reason, "message": message }))).into_response()
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::GameOver => ApiError::Conflict("game_over"),
            EngineError::NotWhitesTurn => ApiError::Conflict("not_whites_turn"),
            EngineError::Illegal(MoveError::Occupied(at)) => ApiError::Illegal {
                reason: "occupied",
                message: format!("{at} is occupied"),
            },
            EngineError::Illegal(MoveError::OutOfBounds(at)) => ApiError::Illegal {
                reason: "out_of_bounds",
                message: format!("{at} is off the board"),
            },
            other => ApiError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GameState {
    pub id: String,
    pub size: u8,
    /// `board[row][col]`, row 0 is rank 1.
    pub board: Vec<Vec<Option<Color>>>,
    pub history: Vec<Coord>,
    pub status: String,
    pub to_move: Option<Color>,
    pub black_threats: Vec<Coord>,
    pub white_threats: Vec<Coord>,
    /// `pending`, `outside_w` or `inside_w`.
    pub case: String,
    pub frame: Option<String>,
    pub engine_move: Option<Coord>,
    pub winning_square: Option<Vec<Coord>>,
    pub win_stone: Option<usize>,
    pub created_ms: u64,
    pub updated_ms: u64,
}

impl GameState {
    fn of(game: &GameResource, engine_move: Option<Coord>) -> Self {
        let board = game.session.board();
        let n = board.size();
        let grid = (0..n)
            .map(|row| (0..n).map(|col| board.get(Coord::new(col, row))).collect())
            .collect();
        let (status, to_move, square, stone) = match board.status() {
            GameStatus::InProgress => ("in_progress", Some(board.to_move()), None, None),
            GameStatus::BlackWin(w) => ("black_win", None, Some(w.square), Some(w.stone)),
            GameStatus::WhiteWin(w) => ("white_win", None, Some(w.square), Some(w.stone)),
        };
        let case = match game.session.case_class() {
            None => "pending",
            Some(CaseClass::OutsideW) => "outside_w",
            Some(CaseClass::InsideW) => "inside_w",
        };
        GameState {
            id: game.id.clone(),
            size: n,
            board: grid,
            history: board.history().to_vec(),
            status: status.to_string(),
            to_move,
            black_threats: board.winning_points(Color::Black).into_iter().collect(),
            white_threats: board.winning_points(Color::White).into_iter().collect(),
            case: case.to_string(),
            frame: game.session.frame().map(|f| f.name().to_string()),
            engine_move,
            winning_square: square.map(|s| s.vertices().to_vec()),
            win_stone: stone,
            created_ms: game.created_ms,
            updated_ms: game.updated_ms,
        }
    }
}

#[derive(Debug, Deserialize)]
struct MoveBody {
    coord: String,
}

async fn health(State(state): State<AppState>) -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "book_cases": state.book.len() }))
}

async fn create_game(State(state): State<AppState>) -> Result<(StatusCode, Json<GameState>), ApiError> {
    let mut session = EngineSession::new(state.book.clone())?;
    let first = session.play_black()?;
    let id = format!("g{}", state.next_id.fetch_add(1, Ordering::Relaxed));
    let now = now_ms();
    let game = GameResource {
        id,
        session,
        created_ms: now,
        updated_ms: now,
    };
    let view = GameState::of(&game, Some(first));
    state.table().insert(game);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<GameState>, ApiError> {
    let slot = state.lookup(&id)?;
    let game = slot.lock().await;
    let last_black = game
        .session
        .board()
        .history()
        .iter()
        .enumerate()
        .rev()
        .find(|(i, _)| i % 2 == 0)
        .map(|(_, &m)| m);
    Ok(Json(GameState::of(&game, last_black)))
}

async fn post_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<GameState>, ApiError> {
    let body: MoveBody = serde_json::from_slice(&body).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let slot = state.lookup(&id)?;
    let mut game = slot.lock().await;
    let n = game.session.board().size();
    let at = Coord::parse(&body.coord, n).map_err(|e| match e {
        CoordError::MalformedInput(_) => ApiError::BadRequest(e.to_string()),
        other => ApiError::Illegal {
            reason: "out_of_bounds",
            message: other.to_string(),
        },
    })?;
    // validate on a copy so a failed engine reply leaves the game untouched
    let mut session = game.session.clone();
    session.play_white(at)?;
    let reply = if session.board().status().is_over() {
        None
    } else {
        Some(session.play_black()?)
    };
    game.session = session;
    game.updated_ms = now_ms();
    Ok(Json(GameState::of(&game, reply)))
}

async fn delete_game(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if state.table().remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::NotFound)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game).delete(delete_game))
        .route("/games/{id}/moves", post(post_move))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
