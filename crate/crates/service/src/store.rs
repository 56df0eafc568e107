//! In-memory game sessions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use rdds::{GreedyMove, Rdds, Skyline};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::error::ServiceError;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

/// One applied drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub w: i64,
    pub h: i64,
    pub x: i64,
}

/// Result of a drop: where the piece came to rest and the new board maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropResult {
    pub landing: i64,
    pub max: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub skyline: Skyline,
    pub score: i64,
    pub move_log: Vec<Move>,
}

#[derive(Debug)]
pub struct GameSession {
    pub id: Uuid,
    rdds: Rdds,
    move_log: Vec<Move>,
    last_used: Instant,
}

impl GameSession {
    fn new(width: i64) -> Result<Self, ServiceError> {
        Ok(GameSession {
            id: Uuid::new_v4(),
            rdds: Rdds::new(width)?,
            move_log: Vec::new(),
            last_used: Instant::now(),
        })
    }

    pub fn score(&self) -> i64 {
        self.rdds.global_max()
    }

    pub fn move_log(&self) -> &[Move] {
        &self.move_log
    }

    pub fn state(&self) -> GameState {
        GameState {
            skyline: self.rdds.snapshot(),
            score: self.score(),
            move_log: self.move_log.clone(),
        }
    }

    pub fn query(&self, w: i64, h: i64) -> Result<GreedyMove, ServiceError> {
        Ok(self.rdds.query(w, h)?)
    }

    pub fn drop_piece(&mut self, w: i64, h: i64, x: i64) -> Result<DropResult, ServiceError> {
        let landing = self.rdds.landing_height(w, x)?;
        let max = self.rdds.update(w, h, x)?;
        self.move_log.push(Move { w, h, x });
        Ok(DropResult { landing, max })
    }
}

type Shared = Arc<Mutex<GameSession>>;

/// Sessions by id. Each session sits behind its own lock, so requests on one
/// game are serialized while different games proceed independently.
#[derive(Debug, Clone)]
pub struct SessionStore {
    sessions: Arc<RwLock<HashMap<Uuid, Shared>>>,
    idle_timeout: Duration,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(DEFAULT_IDLE_TIMEOUT)
    }
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> Self {
        SessionStore {
            sessions: Arc::default(),
            idle_timeout,
        }
    }

    pub fn idle_timeout(&self) -> Duration {
        self.idle_timeout
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create_game(&self, width: i64) -> Result<Uuid, ServiceError> {
        let session = GameSession::new(width)?;
        let id = session.id;
        self.sessions
            .write()
            .unwrap()
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(id)
    }

    /// Run `f` on the session with exclusive access.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut GameSession) -> Result<T, ServiceError>,
    ) -> Result<T, ServiceError> {
        let unknown = || ServiceError::UnknownSession(id.to_owned());
        let key = Uuid::parse_str(id).map_err(|_| unknown())?;
        let session = self.sessions.read().unwrap().get(&key).cloned().ok_or_else(unknown)?;
        let mut guard = session.lock().unwrap_or_else(|p| p.into_inner());
        guard.last_used = Instant::now();
        f(&mut guard)
    }

    pub fn get_state(&self, id: &str) -> Result<GameState, ServiceError> {
        self.with_session(id, |s| Ok(s.state()))
    }

    pub fn post_query(&self, id: &str, w: i64, h: i64) -> Result<GreedyMove, ServiceError> {
        self.with_session(id, |s| s.query(w, h))
    }

    pub fn post_drop(&self, id: &str, w: i64, h: i64, x: i64) -> Result<DropResult, ServiceError> {
        self.with_session(id, |s| s.drop_piece(w, h, x))
    }

    /// Drop sessions idle for longer than the timeout as of `now`. Returns how
    /// many were removed.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let mut map = self.sessions.write().unwrap();
        let before = map.len();
        map.retain(|_, s| match s.try_lock() {
            Ok(g) => now.saturating_duration_since(g.last_used) <= self.idle_timeout,
            // Busy right now, so not idle.
            Err(_) => true,
        });
        before - map.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn create_query_drop() {
        let store = SessionStore::default();
        let id = store.create_game(10).unwrap().to_string();
        let mv = store.post_query(&id, 3, 2).unwrap();
        assert_eq!((mv.x, mv.landing, mv.resulting_max), (0, 0, 2));
        let d = store.post_drop(&id, 3, 2, mv.x).unwrap();
        assert_eq!(d, DropResult { landing: 0, max: 2 });
        let state = store.get_state(&id).unwrap();
        assert_eq!(state.score, 2);
        assert_eq!(state.move_log, vec![Move { w: 3, h: 2, x: 0 }]);
    }

    #[test]
    fn failed_drop_leaves_log_untouched() {
        let store = SessionStore::default();
        let id = store.create_game(5).unwrap().to_string();
        assert!(matches!(store.post_drop(&id, 3, 1, 4), Err(ServiceError::Board(_))));
        assert!(store.get_state(&id).unwrap().move_log.is_empty());
    }

    #[test]
    fn unknown_and_malformed_ids() {
        let store = SessionStore::default();
        let fresh = Uuid::new_v4().to_string();
        assert!(matches!(store.get_state(&fresh), Err(ServiceError::UnknownSession(_))));
        assert!(matches!(store.get_state("nope"), Err(ServiceError::UnknownSession(_))));
    }

    #[test]
    fn idle_sessions_are_evicted() {
        let store = SessionStore::new(Duration::from_secs(60));
        let old = store.create_game(4).unwrap().to_string();
        let now = Instant::now();
        let keep = store.create_game(4).unwrap().to_string();
        assert_eq!(store.evict_idle(now + Duration::from_secs(30)), 0);
        store.get_state(&keep).unwrap();
        let later = Instant::now() + Duration::from_secs(61);
        // Both are idle by then.
        assert_eq!(store.evict_idle(later), 2);
        assert!(store.get_state(&old).is_err());
        assert!(store.is_empty());
    }
}
