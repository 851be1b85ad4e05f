//! Per-thread wall-clock budget checked by long-running loops.

use std::cell::RefCell;
use std::time::Instant;

use crate::error::{Error, Result};

#[derive(Default)]
struct State {
    deadline: Option<Instant>,
    stage: String,
}

thread_local! {
    static STATE: RefCell<State> = RefCell::new(State::default());
}

/// Runs `f` with a deadline installed on the current thread; the previous budget is restored
/// afterwards.
pub fn with_deadline<T>(deadline: Option<Instant>, f: impl FnOnce() -> T) -> T {
    let prev = STATE.with(|s| s.borrow_mut().deadline.take());
    STATE.with(|s| s.borrow_mut().deadline = deadline);
    let out = f();
    STATE.with(|s| s.borrow_mut().deadline = prev);
    out
}

/// Records the pipeline stage reported by a timeout.
pub fn enter_stage(stage: &str) -> Result<()> {
    STATE.with(|s| s.borrow_mut().stage = stage.to_string());
    check()
}

pub fn current_stage() -> String {
    STATE.with(|s| s.borrow().stage.clone())
}

/// Fails with [`Error::Timeout`] once the deadline has passed.
pub fn check() -> Result<()> {
    STATE.with(|s| {
        let s = s.borrow();
        match s.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout { stage: s.stage.clone() }),
            _ => Ok(()),
        }
    })
}
