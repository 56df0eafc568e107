//! Greedy placement of axis-aligned rectangles dropped onto a board of fixed
//! width, in the style of Tetris without row clearing.
//!
//! [`Rdds`] keeps the skyline of everything dropped so far and answers two
//! questions: where should a `w x h` rectangle go so that it comes to rest as
//! low as possible ([`Rdds::query`]), and what happens when it is dropped at a
//! chosen position ([`Rdds::update`]). Both take roughly `sqrt(n)` polylog time
//! for `n` rectangles.

pub mod bench;
pub mod check;
pub mod error;
pub mod geometry;
pub mod height_index;
pub mod multiphase;
pub mod oracle;
pub mod ordtree;
pub mod rdds;
pub mod script;

pub use error::{Error, Result};
pub use geometry::{build_skyline, Rect, Run, Side, Skyline, Staircase, Step, HMAX};
pub use height_index::{HeightIndex, Slot};
pub use oracle::ColumnBoard;
pub use rdds::{chunk_param, ChunkPolicy, GreedyMove, Rdds, UpdateStats};
pub use script::{Op, Outcome};
