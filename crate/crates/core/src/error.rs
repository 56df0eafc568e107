use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rectangle [{x}, {x}+{width}) does not fit on a board of width {board_width}")]
    OutOfBoard {
        x: i64,
        width: i64,
        board_width: i64,
    },
    #[error("rectangle width {width} exceeds board width {board_width}")]
    WidthExceedsBoard { width: i64, board_width: i64 },
    #[error("rectangle dimensions must be positive, got {width}x{height}")]
    EmptyRect { width: i64, height: i64 },
    #[error("rectangles {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("board width must be at least 1, got {0}")]
    BadBoardWidth(i64),
    #[error("height overflow: stack would reach or exceed the sentinel height")]
    HeightOverflow,
    #[error("malformed skyline: {0}")]
    MalformedSkyline(String),
    #[error("invalid multiphase instance: {0}")]
    InvalidInstance(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
