use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use poxverifi_core::headline::{FetchError, HeadlineError};
use poxverifi_core::votestore::VoteError;
use serde::{Deserialize, Serialize};

/// Closed set of machine-readable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidRequest,
    NoHeadline,
    FetchFailed,
    ModelUnavailable,
    AlreadyVoted,
    NotVoted,
    VoteRequired,
    NotFound,
    MethodNotAllowed,
    Internal,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 10] = [
        ErrorCode::InvalidRequest,
        ErrorCode::NoHeadline,
        ErrorCode::FetchFailed,
        ErrorCode::ModelUnavailable,
        ErrorCode::AlreadyVoted,
        ErrorCode::NotVoted,
        ErrorCode::VoteRequired,
        ErrorCode::NotFound,
        ErrorCode::MethodNotAllowed,
        ErrorCode::Internal,
    ];

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::InvalidRequest => StatusCode::BAD_REQUEST,
            ErrorCode::NoHeadline | ErrorCode::NotVoted | ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::FetchFailed => StatusCode::BAD_GATEWAY,
            ErrorCode::ModelUnavailable => StatusCode::SERVICE_UNAVAILABLE,
            ErrorCode::AlreadyVoted => StatusCode::CONFLICT,
            ErrorCode::VoteRequired => StatusCode::FORBIDDEN,
            ErrorCode::MethodNotAllowed => StatusCode::METHOD_NOT_ALLOWED,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::InvalidRequest, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.code == ErrorCode::Internal {
            tracing::error!(message = %self.message, "request failed");
        }
        let body = ErrorBody {
            error: ErrorDetail {
                code: self.code,
                message: self.message,
            },
        };
        (self.code.status(), Json(body)).into_response()
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        Self::invalid(e.body_text())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::invalid(e.body_text())
    }
}

impl From<HeadlineError> for ApiError {
    fn from(e: HeadlineError) -> Self {
        match e {
            HeadlineError::NoHeadline => Self::new(ErrorCode::NoHeadline, e.to_string()),
            HeadlineError::MalformedUrl(_) => Self::invalid(e.to_string()),
        }
    }
}

impl From<FetchError> for ApiError {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::InvalidUrl(_) => Self::invalid(e.to_string()),
            _ => Self::new(ErrorCode::FetchFailed, e.to_string()),
        }
    }
}

impl From<VoteError> for ApiError {
    fn from(e: VoteError) -> Self {
        let code = match e {
            VoteError::AlreadyVoted => ErrorCode::AlreadyVoted,
            VoteError::NotVoted => ErrorCode::NotVoted,
            VoteError::NotVotedYet => ErrorCode::VoteRequired,
            VoteError::InvalidInstallation(_) | VoteError::InvalidValue(_) => ErrorCode::InvalidRequest,
            VoteError::CorruptLog { .. } | VoteError::CorruptSnapshot(_) | VoteError::Io { .. } => {
                ErrorCode::Internal
            }
        };
        Self::new(code, e.to_string())
    }
}
