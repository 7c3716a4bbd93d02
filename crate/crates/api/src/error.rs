use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use semantify_core::domainspec::DsError;
use semantify_core::{ParseError, StoreError};
use serde::{Deserialize, Serialize};

/// Body of the `{"error": {...}}` envelope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                code: code.to_string(),
                message: message.into(),
            },
        }
    }

    pub fn not_found() -> Self {
        Self::new(StatusCode::NOT_FOUND, "NotFound", "not found")
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn unauthorized(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNAUTHORIZED, code, message)
    }

    pub fn forbidden() -> Self {
        Self::new(StatusCode::FORBIDDEN, "Forbidden", "resource belongs to another organization")
    }

    pub fn unknown_api_key() -> Self {
        Self::unauthorized("UnknownApiKey", "missing or unknown API key")
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.body }))).into_response()
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        ApiError::bad_request(e.code(), e.to_string())
    }
}

impl From<DsError> for ApiError {
    fn from(e: DsError) -> Self {
        let status = match e {
            DsError::Conflict { .. } => StatusCode::CONFLICT,
            DsError::NotFound(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        use StoreError::*;
        let (status, code) = match &e {
            UnknownWebsite(_) => (StatusCode::NOT_FOUND, "UnknownWebsite"),
            UnknownOrganization(_) => (StatusCode::NOT_FOUND, "UnknownOrganization"),
            NotFound => (StatusCode::NOT_FOUND, "NotFound"),
            HashSpaceExhausted => (StatusCode::SERVICE_UNAVAILABLE, "HashSpaceExhausted"),
            InvalidPage { .. } => (StatusCode::BAD_REQUEST, "InvalidPage"),
            InvalidCid => (StatusCode::BAD_REQUEST, "InvalidCid"),
            DuplicateEmail(_) => (StatusCode::CONFLICT, "DuplicateEmail"),
            InvalidEmail(_) => (StatusCode::BAD_REQUEST, "InvalidEmail"),
            EmptyName => (StatusCode::BAD_REQUEST, "EmptyName"),
            BadCredentials => (StatusCode::UNAUTHORIZED, "BadCredentials"),
            ImportConflict => (StatusCode::CONFLICT, "ImportConflict"),
            DomainSpec(_) => {
                let StoreError::DomainSpec(inner) = e else { unreachable!() };
                return inner.into();
            }
            Corrupt(_) | Io(_) => {
                tracing::error!(error = %e, "store failure");
                (StatusCode::INTERNAL_SERVER_ERROR, "StoreFailure")
            }
        };
        ApiError::new(status, code, e.to_string())
    }
}
