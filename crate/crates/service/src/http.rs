//! JSON-over-HTTP front end.
//!
//! | method | path                               | auth   |
//! |--------|------------------------------------|--------|
//! | POST   | `/v1/projects`                     |        |
//! | GET    | `/v1/projects`                     |        |
//! | GET    | `/v1/projects/{id}`                |        |
//! | DELETE | `/v1/projects/{id}`                |        |
//! | GET    | `/v1/projects/{id}/next-task`      | bearer |
//! | GET    | `/v1/projects/{id}/tasks`          | bearer |
//! | POST   | `/v1/projects/{id}/submit`         | bearer |
//! | GET    | `/v1/projects/{id}/export`         |        |
//! | GET    | `/v1/schemas`                      |        |
//! | GET    | `/v1/templates`                    |        |
//! | POST   | `/v1/render`                       |        |
//!
//! Bearer tokens are issued per annotator when a project is created and
//! identify the annotator; no route returns another annotator's work.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::model::{ProjectConfig, SubmitRequest};
use crate::{schemas, Service, ServiceError};

type Shared = Arc<Service>;

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::UnknownProject(_) | ServiceError::UnknownItem(_) => StatusCode::NOT_FOUND,
            ServiceError::Unauthorized => StatusCode::UNAUTHORIZED,
            ServiceError::UnknownAnnotator(_) | ServiceError::NotAssigned { .. } => StatusCode::FORBIDDEN,
            ServiceError::RevisionConflict { .. } => StatusCode::CONFLICT,
            ServiceError::Validation(_) | ServiceError::Template(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Config(_) | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Storage { .. } | ServiceError::CorruptLog { .. } | ServiceError::Export(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
        };
        let body = ErrorBody {
            error: self.kind().into(),
            message: self.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

fn body<T>(json: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    json.map(|Json(v)| v).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

fn annotator(service: &Service, project: &str, headers: &HeaderMap) -> Result<String, ServiceError> {
    let token = headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .ok_or(ServiceError::Unauthorized)?;
    service.authenticate(project, token.trim())
}

/// Runs blocking service work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f).await.expect("service task panicked")
}

async fn create_project(
    State(s): State<Shared>,
    json: Result<Json<ProjectConfig>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let config = body(json)?;
    let created = blocking(move || s.create_project(config)).await?;
    Ok((StatusCode::CREATED, Json(created)))
}

async fn list_projects(State(s): State<Shared>) -> impl IntoResponse {
    Json(s.projects())
}

async fn get_project(State(s): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(s.project(&id)?))
}

async fn delete_project(State(s): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    blocking(move || s.delete_project(&id)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn next_task(
    State(s): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> Result<Response, ServiceError> {
    let who = annotator(&s, &id, &headers)?;
    match blocking(move || s.next_task(&id, &who)).await? {
        Some(task) => Ok(Json(task).into_response()),
        None => Ok(StatusCode::NO_CONTENT.into_response()),
    }
}

async fn tasks(
    State(s): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> Result<impl IntoResponse, ServiceError> {
    let who = annotator(&s, &id, &headers)?;
    Ok(Json(s.assignments(&id, &who)?))
}

async fn submit(
    State(s): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    json: Result<Json<SubmitRequest>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let who = annotator(&s, &id, &headers)?;
    let request = body(json)?;
    Ok(Json(blocking(move || s.submit(&id, &who, request)).await?))
}

async fn export(State(s): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || s.export(&id)).await?))
}

async fn get_schemas() -> impl IntoResponse {
    Json(schemas::schemas())
}

async fn templates(State(s): State<Shared>) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], s.templates().to_json())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RenderRequest {
    pub template: String,
    #[serde(default = "default_locale")]
    pub locale: String,
    pub fillers: BTreeMap<String, String>,
}

fn default_locale() -> String {
    "en".into()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RenderResponse {
    pub text: String,
}

async fn render(
    State(s): State<Shared>,
    json: Result<Json<RenderRequest>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let req = body(json)?;
    let template = s
        .templates()
        .get_str(&req.template)
        .ok_or_else(|| ServiceError::BadRequest(format!("unknown template {:?}", req.template)))?;
    let text = typic_core::render(
        template,
        &req.locale,
        req.fillers.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )?;
    Ok(Json(RenderResponse { text }))
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/v1/projects", post(create_project).get(list_projects))
        .route("/v1/projects/{id}", get(get_project).delete(delete_project))
        .route("/v1/projects/{id}/next-task", get(next_task))
        .route("/v1/projects/{id}/tasks", get(tasks))
        .route("/v1/projects/{id}/submit", post(submit))
        .route("/v1/projects/{id}/export", get(export))
        .route("/v1/schemas", get(get_schemas))
        .route("/v1/templates", get(templates))
        .route("/v1/render", post(render))
        .with_state(service)
}

/// Serves `service` on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    service: Arc<Service>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(service))
        .with_graceful_shutdown(shutdown)
        .await
}
