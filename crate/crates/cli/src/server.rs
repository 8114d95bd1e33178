//! Local JSON service: stateless mirrors of the commands plus editing sessions.

use std::collections::HashMap;
use std::convert::Infallible;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::{Body, Bytes};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use locus_core::geom::{tol, PointJson};
use locus_core::search::{SearchEvent, SearchParams};
use locus_core::{continuous_diameter, DiameterReport, Error, LocusPoint, Network, SegmentGeom};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands;
use crate::geometry::geometry;
use crate::output::{round12, to_value};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: String,
    message: String,
}

impl ApiError {
    fn malformed(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, kind: "Malformed".into(), message: message.into() }
    }

    fn unknown_session(id: &str) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, kind: "UnknownSession".into(), message: format!("no session {id}") }
    }

    fn body(&self) -> Value {
        json!({"error": {"kind": self.kind, "message": self.message}})
    }
}

/// Status code for a library error.
pub fn status_of(e: &Error) -> StatusCode {
    match e.kind() {
        "Parse" | "Malformed" | "InvalidNetwork" | "NonFinite" | "EmptyInput" | "DuplicateVertexId" | "TooFewPoints" | "MalformedCnf" => {
            StatusCode::BAD_REQUEST
        }
        _ if !e.is_user_error() => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::UNPROCESSABLE_ENTITY,
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError { status: status_of(&e), kind: e.kind().into(), message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body())).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

struct Snapshot {
    net: Network,
    report: DiameterReport,
}

impl Snapshot {
    fn new(net: Network) -> Result<Self, Error> {
        let report = continuous_diameter(&net)?;
        Ok(Snapshot { net, report })
    }
}

struct Session {
    stack: Vec<Arc<Snapshot>>,
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<u64, Arc<Mutex<Session>>>>,
    next: AtomicU64,
}

impl AppState {
    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let key: u64 = id.parse().map_err(|_| ApiError::unknown_session(id))?;
        self.sessions.read().expect("lock").get(&key).cloned().ok_or_else(|| ApiError::unknown_session(id))
    }

    fn current(&self, id: &str) -> Result<Arc<Snapshot>, ApiError> {
        let s = self.session(id)?;
        let guard = s.lock().expect("lock");
        Ok(guard.stack.last().expect("base state").clone())
    }
}

fn parse_network(body: &Bytes) -> Result<Network, ApiError> {
    let text = std::str::from_utf8(body).map_err(|_| ApiError::malformed("body is not UTF-8"))?;
    Ok(Network::from_json_str(text)?)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        kind: "Internal".into(),
        message: e.to_string(),
    })?
}

/// A candidate segment: two locus points, or two positions snapped to the locus.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Placement {
    Locus { p: LocusPoint, q: LocusPoint },
    Coords { a: [f64; 2], b: [f64; 2], snap: Option<f64> },
}

fn resolve(net: &Network, body: &Bytes) -> Result<(LocusPoint, LocusPoint, SegmentGeom), ApiError> {
    let placement: Placement = serde_json::from_slice(body).map_err(|e| ApiError::malformed(e.to_string()))?;
    let (p, q) = match placement {
        Placement::Locus { p, q } => (p, q),
        Placement::Coords { a, b, snap } => {
            let r = snap.unwrap_or_else(|| tol(net.max_edge_length()));
            let find = |xy: [f64; 2]| net.project_to_locus(xy, r).ok_or(Error::EndpointOffLocus { x: xy[0], y: xy[1] });
            (find(a)?, find(b)?)
        }
    };
    for x in [&p, &q] {
        net.edge(x.edge)?;
        if !(0.0..=1.0).contains(&x.t) {
            return Err(Error::ParameterOutOfRange(x.t).into());
        }
    }
    let seg = SegmentGeom::new(net.locus_coords(&p)?, net.locus_coords(&q)?)?;
    Ok((p, q, seg))
}

fn segment_json(s: &SegmentGeom) -> Value {
    json!({"a": PointJson::from(&s.a), "b": PointJson::from(&s.b)})
}

async fn create(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let net = parse_network(&body)?;
    let snap = blocking(move || Ok(Snapshot::new(net)?)).await?;
    let report = to_value(&snap.report);
    let id = st.next.fetch_add(1, Ordering::Relaxed) + 1;
    st.sessions.write().expect("lock").insert(id, Arc::new(Mutex::new(Session { stack: vec![Arc::new(snap)] })));
    Ok(Json(json!({"id": id.to_string(), "depth": 0, "report": report})))
}

async fn preview(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let cur = st.current(&id)?;
    blocking(move || {
        let (p, q, seg) = resolve(&cur.net, &body)?;
        let aug = cur.net.insert_segment(&seg)?;
        let report = continuous_diameter(&aug)?;
        Ok(Json(json!({
            "old_d": round12(cur.report.d),
            "d": round12(report.d),
            "delta": round12(report.d - cur.report.d),
            "pairs": to_value(&report.pairs),
            "p": to_value(&p),
            "q": to_value(&q),
            "segment": segment_json(&seg),
        })))
    })
    .await
}

async fn commit(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = st.session(&id)?;
    blocking(move || {
        // Held for the whole computation: commits and undos are serialized per session.
        let mut guard = session.lock().expect("lock");
        let cur = guard.stack.last().expect("base state").clone();
        let (p, q, seg) = resolve(&cur.net, &body)?;
        let snap = Snapshot::new(cur.net.insert_segment(&seg)?)?;
        let report = to_value(&snap.report);
        guard.stack.push(Arc::new(snap));
        Ok(Json(json!({
            "depth": guard.stack.len() - 1,
            "report": report,
            "p": to_value(&p),
            "q": to_value(&q),
            "segment": segment_json(&seg),
        })))
    })
    .await
}

async fn undo(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let session = st.session(&id)?;
    let mut guard = session.lock().expect("lock");
    if guard.stack.len() == 1 {
        return Err(ApiError { status: StatusCode::CONFLICT, kind: "NothingToUndo".into(), message: "no committed insertion".into() });
    }
    guard.stack.pop();
    let cur = guard.stack.last().expect("base state");
    Ok(Json(json!({"depth": guard.stack.len() - 1, "report": to_value(&cur.report)})))
}

async fn geometry_of(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let cur = st.current(&id)?;
    blocking(move || Ok(Json(to_value(&geometry(&cur.net, &cur.report))))).await
}

#[derive(Debug, Default, Deserialize)]
struct SearchBody {
    gap: Option<f64>,
    res: Option<f64>,
    #[serde(default)]
    simple: bool,
}

fn line(v: Value) -> Bytes {
    let mut s = serde_json::to_string(&v).expect("serializable");
    s.push('\n');
    Bytes::from(s)
}

async fn search(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let cur = st.current(&id)?;
    let req: SearchBody = if body.iter().all(u8::is_ascii_whitespace) {
        SearchBody::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::malformed(e.to_string()))?
    };
    let params = SearchParams { gap: req.gap, resolution: req.res, simple: req.simple };
    let (tx, rx) = tokio::sync::mpsc::unbounded_channel::<Bytes>();
    tokio::task::spawn_blocking(move || {
        let progress = tx.clone();
        let observer = move |e: &SearchEvent| {
            progress.send(line(to_value(e))).ok();
        };
        let last = match commands::shortcut(&cur.net, params, Some(&observer)) {
            Ok(Value::Object(mut outcome)) => {
                outcome.insert("event".into(), json!("verdict"));
                Value::Object(outcome)
            }
            Ok(other) => json!({"event": "verdict", "outcome": other}),
            Err(e) => {
                let mut v = ApiError::from(e).body();
                v["event"] = json!("error");
                v
            }
        };
        tx.send(line(last)).ok();
    });
    let stream = futures::stream::unfold(rx, |mut rx| async move { rx.recv().await.map(|b| (Ok::<_, Infallible>(b), rx)) });
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], Body::from_stream(stream)).into_response())
}

#[derive(Debug, Default, Deserialize)]
struct Knobs {
    eps: Option<f64>,
    gap: Option<f64>,
    res: Option<f64>,
    simple: Option<bool>,
}

async fn stateless(op: &'static str, knobs: Knobs, body: Bytes) -> ApiResult {
    let net = parse_network(&body)?;
    blocking(move || {
        let v = match op {
            "diameter" => commands::diameter(&net),
            "check" => commands::check(&net),
            "fan" => commands::fan(&net),
            "epsilon" => {
                let eps = knobs.eps.ok_or_else(|| ApiError::malformed("missing eps"))?;
                commands::epsilon(&net, eps)
            }
            "shortcut" => {
                let params = SearchParams { gap: knobs.gap, resolution: knobs.res, simple: knobs.simple.unwrap_or(false) };
                commands::shortcut(&net, params, None)
            }
            "scn1" => commands::scn1(&net),
            "polygon" => commands::polygon(&net),
            "k4" => commands::k4(&net),
            _ => unreachable!("routed operations only"),
        };
        Ok(Json(v?))
    })
    .await
}

macro_rules! stateless_route {
    ($router:expr, $op:literal) => {
        $router.route(
            concat!("/", $op),
            post(|Query(k): Query<Knobs>, body: Bytes| async move { stateless($op, k, body).await }),
        )
    };
}

pub fn router() -> Router {
    let mut r = Router::new()
        .route("/session", post(create))
        .route("/session/{id}/preview", post(preview))
        .route("/session/{id}/commit", post(commit))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/search", post(search))
        .route("/session/{id}/geometry", get(geometry_of));
    r = stateless_route!(r, "diameter");
    r = stateless_route!(r, "check");
    r = stateless_route!(r, "fan");
    r = stateless_route!(r, "epsilon");
    r = stateless_route!(r, "shortcut");
    r = stateless_route!(r, "scn1");
    r = stateless_route!(r, "polygon");
    r = stateless_route!(r, "k4");
    r.with_state(Arc::new(AppState::default()))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
