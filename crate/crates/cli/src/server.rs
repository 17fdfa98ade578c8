use std::io;
use std::path::PathBuf;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tokio::time::{interval_at, Instant};
use tower_http::services::ServeDir;

use crate::protocol::{Connection, ServerMessage};

pub const HEARTBEAT: Duration = Duration::from_secs(15);

/// Routes: `/ws` for sessions, `/health`, and optionally static files
/// (the coach console) for everything else.
pub fn router(static_dir: Option<PathBuf>, heartbeat: Duration) -> Router {
    let router = Router::new()
        .route("/ws", get(upgrade))
        .route("/health", get(|| async { "ok" }))
        .with_state(heartbeat);
    match static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    }
}

pub async fn serve(
    listener: TcpListener,
    static_dir: Option<PathBuf>,
    heartbeat: Duration,
) -> io::Result<()> {
    axum::serve(listener, router(static_dir, heartbeat))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn upgrade(ws: WebSocketUpgrade, State(heartbeat): State<Duration>) -> Response {
    ws.on_upgrade(move |socket| connection(socket, heartbeat))
}

/// Each connection owns its session; frames are handled in arrival order.
async fn connection(mut socket: WebSocket, heartbeat: Duration) {
    let mut conn = Connection::new();
    let mut ticker = interval_at(Instant::now() + heartbeat, heartbeat);
    loop {
        let reply = tokio::select! {
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Text(text))) => conn.handle_text(text.as_str()),
                Some(Ok(Message::Binary(_))) => ServerMessage::Error {
                    field: None,
                    message: "expected a text frame".into(),
                },
                Some(Ok(_)) => continue,
                Some(Err(_)) | None => break,
            },
            _ = ticker.tick() => {
                if socket.send(Message::Ping(Bytes::new())).await.is_err() {
                    break;
                }
                continue;
            }
        };
        if socket
            .send(Message::Text(reply.to_json().into()))
            .await
            .is_err()
        {
            break;
        }
    }
    tracing::debug!("connection closed");
}
