mod support;

use std::time::Duration;

use futures::{SinkExt, StreamExt};
use tmm_cli::protocol::ServerMessage;
use tmm_cli::server;
use tmm_core::{MatchFormat, PlayerId, PointRecord};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

use support::{profiles, record_json, start_json};

type Client = WebSocketStream<MaybeTlsStream<TcpStream>>;

async fn spawn_server(static_dir: Option<std::path::PathBuf>, heartbeat: Duration) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, server::router(static_dir, heartbeat))
            .await
            .unwrap();
    });
    addr.to_string()
}

async fn send(client: &mut Client, text: String) -> ServerMessage {
    client.send(Message::Text(text.into())).await.unwrap();
    loop {
        match client.next().await.unwrap().unwrap() {
            Message::Text(reply) => return serde_json::from_str(reply.as_str()).unwrap(),
            Message::Ping(_) | Message::Pong(_) => continue,
            other => panic!("unexpected frame {other:?}"),
        }
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn concurrent_sessions_are_isolated() {
    let addr = spawn_server(None, server::HEARTBEAT).await;
    let url = format!("ws://{addr}/ws");
    let (mut a, _) = connect_async(&url).await.unwrap();
    let (mut b, _) = connect_async(&url).await.unwrap();
    let format = MatchFormat::best_of_3();
    let id_a = match send(&mut a, start_json(&profiles(), &format)).await {
        ServerMessage::SessionAck { session_id, .. } => session_id,
        other => panic!("{other:?}"),
    };
    let id_b = match send(&mut b, start_json(&profiles(), &format)).await {
        ServerMessage::SessionAck { session_id, .. } => session_id,
        other => panic!("{other:?}"),
    };
    assert_ne!(id_a, id_b);

    // Interleave: A gets P1 winning, B gets P2 winning, on the same serves.
    for _ in 0..4 {
        let ua = send(
            &mut a,
            record_json(&PointRecord::rally(PlayerId::P1, PlayerId::P1, 2)),
        )
        .await;
        let ub = send(
            &mut b,
            record_json(&PointRecord::rally(PlayerId::P1, PlayerId::P2, 5)),
        )
        .await;
        match (ua, ub) {
            (
                ServerMessage::SampleUpdate {
                    sample: sa,
                    score: score_a,
                },
                ServerMessage::SampleUpdate {
                    sample: sb,
                    score: score_b,
                },
            ) => {
                assert_eq!(sa.point_index, sb.point_index);
                assert_eq!(sa.point_winner, PlayerId::P1);
                assert_eq!(sb.point_winner, PlayerId::P2);
                assert_eq!(score_a.points_in_game[1], 0);
                assert_eq!(score_b.points_in_game[0], 0);
            }
            other => panic!("{other:?}"),
        }
    }

    // Ending A does not touch B.
    send(&mut a, r#"{"type":"end_session"}"#.to_string()).await;
    match send(&mut b, r#"{"type":"undo"}"#.to_string()).await {
        ServerMessage::SessionAck {
            session_id,
            points_played,
            ..
        } => {
            assert_eq!(session_id, id_b);
            assert_eq!(points_played, 3);
        }
        other => panic!("{other:?}"),
    }
    // A malformed frame leaves B's connection usable.
    assert!(matches!(
        send(&mut b, "{".into()).await,
        ServerMessage::Error { .. }
    ));
    assert!(matches!(
        send(&mut b, record_json(&PointRecord::ace(PlayerId::P1))).await,
        ServerMessage::SampleUpdate { .. }
    ));
}

#[tokio::test]
async fn heartbeat_pings_idle_clients() {
    let addr = spawn_server(None, Duration::from_millis(100)).await;
    let (mut client, _) = connect_async(format!("ws://{addr}/ws")).await.unwrap();
    let frame = tokio::time::timeout(Duration::from_secs(5), client.next())
        .await
        .expect("ping within the timeout")
        .unwrap()
        .unwrap();
    assert!(matches!(frame, Message::Ping(_)), "{frame:?}");
}

async fn http_get(addr: &str, path: &str) -> String {
    let mut stream = TcpStream::connect(addr).await.unwrap();
    let request = format!("GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n");
    stream.write_all(request.as_bytes()).await.unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).await.unwrap();
    response
}

#[tokio::test]
async fn serves_static_files_and_health() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>console</h1>").unwrap();
    let addr = spawn_server(Some(dir.path().to_path_buf()), server::HEARTBEAT).await;
    assert!(http_get(&addr, "/health").await.ends_with("ok"));
    let page = http_get(&addr, "/index.html").await;
    assert!(
        page.starts_with("HTTP/1.1 200") && page.contains("console"),
        "{page}"
    );
}
