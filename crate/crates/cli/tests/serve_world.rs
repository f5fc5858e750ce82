use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use mml_cli::serve::router;
use mml_core::WorldSnapshot;
use tower::ServiceExt;

fn world() -> Arc<WorldSnapshot> {
    let p = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/world.json");
    Arc::new(WorldSnapshot::load(&p).unwrap())
}

async fn get(uri: &str) -> (StatusCode, serde_json::Value) {
    let resp = router(world())
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(serde_json::Value::Null),
    )
}

#[tokio::test]
async fn values_read_back_the_fixture() {
    let (status, body) = get("/world/values?country=CZE&indicator=SE.TER.ENRR").await;
    assert_eq!(status, StatusCode::OK);
    let raw: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/world.json"))
            .unwrap(),
    )
    .unwrap();
    let expected = raw["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["country"] == "CZE" && v["indicator"] == "SE.TER.ENRR")
        .unwrap()["series"]
        .clone();
    assert_eq!(body, expected);
}

#[tokio::test]
async fn missing_pair_is_404() {
    let (status, _) = get("/world/values?country=JPN&indicator=SP.POP.TOTL").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = get("/world/values?country=XXX&indicator=SE.TER.ENRR").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = get("/world/values?country=CZE").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn countries_are_listed() {
    let (status, body) = get("/world/countries").await;
    assert_eq!(status, StatusCode::OK);
    let codes: Vec<&str> = body
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["code"].as_str().unwrap())
        .collect();
    assert_eq!(
        codes,
        world().countries().iter().map(|c| c.code.as_str()).collect::<Vec<_>>()
    );
    assert_eq!(body[1]["name"], "Czech Republic");
}

#[tokio::test]
async fn concurrent_requests_share_the_snapshot() {
    let app = router(world());
    let reqs = (0..32).map(|i| {
        let app = app.clone();
        let c = ["CZE", "GBR", "USA", "JPN"][i % 4];
        async move {
            let r = app
                .oneshot(
                    Request::get(format!("/world/values?country={c}&indicator=SE.TER.ENRR"))
                        .body(Body::empty())
                        .unwrap(),
                )
                .await
                .unwrap();
            r.status()
        }
    });
    let statuses = spawn_all(reqs).await;
    assert!(statuses.iter().all(|s| *s == StatusCode::OK));
}

async fn spawn_all<F: std::future::Future<Output = StatusCode> + Send + 'static>(
    fs: impl Iterator<Item = F>,
) -> Vec<StatusCode> {
    let handles: Vec<_> = fs.map(tokio::spawn).collect();
    let mut out = Vec::new();
    for h in handles {
        out.push(h.await.unwrap());
    }
    out
}
