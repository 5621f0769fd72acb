#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::Arc;

use nadea_service::{router, AppState, Config, Store, WireState};
use serde_json::{json, Value};

pub const SAMPLE_GOAL: &str = "(forall x. R(x, x)) ---> forall x. exists y. R(x, y)";
pub const SAMPLE_PROOF: &str = include_str!("../../../core/tests/golden/sample.proof");
pub const SAMPLE_THEORY: &str = include_str!("../../../core/tests/golden/sample_closed.thy");

pub struct Server {
    pub base: String,
    pub client: reqwest::Client,
    _task: tokio::task::JoinHandle<()>,
}

pub async fn spawn_with(store: Store, config: Config) -> Server {
    let listener = tokio::net::TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], 0))).await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(Arc::new(AppState { store, config }));
    let task = tokio::spawn(async move {
        axum::serve(listener, app).await.unwrap();
    });
    Server { base: format!("http://{addr}"), client: reqwest::Client::new(), _task: task }
}

pub async fn spawn() -> Server {
    spawn_with(Store::in_memory(), Config::default()).await
}

impl Server {
    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.base, path)
    }

    pub async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let r = self.client.post(self.url(path)).json(&body).send().await.unwrap();
        let status = r.status().as_u16();
        (status, r.json().await.unwrap_or(Value::Null))
    }

    pub async fn get_json(&self, path: &str) -> (u16, Value) {
        let r = self.client.get(self.url(path)).send().await.unwrap();
        let status = r.status().as_u16();
        (status, r.json().await.unwrap_or(Value::Null))
    }

    pub async fn get_text(&self, path: &str) -> (u16, String, String) {
        let r = self.client.get(self.url(path)).send().await.unwrap();
        let status = r.status().as_u16();
        let media = r
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .unwrap_or_default()
            .to_string();
        (status, media, r.text().await.unwrap())
    }

    pub async fn create(&self, goal: &str) -> (String, WireState) {
        let (status, body) = self.post("/api/session", json!({ "goal": goal })).await;
        assert_eq!(status, 200, "{body}");
        (body["id"].as_str().unwrap().to_string(), serde_json::from_value(body["state"].clone()).unwrap())
    }

    pub async fn apply(&self, id: &str, body: Value) -> (u16, Value) {
        self.post(&format!("/api/session/{id}/apply"), body).await
    }
}

/// The four student steps of the sample proof; the last leaf closes itself.
pub fn sample_steps() -> Vec<Value> {
    vec![
        json!({ "line": 1, "rule": "Imp_I" }),
        json!({ "line": 2, "rule": "Uni_I" }),
        json!({ "line": 3, "rule": "Exi_I", "witness": "c'" }),
        json!({ "line": 4, "rule": "Uni_E", "witness": "c'" }),
    ]
}

pub fn wire(v: Value) -> WireState {
    serde_json::from_value(v).unwrap()
}
