use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub const ENDPOINT_VAR: &str = "GEN_ENDPOINT";
pub const API_KEY_VAR: &str = "GEN_API_KEY";

/// One prompt in, one completion out. `Error::Auth` aborts a whole run;
/// any other error is retried under the job's policy.
pub trait Transport: Sync {
    /// Stable description of the endpoint, hashed into every record. Must not
    /// contain credentials.
    fn identity(&self) -> String;

    fn complete(&self, prompt: &str, params: &Map<String, Value>) -> Result<String>;
}

/// Returns the prompt as the response.
#[derive(Debug, Default, Clone, Copy)]
pub struct EchoTransport;

impl Transport for EchoTransport {
    fn identity(&self) -> String {
        "echo".into()
    }

    fn complete(&self, prompt: &str, _params: &Map<String, Value>) -> Result<String> {
        Ok(prompt.to_string())
    }
}

/// Fails the first `failures` calls for each prompt, then delegates.
#[derive(Debug)]
pub struct FlakyTransport<T> {
    inner: T,
    failures: u32,
    calls: Mutex<HashMap<String, u32>>,
}

impl<T: Transport> FlakyTransport<T> {
    pub fn new(inner: T, failures: u32) -> Self {
        FlakyTransport {
            inner,
            failures,
            calls: Mutex::new(HashMap::new()),
        }
    }
}

impl<T: Transport> Transport for FlakyTransport<T> {
    fn identity(&self) -> String {
        format!("flaky({})", self.inner.identity())
    }

    fn complete(&self, prompt: &str, params: &Map<String, Value>) -> Result<String> {
        let n = {
            let mut calls = self.calls.lock().expect("flaky call table poisoned");
            let n = calls.entry(prompt.to_string()).or_insert(0);
            *n += 1;
            *n
        };
        if n <= self.failures {
            return Err(Error::Transport(format!("simulated failure {n} of {}", self.failures)));
        }
        self.inner.complete(prompt, params)
    }
}

/// Always answers with an authentication failure.
#[derive(Debug, Default, Clone, Copy)]
pub struct DenyTransport;

impl Transport for DenyTransport {
    fn identity(&self) -> String {
        "deny".into()
    }

    fn complete(&self, _prompt: &str, _params: &Map<String, Value>) -> Result<String> {
        Err(Error::Auth("endpoint rejected the credentials".into()))
    }
}

/// Chat-completions style JSON client.
///
/// Request: `{"messages": [{"role": "user", "content": prompt}], ...params}`.
/// Response: `choices[0].message.content`.
pub struct HttpTransport {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl std::fmt::Debug for HttpTransport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpTransport")
            .field("endpoint", &self.endpoint)
            .field("api_key", &self.api_key.as_ref().map(|_| "<set>"))
            .finish()
    }
}

impl HttpTransport {
    pub fn new(endpoint: impl Into<String>, api_key: Option<String>, timeout: Duration) -> Self {
        HttpTransport {
            endpoint: endpoint.into(),
            api_key,
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }

    /// Reads the endpoint from `GEN_ENDPOINT` and the key from `GEN_API_KEY`.
    pub fn from_env(timeout: Duration) -> Result<Self> {
        let endpoint = std::env::var(ENDPOINT_VAR).map_err(|_| {
            Error::Input(format!(
                "{ENDPOINT_VAR} is not set; export the chat-completions URL before running `generate`"
            ))
        })?;
        let api_key = std::env::var(API_KEY_VAR).ok().filter(|k| !k.is_empty());
        Ok(Self::new(endpoint, api_key, timeout))
    }
}

pub(crate) fn request_body(prompt: &str, params: &Map<String, Value>) -> Value {
    let mut body = params.clone();
    body.insert("messages".into(), json!([{ "role": "user", "content": prompt }]));
    Value::Object(body)
}

pub(crate) fn response_text(body: &Value) -> Result<String> {
    body.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Transport("response has no choices[0].message.content".into()))
}

impl Transport for HttpTransport {
    fn identity(&self) -> String {
        self.endpoint.clone()
    }

    fn complete(&self, prompt: &str, params: &Map<String, Value>) -> Result<String> {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        match req.send_json(request_body(prompt, params)) {
            Ok(resp) => {
                let body: Value = resp
                    .into_json()
                    .map_err(|e| Error::Transport(format!("unreadable response: {e}")))?;
                response_text(&body)
            }
            Err(ureq::Error::Status(code @ (401 | 403), _)) => Err(Error::Auth(format!(
                "HTTP {code} from the endpoint; check {API_KEY_VAR} and {ENDPOINT_VAR}"
            ))),
            Err(ureq::Error::Status(code, resp)) => {
                let detail = resp.into_string().unwrap_or_default();
                Err(Error::Transport(format!("HTTP {code}: {}", detail.trim())))
            }
            Err(e) => Err(Error::Transport(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_pass_through_beside_messages() {
        let mut p = Map::new();
        p.insert("model".into(), json!("m-1"));
        p.insert("temperature".into(), json!(0.7));
        let body = request_body("hi", &p);
        assert_eq!(body["model"], "m-1");
        assert_eq!(body["temperature"], 0.7);
        assert_eq!(body["messages"][0]["content"], "hi");
    }

    #[test]
    fn response_content_is_extracted() {
        let body = json!({"choices": [{"message": {"role": "assistant", "content": "text"}}]});
        assert_eq!(response_text(&body).unwrap(), "text");
        assert!(response_text(&json!({})).is_err());
    }

    #[test]
    fn flaky_counts_per_prompt() {
        let t = FlakyTransport::new(EchoTransport, 1);
        let p = Map::new();
        assert!(t.complete("a", &p).is_err());
        assert!(t.complete("b", &p).is_err());
        assert_eq!(t.complete("a", &p).unwrap(), "a");
    }

    #[test]
    fn debug_hides_the_key() {
        let t = HttpTransport::new("http://x", Some("secret".into()), Duration::from_secs(1));
        assert!(!format!("{t:?}").contains("secret"));
    }
}
