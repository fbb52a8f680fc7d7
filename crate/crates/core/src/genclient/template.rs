use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PLACEHOLDER: &str = "{topic}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TemplateId {
    #[serde(rename = "P1-essay")]
    P1Essay,
    #[serde(rename = "P1-wiki")]
    P1Wiki,
    #[serde(rename = "P2-essay")]
    P2Essay,
    #[serde(rename = "P2-wiki")]
    P2Wiki,
}

impl TemplateId {
    pub const ALL: [TemplateId; 4] = [
        TemplateId::P1Essay,
        TemplateId::P1Wiki,
        TemplateId::P2Essay,
        TemplateId::P2Wiki,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TemplateId::P1Essay => "P1-essay",
            TemplateId::P1Wiki => "P1-wiki",
            TemplateId::P2Essay => "P2-essay",
            TemplateId::P2Wiki => "P2-wiki",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub id: TemplateId,
    pub text: String,
}

impl PromptTemplate {
    /// Checks that `text` holds exactly one `{topic}` placeholder.
    pub fn new(id: TemplateId, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        let n = text.matches(PLACEHOLDER).count();
        if n != 1 {
            return Err(Error::Input(format!(
                "template {id} must contain exactly one {PLACEHOLDER}, found {n}"
            )));
        }
        Ok(PromptTemplate { id, text })
    }

    pub fn builtin(id: TemplateId) -> Self {
        let text = match id {
            TemplateId::P1Essay => "Write a college argumentative essay on {topic}",
            TemplateId::P1Wiki => "Write a Wikipedia article on {topic}",
            TemplateId::P2Essay => "Pretend to be a college student and write a 1,000-word essay on {topic}",
            TemplateId::P2Wiki => "Write a 1,000-word encyclopedia page on {topic}",
        };
        PromptTemplate {
            id,
            text: text.to_string(),
        }
    }
}

pub fn render_prompt(template: &PromptTemplate, topic: &str) -> Result<String> {
    if topic.trim().is_empty() {
        return Err(Error::Input(format!("empty topic for template {}", template.id)));
    }
    Ok(template.text.replacen(PLACEHOLDER, topic, 1))
}
