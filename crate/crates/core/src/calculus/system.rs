//! The registry of sequent systems.

use std::fmt;

use crate::error::{Error, Result};
use crate::semantics::Rel2Class;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModalLogic {
    K,
    T,
    K4,
    S4,
    S5,
}

impl ModalLogic {
    pub const ALL: [ModalLogic; 5] = [
        ModalLogic::K,
        ModalLogic::T,
        ModalLogic::K4,
        ModalLogic::S4,
        ModalLogic::S5,
    ];

    /// Axiom `A ⇒ ◇A`.
    pub fn has_t(self) -> bool {
        matches!(self, ModalLogic::T | ModalLogic::S4 | ModalLogic::S5)
    }

    /// Axiom `◇◇A ⇒ ◇A`.
    pub fn has_4(self) -> bool {
        matches!(self, ModalLogic::K4 | ModalLogic::S4 | ModalLogic::S5)
    }

    /// Axiom `◇A ⇒ ¬◇¬◇A`.
    pub fn has_5(self) -> bool {
        self == ModalLogic::S5
    }

    /// Frame conditions under which the axioms are sound.
    pub fn frame_class(self) -> Rel2Class {
        Rel2Class {
            reflexive: self.has_t(),
            transitive: self.has_4(),
            euclidean: self.has_5(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModalLogic::K => "K",
            ModalLogic::T => "T",
            ModalLogic::K4 => "K4",
            ModalLogic::S4 => "S4",
            ModalLogic::S5 => "S5",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    /// `¬` with axioms `¬1`, `¬2`.
    pub negation: bool,
    /// `⊤`, `⊥` with their axioms.
    pub bounded: bool,
    /// The structural rule `·E`.
    pub exchange: bool,
    /// The constant `1` with `1R`, `1L`.
    pub unit: bool,
    pub allow_empty_antecedent: bool,
    pub modal: Option<ModalLogic>,
}

impl SystemSpec {
    pub fn bfnl_star() -> Self {
        SystemSpec {
            negation: true,
            bounded: true,
            exchange: false,
            unit: false,
            allow_empty_antecedent: true,
            modal: None,
        }
    }

    pub fn bfnl_e_star() -> Self {
        SystemSpec {
            exchange: true,
            ..Self::bfnl_star()
        }
    }

    pub fn bfnl_star_modal(m: ModalLogic) -> Self {
        SystemSpec {
            modal: Some(m),
            ..Self::bfnl_star()
        }
    }

    pub fn bfnl_e_star_modal(m: ModalLogic) -> Self {
        SystemSpec {
            modal: Some(m),
            ..Self::bfnl_e_star()
        }
    }

    pub fn bfnl1_modal(m: ModalLogic) -> Self {
        SystemSpec {
            unit: true,
            ..Self::bfnl_star_modal(m)
        }
    }

    pub fn bfnl1_e_modal(m: ModalLogic) -> Self {
        SystemSpec {
            unit: true,
            ..Self::bfnl_e_star_modal(m)
        }
    }

    pub fn bdfnl_star() -> Self {
        SystemSpec {
            negation: false,
            ..Self::bfnl_star()
        }
    }

    pub fn dfnl_star() -> Self {
        SystemSpec {
            bounded: false,
            ..Self::bdfnl_star()
        }
    }

    pub fn dfnl() -> Self {
        SystemSpec {
            allow_empty_antecedent: false,
            ..Self::dfnl_star()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.negation && !self.bounded {
            return Err(Error::UnknownSystem(
                "negation requires the bounded constants".into(),
            ));
        }
        Ok(())
    }

    /// Command-line slug, e.g. `bfnl-star`, `bfnl-e-star-s4`, `bfnl1-k`.
    pub fn slug(&self) -> String {
        let modal = self
            .modal
            .map(|m| format!("-{}", m.name().to_lowercase()))
            .unwrap_or_default();
        let e = if self.exchange { "-e" } else { "" };
        let base = match (self.negation, self.bounded) {
            (true, _) => "bfnl",
            (false, true) => "bdfnl",
            (false, false) => "dfnl",
        };
        if self.unit {
            format!("{base}1{e}{modal}")
        } else if self.allow_empty_antecedent {
            format!("{base}{e}-star{modal}")
        } else {
            format!("{base}{e}{modal}")
        }
    }

    pub fn parse(slug: &str) -> Result<Self> {
        let bad = || Error::UnknownSystem(slug.to_string());
        let mut parts: Vec<&str> = slug.split('-').collect();
        let modal = match parts.last().and_then(|s| ModalLogic::parse(s)) {
            Some(m) => {
                parts.pop();
                Some(m)
            }
            None => None,
        };
        let mut it = parts.into_iter();
        let head = it.next().ok_or_else(bad)?;
        let (base, unit) = match head.strip_suffix('1') {
            Some(b) => (b, true),
            None => (head, false),
        };
        let mut sys = match base {
            "bfnl" => Self::bfnl_star(),
            "bdfnl" => Self::bdfnl_star(),
            "dfnl" => Self::dfnl_star(),
            _ => return Err(bad()),
        };
        sys.unit = unit;
        sys.modal = modal;
        let mut star = unit;
        for part in it {
            match part {
                "e" if !sys.exchange => sys.exchange = true,
                "star" if !star => star = true,
                _ => return Err(bad()),
            }
        }
        sys.allow_empty_antecedent = star;
        if sys.slug() != slug.to_ascii_lowercase() {
            return Err(bad());
        }
        Ok(sys)
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match (self.negation, self.bounded) {
            (true, _) => "BFNL",
            (false, true) => "BDFNL",
            (false, false) => "DFNL",
        };
        let one = if self.unit { "1" } else { "" };
        let star = if self.allow_empty_antecedent && !self.unit {
            "*"
        } else {
            ""
        };
        let sub = format!(
            "{}{}",
            if self.exchange { "e" } else { "" },
            self.modal.map(ModalLogic::name).unwrap_or("")
        );
        if sub.is_empty() {
            write!(f, "{base}{one}{star}")
        } else {
            write!(f, "{base}{one}_{sub}{star}")
        }
    }
}
