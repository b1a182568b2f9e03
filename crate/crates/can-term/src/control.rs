use std::fmt;

use can_syntax::{Literal, Name};

/// Entity kinds of the state signature. Attributes stand in for links
/// (event names, check correlation ids) and for bookkeeping meta data.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Control {
    Beliefs,
    B(Literal),
    False,
    Desires,
    E(Name),
    Intentions,
    /// Intention id: meta, ignored by matching and canonical keys.
    Intent(u32),
    Plans,
    PlanSet(Name),
    /// Plan id and library position: meta.
    Plan(Name, u32),
    PB,
    /// Action name: meta.
    Act(Name),
    Pre,
    Add,
    Del,
    Seq,
    Try,
    Cons,
    Conc,
    L,
    R,
    Goal,
    SC,
    FC,
    Check(u32),
    CheckRes(u32),
    T,
    F,
    CheckToken,
    Reduce,
    ReduceF,
    /// Saved left branch of a concurrent program while the other branch is tried.
    Stash,
}

/// Attribute-free kind, used for pattern matching on the control alone.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Beliefs,
    B,
    False,
    Desires,
    E,
    Intentions,
    Intent,
    Plans,
    PlanSet,
    Plan,
    PB,
    Act,
    Pre,
    Add,
    Del,
    Seq,
    Try,
    Cons,
    Conc,
    L,
    R,
    Goal,
    SC,
    FC,
    Check,
    CheckRes,
    T,
    F,
    CheckToken,
    Reduce,
    ReduceF,
    Stash,
}

impl Kind {
    pub const ALL: [Kind; 32] = [
        Kind::Beliefs,
        Kind::B,
        Kind::False,
        Kind::Desires,
        Kind::E,
        Kind::Intentions,
        Kind::Intent,
        Kind::Plans,
        Kind::PlanSet,
        Kind::Plan,
        Kind::PB,
        Kind::Act,
        Kind::Pre,
        Kind::Add,
        Kind::Del,
        Kind::Seq,
        Kind::Try,
        Kind::Cons,
        Kind::Conc,
        Kind::L,
        Kind::R,
        Kind::Goal,
        Kind::SC,
        Kind::FC,
        Kind::Check,
        Kind::CheckRes,
        Kind::T,
        Kind::F,
        Kind::CheckToken,
        Kind::Reduce,
        Kind::ReduceF,
        Kind::Stash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Beliefs => "Beliefs",
            Kind::B => "B",
            Kind::False => "False",
            Kind::Desires => "Desires",
            Kind::E => "E",
            Kind::Intentions => "Intentions",
            Kind::Intent => "Intent",
            Kind::Plans => "Plans",
            Kind::PlanSet => "PlanSet",
            Kind::Plan => "Plan",
            Kind::PB => "PB",
            Kind::Act => "Act",
            Kind::Pre => "Pre",
            Kind::Add => "Add",
            Kind::Del => "Del",
            Kind::Seq => "Seq",
            Kind::Try => "Try",
            Kind::Cons => "Cons",
            Kind::Conc => "Conc",
            Kind::L => "L",
            Kind::R => "R",
            Kind::Goal => "Goal",
            Kind::SC => "SC",
            Kind::FC => "FC",
            Kind::Check => "Check",
            Kind::CheckRes => "CheckRes",
            Kind::T => "T",
            Kind::F => "F",
            Kind::CheckToken => "CheckToken",
            Kind::Reduce => "Reduce",
            Kind::ReduceF => "ReduceF",
            Kind::Stash => "Stash",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Entities that never have children.
    pub fn is_atomic(self) -> bool {
        matches!(self, Kind::B | Kind::False | Kind::E | Kind::T | Kind::F | Kind::CheckToken | Kind::ReduceF)
    }

    /// Entities introduced by the reduction machinery rather than the program.
    pub fn is_auxiliary(self) -> bool {
        matches!(self, Kind::Check | Kind::CheckRes | Kind::Reduce | Kind::ReduceF | Kind::Stash)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Control {
    pub fn kind(&self) -> Kind {
        match self {
            Control::Beliefs => Kind::Beliefs,
            Control::B(_) => Kind::B,
            Control::False => Kind::False,
            Control::Desires => Kind::Desires,
            Control::E(_) => Kind::E,
            Control::Intentions => Kind::Intentions,
            Control::Intent(_) => Kind::Intent,
            Control::Plans => Kind::Plans,
            Control::PlanSet(_) => Kind::PlanSet,
            Control::Plan(..) => Kind::Plan,
            Control::PB => Kind::PB,
            Control::Act(_) => Kind::Act,
            Control::Pre => Kind::Pre,
            Control::Add => Kind::Add,
            Control::Del => Kind::Del,
            Control::Seq => Kind::Seq,
            Control::Try => Kind::Try,
            Control::Cons => Kind::Cons,
            Control::Conc => Kind::Conc,
            Control::L => Kind::L,
            Control::R => Kind::R,
            Control::Goal => Kind::Goal,
            Control::SC => Kind::SC,
            Control::FC => Kind::FC,
            Control::Check(_) => Kind::Check,
            Control::CheckRes(_) => Kind::CheckRes,
            Control::T => Kind::T,
            Control::F => Kind::F,
            Control::CheckToken => Kind::CheckToken,
            Control::Reduce => Kind::Reduce,
            Control::ReduceF => Kind::ReduceF,
            Control::Stash => Kind::Stash,
        }
    }

    /// Control with its meta attributes reset; two controls with the same
    /// `semantic()` are indistinguishable to matching.
    pub fn semantic(&self) -> Control {
        match self {
            Control::Intent(_) => Control::Intent(0),
            Control::Plan(..) => Control::Plan(Name::new(""), 0),
            Control::Act(_) => Control::Act(Name::new("")),
            c => c.clone(),
        }
    }

    pub fn corr(&self) -> Option<u32> {
        match self {
            Control::Check(l) | Control::CheckRes(l) => Some(*l),
            _ => None,
        }
    }

    pub fn with_corr(&self, l: u32) -> Control {
        match self {
            Control::Check(_) => Control::Check(l),
            Control::CheckRes(_) => Control::CheckRes(l),
            c => c.clone(),
        }
    }

    /// Constructs a control of `kind` with placeholder attributes.
    pub fn of_kind(kind: Kind) -> Control {
        match kind {
            Kind::Beliefs => Control::Beliefs,
            Kind::B => Control::B(Literal::pos("")),
            Kind::False => Control::False,
            Kind::Desires => Control::Desires,
            Kind::E => Control::E(Name::new("")),
            Kind::Intentions => Control::Intentions,
            Kind::Intent => Control::Intent(0),
            Kind::Plans => Control::Plans,
            Kind::PlanSet => Control::PlanSet(Name::new("")),
            Kind::Plan => Control::Plan(Name::new(""), 0),
            Kind::PB => Control::PB,
            Kind::Act => Control::Act(Name::new("")),
            Kind::Pre => Control::Pre,
            Kind::Add => Control::Add,
            Kind::Del => Control::Del,
            Kind::Seq => Control::Seq,
            Kind::Try => Control::Try,
            Kind::Cons => Control::Cons,
            Kind::Conc => Control::Conc,
            Kind::L => Control::L,
            Kind::R => Control::R,
            Kind::Goal => Control::Goal,
            Kind::SC => Control::SC,
            Kind::FC => Control::FC,
            Kind::Check => Control::Check(0),
            Kind::CheckRes => Control::CheckRes(0),
            Kind::T => Control::T,
            Kind::F => Control::F,
            Kind::CheckToken => Control::CheckToken,
            Kind::Reduce => Control::Reduce,
            Kind::ReduceF => Control::ReduceF,
            Kind::Stash => Control::Stash,
        }
    }
}
