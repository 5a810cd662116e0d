use std::fmt;

use serde::Serialize;

use super::category::ImplicitCategory;

/// The eleven referential interpretation types of implicit roles used by
/// the FiGref scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OGormanType {
    SalientRecent,
    RememberRoles,
    ScriptInferrable,
    Deictic,
    Cataphoric,
    LowInformation,
    IteratedEvents,
    Bridging,
    GenreBased,
    Generic,
    TypeIdentifiable,
}

/// How the inventory groups the type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Definiteness {
    Definite,
    Indefinite,
    EdgeCase,
}

impl OGormanType {
    pub const ALL: [OGormanType; 11] = [
        OGormanType::SalientRecent,
        OGormanType::RememberRoles,
        OGormanType::ScriptInferrable,
        OGormanType::Deictic,
        OGormanType::Cataphoric,
        OGormanType::LowInformation,
        OGormanType::IteratedEvents,
        OGormanType::Bridging,
        OGormanType::GenreBased,
        OGormanType::Generic,
        OGormanType::TypeIdentifiable,
    ];

    pub fn definiteness(self) -> Definiteness {
        use OGormanType::*;
        match self {
            SalientRecent | RememberRoles | ScriptInferrable | Deictic => Definiteness::Definite,
            Cataphoric | LowInformation | IteratedEvents => Definiteness::Indefinite,
            Bridging | GenreBased | Generic | TypeIdentifiable => Definiteness::EdgeCase,
        }
    }
}

impl fmt::Display for OGormanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OGormanType::SalientRecent => "Salient/recent",
            OGormanType::RememberRoles => "Remember Roles",
            OGormanType::ScriptInferrable => "Script-inferrable",
            OGormanType::Deictic => "Deictic",
            OGormanType::Cataphoric => "Cataphoric",
            OGormanType::LowInformation => "Low-information",
            OGormanType::IteratedEvents => "Iterated Events",
            OGormanType::Bridging => "Bridging",
            OGormanType::GenreBased => "Genre-based",
            OGormanType::Generic => "Generic",
            OGormanType::TypeIdentifiable => "Type-identifiable",
        };
        f.write_str(name)
    }
}

/// What an annotator does with a role of a given interpretation type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Treatment {
    /// Annotate an implicit unit with this category.
    MapsTo(ImplicitCategory),
    /// The referent is recoverable from the text: use a Remote edge.
    RemoteInstead,
    /// Remote edge if the role is mentioned later in the text, otherwise an
    /// implicit unit with this category.
    ConditionalRemoteElse(ImplicitCategory),
}

pub fn ogorman_mapping(t: OGormanType) -> Treatment {
    use OGormanType::*;
    match t {
        SalientRecent | RememberRoles | ScriptInferrable | Bridging => Treatment::RemoteInstead,
        Cataphoric => Treatment::ConditionalRemoteElse(ImplicitCategory::NonSpecific),
        Deictic => Treatment::MapsTo(ImplicitCategory::Deictic),
        Generic => Treatment::MapsTo(ImplicitCategory::Generic),
        GenreBased => Treatment::MapsTo(ImplicitCategory::GenreBased),
        TypeIdentifiable => Treatment::MapsTo(ImplicitCategory::TypeIdentifiable),
        LowInformation => Treatment::MapsTo(ImplicitCategory::NonSpecific),
        IteratedEvents => Treatment::MapsTo(ImplicitCategory::IteratedSet),
    }
}
