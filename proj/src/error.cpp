#include "negtax/error.hpp"

namespace negtax {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NoCueLexicon: return "NoCueLexicon";
    case Errc::NoScope: return "NoScope";
    case Errc::InvalidExclusion: return "InvalidExclusion";
    case Errc::ParseError: return "ParseError";
    case Errc::UnboundVar: return "UnboundVar";
    case Errc::Precondition: return "PreconditionViolation";
    case Errc::OracleError: return "OracleError";
    case Errc::ReplayMiss: return "ReplayMiss";
    case Errc::ProofRejected: return "ProofRejected";
    case Errc::TransportError: return "TransportError";
    case Errc::ResourceError: return "ResourceError";
    case Errc::NotAntonyms: return "NotAntonyms";
    case Errc::ProofMissing: return "ProofMissing";
    case Errc::ShapeError: return "ShapeError";
    case Errc::GenerationRejected: return "GenerationRejected";
    case Errc::GroundingError: return "GroundingError";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NotIndexed: return "NotIndexed";
    case Errc::BridgeProtocolError: return "BridgeProtocolError";
    case Errc::BridgeTimeout: return "BridgeTimeout";
    case Errc::MissingQrels: return "MissingQrels";
    case Errc::UndefinedKappa: return "UndefinedKappa";
    case Errc::UndefinedMetric: return "UndefinedMetric";
    case Errc::Usage: return "UsageError";
  }
  return "Error";
}

}  // namespace negtax
