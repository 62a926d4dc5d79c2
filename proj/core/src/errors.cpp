#include "lrsca/errors.hpp"

namespace lrsca {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::size_limit: return "SizeLimit";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::not_in_span: return "NotInSpan";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::not_covered: return "NotCovered";
    case Errc::degenerate_arrangement: return "DegenerateArrangement";
    case Errc::retry_exhausted: return "RetryExhausted";
    case Errc::invalid_r: return "InvalidR";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::not_identified: return "NotIdentified";
    case Errc::invalid_decomposition: return "InvalidDecomposition";
    case Errc::exact_backend_required: return "ExactBackendRequired";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace lrsca
