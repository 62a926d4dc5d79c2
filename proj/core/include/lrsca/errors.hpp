#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrsca {

enum class Errc {
  size_limit,
  degenerate_input,
  not_in_span,
  rank_deficient,
  shape_mismatch,
  not_covered,
  degenerate_arrangement,
  retry_exhausted,
  invalid_r,
  invalid_params,
  cap_exceeded,
  not_identified,
  invalid_decomposition,
  exact_backend_required,
  parse_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lrsca
