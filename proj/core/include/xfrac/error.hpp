#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xfrac {

enum class ErrorCode {
  invalid_argument,
  degenerate_geometry,
  on_discontinuity,
  out_of_element,
  non_convergence,
  solver_failure,
  crowding,
  domain_error,
  near_tip,
  singular_system,
  no_direction,
  growth_terminated,
  no_rate,
  out_of_validity,
  unsupported_configuration,
  io_error,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal diagnostics (quadrature fallbacks, shrunken J-domains). The
// default sink writes "warning: ..." to stderr; tools and tests may redirect.
using WarningSink = std::function<void(std::string_view)>;
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace xfrac
