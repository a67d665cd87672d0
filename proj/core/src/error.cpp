#include "xfrac/error.hpp"

#include <iostream>
#include <mutex>

namespace xfrac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::degenerate_geometry: return "degenerate_geometry";
    case ErrorCode::on_discontinuity: return "on_discontinuity";
    case ErrorCode::out_of_element: return "out_of_element";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::solver_failure: return "solver_failure";
    case ErrorCode::crowding: return "crowding";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::near_tip: return "near_tip";
    case ErrorCode::singular_system: return "singular_system";
    case ErrorCode::no_direction: return "no_direction";
    case ErrorCode::growth_terminated: return "growth_terminated";
    case ErrorCode::no_rate: return "no_rate";
    case ErrorCode::out_of_validity: return "out_of_validity";
    case ErrorCode::unsupported_configuration: return "unsupported_configuration";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

std::mutex sink_mutex;
WarningSink& sink() {
  static WarningSink s = [](std::string_view m) { std::cerr << "warning: " << m << '\n'; };
  return s;
}

}  // namespace

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex);
  sink() = std::move(s);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

}  // namespace xfrac
