#include "pclass/error.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pclass/window.hpp"

namespace pclass {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::domain: return "domain";
    case ErrorCode::negative_spectrum: return "negative_spectrum";
    case ErrorCode::hypothesis: return "hypothesis";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::search_failure: return "search_failure";
    case ErrorCode::parse: return "parse";
    case ErrorCode::unknown_check: return "unknown_check";
    case ErrorCode::unsatisfiable: return "unsatisfiable";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

SpectrumWindow::SpectrumWindow(double m, double M) : m_(m), M_(M) {
  if (!std::isfinite(m) || !std::isfinite(M))
    fail(ErrorCode::invalid_input, fmt::format("window [{}, {}] is not finite", m, M));
  if (!(m < M)) fail(ErrorCode::invalid_input, fmt::format("window [{}, {}] needs m < M", m, M));
}

}  // namespace pclass
