#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trivortex {

enum class Errc {
  source_coincidence,
  unequal_amplitudes,
  collinear_arrangement,
  degenerate_index,
  grid_too_small,
  singular_point,
  invalid_argument,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::source_coincidence: return "SourceCoincidence";
    case Errc::unequal_amplitudes: return "UnequalAmplitudes";
    case Errc::collinear_arrangement: return "CollinearArrangement";
    case Errc::degenerate_index: return "DegenerateIndex";
    case Errc::grid_too_small: return "GridTooSmall";
    case Errc::singular_point: return "SingularPoint";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error raised by every module. `name()` is the stable identifier the
/// CLI prints on the diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

inline void require(bool condition, const char* detail) {
  if (!condition) throw Error(Errc::invalid_argument, detail);
}

}  // namespace trivortex
