#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mhm {

enum class Errc {
  degenerate_tuple,
  boundary,
  not_separating,
  no_convergence,
  no_common_axis,
  not_strong_causal,
  not_a_strip,
  orientation,
  target_outside_arc,
  invalid_path,
  no_separating_sample,
  format,
  config,
  structure_load,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::degenerate_tuple: return "DegenerateTuple";
    case Errc::boundary: return "Boundary";
    case Errc::not_separating: return "NotSeparating";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::no_common_axis: return "NoCommonAxis";
    case Errc::not_strong_causal: return "NotStrongCausal";
    case Errc::not_a_strip: return "NotAStrip";
    case Errc::orientation: return "OrientationError";
    case Errc::target_outside_arc: return "TargetOutsideArc";
    case Errc::invalid_path: return "InvalidPath";
    case Errc::no_separating_sample: return "NoSeparatingSample";
    case Errc::format: return "FormatError";
    case Errc::config: return "ConfigError";
    case Errc::structure_load: return "StructureLoadError";
  }
  return "Error";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mhm
