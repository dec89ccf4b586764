#include "patree/error.hpp"

namespace patree {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_weight: return "InvalidWeight";
    case Errc::non_convergent: return "NonConvergent";
    case Errc::bracketing_failed: return "BracketingFailed";
    case Errc::too_large: return "TooLarge";
    case Errc::missing_root: return "MissingRoot";
    case Errc::missing_parent: return "MissingParent";
    case Errc::missing_left_sibling: return "MissingLeftSibling";
    case Errc::vertex_absent: return "VertexAbsent";
    case Errc::too_shallow: return "TooShallow";
    case Errc::invalid_mark: return "InvalidMark";
    case Errc::unnormalized: return "Unnormalized";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace patree
