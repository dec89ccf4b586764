#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patree {

enum class Errc {
  invalid_weight,
  non_convergent,
  bracketing_failed,
  too_large,
  missing_root,
  missing_parent,
  missing_left_sibling,
  vertex_absent,
  too_shallow,
  invalid_mark,
  unnormalized,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code);

// Every failure surfaced by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace patree
