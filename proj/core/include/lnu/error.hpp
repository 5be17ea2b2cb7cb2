#pragma once

#include <stdexcept>
#include <string>

namespace lnu {

// Every failure raised by the library derives from this type so callers
// (and the CLI) can catch one thing.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lnu
