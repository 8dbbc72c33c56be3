#include "mapfdl/invariant.hpp"

#include <stdexcept>
#include <string>

namespace mapfdl {

void invariant_failure(const char* expr, const char* file, int line) {
  throw std::logic_error(std::string("invariant violated: ") + expr + " at " + file + ":" +
                         std::to_string(line));
}

}  // namespace mapfdl
