#include "afsec/parallel.hpp"

#include <cstdlib>
#include <string>

#include "afsec/errors.hpp"

namespace afsec {

std::size_t default_workers() {
  if (const char* env = std::getenv("AFSEC_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidInput, std::string("AFSEC_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace afsec
