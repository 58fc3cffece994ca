#include "lwf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace lwf {

std::size_t resolve_threads(int requested) {
  if (requested > 0) return static_cast<std::size_t>(requested);
  if (const char* env = std::getenv("LWF_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // Unparseable values fall through to the hardware default.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace lwf
