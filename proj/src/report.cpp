#include "atiyah/report.hpp"

#include <chrono>

namespace atiyah {

json ConjectureReport::to_json() const {
  json j;
  j["conjecture"] = conjecture;
  j["mode"] = mode;
  j["n"] = n;
  j["ok"] = ok;
  for (auto it = data.begin(); it != data.end(); ++it) j[it.key()] = it.value();
  if (witness) j["witness"] = *witness;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

json integer_json(const poly::Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double elapsed_since(std::int64_t start_ns) { return static_cast<double>(now_ns() - start_ns) / 1e6; }

}  // namespace atiyah
