#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "atiyah/poly.hpp"

namespace atiyah {

using json = nlohmann::ordered_json;

/// Structured outcome of a check: statement id, mode, pass flag, payload.
struct ConjectureReport {
  std::string conjecture;
  std::string mode;  // "symbolic" or "numeric"
  int n = 0;
  bool ok = true;
  json data = json::object();
  std::optional<json> witness;
  double elapsed_ms = 0;

  json to_json() const;
};

/// Integers that fit in 64 bits become JSON numbers, others decimal strings.
json integer_json(const poly::Integer& v);

/// Milliseconds since `start` on the steady clock.
double elapsed_since(std::int64_t start_ns);
std::int64_t now_ns();

}  // namespace atiyah
