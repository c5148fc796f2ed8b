#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace bnlab::cli {

std::string g17(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit(const nlohmann::ordered_json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
  case nlohmann::ordered_json::value_t::object: {
    if (j.empty()) { out += "{}"; return; }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + nlohmann::json(it.key()).dump() + ": ";
      emit(it.value(), indent, depth + 1, out);
    }
    out += "\n" + close_pad + "}";
    return;
  }
  case nlohmann::ordered_json::value_t::array: {
    if (j.empty()) { out += "[]"; return; }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      emit(j[i], indent, depth + 1, out);
    }
    out += "\n" + close_pad + "]";
    return;
  }
  case nlohmann::ordered_json::value_t::number_float: {
    const double x = j.get<double>();
    out += std::isfinite(x) ? g17(x) : "null";
    return;
  }
  default:
    out += j.dump();
  }
}

} // namespace

std::string dump17(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += "\n";
  return out;
}

} // namespace bnlab::cli
