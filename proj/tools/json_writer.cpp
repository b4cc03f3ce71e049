#include <cmath>
#include <cstdio>

#include "cli.hpp"

namespace symdyn::cli {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write(std::string& out, const json& j, int level) {
  const std::string pad(static_cast<std::size_t>(2 * level), ' ');
  const std::string pad_in(static_cast<std::size_t>(2 * (level + 1)), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + json(it.key()).dump() + ": ";
        write(out, it.value(), level + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad_in;
        write(out, j[i], level + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      if (std::isfinite(x))
        out += fmt_double(x);
      else
        out += "\"" + fmt_double(x) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

}  // namespace symdyn::cli
