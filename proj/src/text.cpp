#include "lovabs/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace lovabs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void check_length(std::size_t n) {
  if (n == 0) throw DomainError("empty label or report string");
  if (n > static_cast<std::size_t>(kMaxK)) throw CapacityError("label or report string longer than 20");
}

}  // namespace

std::string format_label(const Label& y) {
  std::string s(static_cast<std::size_t>(y.k), '-');
  for (int i = 0; i < y.k; ++i) {
    if (has(y.bits, i)) s[static_cast<std::size_t>(i)] = '+';
  }
  return s;
}

std::string format_report(const AbstainReport& v) {
  std::string s(static_cast<std::size_t>(v.k), '-');
  for (int i = 0; i < v.k; ++i) {
    const int x = v.value(i);
    s[static_cast<std::size_t>(i)] = x > 0 ? '+' : (x == 0 ? '0' : '-');
  }
  return s;
}

std::string format_vector(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ',';
    os << x[i];
  }
  return os.str();
}

Label parse_label(std::string_view s) {
  s = trim(s);
  check_length(s.size());
  Label y{static_cast<int>(s.size()), 0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      y.bits |= Mask{1} << i;
    } else if (s[i] != '-') {
      throw DomainError("label characters must be '+' or '-'");
    }
  }
  return y;
}

AbstainReport parse_report(std::string_view s) {
  s = trim(s);
  check_length(s.size());
  AbstainReport v{static_cast<int>(s.size()), 0, 0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    switch (s[i]) {
      case '+': v.positives |= Mask{1} << i; break;
      case '0': v.zeros |= Mask{1} << i; break;
      case '-': break;
      default: throw DomainError("report characters must be '+', '0' or '-'");
    }
  }
  return v;
}

std::vector<double> parse_vector(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) throw DomainError("empty vector");
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
      throw DomainError("cannot parse vector entry '" + std::string(item) + "'");
    }
    if (!std::isfinite(value)) throw DomainError("vector entries must be finite");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace lovabs
