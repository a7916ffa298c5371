#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limulrich/polynomial.hpp"

namespace limulrich {

struct parse_error : input_error {
  size_t offset;
  parse_error(const std::string& msg, size_t at)
      : input_error(msg + " (at byte " + std::to_string(at) + ")"), offset(at) {}
};

namespace detail {

struct PolyParser {
  // Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
  // factor := coefficient | var ('^' nat)?; var := 'x' nat | 'u'.
  // Whitespace is insignificant. An optional leading sign is accepted.
  std::string_view src;
  size_t pos = 0;
  int m;          // number of x-variables
  uint32_t p;
  bool allow_u;   // 'u' becomes variable index m

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }

  uint64_t parse_nat(const char* what) {
    skip_ws();
    if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
      throw parse_error(std::string("expected ") + what, pos);
    uint64_t v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      v = v * 10 + static_cast<uint64_t>(src[pos] - '0');
      if (v > (1ULL << 62)) throw parse_error("number too large", pos);
      ++pos;
    }
    return v;
  }

  // factor into (coefficient, exponent-bump)
  void parse_factor(uint32_t& coeff, Expo& exps) {
    skip_ws();
    if (pos >= src.size()) throw parse_error("empty factor", pos);
    char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = parse_nat("coefficient");
      coeff = fp_mul(coeff, static_cast<uint32_t>(v % p), p);
      return;
    }
    int var_idx;
    if (c == 'x') {
      ++pos;
      size_t at = pos;
      uint64_t idx = parse_nat("variable index after 'x'");
      if (idx >= static_cast<uint64_t>(m))
        throw parse_error("unknown variable x" + std::to_string(idx), at);
      var_idx = static_cast<int>(idx);
    } else if (c == 'u') {
      if (!allow_u) throw parse_error("unknown variable 'u' in this context", pos);
      ++pos;
      var_idx = m;
    } else {
      throw parse_error(std::string("unexpected character '") + c + "'", pos);
    }
    uint64_t e = 1;
    skip_ws();
    if (pos < src.size() && src[pos] == '^') {
      ++pos;
      e = parse_nat("exponent");
      if (e == 0 || e > 60000) throw parse_error("malformed exponent", pos);
    }
    exps[var_idx] = static_cast<uint16_t>(exps[var_idx] + e);
  }

  Term parse_term() {
    int total_vars = m + (allow_u ? 1 : 0);
    Term t{Expo(total_vars, 0), 1};
    parse_factor(t.coeff, t.exps);
    while (peek_is('*')) {
      ++pos;
      parse_factor(t.coeff, t.exps);
    }
    return t;
  }

  Polynomial parse() {
    int total_vars = m + (allow_u ? 1 : 0);
    Polynomial f{total_vars, p, {}};
    skip_ws();
    if (pos >= src.size()) throw parse_error("empty polynomial", pos);
    bool negate = false;
    if (src[pos] == '+' || src[pos] == '-') {
      negate = src[pos] == '-';
      ++pos;
    }
    for (;;) {
      Term t = parse_term();
      if (negate) t.coeff = fp_neg(t.coeff, p);
      f.terms.push_back(std::move(t));
      skip_ws();
      if (pos >= src.size()) break;
      if (src[pos] == '+') {
        negate = false;
        ++pos;
      } else if (src[pos] == '-') {
        negate = true;
        ++pos;
      } else {
        throw parse_error(std::string("unexpected character '") + src[pos] + "'", pos);
      }
    }
    canonicalize(f);
    return f;
  }
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view src, int m, uint32_t p, bool allow_u = false) {
  if (src.empty()) throw parse_error("empty polynomial", 0);
  detail::PolyParser parser{src, 0, m, p, allow_u};
  return parser.parse();
}

// Ring description file: `p=<prime>`, `vars=<m>`, optional `dim=<d>`, then
// one homogeneous polynomial per line. Blank lines and '#' comments allowed.
struct RingSpecFile {
  uint32_t p = 0;
  int vars = 0;
  std::optional<int> dim;
  std::vector<std::string> generator_sources;
  std::vector<Polynomial> generators;
};

inline RingSpecFile parse_ring_spec(const std::string& text) {
  RingSpecFile spec;
  size_t line_start = 0;
  bool header_done = false;
  auto fail = [&](const std::string& msg, size_t at) { throw parse_error(msg, at); };
  size_t i = 0;
  auto next_line = [&]() -> std::optional<std::pair<std::string, size_t>> {
    if (i >= text.size()) return std::nullopt;
    line_start = i;
    size_t end = text.find('\n', i);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(i, end - i);
    i = end + (end < text.size() ? 1 : 0);
    return std::make_pair(line, line_start);
  };
  while (auto ln = next_line()) {
    auto [line, at] = *ln;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    if (body[0] == '#') continue;
    if (body.rfind("p=", 0) == 0) {
      spec.p = static_cast<uint32_t>(std::stoul(body.substr(2)));
      continue;
    }
    if (body.rfind("vars=", 0) == 0) {
      spec.vars = std::stoi(body.substr(5));
      continue;
    }
    if (body.rfind("dim=", 0) == 0) {
      spec.dim = std::stoi(body.substr(4));
      continue;
    }
    if (!header_done) {
      if (spec.p == 0) fail("ring file must set p= before polynomials", at);
      if (spec.vars <= 0) fail("ring file must set vars= before polynomials", at);
      check_modulus(spec.p);
      header_done = true;
    }
    spec.generator_sources.push_back(body);
    spec.generators.push_back(parse_polynomial(body, spec.vars, spec.p));
  }
  if (spec.p == 0) throw parse_error("ring file is missing p=", 0);
  if (spec.vars <= 0) throw parse_error("ring file is missing vars=", 0);
  check_modulus(spec.p);
  return spec;
}

}  // namespace limulrich
