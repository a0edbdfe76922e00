#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgp/errors.hpp"
#include "cgp/families/counter.hpp"
#include "cgp/families/embedding.hpp"
#include "cgp/families/feedback.hpp"
#include "cgp/families/lattice.hpp"

namespace cgp {

/// Result of parsing family text: a waiting-time family, a feedback family,
/// or a signed law that only supports the atom and fluctuation tools.
using Family = std::variant<WaitingFamilyPtr, FeedbackFamilyPtr, IndexedLawPtr>;

inline std::string render(const Family& f) {
  return std::visit([](const auto& p) { return p->canonical(); }, f);
}

namespace detail {

class FamilyParser {
 public:
  explicit FamilyParser(std::string_view text) : s_(text) {}

  Family parse_all() {
    Family f = parse_one();
    skip_ws();
    if (i_ != s_.size()) throw ParseError(i_, "unexpected trailing characters");
    return f;
  }

 private:
  struct Arg {
    double value;
    std::size_t key_pos;
  };

  Family parse_one() {
    skip_ws();
    const std::size_t ident_pos = i_;
    const std::string ident = read_ident();
    if (ident.empty()) throw ParseError(ident_pos, "expected a family name");

    if (ident == "embed") {
      expect('(');
      const std::size_t inner_pos = i_;
      Family inner = parse_one();
      skip_ws();
      expect(')');
      const auto* fb = std::get_if<FeedbackFamilyPtr>(&inner);
      if (fb == nullptr) throw ParseError(inner_pos, "embed(...) needs a feedback family");
      return embed_feedback(*fb);
    }

    static const std::set<std::string> known = {
        "power_exponential", "power_feedback", "random_power_feedback", "affine_feedback", "two_point_counter",
        "geometric_counter", "rademacher",     "const_table",           "four_adic",       "binomial_blocks",
        "uniform_first"};
    if (!known.contains(ident)) throw ParseError(ident_pos, "unknown family '" + ident + "'");

    skip_ws();
    expect('{');
    std::map<std::string, Arg> args;
    skip_ws();
    if (peek() != '}') {
      for (;;) {
        skip_ws();
        const std::size_t key_pos = i_;
        const std::string key = read_ident();
        if (key.empty()) throw ParseError(key_pos, "expected a key");
        skip_ws();
        const std::size_t eq_pos = i_;
        expect('=');
        skip_ws();
        const double value = read_number(eq_pos, key);
        if (args.contains(key)) throw ParseError(key_pos, "duplicate key '" + key + "'");
        args.emplace(key, Arg{value, key_pos});
        skip_ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        break;
      }
    }
    const std::size_t close_pos = i_;
    expect('}');

    try {
      return build(ident, args, close_pos);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ident_pos, e.what());
    }
  }

  Family build(const std::string& ident, std::map<std::string, Arg>& args, std::size_t close_pos) {
    auto take = [&](const std::string& key) {
      auto it = args.find(key);
      if (it == args.end()) throw ParseError(close_pos, "missing key '" + key + "' for " + ident);
      const double v = it->second.value;
      args.erase(it);
      return v;
    };
    auto take_or = [&](const std::string& key, double fallback) {
      auto it = args.find(key);
      if (it == args.end()) return fallback;
      const double v = it->second.value;
      args.erase(it);
      return v;
    };
    auto finish = [&] {
      if (!args.empty()) {
        const auto& [key, arg] = *args.begin();
        throw ParseError(arg.key_pos, "unexpected key '" + key + "' for " + ident);
      }
    };

    // Unknown keys are reported before missing ones.
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"power_exponential", {"p"}},  {"power_feedback", {"p"}},    {"random_power_feedback", {"p", "lo", "hi"}},
        {"affine_feedback", {"a", "b"}}, {"rademacher", {"scale", "ratio"}}, {"const_table", {"scale", "ratio"}}};
    const auto al = allowed.find(ident);
    for (const auto& [key, arg] : args) {
      const bool table_entry = ident == "const_table" && key.size() > 1 && key[0] == 'x' &&
                               std::all_of(key.begin() + 1, key.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
      if (table_entry || (al != allowed.end() && al->second.contains(key))) continue;
      throw ParseError(arg.key_pos, "unexpected key '" + key + "' for " + ident);
    }

    Family out;
    if (ident == "power_exponential") {
      out = embed_feedback(std::make_shared<PowerFeedback>(take("p")));
    } else if (ident == "power_feedback") {
      out = FeedbackFamilyPtr(std::make_shared<PowerFeedback>(take("p")));
    } else if (ident == "random_power_feedback") {
      const double p = take("p");
      const double lo = take("lo");
      const double hi = take("hi");
      out = FeedbackFamilyPtr(std::make_shared<RandomPowerFeedback>(p, lo, hi));
    } else if (ident == "affine_feedback") {
      const double a = take("a");
      const double b = take("b");
      out = FeedbackFamilyPtr(std::make_shared<AffineFeedback>(a, b));
    } else if (ident == "two_point_counter") {
      out = WaitingFamilyPtr(std::make_shared<TwoPointCounter>());
    } else if (ident == "geometric_counter") {
      out = WaitingFamilyPtr(std::make_shared<GeometricCounter>());
    } else if (ident == "four_adic") {
      out = WaitingFamilyPtr(std::make_shared<FourAdic>());
    } else if (ident == "binomial_blocks") {
      out = WaitingFamilyPtr(std::make_shared<BinomialBlocks>());
    } else if (ident == "uniform_first") {
      out = WaitingFamilyPtr(std::make_shared<UniformFirst>());
    } else if (ident == "rademacher") {
      const double scale = take_or("scale", 1.0);
      const double ratio = take_or("ratio", 1.0);
      out = IndexedLawPtr(std::make_shared<Rademacher>(scale, ratio));
    } else if (ident == "const_table") {
      std::vector<double> table;
      for (std::size_t k = 1;; ++k) {
        auto it = args.find("x" + std::to_string(k));
        if (it == args.end()) break;
        table.push_back(it->second.value);
        args.erase(it);
      }
      const double scale = take_or("scale", 1.0);
      const double ratio = take_or("ratio", 1.0);
      finish();
      return WaitingFamilyPtr(std::make_shared<ConstTable>(std::move(table), scale, ratio));
    }
    finish();
    return out;
  }

  [[nodiscard]] char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(i_, std::string("expected '") + c + "'");
    ++i_;
  }

  std::string read_ident() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  double read_number(std::size_t eq_pos, const std::string& key) {
    const std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '}' && s_[i_] != ')' &&
           !std::isspace(static_cast<unsigned char>(s_[i_]))) {
      ++i_;
    }
    const std::string_view tok = s_.substr(start, i_ - start);
    if (tok.empty()) throw ParseError(eq_pos, "missing value for key '" + key + "'");
    const char* first = tok.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ParseError(eq_pos, "non-numeric value '" + std::string(tok) + "' for key '" + key + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses `ident{key=number,...}` or `embed(<feedback>)`.
inline Family parse_family(std::string_view text) { return detail::FamilyParser(text).parse_all(); }

inline WaitingFamilyPtr as_waiting(const Family& f) {
  if (const auto* w = std::get_if<WaitingFamilyPtr>(&f)) return *w;
  throw PreconditionError(render(f) + " is not a waiting-time family");
}

inline FeedbackFamilyPtr as_feedback(const Family& f) {
  if (const auto* fb = std::get_if<FeedbackFamilyPtr>(&f)) return *fb;
  throw PreconditionError(render(f) + " is not a feedback family");
}

/// Any family viewed as a sequence of laws; feedback families are embedded.
inline IndexedLawPtr as_law(const Family& f) {
  if (const auto* w = std::get_if<WaitingFamilyPtr>(&f)) return *w;
  if (const auto* l = std::get_if<IndexedLawPtr>(&f)) return *l;
  return embed_feedback(std::get<FeedbackFamilyPtr>(f));
}

inline WaitingFamilyPtr parse_waiting(std::string_view text) { return as_waiting(parse_family(text)); }
inline FeedbackFamilyPtr parse_feedback(std::string_view text) { return as_feedback(parse_family(text)); }

}  // namespace cgp
