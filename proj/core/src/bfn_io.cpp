#include "jtprop/bfn_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jtprop/errors.hpp"

namespace jtprop {
namespace {

// Whitespace tokenizer that strips # comments and tracks line numbers.
class TokenStream {
 public:
  explicit TokenStream(std::istream& in) : in_(in) {}

  bool next(std::string& tok) {
    while (pos_ >= line_.size()) {
      if (!std::getline(in_, raw_)) return false;
      ++line_no_;
      auto hash = raw_.find('#');
      line_ = hash == std::string::npos ? raw_ : raw_.substr(0, hash);
      pos_ = 0;
      split();
      tok_idx_ = 0;
    }
    tok = tokens_[tok_idx_++];
    if (tok_idx_ >= tokens_.size()) pos_ = line_.size();
    return true;
  }

  std::size_t line() const { return line_no_; }

  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(line_no_, std::string("unexpected end of input, expected ") + what);
    return tok;
  }

  std::uint64_t expect_uint(const char* what) {
    std::string tok = expect(what);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (...) {
      throw ParseError(line_no_, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (used != tok.size())
      throw ParseError(line_no_, std::string("expected ") + what + ", got '" + tok + "'");
    return v;
  }

  double expect_value(const char* what) {
    std::string tok = expect(what);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (...) {
      throw ParseError(line_no_, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (used != tok.size())
      throw ParseError(line_no_, std::string("expected ") + what + ", got '" + tok + "'");
    return v;
  }

 private:
  void split() {
    tokens_.clear();
    std::istringstream ss(line_);
    std::string t;
    while (ss >> t) tokens_.push_back(t);
    if (tokens_.empty()) pos_ = line_.size();  // force another getline
  }

  std::istream& in_;
  std::string raw_, line_;
  std::vector<std::string> tokens_;
  std::size_t tok_idx_ = 0;
  std::size_t pos_ = std::string::npos;
  std::size_t line_no_ = 0;
};

std::string fmt_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Factorisation parse_model(std::istream& in) {
  TokenStream ts(in);
  if (ts.expect("BFN header") != "BFN") throw ParseError(ts.line(), "expected 'BFN' header");
  if (ts.expect_uint("format version") != 1) throw ParseError(ts.line(), "unsupported BFN version");
  if (ts.expect("VARS") != "VARS") throw ParseError(ts.line(), "expected 'VARS'");
  std::uint64_t n = ts.expect_uint("variable count");
  if (n > kMaxVars) throw ParseError(ts.line(), "variable count exceeds 63");
  if (ts.expect("FACTORS") != "FACTORS") throw ParseError(ts.line(), "expected 'FACTORS'");
  std::uint64_t m = ts.expect_uint("factor count");

  Factorisation f;
  f.var_count = static_cast<std::uint32_t>(n);
  SubsetMask covered = 0;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (ts.expect("factor line") != "F") throw ParseError(ts.line(), "expected 'F'");
    std::uint64_t k = ts.expect_uint("scope size");
    if (k > kMaxVars) throw ParseError(ts.line(), "factor scope too large");
    std::vector<VarId> vars;
    vars.reserve(k);
    for (std::uint64_t j = 0; j < k; ++j) {
      std::uint64_t v = ts.expect_uint("variable id");
      if (v < 1 || v > n)
        throw ParseError(ts.line(), "variable " + std::to_string(v) + " out of range 1.." +
                                        std::to_string(n));
      vars.push_back(static_cast<VarId>(v));
    }
    Scope scope(vars);
    if (scope.size() != k) throw ParseError(ts.line(), "duplicate variable in factor scope");
    const std::uint64_t want = std::uint64_t{1} << k;
    std::vector<double> table;
    table.reserve(want);
    for (std::uint64_t t = 0; t < want; ++t) {
      double v;
      try {
        v = ts.expect_value("factor value");
      } catch (const ParseError& e) {
        throw ParseError(e.line(), "expected " + std::to_string(want) + " values for factor " +
                                       std::to_string(i + 1) + " (" + e.what() + ")");
      }
      if (v < 0.0) throw ParseError(ts.line(), "negative factor value");
      table.push_back(v);
    }
    covered |= scope.full_mask();
    f.factors.emplace_back(std::move(scope), std::move(table));
  }
  std::string extra;
  if (ts.next(extra)) throw ParseError(ts.line(), "trailing content '" + extra + "'");
  for (VarId x = 1; x <= f.var_count; ++x)
    if (!(covered & var_bit(x)))
      throw ParseError(0, "variable " + std::to_string(x) + " appears in no factor");
  return f;
}

Factorisation parse_model_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_model(ss);
}

Factorisation load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_model(in);
}

void write_model(std::ostream& out, const Factorisation& f) {
  out << "BFN 1\n";
  out << "VARS " << f.var_count << "\n";
  out << "FACTORS " << f.factors.size() << "\n";
  for (const Potential& p : f.factors) {
    out << "F " << p.scope().size();
    for (VarId v : p.scope()) out << " " << v;
    out << "\n";
    for (std::size_t t = 0; t < p.size(); ++t) out << (t ? " " : "") << fmt_value(p[t]);
    out << "\n";
  }
}

std::string format_model(const Factorisation& f) {
  std::ostringstream ss;
  write_model(ss, f);
  return ss.str();
}

void save_model(const std::string& path, const Factorisation& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_model(out, f);
}

JtFile parse_jt(std::istream& in) {
  TokenStream ts(in);
  if (ts.expect("JT header") != "JT") throw ParseError(ts.line(), "expected 'JT' header");
  std::uint64_t c = ts.expect_uint("vertex count");
  if (c == 0) throw ParseError(ts.line(), "junction tree needs at least one vertex");

  JtFile out;
  for (std::uint64_t i = 0; i < c; ++i) {
    if (ts.expect("vertex line") != "V") throw ParseError(ts.line(), "expected 'V'");
    std::uint64_t k = ts.expect_uint("vertex size");
    std::vector<VarId> vars;
    for (std::uint64_t j = 0; j < k; ++j)
      vars.push_back(static_cast<VarId>(ts.expect_uint("variable id")));
    Scope scope(vars);
    if (scope.size() != k) throw ParseError(ts.line(), "duplicate variable in vertex");
    out.tree.vertices.push_back(std::move(scope));
  }
  for (std::uint64_t i = 0; i + 1 < c; ++i) {
    if (ts.expect("edge line") != "E") throw ParseError(ts.line(), "expected 'E'");
    std::uint64_t a = ts.expect_uint("vertex id");
    std::uint64_t b = ts.expect_uint("vertex id");
    if (a < 1 || a > c || b < 1 || b > c || a == b)
      throw ParseError(ts.line(), "edge endpoints out of range");
    out.tree.edges.push_back({static_cast<std::int32_t>(a - 1), static_cast<std::int32_t>(b - 1)});
  }
  std::string tok;
  while (ts.next(tok)) {
    if (tok != "A") throw ParseError(ts.line(), "expected 'A' or end of file, got '" + tok + "'");
    std::uint64_t fi = ts.expect_uint("factor id");
    std::uint64_t v = ts.expect_uint("vertex id");
    if (fi < 1) throw ParseError(ts.line(), "factor ids are 1-based");
    if (v < 1 || v > c) throw ParseError(ts.line(), "vertex id out of range");
    if (out.assignment.size() < fi) out.assignment.resize(fi, -1);
    out.assignment[fi - 1] = static_cast<std::int32_t>(v - 1);
  }
  return out;
}

JtFile parse_jt_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_jt(ss);
}

JtFile load_jt(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_jt(in);
}

void write_jt(std::ostream& out, const JunctionTree& jt,
              std::span<const std::int32_t> assignment) {
  out << "JT " << jt.vertex_count() << "\n";
  for (const Scope& v : jt.vertices) {
    out << "V " << v.size();
    for (VarId x : v) out << " " << x;
    out << "\n";
  }
  for (auto [a, b] : jt.edges) out << "E " << a + 1 << " " << b + 1 << "\n";
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out << "A " << i + 1 << " " << assignment[i] + 1 << "\n";
}

void save_jt(const std::string& path, const JunctionTree& jt,
             std::span<const std::int32_t> assignment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_jt(out, jt, assignment);
}

std::string format_marginal_line(VarId x, double p0, double p1) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%u %.12g %.12g", x, p0, p1);
  return buf;
}

}  // namespace jtprop
