#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jtprop/junction_tree.hpp"

namespace jtprop {

// BFN model text: `BFN 1`, `VARS n`, `FACTORS m`, then per factor a line
// `F k v1 ... vk` followed by 2^k whitespace-separated non-negative values
// (index t holds the subset with v_j present iff bit (j-1) of t is set).
// `#` starts a comment. Values are written with 17 significant digits so a
// write/read round trip is lossless.

Factorisation parse_model(std::istream& in);
Factorisation parse_model_text(const std::string& text);
Factorisation load_model(const std::string& path);
void write_model(std::ostream& out, const Factorisation& f);
std::string format_model(const Factorisation& f);
void save_model(const std::string& path, const Factorisation& f);

// JT text: `JT c`, then c lines `V k w1 ... wk`, then c-1 lines `E a b`
// (1-based vertex ids), then optional `A f v` factor-assignment lines.
struct JtFile {
  JunctionTree tree;
  std::vector<std::int32_t> assignment;  // empty when the file has no A lines
};

JtFile parse_jt(std::istream& in);
JtFile parse_jt_text(const std::string& text);
JtFile load_jt(const std::string& path);
void write_jt(std::ostream& out, const JunctionTree& jt,
              std::span<const std::int32_t> assignment = {});
void save_jt(const std::string& path, const JunctionTree& jt,
             std::span<const std::int32_t> assignment = {});

/// One result row, `x p0 p1` with 12 significant digits.
std::string format_marginal_line(VarId x, double p0, double p1);

}  // namespace jtprop
