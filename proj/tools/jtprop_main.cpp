#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jtprop/bfn_io.hpp"
#include "jtprop/errors.hpp"
#include "jtprop/generate.hpp"
#include "jtprop/oracle.hpp"
#include "jtprop/propagation.hpp"

namespace {

using namespace jtprop;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInconsistent = 2;

EngineKind engine_from_name(const std::string& name) {
  if (name == "ss") return EngineKind::ShaferShenoy;
  if (name == "hugin") return EngineKind::Hugin;
  if (name == "arch1") return EngineKind::Arch1Simple;
  if (name == "arch1-fast") return EngineKind::Arch1Cached;
  if (name == "arch2") return EngineKind::Arch2;
  throw CLI::ValidationError("--engine", "unknown engine '" + name + "'");
}

struct ModelArgs {
  std::string input;
  std::string jt_path;
  std::string root = "max";
};

void add_model_args(CLI::App* cmd, ModelArgs& args, bool with_root) {
  cmd->add_option("--input", args.input, "BFN model file")->required();
  cmd->add_option("--jt", args.jt_path, "junction tree file (constructed when omitted)");
  if (with_root)
    cmd->add_option("--root", args.root,
                    "root vertex: 1-based index into the tree's vertex list, or 'max'");
}

CompiledModel load_compiled(const ModelArgs& args) {
  Factorisation f = load_model(args.input);
  std::optional<JunctionTree> jt;
  std::optional<std::vector<std::int32_t>> assignment;
  if (!args.jt_path.empty()) {
    JtFile jf = load_jt(args.jt_path);
    jt = std::move(jf.tree);
    if (!jf.assignment.empty()) {
      for (std::int32_t a : jf.assignment)
        if (a < 0) throw std::runtime_error("junction tree file assigns only some factors");
      assignment = std::move(jf.assignment);
    }
  }
  RootStrategy strategy = RootStrategy::MaxCardinality;
  std::int32_t root_idx = -1;
  if (args.root != "max") {
    strategy = RootStrategy::Explicit;
    try {
      root_idx = std::stoi(args.root) - 1;
    } catch (...) {
      throw std::runtime_error("--root expects a 1-based vertex index or 'max'");
    }
  }
  return CompiledModel::build(std::move(f), std::move(jt), strategy, root_idx,
                              std::move(assignment));
}

void print_marginals(const MarginalResult& r) {
  for (VarId x = 1; x <= r.probs.size(); ++x) {
    std::printf("%s\n", format_marginal_line(x, r.probs[x - 1].first, r.probs[x - 1].second).c_str());
  }
}

void print_stats(const PropagationRun& run, const OpCounters& marg, std::FILE* to) {
  OpCounters prop = run.stats.totals();
  std::fprintf(to, "STAT prop_multiplications %llu\n",
               static_cast<unsigned long long>(prop.multiplications));
  std::fprintf(to, "STAT prop_additions %llu\n", static_cast<unsigned long long>(prop.additions));
  std::fprintf(to, "STAT prop_divisions %llu\n", static_cast<unsigned long long>(prop.divisions));
  std::fprintf(to, "STAT prop_table_writes %llu\n",
               static_cast<unsigned long long>(prop.table_writes));
  std::fprintf(to, "STAT prop_peak_aux_entries %llu\n",
               static_cast<unsigned long long>(run.stats.peak_aux()));
  std::fprintf(to, "STAT message_entries %llu\n",
               static_cast<unsigned long long>(run.messages.stored_entries()));
  if (run.hugin)
    std::fprintf(to, "STAT hugin_resident_entries %llu\n",
                 static_cast<unsigned long long>(run.hugin->resident_entries()));
  std::fprintf(to, "STAT marg_multiplications %llu\n",
               static_cast<unsigned long long>(marg.multiplications));
  std::fprintf(to, "STAT marg_additions %llu\n", static_cast<unsigned long long>(marg.additions));
  std::fprintf(to, "STAT marg_divisions %llu\n", static_cast<unsigned long long>(marg.divisions));
  std::fprintf(to, "STAT marg_peak_aux_entries %llu\n",
               static_cast<unsigned long long>(marg.peak_aux_entries));
}

int cmd_marginals(const ModelArgs& args, const std::string& engine, const std::string& style,
                  bool stats) {
  CompiledModel m = load_compiled(args);
  PropagationRun run = propagate(m, engine_from_name(engine));
  OpCounters marg_ctr;
  MarginalStyle ms = style == "dual" ? MarginalStyle::Dual : MarginalStyle::Stream;
  MarginalResult r = compute_marginals(m, run.messages, ms, &marg_ctr);
  print_marginals(r);
  if (stats) print_stats(run, marg_ctr, stderr);
  return kExitOk;
}

int cmd_oracle(const std::string& input) {
  Factorisation f = load_model(input);
  print_marginals(brute_force_marginals(f));
  return kExitOk;
}

int cmd_validate(const std::string& input, const std::string& jt_path) {
  Factorisation f = load_model(input);
  JtFile jf = load_jt(jt_path);
  auto violations = validate(jf.tree, f);
  if (violations.empty()) {
    std::printf("valid\n");
    return kExitOk;
  }
  for (const auto& v : violations) std::printf("violation: %s\n", v.message.c_str());
  return kExitInputError;
}

int cmd_bench(const ModelArgs& args, const std::string& engine, const std::string& style,
              bool stats) {
  CompiledModel m = load_compiled(args);
  auto t0 = std::chrono::steady_clock::now();
  PropagationRun run = propagate(m, engine_from_name(engine));
  auto t1 = std::chrono::steady_clock::now();
  OpCounters marg_ctr;
  MarginalStyle ms = style == "dual" ? MarginalStyle::Dual : MarginalStyle::Stream;
  compute_marginals(m, run.messages, ms, &marg_ctr);
  auto t2 = std::chrono::steady_clock::now();

  OpCounters prop = run.stats.totals();
  std::printf("BENCH engine=%s mults=%llu adds=%llu divs=%llu writes=%llu peak_aux=%llu%s\n",
              engine.c_str(), static_cast<unsigned long long>(prop.multiplications),
              static_cast<unsigned long long>(prop.additions),
              static_cast<unsigned long long>(prop.divisions),
              static_cast<unsigned long long>(prop.table_writes),
              static_cast<unsigned long long>(run.stats.peak_aux()),
              run.hugin ? (" resident=" + std::to_string(run.hugin->resident_entries())).c_str()
                        : "");
  if (stats) {
    print_stats(run, marg_ctr, stderr);
    auto us = [](auto d) {
      return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
    };
    std::fprintf(stderr, "STAT propagate_us %lld\n", static_cast<long long>(us(t1 - t0)));
    std::fprintf(stderr, "STAT marginals_us %lld\n", static_cast<long long>(us(t2 - t1)));
  }
  return kExitOk;
}

int cmd_gen(const std::string& kind, std::uint64_t seed, const std::string& out_path,
            const std::string& jt_out, const StarParams& star, const ChainParams& chain,
            const RandomParams& rnd) {
  GeneratedInstance inst;
  if (kind == "star")
    inst = generate_star(star, seed);
  else if (kind == "chain")
    inst = generate_chain(chain, seed);
  else if (kind == "random")
    inst = generate_random(rnd, seed);
  else
    throw std::runtime_error("unknown --kind '" + kind + "'");

  save_model(out_path, inst.f);
  if (!jt_out.empty()) {
    if (!inst.jt) throw std::runtime_error("kind '" + kind + "' does not produce a junction tree");
    save_jt(jt_out, *inst.jt, inst.assignment);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"junction-tree marginals: Shafer-Shenoy, Hugin, ARCH-1 and ARCH-2 engines"};
  app.require_subcommand(1);

  ModelArgs margs;
  std::string engine = "arch2";
  std::string style = "stream";
  bool stats = false;

  auto* marginals = app.add_subcommand("marginals", "compute all single-variable marginals");
  add_model_args(marginals, margs, true);
  marginals->add_option("--engine", engine, "ss | hugin | arch1 | arch1-fast | arch2");
  marginals->add_option("--marginal-style", style, "stream | dual");
  marginals->add_flag("--stats", stats, "print STAT counters to stderr");

  std::string oracle_input;
  auto* oracle = app.add_subcommand("oracle", "brute-force marginals over all labellings");
  oracle->add_option("--input", oracle_input, "BFN model file")->required();

  std::string val_input, val_jt;
  auto* validate_cmd = app.add_subcommand("validate", "check junction-tree axioms");
  validate_cmd->add_option("--input", val_input, "BFN model file")->required();
  validate_cmd->add_option("--jt", val_jt, "junction tree file")->required();

  ModelArgs bargs;
  std::string bengine = "arch2";
  std::string bstyle = "stream";
  bool bstats = false;
  auto* bench = app.add_subcommand("bench", "run one engine and report operation counters");
  add_model_args(bench, bargs, true);
  bench->add_option("--engine", bengine, "ss | hugin | arch1 | arch1-fast | arch2");
  bench->add_option("--marginal-style", bstyle, "stream | dual");
  bench->add_flag("--stats", bstats, "print STAT counters and timings to stderr");

  std::string gkind = "random", gout, gjt_out;
  std::uint64_t gseed = 1;
  StarParams star;
  ChainParams chain;
  RandomParams rnd;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  gen->add_option("--kind", gkind, "star | chain | random")->required();
  gen->add_option("--seed", gseed, "RNG seed");
  gen->add_option("--out", gout, "output BFN path")->required();
  gen->add_option("--jt-out", gjt_out, "output junction tree path (star only)");
  gen->add_option("--center", star.center_size, "star: center scope size");
  gen->add_option("--sep", star.sep_size, "star: separator size");
  gen->add_option("--degree", star.degree, "star: number of leaves");
  gen->add_option("--length", chain.length, "chain: number of factors");
  gen->add_option("--scope", chain.scope, "chain: factor scope size");
  gen->add_option("--n", rnd.var_count, "random: variable count");
  gen->add_option("--factors", rnd.factor_count, "random: factor count");
  gen->add_option("--max-scope", rnd.max_scope, "random: max factor scope");
  gen->add_option("--zero-prob", rnd.zero_prob, "random: probability of zero entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (marginals->parsed()) return cmd_marginals(margs, engine, style, stats);
    if (oracle->parsed()) return cmd_oracle(oracle_input);
    if (validate_cmd->parsed()) return cmd_validate(val_input, val_jt);
    if (bench->parsed()) return cmd_bench(bargs, bengine, bstyle, bstats);
    if (gen->parsed()) return cmd_gen(gkind, gseed, gout, gjt_out, star, chain, rnd);
  } catch (const InconsistentModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
