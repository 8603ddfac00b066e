// ptx: command-line front end for the punctured text transmission simulator.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ptx/config.hpp"
#include "ptx/error.hpp"
#include "ptx/ice.hpp"
#include "ptx/recover.hpp"
#include "ptx/rng.hpp"
#include "ptx/runner.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;

  ptx::RunConfig load() const {
    auto cfg = config.empty() ? ptx::RunConfig::defaults() : ptx::RunConfig::load(config);
    for (const auto& o : overrides) cfg.apply_override(o);
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "Run configuration file");
  cmd->add_option("--set", c.overrides, "Override a configuration key (key=value)")->take_all();
}

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  return out;
}

int cmd_score(const Common& c, const std::string& word) {
  ptx::RunConfig cfg = c.load();
  cfg.validate();
  const auto dict = ptx::load_dictionary(cfg.dictionary);
  const ptx::SpellIndex index(dict);
  const std::string w = ptx::to_lower(word);
  const auto s = ptx::word_character_score(w, index, cfg.score);
  std::printf("word %s (%s)\n", w.c_str(), dict.contains(w) ? "in dictionary" : "out of vocabulary");
  for (std::size_t i = 0; i < w.size(); ++i) std::printf("  %2zu %c % .6f\n", i, w[i], s[static_cast<Eigen::Index>(i)]);
  std::printf("non-word character after \"%s\": % .6f\n", w.c_str(),
              ptx::nonword_character_score(w, index, cfg.score.delta));
  return 0;
}

int cmd_puncture(const Common& c, const std::string& text, bool random, std::uint64_t random_seed) {
  ptx::RunConfig cfg = c.load();
  const ptx::Experiment ex(cfg);
  const double keep = cfg.keep_ratios.front();
  const auto m = ex.effective_filters(cfg.filters.front(), keep);
  const auto& bank = ex.bank(m, keep);
  const auto tok = ptx::tokenize(text);
  const auto scores = ex.scorer().score_text(tok);
  const auto p = ptx::puncture_text(tok, scores, bank,
                                    random ? ptx::SelectionPolicy::Random : ptx::SelectionPolicy::Proposed,
                                    random_seed);
  std::string idx;
  for (auto i : p.filter_indices()) idx += (idx.empty() ? "" : ",") + std::to_string(i);
  const auto m_text = ptx::indicate(p.kept(), p.filter_indices(), bank, p.tail_unpunctured);
  std::printf("kept:      %s\nindices:   %s\ntail:      %s\nindicated: %s\nomitted:   %zu of %zu\n",
              p.kept().c_str(), idx.c_str(), p.tail_unpunctured ? "yes" : "no", m_text.chars.c_str(), p.omitted(),
              tok.size());
  return 0;
}

int cmd_indicate(const Common& c, const std::string& punctured, const std::string& indices, bool tail) {
  ptx::RunConfig cfg = c.load();
  const ptx::Experiment ex(cfg);
  const double keep = cfg.keep_ratios.front();
  const auto& bank = ex.bank(ex.effective_filters(cfg.filters.front(), keep), keep);
  const auto m = ptx::indicate(punctured, parse_indices(indices), bank, tail);
  std::printf("%s\n", m.chars.c_str());
  return 0;
}

int cmd_recover(const Common& c, const std::string& indicated) {
  const ptx::Experiment ex(c.load());
  const auto rec = ex.recoverer().recover(ptx::indicated_from_string(indicated));
  std::printf("%s\n", rec.chars.c_str());
  for (const auto& r : rec.resolutions) {
    std::printf("  star %zu -> \"%s\" (%s%s)\n", r.position, r.chosen.c_str(), std::string(ptx::to_string(r.backend)).c_str(),
                r.candidates ? (", K=" + std::to_string(*r.candidates)).c_str() : "");
  }
  if (rec.fallback) std::printf("  (deterministic fallback)\n");
  return 0;
}

int cmd_bench(const Common& c, std::size_t patterns, unsigned max_stars, std::uint64_t seed) {
  ptx::RunConfig cfg = c.load();
  const auto t0 = std::chrono::steady_clock::now();
  const auto dict = ptx::load_dictionary(cfg.dictionary);
  const ptx::SpellIndex index(dict);
  const auto t1 = std::chrono::steady_clock::now();
  auto rng = ptx::make_engine({seed});
  std::vector<std::string> queries;
  while (queries.size() < patterns) {
    std::string w = dict.words()[std::uniform_int_distribution<std::size_t>(0, dict.size() - 1)(rng)];
    if (w.size() > 8) continue;
    const unsigned stars = std::uniform_int_distribution<unsigned>(1, std::max(1u, max_stars))(rng);
    for (unsigned s = 0; s < stars && s < w.size(); ++s) w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] = '*';
    queries.push_back(w);
  }
  std::size_t total = 0;
  const auto t2 = std::chrono::steady_clock::now();
  for (const auto& q : queries) {
    for (unsigned d = 1; d <= 2; ++d) total += index.candidates(q, d).size();
  }
  const auto t3 = std::chrono::steady_clock::now();
  const double build = std::chrono::duration<double>(t1 - t0).count();
  const double run = std::chrono::duration<double>(t3 - t2).count();
  std::printf("dictionary: %zu words, %zu trie nodes, load+build %.3f s\n", dict.size(), index.node_count(), build);
  std::printf("queries: %zu (d=1 and d=2), %.3f s, %.0f queries/s, %zu candidates\n", 2 * queries.size(), run,
              2.0 * static_cast<double>(queries.size()) / run, total);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Punctured text transmission simulator"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  Common common;

  auto* run = app.add_subcommand("run", "Run the configured sweep");
  add_common(run, common);

  auto* score = app.add_subcommand("score", "Print importance scores of a word");
  add_common(score, common);
  std::string word;
  score->add_option("word", word)->required();

  auto* punct = app.add_subcommand("puncture", "Puncture a text with the configured bank");
  add_common(punct, common);
  std::string text;
  bool random = false;
  std::uint64_t random_seed = 0;
  punct->add_option("text", text)->required();
  punct->add_flag("--random", random, "Choose filters uniformly at random");
  punct->add_option("--random-seed", random_seed);

  auto* ind = app.add_subcommand("indicate", "Reinsert '*' into punctured text");
  add_common(ind, common);
  std::string punctured, indices;
  bool tail = false;
  ind->add_option("punctured", punctured)->required();
  ind->add_option("--indices", indices, "Comma-separated filter indices, one per window")->required();
  ind->add_flag("--tail", tail, "The last window is an unpunctured tail");

  auto* rec = app.add_subcommand("recover", "Recover an indicated text");
  add_common(rec, common);
  std::string indicated;
  rec->add_option("indicated", indicated)->required();

  auto* bench = app.add_subcommand("bench", "Measure spell-index throughput");
  add_common(bench, common);
  std::size_t patterns = 1000;
  unsigned max_stars = 2;
  std::uint64_t bench_seed = 1;
  bench->add_option("--patterns", patterns);
  bench->add_option("--max-stars", max_stars);
  bench->add_option("--seed", bench_seed);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) {
      const ptx::Experiment ex(common.load());
      return ptx::run_to_files(ex) == 0 ? 0 : 1;
    }
    if (*score) return cmd_score(common, word);
    if (*punct) return cmd_puncture(common, text, random, random_seed);
    if (*ind) return cmd_indicate(common, punctured, indices, tail);
    if (*rec) return cmd_recover(common, indicated);
    if (*bench) return cmd_bench(common, patterns, max_stars, bench_seed);
  } catch (const ptx::Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
