// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ptx/ice.hpp"
#include "ptx/metrics.hpp"
#include "ptx/phy/channel.hpp"
#include "ptx/phy/ldpc.hpp"
#include "ptx/runner.hpp"
#include "ptx/stats.hpp"

using namespace ptx;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Per-trial metric of one arm at one point, indexed by trial.
std::vector<double> metric_of(const SweepResult& r, std::size_t point, Arm arm, double TrialRecord::*field) {
  std::map<std::size_t, double> by_trial;
  for (const auto& rec : r.records) {
    if (rec.point == point && rec.arm == arm) by_trial[rec.trial] = rec.ok ? rec.*field : 0.0;
  }
  std::vector<double> out;
  for (const auto& [t, v] : by_trial) out.push_back(v);
  return out;
}

double mean(const std::vector<double>& v) { return summarize(v).mean; }

RunConfig corpus_config() {
  auto cfg = RunConfig::defaults();
  cfg.trials = 500;
  cfg.workers = 0;
  cfg.seed = 2024;
  return cfg;
}

Outcome golden_summer() {
  const auto t0 = Clock::now();
  const auto dict = load_dictionary(data_dir() / "dictionary.txt");
  const SpellIndex index(dict);
  const ScoreParams params;
  const auto s = word_character_score("summer", index, params);
  const double elapsed = seconds_since(t0);
  const bool values = std::abs(s[4] + params.alpha) < 1e-12 && std::abs(s[1] + params.beta / 2.0) < 1e-12;
  return {values && elapsed < 1.0, fmt::format("e={} u={} in {:.3f}s", s[4], s[1], elapsed)};
}

Outcome spell_oracle() {
  const auto t0 = Clock::now();
  const auto& dict = fixtures::dictionary();
  const auto& idx = fixtures::index();
  const auto& words = dict.words();
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<std::size_t> pick(0, dict.size() - 1);
  std::uniform_int_distribution<int> stars(0, 2), letter(0, 25);
  std::vector<std::size_t> prev, cur;
  std::size_t mismatches = 0, patterns = 0;
  while (patterns < 1000) {
    std::string p = words[pick(rng)];
    if (p.size() > 8) continue;
    if (patterns % 4 == 0) p[0] = static_cast<char>('a' + letter(rng));
    const int k = stars(rng);
    for (int s = 0; s < k; ++s) p[std::uniform_int_distribution<std::size_t>(0, p.size() - 1)(rng)] = '*';
    ++patterns;
    std::vector<std::string> within1, within2;
    for (const auto& w : words) {
      const std::size_t diff = w.size() > p.size() ? w.size() - p.size() : p.size() - w.size();
      if (diff > 2) continue;
      const auto d = oracle::levenshtein_rows(p, w, prev, cur);
      if (d <= 1) within1.push_back(w);
      if (d <= 2) within2.push_back(w);
    }
    std::sort(within1.begin(), within1.end());
    std::sort(within2.begin(), within2.end());
    for (unsigned d = 1; d <= 2; ++d) {
      std::vector<std::string> got;
      for (const auto& c : idx.candidates(p, d).words) got.push_back(c.word);
      std::sort(got.begin(), got.end());
      if (got != (d == 1 ? within1 : within2)) ++mismatches;
    }
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 60.0,
          fmt::format("{} patterns x 2 distances, {} mismatches, {:.1f}s", patterns, mismatches, elapsed)};
}

Outcome filter_oracle() {
  std::mt19937_64 rng(10000);
  std::uniform_real_distribution<double> u(-3.0, 0.0);
  std::bernoulli_distribution zero(0.5);
  std::uniform_int_distribution<std::size_t> count(1, 64);
  std::uniform_real_distribution<double> keep(0.5, 1.0);
  std::size_t mismatches = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t length = 40;
    const double k = keep(rng);
    const auto ones = FilterBank::ones_for(length, k);
    const auto m = std::min(count(rng), FilterBank::distinct_filters(length, ones, 64));
    const auto bank = FilterBank::generate(rng(), m, length, k);
    Eigen::VectorXd s(static_cast<Eigen::Index>(length));
    // A coarse grid of values makes exact ties common.
    for (auto& v : s) v = zero(rng) ? 0.0 : (t % 2 ? u(rng) : std::round(u(rng) * 2.0) / 2.0);
    if (select_filter(s, bank).index != oracle::argmax_filter(bank.matrix(), s)) ++mismatches;
  }
  return {mismatches == 0, fmt::format("10000 pairs, {} mismatches", mismatches)};
}

Outcome selection_superiority() {
  const auto t0 = Clock::now();
  auto cfg = corpus_config();
  cfg.filters = {64};
  cfg.keep_ratios = {0.9};
  const Experiment ex(cfg);
  const auto r = sweep(ex);
  const auto p = metric_of(r, 0, Arm::Proposed, &TrialRecord::word_accuracy);
  const auto q = metric_of(r, 0, Arm::Random, &TrialRecord::word_accuracy);
  const auto test = paired_t_test_greater(p, q);
  const double gap = mean(p) - mean(q);
  const double elapsed = seconds_since(t0);
  return {test.p_value < 0.01 && gap >= 0.02 && elapsed < 600.0,
          fmt::format("proposed {:.4f} random {:.4f} gap {:.4f} p={:.2e} n={} {:.1f}s", mean(p), mean(q), gap,
                      test.p_value, p.size(), elapsed)};
}

Outcome monotone_in_m() {
  auto cfg = corpus_config();
  cfg.filters = {4, 16, 64};
  cfg.keep_ratios = {0.9};
  cfg.random_arm = false;
  const Experiment ex(cfg);
  const auto r = sweep(ex);
  std::vector<std::vector<double>> acc;
  for (std::size_t point = 0; point < 3; ++point) {
    acc.push_back(metric_of(r, point, Arm::Proposed, &TrialRecord::word_accuracy));
  }
  bool ok = true;
  std::string detail = fmt::format("M=4 {:.4f} M=16 {:.4f} M=64 {:.4f}", mean(acc[0]), mean(acc[1]), mean(acc[2]));
  for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
    const auto drop = paired_t_test_greater(acc[i], acc[i + 1]);
    detail += fmt::format(" p(decrease {})={:.3f}", i, drop.p_value);
    if (drop.p_value < 0.01) ok = false;
  }
  return {ok, detail};
}

Outcome char_vs_word_omission() {
  auto cfg = corpus_config();
  cfg.proposed_arm = cfg.random_arm = false;
  cfg.word_ratios = {0.9};
  const Experiment ex(cfg);
  const auto r = sweep(ex);
  const auto c = metric_of(r, 0, Arm::CharOmission, &TrialRecord::bleu);
  const auto w = metric_of(r, 0, Arm::WordOmission, &TrialRecord::bleu);
  const auto test = paired_t_test_greater(c, w);
  return {mean(c) > mean(w) && test.p_value < 0.01,
          fmt::format("char {:.4f} word {:.4f} p={:.2e} n={}", mean(c), mean(w), test.p_value, c.size())};
}

Outcome phy_correctness() {
  using namespace ptx::phy;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  BitVector bits(2'000'000);
  for (auto& b : bits) b = coin(rng);
  const auto x = qpsk_modulate(bits);
  std::string detail;
  bool ok = true;
  for (double ebn0 : {2.0, 4.0, 6.0}) {
    const ChannelConfig ch{esn0_from_ebn0(ebn0), {1.0, 0.0}, static_cast<std::uint64_t>(ebn0 * 10)};
    const auto rx = hard_decision(qpsk_llr(awgn(x, ch), ch.noise_variance()));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) errors += rx[i] != bits[i];
    const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
    const double expected = oracle::qpsk_ber(ebn0);
    const double rel = std::abs(ber - expected) / expected;
    ok = ok && rel < 0.05;
    detail += fmt::format("BER@{}dB rel.err {:.3f}; ", ebn0, rel);
  }

  const auto& code = default_code();
  std::size_t bad_codewords = 0;
  std::size_t coded_fail = 0, uncoded_fail = 0;
  const std::size_t frames = 500;
  const double esn0 = 2.0;
  for (std::size_t f = 0; f < frames; ++f) {
    BitVector msg(code.k());
    for (auto& b : msg) b = coin(rng);
    const auto cw = code.encode(msg);
    if (!code.satisfies_checks(cw)) ++bad_codewords;

    const ChannelConfig ch{esn0, {1.0, 0.0}, 1000 + f};
    const auto llr = qpsk_llr(awgn(qpsk_modulate(cw), ch), ch.noise_variance());
    if (code.decode(llr).message != msg) ++coded_fail;

    const ChannelConfig raw{esn0, {1.0, 0.0}, 50000 + f};
    if (hard_decision(qpsk_llr(awgn(qpsk_modulate(msg), raw), raw.noise_variance())) != msg) ++uncoded_fail;
  }
  const double elapsed = seconds_since(t0);
  ok = ok && bad_codewords == 0 && coded_fail < uncoded_fail && elapsed < 300.0;
  detail += fmt::format("bad codewords {}; FER@{}dB coded {:.3f} uncoded {:.3f}; {:.1f}s", bad_codewords, esn0,
                        static_cast<double>(coded_fail) / frames, static_cast<double>(uncoded_fail) / frames,
                        elapsed);
  return {ok, detail};
}

Outcome lossless_identity() {
  auto cfg = corpus_config();
  cfg.keep_ratios = {1.0};
  cfg.snr_db = {20.0};
  cfg.random_arm = false;
  cfg.trials = fixtures::sentences().size();
  const Experiment ex(cfg);
  const auto r = sweep(ex);
  std::size_t bad = 0;
  for (const auto& rec : r.records) {
    if (!rec.ok || rec.bleu != 1.0 || rec.char_accuracy != 1.0) ++bad;
  }
  return {bad == 0 && r.records.size() == 500,
          fmt::format("{} sentences, {} not exact", r.records.size(), bad)};
}

Outcome low_snr_ordering() {
  auto cfg = corpus_config();
  cfg.snr_db = {0.0, 10.0};
  cfg.keep_ratios = {0.8, 1.0};
  cfg.symbols_per_char = {12.0};
  cfg.random_arm = false;
  const Experiment ex(cfg);
  const auto r = sweep(ex);
  // Grid order: snr x keep, so points are (0, 0.8), (0, 1.0), (10, 0.8), (10, 1.0).
  std::map<std::pair<double, double>, std::vector<double>> acc;
  for (const auto& a : r.aggregates) {
    if (a.arm == Arm::Proposed) acc[{*a.snr_db, *a.keep_ratio}] = metric_of(r, a.point, a.arm, &TrialRecord::char_accuracy);
  }
  const auto& p0 = acc[{0.0, 0.8}];
  const auto& u0 = acc[{0.0, 1.0}];
  const auto& p10 = acc[{10.0, 0.8}];
  const auto& u10 = acc[{10.0, 1.0}];
  const double gap0 = mean(p0) - mean(u0);
  const double gap10 = mean(p10) - mean(u10);
  const auto test0 = paired_t_test_greater(p0, u0);
  // "Vanishes" means not significantly positive.
  const auto test10 = paired_t_test_greater(p10, u10);
  const bool ok = gap0 > 0.0 && test0.p_value < 0.01 && test10.p_value >= 0.01 && gap10 < gap0;
  return {ok, fmt::format("0dB: 0.8={:.4f} 1.0={:.4f} p={:.1e}; 10dB: 0.8={:.4f} 1.0={:.4f} gap {:+.4f}", mean(p0),
                          mean(u0), test0.p_value, mean(p10), mean(u10), gap10)};
}

Outcome bleu_unit() {
  const double b = bleu("the cat sat", "the cat", 2);
  const double same = bleu("the cat sat on the mat", "the cat sat on the mat", 4);
  return {std::abs(b - 0.60653) <= 1e-5 && same == 1.0, fmt::format("hand case {:.6f}, identity {}", b, same)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / fmt::format("ptx-accept-{}", ::getpid());
  std::vector<std::pair<std::string, std::string>> outputs;
  for (int run = 0; run < 2; ++run) {
    auto cfg = RunConfig::defaults();
    cfg.trials = 40;
    cfg.workers = run == 0 ? 1 : 4;
    cfg.snr_db = {1.0, 4.0};
    cfg.keep_ratios = {0.8, 1.0};
    cfg.symbols_per_char = {8.0};
    cfg.word_ratios = {0.9};
    cfg.record_text = true;
    cfg.output = root / fmt::format("run{}", run) / "results.jsonl";
    fs::create_directories(cfg.output.parent_path());
    const Experiment ex(cfg);
    run_to_files(ex);
    outputs.emplace_back(slurp(cfg.output), slurp(cfg.aggregate_path()));
  }
  fs::remove_all(root);
  const bool same = outputs[0] == outputs[1] && !outputs[0].first.empty() && !outputs[0].second.empty();
  return {same, fmt::format("JSONL {} bytes, CSV {} bytes, identical across worker counts: {}",
                            outputs[0].first.size(), outputs[0].second.size(), same)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden-summer", golden_summer},
      {"spell-oracle-equivalence", spell_oracle},
      {"filter-selection-oracle", filter_oracle},
      {"selection-superiority", selection_superiority},
      {"monotone-in-M", monotone_in_m},
      {"char-vs-word-omission", char_vs_word_omission},
      {"phy-correctness", phy_correctness},
      {"lossless-identity", lossless_identity},
      {"low-snr-ordering", low_snr_ordering},
      {"bleu-unit", bleu_unit},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
