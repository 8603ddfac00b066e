#include "ptx/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "ptx/error.hpp"
#include "ptx/llm.hpp"
#include "ptx/metrics.hpp"
#include "ptx/phy/frame.hpp"
#include "ptx/phy/link.hpp"
#include "ptx/rng.hpp"
#include "ptx/stats.hpp"

namespace ptx {

std::string_view to_string(Arm a) noexcept {
  switch (a) {
    case Arm::Proposed: return "proposed";
    case Arm::Random: return "random";
    case Arm::WordOmission: return "word_omission";
    case Arm::CharOmission: return "char_omission";
  }
  return "unknown";
}

namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson finite_or_null(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? ojson(*v) : ojson(nullptr);
}

}  // namespace

std::string to_json_line(const TrialRecord& r) {
  ojson j;
  j["schema"] = kRecordSchema;
  j["point"] = r.point;
  j["trial"] = r.trial;
  j["arm"] = to_string(r.arm);
  j["sentence"] = r.sentence;
  j["seed"] = r.seed;
  j["backend"] = r.backend;
  j["snr_db"] = finite_or_null(r.snr_db);
  j["keep_ratio"] = opt(r.keep_ratio);
  j["M"] = opt(r.filters);
  j["M_requested"] = opt(r.filters_requested);
  j["word_ratio"] = opt(r.word_ratio);
  j["symbols"] = r.symbols;
  j["symbols_per_character"] = opt(r.symbols_per_character);
  j["length"] = r.length;
  j["omitted"] = r.omitted;
  j["frame_ok"] = r.frame_ok;
  j["link_converged"] = r.link_converged;
  j["fallback"] = r.fallback;
  j["ok"] = r.ok;
  j["error"] = r.ok ? ojson(nullptr) : ojson(r.error);
  if (r.ok) {
    j["bleu"] = r.bleu;
    j["similarity"] = opt(r.similarity);
    j["char_accuracy"] = r.char_accuracy;
    j["word_accuracy"] = r.word_accuracy;
  } else {
    j["bleu"] = j["similarity"] = j["char_accuracy"] = j["word_accuracy"] = nullptr;
  }
  if (r.recovered) j["recovered"] = *r.recovered;
  return j.dump();
}

Experiment::Experiment(RunConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  auto corpus = read_corpus(cfg_.corpus);
  if (corpus.sentences.empty()) throw ConfigError("corpus has no usable sentences: " + cfg_.corpus.string());
  sentences_ = std::move(corpus.sentences);
  dict_ = load_dictionary(cfg_.dictionary);
  index_ = std::make_unique<SpellIndex>(dict_);
  scorer_ = std::make_unique<ImportanceScorer>(*index_, cfg_.score);
  code_ = phy::LdpcCode::from_alist(cfg_.ldpc);
  if (cfg_.backend == RecoveryBackend::Llm) {
    recoverer_ = std::make_unique<LlmRecoverer>(cfg_.llm, *index_);
  } else {
    recoverer_ = std::make_unique<DictionaryRecoverer>(*index_);
  }
  switch (cfg_.embedding) {
    case EmbeddingKind::None: break;
    case EmbeddingKind::Hashing: embedder_ = std::make_unique<HashingEmbeddingProvider>(); break;
    case EmbeddingKind::Http:
      embedder_ = std::make_unique<HttpEmbeddingProvider>(
          cfg_.embedding_url, std::chrono::milliseconds(cfg_.embedding_timeout_ms), cfg_.llm.max_concurrency);
      break;
  }
}

Experiment::~Experiment() = default;

std::size_t Experiment::effective_filters(std::size_t requested, double keep_ratio) const {
  const std::size_t ones = FilterBank::ones_for(cfg_.filter_length, keep_ratio);
  return std::max<std::size_t>(1, FilterBank::distinct_filters(cfg_.filter_length, ones, requested));
}

const FilterBank& Experiment::bank(std::size_t filters, double keep_ratio) const {
  const long keep_key = std::lround(keep_ratio * 1e6);
  std::lock_guard lock(bank_mutex_);
  auto& slot = banks_[{filters, keep_key}];
  if (!slot) {
    const auto seed = derive_seed({cfg_.seed, static_cast<std::uint64_t>(keep_key)});
    slot = std::make_unique<FilterBank>(FilterBank::generate(seed, filters, cfg_.filter_length, keep_ratio));
  }
  return *slot;
}

namespace {

void evaluate(const Experiment& ex, std::string_view reference, const RecoveredText& rec, TrialRecord& r) {
  try {
    r.bleu = bleu(reference, rec.chars, ex.config().bleu_max_n);
  } catch (const EmptyInput&) {
    r.bleu = 0.0;
  }
  const auto acc = char_word_accuracy(reference, rec.chars);
  r.char_accuracy = acc.character;
  r.word_accuracy = acc.word;
  if (auto* provider = ex.embedder()) {
    try {
      r.similarity = sentence_similarity(reference, rec.chars, *provider);
    } catch (const ProviderUnavailable& e) {
      spdlog::warn("similarity unavailable: {}", e.what());
    }
  }
  r.fallback = rec.fallback;
  if (ex.config().record_text) r.recovered = rec.chars;
}

TrialRecord base_record(const Experiment& ex, std::uint64_t seed) {
  TrialRecord r;
  r.seed = seed;
  r.backend = ex.recoverer().name();
  return r;
}

// Strict parse first; anything inconsistent with the receiver's bank falls
// back to a lenient parse and marks the frame as damaged.
phy::Frame receive_frame(const phy::BitVector& bits, const FilterBank& bank, bool& frame_ok) {
  try {
    auto f = phy::deserialize(bits, phy::ParseMode::Strict);
    if (f.header.index_bits == bank.index_bits() &&
        f.header.keep_ratio_code == phy::FrameHeader::encode_keep_ratio(bank.keep_ratio())) {
      return f;
    }
  } catch (const BrokenFrame&) {
  }
  frame_ok = false;
  return phy::deserialize(bits, phy::ParseMode::Lenient);
}

}  // namespace

TrialRecord run_pipeline(const Experiment& ex, std::string_view sentence, const PipelinePoint& point,
                         SelectionPolicy policy, std::uint64_t trial_seed) {
  TrialRecord r = base_record(ex, trial_seed);
  r.arm = policy == SelectionPolicy::Proposed ? Arm::Proposed : Arm::Random;
  r.snr_db = point.snr_db;
  r.keep_ratio = point.keep_ratio;
  r.filters_requested = point.filters;
  try {
    const auto tok = tokenize(sentence);
    if (tok.empty()) throw EmptyInput("empty sentence");
    r.length = tok.size();
    const auto scores = ex.scorer().score_text(tok);
    const std::size_t filters = ex.effective_filters(point.filters, point.keep_ratio);
    r.filters = filters;
    const auto& bank = ex.bank(filters, point.keep_ratio);
    const auto punctured = puncture_text(tok, scores, bank, policy, trial_seed);
    r.omitted = punctured.omitted();
    if (punctured.windows.size() > phy::FrameHeader::kMaxWindows) {
      throw std::invalid_argument("sentence needs more windows than the frame header can carry");
    }

    phy::Frame frame;
    frame.header.window_count = static_cast<unsigned>(punctured.windows.size());
    frame.header.keep_ratio_code = phy::FrameHeader::encode_keep_ratio(point.keep_ratio);
    frame.header.index_bits = bank.index_bits();
    frame.header.tail_unpunctured = punctured.tail_unpunctured;
    for (auto i : punctured.filter_indices()) frame.filter_indices.push_back(static_cast<std::uint32_t>(i));
    frame.payload = punctured.kept();
    const auto bits = phy::serialize(frame);

    std::optional<std::size_t> budget;
    if (point.symbols_per_char) {
      budget = static_cast<std::size_t>(std::ceil(*point.symbols_per_char * static_cast<double>(r.length) - 1e-9));
    }
    const phy::ChannelConfig channel{point.snr_db, {1.0, 0.0}, derive_seed({stream::noise, trial_seed})};
    const auto link = phy::simulate_link(bits, ex.code(), channel, budget, ex.config().max_iterations);
    r.symbols = link.format.symbols;
    r.symbols_per_character = static_cast<double>(r.symbols) / static_cast<double>(r.length);
    r.link_converged = link.decoded.stats.all_converged();

    const auto rx = receive_frame(link.decoded.bits, bank, r.frame_ok);
    const std::vector<std::size_t> indices(rx.filter_indices.begin(), rx.filter_indices.end());
    IndicatedText m;
    try {
      m = indicate(rx.payload, indices, bank, rx.header.tail_unpunctured);
    } catch (const BrokenFrame& e) {
      r.frame_ok = false;
      m = indicate_best_effort(rx.payload, indices, bank, rx.header.tail_unpunctured);
    }
    evaluate(ex, sentence, ex.recoverer().recover(m), r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

std::vector<std::size_t> choose_omitted_words(std::size_t word_count, double remaining_ratio, std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(std::floor((1.0 - remaining_ratio) * static_cast<double>(word_count) + 1e-9));
  std::vector<std::size_t> order(word_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_engine({stream::word_omission, seed});
  for (std::size_t i = 0; i < std::min(k, word_count); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, word_count - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(std::min(k, word_count));
  std::sort(order.begin(), order.end());
  return order;
}

TrialRecord run_word_omission_baseline(const Experiment& ex, std::string_view sentence, double remaining_ratio,
                                       std::uint64_t seed) {
  TrialRecord r = base_record(ex, seed);
  r.arm = Arm::WordOmission;
  r.word_ratio = remaining_ratio;
  try {
    if (!(remaining_ratio > 0.0 && remaining_ratio <= 1.0)) throw std::invalid_argument("ratio must lie in (0, 1]");
    const auto tok = tokenize(sentence);
    if (tok.empty()) throw EmptyInput("empty sentence");
    r.length = tok.size();
    std::vector<const Word*> words;
    for (const auto& t : tok.tokens) {
      if (const auto* w = std::get_if<Word>(&t)) words.push_back(w);
    }
    const auto drop = choose_omitted_words(words.size(), remaining_ratio, seed);
    std::string indicated;
    std::size_t d = 0;
    for (std::size_t i = 0; i < tok.size();) {
      if (d < drop.size() && i == words[drop[d]]->start) {
        indicated.push_back(kStar);
        r.omitted += words[drop[d]]->length();
        i += words[drop[d]]->length();
        ++d;
        continue;
      }
      indicated.push_back(tok.chars[i++]);
    }
    evaluate(ex, sentence, ex.recoverer().recover(indicated_from_string(indicated)), r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

TrialRecord run_char_omission(const Experiment& ex, std::string_view sentence, std::size_t budget) {
  TrialRecord r = base_record(ex, 0);
  r.arm = Arm::CharOmission;
  try {
    const auto tok = tokenize(sentence);
    if (tok.empty()) throw EmptyInput("empty sentence");
    r.length = tok.size();
    const auto scores = ex.scorer().score_text(tok);
    std::vector<std::size_t> order(tok.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
    });
    std::string indicated = tok.chars;
    r.omitted = std::min(budget, order.size());
    for (std::size_t i = 0; i < r.omitted; ++i) indicated[order[i]] = kStar;
    evaluate(ex, sentence, ex.recoverer().recover(indicated_from_string(indicated)), r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
  struct Acc {
    AggregateRow row;
    std::vector<double> bleu, chr, wrd, sim, spc;
  };
  std::vector<Acc> groups;
  std::map<std::pair<std::size_t, Arm>, std::size_t> where;
  for (const auto& r : records) {
    auto [it, inserted] = where.try_emplace({r.point, r.arm}, groups.size());
    if (inserted) {
      Acc a;
      a.row.point = r.point;
      a.row.arm = r.arm;
      a.row.snr_db = r.snr_db;
      a.row.keep_ratio = r.keep_ratio;
      a.row.filters = r.filters_requested;
      a.row.word_ratio = r.word_ratio;
      groups.push_back(std::move(a));
    }
    auto& g = groups[it->second];
    if (!r.ok) {
      ++g.row.failed;
      continue;
    }
    g.bleu.push_back(r.bleu);
    g.chr.push_back(r.char_accuracy);
    g.wrd.push_back(r.word_accuracy);
    if (r.similarity) g.sim.push_back(*r.similarity);
    if (r.symbols_per_character) g.spc.push_back(*r.symbols_per_character);
  }
  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    const auto b = summarize(g.bleu), c = summarize(g.chr), w = summarize(g.wrd);
    g.row.n = b.n;
    g.row.bleu_mean = b.mean;
    g.row.bleu_stderr = b.stderr_mean;
    g.row.char_accuracy_mean = c.mean;
    g.row.char_accuracy_stderr = c.stderr_mean;
    g.row.word_accuracy_mean = w.mean;
    g.row.word_accuracy_stderr = w.stderr_mean;
    if (!g.sim.empty()) {
      const auto s = summarize(g.sim);
      g.row.similarity_mean = s.mean;
      g.row.similarity_stderr = s.stderr_mean;
    }
    g.row.symbols_per_character_mean = summarize(g.spc).mean;
    out.push_back(g.row);
  }
  return out;
}

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string num(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return num(static_cast<double>(*v));
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "point,arm,snr_db,keep_ratio,M,word_ratio,symbols_per_char,n,failed,bleu_mean,bleu_stderr,"
         "char_accuracy_mean,char_accuracy_stderr,word_accuracy_mean,word_accuracy_stderr,"
         "similarity_mean,similarity_stderr\n";
  for (const auto& r : rows) {
    out << r.point << ',' << to_string(r.arm) << ',' << num(r.snr_db) << ',' << num(r.keep_ratio) << ','
        << num(r.filters) << ',' << num(r.word_ratio) << ',' << num(r.symbols_per_character_mean) << ','
        << r.n << ',' << r.failed << ',' << num(r.bleu_mean) << ',' << num(r.bleu_stderr) << ','
        << num(r.char_accuracy_mean) << ',' << num(r.char_accuracy_stderr) << ','
        << num(r.word_accuracy_mean) << ',' << num(r.word_accuracy_stderr) << ',' << num(r.similarity_mean)
        << ',' << num(r.similarity_stderr) << '\n';
  }
}

namespace {

struct GridPoint {
  std::optional<PipelinePoint> pipeline;
  std::optional<double> word_ratio;
};

std::vector<GridPoint> build_grid(const RunConfig& cfg) {
  std::vector<GridPoint> grid;
  std::vector<std::optional<double>> budgets;
  for (double s : cfg.symbols_per_char) budgets.emplace_back(s);
  if (budgets.empty()) budgets.emplace_back(std::nullopt);
  if (cfg.proposed_arm || cfg.random_arm) {
    for (double snr : cfg.snr_db) {
      for (double keep : cfg.keep_ratios) {
        for (std::size_t m : cfg.filters) {
          for (const auto& spc : budgets) grid.push_back({PipelinePoint{snr, keep, m, spc}, std::nullopt});
        }
      }
    }
  }
  for (double ratio : cfg.word_ratios) grid.push_back({std::nullopt, ratio});
  return grid;
}

std::vector<TrialRecord> run_task(const Experiment& ex, const GridPoint& g, std::size_t point, std::size_t trial) {
  const auto& cfg = ex.config();
  const std::size_t sentence = trial % ex.sentences().size();
  const std::string& text = ex.sentences()[sentence];
  const std::uint64_t seed = derive_seed({stream::trial, cfg.seed, point, trial});
  std::vector<TrialRecord> out;
  if (g.pipeline) {
    if (cfg.proposed_arm) out.push_back(run_pipeline(ex, text, *g.pipeline, SelectionPolicy::Proposed, seed));
    if (cfg.random_arm) out.push_back(run_pipeline(ex, text, *g.pipeline, SelectionPolicy::Random, seed));
  } else {
    auto word = run_word_omission_baseline(ex, text, *g.word_ratio, seed);
    auto chr = run_char_omission(ex, text, word.omitted);
    chr.seed = seed;
    chr.word_ratio = g.word_ratio;
    if (!word.ok && chr.ok) {
      chr.ok = false;
      chr.error = "matched word-omission trial failed: " + word.error;
    }
    out.push_back(std::move(word));
    out.push_back(std::move(chr));
  }
  for (auto& r : out) {
    r.point = point;
    r.trial = trial;
    r.sentence = sentence;
  }
  return out;
}

}  // namespace

SweepResult sweep(const Experiment& ex, std::ostream* jsonl) {
  const auto& cfg = ex.config();
  const auto grid = build_grid(cfg);
  const std::size_t tasks = grid.size() * cfg.trials;
  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));

  std::vector<std::optional<std::vector<TrialRecord>>> done(tasks);
  std::mutex mutex;
  std::condition_variable cv;
  std::size_t next_task = 0;

  auto worker = [&] {
    while (true) {
      std::size_t t;
      {
        std::lock_guard lock(mutex);
        if (next_task >= tasks) return;
        t = next_task++;
      }
      const std::size_t point = t / cfg.trials, trial = t % cfg.trials;
      std::vector<TrialRecord> recs;
      try {
        recs = run_task(ex, grid[point], point, trial);
      } catch (const std::exception& e) {
        TrialRecord r;
        r.point = point;
        r.trial = trial;
        r.ok = false;
        r.error = e.what();
        recs.push_back(std::move(r));
      }
      {
        std::lock_guard lock(mutex);
        done[t] = std::move(recs);
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);

  // Single writer: records leave in task order whatever order they finish in.
  SweepResult result;
  for (std::size_t t = 0; t < tasks; ++t) {
    std::vector<TrialRecord> recs;
    {
      std::unique_lock lock(mutex);
      cv.wait(lock, [&] { return done[t].has_value(); });
      recs = std::move(*done[t]);
      done[t].reset();
    }
    for (auto& r : recs) {
      if (!r.ok) ++result.failed;
      if (jsonl) *jsonl << to_json_line(r) << '\n';
      result.records.push_back(std::move(r));
    }
    if (jsonl) jsonl->flush();
  }
  for (auto& th : pool) th.join();
  result.aggregates = aggregate(result.records);
  return result;
}

std::size_t run_to_files(const Experiment& ex) {
  const auto& cfg = ex.config();
  if (cfg.output.has_parent_path()) std::filesystem::create_directories(cfg.output.parent_path());
  std::ofstream jsonl(cfg.output, std::ios::binary | std::ios::trunc);
  if (!jsonl) throw ConfigError("cannot write " + cfg.output.string());
  const auto result = sweep(ex, &jsonl);
  std::ofstream csv(cfg.aggregate_path(), std::ios::binary | std::ios::trunc);
  if (!csv) throw ConfigError("cannot write " + cfg.aggregate_path().string());
  write_aggregate_csv(csv, result.aggregates);
  spdlog::info("{} records, {} failed; wrote {} and {}", result.records.size(), result.failed,
               cfg.output.string(), cfg.aggregate_path().string());
  return result.failed;
}

}  // namespace ptx
