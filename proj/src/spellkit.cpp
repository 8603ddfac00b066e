#include "ptx/spellkit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ptx {

unsigned edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<unsigned> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0u);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    unsigned diag = row[0];
    row[0] = static_cast<unsigned>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const unsigned up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

Pattern::Pattern(std::string_view symbols) : symbols_(symbols.size(), ' ') {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const char c = symbols[i];
    if (c == kStar) {
      ++stars_;
      symbols_[i] = c;
    } else if (is_alpha(c)) {
      symbols_[i] = to_lower(c);
    } else {
      throw std::invalid_argument("pattern symbols must be letters or '*'");
    }
  }
}

Pattern Pattern::with_stars(std::string_view word, std::initializer_list<std::size_t> positions) {
  std::string s(word);
  for (auto p : positions) s.at(p) = kStar;
  return Pattern(s);
}

bool CandidateSet::contains(std::string_view w) const {
  return std::any_of(words.begin(), words.end(), [&](const Candidate& c) { return c.word == w; });
}

SpellIndex::SpellIndex(const Dictionary& dict) : dict_(&dict) {
  nodes_.reserve(dict.size() * 3);
  for (const auto& w : dict.words()) max_len_ = std::max(max_len_, w.size());
  build(0, dict.words().size(), 0);
}

// Builds the node for the prefix shared by words[lo, hi) of length `depth`.
std::uint32_t SpellIndex::build(std::size_t lo, std::size_t hi, std::size_t depth) {
  const auto& words = dict_->words();
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  // Sorted order puts the word equal to the prefix first.
  if (lo < hi && words[lo].size() == depth) {
    nodes_[id].word = static_cast<std::int32_t>(lo);
    ++lo;
  }
  std::vector<std::pair<char, std::pair<std::size_t, std::size_t>>> groups;
  while (lo < hi) {
    std::size_t end = lo;
    while (end < hi && words[end][depth] == words[lo][depth]) ++end;
    groups.push_back({words[lo][depth], {lo, end}});
    lo = end;
  }
  const auto first = static_cast<std::uint32_t>(edge_label_.size());
  nodes_[id].first_edge = first;
  nodes_[id].edge_count = static_cast<std::uint32_t>(groups.size());
  edge_label_.resize(first + groups.size());
  edge_child_.resize(first + groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    edge_label_[first + g] = groups[g].first;
    const auto child = build(groups[g].second.first, groups[g].second.second, depth + 1);
    edge_child_[first + g] = child;
  }
  return id;
}

void SpellIndex::search(std::uint32_t node, std::string_view pattern, unsigned d,
                        std::size_t depth, std::vector<std::vector<unsigned>>& rows,
                        std::vector<std::size_t>& out) const {
  const auto& n = nodes_[node];
  const std::size_t m = pattern.size();
  for (std::uint32_t e = n.first_edge; e < n.first_edge + n.edge_count; ++e) {
    const char ch = edge_label_[e];
    const auto& prev = rows[depth];
    auto& cur = rows[depth + 1];
    cur[0] = prev[0] + 1;
    unsigned best = cur[0];
    for (std::size_t i = 1; i <= m; ++i) {
      cur[i] = std::min({cur[i - 1] + 1, prev[i] + 1, prev[i - 1] + (pattern[i - 1] == ch ? 0u : 1u)});
      best = std::min(best, cur[i]);
    }
    const auto child = edge_child_[e];
    if (nodes_[child].word >= 0 && cur[m] <= d) out.push_back(static_cast<std::size_t>(nodes_[child].word));
    if (best <= d) search(child, pattern, d, depth + 1, rows, out);
  }
}

CandidateSet SpellIndex::candidates(const Pattern& pattern, unsigned d) const {
  const std::string_view p = pattern.symbols();
  // One row per trie depth; sized up front so recursion never reallocates.
  std::vector<std::vector<unsigned>> rows(max_len_ + 2, std::vector<unsigned>(p.size() + 1));
  std::iota(rows[0].begin(), rows[0].end(), 0u);
  std::vector<std::size_t> ids;
  search(0, p, d, 0, rows, ids);

  CandidateSet out;
  out.words.reserve(ids.size());
  for (auto id : ids) out.words.push_back({dict_->words()[id], dict_->frequency_at(id)});
  std::sort(out.words.begin(), out.words.end(), [](const Candidate& a, const Candidate& b) {
    return a.frequency != b.frequency ? a.frequency > b.frequency : a.word < b.word;
  });
  return out;
}

void SpellIndex::wildcard(std::uint32_t node, std::string_view pattern, std::size_t depth,
                          std::vector<std::size_t>& out) const {
  const auto& n = nodes_[node];
  if (depth == pattern.size()) {
    if (n.word >= 0) out.push_back(static_cast<std::size_t>(n.word));
    return;
  }
  const char want = pattern[depth];
  const auto begin = edge_label_.begin() + n.first_edge;
  const auto end = begin + n.edge_count;
  if (want == kStar) {
    for (auto it = begin; it != end; ++it) {
      wildcard(edge_child_[static_cast<std::size_t>(it - edge_label_.begin())], pattern, depth + 1, out);
    }
    return;
  }
  // Edges are sorted by label.
  auto it = std::lower_bound(begin, end, want);
  if (it != end && *it == want) {
    wildcard(edge_child_[static_cast<std::size_t>(it - edge_label_.begin())], pattern, depth + 1, out);
  }
}

std::vector<std::size_t> SpellIndex::wildcard_matches(std::string_view pattern) const {
  std::vector<std::size_t> out;
  if (!pattern.empty()) wildcard(0, pattern, 0, out);
  return out;
}

std::vector<SplitCandidate> SpellIndex::split_candidates(const Pattern& pattern) const {
  const std::string_view p = pattern.symbols();
  std::vector<SplitCandidate> out;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] != kStar) continue;
    const auto left = p.substr(0, s);
    const auto right = p.substr(s + 1);
    if (left.empty() || right.empty()) continue;
    const auto lefts = wildcard_matches(left);
    if (lefts.empty()) continue;
    const auto rights = wildcard_matches(right);
    for (auto l : lefts) {
      for (auto r : rights) out.push_back({dict_->words()[l], dict_->words()[r]});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ptx
