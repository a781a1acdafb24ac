#include "ungar/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include <boost/dynamic_bitset.hpp>

#include "ungar/errors.hpp"
#include "ungar/rng.hpp"

namespace ungar {

Permutation::Permutation(std::vector<int> word) : word_(std::move(word)) {
  const std::size_t n = word_.size();
  std::vector<char> seen(n + 1, 0);
  for (int v : word_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) {
      throw invalid_input("not a permutation of 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation make_permutation_unchecked(std::vector<int> word) { return Permutation(std::move(word), Permutation::trusted_tag{}); }

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> word(n);
  std::iota(word.begin(), word.end(), 1);
  return make_permutation_unchecked(std::move(word));
}

Permutation Permutation::decreasing(std::size_t n) {
  std::vector<int> word(n);
  for (std::size_t i = 0; i < n; ++i) word[i] = static_cast<int>(n - i);
  return make_permutation_unchecked(std::move(word));
}

Permutation Permutation::parse(const std::string& text) {
  std::vector<int> word;
  const bool separated = std::any_of(text.begin(), text.end(), [](char c) { return c == ',' || c == ' '; });
  if (!separated) {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw invalid_input("bad permutation text: " + text);
      word.push_back(c - '0');
    }
  } else {
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
      std::istringstream parts(token);
      std::string piece;
      while (parts >> piece) {
        try {
          std::size_t used = 0;
          word.push_back(std::stoi(piece, &used));
          if (used != piece.size()) throw invalid_input("bad permutation text: " + text);
        } catch (const std::logic_error&) {
          throw invalid_input("bad permutation text: " + text);
        }
      }
    }
  }
  return Permutation(std::move(word));
}

std::vector<int> Permutation::positions() const {
  std::vector<int> pos(size() + 1, 0);
  for (std::size_t i = 0; i < size(); ++i) pos[static_cast<std::size_t>(word_[i])] = static_cast<int>(i + 1);
  return pos;
}

std::string Permutation::to_string() const {
  std::string out;
  const bool compact = size() <= 9;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!compact && i > 0) out += ',';
    out += std::to_string(word_[i]);
  }
  return out;
}

std::size_t PermutationHash::operator()(const Permutation& sigma) const noexcept {
  std::uint64_t h = sigma.size();
  for (int v : sigma.word()) h = mix64(h ^ static_cast<std::uint64_t>(v)) + 0x9e3779b97f4a7c15ULL;
  return static_cast<std::size_t>(h);
}

std::vector<int> descents(const Permutation& sigma) {
  std::vector<int> out;
  const auto& w = sigma.word();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] > w[i + 1]) out.push_back(static_cast<int>(i + 1));
  }
  return out;
}

std::size_t inversion_count(const Permutation& sigma) {
  const auto& w = sigma.word();
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) count += w[i] > w[j];
  }
  return count;
}

Permutation swap_adjacent(const Permutation& sigma, int i) {
  if (i < 1 || static_cast<std::size_t>(i) >= sigma.size()) throw invalid_selection("adjacent swap position out of range");
  auto w = sigma.word();
  std::swap(w[static_cast<std::size_t>(i - 1)], w[static_cast<std::size_t>(i)]);
  return make_permutation_unchecked(std::move(w));
}

Permutation ungar_move(const Permutation& sigma, std::span<const int> selected) {
  const std::size_t n = sigma.size();
  std::vector<char> chosen(n + 1, 0);
  for (int i : selected) {
    if (i < 1 || static_cast<std::size_t>(i) >= n || sigma.at(static_cast<std::size_t>(i)) < sigma.at(static_cast<std::size_t>(i) + 1)) {
      throw invalid_selection("position " + std::to_string(i) + " is not a descent of " + sigma.to_string());
    }
    chosen[static_cast<std::size_t>(i)] = 1;
  }
  auto w = sigma.word();
  std::size_t i = 1;
  while (i < n) {
    if (!chosen[i]) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end + 1 < n && chosen[end + 1]) ++end;
    // Run of descents i..end reverses positions i..end+1 (1-indexed).
    std::reverse(w.begin() + static_cast<std::ptrdiff_t>(i - 1), w.begin() + static_cast<std::ptrdiff_t>(end + 1));
    i = end + 1;
  }
  return make_permutation_unchecked(std::move(w));
}

Permutation maximal_ungar_move(const Permutation& sigma) {
  const auto des = descents(sigma);
  return ungar_move(sigma, des);
}

bool weak_leq(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size()) throw size_mismatch("weak_leq on permutations of different sizes");
  const auto pos_s = sigma.positions();
  const auto pos_t = tau.positions();
  const std::size_t n = sigma.size();
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = a + 1; b <= n; ++b) {
      if (pos_s[b] < pos_s[a] && pos_t[b] > pos_t[a]) return false;
    }
  }
  return true;
}

Permutation weak_meet(std::span<const Permutation> elements) {
  if (elements.empty()) throw invalid_input("weak_meet of an empty set");
  const std::size_t n = elements.front().size();
  for (const auto& sigma : elements) {
    if (sigma.size() != n) throw size_mismatch("weak_meet on permutations of different sizes");
  }
  if (elements.size() == 1) return elements.front();
  // before[a] holds the values b > a forced after a (non-inversions), 0-indexed values.
  std::vector<boost::dynamic_bitset<>> before(n, boost::dynamic_bitset<>(n));
  for (const auto& sigma : elements) {
    const auto pos = sigma.positions();
    for (std::size_t a = 1; a <= n; ++a) {
      for (std::size_t b = a + 1; b <= n; ++b) {
        if (pos[a] < pos[b]) before[a - 1].set(b - 1);
      }
    }
  }
  // Pairs only point from smaller to larger values, so closing from the top down suffices.
  for (std::size_t a = n; a-- > 0;) {
    auto reach = before[a];
    for (std::size_t b = reach.find_first(); b != boost::dynamic_bitset<>::npos; b = reach.find_next(b)) {
      before[a] |= before[b];
    }
  }
  std::vector<int> word(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t preceding = 0;
    for (std::size_t u = 0; u < v; ++u) preceding += before[u].test(v);
    for (std::size_t u = v + 1; u < n; ++u) preceding += !before[v].test(u);
    if (word[preceding] != 0) throw invariant_violation("weak_meet: closed relation is not a permutation order");
    word[preceding] = static_cast<int>(v + 1);
  }
  return make_permutation_unchecked(std::move(word));
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  std::vector<int> word(n);
  std::iota(word.begin(), word.end(), 1);
  do {
    out.push_back(make_permutation_unchecked(word));
  } while (std::next_permutation(word.begin(), word.end()));
  return out;
}

PathProjection project_pi_k(const Permutation& sigma, std::size_t k) {
  const std::size_t n = sigma.size();
  if (k < 1 || k >= n) throw domain_error("project_pi_k needs 1 <= k <= n-1");
  PathProjection out;
  out.k = k;
  out.n = n;
  const std::size_t cols = n - k;
  out.ideal.assign(k * cols, false);
  std::size_t norths = 0;
  std::size_t easts = 0;
  for (int v : sigma.word()) {
    if (static_cast<std::size_t>(v) <= k) {
      out.path += 'E';
      // Cells under this east step: rows below the current height.
      const std::size_t row = k - 1 - easts;
      for (std::size_t y = 0; y < norths; ++y) out.ideal[row * cols + y] = true;
      ++easts;
    } else {
      out.path += 'N';
      ++norths;
    }
  }
  return out;
}

bool prefix_sorted(const Permutation& sigma, std::size_t k) {
  for (std::size_t i = 1; i <= k && i <= sigma.size(); ++i) {
    if (static_cast<std::size_t>(sigma.at(i)) > k) return false;
  }
  return true;
}

std::size_t sorted_prefix_time(std::span<const Permutation> trajectory, std::size_t k) {
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    if (prefix_sorted(trajectory[t], k)) return t;
  }
  throw not_reached("trajectory ends before values 1.." + std::to_string(k) + " are in place");
}

nlohmann::json permutation_to_json(const Permutation& sigma) { return sigma.word(); }

Permutation permutation_from_json(const nlohmann::json& doc) {
  try {
    return Permutation(doc.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("malformed permutation JSON: ") + e.what());
  }
}

}  // namespace ungar
