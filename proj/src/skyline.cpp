#include "ungar/skyline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ungar/errors.hpp"

namespace ungar {

nlohmann::json two_rowed_to_json(const TwoRowedArray& array) {
  return {{"top", array.top}, {"bottom", array.bottom}};
}

TwoRowedArray skyline(std::span<const std::uint64_t> c) {
  const std::size_t m = c.size();
  if (m < 2) throw invalid_input("skyline needs at least two columns");
  // best[k]: largest index in [2, k] attaining max c over [2, k] (1-indexed).
  std::vector<std::size_t> best(m + 1, 0);
  best[2] = 2;
  for (std::size_t k = 3; k <= m; ++k) best[k] = c[k - 1] >= c[best[k - 1] - 1] ? k : best[k - 1];
  TwoRowedArray out;
  out.top.push_back(1);
  out.bottom.push_back(c[0]);
  std::size_t hi = m;
  while (true) {
    const std::size_t a = best[hi];
    out.top.push_back(a);
    out.bottom.push_back(c[a - 1]);
    if (a == 2) break;
    hi = a - 1;
  }
  return out;
}

bool is_childlike(const TwoRowedArray& array, std::size_t n) {
  const auto& a = array.top;
  const auto& b = array.bottom;
  if (a.size() < 2 || a.size() != b.size()) return false;
  if (a[0] != 1 || a.back() != 2 || a[1] > n) return false;
  for (std::size_t i = 2; i < a.size(); ++i) {
    if (a[i] >= a[i - 1]) return false;
  }
  if (!(b[0] > b[1])) return false;
  for (std::size_t i = 2; i < b.size(); ++i) {
    if (b[i] > b[i - 1]) return false;
  }
  return std::all_of(b.begin(), b.end(), [](std::uint64_t x) { return x >= 1; });
}

std::vector<std::size_t> summary_positions(std::span<const std::size_t> sequence, std::size_t n) {
  if (n < 2) throw domain_error("summary needs n >= 2");
  std::vector<std::size_t> picks;
  if (sequence.empty()) return picks;
  const double log_n = std::log(static_cast<double>(n));
  picks.push_back(0);
  while (true) {
    const double threshold = static_cast<double>(sequence[picks.back()]) / log_n;
    // The sequence decreases, so the smallest qualifying value is the last
    // qualifying position after the previous pick.
    std::optional<std::size_t> choice;
    for (std::size_t k = picks.back() + 1; k < sequence.size(); ++k) {
      if (static_cast<double>(sequence[k]) >= threshold) {
        if (!choice || sequence[k] < sequence[*choice]) choice = k;
      }
    }
    if (!choice) break;
    picks.push_back(*choice);
  }
  return picks;
}

Summary summarize(const TwoRowedArray& array, std::size_t n) {
  if (!is_childlike(array, n)) throw invalid_input("summary needs a childlike array");
  const std::vector<std::size_t> tail(array.top.begin() + 1, array.top.end());
  const auto picks = summary_positions(tail, n);
  Summary s;
  s.array.top.push_back(array.top[0]);
  s.array.bottom.push_back(array.bottom[0]);
  for (std::size_t k : picks) {
    // Position k in a_2..a_l is column k + 2 of the array.
    s.positions.push_back(k + 2);
    s.array.top.push_back(array.top[k + 1]);
    s.array.bottom.push_back(array.bottom[k + 1]);
  }
  return s;
}

bool is_good(const TwoRowedArray& array, std::size_t n) {
  if (n < 2 || !is_childlike(array, n)) return false;
  const auto s = summarize(array, n);
  const double log_n = std::log(static_cast<double>(n));
  const double first = static_cast<double>(s.array.top[1]);
  const double last = static_cast<double>(s.array.top.back());
  return first >= static_cast<double>(n) / log_n && last <= log_n * log_n * log_n;
}

LengthBounds good_array_length_bounds(std::size_t n) {
  const double log_n = std::log(static_cast<double>(n));
  if (!(log_n > 1.0)) throw domain_error("length bounds need n > e");
  const double ratio = log_n / std::log(log_n);
  return {ratio - 3.0, 2.0 * ratio + 2.0};
}

void check_good_array_length(const Summary& summary, std::size_t n) {
  const auto bounds = good_array_length_bounds(n);
  const double length = static_cast<double>(summary.array.size() - 1);
  if (length < bounds.lower || length > bounds.upper) {
    throw bound_violation("summary length " + std::to_string(summary.array.size() - 1) + " outside [" +
                          std::to_string(bounds.lower) + ", " + std::to_string(bounds.upper) + "] at n = " +
                          std::to_string(n));
  }
}

namespace {

double damping_exponent(double x, double p, double c1) {
  const double ll = std::log(std::log(x));
  return std::pow(p, 8) * std::exp(c1 / (p * p)) * ll * ll * ll * ll;
}

}  // namespace

double lower_bound_f(double x, double p, double c1) {
  require_probability(p);
  if (!(x >= 1.0)) throw domain_error("f needs x >= 1");
  if (x < 16.0) return 1.0;
  return std::max(1.0, x * std::exp(-damping_exponent(x, p, c1)));
}

double tamari_lower_bound(double n, double p, double zeta_minus, double c1) {
  require_probability(p);
  if (!(n > std::exp(1.0))) return 0.0;
  return zeta_minus * n * std::exp(-damping_exponent(n, p, c1));
}

bool window_event(std::span<const std::uint64_t> g, std::size_t i, std::size_t j, std::uint64_t m) {
  if (i < 1 || j < i || j > g.size()) throw domain_error("window_event needs 1 <= i <= j <= n");
  if (g[i - 1] != m) return false;
  for (std::size_t l = i + 1; l <= j; ++l) {
    if (g[l - 1] >= m) return false;
  }
  return true;
}

bool array_event(std::span<const std::uint64_t> g, const TwoRowedArray& array) { return skyline(g) == array; }

std::vector<std::uint64_t> sample_first_operation_times(std::size_t n, double p, Rng& rng) {
  require_probability(p);
  std::vector<std::uint64_t> g(n);
  for (auto& x : g) x = rng.geometric(p);
  return g;
}

std::vector<std::uint64_t> sample_first_operation_times_given(std::size_t n, double p, std::uint64_t m, Rng& rng) {
  require_probability(p);
  if (m < 2) throw domain_error("conditioning on E_{[1,n],m} needs m >= 2");
  if (p == 1.0) throw domain_error("E_{[1,n],m} has probability zero at p = 1 for m >= 2");
  std::vector<std::uint64_t> g(n);
  g[0] = m;
  const double log_q = std::log1p(-p);
  // P(G <= k | G <= m - 1) = (1 - q^k) / (1 - q^{m-1}); invert it.
  const double mass = -std::expm1(static_cast<double>(m - 1) * log_q);
  for (std::size_t i = 1; i < n; ++i) {
    const double u = rng.uniform_positive() * mass;
    auto k = static_cast<std::uint64_t>(std::ceil(std::log1p(-u) / log_q));
    g[i] = std::clamp<std::uint64_t>(k, 1, m - 1);
  }
  return g;
}

const char* stream_name(Stream stream) noexcept {
  switch (stream) {
    case Stream::S: return "S";
    case Stream::B: return "B";
    case Stream::B_prime: return "B'";
    case Stream::C: return "C";
    case Stream::D: return "D";
    case Stream::D_prime: return "D'";
    case Stream::D_dagger: return "D+";
  }
  return "?";
}

bool StreamBank::draw(Stream stream, std::uint64_t index, std::uint64_t step) {
  if (audit_) log_.push_back({stream, index, step});
  return to_unit_interval(derive_seed(seed_, {static_cast<std::uint64_t>(stream), index, step})) < p_;
}

std::vector<StreamBank::Triple> StreamBank::take_log() {
  std::vector<Triple> out;
  out.swap(log_);
  return out;
}

namespace {

// Static plan of the good branch. Labels and positions are 1-indexed.
struct GoodPlan {
  std::vector<std::size_t> a;      // skyline labels, a[k] = a_{k+1}
  std::vector<std::size_t> pos;    // summary positions i_1..i_{l'}
  std::size_t k2 = 0;              // 2 ceil(c L)
  std::size_t k3 = 0;              // 2 ceil(c L^3)
  std::size_t pos2 = 0;            // i_{k2}
  std::size_t pos3 = 0;            // i_{k3}
  std::size_t label2 = 0;          // a_{i_{k2}}
  std::size_t label3 = 0;          // a_{i_{k3}}

  std::size_t label(std::size_t position) const { return a[position - 1]; }
  std::size_t summary_label(std::size_t j) const { return label(pos[j - 1]); }
};

}  // namespace

Algorithm1Result algorithm1_run(const Algorithm1Config& config) {
  require_probability(config.p);
  const std::size_t n = config.n;
  if (n < 2) throw domain_error("algorithm1_run needs n >= 2");
  if (!(config.window_coefficient > 0.0)) throw domain_error("window coefficient must be positive");

  Algorithm1Result result;
  result.seed = config.seed;
  result.n = n;
  result.p = config.p;
  StreamBank bank(config.seed, config.p, config.audit);

  // g_i is the first step with S_{i,t} = 1; the S streams are fixed by the
  // seed, so they can be read ahead without changing the run.
  {
    StreamBank peek(config.seed, config.p, false);
    result.g.resize(n);
    for (std::size_t v = 1; v <= n; ++v) {
      std::uint64_t t = 1;
      while (!peek.draw(Stream::S, v, t)) ++t;
      result.g[v - 1] = t;
    }
  }
  const std::uint64_t g_max = *std::max_element(result.g.begin(), result.g.end());
  result.skyline = skyline(result.g);
  result.childlike = is_childlike(result.skyline, n);
  std::optional<GoodPlan> plan;
  if (result.childlike) {
    const auto summary = summarize(result.skyline, n);
    result.summary = summary.array;
    result.summary_positions = summary.positions;
    result.good = is_good(result.skyline, n);
    if (result.good) {
      const double ll = std::log(std::log(static_cast<double>(n)));
      const double c = config.window_coefficient;
      const double k2 = 2.0 * std::ceil(c * ll);
      const double k3 = 2.0 * std::ceil(c * ll * ll * ll);
      const double length = static_cast<double>(summary.positions.size());
      if (!(k2 >= 1.0 && k2 <= k3 && k3 <= length)) {
        result.degenerate = true;
      } else {
        GoodPlan gp;
        gp.a = result.skyline.top;
        gp.pos = summary.positions;
        gp.k2 = static_cast<std::size_t>(k2);
        gp.k3 = static_cast<std::size_t>(k3);
        gp.pos2 = gp.pos[gp.k2 - 1];
        gp.pos3 = gp.pos[gp.k3 - 1];
        gp.label2 = gp.label(gp.pos2);
        gp.label3 = gp.label(gp.pos3);
        plan = std::move(gp);
      }
    }
  }

  // Vertex classes for the good branch: for v >= label2, the skyline index j
  // with v in [a_j, a_{j-1} - 1]; for v in [label3, label2), the even summary
  // index j of its window [a_{i_j}, a_{i_{j-2}}).
  std::vector<std::size_t> high_block(n + 1, 0);
  std::vector<std::size_t> window_of(n + 1, 0);
  if (plan) {
    for (std::size_t j = 2; j <= plan->pos2; ++j) {
      const std::size_t lo = plan->label(j);
      const std::size_t hi = j == 2 ? n : plan->label(j - 1) - 1;
      for (std::size_t v = lo; v <= hi; ++v) high_block[v] = j;
    }
    for (std::size_t j = plan->k2 + 2; j <= plan->k3; j += 2) {
      for (std::size_t v = plan->summary_label(j); v < plan->summary_label(j - 2); ++v) window_of[v] = j;
    }
  }

  const std::size_t l = result.skyline.size();
  const std::uint64_t g1 = result.g[0];
  std::vector<std::uint64_t> t_values(result.childlike ? l - 1 : 0, 0);
  std::size_t t_pending = t_values.size();

  auto forest = OrderedForest::path(n);
  auto check_children_of_root = [&] {
    for (std::size_t j = 2; j <= l; ++j) {
      if (forest.parent(static_cast<int>(result.skyline.top[j - 1])) != 1) {
        throw invariant_violation("skyline label " + std::to_string(result.skyline.top[j - 1]) +
                                  " is not a child of vertex 1 after step g_1 - 1");
      }
    }
  };
  if (result.childlike && g1 == 1) check_children_of_root();

  result.pick_counts.assign(n, 0);
  std::vector<int> picked;
  std::vector<std::size_t> c_choice;  // per window j: chosen vertex or 0
  if (plan) c_choice.assign(plan->k3 + 1, 0);

  for (std::uint64_t t = 1; forest.roots().size() != n; ++t) {
    picked.clear();
    if (t <= g_max) {
      for (std::size_t v = 1; v <= n; ++v) {
        const bool fire = t <= result.g[v - 1] ? bank.draw(Stream::S, v, t) : bank.draw(Stream::B, v, t);
        if (fire) picked.push_back(static_cast<int>(v));
      }
    } else if (!plan) {
      for (std::size_t v = 1; v <= n; ++v) {
        if (bank.draw(Stream::S, v, t)) picked.push_back(static_cast<int>(v));
      }
    } else {
      const GoodPlan& gp = *plan;
      // Vertex 1, keyed to the first skyline label still attached to it.
      std::size_t first = 0;
      for (std::size_t i = 2; i <= l; ++i) {
        if (forest.parent(static_cast<int>(gp.label(i))) == 1) {
          first = i;
          break;
        }
      }
      bool fire_root;
      if (first != 0 && first <= gp.pos2) {
        fire_root = bank.draw(Stream::D, first, t);
      } else if (first != 0 && first <= gp.pos3) {
        std::size_t j = gp.k2 + 2;
        while (first > gp.pos[j - 1]) j += 2;
        fire_root = bank.draw(Stream::D_prime, j, t);
      } else {
        fire_root = bank.draw(Stream::D_dagger, 1, t);
      }
      if (fire_root) picked.push_back(1);

      // Largest root with a child of each induced window forest.
      for (std::size_t j = gp.k2 + 2; j <= gp.k3; j += 2) {
        const std::size_t lo = gp.summary_label(j);
        const std::size_t hi = gp.summary_label(j - 2);
        c_choice[j] = 0;
        for (std::size_t v = hi - 1; v >= lo; --v) {
          const bool root = static_cast<std::size_t>(forest.parent(static_cast<int>(v))) < lo;
          const bool has_child = v + 1 < hi && static_cast<std::size_t>(forest.parent(static_cast<int>(v + 1))) == v;
          if (root && has_child) {
            c_choice[j] = v;
            break;
          }
        }
      }

      for (std::size_t v = 2; v <= n; ++v) {
        bool fire;
        if (v < gp.label3) {
          fire = bank.draw(Stream::B, v, t);
        } else if (v < gp.label2) {
          const std::size_t j = window_of[v];
          fire = c_choice[j] == v ? bank.draw(Stream::C, j, t) : bank.draw(Stream::B, v, t);
        } else {
          const std::size_t j = high_block[v];
          const bool is_anchor = v == gp.label(j);
          // For j = 2 the previous label is vertex 1 itself, which counts as attached.
          const bool attached = j == 2 || forest.parent(static_cast<int>(gp.label(j - 1))) == 1;
          fire = is_anchor && !attached ? bank.draw(Stream::B_prime, v, t) : bank.draw(Stream::B, v, t);
        }
        if (fire) picked.push_back(static_cast<int>(v));
      }
    }

    if (config.audit) {
      auto log = bank.take_log();
      bool fresh = log.size() == n;
      for (std::size_t a = 0; a < log.size() && fresh; ++a) {
        fresh = log[a].step == t;
        for (std::size_t b = a + 1; b < log.size() && fresh; ++b) fresh = !(log[a] == log[b]);
      }
      if (!fresh) throw invariant_violation("step " + std::to_string(t) + " did not consult one fresh triple per vertex");
      ++result.audited_steps;
    }

    std::sort(picked.begin(), picked.end());
    for (int v : picked) {
      ++result.pick_counts[static_cast<std::size_t>(v - 1)];
      forest.operate(v);
    }
    if (config.keep_picks) result.picks.push_back(picked);
    result.absorption = t;

    if (result.childlike) {
      if (t + 1 == g1) check_children_of_root();
      if (t >= g1 && t_pending > 0) {
        for (std::size_t j = 2; j <= l; ++j) {
          if (t_values[j - 2] == 0 && forest.parent(static_cast<int>(result.skyline.top[j - 1])) != 1) {
            t_values[j - 2] = t - (g1 - 1);
            --t_pending;
          }
        }
      }
    }
  }
  if (t_pending > 0) throw invariant_violation("run absorbed with a skyline label still attached to vertex 1");
  result.t = std::move(t_values);
  return result;
}

nlohmann::json algorithm1_to_json(const Algorithm1Result& result) {
  return {{"seed", result.seed},
          {"n", result.n},
          {"p", result.p},
          {"g", result.g},
          {"skyline", two_rowed_to_json(result.skyline)},
          {"summary", two_rowed_to_json(result.summary)},
          {"good", result.good},
          {"degenerate", result.degenerate},
          {"t", result.t},
          {"absorption", result.absorption}};
}

NaiveTamariRun naive_tamari_run(std::size_t n, double p, Rng& rng, bool keep_states) {
  require_probability(p);
  if (n < 1) throw domain_error("naive_tamari_run needs n >= 1");
  NaiveTamariRun run;
  run.first_pick.assign(n, 0);
  run.pick_counts.assign(n, 0);
  auto forest = OrderedForest::path(n);
  if (keep_states) run.states.push_back(forest);
  std::size_t unfired = n;
  for (std::uint64_t t = 1; forest.roots().size() != n; ++t) {
    for (std::size_t v = 1; v <= n; ++v) {
      if (!rng.bernoulli(p)) continue;
      if (run.first_pick[v - 1] == 0) {
        run.first_pick[v - 1] = t;
        --unfired;
      }
      ++run.pick_counts[v - 1];
      forest.operate(static_cast<int>(v));
    }
    run.absorption = t;
    if (keep_states) run.states.push_back(forest);
  }
  for (std::uint64_t t = run.absorption + 1; unfired > 0; ++t) {
    for (std::size_t v = 1; v <= n; ++v) {
      if (run.first_pick[v - 1] == 0 && rng.bernoulli(p)) {
        run.first_pick[v - 1] = t;
        --unfired;
      }
    }
  }
  return run;
}

}  // namespace ungar
