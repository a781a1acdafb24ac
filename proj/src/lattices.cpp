#include "ungar/lattices.hpp"

#include <algorithm>

#include "ungar/errors.hpp"

namespace ungar {

bool IdealLattice::is_bottom(const State& s) const {
  return std::none_of(s.begin(), s.end(), [](bool b) { return b; });
}

IdealLattice::State IdealLattice::apply(const State& s, std::span<const int> picked) const {
  State next = s;
  for (int x : picked) {
    if (x < 0 || static_cast<std::size_t>(x) >= next.size() || !next[static_cast<std::size_t>(x)]) {
      throw invalid_selection("picked element is not in the ideal");
    }
    next[static_cast<std::size_t>(x)] = false;
  }
  // Removing several maximal elements at once keeps the set downward closed.
  return next;
}

nlohmann::json IdealLattice::to_json(const State& s) const {
  nlohmann::json members = nlohmann::json::array();
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (s[x]) members.push_back(x);
  }
  return members;
}

ExplicitLattice::ExplicitLattice(FinitePoset lattice) : lattice_(std::make_shared<const FinitePoset>(std::move(lattice))) {
  const auto tops = lattice_->maximal_elements();
  const auto bottoms = lattice_->minimal_elements();
  if (tops.size() != 1 || bottoms.size() != 1) throw not_a_lattice("explicit lattice needs a unique top and bottom");
  top_ = tops.front();
  bottom_ = bottoms.front();
}

ExplicitLattice::State ExplicitLattice::apply(State s, std::span<const int> picked) const {
  State result = s;
  for (int y : picked) result = meet(*lattice_, result, y);
  return result;
}

}  // namespace ungar
