#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace luset {

using Level = std::size_t;

// Finite join-semilattice given by its covering relation.
class Lattice {
 public:
  Lattice(std::vector<std::string> elements, const std::string& bottom,
          const std::vector<std::pair<std::string, std::string>>& covers);

  static Lattice two_point();
  static Lattice powerset(unsigned n);
  static Lattice chain(std::size_t n);
  // Built-in name ("two-point", "powerset:<n>", "chain:<n>") or a JSON file path.
  static Lattice named(const std::string& spec);
  static Lattice from_json(std::string_view text);

  std::size_t size() const { return labels_.size(); }
  Level bottom() const { return bottom_; }
  Level top() const { return top_; }
  bool leq(Level a, Level b) const { return leq_[a][b]; }
  Level join(Level a, Level b) const { return join_[a][b]; }

  const std::string& label(Level l) const { return labels_.at(l); }
  Level level(std::string_view label) const;
  bool has(std::string_view label) const;
  const std::vector<std::string>& labels() const { return labels_; }

  std::string to_json() const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Level, std::less<>> index_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<Level>> join_;
  Level bottom_ = 0;
  Level top_ = 0;
};

}  // namespace luset
