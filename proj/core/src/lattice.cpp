#include "luset/lattice.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "luset/error.hpp"

namespace luset {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidLattice, msg); }

std::string subset_label(unsigned mask, unsigned n) {
  std::string s = "{";
  bool first = true;
  for (unsigned i = 0; i < n; ++i)
    if (mask & (1u << i)) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    }
  return s + "}";
}

}  // namespace

Lattice::Lattice(std::vector<std::string> elements, const std::string& bottom,
                 const std::vector<std::pair<std::string, std::string>>& covers)
    : labels_(std::move(elements)) {
  if (labels_.empty()) invalid("lattice has no elements");
  for (Level i = 0; i < labels_.size(); ++i)
    if (!index_.emplace(labels_[i], i).second) invalid("duplicate lattice element '" + labels_[i] + "'");
  if (!has(bottom)) invalid("bottom '" + bottom + "' is not an element");
  bottom_ = level(bottom);

  const std::size_t n = labels_.size();
  leq_.assign(n, std::vector<bool>(n, false));
  for (Level i = 0; i < n; ++i) leq_[i][i] = true;
  for (const auto& [lo, hi] : covers) {
    if (!has(lo) || !has(hi)) invalid("cover mentions unknown element '" + (has(lo) ? hi : lo) + "'");
    leq_[level(lo)][level(hi)] = true;
  }
  for (Level k = 0; k < n; ++k)
    for (Level i = 0; i < n; ++i)
      if (leq_[i][k])
        for (Level j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;

  for (Level i = 0; i < n; ++i) {
    if (!leq_[bottom_][i]) invalid("bottom is not below '" + labels_[i] + "'");
    for (Level j = 0; j < n; ++j)
      if (i != j && leq_[i][j] && leq_[j][i])
        invalid("order is not antisymmetric between '" + labels_[i] + "' and '" + labels_[j] + "'");
  }

  join_.assign(n, std::vector<Level>(n, 0));
  for (Level a = 0; a < n; ++a)
    for (Level b = 0; b < n; ++b) {
      bool found = false;
      for (Level u = 0; u < n && !found; ++u) {
        if (!leq_[a][u] || !leq_[b][u]) continue;
        bool least = true;
        for (Level v = 0; v < n && least; ++v)
          if (leq_[a][v] && leq_[b][v] && !leq_[u][v]) least = false;
        if (least) {
          join_[a][b] = u;
          found = true;
        }
      }
      if (!found) invalid("elements '" + labels_[a] + "' and '" + labels_[b] + "' have no least upper bound");
    }
  top_ = bottom_;
  for (Level i = 0; i < n; ++i) top_ = join_[top_][i];
}

Lattice Lattice::two_point() { return Lattice({"L", "H"}, "L", {{"L", "H"}}); }

Lattice Lattice::powerset(unsigned n) {
  if (n > 6) invalid("powerset lattices are limited to 6 atoms");
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> covers;
  for (unsigned m = 0; m < (1u << n); ++m) labels.push_back(subset_label(m, n));
  for (unsigned m = 0; m < (1u << n); ++m)
    for (unsigned i = 0; i < n; ++i)
      if (!(m & (1u << i))) covers.emplace_back(subset_label(m, n), subset_label(m | (1u << i), n));
  return Lattice(labels, subset_label(0, n), covers);
}

Lattice Lattice::chain(std::size_t n) {
  if (n == 0) invalid("chain lattices need at least one element");
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("l" + std::to_string(i));
    if (i) covers.emplace_back(labels[i - 1], labels[i]);
  }
  return Lattice(labels, labels[0], covers);
}

Lattice Lattice::named(const std::string& spec) {
  if (spec == "two-point") return two_point();
  auto suffix = [&](const std::string& prefix) -> std::optional<unsigned long> {
    if (spec.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      return std::stoul(spec.substr(prefix.size()));
    } catch (...) {
      invalid("bad lattice name '" + spec + "'");
    }
  };
  if (auto n = suffix("powerset:")) return powerset(static_cast<unsigned>(*n));
  if (auto n = suffix("chain:")) return chain(*n);
  std::ifstream in(spec);
  if (!in) invalid("unknown lattice '" + spec + "' (not a built-in name or readable file)");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Lattice Lattice::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    std::vector<std::string> elements = j.at("elements").get<std::vector<std::string>>();
    std::string bottom = j.at("bottom").get<std::string>();
    std::vector<std::pair<std::string, std::string>> covers;
    for (const auto& c : j.value("covers", nlohmann::json::array())) {
      if (!c.is_array() || c.size() != 2) invalid("each cover must be a pair [lower, upper]");
      covers.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
    }
    return Lattice(std::move(elements), bottom, covers);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed lattice file: ") + e.what());
  }
}

Level Lattice::level(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) invalid("unknown lattice element '" + std::string(label) + "'");
  return it->second;
}

bool Lattice::has(std::string_view label) const { return index_.find(label) != index_.end(); }

std::string Lattice::to_json() const {
  nlohmann::json j;
  j["elements"] = labels_;
  j["bottom"] = labels_[bottom_];
  auto covers = nlohmann::json::array();
  for (Level a = 0; a < size(); ++a)
    for (Level b = 0; b < size(); ++b) {
      if (a == b || !leq_[a][b]) continue;
      bool direct = true;
      for (Level c = 0; c < size() && direct; ++c)
        if (c != a && c != b && leq_[a][c] && leq_[c][b]) direct = false;
      if (direct) covers.push_back({labels_[a], labels_[b]});
    }
  j["covers"] = covers;
  return j.dump();
}

}  // namespace luset
