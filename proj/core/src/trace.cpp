#include "luset/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace luset {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

const VStream* Trace::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return &columns[i];
  return nullptr;
}

Value parse_value(std::string_view cell) {
  cell = trim(cell);
  if (cell == "_") return Value::absent();
  if (cell == "true" || cell == "T") return Value::of_bool(true);
  if (cell == "false" || cell == "F") return Value::of_bool(false);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size()) bad("invalid trace cell '" + std::string(cell) + "'");
  return Value::of_int(v);
}

Trace parse_trace(std::string_view text) {
  Trace t;
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty() && line[0] != '#') lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) bad("empty trace");
  int base_col = -1;
  auto header = split(lines[0]);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) bad("empty column name in trace header");
    if (header[i] == kBase) {
      base_col = static_cast<int>(i);
    } else {
      t.names.emplace_back(header[i]);
    }
  }
  t.columns.assign(t.names.size(), {});
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split(lines[r]);
    if (cells.size() != header.size())
      bad("trace row " + std::to_string(r) + " has " + std::to_string(cells.size()) + " cells, expected " +
          std::to_string(header.size()));
    std::size_t c = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (static_cast<int>(i) == base_col) {
        Value b = parse_value(cells[i]);
        if (!b.is_present() || b.lit().type != DataType::Bool) bad("base column must hold true/false");
        t.base.push_back(b.as_bool());
      } else {
        t.columns[c++].push_back(parse_value(cells[i]));
      }
    }
  }
  return t;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open trace '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::vector<VStream> trace_inputs(const Trace& t, const Node& n, std::size_t ticks) {
  std::vector<VStream> out;
  for (const auto& d : n.inputs) {
    const VStream* s = t.column(d.name);
    if (!s) bad("trace has no column for input '" + d.name + "'");
    if (s->size() < ticks)
      bad("trace column '" + d.name + "' has " + std::to_string(s->size()) + " ticks, " + std::to_string(ticks) +
          " requested");
    VStream v(s->begin(), s->begin() + static_cast<std::ptrdiff_t>(ticks));
    for (const auto& x : v)
      if (x.is_present() && x.lit().type != d.type)
        bad("trace column '" + d.name + "' holds a value of the wrong type");
    out.push_back(std::move(v));
  }
  return out;
}

std::string format_trace(const std::vector<std::string>& names, const History& H, const BStream* base) {
  std::ostringstream os;
  bool first = true;
  if (base) {
    os << kBase;
    first = false;
  }
  for (const auto& x : names) {
    os << (first ? "" : ",") << x;
    first = false;
  }
  os << '\n';
  std::size_t n = base ? base->size() : 0;
  for (const auto& x : names)
    if (auto it = H.find(x); it != H.end()) n = std::max(n, it->second.size());
  for (std::size_t t = 0; t < n; ++t) {
    first = true;
    if (base) {
      os << (t < base->size() && (*base)[t] ? "true" : "false");
      first = false;
    }
    for (const auto& x : names) {
      auto it = H.find(x);
      Value v = it != H.end() && t < it->second.size() ? it->second[t] : Value::absent();
      os << (first ? "" : ",") << to_string(v);
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

std::string format_rows(const std::vector<std::string>& names, const History& H) {
  std::ostringstream os;
  for (const auto& x : names) {
    os << x;
    if (auto it = H.find(x); it != H.end())
      for (const auto& v : it->second) os << ',' << to_string(v);
    os << '\n';
  }
  return os.str();
}

}  // namespace luset
