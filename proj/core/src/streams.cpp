#include "luset/streams.hpp"

namespace luset {

namespace {

[[noreturn]] void mismatch(const std::string& what, int tick = -1) {
  Error e(ErrorKind::ClockedValueMismatch, "clocked value mismatch in " + what +
                                               (tick >= 0 ? " at tick " + std::to_string(tick) : ""));
  e.tick = tick;
  throw e;
}

std::int64_t wrap(unsigned long long v) { return static_cast<std::int64_t>(v); }

using U = unsigned long long;

std::size_t check_lengths(std::initializer_list<const VStream*> ss) {
  std::size_t n = (*ss.begin())->size();
  for (const auto* s : ss)
    if (s->size() != n) throw Error(ErrorKind::ArityMismatch, "streams of different lengths");
  return n;
}

// Rethrows a per-tick failure with the tick it happened at.
template <typename F>
auto at_tick(std::size_t t, F&& f) {
  try {
    return f();
  } catch (Error& e) {
    if (e.tick < 0) e.tick = static_cast<int>(t);
    throw;
  }
}

}  // namespace

std::string to_string(const Value& v) { return v.is_present() ? to_string(v.lit()) : "_"; }

Value apply_unop(UnOp op, const Value& a) {
  if (!a.is_present()) return Value::absent();
  if (op == UnOp::Not) return Value::of_bool(!a.as_bool());
  return Value::of_int(wrap(U{0} - static_cast<U>(a.lit().value)));
}

Value apply_binop(BinOp op, const Value& a, const Value& b) {
  if (a.is_present() != b.is_present()) mismatch(std::string("operator ") + std::string(to_string(op)));
  if (!a.is_present()) return Value::absent();
  std::int64_t x = a.lit().value;
  std::int64_t y = b.lit().value;
  switch (op) {
    case BinOp::Add: return Value::of_int(wrap(static_cast<U>(x) + static_cast<U>(y)));
    case BinOp::Sub: return Value::of_int(wrap(static_cast<U>(x) - static_cast<U>(y)));
    case BinOp::Mul: return Value::of_int(wrap(static_cast<U>(x) * static_cast<U>(y)));
    case BinOp::Div:
    case BinOp::Mod: {
      if (y == 0) throw Error(ErrorKind::DivByZero, "division by zero");
      if (x == INT64_MIN && y == -1) return Value::of_int(op == BinOp::Div ? INT64_MIN : 0);
      return Value::of_int(op == BinOp::Div ? x / y : x % y);
    }
    case BinOp::And: return Value::of_bool(x && y);
    case BinOp::Or: return Value::of_bool(x || y);
    case BinOp::Xor: return Value::of_bool((x != 0) != (y != 0));
    case BinOp::Eq: return Value::of_bool(x == y);
    case BinOp::Ne: return Value::of_bool(x != y);
    case BinOp::Lt: return Value::of_bool(x < y);
    case BinOp::Le: return Value::of_bool(x <= y);
    case BinOp::Gt: return Value::of_bool(x > y);
    case BinOp::Ge: return Value::of_bool(x >= y);
  }
  return Value::absent();
}

Value when_step(bool k, const Value& x, const Value& e) {
  if (x.is_present() != e.is_present()) mismatch("when");
  if (!x.is_present()) return Value::absent();
  return x.as_bool() == k ? e : Value::absent();
}

Value merge_step(const Value& x, const Value& t, const Value& f) {
  if (!x.is_present()) {
    if (t.is_present() || f.is_present()) mismatch("merge");
    return Value::absent();
  }
  const Value& chosen = x.as_bool() ? t : f;
  const Value& other = x.as_bool() ? f : t;
  if (!chosen.is_present() || other.is_present()) mismatch("merge");
  return chosen;
}

Value ite_step(const Value& c, const Value& t, const Value& f) {
  if (c.is_present() != t.is_present() || c.is_present() != f.is_present()) mismatch("if");
  if (!c.is_present()) return Value::absent();
  return c.as_bool() ? t : f;
}

bool base_step(const std::vector<Value>& vs) {
  if (vs.empty()) return false;
  bool p = vs[0].is_present();
  for (const auto& v : vs)
    if (v.is_present() != p) mismatch("base-of");
  return p;
}

VStream const_stream(const Literal& c, const BStream& bs) {
  VStream out;
  out.reserve(bs.size());
  for (bool b : bs) out.push_back(b ? Value::present(c) : Value::absent());
  return out;
}

VStream lift_op(UnOp op, const VStream& a) {
  VStream out;
  for (const auto& v : a) out.push_back(apply_unop(op, v));
  return out;
}

VStream lift_op(BinOp op, const VStream& a, const VStream& b) {
  std::size_t n = check_lengths({&a, &b});
  VStream out;
  for (std::size_t t = 0; t < n; ++t) out.push_back(at_tick(t, [&] { return apply_binop(op, a[t], b[t]); }));
  return out;
}

VStream when_stream(bool k, const VStream& xs, const VStream& es) {
  std::size_t n = check_lengths({&xs, &es});
  VStream out;
  for (std::size_t t = 0; t < n; ++t) out.push_back(at_tick(t, [&] { return when_step(k, xs[t], es[t]); }));
  return out;
}

VStream merge_stream(const VStream& xs, const VStream& ts, const VStream& fs) {
  std::size_t n = check_lengths({&xs, &ts, &fs});
  VStream out;
  for (std::size_t t = 0; t < n; ++t) out.push_back(at_tick(t, [&] { return merge_step(xs[t], ts[t], fs[t]); }));
  return out;
}

VStream ite_stream(const VStream& es, const VStream& ts, const VStream& fs) {
  std::size_t n = check_lengths({&es, &ts, &fs});
  VStream out;
  for (std::size_t t = 0; t < n; ++t) out.push_back(at_tick(t, [&] { return ite_step(es[t], ts[t], fs[t]); }));
  return out;
}

VStream fby_lustre(const VStream& xs, const VStream& ys) {
  std::size_t n = check_lengths({&xs, &ys});
  VStream out;
  std::optional<Value> saved;
  for (std::size_t t = 0; t < n; ++t) {
    if (xs[t].is_present() != ys[t].is_present()) mismatch("fby", static_cast<int>(t));
    if (!xs[t].is_present()) {
      out.push_back(Value::absent());
      continue;
    }
    out.push_back(saved ? *saved : xs[t]);
    saved = ys[t];
  }
  return out;
}

VStream fby_nlustre(const Literal& c, const VStream& vs) {
  VStream out;
  Value saved = Value::present(c);
  for (const auto& v : vs) {
    if (!v.is_present()) {
      out.push_back(Value::absent());
      continue;
    }
    out.push_back(saved);
    saved = v;
  }
  return out;
}

BStream base_of(const std::vector<VStream>& vs) {
  if (vs.empty()) return {};
  std::size_t n = vs[0].size();
  BStream out(n, false);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Value> col;
    for (const auto& s : vs) {
      if (s.size() != n) throw Error(ErrorKind::ArityMismatch, "streams of different lengths");
      col.push_back(s[t]);
    }
    out[t] = at_tick(t, [&] { return base_step(col); });
  }
  return out;
}

bool respects_clock(const History& H, const BStream& bs) {
  for (const auto& [x, s] : H)
    for (std::size_t t = 0; t < s.size() && t < bs.size(); ++t)
      if (!bs[t] && s[t].is_present()) return false;
  return true;
}

BStream eval_clock(const History& H, const BStream& bs, const Clock& ck) {
  BStream cur = bs;
  for (const auto& st : ck.steps) {
    auto it = H.find(st.var);
    if (it == H.end()) throw Error(ErrorKind::UnboundVar, "no stream for clock variable '" + st.var + "'");
    const VStream& xs = it->second;
    for (std::size_t t = 0; t < cur.size(); ++t) {
      const Value x = t < xs.size() ? xs[t] : Value::absent();
      if (cur[t]) {
        if (!x.is_present()) mismatch("clock " + to_string(ck), static_cast<int>(t));
        cur[t] = x.as_bool() == st.k;
      } else if (x.is_present()) {
        mismatch("clock " + to_string(ck), static_cast<int>(t));
      }
    }
  }
  return cur;
}

}  // namespace luset
