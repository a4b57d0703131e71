#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "luset/ast.hpp"

namespace luset {

class Value {
 public:
  Value() = default;
  static Value absent() { return {}; }
  static Value present(Literal v) {
    Value x;
    x.v_ = v;
    return x;
  }
  static Value of_int(std::int64_t v) { return present(Literal::integer(v)); }
  static Value of_bool(bool b) { return present(Literal::boolean(b)); }

  bool is_present() const { return v_.has_value(); }
  const Literal& lit() const { return *v_; }
  bool as_bool() const { return v_->as_bool(); }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::optional<Literal> v_;
};

std::string to_string(const Value& v);  // "_" when absent

using VStream = std::vector<Value>;
using BStream = std::vector<bool>;
using History = std::map<std::string, VStream>;

// Per-tick rules. Each throws Error(ClockedValueMismatch) when no rule applies.
Value apply_unop(UnOp op, const Value& a);
Value apply_binop(BinOp op, const Value& a, const Value& b);
Value when_step(bool k, const Value& x, const Value& e);
Value merge_step(const Value& x, const Value& t, const Value& f);
Value ite_step(const Value& c, const Value& t, const Value& f);
bool base_step(const std::vector<Value>& vs);

VStream const_stream(const Literal& c, const BStream& bs);
VStream lift_op(UnOp op, const VStream& a);
VStream lift_op(BinOp op, const VStream& a, const VStream& b);
VStream when_stream(bool k, const VStream& xs, const VStream& es);
VStream merge_stream(const VStream& xs, const VStream& ts, const VStream& fs);
VStream ite_stream(const VStream& es, const VStream& ts, const VStream& fs);
VStream fby_lustre(const VStream& xs, const VStream& ys);
VStream fby_nlustre(const Literal& c, const VStream& vs);
BStream base_of(const std::vector<VStream>& vs);
bool respects_clock(const History& H, const BStream& bs);
BStream eval_clock(const History& H, const BStream& bs, const Clock& ck);

}  // namespace luset
