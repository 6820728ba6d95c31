// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/bitblast.hpp"

#include <utility>

namespace faultloc::minilang {

namespace {

std::uint64_t key(Lit a, Lit b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a.code()) << 32) | static_cast<std::uint32_t>(b.code());
}

}  // namespace

BitBlaster::BitBlaster(int width, Lit true_lit, std::function<Lit()> fresh,
                       std::vector<Clause>* sink)
    : width_(width), true_(true_lit), fresh_(std::move(fresh)), sink_(sink) {}

void BitBlaster::set_sink(std::vector<Clause>* sink) {
  sink_ = sink;
  and_cache_.clear();
  xor_cache_.clear();
}

void BitBlaster::add(Clause c) {
  Clause out;
  for (Lit l : c) {
    if (is_true(l)) return;
    if (!is_false(l)) out.push_back(l);
  }
  if (out.empty()) out.push_back(f());
  sink_->push_back(std::move(out));
}

Lit BitBlaster::and2(Lit a, Lit b) {
  if (is_false(a) || is_false(b) || a == ~b) return f();
  if (is_true(a) || a == b) return b;
  if (is_true(b)) return a;
  auto [it, fresh] = and_cache_.try_emplace(key(a, b));
  if (!fresh) return it->second;
  Lit y = fresh_();
  it->second = y;
  sink_->push_back({~y, a});
  sink_->push_back({~y, b});
  sink_->push_back({y, ~a, ~b});
  return y;
}

Lit BitBlaster::xor2(Lit a, Lit b) {
  if (is_false(a)) return b;
  if (is_false(b)) return a;
  if (is_true(a)) return ~b;
  if (is_true(b)) return ~a;
  if (a == b) return f();
  if (a == ~b) return t();
  // Normalise polarity so x^y, ~x^y, ... share one gate.
  bool flip = a.negated() != b.negated();
  Lit pa = a.negated() ? ~a : a;
  Lit pb = b.negated() ? ~b : b;
  auto [it, fresh] = xor_cache_.try_emplace(key(pa, pb));
  if (fresh) {
    Lit y = fresh_();
    it->second = y;
    sink_->push_back({~y, pa, pb});
    sink_->push_back({~y, ~pa, ~pb});
    sink_->push_back({y, ~pa, pb});
    sink_->push_back({y, pa, ~pb});
  }
  return flip ? ~it->second : it->second;
}

Lit BitBlaster::ite(Lit c, Lit a, Lit b) {
  if (is_true(c) || a == b) return a;
  if (is_false(c)) return b;
  if (is_true(a) && is_false(b)) return c;
  if (is_false(a) && is_true(b)) return ~c;
  if (is_false(b)) return and2(c, a);
  if (is_true(a)) return or2(c, b);
  if (is_false(a)) return and2(~c, b);
  if (is_true(b)) return or2(~c, a);
  Lit y = fresh_();
  sink_->push_back({~c, ~a, y});
  sink_->push_back({~c, a, ~y});
  sink_->push_back({c, ~b, y});
  sink_->push_back({c, b, ~y});
  sink_->push_back({~a, ~b, y});
  sink_->push_back({a, b, ~y});
  return y;
}

BitVec BitBlaster::constant(std::int64_t v) const {
  BitVec out(static_cast<std::size_t>(width_));
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < width_; ++i) out[i] = (u >> i) & 1 ? t() : f();
  return out;
}

BitVec BitBlaster::fresh_vec() {
  BitVec out(static_cast<std::size_t>(width_));
  for (Lit& l : out) l = fresh_();
  return out;
}

BitVec BitBlaster::ite(Lit c, const BitVec& a, const BitVec& b) {
  if (is_true(c)) return a;
  if (is_false(c)) return b;
  BitVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ite(c, a[i], b[i]);
  return out;
}

BitVec BitBlaster::adder(const BitVec& a, const BitVec& b, Lit carry) {
  BitVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Lit x = xor2(a[i], b[i]);
    out[i] = xor2(x, carry);
    if (i + 1 < a.size()) carry = or2(and2(a[i], b[i]), and2(carry, x));
  }
  return out;
}

BitVec BitBlaster::add(const BitVec& a, const BitVec& b) { return adder(a, b, f()); }

BitVec BitBlaster::sub(const BitVec& a, const BitVec& b) {
  BitVec nb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) nb[i] = ~b[i];
  return adder(a, nb, t());
}

BitVec BitBlaster::neg(const BitVec& a) { return sub(constant(0), a); }

Lit BitBlaster::eq(const BitVec& a, const BitVec& b) {
  Lit r = t();
  for (std::size_t i = 0; i < a.size(); ++i) r = and2(r, ~xor2(a[i], b[i]));
  return r;
}

Lit BitBlaster::slt(const BitVec& a, const BitVec& b) {
  // Unsigned comparison with the sign bits swapped, scanning from the LSB:
  // the most significant differing bit decides.
  Lit lt = f();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    Lit ai = i + 1 == n ? ~a[i] : a[i];
    Lit bi = i + 1 == n ? ~b[i] : b[i];
    lt = ite(xor2(ai, bi), bi, lt);
  }
  return lt;
}

Lit BitBlaster::to_bool(const BitVec& a) {
  Lit r = f();
  for (Lit l : a) r = or2(r, l);
  return r;
}

BitVec BitBlaster::from_bool(Lit b) const {
  BitVec out = constant(0);
  out[0] = b;
  return out;
}

BitVec BitBlaster::eval(const Expr& e,
                        const std::function<const BitVec&(const std::string&)>& lookup) {
  switch (e.kind) {
    case Expr::Kind::kConst: return constant(e.value);
    case Expr::Kind::kVar: return lookup(e.name);
    case Expr::Kind::kUnary: {
      BitVec a = eval(e.args[0], lookup);
      return e.uop == UnOp::kNeg ? neg(a) : from_bool(~to_bool(a));
    }
    case Expr::Kind::kBinary: break;
  }
  BitVec a = eval(e.args[0], lookup);
  BitVec b = eval(e.args[1], lookup);
  switch (e.bop) {
    case BinOp::kAdd: return add(a, b);
    case BinOp::kSub: return sub(a, b);
    case BinOp::kLt: return from_bool(slt(a, b));
    case BinOp::kLe: return from_bool(~slt(b, a));
    case BinOp::kGt: return from_bool(slt(b, a));
    case BinOp::kGe: return from_bool(~slt(a, b));
    case BinOp::kEq: return from_bool(eq(a, b));
    case BinOp::kNe: return from_bool(~eq(a, b));
    case BinOp::kAnd: return from_bool(and2(to_bool(a), to_bool(b)));
    case BinOp::kOr: return from_bool(or2(to_bool(a), to_bool(b)));
  }
  return a;
}

std::int64_t BitBlaster::value(const BitVec& v, const std::vector<bool>& model) {
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].eval(model)) u |= std::uint64_t{1} << i;
  if (!v.empty() && v.size() < 64 && ((u >> (v.size() - 1)) & 1))
    u |= ~((std::uint64_t{1} << v.size()) - 1);
  return static_cast<std::int64_t>(u);
}

}  // namespace faultloc::minilang
