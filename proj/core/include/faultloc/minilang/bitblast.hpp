// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "faultloc/formula/types.hpp"
#include "faultloc/minilang/ast.hpp"

namespace faultloc::minilang {

using formula::Clause;
using formula::Lit;

/// Two's-complement bit vector, least significant bit first.
using BitVec = std::vector<Lit>;

/// Gate-level encoder with constant folding and structural hashing.
/// Constants are the literals of a dedicated TRUE variable that the caller
/// must assert as a unit clause.
class BitBlaster {
 public:
  BitBlaster(int width, Lit true_lit, std::function<Lit()> fresh,
             std::vector<Clause>* sink);

  /// Redirects output and drops the gate cache (gates defined in the old
  /// sink are not visible in the new one).
  void set_sink(std::vector<Clause>* sink);

  int width() const { return width_; }
  Lit t() const { return true_; }
  Lit f() const { return ~true_; }
  bool is_true(Lit a) const { return a == true_; }
  bool is_false(Lit a) const { return a == ~true_; }

  Lit and2(Lit a, Lit b);
  Lit or2(Lit a, Lit b) { return ~and2(~a, ~b); }
  Lit xor2(Lit a, Lit b);
  Lit ite(Lit c, Lit a, Lit b);

  /// Adds a clause after dropping false literals; skipped if any literal is
  /// true. A clause that folds to nothing becomes the unit ~TRUE.
  void add(Clause c);

  BitVec constant(std::int64_t v) const;
  BitVec fresh_vec();
  BitVec ite(Lit c, const BitVec& a, const BitVec& b);
  BitVec add(const BitVec& a, const BitVec& b);
  BitVec sub(const BitVec& a, const BitVec& b);
  BitVec neg(const BitVec& a);
  Lit eq(const BitVec& a, const BitVec& b);
  Lit slt(const BitVec& a, const BitVec& b);  // signed a < b
  Lit to_bool(const BitVec& a);                // a != 0
  BitVec from_bool(Lit b) const;

  /// Encodes `e`; `lookup` supplies the current vector of each variable.
  BitVec eval(const Expr& e, const std::function<const BitVec&(const std::string&)>& lookup);

  /// Signed value of `v` under a model (slot 0 unused).
  static std::int64_t value(const BitVec& v, const std::vector<bool>& model);

 private:
  BitVec adder(const BitVec& a, const BitVec& b, Lit carry);

  int width_;
  Lit true_;
  std::function<Lit()> fresh_;
  std::vector<Clause>* sink_;
  std::unordered_map<std::uint64_t, Lit> and_cache_;
  std::unordered_map<std::uint64_t, Lit> xor_cache_;
};

}  // namespace faultloc::minilang
