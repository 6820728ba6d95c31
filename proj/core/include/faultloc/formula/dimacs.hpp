// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "faultloc/formula/types.hpp"

namespace faultloc::formula {

/// Parses DIMACS CNF (`p cnf V C` header, `c` comments, 0-terminated
/// clauses that may span lines).
CnfFormula parse_dimacs_cnf(std::string_view text);

/// Renders `p cnf V C` followed by one clause per line.
std::string write_dimacs_cnf(const CnfFormula& f);

/// Parses WCNF. Accepts the current format (`h` prefix for hard clauses,
/// an integer weight prefix for soft ones, no header) and the legacy
/// `p wcnf V C top` format where weight >= top marks a hard clause.
/// Without a header, num_vars is the largest variable mentioned.
WcnfFormula parse_wcnf(std::string_view text);

/// Renders the current WCNF format: hard clauses first, then soft clauses,
/// each in insertion order. parse_wcnf(write_wcnf(w)) reproduces w when
/// every variable of w occurs in some clause.
std::string write_wcnf(const WcnfFormula& w);

}  // namespace faultloc::formula
