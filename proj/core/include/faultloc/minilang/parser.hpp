// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "faultloc/minilang/ast.hpp"

namespace faultloc::minilang {

/// Parses a program: global `int` declarations followed by `int main()`,
/// or a bare statement list treated as the body of main. See
/// docs/minilang.md for the grammar.
///
/// Shadowing declarations get fresh internal names, so every variable name
/// in the returned AST is unique. Throws ParseError with a source location
/// on syntax errors, use before declaration, redeclaration in one block,
/// and unsupported C constructs.
Program parse_program(std::string_view text);

}  // namespace faultloc::minilang
