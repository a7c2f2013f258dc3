#pragma once

#include <string>
#include <string_view>

#include "lolasched/ast.hpp"

namespace lola {

/// Parses annotated specification text. Checks syntax, duplicate names and
/// that every referenced stream is declared; typing and pacing are separate
/// passes (see analysis.hpp).
Specification parse_spec(std::string_view text);

/// Reads and parses a `.lola` file; errors are rethrown with a `file:` prefix.
Specification parse_spec_file(const std::string& path);

/// Renders a specification in the same surface syntax `parse_spec` accepts.
std::string print_spec(const Specification& spec);
std::string print_expr(const ExprPtr& e);
std::string print_pacing(const PacingType& p);
std::string print_output(const OutputDecl& out);

}  // namespace lola
