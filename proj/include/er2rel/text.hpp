#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "er2rel/model.hpp"

namespace er2rel {

struct SourceSpan {
  int line = 0;  // 1-based; 0 when unknown
  int column = 0;
  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  std::string code;  // reuses the codes:: identifiers
  SourceSpan span;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& diagnostic);

struct ParseResult {
  std::optional<ErModel> model;  // engaged iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

/// Parses the ER DSL. Recovers from syntax errors at ';', '}' and declaration
/// keywords, so several diagnostics can be reported in one pass; all model
/// invariants are also checked and reported with source positions.
ParseResult parse_er(std::string_view source);

/// Canonical DSL text; parse_er(render_er(m)).model == m for valid m.
std::string render_er(const ErModel& model);

enum class RdsFormat { Paper, Structured };

/// Paper: one "Name[col*, col, fk→Target.Col?]" line per relation
/// (* marks primary key membership, → the FK target, ? a nullable column).
/// Structured: a JSON document listing relations and relationship encodings.
std::string render_rds(const RelationalSchema& schema, RdsFormat format);

}  // namespace er2rel
