#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "er2rel/model.hpp"
#include "er2rel/transform.hpp"

namespace er2rel {

enum class VerdictKind { Exact, LowerBoundOnly, NotRepresented };

std::string_view verdict_kind_key(VerdictKind kind);  // "exact" | "lower_bound_only" | ...
std::string_view verdict_kind_text(VerdictKind kind);

/// Which structural case of the transformation the verdict follows from.
/// Case1A..Case1D cover the FK encoding (both 1:1 and 1:N end up there;
/// Case2 is kept for completeness but analyze never emits it), Case3* the
/// junction encoding.
enum class Justification { Case1A, Case1B, Case1C, Case1D, Case2, Case3Max, Case3Min };

std::string_view justification_key(Justification j);

struct SlotVerdict {
  ConstraintSlot slot = ConstraintSlot::LeftMin;
  Cardinality declared = Cardinality::finite(0);  // the value in the ER model
  VerdictKind kind = VerdictKind::NotRepresented;
  /// Exact: the preserved value. LowerBoundOnly: the exclusive lower bound
  /// (always 1 here). NotRepresented: disengaged.
  std::optional<Cardinality> bound;
  Justification justification = Justification::Case1A;
  std::string explanation;
};

struct RelationshipReport {
  std::string relationship;
  Classification classification;
  std::optional<FkPlacement> placement;  // engaged for 1:1 and 1:N
  RelationshipEncoding encoding;
  std::array<SlotVerdict, 4> verdicts;  // LeftMin, LeftMax, RightMin, RightMax
};

struct PreservationReport {
  RelationalSchema schema;
  std::vector<RelationshipReport> relationships;
};

/// Rule-based preservation verdicts for every relationship of a valid model:
/// the FK holder's max is the only exactly preserved slot; with a junction
/// both maxes survive as "exceeds 1" and nothing else is represented.
PreservationReport analyze(const ErModel& model);

struct ModelSummary {
  int relationship_count = 0;
  int exact = 0;
  int lower_bound_only = 0;
  int not_represented = 0;
  bool operator==(const ModelSummary&) const = default;
};

ModelSummary summarize(const PreservationReport& report);

}  // namespace er2rel
