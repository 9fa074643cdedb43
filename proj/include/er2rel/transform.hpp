#pragma once

#include <stdexcept>
#include <string>

#include "er2rel/model.hpp"

namespace er2rel {

/// Raised when a model that passed validation still cannot be transformed
/// (in practice: a generated foreign key column name collides with an
/// existing attribute).
class TransformError : public std::runtime_error {
 public:
  explicit TransformError(const std::string& what) : std::runtime_error(what) {}
};

enum class PlacementReason { TotalParticipation, TieBreak, MaxOneSide };

std::string_view placement_reason_text(PlacementReason reason);

/// Which side of a 1:1 or 1:N relationship receives the foreign key, and why.
struct FkPlacement {
  Side holder = Side::Left;
  PlacementReason reason = PlacementReason::MaxOneSide;
  bool operator==(const FkPlacement&) const = default;
};

/// Name of the generated FK column referencing `target`'s key.
std::string fk_column_name(const EntityType& target);

/// One relation per entity type: key attribute first (primary key), then the
/// non-key attributes in declaration order.
RelationalSchema transform_entities(const ErModel& model);

/// 1:1 placement rule: the side with min = 1 (total participation) holds the
/// FK; when both or neither side is total, the lexicographically smaller
/// entity name does.
FkPlacement place_fk_one_to_one(const RelationshipType& rel);

/// 1:N placement rule: the max = 1 side holds the FK, unconditionally.
FkPlacement place_fk_one_to_many(const RelationshipType& rel);

/// Junction relation for an M:N relationship: two FK columns, composite
/// primary key over both.
RelationSchema transform_many_to_many(const ErModel& model, const RelationshipType& rel);

/// Full classical PK/FK-only transformation. Requires a valid model.
RelationalSchema transform(const ErModel& model);

/// Structural schema equality: same relations up to relation order, with
/// column order, roles, primary keys, FK targets and nullability all equal,
/// compared after a consistent renaming of relation and column names.
bool schema_equal(const RelationalSchema& a, const RelationalSchema& b);

}  // namespace er2rel
