#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace er2rel {

// ---------------------------------------------------------------------------
// Cardinalities and structural constraints
// ---------------------------------------------------------------------------

/// A participation bound: a non-negative integer or the unbounded marker "N".
class Cardinality {
 public:
  static Cardinality finite(int k) {
    if (k < 0) {
      throw std::invalid_argument("finite cardinality must be non-negative");
    }
    return Cardinality(k);
  }

  static Cardinality unbounded() { return Cardinality(std::nullopt); }

  bool is_finite() const { return value_.has_value(); }
  bool is_unbounded() const { return !value_.has_value(); }

  /// Finite value; only valid when is_finite().
  int value() const {
    if (!value_) {
      throw std::logic_error("unbounded cardinality has no finite value");
    }
    return *value_;
  }

  /// True for Finite(k >= 2) and for Unbounded.
  bool exceeds_one() const { return !value_ || *value_ > 1; }

  /// "3" for Finite(3), "N" for Unbounded.
  std::string to_string() const { return value_ ? std::to_string(*value_) : "N"; }

  // Total order in which every finite value sorts below Unbounded.
  bool operator<(const Cardinality& other) const {
    if (!value_) return false;
    if (!other.value_) return true;
    return *value_ < *other.value_;
  }
  bool operator<=(const Cardinality& other) const { return !(other < *this); }
  bool operator==(const Cardinality&) const = default;

 private:
  explicit Cardinality(std::optional<int> v) : value_(v) {}
  std::optional<int> value_;
};

/// The (min, max) pair attached to one side of a relationship type.
struct StructuralConstraint {
  Cardinality min = Cardinality::finite(0);
  Cardinality max = Cardinality::finite(1);
  bool operator==(const StructuralConstraint&) const = default;
};

// ---------------------------------------------------------------------------
// ER model
// ---------------------------------------------------------------------------

struct EntityType {
  std::string name;
  std::string key_attribute;
  std::vector<std::string> attributes;  // non-key simple attributes, declaration order
  bool operator==(const EntityType&) const = default;
};

struct RelationshipType {
  std::string name;
  std::string left_entity;
  std::string right_entity;
  StructuralConstraint left_constraint;
  StructuralConstraint right_constraint;
  bool operator==(const RelationshipType&) const = default;
};

struct ErModel {
  std::vector<EntityType> entities;
  std::vector<RelationshipType> relationships;

  const EntityType* find_entity(std::string_view name) const;
  const RelationshipType* find_relationship(std::string_view name) const;
  bool operator==(const ErModel&) const = default;
};

// ---------------------------------------------------------------------------
// Relational schema
// ---------------------------------------------------------------------------

enum class ColumnRole { Key, Plain, ForeignKey };

std::string_view column_role_key(ColumnRole role);  // "key" | "plain" | "foreign_key"

struct Column {
  std::string name;
  ColumnRole role = ColumnRole::Plain;
  bool operator==(const Column&) const = default;
};

struct ForeignKey {
  std::string column;
  std::string target_relation;
  std::string target_column;
  bool nullable = true;
  bool operator==(const ForeignKey&) const = default;
};

struct RelationSchema {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::string> primary_key;  // column names; kept in column order
  std::vector<ForeignKey> foreign_keys;

  const Column* find_column(std::string_view column) const;
  const ForeignKey* foreign_key_for(std::string_view column) const;
  bool in_primary_key(std::string_view column) const;
  bool operator==(const RelationSchema&) const = default;
};

enum class EncodingKind { FkInRelation, JunctionRelation };

std::string_view encoding_kind_key(EncodingKind kind);  // "fk_in_relation" | "junction_relation"

struct RelationshipEncoding {
  std::string relationship;
  EncodingKind kind = EncodingKind::FkInRelation;
  std::string relation;  // FK holder, or the junction relation
  bool operator==(const RelationshipEncoding&) const = default;
};

struct RelationalSchema {
  std::vector<RelationSchema> relations;
  std::vector<RelationshipEncoding> relationship_encodings;

  const RelationSchema* find_relation(std::string_view name) const;
  const RelationshipEncoding* encoding_for(std::string_view relationship) const;
  bool operator==(const RelationalSchema&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Stable diagnostic codes reported by validate_model / schema_violations.
namespace codes {
inline constexpr std::string_view kEmptyName = "empty-name";
inline constexpr std::string_view kDuplicateEntity = "duplicate-entity";
inline constexpr std::string_view kDuplicateRelationship = "duplicate-relationship";
inline constexpr std::string_view kNameClash = "entity-relationship-name-clash";
inline constexpr std::string_view kKeyInAttributes = "key-in-attributes";
inline constexpr std::string_view kDuplicateAttribute = "duplicate-attribute";
inline constexpr std::string_view kUnknownEntity = "unknown-entity";
inline constexpr std::string_view kSelfRelationship = "self-relationship";
inline constexpr std::string_view kMinExceedsMax = "min-exceeds-max";
inline constexpr std::string_view kMaxBelowOne = "max-below-one";
inline constexpr std::string_view kMinUnbounded = "min-unbounded";
inline constexpr std::string_view kSyntaxError = "syntax-error";
// schema-level
inline constexpr std::string_view kMissingPkColumn = "missing-pk-column";
inline constexpr std::string_view kDanglingForeignKey = "dangling-foreign-key";
inline constexpr std::string_view kForeignKeyRoleMismatch = "foreign-key-role-mismatch";
inline constexpr std::string_view kNullablePkColumn = "nullable-pk-column";
inline constexpr std::string_view kMissingEncoding = "missing-encoding";
}  // namespace codes

struct Violation {
  std::string code;
  std::string element;  // offending entity / relationship / relation name
  std::string detail;   // attribute name or side, when applicable
  std::string message;
  bool operator==(const Violation&) const = default;
};

/// Checks every ErModel invariant. Empty result means the model is valid.
std::vector<Violation> validate_model(const ErModel& model);

/// Checks RelationSchema / RelationalSchema invariants (used by tests and
/// as a transform postcondition).
std::vector<Violation> schema_violations(const RelationalSchema& schema);

bool has_violation(const std::vector<Violation>& violations, std::string_view code);

// ---------------------------------------------------------------------------
// Relationship classification
// ---------------------------------------------------------------------------

enum class Side { Left, Right };

Side opposite(Side side);
std::string_view side_name(Side side);  // "left" | "right"

enum class RelationshipClass { OneToOne, OneToMany, ManyToMany };

struct Classification {
  RelationshipClass kind = RelationshipClass::OneToOne;
  Side one_side = Side::Left;  // meaningful only for OneToMany
  bool operator==(const Classification& other) const {
    if (kind != other.kind) return false;
    return kind != RelationshipClass::OneToMany || one_side == other.one_side;
  }
};

/// OneToOne iff both max values are 1; OneToMany iff exactly one is;
/// ManyToMany iff both exceed 1. Total over valid relationships.
Classification classify_relationship(const RelationshipType& rel);

std::string classification_text(const Classification& c);  // "one-to-one", ...
std::string_view classification_key(RelationshipClass kind);

// ---------------------------------------------------------------------------
// Constraint slots
// ---------------------------------------------------------------------------

enum class ConstraintSlot { LeftMin, LeftMax, RightMin, RightMax };

inline constexpr std::array<ConstraintSlot, 4> kAllSlots = {
    ConstraintSlot::LeftMin, ConstraintSlot::LeftMax, ConstraintSlot::RightMin,
    ConstraintSlot::RightMax};

std::string_view slot_name(ConstraintSlot slot);  // "left min", ...
std::string_view slot_key(ConstraintSlot slot);   // "left_min", ...
Side slot_side(ConstraintSlot slot);
bool slot_is_max(ConstraintSlot slot);

struct SlotValue {
  ConstraintSlot slot = ConstraintSlot::LeftMin;
  Cardinality value = Cardinality::finite(0);
  bool operator==(const SlotValue&) const = default;
};

/// The four structural constraint values of a relationship, always in the
/// order LeftMin, LeftMax, RightMin, RightMax.
std::array<SlotValue, 4> constraint_slots(const RelationshipType& rel);

}  // namespace er2rel
