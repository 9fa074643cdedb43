#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "er2rel/analysis.hpp"
#include "er2rel/model.hpp"

namespace er2rel {

/// Raised when an enumeration would exceed the configured bounds.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a participation profile is requested over an empty side.
class UndefinedProfileError : public std::runtime_error {
 public:
  explicit UndefinedProfileError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Model family for the inverse-image oracle
// ---------------------------------------------------------------------------

/// Grid of relationship types between two fixed entity templates: the four
/// 1:1 min rows, the six 1:N min rows in both orientations crossed with the
/// "many" samples, and M:N over all min/max sample pairs.
struct FamilySpec {
  EntityType left;
  EntityType right;
  std::string relationship_name = "R";
  /// Candidate "many" bounds; values <= 1 are ignored (1 always participates
  /// as the one-side bound).
  std::vector<Cardinality> max_samples = {Cardinality::finite(2), Cardinality::finite(3),
                                          Cardinality::unbounded()};
  /// Sample used for min bounds above 1 in the 1:N rows.
  int min_sample = 2;

  /// Two deliberately non-isomorphic templates (E with two extra attributes,
  /// S with one), so the FK holder stays identifiable across renamings.
  static FamilySpec defaults();
  static FamilySpec for_pair(const EntityType& left, const EntityType& right,
                             std::string relationship_name);
};

struct FamilyMember {
  ErModel model;       // the two entities plus exactly one relationship
  std::string label;   // "(m1,x1):(m2,x2)"
  RelationshipClass kind = RelationshipClass::OneToOne;

  const RelationshipType& relationship() const { return model.relationships.front(); }
};

/// Deterministic, duplicate-free, each member valid.
std::vector<FamilyMember> enumerate_family(const FamilySpec& spec);

// ---------------------------------------------------------------------------
// Oracle verdicts
// ---------------------------------------------------------------------------

struct OracleVerdict {
  ConstraintSlot slot = ConstraintSlot::LeftMin;
  VerdictKind kind = VerdictKind::NotRepresented;
  std::optional<Cardinality> bound;  // as in SlotVerdict
  std::string witness;
};

struct SchemaClass {
  RelationalSchema schema;    // representative
  std::vector<int> members;   // indices into the family
  std::array<OracleVerdict, 4> verdicts;
};

struct InverseImageResult {
  std::vector<FamilyMember> family;
  std::vector<SchemaClass> classes;
  std::vector<int> member_class;  // family index -> class index
};

/// Transforms every family member, partitions by schema_equal, and reads the
/// per-slot verdict off each class: Exact where all preimages agree,
/// LowerBoundOnly(1) where they disagree but all exceed 1, NotRepresented
/// otherwise.
InverseImageResult inverse_image_verdicts(const FamilySpec& spec);

// ---------------------------------------------------------------------------
// Instance enumeration
// ---------------------------------------------------------------------------

/// A row holds values only for key and FK columns; plain attribute columns
/// carry no constraint information and are omitted.
struct InstanceRow {
  std::vector<std::optional<std::string>> values;  // nullopt = NULL
  bool operator==(const InstanceRow&) const = default;
};

struct RelationInstance {
  std::string relation;
  std::vector<std::string> columns;  // key and FK columns, schema order
  std::vector<InstanceRow> rows;
  bool operator==(const RelationInstance&) const = default;
};

struct Instance {
  std::vector<RelationInstance> relations;
  const RelationInstance* find(std::string_view relation) const;
  bool operator==(const Instance&) const = default;
};

inline constexpr int kMaxPoolSize = 3;
inline constexpr int kMaxOracleRelations = 3;
inline constexpr long kMaxInstances = 2'000'000;

/// Every legal instance over key pools of the given size: key sets are
/// subsets of the pool, FK columns take NULL or any present target key, and
/// composite-key junction rows are subsets of the present key product.
/// Legality means PK uniqueness and referential integrity by construction.
std::vector<Instance> enumerate_instances(const RelationalSchema& schema, int pool_size);

/// True when every entity-like relation (single key-column PK) is non-empty.
bool is_populated(const RelationalSchema& schema, const Instance& instance);

/// "E: (e1, S_Ks=null), (e2, S_Ks=s1) | S: (s1), (s2)"; PK columns print
/// bare, other columns as name=value, an empty relation as "-".
std::string format_instance(const RelationalSchema& schema, const Instance& instance);

// ---------------------------------------------------------------------------
// Instance-level oracle
// ---------------------------------------------------------------------------

/// How one relationship's sides map onto schema artifacts.
struct RelationshipBinding {
  std::string relationship;
  EncodingKind kind = EncodingKind::FkInRelation;
  std::string side_relation[2];    // relation per side, 0 = left
  std::string side_key_column[2];  // that relation's key column
  Side holder = Side::Left;        // FK encoding only
  std::string holder_relation;     // FK encoding only
  std::string fk_column;           // FK encoding only
  std::string junction_relation;   // junction encoding only
  std::string junction_column[2];  // junction column referencing each side
};

RelationshipBinding resolve_binding(const ErModel& model, const RelationalSchema& schema,
                                    std::string_view relationship);

/// Participation counts of one side's present keys in one instance.
struct ParticipationProfile {
  std::vector<int> counts;  // per present key, in pool order
  int min = 0;
  int max = 0;
};

/// Throws UndefinedProfileError when the side's relation is empty.
ParticipationProfile participation_profile(const Instance& instance,
                                           const RelationshipBinding& binding, Side side);

struct InstanceOracleResult {
  int total_instances = 0;
  int populated_instances = 0;
  std::array<OracleVerdict, 4> verdicts;
};

/// Reads verdicts off the achieved participation numbers over all populated
/// instances: a max slot is Exact(1) when no instance achieves 2 and some
/// achieves 1, LowerBoundOnly(1) when repetition is achievable; a min slot is
/// NotRepresented when 0 and >= 1 are both achieved.
InstanceOracleResult instance_verdicts(const RelationalSchema& schema,
                                       const RelationshipBinding& binding, int pool_size);

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

/// Exact match of verdict kind and bound.
bool inverse_image_agrees(const SlotVerdict& analyzer, const OracleVerdict& oracle);

/// Finite pools cannot witness unboundedness, so an analyzer NotRepresented
/// is compatible with an instance-level LowerBoundOnly; everything else must
/// match exactly.
bool instance_agrees(const SlotVerdict& analyzer, const OracleVerdict& oracle);

// ---------------------------------------------------------------------------
// Whole-model verification
// ---------------------------------------------------------------------------

struct VerifyOptions {
  bool run_inverse_image = true;
  bool run_instances = true;
  std::vector<Cardinality> max_samples = {Cardinality::finite(2), Cardinality::finite(3),
                                          Cardinality::unbounded()};
  int pool_size = 2;
};

struct SlotAgreement {
  SlotVerdict analyzer;
  std::optional<OracleVerdict> inverse_image;
  std::optional<OracleVerdict> instances;
  bool inverse_image_ok = true;
  bool instances_ok = true;

  bool ok() const { return inverse_image_ok && instances_ok; }
};

struct RelationshipVerification {
  std::string relationship;
  Classification classification;
  int family_size = 0;
  std::vector<int> class_sizes;
  int input_class = -1;
  bool family_coherent = true;   // every member's rule verdicts match its class
  std::string incoherence_note;  // first mismatch, when not coherent
  int total_instances = 0;
  int populated_instances = 0;
  std::array<SlotAgreement, 4> slots;

  bool agrees() const;
};

struct VerifyResult {
  std::vector<RelationshipVerification> relationships;
  bool agrees() const;
};

/// Checks each relationship of a valid model against the requested oracles,
/// building the family over that relationship's own entity pair.
VerifyResult verify_model(const ErModel& model, const VerifyOptions& options);

}  // namespace er2rel
