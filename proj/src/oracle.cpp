#include "er2rel/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "er2rel/transform.hpp"

namespace er2rel {

// ---------------------------------------------------------------------------
// Family enumeration
// ---------------------------------------------------------------------------

FamilySpec FamilySpec::defaults() {
  FamilySpec spec;
  spec.left = EntityType{"E", "Ke", {"A1", "A2"}};
  spec.right = EntityType{"S", "Ks", {"B1"}};
  return spec;
}

FamilySpec FamilySpec::for_pair(const EntityType& left, const EntityType& right,
                                std::string relationship_name) {
  FamilySpec spec;
  spec.left = left;
  spec.right = right;
  spec.relationship_name = std::move(relationship_name);
  return spec;
}

namespace {

std::string member_label(const RelationshipType& rel) {
  return "(" + rel.left_constraint.min.to_string() + "," + rel.left_constraint.max.to_string() +
         "):(" + rel.right_constraint.min.to_string() + "," +
         rel.right_constraint.max.to_string() + ")";
}

}  // namespace

std::vector<FamilyMember> enumerate_family(const FamilySpec& spec) {
  std::vector<Cardinality> many;
  for (const auto& c : spec.max_samples) {
    if (c.exceeds_one() && std::find(many.begin(), many.end(), c) == many.end()) {
      many.push_back(c);
    }
  }
  if (many.empty()) {
    throw std::invalid_argument("family needs at least one max sample above 1");
  }

  const Cardinality zero = Cardinality::finite(0);
  const Cardinality one = Cardinality::finite(1);
  const Cardinality min_many = Cardinality::finite(spec.min_sample);

  // Min rows: (one-side min, many-side min). The 1:1 grid stops at 1; the
  // 1:N grid also exercises a many-side min above 1.
  const std::vector<std::pair<Cardinality, Cardinality>> one_one_rows = {
      {one, zero}, {zero, one}, {zero, zero}, {one, one}};
  const std::vector<std::pair<Cardinality, Cardinality>> one_many_rows = {
      {one, zero}, {zero, one}, {zero, zero}, {one, one}, {one, min_many}, {zero, min_many}};

  std::vector<FamilyMember> family;
  std::set<std::string> seen;
  const auto add = [&](const StructuralConstraint& lc, const StructuralConstraint& rc) {
    RelationshipType rel{spec.relationship_name, spec.left.name, spec.right.name, lc, rc};
    FamilyMember member;
    member.model.entities = {spec.left, spec.right};
    member.model.relationships = {rel};
    if (!validate_model(member.model).empty()) return;  // skip e.g. min > max combinations
    member.label = member_label(rel);
    if (!seen.insert(member.label).second) return;
    member.kind = classify_relationship(rel).kind;
    family.push_back(std::move(member));
  };

  for (const auto& [m1, m2] : one_one_rows) {
    add(StructuralConstraint{m1, one}, StructuralConstraint{m2, one});
  }
  for (const auto& [m_one, m_many] : one_many_rows) {  // left is the one side
    for (const auto& x : many) {
      add(StructuralConstraint{m_one, one}, StructuralConstraint{m_many, x});
    }
  }
  for (const auto& [m_one, m_many] : one_many_rows) {  // right is the one side
    for (const auto& x : many) {
      add(StructuralConstraint{m_many, x}, StructuralConstraint{m_one, one});
    }
  }
  for (const auto& m1 : {zero, one}) {
    for (const auto& m2 : {zero, one}) {
      for (const auto& x1 : many) {
        for (const auto& x2 : many) {
          add(StructuralConstraint{m1, x1}, StructuralConstraint{m2, x2});
        }
      }
    }
  }
  return family;
}

// ---------------------------------------------------------------------------
// Inverse-image oracle
// ---------------------------------------------------------------------------

InverseImageResult inverse_image_verdicts(const FamilySpec& spec) {
  InverseImageResult result;
  result.family = enumerate_family(spec);
  result.member_class.assign(result.family.size(), -1);

  for (size_t i = 0; i < result.family.size(); ++i) {
    RelationalSchema schema = transform(result.family[i].model);
    int found = -1;
    for (size_t j = 0; j < result.classes.size(); ++j) {
      if (schema_equal(result.classes[j].schema, schema)) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(result.classes.size());
      result.classes.push_back(SchemaClass{std::move(schema), {}, {}});
    }
    result.classes[found].members.push_back(static_cast<int>(i));
    result.member_class[i] = found;
  }

  for (auto& cls : result.classes) {
    for (size_t k = 0; k < kAllSlots.size(); ++k) {
      std::vector<Cardinality> values;
      for (int m : cls.members) {
        values.push_back(constraint_slots(result.family[m].relationship())[k].value);
      }
      OracleVerdict v;
      v.slot = kAllSlots[k];
      const bool all_equal =
          std::all_of(values.begin(), values.end(), [&](const Cardinality& c) { return c == values.front(); });
      if (all_equal) {
        v.kind = VerdictKind::Exact;
        v.bound = values.front();
        v.witness = "all " + std::to_string(cls.members.size()) +
                    " members sharing this schema declare " + values.front().to_string();
      } else {
        size_t other = 0;
        while (values[other] == values.front()) ++other;
        const std::string& label_a = result.family[cls.members.front()].label;
        const std::string& label_b = result.family[cls.members[other]].label;
        const bool all_many = std::all_of(values.begin(), values.end(),
                                          [](const Cardinality& c) { return c.exceeds_one(); });
        if (all_many) {
          v.kind = VerdictKind::LowerBoundOnly;
          v.bound = Cardinality::finite(1);
          v.witness = "members " + label_a + " and " + label_b +
                      " share the schema but declare " + values.front().to_string() + " and " +
                      values[other].to_string() + "; every preimage exceeds 1";
        } else {
          v.kind = VerdictKind::NotRepresented;
          v.witness = "members " + label_a + " and " + label_b +
                      " share the schema but declare " + values.front().to_string() + " and " +
                      values[other].to_string();
        }
      }
      cls.verdicts[k] = std::move(v);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Instance enumeration
// ---------------------------------------------------------------------------

const RelationInstance* Instance::find(std::string_view relation) const {
  for (const auto& r : relations) {
    if (r.relation == relation) return &r;
  }
  return nullptr;
}

namespace {

struct RelationShape {
  bool junction = false;
  std::vector<size_t> used_columns;  // indices into RelationSchema::columns
  std::vector<int> fk_target;        // per used column: target relation index, -1 = none
};

bool entity_like(const RelationSchema& rel) {
  if (rel.primary_key.size() != 1) return false;
  const Column* key = rel.find_column(rel.primary_key.front());
  return key != nullptr && key->role == ColumnRole::Key;
}

std::vector<RelationShape> analyze_shapes(const RelationalSchema& schema) {
  const auto relation_index = [&](std::string_view name) {
    for (size_t i = 0; i < schema.relations.size(); ++i) {
      if (schema.relations[i].name == name) return static_cast<int>(i);
    }
    return -1;
  };

  std::vector<RelationShape> shapes(schema.relations.size());
  for (size_t i = 0; i < schema.relations.size(); ++i) {
    const RelationSchema& rel = schema.relations[i];
    RelationShape& shape = shapes[i];
    const bool all_fk = !rel.columns.empty() &&
                        std::all_of(rel.columns.begin(), rel.columns.end(), [](const Column& c) {
                          return c.role == ColumnRole::ForeignKey;
                        });
    if (all_fk && rel.primary_key.size() == rel.columns.size()) {
      shape.junction = true;
      for (size_t j = 0; j < rel.columns.size(); ++j) {
        const ForeignKey* fk = rel.foreign_key_for(rel.columns[j].name);
        const int target = fk == nullptr ? -1 : relation_index(fk->target_relation);
        if (target < 0 || !rel.in_primary_key(rel.columns[j].name)) {
          throw std::invalid_argument("unsupported relation shape: " + rel.name);
        }
        shape.used_columns.push_back(j);
        shape.fk_target.push_back(target);
      }
      continue;
    }
    if (!entity_like(rel)) {
      throw std::invalid_argument("unsupported relation shape: " + rel.name);
    }
    // The key column leads the used-column order regardless of its position.
    for (size_t j = 0; j < rel.columns.size(); ++j) {
      const Column& col = rel.columns[j];
      if (col.role == ColumnRole::Key && col.name != rel.primary_key.front()) {
        throw std::invalid_argument("unsupported relation shape: " + rel.name);
      }
      if (col.name == rel.primary_key.front()) {
        shape.used_columns.push_back(j);
        shape.fk_target.push_back(-1);
      }
    }
    for (size_t j = 0; j < rel.columns.size(); ++j) {
      const Column& col = rel.columns[j];
      if (col.role != ColumnRole::ForeignKey) continue;
      const ForeignKey* fk = rel.foreign_key_for(col.name);
      const int target = fk == nullptr ? -1 : relation_index(fk->target_relation);
      if (target < 0) {
        throw std::invalid_argument("unsupported relation shape: " + rel.name);
      }
      shape.used_columns.push_back(j);
      shape.fk_target.push_back(target);
    }
  }

  // FK targets must be entity-like once all shapes are known.
  for (size_t i = 0; i < shapes.size(); ++i) {
    for (int target : shapes[i].fk_target) {
      if (target >= 0 && shapes[target].junction) {
        throw std::invalid_argument("unsupported relation shape: " +
                                    schema.relations[i].name + " references a junction");
      }
    }
  }
  return shapes;
}

std::string key_symbol(const std::string& relation, int index) {
  std::string prefix;
  for (char c : relation) prefix += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return prefix + std::to_string(index + 1);
}

class InstanceEnumerator {
 public:
  InstanceEnumerator(const RelationalSchema& schema, int pool)
      : schema_(schema), pool_(pool), shapes_(analyze_shapes(schema)) {
    pools_.resize(schema.relations.size());
    for (size_t i = 0; i < schema.relations.size(); ++i) {
      if (shapes_[i].junction) continue;
      for (int k = 0; k < pool_; ++k) {
        pools_[i].push_back(key_symbol(schema.relations[i].name, k));
      }
    }
    masks_.assign(schema.relations.size(), 0);
  }

  std::vector<Instance> run() {
    choose_masks(0);
    return std::move(out_);
  }

 private:
  struct FkSlot {
    size_t relation;
    size_t row;
    size_t column;  // index into the instance row
    int target;
  };

  void choose_masks(size_t idx) {
    if (idx == schema_.relations.size()) {
      start_rows();
      return;
    }
    if (shapes_[idx].junction) {
      choose_masks(idx + 1);
      return;
    }
    for (int mask = 0; mask < (1 << pool_); ++mask) {
      masks_[idx] = mask;
      choose_masks(idx + 1);
    }
  }

  void start_rows() {
    current_.relations.assign(schema_.relations.size(), RelationInstance{});
    fk_slots_.clear();
    for (size_t i = 0; i < schema_.relations.size(); ++i) {
      const RelationSchema& rel = schema_.relations[i];
      RelationInstance& ri = current_.relations[i];
      ri.relation = rel.name;
      ri.columns.clear();
      ri.rows.clear();
      for (size_t j : shapes_[i].used_columns) ri.columns.push_back(rel.columns[j].name);
      if (shapes_[i].junction) continue;
      for (int b = 0; b < pool_; ++b) {
        if ((masks_[i] & (1 << b)) == 0) continue;
        InstanceRow row;
        row.values.assign(ri.columns.size(), std::nullopt);
        row.values[0] = pools_[i][b];  // the key column is always first in used order
        ri.rows.push_back(std::move(row));
      }
      for (size_t r = 0; r < ri.rows.size(); ++r) {
        for (size_t c = 1; c < shapes_[i].used_columns.size(); ++c) {
          fk_slots_.push_back(FkSlot{i, r, c, shapes_[i].fk_target[c]});
        }
      }
    }
    fill_fk(0);
  }

  void fill_fk(size_t s) {
    if (s == fk_slots_.size()) {
      fill_junctions(0);
      return;
    }
    const FkSlot& slot = fk_slots_[s];
    auto& cell = current_.relations[slot.relation].rows[slot.row].values[slot.column];
    cell = std::nullopt;
    fill_fk(s + 1);
    for (int b = 0; b < pool_; ++b) {
      if ((masks_[slot.target] & (1 << b)) == 0) continue;
      cell = pools_[slot.target][b];
      fill_fk(s + 1);
    }
    cell = std::nullopt;
  }

  void fill_junctions(size_t idx) {
    if (idx == schema_.relations.size()) {
      emit();
      return;
    }
    if (!shapes_[idx].junction) {
      fill_junctions(idx + 1);
      return;
    }
    // Candidate rows: the product of present keys, first column slowest.
    std::vector<InstanceRow> candidates;
    InstanceRow scratch;
    scratch.values.assign(shapes_[idx].used_columns.size(), std::nullopt);
    build_tuples(idx, 0, scratch, candidates);
    if (candidates.size() > 20) {
      throw CapExceededError("junction candidate row set too large");
    }
    RelationInstance& ri = current_.relations[idx];
    for (unsigned long mask = 0; mask < (1UL << candidates.size()); ++mask) {
      ri.rows.clear();
      for (size_t t = 0; t < candidates.size(); ++t) {
        if (mask & (1UL << t)) ri.rows.push_back(candidates[t]);
      }
      fill_junctions(idx + 1);
    }
    ri.rows.clear();
  }

  void build_tuples(size_t idx, size_t column, InstanceRow& scratch,
                    std::vector<InstanceRow>& out) const {
    if (column == shapes_[idx].used_columns.size()) {
      out.push_back(scratch);
      return;
    }
    const int target = shapes_[idx].fk_target[column];
    for (int b = 0; b < pool_; ++b) {
      if ((masks_[target] & (1 << b)) == 0) continue;
      scratch.values[column] = pools_[target][b];
      build_tuples(idx, column + 1, scratch, out);
    }
  }

  void emit() {
    if (static_cast<long>(out_.size()) >= kMaxInstances) {
      throw CapExceededError("instance enumeration exceeds " + std::to_string(kMaxInstances) +
                             " instances");
    }
    out_.push_back(current_);
  }

  const RelationalSchema& schema_;
  int pool_;
  std::vector<RelationShape> shapes_;
  std::vector<std::vector<std::string>> pools_;
  std::vector<int> masks_;
  std::vector<FkSlot> fk_slots_;
  Instance current_;
  std::vector<Instance> out_;
};

}  // namespace

std::vector<Instance> enumerate_instances(const RelationalSchema& schema, int pool_size) {
  if (pool_size < 1) {
    throw std::invalid_argument("pool size must be at least 1");
  }
  if (pool_size > kMaxPoolSize) {
    throw CapExceededError("pool size " + std::to_string(pool_size) + " exceeds the cap of " +
                           std::to_string(kMaxPoolSize));
  }
  if (schema.relations.size() > static_cast<size_t>(kMaxOracleRelations)) {
    throw CapExceededError("instance oracle supports at most " +
                           std::to_string(kMaxOracleRelations) + " relations");
  }
  return InstanceEnumerator(schema, pool_size).run();
}

bool is_populated(const RelationalSchema& schema, const Instance& instance) {
  for (const auto& ri : instance.relations) {
    const RelationSchema* rel = schema.find_relation(ri.relation);
    if (rel != nullptr && entity_like(*rel) && ri.rows.empty()) return false;
  }
  return true;
}

std::string format_instance(const RelationalSchema& schema, const Instance& instance) {
  std::ostringstream out;
  bool first_relation = true;
  for (const auto& ri : instance.relations) {
    if (!first_relation) out << " | ";
    first_relation = false;
    out << ri.relation << ": ";
    if (ri.rows.empty()) {
      out << "-";
      continue;
    }
    const RelationSchema* rel = schema.find_relation(ri.relation);
    bool first_row = true;
    for (const auto& row : ri.rows) {
      if (!first_row) out << ", ";
      first_row = false;
      out << "(";
      for (size_t j = 0; j < ri.columns.size(); ++j) {
        if (j > 0) out << ", ";
        const std::string value = row.values[j] ? *row.values[j] : "null";
        if (rel != nullptr && rel->in_primary_key(ri.columns[j])) {
          out << value;
        } else {
          out << ri.columns[j] << "=" << value;
        }
      }
      out << ")";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Instance-level oracle
// ---------------------------------------------------------------------------

RelationshipBinding resolve_binding(const ErModel& model, const RelationalSchema& schema,
                                    std::string_view relationship) {
  const RelationshipType* rel = model.find_relationship(relationship);
  if (rel == nullptr) {
    throw std::invalid_argument("unknown relationship '" + std::string(relationship) + "'");
  }
  const RelationshipEncoding* enc = schema.encoding_for(relationship);
  if (enc == nullptr) {
    throw std::invalid_argument("schema has no encoding for relationship '" +
                                std::string(relationship) + "'");
  }

  RelationshipBinding binding;
  binding.relationship = rel->name;
  binding.kind = enc->kind;
  binding.side_relation[0] = rel->left_entity;
  binding.side_relation[1] = rel->right_entity;
  for (int s = 0; s < 2; ++s) {
    const RelationSchema* side = schema.find_relation(binding.side_relation[s]);
    if (side == nullptr || side->primary_key.size() != 1) {
      throw std::invalid_argument("relationship '" + rel->name +
                                  "' side does not map to an entity relation");
    }
    binding.side_key_column[s] = side->primary_key.front();
  }

  if (enc->kind == EncodingKind::FkInRelation) {
    binding.holder_relation = enc->relation;
    binding.holder = enc->relation == rel->left_entity ? Side::Left : Side::Right;
    const std::string& target =
        binding.holder == Side::Left ? rel->right_entity : rel->left_entity;
    const RelationSchema* holder = schema.find_relation(enc->relation);
    const ForeignKey* found = nullptr;
    for (const auto& fk : holder->foreign_keys) {
      if (fk.target_relation == target) {
        found = &fk;
        break;
      }
    }
    if (found == nullptr) {
      throw std::invalid_argument("no foreign key from '" + enc->relation + "' to '" + target +
                                  "' encodes relationship '" + rel->name + "'");
    }
    binding.fk_column = found->column;
  } else {
    binding.junction_relation = enc->relation;
    const RelationSchema* junction = schema.find_relation(enc->relation);
    for (int s = 0; s < 2; ++s) {
      const ForeignKey* found = nullptr;
      for (const auto& fk : junction->foreign_keys) {
        if (fk.target_relation == binding.side_relation[s]) {
          found = &fk;
          break;
        }
      }
      if (found == nullptr) {
        throw std::invalid_argument("junction '" + enc->relation + "' has no column for side '" +
                                    binding.side_relation[s] + "'");
      }
      binding.junction_column[s] = found->column;
    }
  }
  return binding;
}

namespace {

int column_position(const RelationInstance& ri, const std::string& column) {
  for (size_t j = 0; j < ri.columns.size(); ++j) {
    if (ri.columns[j] == column) return static_cast<int>(j);
  }
  return -1;
}

int count_references(const RelationInstance* rel, int column, const std::string& key) {
  if (rel == nullptr || column < 0) return 0;
  int count = 0;
  for (const auto& row : rel->rows) {
    if (row.values[column] && *row.values[column] == key) ++count;
  }
  return count;
}

}  // namespace

ParticipationProfile participation_profile(const Instance& instance,
                                           const RelationshipBinding& binding, Side side) {
  const int s = side == Side::Left ? 0 : 1;
  const RelationInstance* side_rel = instance.find(binding.side_relation[s]);
  if (side_rel == nullptr || side_rel->rows.empty()) {
    throw UndefinedProfileError("participation of '" + binding.side_relation[s] +
                                "' is undefined over an empty relation");
  }
  const int key_col = column_position(*side_rel, binding.side_key_column[s]);
  if (key_col < 0) {
    throw std::invalid_argument("instance of '" + binding.side_relation[s] +
                                "' lacks its key column");
  }

  ParticipationProfile profile;
  for (const auto& row : side_rel->rows) {
    const std::string& key = *row.values[key_col];
    int count = 0;
    if (binding.kind == EncodingKind::FkInRelation) {
      if (binding.holder == side) {
        const int fk_col = column_position(*side_rel, binding.fk_column);
        count = fk_col >= 0 && row.values[fk_col].has_value() ? 1 : 0;
      } else {
        const RelationInstance* holder = instance.find(binding.holder_relation);
        const int fk_col = holder == nullptr ? -1 : column_position(*holder, binding.fk_column);
        count = count_references(holder, fk_col, key);
      }
    } else {
      const RelationInstance* junction = instance.find(binding.junction_relation);
      const int jc = junction == nullptr ? -1 : column_position(*junction, binding.junction_column[s]);
      count = count_references(junction, jc, key);
    }
    profile.counts.push_back(count);
  }
  profile.min = *std::min_element(profile.counts.begin(), profile.counts.end());
  profile.max = *std::max_element(profile.counts.begin(), profile.counts.end());
  return profile;
}

InstanceOracleResult instance_verdicts(const RelationalSchema& schema,
                                       const RelationshipBinding& binding, int pool_size) {
  const std::vector<Instance> instances = enumerate_instances(schema, pool_size);

  struct SideStats {
    std::optional<size_t> max_ge2, max_eq1, min_zero, min_pos;
    int best_max = 0;
    size_t best_max_at = 0;
    std::set<int> mins;
  };
  SideStats stats[2];

  InstanceOracleResult result;
  result.total_instances = static_cast<int>(instances.size());
  for (size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = instances[idx];
    if (!is_populated(schema, inst)) continue;
    ++result.populated_instances;
    for (int s = 0; s < 2; ++s) {
      const ParticipationProfile profile =
          participation_profile(inst, binding, s == 0 ? Side::Left : Side::Right);
      SideStats& st = stats[s];
      if (profile.max >= 2 && !st.max_ge2) st.max_ge2 = idx;
      if (profile.max == 1 && !st.max_eq1) st.max_eq1 = idx;
      if (profile.min == 0 && !st.min_zero) st.min_zero = idx;
      if (profile.min >= 1 && !st.min_pos) st.min_pos = idx;
      if (profile.max > st.best_max) {
        st.best_max = profile.max;
        st.best_max_at = idx;
      }
      st.mins.insert(profile.min);
    }
  }

  for (size_t k = 0; k < kAllSlots.size(); ++k) {
    const ConstraintSlot slot = kAllSlots[k];
    const SideStats& st = stats[slot_side(slot) == Side::Left ? 0 : 1];
    OracleVerdict v;
    v.slot = slot;
    if (result.populated_instances == 0) {
      v.kind = VerdictKind::NotRepresented;
      v.witness = "no populated instance exists";
    } else if (slot_is_max(slot)) {
      if (st.max_ge2) {
        v.kind = VerdictKind::LowerBoundOnly;
        v.bound = Cardinality::finite(1);
        v.witness = "achieves " + std::to_string(st.best_max) + ": " +
                    format_instance(schema, instances[st.best_max_at]);
      } else if (st.max_eq1) {
        v.kind = VerdictKind::Exact;
        v.bound = Cardinality::finite(1);
        v.witness = "never exceeds 1 across " + std::to_string(result.populated_instances) +
                    " populated instances, e.g. " +
                    format_instance(schema, instances[*st.max_eq1]);
      } else {
        v.kind = VerdictKind::NotRepresented;
        v.witness = "participation is never achieved";
      }
    } else {
      if (st.min_zero && st.min_pos) {
        v.kind = VerdictKind::NotRepresented;
        v.witness = "achieves 0: " + format_instance(schema, instances[*st.min_zero]) +
                    " / achieves >=1: " + format_instance(schema, instances[*st.min_pos]);
      } else if (st.min_pos) {
        if (st.mins.size() == 1) {
          v.kind = VerdictKind::Exact;
          v.bound = Cardinality::finite(*st.mins.begin());
          v.witness = "every populated instance achieves exactly " +
                      std::to_string(*st.mins.begin());
        } else {
          v.kind = VerdictKind::LowerBoundOnly;
          v.bound = Cardinality::finite(*st.mins.begin());
          v.witness = "participation floor varies but never drops below " +
                      std::to_string(*st.mins.begin());
        }
      } else {
        v.kind = VerdictKind::NotRepresented;
        v.witness = "participation floor is 0 in every populated instance";
      }
    }
    result.verdicts[k] = std::move(v);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

bool inverse_image_agrees(const SlotVerdict& analyzer, const OracleVerdict& oracle) {
  if (analyzer.kind != oracle.kind) return false;
  if (analyzer.kind == VerdictKind::NotRepresented) return true;
  return analyzer.bound == oracle.bound;
}

bool instance_agrees(const SlotVerdict& analyzer, const OracleVerdict& oracle) {
  if (analyzer.kind == VerdictKind::NotRepresented) {
    return oracle.kind != VerdictKind::Exact;
  }
  if (analyzer.kind != oracle.kind) return false;
  return analyzer.bound == oracle.bound;
}

// ---------------------------------------------------------------------------
// Whole-model verification
// ---------------------------------------------------------------------------

bool RelationshipVerification::agrees() const {
  if (!family_coherent) return false;
  return std::all_of(slots.begin(), slots.end(),
                     [](const SlotAgreement& s) { return s.ok(); });
}

bool VerifyResult::agrees() const {
  return std::all_of(relationships.begin(), relationships.end(),
                     [](const RelationshipVerification& r) { return r.agrees(); });
}

namespace {

ErModel pair_submodel(const ErModel& model, const RelationshipType& rel) {
  ErModel sub;
  sub.entities = {*model.find_entity(rel.left_entity), *model.find_entity(rel.right_entity)};
  sub.relationships = {rel};
  return sub;
}

}  // namespace

VerifyResult verify_model(const ErModel& model, const VerifyOptions& options) {
  const PreservationReport report = analyze(model);

  VerifyResult result;
  for (size_t i = 0; i < model.relationships.size(); ++i) {
    const RelationshipType& rel = model.relationships[i];
    const RelationshipReport& rr = report.relationships[i];

    RelationshipVerification v;
    v.relationship = rel.name;
    v.classification = rr.classification;
    for (size_t k = 0; k < kAllSlots.size(); ++k) v.slots[k].analyzer = rr.verdicts[k];

    const ErModel submodel = pair_submodel(model, rel);
    const RelationalSchema pair_schema = transform(submodel);

    if (options.run_inverse_image) {
      FamilySpec spec = FamilySpec::for_pair(submodel.entities[0], submodel.entities[1], rel.name);
      spec.max_samples = options.max_samples;
      const InverseImageResult inv = inverse_image_verdicts(spec);
      v.family_size = static_cast<int>(inv.family.size());
      for (const auto& cls : inv.classes) {
        v.class_sizes.push_back(static_cast<int>(cls.members.size()));
      }
      for (size_t j = 0; j < inv.classes.size(); ++j) {
        if (schema_equal(inv.classes[j].schema, pair_schema)) {
          v.input_class = static_cast<int>(j);
          break;
        }
      }
      if (v.input_class < 0) {
        v.family_coherent = false;
        v.incoherence_note = "the input schema matches no family class";
      }
      // Every member's rule verdicts must agree with its class.
      for (size_t j = 0; j < inv.classes.size() && v.family_coherent; ++j) {
        for (int m : inv.classes[j].members) {
          const PreservationReport member_report = analyze(inv.family[m].model);
          for (size_t k = 0; k < kAllSlots.size(); ++k) {
            if (!inverse_image_agrees(member_report.relationships[0].verdicts[k],
                                      inv.classes[j].verdicts[k])) {
              v.family_coherent = false;
              v.incoherence_note = "member " + inv.family[m].label + " disagrees on " +
                                   std::string(slot_name(kAllSlots[k])) + ": rule says " +
                                   std::string(verdict_kind_text(
                                       member_report.relationships[0].verdicts[k].kind)) +
                                   ", inverse image says " +
                                   std::string(verdict_kind_text(inv.classes[j].verdicts[k].kind));
              break;
            }
          }
          if (!v.family_coherent) break;
        }
      }
      if (v.input_class >= 0) {
        for (size_t k = 0; k < kAllSlots.size(); ++k) {
          v.slots[k].inverse_image = inv.classes[v.input_class].verdicts[k];
          v.slots[k].inverse_image_ok =
              inverse_image_agrees(v.slots[k].analyzer, inv.classes[v.input_class].verdicts[k]);
        }
      }
    }

    if (options.run_instances) {
      const RelationshipBinding binding = resolve_binding(submodel, pair_schema, rel.name);
      const InstanceOracleResult io = instance_verdicts(pair_schema, binding, options.pool_size);
      v.total_instances = io.total_instances;
      v.populated_instances = io.populated_instances;
      for (size_t k = 0; k < kAllSlots.size(); ++k) {
        v.slots[k].instances = io.verdicts[k];
        v.slots[k].instances_ok = instance_agrees(v.slots[k].analyzer, io.verdicts[k]);
      }
    }

    result.relationships.push_back(std::move(v));
  }
  return result;
}

}  // namespace er2rel
