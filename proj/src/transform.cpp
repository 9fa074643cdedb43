#include "er2rel/transform.hpp"

#include <algorithm>
#include <numeric>

namespace er2rel {

std::string_view placement_reason_text(PlacementReason reason) {
  switch (reason) {
    case PlacementReason::TotalParticipation: return "total participation";
    case PlacementReason::TieBreak: return "name tie-break";
    case PlacementReason::MaxOneSide: return "max-1 side";
  }
  return "max-1 side";
}

std::string fk_column_name(const EntityType& target) {
  return target.name + "_" + target.key_attribute;
}

RelationalSchema transform_entities(const ErModel& model) {
  RelationalSchema schema;
  for (const auto& entity : model.entities) {
    RelationSchema rel;
    rel.name = entity.name;
    rel.columns.push_back(Column{entity.key_attribute, ColumnRole::Key});
    for (const auto& attr : entity.attributes) {
      rel.columns.push_back(Column{attr, ColumnRole::Plain});
    }
    rel.primary_key = {entity.key_attribute};
    schema.relations.push_back(std::move(rel));
  }
  return schema;
}

FkPlacement place_fk_one_to_one(const RelationshipType& rel) {
  const bool left_total = rel.left_constraint.min == Cardinality::finite(1);
  const bool right_total = rel.right_constraint.min == Cardinality::finite(1);
  if (left_total != right_total) {
    return FkPlacement{left_total ? Side::Left : Side::Right,
                       PlacementReason::TotalParticipation};
  }
  return FkPlacement{rel.left_entity <= rel.right_entity ? Side::Left : Side::Right,
                     PlacementReason::TieBreak};
}

FkPlacement place_fk_one_to_many(const RelationshipType& rel) {
  return FkPlacement{classify_relationship(rel).one_side, PlacementReason::MaxOneSide};
}

namespace {

const EntityType& entity_on(const ErModel& model, const RelationshipType& rel, Side side) {
  const std::string& name = side == Side::Left ? rel.left_entity : rel.right_entity;
  const EntityType* entity = model.find_entity(name);
  if (entity == nullptr) {
    throw TransformError("relationship '" + rel.name + "' references undeclared entity '" +
                         name + "'");
  }
  return *entity;
}

void add_fk_column(RelationSchema& holder, const EntityType& target, bool nullable,
                   bool in_primary_key) {
  const std::string column = fk_column_name(target);
  if (holder.find_column(column) != nullptr) {
    throw TransformError("foreign key column '" + column + "' collides with an existing column of '" +
                         holder.name + "'");
  }
  holder.columns.push_back(Column{column, ColumnRole::ForeignKey});
  if (in_primary_key) holder.primary_key.push_back(column);
  holder.foreign_keys.push_back(ForeignKey{column, target.name, target.key_attribute, nullable});
}

}  // namespace

RelationSchema transform_many_to_many(const ErModel& model, const RelationshipType& rel) {
  RelationSchema junction;
  junction.name = rel.name;
  add_fk_column(junction, entity_on(model, rel, Side::Left), /*nullable=*/false,
                /*in_primary_key=*/true);
  add_fk_column(junction, entity_on(model, rel, Side::Right), /*nullable=*/false,
                /*in_primary_key=*/true);
  return junction;
}

RelationalSchema transform(const ErModel& model) {
  const auto violations = validate_model(model);
  if (!violations.empty()) {
    throw TransformError("cannot transform invalid model: " + violations.front().message);
  }

  RelationalSchema schema = transform_entities(model);
  for (const auto& rel : model.relationships) {
    const Classification c = classify_relationship(rel);
    if (c.kind == RelationshipClass::ManyToMany) {
      schema.relations.push_back(transform_many_to_many(model, rel));
      schema.relationship_encodings.push_back(
          RelationshipEncoding{rel.name, EncodingKind::JunctionRelation, rel.name});
      continue;
    }
    const FkPlacement placement = c.kind == RelationshipClass::OneToOne
                                      ? place_fk_one_to_one(rel)
                                      : place_fk_one_to_many(rel);
    const EntityType& holder_entity = entity_on(model, rel, placement.holder);
    const EntityType& target_entity = entity_on(model, rel, opposite(placement.holder));
    auto holder = std::find_if(schema.relations.begin(), schema.relations.end(),
                               [&](const RelationSchema& r) { return r.name == holder_entity.name; });
    add_fk_column(*holder, target_entity, /*nullable=*/true, /*in_primary_key=*/false);
    schema.relationship_encodings.push_back(
        RelationshipEncoding{rel.name, EncodingKind::FkInRelation, holder_entity.name});
  }
  return schema;
}

namespace {

int column_index(const RelationSchema& rel, std::string_view column) {
  for (size_t i = 0; i < rel.columns.size(); ++i) {
    if (rel.columns[i].name == column) return static_cast<int>(i);
  }
  return -1;
}

// Compares relation r_a against r_b positionally under a candidate relation
// mapping; -1 in `mapping` means "not decided yet", in which case FK targets
// are rechecked once the full mapping is known.
bool relations_compatible(const RelationalSchema& a, const RelationalSchema& b, size_t ia,
                          size_t ib, const std::vector<int>& mapping) {
  const RelationSchema& ra = a.relations[ia];
  const RelationSchema& rb = b.relations[ib];
  if (ra.columns.size() != rb.columns.size()) return false;
  if (ra.primary_key.size() != rb.primary_key.size()) return false;
  if (ra.foreign_keys.size() != rb.foreign_keys.size()) return false;
  for (size_t i = 0; i < ra.columns.size(); ++i) {
    const Column& ca = ra.columns[i];
    const Column& cb = rb.columns[i];
    if (ca.role != cb.role) return false;
    if (ra.in_primary_key(ca.name) != rb.in_primary_key(cb.name)) return false;
    const ForeignKey* fa = ra.foreign_key_for(ca.name);
    const ForeignKey* fb = rb.foreign_key_for(cb.name);
    if ((fa == nullptr) != (fb == nullptr)) return false;
    if (fa == nullptr) continue;
    if (fa->nullable != fb->nullable) return false;
    const RelationSchema* ta = a.find_relation(fa->target_relation);
    const RelationSchema* tb = b.find_relation(fb->target_relation);
    if (ta == nullptr || tb == nullptr) return false;
    if (column_index(*ta, fa->target_column) != column_index(*tb, fb->target_column)) {
      return false;
    }
    const auto index_of = [](const RelationalSchema& s, const RelationSchema* r) {
      return static_cast<int>(r - s.relations.data());
    };
    const int target_a = index_of(a, ta);
    const int target_b = index_of(b, tb);
    if (mapping[target_a] != -1 && mapping[target_a] != target_b) return false;
  }
  return true;
}

bool match_relations(const RelationalSchema& a, const RelationalSchema& b, size_t next,
                     std::vector<int>& mapping, std::vector<bool>& used) {
  if (next == a.relations.size()) {
    // Recheck FK targets now that the mapping is total.
    for (size_t ia = 0; ia < a.relations.size(); ++ia) {
      if (!relations_compatible(a, b, ia, static_cast<size_t>(mapping[ia]), mapping)) {
        return false;
      }
    }
    return true;
  }
  for (size_t ib = 0; ib < b.relations.size(); ++ib) {
    if (used[ib]) continue;
    if (!relations_compatible(a, b, next, ib, mapping)) continue;
    mapping[next] = static_cast<int>(ib);
    used[ib] = true;
    if (match_relations(a, b, next + 1, mapping, used)) return true;
    mapping[next] = -1;
    used[ib] = false;
  }
  return false;
}

}  // namespace

bool schema_equal(const RelationalSchema& a, const RelationalSchema& b) {
  if (a.relations.size() != b.relations.size()) return false;
  std::vector<int> mapping(a.relations.size(), -1);
  std::vector<bool> used(b.relations.size(), false);
  return match_relations(a, b, 0, mapping, used);
}

}  // namespace er2rel
