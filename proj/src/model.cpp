#include "er2rel/model.hpp"

#include <algorithm>
#include <set>

namespace er2rel {

const EntityType* ErModel::find_entity(std::string_view name) const {
  for (const auto& e : entities) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const RelationshipType* ErModel::find_relationship(std::string_view name) const {
  for (const auto& r : relationships) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Column* RelationSchema::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

const ForeignKey* RelationSchema::foreign_key_for(std::string_view column) const {
  for (const auto& fk : foreign_keys) {
    if (fk.column == column) return &fk;
  }
  return nullptr;
}

bool RelationSchema::in_primary_key(std::string_view column) const {
  return std::find(primary_key.begin(), primary_key.end(), column) != primary_key.end();
}

const RelationSchema* RelationalSchema::find_relation(std::string_view name) const {
  for (const auto& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const RelationshipEncoding* RelationalSchema::encoding_for(std::string_view relationship) const {
  for (const auto& e : relationship_encodings) {
    if (e.relationship == relationship) return &e;
  }
  return nullptr;
}

std::string_view column_role_key(ColumnRole role) {
  switch (role) {
    case ColumnRole::Key: return "key";
    case ColumnRole::Plain: return "plain";
    case ColumnRole::ForeignKey: return "foreign_key";
  }
  return "plain";
}

std::string_view encoding_kind_key(EncodingKind kind) {
  return kind == EncodingKind::FkInRelation ? "fk_in_relation" : "junction_relation";
}

bool has_violation(const std::vector<Violation>& violations, std::string_view code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

namespace {

void report(std::vector<Violation>& out, std::string_view code, std::string element,
            std::string detail, std::string message) {
  out.push_back(Violation{std::string(code), std::move(element), std::move(detail),
                          std::move(message)});
}

void check_constraint(std::vector<Violation>& out, const RelationshipType& rel, Side side) {
  const StructuralConstraint& c =
      side == Side::Left ? rel.left_constraint : rel.right_constraint;
  const std::string side_str(side_name(side));
  if (c.min.is_unbounded()) {
    report(out, codes::kMinUnbounded, rel.name, side_str,
           "relationship '" + rel.name + "': " + side_str + " min must be a finite value");
  }
  if (c.max.is_finite() && c.max.value() < 1) {
    report(out, codes::kMaxBelowOne, rel.name, side_str,
           "relationship '" + rel.name + "': " + side_str + " max must be at least 1");
  }
  // Only meaningful once both bounds are individually in range.
  if (c.min.is_finite() && (c.max.is_unbounded() || c.max.value() >= 1) && c.max < c.min) {
    report(out, codes::kMinExceedsMax, rel.name, side_str,
           "relationship '" + rel.name + "': " + side_str + " min " + c.min.to_string() +
               " exceeds max " + c.max.to_string());
  }
}

}  // namespace

std::vector<Violation> validate_model(const ErModel& model) {
  std::vector<Violation> out;

  std::set<std::string> entity_names;
  std::set<std::string> entity_dups;
  for (const auto& entity : model.entities) {
    if (entity.name.empty()) {
      report(out, codes::kEmptyName, "", "entity", "entity with empty name");
    } else if (!entity_names.insert(entity.name).second &&
               entity_dups.insert(entity.name).second) {
      report(out, codes::kDuplicateEntity, entity.name, "",
             "entity '" + entity.name + "' declared more than once");
    }

    if (entity.key_attribute.empty()) {
      report(out, codes::kEmptyName, entity.name, "key",
             "entity '" + entity.name + "' has an empty key attribute");
    }
    std::set<std::string> attr_names;
    std::set<std::string> attr_dups;
    for (const auto& attr : entity.attributes) {
      if (attr.empty()) {
        report(out, codes::kEmptyName, entity.name, "attribute",
               "entity '" + entity.name + "' has an empty attribute name");
        continue;
      }
      if (attr == entity.key_attribute) {
        report(out, codes::kKeyInAttributes, entity.name, attr,
               "entity '" + entity.name + "': key attribute '" + attr +
                   "' repeated in the attribute list");
      } else if (!attr_names.insert(attr).second && attr_dups.insert(attr).second) {
        report(out, codes::kDuplicateAttribute, entity.name, attr,
               "entity '" + entity.name + "': attribute '" + attr + "' declared more than once");
      }
    }
  }

  std::set<std::string> rel_names;
  std::set<std::string> rel_dups;
  for (const auto& rel : model.relationships) {
    if (rel.name.empty()) {
      report(out, codes::kEmptyName, "", "relationship", "relationship with empty name");
    } else {
      if (!rel_names.insert(rel.name).second && rel_dups.insert(rel.name).second) {
        report(out, codes::kDuplicateRelationship, rel.name, "",
               "relationship '" + rel.name + "' declared more than once");
      }
      if (entity_names.count(rel.name) != 0) {
        report(out, codes::kNameClash, rel.name, "",
               "name '" + rel.name + "' used for both an entity and a relationship");
      }
    }

    for (Side side : {Side::Left, Side::Right}) {
      const std::string& entity =
          side == Side::Left ? rel.left_entity : rel.right_entity;
      if (model.find_entity(entity) == nullptr) {
        report(out, codes::kUnknownEntity, rel.name, entity,
               "relationship '" + rel.name + "' references undeclared entity '" + entity + "'");
      }
    }
    if (!rel.left_entity.empty() && rel.left_entity == rel.right_entity) {
      report(out, codes::kSelfRelationship, rel.name, rel.left_entity,
             "relationship '" + rel.name + "' relates entity '" + rel.left_entity +
                 "' to itself; only relationships between distinct entities are supported");
    }
    check_constraint(out, rel, Side::Left);
    check_constraint(out, rel, Side::Right);
  }

  return out;
}

std::vector<Violation> schema_violations(const RelationalSchema& schema) {
  std::vector<Violation> out;

  for (const auto& rel : schema.relations) {
    if (rel.name.empty()) {
      report(out, codes::kEmptyName, "", "relation", "relation with empty name");
    }
    std::set<std::string> column_names;
    for (const auto& col : rel.columns) {
      if (col.name.empty()) {
        report(out, codes::kEmptyName, rel.name, "column",
               "relation '" + rel.name + "' has an empty column name");
      } else if (!column_names.insert(col.name).second) {
        report(out, codes::kDuplicateAttribute, rel.name, col.name,
               "relation '" + rel.name + "': duplicate column '" + col.name + "'");
      }
    }
    if (rel.primary_key.empty()) {
      report(out, codes::kMissingPkColumn, rel.name, "",
             "relation '" + rel.name + "' has no primary key");
    }
    for (const auto& pk : rel.primary_key) {
      if (rel.find_column(pk) == nullptr) {
        report(out, codes::kMissingPkColumn, rel.name, pk,
               "relation '" + rel.name + "': primary key column '" + pk + "' not declared");
      }
      const ForeignKey* fk = rel.foreign_key_for(pk);
      if (fk != nullptr && fk->nullable) {
        report(out, codes::kNullablePkColumn, rel.name, pk,
               "relation '" + rel.name + "': primary key column '" + pk + "' is nullable");
      }
    }
    for (const auto& fk : rel.foreign_keys) {
      const Column* col = rel.find_column(fk.column);
      if (col == nullptr) {
        report(out, codes::kDanglingForeignKey, rel.name, fk.column,
               "relation '" + rel.name + "': foreign key on undeclared column '" + fk.column +
                   "'");
        continue;
      }
      if (col->role != ColumnRole::ForeignKey) {
        report(out, codes::kForeignKeyRoleMismatch, rel.name, fk.column,
               "relation '" + rel.name + "': column '" + fk.column +
                   "' carries a foreign key but is not marked as one");
      }
      const RelationSchema* target = schema.find_relation(fk.target_relation);
      if (target == nullptr || target->find_column(fk.target_column) == nullptr) {
        report(out, codes::kDanglingForeignKey, rel.name, fk.column,
               "relation '" + rel.name + "': foreign key targets missing '" +
                   fk.target_relation + "." + fk.target_column + "'");
      } else if (target->primary_key != std::vector<std::string>{fk.target_column}) {
        report(out, codes::kDanglingForeignKey, rel.name, fk.column,
               "relation '" + rel.name + "': foreign key target '" + fk.target_relation + "." +
                   fk.target_column + "' is not that relation's primary key");
      }
    }
  }

  for (const auto& enc : schema.relationship_encodings) {
    const RelationSchema* rel = schema.find_relation(enc.relation);
    if (rel == nullptr) {
      report(out, codes::kMissingEncoding, enc.relationship, enc.relation,
             "relationship '" + enc.relationship + "' encoded by missing relation '" +
                 enc.relation + "'");
    }
  }

  return out;
}

Side opposite(Side side) { return side == Side::Left ? Side::Right : Side::Left; }

std::string_view side_name(Side side) { return side == Side::Left ? "left" : "right"; }

Classification classify_relationship(const RelationshipType& rel) {
  const bool left_many = rel.left_constraint.max.exceeds_one();
  const bool right_many = rel.right_constraint.max.exceeds_one();
  if (!left_many && !right_many) {
    return Classification{RelationshipClass::OneToOne, Side::Left};
  }
  if (left_many && right_many) {
    return Classification{RelationshipClass::ManyToMany, Side::Left};
  }
  return Classification{RelationshipClass::OneToMany,
                        left_many ? Side::Right : Side::Left};
}

std::string_view classification_key(RelationshipClass kind) {
  switch (kind) {
    case RelationshipClass::OneToOne: return "one-to-one";
    case RelationshipClass::OneToMany: return "one-to-many";
    case RelationshipClass::ManyToMany: return "many-to-many";
  }
  return "one-to-one";
}

std::string classification_text(const Classification& c) {
  std::string text(classification_key(c.kind));
  if (c.kind == RelationshipClass::OneToMany) {
    text += c.one_side == Side::Left ? " (one side: left)" : " (one side: right)";
  }
  return text;
}

std::string_view slot_name(ConstraintSlot slot) {
  switch (slot) {
    case ConstraintSlot::LeftMin: return "left min";
    case ConstraintSlot::LeftMax: return "left max";
    case ConstraintSlot::RightMin: return "right min";
    case ConstraintSlot::RightMax: return "right max";
  }
  return "left min";
}

std::string_view slot_key(ConstraintSlot slot) {
  switch (slot) {
    case ConstraintSlot::LeftMin: return "left_min";
    case ConstraintSlot::LeftMax: return "left_max";
    case ConstraintSlot::RightMin: return "right_min";
    case ConstraintSlot::RightMax: return "right_max";
  }
  return "left_min";
}

Side slot_side(ConstraintSlot slot) {
  return (slot == ConstraintSlot::LeftMin || slot == ConstraintSlot::LeftMax) ? Side::Left
                                                                              : Side::Right;
}

bool slot_is_max(ConstraintSlot slot) {
  return slot == ConstraintSlot::LeftMax || slot == ConstraintSlot::RightMax;
}

std::array<SlotValue, 4> constraint_slots(const RelationshipType& rel) {
  return {SlotValue{ConstraintSlot::LeftMin, rel.left_constraint.min},
          SlotValue{ConstraintSlot::LeftMax, rel.left_constraint.max},
          SlotValue{ConstraintSlot::RightMin, rel.right_constraint.min},
          SlotValue{ConstraintSlot::RightMax, rel.right_constraint.max}};
}

}  // namespace er2rel
