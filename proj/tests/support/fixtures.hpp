#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "er2rel/model.hpp"
#include "er2rel/oracle.hpp"

namespace fixtures {

using namespace er2rel;

// ---------------------------------------------------------------------------
// Worked examples. The same entity pair is used throughout: E carries two
// non-key attributes and S one, so the two relations stay distinguishable
// under renaming.
// ---------------------------------------------------------------------------

inline EntityType entity_e() { return EntityType{"E", "Ke", {"A1", "A2"}}; }
inline EntityType entity_s() { return EntityType{"S", "Ks", {"B1"}}; }

inline ErModel pair_model(StructuralConstraint left, StructuralConstraint right) {
  ErModel model;
  model.entities = {entity_e(), entity_s()};
  model.relationships = {RelationshipType{"R", "E", "S", left, right}};
  return model;
}

inline Cardinality fin(int k) { return Cardinality::finite(k); }
inline Cardinality unb() { return Cardinality::unbounded(); }

/// 1:1, E total: E (1,1), S (0,1). FK lands in E.
inline ErModel one_to_one_model() {
  return pair_model({fin(1), fin(1)}, {fin(0), fin(1)});
}

/// 1:1 mirrored, S total: E (0,1), S (1,1). FK lands in S.
inline ErModel one_to_one_mirrored_model() {
  return pair_model({fin(0), fin(1)}, {fin(1), fin(1)});
}

/// 1:N with E on the one side: E (1,1), S (0,N). FK lands in E; the
/// resulting schema is indistinguishable from the 1:1 one.
inline ErModel one_to_many_model() {
  return pair_model({fin(1), fin(1)}, {fin(0), unb()});
}

/// M:N: E (1,N), S (0,N). Encoded by a junction relation.
inline ErModel many_to_many_model() {
  return pair_model({fin(1), unb()}, {fin(0), unb()});
}

inline std::string one_to_one_source() {
  return "entity E {\n"
         "  key Ke;\n"
         "  attr A1;\n"
         "  attr A2;\n"
         "}\n"
         "\n"
         "entity S {\n"
         "  key Ks;\n"
         "  attr B1;\n"
         "}\n"
         "\n"
         "relationship R between E (min 1, max 1) and S (min 0, max 1);\n";
}

inline std::string many_to_many_source() {
  return "entity E { key Ke; attr A1; attr A2; }\n"
         "entity S { key Ks; attr B1; }\n"
         "relationship R between E (min 1, max N) and S (min 0, max N);\n";
}

// ---------------------------------------------------------------------------
// Hand-built schemas in the textbook shape, where the FK column simply
// reuses the referenced key's name. transform() instead generates prefixed
// FK columns (S_Ks), which these fixtures deliberately do not use.
// ---------------------------------------------------------------------------

/// E[Ke*, A1, A2, Ks->S.Ks?], S[Ks*, B1]
inline RelationalSchema textbook_one_to_one_schema() {
  RelationalSchema schema;
  RelationSchema e;
  e.name = "E";
  e.columns = {{"Ke", ColumnRole::Key},
               {"A1", ColumnRole::Plain},
               {"A2", ColumnRole::Plain},
               {"Ks", ColumnRole::ForeignKey}};
  e.primary_key = {"Ke"};
  e.foreign_keys = {{"Ks", "S", "Ks", true}};
  RelationSchema s;
  s.name = "S";
  s.columns = {{"Ks", ColumnRole::Key}, {"B1", ColumnRole::Plain}};
  s.primary_key = {"Ks"};
  schema.relations = {e, s};
  schema.relationship_encodings = {{"R", EncodingKind::FkInRelation, "E"}};
  return schema;
}

/// E[Ke*, A1, A2], S[Ks*, B1], R[Ke*->E.Ke, Ks*->S.Ks]
inline RelationalSchema textbook_many_to_many_schema() {
  RelationalSchema schema;
  RelationSchema e;
  e.name = "E";
  e.columns = {{"Ke", ColumnRole::Key}, {"A1", ColumnRole::Plain}, {"A2", ColumnRole::Plain}};
  e.primary_key = {"Ke"};
  RelationSchema s;
  s.name = "S";
  s.columns = {{"Ks", ColumnRole::Key}, {"B1", ColumnRole::Plain}};
  s.primary_key = {"Ks"};
  RelationSchema r;
  r.name = "R";
  r.columns = {{"Ke", ColumnRole::ForeignKey}, {"Ks", ColumnRole::ForeignKey}};
  r.primary_key = {"Ke", "Ks"};
  r.foreign_keys = {{"Ke", "E", "Ke", false}, {"Ks", "S", "Ks", false}};
  schema.relations = {e, s, r};
  schema.relationship_encodings = {{"R", EncodingKind::JunctionRelation, "R"}};
  return schema;
}

// ---------------------------------------------------------------------------
// Deterministic random models
// ---------------------------------------------------------------------------

class ModelGenerator {
 public:
  explicit ModelGenerator(unsigned seed) : rng_(seed) {}

  /// A valid model: 2..4 entities, 1..3 relationships over distinct entity
  /// pairs, constraints spanning all three relationship classes.
  ErModel next() {
    ErModel model;
    const int entity_count = pick(2, 4);
    for (int i = 0; i < entity_count; ++i) {
      EntityType entity;
      entity.name = "E" + std::to_string(i);
      entity.key_attribute = "K" + std::to_string(i);
      const int attrs = pick(0, 3);
      for (int a = 0; a < attrs; ++a) {
        entity.attributes.push_back("A" + std::to_string(i) + "_" + std::to_string(a));
      }
      model.entities.push_back(std::move(entity));
    }

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < entity_count; ++i) {
      for (int j = i + 1; j < entity_count; ++j) pairs.emplace_back(i, j);
    }
    std::shuffle(pairs.begin(), pairs.end(), rng_);
    const int rel_count = std::min<int>(pick(1, 3), static_cast<int>(pairs.size()));
    for (int r = 0; r < rel_count; ++r) {
      RelationshipType rel;
      rel.name = "R" + std::to_string(r);
      rel.left_entity = model.entities[pairs[r].first].name;
      rel.right_entity = model.entities[pairs[r].second].name;
      rel.left_constraint = random_constraint();
      rel.right_constraint = random_constraint();
      model.relationships.push_back(std::move(rel));
    }
    return model;
  }

  StructuralConstraint random_constraint() {
    static const std::vector<Cardinality> maxes = {fin(1), fin(2), fin(3), unb()};
    const Cardinality max = maxes[pick(0, 3)];
    std::vector<Cardinality> mins = {fin(0), fin(1)};
    if (max.exceeds_one()) mins.push_back(fin(2));
    Cardinality min = mins[pick(0, static_cast<int>(mins.size()) - 1)];
    while (max < min) min = mins[pick(0, static_cast<int>(mins.size()) - 1)];
    return StructuralConstraint{min, max};
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937 rng_;
};

// ---------------------------------------------------------------------------
// Independent instance validity check (deliberately not sharing code with
// the enumerator): primary keys non-null and unique, foreign keys resolve,
// junction columns non-null.
// ---------------------------------------------------------------------------

inline std::vector<std::string> instance_problems(const RelationalSchema& schema,
                                                  const Instance& instance) {
  std::vector<std::string> problems;
  const auto column_at = [](const RelationInstance& ri, const std::string& name) {
    for (size_t j = 0; j < ri.columns.size(); ++j) {
      if (ri.columns[j] == name) return static_cast<int>(j);
    }
    return -1;
  };

  for (const auto& ri : instance.relations) {
    const RelationSchema* rel = schema.find_relation(ri.relation);
    if (rel == nullptr) {
      problems.push_back("relation " + ri.relation + " not in schema");
      continue;
    }
    std::set<std::string> pk_tuples;
    for (const auto& row : ri.rows) {
      if (row.values.size() != ri.columns.size()) {
        problems.push_back(ri.relation + ": row width mismatch");
        continue;
      }
      std::string pk_tuple;
      for (const auto& pk : rel->primary_key) {
        const int j = column_at(ri, pk);
        if (j < 0) {
          problems.push_back(ri.relation + ": primary key column " + pk + " missing");
          continue;
        }
        if (!row.values[j]) {
          problems.push_back(ri.relation + ": null primary key component " + pk);
          continue;
        }
        pk_tuple += *row.values[j] + "|";
      }
      if (!pk_tuple.empty() && !pk_tuples.insert(pk_tuple).second) {
        problems.push_back(ri.relation + ": duplicate primary key " + pk_tuple);
      }
      for (size_t j = 0; j < ri.columns.size(); ++j) {
        const ForeignKey* fk = rel->foreign_key_for(ri.columns[j]);
        if (fk == nullptr) continue;
        if (!row.values[j]) {
          if (!fk->nullable) {
            problems.push_back(ri.relation + ": null value in non-nullable FK " + ri.columns[j]);
          }
          continue;
        }
        const RelationInstance* target = instance.find(fk->target_relation);
        bool found = false;
        if (target != nullptr) {
          const int tj = column_at(*target, fk->target_column);
          for (const auto& trow : target->rows) {
            if (tj >= 0 && trow.values[tj] && *trow.values[tj] == *row.values[j]) {
              found = true;
              break;
            }
          }
        }
        if (!found) {
          problems.push_back(ri.relation + ": dangling FK value " + *row.values[j] + " in " +
                             ri.columns[j]);
        }
      }
    }
  }
  return problems;
}

}  // namespace fixtures
