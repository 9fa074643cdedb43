#include "er2rel/analysis.hpp"

namespace er2rel {

std::string_view verdict_kind_key(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Exact: return "exact";
    case VerdictKind::LowerBoundOnly: return "lower_bound_only";
    case VerdictKind::NotRepresented: return "not_represented";
  }
  return "not_represented";
}

std::string_view verdict_kind_text(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Exact: return "exact";
    case VerdictKind::LowerBoundOnly: return "lower bound only";
    case VerdictKind::NotRepresented: return "not represented";
  }
  return "not represented";
}

std::string_view justification_key(Justification j) {
  switch (j) {
    case Justification::Case1A: return "Case1A";
    case Justification::Case1B: return "Case1B";
    case Justification::Case1C: return "Case1C";
    case Justification::Case1D: return "Case1D";
    case Justification::Case2: return "Case2";
    case Justification::Case3Max: return "Case3Max";
    case Justification::Case3Min: return "Case3Min";
  }
  return "Case1A";
}

namespace {

SlotVerdict fk_slot_verdict(const SlotValue& sv, Side holder, const std::string& holder_name,
                            const std::string& target_name, const std::string& fk_column) {
  SlotVerdict v;
  v.slot = sv.slot;
  v.declared = sv.value;
  const std::string fk_ref = holder_name + "." + fk_column;
  if (slot_side(sv.slot) == holder) {
    if (slot_is_max(sv.slot)) {
      v.kind = VerdictKind::Exact;
      v.bound = Cardinality::finite(1);
      v.justification = Justification::Case1A;
      v.explanation = "the single-valued column " + fk_ref + " stores at most one " +
                      target_name + " reference per row";
    } else {
      v.kind = VerdictKind::NotRepresented;
      v.justification = Justification::Case1B;
      v.explanation = "column " + fk_ref + " is nullable, so " + holder_name +
                      " rows may not participate at all";
    }
  } else {
    if (slot_is_max(sv.slot)) {
      v.kind = VerdictKind::NotRepresented;
      v.justification = Justification::Case1C;
      v.explanation = "nothing bounds or records how many " + holder_name +
                      " rows may reference one " + target_name + " row";
    } else {
      v.kind = VerdictKind::NotRepresented;
      v.justification = Justification::Case1D;
      v.explanation = "no constraint forces every " + target_name +
                      " row to be referenced from " + fk_ref;
    }
  }
  return v;
}

SlotVerdict junction_slot_verdict(const SlotValue& sv, const std::string& junction_name,
                                  const std::string& entity_name) {
  SlotVerdict v;
  v.slot = sv.slot;
  v.declared = sv.value;
  if (slot_is_max(sv.slot)) {
    v.kind = VerdictKind::LowerBoundOnly;
    v.bound = Cardinality::finite(1);
    v.justification = Justification::Case3Max;
    v.explanation = "junction relation " + junction_name + " admits any number of rows per " +
                    entity_name + " key; the encoding only witnesses a bound above 1";
  } else {
    v.kind = VerdictKind::NotRepresented;
    v.justification = Justification::Case3Min;
    v.explanation = entity_name + " rows need not appear in junction relation " + junction_name;
  }
  return v;
}

}  // namespace

PreservationReport analyze(const ErModel& model) {
  PreservationReport report;
  report.schema = transform(model);

  for (const auto& rel : model.relationships) {
    RelationshipReport rr;
    rr.relationship = rel.name;
    rr.classification = classify_relationship(rel);
    rr.encoding = *report.schema.encoding_for(rel.name);

    const auto slots = constraint_slots(rel);
    if (rr.classification.kind == RelationshipClass::ManyToMany) {
      for (size_t i = 0; i < slots.size(); ++i) {
        const std::string& entity =
            slot_side(slots[i].slot) == Side::Left ? rel.left_entity : rel.right_entity;
        rr.verdicts[i] = junction_slot_verdict(slots[i], rel.name, entity);
      }
    } else {
      const FkPlacement placement = rr.classification.kind == RelationshipClass::OneToOne
                                        ? place_fk_one_to_one(rel)
                                        : place_fk_one_to_many(rel);
      rr.placement = placement;
      const std::string& holder_name =
          placement.holder == Side::Left ? rel.left_entity : rel.right_entity;
      const std::string& target_name =
          placement.holder == Side::Left ? rel.right_entity : rel.left_entity;
      const std::string fk_column = fk_column_name(*model.find_entity(target_name));
      for (size_t i = 0; i < slots.size(); ++i) {
        rr.verdicts[i] =
            fk_slot_verdict(slots[i], placement.holder, holder_name, target_name, fk_column);
      }
    }
    report.relationships.push_back(std::move(rr));
  }
  return report;
}

ModelSummary summarize(const PreservationReport& report) {
  ModelSummary s;
  s.relationship_count = static_cast<int>(report.relationships.size());
  for (const auto& rr : report.relationships) {
    for (const auto& v : rr.verdicts) {
      switch (v.kind) {
        case VerdictKind::Exact: ++s.exact; break;
        case VerdictKind::LowerBoundOnly: ++s.lower_bound_only; break;
        case VerdictKind::NotRepresented: ++s.not_represented; break;
      }
    }
  }
  return s;
}

}  // namespace er2rel
